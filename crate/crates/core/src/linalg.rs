//! Exact linear algebra over ℚ and GF(p).
//!
//! Everything is tolerance-free: rationals are arbitrary-precision fractions in
//! lowest terms, prime-field scalars are residues in `[0, p)`. Pivoting picks
//! the first nonzero entry of each column, so every routine is deterministic.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("linear system has no solution")]
    NoSolution,
    #[error("matrix is not a unit")]
    NotAUnit,
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
}

/// Scalar arithmetic of an exact field.
pub trait Field: Clone + fmt::Debug + PartialEq + Send + Sync {
    type Scalar: Clone + PartialEq + Eq + fmt::Debug + Send + Sync;

    fn zero(&self) -> Self::Scalar;
    fn one(&self) -> Self::Scalar;
    fn add(&self, a: &Self::Scalar, b: &Self::Scalar) -> Self::Scalar;
    fn neg(&self, a: &Self::Scalar) -> Self::Scalar;
    fn mul(&self, a: &Self::Scalar, b: &Self::Scalar) -> Self::Scalar;
    /// Multiplicative inverse, `None` for zero.
    fn inv(&self, a: &Self::Scalar) -> Option<Self::Scalar>;
    fn is_zero(&self, a: &Self::Scalar) -> bool;

    fn sub(&self, a: &Self::Scalar, b: &Self::Scalar) -> Self::Scalar {
        self.add(a, &self.neg(b))
    }
}

/// The rational numbers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Rationals;

impl Field for Rationals {
    type Scalar = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        (!a.is_zero()).then(|| a.recip())
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
}

/// GF(p) for a prime `p`. Primality is the caller's responsibility; the ring
/// layer validates it before building one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Self {
        debug_assert!(p >= 2);
        PrimeField { p }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }
}

impl Field for PrimeField {
    type Scalar = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 + *b as u128) % self.p as u128) as u64
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.p as u128) as u64
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        mod_inverse(*a, self.p)
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
}

/// Inverse of `a` modulo `n` via the extended Euclidean algorithm.
pub fn mod_inverse(a: u64, n: u64) -> Option<u64> {
    let g = BigInt::from(a).extended_gcd(&BigInt::from(n));
    if !g.gcd.is_one() {
        return None;
    }
    let n_big = BigInt::from(n);
    let x = g.x.mod_floor(&n_big);
    u64::try_from(x).ok()
}

/// Dense row-major matrix over an exact field.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldMatrix<F: Field> {
    field: F,
    rows: usize,
    cols: usize,
    data: Vec<F::Scalar>,
}

impl<F: Field> fmt::Debug for FieldMatrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<&[F::Scalar]> = self.data.chunks(self.cols.max(1)).collect();
        f.debug_struct("FieldMatrix")
            .field("field", &self.field)
            .field("rows", &rows)
            .finish()
    }
}

/// Output of [`FieldMatrix::rref`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rref<F: Field> {
    pub matrix: FieldMatrix<F>,
    pub pivots: Vec<usize>,
    pub rank: usize,
}

impl<F: Field> FieldMatrix<F> {
    /// Builds a matrix from row-major entries. Panics if the length is wrong.
    pub fn from_vec(field: F, rows: usize, cols: usize, data: Vec<F::Scalar>) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count does not match {rows}x{cols}");
        FieldMatrix { field, rows, cols, data }
    }

    pub fn from_rows(field: F, rows: Vec<Vec<F::Scalar>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        let data = rows.into_iter().flatten().collect();
        Self::from_vec(field, r, c, data)
    }

    pub fn zeros(field: F, rows: usize, cols: usize) -> Self {
        let data = vec![field.zero(); rows * cols];
        FieldMatrix { field, rows, cols, data }
    }

    pub fn identity(field: F, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = m.field.one();
        }
        m
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[F::Scalar] {
        &self.data
    }

    pub fn into_entries(self) -> Vec<F::Scalar> {
        self.data
    }

    pub fn get(&self, r: usize, c: usize) -> &F::Scalar {
        &self.data[r * self.cols + c]
    }

    fn set(&mut self, r: usize, c: usize, v: F::Scalar) {
        self.data[r * self.cols + c] = v;
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| self.field.is_zero(x))
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.field.clone(), self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self, LinalgError> {
        if self.cols != rhs.rows {
            return Err(LinalgError::ShapeMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let f = &self.field;
        let mut out = Self::zeros(f.clone(), self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let aik = self.get(i, k);
                if f.is_zero(aik) {
                    continue;
                }
                for j in 0..rhs.cols {
                    let acc = f.add(out.get(i, j), &f.mul(aik, rhs.get(k, j)));
                    out.set(i, j, acc);
                }
            }
        }
        Ok(out)
    }

    fn hcat(&self, rhs: &Self) -> Self {
        debug_assert_eq!(self.rows, rhs.rows);
        let cols = self.cols + rhs.cols;
        let mut data = Vec::with_capacity(self.rows * cols);
        for r in 0..self.rows {
            data.extend_from_slice(&self.data[r * self.cols..(r + 1) * self.cols]);
            data.extend_from_slice(&rhs.data[r * rhs.cols..(r + 1) * rhs.cols]);
        }
        Self::from_vec(self.field.clone(), self.rows, cols, data)
    }

    fn columns(&self, range: std::ops::Range<usize>) -> Self {
        let cols = range.len();
        let mut data = Vec::with_capacity(self.rows * cols);
        for r in 0..self.rows {
            data.extend_from_slice(&self.data[r * self.cols + range.start..r * self.cols + range.end]);
        }
        Self::from_vec(self.field.clone(), self.rows, cols, data)
    }

    /// In-place Gauss-Jordan elimination restricted to the first `limit`
    /// columns. Returns the pivot columns.
    fn eliminate(&mut self, limit: usize) -> Vec<usize> {
        let f = self.field.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..limit {
            if row == self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&r| !f.is_zero(self.get(r, col))) else {
                continue;
            };
            if p != row {
                for c in 0..self.cols {
                    self.data.swap(p * self.cols + c, row * self.cols + c);
                }
            }
            let inv = f.inv(self.get(row, col)).expect("pivot is nonzero");
            for c in 0..self.cols {
                let v = f.mul(self.get(row, c), &inv);
                self.set(row, c, v);
            }
            for r in 0..self.rows {
                if r == row {
                    continue;
                }
                let factor = self.get(r, col).clone();
                if f.is_zero(&factor) {
                    continue;
                }
                for c in 0..self.cols {
                    let v = f.sub(self.get(r, c), &f.mul(&factor, self.get(row, c)));
                    self.set(r, c, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    /// Reduced row-echelon form with pivot columns and rank.
    pub fn rref(&self) -> Rref<F> {
        let mut m = self.clone();
        let pivots = m.eliminate(self.cols);
        Rref { rank: pivots.len(), matrix: m, pivots }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Some `X` with `self · X = b`; free variables are set to zero.
    pub fn solve_right(&self, b: &Self) -> Result<Self, LinalgError> {
        if self.rows != b.rows {
            return Err(LinalgError::ShapeMismatch(format!(
                "solve_right: lhs has {} rows, rhs has {}",
                self.rows, b.rows
            )));
        }
        let mut aug = self.hcat(b);
        let pivots = aug.eliminate(self.cols);
        let f = &self.field;
        for r in pivots.len()..aug.rows {
            if (self.cols..aug.cols).any(|c| !f.is_zero(aug.get(r, c))) {
                return Err(LinalgError::NoSolution);
            }
        }
        let mut x = Self::zeros(f.clone(), self.cols, b.cols);
        for (i, &p) in pivots.iter().enumerate() {
            for c in 0..b.cols {
                x.set(p, c, aug.get(i, self.cols + c).clone());
            }
        }
        Ok(x)
    }

    /// Some `X` with `X · self = b`, via the transposed system.
    pub fn solve_left(&self, b: &Self) -> Result<Self, LinalgError> {
        if self.cols != b.cols {
            return Err(LinalgError::ShapeMismatch(format!(
                "solve_left: lhs has {} columns, rhs has {}",
                self.cols, b.cols
            )));
        }
        Ok(self.transpose().solve_right(&b.transpose())?.transpose())
    }

    /// Two-sided inverse of a square matrix.
    pub fn invert_unit(&self) -> Result<Self, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        let mut aug = self.hcat(&Self::identity(self.field.clone(), n));
        let pivots = aug.eliminate(n);
        if pivots.len() < n {
            return Err(LinalgError::NotAUnit);
        }
        Ok(aug.columns(n..2 * n))
    }

    /// An inner inverse `g` with `self · g · self = self`.
    ///
    /// Reduce `[A | I]` to `[R | E]` so that `E·A = R`. With `P` the
    /// cols×rows matrix sending row `i` of `R` to its pivot column, `g = P·E`
    /// works: column `j` of `A` equals `Σ_i R[i][j] · A[:, pivot_i]`.
    pub fn one_inverse(&self) -> Self {
        let f = self.field.clone();
        let mut aug = self.hcat(&Self::identity(f.clone(), self.rows));
        let pivots = aug.eliminate(self.cols);
        let e = aug.columns(self.cols..self.cols + self.rows);
        let mut g = Self::zeros(f, self.cols, self.rows);
        for (i, &p) in pivots.iter().enumerate() {
            for c in 0..self.rows {
                g.set(p, c, e.get(i, c).clone());
            }
        }
        g
    }
}

impl FieldMatrix<Rationals> {
    /// Convenience constructor from integer rows.
    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            Rationals,
            rows.iter()
                .map(|r| r.iter().map(|&v| BigRational::from_integer(v.into())).collect())
                .collect(),
        )
    }
}
