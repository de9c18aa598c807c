//! Rings with involution.
//!
//! A [`Ring`] is a validated handle built from a [`RingDescriptor`]. Four
//! families are supported: Z_n, square matrices over ℚ or GF(p), square
//! matrices over Z_n, and small rings given by explicit Cayley tables. Finite
//! rings are enumerated in a fixed canonical order (residues ascending,
//! matrices row-major lexicographic, tables by index) and every "first
//! witness" search follows that order.

mod descriptor;
mod element;
mod finite;

use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::linalg::{mod_inverse, FieldMatrix, LinalgError, PrimeField, Rationals};
use crate::par;

pub use descriptor::{FieldSpec, Involution, RingDescriptor, RingKind, TableSpec};
pub use element::Element;
pub use finite::{Finite, TABLE_CACHE_LIMIT};

use element::{parse_matrix, parse_rational, render_matrix, render_rational};
use finite::Tables;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("malformed ring: {0}")]
    MalformedSpec(String),
    #[error("involution laws fail: {0}")]
    InvolutionInvalid(String),
    #[error("identity involution needs a commutative ring: {0}")]
    NotCommutative(String),
    #[error("element does not belong to the ring: {0}")]
    RingMismatch(String),
    #[error("invalid element: {0}")]
    InvalidElement(String),
    #[error("operation needs a finite ring")]
    InfiniteRing,
    #[error("ring has {size} elements, above the exhaustive-scan limit of {limit}")]
    RingTooLarge { size: String, limit: usize },
}

/// Which principal one-sided ideal or annihilator is meant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IdealSide {
    Left,
    Right,
}

/// Size guards for exhaustive work.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest finite ring that may be enumerated.
    pub max_ring_size: usize,
    /// Largest table ring accepted (axioms are checked exhaustively).
    pub table_bound: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_ring_size: 1 << 16, table_bound: 64 }
    }
}

impl Limits {
    /// Defaults, with `GINV_MAX_RING_SIZE` overriding the enumeration guard.
    pub fn from_env() -> Self {
        let mut l = Limits::default();
        if let Some(v) = std::env::var("GINV_MAX_RING_SIZE").ok().and_then(|v| v.trim().parse().ok()) {
            l.max_ring_size = v;
        }
        l
    }
}

#[derive(Debug)]
struct TableArith {
    size: usize,
    add: Vec<usize>,
    mul: Vec<usize>,
    neg: Vec<usize>,
    star: Vec<usize>,
    zero: usize,
    one: usize,
}

#[derive(Debug)]
enum Arith {
    Zmod(u64),
    Rational(usize),
    Modular { n: u64, dim: usize },
    Table(TableArith),
}

struct RingInner {
    desc: RingDescriptor,
    arith: Arith,
    transpose: bool,
    /// Exact size, `None` for ℚ-matrices or sizes beyond `usize`.
    size: Option<usize>,
    limits: Limits,
    tables: OnceLock<Option<Tables>>,
}

/// A validated ring with involution. Cheap to clone; immutable; `Send + Sync`.
#[derive(Clone)]
pub struct Ring {
    inner: Arc<RingInner>,
}

impl std::fmt::Debug for Ring {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Ring({})", self.inner.desc)
    }
}

impl PartialEq for Ring {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner) || self.inner.desc == other.inner.desc
    }
}

/// Validates `desc` with default limits.
pub fn make_ring(desc: RingDescriptor) -> Result<Ring, RingError> {
    Ring::with_limits(desc, Limits::default())
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

fn checked_pow(base: u64, exp: usize) -> Option<usize> {
    let mut acc: usize = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(usize::try_from(base).ok()?)?;
    }
    Some(acc)
}

impl Ring {
    pub fn new(desc: RingDescriptor) -> Result<Ring, RingError> {
        make_ring(desc)
    }

    pub fn with_limits(desc: RingDescriptor, limits: Limits) -> Result<Ring, RingError> {
        let malformed = |m: String| Err(RingError::MalformedSpec(m));
        let too_large = |size: String| RingError::RingTooLarge { size, limit: limits.max_ring_size };
        let (arith, size, transpose) = match &desc.kind {
            RingKind::Zmod { n } => {
                if *n < 2 {
                    return malformed(format!("zmod needs n >= 2, got {n}"));
                }
                if desc.involution != Involution::Identity {
                    return malformed("Z_n only carries the identity involution".into());
                }
                let size = usize::try_from(*n).ok().filter(|&s| s <= limits.max_ring_size);
                let size = size.ok_or_else(|| too_large(n.to_string()))?;
                (Arith::Zmod(*n), Some(size), false)
            }
            RingKind::MatrixField { field, dim } => {
                if *dim == 0 {
                    return malformed("matrix dimension must be positive".into());
                }
                let transpose = Self::matrix_involution(&desc, *dim)?;
                match field {
                    FieldSpec::Rational => (Arith::Rational(*dim), None, transpose),
                    FieldSpec::Gf(p) => {
                        if !is_prime(*p) {
                            return malformed(format!("GF({p}) needs a prime modulus"));
                        }
                        (Arith::Modular { n: *p, dim: *dim }, checked_pow(*p, dim * dim), transpose)
                    }
                }
            }
            RingKind::MatrixZmod { n, dim } => {
                if *n < 2 || *dim == 0 {
                    return malformed(format!("mat:zmod needs n >= 2 and dim >= 1, got n={n}, dim={dim}"));
                }
                let transpose = Self::matrix_involution(&desc, *dim)?;
                let size = checked_pow(*n, dim * dim)
                    .filter(|&s| s <= limits.max_ring_size)
                    .ok_or_else(|| too_large(format!("{n}^{}", dim * dim)))?;
                (Arith::Modular { n: *n, dim: *dim }, Some(size), transpose)
            }
            RingKind::Table(spec) => {
                if spec.size > limits.table_bound {
                    return Err(RingError::RingTooLarge { size: spec.size.to_string(), limit: limits.table_bound });
                }
                let arith = validate_table(spec, desc.involution)?;
                (Arith::Table(arith), Some(spec.size), false)
            }
        };
        Ok(Ring {
            inner: Arc::new(RingInner { desc, arith, transpose, size, limits, tables: OnceLock::new() }),
        })
    }

    fn matrix_involution(desc: &RingDescriptor, dim: usize) -> Result<bool, RingError> {
        match desc.involution {
            Involution::Transpose => Ok(dim > 1),
            Involution::Identity if dim == 1 => Ok(false),
            // E12·E21 = E11 but E21·E12 = E22.
            Involution::Identity => Err(RingError::NotCommutative(format!(
                "{desc}: E12·E21 = E11 differs from E21·E12 = E22"
            ))),
            Involution::ExplicitMap => {
                Err(RingError::MalformedSpec("explicit star maps are only for table rings".into()))
            }
        }
    }

    pub fn descriptor(&self) -> &RingDescriptor {
        &self.inner.desc
    }

    pub fn limits(&self) -> Limits {
        self.inner.limits
    }

    pub fn is_finite(&self) -> bool {
        !matches!(self.inner.arith, Arith::Rational(_))
    }

    /// Number of elements, if finite and representable.
    pub fn size(&self) -> Option<usize> {
        self.inner.size
    }

    /// Matrix dimension for matrix rings.
    pub fn dim(&self) -> Option<usize> {
        match self.inner.arith {
            Arith::Rational(d) | Arith::Modular { dim: d, .. } => Some(d),
            _ => None,
        }
    }

    /// True for matrix rings over a field, where ideal questions are answered
    /// by exact linear algebra.
    pub fn is_field_matrix_ring(&self) -> bool {
        matches!(self.inner.desc.kind, RingKind::MatrixField { .. })
    }

    /// Index view for exhaustive scans.
    pub fn finite(&self) -> Result<Finite<'_>, RingError> {
        if !self.is_finite() {
            return Err(RingError::InfiniteRing);
        }
        let size = self.inner.size.filter(|&s| s <= self.inner.limits.max_ring_size).ok_or_else(|| {
            RingError::RingTooLarge {
                size: self.size_string(),
                limit: self.inner.limits.max_ring_size,
            }
        })?;
        let tables = self
            .inner
            .tables
            .get_or_init(|| (size <= TABLE_CACHE_LIMIT).then(|| Tables::build(self, size)))
            .as_ref();
        Ok(Finite::new(self, size, tables))
    }

    fn size_string(&self) -> String {
        match (&self.inner.size, &self.inner.arith) {
            (Some(s), _) => s.to_string(),
            (None, Arith::Modular { n, dim }) => format!("{n}^{}", dim * dim),
            _ => "infinitely many".into(),
        }
    }

    // ---- membership --------------------------------------------------------

    pub fn contains(&self, e: &Element) -> bool {
        match (&self.inner.arith, e) {
            (Arith::Zmod(n), Element::Residue(r)) => r < n,
            (Arith::Rational(d), Element::Rational(v)) => v.len() == d * d,
            (Arith::Modular { n, dim }, Element::Modular(v)) => v.len() == dim * dim && v.iter().all(|x| x < n),
            (Arith::Table(t), Element::Table(i)) => *i < t.size,
            _ => false,
        }
    }

    pub fn check(&self, e: &Element) -> Result<(), RingError> {
        if self.contains(e) {
            Ok(())
        } else {
            Err(RingError::RingMismatch(format!("{} is not an element of {}", self.describe(e), self.inner.desc)))
        }
    }

    fn describe(&self, e: &Element) -> String {
        match e {
            Element::Residue(r) => format!("residue {r}"),
            Element::Table(i) => format!("table index {i}"),
            Element::Rational(v) => format!("rational matrix with {} entries", v.len()),
            Element::Modular(v) => format!("modular matrix {v:?}"),
        }
    }

    fn check_all(&self, es: &[&Element]) -> Result<(), RingError> {
        es.iter().try_for_each(|e| self.check(e))
    }

    // ---- arithmetic --------------------------------------------------------
    //
    // The plain methods assume their arguments belong to the ring and panic on
    // a payload of the wrong kind; the `try_` variants check first.

    pub fn zero(&self) -> Element {
        match &self.inner.arith {
            Arith::Zmod(_) => Element::Residue(0),
            Arith::Rational(d) => Element::Rational(vec![BigRational::zero(); d * d]),
            Arith::Modular { dim, .. } => Element::Modular(vec![0; dim * dim]),
            Arith::Table(t) => Element::Table(t.zero),
        }
    }

    pub fn one(&self) -> Element {
        match &self.inner.arith {
            Arith::Zmod(_) => Element::Residue(1),
            Arith::Rational(d) => {
                Element::Rational((0..d * d).map(|k| if k % (d + 1) == 0 { BigRational::one() } else { BigRational::zero() }).collect())
            }
            Arith::Modular { dim, .. } => Element::Modular((0..dim * dim).map(|k| u64::from(k % (dim + 1) == 0)).collect()),
            Arith::Table(t) => Element::Table(t.one),
        }
    }

    pub fn add(&self, x: &Element, y: &Element) -> Element {
        match (&self.inner.arith, x, y) {
            (Arith::Zmod(n), Element::Residue(a), Element::Residue(b)) => Element::Residue(addmod(*a, *b, *n)),
            (Arith::Rational(_), Element::Rational(a), Element::Rational(b)) => {
                Element::Rational(a.iter().zip(b).map(|(p, q)| p + q).collect())
            }
            (Arith::Modular { n, .. }, Element::Modular(a), Element::Modular(b)) => {
                Element::Modular(a.iter().zip(b).map(|(p, q)| addmod(*p, *q, *n)).collect())
            }
            (Arith::Table(t), Element::Table(a), Element::Table(b)) => Element::Table(t.add[a * t.size + b]),
            _ => self.mismatch_panic("add", &[x, y]),
        }
    }

    pub fn neg(&self, x: &Element) -> Element {
        match (&self.inner.arith, x) {
            (Arith::Zmod(n), Element::Residue(a)) => Element::Residue(negmod(*a, *n)),
            (Arith::Rational(_), Element::Rational(a)) => Element::Rational(a.iter().map(|p| -p).collect()),
            (Arith::Modular { n, .. }, Element::Modular(a)) => Element::Modular(a.iter().map(|p| negmod(*p, *n)).collect()),
            (Arith::Table(t), Element::Table(a)) => Element::Table(t.neg[*a]),
            _ => self.mismatch_panic("neg", &[x]),
        }
    }

    pub fn sub(&self, x: &Element, y: &Element) -> Element {
        self.add(x, &self.neg(y))
    }

    pub fn mul(&self, x: &Element, y: &Element) -> Element {
        match (&self.inner.arith, x, y) {
            (Arith::Zmod(n), Element::Residue(a), Element::Residue(b)) => Element::Residue(mulmod(*a, *b, *n)),
            (Arith::Rational(d), Element::Rational(a), Element::Rational(b)) => {
                let d = *d;
                let mut out = vec![BigRational::zero(); d * d];
                for i in 0..d {
                    for k in 0..d {
                        let aik = &a[i * d + k];
                        if aik.is_zero() {
                            continue;
                        }
                        for j in 0..d {
                            out[i * d + j] += aik * &b[k * d + j];
                        }
                    }
                }
                Element::Rational(out)
            }
            (Arith::Modular { n, dim }, Element::Modular(a), Element::Modular(b)) => {
                let d = *dim;
                let n = *n as u128;
                let mut out = vec![0u64; d * d];
                for i in 0..d {
                    for j in 0..d {
                        let s: u128 = (0..d).map(|k| a[i * d + k] as u128 * b[k * d + j] as u128 % n).sum();
                        out[i * d + j] = (s % n) as u64;
                    }
                }
                Element::Modular(out)
            }
            (Arith::Table(t), Element::Table(a), Element::Table(b)) => Element::Table(t.mul[a * t.size + b]),
            _ => self.mismatch_panic("mul", &[x, y]),
        }
    }

    /// Product of a sequence, left to right. Empty product is one.
    pub fn product(&self, factors: &[&Element]) -> Element {
        match factors.split_first() {
            None => self.one(),
            Some((first, rest)) => rest.iter().fold((*first).clone(), |acc, f| self.mul(&acc, f)),
        }
    }

    pub fn square(&self, x: &Element) -> Element {
        self.mul(x, x)
    }

    pub fn star(&self, x: &Element) -> Element {
        match (&self.inner.arith, x) {
            (Arith::Table(t), Element::Table(a)) => Element::Table(t.star[*a]),
            (Arith::Rational(d), Element::Rational(v)) if self.inner.transpose => Element::Rational(transpose(v, *d)),
            (Arith::Modular { dim, .. }, Element::Modular(v)) if self.inner.transpose => {
                Element::Modular(transpose(v, *dim))
            }
            _ if self.contains(x) => x.clone(),
            _ => self.mismatch_panic("star", &[x]),
        }
    }

    pub fn is_zero(&self, x: &Element) -> bool {
        *x == self.zero()
    }

    pub fn is_one(&self, x: &Element) -> bool {
        *x == self.one()
    }

    /// `k · 1` for an integer `k`.
    pub fn int(&self, k: i64) -> Element {
        match &self.inner.arith {
            Arith::Zmod(n) => Element::Residue(reduce_i64(k, *n)),
            Arith::Rational(d) => Element::Rational(
                (0..d * d).map(|i| if i % (d + 1) == 0 { BigRational::from_integer(k.into()) } else { BigRational::zero() }).collect(),
            ),
            Arith::Modular { n, dim } => {
                let r = reduce_i64(k, *n);
                Element::Modular((0..dim * dim).map(|i| if i % (dim + 1) == 0 { r } else { 0 }).collect())
            }
            Arith::Table(_) => {
                let one = if k < 0 { self.neg(&self.one()) } else { self.one() };
                (0..k.unsigned_abs()).fold(self.zero(), |acc, _| self.add(&acc, &one))
            }
        }
    }

    /// A matrix element from signed integer rows, reduced into the ring.
    pub fn matrix(&self, rows: &[&[i64]]) -> Result<Element, RingError> {
        let dim = self.dim().ok_or_else(|| RingError::RingMismatch(format!("{} is not a matrix ring", self.inner.desc)))?;
        if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
            return Err(RingError::InvalidElement(format!("expected a {dim}x{dim} matrix")));
        }
        let flat = rows.iter().flat_map(|r| r.iter().copied());
        Ok(match &self.inner.arith {
            Arith::Rational(_) => Element::Rational(flat.map(|v| BigRational::from_integer(v.into())).collect()),
            Arith::Modular { n, .. } => Element::Modular(flat.map(|v| reduce_i64(v, *n)).collect()),
            _ => unreachable!(),
        })
    }

    /// A rational matrix from `(numerator, denominator)` rows.
    pub fn rational_matrix(&self, rows: &[&[(i64, i64)]]) -> Result<Element, RingError> {
        let value = Value::Array(
            rows.iter()
                .map(|r| Value::Array(r.iter().map(|(p, q)| Value::from(format!("{p}/{q}"))).collect()))
                .collect(),
        );
        self.from_json(&value)
    }

    pub fn try_add(&self, x: &Element, y: &Element) -> Result<Element, RingError> {
        self.check_all(&[x, y])?;
        Ok(self.add(x, y))
    }

    pub fn try_mul(&self, x: &Element, y: &Element) -> Result<Element, RingError> {
        self.check_all(&[x, y])?;
        Ok(self.mul(x, y))
    }

    pub fn try_neg(&self, x: &Element) -> Result<Element, RingError> {
        self.check(x)?;
        Ok(self.neg(x))
    }

    pub fn try_star(&self, x: &Element) -> Result<Element, RingError> {
        self.check(x)?;
        Ok(self.star(x))
    }

    fn mismatch_panic(&self, op: &str, args: &[&Element]) -> ! {
        let kinds: Vec<&str> = args.iter().map(|e| e.kind_name()).collect();
        panic!("{op} on {} received elements of another ring ({kinds:?})", self.inner.desc)
    }

    // ---- canonical enumeration -------------------------------------------

    pub(crate) fn decode_index(&self, mut i: usize) -> Element {
        match &self.inner.arith {
            Arith::Zmod(_) => Element::Residue(i as u64),
            Arith::Modular { n, dim } => {
                let len = dim * dim;
                let n = *n as usize;
                let mut v = vec![0u64; len];
                for slot in v.iter_mut().rev() {
                    *slot = (i % n) as u64;
                    i /= n;
                }
                Element::Modular(v)
            }
            Arith::Table(_) => Element::Table(i),
            Arith::Rational(_) => unreachable!("ℚ-matrices have no enumeration"),
        }
    }

    pub(crate) fn encode_index(&self, e: &Element) -> usize {
        match (&self.inner.arith, e) {
            (Arith::Zmod(_), Element::Residue(r)) => *r as usize,
            (Arith::Modular { n, .. }, Element::Modular(v)) => v.iter().fold(0usize, |acc, &x| acc * (*n as usize) + x as usize),
            (Arith::Table(_), Element::Table(i)) => *i,
            _ => self.mismatch_panic("index", &[e]),
        }
    }

    /// Position of `e` in canonical order.
    pub fn index_of(&self, e: &Element) -> Result<usize, RingError> {
        self.check(e)?;
        Ok(self.finite()?.index(e))
    }

    /// All elements in canonical order.
    pub fn elements(&self) -> Result<Vec<Element>, RingError> {
        Ok(self.finite()?.elements())
    }

    // ---- ideals and annihilators ------------------------------------------

    /// Decides `x ∈ aR` (right) or `x ∈ Ra` (left), returning a witness `w`
    /// with `x = a·w` or `x = w·a`.
    ///
    /// Matrix rings over a field solve the linear system; other finite rings
    /// return the canonical-order-first witness.
    pub fn in_principal_ideal(&self, x: &Element, a: &Element, side: IdealSide) -> Result<Option<Element>, RingError> {
        self.check_all(&[x, a])?;
        if let Some(am) = self.lin(a) {
            let xm = self.lin(x).expect("same ring");
            let sol = match side {
                IdealSide::Right => am.solve_right(&xm),
                IdealSide::Left => am.solve_left(&xm),
            };
            return match sol {
                Ok(w) => Ok(Some(self.unlin(w))),
                Err(LinalgError::NoSolution) => Ok(None),
                Err(e) => unreachable!("square matrices of equal size: {e}"),
            };
        }
        let f = self.finite()?;
        let (xi, ai) = (f.index(x), f.index(a));
        let hit = match side {
            IdealSide::Right => par::find_first(f.len(), |w| f.mul(ai, w) == xi),
            IdealSide::Left => par::find_first(f.len(), |w| f.mul(w, ai) == xi),
        };
        Ok(hit.map(|w| f.element(w)))
    }

    /// `a° = {x : a·x = 0}` (right) or `°a = {x : x·a = 0}` (left), sorted.
    pub fn annihilator(&self, a: &Element, side: IdealSide) -> Result<Vec<Element>, RingError> {
        self.check(a)?;
        let f = self.finite()?;
        let (ai, z) = (f.index(a), f.zero());
        let hits = match side {
            IdealSide::Right => par::filter(f.len(), |x| f.mul(ai, x) == z),
            IdealSide::Left => par::filter(f.len(), |x| f.mul(x, ai) == z),
        };
        Ok(hits.into_iter().map(|i| f.element(i)).collect())
    }

    // ---- inverses of ring elements ----------------------------------------

    /// Some inner inverse `g` (with `a·g·a = a`), or `None` if `a` is not
    /// regular. Field matrices use the RREF construction; other finite rings
    /// return the canonical-order-first one.
    pub fn inner_inverse(&self, a: &Element) -> Result<Option<Element>, RingError> {
        self.check(a)?;
        if let Some(am) = self.lin(a) {
            return Ok(Some(self.unlin(am.one_inverse())));
        }
        let f = self.finite()?;
        let ai = f.index(a);
        Ok(par::find_first(f.len(), |g| f.mul3(ai, g, ai) == ai).map(|g| f.element(g)))
    }

    /// Two-sided inverse, if `u` is a unit.
    pub fn unit_inverse(&self, u: &Element) -> Result<Option<Element>, RingError> {
        self.check(u)?;
        if let (Arith::Zmod(n), Element::Residue(r)) = (&self.inner.arith, u) {
            return Ok(mod_inverse(*r, *n).map(Element::Residue));
        }
        if let Some(um) = self.lin(u) {
            return Ok(um.invert_unit().ok().map(|m| self.unlin(m)));
        }
        let f = self.finite()?;
        let (ui, one) = (f.index(u), f.one());
        Ok(par::find_first(f.len(), |w| f.mul(ui, w) == one && f.mul(w, ui) == one).map(|w| f.element(w)))
    }

    /// Some `w` with `u·w = 1`.
    pub fn right_inverse(&self, u: &Element) -> Result<Option<Element>, RingError> {
        self.check(u)?;
        if self.lin(u).is_some() {
            return self.unit_inverse(u);
        }
        let f = self.finite()?;
        let (ui, one) = (f.index(u), f.one());
        Ok(par::find_first(f.len(), |w| f.mul(ui, w) == one).map(|w| f.element(w)))
    }

    /// Some `w` with `w·u = 1`.
    pub fn left_inverse(&self, u: &Element) -> Result<Option<Element>, RingError> {
        self.check(u)?;
        if self.lin(u).is_some() {
            return self.unit_inverse(u);
        }
        let f = self.finite()?;
        let (ui, one) = (f.index(u), f.one());
        Ok(par::find_first(f.len(), |w| f.mul(w, ui) == one).map(|w| f.element(w)))
    }

    /// Rank of a matrix over a field.
    pub fn rank(&self, a: &Element) -> Result<usize, RingError> {
        self.check(a)?;
        self.lin(a)
            .map(|m| m.rank())
            .ok_or_else(|| RingError::RingMismatch(format!("{} is not a matrix ring over a field", self.inner.desc)))
    }

    fn lin(&self, e: &Element) -> Option<LinMat> {
        match (&self.inner.desc.kind, e) {
            (RingKind::MatrixField { field: FieldSpec::Rational, dim }, Element::Rational(v)) => {
                Some(LinMat::Q(FieldMatrix::from_vec(Rationals, *dim, *dim, v.clone())))
            }
            (RingKind::MatrixField { field: FieldSpec::Gf(p), dim }, Element::Modular(v)) => {
                Some(LinMat::P(FieldMatrix::from_vec(PrimeField::new(*p), *dim, *dim, v.clone())))
            }
            _ => None,
        }
    }

    fn unlin(&self, m: LinMat) -> Element {
        match m {
            LinMat::Q(m) => Element::Rational(m.into_entries()),
            LinMat::P(m) => Element::Modular(m.into_entries()),
        }
    }

    // ---- JSON -------------------------------------------------------------

    /// Integers for Z_n, arrays of rows for matrices (entries integers or
    /// `"p/q"` strings), `{"idx": k}` for table rings.
    pub fn to_json(&self, e: &Element) -> Value {
        match (&self.inner.arith, e) {
            (_, Element::Residue(r)) => Value::from(*r),
            (Arith::Rational(d), Element::Rational(v)) => render_matrix(v, *d, render_rational),
            (Arith::Modular { dim, .. }, Element::Modular(v)) => render_matrix(v, *dim, |x| Value::from(*x)),
            (_, Element::Table(i)) => serde_json::json!({ "idx": i }),
            _ => self.mismatch_panic("to_json", &[e]),
        }
    }

    /// Parses the JSON encoding, reducing signed or fractional entries into
    /// canonical form for this ring.
    pub fn from_json(&self, v: &Value) -> Result<Element, RingError> {
        let e = match &self.inner.arith {
            Arith::Zmod(n) => Element::Residue(reduce_rational(&parse_rational(v)?, *n)?),
            Arith::Rational(d) => Element::Rational(parse_matrix(v, *d, parse_rational)?),
            Arith::Modular { n, dim } => {
                Element::Modular(parse_matrix(v, *dim, |x| reduce_rational(&parse_rational(x)?, *n))?)
            }
            Arith::Table(_) => {
                let idx = v
                    .get("idx")
                    .and_then(Value::as_u64)
                    .ok_or_else(|| RingError::InvalidElement(format!("expected {{\"idx\": k}}, got {v}")))?;
                Element::Table(idx as usize)
            }
        };
        self.check(&e)?;
        Ok(e)
    }

    pub fn parse_element(&self, text: &str) -> Result<Element, RingError> {
        let v: Value = serde_json::from_str(text.trim())
            .map_err(|err| RingError::InvalidElement(format!("{text:?} is not JSON: {err}")))?;
        self.from_json(&v)
    }

    pub fn render(&self, e: &Element) -> String {
        self.to_json(e).to_string()
    }
}

enum LinMat {
    Q(FieldMatrix<Rationals>),
    P(FieldMatrix<PrimeField>),
}

impl LinMat {
    fn solve_right(&self, b: &LinMat) -> Result<LinMat, LinalgError> {
        match (self, b) {
            (LinMat::Q(a), LinMat::Q(b)) => a.solve_right(b).map(LinMat::Q),
            (LinMat::P(a), LinMat::P(b)) => a.solve_right(b).map(LinMat::P),
            _ => unreachable!(),
        }
    }

    fn solve_left(&self, b: &LinMat) -> Result<LinMat, LinalgError> {
        match (self, b) {
            (LinMat::Q(a), LinMat::Q(b)) => a.solve_left(b).map(LinMat::Q),
            (LinMat::P(a), LinMat::P(b)) => a.solve_left(b).map(LinMat::P),
            _ => unreachable!(),
        }
    }

    fn one_inverse(&self) -> LinMat {
        match self {
            LinMat::Q(a) => LinMat::Q(a.one_inverse()),
            LinMat::P(a) => LinMat::P(a.one_inverse()),
        }
    }

    fn invert_unit(&self) -> Result<LinMat, LinalgError> {
        match self {
            LinMat::Q(a) => a.invert_unit().map(LinMat::Q),
            LinMat::P(a) => a.invert_unit().map(LinMat::P),
        }
    }

    fn rank(&self) -> usize {
        match self {
            LinMat::Q(a) => a.rank(),
            LinMat::P(a) => a.rank(),
        }
    }
}

fn addmod(a: u64, b: u64, n: u64) -> u64 {
    ((a as u128 + b as u128) % n as u128) as u64
}

fn mulmod(a: u64, b: u64, n: u64) -> u64 {
    ((a as u128 * b as u128) % n as u128) as u64
}

fn negmod(a: u64, n: u64) -> u64 {
    if a == 0 {
        0
    } else {
        n - a
    }
}

fn reduce_i64(k: i64, n: u64) -> u64 {
    (k as i128).rem_euclid(n as i128) as u64
}

/// `p/q mod n`, requiring `q` to be a unit mod `n`.
fn reduce_rational(q: &BigRational, n: u64) -> Result<u64, RingError> {
    let nb = BigInt::from(n);
    let num = q.numer().mod_floor(&nb).to_u64().expect("reduced below n");
    if q.denom().is_one() {
        return Ok(num);
    }
    let den = q.denom().mod_floor(&nb).to_u64().expect("reduced below n");
    let inv = mod_inverse(den, n)
        .ok_or_else(|| RingError::InvalidElement(format!("denominator {} is not invertible mod {n}", q.denom())))?;
    Ok(mulmod(num, inv, n))
}

fn transpose<T: Clone>(v: &[T], d: usize) -> Vec<T> {
    (0..d * d).map(|k| v[(k % d) * d + k / d].clone()).collect()
}

fn validate_table(spec: &TableSpec, involution: Involution) -> Result<TableArith, RingError> {
    let n = spec.size;
    let malformed = |m: String| RingError::MalformedSpec(m);
    if n == 0 {
        return Err(malformed("table ring needs at least one element".into()));
    }
    let flatten = |name: &str, t: &Vec<Vec<usize>>| -> Result<Vec<usize>, RingError> {
        if t.len() != n || t.iter().any(|r| r.len() != n) {
            return Err(malformed(format!("{name} table must be {n}x{n}")));
        }
        let flat: Vec<usize> = t.iter().flatten().copied().collect();
        if flat.iter().any(|&x| x >= n) {
            return Err(malformed(format!("{name} table has entries outside 0..{n}")));
        }
        Ok(flat)
    };
    let add = flatten("add", &spec.add)?;
    let mul = flatten("mul", &spec.mul)?;
    let a = |x: usize, y: usize| add[x * n + y];
    let m = |x: usize, y: usize| mul[x * n + y];

    let zero = (0..n)
        .find(|&z| (0..n).all(|x| a(z, x) == x && a(x, z) == x))
        .ok_or_else(|| malformed("addition has no identity".into()))?;
    let one = (0..n)
        .find(|&e| (0..n).all(|x| m(e, x) == x && m(x, e) == x))
        .ok_or_else(|| malformed("multiplication has no identity".into()))?;
    let mut neg = Vec::with_capacity(n);
    for x in 0..n {
        let inv = (0..n).find(|&y| a(x, y) == zero).ok_or_else(|| malformed(format!("element {x} has no additive inverse")))?;
        neg.push(inv);
    }
    for x in 0..n {
        for y in 0..n {
            if a(x, y) != a(y, x) {
                return Err(malformed(format!("addition is not commutative at ({x}, {y})")));
            }
            for z in 0..n {
                if a(a(x, y), z) != a(x, a(y, z)) {
                    return Err(malformed(format!("addition is not associative at ({x}, {y}, {z})")));
                }
                if m(m(x, y), z) != m(x, m(y, z)) {
                    return Err(malformed(format!("multiplication is not associative at ({x}, {y}, {z})")));
                }
                if m(x, a(y, z)) != a(m(x, y), m(x, z)) || m(a(y, z), x) != a(m(y, x), m(z, x)) {
                    return Err(malformed(format!("distributivity fails at ({x}, {y}, {z})")));
                }
            }
        }
    }

    let star: Vec<usize> = match involution {
        Involution::Identity => {
            if let Some(s) = &spec.star {
                if s.iter().enumerate().any(|(i, &v)| i != v) {
                    return Err(malformed("identity involution given with a non-identity star map".into()));
                }
            }
            if let Some((x, y)) = (0..n).flat_map(|x| (0..n).map(move |y| (x, y))).find(|&(x, y)| m(x, y) != m(y, x)) {
                return Err(RingError::NotCommutative(format!("elements {x} and {y} do not commute")));
            }
            (0..n).collect()
        }
        Involution::ExplicitMap => {
            let s = spec.star.clone().ok_or_else(|| malformed("explicit involution needs a star map".into()))?;
            if s.len() != n || s.iter().any(|&v| v >= n) {
                return Err(malformed(format!("star map must list {n} indices below {n}")));
            }
            s
        }
        Involution::Transpose => return Err(malformed("transpose involution is only for matrix rings".into())),
    };
    for x in 0..n {
        if star[star[x]] != x {
            return Err(RingError::InvolutionInvalid(format!("(x*)* != x at {x}")));
        }
        for y in 0..n {
            if star[a(x, y)] != a(star[x], star[y]) {
                return Err(RingError::InvolutionInvalid(format!("(x+y)* != x*+y* at ({x}, {y})")));
            }
            if star[m(x, y)] != m(star[y], star[x]) {
                return Err(RingError::InvolutionInvalid(format!("(xy)* != y*x* at ({x}, {y})")));
            }
        }
    }
    Ok(TableArith { size: n, add, mul, neg, star, zero, one })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z8() -> Ring {
        make_ring(RingDescriptor::zmod(8)).unwrap()
    }

    /// Z_n as a table ring.
    pub(crate) fn zmod_table(n: usize) -> TableSpec {
        TableSpec {
            size: n,
            add: (0..n).map(|x| (0..n).map(|y| (x + y) % n).collect()).collect(),
            mul: (0..n).map(|x| (0..n).map(|y| (x * y) % n).collect()).collect(),
            star: None,
        }
    }

    #[test]
    fn make_ring_examples() {
        assert!(make_ring(RingDescriptor::zmod(8)).is_ok());
        assert!(make_ring(RingDescriptor::matrix_zmod(4, 2)).is_ok());
        let e = make_ring(RingDescriptor::matrix_gf(5, 2).with_involution(Involution::Identity)).unwrap_err();
        assert!(matches!(e, RingError::NotCommutative(_)));
    }

    #[test]
    fn make_ring_rejects_bad_specs() {
        for d in [
            RingDescriptor::zmod(1),
            RingDescriptor::matrix_gf(4, 2),
            RingDescriptor::matrix_rational(0),
            RingDescriptor::zmod(8).with_involution(Involution::Transpose),
        ] {
            assert!(matches!(make_ring(d), Err(RingError::MalformedSpec(_))));
        }
        assert!(matches!(make_ring(RingDescriptor::matrix_zmod(4, 3)), Err(RingError::RingTooLarge { .. })));
        assert!(make_ring(RingDescriptor::matrix_zmod(2, 4)).is_ok());
    }

    #[test]
    fn one_by_one_matrices_accept_identity() {
        let r = make_ring(RingDescriptor::matrix_rational(1).with_involution(Involution::Identity)).unwrap();
        let x = r.matrix(&[&[3]]).unwrap();
        assert_eq!(r.star(&x), x);
    }

    #[test]
    fn table_rings_validate() {
        let r = make_ring(RingDescriptor::table(zmod_table(6)).with_involution(Involution::Identity)).unwrap();
        assert_eq!(r.size(), Some(6));
        assert_eq!(r.mul(&Element::Table(4), &Element::Table(5)), Element::Table(2));

        let mut broken = zmod_table(4);
        broken.mul[2][3] = 1;
        assert!(matches!(
            make_ring(RingDescriptor::table(broken).with_involution(Involution::Identity)),
            Err(RingError::MalformedSpec(_))
        ));

        let mut bad_star = zmod_table(4);
        bad_star.star = Some(vec![0, 3, 2, 1]); // x ↦ -x is not multiplicative
        assert!(matches!(make_ring(RingDescriptor::table(bad_star)), Err(RingError::InvolutionInvalid(_))));

        let too_big = zmod_table(65);
        assert!(matches!(
            make_ring(RingDescriptor::table(too_big).with_involution(Involution::Identity)),
            Err(RingError::RingTooLarge { .. })
        ));
    }

    #[test]
    fn arithmetic_examples() {
        let r = z8();
        assert_eq!(r.star(&Element::Residue(3)), Element::Residue(3));
        let q = make_ring(RingDescriptor::matrix_rational(2)).unwrap();
        let x = q.matrix(&[&[1, 0], &[-1, 0]]).unwrap();
        assert_eq!(q.star(&x), q.matrix(&[&[1, -1], &[0, 0]]).unwrap());
        let m = make_ring(RingDescriptor::matrix_zmod(4, 2)).unwrap();
        let a = m.matrix(&[&[3, 1], &[0, 0]]).unwrap();
        let b = m.matrix(&[&[0, 0], &[1, 1]]).unwrap();
        assert_eq!(m.mul(&a, &b), m.matrix(&[&[1, 1], &[0, 0]]).unwrap());
        assert_eq!(m.matrix(&[&[-1, 0], &[0, -5]]).unwrap(), Element::Modular(vec![3, 0, 0, 3]));
    }

    #[test]
    fn mismatched_elements_are_rejected() {
        let r = z8();
        assert!(matches!(r.try_add(&Element::Residue(3), &Element::Residue(9)), Err(RingError::RingMismatch(_))));
        assert!(matches!(r.try_mul(&Element::Residue(3), &Element::Table(1)), Err(RingError::RingMismatch(_))));
        assert_eq!(r.try_mul(&Element::Residue(3), &Element::Residue(7)).unwrap(), Element::Residue(5));
    }

    #[test]
    fn ideal_examples() {
        let r = z8();
        let e = |v| Element::Residue(v);
        assert_eq!(r.in_principal_ideal(&e(4), &e(2), IdealSide::Right).unwrap(), Some(e(2)));
        assert_eq!(r.in_principal_ideal(&e(4), &e(16 % 8), IdealSide::Right).unwrap(), None);

        let g = make_ring(RingDescriptor::matrix_gf(2, 2)).unwrap();
        let x = g.matrix(&[&[1, 0], &[1, 0]]).unwrap();
        let a = g.mul(&g.star(&x), &x);
        assert!(g.is_zero(&a));
        assert_eq!(g.in_principal_ideal(&x, &a, IdealSide::Left).unwrap(), None);
    }

    #[test]
    fn annihilator_examples() {
        let r = z8();
        let e = |v| Element::Residue(v);
        assert_eq!(r.annihilator(&e(4), IdealSide::Right).unwrap(), vec![e(0), e(2), e(4), e(6)]);
        assert_eq!(r.annihilator(&e(3), IdealSide::Right).unwrap(), vec![e(0)]);
        assert_eq!(r.annihilator(&e(0), IdealSide::Left).unwrap(), r.elements().unwrap());
        let q = make_ring(RingDescriptor::matrix_rational(2)).unwrap();
        assert_eq!(q.annihilator(&q.zero(), IdealSide::Left), Err(RingError::InfiniteRing));
    }

    #[test]
    fn canonical_order_is_row_major() {
        let m = make_ring(RingDescriptor::matrix_zmod(3, 2)).unwrap();
        let els = m.elements().unwrap();
        assert_eq!(els.len(), 81);
        assert_eq!(els[0], Element::Modular(vec![0, 0, 0, 0]));
        assert_eq!(els[1], Element::Modular(vec![0, 0, 0, 1]));
        assert_eq!(els[3], Element::Modular(vec![0, 0, 1, 0]));
        assert_eq!(els[80], Element::Modular(vec![2, 2, 2, 2]));
        for (i, e) in els.iter().enumerate() {
            assert_eq!(m.index_of(e).unwrap(), i);
        }
    }

    #[test]
    fn json_encoding() {
        let q = make_ring(RingDescriptor::matrix_rational(2)).unwrap();
        let x = q.parse_element(r#"[[1, "-2/4"], ["3", 0]]"#).unwrap();
        assert_eq!(q.render(&x), r#"[[1,"-1/2"],[3,0]]"#);
        assert!(q.parse_element(r#"[[1, "1/0"], [0, 0]]"#).is_err());
        assert!(q.parse_element("[[1, 2]]").is_err());

        let r = z8();
        assert_eq!(r.parse_element("-1").unwrap(), Element::Residue(7));
        assert_eq!(r.parse_element("\"1/3\"").unwrap(), Element::Residue(3));
        assert!(r.parse_element("\"1/2\"").is_err());

        let t = make_ring(RingDescriptor::table(zmod_table(3)).with_involution(Involution::Identity)).unwrap();
        assert_eq!(t.parse_element(r#"{"idx": 2}"#).unwrap(), Element::Table(2));
        assert!(matches!(t.parse_element(r#"{"idx": 3}"#), Err(RingError::RingMismatch(_))));
    }

    #[test]
    fn unit_and_inner_inverses() {
        let r = z8();
        assert_eq!(r.unit_inverse(&Element::Residue(3)).unwrap(), Some(Element::Residue(3)));
        assert_eq!(r.unit_inverse(&Element::Residue(4)).unwrap(), None);
        assert_eq!(r.inner_inverse(&Element::Residue(4)).unwrap(), None);
        assert_eq!(r.inner_inverse(&Element::Residue(0)).unwrap(), Some(Element::Residue(0)));
        let m = make_ring(RingDescriptor::matrix_zmod(4, 2)).unwrap();
        let u = m.matrix(&[&[1, 1], &[0, 1]]).unwrap();
        let w = m.unit_inverse(&u).unwrap().unwrap();
        assert_eq!(m.mul(&u, &w), m.one());
        assert_eq!(m.right_inverse(&u).unwrap(), Some(w.clone()));
        assert_eq!(m.left_inverse(&u).unwrap(), Some(w));
    }
}
