use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde_json::Value;

use super::RingError;

/// An element of some ring, in canonical form.
///
/// The owning ring is not stored; every operation goes through a
/// [`Ring`](super::Ring) handle which checks membership at its public entry
/// points. Matrices are row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Element {
    /// Residue in `[0, n)`.
    Residue(u64),
    /// Matrix over ℚ, entries in lowest terms.
    Rational(Vec<BigRational>),
    /// Matrix over Z_n or GF(p), entries in `[0, n)`.
    Modular(Vec<u64>),
    /// Index into a table ring.
    Table(usize),
}

impl Element {
    pub fn kind_name(&self) -> &'static str {
        match self {
            Element::Residue(_) => "residue",
            Element::Rational(_) => "rational matrix",
            Element::Modular(_) => "modular matrix",
            Element::Table(_) => "table index",
        }
    }
}

pub(crate) fn render_rational(q: &BigRational) -> Value {
    if q.denom().is_one() {
        match q.numer().to_i64() {
            Some(v) => Value::from(v),
            None => Value::from(q.numer().to_string()),
        }
    } else {
        Value::from(format!("{}/{}", q.numer(), q.denom()))
    }
}

/// Accepts JSON integers and strings `"p"` / `"p/q"`.
pub(crate) fn parse_rational(v: &Value) -> Result<BigRational, RingError> {
    let bad = || RingError::InvalidElement(format!("{v} is not an exact rational"));
    match v {
        Value::Number(n) => {
            let i = n.as_i64().map(BigInt::from).or_else(|| n.as_u64().map(BigInt::from)).ok_or_else(bad)?;
            Ok(BigRational::from_integer(i))
        }
        Value::String(s) => {
            let (num, den) = match s.split_once('/') {
                Some((a, b)) => (a.trim(), b.trim()),
                None => (s.trim(), "1"),
            };
            let num: BigInt = num.parse().map_err(|_| bad())?;
            let den: BigInt = den.parse().map_err(|_| bad())?;
            if den.is_zero() {
                return Err(RingError::InvalidElement(format!("{v}: zero denominator")));
            }
            Ok(BigRational::new(num, den))
        }
        _ => Err(bad()),
    }
}

/// Parses a JSON matrix (array of equal-length rows) into row-major entries.
pub(crate) fn parse_matrix<T>(
    v: &Value,
    dim: usize,
    mut entry: impl FnMut(&Value) -> Result<T, RingError>,
) -> Result<Vec<T>, RingError> {
    let rows = v
        .as_array()
        .ok_or_else(|| RingError::InvalidElement(format!("expected a {dim}x{dim} matrix, got {v}")))?;
    if rows.len() != dim {
        return Err(RingError::InvalidElement(format!("expected {dim} rows, got {}", rows.len())));
    }
    let mut out = Vec::with_capacity(dim * dim);
    for row in rows {
        let row = row
            .as_array()
            .filter(|r| r.len() == dim)
            .ok_or_else(|| RingError::InvalidElement(format!("expected a row of length {dim}, got {row}")))?;
        for e in row {
            out.push(entry(e)?);
        }
    }
    Ok(out)
}

pub(crate) fn render_matrix<T>(entries: &[T], dim: usize, mut render: impl FnMut(&T) -> Value) -> Value {
    Value::Array(
        entries
            .chunks(dim.max(1))
            .map(|row| Value::Array(row.iter().map(&mut render).collect()))
            .collect(),
    )
}
