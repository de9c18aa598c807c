use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::RingError;

/// Scalar field of a matrix ring that is handled with linear algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FieldSpec {
    Rational,
    Gf(u64),
}

/// Explicit Cayley tables for a small finite ring.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableSpec {
    pub size: usize,
    pub add: Vec<Vec<usize>>,
    pub mul: Vec<Vec<usize>>,
    /// Required for the explicit-map involution, ignored (must be absent or the
    /// identity) otherwise.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub star: Option<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum RingKind {
    Zmod { n: u64 },
    MatrixField { field: FieldSpec, dim: usize },
    MatrixZmod { n: u64, dim: usize },
    Table(TableSpec),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Involution {
    /// Only valid on commutative rings.
    Identity,
    /// Matrix rings.
    Transpose,
    /// Table rings, using the supplied star map.
    ExplicitMap,
}

/// A concrete ring together with its involution.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingDescriptor {
    pub kind: RingKind,
    pub involution: Involution,
}

impl RingDescriptor {
    pub fn zmod(n: u64) -> Self {
        RingDescriptor { kind: RingKind::Zmod { n }, involution: Involution::Identity }
    }

    pub fn matrix_rational(dim: usize) -> Self {
        RingDescriptor {
            kind: RingKind::MatrixField { field: FieldSpec::Rational, dim },
            involution: Involution::Transpose,
        }
    }

    pub fn matrix_gf(p: u64, dim: usize) -> Self {
        RingDescriptor {
            kind: RingKind::MatrixField { field: FieldSpec::Gf(p), dim },
            involution: Involution::Transpose,
        }
    }

    pub fn matrix_zmod(n: u64, dim: usize) -> Self {
        RingDescriptor { kind: RingKind::MatrixZmod { n, dim }, involution: Involution::Transpose }
    }

    pub fn table(spec: TableSpec) -> Self {
        RingDescriptor { kind: RingKind::Table(spec), involution: Involution::ExplicitMap }
    }

    pub fn with_involution(mut self, involution: Involution) -> Self {
        self.involution = involution;
        self
    }
}

/// `zmod:8`, `mat:rat:2`, `mat:gf:P:DIM`, `mat:zmod:N:DIM`, each optionally
/// followed by `:inv=identity` or `:inv=transpose`.
impl FromStr for RingDescriptor {
    type Err = RingError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = |why: &str| RingError::MalformedSpec(format!("ring descriptor {s:?}: {why}"));
        let mut parts: Vec<&str> = s.trim().split(':').collect();
        let mut involution = None;
        if let Some(last) = parts.last() {
            if let Some(v) = last.strip_prefix("inv=") {
                involution = Some(match v {
                    "identity" => Involution::Identity,
                    "transpose" => Involution::Transpose,
                    _ => return Err(bad("involution must be identity or transpose")),
                });
                parts.pop();
            }
        }
        let num = |t: &str| t.parse::<u64>().map_err(|_| bad(&format!("{t:?} is not a number")));
        let dim = |t: &str| t.parse::<usize>().map_err(|_| bad(&format!("{t:?} is not a dimension")));
        let desc = match parts.as_slice() {
            ["zmod", n] => RingDescriptor::zmod(num(n)?),
            ["mat", "rat", d] => RingDescriptor::matrix_rational(dim(d)?),
            ["mat", "gf", p, d] => RingDescriptor::matrix_gf(num(p)?, dim(d)?),
            ["mat", "zmod", n, d] => RingDescriptor::matrix_zmod(num(n)?, dim(d)?),
            _ => return Err(bad("unrecognised form")),
        };
        Ok(match involution {
            Some(inv) => desc.with_involution(inv),
            None => desc,
        })
    }
}

impl fmt::Display for RingDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let default_inv = match &self.kind {
            RingKind::Zmod { n } => {
                write!(f, "zmod:{n}")?;
                Involution::Identity
            }
            RingKind::MatrixField { field: FieldSpec::Rational, dim } => {
                write!(f, "mat:rat:{dim}")?;
                Involution::Transpose
            }
            RingKind::MatrixField { field: FieldSpec::Gf(p), dim } => {
                write!(f, "mat:gf:{p}:{dim}")?;
                Involution::Transpose
            }
            RingKind::MatrixZmod { n, dim } => {
                write!(f, "mat:zmod:{n}:{dim}")?;
                Involution::Transpose
            }
            RingKind::Table(t) => {
                write!(f, "table:{}", t.size)?;
                Involution::ExplicitMap
            }
        };
        match self.involution {
            inv if inv == default_inv => Ok(()),
            Involution::Identity => write!(f, ":inv=identity"),
            Involution::Transpose => write!(f, ":inv=transpose"),
            Involution::ExplicitMap => write!(f, ":inv=explicit"),
        }
    }
}
