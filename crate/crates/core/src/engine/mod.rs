//! Generalized inverses in rings with involution.
//!
//! Each inverse kind is computed constructively and re-verified against its
//! defining equations before it is returned. Failures come back as structured
//! errors naming the missing factor or the violated hypothesis.

mod additive;
mod certificate;
mod characterize;
mod compute;
mod decomposition;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ring::RingError;

pub use additive::{core_sum, core_sum_commuting, dual_core_sum, dual_core_sum_commuting, group_sum};
pub use certificate::{verify, Equation, InverseCertificate};
pub use characterize::{
    check_core_conditions, core_from_left_equations, core_via_unit, CoreConditions, LeftEquations,
};
pub use compute::{
    compute, core_inverse, dual_core_inverse, group_inverse, inner_inverse, one_four_inverse,
    one_three_inverse,
};
pub use decomposition::{
    core_from_decomposition, find_decomposition, one_four_family, one_four_family_from_right,
    one_three_family, one_three_family_from_left, DecompositionOutcome, DecompositionWitness,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InverseKind {
    Inner,
    Group,
    OneThree,
    OneFour,
    Core,
    DualCore,
}

impl InverseKind {
    pub const ALL: [InverseKind; 6] = [
        InverseKind::Inner,
        InverseKind::Group,
        InverseKind::OneThree,
        InverseKind::OneFour,
        InverseKind::Core,
        InverseKind::DualCore,
    ];

    pub fn name(self) -> &'static str {
        match self {
            InverseKind::Inner => "inner",
            InverseKind::Group => "group",
            InverseKind::OneThree => "one_three",
            InverseKind::OneFour => "one_four",
            InverseKind::Core => "core",
            InverseKind::DualCore => "dual_core",
        }
    }
}

impl fmt::Display for InverseKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for InverseKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "inner" | "1" => InverseKind::Inner,
            "group" | "sharp" => InverseKind::Group,
            "one_three" | "13" | "1,3" => InverseKind::OneThree,
            "one_four" | "14" | "1,4" => InverseKind::OneFour,
            "core" => InverseKind::Core,
            "dual_core" | "dualcore" => InverseKind::DualCore,
            _ => return Err(format!("unknown inverse kind {s:?}")),
        })
    }
}

/// Which equation set a certificate checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Form {
    /// Defining equations, with ideal memberships for core and dual core.
    Definitional,
    /// The five-equation characterization of (dual) core inverses.
    FiveEq,
    /// The three-equation characterization of (dual) core inverses.
    ThreeEq,
}

impl Form {
    pub fn name(self) -> &'static str {
        match self {
            Form::Definitional => "definitional",
            Form::FiveEq => "five_eq",
            Form::ThreeEq => "three_eq",
        }
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Form {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "definitional" | "def" => Form::Definitional,
            "five_eq" | "five" | "5" => Form::FiveEq,
            "three_eq" | "three" | "3" => Form::ThreeEq,
            _ => return Err(format!("unknown form {s:?}")),
        })
    }
}

/// Why a group inverse could not be formed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GroupFailure {
    /// No inner inverse exists.
    NotRegular,
    /// `a²a⁻ + 1 − aa⁻` is not a unit.
    NotAUnit,
}

/// The factor whose absence blocks a (dual) core inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MissingFactor {
    Group,
    OneThree,
    OneFour,
}

impl MissingFactor {
    /// Name of the error the factor's own computation reports.
    pub fn error_name(self) -> &'static str {
        match self {
            MissingFactor::Group => "NotGroupInvertible",
            MissingFactor::OneThree => "Not13Invertible",
            MissingFactor::OneFour => "Not14Invertible",
        }
    }
}

impl fmt::Display for MissingFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.error_name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error("element is not regular (no inner inverse)")]
    NotRegular,
    #[error("not group invertible ({0:?})")]
    NotGroupInvertible(GroupFailure),
    #[error("no {{1,3}}-inverse exists")]
    Not13Invertible,
    #[error("no {{1,4}}-inverse exists")]
    Not14Invertible,
    #[error("not core invertible: {because}")]
    NotCoreInvertible { because: MissingFactor },
    #[error("not dual core invertible: {because}")]
    NotDualCoreInvertible { because: MissingFactor },
    #[error("preconditions violated: {}", failed.join(", "))]
    PreconditionViolated { failed: Vec<String> },
    #[error("form {form} is not available for {kind} inverses")]
    UnsupportedForm { kind: InverseKind, form: Form },
    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

impl EngineError {
    /// Stable identifier used in machine-readable output.
    pub fn code(&self) -> &'static str {
        match self {
            EngineError::Ring(_) => "RingError",
            EngineError::NotRegular => "NotRegular",
            EngineError::NotGroupInvertible(_) => "NotGroupInvertible",
            EngineError::Not13Invertible => "Not13Invertible",
            EngineError::Not14Invertible => "Not14Invertible",
            EngineError::NotCoreInvertible { .. } => "NotCoreInvertible",
            EngineError::NotDualCoreInvertible { .. } => "NotDualCoreInvertible",
            EngineError::PreconditionViolated { .. } => "PreconditionViolated",
            EngineError::UnsupportedForm { .. } => "UnsupportedForm",
            EngineError::Internal(_) => "Internal",
        }
    }

    /// True when the error says "this inverse (or hypothesis) does not
    /// hold", as opposed to bad input or a bug.
    pub fn is_negative_answer(&self) -> bool {
        matches!(
            self,
            EngineError::NotRegular
                | EngineError::NotGroupInvertible(_)
                | EngineError::Not13Invertible
                | EngineError::Not14Invertible
                | EngineError::NotCoreInvertible { .. }
                | EngineError::NotDualCoreInvertible { .. }
                | EngineError::PreconditionViolated { .. }
        )
    }

    pub(crate) fn precondition(failed: Vec<String>) -> Result<(), EngineError> {
        if failed.is_empty() {
            Ok(())
        } else {
            Err(EngineError::PreconditionViolated { failed })
        }
    }
}

/// Collects the labels of hypotheses that fail.
#[derive(Default)]
pub(crate) struct Hypotheses {
    failed: Vec<String>,
}

impl Hypotheses {
    pub(crate) fn require(&mut self, label: &str, holds: bool) -> &mut Self {
        if !holds {
            self.failed.push(label.to_string());
        }
        self
    }

    pub(crate) fn finish(&mut self) -> Result<(), EngineError> {
        EngineError::precondition(std::mem::take(&mut self.failed))
    }
}

/// Turns "does not exist" answers into `None`, keeping real errors.
pub(crate) fn existing(res: Result<crate::ring::Element, EngineError>) -> Result<Option<crate::ring::Element>, EngineError> {
    match res {
        Ok(x) => Ok(Some(x)),
        Err(e) if e.is_negative_answer() => Ok(None),
        Err(e) => Err(e),
    }
}

pub(crate) fn agree(what: &str, left: &crate::ring::Element, right: &crate::ring::Element) -> Result<(), EngineError> {
    if left == right {
        Ok(())
    } else {
        Err(EngineError::Internal(format!("{what}: {left:?} != {right:?}")))
    }
}
