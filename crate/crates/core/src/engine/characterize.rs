use serde::{Deserialize, Serialize};

use super::{agree, core_inverse, existing, one_three_inverse, verify, EngineError, Form, Hypotheses, InverseKind};
use crate::ring::{Element, IdealSide, Ring};

/// `(a + 1 − ab)⁻¹ab`, for `b` with `aba = a`, `(ab)* = ab`, `ab² = b` and
/// `a ∈ Ra²`. The result is asserted to equal both `b` and the core inverse.
pub fn core_via_unit(ring: &Ring, a: &Element, b: &Element) -> Result<Element, EngineError> {
    ring.check(a)?;
    ring.check(b)?;
    let ab = ring.mul(a, b);
    Hypotheses::default()
        .require("aba=a", ring.mul(&ab, a) == *a)
        .require("(ab)*=ab", ring.star(&ab) == ab)
        .require("ab²=b", ring.mul(&ab, b) == *b)
        .require("a∈Ra²", ring.in_principal_ideal(a, &ring.square(a), IdealSide::Left)?.is_some())
        .finish()?;
    let u = ring.sub(&ring.add(a, &ring.one()), &ab);
    let u_inv = ring
        .unit_inverse(&u)?
        .ok_or_else(|| EngineError::Internal("a + 1 − ab is not a unit".into()))?;
    let x = ring.mul(&u_inv, &ab);
    agree("(a + 1 − ab)⁻¹ab vs b", &x, b)?;
    agree("(a + 1 − ab)⁻¹ab vs core inverse", &x, &core_inverse(ring, a)?)?;
    Ok(x)
}

/// Which set of one-sided equations [`core_from_left_equations`] assumes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LeftEquations {
    /// `bab = b`, `(ab)* = ab`, `ba² = a`, with `a ∈ a²R`; the answer is `b`.
    Outer,
    /// `aba = a`, `(ab)* = ab`, `ba² = a`; the answer is `bab`.
    Inner,
}

pub fn core_from_left_equations(
    ring: &Ring,
    a: &Element,
    b: &Element,
    variant: LeftEquations,
) -> Result<Element, EngineError> {
    ring.check(a)?;
    ring.check(b)?;
    let ab = ring.mul(a, b);
    let ba2 = ring.mul(b, &ring.square(a));
    let mut hyp = Hypotheses::default();
    let x = match variant {
        LeftEquations::Outer => {
            hyp.require("bab=b", ring.product(&[b, a, b]) == *b)
                .require("(ab)*=ab", ring.star(&ab) == ab)
                .require("ba²=a", ba2 == *a)
                .require("a∈a²R", ring.in_principal_ideal(a, &ring.square(a), IdealSide::Right)?.is_some())
                .finish()?;
            b.clone()
        }
        LeftEquations::Inner => {
            hyp.require("aba=a", ring.mul(&ab, a) == *a)
                .require("(ab)*=ab", ring.star(&ab) == ab)
                .require("ba²=a", ba2 == *a)
                .finish()?;
            ring.product(&[b, a, b])
        }
    };
    let core = core_inverse(ring, a)
        .map_err(|e| EngineError::Internal(format!("hypotheses hold but the core inverse is missing: {e}")))?;
    agree("left-equation core vs core inverse", &x, &core)?;
    Ok(x)
}

/// Truth values of three equivalent descriptions of "b is the core inverse
/// of a", valid when `a ∈ a²R`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoreConditions {
    /// `b = a⊕`.
    pub is_core: bool,
    /// `ba² = a`, `(ab)* = ab` and `b ∈ aR`.
    pub left_equations: bool,
    /// `a` has a {1,3}-inverse `â`, `ba² = a` and `b = baâ`.
    pub via_one_three: bool,
}

impl CoreConditions {
    pub fn as_array(self) -> [bool; 3] {
        [self.is_core, self.left_equations, self.via_one_three]
    }
}

/// Evaluates all three conditions and asserts that they agree.
///
/// `a_hat` must be a {1,3}-inverse of `a` when given; when absent one is
/// computed, and the third condition is false if none exists. The answer does
/// not depend on which {1,3}-inverse is used.
pub fn check_core_conditions(
    ring: &Ring,
    a: &Element,
    b: &Element,
    a_hat: Option<&Element>,
) -> Result<CoreConditions, EngineError> {
    ring.check(a)?;
    ring.check(b)?;
    let mut hyp = Hypotheses::default();
    hyp.require("a∈a²R", ring.in_principal_ideal(a, &ring.square(a), IdealSide::Right)?.is_some());
    if let Some(h) = a_hat {
        ring.check(h)?;
        hyp.require("â∈a{1,3}", verify(ring, InverseKind::OneThree, a, h, Form::Definitional)?.is_valid());
    }
    hyp.finish()?;

    let ab = ring.mul(a, b);
    let ba2_is_a = ring.mul(b, &ring.square(a)) == *a;
    let is_core = existing(core_inverse(ring, a))?.as_ref() == Some(b);
    let left_equations =
        ba2_is_a && ring.star(&ab) == ab && ring.in_principal_ideal(b, a, IdealSide::Right)?.is_some();
    let a_hat = match a_hat {
        Some(h) => Some(h.clone()),
        None => existing(one_three_inverse(ring, a))?,
    };
    let via_one_three = match a_hat {
        Some(h) => ba2_is_a && ring.product(&[b, a, &h]) == *b,
        None => false,
    };
    let out = CoreConditions { is_core, left_equations, via_one_three };
    if is_core != left_equations || is_core != via_one_three {
        return Err(EngineError::Internal(format!("core conditions disagree: {:?}", out.as_array())));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{make_ring, RingDescriptor};

    fn z8() -> Ring {
        make_ring(RingDescriptor::zmod(8)).unwrap()
    }

    fn q2() -> Ring {
        make_ring(RingDescriptor::matrix_rational(2)).unwrap()
    }

    fn res(v: u64) -> Element {
        Element::Residue(v)
    }

    #[test]
    fn via_unit() {
        let q = q2();
        let a = q.matrix(&[&[1, 0], &[-1, 0]]).unwrap();
        let b = q.rational_matrix(&[&[(1, 2), (-1, 2)], &[(-1, 2), (1, 2)]]).unwrap();
        let u = q.sub(&q.add(&a, &q.one()), &q.mul(&a, &b));
        assert_eq!(u, q.rational_matrix(&[&[(3, 2), (1, 2)], &[(-1, 2), (1, 2)]]).unwrap());
        assert_eq!(core_via_unit(&q, &a, &b).unwrap(), b);
        assert_eq!(core_via_unit(&z8(), &res(3), &res(3)).unwrap(), res(3));
        match core_via_unit(&z8(), &res(4), &res(4)) {
            Err(EngineError::PreconditionViolated { failed }) => assert!(failed.contains(&"aba=a".to_string())),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn left_equations() {
        assert_eq!(core_from_left_equations(&z8(), &res(3), &res(3), LeftEquations::Inner).unwrap(), res(3));
        let q = q2();
        let a = q.matrix(&[&[1, 0], &[-1, 0]]).unwrap();
        let b = core_inverse(&q, &a).unwrap();
        assert_eq!(core_from_left_equations(&q, &a, &b, LeftEquations::Outer).unwrap(), b);
        let n = q.matrix(&[&[0, 0], &[-2, 0]]).unwrap();
        for b in [q.zero(), q.one(), n.clone()] {
            match core_from_left_equations(&q, &n, &b, LeftEquations::Outer) {
                Err(EngineError::PreconditionViolated { failed }) => assert!(failed.contains(&"a∈a²R".to_string())),
                other => panic!("{other:?}"),
            }
        }
    }

    #[test]
    fn conditions() {
        let r = z8();
        let all = |c: CoreConditions| c.as_array();
        assert_eq!(all(check_core_conditions(&r, &res(3), &res(3), Some(&res(3))).unwrap()), [true; 3]);
        assert_eq!(all(check_core_conditions(&r, &res(3), &res(5), None).unwrap()), [false; 3]);
        let q = q2();
        let a = q.matrix(&[&[1, 0], &[-1, 0]]).unwrap();
        let b = core_inverse(&q, &a).unwrap();
        let h = q.rational_matrix(&[&[(1, 2), (-1, 2)], &[(0, 1), (0, 1)]]).unwrap();
        assert_eq!(all(check_core_conditions(&q, &a, &b, Some(&h)).unwrap()), [true; 3]);
        assert!(matches!(
            check_core_conditions(&r, &res(4), &res(4), None),
            Err(EngineError::PreconditionViolated { .. })
        ));
        assert!(matches!(
            check_core_conditions(&r, &res(3), &res(3), Some(&res(1))),
            Err(EngineError::PreconditionViolated { .. })
        ));
    }
}
