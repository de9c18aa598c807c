use serde_json::{json, Value};

use super::{
    agree, core_inverse, existing, group_inverse, one_three_inverse, verify, EngineError, Form, Hypotheses,
    InverseKind,
};
use crate::ring::{Element, IdealSide, Ring};

/// Elements realizing the four unit decompositions
/// `1 = ax₁ + u₁ = x₂a* + u₂ = ay₁ + v₁ = y₂a + v₂`
/// with `a*u₁ = 0`, `u₂a = 0`, `av₁ = 0`, `v₂a = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecompositionWitness {
    pub x1: Element,
    pub x2: Element,
    pub y1: Element,
    pub y2: Element,
    pub u1: Element,
    pub u2: Element,
    pub v1: Element,
    pub v2: Element,
}

impl DecompositionWitness {
    /// Builds the witness from `x₁, x₂, y₁, y₂`, taking the `u`s and `v`s as
    /// the complements `1 − ax₁` and so on.
    pub fn from_factors(ring: &Ring, a: &Element, x1: Element, x2: Element, y1: Element, y2: Element) -> Self {
        let one = ring.one();
        let a_star = ring.star(a);
        DecompositionWitness {
            u1: ring.sub(&one, &ring.mul(a, &x1)),
            u2: ring.sub(&one, &ring.mul(&x2, &a_star)),
            v1: ring.sub(&one, &ring.mul(a, &y1)),
            v2: ring.sub(&one, &ring.mul(&y2, a)),
            x1,
            x2,
            y1,
            y2,
        }
    }

    /// Labels of the decomposition identities that fail for `a`.
    pub fn failures(&self, ring: &Ring, a: &Element) -> Vec<String> {
        let one = ring.one();
        let a_star = ring.star(a);
        let mut failed = Vec::new();
        let mut need = |label: &str, holds: bool| {
            if !holds {
                failed.push(label.to_string());
            }
        };
        need("1=ax₁+u₁", ring.add(&ring.mul(a, &self.x1), &self.u1) == one);
        need("a*u₁=0", ring.is_zero(&ring.mul(&a_star, &self.u1)));
        need("1=x₂a*+u₂", ring.add(&ring.mul(&self.x2, &a_star), &self.u2) == one);
        need("u₂a=0", ring.is_zero(&ring.mul(&self.u2, a)));
        need("1=ay₁+v₁", ring.add(&ring.mul(a, &self.y1), &self.v1) == one);
        need("av₁=0", ring.is_zero(&ring.mul(a, &self.v1)));
        need("1=y₂a+v₂", ring.add(&ring.mul(&self.y2, a), &self.v2) == one);
        need("v₂a=0", ring.is_zero(&ring.mul(&self.v2, a)));
        failed
    }

    fn elements(&self) -> [(&'static str, &Element); 8] {
        [
            ("x1", &self.x1),
            ("x2", &self.x2),
            ("y1", &self.y1),
            ("y2", &self.y2),
            ("u1", &self.u1),
            ("u2", &self.u2),
            ("v1", &self.v1),
            ("v2", &self.v2),
        ]
    }

    pub fn to_json(&self, ring: &Ring) -> Value {
        let map = self.elements().into_iter().map(|(k, e)| (k.to_string(), ring.to_json(e))).collect();
        Value::Object(map)
    }
}

/// Finds a witness for `a`, or reports which decompositions cannot exist.
///
/// `x₁` is a {1,3}-inverse, `x₂ = x₁*`, and `y₁`, `y₂` solve `a = a²y₁`,
/// `a = y₂a²`.
pub fn find_decomposition(ring: &Ring, a: &Element) -> Result<DecompositionWitness, EngineError> {
    ring.check(a)?;
    let a2 = ring.square(a);
    let x1 = existing(one_three_inverse(ring, a))?;
    let y1 = ring.in_principal_ideal(a, &a2, IdealSide::Right)?;
    let y2 = ring.in_principal_ideal(a, &a2, IdealSide::Left)?;
    Hypotheses::default()
        .require("1=ax₁+u₁, a*u₁=0", x1.is_some())
        .require("1=x₂a*+u₂, u₂a=0", x1.is_some())
        .require("1=ay₁+v₁, av₁=0", y1.is_some())
        .require("1=y₂a+v₂, v₂a=0", y2.is_some())
        .finish()?;
    let x1 = x1.expect("checked");
    let x2 = ring.star(&x1);
    let w = DecompositionWitness::from_factors(ring, a, x1, x2, y1.expect("checked"), y2.expect("checked"));
    let failed = w.failures(ring, a);
    if !failed.is_empty() {
        return Err(EngineError::Internal(format!("constructed decomposition fails {failed:?}")));
    }
    Ok(w)
}

/// The four expressions for the core inverse and the byproducts of a
/// decomposition witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecompositionOutcome {
    /// `ay₁²ax₁`, `ay₁²ax₂*`, `y₂ax₁`, `y₂ax₂*`, all equal.
    pub expressions: [Element; 4],
    pub core: Element,
    /// `ay₁² = y₂²a`.
    pub group: Element,
    /// `x₁` and `x₂*`, both {1,3}-inverses (not necessarily equal).
    pub one_three: [Element; 2],
}

impl DecompositionOutcome {
    pub fn to_json(&self, ring: &Ring) -> Value {
        json!({
            "core": ring.to_json(&self.core),
            "expressions": self.expressions.iter().map(|e| ring.to_json(e)).collect::<Vec<_>>(),
            "group": ring.to_json(&self.group),
            "one_three": self.one_three.iter().map(|e| ring.to_json(e)).collect::<Vec<_>>(),
        })
    }
}

pub fn core_from_decomposition(
    ring: &Ring,
    a: &Element,
    w: &DecompositionWitness,
) -> Result<DecompositionOutcome, EngineError> {
    ring.check(a)?;
    for (_, e) in w.elements() {
        ring.check(e)?;
    }
    EngineError::precondition(w.failures(ring, a))?;

    let x2s = ring.star(&w.x2);
    let y1_sq = ring.square(&w.y1);
    let expressions = [
        ring.product(&[a, &y1_sq, a, &w.x1]),
        ring.product(&[a, &y1_sq, a, &x2s]),
        ring.product(&[&w.y2, a, &w.x1]),
        ring.product(&[&w.y2, a, &x2s]),
    ];
    for (i, e) in expressions.iter().enumerate().skip(1) {
        agree(&format!("decomposition expression {}", i + 1), e, &expressions[0])?;
    }
    let core = expressions[0].clone();
    agree("decomposition vs core inverse", &core, &core_inverse(ring, a)?)?;

    let group = ring.mul(a, &y1_sq);
    agree("ay₁² vs y₂²a", &group, &ring.mul(&ring.square(&w.y2), a))?;
    agree("ay₁² vs group inverse", &group, &group_inverse(ring, a)?)?;
    for x in [&w.x1, &x2s] {
        if !verify(ring, InverseKind::OneThree, a, x, Form::Definitional)?.is_valid() {
            return Err(EngineError::Internal("decomposition factor is not a {1,3}-inverse".into()));
        }
    }
    Ok(DecompositionOutcome { expressions, core, group, one_three: [w.x1.clone(), x2s] })
}

fn family_member(ring: &Ring, kind: InverseKind, a: &Element, x: Element) -> Result<Element, EngineError> {
    if verify(ring, kind, a, &x, Form::Definitional)?.is_valid() {
        Ok(x)
    } else {
        Err(EngineError::Internal(format!("family member is not a {kind} inverse")))
    }
}

fn check_all(ring: &Ring, es: &[&Element]) -> Result<(), EngineError> {
    for e in es {
        ring.check(e)?;
    }
    Ok(())
}

/// `r + (1 − ra)w`, given `1 = ar + u` with `a*u = 0`.
pub fn one_three_family(ring: &Ring, a: &Element, r: &Element, u: &Element, w: &Element) -> Result<Element, EngineError> {
    check_all(ring, &[a, r, u, w])?;
    let one = ring.one();
    Hypotheses::default()
        .require("1=ar+u", ring.add(&ring.mul(a, r), u) == one)
        .require("a*u=0", ring.is_zero(&ring.mul(&ring.star(a), u)))
        .finish()?;
    let x = ring.add(r, &ring.mul(&ring.sub(&one, &ring.mul(r, a)), w));
    family_member(ring, InverseKind::OneThree, a, x)
}

/// `s* + (1 − s*a)w`, given `1 = sa* + v` with `va = 0`.
pub fn one_three_family_from_left(
    ring: &Ring,
    a: &Element,
    s: &Element,
    v: &Element,
    w: &Element,
) -> Result<Element, EngineError> {
    check_all(ring, &[a, s, v, w])?;
    let one = ring.one();
    Hypotheses::default()
        .require("1=sa*+v", ring.add(&ring.mul(s, &ring.star(a)), v) == one)
        .require("va=0", ring.is_zero(&ring.mul(v, a)))
        .finish()?;
    let s_star = ring.star(s);
    let x = ring.add(&s_star, &ring.mul(&ring.sub(&one, &ring.mul(&s_star, a)), w));
    family_member(ring, InverseKind::OneThree, a, x)
}

/// `s + w(1 − as)`, given `1 = sa + v` with `va* = 0`.
pub fn one_four_family(ring: &Ring, a: &Element, s: &Element, v: &Element, w: &Element) -> Result<Element, EngineError> {
    check_all(ring, &[a, s, v, w])?;
    let one = ring.one();
    Hypotheses::default()
        .require("1=sa+v", ring.add(&ring.mul(s, a), v) == one)
        .require("va*=0", ring.is_zero(&ring.mul(v, &ring.star(a))))
        .finish()?;
    let x = ring.add(s, &ring.mul(w, &ring.sub(&one, &ring.mul(a, s))));
    family_member(ring, InverseKind::OneFour, a, x)
}

/// `r* + w(1 − ar*)`, given `1 = a*r + u` with `au = 0`.
pub fn one_four_family_from_right(
    ring: &Ring,
    a: &Element,
    r: &Element,
    u: &Element,
    w: &Element,
) -> Result<Element, EngineError> {
    check_all(ring, &[a, r, u, w])?;
    let one = ring.one();
    Hypotheses::default()
        .require("1=a*r+u", ring.add(&ring.mul(&ring.star(a), r), u) == one)
        .require("au=0", ring.is_zero(&ring.mul(a, u)))
        .finish()?;
    let r_star = ring.star(r);
    let x = ring.add(&r_star, &ring.mul(w, &ring.sub(&one, &ring.mul(a, &r_star))));
    family_member(ring, InverseKind::OneFour, a, x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{make_ring, RingDescriptor};

    fn z8() -> Ring {
        make_ring(RingDescriptor::zmod(8)).unwrap()
    }

    fn res(v: u64) -> Element {
        Element::Residue(v)
    }

    #[test]
    fn unit_in_z8() {
        let r = z8();
        let w = DecompositionWitness::from_factors(&r, &res(3), res(3), res(3), res(3), res(3));
        assert!(w.failures(&r, &res(3)).is_empty());
        assert_eq!(w.u1, res(0));
        let out = core_from_decomposition(&r, &res(3), &w).unwrap();
        assert_eq!(out.core, res(3));
        assert_eq!(out.expressions, [res(3), res(3), res(3), res(3)]);
        assert_eq!(out.group, res(3));
    }

    #[test]
    fn identity_everywhere() {
        for desc in [RingDescriptor::zmod(6), RingDescriptor::matrix_rational(2), RingDescriptor::matrix_zmod(2, 2)] {
            let r = make_ring(desc).unwrap();
            let one = r.one();
            let w = find_decomposition(&r, &one).unwrap();
            assert_eq!(core_from_decomposition(&r, &one, &w).unwrap().core, one);
        }
    }

    #[test]
    fn four_in_z8_has_no_witness() {
        match find_decomposition(&z8(), &res(4)) {
            Err(EngineError::PreconditionViolated { failed }) => {
                assert!(failed.contains(&"1=ay₁+v₁, av₁=0".to_string()), "{failed:?}")
            }
            other => panic!("{other:?}"),
        }
        let r = z8();
        let w = DecompositionWitness::from_factors(&r, &res(4), res(1), res(1), res(1), res(1));
        assert!(matches!(core_from_decomposition(&r, &res(4), &w), Err(EngineError::PreconditionViolated { .. })));
    }

    #[test]
    fn rational_decomposition() {
        let q = make_ring(RingDescriptor::matrix_rational(2)).unwrap();
        let a = q.matrix(&[&[1, 0], &[-1, 0]]).unwrap();
        let w = find_decomposition(&q, &a).unwrap();
        let out = core_from_decomposition(&q, &a, &w).unwrap();
        assert_eq!(out.core, q.rational_matrix(&[&[(1, 2), (-1, 2)], &[(-1, 2), (1, 2)]]).unwrap());
        assert_eq!(out.group, a);
    }

    #[test]
    fn families() {
        let r = z8();
        for w in r.elements().unwrap() {
            assert_eq!(one_three_family(&r, &res(3), &res(3), &res(0), &w).unwrap(), res(3));
        }
        let one = r.one();
        assert_eq!(one_three_family(&r, &one, &one, &res(0), &res(0)).unwrap(), one);

        let q = make_ring(RingDescriptor::matrix_rational(2)).unwrap();
        let a = q.matrix(&[&[1, 0], &[-1, 0]]).unwrap();
        let rr = q.rational_matrix(&[&[(1, 2), (-1, 2)], &[(0, 1), (0, 1)]]).unwrap();
        let u = q.sub(&q.one(), &q.mul(&a, &rr));
        let w1 = q.matrix(&[&[0, 0], &[1, 0]]).unwrap();
        let x = one_three_family(&q, &a, &rr, &u, &w1).unwrap();
        assert_ne!(x, rr);
        assert!(verify(&q, InverseKind::OneThree, &a, &x, Form::Definitional).unwrap().is_valid());

        let a4 = q.star(&a);
        let s = q.star(&rr);
        let v = q.sub(&q.one(), &q.mul(&s, &a4));
        let y = one_four_family(&q, &a4, &s, &v, &q.star(&w1)).unwrap();
        assert_eq!(y, q.star(&x));
        assert!(matches!(
            one_three_family(&q, &a, &rr, &q.zero(), &w1),
            Err(EngineError::PreconditionViolated { .. })
        ));
    }

    #[test]
    fn mirrored_families() {
        let q = make_ring(RingDescriptor::matrix_rational(2)).unwrap();
        let a = q.matrix(&[&[1, 0], &[-1, 0]]).unwrap();
        let x1 = one_three_inverse(&q, &a).unwrap();
        let s = q.star(&x1);
        let v = q.sub(&q.one(), &q.mul(&s, &q.star(&a)));
        let w = q.matrix(&[&[2, 1], &[0, 3]]).unwrap();
        let x = one_three_family_from_left(&q, &a, &s, &v, &w).unwrap();
        assert!(verify(&q, InverseKind::OneThree, &a, &x, Form::Definitional).unwrap().is_valid());

        let b = q.star(&a);
        let u = q.sub(&q.one(), &q.mul(&q.star(&b), &x1));
        let y = one_four_family_from_right(&q, &b, &x1, &u, &w).unwrap();
        assert!(verify(&q, InverseKind::OneFour, &b, &y, Form::Definitional).unwrap().is_valid());
    }
}
