use super::{verify, EngineError, Form, GroupFailure, InverseKind, MissingFactor};
use crate::par;
use crate::ring::{Element, IdealSide, Ring};

fn ensure_valid(ring: &Ring, kind: InverseKind, form: Form, a: &Element, x: &Element) -> Result<(), EngineError> {
    let cert = verify(ring, kind, a, x, form)?;
    if cert.is_valid() {
        Ok(())
    } else {
        let failed: Vec<&str> = cert.equations.iter().filter(|e| !e.holds).map(|e| e.label.as_str()).collect();
        Err(EngineError::Internal(format!("computed {kind} inverse fails {failed:?}")))
    }
}

/// Some inner inverse of `a`.
pub fn inner_inverse(ring: &Ring, a: &Element) -> Result<Element, EngineError> {
    ring.inner_inverse(a)?.ok_or(EngineError::NotRegular)
}

/// Group inverse through the unit criterion.
///
/// With an inner inverse `g`, `a` is group invertible exactly when
/// `u = a²g + 1 − ag` is a unit, and then `a# = u⁻²a`. The mirrored
/// `v = ga² + 1 − ga` must agree: `a# = av⁻²`.
pub fn group_inverse(ring: &Ring, a: &Element) -> Result<Element, EngineError> {
    ring.check(a)?;
    let g = ring.inner_inverse(a)?.ok_or(EngineError::NotGroupInvertible(GroupFailure::NotRegular))?;
    let one = ring.one();
    let a2 = ring.square(a);
    let u = ring.sub(&ring.add(&ring.mul(&a2, &g), &one), &ring.mul(a, &g));
    let v = ring.sub(&ring.add(&ring.mul(&g, &a2), &one), &ring.mul(&g, a));
    match (ring.unit_inverse(&u)?, ring.unit_inverse(&v)?) {
        (Some(ui), Some(vi)) => {
            let left = ring.mul(&ring.square(&ui), a);
            let right = ring.mul(a, &ring.square(&vi));
            if left != right {
                return Err(EngineError::Internal("u⁻²a and av⁻² disagree".into()));
            }
            ensure_valid(ring, InverseKind::Group, Form::Definitional, a, &left)?;
            Ok(left)
        }
        (None, None) => Err(EngineError::NotGroupInvertible(GroupFailure::NotAUnit)),
        _ => Err(EngineError::Internal("u and v disagree on invertibility".into())),
    }
}

/// A {1,3}-inverse: `axa = a` and `(ax)* = ax`.
///
/// Field matrices solve `(a*a)·x = a*`, which is solvable exactly when `a`
/// has a {1,3}-inverse, and every solution is one. Other finite rings return
/// the canonical-order-first solution.
pub fn one_three_inverse(ring: &Ring, a: &Element) -> Result<Element, EngineError> {
    ring.check(a)?;
    let x = if ring.is_field_matrix_ring() {
        let a_star = ring.star(a);
        let gram = ring.mul(&a_star, a);
        ring.in_principal_ideal(&a_star, &gram, IdealSide::Right)?.ok_or(EngineError::Not13Invertible)?
    } else {
        let f = ring.finite()?;
        let ai = f.index(a);
        let hit = par::find_first(f.len(), |x| {
            let ax = f.mul(ai, x);
            f.mul(ax, ai) == ai && f.star(ax) == ax
        });
        f.element(hit.ok_or(EngineError::Not13Invertible)?)
    };
    ensure_valid(ring, InverseKind::OneThree, Form::Definitional, a, &x)?;
    Ok(x)
}

/// A {1,4}-inverse: `axa = a` and `(xa)* = xa`. Mirror of
/// [`one_three_inverse`]: field matrices solve `x·(aa*) = a*`.
pub fn one_four_inverse(ring: &Ring, a: &Element) -> Result<Element, EngineError> {
    ring.check(a)?;
    let x = if ring.is_field_matrix_ring() {
        let a_star = ring.star(a);
        let gram = ring.mul(a, &a_star);
        ring.in_principal_ideal(&a_star, &gram, IdealSide::Left)?.ok_or(EngineError::Not14Invertible)?
    } else {
        let f = ring.finite()?;
        let ai = f.index(a);
        let hit = par::find_first(f.len(), |x| {
            let xa = f.mul(x, ai);
            f.mul(ai, xa) == ai && f.star(xa) == xa
        });
        f.element(hit.ok_or(EngineError::Not14Invertible)?)
    };
    ensure_valid(ring, InverseKind::OneFour, Form::Definitional, a, &x)?;
    Ok(x)
}

fn core_factors(ring: &Ring, a: &Element) -> Result<(Element, Element), EngineError> {
    let group = group_inverse(ring, a).map_err(|e| match e {
        EngineError::NotGroupInvertible(_) => EngineError::NotCoreInvertible { because: MissingFactor::Group },
        other => other,
    })?;
    let one_three = one_three_inverse(ring, a).map_err(|e| match e {
        EngineError::Not13Invertible => EngineError::NotCoreInvertible { because: MissingFactor::OneThree },
        other => other,
    })?;
    Ok((group, one_three))
}

/// Core inverse `a# · a · a(1,3)`; exists exactly when both factors do.
pub fn core_inverse(ring: &Ring, a: &Element) -> Result<Element, EngineError> {
    ring.check(a)?;
    let (group, one_three) = core_factors(ring, a)?;
    let x = ring.product(&[&group, a, &one_three]);
    ensure_valid(ring, InverseKind::Core, Form::FiveEq, a, &x)?;
    Ok(x)
}

/// Dual core inverse `a(1,4) · a · a#`, cross-checked against `((a*)⊕)*`.
pub fn dual_core_inverse(ring: &Ring, a: &Element) -> Result<Element, EngineError> {
    ring.check(a)?;
    let group = group_inverse(ring, a).map_err(|e| match e {
        EngineError::NotGroupInvertible(_) => EngineError::NotDualCoreInvertible { because: MissingFactor::Group },
        other => other,
    })?;
    let one_four = one_four_inverse(ring, a).map_err(|e| match e {
        EngineError::Not14Invertible => EngineError::NotDualCoreInvertible { because: MissingFactor::OneFour },
        other => other,
    })?;
    let x = ring.product(&[&one_four, a, &group]);
    ensure_valid(ring, InverseKind::DualCore, Form::FiveEq, a, &x)?;
    let transported = core_inverse(ring, &ring.star(a))
        .map_err(|e| EngineError::Internal(format!("a* should be core invertible: {e}")))?;
    if ring.star(&transported) != x {
        return Err(EngineError::Internal("dual core inverse differs from ((a*)⊕)*".into()));
    }
    Ok(x)
}

/// Dispatches on `kind`.
pub fn compute(ring: &Ring, kind: InverseKind, a: &Element) -> Result<Element, EngineError> {
    match kind {
        InverseKind::Inner => inner_inverse(ring, a),
        InverseKind::Group => group_inverse(ring, a),
        InverseKind::OneThree => one_three_inverse(ring, a),
        InverseKind::OneFour => one_four_inverse(ring, a),
        InverseKind::Core => core_inverse(ring, a),
        InverseKind::DualCore => dual_core_inverse(ring, a),
    }
}
