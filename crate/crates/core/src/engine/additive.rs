use super::{
    agree, core_inverse, dual_core_inverse, existing, group_inverse, EngineError, Hypotheses,
};
use crate::ring::{Element, Ring};

fn mul_is_zero(ring: &Ring, x: &Element, y: &Element) -> bool {
    ring.is_zero(&ring.mul(x, y))
}

fn internal(what: &str) -> impl FnOnce(EngineError) -> EngineError + '_ {
    move |e| EngineError::Internal(format!("{what}: {e}"))
}

/// `(a + b)# = (1 − bb#)a# + b#(1 − aa#)` for group invertible `a`, `b` with
/// `ab = 0`.
pub fn group_sum(ring: &Ring, a: &Element, b: &Element) -> Result<Element, EngineError> {
    ring.check(a)?;
    ring.check(b)?;
    let ag = existing(group_inverse(ring, a))?;
    let bg = existing(group_inverse(ring, b))?;
    Hypotheses::default()
        .require("a∈R^#", ag.is_some())
        .require("b∈R^#", bg.is_some())
        .require("ab=0", mul_is_zero(ring, a, b))
        .finish()?;
    let (ag, bg) = (ag.expect("checked"), bg.expect("checked"));
    let one = ring.one();
    let x = ring.add(
        &ring.mul(&ring.sub(&one, &ring.mul(b, &bg)), &ag),
        &ring.mul(&bg, &ring.sub(&one, &ring.mul(a, &ag))),
    );
    let direct = group_inverse(ring, &ring.add(a, b)).map_err(internal("a + b should be group invertible"))?;
    agree("group sum formula", &x, &direct)?;
    Ok(x)
}

fn core_sum_parts(ring: &Ring, a: &Element, b: &Element, commuting: bool) -> Result<(Element, Element), EngineError> {
    ring.check(a)?;
    ring.check(b)?;
    let ac = existing(core_inverse(ring, a))?;
    let bc = existing(core_inverse(ring, b))?;
    let mut hyp = Hypotheses::default();
    hyp.require("a∈R^⊕", ac.is_some())
        .require("b∈R^⊕", bc.is_some())
        .require("ab=0", mul_is_zero(ring, a, b))
        .require("a*b=0", mul_is_zero(ring, &ring.star(a), b));
    if commuting {
        hyp.require("ba=0", mul_is_zero(ring, b, a));
    }
    hyp.finish()?;
    let (ac, bc) = (ac.expect("checked"), bc.expect("checked"));
    for (label, x, y) in [("ab^⊕=0", a, &bc), ("b^⊕a=0", &bc, a), ("a^⊕b=0", &ac, b)] {
        if !mul_is_zero(ring, x, y) {
            return Err(EngineError::Internal(format!("{label} fails under the hypotheses")));
        }
    }
    Ok((ac, bc))
}

/// `(a + b)⊕ = (1 − b⊕b)a⊕ + b⊕` for core invertible `a`, `b` with `ab = 0`
/// and `a*b = 0`.
pub fn core_sum(ring: &Ring, a: &Element, b: &Element) -> Result<Element, EngineError> {
    let (ac, bc) = core_sum_parts(ring, a, b, false)?;
    let b_pi = ring.sub(&ring.one(), &ring.mul(&bc, b));
    let x = ring.add(&ring.mul(&b_pi, &ac), &bc);
    let direct = core_inverse(ring, &ring.add(a, b)).map_err(internal("a + b should be core invertible"))?;
    agree("core sum formula", &x, &direct)?;
    Ok(x)
}

/// `(a + b)⊕ = a⊕ + b⊕` when additionally `ba = 0`.
pub fn core_sum_commuting(ring: &Ring, a: &Element, b: &Element) -> Result<Element, EngineError> {
    let (ac, bc) = core_sum_parts(ring, a, b, true)?;
    let x = ring.add(&ac, &bc);
    agree("commuting core sum vs general formula", &x, &core_sum(ring, a, b)?)?;
    Ok(x)
}

fn dual_core_sum_parts(
    ring: &Ring,
    a: &Element,
    b: &Element,
    commuting: bool,
) -> Result<(Element, Element), EngineError> {
    ring.check(a)?;
    ring.check(b)?;
    let ad = existing(dual_core_inverse(ring, a))?;
    let bd = existing(dual_core_inverse(ring, b))?;
    let mut hyp = Hypotheses::default();
    hyp.require("a∈R_⊕", ad.is_some())
        .require("b∈R_⊕", bd.is_some())
        .require("ab=0", mul_is_zero(ring, a, b))
        .require("ab*=0", mul_is_zero(ring, a, &ring.star(b)));
    if commuting {
        hyp.require("ba=0", mul_is_zero(ring, b, a));
    }
    hyp.finish()?;
    Ok((ad.expect("checked"), bd.expect("checked")))
}

/// `(a + b)_⊕ = a_⊕ + b_⊕(1 − aa_⊕)` for dual core invertible `a`, `b` with
/// `ab = 0` and `ab* = 0`. Also checked against `(core_sum(b*, a*))*`.
pub fn dual_core_sum(ring: &Ring, a: &Element, b: &Element) -> Result<Element, EngineError> {
    let (ad, bd) = dual_core_sum_parts(ring, a, b, false)?;
    let a_p = ring.sub(&ring.one(), &ring.mul(a, &ad));
    let x = ring.add(&ad, &ring.mul(&bd, &a_p));
    let direct =
        dual_core_inverse(ring, &ring.add(a, b)).map_err(internal("a + b should be dual core invertible"))?;
    agree("dual core sum formula", &x, &direct)?;
    let transported = core_sum(ring, &ring.star(b), &ring.star(a)).map_err(internal("core sum of (b*, a*)"))?;
    agree("dual core sum vs starred core sum", &x, &ring.star(&transported))?;
    Ok(x)
}

/// `(a + b)_⊕ = a_⊕ + b_⊕` when additionally `ba = 0`.
pub fn dual_core_sum_commuting(ring: &Ring, a: &Element, b: &Element) -> Result<Element, EngineError> {
    let (ad, bd) = dual_core_sum_parts(ring, a, b, true)?;
    let x = ring.add(&ad, &bd);
    agree("commuting dual core sum vs general formula", &x, &dual_core_sum(ring, a, b)?)?;
    Ok(x)
}
