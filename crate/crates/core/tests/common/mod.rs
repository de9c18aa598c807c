#![allow(dead_code)]

use ginv_core::ring::{Element, Finite, Ring, RingDescriptor};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;

pub fn ring(desc: RingDescriptor) -> Ring {
    Ring::new(desc).expect("valid ring")
}

/// Every ring the exhaustive suites run over.
pub fn test_rings() -> Vec<Ring> {
    let mut out: Vec<Ring> = (2..=16).map(|n| ring(RingDescriptor::zmod(n))).collect();
    out.push(ring(RingDescriptor::matrix_zmod(2, 2)));
    out.push(ring(RingDescriptor::matrix_zmod(3, 2)));
    out.push(ring(RingDescriptor::matrix_zmod(4, 2)));
    out.push(ring(RingDescriptor::matrix_gf(2, 2)));
    out.push(ring(RingDescriptor::matrix_gf(3, 2)));
    out
}

/// Finite rings small enough for suites that are cubic in the ring size.
pub fn small_rings() -> Vec<Ring> {
    test_rings().into_iter().filter(|r| r.size().unwrap() <= 81).collect()
}

pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// A `dim`×`dim` rational matrix with small entries, many of them zero so
/// that singular matrices show up often.
pub fn random_rational(rng: &mut impl Rng, dim: usize) -> Element {
    Element::Rational(
        (0..dim * dim)
            .map(|_| {
                if rng.gen_bool(0.35) {
                    q(0, 1)
                } else {
                    q(rng.gen_range(-4..=4), rng.gen_range(1..=3))
                }
            })
            .collect(),
    )
}

/// A random matrix of rank at most `r`, built as a product of `dim`×`r` and
/// `r`×`dim` factors.
pub fn random_low_rank(ring: &Ring, rng: &mut impl Rng, dim: usize, r: usize) -> Element {
    let left: Vec<BigRational> = (0..dim * r).map(|_| q(rng.gen_range(-3..=3), 1)).collect();
    let right: Vec<BigRational> = (0..r * dim).map(|_| q(rng.gen_range(-3..=3), rng.gen_range(1..=2))).collect();
    let mut out = vec![q(0, 1); dim * dim];
    for i in 0..dim {
        for j in 0..dim {
            for k in 0..r {
                out[i * dim + j] += &left[i * r + k] * &right[k * dim + j];
            }
        }
    }
    let e = Element::Rational(out);
    assert!(ring.contains(&e));
    e
}

// Plain definitional searches, written against ring arithmetic only.

pub fn right_ideal(f: &Finite<'_>, a: usize) -> Vec<bool> {
    let mut s = vec![false; f.len()];
    for w in 0..f.len() {
        s[f.mul(a, w)] = true;
    }
    s
}

pub fn left_ideal(f: &Finite<'_>, a: usize) -> Vec<bool> {
    let mut s = vec![false; f.len()];
    for w in 0..f.len() {
        s[f.mul(w, a)] = true;
    }
    s
}

/// `x` with `axa = a`, `xR = aR`, `Rx = Ra*`.
pub fn brute_core(f: &Finite<'_>, a: usize) -> Vec<usize> {
    let ar = right_ideal(f, a);
    let ras = left_ideal(f, f.star(a));
    (0..f.len())
        .filter(|&x| f.mul3(a, x, a) == a && right_ideal(f, x) == ar && left_ideal(f, x) == ras)
        .collect()
}

/// `x` with `axa = a`, `xax = x`, `ax = xa`.
pub fn brute_group(f: &Finite<'_>, a: usize) -> Vec<usize> {
    (0..f.len()).filter(|&x| f.mul3(a, x, a) == a && f.mul3(x, a, x) == x && f.mul(a, x) == f.mul(x, a)).collect()
}

/// `x` with `axa = a`, `(ax)* = ax`.
pub fn brute_one_three(f: &Finite<'_>, a: usize) -> Vec<usize> {
    (0..f.len()).filter(|&x| f.mul3(a, x, a) == a && f.star(f.mul(a, x)) == f.mul(a, x)).collect()
}

/// `x` with `axa = a`, `(xa)* = xa`.
pub fn brute_one_four(f: &Finite<'_>, a: usize) -> Vec<usize> {
    (0..f.len()).filter(|&x| f.mul3(a, x, a) == a && f.star(f.mul(x, a)) == f.mul(x, a)).collect()
}

pub fn elements_of(f: &Finite<'_>, idx: &[usize]) -> Vec<Element> {
    idx.iter().map(|&i| f.element(i)).collect()
}
