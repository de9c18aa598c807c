//! Brute-force ground truth over finite rings.
//!
//! Everything here works on element indices and scans the whole ring; nothing
//! calls into [`crate::engine`] or the linear-algebra solvers, so the oracle can
//! be used to check them.

use std::fmt::Write as _;
use std::sync::OnceLock;

use serde_json::{json, Value};
use thiserror::Error;

use crate::engine::{Form, InverseKind};
use crate::par;
use crate::ring::{Element, Finite, Ring, RingDescriptor, RingError, TABLE_CACHE_LIMIT};

/// Largest ring on which pair-quantified scans run (`|R|² ≤ 2²⁰`).
pub const PAIR_SUITE_LIMIT: usize = 1 << 10;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error("no such element exists")]
    NoneExists,
    #[error("invariant violated: {0}")]
    InvariantViolated(String),
}

impl OracleError {
    pub fn code(&self) -> &'static str {
        match self {
            OracleError::Ring(RingError::InfiniteRing) => "InfiniteRing",
            OracleError::Ring(RingError::RingTooLarge { .. }) => "RingTooLarge",
            OracleError::Ring(_) => "RingError",
            OracleError::NoneExists => "NoneExists",
            OracleError::InvariantViolated(_) => "InvariantViolated",
        }
    }
}

/// Which of the two decomposition families [`FiniteOracle::decomposition_holds`] tests.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DecompositionKind {
    /// Characterizes core invertibility.
    Core,
    /// Characterizes dual core invertibility.
    Dual,
}

type Bits = Vec<bool>;

/// Exhaustive search over one finite ring.
pub struct FiniteOracle<'r> {
    f: Finite<'r>,
    right: Vec<OnceLock<Bits>>,
    left: Vec<OnceLock<Bits>>,
}

impl<'r> FiniteOracle<'r> {
    pub fn new(ring: &'r Ring) -> Result<Self, OracleError> {
        let f = ring.finite()?;
        let cache = if f.len() <= TABLE_CACHE_LIMIT { f.len() } else { 0 };
        Ok(FiniteOracle {
            f,
            right: (0..cache).map(|_| OnceLock::new()).collect(),
            left: (0..cache).map(|_| OnceLock::new()).collect(),
        })
    }

    pub fn ring(&self) -> &'r Ring {
        self.f.ring()
    }

    pub fn len(&self) -> usize {
        self.f.len()
    }

    pub fn is_empty(&self) -> bool {
        self.f.is_empty()
    }

    fn index(&self, e: &Element) -> Result<usize, OracleError> {
        Ok(self.ring().index_of(e)?)
    }

    fn elements(&self, idx: Vec<usize>) -> Vec<Element> {
        idx.into_iter().map(|i| self.f.element(i)).collect()
    }

    fn pair_guard(&self) -> Result<(), OracleError> {
        if self.len() > PAIR_SUITE_LIMIT {
            return Err(RingError::RingTooLarge { size: self.len().to_string(), limit: PAIR_SUITE_LIMIT }.into());
        }
        Ok(())
    }

    // ---- principal ideals and annihilators as bitsets ----------------------

    fn scan_right(&self, g: usize) -> Bits {
        let mut bits = vec![false; self.len()];
        for w in 0..self.len() {
            bits[self.f.mul(g, w)] = true;
        }
        bits
    }

    fn scan_left(&self, g: usize) -> Bits {
        let mut bits = vec![false; self.len()];
        for w in 0..self.len() {
            bits[self.f.mul(w, g)] = true;
        }
        bits
    }

    /// `x ∈ gR`
    fn in_right(&self, x: usize, g: usize) -> bool {
        match self.right.get(g) {
            Some(cell) => cell.get_or_init(|| self.scan_right(g))[x],
            None => (0..self.len()).any(|w| self.f.mul(g, w) == x),
        }
    }

    /// `x ∈ Rg`
    fn in_left(&self, x: usize, g: usize) -> bool {
        match self.left.get(g) {
            Some(cell) => cell.get_or_init(|| self.scan_left(g))[x],
            None => (0..self.len()).any(|w| self.f.mul(w, g) == x),
        }
    }

    fn right_ideal(&self, g: usize) -> Bits {
        match self.right.get(g) {
            Some(cell) => cell.get_or_init(|| self.scan_right(g)).clone(),
            None => self.scan_right(g),
        }
    }

    fn left_ideal(&self, g: usize) -> Bits {
        match self.left.get(g) {
            Some(cell) => cell.get_or_init(|| self.scan_left(g)).clone(),
            None => self.scan_left(g),
        }
    }

    /// `g° = {x : gx = 0}`
    fn right_annihilator(&self, g: usize) -> Bits {
        let z = self.f.zero();
        (0..self.len()).map(|x| self.f.mul(g, x) == z).collect()
    }

    /// `°g = {x : xg = 0}`
    fn left_annihilator(&self, g: usize) -> Bits {
        let z = self.f.zero();
        (0..self.len()).map(|x| self.f.mul(x, g) == z).collect()
    }

    /// `S + T = R`
    fn sum_covers(&self, s: &Bits, t: &Bits) -> bool {
        let members: Vec<usize> = (0..self.len()).filter(|&i| s[i]).collect();
        (0..self.len()).all(|r| members.iter().any(|&m| t[self.f.sub(r, m)]))
    }

    /// `S ⊕ T = R`: the sum covers and the intersection is `{0}`.
    fn direct_sum(&self, s: &Bits, t: &Bits) -> bool {
        let z = self.f.zero();
        (0..self.len()).all(|i| !(s[i] && t[i]) || i == z) && self.sum_covers(s, t)
    }

    // ---- inverse searches ---------------------------------------------------

    fn satisfies(&self, kind: InverseKind, form: Form, a: usize, x: usize) -> bool {
        let f = &self.f;
        let ax = f.mul(a, x);
        let xa = f.mul(x, a);
        let inner = || f.mul(ax, a) == a;
        let outer = || f.mul(xa, x) == x;
        let star_ax = || f.star(ax) == ax;
        let star_xa = || f.star(xa) == xa;
        let a_star = f.star(a);
        match (kind, form) {
            (InverseKind::Inner, _) => inner(),
            (InverseKind::Group, _) => ax == xa && inner() && outer(),
            (InverseKind::OneThree, _) => inner() && star_ax(),
            (InverseKind::OneFour, _) => inner() && star_xa(),
            (InverseKind::Core, Form::Definitional) => {
                inner()
                    && self.in_right(x, a)
                    && self.in_left(x, a_star)
                    && self.in_right(a, x)
                    && self.in_left(a_star, x)
            }
            (InverseKind::Core, Form::FiveEq) => {
                inner() && outer() && star_ax() && f.mul(xa, a) == a && f.mul(ax, x) == x
            }
            (InverseKind::Core, Form::ThreeEq) => star_ax() && f.mul(xa, a) == a && f.mul(ax, x) == x,
            (InverseKind::DualCore, Form::Definitional) => {
                inner()
                    && self.in_right(x, a_star)
                    && self.in_left(x, a)
                    && self.in_right(a_star, x)
                    && self.in_left(a, x)
            }
            (InverseKind::DualCore, Form::FiveEq) => {
                inner() && outer() && star_xa() && f.mul(a, ax) == a && f.mul(x, xa) == x
            }
            (InverseKind::DualCore, Form::ThreeEq) => star_xa() && f.mul(a, ax) == a && f.mul(x, xa) == x,
        }
    }

    /// Every `x` satisfying the chosen characterization of `kind` for `a`, in
    /// canonical order. Kinds other than core and dual core have a single
    /// characterization, used for every form.
    pub fn solutions(&self, kind: InverseKind, a: &Element, form: Form) -> Result<Vec<Element>, OracleError> {
        let ai = self.index(a)?;
        Ok(self.elements(par::filter(self.len(), |x| self.satisfies(kind, form, ai, x))))
    }

    /// Every `x` satisfying the defining equations of `kind` for `a`.
    pub fn find_all(&self, kind: InverseKind, a: &Element) -> Result<Vec<Element>, OracleError> {
        self.solutions(kind, a, Form::Definitional)
    }

    /// Canonical-order-first solution of the defining equations.
    pub fn find_first(&self, kind: InverseKind, a: &Element) -> Result<Option<Element>, OracleError> {
        let ai = self.index(a)?;
        Ok(par::find_first(self.len(), |x| self.satisfies(kind, Form::Definitional, ai, x)).map(|x| self.f.element(x)))
    }

    // ---- classification -----------------------------------------------------

    fn first_index(&self, kind: InverseKind, a: usize) -> Option<usize> {
        (0..self.len()).find(|&x| self.satisfies(kind, Form::Definitional, a, x))
    }

    fn classify_row(&self, a: usize) -> Result<ClassRow, OracleError> {
        let group = self.first_index(InverseKind::Group, a);
        let one_three = self.first_index(InverseKind::OneThree, a);
        let one_four = self.first_index(InverseKind::OneFour, a);
        let core = self.first_index(InverseKind::Core, a);
        let dual_core = self.first_index(InverseKind::DualCore, a);
        let el = |i: Option<usize>| i.map(|i| self.f.element(i));
        let row = ClassRow {
            element: self.f.element(a),
            group: el(group),
            one_three: el(one_three),
            one_four: el(one_four),
            core: el(core),
            dual_core: el(dual_core),
        };
        if row.in_core() != (row.in_sharp() && row.in_one_three()) {
            return Err(OracleError::InvariantViolated(format!(
                "core invertibility of {} differs from group ∧ {{1,3}}",
                self.ring().render(&row.element)
            )));
        }
        if row.in_dual_core() != (row.in_sharp() && row.in_one_four()) {
            return Err(OracleError::InvariantViolated(format!(
                "dual core invertibility of {} differs from group ∧ {{1,4}}",
                self.ring().render(&row.element)
            )));
        }
        Ok(row)
    }

    /// Membership of every element in each inverse class, with witnesses.
    /// Refused beyond [`PAIR_SUITE_LIMIT`] elements.
    pub fn classify(&self) -> Result<ClassificationReport, OracleError> {
        self.pair_guard()?;
        let rows = par::map(self.len(), |a| self.classify_row(a)).into_iter().collect::<Result<Vec<_>, _>>()?;
        Ok(ClassificationReport { ring: self.ring().descriptor().clone(), rows })
    }

    // ---- ideal decompositions -----------------------------------------------

    /// One of the nine equivalent decomposition conditions for (dual) core
    /// invertibility. Variant 1 is invertibility itself; variants 2 to 9 pair
    /// one of four conditions on `a*` with one of two conditions on `a`.
    pub fn decomposition_holds(
        &self,
        a: &Element,
        variant: u8,
        kind: DecompositionKind,
    ) -> Result<bool, OracleError> {
        if !(1..=9).contains(&variant) {
            return Err(RingError::InvalidElement(format!("decomposition variant {variant} is not in 1..=9")).into());
        }
        let ai = self.index(a)?;
        let si = self.f.star(ai);
        if variant == 1 {
            let k = match kind {
                DecompositionKind::Core => InverseKind::Core,
                DecompositionKind::Dual => InverseKind::DualCore,
            };
            return Ok(self.first_index(k, ai).is_some());
        }
        let k = variant - 2;
        let direct_first = k.is_multiple_of(2);
        let right_sided = (k / 2).is_multiple_of(2);
        let second_on_right = k < 4;
        let (s, t) = match (kind, right_sided) {
            // aR ∘ (a*)°  or  Ra* ∘ °a
            (DecompositionKind::Core, true) => (self.right_ideal(ai), self.right_annihilator(si)),
            (DecompositionKind::Core, false) => (self.left_ideal(si), self.left_annihilator(ai)),
            // a*R ∘ a°  or  Ra ∘ °(a*)
            (DecompositionKind::Dual, true) => (self.right_ideal(si), self.right_annihilator(ai)),
            (DecompositionKind::Dual, false) => (self.left_ideal(ai), self.left_annihilator(si)),
        };
        let first = if direct_first { self.direct_sum(&s, &t) } else { self.sum_covers(&s, &t) };
        if !first {
            return Ok(false);
        }
        Ok(if second_on_right {
            self.direct_sum(&self.right_ideal(ai), &self.right_annihilator(ai))
        } else {
            self.direct_sum(&self.left_ideal(ai), &self.left_annihilator(ai))
        })
    }

    // ---- direct finiteness and projections ----------------------------------

    /// Scans all pairs for `ab = 1` with `ba ≠ 1`; returns the first such pair.
    pub fn direct_finiteness_counterexample(&self) -> Result<Option<(Element, Element)>, OracleError> {
        self.pair_guard()?;
        let one = self.f.one();
        let n = self.len();
        let hit = par::find_map_first(n, |a| {
            (0..n).find(|&b| self.f.mul(a, b) == one && self.f.mul(b, a) != one).map(|b| (a, b))
        });
        Ok(hit.map(|(a, b)| (self.f.element(a), self.f.element(b))))
    }

    pub fn is_direct_finite(&self) -> Result<bool, OracleError> {
        Ok(self.direct_finiteness_counterexample()?.is_none())
    }

    /// All `p` with `p² = p = p*` and `pR = aR`.
    pub fn projections(&self, a: &Element) -> Result<Vec<Element>, OracleError> {
        let ai = self.index(a)?;
        let target = self.right_ideal(ai);
        let hits = par::filter(self.len(), |p| {
            self.f.mul(p, p) == p && self.f.star(p) == p && self.right_ideal(p) == target
        });
        Ok(self.elements(hits))
    }

    /// The unique self-adjoint idempotent generating `aR`. Exists exactly when
    /// `a` has a {1,3}-inverse; anything else is reported as a violation.
    pub fn unique_projection(&self, a: &Element) -> Result<Element, OracleError> {
        let ps = self.projections(a)?;
        let ai = self.index(a)?;
        let regular_13 = self.first_index(InverseKind::OneThree, ai).is_some();
        match (ps.len(), regular_13) {
            (1, true) => Ok(ps.into_iter().next().expect("one element")),
            (0, false) => Err(OracleError::NoneExists),
            (k, _) => Err(OracleError::InvariantViolated(format!(
                "{k} projections generate {}R while {{1,3}}-invertibility is {regular_13}",
                self.ring().render(a)
            ))),
        }
    }
}

/// One row of a [`ClassificationReport`]: canonical-first witnesses per class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassRow {
    pub element: Element,
    pub group: Option<Element>,
    pub one_three: Option<Element>,
    pub one_four: Option<Element>,
    pub core: Option<Element>,
    pub dual_core: Option<Element>,
}

impl ClassRow {
    pub fn in_sharp(&self) -> bool {
        self.group.is_some()
    }

    pub fn in_one_three(&self) -> bool {
        self.one_three.is_some()
    }

    pub fn in_one_four(&self) -> bool {
        self.one_four.is_some()
    }

    pub fn in_core(&self) -> bool {
        self.core.is_some()
    }

    pub fn in_dual_core(&self) -> bool {
        self.dual_core.is_some()
    }

    pub fn witness(&self, kind: InverseKind) -> Option<&Element> {
        match kind {
            InverseKind::Group => self.group.as_ref(),
            InverseKind::OneThree => self.one_three.as_ref(),
            InverseKind::OneFour => self.one_four.as_ref(),
            InverseKind::Core => self.core.as_ref(),
            InverseKind::DualCore => self.dual_core.as_ref(),
            InverseKind::Inner => None,
        }
    }
}

const CLASSIFIED: [InverseKind; 5] =
    [InverseKind::Group, InverseKind::OneThree, InverseKind::OneFour, InverseKind::Core, InverseKind::DualCore];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassificationReport {
    pub ring: RingDescriptor,
    pub rows: Vec<ClassRow>,
}

impl ClassificationReport {
    pub fn row(&self, e: &Element) -> Option<&ClassRow> {
        self.rows.iter().find(|r| &r.element == e)
    }

    /// Elements with a core inverse, in canonical order.
    pub fn core_invertible(&self) -> Vec<&Element> {
        self.rows.iter().filter(|r| r.in_core()).map(|r| &r.element).collect()
    }

    pub fn to_json(&self, ring: &Ring) -> Value {
        let opt = |e: &Option<Element>| e.as_ref().map_or(Value::Null, |e| ring.to_json(e));
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                json!({
                    "element": ring.to_json(&r.element),
                    "in_R_sharp": r.in_sharp(),
                    "in_R_13": r.in_one_three(),
                    "in_R_14": r.in_one_four(),
                    "in_R_core": r.in_core(),
                    "in_R_dualcore": r.in_dual_core(),
                    "witnesses": {
                        "group": opt(&r.group),
                        "one_three": opt(&r.one_three),
                        "one_four": opt(&r.one_four),
                        "core": opt(&r.core),
                        "dual_core": opt(&r.dual_core),
                    },
                })
            })
            .collect();
        json!({ "ring": self.ring.to_string(), "size": self.rows.len(), "rows": rows })
    }

    /// Fixed-width text table: element, five membership flags, witnesses.
    pub fn to_table(&self, ring: &Ring) -> String {
        let render = |e: &Option<Element>| e.as_ref().map_or_else(|| "-".to_string(), |e| ring.render(e));
        let header: Vec<String> = ["element", "#", "13", "14", "core", "dual", "a#", "a(1,3)", "a(1,4)", "core inv", "dual core inv"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        let mut lines = vec![header];
        for r in &self.rows {
            let flag = |b: bool| if b { "y" } else { "n" }.to_string();
            let mut line = vec![ring.render(&r.element)];
            line.extend(CLASSIFIED.iter().map(|k| flag(r.witness(*k).is_some())));
            line.extend([&r.group, &r.one_three, &r.one_four, &r.core, &r.dual_core].into_iter().map(render));
            lines.push(line);
        }
        let widths: Vec<usize> =
            (0..lines[0].len()).map(|c| lines.iter().map(|l| l[c].chars().count()).max().unwrap_or(0)).collect();
        let mut out = format!("ring {} ({} elements)\n", self.ring, self.rows.len());
        for line in lines {
            let cells: Vec<String> =
                line.iter().zip(&widths).map(|(cell, w)| format!("{cell}{}", " ".repeat(w - cell.chars().count()))).collect();
            let _ = writeln!(out, "{}", cells.join("  ").trim_end());
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::make_ring;

    fn res(v: u64) -> Element {
        Element::Residue(v)
    }

    #[test]
    fn find_all_in_z8() {
        let r = make_ring(RingDescriptor::zmod(8)).unwrap();
        let o = FiniteOracle::new(&r).unwrap();
        assert_eq!(o.find_all(InverseKind::Core, &res(3)).unwrap(), [res(3)]);
        assert!(o.find_all(InverseKind::Core, &res(4)).unwrap().is_empty());
        assert_eq!(o.find_all(InverseKind::Inner, &res(0)).unwrap(), r.elements().unwrap());
    }

    #[test]
    fn z8_core_invertible_elements() {
        let r = make_ring(RingDescriptor::zmod(8)).unwrap();
        let report = FiniteOracle::new(&r).unwrap().classify().unwrap();
        let got: Vec<_> = report.core_invertible().into_iter().cloned().collect();
        assert_eq!(got, [0, 1, 3, 5, 7].map(res));
    }

    #[test]
    fn m2_z4_rows() {
        let r = make_ring(RingDescriptor::matrix_zmod(4, 2)).unwrap();
        let report = FiniteOracle::new(&r).unwrap().classify().unwrap();
        let a = r.matrix(&[&[3, 1], &[0, 0]]).unwrap();
        let b = r.matrix(&[&[0, 0], &[1, 1]]).unwrap();
        assert!(report.row(&a).unwrap().in_core());
        assert!(!report.row(&r.add(&a, &b)).unwrap().in_one_three());
    }

    #[test]
    fn decompositions_in_z8() {
        let r = make_ring(RingDescriptor::zmod(8)).unwrap();
        let o = FiniteOracle::new(&r).unwrap();
        for v in 1..=9 {
            assert!(o.decomposition_holds(&res(3), v, DecompositionKind::Core).unwrap());
        }
        assert!(!o.decomposition_holds(&res(4), 2, DecompositionKind::Core).unwrap());
        assert!(o.decomposition_holds(&res(0), 2, DecompositionKind::Core).unwrap());
        assert!(o.decomposition_holds(&res(0), 0, DecompositionKind::Core).is_err());
    }

    #[test]
    fn direct_finiteness() {
        for desc in [RingDescriptor::zmod(8), RingDescriptor::matrix_zmod(4, 2), RingDescriptor::matrix_gf(2, 2)] {
            let r = make_ring(desc).unwrap();
            assert!(FiniteOracle::new(&r).unwrap().is_direct_finite().unwrap());
        }
    }

    #[test]
    fn projections() {
        let r = make_ring(RingDescriptor::zmod(8)).unwrap();
        let o = FiniteOracle::new(&r).unwrap();
        assert_eq!(o.unique_projection(&res(3)).unwrap(), res(1));
        assert_eq!(o.unique_projection(&res(0)).unwrap(), res(0));
        // 2·Z8 is generated by no idempotent.
        assert_eq!(o.unique_projection(&res(2)), Err(OracleError::NoneExists));
    }

    #[test]
    fn guards() {
        let q = make_ring(RingDescriptor::matrix_rational(2)).unwrap();
        assert_eq!(FiniteOracle::new(&q).err().unwrap().code(), "InfiniteRing");
        let big = make_ring(RingDescriptor::zmod(2048)).unwrap();
        let o = FiniteOracle::new(&big).unwrap();
        assert_eq!(o.classify().unwrap_err().code(), "RingTooLarge");
        assert_eq!(o.find_all(InverseKind::Core, &res(3)).unwrap().len(), 1);
    }

    #[test]
    fn table_is_stable() {
        let r = make_ring(RingDescriptor::zmod(4)).unwrap();
        let t = FiniteOracle::new(&r).unwrap().classify().unwrap().to_table(&r);
        let expected = "\
ring zmod:4 (4 elements)
element  #  13  14  core  dual  a#  a(1,3)  a(1,4)  core inv  dual core inv
0        y  y   y   y     y     0   0       0       0         0
1        y  y   y   y     y     1   1       1       1         1
2        n  n   n   n     n     -   -       -       -         -
3        y  y   y   y     y     3   3       3       3         3
";
        assert_eq!(t, expected);
    }
}
