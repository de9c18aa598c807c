use serde_json::{json, Value};

use super::{EngineError, Form, InverseKind};
use crate::ring::{Element, IdealSide, Ring, RingError};

/// One checked equation or ideal membership.
///
/// For a membership `x ∈ aR` the left side is `x` and the right side is `a·w`
/// for the witness `w` found, or absent when no witness exists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Equation {
    pub label: String,
    pub lhs: Element,
    pub rhs: Option<Element>,
    pub holds: bool,
}

/// The outcome of checking `x` against one characterization of an inverse
/// kind of `a`. Valid iff every listed equation holds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InverseCertificate {
    pub kind: InverseKind,
    pub form: Form,
    pub subject: Element,
    pub witness: Element,
    pub equations: Vec<Equation>,
}

impl InverseCertificate {
    pub fn is_valid(&self) -> bool {
        self.equations.iter().all(|e| e.holds)
    }

    pub fn labels(&self) -> Vec<&str> {
        self.equations.iter().map(|e| e.label.as_str()).collect()
    }

    /// `{kind, form, subject, witness, equations: [{label, lhs, rhs, holds}], valid}`
    pub fn to_json(&self, ring: &Ring) -> Value {
        let equations: Vec<Value> = self
            .equations
            .iter()
            .map(|e| {
                json!({
                    "label": e.label,
                    "lhs": ring.to_json(&e.lhs),
                    "rhs": e.rhs.as_ref().map_or(Value::Null, |r| ring.to_json(r)),
                    "holds": e.holds,
                })
            })
            .collect();
        json!({
            "kind": self.kind.name(),
            "form": self.form.name(),
            "subject": ring.to_json(&self.subject),
            "witness": ring.to_json(&self.witness),
            "equations": equations,
            "valid": self.is_valid(),
        })
    }

    /// Reads a serialized certificate and recomputes it from its subject and
    /// witness; the stored equation list and validity flag are not trusted.
    pub fn from_json(ring: &Ring, v: &Value) -> Result<InverseCertificate, EngineError> {
        let field = |name: &str| {
            v.get(name)
                .ok_or_else(|| RingError::InvalidElement(format!("certificate is missing {name:?}")))
        };
        let text = |name: &str| -> Result<String, EngineError> {
            Ok(field(name)?
                .as_str()
                .ok_or_else(|| RingError::InvalidElement(format!("certificate field {name:?} must be a string")))?
                .to_string())
        };
        let kind: InverseKind = text("kind")?.parse().map_err(RingError::InvalidElement)?;
        let form: Form = text("form")?.parse().map_err(RingError::InvalidElement)?;
        let subject = ring.from_json(field("subject")?)?;
        let witness = ring.from_json(field("witness")?)?;
        verify(ring, kind, &subject, &witness, form)
    }
}

struct Builder<'r> {
    ring: &'r Ring,
    equations: Vec<Equation>,
}

impl Builder<'_> {
    fn eq(&mut self, label: &str, lhs: Element, rhs: Element) {
        let holds = lhs == rhs;
        self.equations.push(Equation { label: label.into(), lhs, rhs: Some(rhs), holds });
    }

    /// `x ∈ gR` (right) or `x ∈ Rg` (left).
    fn member(&mut self, label: &str, x: &Element, g: &Element, side: IdealSide) -> Result<(), RingError> {
        let w = self.ring.in_principal_ideal(x, g, side)?;
        let rhs = w.map(|w| match side {
            IdealSide::Right => self.ring.mul(g, &w),
            IdealSide::Left => self.ring.mul(&w, g),
        });
        let holds = rhs.as_ref() == Some(x);
        self.equations.push(Equation { label: label.into(), lhs: x.clone(), rhs, holds });
        Ok(())
    }
}

/// Checks `x` against the chosen characterization of `kind` for `a`.
///
/// The three-equation form exists only for core and dual core inverses. For
/// the other kinds the definitional and five-equation forms both mean their
/// defining equations.
pub fn verify(
    ring: &Ring,
    kind: InverseKind,
    a: &Element,
    x: &Element,
    form: Form,
) -> Result<InverseCertificate, EngineError> {
    ring.check(a)?;
    ring.check(x)?;
    if form == Form::ThreeEq && !matches!(kind, InverseKind::Core | InverseKind::DualCore) {
        return Err(EngineError::UnsupportedForm { kind, form });
    }
    let r = ring;
    let ax = r.mul(a, x);
    let xa = r.mul(x, a);
    let axa = r.mul(&ax, a);
    let xax = r.mul(&xa, x);
    let a_star = r.star(a);
    let mut b = Builder { ring, equations: Vec::new() };

    match (kind, form) {
        (InverseKind::Inner, _) => b.eq("axa=a", axa, a.clone()),
        (InverseKind::Group, _) => {
            b.eq("axa=a", axa, a.clone());
            b.eq("xax=x", xax, x.clone());
            b.eq("ax=xa", ax, xa);
        }
        (InverseKind::OneThree, _) => {
            b.eq("axa=a", axa, a.clone());
            b.eq("(ax)*=ax", r.star(&ax), ax);
        }
        (InverseKind::OneFour, _) => {
            b.eq("axa=a", axa, a.clone());
            b.eq("(xa)*=xa", r.star(&xa), xa);
        }
        (InverseKind::Core, Form::Definitional) => {
            b.eq("axa=a", axa, a.clone());
            b.member("x∈aR", x, a, IdealSide::Right)?;
            b.member("a∈xR", a, x, IdealSide::Right)?;
            b.member("x∈Ra*", x, &a_star, IdealSide::Left)?;
            b.member("a*∈Rx", &a_star, x, IdealSide::Left)?;
        }
        (InverseKind::Core, Form::FiveEq) => {
            b.eq("axa=a", axa, a.clone());
            b.eq("xax=x", xax, x.clone());
            b.eq("(ax)*=ax", r.star(&ax), ax.clone());
            b.eq("xa²=a", r.mul(&xa, a), a.clone());
            b.eq("ax²=x", r.mul(&ax, x), x.clone());
        }
        (InverseKind::Core, Form::ThreeEq) => {
            b.eq("(ax)*=ax", r.star(&ax), ax.clone());
            b.eq("xa²=a", r.mul(&xa, a), a.clone());
            b.eq("ax²=x", r.mul(&ax, x), x.clone());
        }
        (InverseKind::DualCore, Form::Definitional) => {
            b.eq("axa=a", axa, a.clone());
            b.member("x∈a*R", x, &a_star, IdealSide::Right)?;
            b.member("a*∈xR", &a_star, x, IdealSide::Right)?;
            b.member("x∈Ra", x, a, IdealSide::Left)?;
            b.member("a∈Rx", a, x, IdealSide::Left)?;
        }
        (InverseKind::DualCore, Form::FiveEq) => {
            b.eq("axa=a", axa, a.clone());
            b.eq("xax=x", xax, x.clone());
            b.eq("(xa)*=xa", r.star(&xa), xa.clone());
            b.eq("a²x=a", r.mul(a, &ax), a.clone());
            b.eq("x²a=x", r.mul(x, &xa), x.clone());
        }
        (InverseKind::DualCore, Form::ThreeEq) => {
            b.eq("(xa)*=xa", r.star(&xa), xa.clone());
            b.eq("a²x=a", r.mul(a, &ax), a.clone());
            b.eq("x²a=x", r.mul(x, &xa), x.clone());
        }
    }

    Ok(InverseCertificate { kind, form, subject: a.clone(), witness: x.clone(), equations: b.equations })
}
