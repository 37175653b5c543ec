use std::sync::Arc;

use serde::Serialize;

use crate::check::{ValidationReport, Verdict, Violation};
use crate::comma::{check_right_inverse, ProbeCommas};
use crate::error::{Error, Result};
use crate::fincat::{check_functor, find_post_right_adjoint, find_pre_right_adjoint, Budget, Carrier, FinCategory, Functor};
use crate::nullity::{check_nullity_assignment, NullityAssignment};
use crate::order::Family;

/// How the right inverse of `ι₃` is supplied.
#[derive(Clone, Debug, PartialEq)]
pub enum Iota3Inverse {
    /// Read each `(b, ψ, i)` back through `j₂⁻¹`.
    SameTriples,
    Explicit(Functor),
}

/// The arrangement `B --j₂--> I --j₁--> M --π--> I`, the carrier `γ` on `M`
/// and the base nullity on `B`.
#[derive(Clone, Debug)]
pub struct Setup {
    pub name: String,
    pub b: Arc<FinCategory>,
    pub i: Arc<FinCategory>,
    pub m: Arc<FinCategory>,
    pub j1: Functor,
    pub j2: Functor,
    pub pi: Functor,
    pub gamma: Carrier,
    /// Per object of `B`, on the carrier `γ(j₁j₂ b)`.
    pub base: Vec<Family>,
    pub iota3_inverse: Option<Iota3Inverse>,
}

impl Setup {
    pub fn j1j2(&self) -> Result<Functor> {
        Ok(self.j1.after(&self.j2)?.named("j1j2"))
    }

    /// `γ ∘ j₁ ∘ j₂` on `B`.
    pub fn base_carrier(&self) -> Result<Carrier> {
        Ok(self.gamma.along(&self.j1j2()?))
    }

    pub fn base_assignment(&self) -> Result<NullityAssignment> {
        NullityAssignment::new(self.b.clone(), self.base_carrier()?, self.base.clone())
    }

    pub fn probe_commas(&self) -> Result<ProbeCommas> {
        ProbeCommas::build(&self.j1, &self.j2, &self.pi)
    }

    pub fn iota3_inverse(&self, commas: &ProbeCommas) -> Result<Option<Functor>> {
        match &self.iota3_inverse {
            None => Ok(None),
            Some(Iota3Inverse::SameTriples) => commas.iota3_same_triples().map(Some),
            Some(Iota3Inverse::Explicit(f)) => Ok(Some(f.clone())),
        }
    }
}

/// Which relation `ι₃ ∘ ι₃^R` has to the identity.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Iota3Tags {
    pub exact_right_inverse: bool,
    /// `ι₃ ι₃^R ⇒ Id`.
    pub pre: bool,
    /// `Id ⇒ ι₃ ι₃^R`.
    pub post: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct AssumptionItem {
    pub id: String,
    pub verdict: Verdict,
    pub details: Vec<Violation>,
}

#[derive(Clone, Debug, Serialize)]
pub struct AssumptionReport {
    pub items: Vec<AssumptionItem>,
    pub iota3: Option<Iota3Tags>,
}

impl AssumptionReport {
    /// A:1–A:3 hold. A:4 is a hypothesis of the extension theorem only.
    pub fn core_ok(&self) -> bool {
        self.items.iter().filter(|i| i.id != "A:4").all(|i| i.verdict.is_pass())
    }

    pub fn all_ok(&self) -> bool {
        self.items.iter().all(|i| i.verdict.is_pass())
    }

    pub fn a4(&self) -> bool {
        self.items.iter().any(|i| i.id == "A:4" && i.verdict.is_pass())
    }

    /// `Err(Assumption)` naming the first failed core assumption.
    pub fn require_core(&self) -> Result<()> {
        match self.items.iter().find(|i| i.id != "A:4" && !i.verdict.is_pass()) {
            None => Ok(()),
            Some(item) => Err(Error::Assumption(
                item.id.clone(),
                item.details.first().map(|v| v.detail.clone()).unwrap_or_default(),
            )),
        }
    }
}

fn item(id: &str, report: ValidationReport) -> AssumptionItem {
    let verdict = if report.is_valid() {
        Verdict::Pass
    } else {
        Verdict::Fail(report.violations[0].rule.clone())
    };
    AssumptionItem {
        id: id.into(),
        verdict,
        details: report.violations,
    }
}

/// Itemized check of A:1 (γ functorial), A:2 (base nullity valid),
/// A:3 (`π ∘ j₁ = Id_I` and well-formed functors) and A:4 (`ι₃^R` supplied
/// with `Id ⇒ ι₃ ι₃^R`).
pub fn check_assumptions(s: &Setup, budget: u64) -> AssumptionReport {
    let mut items = Vec::new();

    let mut a1 = ValidationReport::new("A:1");
    a1.extend(s.m.validate());
    a1.extend(s.gamma.check(&s.m));
    items.push(item("A:1", a1));

    let mut a2 = ValidationReport::new("A:2");
    a2.extend(s.b.validate());
    match s.base_assignment() {
        Ok(n) => a2.extend(check_nullity_assignment(&n)),
        Err(e) => a2.push(Violation::new("base-nullity", vec![], e.to_string())),
    }
    items.push(item("A:2", a2));

    let mut a3 = ValidationReport::new("A:3");
    a3.extend(s.i.validate());
    for f in [&s.j1, &s.j2, &s.pi] {
        a3.extend(check_functor(f));
    }
    match s.pi.after(&s.j1) {
        Ok(pj) => {
            if let Some(w) = pj.difference(&Functor::identity(s.i.clone())) {
                a3.push(Violation::new("pi-j1-identity", vec![w.clone()], format!("π∘j₁ != Id_I at {w}")));
            }
        }
        Err(e) => a3.push(Violation::new("pi-j1-identity", vec![], e.to_string())),
    }
    let a3_ok = a3.is_valid();
    items.push(item("A:3", a3));

    let mut a4 = ValidationReport::new("A:4");
    let mut tags = None;
    if !a3_ok {
        a4.push(Violation::new("iota3-inverse", vec![], "A:3 fails; comma functors unavailable"));
    } else if s.iota3_inverse.is_none() {
        a4.push(Violation::new("iota3-inverse", vec![], "no right inverse of ι₃ supplied"));
    } else {
        match iota3_tags(s, budget) {
            Ok(t) => {
                if !t.post {
                    a4.push(Violation::new("iota3-inverse", vec![], "no transformation Id ⇒ ι₃∘ι₃^R"));
                }
                tags = Some(t);
            }
            Err(e) => a4.push(Violation::new("iota3-inverse", vec![], e.to_string())),
        }
    }
    items.push(item("A:4", a4));
    AssumptionReport { items, iota3: tags }
}

pub fn iota3_tags(s: &Setup, budget: u64) -> Result<Iota3Tags> {
    let commas = s.probe_commas()?;
    let r = s
        .iota3_inverse(&commas)?
        .ok_or_else(|| Error::Assumption("A:4".into(), "no right inverse of ι₃ supplied".into()))?;
    let report = check_functor(&r);
    if !report.is_valid() {
        return Err(Error::Assumption("A:4".into(), "ι₃^R is not a functor".into()));
    }
    let mut b = Budget::new("A:4 transformation search", budget);
    Ok(Iota3Tags {
        exact_right_inverse: check_right_inverse(&commas.iota3, &r),
        pre: find_pre_right_adjoint(&commas.iota3, &r, &mut b)?.is_some(),
        post: find_post_right_adjoint(&commas.iota3, &r, &mut b)?.is_some(),
    })
}
