use serde::Serialize;

use crate::check::{ValidationReport, Verdict, Violation};
use crate::comma::find_right_inverse;
use crate::construct::{base_is_saturated, bar_null, check_assumptions, is_testable, PipelineResult, Setup};
use crate::error::{Error, Result};
use crate::fincat::{enumerate_functors, find_post_right_adjoint, find_pre_right_adjoint, Budget, Functor};
use crate::nullity::NullityAssignment;
use crate::order::Family;
use crate::par::{self, Exec};

fn subset(n: &NullityAssignment, o: usize, s: u32) -> String {
    format!("{{{}}}", n.carrier.sets[o].subset_ids(s).join(","))
}

/// Every endomorphism `f: m → m` maps null sets of `m` to null sets.
pub fn verify_invariance(n: &NullityAssignment) -> ValidationReport {
    let c = &*n.source;
    let mut report = ValidationReport::new(format!("invariance on {}", c.name()));
    for (f, s) in n.violations(|f| c.dom(f) == c.cod(f)) {
        let o = c.dom(f);
        let image = n.carrier.map(f).image(s);
        report.push(Violation::new(
            "invariance",
            vec![c.morphism_id(f).to_string(), subset(n, o, s), subset(n, o, image)],
            format!("{} ↦ {} is not null", subset(n, o, s), subset(n, o, image)),
        ));
    }
    report
}

/// The hand-built mutation on the proper-base F₂ model: `{∅, {0}}` on `F1`
/// is not closed under the translation.
pub fn broken_f2_assignment(s: &Setup) -> Result<NullityAssignment> {
    let mut nulls = s.base.clone();
    let f1 = s.m.object("F1")?;
    nulls[f1] = Family::from_members(2, [0, 1]);
    NullityAssignment::new(s.m.clone(), s.gamma.clone(), nulls)
}

/// Largest number of candidate assignments enumerated by default.
pub const MINIMALITY_GUARD: u64 = 1 << 12;

#[derive(Clone, Copy, Debug)]
pub struct MinimalityOptions {
    /// Only require containment at the objects where a candidate is testable,
    /// instead of discarding candidates untestable anywhere.
    pub per_object: bool,
    pub guard: u64,
    pub exec: Exec,
}

impl Default for MinimalityOptions {
    fn default() -> Self {
        MinimalityOptions {
            per_object: false,
            guard: MINIMALITY_GUARD,
            exec: Exec::default(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MinimalityReport {
    pub candidates: u64,
    pub admissible: usize,
    pub report: ValidationReport,
}

/// Enumerates every functorial assignment on `M` and checks that `main` lies
/// below each one that is testable.
pub fn verify_minimality(s: &Setup, main: &[Family], opts: MinimalityOptions) -> Result<MinimalityReport> {
    let m = &*s.m;
    let choices: Vec<Vec<Family>> = (0..m.num_objects())
        .map(|v| Family::all_nullities(s.gamma.size(v)))
        .collect();
    let total = choices
        .iter()
        .try_fold(1u64, |acc, c| acc.checked_mul(c.len() as u64))
        .unwrap_or(u64::MAX);
    if total > opts.guard {
        return Err(Error::BudgetExceeded {
            what: "minimality candidates".into(),
            budget: opts.guard,
        });
    }
    let testable: Vec<Vec<bool>> = choices
        .iter()
        .enumerate()
        .map(|(v, cs)| cs.iter().map(|&f| is_testable(s, v, f)).collect::<Result<_>>())
        .collect::<Result<_>>()?;

    let decode = |mut k: u64| -> Vec<usize> {
        choices
            .iter()
            .map(|c| {
                let i = (k % c.len() as u64) as usize;
                k /= c.len() as u64;
                i
            })
            .collect()
    };
    let functorial = |idx: &[usize]| {
        (0..m.num_morphisms()).all(|f| {
            let (a, b) = (m.dom(f), m.cod(f));
            let phi = s.gamma.map(f);
            let (na, nb) = (&choices[a][idx[a]], &choices[b][idx[b]]);
            na.members().all(|x| nb.contains(phi.image(x)))
        })
    };
    // Per candidate: None if inadmissible, else the objects where main escapes it.
    let outcomes = par::filter_map_range(opts.exec, total as usize, |k| {
        let idx = decode(k as u64);
        if !functorial(&idx) {
            return None;
        }
        let test: Vec<bool> = (0..idx.len()).map(|v| testable[v][idx[v]]).collect();
        if !opts.per_object && !test.iter().all(|&t| t) {
            return None;
        }
        let escaped: Vec<usize> = (0..idx.len())
            .filter(|&v| test[v] && !main[v].is_subfamily(&choices[v][idx[v]]))
            .collect();
        Some((idx, escaped))
    });

    let mut report = ValidationReport::new(format!("minimality on {}", s.name));
    for (idx, escaped) in &outcomes {
        for &v in escaped {
            report.push(Violation::new(
                "minimality",
                vec![m.object_id(v).to_string(), format!("{:?}", choices[v][idx[v]])],
                format!(
                    "main nullity at {} is not contained in the candidate {}",
                    m.object_id(v),
                    describe(s, &choices, idx)
                ),
            ));
        }
    }
    Ok(MinimalityReport {
        candidates: total,
        admissible: outcomes.len(),
        report,
    })
}

fn describe(s: &Setup, choices: &[Vec<Family>], idx: &[usize]) -> String {
    idx.iter()
        .enumerate()
        .map(|(v, &i)| format!("{}={:?}", s.m.object_id(v), choices[v][i]))
        .collect::<Vec<_>>()
        .join(" ")
}

#[derive(Clone, Debug, Serialize)]
pub struct ExtensionReport {
    pub verdict: Verdict,
    pub report: ValidationReport,
    /// Triangles of the proof diagram, recorded but not required.
    pub triangles: Vec<(String, bool)>,
}

fn square(report: &mut ValidationReport, name: &str, lhs: Result<Functor>, rhs: Result<Functor>) -> Result<()> {
    let (lhs, rhs) = (lhs?, rhs?);
    if let Some(w) = lhs.difference(&rhs) {
        report.push(Violation::new("square", vec![name.to_string(), w], format!("{name} does not commute")));
    }
    Ok(())
}

/// On a saturated base with A:4, `main ∘ j₁j₂` equals the base and the comma
/// squares commute. Otherwise the hypotheses are reported and nothing is asserted.
pub fn verify_extension(s: &Setup, r: &PipelineResult, budget: u64) -> Result<ExtensionReport> {
    let mut report = ValidationReport::new(format!("extension on {}", s.name));
    let saturated = base_is_saturated(s)?;
    let a4 = check_assumptions(s, budget).a4();
    if !saturated || !a4 {
        let why = match (saturated, a4) {
            (false, false) => "base nullity not saturated; A:4 unmet",
            (false, true) => "base nullity not saturated",
            _ => "A:4 unmet",
        };
        return Ok(ExtensionReport {
            verdict: Verdict::Skipped(why.into()),
            report,
            triangles: Vec::new(),
        });
    }
    let c = &r.commas;
    let j1j2 = s.j1j2()?;
    for b in 0..s.b.num_objects() {
        let v = j1j2.ob(b);
        if r.main_null.nulls[v] != s.base[b] {
            report.push(Violation::new(
                "extension",
                vec![s.b.object_id(b).to_string()],
                format!("main nullity {:?} differs from base {:?}", r.main_null.nulls[v], s.base[b]),
            ));
        }
    }
    square(&mut report, "pi_* iota2 = iota1", c.pi_star.after(&c.iota2), Ok(c.iota1.clone()))?;
    square(&mut report, "iota4 iota1 = iota3", c.iota4.after(&c.iota1), Ok(c.iota3.clone()))?;
    square(&mut report, "iota7 iota2 = iota3", c.iota7.after(&c.iota2), Ok(c.iota3.clone()))?;
    square(
        &mut report,
        "Forget2 iota1 = j1j2 Forget2",
        c.cjp.forget2.after(&c.iota1),
        j1j2.after(&c.arrow_b.forget2),
    )?;

    // Nullity on Arrow(B) induced by the base: (b, f, b') ↦ preimages along γ(j₁j₂ f).
    let arrow: Vec<Family> = c
        .arrow_b
        .objects
        .iter()
        .map(|&(b, f, _)| s.base[b].preimage_family(s.gamma.map(j1j2.mor(f))))
        .collect::<Result<_>>()?;
    let along = |f: &Functor, vals: &[Family]| (0..arrow.len()).all(|x| vals[f.ob(x)] == arrow[x]);
    let bar = bar_null(&s.base_assignment()?)?;
    let triangles = vec![
        ("yellow".to_string(), along(&c.iota2, &r.comma_null)),
        ("blue".to_string(), along(&c.iota1, &r.probed_null)),
        (
            "red".to_string(),
            (0..s.b.num_objects()).all(|b| r.main_null.nulls[j1j2.ob(b)] == bar.nulls[b]),
        ),
    ];
    let verdict = if report.is_valid() {
        Verdict::Pass
    } else {
        Verdict::Fail(report.violations[0].rule.clone())
    };
    Ok(ExtensionReport {
        verdict,
        report,
        triangles,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct LemmaClaim {
    pub id: String,
    pub verdict: Verdict,
}

fn claim(id: &str, ok: Result<bool>, fail: &str) -> LemmaClaim {
    let verdict = match ok {
        Ok(true) => Verdict::Pass,
        Ok(false) => Verdict::Fail(fail.into()),
        Err(e) if e.is_resource_limit() => Verdict::Skipped(e.to_string()),
        Err(e) => Verdict::Fail(e.to_string()),
    };
    LemmaClaim { id: id.into(), verdict }
}

/// The five claims used by the extension proof, checked on the constructed
/// functors: right inverses of `π_*` and `Forget₂`, a post right adjoint of
/// `ι₂` (candidate `ι₃^R ι₇`), pre right adjoints of `ι₁` (candidate
/// `ι₃^R ι₄`) and of `Forget₂` (by search). Two composites of `ι₄, ι₅` are
/// recorded alongside.
pub fn check_extension_lemma(s: &Setup, budget: u64) -> Result<Vec<LemmaClaim>> {
    let c = s.probe_commas()?;
    let r = s
        .iota3_inverse(&c)?
        .ok_or_else(|| Error::Assumption("A:4".into(), "no right inverse of ι₃ supplied".into()))?;
    let mut b = Budget::new("extension lemma search", budget);
    let mut out = vec![
        claim(
            "pi_star.right_inverse",
            find_right_inverse(&c.pi_star, &mut b).map(|f| f.is_some()),
            "no functor G with π_* G = Id",
        ),
        claim(
            "forget2.right_inverse",
            find_right_inverse(&c.cjp.forget2, &mut b).map(|f| f.is_some()),
            "no functor G with Forget₂ G = Id",
        ),
    ];
    let post = r.after(&c.iota7).and_then(|cand| find_post_right_adjoint(&c.iota2, &cand, &mut b));
    out.push(claim("iota2.post_right_adjoint", post.map(|x| x.is_some()), "no Id ⇒ ι₂ ι₃^R ι₇"));
    let pre = r.after(&c.iota4).and_then(|cand| find_pre_right_adjoint(&c.iota1, &cand, &mut b));
    out.push(claim("iota1.pre_right_adjoint", pre.map(|x| x.is_some()), "no ι₁ ι₃^R ι₄ ⇒ Id"));
    let forget = (|| -> Result<bool> {
        for cand in enumerate_functors(&c.cjp.forget2.target, &c.cjp.category, &mut b)? {
            if find_pre_right_adjoint(&c.cjp.forget2, &cand, &mut b)?.is_some() {
                return Ok(true);
            }
        }
        Ok(false)
    })();
    out.push(claim("forget2.pre_right_adjoint", forget, "no T with Forget₂ T ⇒ Id"));
    let id_cji = Functor::identity(c.cji.category.clone());
    let id_cjp = Functor::identity(c.cjp.category.clone());
    out.push(claim(
        "iota4_iota5.identity_on_cji",
        c.iota4.after(&c.iota5).map(|f| f == id_cji),
        "ι₄ ι₅ != Id",
    ));
    out.push(claim(
        "iota5_iota4.identity_on_cjp",
        c.iota5.after(&c.iota4).map(|f| f == id_cjp),
        "ι₅ ι₄ != Id",
    ));
    Ok(out)
}
