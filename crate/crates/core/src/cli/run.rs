use serde_json::{json, Map, Value};

use super::format::{parse_spec, resolve, serialize_spec, SpecDocument};
use super::report::{family_value, nullity_value, sha256_hex, validation_value, verdict_value, Report, Status};
use crate::comma::CommaCategory;
use crate::construct::{
    base_is_saturated, check_assumptions, check_extension_lemma, direct_prevalence, oracle_diff, run_lemma_suite,
    run_pipeline, verify_extension, verify_invariance, verify_minimality, MinimalityOptions, PipelineResult, Setup,
    DEFAULT_LEMMA_INSTANCES, DEFAULT_LEMMA_SEED, MINIMALITY_GUARD,
};
use crate::error::Error;
use crate::fincat::{Budget, FiniteSet};
use crate::kan::{KanOptions, KanPath, KanResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckKind {
    Thm1,
    Thm3,
    Ext,
    Lemmas,
}

impl CheckKind {
    pub fn as_str(self) -> &'static str {
        match self {
            CheckKind::Thm1 => "thm1",
            CheckKind::Thm3 => "thm3",
            CheckKind::Ext => "ext",
            CheckKind::Lemmas => "lemmas",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Validate,
    Construct,
    Check(CheckKind),
    OracleCompare,
    Materialize,
}

impl Command {
    pub fn name(self) -> String {
        match self {
            Command::Validate => "validate".into(),
            Command::Construct => "construct".into(),
            Command::Check(k) => format!("check {}", k.as_str()),
            Command::OracleCompare => "oracle-compare".into(),
            Command::Materialize => "materialize".into(),
        }
    }

    fn needs_setup(self) -> bool {
        self != Command::Check(CheckKind::Lemmas)
    }
}

/// Where the setup comes from.
#[derive(Clone, Debug)]
pub enum Input {
    /// Raw bytes of a spec file.
    Spec(Vec<u8>),
    Model(String),
    None,
}

#[derive(Clone, Copy, Debug)]
pub struct RunOptions {
    pub seed: u64,
    /// Caps every search budget and the minimality guard when set.
    pub budget: Option<u64>,
    pub lemma_instances: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            seed: DEFAULT_LEMMA_SEED,
            budget: None,
            lemma_instances: DEFAULT_LEMMA_INSTANCES,
        }
    }
}

impl RunOptions {
    fn kan(&self) -> KanOptions {
        let mut k = KanOptions::default();
        if let Some(b) = self.budget {
            k.budget = b;
        }
        k
    }

    fn search_budget(&self) -> u64 {
        self.budget.unwrap_or(Budget::DEFAULT)
    }
}

fn status_of_error(e: &Error) -> Status {
    match e {
        _ if e.is_resource_limit() => Status::BudgetExceeded,
        Error::NotFunctorial(_) | Error::Invariance(_) | Error::Assumption(..) | Error::KanMismatch(_) => Status::Fail,
        _ => Status::InputError,
    }
}

fn load(input: &Input) -> Result<(Option<String>, Option<SpecDocument>), String> {
    match input {
        Input::None => Ok((None, None)),
        Input::Model(name) => {
            let doc = SpecDocument::builtin(name);
            Ok((Some(sha256_hex(serialize_spec(&doc).as_bytes())), Some(doc)))
        }
        Input::Spec(bytes) => {
            let digest = sha256_hex(bytes);
            let text = std::str::from_utf8(bytes).map_err(|e| format!("spec is not UTF-8: {e}"))?;
            let doc = parse_spec(text).map_err(|e| e.to_string())?;
            Ok((Some(digest), Some(doc)))
        }
    }
}

/// Runs one command. Never panics on bad input; every failure becomes a
/// report with a status and diagnostics.
pub fn run(command: Command, input: &Input, opts: &RunOptions) -> Report {
    let mut report = Report {
        command: command.name(),
        digest: None,
        seed: opts.seed,
        budget: opts.budget,
        status: Status::Pass,
        results: Value::Object(Map::new()),
        diagnostics: Vec::new(),
    };
    let doc = match load(input) {
        Ok((digest, doc)) => {
            report.digest = digest;
            doc
        }
        Err(msg) => {
            if let Input::Spec(bytes) = input {
                report.digest = Some(sha256_hex(bytes));
            }
            report.status = Status::InputError;
            report.diagnostics.push(msg);
            return report;
        }
    };
    let setup = match (&doc, command.needs_setup()) {
        (Some(d), _) => match resolve(d) {
            Ok(s) => Some(s),
            Err(e) => {
                report.status = status_of_error(&e).and(Status::InputError);
                report.diagnostics.push(e.to_string());
                return report;
            }
        },
        (None, true) => {
            report.status = Status::InputError;
            report.diagnostics.push("no input: pass --spec FILE or --model NAME".into());
            return report;
        }
        (None, false) => None,
    };
    let outcome = match (command, setup.as_ref()) {
        (Command::Check(CheckKind::Lemmas), _) => lemmas(opts),
        (Command::Validate, Some(s)) => validate(s, opts),
        (Command::Construct, Some(s)) => construct(s, opts),
        (Command::Check(CheckKind::Thm1), Some(s)) => thm1(s, opts),
        (Command::Check(CheckKind::Thm3), Some(s)) => thm3(s, opts),
        (Command::Check(CheckKind::Ext), Some(s)) => ext(s, opts),
        (Command::OracleCompare, Some(s)) => oracle_compare(s, opts),
        (Command::Materialize, Some(s)) => materialize(s, opts),
        _ => unreachable!("setup presence checked above"),
    };
    match outcome {
        Ok((status, results)) => {
            report.status = status;
            report.results = results;
        }
        Err(e) => {
            report.status = status_of_error(&e);
            report.diagnostics.push(e.to_string());
        }
    }
    report
}

type Outcome = crate::Result<(Status, Value)>;

fn pipeline(s: &Setup, opts: &RunOptions) -> crate::Result<PipelineResult> {
    check_assumptions(s, opts.search_budget()).require_core()?;
    run_pipeline(s, opts.kan())
}

fn main_value(s: &Setup, r: &PipelineResult) -> Value {
    nullity_value(&s.m, &s.gamma.sets, &r.main_null.nulls)
}

fn validate(s: &Setup, opts: &RunOptions) -> Outcome {
    let a = check_assumptions(s, opts.search_budget());
    let mut status = if a.core_ok() { Status::Pass } else { Status::Fail };
    let mut categories = Map::new();
    for c in [&s.b, &s.i, &s.m] {
        let r = c.validate();
        status = status.and(Status::of_report(&r));
        categories.insert(c.name().to_string(), validation_value(&r));
    }
    let items: Map<String, Value> = a
        .items
        .iter()
        .map(|i| (i.id.clone(), json!({ "verdict": verdict_value(&i.verdict), "violations": i.details })))
        .collect();
    Ok((
        status,
        json!({
            "setup": s.name,
            "assumptions": items,
            "iota3": a.iota3,
            "categories": categories,
            "base_saturated": base_is_saturated(s)?,
        }),
    ))
}

fn paths(r: &KanResult) -> Value {
    let fast = r.paths.iter().filter(|&&p| p == KanPath::Fast).count();
    json!({ "fast": fast, "brute_force": r.paths.len() - fast, "cross_checked": r.cross_checked })
}

fn comma_objects(c: &CommaCategory) -> Vec<String> {
    c.category.objects().to_vec()
}

fn construct(s: &Setup, opts: &RunOptions) -> Outcome {
    let r = pipeline(s, opts)?;
    let base_carrier = s.base_carrier()?;
    let cjp = &r.commas.cjp;
    let cjp_sets: Vec<FiniteSet> = (0..cjp.category.num_objects())
        .map(|x| s.gamma.sets[cjp.forget2.ob(x)].clone())
        .collect();
    let non_vertical: Vec<Value> = r
        .non_vertical
        .iter()
        .map(|n| json!({ "morphism": n.morphism, "witness": n.witness }))
        .collect();
    Ok((
        Status::Pass,
        json!({
            "setup": s.name,
            "base": nullity_value(&s.b, &base_carrier.sets, &s.base),
            "probed": nullity_value(&cjp.category, &cjp_sets, &r.probed_null),
            "main": main_value(s, &r),
            "kan_paths": { "probed": paths(&r.probed_kan), "main": paths(&r.main_kan) },
            "non_vertical": non_vertical,
        }),
    ))
}

fn thm1(s: &Setup, opts: &RunOptions) -> Outcome {
    let r = pipeline(s, opts)?;
    let v = verify_invariance(&r.main_null);
    Ok((Status::of_report(&v), json!({ "setup": s.name, "invariance": validation_value(&v), "main": main_value(s, &r) })))
}

fn thm3(s: &Setup, opts: &RunOptions) -> Outcome {
    let r = pipeline(s, opts)?;
    let mopts = MinimalityOptions {
        guard: opts.budget.map_or(MINIMALITY_GUARD, |b| b.min(MINIMALITY_GUARD)),
        ..MinimalityOptions::default()
    };
    let m = verify_minimality(s, &r.main_null.nulls, mopts)?;
    Ok((
        Status::of_report(&m.report),
        json!({
            "setup": s.name,
            "candidates": m.candidates,
            "admissible": m.admissible,
            "minimality": validation_value(&m.report),
            "main": main_value(s, &r),
        }),
    ))
}

// The lemma claims are recorded next to the theorem but do not decide the
// status: the theorem statement is the restriction and the squares.
fn ext(s: &Setup, opts: &RunOptions) -> Outcome {
    let r = pipeline(s, opts)?;
    let e = verify_extension(s, &r, opts.search_budget())?;
    let claims: Map<String, Value> = match check_extension_lemma(s, opts.search_budget()) {
        Ok(cs) => cs.into_iter().map(|c| (c.id, verdict_value(&c.verdict))).collect(),
        Err(err) => [("error".to_string(), json!(err.to_string()))].into_iter().collect(),
    };
    let triangles: Map<String, Value> = e.triangles.iter().map(|(k, v)| (k.clone(), json!(v))).collect();
    Ok((
        Status::of_verdict(&e.verdict),
        json!({
            "setup": s.name,
            "verdict": verdict_value(&e.verdict),
            "extension": validation_value(&e.report),
            "triangles": triangles,
            "lemma_claims": claims,
        }),
    ))
}

fn lemmas(opts: &RunOptions) -> Outcome {
    let reports = run_lemma_suite(opts.seed, opts.lemma_instances)?;
    let status = reports.iter().fold(Status::Pass, |st, r| st.and(Status::of_verdict(&r.verdict)));
    let by_id: Map<String, Value> = reports
        .into_iter()
        .map(|r| (r.id.clone(), serde_json::to_value(&r).expect("lemma reports serialize")))
        .collect();
    Ok((status, json!({ "lemmas": by_id })))
}

fn oracle_compare(s: &Setup, opts: &RunOptions) -> Outcome {
    let r = pipeline(s, opts)?;
    let d = direct_prevalence(s)?;
    let diff = oracle_diff(s, &r.main_null.nulls, &d);
    let detail: Map<String, Value> = diff
        .iter()
        .map(|id| {
            let v = s.m.object(id).expect("diff ids come from M");
            let set = &s.gamma.sets[v];
            (id.clone(), json!({ "pipeline": family_value(set, &r.main_null.nulls[v]), "oracle": family_value(set, &d[v]) }))
        })
        .collect();
    let status = if diff.is_empty() { Status::Pass } else { Status::Fail };
    Ok((status, json!({ "setup": s.name, "diff": diff, "detail": detail })))
}

fn materialize(s: &Setup, opts: &RunOptions) -> Outcome {
    let r = pipeline(s, opts)?;
    let c = &r.commas;
    let mut commas = Map::new();
    for (name, cc) in [("arrow_b", &c.arrow_b), ("cjm", &c.cjm), ("cjp", &c.cjp), ("cji", &c.cji)] {
        commas.insert(
            name.into(),
            json!({ "objects": comma_objects(cc), "morphisms": cc.category.num_morphisms() }),
        );
    }
    let slices = |cat: &crate::fincat::FinCategory, k: &KanResult| -> Map<String, Value> {
        cat.objects().iter().zip(&k.slice_sizes).map(|(id, n)| (id.clone(), json!(n))).collect()
    };
    Ok((
        Status::Pass,
        json!({
            "setup": s.name,
            "commas": commas,
            "slice_sizes": { "probed": slices(&c.cjp.category, &r.probed_kan), "main": slices(&s.m, &r.main_kan) },
        }),
    ))
}
