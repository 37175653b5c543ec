//! Canonical JSON reports.
//!
//! `serde_json` keeps object keys in a `BTreeMap`, so key order is sorted
//! without extra work. Subsets are arrays of element ids, and families are
//! sorted by size and then lexicographically.
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::check::{ValidationReport, Verdict};
use crate::fincat::{FinCategory, FiniteSet};
use crate::order::Family;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    /// Hypotheses unmet, nothing asserted.
    Skipped,
    BudgetExceeded,
    InputError,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skipped => "skipped",
            Status::BudgetExceeded => "budget_exceeded",
            Status::InputError => "input_error",
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass | Status::Skipped => 0,
            Status::Fail => 1,
            Status::InputError => 2,
            Status::BudgetExceeded => 3,
        }
    }

    /// The worse of two statuses for a combined run.
    pub fn and(self, other: Status) -> Status {
        fn rank(s: Status) -> u8 {
            match s {
                Status::Pass => 0,
                Status::Skipped => 1,
                Status::Fail => 2,
                Status::BudgetExceeded => 3,
                Status::InputError => 4,
            }
        }
        if rank(other) > rank(self) {
            other
        } else {
            self
        }
    }

    pub fn of_verdict(v: &Verdict) -> Status {
        match v {
            Verdict::Pass => Status::Pass,
            Verdict::Fail(_) => Status::Fail,
            Verdict::Skipped(_) => Status::Skipped,
        }
    }

    pub fn of_report(r: &ValidationReport) -> Status {
        if r.is_valid() {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

#[derive(Clone, Debug)]
pub struct Report {
    pub command: String,
    /// Hex sha256 of the input bytes; `None` for commands without input.
    pub digest: Option<String>,
    pub seed: u64,
    pub budget: Option<u64>,
    pub status: Status,
    pub results: Value,
    pub diagnostics: Vec<String>,
}

impl Report {
    pub fn to_value(&self) -> Value {
        json!({
            "command": self.command,
            "input_sha256": self.digest,
            "seed": self.seed,
            "budget": self.budget,
            "status": self.status.as_str(),
            "results": self.results,
            "diagnostics": self.diagnostics,
        })
    }

    /// Pretty-printed, sorted keys, LF line endings, trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_value()).expect("report values are plain JSON");
        s.push('\n');
        s
    }

    /// One `path = value` line per leaf, in key order.
    pub fn to_text(&self) -> String {
        let mut lines = Vec::new();
        flatten("", &self.to_value(), &mut lines);
        let mut out = lines.join("\n");
        out.push('\n');
        out
    }

    pub fn exit_code(&self) -> i32 {
        self.status.exit_code()
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<String>) {
    let join = |k: &str| {
        if prefix.is_empty() {
            k.to_string()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match v {
        Value::Object(m) if !m.is_empty() => {
            for (k, x) in m {
                flatten(&join(k), x, out);
            }
        }
        Value::Array(a) if a.iter().any(|x| x.is_object()) => {
            for (i, x) in a.iter().enumerate() {
                flatten(&join(&i.to_string()), x, out);
            }
        }
        _ => out.push(format!("{prefix} = {v}")),
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn subset_value(set: &FiniteSet, mask: u32) -> Vec<String> {
    let mut ids = set.subset_ids(mask);
    ids.sort();
    ids
}

pub fn family_value(set: &FiniteSet, f: &Family) -> Value {
    let mut subsets: Vec<Vec<String>> = f.members().map(|m| subset_value(set, m)).collect();
    subsets.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    json!(subsets)
}

/// `{object: {carrier, nulls}}` for a nullity assignment on `cat`.
pub fn nullity_value(cat: &FinCategory, sets: &[FiniteSet], nulls: &[Family]) -> Value {
    let mut m = Map::new();
    for (o, id) in cat.objects().iter().enumerate() {
        let mut carrier = sets[o].elements().to_vec();
        carrier.sort();
        m.insert(
            id.clone(),
            json!({ "carrier": carrier, "nulls": family_value(&sets[o], &nulls[o]) }),
        );
    }
    Value::Object(m)
}

pub fn validation_value(r: &ValidationReport) -> Value {
    json!({
        "subject": r.subject,
        "valid": r.is_valid(),
        "violations": r.violations,
    })
}

pub fn verdict_value(v: &Verdict) -> Value {
    serde_json::to_value(v).expect("verdicts serialize")
}
