//! Seeded checks of the adjoint and Kan lemmas on random small preorders.
//! Hypotheses are verified per instance by exhaustive search; instances
//! whose hypotheses fail are skipped and counted.
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::check::Verdict;
use crate::comma::{build_comma, induced_comma_functor};
use crate::error::Result;
use crate::fincat::{
    build_preorder, chain, colimit, enumerate_functors, find_post_right_adjoint, find_pre_right_adjoint,
    limit, power_set_preorder, Budget, FinCategory, FiniteSet, Functor,
};
use crate::kan::{pointwise_iso, pointwise_kan, Side};

pub const LEMMA_IDS: [&str; 5] = ["preadj:1", "preadj:2", "Kan_id:2", "Kan_id:3", "Kan_id:4"];

/// A lemma passes with at least this many hypothesis-verified instances and
/// no counterexample.
pub const MIN_VERIFIED: usize = 5;

const INSTANCE_BUDGET: u64 = 1 << 20;

pub const DEFAULT_LEMMA_SEED: u64 = 7;
pub const DEFAULT_LEMMA_INSTANCES: usize = 200;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Holds,
    Counterexample(String),
    Skipped(String),
}

#[derive(Clone, Debug, Serialize)]
pub struct LemmaReport {
    pub id: String,
    pub seed: u64,
    pub instances: usize,
    pub verified: usize,
    pub counterexamples: usize,
    pub skipped: usize,
    pub first_counterexample: Option<String>,
    pub verdict: Verdict,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Adj {
    Pre,
    Post,
}

fn arc(c: FinCategory) -> Arc<FinCategory> {
    Arc::new(c)
}

/// A random preorder on `1..=max` objects: random forward relations, an
/// occasional backward one, then the reflexive-transitive closure.
pub fn random_preorder(rng: &mut ChaCha8Rng, name: &str, max: usize) -> Arc<FinCategory> {
    let n = rng.gen_range(1..=max);
    let mut leq = vec![vec![false; n]; n];
    for i in 0..n {
        leq[i][i] = true;
        for j in 0..n {
            if i < j && rng.gen_bool(0.45) || i > j && rng.gen_bool(0.1) {
                leq[i][j] = true;
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if leq[i][k] && leq[k][j] {
                    leq[i][j] = true;
                }
            }
        }
    }
    let names: Vec<String> = (0..n).map(|i| format!("{name}{i}")).collect();
    arc(build_preorder(name, &names, |a, b| leq[a][b]).expect("closed relation"))
}

/// A small complete lattice, so every (co)limit below exists.
fn random_lattice(rng: &mut ChaCha8Rng) -> Arc<FinCategory> {
    match rng.gen_range(0..3) {
        0 => arc(chain(2)),
        1 => arc(chain(3)),
        _ => arc(power_set_preorder(&FiniteSet::range(2)).expect("small")),
    }
}

fn random_functor(rng: &mut ChaCha8Rng, s: &Arc<FinCategory>, t: &Arc<FinCategory>, b: &mut Budget) -> Result<Option<Functor>> {
    let all = enumerate_functors(s, t, b)?;
    if all.is_empty() {
        return Ok(None);
    }
    Ok(Some(all[rng.gen_range(0..all.len())].clone()))
}

/// Some `T*` making `T` pre- or post-right-adjoint enabled.
fn has_adjoint(t: &Functor, kind: Adj, b: &mut Budget) -> Result<bool> {
    for cand in enumerate_functors(&t.target, &t.source, b)? {
        let found = match kind {
            Adj::Pre => find_pre_right_adjoint(t, &cand, b)?,
            Adj::Post => find_post_right_adjoint(t, &cand, b)?,
        };
        if found.is_some() {
            return Ok(true);
        }
    }
    Ok(false)
}

fn show(f: &Functor) -> String {
    let pairs: Vec<String> = (0..f.source.num_objects())
        .map(|o| format!("{}->{}", f.source.object_id(o), f.target.object_id(f.ob(o))))
        .collect();
    format!("{}[{}]", f.name, pairs.join(","))
}

fn outcome(ok: bool, what: impl FnOnce() -> String) -> Outcome {
    if ok {
        Outcome::Holds
    } else {
        Outcome::Counterexample(what())
    }
}

fn adjoint_for(side: Side) -> Adj {
    match side {
        Side::Left => Adj::Post,
        Side::Right => Adj::Pre,
    }
}

/// `colim g∘f ≅ colim g` when `f` has a post right adjoint; dually for limits.
pub fn preadj1(rng: &mut ChaCha8Rng, side: Side) -> Result<Outcome> {
    let mut b = Budget::new("preadj:1", INSTANCE_BUDGET);
    let (x, y, z) = (random_preorder(rng, "x", 3), random_preorder(rng, "y", 3), random_lattice(rng));
    let (Some(f), Some(g)) = (random_functor(rng, &x, &y, &mut b)?, random_functor(rng, &y, &z, &mut b)?) else {
        return Ok(Outcome::Skipped("no functor".into()));
    };
    let (f, g) = (f.named("f"), g.named("g"));
    if !has_adjoint(&f, adjoint_for(side), &mut b)? {
        return Ok(Outcome::Skipped("f lacks the adjoint".into()));
    }
    let gf = g.after(&f)?;
    let tip = |d: &Functor, b: &mut Budget| -> Result<Option<usize>> {
        Ok(match side {
            Side::Left => colimit(d, b)?.map(|c| c.tip),
            Side::Right => limit(d, b)?.map(|c| c.tip),
        })
    };
    let (Some(l), Some(r)) = (tip(&gf, &mut b)?, tip(&g, &mut b)?) else {
        return Ok(Outcome::Skipped("(co)limit missing".into()));
    };
    Ok(outcome(pointwise_iso(&z, &[l], &[r]), || format!("{} {}", show(&f), show(&g))))
}

/// `a_*: Comma(fa, E) → Comma(f, E)` inherits a pre or post right adjoint from `a`.
pub fn preadj2(rng: &mut ChaCha8Rng, kind_post: bool) -> Result<Outcome> {
    let kind = if kind_post { Adj::Post } else { Adj::Pre };
    let mut b = Budget::new("preadj:2", INSTANCE_BUDGET);
    let (a_cat, b_cat, e) = (random_preorder(rng, "a", 3), random_preorder(rng, "b", 3), random_preorder(rng, "e", 3));
    let (Some(a), Some(f)) = (random_functor(rng, &a_cat, &b_cat, &mut b)?, random_functor(rng, &b_cat, &e, &mut b)?) else {
        return Ok(Outcome::Skipped("no functor".into()));
    };
    let (a, f) = (a.named("a"), f.named("f"));
    if !has_adjoint(&a, kind, &mut b)? {
        return Ok(Outcome::Skipped("a lacks the adjoint".into()));
    }
    let id_e = Functor::identity(e.clone());
    let fa = f.after(&a)?;
    let src = build_comma("Comma(fa,E)", &fa, &id_e)?;
    let dst = build_comma("Comma(f,E)", &f, &id_e)?;
    let a_star = induced_comma_functor("a_*", &src, &dst, &a, &id_e, &id_e)?;
    let ok = has_adjoint(&a_star, kind, &mut b)?;
    Ok(outcome(ok, || format!("{} {}", show(&a), show(&f))))
}

/// `Lan_f b = Lan_{fa}(ba)` when `a` has a post right adjoint; dually for `Ran`.
pub fn kan_id2(rng: &mut ChaCha8Rng, side: Side) -> Result<Outcome> {
    let mut bud = Budget::new("Kan_id:2", INSTANCE_BUDGET);
    let (a_cat, b_cat, e, c) = (
        random_preorder(rng, "a", 3),
        random_preorder(rng, "b", 3),
        random_preorder(rng, "e", 3),
        random_lattice(rng),
    );
    let fs = (
        random_functor(rng, &a_cat, &b_cat, &mut bud)?,
        random_functor(rng, &b_cat, &c, &mut bud)?,
        random_functor(rng, &b_cat, &e, &mut bud)?,
    );
    let (Some(a), Some(b), Some(f)) = fs else {
        return Ok(Outcome::Skipped("no functor".into()));
    };
    let (a, b, f) = (a.named("a"), b.named("b"), f.named("f"));
    if !has_adjoint(&a, adjoint_for(side), &mut bud)? {
        return Ok(Outcome::Skipped("a lacks the adjoint".into()));
    }
    let lhs = pointwise_kan(side, &f, &b, &mut bud)?;
    let rhs = pointwise_kan(side, &f.after(&a)?, &b.after(&a)?, &mut bud)?;
    Ok(outcome(pointwise_iso(&c, &lhs, &rhs), || {
        format!("{} {} {}", show(&a), show(&b), show(&f))
    }))
}

/// `Ran_{ed} c ∘ e = Ran_d c` when `e` has a pre right adjoint; dually `Lan`
/// with a post right adjoint.
pub fn kan_id3(rng: &mut ChaCha8Rng, side: Side) -> Result<Outcome> {
    let mut bud = Budget::new("Kan_id:3", INSTANCE_BUDGET);
    let (a_cat, d_cat, e_cat, c_cat) = (
        random_preorder(rng, "a", 3),
        random_preorder(rng, "d", 3),
        random_preorder(rng, "e", 3),
        random_lattice(rng),
    );
    let fs = (
        random_functor(rng, &a_cat, &c_cat, &mut bud)?,
        random_functor(rng, &a_cat, &d_cat, &mut bud)?,
        random_functor(rng, &d_cat, &e_cat, &mut bud)?,
    );
    let (Some(c), Some(d), Some(e)) = fs else {
        return Ok(Outcome::Skipped("no functor".into()));
    };
    let (c, d, e) = (c.named("c"), d.named("d"), e.named("e"));
    if !has_adjoint(&e, adjoint_for(side), &mut bud)? {
        return Ok(Outcome::Skipped("e lacks the adjoint".into()));
    }
    let along_ed = pointwise_kan(side, &e.after(&d)?, &c, &mut bud)?;
    let lhs: Vec<usize> = (0..d_cat.num_objects()).map(|x| along_ed[e.ob(x)]).collect();
    let rhs = pointwise_kan(side, &d, &c, &mut bud)?;
    Ok(outcome(pointwise_iso(&c_cat, &lhs, &rhs), || {
        format!("{} {} {}", show(&c), show(&d), show(&e))
    }))
}

/// For a commuting square `f a = e d`: `Ran_d(ba) = Ran_f b ∘ e` when `a` and
/// `e` have pre right adjoints; dually `Lan` with post right adjoints.
pub fn kan_id4(rng: &mut ChaCha8Rng, side: Side) -> Result<Outcome> {
    let mut bud = Budget::new("Kan_id:4", INSTANCE_BUDGET);
    let (a_cat, b_cat, d_cat, e_cat, c_cat) = (
        random_preorder(rng, "a", 2),
        random_preorder(rng, "b", 3),
        random_preorder(rng, "d", 2),
        random_preorder(rng, "e", 3),
        random_lattice(rng),
    );
    let fs = (
        random_functor(rng, &a_cat, &b_cat, &mut bud)?,
        random_functor(rng, &b_cat, &c_cat, &mut bud)?,
        random_functor(rng, &a_cat, &d_cat, &mut bud)?,
        random_functor(rng, &d_cat, &e_cat, &mut bud)?,
    );
    let (Some(a), Some(b), Some(d), Some(e)) = fs else {
        return Ok(Outcome::Skipped("no functor".into()));
    };
    let (a, b, d, e) = (a.named("a"), b.named("b"), d.named("d"), e.named("e"));
    let ed = e.after(&d)?;
    let squares: Vec<Functor> = enumerate_functors(&b_cat, &e_cat, &mut bud)?
        .into_iter()
        .filter(|f| f.after(&a).map(|fa| fa.obj_map == ed.obj_map && fa.mor_map == ed.mor_map).unwrap_or(false))
        .collect();
    if squares.is_empty() {
        return Ok(Outcome::Skipped("no f with f a = e d".into()));
    }
    let f = squares[rng.gen_range(0..squares.len())].clone().named("f");
    let kind = adjoint_for(side);
    if !has_adjoint(&a, kind, &mut bud)? || !has_adjoint(&e, kind, &mut bud)? {
        return Ok(Outcome::Skipped("a or e lacks the adjoint".into()));
    }
    let lhs = pointwise_kan(side, &d, &b.after(&a)?, &mut bud)?;
    let along_f = pointwise_kan(side, &f, &b, &mut bud)?;
    let rhs: Vec<usize> = (0..d_cat.num_objects()).map(|x| along_f[e.ob(x)]).collect();
    Ok(outcome(pointwise_iso(&c_cat, &lhs, &rhs), || {
        format!("{} {} {} {} {}", show(&a), show(&b), show(&d), show(&e), show(&f))
    }))
}

/// Runs `instances` draws of one lemma from a seeded generator. Both halves of
/// the lemma alternate.
pub fn run_lemma(id: &str, seed: u64, instances: usize) -> Result<LemmaReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = LemmaReport {
        id: id.into(),
        seed,
        instances,
        verified: 0,
        counterexamples: 0,
        skipped: 0,
        first_counterexample: None,
        verdict: Verdict::Pass,
    };
    for k in 0..instances {
        let side = if k % 2 == 0 { Side::Left } else { Side::Right };
        let half = match (id, k % 2) {
            ("preadj:1", 0) => "colim",
            ("preadj:1", _) => "lim",
            ("preadj:2", 0) => "pre",
            ("preadj:2", _) => "post",
            (_, 0) => "Lan",
            _ => "Ran",
        };
        let r = match id {
            "preadj:1" => preadj1(&mut rng, side),
            "preadj:2" => preadj2(&mut rng, k % 2 == 1),
            "Kan_id:2" => kan_id2(&mut rng, side),
            "Kan_id:3" => kan_id3(&mut rng, side),
            "Kan_id:4" => kan_id4(&mut rng, side),
            _ => return Err(crate::Error::UnknownObject(format!("lemma {id}"))),
        };
        match r {
            Ok(Outcome::Holds) => report.verified += 1,
            Ok(Outcome::Counterexample(w)) => {
                report.verified += 1;
                report.counterexamples += 1;
                report.first_counterexample.get_or_insert(format!("{half} {w}"));
            }
            Ok(Outcome::Skipped(_)) => report.skipped += 1,
            Err(e) if e.is_resource_limit() => report.skipped += 1,
            Err(e) => return Err(e),
        }
    }
    report.verdict = if report.counterexamples > 0 {
        Verdict::Fail(format!("{} counterexample(s)", report.counterexamples))
    } else if report.verified < MIN_VERIFIED {
        Verdict::Skipped(format!("only {} instance(s) met the hypotheses", report.verified))
    } else {
        Verdict::Pass
    };
    Ok(report)
}

/// The whole suite, one seed per lemma derived from `seed`.
pub fn run_lemma_suite(seed: u64, instances: usize) -> Result<Vec<LemmaReport>> {
    LEMMA_IDS
        .iter()
        .enumerate()
        .map(|(i, id)| run_lemma(id, seed.wrapping_add(i as u64), instances))
        .collect()
}
