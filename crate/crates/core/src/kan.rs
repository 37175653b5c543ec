//! Pointwise Kan extensions: a union/intersection fast path for nullity
//! values, a brute-force path through fincat (co)limits, and general pointwise
//! extensions into small categories.

use std::sync::Arc;

use serde::Serialize;

use crate::check::{ValidationReport, Violation};
use crate::comma::{build_comma_bounded, CommaCategory};
use crate::error::{Error, Result};
use crate::fincat::{colimit_with, discrete, limit_with, terminal, Bounds, Budget, Carrier, FinCategory, Functor};
use crate::nullity::fiber_category;
use crate::order::Family;
use crate::par::{self, Exec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Left,
    Right,
}

/// The objects of a slice `K ↓ d` (left) or `d ↓ K` (right), materialized as a
/// comma category, with the projection to the source of `K`.
#[derive(Clone, Debug)]
pub struct Slice {
    pub side: Side,
    pub comma: CommaCategory,
    pub projection: Functor,
}

impl Slice {
    pub fn len(&self) -> usize {
        self.comma.objects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.comma.objects.is_empty()
    }

    /// `(x, h)` per slice object, `h: K x → d` or `h: d → K x`.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.comma.objects.iter().map(move |&(a, h, b)| match self.side {
            Side::Left => (a, h),
            Side::Right => (b, h),
        })
    }
}

pub fn slice_diagram(k: &Functor, d: usize, side: Side) -> Result<Slice> {
    let one = Arc::new(terminal());
    let at_d = Functor::constant(one, k.target.clone(), d);
    let name = format!("slice@{}", k.target.object_id(d));
    let bounds = Bounds::unbounded();
    Ok(match side {
        Side::Left => {
            let comma = build_comma_bounded(&name, k, &at_d, bounds)?;
            let projection = comma.forget1.clone();
            Slice { side, comma, projection }
        }
        Side::Right => {
            let comma = build_comma_bounded(&name, &at_d, k, bounds)?;
            let projection = comma.forget2.clone();
            Slice { side, comma, projection }
        }
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum KanPath {
    /// Plain union or intersection; every comparison map is a carrier identity.
    Fast,
    /// Universal (co)cone search in the fiber lattice over the carrier of `d`.
    BruteForce,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KanMode {
    /// Fast path when every comparison is a carrier identity, brute force otherwise.
    Auto,
    /// Always search for a universal (co)cone.
    BruteForce,
    /// Run both wherever the fast path applies and fail on disagreement.
    CrossCheck,
}

#[derive(Clone, Copy, Debug)]
pub struct KanOptions {
    pub mode: KanMode,
    pub exec: Exec,
    pub budget: u64,
}

impl Default for KanOptions {
    fn default() -> Self {
        KanOptions {
            mode: KanMode::Auto,
            exec: Exec::default(),
            budget: Budget::DEFAULT,
        }
    }
}

/// Nullity values of a Kan extension, per object of the target of `K`.
#[derive(Clone, Debug, PartialEq)]
pub struct KanResult {
    pub side: Side,
    pub values: Vec<Family>,
    pub paths: Vec<KanPath>,
    pub slice_sizes: Vec<usize>,
    /// Objects where both paths ran and agreed.
    pub cross_checked: usize,
}

/// `Lan_K F (d) = ⋃ { ↓γ(h)[F x] : h: K x → d }`.
pub fn left_kan(k: &Functor, carrier: &Carrier, values: &[Family], opts: KanOptions) -> Result<KanResult> {
    kan(Side::Left, k, carrier, values, opts)
}

/// `Ran_K F (d) = ⋂ { S ⊆ γd : γ(h)(S) ∈ F x, h: d → K x }`.
pub fn right_kan(k: &Functor, carrier: &Carrier, values: &[Family], opts: KanOptions) -> Result<KanResult> {
    kan(Side::Right, k, carrier, values, opts)
}

fn kan(side: Side, k: &Functor, carrier: &Carrier, values: &[Family], opts: KanOptions) -> Result<KanResult> {
    let (src, tgt) = (&*k.source, &*k.target);
    if values.len() != src.num_objects() || carrier.sets.len() != tgt.num_objects() {
        return Err(Error::CarrierMismatch(format!(
            "Kan extension along `{}`: value or carrier tables have the wrong length",
            k.name
        )));
    }
    for (x, v) in values.iter().enumerate() {
        if v.carrier_size() != carrier.size(k.ob(x)) {
            return Err(Error::CarrierMismatch(format!(
                "value at `{}` is not on the carrier of its image",
                src.object_id(x)
            )));
        }
    }
    let per_object = par::map_range(opts.exec, tgt.num_objects(), |d| {
        kan_at(side, k, carrier, values, d, opts)
    });
    let mut out = KanResult {
        side,
        values: Vec::new(),
        paths: Vec::new(),
        slice_sizes: Vec::new(),
        cross_checked: 0,
    };
    for r in per_object {
        let (v, path, size, checked) = r?;
        out.values.push(v);
        out.paths.push(path);
        out.slice_sizes.push(size);
        out.cross_checked += checked as usize;
    }
    Ok(out)
}

/// Slice entries `(x, h)` without materializing the comma category.
fn slice_entries(side: Side, k: &Functor, d: usize) -> Vec<(usize, usize)> {
    let (src, tgt) = (&*k.source, &*k.target);
    (0..src.num_objects())
        .flat_map(|x| {
            let homs = match side {
                Side::Left => tgt.hom(k.ob(x), d),
                Side::Right => tgt.hom(d, k.ob(x)),
            };
            homs.into_iter().map(move |h| (x, h))
        })
        .collect()
}

/// The values of the slice, moved onto the carrier of `d`.
fn fibered_terms(side: Side, carrier: &Carrier, values: &[Family], entries: &[(usize, usize)]) -> Result<Vec<Family>> {
    entries
        .iter()
        .map(|&(x, h)| match side {
            Side::Left => values[x].pushforward(carrier.map(h)),
            Side::Right => values[x].pullback_by_image(carrier.map(h)),
        })
        .collect()
}

fn kan_at(
    side: Side,
    k: &Functor,
    carrier: &Carrier,
    values: &[Family],
    d: usize,
    opts: KanOptions,
) -> Result<(Family, KanPath, usize, bool)> {
    let entries = slice_entries(side, k, d);
    let n = carrier.size(d);
    let fibered = entries.iter().all(|&(_, h)| carrier.map(h).is_identity());
    let terms = fibered_terms(side, carrier, values, &entries)?;
    let fast = || -> Family {
        match side {
            Side::Left => terms.iter().fold(Family::trivial(n), |acc, t| acc.union(t).expect("same carrier")),
            Side::Right => terms.iter().fold(Family::full(n), |acc, t| acc.intersect(t).expect("same carrier")),
        }
    };
    let brute = || -> Result<Family> {
        let fiber = fiber_category(&carrier.sets[d])?;
        // The fiber is thin, so repeated terms do not change the (co)limit.
        let mut objs: Vec<usize> = terms.iter().map(|&t| fiber.object_of(t)).collect();
        objs.sort_unstable();
        objs.dedup();
        let names: Vec<String> = (0..objs.len()).map(|i| format!("s{i}")).collect();
        let index = Arc::new(discrete("slice", &names)?);
        let diagram = Functor::new(
            "slice-values",
            index,
            fiber.category.clone(),
            objs.clone(),
            objs.iter().map(|&o| fiber.category.identity(o)).collect(),
        )?;
        let mut budget = Budget::new("Kan (co)limit search", opts.budget);
        let d_id = k.target.object_id(d).to_string();
        match side {
            Side::Left => colimit_with(&diagram, &mut budget, Exec::Sequential)?
                .map(|c| fiber.families[c.tip])
                .ok_or(Error::NonCocomplete(d_id)),
            Side::Right => limit_with(&diagram, &mut budget, Exec::Sequential)?
                .map(|c| fiber.families[c.tip])
                .ok_or(Error::NonComplete(d_id)),
        }
    };
    let size = entries.len();
    match (opts.mode, fibered) {
        (KanMode::Auto, true) => Ok((fast(), KanPath::Fast, size, false)),
        (KanMode::Auto, false) | (KanMode::BruteForce, _) | (KanMode::CrossCheck, false) => {
            Ok((brute()?, KanPath::BruteForce, size, false))
        }
        (KanMode::CrossCheck, true) => {
            let (f, b) = (fast(), brute()?);
            if f != b {
                return Err(Error::KanMismatch(k.target.object_id(d).to_string()));
            }
            Ok((f, KanPath::Fast, size, true))
        }
    }
}

/// Is `F x ⊆ H (K x)` for every `x`? This is the existence of a unit
/// `F ⇒ H∘K` over identity carrier maps.
pub fn has_unit(k: &Functor, values: &[Family], h: &[Family]) -> bool {
    values.iter().enumerate().all(|(x, v)| v.is_subfamily(&h[k.ob(x)]))
}

/// Is `H (K x) ⊆ F x` for every `x` (a counit `H∘K ⇒ F`)?
pub fn has_counit(k: &Functor, values: &[Family], h: &[Family]) -> bool {
    values.iter().enumerate().all(|(x, v)| h[k.ob(x)].is_subfamily(v))
}

/// Checks that `candidate` has a (co)unit and factors through every
/// competitor that has one.
pub fn check_universal(
    k: &Functor,
    values: &[Family],
    candidate: &KanResult,
    competitors: &[Vec<Family>],
) -> ValidationReport {
    let tgt = &*k.target;
    let mut report = ValidationReport::new(format!("universality of {:?} Kan along {}", candidate.side, k.name));
    let c = &candidate.values;
    let (unit, factor): (fn(&Functor, &[Family], &[Family]) -> bool, fn(&Family, &Family) -> bool) =
        match candidate.side {
            Side::Left => (has_unit, |cand, comp| cand.is_subfamily(comp)),
            Side::Right => (has_counit, |cand, comp| comp.is_subfamily(cand)),
        };
    if !unit(k, values, c) {
        report.push(Violation::new("kan-unit", vec![], "candidate has no unit"));
    }
    for (i, h) in competitors.iter().enumerate() {
        if !unit(k, values, h) {
            continue;
        }
        if let Some(d) = (0..tgt.num_objects()).find(|&d| !factor(&c[d], &h[d])) {
            report.push(Violation::new(
                "kan-factor",
                vec![format!("competitor {i}"), tgt.object_id(d).to_string()],
                "no factoring transformation through the competitor",
            ));
        }
    }
    report
}

/// General pointwise extension into a small category: the tip of the
/// (co)limit of `F` over each slice. Objects only; fails with
/// `NonCocomplete`/`NonComplete` where no universal (co)cone exists.
pub fn pointwise_kan(side: Side, k: &Functor, f: &Functor, budget: &mut Budget) -> Result<Vec<usize>> {
    let mut out = Vec::with_capacity(k.target.num_objects());
    for d in 0..k.target.num_objects() {
        let slice = slice_diagram(k, d, side)?;
        let diagram = f.after(&slice.projection)?;
        let tip = match side {
            Side::Left => colimit_with(&diagram, budget, Exec::Sequential)?
                .ok_or_else(|| Error::NonCocomplete(k.target.object_id(d).to_string()))?
                .tip,
            Side::Right => limit_with(&diagram, budget, Exec::Sequential)?
                .ok_or_else(|| Error::NonComplete(k.target.object_id(d).to_string()))?
                .tip,
        };
        out.push(tip);
    }
    Ok(out)
}

/// Are two object assignments into `e` isomorphic pointwise?
pub fn pointwise_iso(e: &FinCategory, a: &[usize], b: &[usize]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(&x, &y)| x == y || e.find_isomorphism(x, y).is_some())
}
