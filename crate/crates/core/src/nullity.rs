//! The Nullity category, nullity functors and base nullity constructors.

use std::sync::Arc;

use serde::Serialize;

use crate::check::{ValidationReport, Violation};
use crate::error::{Error, Result};
use crate::fincat::{build_preorder_bounded, Bounds, Carrier, CategoryBuilder, FinCategory, FiniteSet, SetMap};
use crate::order::{image_preserves, image_witness, Family, NullityStructure};

/// Largest carrier over which the full Nullity category is materialized.
pub const MATERIALIZE_LIMIT: usize = 3;

/// Largest carrier whose fiber lattice is materialized.
pub const FIBER_LIMIT: usize = 4;

/// `φ(S) ∈ N_B` for every `S ∈ N_A`.
pub fn check_nullity_morphism(phi: &SetMap, a: &NullityStructure, b: &NullityStructure) -> Result<bool> {
    image_preserves(phi, a, b)
}

/// `φ⁻¹(S) ∈ N_A` for every `S ∈ N_B`. Diagnostic only.
pub fn check_conullity_morphism(phi: &SetMap, a: &NullityStructure, b: &NullityStructure) -> Result<bool> {
    if a.carrier().len() != phi.dom || b.carrier().len() != phi.cod {
        return Err(Error::CarrierMismatch("map does not match the carriers".into()));
    }
    Ok(b.nulls().members().all(|s| a.is_null(phi.preimage(s))))
}

/// Finite model of a base nullity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BaseKind {
    /// `{S : |S| ≤ k}`.
    Cardinality(usize),
    /// `{S : S ≠ carrier}`.
    Proper,
    /// `{∅}`.
    Trivial,
}

pub fn base_nullity(kind: BaseKind, carrier: &FiniteSet) -> Result<NullityStructure> {
    NullityStructure::new(carrier.clone(), base_family(kind, carrier.len()))
}

pub fn base_family(kind: BaseKind, n: usize) -> Family {
    let full = (1u32 << n) - 1;
    Family::from_members(
        n,
        (0..=full).filter(|&s| match kind {
            BaseKind::Cardinality(k) => s.count_ones() as usize <= k,
            BaseKind::Proper => s != full || n == 0,
            BaseKind::Trivial => s == 0,
        }),
    )
}

/// A materialized Nullity category together with the structure behind each
/// object.
#[derive(Clone, Debug)]
pub struct NullityCategory {
    pub category: Arc<FinCategory>,
    pub carriers: Vec<FiniteSet>,
    /// Per object: index into `carriers` and the null family.
    pub objects: Vec<(usize, Family)>,
    /// Per morphism: the underlying set map.
    pub maps: Vec<SetMap>,
}

impl NullityCategory {
    pub fn structure(&self, o: usize) -> NullityStructure {
        let (c, f) = self.objects[o];
        NullityStructure::new(self.carriers[c].clone(), f).expect("materialized objects are valid")
    }

    pub fn find_object(&self, carrier: usize, nulls: Family) -> Option<usize> {
        self.objects.iter().position(|&(c, f)| c == carrier && f == nulls)
    }

    /// The morphism over `map` between two objects, if nullity is preserved.
    pub fn find_morphism(&self, a: usize, b: usize, map: &SetMap) -> Option<usize> {
        self.category.hom(a, b).into_iter().find(|&m| &self.maps[m] == map)
    }
}

fn family_id(carrier: &FiniteSet, f: Family) -> String {
    let sets: Vec<String> = f
        .members()
        .map(|m| format!("{{{}}}", carrier.subset_ids(m).join(",")))
        .collect();
    format!("{{{}}}", sets.join(","))
}

fn all_maps(d: usize, c: usize) -> Vec<SetMap> {
    if d > 0 && c == 0 {
        return Vec::new();
    }
    let total = c.pow(d as u32);
    (0..total)
        .map(|mut code| {
            let map = (0..d)
                .map(|_| {
                    let x = code % c;
                    code /= c;
                    x
                })
                .collect();
            SetMap { dom: d, cod: c, map }
        })
        .collect()
}

/// All `(carrier, down-set containing ∅)` pairs over the given carriers, with
/// every nullity-preserving set map as a morphism.
pub fn materialize_nullity_category(carriers: &[FiniteSet], max_carrier: usize) -> Result<NullityCategory> {
    if max_carrier > MATERIALIZE_LIMIT {
        return Err(Error::Guard(format!(
            "Nullity materialization limited to carriers of size {MATERIALIZE_LIMIT}, asked for {max_carrier}"
        )));
    }
    if let Some(c) = carriers.iter().find(|c| c.len() > max_carrier) {
        return Err(Error::Guard(format!(
            "carrier of size {} exceeds the materialization bound {max_carrier}",
            c.len()
        )));
    }
    let mut b = CategoryBuilder::new("Nullity").bounds(Bounds::unbounded());
    let mut objects = Vec::new();
    for (ci, c) in carriers.iter().enumerate() {
        for f in Family::all_nullities(c.len()) {
            b.object(&format!("{ci}:{}", family_id(c, f)));
            objects.push((ci, f));
        }
    }
    let code = |m: &SetMap| m.map.iter().rev().fold(0usize, |acc, &x| acc * m.cod.max(1) + x);
    let mut maps = Vec::new();
    // per_pair[x][y][code of map] = morphism index
    let mut per_pair: Vec<Vec<Vec<usize>>> = vec![vec![Vec::new(); objects.len()]; objects.len()];
    let mut listed: Vec<Vec<Vec<usize>>> = vec![vec![Vec::new(); objects.len()]; objects.len()];
    for (x, &(cx, fx)) in objects.iter().enumerate() {
        for (y, &(cy, fy)) in objects.iter().enumerate() {
            let candidates = all_maps(carriers[cx].len(), carriers[cy].len());
            per_pair[x][y] = vec![usize::MAX; candidates.len()];
            for m in candidates {
                if fx.members().all(|s| fy.contains(m.image(s))) {
                    let id = format!("{x}->{y}:{:?}", m.map);
                    let k = b.push_morphism(&id, x, y);
                    per_pair[x][y][code(&m)] = k;
                    listed[x][y].push(k);
                    maps.push(m);
                }
            }
        }
    }
    for (x, &(cx, _)) in objects.iter().enumerate() {
        let id = per_pair[x][x][code(&SetMap::identity(carriers[cx].len()))];
        b.set_identity(x, id);
    }
    let n = objects.len();
    for x in 0..n {
        for y in 0..n {
            for &f in &listed[x][y] {
                for z in 0..n {
                    for &g in &listed[y][z] {
                        let h = per_pair[x][z][code(&maps[g].after(&maps[f]))];
                        debug_assert_ne!(h, usize::MAX, "composites of nullity maps preserve nullity");
                        b.push_composite(g, f, h);
                    }
                }
            }
        }
    }
    Ok(NullityCategory {
        category: Arc::new(b.build()?),
        carriers: carriers.to_vec(),
        objects,
        maps,
    })
}

/// The fiber of Nullity over one carrier: every down-set containing `∅`,
/// ordered by inclusion (morphisms are the identity carrier map).
#[derive(Clone, Debug)]
pub struct Fiber {
    pub category: Arc<FinCategory>,
    pub families: Vec<Family>,
}

impl Fiber {
    pub fn object_of(&self, f: Family) -> usize {
        self.families
            .iter()
            .position(|&g| g == f)
            .expect("family is a nullity over this carrier")
    }
}

pub fn fiber_category(carrier: &FiniteSet) -> Result<Fiber> {
    if carrier.len() > FIBER_LIMIT {
        return Err(Error::Guard(format!(
            "fiber lattice limited to carriers of size {FIBER_LIMIT}, got {}",
            carrier.len()
        )));
    }
    let families = Family::all_nullities(carrier.len());
    let ids: Vec<String> = families.iter().map(|&f| family_id(carrier, f)).collect();
    let cat = build_preorder_bounded(
        &format!("Nullity|{}", carrier.len()),
        &ids,
        |a, b| families[a].is_subfamily(&families[b]),
        Bounds::unbounded(),
    )?;
    Ok(Fiber {
        category: Arc::new(cat),
        families,
    })
}

/// A nullity functor presented object-wise: one null family per object on
/// its carrier.
#[derive(Clone, Debug, PartialEq)]
pub struct NullityAssignment {
    pub source: Arc<FinCategory>,
    pub carrier: Carrier,
    pub nulls: Vec<Family>,
}

impl NullityAssignment {
    pub fn new(source: Arc<FinCategory>, carrier: Carrier, nulls: Vec<Family>) -> Result<Self> {
        if nulls.len() != source.num_objects() || carrier.sets.len() != source.num_objects() {
            return Err(Error::CarrierMismatch(format!(
                "assignment on `{}` does not cover every object",
                source.name()
            )));
        }
        for (o, f) in nulls.iter().enumerate() {
            NullityStructure::new(carrier.sets[o].clone(), *f).map_err(|e| match e {
                Error::InvalidNullity(d) => {
                    Error::InvalidNullity(format!("at `{}`: {d}", source.object_id(o)))
                }
                e => e,
            })?;
        }
        Ok(NullityAssignment { source, carrier, nulls })
    }

    pub fn uniform(source: Arc<FinCategory>, carrier: Carrier, kind: BaseKind) -> Result<Self> {
        let nulls = carrier.sets.iter().map(|c| base_family(kind, c.len())).collect();
        NullityAssignment::new(source, carrier, nulls)
    }

    pub fn structure(&self, o: usize) -> NullityStructure {
        NullityStructure::new(self.carrier.sets[o].clone(), self.nulls[o]).expect("checked on construction")
    }

    pub fn is_null(&self, o: usize, subset: u32) -> bool {
        self.nulls[o].contains(subset)
    }

    /// Morphisms violating image preservation, with the first witness set.
    pub fn violations(&self, only: impl Fn(usize) -> bool) -> Vec<(usize, u32)> {
        (0..self.source.num_morphisms())
            .filter(|&m| only(m))
            .filter_map(|m| {
                let (a, b) = (self.source.dom(m), self.source.cod(m));
                let phi = self.carrier.map(m);
                self.nulls[a]
                    .members()
                    .find(|&s| !self.nulls[b].contains(phi.image(s)))
                    .map(|s| (m, s))
            })
            .collect()
    }

    /// Pointwise inclusion `self ⊆ other`.
    pub fn is_contained_in(&self, other: &NullityAssignment) -> bool {
        self.nulls.iter().zip(&other.nulls).all(|(a, b)| a.is_subfamily(b))
    }
}

/// Every morphism `f: m → m'` with some null `S` whose image `γ(f)(S)` is not null.
pub fn check_nullity_assignment(n: &NullityAssignment) -> ValidationReport {
    let mut report = ValidationReport::new(format!("nullity on {}", n.source.name()));
    let carrier_report = n.carrier.check(&n.source);
    if !carrier_report.is_valid() {
        report.extend(carrier_report);
        return report;
    }
    for (m, s) in n.violations(|_| true) {
        let a = n.source.dom(m);
        report.push(Violation::new(
            "nullity-image",
            vec![
                n.source.morphism_id(m).to_string(),
                format!("{{{}}}", n.carrier.sets[a].subset_ids(s).join(",")),
            ],
            "image of a null set is not null",
        ));
    }
    report
}

/// First null set of `a` whose image under `phi` is not `b`-null.
pub fn nullity_witness(phi: &SetMap, a: &NullityStructure, b: &NullityStructure) -> Option<u32> {
    image_witness(phi, a, b)
}
