use std::collections::HashMap;

use crate::check::{ValidationReport, Violation};
use crate::error::{Error, Result};
use crate::fincat::FinCategory;

/// Ordered list of distinct element ids.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteSet {
    elements: Vec<String>,
}

impl FiniteSet {
    pub fn new<S: Into<String>>(elements: impl IntoIterator<Item = S>) -> Result<Self> {
        let elements: Vec<String> = elements.into_iter().map(Into::into).collect();
        let mut seen = std::collections::HashSet::new();
        for e in &elements {
            if !seen.insert(e.as_str()) {
                return Err(Error::DuplicateId(e.clone()));
            }
        }
        Ok(FiniteSet { elements })
    }

    /// `{0, 1, …, n-1}` with decimal ids.
    pub fn range(n: usize) -> Self {
        FiniteSet {
            elements: (0..n).map(|i| i.to_string()).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &str {
        &self.elements[i]
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.elements.iter().position(|e| e == id)
    }

    /// Every subset as a bitmask, in increasing numeric order.
    pub fn subsets(&self) -> impl Iterator<Item = u32> {
        0..(1u32 << self.len())
    }

    pub fn subset_ids(&self, mask: u32) -> Vec<String> {
        (0..self.len())
            .filter(|&i| mask >> i & 1 == 1)
            .map(|i| self.elements[i].clone())
            .collect()
    }
}

/// A total function between finite sets, stored by element index.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SetMap {
    pub dom: usize,
    pub cod: usize,
    pub map: Vec<usize>,
}

impl SetMap {
    pub fn new(dom: usize, cod: usize, map: Vec<usize>) -> Result<Self> {
        if map.len() != dom {
            return Err(Error::CarrierMismatch(format!(
                "set map has {} entries for a domain of size {dom}",
                map.len()
            )));
        }
        if let Some(&x) = map.iter().find(|&&x| x >= cod) {
            return Err(Error::CarrierMismatch(format!(
                "image {x} outside codomain of size {cod}"
            )));
        }
        Ok(SetMap { dom, cod, map })
    }

    pub fn identity(n: usize) -> Self {
        SetMap {
            dom: n,
            cod: n,
            map: (0..n).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.dom == self.cod && self.map.iter().enumerate().all(|(i, &x)| i == x)
    }

    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &SetMap) -> SetMap {
        SetMap {
            dom: first.dom,
            cod: self.cod,
            map: first.map.iter().map(|&x| self.map[x]).collect(),
        }
    }

    pub fn image(&self, subset: u32) -> u32 {
        (0..self.dom)
            .filter(|&i| subset >> i & 1 == 1)
            .fold(0, |acc, i| acc | 1 << self.map[i])
    }

    pub fn preimage(&self, subset: u32) -> u32 {
        (0..self.dom)
            .filter(|&i| subset >> self.map[i] & 1 == 1)
            .fold(0, |acc, i| acc | 1 << i)
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.cod];
        self.map.iter().all(|&x| !std::mem::replace(&mut seen[x], true))
    }
}

/// The carrier functor γ: a finite set per object and a set map per
/// morphism of some category.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Carrier {
    pub sets: Vec<FiniteSet>,
    pub maps: Vec<SetMap>,
}

impl Carrier {
    pub fn new(sets: Vec<FiniteSet>, maps: Vec<SetMap>) -> Self {
        Carrier { sets, maps }
    }

    /// Builds a carrier from id-keyed tables.
    pub fn from_ids(
        cat: &FinCategory,
        sets: &HashMap<String, FiniteSet>,
        maps: &HashMap<String, Vec<String>>,
    ) -> Result<Self> {
        let mut out_sets = Vec::with_capacity(cat.num_objects());
        for o in cat.objects() {
            let s = sets
                .get(o)
                .ok_or_else(|| Error::CarrierMismatch(format!("no carrier set for object `{o}`")))?;
            out_sets.push(s.clone());
        }
        let mut out_maps = Vec::with_capacity(cat.num_morphisms());
        for (m, rec) in cat.morphisms().iter().enumerate() {
            let (d, c) = (&out_sets[rec.dom], &out_sets[rec.cod]);
            let map = match maps.get(&rec.id) {
                Some(images) => {
                    if images.len() != d.len() {
                        return Err(Error::CarrierMismatch(format!(
                            "carrier map of `{}` has {} entries, domain has {}",
                            rec.id,
                            images.len(),
                            d.len()
                        )));
                    }
                    let idx = images
                        .iter()
                        .map(|e| {
                            c.index_of(e).ok_or_else(|| {
                                Error::CarrierMismatch(format!(
                                    "`{e}` is not in the carrier of `{}`",
                                    cat.object_id(rec.cod)
                                ))
                            })
                        })
                        .collect::<Result<Vec<_>>>()?;
                    SetMap::new(d.len(), c.len(), idx)?
                }
                None if cat.is_identity(m) => SetMap::identity(d.len()),
                None => {
                    return Err(Error::CarrierMismatch(format!(
                        "no carrier map for morphism `{}`",
                        rec.id
                    )))
                }
            };
            out_maps.push(map);
        }
        Ok(Carrier::new(out_sets, out_maps))
    }

    pub fn size(&self, o: usize) -> usize {
        self.sets[o].len()
    }

    pub fn map(&self, m: usize) -> &SetMap {
        &self.maps[m]
    }

    pub fn max_size(&self) -> usize {
        self.sets.iter().map(FiniteSet::len).max().unwrap_or(0)
    }

    /// Checks typing, identities and composition against `cat`.
    pub fn check(&self, cat: &FinCategory) -> ValidationReport {
        let mut report = ValidationReport::new(format!("carrier on {}", cat.name()));
        if self.sets.len() != cat.num_objects() || self.maps.len() != cat.num_morphisms() {
            report.push(Violation::new(
                "carrier-shape",
                vec![],
                "carrier tables do not match the category",
            ));
            return report;
        }
        for (m, rec) in cat.morphisms().iter().enumerate() {
            let s = &self.maps[m];
            if s.dom != self.size(rec.dom) || s.cod != self.size(rec.cod) || s.map.len() != s.dom {
                report.push(Violation::new(
                    "carrier-typing",
                    vec![rec.id.clone()],
                    "set map does not match the carriers of its endpoints",
                ));
            }
        }
        if !report.is_valid() {
            return report;
        }
        for o in 0..cat.num_objects() {
            if !self.maps[cat.identity(o)].is_identity() {
                report.push(Violation::new(
                    "carrier-identity",
                    vec![cat.morphism_id(cat.identity(o)).to_string()],
                    "identity is not sent to the identity map",
                ));
            }
        }
        for g in 0..cat.num_morphisms() {
            for &f in cat.incoming(cat.dom(g)) {
                if let Some(h) = cat.compose(g, f) {
                    if self.maps[h] != self.maps[g].after(&self.maps[f]) {
                        report.push(Violation::new(
                            "carrier-composition",
                            vec![
                                cat.morphism_id(g).to_string(),
                                cat.morphism_id(f).to_string(),
                            ],
                            "γ(g∘f) != γ(g)∘γ(f)",
                        ));
                    }
                }
            }
        }
        report
    }

    /// `γ ∘ F` for a functor `F` into the carrier's category.
    pub fn along(&self, f: &crate::fincat::Functor) -> Carrier {
        Carrier {
            sets: f.obj_map.iter().map(|&o| self.sets[o].clone()).collect(),
            maps: f.mor_map.iter().map(|&m| self.maps[m].clone()).collect(),
        }
    }
}
