use std::collections::HashMap;
use std::sync::Arc;

use crate::check::{ValidationReport, Violation};
use crate::error::{Error, Result};
use crate::par::{self, Exec};

const NONE: u32 = u32::MAX;

/// Size limits applied when a category is materialized.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bounds {
    pub max_objects: usize,
    pub max_morphisms: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            max_objects: 64,
            max_morphisms: 4096,
        }
    }
}

impl Bounds {
    pub fn unbounded() -> Self {
        Bounds {
            max_objects: usize::MAX,
            max_morphisms: usize::MAX,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Morphism {
    pub id: String,
    pub dom: usize,
    pub cod: usize,
}

/// An explicitly presented finite category: every hom-set and every composite
/// is stored.
///
/// Composites are kept in per-morphism rows: `rows[g][k]` is `g ∘ f` where `f`
/// is the `k`-th morphism into `dom g`. Memory is exactly the number of
/// composable pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinCategory {
    name: String,
    objects: Vec<String>,
    obj_index: HashMap<String, usize>,
    morphisms: Vec<Morphism>,
    mor_index: HashMap<String, usize>,
    identities: Vec<usize>,
    incoming: Vec<Vec<usize>>,
    outgoing: Vec<Vec<usize>>,
    in_pos: Vec<usize>,
    rows: Vec<Vec<u32>>,
}

impl FinCategory {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn num_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn num_morphisms(&self) -> usize {
        self.morphisms.len()
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn morphisms(&self) -> &[Morphism] {
        &self.morphisms
    }

    pub fn object_id(&self, o: usize) -> &str {
        &self.objects[o]
    }

    pub fn morphism_id(&self, m: usize) -> &str {
        &self.morphisms[m].id
    }

    pub fn object(&self, id: &str) -> Result<usize> {
        self.obj_index
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownObject(id.to_string()))
    }

    pub fn morphism(&self, id: &str) -> Result<usize> {
        self.mor_index
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownMorphism(id.to_string()))
    }

    pub fn dom(&self, m: usize) -> usize {
        self.morphisms[m].dom
    }

    pub fn cod(&self, m: usize) -> usize {
        self.morphisms[m].cod
    }

    pub fn identity(&self, o: usize) -> usize {
        self.identities[o]
    }

    pub fn is_identity(&self, m: usize) -> bool {
        self.identities[self.dom(m)] == m
    }

    pub fn incoming(&self, o: usize) -> &[usize] {
        &self.incoming[o]
    }

    pub fn outgoing(&self, o: usize) -> &[usize] {
        &self.outgoing[o]
    }

    /// Morphisms `a → b` in declaration order.
    pub fn hom(&self, a: usize, b: usize) -> Vec<usize> {
        self.outgoing[a]
            .iter()
            .copied()
            .filter(|&m| self.morphisms[m].cod == b)
            .collect()
    }

    /// `g ∘ f`, or `None` when the pair is not composable or the table has no
    /// entry for it.
    pub fn compose(&self, g: usize, f: usize) -> Option<usize> {
        if self.morphisms[f].cod != self.morphisms[g].dom {
            return None;
        }
        match self.rows[g][self.in_pos[f]] {
            NONE => None,
            h => Some(h as usize),
        }
    }

    /// Composite of a chain listed right-to-left as in `h ∘ g ∘ f`.
    pub fn compose_chain(&self, chain: &[usize]) -> Option<usize> {
        let (&last, rest) = chain.split_last()?;
        rest.iter().rev().try_fold(last, |acc, &g| self.compose(g, acc))
    }

    /// The same presentation with every arrow reversed.
    pub fn opposite(&self) -> FinCategory {
        let morphisms: Vec<Morphism> = self
            .morphisms
            .iter()
            .map(|m| Morphism {
                id: m.id.clone(),
                dom: m.cod,
                cod: m.dom,
            })
            .collect();
        let mut triples = Vec::new();
        for g in 0..self.morphisms.len() {
            for &f in &self.incoming[self.dom(g)] {
                if let Some(h) = self.compose(g, f) {
                    // (g∘f)^op = f^op ∘ g^op
                    triples.push((f, g, h));
                }
            }
        }
        assemble(
            format!("{}^op", self.name),
            self.objects.clone(),
            morphisms,
            self.identities.clone(),
            &triples,
        )
    }

    /// True when every hom-set has at most one element.
    pub fn is_preorder(&self) -> bool {
        (0..self.num_objects()).all(|a| {
            let mut seen = vec![false; self.num_objects()];
            self.outgoing[a].iter().all(|&m| {
                let c = self.morphisms[m].cod;
                !std::mem::replace(&mut seen[c], true)
            })
        })
    }

    /// Is there a morphism `a → b`?
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.outgoing[a].iter().any(|&m| self.morphisms[m].cod == b)
    }

    /// A pair of mutually inverse morphisms `a → b`, `b → a`, if any.
    pub fn find_isomorphism(&self, a: usize, b: usize) -> Option<(usize, usize)> {
        for f in self.hom(a, b) {
            for g in self.hom(b, a) {
                if self.compose(g, f) == Some(self.identity(a))
                    && self.compose(f, g) == Some(self.identity(b))
                {
                    return Some((f, g));
                }
            }
        }
        None
    }

    /// Copy of this category with one composite overwritten. Used to build
    /// deliberately broken tables.
    pub fn with_composite(&self, g: usize, f: usize, h: usize) -> Result<FinCategory> {
        if self.cod(f) != self.dom(g) {
            return Err(Error::Malformed {
                category: self.name.clone(),
                detail: format!("`{}` and `{}` are not composable", self.morphism_id(g), self.morphism_id(f)),
            });
        }
        let mut out = self.clone();
        out.rows[g][self.in_pos[f]] = h as u32;
        Ok(out)
    }

    /// Copy of this category with one composite removed.
    pub fn without_composite(&self, g: usize, f: usize) -> FinCategory {
        let mut out = self.clone();
        if self.cod(f) == self.dom(g) {
            out.rows[g][self.in_pos[f]] = NONE;
        }
        out
    }

    /// Checks totality, typing, identity laws and associativity. One witness
    /// per violated law plus a count.
    pub fn validate(&self) -> ValidationReport {
        self.validate_with(Exec::default())
    }

    pub fn validate_with(&self, exec: Exec) -> ValidationReport {
        let mut report = ValidationReport::new(format!("category {}", self.name));
        let n = self.morphisms.len();
        let id = |m: usize| self.morphisms[m].id.clone();

        // identities are endomorphisms
        for (o, &i) in self.identities.iter().enumerate() {
            if self.dom(i) != o || self.cod(i) != o {
                report.push(Violation::new(
                    "identity-endpoints",
                    vec![self.objects[o].clone(), id(i)],
                    "identity is not an endomorphism of its object",
                ));
            }
        }

        let missing = par::filter_map_range(exec, n, |g| {
            self.incoming[self.dom(g)]
                .iter()
                .find(|&&f| self.compose(g, f).is_none())
                .map(|&f| (g, f))
        });
        if let Some(&(g, f)) = missing.first() {
            report.push(Violation::new(
                "composition-total",
                vec![id(g), id(f)],
                format!("no composite recorded ({} morphisms affected)", missing.len()),
            ));
        }

        let mistyped = par::filter_map_range(exec, n, |g| {
            self.incoming[self.dom(g)].iter().find_map(|&f| {
                let h = self.compose(g, f)?;
                (self.dom(h) != self.dom(f) || self.cod(h) != self.cod(g)).then_some((g, f, h))
            })
        });
        if let Some(&(g, f, h)) = mistyped.first() {
            report.push(Violation::new(
                "composition-typing",
                vec![id(g), id(f), id(h)],
                "composite does not land in Hom(dom f, cod g)",
            ));
        }

        let left_id = par::filter_map_range(exec, n, |f| {
            let i = self.identity(self.cod(f));
            (self.compose(i, f) != Some(f)).then_some(f)
        });
        if let Some(&f) = left_id.first() {
            report.push(Violation::new(
                "identity-left",
                vec![id(self.identity(self.cod(f))), id(f)],
                format!("id ∘ f != f ({} morphisms affected)", left_id.len()),
            ));
        }
        let right_id = par::filter_map_range(exec, n, |f| {
            let i = self.identity(self.dom(f));
            (self.compose(f, i) != Some(f)).then_some(f)
        });
        if let Some(&f) = right_id.first() {
            report.push(Violation::new(
                "identity-right",
                vec![id(f), id(self.identity(self.dom(f)))],
                format!("f ∘ id != f ({} morphisms affected)", right_id.len()),
            ));
        }

        let typed = mistyped.is_empty();
        let assoc = par::filter_map_range(exec, n, |h| {
            if !typed {
                return None;
            }
            let row_h = &self.rows[h];
            for &g in &self.incoming[self.dom(h)] {
                let hg = row_h[self.in_pos[g]];
                if hg == NONE {
                    continue;
                }
                let row_hg = &self.rows[hg as usize];
                let row_g = &self.rows[g];
                for (k, &f) in self.incoming[self.dom(g)].iter().enumerate() {
                    let gf = row_g[k];
                    if gf == NONE {
                        continue;
                    }
                    let l = row_h[self.in_pos[gf as usize]];
                    let r = row_hg[self.in_pos[f]];
                    if l != NONE && r != NONE && l != r {
                        return Some((h, g, f));
                    }
                }
            }
            None
        });
        if let Some(&(h, g, f)) = assoc.first() {
            report.push(Violation::new(
                "associativity",
                vec![id(h), id(g), id(f)],
                format!("h∘(g∘f) != (h∘g)∘f ({} morphisms affected)", assoc.len()),
            ));
        }
        report
    }
}

/// Incremental construction of a [`FinCategory`] by ids.
#[derive(Clone, Debug)]
pub struct CategoryBuilder {
    name: String,
    bounds: Bounds,
    objects: Vec<String>,
    obj_index: HashMap<String, usize>,
    morphisms: Vec<Morphism>,
    mor_index: HashMap<String, usize>,
    identities: HashMap<usize, usize>,
    triples: Vec<(usize, usize, usize)>,
    errors: Vec<Error>,
}

impl CategoryBuilder {
    pub fn new(name: impl Into<String>) -> Self {
        CategoryBuilder {
            name: name.into(),
            bounds: Bounds::default(),
            objects: Vec::new(),
            obj_index: HashMap::new(),
            morphisms: Vec::new(),
            mor_index: HashMap::new(),
            identities: HashMap::new(),
            triples: Vec::new(),
            errors: Vec::new(),
        }
    }

    pub fn bounds(mut self, bounds: Bounds) -> Self {
        self.bounds = bounds;
        self
    }

    pub fn object(&mut self, id: &str) -> usize {
        if let Some(&o) = self.obj_index.get(id) {
            self.errors.push(Error::DuplicateId(id.to_string()));
            return o;
        }
        let o = self.objects.len();
        self.objects.push(id.to_string());
        self.obj_index.insert(id.to_string(), o);
        o
    }

    pub fn morphism(&mut self, id: &str, dom: &str, cod: &str) -> Option<usize> {
        if self.mor_index.contains_key(id) {
            self.errors.push(Error::DuplicateId(id.to_string()));
            return None;
        }
        let (d, c) = match (self.obj_index.get(dom), self.obj_index.get(cod)) {
            (Some(&d), Some(&c)) => (d, c),
            (None, _) => {
                self.errors.push(Error::UnknownObject(dom.to_string()));
                return None;
            }
            (_, None) => {
                self.errors.push(Error::UnknownObject(cod.to_string()));
                return None;
            }
        };
        Some(self.push_morphism(id, d, c))
    }

    pub fn push_morphism(&mut self, id: &str, dom: usize, cod: usize) -> usize {
        let m = self.morphisms.len();
        self.morphisms.push(Morphism {
            id: id.to_string(),
            dom,
            cod,
        });
        self.mor_index.insert(id.to_string(), m);
        m
    }

    pub fn identity(&mut self, object: &str, morphism: &str) {
        match (self.obj_index.get(object), self.mor_index.get(morphism)) {
            (Some(&o), Some(&m)) => self.set_identity(o, m),
            (None, _) => self.errors.push(Error::UnknownObject(object.to_string())),
            (_, None) => self.errors.push(Error::UnknownMorphism(morphism.to_string())),
        }
    }

    pub fn set_identity(&mut self, o: usize, m: usize) {
        if self.identities.insert(o, m).is_some() {
            self.errors.push(Error::Malformed {
                category: self.name.clone(),
                detail: format!("object `{}` has two identities", self.objects[o]),
            });
        }
    }

    /// Adds an object together with an identity named `id_<object>`.
    pub fn object_with_identity(&mut self, id: &str) -> usize {
        let o = self.object(id);
        let m = self.push_morphism(&format!("id_{id}"), o, o);
        self.set_identity(o, m);
        o
    }

    /// Records `g ∘ f = gf`.
    pub fn compose(&mut self, g: &str, f: &str, gf: &str) {
        let lookup = |id: &str| self.mor_index.get(id).copied();
        match (lookup(g), lookup(f), lookup(gf)) {
            (Some(g), Some(f), Some(h)) => self.triples.push((g, f, h)),
            (g2, f2, _) => {
                let missing = if g2.is_none() {
                    g
                } else if f2.is_none() {
                    f
                } else {
                    gf
                };
                self.errors.push(Error::UnknownMorphism(missing.to_string()));
            }
        }
    }

    pub fn push_composite(&mut self, g: usize, f: usize, h: usize) {
        self.triples.push((g, f, h));
    }

    pub fn build(self) -> Result<FinCategory> {
        self.finish(false)
    }

    /// Like [`build`](Self::build) but fills in every composite with an
    /// identity that the caller left out.
    pub fn build_with_identity_laws(self) -> Result<FinCategory> {
        self.finish(true)
    }

    fn finish(mut self, fill_identities: bool) -> Result<FinCategory> {
        if let Some(e) = self.errors.into_iter().next() {
            return Err(e);
        }
        let name = self.name.clone();
        if self.objects.len() > self.bounds.max_objects {
            return Err(Error::SizeBound {
                what: format!("objects of `{name}`"),
                size: self.objects.len(),
                limit: self.bounds.max_objects,
            });
        }
        if self.morphisms.len() > self.bounds.max_morphisms {
            return Err(Error::SizeBound {
                what: format!("morphisms of `{name}`"),
                size: self.morphisms.len(),
                limit: self.bounds.max_morphisms,
            });
        }
        let mut identities = Vec::with_capacity(self.objects.len());
        for o in 0..self.objects.len() {
            match self.identities.get(&o) {
                Some(&m) => identities.push(m),
                None => {
                    return Err(Error::Malformed {
                        category: name,
                        detail: format!("object `{}` has no identity", self.objects[o]),
                    })
                }
            }
        }
        for &(g, f, _) in &self.triples {
            if self.morphisms[f].cod != self.morphisms[g].dom {
                return Err(Error::Malformed {
                    category: name,
                    detail: format!(
                        "composite of non-composable pair (`{}`, `{}`)",
                        self.morphisms[g].id, self.morphisms[f].id
                    ),
                });
            }
        }
        if fill_identities {
            for m in 0..self.morphisms.len() {
                let (d, c) = (self.morphisms[m].dom, self.morphisms[m].cod);
                self.triples.push((m, identities[d], m));
                self.triples.push((identities[c], m, m));
            }
        }
        let mut seen: HashMap<(usize, usize), usize> = HashMap::new();
        let mut triples = Vec::with_capacity(self.triples.len());
        for &(g, f, h) in &self.triples {
            match seen.insert((g, f), h) {
                Some(prev) if prev != h && !fill_identities => {
                    return Err(Error::Malformed {
                        category: name,
                        detail: format!(
                            "conflicting composites for (`{}`, `{}`)",
                            self.morphisms[g].id, self.morphisms[f].id
                        ),
                    })
                }
                Some(_) => {}
                None => triples.push((g, f, h)),
            }
        }
        Ok(assemble(name, self.objects, self.morphisms, identities, &triples))
    }
}

fn assemble(
    name: String,
    objects: Vec<String>,
    morphisms: Vec<Morphism>,
    identities: Vec<usize>,
    triples: &[(usize, usize, usize)],
) -> FinCategory {
    let n = objects.len();
    let mut incoming = vec![Vec::new(); n];
    let mut outgoing = vec![Vec::new(); n];
    let mut in_pos = vec![0; morphisms.len()];
    for (i, m) in morphisms.iter().enumerate() {
        in_pos[i] = incoming[m.cod].len();
        incoming[m.cod].push(i);
        outgoing[m.dom].push(i);
    }
    let mut rows: Vec<Vec<u32>> = morphisms
        .iter()
        .map(|g| vec![NONE; incoming[g.dom].len()])
        .collect();
    for &(g, f, h) in triples {
        rows[g][in_pos[f]] = h as u32;
    }
    let obj_index = objects.iter().cloned().enumerate().map(|(i, o)| (o, i)).collect();
    let mor_index = morphisms
        .iter()
        .enumerate()
        .map(|(i, m)| (m.id.clone(), i))
        .collect();
    FinCategory {
        name,
        objects,
        obj_index,
        morphisms,
        mor_index,
        identities,
        incoming,
        outgoing,
        in_pos,
        rows,
    }
}

/// Two handles denote the same category.
pub fn same_category(a: &Arc<FinCategory>, b: &Arc<FinCategory>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}
