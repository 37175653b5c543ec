use std::collections::HashMap;
use std::sync::Arc;

use crate::check::{ValidationReport, Violation};
use crate::error::{Error, Result};
use crate::fincat::{same_category, Budget, FinCategory};

/// Object and morphism maps between two finite categories, by index.
#[derive(Clone, Debug)]
pub struct Functor {
    pub name: String,
    pub source: Arc<FinCategory>,
    pub target: Arc<FinCategory>,
    pub obj_map: Vec<usize>,
    pub mor_map: Vec<usize>,
}

impl PartialEq for Functor {
    fn eq(&self, other: &Self) -> bool {
        same_category(&self.source, &other.source)
            && same_category(&self.target, &other.target)
            && self.obj_map == other.obj_map
            && self.mor_map == other.mor_map
    }
}

impl Functor {
    pub fn new(
        name: impl Into<String>,
        source: Arc<FinCategory>,
        target: Arc<FinCategory>,
        obj_map: Vec<usize>,
        mor_map: Vec<usize>,
    ) -> Result<Self> {
        let name = name.into();
        if obj_map.len() != source.num_objects() || mor_map.len() != source.num_morphisms() {
            return Err(Error::FunctorMismatch(format!(
                "`{name}`: maps do not cover the source category"
            )));
        }
        if obj_map.iter().any(|&o| o >= target.num_objects())
            || mor_map.iter().any(|&m| m >= target.num_morphisms())
        {
            return Err(Error::FunctorMismatch(format!(
                "`{name}`: image outside the target category"
            )));
        }
        Ok(Functor {
            name,
            source,
            target,
            obj_map,
            mor_map,
        })
    }

    /// Builds a functor from id-keyed maps. Identities may be omitted from
    /// `mor_map`; they are sent to the identity of the image object.
    pub fn from_ids(
        name: impl Into<String>,
        source: Arc<FinCategory>,
        target: Arc<FinCategory>,
        obj_map: &HashMap<String, String>,
        mor_map: &HashMap<String, String>,
    ) -> Result<Self> {
        let name = name.into();
        let mut objs = Vec::with_capacity(source.num_objects());
        for o in source.objects() {
            let t = obj_map.get(o).ok_or_else(|| {
                Error::FunctorMismatch(format!("`{name}`: object `{o}` is not mapped"))
            })?;
            objs.push(target.object(t)?);
        }
        let mut mors = Vec::with_capacity(source.num_morphisms());
        for (m, rec) in source.morphisms().iter().enumerate() {
            let t = match mor_map.get(&rec.id) {
                Some(t) => target.morphism(t)?,
                None if source.is_identity(m) => target.identity(objs[rec.dom]),
                None => {
                    return Err(Error::FunctorMismatch(format!(
                        "`{name}`: morphism `{}` is not mapped",
                        rec.id
                    )))
                }
            };
            mors.push(t);
        }
        Functor::new(name, source, target, objs, mors)
    }

    pub fn identity(cat: Arc<FinCategory>) -> Self {
        Functor {
            name: format!("Id_{}", cat.name()),
            obj_map: (0..cat.num_objects()).collect(),
            mor_map: (0..cat.num_morphisms()).collect(),
            source: cat.clone(),
            target: cat,
        }
    }

    /// Everything goes to `object` and its identity.
    pub fn constant(source: Arc<FinCategory>, target: Arc<FinCategory>, object: usize) -> Self {
        let id = target.identity(object);
        Functor {
            name: format!("const_{}", target.object_id(object)),
            obj_map: vec![object; source.num_objects()],
            mor_map: vec![id; source.num_morphisms()],
            source,
            target,
        }
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &Functor) -> Result<Functor> {
        if !same_category(&first.target, &self.source) {
            return Err(Error::FunctorMismatch(format!(
                "cannot compose `{}` after `{}`: {} != {}",
                self.name,
                first.name,
                first.target.name(),
                self.source.name()
            )));
        }
        Ok(Functor {
            name: format!("{}∘{}", self.name, first.name),
            source: first.source.clone(),
            target: self.target.clone(),
            obj_map: first.obj_map.iter().map(|&o| self.obj_map[o]).collect(),
            mor_map: first.mor_map.iter().map(|&m| self.mor_map[m]).collect(),
        })
    }

    pub fn named(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn ob(&self, o: usize) -> usize {
        self.obj_map[o]
    }

    pub fn mor(&self, m: usize) -> usize {
        self.mor_map[m]
    }

    /// First object and first morphism where two parallel functors differ.
    pub fn difference(&self, other: &Functor) -> Option<String> {
        if let Some(o) = (0..self.obj_map.len()).find(|&o| self.obj_map.get(o) != other.obj_map.get(o)) {
            return Some(format!("object `{}`", self.source.object_id(o)));
        }
        (0..self.mor_map.len())
            .find(|&m| self.mor_map.get(m) != other.mor_map.get(m))
            .map(|m| format!("morphism `{}`", self.source.morphism_id(m)))
    }

    pub fn check(&self) -> ValidationReport {
        check_functor(self)
    }
}

/// Every violated functor law, with witnesses.
pub fn check_functor(f: &Functor) -> ValidationReport {
    let (s, t) = (&*f.source, &*f.target);
    let mut report = ValidationReport::new(format!("functor {}", f.name));
    for (m, rec) in s.morphisms().iter().enumerate() {
        let fm = f.mor_map[m];
        if t.dom(fm) != f.obj_map[rec.dom] || t.cod(fm) != f.obj_map[rec.cod] {
            report.push(Violation::new(
                "functor-typing",
                vec![rec.id.clone(), t.morphism_id(fm).to_string()],
                "image is not in Hom(F dom, F cod)",
            ));
        }
    }
    for o in 0..s.num_objects() {
        let want = t.identity(f.obj_map[o]);
        if f.mor_map[s.identity(o)] != want {
            report.push(Violation::new(
                "functor-identity",
                vec![s.morphism_id(s.identity(o)).to_string()],
                format!("identity is sent to `{}`", t.morphism_id(f.mor_map[s.identity(o)])),
            ));
        }
    }
    if !report.is_valid() {
        return report;
    }
    for g in 0..s.num_morphisms() {
        for &h in s.incoming(s.dom(g)) {
            let Some(gh) = s.compose(g, h) else { continue };
            if t.compose(f.mor_map[g], f.mor_map[h]) != Some(f.mor_map[gh]) {
                report.push(Violation::new(
                    "functor-composition",
                    vec![s.morphism_id(g).to_string(), s.morphism_id(h).to_string()],
                    "F(g∘f) != F(g)∘F(f)",
                ));
            }
        }
    }
    report
}

/// Every functor `source → target`, in lexicographic order of object
/// assignments then morphism assignments. Fails once more than `budget`
/// partial assignments have been explored.
pub fn enumerate_functors(
    source: &Arc<FinCategory>,
    target: &Arc<FinCategory>,
    budget: &mut Budget,
) -> Result<Vec<Functor>> {
    search_functors(source, target, |_, _| true, |_, _| true, None, budget)
}

/// Functors whose object and morphism assignments pass the given filters, at
/// most `limit` of them, in the same order as [`enumerate_functors`].
pub fn search_functors(
    source: &Arc<FinCategory>,
    target: &Arc<FinCategory>,
    obj_ok: impl Fn(usize, usize) -> bool,
    mor_ok: impl Fn(usize, usize) -> bool,
    limit: Option<usize>,
    budget: &mut Budget,
) -> Result<Vec<Functor>> {
    let (s, t) = (&**source, &**target);
    let obj_cands: Vec<Vec<usize>> = (0..s.num_objects())
        .map(|o| (0..t.num_objects()).filter(|&x| obj_ok(o, x)).collect())
        .collect();
    let mut search = Search {
        s,
        t,
        obj_cands: &obj_cands,
        mor_ok: &mor_ok,
        limit: limit.unwrap_or(usize::MAX),
        objs: vec![usize::MAX; s.num_objects()],
        mors: vec![usize::MAX; s.num_morphisms()],
        found: Vec::new(),
    };
    search.objects(0, budget)?;
    Ok(search
        .found
        .into_iter()
        .enumerate()
        .map(|(i, (objs, mors))| Functor {
            name: format!("F{i}"),
            source: source.clone(),
            target: target.clone(),
            obj_map: objs,
            mor_map: mors,
        })
        .collect())
}

struct Search<'a> {
    s: &'a FinCategory,
    t: &'a FinCategory,
    obj_cands: &'a [Vec<usize>],
    mor_ok: &'a dyn Fn(usize, usize) -> bool,
    limit: usize,
    objs: Vec<usize>,
    mors: Vec<usize>,
    found: Vec<(Vec<usize>, Vec<usize>)>,
}

impl Search<'_> {
    fn done(&self) -> bool {
        self.found.len() >= self.limit
    }

    fn objects(&mut self, i: usize, budget: &mut Budget) -> Result<()> {
        if i == self.objs.len() {
            for o in 0..self.s.num_objects() {
                let id = self.s.identity(o);
                let tid = self.t.identity(self.objs[o]);
                if !(self.mor_ok)(id, tid) {
                    return Ok(());
                }
                self.mors[id] = tid;
            }
            self.morphisms(0, budget)?;
            self.mors.iter_mut().for_each(|m| *m = usize::MAX);
            return Ok(());
        }
        for k in 0..self.obj_cands[i].len() {
            if self.done() {
                break;
            }
            budget.spend()?;
            self.objs[i] = self.obj_cands[i][k];
            self.objects(i + 1, budget)?;
        }
        Ok(())
    }

    fn morphisms(&mut self, m: usize, budget: &mut Budget) -> Result<()> {
        if self.done() {
            return Ok(());
        }
        if m == self.mors.len() {
            self.found.push((self.objs.clone(), self.mors.clone()));
            return Ok(());
        }
        if self.s.is_identity(m) {
            return if consistent(self.s, self.t, m, &self.mors) {
                self.morphisms(m + 1, budget)
            } else {
                Ok(())
            };
        }
        let cands = self.t.hom(self.objs[self.s.dom(m)], self.objs[self.s.cod(m)]);
        for cand in cands {
            if self.done() {
                break;
            }
            if !(self.mor_ok)(m, cand) {
                continue;
            }
            budget.spend()?;
            self.mors[m] = cand;
            if consistent(self.s, self.t, m, &self.mors) {
                self.morphisms(m + 1, budget)?;
            }
        }
        self.mors[m] = usize::MAX;
        Ok(())
    }
}

/// Composition constraints among morphisms already assigned, involving `m`.
fn consistent(s: &FinCategory, t: &FinCategory, m: usize, mors: &[usize]) -> bool {
    let assigned = |x: usize| mors[x] != usize::MAX;
    let check = |g: usize, f: usize| -> bool {
        let Some(h) = s.compose(g, f) else { return true };
        if !(assigned(g) && assigned(f) && assigned(h)) {
            return true;
        }
        t.compose(mors[g], mors[f]) == Some(mors[h])
    };
    s.incoming(s.dom(m)).iter().all(|&f| check(m, f))
        && s.outgoing(s.cod(m)).iter().all(|&g| check(g, m))
        && (0..s.num_morphisms()).all(|g| {
            s.incoming(s.dom(g))
                .iter()
                .all(|&f| s.compose(g, f) != Some(m) || check(g, f))
        })
}
