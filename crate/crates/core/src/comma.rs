//! Comma and arrow categories, forgetful functors, induced functors and the
//! probe-comma family used by the construction.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fincat::{same_category, search_functors, Bounds, Budget, CategoryBuilder, FinCategory, Functor};

/// A materialized comma category `Comma(α, β)` with its two projections.
#[derive(Clone, Debug)]
pub struct CommaCategory {
    pub category: Arc<FinCategory>,
    pub alpha: Functor,
    pub beta: Functor,
    /// `(a, φ, b)` per object, `φ: α a → β b`.
    pub objects: Vec<(usize, usize, usize)>,
    /// `(f, g)` per morphism.
    pub morphisms: Vec<(usize, usize)>,
    pub forget1: Functor,
    pub forget2: Functor,
    index: HashMap<(usize, usize, usize), usize>,
}

impl CommaCategory {
    pub fn object_of(&self, a: usize, phi: usize, b: usize) -> Option<usize> {
        self.index.get(&(a, phi, b)).copied()
    }

    /// The morphism `(f, g): x → y`, if the square commutes.
    pub fn morphism_of(&self, x: usize, y: usize, f: usize, g: usize) -> Option<usize> {
        self.category
            .outgoing(x)
            .iter()
            .copied()
            .find(|&m| self.category.cod(m) == y && self.morphisms[m] == (f, g))
    }

    /// Left, middle and right categories.
    pub fn left(&self) -> &Arc<FinCategory> {
        &self.alpha.source
    }

    pub fn middle(&self) -> &Arc<FinCategory> {
        &self.alpha.target
    }

    pub fn right(&self) -> &Arc<FinCategory> {
        &self.beta.source
    }
}

/// Objects `(a, φ, b)` with `φ ∈ Hom(α a, β b)`; morphisms `(f, g)` with
/// `φ' ∘ α f = β g ∘ φ`.
pub fn build_comma(name: &str, alpha: &Functor, beta: &Functor) -> Result<CommaCategory> {
    build_comma_bounded(name, alpha, beta, Bounds::default())
}

pub fn build_comma_bounded(name: &str, alpha: &Functor, beta: &Functor, bounds: Bounds) -> Result<CommaCategory> {
    if !same_category(&alpha.target, &beta.target) {
        return Err(Error::FunctorMismatch(format!(
            "comma of `{}` and `{}`: targets differ",
            alpha.name, beta.name
        )));
    }
    let (a, b, c) = (&*alpha.source, &*beta.source, &*alpha.target);
    let mut objects = Vec::new();
    for x in 0..a.num_objects() {
        for y in 0..b.num_objects() {
            for phi in c.hom(alpha.ob(x), beta.ob(y)) {
                objects.push((x, phi, y));
            }
        }
    }
    if objects.len() > bounds.max_objects {
        return Err(Error::SizeBound {
            what: format!("objects of `{name}`"),
            size: objects.len(),
            limit: bounds.max_objects,
        });
    }
    let oid = |&(x, phi, y): &(usize, usize, usize)| {
        format!("{}|{}|{}", a.object_id(x), c.morphism_id(phi), b.object_id(y))
    };
    let mut builder = CategoryBuilder::new(name).bounds(bounds);
    for o in &objects {
        builder.object(&oid(o));
    }
    let mut morphisms = Vec::new();
    let mut lookup: HashMap<(usize, usize, usize, usize), usize> = HashMap::new();
    for (i, &(x, phi, y)) in objects.iter().enumerate() {
        for (j, &(x2, phi2, y2)) in objects.iter().enumerate() {
            for f in a.hom(x, x2) {
                for g in b.hom(y, y2) {
                    if c.compose(phi2, alpha.mor(f)) == c.compose(beta.mor(g), phi) {
                        let id = format!(
                            "({},{}):{}->{}",
                            a.morphism_id(f),
                            b.morphism_id(g),
                            oid(&objects[i]),
                            oid(&objects[j])
                        );
                        let k = builder.push_morphism(&id, i, j);
                        morphisms.push((f, g));
                        lookup.insert((i, j, f, g), k);
                        if morphisms.len() > bounds.max_morphisms {
                            return Err(Error::SizeBound {
                                what: format!("morphisms of `{name}`"),
                                size: morphisms.len(),
                                limit: bounds.max_morphisms,
                            });
                        }
                    }
                }
            }
        }
    }
    for (i, &(x, _, y)) in objects.iter().enumerate() {
        builder.set_identity(i, lookup[&(i, i, a.identity(x), b.identity(y))]);
    }
    // composites, componentwise
    let mut by_dom: Vec<Vec<usize>> = vec![Vec::new(); objects.len()];
    let mut ends = Vec::with_capacity(morphisms.len());
    for (&(i, j, _, _), &k) in &lookup {
        ends.push((k, i, j));
    }
    ends.sort_unstable();
    for &(k, i, _) in &ends {
        by_dom[i].push(k);
    }
    for &(m1, _, j) in &ends {
        let (f1, g1) = morphisms[m1];
        let i = ends[m1].1;
        for &m2 in &by_dom[j] {
            let (f2, g2) = morphisms[m2];
            let k = ends[m2].2;
            let f = a.compose(f2, f1).expect("source category is total");
            let g = b.compose(g2, g1).expect("source category is total");
            let h = lookup[&(i, k, f, g)];
            builder.push_composite(m2, m1, h);
        }
    }
    let category = Arc::new(builder.build()?);
    let forget1 = Functor::new(
        format!("Forget1[{name}]"),
        category.clone(),
        alpha.source.clone(),
        objects.iter().map(|o| o.0).collect(),
        morphisms.iter().map(|m| m.0).collect(),
    )?;
    let forget2 = Functor::new(
        format!("Forget2[{name}]"),
        category.clone(),
        beta.source.clone(),
        objects.iter().map(|o| o.2).collect(),
        morphisms.iter().map(|m| m.1).collect(),
    )?;
    let index = objects.iter().enumerate().map(|(i, &o)| (o, i)).collect();
    Ok(CommaCategory {
        category,
        alpha: alpha.clone(),
        beta: beta.clone(),
        objects,
        morphisms,
        forget1,
        forget2,
        index,
    })
}

/// `Comma(Id_C, Id_C)`: objects are the morphisms of `C`.
pub fn arrow_category(c: &Arc<FinCategory>) -> Result<CommaCategory> {
    let id = Functor::identity(c.clone());
    build_comma(&format!("Arrow({})", c.name()), &id, &id)
}

fn expect_equal(lhs: &Functor, rhs: &Functor, what: &str) -> Result<()> {
    if !same_category(&lhs.source, &rhs.source) || !same_category(&lhs.target, &rhs.target) {
        return Err(Error::SquareFails(format!("{what}: sides are not parallel")));
    }
    match lhs.difference(rhs) {
        None => Ok(()),
        Some(w) => Err(Error::SquareFails(format!("{what}: sides differ at {w}"))),
    }
}

/// The functor `Comma(F, G) → Comma(F', G')`, `(a, φ, b) ↦ (I a, J φ, K b)`,
/// induced by `J∘F = F'∘I` and `J∘G = G'∘K`.
pub fn induced_comma_functor(
    name: &str,
    src: &CommaCategory,
    dst: &CommaCategory,
    i: &Functor,
    j: &Functor,
    k: &Functor,
) -> Result<Functor> {
    expect_equal(&j.after(&src.alpha)?, &dst.alpha.after(i)?, &format!("{name}: left square"))?;
    expect_equal(&j.after(&src.beta)?, &dst.beta.after(k)?, &format!("{name}: right square"))?;
    let mut obj_map = Vec::with_capacity(src.objects.len());
    for &(a, phi, b) in &src.objects {
        let o = dst
            .object_of(i.ob(a), j.mor(phi), k.ob(b))
            .ok_or_else(|| Error::SquareFails(format!("{name}: object image missing")))?;
        obj_map.push(o);
    }
    let mut mor_map = Vec::with_capacity(src.morphisms.len());
    for (m, &(f, g)) in src.morphisms.iter().enumerate() {
        let (x, y) = (src.category.dom(m), src.category.cod(m));
        let t = dst
            .morphism_of(obj_map[x], obj_map[y], i.mor(f), k.mor(g))
            .ok_or_else(|| Error::SquareFails(format!("{name}: morphism image missing")))?;
        mor_map.push(t);
    }
    let psi = Functor::new(name, src.category.clone(), dst.category.clone(), obj_map, mor_map)?;
    expect_equal(&dst.forget1.after(&psi)?, &i.after(&src.forget1)?, &format!("{name}: Forget1 marginal"))?;
    expect_equal(&dst.forget2.after(&psi)?, &k.after(&src.forget2)?, &format!("{name}: Forget2 marginal"))?;
    Ok(psi)
}

/// `F ∘ G = Id` exactly, on objects and morphisms.
pub fn check_right_inverse(f: &Functor, g: &Functor) -> bool {
    match f.after(g) {
        Ok(fg) => fg == Functor::identity(f.target.clone()),
        Err(_) => false,
    }
}

/// Some functor `G` with `F ∘ G = Id`, by exhaustive search.
pub fn find_right_inverse(f: &Functor, budget: &mut Budget) -> Result<Option<Functor>> {
    let found = search_functors(
        &f.target,
        &f.source,
        |y, x| f.ob(x) == y,
        |m, cand| f.mor(cand) == m,
        Some(1),
        budget,
    )?;
    Ok(found.into_iter().next().map(|g| g.named(format!("{}^R", f.name))))
}

/// The comma categories and induced functors built from `j₂: B → I`,
/// `j₁: I → M`, `π: M → I`.
#[derive(Clone, Debug)]
pub struct ProbeCommas {
    pub j1: Functor,
    pub j2: Functor,
    pub pi: Functor,
    pub j1j2: Functor,
    /// `Arrow(B)`.
    pub arrow_b: CommaCategory,
    /// `Comma(j₁j₂, Id_M)`.
    pub cjm: CommaCategory,
    /// `Comma(j₂, π)`.
    pub cjp: CommaCategory,
    /// `Comma(j₂, Id_I)`.
    pub cji: CommaCategory,
    /// `CJM → CJP`.
    pub pi_star: Functor,
    pub iota1: Functor,
    pub iota2: Functor,
    pub iota3: Functor,
    pub iota4: Functor,
    pub iota5: Functor,
    pub iota6: Functor,
    pub iota7: Functor,
}

impl ProbeCommas {
    pub fn build(j1: &Functor, j2: &Functor, pi: &Functor) -> Result<Self> {
        let b = j2.source.clone();
        let i = j2.target.clone();
        let m = j1.target.clone();
        let id_b = Functor::identity(b.clone());
        let id_i = Functor::identity(i.clone());
        let id_m = Functor::identity(m.clone());
        let j1j2 = j1.after(j2)?.named("j1j2");

        let arrow_b = arrow_category(&b)?;
        let cjm = build_comma("Comma(j1j2,M)", &j1j2, &id_m)?;
        let cjp = build_comma("Comma(j2,pi)", j2, pi)?;
        let cji = build_comma("Comma(j2,I)", j2, &id_i)?;

        let pi_star = induced_comma_functor("pi_*", &cjm, &cjp, &id_b, pi, &id_m)?;
        let iota1 = induced_comma_functor("iota1", &arrow_b, &cjp, &id_b, j2, &j1j2)?;
        let iota2 = induced_comma_functor("iota2", &arrow_b, &cjm, &id_b, &j1j2, &j1j2)?;
        let iota3 = induced_comma_functor("iota3", &arrow_b, &cji, &id_b, j2, j2)?;
        let iota4 = induced_comma_functor("iota4", &cjp, &cji, &id_b, &id_i, pi)?;
        let iota5 = induced_comma_functor("iota5", &cji, &cjp, &id_b, &id_i, j1)?;
        let iota6 = induced_comma_functor("iota6", &cji, &cjm, &id_b, j1, j1)?;
        let iota7 = induced_comma_functor("iota7", &cjm, &cji, &id_b, pi, pi)?;
        Ok(ProbeCommas {
            j1: j1.clone(),
            j2: j2.clone(),
            pi: pi.clone(),
            j1j2,
            arrow_b,
            cjm,
            cjp,
            cji,
            pi_star,
            iota1,
            iota2,
            iota3,
            iota4,
            iota5,
            iota6,
            iota7,
        })
    }

    /// The candidate `ι₃^{R*}: Comma(j₂, I) → Arrow(B)` that reads each triple
    /// `(b, ψ, i)` back through `j₂⁻¹`. Requires `j₂` to be bijective on
    /// objects and morphisms.
    pub fn iota3_same_triples(&self) -> Result<Functor> {
        let j2 = &self.j2;
        let inv_obj = invert(&j2.obj_map, j2.target.num_objects())
            .ok_or_else(|| Error::Assumption("A:4".into(), "j2 is not bijective on objects".into()))?;
        let inv_mor = invert(&j2.mor_map, j2.target.num_morphisms())
            .ok_or_else(|| Error::Assumption("A:4".into(), "j2 is not bijective on morphisms".into()))?;
        let mut obj_map = Vec::new();
        for &(b, psi, i) in &self.cji.objects {
            let o = self
                .arrow_b
                .object_of(b, inv_mor[psi], inv_obj[i])
                .ok_or_else(|| Error::Assumption("A:4".into(), "triple has no preimage".into()))?;
            obj_map.push(o);
        }
        let mut mor_map = Vec::new();
        for (m, &(f, g)) in self.cji.morphisms.iter().enumerate() {
            let (x, y) = (self.cji.category.dom(m), self.cji.category.cod(m));
            let t = self
                .arrow_b
                .morphism_of(obj_map[x], obj_map[y], f, inv_mor[g])
                .ok_or_else(|| Error::Assumption("A:4".into(), "square has no preimage".into()))?;
            mor_map.push(t);
        }
        Functor::new(
            "iota3^R",
            self.cji.category.clone(),
            self.arrow_b.category.clone(),
            obj_map,
            mor_map,
        )
    }
}

fn invert(map: &[usize], n: usize) -> Option<Vec<usize>> {
    if map.len() != n {
        return None;
    }
    let mut inv = vec![usize::MAX; n];
    for (x, &y) in map.iter().enumerate() {
        if inv[y] != usize::MAX {
            return None;
        }
        inv[y] = x;
    }
    Some(inv)
}
