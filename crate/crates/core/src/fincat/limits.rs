use std::sync::Arc;

use crate::error::Result;
use crate::fincat::{Budget, FinCategory, Functor};
use crate::par::{self, Exec};

/// A tip object with one leg per diagram object.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cocone {
    pub tip: usize,
    pub legs: Vec<usize>,
}

/// Legs point from the tip into the diagram.
pub type Cone = Cocone;

/// Every cocone over `diagram` with the given tip, legs in declared order.
pub fn cocones_at(diagram: &Functor, tip: usize, budget: &mut Budget) -> Result<Vec<Vec<usize>>> {
    let j = &*diagram.source;
    let c = &*diagram.target;
    let n = j.num_objects();
    let candidates: Vec<Vec<usize>> = (0..n).map(|o| c.hom(diagram.ob(o), tip)).collect();
    let mut out = Vec::new();
    if candidates.iter().any(Vec::is_empty) {
        return Ok(out);
    }
    let mut legs = vec![usize::MAX; n];
    // A leg is compatible when leg_b ∘ F f = leg_a for every f: a → b already decided.
    let ok = |legs: &[usize], o: usize| {
        let check = |m: usize| {
            let (a, b) = (j.dom(m), j.cod(m));
            legs[a] == usize::MAX
                || legs[b] == usize::MAX
                || c.compose(legs[b], diagram.mor(m)) == Some(legs[a])
        };
        j.outgoing(o).iter().all(|&m| check(m)) && j.incoming(o).iter().all(|&m| check(m))
    };
    fn go(
        o: usize,
        legs: &mut Vec<usize>,
        candidates: &[Vec<usize>],
        ok: &dyn Fn(&[usize], usize) -> bool,
        budget: &mut Budget,
        out: &mut Vec<Vec<usize>>,
    ) -> Result<()> {
        if o == legs.len() {
            out.push(legs.clone());
            return Ok(());
        }
        for &k in &candidates[o] {
            budget.spend()?;
            legs[o] = k;
            if ok(legs, o) {
                go(o + 1, legs, candidates, ok, budget, out)?;
            }
        }
        legs[o] = usize::MAX;
        Ok(())
    }
    go(0, &mut legs, &candidates, &ok, budget, &mut out)?;
    Ok(out)
}

/// Morphisms `u: from.tip → to.tip` with `u ∘ from.leg = to.leg` for every leg.
pub fn factorizations(c: &FinCategory, from: &Cocone, to: &Cocone) -> Vec<usize> {
    c.hom(from.tip, to.tip)
        .into_iter()
        .filter(|&u| {
            from.legs
                .iter()
                .zip(&to.legs)
                .all(|(&l, &r)| c.compose(u, l) == Some(r))
        })
        .collect()
}

/// First universal cocone: tips in declared order, legs in declared order.
/// Universality is checked against every cocone over the diagram.
pub fn colimit(diagram: &Functor, budget: &mut Budget) -> Result<Option<Cocone>> {
    colimit_with(diagram, budget, Exec::default())
}

pub fn colimit_with(diagram: &Functor, budget: &mut Budget, exec: Exec) -> Result<Option<Cocone>> {
    let c = &*diagram.target;
    let mut all: Vec<Cocone> = Vec::new();
    for tip in 0..c.num_objects() {
        for legs in cocones_at(diagram, tip, budget)? {
            all.push(Cocone { tip, legs });
        }
    }
    budget.spend_n((all.len() as u64).saturating_mul(all.len() as u64))?;
    let found = par::find_first_range(exec, all.len(), |i| {
        let cand = &all[i];
        all.iter()
            .all(|other| factorizations(c, cand, other).len() == 1)
            .then_some(())
    });
    Ok(found.map(|(i, _)| all[i].clone()))
}

/// Dual of [`colimit`], computed as a colimit in the opposite category.
pub fn limit(diagram: &Functor, budget: &mut Budget) -> Result<Option<Cone>> {
    limit_with(diagram, budget, Exec::default())
}

pub fn limit_with(diagram: &Functor, budget: &mut Budget, exec: Exec) -> Result<Option<Cone>> {
    colimit_with(&opposite_functor(diagram), budget, exec)
}

/// `F^op : J^op → C^op`. Indices are unchanged.
pub fn opposite_functor(f: &Functor) -> Functor {
    Functor {
        name: format!("{}^op", f.name),
        source: Arc::new(f.source.opposite()),
        target: Arc::new(f.target.opposite()),
        obj_map: f.obj_map.clone(),
        mor_map: f.mor_map.clone(),
    }
}

/// Identity functor's colimit is a terminal object when one exists.
pub fn terminal_object(cat: &Arc<FinCategory>, budget: &mut Budget) -> Result<Option<usize>> {
    Ok(colimit(&Functor::identity(cat.clone()), budget)?.map(|c| c.tip))
}

pub fn initial_object(cat: &Arc<FinCategory>, budget: &mut Budget) -> Result<Option<usize>> {
    Ok(limit(&Functor::identity(cat.clone()), budget)?.map(|c| c.tip))
}
