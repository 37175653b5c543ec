use crate::check::{ValidationReport, Violation};
use crate::error::{Error, Result};
use crate::fincat::{same_category, Budget, Functor};

/// Components `η_a : F a → G a` indexed by source object.
#[derive(Clone, Debug, PartialEq)]
pub struct NatTrans {
    pub source: Functor,
    pub target: Functor,
    pub components: Vec<usize>,
}

impl NatTrans {
    pub fn identity(f: &Functor) -> Self {
        NatTrans {
            source: f.clone(),
            target: f.clone(),
            components: f.obj_map.iter().map(|&o| f.target.identity(o)).collect(),
        }
    }

    pub fn check(&self) -> ValidationReport {
        check_natural(self)
    }
}

/// Every component in the wrong hom-set and every failing naturality square.
pub fn check_natural(eta: &NatTrans) -> ValidationReport {
    let (f, g) = (&eta.source, &eta.target);
    let mut report = ValidationReport::new(format!("transformation {} ⇒ {}", f.name, g.name));
    if !same_category(&f.source, &g.source) || !same_category(&f.target, &g.target) {
        report.push(Violation::new(
            "natural-parallel",
            vec![f.name.clone(), g.name.clone()],
            "functors are not parallel",
        ));
        return report;
    }
    let (a, c) = (&*f.source, &*f.target);
    if eta.components.len() != a.num_objects() {
        report.push(Violation::new(
            "natural-shape",
            vec![],
            "one component per source object is required",
        ));
        return report;
    }
    for (o, &k) in eta.components.iter().enumerate() {
        if k >= c.num_morphisms() || c.dom(k) != f.ob(o) || c.cod(k) != g.ob(o) {
            report.push(Violation::new(
                "natural-component",
                vec![a.object_id(o).to_string()],
                "component is not in Hom(F a, G a)",
            ));
        }
    }
    if !report.is_valid() {
        return report;
    }
    for m in 0..a.num_morphisms() {
        let (x, y) = (a.dom(m), a.cod(m));
        let lhs = c.compose(g.mor(m), eta.components[x]);
        let rhs = c.compose(eta.components[y], f.mor(m));
        if lhs != rhs || lhs.is_none() {
            report.push(Violation::new(
                "naturality",
                vec![a.morphism_id(m).to_string()],
                "G f ∘ η_a != η_b ∘ F f",
            ));
        }
    }
    report
}

/// Searches component assignments for some `F ⇒ G`, objects in declared
/// order, components in declared order.
pub fn find_natural_transformation(
    f: &Functor,
    g: &Functor,
    budget: &mut Budget,
) -> Result<Option<NatTrans>> {
    if !same_category(&f.source, &g.source) || !same_category(&f.target, &g.target) {
        return Err(Error::FunctorMismatch(format!(
            "`{}` and `{}` are not parallel",
            f.name, g.name
        )));
    }
    let a = &*f.source;
    let c = &*f.target;
    let n = a.num_objects();
    let candidates: Vec<Vec<usize>> = (0..n).map(|o| c.hom(f.ob(o), g.ob(o))).collect();
    if candidates.iter().any(Vec::is_empty) {
        return Ok(None);
    }
    let mut comps = vec![usize::MAX; n];
    let square_ok = |comps: &[usize], o: usize| -> bool {
        let check = |m: usize| {
            let (x, y) = (a.dom(m), a.cod(m));
            if comps[x] == usize::MAX || comps[y] == usize::MAX {
                return true;
            }
            let lhs = c.compose(g.mor(m), comps[x]);
            lhs.is_some() && lhs == c.compose(comps[y], f.mor(m))
        };
        a.outgoing(o).iter().all(|&m| check(m)) && a.incoming(o).iter().all(|&m| check(m))
    };
    fn go(
        o: usize,
        comps: &mut Vec<usize>,
        candidates: &[Vec<usize>],
        square_ok: &dyn Fn(&[usize], usize) -> bool,
        budget: &mut Budget,
    ) -> Result<bool> {
        if o == comps.len() {
            return Ok(true);
        }
        for &k in &candidates[o] {
            budget.spend()?;
            comps[o] = k;
            if square_ok(comps, o) && go(o + 1, comps, candidates, square_ok, budget)? {
                return Ok(true);
            }
        }
        comps[o] = usize::MAX;
        Ok(false)
    }
    if go(0, &mut comps, &candidates, &square_ok, budget)? {
        Ok(Some(NatTrans {
            source: f.clone(),
            target: g.clone(),
            components: comps,
        }))
    } else {
        Ok(None)
    }
}
