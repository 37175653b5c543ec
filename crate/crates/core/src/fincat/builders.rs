use crate::error::{Error, Result};
use crate::fincat::{Bounds, CategoryBuilder, FinCategory, FiniteSet};

/// Default bound on the ground set of [`power_set_preorder`].
pub const POWER_SET_BOUND: usize = 5;

/// The preorder category of `leq` on `elements`: one morphism `x → y` iff
/// `x ≤ y`. Morphism ids are `x<=y`; the identity of `x` is `x<=x`.
pub fn build_preorder(
    name: &str,
    elements: &[String],
    leq: impl Fn(usize, usize) -> bool,
) -> Result<FinCategory> {
    build_preorder_bounded(name, elements, leq, Bounds::default())
}

pub fn build_preorder_bounded(
    name: &str,
    elements: &[String],
    leq: impl Fn(usize, usize) -> bool,
    bounds: Bounds,
) -> Result<FinCategory> {
    let n = elements.len();
    let rel: Vec<Vec<bool>> = (0..n).map(|x| (0..n).map(|y| leq(x, y)).collect()).collect();
    if let Some(x) = (0..n).find(|&x| !rel[x][x]) {
        return Err(Error::NotReflexive(elements[x].clone()));
    }
    for x in 0..n {
        for y in 0..n {
            if !rel[x][y] {
                continue;
            }
            if let Some(z) = (0..n).find(|&z| rel[y][z] && !rel[x][z]) {
                return Err(Error::NotTransitive(
                    elements[x].clone(),
                    elements[y].clone(),
                    elements[z].clone(),
                ));
            }
        }
    }
    let pairs = rel.iter().flatten().filter(|&&b| b).count();
    if pairs > bounds.max_morphisms {
        return Err(Error::SizeBound {
            what: format!("morphisms of `{name}`"),
            size: pairs,
            limit: bounds.max_morphisms,
        });
    }
    let mut b = CategoryBuilder::new(name).bounds(bounds);
    for e in elements {
        b.object(e);
    }
    let mut arrow = vec![vec![usize::MAX; n]; n];
    for x in 0..n {
        for y in 0..n {
            if rel[x][y] {
                arrow[x][y] = b.push_morphism(&format!("{}<={}", elements[x], elements[y]), x, y);
            }
        }
        b.set_identity(x, arrow[x][x]);
    }
    for x in 0..n {
        for y in 0..n {
            if !rel[x][y] {
                continue;
            }
            for z in 0..n {
                if rel[y][z] {
                    b.push_composite(arrow[y][z], arrow[x][y], arrow[x][z]);
                }
            }
        }
    }
    b.build()
}

/// Subsets of `s` ordered by inclusion. Subset `k` has bitmask `k`; its id is
/// `{a,b}` in element order.
pub fn power_set_preorder(s: &FiniteSet) -> Result<FinCategory> {
    power_set_preorder_bounded(s, POWER_SET_BOUND)
}

pub fn power_set_preorder_bounded(s: &FiniteSet, bound: usize) -> Result<FinCategory> {
    if s.len() > bound {
        return Err(Error::SizeBound {
            what: "power-set ground set".into(),
            size: s.len(),
            limit: bound,
        });
    }
    let ids: Vec<String> = s
        .subsets()
        .map(|m| format!("{{{}}}", s.subset_ids(m).join(",")))
        .collect();
    build_preorder_bounded("power-set", &ids, |a, b| a & !b == 0, Bounds::unbounded())
}

/// `n` objects, identities only.
pub fn discrete(name: &str, objects: &[String]) -> Result<FinCategory> {
    build_preorder(name, objects, |a, b| a == b)
}

/// The chain `0 ≤ 1 ≤ … ≤ n-1`.
pub fn chain(n: usize) -> FinCategory {
    let ids: Vec<String> = (0..n).map(|i| i.to_string()).collect();
    build_preorder(&format!("chain{n}"), &ids, |a, b| a <= b).expect("chains are preorders")
}

/// One object `*` with its identity.
pub fn terminal() -> FinCategory {
    discrete("1", &["*".to_string()]).expect("valid")
}

pub fn empty() -> FinCategory {
    CategoryBuilder::new("0").build().expect("valid")
}
