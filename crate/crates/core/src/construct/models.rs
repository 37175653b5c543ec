use std::sync::Arc;

use crate::construct::{Iota3Inverse, Setup};
use crate::error::{Error, Result};
use crate::fincat::{Carrier, CategoryBuilder, FinCategory, FiniteSet, Functor, SetMap};
use crate::nullity::{base_family, BaseKind};
use crate::order::Family;

/// Names accepted by [`builtin_model`]; the first four form the standard suite.
pub const BUILTIN_MODELS: [&str; 4] = ["identity", "f2_trivial", "f2_proper", "injections_card_1"];

pub fn builtin_model(name: &str) -> Result<Setup> {
    match name {
        "identity" => identity_model(),
        "f2_trivial" => f2_model(BaseKind::Trivial),
        "f2_proper" => f2_model(BaseKind::Proper),
        _ => match name.strip_prefix("injections_card_").and_then(|k| k.parse().ok()) {
            Some(k) if k <= 3 => injections_model(k),
            _ => Err(Error::UnknownObject(format!("model {name}"))),
        },
    }
}

/// The 2-chain of injective linear maps `F0 → F1` over the two-element field.
pub fn f2_linear() -> FinCategory {
    let mut b = CategoryBuilder::new("Lin");
    b.object_with_identity("F0");
    b.object_with_identity("F1");
    b.morphism("z", "F0", "F1");
    b.build_with_identity_laws().expect("valid")
}

/// Injective affine maps: the two points `t0, t1: F0 → F1` and the
/// translation `s: x ↦ x+1` on `F1`.
pub fn f2_affine() -> FinCategory {
    let mut b = CategoryBuilder::new("Aff");
    b.object_with_identity("F0");
    b.object_with_identity("F1");
    b.morphism("t0", "F0", "F1");
    b.morphism("t1", "F0", "F1");
    b.morphism("s", "F1", "F1");
    b.compose("s", "t0", "t1");
    b.compose("s", "t1", "t0");
    b.compose("s", "s", "id_F1");
    b.build_with_identity_laws().expect("valid")
}

fn f2_model(kind: BaseKind) -> Result<Setup> {
    let b = Arc::new(f2_linear());
    let m = Arc::new(f2_affine());
    let j2 = Functor::identity(b.clone()).named("j2");
    let j1 = Functor::new(
        "j1",
        b.clone(),
        m.clone(),
        vec![0, 1],
        vec![m.identity(0), m.identity(1), m.morphism("t0")?],
    )?;
    let z = b.morphism("z")?;
    let pi = Functor::new(
        "pi",
        m.clone(),
        b.clone(),
        vec![0, 1],
        m.morphisms()
            .iter()
            .map(|r| match r.id.as_str() {
                "t0" | "t1" => z,
                "s" | "id_F1" => b.identity(1),
                _ => b.identity(0),
            })
            .collect(),
    )?;
    let gamma = Carrier::new(
        vec![FiniteSet::range(1), FiniteSet::range(2)],
        m.morphisms()
            .iter()
            .map(|r| match r.id.as_str() {
                "t0" => SetMap::new(1, 2, vec![0]).expect("valid"),
                "t1" => SetMap::new(1, 2, vec![1]).expect("valid"),
                "s" => SetMap::new(2, 2, vec![1, 0]).expect("valid"),
                "id_F0" => SetMap::identity(1),
                _ => SetMap::identity(2),
            })
            .collect(),
    );
    let name = match kind {
        BaseKind::Trivial => "f2_trivial",
        _ => "f2_proper",
    };
    Ok(Setup {
        name: name.into(),
        base: vec![base_family(kind, 1), base_family(kind, 2)],
        i: b.clone(),
        b,
        m,
        j1,
        j2,
        pi,
        gamma,
        iota3_inverse: Some(Iota3Inverse::SameTriples),
    })
}

/// A point and a two-element line with its flip; `B = I = M`.
pub fn identity_category() -> FinCategory {
    let mut b = CategoryBuilder::new("PtLine");
    b.object_with_identity("pt");
    b.object_with_identity("line");
    b.morphism("flip", "line", "line");
    b.compose("flip", "flip", "id_line");
    b.build_with_identity_laws().expect("valid")
}

fn identity_setup(name: &str, c: Arc<FinCategory>, gamma: Carrier, base: Vec<Family>) -> Setup {
    let id = Functor::identity(c.clone());
    Setup {
        name: name.into(),
        b: c.clone(),
        i: c.clone(),
        m: c,
        j1: id.clone().named("j1"),
        j2: id.clone().named("j2"),
        pi: id.named("pi"),
        gamma,
        base,
        iota3_inverse: Some(Iota3Inverse::SameTriples),
    }
}

fn identity_model() -> Result<Setup> {
    let c = Arc::new(identity_category());
    let gamma = Carrier::new(
        vec![FiniteSet::range(1), FiniteSet::range(2)],
        vec![
            SetMap::identity(1),
            SetMap::identity(2),
            SetMap::new(2, 2, vec![1, 0]).expect("valid"),
        ],
    );
    let base = vec![base_family(BaseKind::Proper, 1), base_family(BaseKind::Proper, 2)];
    Ok(identity_setup("identity", c, gamma, base))
}

/// Finite sets of sizes 1–3 and every injection between them.
pub fn injections_category() -> (FinCategory, Carrier) {
    let sizes = [1usize, 2, 3];
    let mut b = CategoryBuilder::new("Inj");
    for n in sizes {
        b.object(&format!("s{n}"));
    }
    let mut maps: Vec<SetMap> = Vec::new();
    let mut keyed: Vec<(usize, usize, SetMap, usize)> = Vec::new();
    for (x, &n) in sizes.iter().enumerate() {
        for (y, &k) in sizes.iter().enumerate() {
            for m in injections(n, k) {
                let id = if x == y && m.is_identity() {
                    format!("id_s{n}")
                } else {
                    let digits: String = m.map.iter().map(|d| d.to_string()).collect();
                    format!("s{n}>s{k}:{digits}")
                };
                let idx = b.push_morphism(&id, x, y);
                if x == y && m.is_identity() {
                    b.set_identity(x, idx);
                }
                keyed.push((x, y, m.clone(), idx));
                maps.push(m);
            }
        }
    }
    for &(x, y, ref f, fi) in &keyed {
        for &(y2, z, ref g, gi) in &keyed {
            if y2 != y {
                continue;
            }
            let gf = g.after(f);
            let h = keyed
                .iter()
                .find(|(a, c, m, _)| *a == x && *c == z && *m == gf)
                .expect("injections compose")
                .3;
            b.push_composite(gi, fi, h);
        }
    }
    let cat = b.build().expect("valid");
    let carrier = Carrier::new(sizes.iter().map(|&n| FiniteSet::range(n)).collect(), maps);
    (cat, carrier)
}

fn injections(n: usize, k: usize) -> Vec<SetMap> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn go(n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<SetMap>) {
        if cur.len() == n {
            out.push(SetMap { dom: n, cod: k, map: cur.clone() });
            return;
        }
        for x in 0..k {
            if !cur.contains(&x) {
                cur.push(x);
                go(n, k, cur, out);
                cur.pop();
            }
        }
    }
    go(n, k, &mut cur, &mut out);
    out
}

fn injections_model(k: usize) -> Result<Setup> {
    let (cat, gamma) = injections_category();
    let base = gamma
        .sets
        .iter()
        .map(|s| base_family(BaseKind::Cardinality(k), s.len()))
        .collect();
    Ok(identity_setup(&format!("injections_card_{k}"), Arc::new(cat), gamma, base))
}
