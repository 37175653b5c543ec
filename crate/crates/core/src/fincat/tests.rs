use std::sync::Arc;

use proptest::prelude::*;

use super::*;
use crate::error::Error;
use crate::par::Exec;

fn ids(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

fn arc(c: FinCategory) -> Arc<FinCategory> {
    Arc::new(c)
}

/// a ⇉ b → c with the two composites kept distinct.
fn two_paths() -> FinCategory {
    let mut b = CategoryBuilder::new("two-paths");
    for o in ["a", "b", "c"] {
        b.object_with_identity(o);
    }
    b.morphism("f1", "a", "b");
    b.morphism("f2", "a", "b");
    b.morphism("h", "b", "c");
    b.morphism("d1", "a", "c");
    b.morphism("d2", "a", "c");
    b.compose("h", "f1", "d1");
    b.compose("h", "f2", "d2");
    b.build_with_identity_laws().unwrap()
}

#[test]
fn single_object_is_valid() {
    assert!(terminal().validate().is_valid());
}

#[test]
fn chain_is_valid() {
    let c = chain(2);
    assert_eq!((c.num_objects(), c.num_morphisms()), (2, 3));
    assert!(c.validate().is_valid());
}

#[test]
fn remapped_identity_law_is_caught() {
    let c = chain(2);
    let f = c.morphism("0<=1").unwrap();
    let id1 = c.identity(1);
    let broken = c.with_composite(id1, f, id1).unwrap();
    let report = broken.validate();
    assert!(!report.is_valid());
    let v = report
        .violations
        .iter()
        .find(|v| v.rule == "identity-left")
        .expect("identity-law violation");
    assert!(v.witness.contains(&"0<=1".to_string()));
}

#[test]
fn missing_composite_is_caught() {
    let c = two_paths();
    let h = c.morphism("h").unwrap();
    let f1 = c.morphism("f1").unwrap();
    assert!(c.validate().is_valid());
    assert!(c.without_composite(h, f1).validate().has_rule("composition-total"));
}

#[test]
fn broken_associativity_is_caught() {
    // left-zero monoid {1, a, b}: x∘y = x for non-identities
    let mut b = CategoryBuilder::new("monoid");
    b.object_with_identity("*");
    b.morphism("a", "*", "*");
    b.morphism("b", "*", "*");
    for x in ["a", "b"] {
        for y in ["a", "b"] {
            b.compose(x, y, x);
        }
    }
    let c = b.build_with_identity_laws().unwrap();
    assert!(c.validate().is_valid());
    let (a, bb) = (c.morphism("a").unwrap(), c.morphism("b").unwrap());
    let broken = c.with_composite(a, a, bb).unwrap();
    let r = broken.validate();
    assert!(r.has_rule("associativity"));
}

#[test]
fn preorder_counts() {
    let one = build_preorder("p", &ids(&["x"]), |_, _| true).unwrap();
    assert_eq!((one.num_objects(), one.num_morphisms()), (1, 1));
    let c3 = build_preorder("c", &ids(&["0", "1", "2"]), |a, b| a <= b).unwrap();
    assert_eq!((c3.num_objects(), c3.num_morphisms()), (3, 6));
    let anti = build_preorder("a", &ids(&["x", "y"]), |a, b| a == b).unwrap();
    assert_eq!((anti.num_objects(), anti.num_morphisms()), (2, 2));
    for c in [&one, &c3, &anti] {
        assert!(c.validate().is_valid());
        assert!(c.is_preorder());
    }
}

#[test]
fn preorder_rejects_bad_relations() {
    let e = build_preorder("p", &ids(&["x", "y"]), |a, b| a != b || a == 0).unwrap_err();
    assert_eq!(e, Error::NotReflexive("y".into()));
    // 0 ≤ 1 ≤ 2 but not 0 ≤ 2
    let e = build_preorder("p", &ids(&["0", "1", "2"]), |a, b| a == b || b == a + 1).unwrap_err();
    assert_eq!(e, Error::NotTransitive("0".into(), "1".into(), "2".into()));
}

#[test]
fn power_set_counts() {
    for (n, objs, mors) in [(0, 1, 1), (2, 4, 9), (3, 8, 27)] {
        let p = power_set_preorder(&FiniteSet::range(n)).unwrap();
        assert_eq!((p.num_objects(), p.num_morphisms()), (objs, mors));
        assert!(p.validate().is_valid());
    }
    assert!(power_set_preorder(&FiniteSet::range(6)).is_err());
}

#[test]
fn functor_examples() {
    let c = arc(two_paths());
    assert!(check_functor(&Functor::identity(c.clone())).is_valid());
    assert!(check_functor(&Functor::constant(c.clone(), c.clone(), 1)).is_valid());

    let mut swapped = Functor::identity(c.clone());
    let (f1, f2) = (c.morphism("f1").unwrap(), c.morphism("f2").unwrap());
    swapped.mor_map.swap(f1, f2);
    let r = check_functor(&swapped);
    let v = r
        .violations
        .iter()
        .find(|v| v.rule == "functor-composition")
        .unwrap();
    assert_eq!(v.witness, vec!["h".to_string(), "f1".to_string()]);
}

#[test]
fn natural_examples() {
    let c = arc(chain(2));
    let id = Functor::identity(c.clone());
    assert!(check_natural(&NatTrans::identity(&id)).is_valid());

    // constant-0 ⇒ Id in a preorder: pick the existing morphisms
    let k0 = Functor::constant(c.clone(), c.clone(), 0);
    let comps = (0..2).map(|o| c.hom(0, o)[0]).collect();
    let eta = NatTrans {
        source: k0.clone(),
        target: id.clone(),
        components: comps,
    };
    assert!(check_natural(&eta).is_valid());

    let wrong = NatTrans {
        source: id.clone(),
        target: k0,
        components: vec![c.identity(0), c.identity(1)],
    };
    assert!(check_natural(&wrong).has_rule("natural-component"));
}

#[test]
fn colimit_examples() {
    let mut b = Budget::default();
    let c = arc(chain(3));
    assert_eq!(terminal_object(&c, &mut b).unwrap(), Some(2));
    assert_eq!(initial_object(&c, &mut b).unwrap(), Some(0));

    let p = arc(power_set_preorder(&FiniteSet::range(2)).unwrap());
    let d = arc(discrete("2", &ids(&["x", "y"])).unwrap());
    let diag = Functor::new("d", d.clone(), p.clone(), vec![0b01, 0b10], vec![p.identity(0b01), p.identity(0b10)])
        .unwrap();
    assert_eq!(colimit(&diag, &mut b).unwrap().unwrap().tip, 0b11);
    assert_eq!(limit(&diag, &mut b).unwrap().unwrap().tip, 0b00);

    let anti = arc(discrete("anti", &ids(&["x", "y"])).unwrap());
    let none = arc(empty());
    let e = Functor::new("e", none, anti, vec![], vec![]).unwrap();
    assert_eq!(colimit(&e, &mut b).unwrap(), None);
    assert_eq!(limit(&e, &mut b).unwrap(), None);
}

#[test]
fn adjoint_examples() {
    let mut b = Budget::default();
    let c = arc(chain(2));
    let id = Functor::identity(c.clone());
    assert!(check_pre_right_adjoint(&id, &id, &mut b).unwrap());
    assert!(check_post_right_adjoint(&id, &id, &mut b).unwrap());
    let k0 = Functor::constant(c.clone(), c.clone(), 0);
    let k1 = Functor::constant(c.clone(), c.clone(), 1);
    assert!(check_pre_right_adjoint(&id, &k0, &mut b).unwrap());
    assert!(check_post_right_adjoint(&id, &k1, &mut b).unwrap());
    assert!(!check_pre_right_adjoint(&id, &k1, &mut b).unwrap());

    let anti = arc(discrete("anti", &ids(&["x", "y"])).unwrap());
    let aid = Functor::identity(anti.clone());
    let swap = Functor::new("swap", anti.clone(), anti.clone(), vec![1, 0], vec![1, 0]).unwrap();
    assert!(check_functor(&swap).is_valid());
    assert!(!check_pre_right_adjoint(&aid, &swap, &mut b).unwrap());
    assert!(!check_post_right_adjoint(&aid, &swap, &mut b).unwrap());
}

#[test]
fn budget_is_enforced() {
    let p = arc(power_set_preorder(&FiniteSet::range(3)).unwrap());
    let mut b = Budget::new("colimit", 3);
    let e = colimit(&Functor::identity(p), &mut b).unwrap_err();
    assert!(e.is_resource_limit());
}

#[test]
fn enumerated_functors_are_functors() {
    let src = arc(chain(2));
    let tgt = arc(two_paths());
    let fs = enumerate_functors(&src, &tgt, &mut Budget::default()).unwrap();
    // one functor per morphism of the target
    assert_eq!(fs.len(), tgt.num_morphisms());
    assert!(fs.iter().all(|f| check_functor(f).is_valid()));
}

#[test]
fn opposite_is_valid_and_involutive() {
    let c = two_paths();
    let op = c.opposite();
    assert!(op.validate().is_valid());
    let back = op.opposite();
    for g in 0..c.num_morphisms() {
        for &f in c.incoming(c.dom(g)) {
            assert_eq!(c.compose(g, f), back.compose(g, f));
        }
    }
}

fn arb_preorder() -> impl Strategy<Value = FinCategory> {
    (1usize..6, any::<u64>()).prop_map(|(n, bits)| {
        // random relation, closed reflexively and transitively
        let mut r = vec![vec![false; n]; n];
        for (x, row) in r.iter_mut().enumerate() {
            for (y, cell) in row.iter_mut().enumerate() {
                *cell = x == y || bits >> (x * n + y) & 1 == 1;
            }
        }
        for k in 0..n {
            for x in 0..n {
                for y in 0..n {
                    if r[x][k] && r[k][y] {
                        r[x][y] = true;
                    }
                }
            }
        }
        let ids: Vec<String> = (0..n).map(|i| format!("p{i}")).collect();
        build_preorder("rand", &ids, |a, b| r[a][b]).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn preorders_validate_and_have_thin_homs(c in arb_preorder()) {
        prop_assert!(c.validate().is_valid());
        prop_assert!(c.validate_with(Exec::Sequential).is_valid());
        prop_assert!(c.is_preorder());
        for a in 0..c.num_objects() {
            for b in 0..c.num_objects() {
                prop_assert!(c.hom(a, b).len() <= 1);
            }
        }
    }

    #[test]
    fn colimits_unique_up_to_iso(c in arb_preorder(), pick in any::<u64>()) {
        let c = arc(c);
        let n = c.num_objects();
        let d = arc(discrete("d", &ids(&["x", "y"])).unwrap());
        let (a, b) = ((pick % n as u64) as usize, (pick / 7 % n as u64) as usize);
        let diag = Functor::new("d", d, c.clone(), vec![a, b], vec![c.identity(a), c.identity(b)]).unwrap();
        let mut budget = Budget::default();
        let seq = colimit_with(&diag, &mut budget, Exec::Sequential).unwrap();
        let par = colimit_with(&diag, &mut budget, Exec::Parallel).unwrap();
        prop_assert_eq!(&seq, &par);
        if let Some(cc) = seq {
            // every other universal cocone has an isomorphic tip
            for t in 0..n {
                for legs in cocones_at(&diag, t, &mut budget).unwrap() {
                    let other = Cocone { tip: t, legs };
                    let universal = (0..n).all(|y| {
                        cocones_at(&diag, y, &mut Budget::default()).unwrap().into_iter().all(|l| {
                            factorizations(&c, &other, &Cocone { tip: y, legs: l }).len() == 1
                        })
                    });
                    if universal {
                        prop_assert!(c.find_isomorphism(cc.tip, t).is_some());
                    }
                }
            }
        }
    }
}
