use std::sync::Arc;

use nullkan::cli::{export_setup, parse_spec, resolve, serialize_spec};
use nullkan::construct::{random_preorder, Iota3Inverse, Setup};
use nullkan::fincat::{Carrier, FiniteSet, Functor, SetMap};
use nullkan::order::Family;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

// A preorder used as B = I = M, with a constant carrier of size `n` and a
// base nullity that is the same family at every object.
fn preorder_setup(seed: u64, n: usize, nulls: &[u32]) -> Setup {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = random_preorder(&mut rng, "P", 4);
    let id = Functor::identity(p.clone());
    let gamma = Carrier::new(
        vec![FiniteSet::range(n); p.num_objects()],
        vec![SetMap::identity(n); p.num_morphisms()],
    );
    let base = Family::from_members(n, nulls.iter().copied().chain([0])).down_closure();
    Setup {
        name: format!("preorder_{seed}"),
        b: p.clone(),
        i: p.clone(),
        m: Arc::clone(&p),
        j1: id.clone().named("j1"),
        j2: id.clone().named("j2"),
        pi: id.named("pi"),
        gamma,
        base: vec![base; p.num_objects()],
        iota3_inverse: Some(Iota3Inverse::SameTriples),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn export_parse_serialize_round_trip(seed in any::<u64>(), n in 1usize..=2, nulls in prop::collection::vec(0u32..4, 0..3)) {
        let nulls: Vec<u32> = nulls.into_iter().map(|x| x & ((1 << n) - 1)).collect();
        let s = preorder_setup(seed, n, &nulls);
        let doc = export_setup(&s).unwrap();
        let text = serialize_spec(&doc);
        let back = parse_spec(&text).unwrap();
        prop_assert_eq!(&back, &doc);
        prop_assert_eq!(serialize_spec(&back), text);
        let t = resolve(&back).unwrap();
        prop_assert_eq!(&*t.m, &*s.m);
        prop_assert_eq!(t.base, s.base);
    }

    // Dropping or duplicating any line gives a parse result or an error, never a panic.
    #[test]
    fn edited_specs_never_panic(seed in any::<u64>(), line in any::<prop::sample::Index>(), dup in any::<bool>()) {
        let text = serialize_spec(&export_setup(&preorder_setup(seed, 2, &[1])).unwrap());
        let mut lines: Vec<&str> = text.lines().collect();
        let k = line.index(lines.len());
        if dup {
            lines.insert(k, lines[k]);
        } else {
            lines.remove(k);
        }
        if let Ok(doc) = parse_spec(&lines.join("\n")) {
            let _ = resolve(&doc);
        }
    }

    #[test]
    fn arbitrary_text_never_panics(text in "(nullkan 1\n)?([a-z{}:, >0-9\n-]{0,80})") {
        let _ = parse_spec(&text);
    }
}
