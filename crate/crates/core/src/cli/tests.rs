use super::*;
use crate::construct::{builtin_model, BUILTIN_MODELS};

const SPECS: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/specs");

fn small() -> &'static str {
    "nullkan 1
# two objects, one arrow
category C
  object a
  object b
  morphism f a b
end
functor j C -> C
  object a a
  object b b
  morphism f f
end
carrier g on C
  set a x
  set b x y
  map f x
end
nullity n on C
  null a {}
  null b {} {y}
end
setup
  name: small
  B: C
  I: C
  M: C
  j1: j
  j2: j
  pi: j
  gamma: g
  base: n
  iota3_inverse: same_triples
end
"
}

#[test]
fn empty_document_needs_a_setup() {
    assert_eq!(parse_spec("").unwrap_err().message, "missing setup block");
    assert_eq!(parse_spec("# nothing\n\n").unwrap_err().message, "missing setup block");
    assert_eq!(parse_spec("nullkan 1\n").unwrap_err().message, "missing setup block");
}

#[test]
fn model_line_resolves_to_builtin() {
    let doc = parse_spec("nullkan 1\nmodel: f2_proper\n").unwrap();
    let s = resolve(&doc).unwrap();
    let b = builtin_model("f2_proper").unwrap();
    assert_eq!(s.base, b.base);
    assert_eq!(s.gamma, b.gamma);
    assert_eq!(*s.m, *b.m);
}

#[test]
fn dangling_composite_names_the_id() {
    let text = "nullkan 1\ncategory C\n  object a\n  compose id_a ghost id_a\nend\n";
    let e = parse_spec(text).unwrap_err();
    assert_eq!(e.line, 4);
    assert!(e.message.contains("`ghost`"), "{e}");
}

#[test]
fn duplicates_are_located() {
    let e = parse_spec("nullkan 1\ncategory C\n  object a\n  object a\nend\n").unwrap_err();
    assert_eq!((e.line, e.message.as_str()), (4, "duplicate id `a`"));
    let e = parse_spec("nullkan 1\ncategory C\nend\ncategory C\nend\n").unwrap_err();
    assert_eq!(e.line, 4);
}

#[test]
fn malformed_lines_do_not_panic() {
    for text in [
        "nullkan",
        "nullkan x",
        "nullkan 2",
        "nullkan 1\nend",
        "nullkan 1\ncategory",
        "nullkan 1\ncategory C\n  object",
        "nullkan 1\nsetup\n  name small\nend",
        "nullkan 1\nsetup\n  B: nope\nend",
        "nullkan 1\nnullity n on C\nend",
        "nullkan 1\ncategory C\n  object a\nend\nnullity n on C\n  null a {\nend",
        "nullkan 1\nmodel: a\nmodel: b",
    ] {
        assert!(parse_spec(text).is_err(), "{text:?}");
    }
}

#[test]
fn small_spec_runs() {
    let doc = parse_spec(small()).unwrap();
    let s = resolve(&doc).unwrap();
    assert_eq!(s.b.num_morphisms(), 3);
    let r = run(Command::Construct, &Input::Spec(small().as_bytes().to_vec()), &RunOptions::default());
    assert_eq!(r.status, Status::Pass, "{:?}", r.diagnostics);
}

#[test]
fn serialize_is_canonical() {
    let doc = parse_spec(small()).unwrap();
    let text = serialize_spec(&doc);
    assert_eq!(parse_spec(&text).unwrap(), doc);
    assert_eq!(serialize_spec(&parse_spec(&text).unwrap()), text);
}

#[test]
fn export_round_trips_every_builtin() {
    for name in BUILTIN_MODELS {
        let s = builtin_model(name).unwrap();
        let doc = export_setup(&s).unwrap();
        let text = serialize_spec(&doc);
        let back = parse_spec(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(back, doc, "{name}");
        let t = resolve(&back).unwrap();
        assert_eq!(*t.m, *s.m, "{name}");
        assert_eq!(t.gamma, s.gamma, "{name}");
        assert_eq!(t.base, s.base, "{name}");
        assert_eq!(t.pi, s.pi, "{name}");
    }
}

#[test]
fn shipped_specs_match_exports() {
    for name in BUILTIN_MODELS {
        let path = format!("{SPECS}/{name}.nk");
        let shipped = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"));
        let doc = export_setup(&builtin_model(name).unwrap()).unwrap();
        assert_eq!(shipped, serialize_spec(&doc), "{path}");
    }
}

// Rewrites the example specs from the builtins: `cargo test -- --ignored write_example_specs`.
#[test]
#[ignore]
fn write_example_specs() {
    for name in BUILTIN_MODELS {
        let doc = export_setup(&builtin_model(name).unwrap()).unwrap();
        std::fs::write(format!("{SPECS}/{name}.nk"), serialize_spec(&doc)).unwrap();
    }
}

#[test]
fn construct_reports_f2_proper_main() {
    let r = run(Command::Construct, &Input::Model("f2_proper".into()), &RunOptions::default());
    assert_eq!(r.exit_code(), 0);
    let nulls = &r.results["main"]["F1"]["nulls"];
    assert_eq!(*nulls, serde_json::json!([[], ["0"], ["1"]]));
}

#[test]
fn exit_codes() {
    let o = RunOptions::default();
    let m = |n: &str| Input::Model(n.into());
    assert_eq!(run(Command::Check(CheckKind::Thm1), &m("f2_trivial"), &o).exit_code(), 0);
    assert_eq!(run(Command::Check(CheckKind::Thm3), &m("f2_proper"), &o).exit_code(), 1);
    let ext = run(Command::Check(CheckKind::Ext), &m("f2_trivial"), &o);
    assert_eq!((ext.status, ext.exit_code()), (Status::Skipped, 0));
    assert_eq!(run(Command::Validate, &m("nope"), &o).exit_code(), 2);
    assert_eq!(run(Command::Validate, &Input::None, &o).exit_code(), 2);
    assert_eq!(run(Command::Validate, &Input::Spec(b"nullkan 1\n".to_vec()), &o).exit_code(), 2);
    let tight = RunOptions { budget: Some(4), ..o };
    assert_eq!(run(Command::Check(CheckKind::Thm3), &m("injections_card_1"), &tight).exit_code(), 3);
}

#[test]
fn reports_are_byte_identical() {
    let o = RunOptions::default();
    for name in BUILTIN_MODELS {
        let input = Input::Model(name.into());
        for c in [Command::Validate, Command::Construct, Command::OracleCompare, Command::Materialize] {
            assert_eq!(run(c, &input, &o).to_json(), run(c, &input, &o).to_json(), "{name} {c:?}");
        }
    }
}

#[test]
fn json_is_sorted_with_lf() {
    let r = run(Command::Construct, &Input::Model("identity".into()), &RunOptions::default());
    let j = r.to_json();
    assert!(j.ends_with("}\n") && !j.contains('\r'));
    let v = r.to_value();
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
    assert!(r.to_text().contains("status = \"pass\""));
}

#[test]
fn model_and_spec_digests_differ_by_bytes() {
    let o = RunOptions::default();
    let a = run(Command::Validate, &Input::Model("identity".into()), &o);
    let b = run(Command::Validate, &Input::Spec(b"nullkan 1\nmodel: identity\n".to_vec()), &o);
    assert_eq!(a.digest, b.digest);
    let c = run(Command::Validate, &Input::Spec(b"nullkan 1\n# note\nmodel: identity\n".to_vec()), &o);
    assert_ne!(a.digest, c.digest);
}
