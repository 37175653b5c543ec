//! Line-oriented spec files.
//!
//! ```text
//! nullkan 1
//! model: f2_proper
//! ```
//!
//! or a full setup built from `category`, `functor`, `carrier`, `nullity`
//! and `setup` blocks, each closed by `end`. `#` starts a comment line.
use std::collections::{HashMap, HashSet};
use std::fmt::{self, Write as _};
use std::sync::Arc;

use crate::construct::{builtin_model, Iota3Inverse, Setup};
use crate::error::Error;
use crate::fincat::{Carrier, CategoryBuilder, FinCategory, FiniteSet, Functor};
use crate::order::NullityStructure;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    /// 1-based; 0 when the problem is not tied to a line.
    pub line: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line == 0 {
            write!(f, "{}", self.message)
        } else {
            write!(f, "line {}: {}", self.line, self.message)
        }
    }
}

impl std::error::Error for ParseError {}

fn err<T>(line: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        line,
        message: message.into(),
    })
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CategoryBlock {
    pub name: String,
    pub objects: Vec<String>,
    /// `(id, dom, cod)`.
    pub morphisms: Vec<(String, String, String)>,
    /// `(object, morphism)`. Objects without one get a fresh `id_<object>`.
    pub identities: Vec<(String, String)>,
    /// `(g, f, g∘f)`.
    pub compositions: Vec<(String, String, String)>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FunctorBlock {
    pub name: String,
    pub source: String,
    pub target: String,
    pub objects: Vec<(String, String)>,
    pub morphisms: Vec<(String, String)>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CarrierBlock {
    pub name: String,
    pub category: String,
    pub sets: Vec<(String, Vec<String>)>,
    /// Images of the domain elements, in order.
    pub maps: Vec<(String, Vec<String>)>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct NullityBlock {
    pub name: String,
    pub category: String,
    pub nulls: Vec<(String, Vec<Vec<String>>)>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SetupBlock {
    pub name: String,
    pub b: String,
    pub i: String,
    pub m: String,
    pub j1: String,
    pub j2: String,
    pub pi: String,
    pub gamma: String,
    pub base: String,
    /// `same_triples` or `none`.
    pub iota3_inverse: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Block {
    Category(CategoryBlock),
    Functor(FunctorBlock),
    Carrier(CarrierBlock),
    Nullity(NullityBlock),
    Setup(SetupBlock),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecDocument {
    pub version: u32,
    pub model: Option<String>,
    pub blocks: Vec<Block>,
}

impl SpecDocument {
    pub fn builtin(name: &str) -> Self {
        SpecDocument {
            version: FORMAT_VERSION,
            model: Some(name.into()),
            blocks: Vec::new(),
        }
    }
}

#[derive(Default)]
struct Names {
    categories: HashMap<String, (HashSet<String>, HashSet<String>)>,
    functors: HashSet<String>,
    carriers: HashSet<String>,
    nullities: HashSet<String>,
}

impl Names {
    fn category(&self, line: usize, name: &str) -> Result<&(HashSet<String>, HashSet<String>), ParseError> {
        match self.categories.get(name) {
            Some(c) => Ok(c),
            None => err(line, format!("unknown category `{name}`")),
        }
    }

    fn taken(&self, name: &str) -> bool {
        self.categories.contains_key(name)
            || self.functors.contains(name)
            || self.carriers.contains(name)
            || self.nullities.contains(name)
    }
}

fn need_object(line: usize, cat: &(HashSet<String>, HashSet<String>), id: &str) -> Result<(), ParseError> {
    if cat.0.contains(id) {
        Ok(())
    } else {
        err(line, format!("unknown object `{id}`"))
    }
}

fn need_morphism(line: usize, cat: &(HashSet<String>, HashSet<String>), id: &str) -> Result<(), ParseError> {
    if cat.1.contains(id) {
        Ok(())
    } else {
        err(line, format!("unknown morphism `{id}`"))
    }
}

fn valid_id(s: &str) -> bool {
    !s.is_empty() && !s.contains(|c: char| c.is_whitespace() || matches!(c, '{' | '}' | ',' | '#'))
}

fn ids<'a>(line: usize, words: &[&'a str]) -> Result<Vec<&'a str>, ParseError> {
    for w in words {
        if !valid_id(w) {
            return err(line, format!("invalid id `{w}`"));
        }
    }
    Ok(words.to_vec())
}

/// `{}`, `{a}`, `{a,b}` separated by whitespace.
fn parse_subsets(line: usize, rest: &[&str]) -> Result<Vec<Vec<String>>, ParseError> {
    let mut out = Vec::new();
    for w in rest {
        let inner = w
            .strip_prefix('{')
            .and_then(|x| x.strip_suffix('}'))
            .ok_or_else(|| ParseError {
                line,
                message: format!("expected a subset like {{a,b}}, found `{w}`"),
            })?;
        let elems: Vec<String> = if inner.is_empty() {
            Vec::new()
        } else {
            inner.split(',').map(str::to_string).collect()
        };
        for e in &elems {
            if !valid_id(e) {
                return err(line, format!("invalid element `{e}`"));
            }
        }
        out.push(elems);
    }
    Ok(out)
}

enum Open {
    None,
    Category(CategoryBlock, usize),
    Functor(FunctorBlock, usize),
    Carrier(CarrierBlock, usize),
    Nullity(NullityBlock, usize),
    Setup(SetupBlock, usize, HashSet<String>),
}

pub fn parse_spec(text: &str) -> Result<SpecDocument, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let Some((n, header)) = lines.next() else {
        return err(0, "missing setup block");
    };
    let version = match header.split_whitespace().collect::<Vec<_>>()[..] {
        ["nullkan", v] => v.parse::<u32>().map_err(|_| ParseError {
            line: n,
            message: format!("invalid version `{v}`"),
        })?,
        _ => return err(n, "expected header `nullkan 1`"),
    };
    if version != FORMAT_VERSION {
        return err(n, format!("unsupported version {version}"));
    }
    let mut doc = SpecDocument {
        version,
        model: None,
        blocks: Vec::new(),
    };
    let mut names = Names::default();
    let mut open = Open::None;
    let mut has_setup = false;

    for (n, line) in lines {
        let words: Vec<&str> = line.split_whitespace().collect();
        if words == ["end"] {
            let block = match std::mem::replace(&mut open, Open::None) {
                Open::None => return err(n, "`end` outside a block"),
                Open::Category(c, _) => {
                    let objs = c.objects.iter().cloned().collect();
                    let mut mors: HashSet<String> = c.morphisms.iter().map(|m| m.0.clone()).collect();
                    for o in &c.objects {
                        if !c.identities.iter().any(|(x, _)| x == o) && !mors.insert(format!("id_{o}")) {
                            return err(n, format!("`id_{o}` is declared but not marked as the identity of `{o}`"));
                        }
                    }
                    names.categories.insert(c.name.clone(), (objs, mors));
                    Block::Category(c)
                }
                Open::Functor(f, _) => {
                    names.functors.insert(f.name.clone());
                    Block::Functor(f)
                }
                Open::Carrier(c, _) => {
                    names.carriers.insert(c.name.clone());
                    Block::Carrier(c)
                }
                Open::Nullity(x, _) => {
                    names.nullities.insert(x.name.clone());
                    Block::Nullity(x)
                }
                Open::Setup(s, start, seen) => {
                    for key in ["name", "B", "I", "M", "j1", "j2", "pi", "gamma", "base", "iota3_inverse"] {
                        if !seen.contains(key) {
                            return err(start, format!("setup block is missing `{key}`"));
                        }
                    }
                    has_setup = true;
                    Block::Setup(s)
                }
            };
            doc.blocks.push(block);
            continue;
        }
        match &mut open {
            Open::None => {
                if let Some(rest) = line.strip_prefix("model:") {
                    let name = rest.trim();
                    if doc.model.is_some() || has_setup {
                        return err(n, "only one setup or model line is allowed");
                    }
                    if !valid_id(name) {
                        return err(n, format!("invalid model name `{name}`"));
                    }
                    doc.model = Some(name.into());
                    continue;
                }
                let fresh = |name: &str| -> Result<String, ParseError> {
                    if !valid_id(name) {
                        return err(n, format!("invalid id `{name}`"));
                    }
                    if names.taken(name) {
                        return err(n, format!("duplicate id `{name}`"));
                    }
                    Ok(name.to_string())
                };
                open = match words[..] {
                    ["category", name] => Open::Category(
                        CategoryBlock {
                            name: fresh(name)?,
                            ..Default::default()
                        },
                        n,
                    ),
                    ["functor", name, source, "->", target] => {
                        names.category(n, source)?;
                        names.category(n, target)?;
                        Open::Functor(
                            FunctorBlock {
                                name: fresh(name)?,
                                source: source.into(),
                                target: target.into(),
                                ..Default::default()
                            },
                            n,
                        )
                    }
                    ["carrier", name, "on", cat] => {
                        names.category(n, cat)?;
                        Open::Carrier(
                            CarrierBlock {
                                name: fresh(name)?,
                                category: cat.into(),
                                ..Default::default()
                            },
                            n,
                        )
                    }
                    ["nullity", name, "on", cat] => {
                        names.category(n, cat)?;
                        Open::Nullity(
                            NullityBlock {
                                name: fresh(name)?,
                                category: cat.into(),
                                ..Default::default()
                            },
                            n,
                        )
                    }
                    ["setup"] => {
                        if doc.model.is_some() || has_setup {
                            return err(n, "only one setup or model line is allowed");
                        }
                        Open::Setup(SetupBlock::default(), n, HashSet::new())
                    }
                    _ => return err(n, format!("unexpected `{line}`")),
                };
            }
            Open::Category(c, _) => match words[..] {
                ["object", o] => {
                    ids(n, &[o])?;
                    if c.objects.iter().any(|x| x == o) {
                        return err(n, format!("duplicate id `{o}`"));
                    }
                    c.objects.push(o.into());
                }
                ["morphism", m, d, k] => {
                    ids(n, &[m, d, k])?;
                    if c.morphisms.iter().any(|x| x.0 == m) {
                        return err(n, format!("duplicate id `{m}`"));
                    }
                    for o in [d, k] {
                        if !c.objects.iter().any(|x| x == o) {
                            return err(n, format!("unknown object `{o}`"));
                        }
                    }
                    c.morphisms.push((m.into(), d.into(), k.into()));
                }
                ["identity", o, m] => {
                    if !c.objects.iter().any(|x| x == o) {
                        return err(n, format!("unknown object `{o}`"));
                    }
                    match c.morphisms.iter().find(|x| x.0 == m) {
                        Some(rec) if rec.1 == o && rec.2 == o => {}
                        Some(_) => return err(n, format!("identity `{m}` is not an endomorphism of `{o}`")),
                        None => return err(n, format!("unknown morphism `{m}`")),
                    }
                    if c.identities.iter().any(|x| x.0 == o) {
                        return err(n, format!("second identity for `{o}`"));
                    }
                    c.identities.push((o.into(), m.into()));
                }
                ["compose", g, f, h] => {
                    for m in [g, f, h] {
                        let declared = c.morphisms.iter().any(|x| x.0 == m)
                            || m.strip_prefix("id_").is_some_and(|o| c.objects.iter().any(|x| x == o));
                        if !declared {
                            return err(n, format!("unknown morphism `{m}`"));
                        }
                    }
                    c.compositions.push((g.into(), f.into(), h.into()));
                }
                _ => return err(n, format!("unexpected `{line}` in category block")),
            },
            Open::Functor(f, _) => {
                let (src, tgt) = (names.category(n, &f.source)?, names.category(n, &f.target)?);
                match words[..] {
                    ["object", x, y] => {
                        need_object(n, src, x)?;
                        need_object(n, tgt, y)?;
                        f.objects.push((x.into(), y.into()));
                    }
                    ["morphism", x, y] => {
                        need_morphism(n, src, x)?;
                        need_morphism(n, tgt, y)?;
                        f.morphisms.push((x.into(), y.into()));
                    }
                    _ => return err(n, format!("unexpected `{line}` in functor block")),
                }
            }
            Open::Carrier(c, _) => {
                let cat = names.category(n, &c.category)?;
                match words[..] {
                    ["set", o, ref elems @ ..] => {
                        need_object(n, cat, o)?;
                        c.sets.push((o.into(), ids(n, elems)?.iter().map(|s| s.to_string()).collect()));
                    }
                    ["map", m, ref images @ ..] => {
                        need_morphism(n, cat, m)?;
                        c.maps.push((m.into(), ids(n, images)?.iter().map(|s| s.to_string()).collect()));
                    }
                    _ => return err(n, format!("unexpected `{line}` in carrier block")),
                }
            }
            Open::Nullity(x, _) => {
                let cat = names.category(n, &x.category)?;
                match words[..] {
                    ["null", o, ref sets @ ..] => {
                        need_object(n, cat, o)?;
                        x.nulls.push((o.into(), parse_subsets(n, sets)?));
                    }
                    _ => return err(n, format!("unexpected `{line}` in nullity block")),
                }
            }
            Open::Setup(s, _, seen) => {
                let Some((key, value)) = line.split_once(':') else {
                    return err(n, format!("expected `key: value`, found `{line}`"));
                };
                let (key, value) = (key.trim(), value.trim().to_string());
                let slot = match key {
                    "name" => &mut s.name,
                    "B" | "I" | "M" => {
                        names.category(n, &value)?;
                        match key {
                            "B" => &mut s.b,
                            "I" => &mut s.i,
                            _ => &mut s.m,
                        }
                    }
                    "j1" | "j2" | "pi" => {
                        if !names.functors.contains(&value) {
                            return err(n, format!("unknown functor `{value}`"));
                        }
                        match key {
                            "j1" => &mut s.j1,
                            "j2" => &mut s.j2,
                            _ => &mut s.pi,
                        }
                    }
                    "gamma" => {
                        if !names.carriers.contains(&value) {
                            return err(n, format!("unknown carrier `{value}`"));
                        }
                        &mut s.gamma
                    }
                    "base" => {
                        if !names.nullities.contains(&value) {
                            return err(n, format!("unknown nullity `{value}`"));
                        }
                        &mut s.base
                    }
                    "iota3_inverse" => {
                        if value != "same_triples" && value != "none" {
                            return err(n, "iota3_inverse must be `same_triples` or `none`");
                        }
                        &mut s.iota3_inverse
                    }
                    _ => return err(n, format!("unknown setup key `{key}`")),
                };
                if !seen.insert(key.to_string()) {
                    return err(n, format!("duplicate setup key `{key}`"));
                }
                if !valid_id(&value) {
                    return err(n, format!("invalid id `{value}`"));
                }
                *slot = value;
            }
        }
    }
    match open {
        Open::None => {}
        Open::Category(_, l) | Open::Functor(_, l) | Open::Carrier(_, l) | Open::Nullity(_, l) | Open::Setup(_, l, _) => {
            return err(l, "block is not closed with `end`")
        }
    }
    if doc.model.is_none() && !has_setup {
        return err(0, "missing setup block");
    }
    Ok(doc)
}

fn subset_text(s: &[String]) -> String {
    format!("{{{}}}", s.join(","))
}

fn line(out: &mut String, words: &[&str]) {
    let _ = writeln!(out, "  {}", words.join(" ").trim_end());
}

/// Canonical text: `parse_spec(&serialize_spec(d)) == Ok(d)`.
pub fn serialize_spec(doc: &SpecDocument) -> String {
    let mut out = format!("nullkan {}\n", doc.version);
    if let Some(m) = &doc.model {
        let _ = writeln!(out, "model: {m}");
    }
    for b in &doc.blocks {
        out.push('\n');
        match b {
            Block::Category(c) => {
                let _ = writeln!(out, "category {}", c.name);
                for o in &c.objects {
                    line(&mut out, &["object", o]);
                }
                for (m, d, k) in &c.morphisms {
                    line(&mut out, &["morphism", m, d, k]);
                }
                for (o, m) in &c.identities {
                    line(&mut out, &["identity", o, m]);
                }
                for (g, f, h) in &c.compositions {
                    line(&mut out, &["compose", g, f, h]);
                }
            }
            Block::Functor(f) => {
                let _ = writeln!(out, "functor {} {} -> {}", f.name, f.source, f.target);
                for (x, y) in &f.objects {
                    line(&mut out, &["object", x, y]);
                }
                for (x, y) in &f.morphisms {
                    line(&mut out, &["morphism", x, y]);
                }
            }
            Block::Carrier(c) => {
                let _ = writeln!(out, "carrier {} on {}", c.name, c.category);
                for (o, e) in &c.sets {
                    let mut w = vec!["set", o.as_str()];
                    w.extend(e.iter().map(String::as_str));
                    line(&mut out, &w);
                }
                for (m, e) in &c.maps {
                    let mut w = vec!["map", m.as_str()];
                    w.extend(e.iter().map(String::as_str));
                    line(&mut out, &w);
                }
            }
            Block::Nullity(x) => {
                let _ = writeln!(out, "nullity {} on {}", x.name, x.category);
                for (o, sets) in &x.nulls {
                    let texts: Vec<String> = sets.iter().map(|s| subset_text(s)).collect();
                    let mut w = vec!["null", o.as_str()];
                    w.extend(texts.iter().map(String::as_str));
                    line(&mut out, &w);
                }
            }
            Block::Setup(s) => {
                out.push_str("setup\n");
                for (k, v) in [
                    ("name", &s.name),
                    ("B", &s.b),
                    ("I", &s.i),
                    ("M", &s.m),
                    ("j1", &s.j1),
                    ("j2", &s.j2),
                    ("pi", &s.pi),
                    ("gamma", &s.gamma),
                    ("base", &s.base),
                    ("iota3_inverse", &s.iota3_inverse),
                ] {
                    let _ = writeln!(out, "  {k}: {v}");
                }
            }
        }
        out.push_str("end\n");
    }
    out
}

fn build_category(c: &CategoryBlock) -> Result<FinCategory, Error> {
    let mut b = CategoryBuilder::new(c.name.clone());
    for o in &c.objects {
        b.object(o);
    }
    for (m, d, k) in &c.morphisms {
        b.morphism(m, d, k);
    }
    for o in &c.objects {
        match c.identities.iter().find(|(x, _)| x == o) {
            Some((_, m)) => b.identity(o, m),
            None => {
                let id = format!("id_{o}");
                b.morphism(&id, o, o);
                b.identity(o, &id);
            }
        }
    }
    for (g, f, h) in &c.compositions {
        b.compose(g, f, h);
    }
    b.build_with_identity_laws()
}

/// Expands a document into a [`Setup`]. Structural problems (functor laws,
/// carrier typing, nullity shape) surface here as engine errors.
pub fn resolve(doc: &SpecDocument) -> Result<Setup, Error> {
    if let Some(m) = &doc.model {
        return builtin_model(m);
    }
    let mut cats: HashMap<&str, Arc<FinCategory>> = HashMap::new();
    let mut functors: HashMap<&str, Functor> = HashMap::new();
    let mut carriers: HashMap<&str, (String, Carrier)> = HashMap::new();
    let mut nullities: HashMap<&str, &NullityBlock> = HashMap::new();
    let mut setup = None;
    for b in &doc.blocks {
        match b {
            Block::Category(c) => {
                cats.insert(&c.name, Arc::new(build_category(c)?));
            }
            Block::Functor(f) => {
                let pairs = |v: &[(String, String)]| v.iter().cloned().collect::<HashMap<_, _>>();
                let func = Functor::from_ids(
                    f.name.clone(),
                    cats[f.source.as_str()].clone(),
                    cats[f.target.as_str()].clone(),
                    &pairs(&f.objects),
                    &pairs(&f.morphisms),
                )?;
                functors.insert(&f.name, func);
            }
            Block::Carrier(c) => {
                let cat = &cats[c.category.as_str()];
                let sets = c
                    .sets
                    .iter()
                    .map(|(o, e)| Ok((o.clone(), FiniteSet::new(e.iter().cloned())?)))
                    .collect::<Result<HashMap<_, _>, Error>>()?;
                let maps = c.maps.iter().cloned().collect();
                carriers.insert(&c.name, (c.category.clone(), Carrier::from_ids(cat, &sets, &maps)?));
            }
            Block::Nullity(x) => {
                nullities.insert(&x.name, x);
            }
            Block::Setup(s) => setup = Some(s),
        }
    }
    let s = setup.ok_or_else(|| Error::Malformed {
        category: "spec".into(),
        detail: "missing setup block".into(),
    })?;
    let (gamma_cat, gamma) = carriers[s.gamma.as_str()].clone();
    if gamma_cat != s.m {
        return Err(Error::CarrierMismatch(format!("carrier `{}` is not on `{}`", s.gamma, s.m)));
    }
    let nb = nullities[s.base.as_str()];
    if nb.category != s.b {
        return Err(Error::CarrierMismatch(format!("nullity `{}` is not on `{}`", s.base, s.b)));
    }
    let mut setup = Setup {
        name: s.name.clone(),
        b: cats[s.b.as_str()].clone(),
        i: cats[s.i.as_str()].clone(),
        m: cats[s.m.as_str()].clone(),
        j1: functors[s.j1.as_str()].clone(),
        j2: functors[s.j2.as_str()].clone(),
        pi: functors[s.pi.as_str()].clone(),
        gamma,
        base: Vec::new(),
        iota3_inverse: (s.iota3_inverse == "same_triples").then_some(Iota3Inverse::SameTriples),
    };
    let j1j2 = setup.j1j2()?;
    for (o, id) in setup.b.objects().iter().enumerate() {
        let carrier = setup.gamma.sets[j1j2.ob(o)].clone();
        let nulls = nb
            .nulls
            .iter()
            .find(|(x, _)| x == id)
            .map(|(_, n)| n.clone())
            .ok_or_else(|| Error::InvalidNullity(format!("no nulls listed for `{id}`")))?;
        setup.base.push(NullityStructure::from_ids(carrier, &nulls)?.nulls());
    }
    Ok(setup)
}

fn category_block(c: &FinCategory) -> CategoryBlock {
    let mut b = CategoryBlock {
        name: c.name().to_string(),
        objects: c.objects().to_vec(),
        ..Default::default()
    };
    // Everything explicit, so the rebuilt category keeps the same indices.
    for rec in c.morphisms() {
        b.morphisms.push((rec.id.clone(), c.object_id(rec.dom).into(), c.object_id(rec.cod).into()));
    }
    for (o, id) in c.objects().iter().enumerate() {
        b.identities.push((id.clone(), c.morphism_id(c.identity(o)).into()));
    }
    for g in 0..c.num_morphisms() {
        for &f in c.incoming(c.dom(g)) {
            if c.is_identity(g) || c.is_identity(f) {
                continue;
            }
            if let Some(h) = c.compose(g, f) {
                b.compositions
                    .push((c.morphism_id(g).into(), c.morphism_id(f).into(), c.morphism_id(h).into()));
            }
        }
    }
    b
}

fn functor_block(f: &Functor, source: &str, target: &str) -> FunctorBlock {
    let (s, t) = (&*f.source, &*f.target);
    FunctorBlock {
        name: f.name.clone(),
        source: source.into(),
        target: target.into(),
        objects: (0..s.num_objects())
            .map(|o| (s.object_id(o).to_string(), t.object_id(f.ob(o)).to_string()))
            .collect(),
        morphisms: (0..s.num_morphisms())
            .filter(|&m| !s.is_identity(m))
            .map(|m| (s.morphism_id(m).to_string(), t.morphism_id(f.mor(m)).to_string()))
            .collect(),
    }
}

/// The full document for a setup, with shared categories emitted once.
/// Fails for an explicitly supplied `ι₃` inverse, which has no text form.
pub fn export_setup(s: &Setup) -> Result<SpecDocument, Error> {
    let mut blocks = Vec::new();
    let mut names: Vec<(Arc<FinCategory>, String)> = Vec::new();
    for (role, c) in [("B", &s.b), ("I", &s.i), ("M", &s.m)] {
        if names.iter().any(|(x, _)| Arc::ptr_eq(x, c)) {
            continue;
        }
        let mut block = category_block(c);
        if names.iter().any(|(_, n)| *n == block.name) {
            block.name = format!("{}_{role}", block.name);
        }
        names.push((c.clone(), block.name.clone()));
        blocks.push(Block::Category(block));
    }
    let name_of = |c: &Arc<FinCategory>| names.iter().find(|(x, _)| Arc::ptr_eq(x, c)).map(|(_, n)| n.clone()).unwrap();
    let (bn, inn, mn) = (name_of(&s.b), name_of(&s.i), name_of(&s.m));
    for (f, src, tgt) in [(&s.j2, &bn, &inn), (&s.j1, &inn, &mn), (&s.pi, &mn, &inn)] {
        blocks.push(Block::Functor(functor_block(f, src, tgt)));
    }
    let m = &*s.m;
    blocks.push(Block::Carrier(CarrierBlock {
        name: "gamma".into(),
        category: mn.clone(),
        sets: (0..m.num_objects())
            .map(|o| (m.object_id(o).to_string(), s.gamma.sets[o].elements().to_vec()))
            .collect(),
        maps: (0..m.num_morphisms())
            .filter(|&f| !m.is_identity(f))
            .map(|f| {
                let cod = &s.gamma.sets[m.cod(f)];
                let map = s.gamma.map(f);
                (
                    m.morphism_id(f).to_string(),
                    (0..map.dom).map(|x| cod.element(map.apply(x)).to_string()).collect(),
                )
            })
            .collect(),
    }));
    let carrier = s.base_carrier()?;
    blocks.push(Block::Nullity(NullityBlock {
        name: "base".into(),
        category: bn.clone(),
        nulls: (0..s.b.num_objects())
            .map(|o| {
                let st = NullityStructure::new(carrier.sets[o].clone(), s.base[o])?;
                Ok((s.b.object_id(o).to_string(), st.null_ids()))
            })
            .collect::<Result<_, Error>>()?,
    }));
    let iota3_inverse = match &s.iota3_inverse {
        None => "none",
        Some(Iota3Inverse::SameTriples) => "same_triples",
        Some(Iota3Inverse::Explicit(_)) => {
            return Err(Error::Malformed {
                category: s.name.clone(),
                detail: "an explicit ι₃ inverse has no text form".into(),
            })
        }
    };
    blocks.push(Block::Setup(SetupBlock {
        name: s.name.clone(),
        b: bn,
        i: inn,
        m: mn,
        j1: s.j1.name.clone(),
        j2: s.j2.name.clone(),
        pi: s.pi.name.clone(),
        gamma: "gamma".into(),
        base: "base".into(),
        iota3_inverse: iota3_inverse.into(),
    }));
    Ok(SpecDocument {
        version: FORMAT_VERSION,
        model: None,
        blocks,
    })
}
