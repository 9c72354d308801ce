//! Theory-building operators acting on finite structure specifications.
//!
//! Schemes that ask for infinitely many witnesses are rendered with a fan-out
//! `F`: every required class of witnesses receives exactly `F` fresh
//! elements. Each operator is a pure transformer and appends an [`Applied`]
//! record so that [`verify_schemes`] can re-check its ground instances.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};
use std::str::FromStr;

use thiserror::Error;

use crate::cardinal::Cardinal;
use crate::domination::{DominationError, DominationGraph};
use crate::limitcount::{IdentitySystem, LimitError, PlateauReading};
use crate::report::Report;
use crate::syntax::{content_lines, ParseError};
use crate::typespace::Color;

pub const DEFAULT_FANOUT: usize = 3;
/// Largest partition depth and carrier color accepted by the operators.
pub const MAX_OPERATOR_DEPTH: u32 = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OperatorError {
    #[error("unknown predicate `{0}`")]
    UnknownPredicate(String),
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("element `{0}` declared twice")]
    DuplicateElement(String),
    #[error("name `{0}` is already in use")]
    NameInUse(String),
    #[error("predicate `{0}` contains the uncolored element `{1}`")]
    Uncolored(String, String),
    #[error("predicate `{0}` has no element of color inf")]
    NoInfinity(String),
    #[error("{needed} fresh elements are required but only {given} were supplied")]
    TooFewFresh { needed: usize, given: usize },
    #[error("depth {0} outside 1..={MAX_OPERATOR_DEPTH}")]
    DepthLimit(u32),
    #[error("fan-out must be positive")]
    ZeroFanout,
    #[error("the allocated subset is empty")]
    EmptySubset,
    #[error("`{0}` is not a continuation stub of an earlier icp")]
    NotStub(String),
    #[error("predicates `{0}` and `{1}` overlap")]
    Overlap(String, String),
    #[error("a sequence of types must be nonempty")]
    EmptySequence,
    #[error("step {step}: {source}")]
    Step { step: usize, source: Box<OperatorError> },
    #[error(transparent)]
    Registry(#[from] DominationError),
    #[error(transparent)]
    Limit(#[from] LimitError),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// Domination graph plus the prime/limit bookkeeping the operators maintain.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Registry {
    pub graph: DominationGraph,
    /// Continuation types produced by `icp`.
    pub stubs: BTreeSet<String>,
    /// Types whose prime model realizes exactly the listed stubs.
    pub realized: BTreeMap<String, Vec<String>>,
    /// Types allocated with `bd` semantics.
    pub linked: BTreeSet<String>,
    /// Number of limit models requested over a type or a sequence key.
    pub il: BTreeMap<String, Cardinal>,
    pub notes: Vec<String>,
}

impl Registry {
    /// IL target for `key`; absent keys carry no limit models.
    pub fn il_target(&self, key: &str) -> Cardinal {
        self.il.get(key).copied().unwrap_or(Cardinal::ZERO)
    }
}

/// Type realized by the designated element of a predicate.
pub fn type_name(pred: &str) -> String {
    format!("p.{pred}")
}

/// Key under which limit models over a named sequence are recorded.
pub fn sequence_key(seq: &str) -> String {
    format!("seq:{seq}")
}

fn stub_name(sub: &str, bits: u32, depth: u32) -> String {
    let s: String = (0..depth).map(|i| if bits >> i & 1 == 1 { '1' } else { '0' }).collect();
    format!("q.{sub}.{s}")
}

fn joint_name(sub1: &str, sub2: &str) -> String {
    format!("j.{sub1}.{sub2}")
}

/// Log entry of one structural operator application.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Applied {
    Icp { sub: String, depth: u32, fanout: usize },
    Css { sub: String, stubs: Vec<String>, linked: bool, fanout: usize },
    Bu { sub1: String, sub2: String, depth: u32, fanout: usize },
    Link { lower: String, upper: String, principal: bool },
}

impl Applied {
    pub fn tag(&self) -> OpTag {
        match self {
            Applied::Icp { .. } => OpTag::Icp,
            Applied::Css { linked: true, .. } => OpTag::Bd,
            Applied::Css { .. } => OpTag::Css,
            Applied::Bu { .. } => OpTag::Bu,
            Applied::Link { .. } => OpTag::Link,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OpTag {
    Icp,
    Css,
    Bd,
    Bu,
    Link,
}

impl OpTag {
    fn selects(self, entry: &Applied) -> bool {
        match (self, entry) {
            (OpTag::Css, Applied::Css { .. }) => true,
            (tag, entry) => entry.tag() == tag,
        }
    }
}

impl fmt::Display for OpTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OpTag::Icp => "icp",
            OpTag::Css => "css",
            OpTag::Bd => "bd",
            OpTag::Bu => "bu",
            OpTag::Link => "link",
        })
    }
}

impl FromStr for OpTag {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "icp" => Ok(OpTag::Icp),
            "css" => Ok(OpTag::Css),
            "bd" => Ok(OpTag::Bd),
            "bu" => Ok(OpTag::Bu),
            "link" => Ok(OpTag::Link),
            other => Err(format!("unknown operator `{other}`")),
        }
    }
}

/// Finite predicate structure with a coloring and a type registry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructSpec {
    pub fanout: usize,
    elements: Vec<String>,
    index: BTreeMap<String, usize>,
    pub coloring: BTreeMap<usize, Color>,
    pub unary: BTreeMap<String, BTreeSet<usize>>,
    pub binary: BTreeMap<String, BTreeSet<(usize, usize)>>,
    pub ternary: BTreeMap<String, BTreeSet<(usize, usize, usize)>>,
    pub registry: Registry,
    pub log: Vec<Applied>,
}

impl Default for StructSpec {
    fn default() -> Self {
        StructSpec::new(DEFAULT_FANOUT).expect("default fan-out is positive")
    }
}

fn level(c: Color, depth: u32) -> u32 {
    match c {
        Color::Fin(n) => n.min(depth),
        Color::Inf => depth,
    }
}

fn check_depth(depth: u32) -> Result<(), OperatorError> {
    if depth == 0 || depth > MAX_OPERATOR_DEPTH {
        return Err(OperatorError::DepthLimit(depth));
    }
    Ok(())
}

impl StructSpec {
    pub fn new(fanout: usize) -> Result<Self, OperatorError> {
        if fanout == 0 {
            return Err(OperatorError::ZeroFanout);
        }
        Ok(StructSpec {
            fanout,
            elements: Vec::new(),
            index: BTreeMap::new(),
            coloring: BTreeMap::new(),
            unary: BTreeMap::new(),
            binary: BTreeMap::new(),
            ternary: BTreeMap::new(),
            registry: Registry::default(),
            log: Vec::new(),
        })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn element(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.elements[i]
    }

    pub fn color(&self, i: usize) -> Option<Color> {
        self.coloring.get(&i).copied()
    }

    pub fn add_element(&mut self, name: impl Into<String>, color: Option<Color>) -> Result<usize, OperatorError> {
        let name = name.into();
        if name.is_empty() || name.contains(|c: char| c.is_whitespace() || c == ',' || c == '#') {
            return Err(OperatorError::UnknownElement(name));
        }
        if self.index.contains_key(&name) {
            return Err(OperatorError::DuplicateElement(name));
        }
        let i = self.elements.len();
        self.index.insert(name.clone(), i);
        self.elements.push(name);
        if let Some(c) = color {
            self.coloring.insert(i, c);
        }
        Ok(i)
    }

    pub fn extent(&self, pred: &str) -> Result<&BTreeSet<usize>, OperatorError> {
        self.unary
            .get(pred)
            .ok_or_else(|| OperatorError::UnknownPredicate(pred.to_string()))
    }

    fn colored_extent(&self, pred: &str) -> Result<Vec<(usize, Color)>, OperatorError> {
        self.extent(pred)?
            .iter()
            .map(|&a| {
                self.color(a)
                    .map(|c| (a, c))
                    .ok_or_else(|| OperatorError::Uncolored(pred.to_string(), self.elements[a].clone()))
            })
            .collect()
    }

    fn name_in_use(&self, name: &str) -> bool {
        self.unary.contains_key(name) || self.binary.contains_key(name) || self.ternary.contains_key(name)
    }

    fn claim(&self, names: &[&str]) -> Result<(), OperatorError> {
        match names.iter().find(|n| self.name_in_use(n)) {
            Some(n) => Err(OperatorError::NameInUse(n.to_string())),
            None => Ok(()),
        }
    }

    fn relation(&mut self, name: &str) -> &mut BTreeSet<(usize, usize)> {
        self.binary.entry(name.to_string()).or_default()
    }

    fn relation3(&mut self, name: &str) -> &mut BTreeSet<(usize, usize, usize)> {
        self.ternary.entry(name.to_string()).or_default()
    }

    fn predicate(&mut self, name: &str) -> &mut BTreeSet<usize> {
        self.unary.entry(name.to_string()).or_default()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "fanout {}", self.fanout);
        for (i, e) in self.elements.iter().enumerate() {
            match self.color(i) {
                Some(c) => {
                    let _ = writeln!(out, "element {e} {c}");
                }
                None => {
                    let _ = writeln!(out, "element {e}");
                }
            }
        }
        for (name, ext) in &self.unary {
            let _ = write!(out, "unary {name}");
            for &a in ext {
                let _ = write!(out, " {}", self.elements[a]);
            }
            out.push('\n');
        }
        for (name, rel) in &self.binary {
            let _ = write!(out, "binary {name}");
            for &(a, b) in rel {
                let _ = write!(out, " {},{}", self.elements[a], self.elements[b]);
            }
            out.push('\n');
        }
        for (name, rel) in &self.ternary {
            let _ = write!(out, "ternary {name}");
            for &(a, b, c) in rel {
                let _ = write!(out, " {},{},{}", self.elements[a], self.elements[b], self.elements[c]);
            }
            out.push('\n');
        }
        for line in self.registry.graph.to_text().lines() {
            let _ = writeln!(out, "reg {line}");
        }
        for s in &self.registry.stubs {
            let _ = writeln!(out, "stub {s}");
        }
        for (t, stubs) in &self.registry.realized {
            let _ = writeln!(out, "realized {t} {}", stubs.join(" "));
        }
        for t in &self.registry.linked {
            let _ = writeln!(out, "linked {t}");
        }
        for (k, v) in &self.registry.il {
            let _ = writeln!(out, "il {k} {v}");
        }
        for n in &self.registry.notes {
            let _ = writeln!(out, "note {n}");
        }
        for a in &self.log {
            let _ = writeln!(out, "applied {}", applied_text(a));
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self, OperatorError> {
        const LINE: &str = "a structure line (fanout, element, unary, binary, ternary, reg, stub, realized, linked, il, note, applied)";
        let mut spec = StructSpec::new(DEFAULT_FANOUT)?;
        let mut reg_text = String::new();
        let mut reg_lines = 0usize;
        for (ln, line) in content_lines(text) {
            let (head, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
            let rest = rest.trim();
            let toks: Vec<&str> = rest.split_whitespace().collect();
            let elem = |spec: &StructSpec, name: &str| {
                spec.element(name)
                    .ok_or_else(|| ParseError::new(ln, format!("unknown element `{name}`"), "a declared element"))
            };
            match head {
                "fanout" => {
                    let f = crate::syntax::parse_usize(ln, rest, "`fanout <positive integer>`")?;
                    if f == 0 {
                        return Err(ParseError::new(ln, "fan-out must be positive", "`fanout <positive integer>`").into());
                    }
                    spec.fanout = f;
                }
                "element" => {
                    const EL: &str = "`element <name> [<color>|inf]`";
                    let color = match toks.as_slice() {
                        [_] => None,
                        [_, c] => Some(parse_color(c).ok_or_else(|| ParseError::new(ln, format!("bad color `{c}`"), EL))?),
                        _ => return Err(ParseError::new(ln, "wrong arity", EL).into()),
                    };
                    spec.add_element(toks[0], color)
                        .map_err(|e| ParseError::new(ln, e.to_string(), EL))?;
                }
                "unary" | "binary" | "ternary" => {
                    let Some((&name, tuples)) = toks.split_first() else {
                        return Err(ParseError::new(ln, "missing relation name", "`<kind> <name> <tuples>`").into());
                    };
                    let arity = match head {
                        "unary" => 1,
                        "binary" => 2,
                        _ => 3,
                    };
                    if spec.name_in_use(name) {
                        return Err(ParseError::new(ln, format!("`{name}` declared twice"), "a fresh relation name").into());
                    }
                    let mut parsed = Vec::new();
                    for t in tuples {
                        let parts: Vec<&str> = t.split(',').collect();
                        if parts.len() != arity {
                            return Err(ParseError::new(ln, format!("`{t}` has the wrong arity"), "comma-separated tuples").into());
                        }
                        let ids = parts.iter().map(|p| elem(&spec, p)).collect::<Result<Vec<_>, _>>()?;
                        parsed.push(ids);
                    }
                    match arity {
                        1 => {
                            spec.predicate(name).extend(parsed.iter().map(|v| v[0]));
                        }
                        2 => {
                            spec.relation(name).extend(parsed.iter().map(|v| (v[0], v[1])));
                        }
                        _ => {
                            spec.relation3(name).extend(parsed.iter().map(|v| (v[0], v[1], v[2])));
                        }
                    }
                }
                "reg" => {
                    while reg_lines + 1 < ln {
                        reg_text.push('\n');
                        reg_lines += 1;
                    }
                    reg_text.push_str(rest);
                    reg_text.push('\n');
                    reg_lines += 1;
                }
                "stub" if toks.len() == 1 => {
                    spec.registry.stubs.insert(toks[0].to_string());
                }
                "realized" if !toks.is_empty() => {
                    spec.registry
                        .realized
                        .insert(toks[0].to_string(), toks[1..].iter().map(|s| s.to_string()).collect());
                }
                "linked" if toks.len() == 1 => {
                    spec.registry.linked.insert(toks[0].to_string());
                }
                "il" if toks.len() == 2 => {
                    let v = toks[1]
                        .parse::<Cardinal>()
                        .map_err(|e| ParseError::new(ln, e.to_string(), "`il <key> <cardinal>`"))?;
                    spec.registry.il.insert(toks[0].to_string(), v);
                }
                "note" => spec.registry.notes.push(rest.to_string()),
                "applied" => spec.log.push(parse_applied(ln, &toks)?),
                other => return Err(ParseError::new(ln, format!("unexpected `{other}`"), LINE).into()),
            }
        }
        spec.registry.graph = DominationGraph::parse(&reg_text)?;
        Ok(spec)
    }
}

fn parse_color(tok: &str) -> Option<Color> {
    if tok == "inf" {
        Some(Color::Inf)
    } else {
        tok.parse().ok().map(Color::Fin)
    }
}

fn applied_text(a: &Applied) -> String {
    match a {
        Applied::Icp { sub, depth, fanout } => format!("icp {sub} depth={depth} fanout={fanout}"),
        Applied::Css { sub, stubs, linked, fanout } => {
            format!("css {sub} fanout={fanout} linked={linked} stubs={}", stubs.join(","))
        }
        Applied::Bu { sub1, sub2, depth, fanout } => format!("bu {sub1} {sub2} depth={depth} fanout={fanout}"),
        Applied::Link { lower, upper, principal } => format!("link {lower} {upper} principal={principal}"),
    }
}

/// Named `key=value` arguments following positional tokens.
struct Args<'a> {
    line: usize,
    expected: &'static str,
    positional: Vec<&'a str>,
    named: BTreeMap<&'a str, &'a str>,
}

impl<'a> Args<'a> {
    fn new(line: usize, toks: &[&'a str], expected: &'static str) -> Result<Self, ParseError> {
        let mut positional = Vec::new();
        let mut named = BTreeMap::new();
        for t in toks {
            match t.split_once('=') {
                Some((k, v)) => {
                    if named.insert(k, v).is_some() {
                        return Err(ParseError::new(line, format!("argument `{k}` given twice"), expected));
                    }
                }
                None => positional.push(*t),
            }
        }
        Ok(Args { line, expected, positional, named })
    }

    fn err(&self, msg: impl Into<String>) -> ParseError {
        ParseError::new(self.line, msg, self.expected)
    }

    fn finish(&self, positional: usize, keys: &[&str]) -> Result<(), ParseError> {
        if self.positional.len() != positional {
            return Err(self.err(format!("expected {positional} positional arguments")));
        }
        if let Some(k) = self.named.keys().find(|k| !keys.contains(k)) {
            return Err(self.err(format!("unknown argument `{k}`")));
        }
        Ok(())
    }

    fn get(&self, key: &str) -> Result<&'a str, ParseError> {
        self.named
            .get(key)
            .copied()
            .ok_or_else(|| self.err(format!("missing `{key}=`")))
    }

    fn opt(&self, key: &str) -> Option<&'a str> {
        self.named.get(key).copied()
    }

    fn num<T: FromStr>(&self, key: &str) -> Result<T, ParseError> {
        let v = self.get(key)?;
        v.parse().map_err(|_| self.err(format!("`{key}={v}` is not a number")))
    }

    fn flag(&self, key: &str) -> Result<bool, ParseError> {
        match self.opt(key) {
            None | Some("false") => Ok(false),
            Some("true") => Ok(true),
            Some(v) => Err(self.err(format!("`{key}={v}` is not true/false"))),
        }
    }

    fn cardinal(&self, key: &str) -> Result<Cardinal, ParseError> {
        let v = self.get(key)?;
        v.parse().map_err(|_| self.err(format!("`{key}={v}` is not a cardinal")))
    }

    fn fresh(&self) -> Result<Option<usize>, ParseError> {
        match self.opt("fresh") {
            None | Some("auto") => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|_| self.err(format!("`fresh={v}` is not a count"))),
        }
    }

    fn list(&self, key: &str) -> Result<Vec<String>, ParseError> {
        Ok(self
            .get(key)?
            .split(',')
            .filter(|s| !s.is_empty())
            .map(str::to_string)
            .collect())
    }
}

fn parse_applied(ln: usize, toks: &[&str]) -> Result<Applied, ParseError> {
    const EXP: &str = "`applied icp|css|bu|link <args>`";
    let Some((&op, rest)) = toks.split_first() else {
        return Err(ParseError::new(ln, "missing operator", EXP));
    };
    let a = Args::new(ln, rest, EXP)?;
    Ok(match op {
        "icp" => {
            a.finish(1, &["depth", "fanout"])?;
            Applied::Icp { sub: a.positional[0].into(), depth: a.num("depth")?, fanout: a.num("fanout")? }
        }
        "css" => {
            a.finish(1, &["fanout", "linked", "stubs"])?;
            Applied::Css {
                sub: a.positional[0].into(),
                stubs: a.list("stubs")?,
                linked: a.flag("linked")?,
                fanout: a.num("fanout")?,
            }
        }
        "bu" => {
            a.finish(2, &["depth", "fanout"])?;
            Applied::Bu {
                sub1: a.positional[0].into(),
                sub2: a.positional[1].into(),
                depth: a.num("depth")?,
                fanout: a.num("fanout")?,
            }
        }
        "link" => {
            a.finish(2, &["principal"])?;
            Applied::Link {
                lower: a.positional[0].into(),
                upper: a.positional[1].into(),
                principal: a.flag("principal")?,
            }
        }
        other => return Err(ParseError::new(ln, format!("unknown operator `{other}`"), EXP)),
    })
}

/// Adds a colored copy of the approximations of a non-principal type `p.<name>`:
/// `F` elements of each color `0..=max_color` and `F` elements of color inf.
pub fn carrier(spec: &StructSpec, name: &str, max_color: u32) -> Result<StructSpec, OperatorError> {
    if max_color > MAX_OPERATOR_DEPTH {
        return Err(OperatorError::DepthLimit(max_color));
    }
    spec.claim(&[name])?;
    let mut out = spec.clone();
    out.registry.graph.add_node(type_name(name), false, true)?;
    out.predicate(name);
    let colors = (0..=max_color).map(Color::Fin).chain(std::iter::once(Color::Inf));
    for c in colors {
        for k in 0..spec.fanout {
            let e = out.add_element(format!("{name}.c{c}.{k}"), Some(c))?;
            out.predicate(name).insert(e);
        }
    }
    Ok(out)
}

/// Continual partition of the `R_0`-images of `sub` into `2^n` parts per
/// color `n`, truncated at `depth`. Leaves `p.<sub>` without a prime model
/// and registers `2^depth` continuation stubs.
pub fn icp(spec: &StructSpec, sub: &str, fresh_y: usize, depth: u32) -> Result<StructSpec, OperatorError> {
    check_depth(depth)?;
    let src = spec.colored_extent(sub)?;
    if !src.iter().any(|&(_, c)| c == Color::Inf) {
        return Err(OperatorError::NoInfinity(sub.to_string()));
    }
    let rels: Vec<String> = (0..=depth).map(|i| format!("icp.{sub}.R{i}")).collect();
    let ypred = format!("icp.{sub}.Y");
    let mut names: Vec<&str> = rels.iter().map(String::as_str).collect();
    names.push(&ypred);
    spec.claim(&names)?;
    let f = spec.fanout;
    let needed: usize = src.iter().map(|&(_, c)| (1usize << level(c, depth)) * f).sum();
    if fresh_y < needed {
        return Err(OperatorError::TooFewFresh { needed, given: fresh_y });
    }
    let mut out = spec.clone();
    out.predicate(&ypred);
    for r in &rels {
        out.relation(r);
    }
    let mut counter = 0usize;
    for &(a, c) in &src {
        let m = level(c, depth);
        for pattern in 0..(1u32 << m) {
            for _ in 0..f {
                let y = out.add_element(format!("icp.{sub}.y{counter}"), None)?;
                counter += 1;
                out.predicate(&ypred).insert(y);
                out.relation(&rels[0]).insert((a, y));
                for i in 1..=m {
                    if pattern >> (i - 1) & 1 == 1 {
                        out.relation(&rels[i as usize]).insert((a, y));
                    }
                }
            }
        }
    }
    let p = type_name(sub);
    out.registry.graph.set_prime(&p, false)?;
    for bits in 0..(1u32 << depth) {
        let q = stub_name(sub, bits, depth);
        out.registry.graph.add_node(&q, false, false)?;
        out.registry.graph.add_edge(&q, &p, &rels[0], true)?;
        out.registry.stubs.insert(q);
    }
    out.log.push(Applied::Icp { sub: sub.to_string(), depth, fanout: f });
    Ok(out)
}

/// Allocation of the countable subset `stubs` to `sub`: every color-`i`
/// element receives `F` images of each color `k ≥ i` in the approximations
/// of each stub. Restores the prime model over `p.<sub>`. With `linked` the
/// application is recorded as `bd`.
pub fn css(spec: &StructSpec, sub: &str, stubs: &[String], linked: bool) -> Result<StructSpec, OperatorError> {
    if stubs.is_empty() {
        return Err(OperatorError::EmptySubset);
    }
    let mut seen = BTreeSet::new();
    let stubs: Vec<String> = stubs.iter().filter(|s| seen.insert(s.as_str())).cloned().collect();
    if let Some(s) = stubs.iter().find(|s| !spec.registry.stubs.contains(*s)) {
        return Err(OperatorError::NotStub(s.clone()));
    }
    let src = spec.colored_extent(sub)?;
    let top = max_finite_color(&src);
    let rels: Vec<String> = (0..stubs.len()).map(|j| format!("css.{sub}.R{j}")).collect();
    let preds: Vec<String> = (0..stubs.len()).map(|j| format!("css.{sub}.T{j}")).collect();
    let names: Vec<&str> = rels.iter().chain(&preds).map(String::as_str).collect();
    spec.claim(&names)?;
    let f = spec.fanout;
    let mut out = spec.clone();
    let mut counter = 0usize;
    for (j, stub) in stubs.iter().enumerate() {
        out.relation(&rels[j]);
        out.predicate(&preds[j]);
        for &(a, c) in &src {
            let colors: Vec<Color> = match c {
                Color::Fin(i) => (i..=top.max(i)).map(Color::Fin).collect(),
                Color::Inf => vec![Color::Inf],
            };
            for k in colors {
                for _ in 0..f {
                    let t = out.add_element(format!("css.{sub}.t{counter}"), Some(k))?;
                    counter += 1;
                    out.predicate(&preds[j]).insert(t);
                    out.relation(&rels[j]).insert((a, t));
                }
            }
        }
        let p = type_name(sub);
        out.registry.graph.add_edge(&p, stub, &rels[j], false)?;
    }
    let p = type_name(sub);
    out.registry.graph.set_prime(&p, true)?;
    out.registry.realized.insert(p.clone(), stubs.clone());
    if linked {
        out.registry.linked.insert(p);
    }
    out.log.push(Applied::Css { sub: sub.to_string(), stubs, linked, fanout: f });
    Ok(out)
}

/// `css` under its `bd` reading: the allocated stubs are linked to `p.<sub>`.
pub fn bd(spec: &StructSpec, sub: &str, stubs: &[String]) -> Result<StructSpec, OperatorError> {
    css(spec, sub, stubs, true)
}

fn max_finite_color(src: &[(usize, Color)]) -> u32 {
    src.iter()
        .filter_map(|&(_, c)| match c {
            Color::Fin(n) => Some(n),
            Color::Inf => None,
        })
        .max()
        .unwrap_or(0)
}

/// Ban for upward movement: the `R_0`-image of a pair of colors `(k,n)` is
/// split into `2^min(k,n)` parts, truncated at `depth`. Registers a joint
/// type over both predicates without a prime model.
pub fn bu(spec: &StructSpec, sub1: &str, sub2: &str, fresh_z: usize, depth: u32) -> Result<StructSpec, OperatorError> {
    check_depth(depth)?;
    let src1 = spec.colored_extent(sub1)?;
    let src2 = spec.colored_extent(sub2)?;
    if sub1 == sub2 || !spec.extent(sub1)?.is_disjoint(spec.extent(sub2)?) {
        return Err(OperatorError::Overlap(sub1.to_string(), sub2.to_string()));
    }
    let rels: Vec<String> = (0..=depth).map(|i| format!("bu.{sub1}.{sub2}.R{i}")).collect();
    let zpred = format!("bu.{sub1}.{sub2}.Z");
    let mut names: Vec<&str> = rels.iter().map(String::as_str).collect();
    names.push(&zpred);
    spec.claim(&names)?;
    let f = spec.fanout;
    let needed: usize = src1
        .iter()
        .flat_map(|&(_, c1)| src2.iter().map(move |&(_, c2)| (1usize << level(c1, depth).min(level(c2, depth))) * f))
        .sum();
    if fresh_z < needed {
        return Err(OperatorError::TooFewFresh { needed, given: fresh_z });
    }
    let mut out = spec.clone();
    out.predicate(&zpred);
    for r in &rels {
        out.relation3(r);
    }
    let mut counter = 0usize;
    for &(a, c1) in &src1 {
        for &(b, c2) in &src2 {
            let m = level(c1, depth).min(level(c2, depth));
            for pattern in 0..(1u32 << m) {
                for _ in 0..f {
                    let z = out.add_element(format!("bu.{sub1}.{sub2}.z{counter}"), None)?;
                    counter += 1;
                    out.predicate(&zpred).insert(z);
                    out.relation3(&rels[0]).insert((a, b, z));
                    for i in 1..=m {
                        if pattern >> (i - 1) & 1 == 1 {
                            out.relation3(&rels[i as usize]).insert((a, b, z));
                        }
                    }
                }
            }
        }
    }
    let joint = joint_name(sub1, sub2);
    out.registry.graph.add_node(&joint, false, false)?;
    out.registry.graph.add_edge(&joint, &type_name(sub1), &rels[0], true)?;
    out.registry.graph.add_edge(&joint, &type_name(sub2), &rels[0], true)?;
    out.log.push(Applied::Bu { sub1: sub1.to_string(), sub2: sub2.to_string(), depth, fanout: f });
    Ok(out)
}

/// `Q_kl`-ordered link from `lower` (domain) to `upper` (range): a pair is
/// related iff the color of its first element is at least the color of the
/// second. Registers `p.<upper>` as dominating `p.<lower>`.
pub fn link(spec: &StructSpec, lower: &str, upper: &str, principal: bool) -> Result<StructSpec, OperatorError> {
    let src = spec.colored_extent(lower)?;
    let dst = spec.colored_extent(upper)?;
    if lower == upper || !spec.extent(lower)?.is_disjoint(spec.extent(upper)?) {
        return Err(OperatorError::Overlap(lower.to_string(), upper.to_string()));
    }
    let rel = format!("Q.{lower}.{upper}");
    spec.claim(&[&rel])?;
    let mut out = spec.clone();
    out.relation(&rel);
    for &(x, cx) in &src {
        for &(y, cy) in &dst {
            if cx >= cy {
                out.relation(&rel).insert((x, y));
            }
        }
    }
    out.registry.graph.add_edge(&type_name(upper), &type_name(lower), &rel, principal)?;
    out.log.push(Applied::Link { lower: lower.to_string(), upper: upper.to_string(), principal });
    Ok(out)
}

/// Identities yielding `λ` limit models over the type `p`.
pub fn lmt(p: &str, lambda: Cardinal) -> Result<IdentitySystem, OperatorError> {
    let mut sys = IdentitySystem::limit_over_type(lambda)?;
    sys.name = format!("lmt {p} {lambda}");
    Ok(sys)
}

/// Identities yielding `λ` limit models over a `≤_RK`-sequence whose finite
/// part has `q_len` types.
pub fn lms(q_len: usize, lambda: Cardinal, reading: PlateauReading) -> Result<IdentitySystem, OperatorError> {
    if q_len == 0 {
        return Err(OperatorError::EmptySequence);
    }
    let mut sys = IdentitySystem::limit_over_sequence(lambda, reading)?;
    sys.name = format!("lms len={q_len} {lambda}");
    Ok(sys)
}

/// Records the limit-model target of `lmt` in the registry.
pub fn apply_lmt(spec: &StructSpec, p: &str, lambda: Cardinal) -> Result<(StructSpec, IdentitySystem), OperatorError> {
    let sys = lmt(p, lambda)?;
    if spec.registry.graph.index_of(p).is_none() {
        return Err(DominationError::UnknownNode(p.to_string()).into());
    }
    let mut out = spec.clone();
    out.registry.il.insert(p.to_string(), lambda);
    out.registry
        .notes
        .push(format!("R_i(a,y) entails {p}(y) and does not semi-isolate a, for a realizing {p}"));
    Ok((out, sys))
}

pub fn apply_lms(
    spec: &StructSpec,
    seq: &str,
    q_len: usize,
    lambda: Cardinal,
    reading: PlateauReading,
) -> Result<(StructSpec, IdentitySystem), OperatorError> {
    let mut sys = lms(q_len, lambda, reading)?;
    sys.name = format!("lms {seq} len={q_len} {lambda}");
    let mut out = spec.clone();
    out.registry.il.insert(sequence_key(seq), lambda);
    out.registry.notes.push(format!("plateau reading for {seq}: {reading}"));
    Ok((out, sys))
}

/// Records continuum many limit models over `key` with no identification of
/// extension paths.
pub fn apply_lfree(spec: &StructSpec, key: &str) -> StructSpec {
    let mut out = spec.clone();
    out.registry.il.insert(key.to_string(), Cardinal::Continuum);
    out
}

/// Per-rule tally of ground instances; only failures are itemized.
struct Tally<'r> {
    report: &'r mut Report,
    prefix: String,
    counts: BTreeMap<&'static str, usize>,
    failures: Vec<(&'static str, String)>,
}

impl<'r> Tally<'r> {
    fn new(report: &'r mut Report, prefix: String) -> Self {
        Tally { report, prefix, counts: BTreeMap::new(), failures: Vec::new() }
    }

    fn check(&mut self, rule: &'static str, ok: bool, detail: impl FnOnce() -> String) {
        *self.counts.entry(rule).or_default() += 1;
        if !ok {
            self.failures.push((rule, detail()));
        }
    }

    fn finish(self) {
        for (rule, n) in &self.counts {
            if !self.failures.iter().any(|(r, _)| r == rule) {
                self.report.pass(format!("{}.{rule}", self.prefix), format!("{n} instances"));
            }
        }
        for (rule, detail) in self.failures {
            self.report.fail(format!("{}.{rule}", self.prefix), detail);
        }
    }
}

fn images<T: Copy + Ord>(rel: Option<&BTreeSet<(T, usize)>>) -> BTreeMap<T, BTreeSet<usize>> {
    let mut out: BTreeMap<T, BTreeSet<usize>> = BTreeMap::new();
    for &(a, y) in rel.into_iter().flatten() {
        out.entry(a).or_default().insert(y);
    }
    out
}

fn pairs_of(rel: Option<&BTreeSet<(usize, usize, usize)>>) -> BTreeSet<((usize, usize), usize)> {
    rel.into_iter().flatten().map(|&(a, b, z)| ((a, b), z)).collect()
}

/// Checks a partitioned family `R_0..R_depth` with sources `src` against
/// schemes (1)–(3) of `icp` and `bu`.
#[allow(clippy::too_many_arguments)]
fn check_partition<T: Copy + Ord + fmt::Debug>(
    t: &mut Tally,
    rels: &[BTreeSet<(T, usize)>],
    sources: &[(T, u32, bool)],
    range: &BTreeSet<usize>,
    in_domain: &dyn Fn(T) -> bool,
    fanout: usize,
    show: &dyn Fn(T) -> String,
    show_y: &dyn Fn(usize) -> String,
) {
    let depth = rels.len() - 1;
    for i in 1..=depth {
        for &(a, y) in &rels[i] {
            t.check("subset", rels[0].contains(&(a, y)), || format!("R{i}({}, {}) without R0", show(a), show_y(y)));
        }
    }
    for (i, r) in rels.iter().enumerate() {
        for &(a, y) in r {
            t.check("domain", in_domain(a) && range.contains(&y), || {
                format!("R{i}({}, {}) leaves the domain or range", show(a), show_y(y))
            });
        }
    }
    let img0 = images(Some(&rels[0]));
    let mut owner: BTreeMap<usize, T> = BTreeMap::new();
    for (&a, ys) in &img0 {
        for &y in ys {
            let prev = owner.insert(y, a);
            t.check("scheme2", prev.is_none(), || {
                format!("{} lies in the images of {} and {}", show_y(y), show(prev.unwrap()), show(a))
            });
        }
    }
    for &y in range {
        t.check("range", owner.contains_key(&y), || format!("{} has no R0 preimage", show_y(y)));
    }
    let imgs: Vec<BTreeMap<T, BTreeSet<usize>>> = rels.iter().map(|r| images(Some(r))).collect();
    let empty = BTreeSet::new();
    for &(a, m, color_zero) in sources {
        let image = img0.get(&a).unwrap_or(&empty);
        if color_zero {
            t.check("scheme1", image.len() >= fanout, || {
                format!("{} has {} R0 images, fewer than {fanout}", show(a), image.len())
            });
        }
        let mut parts: BTreeMap<Vec<bool>, usize> = BTreeMap::new();
        for &y in image {
            let pattern: Vec<bool> = (1..=m as usize)
                .map(|i| imgs[i].get(&a).is_some_and(|s| s.contains(&y)))
                .collect();
            *parts.entry(pattern).or_default() += 1;
        }
        let expected = 1usize << m;
        t.check("scheme3", parts.len() == expected && parts.values().all(|&n| n >= fanout), || {
            let sizes: Vec<String> = parts.values().map(usize::to_string).collect();
            format!(
                "{} has {} parts of sizes [{}], expected {expected} parts of at least {fanout}",
                show(a),
                parts.len(),
                sizes.join(",")
            )
        });
        for (i, img) in imgs.iter().enumerate().skip(m as usize + 1) {
            let stray = img.get(&a).map_or(0, BTreeSet::len);
            t.check("scheme3", stray == 0, || format!("{} has {stray} R{i} images above its level {m}", show(a)));
        }
    }
}

fn verify_icp(spec: &StructSpec, sub: &str, depth: u32, fanout: usize, report: &mut Report) {
    let mut t = Tally::new(report, format!("icp[{sub}]"));
    let Ok(ext) = spec.extent(sub) else {
        t.check("structure", false, || format!("predicate `{sub}` is missing"));
        return t.finish();
    };
    let rels: Vec<BTreeSet<(usize, usize)>> = (0..=depth)
        .map(|i| spec.binary.get(&format!("icp.{sub}.R{i}")).cloned().unwrap_or_default())
        .collect();
    let range = spec.unary.get(&format!("icp.{sub}.Y")).cloned().unwrap_or_default();
    let mut sources = Vec::new();
    for &a in ext {
        match spec.color(a) {
            Some(c) => sources.push((a, level(c, depth), c == Color::Fin(0))),
            None => t.check("structure", false, || format!("{} is uncolored", spec.name(a))),
        }
    }
    check_partition(
        &mut t,
        &rels,
        &sources,
        &range,
        &|a| ext.contains(&a),
        fanout,
        &|a| spec.name(a).to_string(),
        &|y| spec.name(y).to_string(),
    );
    let p = type_name(sub);
    t.check("registry", spec.registry.graph.node(&p).is_some_and(|n| !n.prime) || was_allocated_later(spec, sub), || {
        format!("{p} still has a prime model")
    });
    let stubs = (0..1u32 << depth).filter(|&b| spec.registry.stubs.contains(&stub_name(sub, b, depth))).count();
    t.check("registry", stubs == 1 << depth, || format!("{stubs} of {} continuation stubs registered", 1 << depth));
    t.finish();
}

fn was_allocated_later(spec: &StructSpec, sub: &str) -> bool {
    spec.log
        .iter()
        .skip_while(|a| !matches!(a, Applied::Icp { sub: s, .. } if s == sub))
        .any(|a| matches!(a, Applied::Css { sub: s, .. } if s == sub))
}

fn verify_css(spec: &StructSpec, sub: &str, stubs: &[String], linked: bool, fanout: usize, report: &mut Report) {
    let mut t = Tally::new(report, format!("{}[{sub}]", if linked { "bd" } else { "css" }));
    let Ok(ext) = spec.extent(sub) else {
        t.check("structure", false, || format!("predicate `{sub}` is missing"));
        return t.finish();
    };
    let src: Vec<(usize, Color)> = ext.iter().filter_map(|&a| spec.color(a).map(|c| (a, c))).collect();
    t.check("structure", src.len() == ext.len(), || format!("`{sub}` has uncolored elements"));
    let top = max_finite_color(&src);
    for j in 0..stubs.len() {
        let rel = spec.binary.get(&format!("css.{sub}.R{j}")).cloned().unwrap_or_default();
        let targets = spec.unary.get(&format!("css.{sub}.T{j}")).cloned().unwrap_or_default();
        for &(a, y) in &rel {
            t.check("domain", ext.contains(&a) && targets.contains(&y), || {
                format!("R{j}({}, {}) leaves the domain or range", spec.name(a), spec.name(y))
            });
        }
        let img = images(Some(&rel));
        let empty = BTreeSet::new();
        for &(a, c) in &src {
            let image = img.get(&a).unwrap_or(&empty);
            let count = |k: Color| image.iter().filter(|&&y| spec.color(y) == Some(k)).count();
            match c {
                Color::Fin(i) => {
                    for k in 0..=top.max(i) {
                        let n = count(Color::Fin(k));
                        if k >= i {
                            t.check("scheme1", n >= fanout, || {
                                format!("{} has {n} R{j} images of color {k}, fewer than {fanout}", spec.name(a))
                            });
                        } else {
                            t.check("scheme1", n == 0, || {
                                format!("{} of color {i} has {n} R{j} images of color {k}", spec.name(a))
                            });
                        }
                    }
                }
                Color::Inf => {
                    let n = count(Color::Inf);
                    t.check("scheme1", n >= fanout, || {
                        format!("{} has {n} R{j} images of color inf, fewer than {fanout}", spec.name(a))
                    });
                }
            }
        }
        let mut owner: BTreeMap<usize, usize> = BTreeMap::new();
        for &(a, y) in &rel {
            let prev = owner.insert(y, a);
            t.check("scheme2", prev.is_none(), || {
                format!("{} is an R{j} image of {} and {}", spec.name(y), spec.name(prev.unwrap()), spec.name(a))
            });
        }
        for &y in &targets {
            t.check("range", owner.contains_key(&y), || format!("{} has no R{j} preimage", spec.name(y)));
        }
    }
    let p = type_name(sub);
    t.check("registry", spec.registry.graph.node(&p).is_some_and(|n| n.prime), || {
        format!("{p} has no prime model")
    });
    t.check("registry", spec.registry.realized.get(&p).map(Vec::as_slice) == Some(stubs), || {
        format!("{p} does not realize exactly the allocated stubs")
    });
    if linked {
        t.check("registry", spec.registry.linked.contains(&p), || format!("{p} is not marked linked"));
    }
    t.finish();
}

fn verify_bu(spec: &StructSpec, sub1: &str, sub2: &str, depth: u32, fanout: usize, report: &mut Report) {
    let mut t = Tally::new(report, format!("bu[{sub1},{sub2}]"));
    let (Ok(e1), Ok(e2)) = (spec.extent(sub1), spec.extent(sub2)) else {
        t.check("structure", false, || format!("predicate `{sub1}` or `{sub2}` is missing"));
        return t.finish();
    };
    t.check("structure", e1.is_disjoint(e2), || format!("`{sub1}` and `{sub2}` overlap"));
    let rels: Vec<BTreeSet<((usize, usize), usize)>> = (0..=depth)
        .map(|i| pairs_of(spec.ternary.get(&format!("bu.{sub1}.{sub2}.R{i}"))))
        .collect();
    let range = spec.unary.get(&format!("bu.{sub1}.{sub2}.Z")).cloned().unwrap_or_default();
    let mut sources = Vec::new();
    for &a in e1 {
        for &b in e2 {
            match (spec.color(a), spec.color(b)) {
                (Some(c1), Some(c2)) => sources.push((
                    (a, b),
                    level(c1, depth).min(level(c2, depth)),
                    c1 == Color::Fin(0) && c2 == Color::Fin(0),
                )),
                _ => t.check("structure", false, || {
                    format!("pair ({}, {}) is uncolored", spec.name(a), spec.name(b))
                }),
            }
        }
    }
    check_partition(
        &mut t,
        &rels,
        &sources,
        &range,
        &|(a, b)| e1.contains(&a) && e2.contains(&b),
        fanout,
        &|(a, b)| format!("({}, {})", spec.name(a), spec.name(b)),
        &|z| spec.name(z).to_string(),
    );
    let joint = joint_name(sub1, sub2);
    t.check("registry", spec.registry.graph.node(&joint).is_some_and(|n| !n.prime), || {
        format!("{joint} is missing or has a prime model")
    });
    t.finish();
}

fn verify_link(spec: &StructSpec, lower: &str, upper: &str, principal: bool, report: &mut Report) {
    let mut t = Tally::new(report, format!("link[{lower},{upper}]"));
    let (Ok(src), Ok(dst)) = (spec.extent(lower), spec.extent(upper)) else {
        t.check("structure", false, || format!("predicate `{lower}` or `{upper}` is missing"));
        return t.finish();
    };
    let rel_name = format!("Q.{lower}.{upper}");
    let rel = spec.binary.get(&rel_name).cloned().unwrap_or_default();
    for &(x, y) in &rel {
        t.check("domain", src.contains(&x) && dst.contains(&y), || {
            format!("Q({}, {}) leaves the domain or range", spec.name(x), spec.name(y))
        });
        let ordered = matches!((spec.color(x), spec.color(y)), (Some(cx), Some(cy)) if cx >= cy);
        t.check("ordered2", ordered, || format!("Q({}, {}) descends in color", spec.name(x), spec.name(y)));
    }
    let colors = |ext: &BTreeSet<usize>| -> BTreeSet<Color> { ext.iter().filter_map(|&a| spec.color(a)).collect() };
    for &ci in &colors(src) {
        for &cj in colors(dst).iter().filter(|&&cj| ci >= cj) {
            let hit = rel
                .iter()
                .any(|&(x, y)| spec.color(x) == Some(ci) && spec.color(y) == Some(cj));
            t.check("ordered1", hit, || format!("no Q pair of colors ({ci}, {cj})"));
        }
    }
    let hit = spec
        .registry
        .graph
        .edges()
        .iter()
        .any(|e| e.dominator == type_name(upper) && e.dominated == type_name(lower) && e.label == rel_name && e.principal == principal);
    t.check("registry", hit, || format!("registry lacks the edge for {rel_name}"));
    t.finish();
}

/// Re-evaluates every ground instance of the schemes of each logged
/// application of `tag`.
pub fn verify_schemes(spec: &StructSpec, tag: OpTag) -> Report {
    let mut report = Report::new(format!("verify {tag}"));
    let mut count = 0usize;
    for entry in spec.log.iter().filter(|e| tag.selects(e)) {
        count += 1;
        verify_entry(spec, entry, &mut report);
    }
    report.param("invocations", count);
    report
}

/// Verification of every logged application.
pub fn verify_all(spec: &StructSpec) -> Report {
    let mut report = Report::new("verify all");
    for entry in &spec.log {
        verify_entry(spec, entry, &mut report);
    }
    report.param("invocations", spec.log.len());
    report
}

fn verify_entry(spec: &StructSpec, entry: &Applied, report: &mut Report) {
    match entry {
        Applied::Icp { sub, depth, fanout } => {
            report.param(format!("fanout.icp[{sub}]"), fanout);
            verify_icp(spec, sub, *depth, *fanout, report)
        }
        Applied::Css { sub, stubs, linked, fanout } => {
            report.param(format!("fanout.css[{sub}]"), fanout);
            verify_css(spec, sub, stubs, *linked, *fanout, report)
        }
        Applied::Bu { sub1, sub2, depth, fanout } => {
            report.param(format!("fanout.bu[{sub1},{sub2}]"), fanout);
            verify_bu(spec, sub1, sub2, *depth, *fanout, report)
        }
        Applied::Link { lower, upper, principal } => verify_link(spec, lower, upper, *principal, report),
    }
}

/// One operator invocation in a pipeline file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Step {
    Fanout(usize),
    Carrier { name: String, colors: u32 },
    Link { lower: String, upper: String, principal: bool },
    /// `fresh: None` supplies exactly the required number of elements.
    Icp { sub: String, fresh: Option<usize>, depth: u32 },
    Css { sub: String, stubs: Vec<String>, linked: bool },
    Bu { sub1: String, sub2: String, fresh: Option<usize>, depth: u32 },
    Lmt { node: String, lambda: Cardinal },
    Lms { seq: String, len: usize, lambda: Cardinal, reading: PlateauReading },
    Lfree { key: String },
}

impl Step {
    pub fn is_structural(&self) -> bool {
        matches!(self, Step::Link { .. } | Step::Icp { .. } | Step::Css { .. } | Step::Bu { .. })
    }
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let fresh = |n: &Option<usize>| n.map_or_else(|| "auto".to_string(), |n| n.to_string());
        match self {
            Step::Fanout(n) => write!(f, "fanout f={n}"),
            Step::Carrier { name, colors } => write!(f, "carrier name={name} colors={colors}"),
            Step::Link { lower, upper, principal } => {
                write!(f, "link lower={lower} upper={upper} principal={principal}")
            }
            Step::Icp { sub, fresh: n, depth } => write!(f, "icp sub={sub} fresh={} depth={depth}", fresh(n)),
            Step::Css { sub, stubs, linked } => {
                let op = if *linked { "bd" } else { "css" };
                write!(f, "{op} sub={sub} stubs={}", stubs.join(","))
            }
            Step::Bu { sub1, sub2, fresh: n, depth } => {
                write!(f, "bu sub1={sub1} sub2={sub2} fresh={} depth={depth}", fresh(n))
            }
            Step::Lmt { node, lambda } => write!(f, "lmt type={node} lambda={lambda}"),
            Step::Lms { seq, len, lambda, reading } => {
                let r = match reading {
                    PlateauReading::StrictBound => "strict",
                    PlateauReading::TargetOnly => "target",
                };
                write!(f, "lms seq={seq} len={len} lambda={lambda} reading={r}")
            }
            Step::Lfree { key } => write!(f, "lfree key={key}"),
        }
    }
}

/// Ordered operator invocations.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Pipeline {
    pub steps: Vec<Step>,
}

impl Pipeline {
    pub fn to_text(&self) -> String {
        self.steps.iter().map(|s| format!("{s}\n")).collect()
    }

    pub fn parse(text: &str) -> Result<Self, OperatorError> {
        const EXP: &str = "an operator line `<op> key=value ...` with op in fanout, carrier, link, icp, css, bd, bu, lmt, lms, lfree";
        let mut steps = Vec::new();
        for (ln, line) in content_lines(text) {
            let toks: Vec<&str> = line.split_whitespace().collect();
            let a = Args::new(ln, &toks[1..], EXP)?;
            let step = match toks[0] {
                "fanout" => {
                    a.finish(0, &["f"])?;
                    let n: usize = a.num("f")?;
                    if n == 0 {
                        return Err(a.err("fan-out must be positive").into());
                    }
                    Step::Fanout(n)
                }
                "carrier" => {
                    a.finish(0, &["name", "colors"])?;
                    Step::Carrier { name: a.get("name")?.into(), colors: a.num("colors")? }
                }
                "link" => {
                    a.finish(0, &["lower", "upper", "principal"])?;
                    Step::Link {
                        lower: a.get("lower")?.into(),
                        upper: a.get("upper")?.into(),
                        principal: a.flag("principal")?,
                    }
                }
                "icp" => {
                    a.finish(0, &["sub", "fresh", "depth"])?;
                    Step::Icp { sub: a.get("sub")?.into(), fresh: a.fresh()?, depth: a.num("depth")? }
                }
                op @ ("css" | "bd") => {
                    a.finish(0, &["sub", "stubs"])?;
                    Step::Css { sub: a.get("sub")?.into(), stubs: a.list("stubs")?, linked: op == "bd" }
                }
                "bu" => {
                    a.finish(0, &["sub1", "sub2", "fresh", "depth"])?;
                    Step::Bu {
                        sub1: a.get("sub1")?.into(),
                        sub2: a.get("sub2")?.into(),
                        fresh: a.fresh()?,
                        depth: a.num("depth")?,
                    }
                }
                "lmt" => {
                    a.finish(0, &["type", "lambda"])?;
                    Step::Lmt { node: a.get("type")?.into(), lambda: a.cardinal("lambda")? }
                }
                "lms" => {
                    a.finish(0, &["seq", "len", "lambda", "reading"])?;
                    let reading = match a.opt("reading") {
                        None | Some("strict") => PlateauReading::StrictBound,
                        Some("target") => PlateauReading::TargetOnly,
                        Some(v) => return Err(a.err(format!("`reading={v}` is not strict/target")).into()),
                    };
                    Step::Lms { seq: a.get("seq")?.into(), len: a.num("len")?, lambda: a.cardinal("lambda")?, reading }
                }
                "lfree" => {
                    a.finish(0, &["key"])?;
                    Step::Lfree { key: a.get("key")?.into() }
                }
                other => return Err(ParseError::new(ln, format!("unknown operator `{other}`"), EXP).into()),
            };
            steps.push(step);
        }
        Ok(Pipeline { steps })
    }
}

/// Result of running a pipeline from the empty structure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Replay {
    pub spec: StructSpec,
    pub systems: Vec<(String, IdentitySystem)>,
}

fn needed_icp(spec: &StructSpec, sub: &str, depth: u32) -> Result<usize, OperatorError> {
    check_depth(depth)?;
    Ok(spec
        .colored_extent(sub)?
        .iter()
        .map(|&(_, c)| (1usize << level(c, depth)) * spec.fanout)
        .sum())
}

fn needed_bu(spec: &StructSpec, sub1: &str, sub2: &str, depth: u32) -> Result<usize, OperatorError> {
    check_depth(depth)?;
    let s1 = spec.colored_extent(sub1)?;
    let s2 = spec.colored_extent(sub2)?;
    Ok(s1
        .iter()
        .flat_map(|&(_, a)| s2.iter().map(move |&(_, b)| (1usize << level(a, depth).min(level(b, depth))) * spec.fanout))
        .sum())
}

fn apply_step(
    spec: StructSpec,
    step: &Step,
    systems: &mut Vec<(String, IdentitySystem)>,
) -> Result<StructSpec, OperatorError> {
    Ok(match step {
        Step::Fanout(n) => {
            if *n == 0 {
                return Err(OperatorError::ZeroFanout);
            }
            let mut out = spec;
            out.fanout = *n;
            out
        }
        Step::Carrier { name, colors } => carrier(&spec, name, *colors)?,
        Step::Link { lower, upper, principal } => link(&spec, lower, upper, *principal)?,
        Step::Icp { sub, fresh, depth } => {
            let n = match fresh {
                Some(n) => *n,
                None => needed_icp(&spec, sub, *depth)?,
            };
            icp(&spec, sub, n, *depth)?
        }
        Step::Css { sub, stubs, linked } => css(&spec, sub, stubs, *linked)?,
        Step::Bu { sub1, sub2, fresh, depth } => {
            let n = match fresh {
                Some(n) => *n,
                None => needed_bu(&spec, sub1, sub2, *depth)?,
            };
            bu(&spec, sub1, sub2, n, *depth)?
        }
        Step::Lmt { node, lambda } => {
            let (out, sys) = apply_lmt(&spec, node, *lambda)?;
            systems.push((node.clone(), sys));
            out
        }
        Step::Lms { seq, len, lambda, reading } => {
            let (out, sys) = apply_lms(&spec, seq, *len, *lambda, *reading)?;
            systems.push((sequence_key(seq), sys));
            out
        }
        Step::Lfree { key } => apply_lfree(&spec, key),
    })
}

/// Runs every step from an empty structure with the default fan-out.
pub fn replay(pipeline: &Pipeline) -> Result<Replay, OperatorError> {
    replay_inner(pipeline, None)
}

/// Like [`replay`], additionally verifying every logged scheme after each
/// structural step.
pub fn replay_checked(pipeline: &Pipeline) -> Result<(Replay, Report), OperatorError> {
    let mut report = Report::new("pipeline replay");
    let r = replay_inner(pipeline, Some(&mut report))?;
    report.param("steps", pipeline.steps.len());
    report.param("universe", r.spec.len());
    Ok((r, report))
}

fn replay_inner(pipeline: &Pipeline, mut report: Option<&mut Report>) -> Result<Replay, OperatorError> {
    let mut spec = StructSpec::default();
    let mut systems = Vec::new();
    for (i, step) in pipeline.steps.iter().enumerate() {
        spec = apply_step(spec, step, &mut systems)
            .map_err(|e| OperatorError::Step { step: i + 1, source: Box::new(e) })?;
        if let Some(report) = report.as_deref_mut() {
            if step.is_structural() {
                let v = verify_all(&spec);
                let bad: Vec<String> = v
                    .violations()
                    .map(|f| format!("{}: {}", f.rule, f.detail))
                    .collect();
                let detail = if bad.is_empty() { step.to_string() } else { format!("{step}; {}", bad.join("; ")) };
                report.check(format!("step{}", i + 1), bad.is_empty(), detail);
            }
        }
    }
    Ok(Replay { spec, systems })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn colored(f: usize, colors: u32) -> StructSpec {
        carrier(&StructSpec::new(f).unwrap(), "A", colors).unwrap()
    }

    #[test]
    fn icp_partitions_each_color() {
        let s = colored(2, 2);
        let needed = needed_icp(&s, "A", 2).unwrap();
        assert_eq!(needed, 2 * 2 * (1 + 2 + 4 + 4));
        assert_eq!(
            icp(&s, "A", needed - 1, 2).unwrap_err(),
            OperatorError::TooFewFresh { needed, given: needed - 1 }
        );
        let out = icp(&s, "A", needed, 2).unwrap();
        assert!(verify_schemes(&out, OpTag::Icp).all_passed());
        assert!(!out.registry.graph.node("p.A").unwrap().prime);
        assert_eq!(out.registry.stubs.len(), 4);
        let a = out.element("A.c2.0").unwrap();
        let r1 = &out.binary["icp.A.R1"];
        let r2 = &out.binary["icp.A.R2"];
        let img: Vec<usize> = out.binary["icp.A.R0"].iter().filter(|p| p.0 == a).map(|p| p.1).collect();
        let patterns: BTreeSet<(bool, bool)> = img.iter().map(|&y| (r1.contains(&(a, y)), r2.contains(&(a, y)))).collect();
        assert_eq!(patterns.len(), 4);
    }

    #[test]
    fn icp_rejects_uncolored_and_repeat() {
        let mut s = colored(1, 0);
        let x = s.add_element("x", None).unwrap();
        s.unary.get_mut("A").unwrap().insert(x);
        assert!(matches!(icp(&s, "A", 100, 1), Err(OperatorError::Uncolored(..))));
        let s = colored(1, 0);
        let once = icp(&s, "A", 100, 1).unwrap();
        assert!(matches!(icp(&once, "A", 100, 1), Err(OperatorError::NameInUse(_))));
    }

    #[test]
    fn css_restores_prime_and_realizes_subset() {
        let s = colored(1, 1);
        let s = icp(&s, "A", 100, 2).unwrap();
        let stubs: Vec<String> = s.registry.stubs.iter().take(2).cloned().collect();
        let out = css(&s, "A", &stubs, false).unwrap();
        assert!(out.registry.graph.node("p.A").unwrap().prime);
        assert_eq!(out.registry.realized["p.A"], stubs);
        assert!(verify_schemes(&out, OpTag::Css).all_passed());
        assert!(verify_schemes(&out, OpTag::Icp).all_passed());
        assert!(matches!(css(&s, "A", &["p.A".to_string()], false), Err(OperatorError::NotStub(_))));
        assert_eq!(css(&s, "A", &[], false).unwrap_err(), OperatorError::EmptySubset);
    }

    #[test]
    fn bu_keeps_flags_of_parts() {
        let s = colored(1, 1);
        let s = carrier(&s, "B", 2).unwrap();
        let n = needed_bu(&s, "A", "B", 1).unwrap();
        let out = bu(&s, "A", "B", n, 1).unwrap();
        assert!(out.registry.graph.node("p.A").unwrap().prime);
        assert!(out.registry.graph.node("p.B").unwrap().prime);
        assert!(!out.registry.graph.node("j.A.B").unwrap().prime);
        assert!(verify_schemes(&out, OpTag::Bu).all_passed());
        assert!(matches!(bu(&s, "A", "A", n, 1), Err(OperatorError::Overlap(..))));
    }

    #[test]
    fn deleting_an_r0_pair_is_reported() {
        let s = colored(1, 1);
        let mut out = icp(&s, "A", 100, 1).unwrap();
        let a = out.element("A.c0.0").unwrap();
        let pair = *out.binary["icp.A.R0"].iter().find(|p| p.0 == a).unwrap();
        out.binary.get_mut("icp.A.R0").unwrap().remove(&pair);
        let r = verify_schemes(&out, OpTag::Icp);
        assert!(r.failed_rules().contains(&"icp[A].scheme1"));
    }

    #[test]
    fn structure_and_pipeline_round_trip() {
        let text = "fanout f=1\ncarrier name=A colors=1\ncarrier name=B colors=0\ncarrier name=aux colors=1\n\
                    link lower=A upper=B principal=true\nicp sub=aux fresh=auto depth=1\n\
                    bd sub=A stubs=q.aux.0,q.aux.1\nbu sub1=A sub2=B fresh=auto depth=1\n\
                    lmt type=p.A lambda=2\nlms seq=s len=2 lambda=w reading=target\nlfree key=p.B\n";
        let p = Pipeline::parse(text).unwrap();
        assert_eq!(Pipeline::parse(&p.to_text()).unwrap(), p);
        let (r, report) = replay_checked(&p).unwrap();
        assert!(report.all_passed(), "{}", report.render_human());
        assert_eq!(r.systems.len(), 2);
        assert_eq!(r.spec.registry.il_target("p.B"), Cardinal::Continuum);
        let back = StructSpec::parse(&r.spec.to_text()).unwrap();
        assert_eq!(back, r.spec);
    }

    #[test]
    fn lmt_and_lms_validate_targets() {
        assert!(matches!(lmt("p", Cardinal::ZERO), Err(OperatorError::Limit(LimitError::ZeroTarget))));
        assert!(matches!(
            lms(3, Cardinal::Continuum, PlateauReading::StrictBound),
            Err(OperatorError::Limit(LimitError::Uncountable(_)))
        ));
        assert_eq!(lmt("p", Cardinal::Fin(1)).unwrap().schemas.len(), 3);
        assert_eq!(lms(2, Cardinal::Fin(2), PlateauReading::StrictBound).unwrap().schemas.len(), 2);
        assert_eq!(lms(2, Cardinal::Omega, PlateauReading::StrictBound).unwrap().schemas.len(), 3);
    }

    #[test]
    fn pipeline_errors_name_the_step() {
        let p = Pipeline::parse("carrier name=A colors=0\ncss sub=A stubs=q.x.0\n").unwrap();
        assert!(matches!(replay(&p), Err(OperatorError::Step { step: 2, .. })));
        let e = Pipeline::parse("icp sub=A depth=1 bogus=2").unwrap_err();
        assert!(e.to_string().contains("line 1"));
    }
}
