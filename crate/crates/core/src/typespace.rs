//! Depth-truncated 1-type spaces of three unary theory families.
//!
//! * `Iup`: independent unary predicates `P_k`. A depth-`d` cell fixes the
//!   signs of `P_0..P_{d-1}`; every type is non-principal.
//! * `Sdup`: sequentially divisible predicates `S_δ`, `δ ∈ 2^{<ω}`. A cell
//!   is either a stopped node `δ` (`S_δ ∧ ¬S_δ0 ∧ ¬S_δ1`, principal) with
//!   `|δ| ≤ d`, or a continuing frontier node `|δ| = d` that keeps dividing.
//!   `S_ε` holds everywhere.
//! * `Colored(m)`: a partition into parts `0..m`, each element carrying one
//!   finite color or no color at all (color `∞`). Finite-color cells are
//!   principal; the `∞` cell of part `i` is the non-principal type `p_i`.
//!   At depth `d` the cells carry colors `0..=d`, while formulas see the
//!   atoms `Col_0..Col_{d-1}`, so every formula cell still holds a
//!   principal type.
//!
//! Principality always follows the family rule rather than isolation inside
//! the finite reduct, so a depth-`d` cell stands for every true type that
//! agrees with the first `d` predicate decisions.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::models::ModelSpec;
use crate::syntax::{content_lines, key_value, parse_usize, ParseError};

/// Largest depth accepted by [`enumerate_types`].
pub const ENUMERATE_DEPTH_LIMIT: usize = 16;

/// Largest atom count for the `3^atoms` formula exhaustion.
pub const EXHAUSTIVE_ATOM_LIMIT: usize = 13;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TypeSpaceError {
    #[error("depth must be at least 1")]
    ZeroDepth,
    #[error("colored type spaces need at least one part")]
    NoParts,
    #[error("depth {depth} exceeds the limit {limit}")]
    DepthLimit { depth: usize, limit: usize },
    #[error("`{0}` is not a valid cell address for this type space")]
    InvalidAddress(String),
    #[error("`{0}` is not a cell address")]
    BadAddress(String),
    #[error("`{0}` is not a formula atom")]
    BadAtom(String),
    #[error("atom `{atom}` does not belong to the {family} signature")]
    ForeignAtom { atom: String, family: String },
    #[error("formula `{0}` is inconsistent")]
    Inconsistent(String),
    #[error("type space mismatch: {0} vs {1}")]
    FamilyMismatch(String, String),
    #[error("{atoms} atoms exceed the exhaustive search limit of {limit}")]
    SizeLimit { atoms: usize, limit: usize },
    #[error(transparent)]
    Parse(#[from] ParseError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    Iup,
    Sdup,
    Colored { m: usize },
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Iup => f.write_str("iup"),
            Family::Sdup => f.write_str("sdup"),
            Family::Colored { m } => write!(f, "colored({m})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TypeSpace {
    pub family: Family,
    pub depth: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Color {
    Fin(u32),
    Inf,
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Color::Fin(k) => write!(f, "{k}"),
            Color::Inf => f.write_str("inf"),
        }
    }
}

impl FromStr for Color {
    type Err = TypeSpaceError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "inf" => Ok(Color::Inf),
            t => t
                .parse()
                .map(Color::Fin)
                .map_err(|_| TypeSpaceError::BadAddress(s.to_string())),
        }
    }
}

/// Cell address. `Iup` bits are `P_0, P_1, …` signs; `Sdup` paths are tree
/// nodes with the stopped/continuing marker.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TypeId {
    Iup(Vec<bool>),
    Sdup { path: Vec<bool>, stopped: bool },
    Colored { part: usize, color: Color },
}

fn bits_to_string(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

fn parse_bits(s: &str) -> Option<Vec<bool>> {
    s.chars()
        .map(|c| match c {
            '0' => Some(false),
            '1' => Some(true),
            _ => None,
        })
        .collect()
}

fn is_prefix(a: &[bool], b: &[bool]) -> bool {
    a.len() <= b.len() && b[..a.len()] == *a
}

impl fmt::Display for TypeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TypeId::Iup(bits) => f.write_str(&bits_to_string(bits)),
            TypeId::Sdup { path, stopped } => {
                let tag = if *stopped { "stop" } else { "cont" };
                write!(f, "{tag}({})", bits_to_string(path))
            }
            TypeId::Colored { part, color } => write!(f, "({part},{color})"),
        }
    }
}

impl FromStr for TypeId {
    type Err = TypeSpaceError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let bad = || TypeSpaceError::BadAddress(s.to_string());
        for (tag, stopped) in [("stop(", true), ("cont(", false)] {
            if let Some(rest) = t.strip_prefix(tag) {
                let inner = rest.strip_suffix(')').ok_or_else(bad)?;
                let path = parse_bits(inner).ok_or_else(bad)?;
                return Ok(TypeId::Sdup { path, stopped });
            }
        }
        if let Some(inner) = t.strip_prefix('(').and_then(|r| r.strip_suffix(')')) {
            let (a, b) = inner.split_once(',').ok_or_else(bad)?;
            let part = a.trim().parse().map_err(|_| bad())?;
            let color = b.parse().map_err(|_| bad())?;
            return Ok(TypeId::Colored { part, color });
        }
        match parse_bits(t) {
            Some(bits) if !bits.is_empty() => Ok(TypeId::Iup(bits)),
            _ => Err(bad()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cell {
    pub id: TypeId,
    pub principal: bool,
}

/// Predicate atoms of the three signatures.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Atom {
    P(usize),
    S(Vec<bool>),
    Part(usize),
    Col(u32),
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::P(k) => write!(f, "P{k}"),
            Atom::S(path) => write!(f, "S({})", bits_to_string(path)),
            Atom::Part(i) => write!(f, "Part{i}"),
            Atom::Col(j) => write!(f, "Col{j}"),
        }
    }
}

impl FromStr for Atom {
    type Err = TypeSpaceError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let bad = || TypeSpaceError::BadAtom(s.to_string());
        if let Some(rest) = t.strip_prefix("S(") {
            let inner = rest.strip_suffix(')').ok_or_else(bad)?;
            return parse_bits(inner).map(Atom::S).ok_or_else(bad);
        }
        let num = |rest: &str| rest.parse::<usize>().map_err(|_| bad());
        if let Some(rest) = t.strip_prefix("Part") {
            return num(rest).map(Atom::Part);
        }
        if let Some(rest) = t.strip_prefix("Col") {
            return rest.parse::<u32>().map(Atom::Col).map_err(|_| bad());
        }
        if let Some(rest) = t.strip_prefix('P') {
            return num(rest).map(Atom::P);
        }
        Err(bad())
    }
}

/// Conjunction of signed atoms in one free variable. The constructor
/// rejects an atom occurring with both signs; family-level consistency is
/// decided by [`is_consistent`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FormulaLit {
    lits: Vec<(Atom, bool)>,
}

impl FormulaLit {
    pub fn new(mut lits: Vec<(Atom, bool)>) -> Result<Self, TypeSpaceError> {
        lits.sort();
        lits.dedup();
        for w in lits.windows(2) {
            if w[0].0 == w[1].0 {
                let f = FormulaLit { lits: lits.clone() };
                return Err(TypeSpaceError::Inconsistent(f.to_string()));
            }
        }
        Ok(FormulaLit { lits })
    }

    /// The empty conjunction, `x = x`.
    pub fn top() -> Self {
        FormulaLit { lits: Vec::new() }
    }

    pub fn literals(&self) -> &[(Atom, bool)] {
        &self.lits
    }

    fn positives(&self) -> impl Iterator<Item = &Atom> {
        self.lits.iter().filter(|(_, s)| *s).map(|(a, _)| a)
    }

    fn negatives(&self) -> impl Iterator<Item = &Atom> {
        self.lits.iter().filter(|(_, s)| !*s).map(|(a, _)| a)
    }
}

impl fmt::Display for FormulaLit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.lits.is_empty() {
            return f.write_str("true");
        }
        let parts: Vec<String> = self
            .lits
            .iter()
            .map(|(a, s)| if *s { a.to_string() } else { format!("!{a}") })
            .collect();
        f.write_str(&parts.join(" & "))
    }
}

impl FromStr for FormulaLit {
    type Err = TypeSpaceError;

    /// `P0 & !P1`, `S(01) & !S(010)`, `Part0 & Col2`; `true` is empty.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if t == "true" || t.is_empty() {
            return Ok(FormulaLit::top());
        }
        let lits = t
            .split('&')
            .map(|tok| {
                let tok = tok.trim();
                match tok.strip_prefix('!') {
                    Some(rest) => rest.parse().map(|a| (a, false)),
                    None => tok.parse().map(|a| (a, true)),
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        FormulaLit::new(lits)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    IFormula,
    NiFormula,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Classification::IFormula => f.write_str("IFormula"),
            Classification::NiFormula => f.write_str("NiFormula"),
        }
    }
}

impl TypeSpace {
    pub fn new(family: Family, depth: usize) -> Result<Self, TypeSpaceError> {
        if depth == 0 {
            return Err(TypeSpaceError::ZeroDepth);
        }
        if family == (Family::Colored { m: 0 }) {
            return Err(TypeSpaceError::NoParts);
        }
        Ok(TypeSpace { family, depth })
    }

    pub fn iup(depth: usize) -> Self {
        Self::new(Family::Iup, depth).expect("depth must be positive")
    }

    pub fn sdup(depth: usize) -> Self {
        Self::new(Family::Sdup, depth).expect("depth must be positive")
    }

    pub fn colored(m: usize, depth: usize) -> Self {
        Self::new(Family::Colored { m }, depth).expect("positive parts and depth")
    }

    pub fn with_depth(&self, depth: usize) -> Result<Self, TypeSpaceError> {
        Self::new(self.family, depth)
    }

    /// Whether `id` addresses a cell of this space at its depth.
    pub fn contains(&self, id: &TypeId) -> bool {
        match (self.family, id) {
            (Family::Iup, TypeId::Iup(bits)) => bits.len() == self.depth,
            (Family::Sdup, TypeId::Sdup { path, stopped }) => {
                if *stopped {
                    path.len() <= self.depth
                } else {
                    path.len() == self.depth
                }
            }
            (Family::Colored { m }, TypeId::Colored { part, color }) => {
                *part < m
                    && match color {
                        Color::Fin(j) => (*j as usize) <= self.depth,
                        Color::Inf => true,
                    }
            }
            _ => false,
        }
    }

    pub fn check(&self, id: &TypeId) -> Result<(), TypeSpaceError> {
        if self.contains(id) {
            Ok(())
        } else {
            Err(TypeSpaceError::InvalidAddress(id.to_string()))
        }
    }

    /// Principality by the family rule.
    pub fn is_principal(&self, id: &TypeId) -> bool {
        match id {
            TypeId::Iup(_) => false,
            TypeId::Sdup { stopped, .. } => *stopped,
            TypeId::Colored { color, .. } => matches!(color, Color::Fin(_)),
        }
    }

    /// Truth value of `atom` in the cell, or `None` when the cell does not
    /// decide it at this depth.
    pub fn satisfies(&self, id: &TypeId, atom: &Atom) -> Option<bool> {
        match (id, atom) {
            (TypeId::Iup(bits), Atom::P(k)) => bits.get(*k).copied(),
            (TypeId::Sdup { path, stopped }, Atom::S(g)) => {
                if is_prefix(g, path) {
                    Some(true)
                } else if !*stopped && is_prefix(path, g) {
                    None
                } else {
                    Some(false)
                }
            }
            (TypeId::Colored { part, .. }, Atom::Part(i)) => Some(part == i),
            (TypeId::Colored { color, .. }, Atom::Col(j)) => Some(*color == Color::Fin(*j)),
            _ => Some(false),
        }
    }

    pub fn to_text(&self) -> String {
        match self.family {
            Family::Iup => format!("family: iup\ndepth: {}\n", self.depth),
            Family::Sdup => format!("family: sdup\ndepth: {}\n", self.depth),
            Family::Colored { m } => format!("family: colored\nm: {m}\ndepth: {}\n", self.depth),
        }
    }

    /// Parses the `family:` / `m:` / `depth:` header. Returns the space and
    /// the remaining content lines.
    pub fn parse_header(text: &str) -> Result<(Self, Vec<(usize, &str)>), TypeSpaceError> {
        const EXPECTED: &str = "`family: iup|sdup|colored`, `m: <int>`, `depth: <int>`";
        let mut family = None;
        let mut m = None;
        let mut depth = None;
        let mut rest = Vec::new();
        let mut last_line = 0;
        for (ln, line) in content_lines(text) {
            last_line = ln;
            match key_value(line) {
                Some(("family", v)) if rest.is_empty() => {
                    family = Some(match v {
                        "iup" => "iup",
                        "sdup" => "sdup",
                        "colored" => "colored",
                        other => {
                            return Err(ParseError::new(ln, format!("unknown family `{other}`"), EXPECTED).into())
                        }
                    })
                }
                Some(("m", v)) if rest.is_empty() => m = Some(parse_usize(ln, v, EXPECTED)?),
                Some(("depth", v)) if rest.is_empty() => depth = Some(parse_usize(ln, v, EXPECTED)?),
                _ => rest.push((ln, line)),
            }
        }
        let missing = |what: &str| ParseError::new(last_line.max(1), format!("missing `{what}`"), EXPECTED);
        let family = match family.ok_or_else(|| missing("family"))? {
            "iup" => Family::Iup,
            "sdup" => Family::Sdup,
            _ => Family::Colored {
                m: m.ok_or_else(|| missing("m"))?,
            },
        };
        let depth = depth.ok_or_else(|| missing("depth"))?;
        Ok((TypeSpace::new(family, depth)?, rest))
    }

    pub fn parse(text: &str) -> Result<Self, TypeSpaceError> {
        let (ts, rest) = Self::parse_header(text)?;
        if let Some((ln, line)) = rest.first() {
            return Err(ParseError::new(*ln, format!("unexpected `{line}`"), "end of type-space file").into());
        }
        Ok(ts)
    }
}

/// All cells at the space's depth, each tagged with its principality.
pub fn enumerate_types(ts: &TypeSpace) -> Result<Vec<Cell>, TypeSpaceError> {
    if ts.depth > ENUMERATE_DEPTH_LIMIT {
        return Err(TypeSpaceError::DepthLimit {
            depth: ts.depth,
            limit: ENUMERATE_DEPTH_LIMIT,
        });
    }
    let ids = match ts.family {
        Family::Iup => all_paths(ts.depth).into_iter().map(TypeId::Iup).collect(),
        Family::Sdup => {
            let mut ids: Vec<TypeId> = (0..=ts.depth)
                .flat_map(all_paths)
                .map(|path| TypeId::Sdup { path, stopped: true })
                .collect();
            ids.extend(
                all_paths(ts.depth)
                    .into_iter()
                    .map(|path| TypeId::Sdup { path, stopped: false }),
            );
            ids
        }
        Family::Colored { m } => {
            let mut ids = Vec::new();
            for part in 0..m {
                for j in 0..=ts.depth as u32 {
                    ids.push(TypeId::Colored { part, color: Color::Fin(j) });
                }
            }
            ids.extend((0..m).map(|part| TypeId::Colored { part, color: Color::Inf }));
            ids
        }
    };
    Ok(ids
        .into_iter()
        .map(|id| Cell {
            principal: ts.is_principal(&id),
            id,
        })
        .collect())
}

/// All bit vectors of length `len`, in lexicographic order.
fn all_paths(len: usize) -> Vec<Vec<bool>> {
    (0..1u64 << len)
        .map(|v| (0..len).map(|i| v >> (len - 1 - i) & 1 == 1).collect())
        .collect()
}

fn check_signature(ts: &TypeSpace, phi: &FormulaLit) -> Result<(), TypeSpaceError> {
    for (atom, _) in phi.literals() {
        let ok = match (ts.family, atom) {
            (Family::Iup, Atom::P(_)) | (Family::Sdup, Atom::S(_)) => true,
            (Family::Colored { m }, Atom::Part(i)) => *i < m,
            (Family::Colored { .. }, Atom::Col(_)) => true,
            _ => false,
        };
        if !ok {
            return Err(TypeSpaceError::ForeignAtom {
                atom: atom.to_string(),
                family: ts.family.to_string(),
            });
        }
    }
    Ok(())
}

/// Consistency with the untruncated family theory.
pub fn is_consistent(ts: &TypeSpace, phi: &FormulaLit) -> Result<bool, TypeSpaceError> {
    check_signature(ts, phi)?;
    Ok(match ts.family {
        Family::Iup => true,
        Family::Sdup => {
            let pos: Vec<&Vec<bool>> = phi
                .positives()
                .map(|a| match a {
                    Atom::S(p) => p,
                    _ => unreachable!(),
                })
                .collect();
            let chain = pos
                .iter()
                .all(|a| pos.iter().all(|b| is_prefix(a, b) || is_prefix(b, a)));
            let deepest = pos.iter().max_by_key(|p| p.len()).map(|p| p.as_slice()).unwrap_or(&[]);
            chain
                && phi.negatives().all(|a| match a {
                    Atom::S(g) => !is_prefix(g, deepest),
                    _ => unreachable!(),
                })
        }
        Family::Colored { m } => {
            let pos_parts = phi.positives().filter(|a| matches!(a, Atom::Part(_))).count();
            let neg_parts = phi.negatives().filter(|a| matches!(a, Atom::Part(_))).count();
            let pos_colors = phi.positives().filter(|a| matches!(a, Atom::Col(_))).count();
            pos_parts <= 1 && (pos_parts == 1 || neg_parts < m) && pos_colors <= 1
        }
    })
}

/// Whether some isolated type of the untruncated family contains `phi`.
pub fn classify_formula(ts: &TypeSpace, phi: &FormulaLit) -> Result<Classification, TypeSpaceError> {
    if !is_consistent(ts, phi)? {
        return Err(TypeSpaceError::Inconsistent(phi.to_string()));
    }
    Ok(match ts.family {
        Family::Iup => Classification::NiFormula,
        // A consistent Sdup conjunction holds in the stopped type at its
        // deepest positive node; a consistent Colored conjunction leaves all
        // but finitely many finite colors open.
        Family::Sdup | Family::Colored { .. } => Classification::IFormula,
    })
}

/// Projection of a cell onto the atoms visible at `depth`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum CellKey {
    Bits(Vec<bool>),
    Node(Vec<bool>),
    Part(usize, Option<u32>),
}

fn cell_key(id: &TypeId, depth: usize) -> CellKey {
    match id {
        TypeId::Iup(bits) => CellKey::Bits(bits[..depth.min(bits.len())].to_vec()),
        TypeId::Sdup { path, .. } => CellKey::Node(path[..depth.min(path.len())].to_vec()),
        TypeId::Colored { part, color } => CellKey::Part(
            *part,
            match color {
                Color::Fin(j) if (*j as usize) < depth => Some(*j),
                _ => None,
            },
        ),
    }
}

fn all_keys(ts: &TypeSpace, depth: usize) -> BTreeSet<CellKey> {
    match ts.family {
        Family::Iup => all_paths(depth).into_iter().map(CellKey::Bits).collect(),
        Family::Sdup => (0..=depth).flat_map(all_paths).map(CellKey::Node).collect(),
        Family::Colored { m } => (0..m)
            .flat_map(|i| {
                (0..depth as u32)
                    .map(move |j| CellKey::Part(i, Some(j)))
                    .chain(std::iter::once(CellKey::Part(i, None)))
            })
            .collect(),
    }
}

/// A set of types: a base (everything, or nothing) plus finite explicit
/// additions and removals. The `All` base stands for the family's full
/// type space, which is not exhausted by removing finitely many points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Base {
    All,
    None,
}

impl fmt::Display for Base {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Base::All => f.write_str("all"),
            Base::None => f.write_str("none"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DenseSet {
    pub base: Base,
    pub added: BTreeSet<TypeId>,
    pub removed: BTreeSet<TypeId>,
}

impl DenseSet {
    pub fn explicit<I: IntoIterator<Item = TypeId>>(cells: I) -> Self {
        DenseSet {
            base: Base::None,
            added: cells.into_iter().collect(),
            removed: BTreeSet::new(),
        }
    }

    pub fn all() -> Self {
        DenseSet {
            base: Base::All,
            added: BTreeSet::new(),
            removed: BTreeSet::new(),
        }
    }

    pub fn contains(&self, id: &TypeId) -> bool {
        self.added.contains(id) || (self.base == Base::All && !self.removed.contains(id))
    }
}

/// Whether `x` meets every cell of the depth-`depth` atom partition.
pub fn is_dense(ts: &TypeSpace, x: &DenseSet, depth: usize) -> Result<bool, TypeSpaceError> {
    if depth == 0 || depth > ts.depth {
        return Err(TypeSpaceError::DepthLimit {
            depth,
            limit: ts.depth,
        });
    }
    for id in x.added.iter().chain(&x.removed) {
        ts.check(id)?;
    }
    if x.base == Base::All {
        return Ok(true);
    }
    let hit: BTreeSet<CellKey> = x.added.iter().map(|id| cell_key(id, depth)).collect();
    Ok(all_keys(ts, depth).is_subset(&hit))
}

pub fn is_dense_cells(ts: &TypeSpace, cells: &[TypeId], depth: usize) -> Result<bool, TypeSpaceError> {
    is_dense(ts, &DenseSet::explicit(cells.iter().cloned()), depth)
}

/// Prime-model existence as density of the principal cells.
pub fn has_prime_model(ts: &TypeSpace) -> Result<bool, TypeSpaceError> {
    let principal: Vec<TypeId> = enumerate_types(ts)?
        .into_iter()
        .filter(|c| c.principal)
        .map(|c| c.id)
        .collect();
    is_dense_cells(ts, &principal, ts.depth)
}

/// Atoms whose truth value is decided by every cell at `depth`.
pub fn atoms_at_depth(ts: &TypeSpace, depth: usize) -> Vec<Atom> {
    match ts.family {
        Family::Iup => (0..depth).map(Atom::P).collect(),
        Family::Sdup => (0..=depth).flat_map(all_paths).map(Atom::S).collect(),
        Family::Colored { m } => (0..m)
            .map(Atom::Part)
            .chain((0..depth as u32).map(Atom::Col))
            .collect(),
    }
}

/// Every consistent conjunction over the atoms visible at the space's depth
/// (each atom positive, negative or absent).
pub fn consistent_formulas(ts: &TypeSpace) -> Result<Vec<FormulaLit>, TypeSpaceError> {
    let atoms = atoms_at_depth(ts, ts.depth);
    if atoms.len() > EXHAUSTIVE_ATOM_LIMIT {
        return Err(TypeSpaceError::SizeLimit {
            atoms: atoms.len(),
            limit: EXHAUSTIVE_ATOM_LIMIT,
        });
    }
    let total = 3usize.pow(atoms.len() as u32);
    let mut out = Vec::new();
    for code in 0..total {
        let mut c = code;
        let mut lits = Vec::new();
        for atom in &atoms {
            match c % 3 {
                1 => lits.push((atom.clone(), true)),
                2 => lits.push((atom.clone(), false)),
                _ => {}
            }
            c /= 3;
        }
        let phi = FormulaLit::new(lits)?;
        if is_consistent(ts, &phi)? {
            out.push(phi);
        }
    }
    Ok(out)
}

/// Prime-model existence as absence of ni-formulas, by exhaustion over
/// [`consistent_formulas`].
pub fn has_prime_model_exhaustive(ts: &TypeSpace) -> Result<bool, TypeSpaceError> {
    for phi in consistent_formulas(ts)? {
        if classify_formula(ts, &phi)? == Classification::NiFormula {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Complete conjunctions over the atoms at `depth`, one per partition cell.
pub fn complete_formulas(ts: &TypeSpace, depth: usize) -> Vec<FormulaLit> {
    let atoms = atoms_at_depth(ts, depth);
    let decide = |truth: &dyn Fn(&Atom) -> bool| {
        FormulaLit::new(atoms.iter().map(|a| (a.clone(), truth(a))).collect())
            .expect("atoms are distinct")
    };
    match ts.family {
        Family::Iup => all_paths(depth)
            .into_iter()
            .map(|bits| decide(&|a| matches!(a, Atom::P(k) if bits[*k])))
            .collect(),
        Family::Sdup => (0..=depth)
            .flat_map(all_paths)
            .map(|node| decide(&|a| matches!(a, Atom::S(g) if is_prefix(g, &node))))
            .collect(),
        Family::Colored { m } => {
            let mut out = Vec::new();
            for i in 0..m {
                for color in (0..depth as u32).map(Some).chain(std::iter::once(None)) {
                    out.push(decide(&|a| match a {
                        Atom::Part(p) => *p == i,
                        Atom::Col(j) => color == Some(*j),
                        _ => false,
                    }));
                }
            }
            out
        }
    }
}

/// Whether every tuple realized in `spec` lies under a parameter set over
/// which each consistent one-variable formula is an i-formula.
///
/// In a unary signature a formula over parameters `b̄` either contains some
/// `x = b_i` (and then isolates `tp(b_i)` over `b̄`) or is `x ≠ b̄` together
/// with unary literals, whose isolated completions over `b̄` are exactly the
/// principal 1-types. The obligation is therefore the same for every tuple
/// of the spec, including the empty one, and is checked once against the
/// complete conjunctions at `depth`.
pub fn npl_zero_check(ts: &TypeSpace, spec: &ModelSpec, depth: usize) -> Result<bool, TypeSpaceError> {
    if spec.space.family != ts.family {
        return Err(TypeSpaceError::FamilyMismatch(
            spec.space.family.to_string(),
            ts.family.to_string(),
        ));
    }
    if depth == 0 || depth > ts.depth {
        return Err(TypeSpaceError::DepthLimit {
            depth,
            limit: ts.depth,
        });
    }
    for phi in complete_formulas(ts, depth) {
        if classify_formula(ts, &phi)? == Classification::NiFormula {
            return Ok(false);
        }
    }
    Ok(true)
}
