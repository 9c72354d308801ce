//! Countable models as realized-type specifications over a type space.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::fmt::Write as _;
use std::str::FromStr;

use thiserror::Error;

use crate::cardinal::{card_sum_all, Cardinal};
use crate::domination::DominationGraph;
use crate::report::Report;
use crate::syntax::ParseError;
use crate::typespace::{enumerate_types, is_dense, Base, DenseSet, Family, TypeId, TypeSpace, TypeSpaceError};

/// Default cap on explicit finite multiplicities; one more is `ω`.
pub const DEFAULT_COUNT_CAP: u32 = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error(transparent)]
    Space(#[from] TypeSpaceError),
    #[error("models live over different type spaces")]
    SpaceMismatch,
    #[error("operation needs the iup family, found {0}")]
    NotIup(String),
    #[error("count {count} exceeds the cap {cap}")]
    CountCap { count: u32, cap: u32 },
    #[error("no strictly {0} neighbor is representable")]
    NoStrictNeighbor(&'static str),
    #[error("cone data invalid: {0}")]
    InvalidCones(String),
    #[error("the sequence is not an elementary-submodel sequence at depth {0}")]
    NotElementary(usize),
    #[error("empty list of parts")]
    EmptyParts,
    #[error("sequence invalid: {0}")]
    InvalidSequence(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// Realization count of one type: finite up to the cap, or `ω`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Count {
    Fin(u32),
    Omega,
}

impl fmt::Display for Count {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Count::Fin(k) => write!(f, "{k}"),
            Count::Omega => f.write_str("w"),
        }
    }
}

impl FromStr for Count {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "w" => Ok(Count::Omega),
            t => t.parse().map(Count::Fin).map_err(|_| format!("`{s}` is not a count")),
        }
    }
}

/// A countable model given by how often each type is realized. Types not
/// listed in `counts` are realized once under base `all` and not at all
/// under base `none`; beyond the enumerated cells, base `all` also realizes
/// infinitely many further types that base `none` omits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelSpec {
    pub space: TypeSpace,
    pub base: Base,
    pub counts: BTreeMap<TypeId, Count>,
    pub cap: u32,
}

impl ModelSpec {
    pub fn new(space: TypeSpace, base: Base) -> Self {
        ModelSpec {
            space,
            base,
            counts: BTreeMap::new(),
            cap: DEFAULT_COUNT_CAP,
        }
    }

    fn default_count(&self) -> Count {
        match self.base {
            Base::All => Count::Fin(1),
            Base::None => Count::Fin(0),
        }
    }

    /// Records a count, dropping entries equal to the base default.
    pub fn set(&mut self, id: TypeId, count: Count) -> Result<(), ModelError> {
        self.space.check(&id)?;
        if let Count::Fin(k) = count {
            if k > self.cap {
                return Err(ModelError::CountCap { count: k, cap: self.cap });
            }
        }
        if count == self.default_count() {
            self.counts.remove(&id);
        } else {
            self.counts.insert(id, count);
        }
        Ok(())
    }

    pub fn count(&self, id: &TypeId) -> Count {
        self.counts.get(id).copied().unwrap_or(self.default_count())
    }

    fn cells(&self) -> Vec<TypeId> {
        enumerate_types(&self.space)
            .expect("model spaces stay within the enumeration limit")
            .into_iter()
            .map(|c| c.id)
            .collect()
    }

    /// Cells realized at least once.
    pub fn support(&self) -> BTreeSet<TypeId> {
        match self.base {
            Base::None => self
                .counts
                .iter()
                .filter(|(_, c)| **c != Count::Fin(0))
                .map(|(id, _)| id.clone())
                .collect(),
            Base::All => self
                .cells()
                .into_iter()
                .filter(|id| self.count(id) != Count::Fin(0))
                .collect(),
        }
    }

    pub fn as_dense_set(&self) -> DenseSet {
        let zero: BTreeSet<TypeId> = self
            .counts
            .iter()
            .filter(|(_, c)| **c == Count::Fin(0))
            .map(|(id, _)| id.clone())
            .collect();
        match self.base {
            Base::All => DenseSet {
                base: Base::All,
                added: BTreeSet::new(),
                removed: zero,
            },
            Base::None => DenseSet::explicit(self.support()),
        }
    }

    pub fn support_is_dense(&self) -> Result<bool, ModelError> {
        Ok(is_dense(&self.space, &self.as_dense_set(), self.space.depth)?)
    }

    pub fn to_text(&self) -> String {
        let mut out = self.space.to_text();
        let _ = writeln!(out, "base: {}", self.base);
        for (id, c) in &self.counts {
            match c {
                Count::Fin(0) => {
                    let _ = writeln!(out, "- {id}");
                }
                c => {
                    let _ = writeln!(out, "+ {id} {c}");
                }
            }
        }
        out
    }

    /// Type-space header, `base: all|none`, then `+ <cell> [count]` and
    /// `- <cell>` lines.
    pub fn parse(text: &str) -> Result<Self, ModelError> {
        const EDIT: &str = "`+ <cell> [count]` or `- <cell>`";
        let (space, rest) = TypeSpace::parse_header(text)?;
        let mut lines = rest.into_iter();
        let mut spec = match lines.next() {
            Some((ln, line)) => match line.split_once(':') {
                Some(("base", v)) => match v.trim() {
                    "all" => ModelSpec::new(space, Base::All),
                    "none" => ModelSpec::new(space, Base::None),
                    other => {
                        return Err(ParseError::new(ln, format!("unknown base `{other}`"), "`base: all|none`").into())
                    }
                },
                _ => return Err(ParseError::new(ln, format!("unexpected `{line}`"), "`base: all|none`").into()),
            },
            None => return Err(ParseError::new(1, "missing base line", "`base: all|none`").into()),
        };
        for (ln, line) in lines {
            let toks: Vec<&str> = line.split_whitespace().collect();
            let cell = |tok: &str| -> Result<TypeId, ModelError> {
                let id: TypeId = tok.parse().map_err(|e: TypeSpaceError| ParseError::new(ln, e.to_string(), EDIT))?;
                space
                    .check(&id)
                    .map_err(|e| ParseError::new(ln, e.to_string(), EDIT))?;
                Ok(id)
            };
            let (id, count) = match toks.as_slice() {
                ["+", c] => (cell(c)?, Count::Fin(1)),
                ["+", c, k] => (cell(c)?, k.parse().map_err(|e: String| ParseError::new(ln, e, EDIT))?),
                ["-", c] => (cell(c)?, Count::Fin(0)),
                _ => return Err(ParseError::new(ln, format!("unexpected `{line}`"), EDIT).into()),
            };
            spec.set(id, count)
                .map_err(|e| ParseError::new(ln, e.to_string(), EDIT))?;
        }
        Ok(spec)
    }
}

/// Generalized domination of countable models. Over `Iup` it compares
/// realization counts pointwise, implicit types included; elsewhere it is
/// inclusion of realized types.
pub fn cm_dominates(m1: &ModelSpec, m2: &ModelSpec) -> Result<bool, ModelError> {
    if m1.space != m2.space {
        return Err(ModelError::SpaceMismatch);
    }
    if m1.space.family == Family::Iup {
        if m1.base == Base::All && m2.base == Base::None {
            return Ok(false);
        }
        let cells: BTreeSet<TypeId> = match (m1.base, m2.base) {
            (Base::None, Base::None) => m1.counts.keys().chain(m2.counts.keys()).cloned().collect(),
            _ => m1.cells().into_iter().collect(),
        };
        Ok(cells.iter().all(|id| m1.count(id) <= m2.count(id)))
    } else {
        Ok(m1.support().is_subset(&m2.support()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Down,
    Up,
}

fn bump(c: Count, cap: u32) -> Option<Count> {
    match c {
        Count::Fin(k) if k >= cap => Some(Count::Omega),
        Count::Fin(k) => Some(Count::Fin(k + 1)),
        Count::Omega => None,
    }
}

fn drop_one(c: Count, cap: u32) -> Option<Count> {
    match c {
        Count::Fin(0) => None,
        Count::Fin(k) => Some(Count::Fin(k - 1)),
        Count::Omega => Some(Count::Fin(cap)),
    }
}

/// A strictly dominated (down) or strictly dominating (up) Iup model whose
/// support stays dense.
pub fn perturb(m: &ModelSpec, direction: Direction) -> Result<ModelSpec, ModelError> {
    if m.space.family != Family::Iup {
        return Err(ModelError::NotIup(m.space.family.to_string()));
    }
    let mut out = m.clone();
    match direction {
        Direction::Up => {
            let target = match m.base {
                Base::All => m.cells().into_iter().find(|id| m.count(id) != Count::Omega),
                Base::None => m.support().into_iter().find(|id| m.count(id) != Count::Omega),
            }
            .ok_or(ModelError::NoStrictNeighbor("larger"))?;
            let c = bump(m.count(&target), m.cap).expect("count below omega");
            out.set(target, c)?;
        }
        Direction::Down => {
            let min = match m.base {
                Base::All => Count::Fin(1),
                Base::None => Count::Fin(2),
            };
            if let Some((id, c)) = m.counts.iter().find(|(_, c)| **c >= min) {
                out.set(id.clone(), drop_one(*c, m.cap).expect("positive count"))?;
            } else {
                let candidates: Vec<TypeId> = m.support().into_iter().collect();
                let mut found = false;
                for id in candidates {
                    let mut trial = m.clone();
                    trial.set(id, Count::Fin(0))?;
                    if trial.support_is_dense()? {
                        out = trial;
                        found = true;
                        break;
                    }
                }
                if !found {
                    return Err(ModelError::NoStrictNeighbor("smaller"));
                }
            }
        }
    }
    Ok(out)
}

/// Non-principal types `q_0 ≤_RK q_1 ≤_RK …`, each step backed by a named
/// domination witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RkSequence {
    pub entries: Vec<TypeId>,
    pub witnesses: Vec<String>,
}

impl RkSequence {
    pub fn new(entries: Vec<TypeId>, witnesses: Vec<String>) -> Self {
        RkSequence { entries, witnesses }
    }

    /// Checks the sequence against a domination graph whose node ids are the
    /// entries' addresses.
    pub fn validate(&self, g: &DominationGraph) -> Result<(), ModelError> {
        let bad = |s: String| Err(ModelError::InvalidSequence(s));
        if self.entries.is_empty() {
            return bad("no entries".into());
        }
        if self.witnesses.len() + 1 != self.entries.len() {
            return bad(format!(
                "{} entries need {} witnesses, got {}",
                self.entries.len(),
                self.entries.len() - 1,
                self.witnesses.len()
            ));
        }
        for e in &self.entries {
            match g.node(&e.to_string()) {
                None => return bad(format!("`{e}` is not in the domination graph")),
                Some(n) if n.principal => return bad(format!("`{e}` is principal")),
                Some(_) => {}
            }
        }
        for (i, w) in self.witnesses.iter().enumerate() {
            let p = self.entries[i].to_string();
            let q = self.entries[i + 1].to_string();
            if !g.has_edge_labeled(&q, &p, w) {
                return bad(format!("no witness `{w}` for {p} <= {q}"));
            }
        }
        Ok(())
    }
}

fn cone_union(ts: &TypeSpace, q: &RkSequence, cones: &[Vec<TypeId>]) -> Result<BTreeSet<TypeId>, ModelError> {
    if cones.len() != q.entries.len() {
        return Err(ModelError::InvalidCones(format!(
            "{} cones for {} entries",
            cones.len(),
            q.entries.len()
        )));
    }
    let mut union = BTreeSet::new();
    for (entry, cone) in q.entries.iter().zip(cones) {
        ts.check(entry)?;
        for id in cone {
            ts.check(id)?;
        }
        if !cone.contains(entry) {
            return Err(ModelError::InvalidCones(format!("cone of `{entry}` does not contain it")));
        }
        union.extend(cone.iter().cloned());
    }
    Ok(union)
}

/// Whether every consistent formula at `depth` lies in a type dominated by
/// some entry, i.e. the union of the supplied lower cones is dense. The
/// extension clause for `∃x ψ(x, ȳ)` is vacuous here because the represented
/// fragment has no quantified formulas.
pub fn is_elementary_submodel_sequence(
    ts: &TypeSpace,
    q: &RkSequence,
    cones: &[Vec<TypeId>],
    depth: usize,
) -> Result<bool, ModelError> {
    let union = cone_union(ts, q, cones)?;
    Ok(is_dense(ts, &DenseSet::explicit(union), depth)?)
}

/// [`is_elementary_submodel_sequence`] as a report that also records the
/// vacuous extension clause.
pub fn elementary_submodel_report(
    ts: &TypeSpace,
    q: &RkSequence,
    cones: &[Vec<TypeId>],
    depth: usize,
) -> Result<Report, ModelError> {
    let union = cone_union(ts, q, cones)?;
    let dense = is_dense(ts, &DenseSet::explicit(union.clone()), depth)?;
    let mut r = Report::new("elementary submodel sequence");
    r.param("depth", depth);
    r.param("entries", q.entries.len());
    r.param("dominated_cells", union.len());
    r.check(
        "formula-coverage",
        dense,
        if dense {
            "every consistent formula lies in a dominated type".to_string()
        } else {
            "some consistent formula avoids every dominated type".to_string()
        },
    );
    r.pass(
        "extension-clause",
        "vacuous: literal conjunctions carry no existential subformulas",
    );
    Ok(r)
}

/// Builds the model universe from dominated cells: formulas (the depth-level
/// cells) are served round-robin, and each visit realizes the next dominated
/// cell inside that formula, until every dominated cell has a realization.
pub fn construct_model(
    ts: &TypeSpace,
    q: &RkSequence,
    cones: &[Vec<TypeId>],
    depth: usize,
) -> Result<ModelSpec, ModelError> {
    if !is_elementary_submodel_sequence(ts, q, cones, depth)? {
        return Err(ModelError::NotElementary(depth));
    }
    let union = cone_union(ts, q, cones)?;
    let mut slots: BTreeMap<TypeId, Vec<TypeId>> = BTreeMap::new();
    for id in &union {
        slots.entry(project(id, depth)).or_default().push(id.clone());
    }
    let rounds = slots.values().map(Vec::len).max().unwrap_or(0);
    let mut model = ModelSpec::new(*ts, Base::None);
    for round in 0..rounds {
        for cells in slots.values() {
            let id = &cells[round % cells.len()];
            let next = bump(model.count(id), model.cap).unwrap_or(Count::Omega);
            model.set(id.clone(), next)?;
        }
    }
    Ok(model)
}

/// Address of the depth-`depth` formula a cell falls under.
fn project(id: &TypeId, depth: usize) -> TypeId {
    match id {
        TypeId::Iup(bits) => TypeId::Iup(bits[..depth.min(bits.len())].to_vec()),
        TypeId::Sdup { path, stopped } => TypeId::Sdup {
            path: path[..depth.min(path.len())].to_vec(),
            stopped: *stopped && path.len() < depth,
        },
        TypeId::Colored { part, color } => TypeId::Colored {
            part: *part,
            color: match color {
                crate::typespace::Color::Fin(j) if (*j as usize) < depth => *color,
                _ => crate::typespace::Color::Inf,
            },
        },
    }
}

/// Summands `I_q` of the model count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IqParts {
    Listed(Vec<Cardinal>),
    /// Continuum many summands, each at least one.
    ContinuumMany,
}

/// Sums the parts and reports whether the total is the continuum.
pub fn sum_iq(parts: &IqParts) -> Result<(Cardinal, bool), ModelError> {
    let total = match parts {
        IqParts::Listed(xs) if xs.is_empty() => return Err(ModelError::EmptyParts),
        IqParts::Listed(xs) => card_sum_all(xs.iter().copied()),
        IqParts::ContinuumMany => Cardinal::Continuum,
    };
    Ok((total, total == Cardinal::Continuum))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iup_cells(d: usize) -> Vec<TypeId> {
        enumerate_types(&TypeSpace::iup(d)).unwrap().into_iter().map(|c| c.id).collect()
    }

    #[test]
    fn pointwise_domination() {
        let ts = TypeSpace::iup(2);
        let cells = iup_cells(2);
        let ones = ModelSpec::new(ts, Base::All);
        let mut twos = ones.clone();
        twos.set(cells[0].clone(), Count::Fin(2)).unwrap();
        assert!(cm_dominates(&ones, &twos).unwrap());
        assert!(!cm_dominates(&twos, &ones).unwrap());
        assert!(cm_dominates(&ones, &ones).unwrap());

        let mut a = ModelSpec::new(ts, Base::None);
        let mut b = ModelSpec::new(ts, Base::None);
        a.set(cells[0].clone(), Count::Fin(1)).unwrap();
        b.set(cells[1].clone(), Count::Fin(1)).unwrap();
        assert!(!cm_dominates(&a, &b).unwrap());
        assert!(!cm_dominates(&b, &a).unwrap());

        assert_eq!(
            cm_dominates(&a, &ModelSpec::new(TypeSpace::iup(3), Base::None)),
            Err(ModelError::SpaceMismatch)
        );
    }

    #[test]
    fn support_domination_elsewhere() {
        let ts = TypeSpace::sdup(1);
        let mut a = ModelSpec::new(ts, Base::None);
        a.set("stop()".parse().unwrap(), Count::Fin(3)).unwrap();
        let b = ModelSpec::new(ts, Base::All);
        assert!(cm_dominates(&a, &b).unwrap());
        assert!(!cm_dominates(&b, &a).unwrap());
    }

    #[test]
    fn perturbations() {
        let ts = TypeSpace::iup(3);
        let base = ModelSpec::new(ts, Base::All);
        let up = perturb(&base, Direction::Up).unwrap();
        assert_eq!(up.counts.len(), 1);
        assert!(cm_dominates(&base, &up).unwrap() && !cm_dominates(&up, &base).unwrap());
        assert_eq!(perturb(&up, Direction::Down).unwrap(), base);

        let down = perturb(&base, Direction::Down).unwrap();
        let down2 = perturb(&down, Direction::Down).unwrap();
        assert_eq!(down2.counts.values().filter(|c| **c == Count::Fin(0)).count(), 2);
        assert!(down2.support_is_dense().unwrap());
        assert!(cm_dominates(&down2, &down).unwrap() && !cm_dominates(&down, &down2).unwrap());

        let mut minimal = ModelSpec::new(ts, Base::None);
        for id in iup_cells(3) {
            minimal.set(id, Count::Fin(1)).unwrap();
        }
        assert_eq!(
            perturb(&minimal, Direction::Down),
            Err(ModelError::NoStrictNeighbor("smaller"))
        );
        assert!(matches!(
            perturb(&ModelSpec::new(TypeSpace::sdup(2), Base::All), Direction::Up),
            Err(ModelError::NotIup(_))
        ));
    }

    #[test]
    fn omega_counts() {
        let ts = TypeSpace::iup(1);
        let mut m = ModelSpec::new(ts, Base::All);
        let id = iup_cells(1)[0].clone();
        m.set(id.clone(), Count::Fin(DEFAULT_COUNT_CAP)).unwrap();
        let up = perturb(&m, Direction::Up).unwrap();
        assert_eq!(up.count(&id), Count::Omega);
        assert!(m.clone().set(id, Count::Fin(DEFAULT_COUNT_CAP + 1)).is_err());
    }

    #[test]
    fn elementary_sequences() {
        let ts = TypeSpace::iup(2);
        let cells = iup_cells(2);
        let seq = RkSequence::new(vec![cells[0].clone(), cells[2].clone()], vec!["w".into()]);
        let halves = vec![cells[..2].to_vec(), cells[2..].to_vec()];
        assert!(is_elementary_submodel_sequence(&ts, &seq, &halves, 2).unwrap());
        let m = construct_model(&ts, &seq, &halves, 2).unwrap();
        assert_eq!(m.support(), cells.iter().cloned().collect());
        assert!(m.counts.values().all(|c| *c >= Count::Fin(1)));

        let lower = vec![vec![cells[0].clone()], vec![cells[0].clone(), cells[1].clone(), cells[2].clone()]];
        assert!(!is_elementary_submodel_sequence(&ts, &seq, &lower, 2).unwrap());
        assert_eq!(construct_model(&ts, &seq, &lower, 2), Err(ModelError::NotElementary(2)));
        assert!(is_elementary_submodel_sequence(&ts, &seq, &lower, 1).unwrap());

        let single = RkSequence::new(vec![cells[1].clone()], vec![]);
        assert!(is_elementary_submodel_sequence(&ts, &single, &[cells.clone()], 2).unwrap());
        assert!(matches!(
            is_elementary_submodel_sequence(&ts, &single, &[vec![cells[0].clone()]], 2),
            Err(ModelError::InvalidCones(_))
        ));
        let r = elementary_submodel_report(&ts, &single, &[cells.clone()], 2).unwrap();
        assert!(r.all_passed());
    }

    #[test]
    fn sequence_validation() {
        let g = DominationGraph::parse("type 00\ntype 01\n01 dominates 00 via phi\n").unwrap();
        let ok = RkSequence::new(vec!["00".parse().unwrap(), "01".parse().unwrap()], vec!["phi".into()]);
        ok.validate(&g).unwrap();
        let wrong = RkSequence::new(vec!["01".parse().unwrap(), "00".parse().unwrap()], vec!["phi".into()]);
        assert!(wrong.validate(&g).is_err());
    }

    #[test]
    fn iq_sums() {
        use Cardinal::*;
        assert_eq!(sum_iq(&IqParts::Listed(vec![Fin(1), Continuum])), Ok((Continuum, true)));
        assert_eq!(sum_iq(&IqParts::Listed(vec![Fin(1), Fin(1)])), Ok((Fin(2), false)));
        assert_eq!(sum_iq(&IqParts::ContinuumMany), Ok((Continuum, true)));
        assert_eq!(sum_iq(&IqParts::Listed(vec![])), Err(ModelError::EmptyParts));
    }

    #[test]
    fn text_round_trip() {
        let ts = TypeSpace::iup(2);
        let mut m = ModelSpec::new(ts, Base::All);
        let cells = iup_cells(2);
        m.set(cells[0].clone(), Count::Fin(0)).unwrap();
        m.set(cells[1].clone(), Count::Omega).unwrap();
        m.set(cells[2].clone(), Count::Fin(3)).unwrap();
        assert_eq!(ModelSpec::parse(&m.to_text()).unwrap(), m);
        let err = ModelSpec::parse("family: iup\ndepth: 2\nbase: all\n+ 011\n").unwrap_err();
        assert!(matches!(err, ModelError::Parse(ParseError { line: 4, .. })));
    }
}
