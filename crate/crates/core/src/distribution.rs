//! Distribution triples of countable models, decomposition sums, admissible
//! limit-count functions and blueprint builders that realize them through
//! the operator pipeline.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};
use std::str::FromStr;

use thiserror::Error;

use crate::cardinal::{card_sum, card_sum_all, Cardinal};
use crate::domination::{limit_exists_over, DominationError, DominationGraph, RealizationDigraph};
use crate::limitcount::{IdentitySystem, PlateauReading};
use crate::operators::{self, replay_checked, sequence_key, type_name, OperatorError, Pipeline, Step};
use crate::preorder::{parse_le_line, Preorder, QuotientPoset};
use crate::report::Report;
use crate::syntax::{content_lines, key_value, parse_usize, ParseError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DistributionError {
    #[error("malformed specification: {0}")]
    Malformed(String),
    #[error("validation failed: {}", .0.join(", "))]
    Invalid(Vec<String>),
    #[error("this variant needs a P/NPL partition")]
    PartitionMissing,
    #[error("this variant makes every element prime; partitioned specs need p-first or npl-first")]
    PartitionUnused,
    #[error("the variant does not match the specification mode")]
    ModeMismatch,
    #[error("parameter out of range: {0}")]
    ParamRange(String),
    #[error(transparent)]
    Operator(#[from] OperatorError),
    #[error(transparent)]
    Domination(#[from] DominationError),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// Numbers of prime-over-tuple, limit, and remaining countable models.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Cm3Triple {
    pub p: Cardinal,
    pub l: Cardinal,
    pub npl: Cardinal,
}

impl Cm3Triple {
    pub fn new(p: Cardinal, l: Cardinal, npl: Cardinal) -> Self {
        Cm3Triple { p, l, npl }
    }
}

impl fmt::Display for Cm3Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.p, self.l, self.npl)
    }
}

impl FromStr for Cm3Triple {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
        let parts: Vec<&str> = inner.split(',').collect();
        if parts.len() != 3 {
            return Err(format!("`{s}` is not a triple `p,l,npl`"));
        }
        let c = |t: &str| t.parse::<Cardinal>().map_err(|e| e.to_string());
        Ok(Cm3Triple::new(c(parts[0])?, c(parts[1])?, c(parts[2])?))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TheoryClass {
    Small,
    Tc,
}

impl fmt::Display for TheoryClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TheoryClass::Small => "small",
            TheoryClass::Tc => "tc",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SmallCase {
    /// `(1,0,0)`: countably categorical.
    Categorical,
    /// `(λ₁,λ₂,0)` with `2 ≤ λ₁ ≤ ω` and `λ₂ ≥ 1`.
    NonCategorical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reason {
    /// A small theory with non-prime, non-limit models.
    SmallNplNonzero,
    /// A small theory whose prime count is outside `2..=ω` (and not `(1,0,0)`).
    SmallPrimeRange,
    /// A small, non-categorical theory without limit models.
    SmallLimitZero,
    /// No coordinate equals `2^ω`.
    NoContinuumCoordinate,
    /// `(λ₁, 2^ω, λ₃)` with `λ₁, λ₃ < 2^ω`.
    ContinuumLimitsOnly,
    /// `(2^ω, λ₂, λ₃)` with `λ₂, λ₃ < 2^ω`.
    ContinuumPrimesOnly,
    /// No prime models but some limit models.
    PrimeZeroLimitNonzero,
    /// A coordinate outside `ω ∪ {ω, 2^ω}`.
    OutsideValueSet,
}

impl Reason {
    pub fn code(self) -> &'static str {
        match self {
            Reason::SmallNplNonzero => "small-npl-nonzero",
            Reason::SmallPrimeRange => "small-prime-range",
            Reason::SmallLimitZero => "small-limit-zero",
            Reason::NoContinuumCoordinate => "no-continuum-coordinate",
            Reason::ContinuumLimitsOnly => "continuum-limits-only",
            Reason::ContinuumPrimesOnly => "continuum-primes-only",
            Reason::PrimeZeroLimitNonzero => "prime-zero-limit-nonzero",
            Reason::OutsideValueSet => "outside-value-set",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    AdmissibleSmall(SmallCase),
    AdmissibleTc(u8),
    Inadmissible(Reason),
}

impl Verdict {
    pub fn is_admissible(self) -> bool {
        !matches!(self, Verdict::Inadmissible(_))
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::AdmissibleSmall(SmallCase::Categorical) => f.write_str("AdmissibleSmall case 1"),
            Verdict::AdmissibleSmall(SmallCase::NonCategorical) => f.write_str("AdmissibleSmall case 2"),
            Verdict::AdmissibleTc(k) => write!(f, "AdmissibleTc family {k}"),
            Verdict::Inadmissible(r) => write!(f, "Inadmissible {}", r.code()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub verdict: Verdict,
    /// Every family matched; `(2^ω,2^ω,2^ω)` lies in families 1 and 3.
    pub families: Vec<u8>,
    /// An `ω₁` coordinate was classified without the continuum hypothesis.
    pub outside_ch: bool,
    /// Admissible but with no known realization (`λ₂ = ω₁` for small theories).
    pub unrealized: bool,
}

/// One family of admissible triples for theories with continuum many types.
pub struct TcFamily {
    pub id: u8,
    pub pattern: &'static str,
    pub matches: fn(&Cm3Triple, bool) -> bool,
}

fn in_value_set(x: Cardinal) -> bool {
    matches!(x, Cardinal::Fin(_) | Cardinal::Omega | Cardinal::Continuum)
}

/// `ω₁` is admitted for the limit count only when the continuum hypothesis
/// is off; the classification then carries `outside_ch`.
fn in_limit_value_set(x: Cardinal, ch: bool) -> bool {
    in_value_set(x) || (!ch && x == Cardinal::Omega1)
}

pub const TC_FAMILIES: [TcFamily; 3] = [
    TcFamily {
        id: 1,
        pattern: "(c,c,l) with l in w+{w,c}",
        matches: |t, _| t.p == Cardinal::Continuum && t.l == Cardinal::Continuum && in_value_set(t.npl),
    },
    TcFamily {
        id: 2,
        pattern: "(0,0,c)",
        matches: |t, _| t.p == Cardinal::ZERO && t.l == Cardinal::ZERO && t.npl == Cardinal::Continuum,
    },
    TcFamily {
        id: 3,
        pattern: "(l1,l2,c) with l1 >= 1 and l1, l2 in w+{w,c}",
        matches: |t, ch| {
            !t.p.is_zero() && in_value_set(t.p) && in_limit_value_set(t.l, ch) && t.npl == Cardinal::Continuum
        },
    },
];

fn normalize(x: Cardinal, ch: bool) -> Cardinal {
    if ch && x == Cardinal::Omega1 {
        Cardinal::Continuum
    } else {
        x
    }
}

pub fn classify_triple(t: Cm3Triple, class: TheoryClass, ch: bool) -> Classification {
    let outside_ch = !ch && [t.p, t.l, t.npl].contains(&Cardinal::Omega1);
    match class {
        TheoryClass::Small => {
            let verdict = if t == Cm3Triple::new(Cardinal::ONE, Cardinal::ZERO, Cardinal::ZERO) {
                Verdict::AdmissibleSmall(SmallCase::Categorical)
            } else if !t.npl.is_zero() {
                Verdict::Inadmissible(Reason::SmallNplNonzero)
            } else if !matches!(t.p, Cardinal::Fin(2..) | Cardinal::Omega) {
                Verdict::Inadmissible(Reason::SmallPrimeRange)
            } else if t.l.is_zero() {
                Verdict::Inadmissible(Reason::SmallLimitZero)
            } else {
                Verdict::AdmissibleSmall(SmallCase::NonCategorical)
            };
            let unrealized = verdict.is_admissible() && t.l == Cardinal::Omega1 && !ch;
            Classification { verdict, families: Vec::new(), outside_ch, unrealized }
        }
        TheoryClass::Tc => {
            let n = Cm3Triple::new(normalize(t.p, ch), normalize(t.l, ch), normalize(t.npl, ch));
            let c = Cardinal::Continuum;
            let families: Vec<u8> = TC_FAMILIES.iter().filter(|f| (f.matches)(&n, ch)).map(|f| f.id).collect();
            let verdict = if ![n.p, n.l, n.npl].contains(&c) {
                Verdict::Inadmissible(Reason::NoContinuumCoordinate)
            } else if n.l == c && n.p != c && n.npl != c {
                Verdict::Inadmissible(Reason::ContinuumLimitsOnly)
            } else if n.p == c && n.l != c && n.npl != c {
                Verdict::Inadmissible(Reason::ContinuumPrimesOnly)
            } else if let Some(&first) = families.first() {
                Verdict::AdmissibleTc(first)
            } else if n.p.is_zero() && !n.l.is_zero() {
                Verdict::Inadmissible(Reason::PrimeZeroLimitNonzero)
            } else {
                Verdict::Inadmissible(Reason::OutsideValueSet)
            };
            Classification { verdict, families, outside_ch, unrealized: false }
        }
    }
}

/// `|RK| + Σ IL + NPL`.
pub fn decompose(rk: Cardinal, il: &[Cardinal], npl: Cardinal) -> Cardinal {
    card_sum(card_sum(rk, card_sum_all(il.iter().copied())), npl)
}

/// The decomposition together with the check that it equals `2^ω`, which
/// every theory with continuum many types must satisfy.
pub fn decompose_tc(rk: Cardinal, il: &[Cardinal], npl: Cardinal) -> (Cardinal, bool) {
    let total = decompose(rk, il, npl);
    (total, total == Cardinal::Continuum)
}

/// Uniform choice of principal formulas over uncountably many types forces
/// continuum many prime models. Returns `None` unless both flags hold.
pub fn uniform_choice_rule(uncountably_many: bool, uniform_choice: bool) -> Option<Cardinal> {
    (uncountably_many && uniform_choice).then_some(Cardinal::Continuum)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// `f` is given on `~`-classes.
    Finite,
    /// `f` is given on eventually periodic `≤`-chains.
    Sequence,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Part {
    P,
    Npl,
}

/// Eventually periodic sequence `prefix · cycle^ω` of elements.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Lasso {
    pub prefix: Vec<usize>,
    pub cycle: Vec<usize>,
}

impl Lasso {
    pub fn new(prefix: Vec<usize>, cycle: Vec<usize>) -> Result<Self, DistributionError> {
        if cycle.is_empty() {
            return Err(DistributionError::Malformed("a sequence needs a nonempty cycle".into()));
        }
        Ok(Lasso { prefix, cycle })
    }

    pub fn constant(x: usize) -> Self {
        Lasso { prefix: Vec::new(), cycle: vec![x] }
    }

    fn at(&self, i: usize) -> usize {
        if i < self.prefix.len() {
            self.prefix[i]
        } else {
            self.cycle[(i - self.prefix.len()) % self.cycle.len()]
        }
    }

    fn norm(&self, i: usize) -> usize {
        if i < self.prefix.len() {
            i
        } else {
            self.prefix.len() + (i - self.prefix.len()) % self.cycle.len()
        }
    }

    /// Number of listed positions, the length of the finite part.
    pub fn listed_len(&self) -> usize {
        self.prefix.len() + self.cycle.len()
    }

    pub fn elements(&self) -> BTreeSet<usize> {
        self.prefix.iter().chain(&self.cycle).copied().collect()
    }

    /// Whether some cofinite part consists of equal elements.
    pub fn eventually_constant(&self) -> bool {
        self.cycle.iter().all(|&x| x == self.cycle[0])
    }

    pub fn is_chain(&self, x: &Preorder) -> bool {
        let n = self.listed_len();
        (0..n).all(|i| x.le(self.at(i), self.at(i + 1)))
    }

    /// Canonical form of the periodic tail: least rotation of the primitive
    /// root of the cycle.
    pub fn tail(&self) -> Vec<usize> {
        let c = &self.cycle;
        let root = (1..=c.len())
            .find(|&p| c.len().is_multiple_of(p) && (0..c.len()).all(|i| c[i] == c[i % p]))
            .unwrap_or(c.len());
        let r = &c[..root];
        (0..root)
            .map(|s| r[s..].iter().chain(&r[..s]).copied().collect::<Vec<_>>())
            .min()
            .unwrap_or_default()
    }

    /// Whether the two sequences agree after shifting each by some amount.
    pub fn same_tail(&self, other: &Lasso) -> bool {
        self.tail() == other.tail()
    }

    /// Whether `sub` embeds into `self` as an infinite subsequence. Greedy
    /// leftmost matching over the finitely many lasso positions.
    pub fn has_subsequence(&self, sub: &Lasso) -> bool {
        let mut seen = BTreeSet::new();
        let (mut pos, mut i) = (0usize, 0usize);
        loop {
            if !seen.insert((self.norm(pos), sub.norm(i))) {
                return true;
            }
            let letter = sub.at(i);
            let limit = pos + self.listed_len();
            let Some(p) = (pos..=limit).find(|&p| self.at(p) == letter) else {
                return false;
            };
            pos = self.norm(p + 1);
            i = sub.norm(i + 1);
        }
    }
}

impl fmt::Display for Lasso {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for x in &self.prefix {
            write!(f, "{x} ")?;
        }
        let c: Vec<String> = self.cycle.iter().map(usize::to_string).collect();
        write!(f, "[{}]", c.join(" "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedSequence {
    pub name: String,
    pub seq: Lasso,
    pub value: Cardinal,
}

/// A preorder together with the requested limit-model counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistributionSpec {
    pub x: Preorder,
    pub theory: TheoryClass,
    pub mode: Mode,
    /// `f` on classes, keyed by any member; unlisted classes map to 0.
    pub f_classes: BTreeMap<usize, Cardinal>,
    pub f_sequences: Vec<NamedSequence>,
    pub partition: Option<Vec<Part>>,
    /// The preorder is a finite truncation of a countable one that grows
    /// uniformly.
    pub extendable: bool,
    pub target: Option<Cm3Triple>,
}

impl DistributionSpec {
    pub fn finite(x: Preorder, theory: TheoryClass) -> Self {
        DistributionSpec {
            x: x.close(),
            theory,
            mode: Mode::Finite,
            f_classes: BTreeMap::new(),
            f_sequences: Vec::new(),
            partition: None,
            extendable: false,
            target: None,
        }
    }

    pub fn sequences(x: Preorder, theory: TheoryClass) -> Self {
        DistributionSpec { mode: Mode::Sequence, ..DistributionSpec::finite(x, theory) }
    }

    pub fn quotient(&self) -> QuotientPoset {
        self.x.sim_quotient().expect("the preorder is kept closed")
    }

    /// `f` of the class with index `class` in [`Self::quotient`].
    pub fn class_value(&self, q: &QuotientPoset, class: usize) -> Cardinal {
        q.classes[class]
            .iter()
            .find_map(|e| self.f_classes.get(e).copied())
            .unwrap_or(Cardinal::ZERO)
    }

    fn check_well_formed(&self) -> Result<(), DistributionError> {
        let n = self.x.len();
        let q = self.quotient();
        if self.mode == Mode::Finite && !self.f_sequences.is_empty() {
            return Err(DistributionError::Malformed("sequence values in finite mode".into()));
        }
        if self.mode == Mode::Sequence && !self.f_classes.is_empty() {
            return Err(DistributionError::Malformed("class values in sequence mode".into()));
        }
        let mut per_class: BTreeMap<usize, Cardinal> = BTreeMap::new();
        for (&e, &v) in &self.f_classes {
            if e >= n {
                return Err(DistributionError::Malformed(format!("element {e} outside 0..{n}")));
            }
            if let Some(prev) = per_class.insert(q.class_of[e], v) {
                if prev != v {
                    return Err(DistributionError::Malformed(format!("class of {e} has two values")));
                }
            }
        }
        let mut names = BTreeSet::new();
        for s in &self.f_sequences {
            if !names.insert(s.name.as_str()) {
                return Err(DistributionError::Malformed(format!("sequence `{}` defined twice", s.name)));
            }
            if s.seq.cycle.is_empty() || s.seq.elements().iter().any(|&e| e >= n) {
                return Err(DistributionError::Malformed(format!("sequence `{}` is out of range", s.name)));
            }
            if !s.seq.is_chain(&self.x) {
                return Err(DistributionError::Malformed(format!("sequence `{}` is not a chain", s.name)));
            }
        }
        if let Some(p) = &self.partition {
            if p.len() != n {
                return Err(DistributionError::Malformed("partition does not cover every element".into()));
            }
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "theory: {}", self.theory);
        let _ = writeln!(
            out,
            "mode: {}",
            match self.mode {
                Mode::Finite => "finite",
                Mode::Sequence => "sequence",
            }
        );
        if self.extendable {
            out.push_str("extendable: true\n");
        }
        if let Some(t) = self.target {
            let _ = writeln!(out, "target: {},{},{}", t.p, t.l, t.npl);
        }
        out.push_str(&self.x.to_text());
        for (e, v) in &self.f_classes {
            let _ = writeln!(out, "f: {e} = {v}");
        }
        for s in &self.f_sequences {
            let _ = writeln!(out, "f: {} {} = {}", s.name, s.seq, s.value);
        }
        if let Some(p) = &self.partition {
            for (part, label) in [(Part::P, "P"), (Part::Npl, "NPL")] {
                let members: Vec<String> =
                    (0..p.len()).filter(|&i| p[i] == part).map(|i| i.to_string()).collect();
                let _ = writeln!(out, "partition: {label} {}", members.join(" "));
            }
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self, DistributionError> {
        const HEADER: &str = "`theory:`, `mode:`, `extendable:`, `target:`, `elements:`, `i <= j`, `f:` or `partition:`";
        let mut theory = TheoryClass::Tc;
        let mut mode = Mode::Finite;
        let mut extendable = false;
        let mut target = None;
        let mut x: Option<Preorder> = None;
        let mut f_classes = BTreeMap::new();
        let mut f_sequences = Vec::new();
        let mut partition: Option<Vec<Option<Part>>> = None;
        for (ln, line) in content_lines(text) {
            match key_value(line) {
                Some(("theory", v)) => {
                    theory = match v {
                        "small" => TheoryClass::Small,
                        "tc" => TheoryClass::Tc,
                        _ => return Err(ParseError::new(ln, format!("unknown class `{v}`"), "`theory: small|tc`").into()),
                    }
                }
                Some(("mode", v)) => {
                    mode = match v {
                        "finite" => Mode::Finite,
                        "sequence" => Mode::Sequence,
                        _ => {
                            return Err(ParseError::new(ln, format!("unknown mode `{v}`"), "`mode: finite|sequence`").into())
                        }
                    }
                }
                Some(("extendable", v)) => {
                    extendable = match v {
                        "true" => true,
                        "false" => false,
                        _ => return Err(ParseError::new(ln, format!("`{v}`"), "`extendable: true|false`").into()),
                    }
                }
                Some(("target", v)) => {
                    target = Some(
                        v.parse::<Cm3Triple>()
                            .map_err(|e| ParseError::new(ln, e, "`target: <p>,<l>,<npl>`"))?,
                    )
                }
                Some(("elements", v)) => {
                    if x.is_some() {
                        return Err(ParseError::new(ln, "second `elements:` line", HEADER).into());
                    }
                    x = Some(Preorder::empty(parse_usize(ln, v, "`elements: <k>`")?));
                }
                Some(("f", v)) => {
                    const F: &str = "`f: <element> = <cardinal>` or `f: <name> <prefix> [<cycle>] = <cardinal>`";
                    let (lhs, rhs) = v
                        .rsplit_once('=')
                        .ok_or_else(|| ParseError::new(ln, "missing `=`", F))?;
                    let value = rhs
                        .trim()
                        .parse::<Cardinal>()
                        .map_err(|e| ParseError::new(ln, e.to_string(), F))?;
                    if lhs.contains('[') {
                        let (name, seq) = lhs
                            .trim()
                            .split_once(char::is_whitespace)
                            .ok_or_else(|| ParseError::new(ln, "missing sequence name", F))?;
                        let (pre, cyc) = seq
                            .split_once('[')
                            .and_then(|(p, c)| c.trim().strip_suffix(']').map(|c| (p, c)))
                            .ok_or_else(|| ParseError::new(ln, "unbalanced `[`", F))?;
                        let nums = |s: &str| {
                            s.split_whitespace()
                                .map(|t| parse_usize(ln, t, F))
                                .collect::<Result<Vec<_>, _>>()
                        };
                        let cycle = nums(cyc)?;
                        if cycle.is_empty() {
                            return Err(ParseError::new(ln, "empty cycle", F).into());
                        }
                        f_sequences.push(NamedSequence {
                            name: name.to_string(),
                            seq: Lasso { prefix: nums(pre)?, cycle },
                            value,
                        });
                    } else {
                        let e = parse_usize(ln, lhs, F)?;
                        if f_classes.insert(e, value).is_some() {
                            return Err(ParseError::new(ln, format!("element {e} given twice"), F).into());
                        }
                    }
                }
                Some(("partition", v)) => {
                    const PART: &str = "`partition: P|NPL <elements>`";
                    let n = x
                        .as_ref()
                        .ok_or_else(|| ParseError::new(ln, "partition before `elements:`", PART))?
                        .len();
                    let mut toks = v.split_whitespace();
                    let part = match toks.next() {
                        Some("P") => Part::P,
                        Some("NPL") => Part::Npl,
                        _ => return Err(ParseError::new(ln, "missing P or NPL", PART).into()),
                    };
                    let slots = partition.get_or_insert_with(|| vec![None; n]);
                    for t in toks {
                        let e = parse_usize(ln, t, PART)?;
                        if e >= n || slots[e].is_some() {
                            return Err(ParseError::new(ln, format!("element {e} out of range or repeated"), PART).into());
                        }
                        slots[e] = Some(part);
                    }
                }
                Some(_) => return Err(ParseError::new(ln, format!("unexpected `{line}`"), HEADER).into()),
                None => {
                    let p = x
                        .as_mut()
                        .ok_or_else(|| ParseError::new(ln, "relation before `elements:`", "`elements: <k>`"))?;
                    let (a, b) = parse_le_line(ln, line)?;
                    let n = p.len();
                    p.insert(a, b)
                        .map_err(|_| ParseError::new(ln, format!("element out of range 0..{n}"), "`<i> <= <j>`"))?;
                }
            }
        }
        let x = x.ok_or_else(|| ParseError::new(1, "missing `elements:`", "`elements: <k>`"))?;
        let partition = match partition {
            None => None,
            Some(slots) => Some(
                slots
                    .into_iter()
                    .enumerate()
                    .map(|(i, s)| s.ok_or_else(|| DistributionError::Malformed(format!("element {i} has no part"))))
                    .collect::<Result<Vec<_>, _>>()?,
            ),
        };
        let spec = DistributionSpec {
            x: x.close(),
            theory,
            mode,
            f_classes,
            f_sequences,
            partition,
            extendable,
            target,
        };
        spec.check_well_formed()?;
        Ok(spec)
    }
}

/// Checks the admissibility conditions on `f` matching the spec's mode and
/// theory class.
pub fn validate_f(spec: &DistributionSpec) -> Result<Report, DistributionError> {
    spec.check_well_formed()?;
    let mut r = Report::new("admissible f");
    r.param("theory", spec.theory);
    r.param("mode", match spec.mode {
        Mode::Finite => "finite",
        Mode::Sequence => "sequence",
    });
    let q = spec.quotient();
    match spec.mode {
        Mode::Finite => {
            let values: Vec<Cardinal> = (0..q.len()).map(|c| spec.class_value(&q, c)).collect();
            if spec.theory == TheoryClass::Small {
                match q.least_class() {
                    Some(c0) => {
                        r.pass("least-element", format!("class of {}", q.classes[c0][0]));
                        r.check("least-zero", values[c0].is_zero(), format!("f = {}", values[c0]));
                    }
                    None => r.fail("least-element", "no least class"),
                }
                match q.greatest_class() {
                    Some(c1) => {
                        r.pass("greatest-element", format!("class of {}", q.classes[c1][0]));
                        let ok = spec.x.len() <= 1 || !values[c1].is_zero();
                        r.check("greatest-positive", ok, format!("f = {} with {} elements", values[c1], spec.x.len()));
                    }
                    None => r.fail("greatest-element", "no greatest class"),
                }
            }
            for (c, class) in q.classes.iter().enumerate() {
                if class.len() > 1 {
                    r.check(
                        "class-positive",
                        !values[c].is_zero(),
                        format!("class of {} has {} elements and f = {}", class[0], class.len(), values[c]),
                    );
                }
                if spec.theory == TheoryClass::Tc {
                    r.check("value-range", in_value_set(values[c]), format!("class of {}: f = {}", class[0], values[c]));
                }
            }
        }
        Mode::Sequence => {
            let seqs = &spec.f_sequences;
            if spec.theory == TheoryClass::Small {
                let least = q.least_class();
                r.check("least-element", least.is_some(), "least class");
                let directed = spec.x.is_upward_directed().unwrap_or(false);
                r.check("directed", directed, "upward directed");
                if let Some(c0) = least {
                    for s in seqs {
                        let hits = s.seq.elements().iter().any(|e| q.class_of[*e] == c0);
                        r.check("avoid-least", !hits, format!("{} stays off the least class", s.name));
                    }
                }
                for s in seqs {
                    let cofinal = (0..spec.x.len()).all(|a| s.seq.cycle.iter().any(|&b| spec.x.le(a, b)));
                    if cofinal {
                        r.check("cofinal-positive", !s.value.is_zero(), format!("{} is cofinal, f = {}", s.name, s.value));
                    }
                }
            }
            if let Some(p) = &spec.partition {
                for s in seqs {
                    let inside = s.seq.elements().iter().all(|&e| p[e] == Part::P);
                    r.check("sequence-in-p", inside, format!("{} uses only P elements", s.name));
                }
            }
            for s in seqs {
                if !s.seq.eventually_constant() {
                    r.check("non-constant-positive", !s.value.is_zero(), format!("{} has f = {}", s.name, s.value));
                }
                if spec.theory == TheoryClass::Tc {
                    r.check("value-range", in_value_set(s.value), format!("{}: f = {}", s.name, s.value));
                }
            }
            for a in seqs {
                for b in seqs {
                    if a.name == b.name {
                        continue;
                    }
                    if a.seq.has_subsequence(&b.seq) {
                        r.check(
                            "subsequence-monotone",
                            crate::cardinal::card_le(a.value, b.value, true),
                            format!("{} is a subsequence of {}: f = {} vs {}", b.name, a.name, b.value, a.value),
                        );
                    }
                    if a.name < b.name && a.seq.same_tail(&b.seq) {
                        r.check(
                            "tail-invariant",
                            a.value == b.value,
                            format!("{} and {} share a tail: f = {} vs {}", a.name, b.name, a.value, b.value),
                        );
                    }
                }
            }
        }
    }
    if r.findings.is_empty() {
        r.pass("no-rule-applies", "no condition fires");
    }
    Ok(r)
}

/// Registry `~`-classes of prime types that contain more than one
/// isomorphism type, listed by node ids.
pub fn il_obligations(g: &DominationGraph) -> Vec<Vec<String>> {
    let rk = g.rk_structure();
    rk.quotient
        .classes
        .iter()
        .filter(|c| c.len() > 1)
        .map(|c| c.iter().flat_map(|&k| rk.iso_classes[k].iter().cloned()).collect())
        .collect()
}

/// Cross-checks `f` against a registry: element `i` is the type
/// `element_nodes[i]`. Classes with two prime types that are not strongly
/// equivalent, and types over which a limit model exists, need `f ≥ 1`.
pub fn validate_registry(
    spec: &DistributionSpec,
    g: &DominationGraph,
    element_nodes: &[String],
    realizations: &[RealizationDigraph],
) -> Result<Report, DistributionError> {
    if element_nodes.len() != spec.x.len() {
        return Err(DistributionError::Malformed("one registry type per element is required".into()));
    }
    let q = spec.quotient();
    let mut r = Report::new("registry obligations");
    let value_of = |node: &str| {
        element_nodes
            .iter()
            .position(|n| n == node)
            .map(|e| spec.class_value(&q, q.class_of[e]))
    };
    for class in il_obligations(g) {
        let v = class.iter().find_map(|n| value_of(n));
        match v {
            Some(v) => r.check("class-positive", !v.is_zero(), format!("{} with f = {v}", class.join(","))),
            None => r.fail("class-positive", format!("{} maps to no element", class.join(","))),
        }
    }
    for d in realizations {
        if limit_exists_over(g, d)? {
            let v = value_of(&d.type_id).unwrap_or(Cardinal::ZERO);
            r.check("limit-exists", !v.is_zero(), format!("a limit model exists over {} but f = {v}", d.type_id));
        }
    }
    if r.findings.is_empty() {
        r.pass("no-obligation", "no registry rule fires");
    }
    Ok(r)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    /// Finite preorder with `f` on classes; every element gets a prime model.
    Finite,
    /// `f` on sequences; every element gets a prime model.
    Sequence,
    /// Partitioned: allocate P elements first, then partition NPL elements.
    AllocateFirst,
    /// Partitioned: partition NPL elements first, then allocate P elements.
    PartitionFirst,
}

impl FromStr for Variant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "finite" => Ok(Variant::Finite),
            "sequence" => Ok(Variant::Sequence),
            "p-first" => Ok(Variant::AllocateFirst),
            "npl-first" => Ok(Variant::PartitionFirst),
            other => Err(format!("unknown variant `{other}` (finite, sequence, p-first, npl-first)")),
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Finite => "finite",
            Variant::Sequence => "sequence",
            Variant::AllocateFirst => "p-first",
            Variant::PartitionFirst => "npl-first",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlueprintConfig {
    pub fanout: usize,
    /// Largest finite color of each element carrier.
    pub colors: u32,
    pub depth: u32,
    pub reading: PlateauReading,
}

impl Default for BlueprintConfig {
    fn default() -> Self {
        BlueprintConfig { fanout: 1, colors: 0, depth: 1, reading: PlateauReading::StrictBound }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TheoryBlueprint {
    pub variant: Variant,
    /// Carrier predicate of each element.
    pub predicates: Vec<String>,
    /// `(lower, upper, principal)` element links.
    pub q_edges: Vec<(usize, usize, bool)>,
    pub pipeline: Pipeline,
    pub identity_systems: Vec<(String, IdentitySystem)>,
}

const AUX: &str = "aux";

fn carrier_name(i: usize) -> String {
    format!("A{i}")
}

impl TheoryBlueprint {
    /// The operator pipeline with the element map as leading comments.
    pub fn to_text(&self) -> String {
        let mut out = format!("# variant {}\n", self.variant);
        for (i, p) in self.predicates.iter().enumerate() {
            let _ = writeln!(out, "# element {i} -> {p}");
        }
        out.push_str(&self.pipeline.to_text());
        out
    }
}

/// Elements of each component in an order extending `<`.
fn component_order(x: &Preorder) -> Vec<usize> {
    let mut out = Vec::new();
    for comp in x.components() {
        let mut c = comp;
        c.sort_by_key(|&a| ((0..x.len()).filter(|&b| x.le(b, a)).count(), a));
        out.extend(c);
    }
    out
}

pub fn build_blueprint(spec: &DistributionSpec, variant: Variant) -> Result<TheoryBlueprint, DistributionError> {
    build_blueprint_with(spec, variant, BlueprintConfig::default())
}

pub fn build_blueprint_with(
    spec: &DistributionSpec,
    variant: Variant,
    cfg: BlueprintConfig,
) -> Result<TheoryBlueprint, DistributionError> {
    let expected_mode = match variant {
        Variant::Finite => Mode::Finite,
        _ => Mode::Sequence,
    };
    if spec.mode != expected_mode {
        return Err(DistributionError::ModeMismatch);
    }
    let partition = match variant {
        Variant::AllocateFirst | Variant::PartitionFirst => {
            Some(spec.partition.clone().ok_or(DistributionError::PartitionMissing)?)
        }
        _ if spec.partition.is_some() => return Err(DistributionError::PartitionUnused),
        _ => None,
    };
    let report = validate_f(spec)?;
    if !report.all_passed() {
        return Err(DistributionError::Invalid(report.failed_rules().iter().map(|s| s.to_string()).collect()));
    }
    let n = spec.x.len();
    let q = spec.quotient();
    let predicates: Vec<String> = (0..n).map(carrier_name).collect();
    let mut steps = vec![Step::Fanout(cfg.fanout)];
    for p in &predicates {
        steps.push(Step::Carrier { name: p.clone(), colors: cfg.colors });
    }
    steps.push(Step::Carrier { name: AUX.into(), colors: 1 });

    let mut q_edges = Vec::new();
    for class in &q.classes {
        if class.len() > 1 {
            for (k, &a) in class.iter().enumerate() {
                q_edges.push((a, class[(k + 1) % class.len()], false));
            }
        }
    }
    for (ci, cj) in q.covers() {
        q_edges.push((q.classes[ci][0], q.classes[cj][0], true));
    }
    for &(a, b, principal) in &q_edges {
        steps.push(Step::Link { lower: predicates[a].clone(), upper: predicates[b].clone(), principal });
    }

    let stubs: Vec<String> = (0..1u32 << cfg.depth)
        .map(|bits| {
            let s: String = (0..cfg.depth).map(|i| if bits >> i & 1 == 1 { '1' } else { '0' }).collect();
            format!("q.{AUX}.{s}")
        })
        .collect();
    steps.push(Step::Icp { sub: AUX.into(), fresh: None, depth: cfg.depth });
    let order = component_order(&spec.x);
    let is_p = |e: usize| partition.as_ref().is_none_or(|p| p[e] == Part::P);
    let allocate: Vec<Step> = order
        .iter()
        .filter(|&&e| is_p(e))
        .map(|&e| Step::Css { sub: predicates[e].clone(), stubs: stubs.clone(), linked: false })
        .collect();
    let partition_steps: Vec<Step> = order
        .iter()
        .filter(|&&e| !is_p(e))
        .map(|&e| Step::Icp { sub: predicates[e].clone(), fresh: None, depth: cfg.depth })
        .collect();
    match variant {
        Variant::PartitionFirst => {
            steps.extend(partition_steps);
            steps.extend(allocate);
        }
        _ => {
            steps.extend(allocate);
            steps.extend(partition_steps);
        }
    }

    let maximal: Vec<usize> = q.maximal_classes().into_iter().map(|c| q.classes[c][0]).collect();
    for (i, &a) in maximal.iter().enumerate() {
        for &b in &maximal[i + 1..] {
            steps.push(Step::Bu { sub1: predicates[a].clone(), sub2: predicates[b].clone(), fresh: None, depth: cfg.depth });
        }
    }

    let mut identity_systems = Vec::new();
    match spec.mode {
        Mode::Finite => {
            for c in 0..q.len() {
                let node = type_name(&predicates[q.classes[c][0]]);
                match spec.class_value(&q, c) {
                    Cardinal::Fin(0) => {}
                    Cardinal::Continuum => steps.push(Step::Lfree { key: node }),
                    lambda => {
                        identity_systems.push((node.clone(), operators::lmt(&node, lambda)?));
                        steps.push(Step::Lmt { node, lambda });
                    }
                }
            }
        }
        Mode::Sequence => {
            for s in &spec.f_sequences {
                match s.value {
                    Cardinal::Fin(0) => {}
                    Cardinal::Continuum => steps.push(Step::Lfree { key: sequence_key(&s.name) }),
                    lambda => {
                        let len = s.seq.listed_len();
                        identity_systems.push((sequence_key(&s.name), operators::lms(len, lambda, cfg.reading)?));
                        steps.push(Step::Lms { seq: s.name.clone(), len, lambda, reading: cfg.reading });
                    }
                }
            }
        }
    }
    Ok(TheoryBlueprint { variant, predicates, q_edges, pipeline: Pipeline { steps }, identity_systems })
}

/// Replays the blueprint and compares the registry with the specification:
/// the domination order on element types, the quotient up to isomorphism,
/// prime-model flags and the IL targets. Scheme checks of every intermediate
/// structure are merged in.
pub fn check_blueprint(spec: &DistributionSpec, bp: &TheoryBlueprint) -> Result<Report, DistributionError> {
    let (replay, steps) = replay_checked(&bp.pipeline)?;
    let mut r = Report::new(format!("blueprint replay ({})", bp.variant));
    r.merge(steps);
    let g = &replay.spec.registry.graph;
    let n = spec.x.len();
    let nodes: Vec<String> = bp.predicates.iter().map(|p| type_name(p)).collect();
    let idx: Vec<usize> = nodes
        .iter()
        .map(|id| g.index_of(id).ok_or_else(|| DominationError::UnknownNode(id.clone())))
        .collect::<Result<_, _>>()?;
    let is_p = |e: usize| spec.partition.as_ref().is_none_or(|p| p[e] == Part::P);

    let full = g.rk_preorder().restrict(&idx);
    let same = (0..n).all(|a| (0..n).all(|b| full.le(a, b) == spec.x.le(a, b)));
    r.check("element-order", same, "domination between element types equals the preorder");
    let xq = spec.quotient();
    let fq = full.sim_quotient().expect("restriction of a closed relation is closed");
    r.check("element-quotient-iso", xq.find_isomorphism(&fq).is_some(), "quotients are isomorphic");

    for (e, id) in nodes.iter().enumerate() {
        let prime = g.node(id).is_some_and(|nd| nd.prime);
        r.check("prime-flags", prime == is_p(e), format!("{id} prime = {prime}"));
    }
    let rk = g.rk_structure();
    let primes: BTreeSet<&str> = rk.iso_classes.iter().flatten().map(String::as_str).collect();
    let expected: BTreeSet<&str> = (0..n).filter(|&e| is_p(e)).map(|e| nodes[e].as_str()).collect();
    r.check("prime-types", primes == expected, format!("{} prime types", primes.len()));
    let p_elems: Vec<usize> = (0..n).filter(|&e| is_p(e)).collect();
    let xp = spec.x.restrict(&p_elems).sim_quotient().expect("closed");
    r.check(
        "rk-quotient-iso",
        xp.find_isomorphism(&rk.quotient).is_some(),
        format!("{} classes against {}", xp.len(), rk.quotient.len()),
    );

    let il = &replay.spec.registry;
    match spec.mode {
        Mode::Finite => {
            // Registry class of each element type, via its isomorphism type.
            let iso_of = |id: &str| rk.iso_classes.iter().position(|c| c.iter().any(|m| m == id));
            for (c, class) in xq.classes.iter().enumerate() {
                let want = spec.class_value(&xq, c);
                let Some(k) = iso_of(&nodes[class[0]]) else {
                    r.fail("il-targets", format!("element {} has no prime type", class[0]));
                    continue;
                };
                let rc = rk.quotient.class_of[k];
                let annotated: Vec<Cardinal> = rk.quotient.classes[rc]
                    .iter()
                    .flat_map(|&k| &rk.iso_classes[k])
                    .filter_map(|id| il.il.get(id).copied())
                    .collect();
                let got = match annotated.as_slice() {
                    [] => Some(Cardinal::ZERO),
                    [v] => Some(*v),
                    _ => None,
                };
                r.check(
                    "il-targets",
                    got == Some(want),
                    format!("class of {}: registry {:?}, f = {want}", class[0], got),
                );
            }
        }
        Mode::Sequence => {
            for s in &spec.f_sequences {
                let got = il.il_target(&sequence_key(&s.name));
                r.check("il-targets", got == s.value, format!("{}: registry {got}, f = {}", s.name, s.value));
            }
        }
    }
    Ok(r)
}

/// Witness patterns for the realizable triples.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Corollary {
    /// `(λ₁, λ₂, 2^ω)` with `λ₁ ∈ ω∖{0}`, `λ₂ ∈ ω ∪ {ω, 2^ω}`.
    FinitePrime,
    /// `(ω, λ, 2^ω)` with `λ ∈ ω ∪ {ω, 2^ω}`.
    CountablePrime,
    /// `(2^ω, 2^ω, λ)` with `λ ∈ ω ∪ {ω, 2^ω}`.
    ContinualPrime,
}

impl FromStr for Corollary {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "finite-prime" => Ok(Corollary::FinitePrime),
            "countable-prime" => Ok(Corollary::CountablePrime),
            "continual-prime" => Ok(Corollary::ContinualPrime),
            other => Err(format!("unknown witness `{other}`")),
        }
    }
}

/// Truncation size used for countable witnesses.
pub const WITNESS_TRUNCATION: usize = 3;

/// Builds a specification whose target triple follows the pattern of `kind`.
pub fn realize_corollary(kind: Corollary, params: &[Cardinal]) -> Result<DistributionSpec, DistributionError> {
    let range = |msg: &str| DistributionError::ParamRange(msg.to_string());
    let one = |params: &[Cardinal]| match params {
        [l] if in_value_set(*l) => Ok(*l),
        _ => Err(range("expected one value in w+{w,c}")),
    };
    match kind {
        Corollary::FinitePrime => {
            let (l1, l2) = match params {
                [Cardinal::Fin(k), l2] if *k >= 1 && in_value_set(*l2) => (*k as usize, *l2),
                _ => return Err(range("expected l1 in w without 0 and l2 in w+{w,c}")),
            };
            let mut spec = DistributionSpec::finite(Preorder::identity(l1), TheoryClass::Tc);
            if !l2.is_zero() {
                spec.f_classes.insert(0, l2);
            }
            spec.target = Some(Cm3Triple::new(Cardinal::Fin(l1 as u64), l2, Cardinal::Continuum));
            Ok(spec)
        }
        Corollary::CountablePrime => {
            let l = one(params)?;
            let mut spec = DistributionSpec::sequences(Preorder::identity(WITNESS_TRUNCATION), TheoryClass::Tc);
            spec.extendable = true;
            spec.f_sequences.push(NamedSequence { name: "s0".into(), seq: Lasso::constant(0), value: l });
            spec.target = Some(Cm3Triple::new(Cardinal::Omega, l, Cardinal::Continuum));
            Ok(spec)
        }
        Corollary::ContinualPrime => {
            let l = one(params)?;
            let npl = match l {
                Cardinal::Fin(k) => (k as usize).min(WITNESS_TRUNCATION),
                _ => WITNESS_TRUNCATION,
            };
            let mut spec = DistributionSpec::sequences(Preorder::identity(1 + npl), TheoryClass::Tc);
            spec.extendable = !l.is_finite() || npl < l.finite().unwrap_or(0) as usize;
            let mut partition = vec![Part::Npl; 1 + npl];
            partition[0] = Part::P;
            spec.partition = Some(partition);
            spec.target = Some(Cm3Triple::new(Cardinal::Continuum, Cardinal::Continuum, l));
            Ok(spec)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(s: &str) -> Cardinal {
        s.parse().unwrap()
    }

    fn t(s: &str) -> Cm3Triple {
        s.parse().unwrap()
    }

    #[test]
    fn classifier_examples() {
        assert_eq!(
            classify_triple(t("1,0,0"), TheoryClass::Small, true).verdict,
            Verdict::AdmissibleSmall(SmallCase::Categorical)
        );
        assert_eq!(classify_triple(t("0,0,c"), TheoryClass::Tc, true).verdict, Verdict::AdmissibleTc(2));
        assert_eq!(
            classify_triple(t("2,c,0"), TheoryClass::Tc, true).verdict,
            Verdict::Inadmissible(Reason::ContinuumLimitsOnly)
        );
        assert_eq!(
            classify_triple(t("c,3,w"), TheoryClass::Tc, true).verdict,
            Verdict::Inadmissible(Reason::ContinuumPrimesOnly)
        );
        let all_c = classify_triple(t("c,c,c"), TheoryClass::Tc, true);
        assert_eq!(all_c.verdict, Verdict::AdmissibleTc(1));
        assert_eq!(all_c.families, vec![1, 3]);
        assert_eq!(format!("{}", Verdict::AdmissibleTc(2)), "AdmissibleTc family 2");
    }

    #[test]
    fn omega1_handling() {
        assert_eq!(classify_triple(t("2,w1,c"), TheoryClass::Tc, true).verdict, Verdict::AdmissibleTc(3));
        let off = classify_triple(t("2,w1,c"), TheoryClass::Tc, false);
        assert_eq!(off.verdict, Verdict::AdmissibleTc(3));
        assert!(off.outside_ch);
        let small = classify_triple(t("3,w1,0"), TheoryClass::Small, false);
        assert!(small.verdict.is_admissible() && small.unrealized);
    }

    #[test]
    fn decomposition() {
        let il = [c("1"), c("0"), c("2"), c("1")];
        assert_eq!(decompose(c("4"), &il, c("0")), c("8"));
        assert_eq!(decompose_tc(c("2"), &[c("1")], c("c")), (c("c"), true));
    }

    #[test]
    fn lasso_relations() {
        let y = Lasso::new(vec![0], vec![1, 2]).unwrap();
        let sub = Lasso::new(vec![], vec![2]).unwrap();
        assert!(y.has_subsequence(&sub));
        assert!(!sub.has_subsequence(&y));
        let shifted = Lasso::new(vec![5, 5], vec![2, 1, 2, 1]).unwrap();
        assert!(y.same_tail(&shifted));
        assert!(!y.eventually_constant() && sub.eventually_constant());
    }

    #[test]
    fn validate_examples() {
        let mut spec = DistributionSpec::finite(Preorder::from_pairs(2, &[(0, 1), (1, 0)]).unwrap(), TheoryClass::Tc);
        spec.f_classes.insert(0, c("0"));
        let r = validate_f(&spec).unwrap();
        assert_eq!(r.failed_rules(), vec!["class-positive"]);
        let anti = DistributionSpec::finite(Preorder::identity(4), TheoryClass::Tc);
        assert!(validate_f(&anti).unwrap().all_passed());
    }

    #[test]
    fn spec_round_trip() {
        let text = "theory: tc\nmode: sequence\nextendable: true\nelements: 3\n0 <= 1\nf: s0 0 [1] = 2\nf: s1 [1 1] = w\npartition: P 0 1\npartition: NPL 2\n";
        let spec = DistributionSpec::parse(text).unwrap();
        assert_eq!(DistributionSpec::parse(&spec.to_text()).unwrap(), spec);
    }

    #[test]
    fn chain_blueprint_reproduces_order() {
        let mut spec = DistributionSpec::finite(Preorder::from_pairs(2, &[(0, 1)]).unwrap(), TheoryClass::Tc);
        spec.f_classes.insert(1, c("2"));
        let bp = build_blueprint(&spec, Variant::Finite).unwrap();
        assert!(bp.q_edges.contains(&(0, 1, true)));
        let r = check_blueprint(&spec, &bp).unwrap();
        assert!(r.all_passed(), "{}", r.render_human());
    }

    #[test]
    fn corollary_witnesses_are_admissible_and_buildable() {
        let cases = [
            (Corollary::FinitePrime, vec![c("2"), c("w")], Variant::Finite, Some(3)),
            (Corollary::CountablePrime, vec![c("c")], Variant::Sequence, Some(3)),
            (Corollary::ContinualPrime, vec![c("0")], Variant::PartitionFirst, Some(1)),
        ];
        for (kind, params, variant, family) in cases {
            let spec = realize_corollary(kind, &params).unwrap();
            let v = classify_triple(spec.target.unwrap(), TheoryClass::Tc, true);
            assert_eq!(v.verdict, Verdict::AdmissibleTc(family.unwrap()));
            let bp = build_blueprint(&spec, variant).unwrap();
            let r = check_blueprint(&spec, &bp).unwrap();
            assert!(r.all_passed(), "{}", r.render_human());
        }
        assert!(realize_corollary(Corollary::FinitePrime, &[c("0"), c("1")]).is_err());
    }
}
