//! Identity systems over words of natural-number letters and class counting
//! under the monoid congruence they generate, truncated at a word length.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::cardinal::Cardinal;

/// Default cap on the number of words a single count may enumerate.
pub const DEFAULT_WORD_BUDGET: usize = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LimitError {
    #[error("the number of limit models must be nonzero")]
    ZeroTarget,
    #[error("{0} is not in w+1")]
    Uncountable(Cardinal),
    #[error("alphabet size and length bound must be positive")]
    EmptyRange,
    #[error("{words} words exceed the budget of {budget}")]
    Budget { words: u128, budget: usize },
    #[error("`{0}` is not a word")]
    BadWord(String),
    #[error("word of length {len} exceeds the bound {bound}")]
    WordTooLong { len: usize, bound: usize },
    #[error("letter {letter} outside the alphabet 0..{alphabet}")]
    LetterOutOfRange { letter: u32, alphabet: u32 },
}

/// Nonempty word over `{0, 1, …}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(pub Vec<u32>);

impl Word {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[u32] {
        &self.0
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.iter().all(|&l| l < 10) {
            for l in &self.0 {
                write!(f, "{l}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
            f.write_str(&parts.join("."))
        }
    }
}

impl FromStr for Word {
    type Err = LimitError;

    /// `212` (one digit per letter) or `2.10.3`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let bad = || LimitError::BadWord(s.to_string());
        let letters: Option<Vec<u32>> = if t.contains('.') {
            t.split('.').map(|p| p.parse().ok()).collect()
        } else {
            t.chars().map(|c| c.to_digit(10)).collect()
        };
        match letters {
            Some(l) if !l.is_empty() => Ok(Word(l)),
            _ => Err(bad()),
        }
    }
}

/// How the side condition `n_0 + s, n_0 + t = n_s` of the plateau schema is
/// read: with the first conjunct as `n_0 + s > n_s`, or with the target
/// equation alone. Given `t < s` both readings admit the same instances.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PlateauReading {
    StrictBound,
    TargetOnly,
}

impl fmt::Display for PlateauReading {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PlateauReading::StrictBound => f.write_str("strict-bound"),
            PlateauReading::TargetOnly => f.write_str("target-only"),
        }
    }
}

/// A parameterized equation. Each schema is determined by its generating
/// word, from which both sides are computed.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Schema {
    /// `base ≈ m` for every letter `m > base`.
    LetterCollapse { base: u32 },
    /// `mm ≈ m`, for `m < below` when bounded.
    Idempotent { below: Option<u32> },
    /// `n_1 … n_s ≈ n_s` when `s ≥ 2` and every earlier letter exceeds `n_s`.
    DescendingTail,
    /// `n_1 n_2 ≈ n_1 (n_1+1) … n_2` when `n_1 < n_2`.
    AscendingRun,
    /// `n_0 … n_s ≈ n_s … n_s` (`s+1` letters) when `s ≥ 1` and every
    /// earlier letter is below `n_s`.
    AscendingPrefixCollapse,
    /// `n_0 … n_s ≈ n_0 (n_0+1) … (n_0+s)` when `s ≥ 1` and `n_0+s ≤ n_s`.
    AscendingFill,
    /// `n_0 … n_s ≈ n_0 … (n_0+t) (n_0+t)^{s-t}` where `n_0+t = n_s`,
    /// `0 < t < s`.
    PlateauFill { reading: PlateauReading },
    /// One explicit equation.
    Ground { lhs: Word, rhs: Word },
}

impl Schema {
    /// The instance generated by `w`, if any, as `(lhs, rhs)`.
    fn instance(&self, w: &[u32]) -> Option<(Vec<u32>, Vec<u32>)> {
        let s = w.len().checked_sub(1)?;
        let last = *w.last()?;
        match self {
            Schema::LetterCollapse { base } => (s == 0 && last > *base).then(|| (vec![*base], w.to_vec())),
            Schema::Idempotent { below } => {
                (s == 1 && w[0] == w[1] && below.is_none_or(|b| w[0] < b)).then(|| (w.to_vec(), vec![w[0]]))
            }
            Schema::DescendingTail => {
                (s >= 1 && w[..s].iter().all(|&l| l > last)).then(|| (w.to_vec(), vec![last]))
            }
            Schema::AscendingRun => (s == 1 && w[0] < w[1]).then(|| (w.to_vec(), (w[0]..=w[1]).collect())),
            Schema::AscendingPrefixCollapse => {
                (s >= 1 && w[..s].iter().all(|&l| l < last)).then(|| (w.to_vec(), vec![last; s + 1]))
            }
            Schema::AscendingFill => {
                let top = w[0] as u64 + s as u64;
                (s >= 1 && top <= last as u64).then(|| (w.to_vec(), (w[0]..=w[0] + s as u32).collect()))
            }
            Schema::PlateauFill { reading } => {
                let n0 = w[0];
                if s < 2 || last <= n0 {
                    return None;
                }
                let t = (last - n0) as usize;
                let bound_ok = match reading {
                    PlateauReading::StrictBound => n0 as u64 + s as u64 > last as u64,
                    PlateauReading::TargetOnly => true,
                };
                if t == 0 || t >= s || !bound_ok {
                    return None;
                }
                let mut rhs: Vec<u32> = (n0..=last).collect();
                rhs.extend(std::iter::repeat_n(last, s - t));
                Some((w.to_vec(), rhs))
            }
            Schema::Ground { lhs, rhs } => (w == lhs.letters()).then(|| (lhs.0.clone(), rhs.0.clone())),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Schema::LetterCollapse { base } => format!("{base} = m, m > {base}"),
            Schema::Idempotent { below: Some(b) } => format!("mm = m, m < {b}"),
            Schema::Idempotent { below: None } => "mm = m".into(),
            Schema::DescendingTail => "n1..ns = ns, min(n1..n(s-1)) > ns".into(),
            Schema::AscendingRun => "n1 n2 = n1 (n1+1) .. n2, n1 < n2".into(),
            Schema::AscendingPrefixCollapse => "n0..ns = ns^(s+1), max(n0..n(s-1)) < ns".into(),
            Schema::AscendingFill => "n0..ns = n0 (n0+1) .. (n0+s), n0+s <= ns".into(),
            Schema::PlateauFill { reading } => {
                format!("n0..ns = n0 .. (n0+t) (n0+t)^(s-t), n0+t = ns, 0 < t < s [{reading}]")
            }
            Schema::Ground { lhs, rhs } => format!("{lhs} = {rhs}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentitySystem {
    pub name: String,
    pub schemas: Vec<Schema>,
    pub target: Cardinal,
}

fn check_target(lambda: Cardinal) -> Result<(), LimitError> {
    match lambda {
        Cardinal::Fin(0) => Err(LimitError::ZeroTarget),
        Cardinal::Fin(_) | Cardinal::Omega => Ok(()),
        other => Err(LimitError::Uncountable(other)),
    }
}

impl IdentitySystem {
    pub fn empty() -> Self {
        IdentitySystem {
            name: "free".into(),
            schemas: Vec::new(),
            target: Cardinal::Continuum,
        }
    }

    /// Identities producing `λ` limit models over a type.
    pub fn limit_over_type(lambda: Cardinal) -> Result<Self, LimitError> {
        check_target(lambda)?;
        let schemas = match lambda {
            Cardinal::Fin(n) => vec![
                Schema::LetterCollapse { base: (n - 1) as u32 },
                Schema::Idempotent { below: Some(n as u32) },
                Schema::DescendingTail,
            ],
            _ => vec![
                Schema::Idempotent { below: None },
                Schema::DescendingTail,
                Schema::AscendingRun,
            ],
        };
        Ok(IdentitySystem {
            name: format!("lmt {lambda}"),
            schemas,
            target: lambda,
        })
    }

    /// Identities producing `λ` limit models over a `≤_RK`-sequence.
    pub fn limit_over_sequence(lambda: Cardinal, reading: PlateauReading) -> Result<Self, LimitError> {
        check_target(lambda)?;
        let schemas = match lambda {
            Cardinal::Fin(n) => vec![
                Schema::LetterCollapse { base: (n - 1) as u32 },
                Schema::AscendingPrefixCollapse,
            ],
            _ => vec![
                Schema::AscendingPrefixCollapse,
                Schema::AscendingFill,
                Schema::PlateauFill { reading },
            ],
        };
        Ok(IdentitySystem {
            name: format!("lms {lambda}"),
            schemas,
            target: lambda,
        })
    }

    pub fn with_equation(mut self, lhs: Word, rhs: Word) -> Self {
        self.schemas.push(Schema::Ground { lhs, rhs });
        self
    }

    /// Active plateau reading, when the system contains that schema.
    pub fn plateau_reading(&self) -> Option<PlateauReading> {
        self.schemas.iter().find_map(|s| match s {
            Schema::PlateauFill { reading } => Some(*reading),
            _ => None,
        })
    }
}

/// All words of length `1..=max_len` over `0..alphabet`, shortest first and
/// lexicographic within a length.
fn words(alphabet: u32, max_len: usize) -> impl Iterator<Item = Vec<u32>> {
    (1..=max_len).flat_map(move |len| {
        let total = (alphabet as u64).pow(len as u32);
        (0..total).map(move |mut v| {
            let mut w = vec![0u32; len];
            for slot in w.iter_mut().rev() {
                *slot = (v % alphabet as u64) as u32;
                v /= alphabet as u64;
            }
            w
        })
    })
}

fn word_count(alphabet: u32, max_len: usize) -> u128 {
    (1..=max_len).map(|l| (alphabet as u128).pow(l as u32)).sum()
}

/// Ground instances with both sides of length at most `max_len` over the
/// alphabet `0..alphabet`, schema by schema in word order.
pub fn instantiate(sys: &IdentitySystem, alphabet: u32, max_len: usize) -> Vec<(Word, Word)> {
    let mut out = Vec::new();
    for schema in &sys.schemas {
        for w in words(alphabet, max_len) {
            if let Some((lhs, rhs)) = schema.instance(&w) {
                let fits = |side: &[u32]| side.len() <= max_len && side.iter().all(|&l| l < alphabet);
                if fits(&lhs) && fits(&rhs) {
                    out.push((Word(lhs), Word(rhs)));
                }
            }
        }
    }
    out
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // keep the smaller index as root so roots are length-lex minima
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}

/// Word indexing: shorter words first, then lexicographic.
struct Index {
    alphabet: u64,
    offset: Vec<u64>,
    pow: Vec<u64>,
}

impl Index {
    fn new(alphabet: u32, max_len: usize) -> Self {
        let a = alphabet as u64;
        let pow: Vec<u64> = (0..=max_len).map(|k| a.pow(k as u32)).collect();
        let mut offset = vec![0u64; max_len + 2];
        for len in 1..=max_len {
            offset[len + 1] = offset[len] + pow[len];
        }
        Index {
            alphabet: a,
            offset,
            pow,
        }
    }

    fn value(&self, w: &[u32]) -> u64 {
        w.iter().fold(0, |v, &l| v * self.alphabet + l as u64)
    }

    fn index(&self, len: usize, value: u64) -> usize {
        (self.offset[len] + value) as usize
    }

    fn word(&self, idx: u64) -> Vec<u32> {
        let mut len = 1;
        while idx >= self.offset[len + 1] {
            len += 1;
        }
        let mut v = idx - self.offset[len];
        let mut w = vec![0; len];
        for slot in w.iter_mut().rev() {
            *slot = (v % self.alphabet) as u32;
            v /= self.alphabet;
        }
        w
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassCount {
    pub count: usize,
    /// Length-lexicographic minimum of each class, in that order.
    pub representatives: Vec<Word>,
}

struct Classes {
    index: Index,
    uf: UnionFind,
}

fn closure(sys: &IdentitySystem, alphabet: u32, max_len: usize, budget: usize) -> Result<Classes, LimitError> {
    if alphabet == 0 || max_len == 0 {
        return Err(LimitError::EmptyRange);
    }
    let total = word_count(alphabet, max_len);
    if total > budget as u128 {
        return Err(LimitError::Budget { words: total, budget });
    }
    let index = Index::new(alphabet, max_len);
    let mut uf = UnionFind::new(total as usize);
    for (lhs, rhs) in instantiate(sys, alphabet, max_len) {
        let (x, y) = (index.value(lhs.letters()), index.value(rhs.letters()));
        let (lx, ly) = (lhs.len(), rhs.len());
        let room = max_len - lx.max(ly);
        for ctx in 0..=room {
            for left in 0..=ctx {
                let right = ctx - left;
                for u in 0..index.pow[left] {
                    for v in 0..index.pow[right] {
                        let a = (u * index.pow[lx] + x) * index.pow[right] + v;
                        let b = (u * index.pow[ly] + y) * index.pow[right] + v;
                        uf.union(index.index(lx + ctx, a), index.index(ly + ctx, b));
                    }
                }
            }
        }
    }
    Ok(Classes { index, uf })
}

/// Number of classes of nonempty words of length at most `max_len` under
/// the congruence generated by the instances, where an equation is applied
/// inside a context only if both results stay within the bound.
pub fn count_classes(sys: &IdentitySystem, alphabet: u32, max_len: usize) -> Result<ClassCount, LimitError> {
    count_classes_with_budget(sys, alphabet, max_len, DEFAULT_WORD_BUDGET)
}

pub fn count_classes_with_budget(
    sys: &IdentitySystem,
    alphabet: u32,
    max_len: usize,
    budget: usize,
) -> Result<ClassCount, LimitError> {
    let mut c = closure(sys, alphabet, max_len, budget)?;
    let n = c.uf.parent.len();
    let mut representatives = Vec::new();
    for i in 0..n {
        if c.uf.find(i) == i {
            representatives.push(Word(c.index.word(i as u64)));
        }
    }
    Ok(ClassCount {
        count: representatives.len(),
        representatives,
    })
}

/// The length-lexicographic minimum of the class of `w` at the bound.
pub fn normal_form(sys: &IdentitySystem, alphabet: u32, w: &Word, max_len: usize) -> Result<Word, LimitError> {
    if w.len() > max_len {
        return Err(LimitError::WordTooLong {
            len: w.len(),
            bound: max_len,
        });
    }
    if let Some(&letter) = w.letters().iter().find(|&&l| l >= alphabet) {
        return Err(LimitError::LetterOutOfRange { letter, alphabet });
    }
    let mut c = closure(sys, alphabet, max_len, DEFAULT_WORD_BUDGET)?;
    let i = c.index.index(w.len(), c.index.value(w.letters()));
    let root = c.uf.find(i);
    Ok(Word(c.index.word(root as u64)))
}
