//! Finite preorders, their quotients by `~` (the intersection of `≤` and
//! `≥`), and the premodel-set axiom checker for symbolic continuum-sized
//! preorders.

use std::fmt::Write as _;

use thiserror::Error;

use crate::cardinal::{card_sum, Cardinal};
use crate::report::Report;
use crate::syntax::{content_lines, key_value, parse_usize, ParseError};

/// Default cap on the number of quotient classes for the exact width search.
pub const WIDTH_CLASS_LIMIT: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PreorderError {
    #[error("relation is not reflexive and transitive; call `close` first")]
    NotClosed,
    #[error("element {index} out of range for a preorder on {n} elements")]
    OutOfRange { index: usize, n: usize },
    #[error("{classes} quotient classes exceed the exact-search limit of {limit}")]
    SizeLimit { classes: usize, limit: usize },
    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// A binary relation on `0..n`, read as `i ≤ j`. Nothing about the relation
/// is assumed until [`Preorder::close`] has been applied.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Preorder {
    n: usize,
    rel: Vec<bool>,
}

impl Preorder {
    /// The empty relation (not reflexive until closed).
    pub fn empty(n: usize) -> Self {
        Preorder {
            n,
            rel: vec![false; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut p = Self::empty(n);
        for i in 0..n {
            p.rel[i * n + i] = true;
        }
        p
    }

    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Result<Self, PreorderError> {
        let mut p = Self::empty(n);
        for &(a, b) in pairs {
            p.insert(a, b)?;
        }
        Ok(p)
    }

    /// The linear order `0 < 1 < … < n-1`, closed.
    pub fn chain(n: usize) -> Self {
        let mut p = Self::empty(n);
        for i in 0..n {
            for j in i..n {
                p.rel[i * n + j] = true;
            }
        }
        p
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn insert(&mut self, a: usize, b: usize) -> Result<(), PreorderError> {
        self.check_index(a)?;
        self.check_index(b)?;
        self.rel[a * self.n + b] = true;
        Ok(())
    }

    fn check_index(&self, i: usize) -> Result<(), PreorderError> {
        if i < self.n {
            Ok(())
        } else {
            Err(PreorderError::OutOfRange { index: i, n: self.n })
        }
    }

    /// `a ≤ b`. Panics on out-of-range indices.
    pub fn le(&self, a: usize, b: usize) -> bool {
        assert!(a < self.n && b < self.n, "index out of range");
        self.rel[a * self.n + b]
    }

    pub fn equiv(&self, a: usize, b: usize) -> bool {
        self.le(a, b) && self.le(b, a)
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.n {
            for b in 0..self.n {
                if self.rel[a * self.n + b] {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Reflexive-transitive closure (Warshall).
    pub fn close(&self) -> Preorder {
        let n = self.n;
        let mut rel = self.rel.clone();
        for i in 0..n {
            rel[i * n + i] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if !rel[i * n + k] {
                    continue;
                }
                for j in 0..n {
                    if rel[k * n + j] {
                        rel[i * n + j] = true;
                    }
                }
            }
        }
        Preorder { n, rel }
    }

    pub fn is_closed(&self) -> bool {
        let n = self.n;
        (0..n).all(|i| self.rel[i * n + i])
            && (0..n).all(|i| {
                (0..n).all(|k| {
                    !self.rel[i * n + k] || (0..n).all(|j| !self.rel[k * n + j] || self.rel[i * n + j])
                })
            })
    }

    fn require_closed(&self) -> Result<(), PreorderError> {
        if self.is_closed() {
            Ok(())
        } else {
            Err(PreorderError::NotClosed)
        }
    }

    /// Quotient by `~`. On a closed relation the `~`-classes are exactly the
    /// strongly connected components of the relation graph.
    pub fn sim_quotient(&self) -> Result<QuotientPoset, PreorderError> {
        self.require_closed()?;
        let n = self.n;
        let mut class_of = vec![usize::MAX; n];
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for a in 0..n {
            if class_of[a] != usize::MAX {
                continue;
            }
            let id = classes.len();
            let members: Vec<usize> = (a..n).filter(|&b| self.equiv(a, b)).collect();
            for &b in &members {
                class_of[b] = id;
            }
            classes.push(members);
        }
        let k = classes.len();
        let mut order = vec![false; k * k];
        for (i, ci) in classes.iter().enumerate() {
            for (j, cj) in classes.iter().enumerate() {
                order[i * k + j] = self.le(ci[0], cj[0]);
            }
        }
        Ok(QuotientPoset {
            classes,
            class_of,
            order,
        })
    }

    /// Lower cone `{x : x ≤ a}` and upper cone `{x : a ≤ x}`.
    pub fn cones(&self, a: usize) -> Result<(Vec<usize>, Vec<usize>), PreorderError> {
        self.check_index(a)?;
        let lower = (0..self.n).filter(|&x| self.le(x, a)).collect();
        let upper = (0..self.n).filter(|&x| self.le(a, x)).collect();
        Ok((lower, upper))
    }

    /// Longest chain of pairwise non-equivalent elements.
    pub fn height(&self) -> Result<usize, PreorderError> {
        Ok(self.sim_quotient()?.height())
    }

    /// Largest antichain of pairwise non-equivalent elements, by exhaustive
    /// search over at most [`WIDTH_CLASS_LIMIT`] quotient classes.
    pub fn width(&self) -> Result<usize, PreorderError> {
        self.width_with_limit(WIDTH_CLASS_LIMIT)
    }

    pub fn width_with_limit(&self, limit: usize) -> Result<usize, PreorderError> {
        self.sim_quotient()?.width_with_limit(limit)
    }

    /// Every pair has a common upper bound.
    pub fn is_upward_directed(&self) -> Result<bool, PreorderError> {
        self.require_closed()?;
        let n = self.n;
        Ok((0..n).all(|a| (a..n).all(|b| (0..n).any(|c| self.le(a, c) && self.le(b, c)))))
    }

    /// Connected components of the comparability graph, each sorted, ordered
    /// by their least element.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.n;
        let mut comp = vec![usize::MAX; n];
        let mut out = Vec::new();
        for s in 0..n {
            if comp[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut stack = vec![s];
            comp[s] = id;
            let mut members = Vec::new();
            while let Some(a) = stack.pop() {
                members.push(a);
                for b in 0..n {
                    if comp[b] == usize::MAX && (self.rel[a * n + b] || self.rel[b * n + a]) {
                        comp[b] = id;
                        stack.push(b);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    /// Restriction to a subset of elements, renumbered in the given order.
    pub fn restrict(&self, keep: &[usize]) -> Preorder {
        let m = keep.len();
        let mut p = Preorder::empty(m);
        for (i, &a) in keep.iter().enumerate() {
            for (j, &b) in keep.iter().enumerate() {
                p.rel[i * m + j] = self.le(a, b);
            }
        }
        p
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("elements: {}\n", self.n);
        for (a, b) in self.pairs() {
            let _ = writeln!(out, "{a} <= {b}");
        }
        out
    }

    /// Parses the `elements: k` / `i <= j` format. The result is the raw
    /// relation; callers decide whether to close it.
    pub fn parse(text: &str) -> Result<Preorder, PreorderError> {
        let mut lines = content_lines(text);
        let (ln, first) = lines
            .next()
            .ok_or_else(|| ParseError::new(1, "empty input", "`elements: <k>`"))?;
        let n = match key_value(first) {
            Some(("elements", v)) => parse_usize(ln, v, "`elements: <k>`")?,
            _ => return Err(ParseError::new(ln, format!("unexpected `{first}`"), "`elements: <k>`").into()),
        };
        let mut p = Preorder::empty(n);
        for (ln, line) in lines {
            let (a, b) = parse_le_line(ln, line)?;
            p.insert(a, b).map_err(|_| {
                ParseError::new(ln, format!("element out of range 0..{n}"), "`<i> <= <j>` with i, j < k")
            })?;
        }
        Ok(p)
    }
}

pub(crate) fn parse_le_line(ln: usize, line: &str) -> Result<(usize, usize), ParseError> {
    const EXPECTED: &str = "`<i> <= <j>`";
    let (a, b) = line
        .split_once("<=")
        .ok_or_else(|| ParseError::new(ln, format!("unexpected `{line}`"), EXPECTED))?;
    Ok((parse_usize(ln, a, EXPECTED)?, parse_usize(ln, b, EXPECTED)?))
}

/// The partial order induced on `~`-classes. Classes are listed in order of
/// their least element and each class is sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientPoset {
    pub classes: Vec<Vec<usize>>,
    pub class_of: Vec<usize>,
    order: Vec<bool>,
}

impl QuotientPoset {
    pub fn from_parts(classes: Vec<Vec<usize>>, order: Vec<bool>) -> Self {
        let n = classes.iter().map(|c| c.len()).sum();
        let mut class_of = vec![0; n];
        for (i, c) in classes.iter().enumerate() {
            for &e in c {
                if e < n {
                    class_of[e] = i;
                }
            }
        }
        QuotientPoset {
            classes,
            class_of,
            order,
        }
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn le(&self, i: usize, j: usize) -> bool {
        self.order[i * self.len() + j]
    }

    pub fn lt(&self, i: usize, j: usize) -> bool {
        i != j && self.le(i, j)
    }

    /// Covering pairs `(i, j)`: `i < j` with nothing strictly between.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let k = self.len();
        let mut out = Vec::new();
        for i in 0..k {
            for j in 0..k {
                if self.lt(i, j) && !(0..k).any(|m| self.lt(i, m) && self.lt(m, j)) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn minimal_classes(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| !(0..self.len()).any(|j| self.lt(j, i)))
            .collect()
    }

    pub fn maximal_classes(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| !(0..self.len()).any(|j| self.lt(i, j)))
            .collect()
    }

    /// A least class exists iff there is exactly one minimal class and it is
    /// below everything.
    pub fn least_class(&self) -> Option<usize> {
        (0..self.len()).find(|&i| (0..self.len()).all(|j| self.le(i, j)))
    }

    pub fn greatest_class(&self) -> Option<usize> {
        (0..self.len()).find(|&i| (0..self.len()).all(|j| self.le(j, i)))
    }

    pub fn is_partial_order(&self) -> bool {
        let k = self.len();
        (0..k).all(|i| self.le(i, i))
            && (0..k).all(|i| (0..k).all(|j| i == j || !(self.le(i, j) && self.le(j, i))))
            && (0..k).all(|i| {
                (0..k).all(|j| (0..k).all(|m| !(self.le(i, j) && self.le(j, m)) || self.le(i, m)))
            })
    }

    pub fn height(&self) -> usize {
        let k = self.len();
        // Strictly smaller classes have strictly smaller lower cones, so this
        // ordering is a linear extension.
        let mut idx: Vec<usize> = (0..k).collect();
        idx.sort_by_key(|&i| (0..k).filter(|&j| self.le(j, i)).count());
        let mut longest = vec![1usize; k];
        for (pos, &i) in idx.iter().enumerate() {
            for &j in &idx[..pos] {
                if self.lt(j, i) {
                    longest[i] = longest[i].max(longest[j] + 1);
                }
            }
        }
        longest.into_iter().max().unwrap_or(0)
    }

    pub fn width(&self) -> Result<usize, PreorderError> {
        self.width_with_limit(WIDTH_CLASS_LIMIT)
    }

    pub fn width_with_limit(&self, limit: usize) -> Result<usize, PreorderError> {
        let k = self.len();
        if k > limit.min(32) {
            return Err(PreorderError::SizeLimit { classes: k, limit });
        }
        // Largest clique of the incomparability graph, branch and bound.
        let incomparable: Vec<u32> = (0..k)
            .map(|i| {
                (0..k)
                    .filter(|&j| j != i && !self.le(i, j) && !self.le(j, i))
                    .fold(0u32, |m, j| m | (1 << j))
            })
            .collect();
        fn grow(cand: u32, size: usize, best: &mut usize, inc: &[u32]) {
            if cand == 0 {
                *best = (*best).max(size);
                return;
            }
            if size + cand.count_ones() as usize <= *best {
                return;
            }
            let mut rest = cand;
            while rest != 0 {
                if size + rest.count_ones() as usize <= *best {
                    return;
                }
                let v = rest.trailing_zeros() as usize;
                rest &= !(1 << v);
                grow(rest & inc[v], size + 1, best, inc);
            }
        }
        let all = if k == 32 { u32::MAX } else { (1u32 << k) - 1 };
        let mut best = 0;
        grow(all, 0, &mut best, &incomparable);
        Ok(best)
    }

    /// Searches for an order isomorphism onto `other` that also preserves
    /// class sizes. Returns the image of each class.
    pub fn find_isomorphism(&self, other: &QuotientPoset) -> Option<Vec<usize>> {
        let k = self.len();
        if k != other.len() {
            return None;
        }
        let mut sizes_a: Vec<usize> = self.classes.iter().map(Vec::len).collect();
        let mut sizes_b: Vec<usize> = other.classes.iter().map(Vec::len).collect();
        sizes_a.sort_unstable();
        sizes_b.sort_unstable();
        if sizes_a != sizes_b {
            return None;
        }
        let mut image = vec![usize::MAX; k];
        let mut used = vec![false; k];
        fn extend(
            i: usize,
            a: &QuotientPoset,
            b: &QuotientPoset,
            image: &mut [usize],
            used: &mut [bool],
        ) -> bool {
            if i == a.len() {
                return true;
            }
            for cand in 0..b.len() {
                if used[cand] || a.classes[i].len() != b.classes[cand].len() {
                    continue;
                }
                let consistent = (0..i).all(|j| {
                    a.le(i, j) == b.le(cand, image[j]) && a.le(j, i) == b.le(image[j], cand)
                });
                if !consistent {
                    continue;
                }
                image[i] = cand;
                used[cand] = true;
                if extend(i + 1, a, b, image, used) {
                    return true;
                }
                used[cand] = false;
            }
            false
        }
        extend(0, self, other, &mut image, &mut used).then_some(image)
    }

    /// Hasse diagram of the quotient in DOT. `labels` names the source
    /// elements; when absent elements are printed as indices.
    pub fn to_dot(&self, labels: Option<&[String]>) -> String {
        let mut out = String::from("digraph quotient {\n  rankdir=BT;\n  node [shape=box];\n");
        for (i, class) in self.classes.iter().enumerate() {
            let names: Vec<String> = class
                .iter()
                .map(|&e| match labels {
                    Some(l) => l.get(e).cloned().unwrap_or_else(|| e.to_string()),
                    None => e.to_string(),
                })
                .collect();
            let _ = writeln!(out, "  c{i} [label=\"{{{}}}\"];", names.join(", "));
        }
        for (i, j) in self.covers() {
            let _ = writeln!(out, "  c{i} -> c{j};");
        }
        out.push_str("}\n");
        out
    }
}

/// One case of the joint-upper-cone condition: the common upper cone of some
/// finite set of elements, its complement, and whether it is all of `X`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct JointConeCase {
    pub cone_card: Cardinal,
    pub complement_card: Cardinal,
    pub equals_x: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConeKind {
    Countable,
    WholeSet,
    CoCountable,
    CoContinual,
}

impl JointConeCase {
    /// Which of the four permitted shapes the case has, if any. The shapes
    /// are made mutually exclusive by requiring a continual cone in the last
    /// three.
    pub fn kind(&self) -> Option<ConeKind> {
        use Cardinal::*;
        match (self.cone_card, self.complement_card, self.equals_x) {
            (Omega, Continuum, false) => Some(ConeKind::Countable),
            (Continuum, Fin(0), true) => Some(ConeKind::WholeSet),
            (Continuum, Omega, false) => Some(ConeKind::CoCountable),
            (Continuum, Continuum, false) => Some(ConeKind::CoContinual),
            _ => None,
        }
    }
}

/// Symbolic description of a continuum-sized preorder, checked against the
/// premodel axioms without being materialized.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PremodelProfile {
    pub size: Cardinal,
    pub directed: bool,
    pub lower_cone_card: Cardinal,
    pub class_card: Cardinal,
    pub joint_upper_cone_cases: Vec<JointConeCase>,
    pub height: Cardinal,
}

impl PremodelProfile {
    /// The profile of a structure satisfying every axiom, with one case of
    /// each cone shape.
    pub fn conforming() -> Self {
        use Cardinal::*;
        PremodelProfile {
            size: Continuum,
            directed: true,
            lower_cone_card: Omega,
            class_card: Omega,
            joint_upper_cone_cases: vec![
                JointConeCase { cone_card: Omega, complement_card: Continuum, equals_x: false },
                JointConeCase { cone_card: Continuum, complement_card: Fin(0), equals_x: true },
                JointConeCase { cone_card: Continuum, complement_card: Omega, equals_x: false },
                JointConeCase { cone_card: Continuum, complement_card: Continuum, equals_x: false },
            ],
            height: Omega,
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "size: {}", self.size);
        let _ = writeln!(out, "directed: {}", self.directed);
        let _ = writeln!(out, "lower_cone: {}", self.lower_cone_card);
        let _ = writeln!(out, "class: {}", self.class_card);
        let _ = writeln!(out, "height: {}", self.height);
        for c in &self.joint_upper_cone_cases {
            let _ = writeln!(out, "cone: {} {} {}", c.cone_card, c.complement_card, c.equals_x);
        }
        out
    }

    /// Parses `key: value` lines: `size`, `directed`, `lower_cone`, `class`,
    /// `height`, and repeated `cone: <card> <complement> <equals_x>`.
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        const EXPECTED: &str = "`size|directed|lower_cone|class|height|cone: <value>`";
        let mut p = PremodelProfile {
            size: Cardinal::ZERO,
            directed: false,
            lower_cone_card: Cardinal::ZERO,
            class_card: Cardinal::ZERO,
            joint_upper_cone_cases: Vec::new(),
            height: Cardinal::ZERO,
        };
        let card = |ln: usize, s: &str| {
            s.parse::<Cardinal>()
                .map_err(|e| ParseError::new(ln, e.to_string(), "a cardinal token"))
        };
        let boolean = |ln: usize, s: &str| match s {
            "true" => Ok(true),
            "false" => Ok(false),
            _ => Err(ParseError::new(ln, format!("`{s}` is not a boolean"), "`true` or `false`")),
        };
        for (ln, line) in content_lines(text) {
            let (k, v) = key_value(line)
                .ok_or_else(|| ParseError::new(ln, format!("unexpected `{line}`"), EXPECTED))?;
            match k {
                "size" => p.size = card(ln, v)?,
                "directed" => p.directed = boolean(ln, v)?,
                "lower_cone" => p.lower_cone_card = card(ln, v)?,
                "class" => p.class_card = card(ln, v)?,
                "height" => p.height = card(ln, v)?,
                "cone" => {
                    let parts: Vec<&str> = v.split_whitespace().collect();
                    if parts.len() != 3 {
                        return Err(ParseError::new(ln, "cone needs three fields", "`cone: <card> <complement> <equals_x>`"));
                    }
                    p.joint_upper_cone_cases.push(JointConeCase {
                        cone_card: card(ln, parts[0])?,
                        complement_card: card(ln, parts[1])?,
                        equals_x: boolean(ln, parts[2])?,
                    });
                }
                other => return Err(ParseError::new(ln, format!("unknown key `{other}`"), EXPECTED)),
            }
        }
        Ok(p)
    }
}

/// Checks a profile against the premodel axioms. When every axiom holds the
/// report additionally records the consequences: continual width and upward
/// directedness.
pub fn check_premodel(profile: &PremodelProfile) -> Report {
    use Cardinal::*;
    let mut r = Report::new("premodel check");
    r.check(
        "size",
        profile.size == Continuum,
        format!("|X| = {} (must be c)", profile.size),
    );
    r.check(
        "upward-directed",
        profile.directed,
        if profile.directed { "directed" } else { "not upward directed" },
    );
    r.check(
        "lower-cones",
        profile.lower_cone_card == Omega,
        format!("|lower cone| = {} (must be w)", profile.lower_cone_card),
    );
    r.check(
        "sim-classes",
        profile.class_card == Omega,
        format!("|class| = {} (must be w)", profile.class_card),
    );
    for (i, case) in profile.joint_upper_cone_cases.iter().enumerate() {
        let consistent = card_sum(case.cone_card, case.complement_card) == profile.size
            && case.equals_x == case.complement_card.is_zero();
        let kind = case.kind();
        let ok = consistent && kind.is_some();
        let detail = match (kind, consistent) {
            (Some(k), true) => format!("case {i}: {k:?}"),
            (_, false) => format!(
                "case {i}: cone {} + complement {} inconsistent with |X| = {}",
                case.cone_card, case.complement_card, profile.size
            ),
            (None, true) => format!(
                "case {i}: cone {} / complement {} matches none of countable, whole, co-countable, co-continual",
                case.cone_card, case.complement_card
            ),
        };
        r.check("joint-upper-cones", ok, detail);
    }
    let height_ok = profile.height == Omega;
    let height_detail = match profile.height {
        Fin(k) => format!("height {k}: height must be w (a finite height forces a countable set)"),
        Omega => "height w".to_string(),
        other => format!("height {other}: height must be w (countable)"),
    };
    r.check("height", height_ok, height_detail);
    if r.all_passed() {
        r.param("width", Continuum);
        r.param("directed", true);
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    fn closed(n: usize, pairs: &[(usize, usize)]) -> Preorder {
        Preorder::from_pairs(n, pairs).unwrap().close()
    }

    #[test]
    fn closure() {
        let p = closed(3, &[(0, 1), (1, 2)]);
        assert!(p.le(0, 2));
        assert!((0..3).all(|i| p.le(i, i)));
        assert!(!p.le(2, 0));
        assert_eq!(p.close(), p);
        assert_eq!(Preorder::empty(2).close(), Preorder::identity(2));
    }

    #[test]
    fn quotient_examples() {
        let q = closed(2, &[(0, 1), (1, 0)]).sim_quotient().unwrap();
        assert_eq!(q.classes, vec![vec![0, 1]]);

        let q = Preorder::identity(3).sim_quotient().unwrap();
        assert_eq!(q.len(), 3);
        assert!(q.covers().is_empty());

        // 2-cycle {0,1} below 2
        let q = closed(3, &[(0, 1), (1, 0), (1, 2)]).sim_quotient().unwrap();
        assert_eq!(q.classes, vec![vec![0, 1], vec![2]]);
        assert_eq!(q.covers(), vec![(0, 1)]);
        assert!(q.is_partial_order());
    }

    #[test]
    fn quotient_rejects_raw() {
        let raw = Preorder::from_pairs(2, &[(0, 1)]).unwrap();
        assert_eq!(raw.sim_quotient(), Err(PreorderError::NotClosed));
    }

    #[test]
    fn cone_examples() {
        let c = Preorder::chain(3);
        assert_eq!(c.cones(2).unwrap(), (vec![0, 1, 2], vec![2]));
        assert_eq!(c.cones(1).unwrap(), (vec![0, 1], vec![1, 2]));
        let a = Preorder::identity(3);
        assert_eq!(a.cones(1).unwrap(), (vec![1], vec![1]));
        assert_eq!(a.cones(3), Err(PreorderError::OutOfRange { index: 3, n: 3 }));
    }

    #[test]
    fn height_and_width() {
        assert_eq!(Preorder::chain(4).height().unwrap(), 4);
        assert_eq!(Preorder::identity(5).height().unwrap(), 1);
        assert_eq!(closed(2, &[(0, 1), (1, 0)]).height().unwrap(), 1);
        assert_eq!(Preorder::identity(5).width().unwrap(), 5);
        assert_eq!(Preorder::chain(4).width().unwrap(), 1);
        // 2x2 grid: (0,0) < (0,1),(1,0) < (1,1)
        let grid = closed(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]);
        assert_eq!(grid.width().unwrap(), 2);
        assert_eq!(Preorder::identity(0).height().unwrap(), 0);
    }

    #[test]
    fn width_limit() {
        let big = Preorder::identity(21);
        assert_eq!(
            big.width(),
            Err(PreorderError::SizeLimit { classes: 21, limit: 20 })
        );
        assert_eq!(big.width_with_limit(25).unwrap(), 21);
    }

    #[test]
    fn directedness() {
        let top = closed(3, &[(0, 2), (1, 2)]);
        assert!(top.is_upward_directed().unwrap());
        assert!(!Preorder::identity(2).is_upward_directed().unwrap());
        assert!(Preorder::chain(5).is_upward_directed().unwrap());
    }

    #[test]
    fn text_format() {
        let p = Preorder::parse("# chain\nelements: 3\n0 <= 1\n1 <= 2\n").unwrap();
        assert_eq!(p.close(), Preorder::chain(3));
        assert_eq!(Preorder::parse(&p.to_text()).unwrap(), p);
        let err = Preorder::parse("elements: 2\n0 < 1\n").unwrap_err();
        assert!(matches!(err, PreorderError::Parse(ParseError { line: 2, .. })));
        let err = Preorder::parse("elements: 2\n0 <= 5\n").unwrap_err();
        assert!(matches!(err, PreorderError::Parse(ParseError { line: 2, .. })));
    }

    #[test]
    fn dot_export() {
        let q = Preorder::chain(2).sim_quotient().unwrap();
        let dot = q.to_dot(None);
        assert!(dot.contains("c0 -> c1;"));
        assert!(dot.starts_with("digraph quotient {"));
    }

    #[test]
    fn isomorphism_search() {
        let a = closed(3, &[(0, 2), (1, 2)]).sim_quotient().unwrap();
        let b = closed(3, &[(1, 0), (2, 0)]).sim_quotient().unwrap();
        let img = a.find_isomorphism(&b).unwrap();
        assert_eq!(img[2], 0);
        let chain = Preorder::chain(3).sim_quotient().unwrap();
        assert!(a.find_isomorphism(&chain).is_none());
    }

    #[test]
    fn premodel_profiles() {
        let ok = check_premodel(&PremodelProfile::conforming());
        assert!(ok.all_passed(), "{}", ok.render_human());
        assert_eq!(ok.get_param("width"), Some("c"));

        let mut p = PremodelProfile::conforming();
        p.height = Cardinal::Fin(5);
        let r = check_premodel(&p);
        assert_eq!(r.failed_rules(), vec!["height"]);
        assert!(r.get_param("width").is_none());

        let mut p = PremodelProfile::conforming();
        p.lower_cone_card = Cardinal::Continuum;
        assert_eq!(check_premodel(&p).failed_rules(), vec!["lower-cones"]);

        let mut p = PremodelProfile::conforming();
        p.joint_upper_cone_cases.push(JointConeCase {
            cone_card: Cardinal::Fin(3),
            complement_card: Cardinal::Continuum,
            equals_x: false,
        });
        assert_eq!(check_premodel(&p).failed_rules(), vec!["joint-upper-cones"]);
    }

    #[test]
    fn profile_text_round_trip() {
        let p = PremodelProfile::conforming();
        assert_eq!(PremodelProfile::parse(&p.to_text()).unwrap(), p);
    }
}
