//! Independent oracles used by the integration tests. Nothing here calls the
//! library routine it is compared against.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rand::Rng;
use rkbench::operators::StructSpec;
use rkbench::typespace::Color;
use rkbench::{Cardinal, Preorder};

pub const VALUES: [Cardinal; 3] = [Cardinal::Omega, Cardinal::Omega1, Cardinal::Continuum];

/// `Fin(0..n)` followed by the three infinite values.
pub fn sample_cardinals(n: u64) -> Vec<Cardinal> {
    (0..n).map(Cardinal::Fin).chain(VALUES).collect()
}

/// Reference rank: naturals, then `ω`, `ω₁`, `2^ω`, with `ω₁` lifted to
/// `2^ω` under CH.
pub fn rank(c: Cardinal, ch: bool) -> (u8, u64) {
    match c {
        Cardinal::Fin(k) => (0, k),
        Cardinal::Omega => (1, 0),
        Cardinal::Omega1 => (if ch { 3 } else { 2 }, 0),
        Cardinal::Continuum => (3, 0),
    }
}

pub fn oracle_sum(a: Cardinal, b: Cardinal) -> Cardinal {
    match (a, b) {
        (Cardinal::Fin(x), Cardinal::Fin(y)) => Cardinal::Fin(x + y),
        _ => {
            // Stored values never identify ω₁ with 2^ω.
            if rank(a, false) >= rank(b, false) {
                a
            } else {
                b
            }
        }
    }
}

/// Random relation on `n` points with edge probability `density`.
pub fn random_relation<R: Rng>(rng: &mut R, n: usize, density: f64) -> Vec<(usize, usize)> {
    let mut pairs = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if a != b && rng.gen_bool(density) {
                pairs.push((a, b));
            }
        }
    }
    pairs
}

/// Reflexive-transitive closure by composing until nothing changes.
pub fn oracle_closure(n: usize, pairs: &[(usize, usize)]) -> Vec<Vec<bool>> {
    let mut m = vec![vec![false; n]; n];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = true;
    }
    for &(a, b) in pairs {
        m[a][b] = true;
    }
    loop {
        let mut changed = false;
        for a in 0..n {
            for b in 0..n {
                if !m[a][b] && (0..n).any(|c| m[a][c] && m[c][b]) {
                    m[a][b] = true;
                    changed = true;
                }
            }
        }
        if !changed {
            return m;
        }
    }
}

/// Longest chain and largest antichain of pairwise non-equivalent elements,
/// by enumerating every subset.
pub fn brute_height_width(p: &Preorder) -> (usize, usize) {
    let n = p.len();
    let (mut height, mut width) = (0, 0);
    for mask in 0u32..(1 << n) {
        let members: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        let pairs = || members.iter().enumerate().flat_map(|(k, &a)| members[k + 1..].iter().map(move |&b| (a, b)));
        let chain = pairs().all(|(a, b)| (p.le(a, b) || p.le(b, a)) && !(p.le(a, b) && p.le(b, a)));
        let antichain = pairs().all(|(a, b)| !p.le(a, b) && !p.le(b, a));
        if chain {
            height = height.max(members.len());
        }
        if antichain {
            width = width.max(members.len());
        }
    }
    (height, width)
}

/// Quotient described by class sizes and the order between classes.
#[derive(Debug, Clone)]
pub struct Shape {
    pub sizes: Vec<usize>,
    pub le: Vec<Vec<bool>>,
}

impl Shape {
    pub fn of_preorder(p: &Preorder) -> Shape {
        let n = p.len();
        let mut reps: Vec<usize> = Vec::new();
        let mut sizes = Vec::new();
        for a in 0..n {
            match reps.iter().position(|&r| p.le(a, r) && p.le(r, a)) {
                Some(k) => sizes[k] += 1,
                None => {
                    reps.push(a);
                    sizes.push(1);
                }
            }
        }
        let le = reps.iter().map(|&a| reps.iter().map(|&b| p.le(a, b)).collect()).collect();
        Shape { sizes, le }
    }
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(k - 1) {
        for slot in 0..=p.len() {
            let mut q = p.clone();
            q.insert(slot, k - 1);
            out.push(q);
        }
    }
    out
}

/// Isomorphism of two shapes by trying every bijection.
pub fn shapes_isomorphic(a: &Shape, b: &Shape) -> bool {
    let k = a.sizes.len();
    if k != b.sizes.len() {
        return false;
    }
    permutations(k).into_iter().any(|pi| {
        (0..k).all(|i| a.sizes[i] == b.sizes[pi[i]])
            && (0..k).all(|i| (0..k).all(|j| a.le[i][j] == b.le[pi[i]][pi[j]]))
    })
}

/// Limit-count identity families, rewritten from their defining formulas.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    OverType,
    OverSequence,
}

/// The words equated with `x` by one identity in which `x` is the
/// generating side.
fn partners(family: Family, lambda: Cardinal, x: &[u32]) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let s = x.len() - 1;
    let last = x[s];
    let finite = lambda.finite().map(|n| n as u32);
    match (family, finite) {
        (Family::OverType, Some(n)) => {
            if s == 0 && last >= n {
                out.push(vec![n - 1]);
            }
            if s == 1 && x[0] == x[1] && x[0] < n {
                out.push(vec![x[0]]);
            }
            if s >= 1 && x[..s].iter().min().is_some_and(|&m| m > last) {
                out.push(vec![last]);
            }
        }
        (Family::OverType, None) => {
            if s == 1 && x[0] == x[1] {
                out.push(vec![x[0]]);
            }
            if s >= 1 && x[..s].iter().min().is_some_and(|&m| m > last) {
                out.push(vec![last]);
            }
            if s == 1 && x[0] < x[1] {
                out.push((x[0]..=x[1]).collect());
            }
        }
        (Family::OverSequence, Some(n)) => {
            if s == 0 && last >= n {
                out.push(vec![n - 1]);
            }
            if s >= 1 && x[..s].iter().max().is_some_and(|&m| m < last) {
                out.push(vec![last; s + 1]);
            }
        }
        (Family::OverSequence, None) => {
            if s >= 1 && x[..s].iter().max().is_some_and(|&m| m < last) {
                out.push(vec![last; s + 1]);
            }
            let n0 = x[0];
            if s >= 1 && n0 as usize + s <= last as usize {
                out.push((n0..=n0 + s as u32).collect());
            }
            if last > n0 {
                let t = (last - n0) as usize;
                if t > 0 && t < s {
                    let mut w: Vec<u32> = (n0..=last).collect();
                    w.extend(std::iter::repeat(last).take(s - t));
                    out.push(w);
                }
            }
        }
    }
    out
}

fn all_words(alphabet: u32, max_len: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut layer: Vec<Vec<u32>> = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for l in 0..alphabet {
                let mut v = w.clone();
                v.push(l);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

/// Number of classes of words of length `1..=max_len` over `0..alphabet`
/// under the bounded congruence: an identity may be applied to any factor
/// of a word provided the rewritten word stays within the bound.
pub fn oracle_count(
    family: Family,
    lambda: Cardinal,
    extra: &[(Vec<u32>, Vec<u32>)],
    alphabet: u32,
    max_len: usize,
) -> usize {
    let words = all_words(alphabet, max_len);
    let index: HashMap<Vec<u32>, usize> = words.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
    let mut parent: Vec<usize> = (0..words.len()).collect();
    for (wi, w) in words.iter().enumerate() {
        for i in 0..w.len() {
            for j in i + 1..=w.len() {
                let x = &w[i..j];
                let mut ys = partners(family, lambda, x);
                for (l, r) in extra {
                    if x == l.as_slice() {
                        ys.push(r.clone());
                    }
                    if x == r.as_slice() {
                        ys.push(l.clone());
                    }
                }
                for y in ys {
                    let mut v = w[..i].to_vec();
                    v.extend(&y);
                    v.extend(&w[j..]);
                    if let Some(&vi) = index.get(&v) {
                        let (a, b) = (find(&mut parent, wi), find(&mut parent, vi));
                        parent[a] = b;
                    }
                }
            }
        }
    }
    (0..words.len()).filter(|&i| find(&mut parent, i) == i).count()
}

/// Triple admissibility for small theories.
pub fn oracle_small(p: Cardinal, l: Cardinal, npl: Cardinal) -> bool {
    use Cardinal::*;
    if (p, l, npl) == (Fin(1), Fin(0), Fin(0)) {
        return true;
    }
    let p_ok = matches!(p, Fin(k) if k >= 2) || p == Omega;
    let l_ok = l != Fin(0);
    p_ok && l_ok && npl == Fin(0)
}

/// Triple admissibility for theories with continuum many types, under CH.
pub fn oracle_tc(p: Cardinal, l: Cardinal, npl: Cardinal) -> bool {
    use Cardinal::*;
    let lift = |x: Cardinal| if x == Omega1 { Continuum } else { x };
    let (p, l, npl) = (lift(p), lift(l), lift(npl));
    let countable_or_c = |x: Cardinal| x != Omega1;
    let fam1 = p == Continuum && l == Continuum && countable_or_c(npl);
    let fam2 = (p, l, npl) == (Fin(0), Fin(0), Continuum);
    let fam3 = p != Fin(0) && countable_or_c(p) && countable_or_c(l) && npl == Continuum;
    fam1 || fam2 || fam3
}

/// For each source element of `icp` on `sub`: its color and the sizes of
/// the parts of its `R_0`-image, keyed by membership in `R_1..R_depth`.
pub fn icp_parts(spec: &StructSpec, sub: &str, depth: u32) -> Vec<(Color, BTreeMap<Vec<bool>, usize>)> {
    let rel = |i: u32| spec.binary.get(&format!("icp.{sub}.R{i}")).cloned().unwrap_or_default();
    let r0 = rel(0);
    let higher: Vec<BTreeSet<(usize, usize)>> = (1..=depth).map(rel).collect();
    let mut out = Vec::new();
    for &a in &spec.unary[sub] {
        let mut parts: BTreeMap<Vec<bool>, usize> = BTreeMap::new();
        for &(x, y) in &r0 {
            if x == a {
                let key: Vec<bool> = higher.iter().map(|r| r.contains(&(a, y))).collect();
                *parts.entry(key).or_default() += 1;
            }
        }
        out.push((spec.color(a).expect("carrier elements are colored"), parts));
    }
    out
}

/// Whether the icp part structure is exactly right: a color-`n` element has
/// `2^min(n, depth)` nonempty parts, all of size `fanout`, never using
/// `R_i` for `i > n`, and no `R_i` pair lies outside `R_0`.
pub fn icp_parts_exact(spec: &StructSpec, sub: &str, depth: u32) -> bool {
    let r0 = spec.binary.get(&format!("icp.{sub}.R0")).cloned().unwrap_or_default();
    let nested = (1..=depth).all(|i| {
        spec.binary
            .get(&format!("icp.{sub}.R{i}"))
            .is_none_or(|r| r.iter().all(|t| r0.contains(t)))
    });
    let sources: BTreeSet<usize> = spec.unary[sub].clone();
    let no_stray = r0.iter().all(|(a, _)| sources.contains(a));
    nested
        && no_stray
        && icp_parts(spec, sub, depth).into_iter().all(|(color, parts)| {
            let m = match color {
                Color::Fin(n) => n.min(depth),
                Color::Inf => depth,
            };
            parts.len() == 1 << m
                && parts.values().all(|&s| s == spec.fanout)
                && parts.keys().all(|k| k.iter().skip(m as usize).all(|b| !b))
        })
}
