//! Witnessed Rudin–Keisler domination between abstract types.
//!
//! An edge `q dominates p via φ` records a `(q,p)`-formula `φ`: every model
//! realizing `q` realizes `p`. Nothing is inferred from type contents.

use std::fmt::Write as _;

use thiserror::Error;

use crate::preorder::{Preorder, QuotientPoset};
use crate::syntax::{content_lines, ParseError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DominationError {
    #[error("unknown type `{0}`")]
    UnknownNode(String),
    #[error("type `{0}` declared twice")]
    DuplicateNode(String),
    #[error("type `{0}` is principal but flagged without a prime model")]
    PrincipalWithoutPrime(String),
    #[error("edge {0} -> {1} is principal but not semi-isolating")]
    PrincipalNotSemi(usize, usize),
    #[error("edge {0} -> {1} names a realization outside 0..{2}")]
    RealizationRange(usize, usize, usize),
    #[error("type `{0}` has no prime model over its realizations")]
    NoPrimeModel(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Node {
    pub id: String,
    pub principal: bool,
    pub prime: bool,
}

/// `dominator` dominates `dominated`, so `dominated ≤_RK dominator`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub dominator: String,
    pub dominated: String,
    pub label: String,
    pub principal: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DominationGraph {
    nodes: Vec<Node>,
    edges: Vec<Edge>,
}

impl DominationGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.nodes.iter().position(|n| n.id == id)
    }

    fn require(&self, id: &str) -> Result<usize, DominationError> {
        self.index_of(id)
            .ok_or_else(|| DominationError::UnknownNode(id.to_string()))
    }

    pub fn node(&self, id: &str) -> Option<&Node> {
        self.index_of(id).map(|i| &self.nodes[i])
    }

    pub fn add_node(&mut self, id: impl Into<String>, principal: bool, prime: bool) -> Result<(), DominationError> {
        let id = id.into();
        if self.index_of(&id).is_some() {
            return Err(DominationError::DuplicateNode(id));
        }
        if principal && !prime {
            return Err(DominationError::PrincipalWithoutPrime(id));
        }
        self.nodes.push(Node { id, principal, prime });
        Ok(())
    }

    /// Sets the prime-model flag. Principal types keep their prime model.
    pub fn set_prime(&mut self, id: &str, prime: bool) -> Result<(), DominationError> {
        let i = self.require(id)?;
        if self.nodes[i].principal && !prime {
            return Err(DominationError::PrincipalWithoutPrime(id.to_string()));
        }
        self.nodes[i].prime = prime;
        Ok(())
    }

    pub fn add_edge(
        &mut self,
        dominator: &str,
        dominated: &str,
        label: impl Into<String>,
        principal: bool,
    ) -> Result<(), DominationError> {
        self.require(dominator)?;
        self.require(dominated)?;
        self.edges.push(Edge {
            dominator: dominator.to_string(),
            dominated: dominated.to_string(),
            label: label.into(),
            principal,
        });
        Ok(())
    }

    pub fn has_edge_labeled(&self, dominator: &str, dominated: &str, label: &str) -> bool {
        self.edges
            .iter()
            .any(|e| e.dominator == dominator && e.dominated == dominated && e.label == label)
    }

    /// `p ≤ q` iff `q` dominates `p`, closed under reflexivity and
    /// transitivity. Indices follow node declaration order.
    pub fn rk_preorder(&self) -> Preorder {
        let mut p = Preorder::empty(self.nodes.len());
        for e in &self.edges {
            let q = self.index_of(&e.dominator).expect("edge endpoints are declared");
            let d = self.index_of(&e.dominated).expect("edge endpoints are declared");
            p.insert(d, q).expect("indices in range");
        }
        p.close()
    }

    /// The full domination preorder, without restricting to types that
    /// carry prime models.
    pub fn rkt_structure(&self) -> Preorder {
        self.rk_preorder()
    }

    fn principal_reach(&self) -> Preorder {
        let mut p = Preorder::empty(self.nodes.len());
        for e in self.edges.iter().filter(|e| e.principal) {
            let q = self.index_of(&e.dominator).expect("declared");
            let d = self.index_of(&e.dominated).expect("declared");
            p.insert(d, q).expect("indices in range");
        }
        p.close()
    }

    /// Principal witnesses in both directions. A type is strongly equivalent
    /// to itself through `x ≈ y`.
    pub fn strong_equiv(&self, p: &str, q: &str) -> Result<bool, DominationError> {
        let a = self.require(p)?;
        let b = self.require(q)?;
        Ok(self.principal_reach().equiv(a, b))
    }

    /// Isomorphism types of prime models over types, ordered by domination.
    pub fn rk_structure(&self) -> RkStructure {
        let prime: Vec<usize> = (0..self.nodes.len()).filter(|&i| self.nodes[i].prime).collect();
        let reach = self.principal_reach();
        let mut iso_classes: Vec<Vec<usize>> = Vec::new();
        for &i in &prime {
            match iso_classes.iter_mut().find(|c| reach.equiv(c[0], i)) {
                Some(c) => c.push(i),
                None => iso_classes.push(vec![i]),
            }
        }
        let full = self.rk_preorder();
        let reps: Vec<usize> = iso_classes.iter().map(|c| c[0]).collect();
        let order = full.restrict(&reps);
        let quotient = order.sim_quotient().expect("restriction of a closed relation is closed");
        RkStructure {
            iso_classes: iso_classes
                .iter()
                .map(|c| c.iter().map(|&i| self.nodes[i].id.clone()).collect())
                .collect(),
            order,
            quotient,
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for n in &self.nodes {
            let _ = write!(out, "type {}", n.id);
            if n.principal {
                out.push_str(" principal");
            }
            if n.prime {
                out.push_str(" prime");
            }
            out.push('\n');
        }
        for e in &self.edges {
            let _ = write!(out, "{} dominates {} via {}", e.dominator, e.dominated, e.label);
            if e.principal {
                out.push_str(" principal");
            }
            out.push('\n');
        }
        out
    }

    /// Parses `type <id> [principal] [prime]` and
    /// `<q> dominates <p> via <label> [principal]` lines.
    pub fn parse(text: &str) -> Result<Self, DominationError> {
        const NODE: &str = "`type <id> [principal] [prime]`";
        const EDGE: &str = "`<q> dominates <p> via <label> [principal]`";
        let mut g = DominationGraph::new();
        for (ln, line) in content_lines(text) {
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks[0] == "type" {
                if toks.len() < 2 {
                    return Err(ParseError::new(ln, "missing type id", NODE).into());
                }
                let mut principal = false;
                let mut prime = false;
                for flag in &toks[2..] {
                    match *flag {
                        "principal" => principal = true,
                        "prime" => prime = true,
                        other => return Err(ParseError::new(ln, format!("unknown flag `{other}`"), NODE).into()),
                    }
                }
                g.add_node(toks[1], principal, prime)
                    .map_err(|e| ParseError::new(ln, e.to_string(), NODE))?;
            } else if toks.len() >= 5 && toks[1] == "dominates" && toks[3] == "via" {
                let principal = match toks.get(5) {
                    None => false,
                    Some(&"principal") if toks.len() == 6 => true,
                    Some(other) => {
                        return Err(ParseError::new(ln, format!("unexpected `{other}`"), EDGE).into())
                    }
                };
                g.add_edge(toks[0], toks[2], toks[4], principal)
                    .map_err(|e| ParseError::new(ln, e.to_string(), EDGE))?;
            } else {
                return Err(ParseError::new(ln, format!("unexpected `{line}`"), "a type line or an edge line").into());
            }
        }
        Ok(g)
    }
}

/// `iso_classes[k]` lists the strongly equivalent prime types forming one
/// isomorphism type; `order` is the domination preorder on those classes and
/// `quotient` its `~`-quotient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RkStructure {
    pub iso_classes: Vec<Vec<String>>,
    pub order: Preorder,
    pub quotient: QuotientPoset,
}

/// Realizations `0..size` of one type with isolation data between them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RealizationDigraph {
    pub type_id: String,
    pub size: usize,
    edges: Vec<RealizationEdge>,
}

/// `tp(b/a)` is principal, and/or `a` semi-isolates `b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RealizationEdge {
    pub from: usize,
    pub to: usize,
    pub principal: bool,
    pub semi_isolates: bool,
}

impl RealizationDigraph {
    pub fn new(type_id: impl Into<String>, size: usize) -> Self {
        RealizationDigraph {
            type_id: type_id.into(),
            size,
            edges: Vec::new(),
        }
    }

    pub fn add_edge(&mut self, from: usize, to: usize, principal: bool, semi_isolates: bool) -> Result<(), DominationError> {
        if from >= self.size || to >= self.size {
            return Err(DominationError::RealizationRange(from, to, self.size));
        }
        if principal && !semi_isolates {
            return Err(DominationError::PrincipalNotSemi(from, to));
        }
        self.edges.push(RealizationEdge {
            from,
            to,
            principal,
            semi_isolates,
        });
        Ok(())
    }

    pub fn edges(&self) -> &[RealizationEdge] {
        &self.edges
    }
}

/// Whether the isolation relation on realizations is non-symmetric: some
/// `a → b` is principal while `b` does not semi-isolate `a`.
pub fn limit_exists_over(g: &DominationGraph, r: &RealizationDigraph) -> Result<bool, DominationError> {
    let node = g
        .node(&r.type_id)
        .ok_or_else(|| DominationError::UnknownNode(r.type_id.clone()))?;
    if !node.prime {
        return Err(DominationError::NoPrimeModel(r.type_id.clone()));
    }
    Ok(r.edges.iter().any(|e| {
        e.principal
            && !r
                .edges
                .iter()
                .any(|back| back.from == e.to && back.to == e.from && back.semi_isolates)
    }))
}
