//! Vertex links of the modified coned-off space as metric graphs whose edge
//! lengths are affine in `x = θ/π`, with exact girth certificates.

mod build;
mod girth;

use std::collections::BTreeSet;
use std::fmt;

use num_rational::Rational64;
use num_traits::{Signed, Zero};

pub use build::{
    link_at_apex, link_at_interior_point, link_at_k_center, link_at_tree_vertex, ApexLink, CircleLink, InteriorLinkData,
    TreeGlue, TreeVertexLinkData,
};
pub use girth::{verify_link_condition, weighted_girth, Girth, GirthCertificate};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinkError {
    #[error("edge {0}-{1} has negative length at x = {2}")]
    NegativeWeight(usize, usize, Rational64),
    #[error("inconsistent slice data: {0}")]
    Inconsistent(String),
    #[error("circle of length {0}π is shorter than R_min allows")]
    ShortGenerator(Rational64),
}

/// Length `(p + q·x)·π`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Affine {
    pub p: Rational64,
    pub q: Rational64,
}

impl Affine {
    pub fn new(p: Rational64, q: Rational64) -> Self {
        Affine { p, q }
    }

    pub fn constant(p: Rational64) -> Self {
        Affine { p, q: Rational64::zero() }
    }

    /// Value at `x`, in units of π.
    pub fn at(&self, x: Rational64) -> Rational64 {
        self.p + self.q * x
    }

    pub fn add(&self, o: &Affine) -> Affine {
        Affine { p: self.p + o.p, q: self.q + o.q }
    }
}

impl fmt::Display for Affine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.q.is_negative() { '-' } else { '+' };
        write!(f, "({} {} {}·x)·π", self.p, sign, self.q.abs())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LinkClass {
    Apex,
    Interior,
    TreeVertex,
    Circle,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VertexKind {
    /// Interior point: the merged outward directions.
    A,
    B,
    /// Interior point: inward directions, one class per cone up to gluing.
    C,
    D,
    /// Tree vertex: tree edges.
    TreeA,
    /// Tree vertex: directions at angle `θ_c` from a radius.
    TreeB,
    /// Tree vertex: radii.
    TreeC,
    Circle,
}

impl VertexKind {
    /// Side of the bipartition of an interior link.
    fn interior_side(self) -> Option<bool> {
        match self {
            VertexKind::A | VertexKind::C => Some(false),
            VertexKind::B | VertexKind::D => Some(true),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinkEdge {
    pub u: usize,
    pub v: usize,
    pub weight: Affine,
}

/// Link graph over the closed parameter interval `[x_lo, x_hi]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MetricLinkGraph {
    pub class: LinkClass,
    pub labels: Vec<String>,
    pub kinds: Vec<VertexKind>,
    pub edges: Vec<LinkEdge>,
    pub x_lo: Rational64,
    pub x_hi: Rational64,
}

impl MetricLinkGraph {
    pub fn new(class: LinkClass, x_lo: Rational64, x_hi: Rational64) -> Self {
        assert!(x_lo <= x_hi);
        MetricLinkGraph { class, labels: Vec::new(), kinds: Vec::new(), edges: Vec::new(), x_lo, x_hi }
    }

    pub fn add_vertex(&mut self, label: impl Into<String>, kind: VertexKind) -> usize {
        self.labels.push(label.into());
        self.kinds.push(kind);
        self.labels.len() - 1
    }

    pub fn add_edge(&mut self, u: usize, v: usize, weight: Affine) {
        self.edges.push(LinkEdge { u, v, weight });
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn valence(&self, v: usize) -> usize {
        self.edges.iter().filter(|e| e.u == v || e.v == v).count()
    }

    pub fn find(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.iter().any(|e| (e.u, e.v) == (u, v) || (e.u, e.v) == (v, u))
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph link {\n");
        for (l, k) in self.labels.iter().zip(&self.kinds) {
            out.push_str(&format!("  \"{l}\" [kind=\"{k:?}\"];\n"));
        }
        for e in &self.edges {
            out.push_str(&format!("  \"{}\" -- \"{}\" [label=\"{}\"];\n", self.labels[e.u], self.labels[e.v], e.weight));
        }
        out.push_str("}\n");
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StructureViolation {
    Loop(String),
    DoubleEdge(String, String),
    /// An edge inside one side of the bipartition, or within one type.
    SameSide(String, String),
    Valence { vertex: String, valence: usize, expected: &'static str },
    Count { kind: VertexKind, count: usize },
    MissingEdge(String, String),
    /// The edges of length `π - 2θ` contain a cycle.
    ShortCycle,
    WrongKind(String),
}

impl fmt::Display for StructureViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StructureViolation::Loop(v) => write!(f, "loop at {v}"),
            StructureViolation::DoubleEdge(u, v) => write!(f, "double edge {u}-{v}"),
            StructureViolation::SameSide(u, v) => write!(f, "edge {u}-{v} inside one part"),
            StructureViolation::Valence { vertex, valence, expected } => {
                write!(f, "{vertex} has valence {valence}, expected {expected}")
            }
            StructureViolation::Count { kind, count } => write!(f, "{count} vertices of kind {kind:?}"),
            StructureViolation::MissingEdge(u, v) => write!(f, "missing edge {u}-{v}"),
            StructureViolation::ShortCycle => write!(f, "short edges contain a cycle"),
            StructureViolation::WrongKind(v) => write!(f, "vertex {v} does not belong to this link class"),
        }
    }
}

/// Checks the structural claims for the graph's class.
pub fn validate_structure(g: &MetricLinkGraph) -> Result<(), StructureViolation> {
    let name = |v: usize| g.labels[v].clone();
    let mut seen = BTreeSet::new();
    for e in &g.edges {
        if e.u == e.v {
            return Err(StructureViolation::Loop(name(e.u)));
        }
        if !seen.insert((e.u.min(e.v), e.u.max(e.v))) {
            return Err(StructureViolation::DoubleEdge(name(e.u), name(e.v)));
        }
    }
    match g.class {
        LinkClass::Interior => validate_interior(g),
        LinkClass::TreeVertex => validate_tree(g),
        LinkClass::Apex | LinkClass::Circle => Ok(()),
    }
}

fn validate_interior(g: &MetricLinkGraph) -> Result<(), StructureViolation> {
    let name = |v: usize| g.labels[v].clone();
    let of = |k: VertexKind| (0..g.vertex_count()).filter(|&v| g.kinds[v] == k).collect::<Vec<_>>();
    for v in 0..g.vertex_count() {
        if g.kinds[v].interior_side().is_none() {
            return Err(StructureViolation::WrongKind(name(v)));
        }
    }
    let (a, b) = (of(VertexKind::A), of(VertexKind::B));
    for (k, list) in [(VertexKind::A, &a), (VertexKind::B, &b)] {
        if list.len() != 1 {
            return Err(StructureViolation::Count { kind: k, count: list.len() });
        }
    }
    let (a, b) = (a[0], b[0]);
    for e in &g.edges {
        if g.kinds[e.u].interior_side() == g.kinds[e.v].interior_side() {
            return Err(StructureViolation::SameSide(name(e.u), name(e.v)));
        }
    }
    if !g.has_edge(a, b) {
        return Err(StructureViolation::MissingEdge(name(a), name(b)));
    }
    for (hub, k) in [(a, VertexKind::D), (b, VertexKind::C)] {
        for v in of(k) {
            if !g.has_edge(hub, v) {
                return Err(StructureViolation::MissingEdge(name(hub), name(v)));
            }
            if g.valence(v) < 2 {
                return Err(StructureViolation::Valence { vertex: name(v), valence: g.valence(v), expected: "at least 2" });
            }
        }
    }
    // short edges join a hub to its spokes; a cycle among them would need two hubs
    let short: Vec<(usize, usize)> = g
        .edges
        .iter()
        .filter(|e| {
            let ks = [g.kinds[e.u], g.kinds[e.v]];
            ks.contains(&VertexKind::A) && ks.contains(&VertexKind::D)
                || ks.contains(&VertexKind::B) && ks.contains(&VertexKind::C)
        })
        .map(|e| (e.u, e.v))
        .collect();
    if has_cycle(g.vertex_count(), &short) {
        return Err(StructureViolation::ShortCycle);
    }
    Ok(())
}

fn validate_tree(g: &MetricLinkGraph) -> Result<(), StructureViolation> {
    let name = |v: usize| g.labels[v].clone();
    for v in 0..g.vertex_count() {
        let (ok, expected) = match g.kinds[v] {
            VertexKind::TreeA => (g.valence(v) <= 1, "at most 1"),
            VertexKind::TreeB => (g.valence(v) >= 2, "at least 2"),
            VertexKind::TreeC => (g.valence(v) == 2, "exactly 2"),
            _ => return Err(StructureViolation::WrongKind(name(v))),
        };
        if !ok {
            return Err(StructureViolation::Valence { vertex: name(v), valence: g.valence(v), expected });
        }
    }
    for e in &g.edges {
        if g.kinds[e.u] == g.kinds[e.v] {
            return Err(StructureViolation::SameSide(name(e.u), name(e.v)));
        }
    }
    Ok(())
}

fn has_cycle(n: usize, edges: &[(usize, usize)]) -> bool {
    let mut parent: Vec<usize> = (0..n).collect();
    fn root(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for &(u, v) in edges {
        let (ru, rv) = (root(&mut parent, u), root(&mut parent, v));
        if ru == rv {
            return true;
        }
        parent[ru] = rv;
    }
    false
}

#[cfg(test)]
mod tests;
