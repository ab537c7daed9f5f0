//! Scwols and complexes of finite groups: construction from simplicial
//! complexes and from group actions, axiom validation, morphisms, star
//! amalgamation, and presentations with their abelianizations.

mod action;
mod amalgam;
mod cog;
mod flags;
mod mutation;
mod present;
mod slices;

use std::collections::{BTreeMap, BTreeSet};

pub use action::{induced_cog, GroupAction, InducedCog};
pub use amalgam::{amalgamate, restrict, Amalgam, Piece};
pub use cog::{check_morphism, CogMorphism, CogViolation, ComplexOfGroups};
pub use flags::{Flag, SymmetricFlags};
pub use mutation::{mutate, Mutation};
pub use present::{
    abelianization, backend_presentation, cog_presentation, count_homs_to_cyclic, invariant_factors,
    quotient_presentation, AbelianInvariants, GroupPresentation, Word,
};
pub use slices::{build_y_slices, ConeCellKind, DiscAction, DiscCell, SliceCell, TruncatedAction, YSlices};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CxError {
    #[error("not a simplicial complex: {0}")]
    NotSimplicial(String),
    #[error("invalid scwol: {0}")]
    Scwol(String),
    #[error("element {element} maps cell {cell} to itself without fixing it")]
    Inversion { cell: String, element: String },
    #[error("invalid amalgamation data: {0}")]
    Amalgam(String),
    #[error("complex of groups violates {0}")]
    Violation(CogViolation),
    #[error("{0}")]
    Unsupported(String),
}

/// A small category without loops. Edge `a` goes from `i(a)` to `t(a)`;
/// `compose[(a, b)] = ab` whenever `i(a) = t(b)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Scwol {
    pub labels: Vec<String>,
    pub edges: Vec<(usize, usize)>,
    pub compose: BTreeMap<(usize, usize), usize>,
}

impl Scwol {
    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn i(&self, a: usize) -> usize {
        self.edges[a].0
    }

    pub fn t(&self, a: usize) -> usize {
        self.edges[a].1
    }

    pub fn composable_pairs(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        self.compose.iter().map(|(&(a, b), &c)| (a, b, c))
    }

    /// Composable triples `(a, b, c)`: `i(a) = t(b)` and `i(b) = t(c)`.
    pub fn composable_triples(&self) -> Vec<(usize, usize, usize)> {
        let mut by_target: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (c, &(_, t)) in self.edges.iter().enumerate() {
            by_target.entry(t).or_default().push(c);
        }
        let mut out = Vec::new();
        for &(a, b) in self.compose.keys() {
            for &c in by_target.get(&self.i(b)).into_iter().flatten() {
                out.push((a, b, c));
            }
        }
        out
    }

    pub fn validate(&self) -> Result<(), CxError> {
        let n = self.vertex_count();
        for (a, &(i, t)) in self.edges.iter().enumerate() {
            if i >= n || t >= n {
                return Err(CxError::Scwol(format!("edge {a} has an endpoint out of range")));
            }
            if i == t {
                return Err(CxError::Scwol(format!("edge {a} is a loop")));
            }
        }
        for a in 0..self.edges.len() {
            for b in 0..self.edges.len() {
                let composable = self.i(a) == self.t(b);
                match self.compose.get(&(a, b)) {
                    Some(_) if !composable => return Err(CxError::Scwol(format!("({a}, {b}) composed but not composable"))),
                    None if composable => return Err(CxError::Scwol(format!("({a}, {b}) composable but not composed"))),
                    Some(&ab) if self.i(ab) != self.i(b) || self.t(ab) != self.t(a) => {
                        return Err(CxError::Scwol(format!("{a}·{b} = {ab} has the wrong endpoints")));
                    }
                    _ => {}
                }
            }
        }
        for (a, b, c) in self.composable_triples() {
            let (ab, bc) = (self.compose[&(a, b)], self.compose[&(b, c)]);
            if self.compose[&(ab, c)] != self.compose[&(a, bc)] {
                return Err(CxError::Scwol(format!("composition not associative at ({a}, {b}, {c})")));
            }
        }
        Ok(())
    }

    /// Connected as an undirected graph.
    pub fn is_connected(&self) -> bool {
        let n = self.vertex_count();
        if n == 0 {
            return false;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &(i, t) in &self.edges {
                for (x, y) in [(i, t), (t, i)] {
                    if x == v && !seen[y] {
                        seen[y] = true;
                        stack.push(y);
                    }
                }
            }
        }
        seen.into_iter().all(|s| s)
    }
}

/// A finite simplicial complex as its list of simplices (sorted vertex
/// lists), closed under taking faces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplex {
    pub simplices: Vec<Vec<usize>>,
}

impl SimplicialComplex {
    /// Closes a list of maximal simplices under faces.
    pub fn from_maximal(maximal: &[Vec<usize>]) -> Self {
        let mut all = BTreeSet::new();
        for s in maximal {
            let mut s = s.clone();
            s.sort_unstable();
            s.dedup();
            for mask in 1u64..(1 << s.len()) {
                all.insert(s.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, &v)| v).collect::<Vec<_>>());
            }
        }
        let mut simplices: Vec<Vec<usize>> = all.into_iter().collect();
        simplices.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
        SimplicialComplex { simplices }
    }
}

/// Vertices are the simplices; an edge from `σ'` to `σ` for each strict
/// face `σ ⊂ σ'`, composed by chaining inclusions.
pub fn scwol_from_simplicial(cx: &SimplicialComplex) -> Result<Scwol, CxError> {
    let index: BTreeMap<&Vec<usize>, usize> = cx.simplices.iter().enumerate().map(|(i, s)| (s, i)).collect();
    if index.len() != cx.simplices.len() {
        return Err(CxError::NotSimplicial("repeated simplex".into()));
    }
    for s in &cx.simplices {
        if s.is_empty() || s.windows(2).any(|w| w[0] >= w[1]) {
            return Err(CxError::NotSimplicial(format!("{s:?} is not a sorted non-empty vertex set")));
        }
        for skip in 0..s.len() {
            let face: Vec<usize> = s.iter().enumerate().filter(|&(k, _)| k != skip).map(|(_, &v)| v).collect();
            if !face.is_empty() && !index.contains_key(&face) {
                return Err(CxError::NotSimplicial(format!("face {face:?} of {s:?} is missing")));
            }
        }
    }
    let labels = cx.simplices.iter().map(|s| format!("{s:?}")).collect();
    let mut edges = Vec::new();
    let mut edge_of = BTreeMap::new();
    for (i, big) in cx.simplices.iter().enumerate() {
        for (t, small) in cx.simplices.iter().enumerate() {
            if small.len() < big.len() && small.iter().all(|v| big.binary_search(v).is_ok()) {
                edge_of.insert((i, t), edges.len());
                edges.push((i, t));
            }
        }
    }
    let mut compose = BTreeMap::new();
    for (a, &(ia, ta)) in edges.iter().enumerate() {
        for (b, &(ib, tb)) in edges.iter().enumerate() {
            if ia == tb {
                compose.insert((a, b), edge_of[&(ib, ta)]);
            }
        }
    }
    Ok(Scwol { labels, edges, compose })
}
