use std::cmp::Reverse;
use std::collections::BinaryHeap;

use num_rational::Rational64;
use num_traits::{Signed, Zero};

use super::{LinkError, MetricLinkGraph};

/// Shortest injective cycle at a parameter value; `length` is in units of π
/// and `None` for a forest.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Girth {
    pub x: Rational64,
    pub length: Option<Rational64>,
    pub cycle: Vec<usize>,
}

impl Girth {
    pub fn at_least(&self, bound: Rational64) -> bool {
        self.length.is_none_or(|l| l >= bound)
    }
}

/// Removes each edge in turn and closes it with a shortest path between
/// its endpoints. Zero lengths are allowed.
pub fn weighted_girth(g: &MetricLinkGraph, x: Rational64) -> Result<Girth, LinkError> {
    let n = g.vertex_count();
    let w: Vec<Rational64> = g.edges.iter().map(|e| e.weight.at(x)).collect();
    for (e, wi) in g.edges.iter().zip(&w) {
        if wi.is_negative() {
            return Err(LinkError::NegativeWeight(e.u, e.v, x));
        }
    }
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (i, e) in g.edges.iter().enumerate() {
        adj[e.u].push((e.v, i));
        adj[e.v].push((e.u, i));
    }
    let mut best: Option<(Rational64, Vec<usize>)> = None;
    for (skip, e) in g.edges.iter().enumerate() {
        if e.u == e.v {
            if best.as_ref().is_none_or(|(b, _)| w[skip] < *b) {
                best = Some((w[skip], vec![e.u]));
            }
            continue;
        }
        if let Some((d, path)) = shortest_path(&adj, &w, e.u, e.v, skip) {
            let total = d + w[skip];
            if best.as_ref().is_none_or(|(b, _)| total < *b) {
                best = Some((total, path));
            }
        }
    }
    Ok(match best {
        Some((length, cycle)) => Girth { x, length: Some(length), cycle },
        None => Girth { x, length: None, cycle: Vec::new() },
    })
}

fn shortest_path(
    adj: &[Vec<(usize, usize)>],
    w: &[Rational64],
    from: usize,
    to: usize,
    skip: usize,
) -> Option<(Rational64, Vec<usize>)> {
    let n = adj.len();
    let mut dist: Vec<Option<Rational64>> = vec![None; n];
    let mut prev = vec![usize::MAX; n];
    let mut heap = BinaryHeap::new();
    dist[from] = Some(Rational64::zero());
    heap.push(Reverse((Rational64::zero(), from)));
    while let Some(Reverse((d, u))) = heap.pop() {
        if dist[u].is_some_and(|x| d > x) {
            continue;
        }
        if u == to {
            break;
        }
        for &(v, i) in &adj[u] {
            if i == skip {
                continue;
            }
            let nd = d + w[i];
            if dist[v].is_none_or(|x| nd < x) {
                dist[v] = Some(nd);
                prev[v] = u;
                heap.push(Reverse((nd, v)));
            }
        }
    }
    let d = dist[to]?;
    let mut path = vec![to];
    while *path.last().unwrap() != from {
        path.push(prev[*path.last().unwrap()]);
    }
    path.reverse();
    Some((d, path))
}

/// Girth at both ends of the parameter interval; every cycle length is
/// affine in `x`, so the bound at the ends covers the whole interval.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GirthCertificate {
    pub passes: bool,
    pub at_lo: Girth,
    pub at_hi: Girth,
}

impl GirthCertificate {
    /// The smaller of the two endpoint girths, `None` for a forest.
    pub fn girth(&self) -> Option<Rational64> {
        match (self.at_lo.length, self.at_hi.length) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        }
    }
}

pub fn verify_link_condition(g: &MetricLinkGraph) -> Result<GirthCertificate, LinkError> {
    let two = Rational64::from_integer(2);
    let at_lo = weighted_girth(g, g.x_lo)?;
    let at_hi = weighted_girth(g, g.x_hi)?;
    Ok(GirthCertificate { passes: at_lo.at_least(two) && at_hi.at_least(two), at_lo, at_hi })
}
