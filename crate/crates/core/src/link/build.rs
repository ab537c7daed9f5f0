use std::collections::{BTreeMap, BTreeSet};

use num_rational::Rational64;

use super::{Affine, LinkClass, LinkError, MetricLinkGraph, VertexKind};
use crate::geom::{CriticalAngle, SliceRelation};

/// Link of an apex: a line for a full cone, a path for a chart over finitely
/// many base edges. It has no cycles.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ApexLink {
    /// Periodic line; one period covers `period` base edges.
    Line { period: usize },
    Path { vertices: usize },
}

impl ApexLink {
    pub fn girth(&self) -> Option<Rational64> {
        None
    }
}

pub fn link_at_apex(period: usize, edges_in_chart: Option<usize>) -> ApexLink {
    match edges_in_chart {
        Some(k) => ApexLink::Path { vertices: k },
        None => ApexLink::Line { period },
    }
}

/// Link of the centre of a quotient polygon: a circle of `length` base
/// angles `2π/R_min`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CircleLink {
    pub edges: usize,
    /// Units of π.
    pub length: Rational64,
    pub passes: bool,
}

pub fn link_at_k_center(translation_length: usize, r_min: usize) -> Result<CircleLink, LinkError> {
    let length = Rational64::new(2 * translation_length as i64, r_min as i64);
    if translation_length < r_min {
        return Err(LinkError::ShortGenerator(length));
    }
    Ok(CircleLink { edges: translation_length, length, passes: length >= Rational64::from_integer(2) })
}

/// Cones through an interior point and the slices joining them.
#[derive(Clone, Debug, Default)]
pub struct InteriorLinkData {
    pub cones: usize,
    /// `(i, j, relation, same_orientation)`: the point lies in a slice shared
    /// by cones `i` and `j`, with the given relation as seen from `i`.
    pub gluings: Vec<(usize, usize, SliceRelation, bool)>,
}

// per-cone slots: outward backward, outward forward, inward forward, inward backward
const IA: usize = 0;
const IB: usize = 1;
const IC: usize = 2;
const ID: usize = 3;

fn interior_slots(rel: SliceRelation) -> Result<&'static [usize], LinkError> {
    Ok(match rel {
        SliceRelation::Interior => &[IA, IB, IC, ID],
        SliceRelation::StartBoundary => &[IA, IB, IC],
        SliceRelation::EndBoundary => &[IA, IB, ID],
        SliceRelation::Corner => &[IA, IB],
        SliceRelation::Outside => return Err(LinkError::Inconsistent("gluing outside the slice".into())),
    })
}

/// The link at a point `u` of a cone interior, over `x ∈ [θ_c/π, 1/2]`.
pub fn link_at_interior_point(data: &InteriorLinkData, theta: CriticalAngle) -> Result<MetricLinkGraph, LinkError> {
    for &(i, j, _, _) in &data.gluings {
        if i >= data.cones || j >= data.cones {
            return Err(LinkError::Inconsistent(format!("cone index out of range in gluing {i}-{j}")));
        }
    }
    // orient every cone like the first cone of its component; slots below
    // are in that common frame
    let flipped = orientations(data)?;
    let swap = |s: usize| [IB, IA, ID, IC][s];
    let global = |k: usize, s: usize| 4 * k + if flipped[k] { swap(s) } else { s };
    let mut uf = UnionFind::new(4 * data.cones);
    for &(i, j, rel, same) in &data.gluings {
        for &s in interior_slots(rel)? {
            let t = if same { s } else { swap(s) };
            uf.union(global(i, s), global(j, t));
        }
    }
    let kinds = [VertexKind::A, VertexKind::B, VertexKind::C, VertexKind::D];
    let mut g = MetricLinkGraph::new(LinkClass::Interior, theta.over_pi, Rational64::new(1, 2));
    let mut class_vertex: BTreeMap<usize, usize> = BTreeMap::new();
    let mut counters = [0usize; 2];
    for slot in 0..4 * data.cones {
        let root = uf.find(slot);
        let kind = kinds[slot % 4];
        if let Some(&v) = class_vertex.get(&root) {
            if g.kinds[v] != kind {
                return Err(LinkError::Inconsistent(format!("{:?} and {:?} directions identified", g.kinds[v], kind)));
            }
            continue;
        }
        let label = match kind {
            VertexKind::A => "a".to_string(),
            VertexKind::B => "b".to_string(),
            VertexKind::C => {
                counters[0] += 1;
                format!("c{}", counters[0])
            }
            _ => {
                counters[1] += 1;
                format!("d{}", counters[1])
            }
        };
        class_vertex.insert(root, g.add_vertex(label, kind));
    }
    let long = Affine::new(Rational64::from_integer(0), Rational64::from_integer(2));
    let short = Affine::new(Rational64::from_integer(1), Rational64::from_integer(-2));
    let mut seen = BTreeSet::new();
    for k in 0..data.cones {
        let mut v = |s: usize| class_vertex[&uf.find(global(k, s))];
        for (x, y, w) in [(IA, IB, long), (IC, ID, long), (IA, ID, short), (IB, IC, short)] {
            let (p, q) = (v(x), v(y));
            if seen.insert((p.min(q), p.max(q))) {
                g.add_edge(p, q, w);
            }
        }
    }
    Ok(g)
}

fn orientations(data: &InteriorLinkData) -> Result<Vec<bool>, LinkError> {
    let mut flipped: Vec<Option<bool>> = vec![None; data.cones];
    for start in 0..data.cones {
        if flipped[start].is_some() {
            continue;
        }
        flipped[start] = Some(false);
        let mut stack = vec![start];
        while let Some(k) = stack.pop() {
            let fk = flipped[k].unwrap();
            for &(i, j, _, same) in &data.gluings {
                let other = if i == k { j } else if j == k { i } else { continue };
                let want = fk ^ !same;
                match flipped[other] {
                    None => {
                        flipped[other] = Some(want);
                        stack.push(other);
                    }
                    Some(f) if f != want => {
                        return Err(LinkError::Inconsistent(format!("orientations of cones {i} and {j} disagree")));
                    }
                    _ => {}
                }
            }
        }
    }
    Ok(flipped.into_iter().map(|f| f.unwrap_or(false)).collect())
}

/// How a slice through a tree vertex `v` sits relative to `v`, seen from the
/// first cone of the pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TreeGlue {
    /// `v` is an inner vertex of the shared interval.
    Interior,
    /// The interval starts at `v` and continues forward.
    Start,
    /// The interval ends at `v`.
    End,
}

/// Cones through a tree vertex `v`, the tree edges at `v` and the slices.
#[derive(Clone, Debug)]
pub struct TreeVertexLinkData {
    pub tree_edges: usize,
    /// For each cone, its backward and forward tree edges at `v`.
    pub cones: Vec<(usize, usize)>,
    pub gluings: Vec<(usize, usize, TreeGlue, bool)>,
    pub l_max: usize,
    pub r_min: usize,
}

const BB: usize = 0;
const CC: usize = 1;
const BF: usize = 2;

/// The link at a tree vertex. Lengths: `θ_c` between a radius and the
/// adjacent `θ_c`-directions, and the rest of the base angle
/// `π/2 - π/R_min`, that is `π(l_max - 1)/R_min`, up to the tree edge. With
/// `l_max = 0` the `θ_c`-directions leave the cone and each cone contributes
/// the path `A - C - A'`.
pub fn link_at_tree_vertex(data: &TreeVertexLinkData) -> Result<MetricLinkGraph, LinkError> {
    let r = data.r_min as i64;
    let theta = crate::geom::critical_angle(data.l_max, data.r_min);
    let mut g = MetricLinkGraph::new(LinkClass::TreeVertex, theta.over_pi, theta.over_pi);
    for e in 0..data.tree_edges {
        g.add_vertex(format!("A{e}"), VertexKind::TreeA);
    }
    for &(b, f) in &data.cones {
        if b >= data.tree_edges || f >= data.tree_edges || b == f {
            return Err(LinkError::Inconsistent(format!("cone with tree edges {b}, {f}")));
        }
    }
    let mut seen = BTreeSet::new();
    let mut push = |g: &mut MetricLinkGraph, p: usize, q: usize, w: Affine| {
        if seen.insert((p.min(q), p.max(q))) {
            g.add_edge(p, q, w);
        }
    };
    if data.l_max == 0 {
        if !data.gluings.is_empty() {
            return Err(LinkError::Inconsistent("slices with l_max = 0".into()));
        }
        let w = Affine::constant(Rational64::new(1, 2) - Rational64::new(1, r));
        for (k, &(b, f)) in data.cones.iter().enumerate() {
            let c = g.add_vertex(format!("C{k}"), VertexKind::TreeC);
            push(&mut g, b, c, w);
            push(&mut g, c, f, w);
        }
        return Ok(g);
    }
    let mut uf = UnionFind::new(3 * data.cones.len());
    for &(i, j, glue, same) in &data.gluings {
        if i >= data.cones.len() || j >= data.cones.len() {
            return Err(LinkError::Inconsistent(format!("cone index out of range in gluing {i}-{j}")));
        }
        let slots: &[usize] = match glue {
            TreeGlue::Interior => &[BB, CC, BF],
            TreeGlue::Start => &[BF],
            TreeGlue::End => &[BB],
        };
        for &s in slots {
            let t = if same { s } else { [BF, CC, BB][s] };
            uf.union(3 * i + s, 3 * j + t);
        }
    }
    let mut class_vertex: BTreeMap<usize, usize> = BTreeMap::new();
    let (mut nb, mut nc) = (0, 0);
    for slot in 0..3 * data.cones.len() {
        let root = uf.find(slot);
        let is_c = slot % 3 == CC;
        if let Some(&v) = class_vertex.get(&root) {
            if (g.kinds[v] == VertexKind::TreeC) != is_c {
                return Err(LinkError::Inconsistent("radius identified with a θ_c-direction".into()));
            }
            continue;
        }
        let v = if is_c {
            nc += 1;
            g.add_vertex(format!("C{}", nc - 1), VertexKind::TreeC)
        } else {
            nb += 1;
            g.add_vertex(format!("B{}", nb - 1), VertexKind::TreeB)
        };
        class_vertex.insert(root, v);
    }
    let ab = Affine::constant(Rational64::new(data.l_max as i64 - 1, r));
    let bc = Affine::constant(theta.over_pi);
    for (k, &(back, fwd)) in data.cones.iter().enumerate() {
        let mut v = |s: usize| class_vertex[&uf.find(3 * k + s)];
        push(&mut g, back, v(BB), ab);
        push(&mut g, v(BB), v(CC), bc);
        push(&mut g, v(CC), v(BF), bc);
        push(&mut g, v(BF), fwd, ab);
    }
    Ok(g)
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Keeps the smaller root, so classes are named by their first slot.
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}
