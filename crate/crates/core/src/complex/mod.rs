//! The truncated coned-off ball: one cone chart per axis translate meeting
//! a tree ball, slice gluings between charts, sampled points with their
//! links, point stabilizers and the polygonal data of each cone.

mod sample;
mod stab;

use std::collections::{BTreeMap, BTreeSet};

use num_rational::Rational64;

use crate::geom::{CriticalAngle, ConeGeometry, ConePoint, GeomError, SliceRegion, SliceRelation};
use crate::group::{Axis, Element, GroupBackend, GroupError, TreeBall, TreeVertex};
use crate::link::LinkError;
use crate::rotation::{line_key, overlap, translate_axis, Overlap, RotationError, RotationFamily};

pub use sample::{InteriorSample, TreeVertexSample};
pub use stab::{StabilizerKind, StabilizerResult};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ComplexError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Rotation(#[from] RotationError),
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(transparent)]
    Link(#[from] LinkError),
    #[error("ball of radius {radius} is too small for the family, use at least {needed}")]
    BallTooSmall { needed: usize, radius: usize },
    #[error("charts {first} and {second} share {edges} edges, more than l_max = {l_max}")]
    OverlapExceeds { first: usize, second: usize, edges: usize, l_max: usize },
}

/// The cone over `element·A_member`, restricted to the ball.
#[derive(Clone, Debug)]
pub struct ConeChart {
    pub member: usize,
    pub element: Element,
    pub axis: Axis,
    /// Positions on `axis` of the first and last ball vertex.
    pub start: i64,
    pub end: i64,
}

impl ConeChart {
    /// One triangle per base edge.
    pub fn triangles(&self) -> usize {
        (self.end - self.start) as usize
    }
}

/// A slice seen from one of its two charts.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SliceLink {
    pub other: usize,
    /// Shared interval, in this chart's positions.
    pub start: i64,
    pub end: i64,
    /// Position on the other chart of the vertex at `start`.
    pub other_start: i64,
    pub same_orientation: bool,
}

impl SliceLink {
    pub fn region(&self) -> SliceRegion {
        SliceRegion::new(self.start, self.end)
    }

    pub fn edges(&self) -> usize {
        (self.end - self.start) as usize
    }

    /// The same point of the slice in the other chart's coordinates.
    pub fn transfer(&self, geom: &ConeGeometry, u: &ConePoint) -> ConePoint {
        if self.same_orientation {
            u.shifted(geom, self.other_start - self.start)
        } else {
            u.mirrored().shifted(geom, self.other_start + self.start)
        }
    }
}

#[derive(Clone, Debug)]
pub struct ConedComplex {
    pub ball: TreeBall,
    pub geometry: ConeGeometry,
    pub theta: CriticalAngle,
    pub l_max: usize,
    pub charts: Vec<ConeChart>,
    /// Per chart, the slices it shares with other charts (at least one edge).
    pub slices: Vec<Vec<SliceLink>>,
    /// Chart of each family member's own axis.
    pub member_charts: Vec<usize>,
    keys: BTreeMap<Element, usize>,
}

/// Smallest ball radius for which every point over a fundamental window,
/// together with every slice through it, lies in the ball.
pub fn required_radius(backend: &GroupBackend, family: &RotationFamily, l_max: usize) -> usize {
    windows(backend, family).iter().map(|v| v.depth()).max().unwrap_or(0) + l_max + 1
}

fn windows(backend: &GroupBackend, family: &RotationFamily) -> Vec<TreeVertex> {
    family.members().iter().flat_map(|m| m.axis.fundamental_segment(backend)).collect()
}

/// The smallest region certifying the family: vertices within `l_max + 1`
/// of the hull of the base vertex and the fundamental windows. Much smaller
/// than the ball of [`required_radius`] for long generators.
pub fn certified_region(backend: &GroupBackend, family: &RotationFamily, l_max: usize) -> Result<TreeBall, GroupError> {
    TreeBall::around(backend, &windows(backend, family), l_max + 1)
}

/// Cone charts over every axis translate with at least one edge in the
/// ball; no gluings yet.
pub fn build_coned_off(
    backend: &GroupBackend,
    ball: &TreeBall,
    family: &RotationFamily,
    geometry: ConeGeometry,
    l_max: usize,
) -> Result<ConedComplex, ComplexError> {
    if !windows(backend, family).iter().all(|v| ball.covers(v, l_max + 1)) {
        return Err(ComplexError::BallTooSmall { needed: required_radius(backend, family, l_max), radius: ball.margin() });
    }
    let theta = crate::geom::critical_angle(l_max, geometry.r_min());
    let mut charts = Vec::new();
    let mut keys = BTreeMap::new();
    let mut member_charts = Vec::new();
    let identity = backend.identity();
    for (i, m) in family.members().iter().enumerate() {
        let mut window = m.axis.fundamental_segment(backend);
        window.pop();
        // the member's own chart first, so it keeps the untranslated coordinates
        let anchor = Some(m.axis.anchor.clone());
        let own = add_chart(backend, ball, &mut charts, &mut keys, i, &m.axis, &identity, &anchor);
        member_charts.push(own.expect("window inside the ball"));
        for v in ball.vertices() {
            for q in &window {
                if backend.vertex_type(q) != backend.vertex_type(v) {
                    continue;
                }
                for t in backend.transporters(q, v) {
                    add_chart(backend, ball, &mut charts, &mut keys, i, &m.axis, &t, &Some(v.clone()));
                }
            }
        }
    }
    let slices = vec![Vec::new(); charts.len()];
    Ok(ConedComplex { ball: ball.clone(), geometry, theta, l_max, charts, slices, member_charts, keys })
}

#[allow(clippy::too_many_arguments)]
fn add_chart(
    backend: &GroupBackend,
    ball: &TreeBall,
    charts: &mut Vec<ConeChart>,
    keys: &mut BTreeMap<Element, usize>,
    member: usize,
    base: &Axis,
    t: &Element,
    through: &Option<TreeVertex>,
) -> Option<usize> {
    let v = through.as_ref()?;
    let axis = translate_axis(backend, base, t);
    let key = line_key(&axis);
    if let Some(&k) = keys.get(&key) {
        return Some(k);
    }
    let p = axis.position(backend, v);
    let (mut start, mut end) = (p, p);
    while ball.contains(&axis.point(backend, end + 1)) {
        end += 1;
    }
    while ball.contains(&axis.point(backend, start - 1)) {
        start -= 1;
    }
    if start == end {
        return None;
    }
    charts.push(ConeChart { member, element: t.clone(), axis, start, end });
    keys.insert(key, charts.len() - 1);
    Some(charts.len() - 1)
}

impl ConedComplex {
    pub fn chart_of_key(&self, key: &Element) -> Option<usize> {
        self.keys.get(key).copied()
    }

    /// Tree edges of the ball with the charts containing them; an edge on
    /// several charts carries one closed class of mutually glued slices.
    pub fn edge_classes(&self, backend: &GroupBackend) -> BTreeMap<(TreeVertex, TreeVertex), Vec<usize>> {
        let mut out: BTreeMap<(TreeVertex, TreeVertex), Vec<usize>> = BTreeMap::new();
        for (c, chart) in self.charts.iter().enumerate() {
            let mut prev = chart.axis.point(backend, chart.start);
            for k in chart.start + 1..=chart.end {
                let next = chart.axis.point(backend, k);
                let e = if prev < next { (prev.clone(), next.clone()) } else { (next.clone(), prev.clone()) };
                out.entry(e).or_default().push(c);
                prev = next;
            }
        }
        out
    }

    pub fn slice_count(&self) -> usize {
        self.slices.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Which charts contain the base edge or vertex under `u`, and how.
    pub fn relations(&self, chart: usize, u: &ConePoint) -> Result<Vec<(SliceLink, SliceRelation)>, ComplexError> {
        let mut out = Vec::new();
        for link in &self.slices[chart] {
            let region = link.region();
            if !region.lies_over(&self.geometry, u) {
                continue;
            }
            let rel = region.relation(&self.geometry, self.theta, u)?;
            if rel.contains() {
                out.push((*link, rel));
            }
        }
        Ok(out)
    }

    /// All charts holding a point identified with `u`, with that point in
    /// their coordinates; the first entry is `(chart, u)`.
    pub fn glued_class(&self, chart: usize, u: &ConePoint) -> Result<GluedClass, ComplexError> {
        let mut members = vec![(chart, *u)];
        let mut index = BTreeMap::from([(chart, 0usize)]);
        let mut gluings = Vec::new();
        let mut seen = BTreeSet::new();
        let mut k = 0;
        while k < members.len() {
            let (c, p) = members[k];
            for (link, rel) in self.relations(c, &p)? {
                let j = match index.get(&link.other) {
                    Some(&j) => j,
                    None => {
                        members.push((link.other, link.transfer(&self.geometry, &p)));
                        index.insert(link.other, members.len() - 1);
                        members.len() - 1
                    }
                };
                if seen.insert((k.min(j), k.max(j))) {
                    gluings.push((k, j, rel, link.same_orientation));
                }
            }
            k += 1;
        }
        Ok(GluedClass { members, gluings })
    }

    /// Euler characteristic of the untruncated coned ball, before slice
    /// identifications: every chart adds an apex, a radius per base vertex
    /// and a triangle per base edge, so the value stays that of the ball.
    pub fn euler_characteristic(&self) -> i64 {
        let v = self.ball.len() as i64 + self.charts.len() as i64;
        let e = self.ball.edge_count() as i64 + self.charts.iter().map(|c| c.triangles() as i64 + 1).sum::<i64>();
        let f = self.charts.iter().map(|c| c.triangles() as i64).sum::<i64>();
        v - e + f
    }
}

/// Points of several cones identified by slices, and the slices involved as
/// `(i, j, relation seen from i, same orientation)` over member indices.
#[derive(Clone, Debug)]
pub struct GluedClass {
    pub members: Vec<(usize, ConePoint)>,
    pub gluings: Vec<(usize, usize, SliceRelation, bool)>,
}

/// Slices between every pair of charts sharing an edge of the ball.
pub fn compute_slice_gluings(backend: &GroupBackend, mut cx: ConedComplex) -> Result<ConedComplex, ComplexError> {
    let mut done = BTreeSet::new();
    let classes = cx.edge_classes(backend);
    let mut slices = vec![Vec::new(); cx.charts.len()];
    for charts in classes.values() {
        for (x, &a) in charts.iter().enumerate() {
            for &b in &charts[x + 1..] {
                if !done.insert((a, b)) {
                    continue;
                }
                let (ca, cb) = (&cx.charts[a], &cx.charts[b]);
                let Overlap::Segment { start, end, edges } = overlap(backend, &ca.axis, &cb.axis)? else {
                    unreachable!("charts share an edge")
                };
                if edges > cx.l_max {
                    return Err(ComplexError::OverlapExceeds { first: a, second: b, edges, l_max: cx.l_max });
                }
                let (sa, ea) = (ca.axis.position(backend, &start), ca.axis.position(backend, &end));
                let (sb, eb) = (cb.axis.position(backend, &start), cb.axis.position(backend, &end));
                let (lo_a, hi_a, b_at_lo) = if sa < ea { (sa, ea, sb) } else { (ea, sa, eb) };
                let same = (ea - sa).signum() == (eb - sb).signum();
                let (lo_b, hi_b, a_at_lo) = if sb < eb { (sb, eb, sa) } else { (eb, sb, ea) };
                slices[a].push(SliceLink { other: b, start: lo_a, end: hi_a, other_start: b_at_lo, same_orientation: same });
                slices[b].push(SliceLink { other: a, start: lo_b, end: hi_b, other_start: a_at_lo, same_orientation: same });
            }
        }
    }
    cx.slices = slices;
    Ok(cx)
}

/// Homothety data of one cone and its quotient polygon.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolygonalData {
    pub member: usize,
    /// Ratios of the neighbourhoods `N` and `N'`.
    pub outer_ratio: Rational64,
    pub inner_ratio: Rational64,
    /// Boundary edges of `K`, `n·l(h)`.
    pub polygon_edges: usize,
    /// The rotation advances by `l(h)` triangles and has order `n`.
    pub rotation_step: usize,
    pub rotation_order: u32,
    /// Slices sit at `t ≥ r sin θ_c`, ribbons at `t ≤ r/2`; disjoint iff
    /// `θ_c > π/6`.
    pub ribbon_avoids_slices: bool,
}

/// Every base triangle is cut by the homothety images at ratios 1/4 and 1/2
/// into an inner triangle and two trapezoids.
pub const SUBDIVISION: &str = "base triangles cut at homothety ratios 1/4 and 1/2: inner triangle, ribbon trapezoid, outer trapezoid";

pub fn build_polygonal_data(family: &RotationFamily, theta: CriticalAngle) -> Vec<PolygonalData> {
    family
        .members()
        .iter()
        .enumerate()
        .map(|(i, m)| PolygonalData {
            member: i,
            outer_ratio: Rational64::new(1, 2),
            inner_ratio: Rational64::new(1, 4),
            polygon_edges: m.length,
            rotation_step: m.root_length(),
            rotation_order: m.exponent,
            ribbon_avoids_slices: theta.over_pi > Rational64::new(1, 6),
        })
        .collect()
}

#[cfg(test)]
mod tests;
