//! Representative points: one per cell of the arrangement of slice boundary
//! lines over each fundamental window, and one tree vertex per type.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use num_rational::Rational64;
use num_traits::ToPrimitive;

use super::{ComplexError, ConedComplex};
use crate::geom::{ConePoint, Heading, Radius, SliceRelation};
use crate::group::{GroupBackend, TreeVertex};
use crate::link::{
    link_at_interior_point, link_at_tree_vertex, InteriorLinkData, MetricLinkGraph, TreeGlue, TreeVertexLinkData,
};

#[derive(Clone, Debug)]
pub struct InteriorSample {
    pub member: usize,
    /// Coordinates in the member's own chart.
    pub point: ConePoint,
    pub cones: usize,
    pub link: MetricLinkGraph,
}

#[derive(Clone, Debug)]
pub struct TreeVertexSample {
    pub vertex: TreeVertex,
    pub vertex_type: u32,
    pub cones: usize,
    pub link: MetricLinkGraph,
}

impl ConedComplex {
    /// Points of a member chart strictly inside the cone with foot over the
    /// window: every vertex, edge and face of the boundary line arrangement.
    ///
    /// The boundary line leaving vertex `k` forward is the chord from `x_k`
    /// to `x_{k+l_max}`, and the one leaving backward is the chord ending at
    /// `x_k`, so all lines are chords over `l_max` edges. Two such chords
    /// cross iff their spans interleave, on the bisector of the two inner
    /// endpoints.
    pub fn arrangement_points(&self, member: usize) -> Result<Vec<ConePoint>, ComplexError> {
        let l = self.l_max as i64;
        if l == 0 {
            return Ok(Vec::new());
        }
        let geom = &self.geometry;
        let chart = self.member_charts[member];
        let len = self.charts[chart].axis.length as i64;
        let mut chords = BTreeSet::new();
        for s in &self.slices[chart] {
            chords.insert(s.start);
            chords.insert(s.end - l);
        }
        let (lo, hi) = (geom.vertex_direction(0), geom.vertex_direction(len));
        let mut dirs = BTreeSet::new();
        for &p in &chords {
            dirs.insert(geom.vertex_direction(p));
            dirs.insert(geom.vertex_direction(p + l));
            for &q in chords.range(p + 1..p + l) {
                dirs.insert((geom.vertex_direction(q) + geom.vertex_direction(p + l)) / 2);
            }
        }
        let dirs: Vec<Rational64> = dirs.into_iter().filter(|d| lo <= *d && *d <= hi).collect();
        let mut all = dirs.clone();
        all.extend(dirs.windows(2).map(|w| (w[0] + w[1]) / 2));
        all.sort();
        let mut out = Vec::new();
        for phi in all {
            let top = ConePoint::tree(geom, phi).radius;
            let mut heights: Vec<Radius> = Vec::new();
            for &p in &chords {
                if geom.vertex_direction(p) < phi && phi < geom.vertex_direction(p + l) {
                    let r = ConePoint::on_line(geom, self.theta, p, Heading::Forward, phi).radius;
                    insert_sorted(geom, &mut heights, r)?;
                }
            }
            // a chord over a single edge is the base itself
            heights.retain(|h| geom.cmp_radius(h, &top) == Ok(Ordering::Less));
            for (k, h) in heights.iter().enumerate() {
                out.push(ConePoint { phi, radius: *h });
                let above = heights.get(k + 1).unwrap_or(&top);
                if let Some(m) = self.between(phi, h, above)? {
                    out.push(m);
                }
            }
        }
        Ok(out)
    }

    /// A point in direction `phi` strictly between two apex distances.
    fn between(&self, phi: Rational64, lower: &Radius, upper: &Radius) -> Result<Option<ConePoint>, ComplexError> {
        let geom = &self.geometry;
        let tree = ConePoint::tree(geom, phi).radius;
        let t = tree.relative(64).mid();
        let target = (lower.relative(64).hi() + upper.relative(64).lo()) / (t * num_rational::BigRational::from_integer(2.into()));
        let Some(c) = target.to_f64().and_then(Rational64::approximate_float) else {
            return Ok(None);
        };
        let cand = ConePoint::radial(geom, phi, c);
        let ok = geom.cmp_radius(lower, &cand.radius)? == Ordering::Less && geom.cmp_radius(&cand.radius, upper)? == Ordering::Less;
        Ok(ok.then_some(cand))
    }

    /// Links at the arrangement points of every member, one per distinct
    /// gluing pattern.
    pub fn interior_samples(&self) -> Result<Vec<InteriorSample>, ComplexError> {
        let mut out = Vec::new();
        let mut seen = BTreeSet::new();
        for member in 0..self.member_charts.len() {
            for u in self.arrangement_points(member)? {
                let class = self.glued_class(self.member_charts[member], &u)?;
                let pattern: Vec<(usize, usize, SliceRelation, bool)> = class.gluings.clone();
                if !seen.insert((class.members.len(), pattern)) {
                    continue;
                }
                let data = InteriorLinkData { cones: class.members.len(), gluings: class.gluings };
                out.push(InteriorSample { member, point: u, cones: data.cones, link: link_at_interior_point(&data, self.theta)? });
            }
        }
        Ok(out)
    }

    /// Link data at a tree vertex whose `l_max`-neighbourhood lies in the
    /// ball.
    pub fn tree_vertex_data(&self, backend: &GroupBackend, v: &TreeVertex) -> TreeVertexLinkData {
        let edges = backend.neighbours(v);
        let idx = |w: &TreeVertex| edges.iter().position(|e| e == w).expect("neighbour of v");
        let mut cones = Vec::new();
        let mut positions = Vec::new();
        for (c, chart) in self.charts.iter().enumerate() {
            if !chart.axis.contains(backend, v) {
                continue;
            }
            let p = chart.axis.position(backend, v);
            if p <= chart.start || p >= chart.end {
                continue;
            }
            cones.push((idx(&chart.axis.point(backend, p - 1)), idx(&chart.axis.point(backend, p + 1))));
            positions.push((c, p));
        }
        let mut gluings = Vec::new();
        for (i, &(c, p)) in positions.iter().enumerate() {
            for link in &self.slices[c] {
                let Some(j) = positions.iter().position(|&(d, _)| d == link.other) else { continue };
                if j < i || p < link.start || p > link.end {
                    continue;
                }
                let glue = if p == link.start {
                    TreeGlue::Start
                } else if p == link.end {
                    TreeGlue::End
                } else {
                    TreeGlue::Interior
                };
                gluings.push((i, j, glue, link.same_orientation));
            }
        }
        TreeVertexLinkData { tree_edges: edges.len(), cones, gluings, l_max: self.l_max, r_min: self.geometry.r_min() }
    }

    /// One vertex of each type, the nearest to the base vertex; the group
    /// acts transitively on vertices of a type.
    pub fn tree_vertex_samples(&self, backend: &GroupBackend) -> Result<Vec<TreeVertexSample>, ComplexError> {
        let mut types = BTreeSet::new();
        let mut out = Vec::new();
        for (i, v) in self.ball.vertices().iter().enumerate() {
            if !self.ball.covers(v, self.l_max + 1) {
                continue;
            }
            if !types.insert(self.ball.vertex_type(i)) {
                continue;
            }
            let data = self.tree_vertex_data(backend, v);
            out.push(TreeVertexSample {
                vertex: v.clone(),
                vertex_type: self.ball.vertex_type(i),
                cones: data.cones.len(),
                link: link_at_tree_vertex(&data)?,
            });
        }
        Ok(out)
    }
}

fn insert_sorted(geom: &crate::geom::ConeGeometry, list: &mut Vec<Radius>, r: Radius) -> Result<(), ComplexError> {
    for k in 0..list.len() {
        match geom.cmp_radius(&r, &list[k])? {
            Ordering::Equal => return Ok(()),
            Ordering::Less => {
                list.insert(k, r);
                return Ok(());
            }
            Ordering::Greater => {}
        }
    }
    list.push(r);
    Ok(())
}
