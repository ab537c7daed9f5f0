use std::cmp::Ordering;

use super::{ComplexError, ConedComplex};
use crate::geom::{interval_i_u, ConePoint, Foot};
use crate::group::{Element, GroupBackend, TreeVertex};
use crate::rotation::{line_key, translate_axis};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StabilizerKind {
    Trivial,
    /// Fixes the interval `I_u` pointwise.
    Fixers,
    /// Contains elements swapping the ends of `I_u`.
    WithFlips,
}

#[derive(Clone, Debug)]
pub struct StabilizerResult {
    pub kind: StabilizerKind,
    /// `I_u` in positions of the chart, when the point is in a slice.
    pub interval: Option<(i64, i64)>,
    pub ends: Option<(TreeVertex, TreeVertex)>,
    /// Identity first.
    pub elements: Vec<Element>,
    /// Every element maps the point to a point glued to it.
    pub verified: bool,
}

fn classify(order: usize, flips: usize) -> StabilizerKind {
    match (order, flips) {
        (1, _) => StabilizerKind::Trivial,
        (_, 0) => StabilizerKind::Fixers,
        _ => StabilizerKind::WithFlips,
    }
}

impl StabilizerResult {
    pub fn order(&self) -> usize {
        self.elements.len()
    }
}

impl ConedComplex {
    /// Stabilizer of a point other than the apex in the space with slices
    /// identified. Base points are fixed by the stabilizer of their cell. A point of a single cone can only be fixed by
    /// elements preserving the cell under it; a point of a slice is fixed
    /// exactly by the elements preserving `I_u`. Both are exact: vertex
    /// stabilizers are finite.
    pub fn point_stabilizer(&self, backend: &GroupBackend, member: usize, u: &ConePoint) -> Result<StabilizerResult, ComplexError> {
        let chart = self.member_charts[member];
        if u.is_on_tree(&self.geometry)? {
            let elements = self.tree_cell_stabilizer(backend, member, u);
            let foot = u.foot(&self.geometry);
            let axis = &self.charts[chart].axis;
            let (a, b) = (foot.left_vertex(), foot.right_vertex());
            let (va, vb) = (axis.point(backend, a), axis.point(backend, b));
            let flips = elements.iter().filter(|g| backend.act(g, &va) != va).count();
            return Ok(StabilizerResult {
                kind: classify(elements.len(), flips),
                interval: Some((a, b)),
                ends: Some((va, vb)),
                elements,
                verified: true,
            });
        }
        let class = self.glued_class(chart, u)?;
        if class.members.len() == 1 {
            // g must preserve the cone and the cell under u
            let elements: Vec<Element> = self
                .tree_cell_stabilizer(backend, member, u)
                .into_iter()
                .filter(|g| self.maps_into_class(backend, chart, u, g, &class.members).unwrap_or(false))
                .collect();
            return Ok(StabilizerResult {
                kind: classify(elements.len(), 0),
                interval: None,
                ends: None,
                elements,
                verified: true,
            });
        }
        let axis = &self.charts[chart].axis;
        let (a, b) = interval_i_u(&self.geometry, self.theta, u, self.l_max as i64 + 1)?;
        let (va, vb) = (axis.point(backend, a), axis.point(backend, b));
        let mut elements: Vec<Element> =
            backend.vertex_stabilizer(&va).into_iter().filter(|g| backend.act(g, &vb) == vb).collect();
        let fixers = elements.len();
        if a != b && backend.vertex_type(&va) == backend.vertex_type(&vb) {
            elements.extend(backend.transporters(&va, &vb).into_iter().filter(|g| backend.act(g, &vb) == va));
        }
        let verified = elements.iter().all(|g| self.maps_into_class(backend, chart, u, g, &class.members).unwrap_or(false));
        Ok(StabilizerResult {
            kind: classify(elements.len(), elements.len() - fixers),
            interval: Some((a, b)),
            ends: Some((va, vb)),
            elements,
            verified,
        })
    }

    /// Whether `g·u`, a point of the cone `g·chart`, is one of the glued
    /// points `class`.
    fn maps_into_class(
        &self,
        backend: &GroupBackend,
        chart: usize,
        u: &ConePoint,
        g: &Element,
        class: &[(usize, ConePoint)],
    ) -> Result<bool, ComplexError> {
        let axis = &self.charts[chart].axis;
        let image = translate_axis(backend, axis, g);
        let Some(target) = self.chart_of_key(&line_key(&image)) else { return Ok(false) };
        let Some((_, p)) = class.iter().find(|(c, _)| *c == target) else { return Ok(false) };
        let other = &self.charts[target].axis;
        let y0 = other.position(backend, &image.point(backend, 0));
        let y1 = other.position(backend, &image.point(backend, 1));
        let expected = if y1 > y0 { u.shifted(&self.geometry, y0) } else { u.mirrored().shifted(&self.geometry, y0) };
        Ok(expected.phi == p.phi && self.geometry.cmp_radius(&expected.radius, &p.radius)? == Ordering::Equal)
    }

    /// Stabilizer of the tree cell under a base point of a member chart.
    pub fn tree_cell_stabilizer(&self, backend: &GroupBackend, member: usize, u: &ConePoint) -> Vec<Element> {
        let axis = &self.charts[self.member_charts[member]].axis;
        match u.foot(&self.geometry) {
            Foot::Vertex(k) => backend.vertex_stabilizer(&axis.point(backend, k)),
            Foot::Edge(k) => {
                let (va, vb) = (axis.point(backend, k), axis.point(backend, k + 1));
                let mut out: Vec<Element> =
                    backend.vertex_stabilizer(&va).into_iter().filter(|g| backend.act(g, &vb) == vb).collect();
                if backend.vertex_type(&va) == backend.vertex_type(&vb) {
                    out.extend(backend.transporters(&va, &vb).into_iter().filter(|g| backend.act(g, &vb) == va));
                }
                out
            }
        }
    }
}
