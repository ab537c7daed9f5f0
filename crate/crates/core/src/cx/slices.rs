//! The complex of groups of the coned-off tree when no slices occur
//! (`l_max ≤ 1`): the group acting on the tree with each cone cut off near
//! the apex, amalgamated with the finite rotation groups acting on the
//! discs around the apexes.
//!
//! Each sector over a base edge `x_k x_{k+1}` is cut by two rings, at `y`
//! and `z`. The outer square `x_k x_{k+1} y_{k+1} y_k` belongs to the
//! truncated space only, the ribbon square `y_k y_{k+1} z_{k+1} z_k` to both,
//! and the inner triangle `O z_k z_{k+1}` to the disc only.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use super::{amalgamate, induced_cog, Amalgam, CxError, GroupAction, InducedCog, Piece};
use crate::group::{Axis, Element, GroupBackend, TreeVertex};
use crate::rotation::{line_key, translate_axis, RotationFamily};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ConeCellKind {
    Y,
    Z,
    Apex,
    RadialXY,
    RadialYZ,
    RadialOZ,
    ArcY,
    ArcZ,
    Outer,
    Ribbon,
    Inner,
}

use ConeCellKind::*;

impl ConeCellKind {
    fn spans_edge(self) -> bool {
        matches!(self, ArcY | ArcZ | Outer | Ribbon | Inner)
    }

    fn in_ribbon(self) -> bool {
        matches!(self, Y | Z | RadialYZ | ArcY | ArcZ | Ribbon)
    }
}

const TRUNCATED: [ConeCellKind; 8] = [Y, Z, RadialXY, RadialYZ, ArcY, ArcZ, Outer, Ribbon];
const DISC: [ConeCellKind; 8] = [Y, Z, RadialYZ, RadialOZ, ArcY, ArcZ, Ribbon, Inner];

enum Face {
    Tree(i64),
    TreeEdge(i64),
    Cone(ConeCellKind, i64),
}

fn cone_faces(kind: ConeCellKind, k: i64) -> Vec<Face> {
    use Face::*;
    match kind {
        Y | Z | Apex => vec![],
        RadialXY => vec![Tree(k), Cone(Y, k)],
        RadialYZ => vec![Cone(Y, k), Cone(Z, k)],
        RadialOZ => vec![Cone(Apex, 0), Cone(Z, k)],
        ArcY => vec![Cone(Y, k), Cone(Y, k + 1)],
        ArcZ => vec![Cone(Z, k), Cone(Z, k + 1)],
        Outer => vec![
            Tree(k),
            Tree(k + 1),
            TreeEdge(k),
            Cone(Y, k),
            Cone(Y, k + 1),
            Cone(RadialXY, k),
            Cone(RadialXY, k + 1),
            Cone(ArcY, k),
        ],
        Ribbon => vec![
            Cone(Y, k),
            Cone(Y, k + 1),
            Cone(Z, k),
            Cone(Z, k + 1),
            Cone(ArcY, k),
            Cone(ArcZ, k),
            Cone(RadialYZ, k),
            Cone(RadialYZ, k + 1),
        ],
        Inner => vec![Cone(Apex, 0), Cone(Z, k), Cone(Z, k + 1), Cone(RadialOZ, k), Cone(RadialOZ, k + 1), Cone(ArcZ, k)],
    }
}

/// A cell of the cone over `t·A`, `A` the root axis of a member, at
/// position `pos` of `t·A`. Identity is the line, kind and base vertices;
/// `t` and `pos` are one parametrization of it.
#[derive(Clone, Debug)]
pub struct ConeCell {
    pub member: usize,
    pub key: Element,
    pub kind: ConeCellKind,
    pub base: Vec<TreeVertex>,
    t: Element,
    pos: i64,
}

impl ConeCell {
    fn identity(&self) -> (usize, &Element, ConeCellKind, &[TreeVertex]) {
        (self.member, &self.key, self.kind, &self.base)
    }
}

impl PartialEq for ConeCell {
    fn eq(&self, other: &Self) -> bool {
        self.identity() == other.identity()
    }
}

impl Eq for ConeCell {}

impl PartialOrd for ConeCell {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ConeCell {
    fn cmp(&self, other: &Self) -> Ordering {
        self.identity().cmp(&other.identity())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum SliceCell {
    Vertex(TreeVertex),
    /// Endpoints sorted.
    Edge(TreeVertex, TreeVertex),
    Cone(ConeCell),
}

/// The group acting on the tree with truncated cones attached.
pub struct TruncatedAction<'a> {
    backend: &'a GroupBackend,
    axes: Vec<Axis>,
    tree_reps: Vec<TreeVertex>,
    edge_reps: Vec<SliceCell>,
}

fn edge(a: TreeVertex, b: TreeVertex) -> SliceCell {
    if a <= b {
        SliceCell::Edge(a, b)
    } else {
        SliceCell::Edge(b, a)
    }
}

impl<'a> TruncatedAction<'a> {
    pub fn new(backend: &'a GroupBackend, family: &RotationFamily) -> Result<Self, CxError> {
        let tree_reps: Vec<TreeVertex> =
            (0..backend.vertices().len()).map(|v| TreeVertex(backend.vertex_path(v).steps().to_vec())).collect();
        let edge_reps = backend
            .edges()
            .iter()
            .enumerate()
            .map(|(i, e)| {
                let mut p = backend.vertex_path(e.origin);
                backend.push_edge(&mut p, 2 * i as u32);
                edge(tree_reps[e.origin].clone(), TreeVertex(p.steps().to_vec()))
            })
            .collect();
        let axes: Vec<Axis> = family.members().iter().map(|m| m.axis.clone()).collect();
        // the stabilizer of each cone must be generated by the root
        for (m, axis) in axes.iter().enumerate() {
            let key = line_key(axis);
            for j in 0..axis.length as i64 {
                let v = axis.point(backend, j);
                if backend.vertex_stabilizer(&v).iter().skip(1).any(|g| line_key(&translate_axis(backend, axis, g)) == key) {
                    return Err(CxError::Unsupported(format!(
                        "member {m}: an elliptic element preserves the axis; its cone has a non-cyclic stabilizer"
                    )));
                }
            }
        }
        Ok(TruncatedAction { backend, axes, tree_reps, edge_reps })
    }

    fn cone(&self, member: usize, t: Element, kind: ConeCellKind, pos: i64) -> ConeCell {
        let b = self.backend;
        let axis = &self.axes[member];
        let key = line_key(&translate_axis(b, axis, &t));
        let mut base = vec![b.act(&t, &axis.point(b, pos))];
        if kind.spans_edge() {
            base.push(b.act(&t, &axis.point(b, pos + 1)));
            base.sort();
        }
        ConeCell { member, key, kind, base, t, pos }
    }

    /// The representative over the window position `pos` of a member.
    pub fn cone_rep(&self, member: usize, kind: ConeCellKind, pos: i64) -> SliceCell {
        SliceCell::Cone(self.cone(member, self.backend.identity(), kind, pos))
    }
}

impl GroupAction for TruncatedAction<'_> {
    type Elem = Element;
    type Cell = SliceCell;

    fn identity(&self) -> Element {
        self.backend.identity()
    }

    fn mul(&self, a: &Element, b: &Element) -> Element {
        self.backend.mul(a, b)
    }

    fn inv(&self, a: &Element) -> Element {
        self.backend.inverse(a)
    }

    fn act(&self, g: &Element, c: &SliceCell) -> SliceCell {
        let b = self.backend;
        match c {
            SliceCell::Vertex(v) => SliceCell::Vertex(b.act(g, v)),
            SliceCell::Edge(v, w) => edge(b.act(g, v), b.act(g, w)),
            SliceCell::Cone(cc) => SliceCell::Cone(self.cone(cc.member, b.mul(g, &cc.t), cc.kind, cc.pos)),
        }
    }

    fn representatives(&self) -> Vec<SliceCell> {
        let mut out: Vec<SliceCell> = self.tree_reps.iter().cloned().map(SliceCell::Vertex).collect();
        out.extend(self.edge_reps.iter().cloned());
        for (m, axis) in self.axes.iter().enumerate() {
            for k in 0..axis.length as i64 {
                out.extend(TRUNCATED.iter().map(|&kind| self.cone_rep(m, kind, k)));
            }
        }
        out
    }

    fn faces(&self, c: &SliceCell) -> Vec<SliceCell> {
        let b = self.backend;
        match c {
            SliceCell::Vertex(_) => vec![],
            SliceCell::Edge(v, w) => vec![SliceCell::Vertex(v.clone()), SliceCell::Vertex(w.clone())],
            SliceCell::Cone(cc) => {
                let axis = &self.axes[cc.member];
                let x = |p: i64| b.act(&cc.t, &axis.point(b, p));
                cone_faces(cc.kind, cc.pos)
                    .into_iter()
                    .map(|f| match f {
                        Face::Tree(p) => SliceCell::Vertex(x(p)),
                        Face::TreeEdge(p) => edge(x(p), x(p + 1)),
                        Face::Cone(kind, p) => SliceCell::Cone(self.cone(cc.member, cc.t.clone(), kind, p)),
                    })
                    .collect()
            }
        }
    }

    fn normalize(&self, c: &SliceCell) -> (SliceCell, Element) {
        let b = self.backend;
        match c {
            SliceCell::Vertex(v) => {
                let rep = &self.tree_reps[b.vertex_type(v) as usize];
                let h = b.transporters(v, rep).swap_remove(0);
                (SliceCell::Vertex(rep.clone()), h)
            }
            SliceCell::Edge(v, w) => {
                for p in [v, w] {
                    for h in b.transporters(p, &self.tree_reps[b.vertex_type(p) as usize]) {
                        let image = self.act(&h, c);
                        if self.edge_reps.contains(&image) {
                            return (image, h);
                        }
                    }
                }
                unreachable!("every tree edge lies in the orbit of a representative")
            }
            SliceCell::Cone(cc) => {
                let axis = &self.axes[cc.member];
                let j = cc.pos.div_euclid(axis.length as i64);
                let h = b.mul(&b.pow(&axis.element, -j), &b.inverse(&cc.t));
                (self.cone_rep(cc.member, cc.kind, cc.pos - j * axis.length as i64), h)
            }
        }
    }

    fn stabilizer(&self, rep: &SliceCell) -> Vec<Element> {
        let b = self.backend;
        match rep {
            SliceCell::Vertex(v) => b.vertex_stabilizer(v),
            SliceCell::Edge(v, w) => b.vertex_stabilizer(v).into_iter().filter(|g| b.act(g, w) == *w).collect(),
            SliceCell::Cone(_) => vec![b.identity()],
        }
    }

    fn label(&self, c: &SliceCell) -> String {
        let path = |v: &TreeVertex| v.0.iter().map(|st| format!("{}.{}", st.s, st.y)).collect::<Vec<_>>().join("/");
        match c {
            SliceCell::Vertex(v) => format!("x[{}]", path(v)),
            SliceCell::Edge(v, w) => format!("x[{}]x[{}]", path(v), path(w)),
            SliceCell::Cone(cc) => format!("{:?}{}@{}", cc.kind, cc.pos, cc.member),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct DiscCell {
    pub kind: ConeCellKind,
    /// Position mod the polygon length; 0 for the apex.
    pub pos: usize,
}

/// `Z/n` rotating the disc over a polygon of `n·step` edges by `step`.
pub struct DiscAction {
    pub step: usize,
    pub order: usize,
}

impl DiscAction {
    fn len(&self) -> usize {
        self.step * self.order
    }
}

impl GroupAction for DiscAction {
    type Elem = u32;
    type Cell = DiscCell;

    fn identity(&self) -> u32 {
        0
    }

    fn mul(&self, a: &u32, b: &u32) -> u32 {
        (a + b) % self.order as u32
    }

    fn inv(&self, a: &u32) -> u32 {
        (self.order as u32 - a) % self.order as u32
    }

    fn act(&self, g: &u32, c: &DiscCell) -> DiscCell {
        if c.kind == Apex {
            return *c;
        }
        DiscCell { kind: c.kind, pos: (c.pos + *g as usize * self.step) % self.len() }
    }

    fn representatives(&self) -> Vec<DiscCell> {
        let mut out = vec![DiscCell { kind: Apex, pos: 0 }];
        for k in 0..self.step {
            out.extend(DISC.iter().map(|&kind| DiscCell { kind, pos: k }));
        }
        out
    }

    fn faces(&self, c: &DiscCell) -> Vec<DiscCell> {
        cone_faces(c.kind, c.pos as i64)
            .into_iter()
            .map(|f| match f {
                Face::Cone(kind, p) => DiscCell { kind, pos: if kind == Apex { 0 } else { p as usize % self.len() } },
                _ => unreachable!("disc cells have no tree faces"),
            })
            .collect()
    }

    fn normalize(&self, c: &DiscCell) -> (DiscCell, u32) {
        if c.kind == Apex {
            return (*c, 0);
        }
        let j = c.pos / self.step;
        (DiscCell { kind: c.kind, pos: c.pos % self.step }, self.inv(&(j as u32)))
    }

    fn stabilizer(&self, rep: &DiscCell) -> Vec<u32> {
        if rep.kind == Apex {
            (0..self.order as u32).collect()
        } else {
            vec![0]
        }
    }

    fn label(&self, c: &DiscCell) -> String {
        format!("{:?}{}", c.kind, c.pos)
    }
}

pub struct YSlices<'a> {
    pub action: TruncatedAction<'a>,
    pub centre: InducedCog<Element, SliceCell>,
    pub discs: Vec<(DiscAction, InducedCog<u32, DiscCell>)>,
    pub amalgam: Amalgam,
}

/// Amalgamates the truncated space with one disc per member along the
/// ribbons. Needs `l_max ≤ 1` and cyclic cone stabilizers.
pub fn build_y_slices<'a>(backend: &'a GroupBackend, family: &RotationFamily, l_max: usize) -> Result<YSlices<'a>, CxError> {
    if l_max > 1 {
        return Err(CxError::Unsupported(format!("slices occur when l_max = {l_max} > 1")));
    }
    let action = TruncatedAction::new(backend, family)?;
    let centre = induced_cog(&action)?;
    let centre_index: BTreeMap<&SliceCell, usize> = centre.cells.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let centre_edge: BTreeMap<(usize, &SliceCell), usize> =
        centre.lifts.iter().enumerate().map(|(e, f)| ((centre.cog.scwol.i(e), f), e)).collect();
    let mut discs = Vec::new();
    let mut pieces = Vec::new();
    for (m, member) in family.members().iter().enumerate() {
        let disc = DiscAction { step: member.root_length(), order: member.exponent as usize };
        let cog = induced_cog(&disc)?;
        let to_centre = |c: &DiscCell, near: usize| -> SliceCell {
            // lift the position next to the representative position `near`
            let pos = if c.pos == near || c.pos == near + 1 { c.pos } else { near + 1 };
            action.cone_rep(m, c.kind, pos as i64)
        };
        let mut shared = Vec::new();
        let mut local = Vec::new();
        for (v, c) in cog.cells.iter().enumerate() {
            if c.kind.in_ribbon() {
                let w = centre_index[&to_centre(c, c.pos)];
                if !centre.cog.groups[w].is_trivial() || !cog.cog.groups[v].is_trivial() {
                    return Err(CxError::Unsupported("ribbon cell with a non-trivial stabilizer".into()));
                }
                shared.push((v, w));
                local.push(vec![0]);
            }
        }
        let mut edges = Vec::new();
        for (a, f) in cog.lifts.iter().enumerate() {
            let src = &cog.cells[cog.cog.scwol.i(a)];
            if src.kind.in_ribbon() {
                let from = centre_index[&to_centre(src, src.pos)];
                let face = to_centre(f, src.pos);
                let e = centre_edge.get(&(from, &face)).ok_or_else(|| CxError::Amalgam(format!("no centre face {face:?}")))?;
                edges.push((a, *e));
            }
        }
        pieces.push(Piece { cog: cog.cog.clone(), shared, local, edges });
        discs.push((disc, cog));
    }
    let amalgam = amalgamate(&centre.cog, &pieces)?;
    Ok(YSlices { action, centre, discs, amalgam })
}
