use std::collections::{HashMap, HashSet};

use super::{Element, GroupBackend, GroupError, TreeVertex};

/// Ball of the Bass–Serre tree around the base vertex, in BFS order. More
/// generally the vertices within `margin` of a subtree containing the base
/// vertex.
#[derive(Clone, Debug)]
pub struct TreeBall {
    radius: usize,
    margin: usize,
    vertices: Vec<TreeVertex>,
    parent: Vec<Option<usize>>,
    vtype: Vec<u32>,
    /// Distance to the core subtree.
    dist: Vec<usize>,
    index: HashMap<TreeVertex, usize>,
}

impl TreeBall {
    pub fn build(backend: &GroupBackend, radius: usize) -> Result<Self, GroupError> {
        if radius == 0 {
            return Err(GroupError::Spec("ball radius must be at least 1".into()));
        }
        Self::grow(backend, &HashSet::from([TreeVertex::root()]), radius)
    }

    /// Vertices within `margin` of the convex hull of the base vertex and
    /// `core`.
    pub fn around(backend: &GroupBackend, core: &[TreeVertex], margin: usize) -> Result<Self, GroupError> {
        let mut hull = HashSet::from([TreeVertex::root()]);
        for v in core {
            let mut w = v.clone();
            while hull.insert(w.clone()) {
                match w.parent() {
                    Some(p) => w = p,
                    None => break,
                }
            }
        }
        Self::grow(backend, &hull, margin)
    }

    fn grow(backend: &GroupBackend, hull: &HashSet<TreeVertex>, margin: usize) -> Result<Self, GroupError> {
        let root = TreeVertex::root();
        let mut ball = TreeBall {
            radius: 0,
            margin,
            vertices: vec![root.clone()],
            parent: vec![None],
            vtype: vec![backend.vertex_type(&root)],
            dist: vec![0],
            index: HashMap::from([(root, 0)]),
        };
        let mut i = 0;
        while i < ball.vertices.len() {
            let v = ball.vertices[i].clone();
            for w in backend.neighbours(&v) {
                if w.depth() < v.depth() {
                    continue;
                }
                if w.depth() != v.depth() + 1 || ball.index.contains_key(&w) {
                    return Err(GroupError::Table("normal forms are not canonical".into()));
                }
                // the hull is closed under parents, so leaving it only adds distance
                let d = if hull.contains(&w) { 0 } else { ball.dist[i] + 1 };
                if d > margin {
                    continue;
                }
                ball.radius = ball.radius.max(w.depth());
                ball.index.insert(w.clone(), ball.vertices.len());
                ball.vtype.push(backend.vertex_type(&w));
                ball.vertices.push(w);
                ball.parent.push(Some(i));
                ball.dist.push(d);
            }
            i += 1;
        }
        Ok(ball)
    }

    /// Whether every vertex within `k` of `v` is in the region.
    pub fn covers(&self, v: &TreeVertex, k: usize) -> bool {
        self.index_of(v).is_some_and(|i| self.dist[i] + k <= self.margin)
    }

    /// Largest depth of a vertex.
    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn margin(&self) -> usize {
        self.margin
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[TreeVertex] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> &TreeVertex {
        &self.vertices[i]
    }

    pub fn vertex_type(&self, i: usize) -> u32 {
        self.vtype[i]
    }

    pub fn parent(&self, i: usize) -> Option<usize> {
        self.parent[i]
    }

    pub fn index_of(&self, v: &TreeVertex) -> Option<usize> {
        self.index.get(v).copied()
    }

    pub fn contains(&self, v: &TreeVertex) -> bool {
        v.depth() <= self.radius && self.index.contains_key(v)
    }

    /// Edges as (parent, child) index pairs.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.parent.iter().enumerate().filter_map(|(c, p)| p.map(|p| (p, c)))
    }

    pub fn edge_count(&self) -> usize {
        self.vertices.len() - 1
    }
}

/// Minimal displacement of `g` over the ball. The ball must reach the base
/// vertex's image so that the minimum is attained inside it.
pub fn translation_length(backend: &GroupBackend, g: &Element, ball: &TreeBall) -> Result<usize, GroupError> {
    let reach = g.len();
    if !ball.covers(&TreeVertex::root(), reach) {
        return Err(GroupError::BallTooSmall { needed: reach, radius: ball.margin() });
    }
    Ok(ball.vertices().iter().map(|v| backend.displacement(g, v)).min().unwrap())
}

/// Closed form for the free backend: length of the cyclic reduction.
pub fn free_translation_length(backend: &GroupBackend, g: &Element) -> usize {
    assert!(backend.is_free());
    let w = backend.word_of(g);
    let mut i = 0;
    let mut j = w.len();
    while j >= i + 2 && w[i].0 == w[j - 1].0 && w[i].1 != w[j - 1].1 {
        i += 1;
        j -= 1;
    }
    j - i
}

/// Axis of a hyperbolic element, anchored at the projection of the base
/// vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Axis {
    pub element: Element,
    pub inverse: Element,
    pub length: usize,
    pub anchor: TreeVertex,
}

impl Axis {
    pub fn new(backend: &GroupBackend, g: &Element) -> Result<Self, GroupError> {
        let root = TreeVertex::root();
        let gv = backend.act(g, &root);
        let d = backend.distance(&root, &gv);
        // the midpoint of [v, gv] lies on the axis of a hyperbolic element
        let mid = backend.geodesic_point(&root, &gv, d / 2);
        let length = backend.displacement(g, &mid);
        if length == 0 {
            return Err(GroupError::Elliptic(backend.display(g)));
        }
        let anchor = backend.geodesic_point(&root, &gv, (d - length) / 2);
        debug_assert_eq!(backend.displacement(g, &anchor), length);
        Ok(Axis { element: g.clone(), inverse: backend.inverse(g), length, anchor })
    }

    pub fn contains(&self, backend: &GroupBackend, v: &TreeVertex) -> bool {
        backend.displacement(&self.element, v) == self.length
    }

    /// Next vertex in the translation direction; `v` must lie on the axis.
    pub fn forward(&self, backend: &GroupBackend, v: &TreeVertex) -> TreeVertex {
        backend.geodesic_point(v, &backend.act(&self.element, v), 1)
    }

    pub fn backward(&self, backend: &GroupBackend, v: &TreeVertex) -> TreeVertex {
        backend.geodesic_point(v, &backend.act(&self.inverse, v), 1)
    }

    /// Vertex at signed position `k` from the anchor.
    pub fn point(&self, backend: &GroupBackend, k: i64) -> TreeVertex {
        let l = self.length as i64;
        let q = k.div_euclid(l);
        let r = k.rem_euclid(l);
        let mut v = backend.act(&backend.pow(&self.element, q), &self.anchor);
        for _ in 0..r {
            v = self.forward(backend, &v);
        }
        v
    }

    /// Signed position of an axis vertex relative to the anchor.
    pub fn position(&self, backend: &GroupBackend, v: &TreeVertex) -> i64 {
        let d = backend.distance(&self.anchor, v) as i64;
        if d == 0 {
            return 0;
        }
        let step = self.forward(backend, &self.anchor);
        if backend.distance(&step, v) as i64 == d - 1 {
            d
        } else {
            -d
        }
    }

    /// Fundamental segment: anchor, ..., g·anchor.
    pub fn fundamental_segment(&self, backend: &GroupBackend) -> Vec<TreeVertex> {
        let mut out = vec![self.anchor.clone()];
        for _ in 0..self.length {
            let next = self.forward(backend, out.last().unwrap());
            out.push(next);
        }
        out
    }

    /// Axis vertices inside the ball, ordered along the axis.
    pub fn ball_portion(&self, backend: &GroupBackend, ball: &TreeBall) -> Vec<TreeVertex> {
        let mut on: Vec<(i64, TreeVertex)> = ball
            .vertices()
            .iter()
            .filter(|v| self.contains(backend, v))
            .map(|v| (self.position(backend, v), v.clone()))
            .collect();
        on.sort();
        on.into_iter().map(|(_, v)| v).collect()
    }
}
