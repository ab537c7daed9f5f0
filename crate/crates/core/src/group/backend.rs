use std::collections::{HashMap, VecDeque};

use super::{FiniteGroup, GroupError};

/// One syllable of a normal form: a transversal element `s` of the current
/// vertex group followed by the oriented edge `y`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Step {
    pub s: u32,
    pub y: u32,
}

/// Reduced path `s0 y1 s1 ... yn g` in the graph of groups, starting at
/// vertex `start`. Group elements are the paths that start and end at the
/// base vertex; canonical normal forms make structural equality the group
/// equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path {
    start: u32,
    steps: Vec<Step>,
    tail: u32,
}

pub type Element = Path;

impl Path {
    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn tail(&self) -> u32 {
        self.tail
    }

    pub fn start(&self) -> u32 {
        self.start
    }

    /// Number of edges, equal to the displacement of the base vertex.
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

/// Vertex of the Bass–Serre tree: the coset of a path from the base vertex,
/// represented by the path with its final vertex-group element dropped.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TreeVertex(pub Vec<Step>);

impl TreeVertex {
    pub fn root() -> Self {
        TreeVertex(Vec::new())
    }

    pub fn depth(&self) -> usize {
        self.0.len()
    }

    pub fn parent(&self) -> Option<TreeVertex> {
        if self.0.is_empty() {
            None
        } else {
            Some(TreeVertex(self.0[..self.0.len() - 1].to_vec()))
        }
    }
}

#[derive(Clone, Debug)]
pub struct VertexSpec {
    pub name: String,
    pub group: FiniteGroup,
    /// Named generators of the vertex group.
    pub gens: Vec<(String, u32)>,
}

#[derive(Clone, Debug)]
pub struct EdgeSpec {
    /// Stable letter name (used when the edge is outside the maximal tree).
    pub name: String,
    pub origin: usize,
    pub terminus: usize,
    pub group: FiniteGroup,
    /// Full monomorphism tables into the origin and terminus groups.
    pub alpha: Vec<u32>,
    pub omega: Vec<u32>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BackendKind {
    Free { rank: usize },
    GraphOfGroups,
}

#[derive(Clone, Debug)]
pub enum LetterKind {
    Vertex { vertex: usize, element: u32 },
    Stable { edge: usize },
}

#[derive(Clone, Debug)]
pub struct Letter {
    pub name: String,
    pub kind: LetterKind,
    pub element: Element,
    pub inverse: Element,
}

#[derive(Clone, Debug)]
struct Transversal {
    reps: Vec<u32>,
    rep_of: Vec<u32>,
    preimage: Vec<u32>,
}

/// A finitely described group acting on its Bass–Serre tree: a graph of
/// finite groups over a finite connected graph. The free group of rank n is
/// the one-vertex graph with trivial groups and n loops.
#[derive(Clone, Debug)]
pub struct GroupBackend {
    kind: BackendKind,
    vertices: Vec<VertexSpec>,
    edges: Vec<EdgeSpec>,
    trans: Vec<Transversal>,
    tree_path: Vec<Vec<u32>>,
    in_tree: Vec<bool>,
    letters: Vec<Letter>,
    letter_index: HashMap<String, usize>,
    vertex_words: Vec<Vec<Vec<(usize, bool)>>>,
    stable_letter: Vec<Option<usize>>,
}

pub const BASE: u32 = 0;

impl GroupBackend {
    pub fn free(names: &[&str]) -> Result<Self, GroupError> {
        if names.len() < 2 {
            return Err(GroupError::Spec("free backend needs rank at least 2".into()));
        }
        let vertex = VertexSpec { name: "v".into(), group: FiniteGroup::trivial(), gens: vec![] };
        let edges = names
            .iter()
            .map(|n| EdgeSpec {
                name: n.to_string(),
                origin: 0,
                terminus: 0,
                group: FiniteGroup::trivial(),
                alpha: vec![0],
                omega: vec![0],
            })
            .collect();
        let mut b = Self::build(vec![vertex], edges)?;
        b.kind = BackendKind::Free { rank: names.len() };
        Ok(b)
    }

    pub fn free_rank(rank: usize) -> Result<Self, GroupError> {
        let names: Vec<String> = if rank <= 26 {
            (0..rank).map(|i| ((b'a' + i as u8) as char).to_string()).collect()
        } else {
            (0..rank).map(|i| format!("x{i}")).collect()
        };
        let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        Self::free(&refs)
    }

    pub fn graph_of_groups(vertices: Vec<VertexSpec>, edges: Vec<EdgeSpec>) -> Result<Self, GroupError> {
        Self::build(vertices, edges)
    }

    fn build(vertices: Vec<VertexSpec>, edges: Vec<EdgeSpec>) -> Result<Self, GroupError> {
        if vertices.is_empty() {
            return Err(GroupError::Spec("graph of groups without vertices".into()));
        }
        for v in &vertices {
            let gens: Vec<u32> = v.gens.iter().map(|g| g.1).collect();
            if gens.iter().any(|&g| g as usize >= v.group.order()) {
                return Err(GroupError::Spec(format!("generator out of range in vertex {}", v.name)));
            }
            if v.group.closure(&gens).len() != v.group.order() {
                return Err(GroupError::Spec(format!("generators of vertex {} do not generate its group", v.name)));
            }
        }
        for e in &edges {
            if e.origin >= vertices.len() || e.terminus >= vertices.len() {
                return Err(GroupError::Spec(format!("edge {} has an unknown endpoint", e.name)));
            }
            for (map, end) in [(&e.alpha, e.origin), (&e.omega, e.terminus)] {
                e.group.check_hom(map, &vertices[end].group).map_err(|err| {
                    GroupError::Spec(format!("edge {}: {err}", e.name))
                })?;
                if !FiniteGroup::is_injective(map) {
                    return Err(GroupError::Spec(format!("edge {}: monomorphism is not injective", e.name)));
                }
            }
        }

        // maximal tree by BFS from the base vertex
        let nv = vertices.len();
        let mut tree_path: Vec<Option<Vec<u32>>> = vec![None; nv];
        tree_path[0] = Some(Vec::new());
        let mut in_tree = vec![false; edges.len()];
        let mut queue = VecDeque::from([0usize]);
        while let Some(v) = queue.pop_front() {
            for (i, e) in edges.iter().enumerate() {
                for (y, o, t) in [(2 * i as u32, e.origin, e.terminus), (2 * i as u32 + 1, e.terminus, e.origin)] {
                    if o == v && tree_path[t].is_none() {
                        let mut p = tree_path[v].clone().unwrap();
                        p.push(y);
                        tree_path[t] = Some(p);
                        in_tree[i] = true;
                        queue.push_back(t);
                    }
                }
            }
        }
        if tree_path.iter().any(|p| p.is_none()) {
            return Err(GroupError::Spec("underlying graph is not connected".into()));
        }
        let tree_path: Vec<Vec<u32>> = tree_path.into_iter().map(|p| p.unwrap()).collect();

        let mut trans = Vec::with_capacity(2 * edges.len());
        for e in &edges {
            for (map, end) in [(&e.alpha, e.origin), (&e.omega, e.terminus)] {
                trans.push(Transversal::new(&vertices[end].group, map));
            }
        }

        let mut b = GroupBackend {
            kind: BackendKind::GraphOfGroups,
            vertices,
            edges,
            trans,
            tree_path,
            in_tree,
            letters: Vec::new(),
            letter_index: HashMap::new(),
            vertex_words: Vec::new(),
            stable_letter: Vec::new(),
        };
        b.build_letters()?;
        Ok(b)
    }

    fn build_letters(&mut self) -> Result<(), GroupError> {
        let mut letters = Vec::new();
        for (v, spec) in self.vertices.iter().enumerate() {
            for (name, g) in &spec.gens {
                let element = self.conjugate_into_base(v, *g);
                letters.push((name.clone(), LetterKind::Vertex { vertex: v, element: *g }, element));
            }
        }
        let mut stable_letter = vec![None; self.edges.len()];
        for (i, e) in self.edges.iter().enumerate() {
            if self.in_tree[i] {
                continue;
            }
            let mut p = self.vertex_path(e.origin);
            self.push_edge(&mut p, 2 * i as u32);
            let back = self.inverse(&self.vertex_path(e.terminus));
            let element = self.mul(&p, &back);
            stable_letter[i] = Some(letters.len());
            letters.push((e.name.clone(), LetterKind::Stable { edge: i }, element));
        }
        let mut index = HashMap::new();
        let mut out = Vec::with_capacity(letters.len());
        for (name, kind, element) in letters {
            if name.is_empty() || index.insert(name.clone(), out.len()).is_some() {
                return Err(GroupError::Spec(format!("duplicate or empty letter name {name:?}")));
            }
            let inverse = self.inverse(&element);
            out.push(Letter { name, kind, element, inverse });
        }
        let mut vertex_words = Vec::with_capacity(self.vertices.len());
        for (v, spec) in self.vertices.iter().enumerate() {
            let gens: Vec<u32> = spec.gens.iter().map(|g| g.1).collect();
            let letter_ids: Vec<usize> = spec.gens.iter().map(|g| index[&g.0]).collect();
            let words = spec.group.shortest_words(&gens);
            vertex_words.push(
                words
                    .into_iter()
                    .map(|w| w.unwrap_or_else(|| panic!("vertex {v} group not generated")))
                    .map(|w| w.into_iter().map(|(i, inv)| (letter_ids[i], inv)).collect())
                    .collect(),
            );
        }
        self.letters = out;
        self.letter_index = index;
        self.vertex_words = vertex_words;
        self.stable_letter = stable_letter;
        Ok(())
    }

    pub fn kind(&self) -> BackendKind {
        self.kind
    }

    pub fn is_free(&self) -> bool {
        matches!(self.kind, BackendKind::Free { .. })
    }

    pub fn vertices(&self) -> &[VertexSpec] {
        &self.vertices
    }

    pub fn edges(&self) -> &[EdgeSpec] {
        &self.edges
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn letter(&self, name: &str) -> Option<usize> {
        self.letter_index.get(name).copied()
    }

    pub fn edge_in_tree(&self, e: usize) -> bool {
        self.in_tree[e]
    }

    /// Shortest letter word for an element of the vertex group `G_v`.
    pub fn vertex_word(&self, v: usize, g: u32) -> &[(usize, bool)] {
        &self.vertex_words[v][g as usize]
    }

    pub fn stable_letter(&self, e: usize) -> Option<usize> {
        self.stable_letter[e]
    }

    pub fn vertex_group(&self, v: u32) -> &FiniteGroup {
        &self.vertices[v as usize].group
    }

    pub fn max_vertex_order(&self) -> usize {
        self.vertices.iter().map(|v| v.group.order()).max().unwrap_or(1)
    }

    // oriented edge data: y = 2e is e traversed forward, y = 2e + 1 backward

    #[inline]
    pub fn origin(&self, y: u32) -> u32 {
        let e = &self.edges[(y / 2) as usize];
        (if y.is_multiple_of(2) { e.origin } else { e.terminus }) as u32
    }

    #[inline]
    pub fn terminus(&self, y: u32) -> u32 {
        let e = &self.edges[(y / 2) as usize];
        (if y.is_multiple_of(2) { e.terminus } else { e.origin }) as u32
    }

    #[inline]
    fn into_origin(&self, y: u32) -> &[u32] {
        let e = &self.edges[(y / 2) as usize];
        if y.is_multiple_of(2) { &e.alpha } else { &e.omega }
    }

    #[inline]
    fn into_terminus(&self, y: u32) -> &[u32] {
        let e = &self.edges[(y / 2) as usize];
        if y.is_multiple_of(2) { &e.omega } else { &e.alpha }
    }

    pub fn oriented_edges_at(&self, v: u32) -> impl Iterator<Item = u32> + '_ {
        (0..2 * self.edges.len() as u32).filter(move |&y| self.origin(y) == v)
    }

    /// Left transversal of the edge group image in the origin group of `y`.
    pub fn transversal(&self, y: u32) -> &[u32] {
        &self.trans[y as usize].reps
    }

    /// Image of the edge group of `y` inside the origin vertex group.
    pub fn edge_image_at_origin(&self, y: u32) -> &[u32] {
        self.into_origin(y)
    }

    pub fn identity(&self) -> Element {
        Path { start: BASE, steps: Vec::new(), tail: 0 }
    }

    pub fn end(&self, p: &Path) -> u32 {
        p.steps.last().map(|s| self.terminus(s.y)).unwrap_or(p.start)
    }

    pub fn push_vertex(&self, p: &mut Path, g: u32) {
        let v = self.end(p);
        p.tail = self.vertex_group(v).mul(p.tail, g);
    }

    pub fn push_edge(&self, p: &mut Path, y: u32) {
        let v = self.end(p);
        debug_assert_eq!(self.origin(y), v, "edge does not start at path end");
        let group = self.vertex_group(v);
        let tr = &self.trans[y as usize];
        let h = p.tail;
        let s = tr.rep_of[h as usize];
        let a = tr.preimage[group.mul(group.inv(s), h) as usize];
        debug_assert!(a != u32::MAX);
        if s == 0 {
            if let Some(last) = p.steps.last().copied() {
                if last.y == y ^ 1 {
                    p.steps.pop();
                    let prev = self.vertex_group(self.origin(last.y));
                    p.tail = prev.mul(last.s, self.into_origin(last.y)[a as usize]);
                    return;
                }
            }
        }
        p.steps.push(Step { s, y });
        p.tail = self.into_terminus(y)[a as usize];
    }

    pub fn mul(&self, p: &Path, q: &Path) -> Path {
        debug_assert_eq!(self.end(p), q.start);
        let mut r = p.clone();
        for st in &q.steps {
            self.push_vertex(&mut r, st.s);
            self.push_edge(&mut r, st.y);
        }
        self.push_vertex(&mut r, q.tail);
        r
    }

    pub fn inverse(&self, p: &Path) -> Path {
        let end = self.end(p);
        let mut r = Path { start: end, steps: Vec::new(), tail: self.vertex_group(end).inv(p.tail) };
        for k in (0..p.steps.len()).rev() {
            let st = p.steps[k];
            self.push_edge(&mut r, st.y ^ 1);
            let g = self.vertex_group(self.end(&r));
            self.push_vertex(&mut r, g.inv(st.s));
        }
        r
    }

    pub fn pow(&self, g: &Element, k: i64) -> Element {
        let base = if k < 0 { self.inverse(g) } else { g.clone() };
        let mut acc = self.identity();
        for _ in 0..k.unsigned_abs() {
            acc = self.mul(&acc, &base);
        }
        acc
    }

    pub fn conjugate(&self, x: &Element, g: &Element) -> Element {
        // x g x^-1
        self.mul(&self.mul(x, g), &self.inverse(x))
    }

    /// Path along the maximal tree from the base vertex to `v`.
    pub fn vertex_path(&self, v: usize) -> Path {
        let mut p = self.identity();
        for &y in &self.tree_path[v] {
            self.push_edge(&mut p, y);
        }
        p
    }

    /// The element `γ_v g γ_v^-1` of the fundamental group.
    pub fn conjugate_into_base(&self, v: usize, g: u32) -> Element {
        let mut p = self.vertex_path(v);
        self.push_vertex(&mut p, g);
        self.mul(&p, &self.inverse(&self.vertex_path(v)))
    }

    pub fn is_element(&self, p: &Path) -> bool {
        p.start == BASE && self.end(p) == BASE
    }

    // --- tree action -------------------------------------------------------

    pub fn vertex_type(&self, v: &TreeVertex) -> u32 {
        v.0.last().map(|s| self.terminus(s.y)).unwrap_or(BASE)
    }

    pub fn vertex_as_path(&self, v: &TreeVertex) -> Path {
        Path { start: BASE, steps: v.0.clone(), tail: 0 }
    }

    pub fn act(&self, g: &Element, v: &TreeVertex) -> TreeVertex {
        let p = self.mul(g, &self.vertex_as_path(v));
        TreeVertex(p.steps)
    }

    pub fn distance(&self, u: &TreeVertex, v: &TreeVertex) -> usize {
        let c = common_prefix(&u.0, &v.0);
        u.0.len() + v.0.len() - 2 * c
    }

    pub fn displacement(&self, g: &Element, v: &TreeVertex) -> usize {
        self.distance(v, &self.act(g, v))
    }

    pub fn neighbours(&self, v: &TreeVertex) -> Vec<TreeVertex> {
        let t = self.vertex_type(v);
        let base = self.vertex_as_path(v);
        let mut out = Vec::new();
        for y in self.oriented_edges_at(t) {
            for &s in self.transversal(y) {
                let mut p = base.clone();
                self.push_vertex(&mut p, s);
                self.push_edge(&mut p, y);
                out.push(TreeVertex(p.steps));
            }
        }
        out
    }

    /// Vertex at distance `k` from `a` on the geodesic `[a, b]`.
    pub fn geodesic_point(&self, a: &TreeVertex, b: &TreeVertex, k: usize) -> TreeVertex {
        let c = common_prefix(&a.0, &b.0);
        let up = a.0.len() - c;
        let total = up + b.0.len() - c;
        assert!(k <= total, "geodesic point beyond endpoint");
        if k <= up {
            TreeVertex(a.0[..a.0.len() - k].to_vec())
        } else {
            TreeVertex(b.0[..c + (k - up)].to_vec())
        }
    }

    /// Elements `g` with `g·q = p`; both vertices must have the same type.
    pub fn transporters(&self, q: &TreeVertex, p: &TreeVertex) -> Vec<Element> {
        let t = self.vertex_type(p);
        assert_eq!(t, self.vertex_type(q));
        let qinv = self.inverse(&self.vertex_as_path(q));
        self.vertex_group(t)
            .elements()
            .map(|x| {
                let mut pp = self.vertex_as_path(p);
                self.push_vertex(&mut pp, x);
                self.mul(&pp, &qinv)
            })
            .collect()
    }

    /// Stabilizer of a tree vertex, `p G_v p^-1`, identity first.
    pub fn vertex_stabilizer(&self, v: &TreeVertex) -> Vec<Element> {
        self.transporters(v, v)
    }

    // --- words --------------------------------------------------------------

    pub fn parse_word(&self, text: &str) -> Result<Vec<(usize, bool)>, GroupError> {
        super::word::parse(text, &self.letter_index)
    }

    pub fn evaluate(&self, word: &[(usize, bool)]) -> Element {
        let mut acc = self.identity();
        for &(l, inv) in word {
            let letter = &self.letters[l];
            acc = self.mul(&acc, if inv { &letter.inverse } else { &letter.element });
        }
        acc
    }

    pub fn element(&self, text: &str) -> Result<Element, GroupError> {
        Ok(self.evaluate(&self.parse_word(text)?))
    }

    /// Letter word representing the normal form.
    pub fn word_of(&self, g: &Element) -> Vec<(usize, bool)> {
        assert!(self.is_element(g));
        let mut out = Vec::new();
        let mut v = BASE;
        for st in &g.steps {
            out.extend_from_slice(&self.vertex_words[v as usize][st.s as usize]);
            let e = (st.y / 2) as usize;
            if let Some(l) = self.stable_letter[e] {
                out.push((l, st.y % 2 == 1));
            }
            v = self.terminus(st.y);
        }
        out.extend_from_slice(&self.vertex_words[BASE as usize][g.tail as usize]);
        out
    }

    pub fn display(&self, g: &Element) -> String {
        super::word::format(&self.word_of(g), &self.letters)
    }
}

impl Transversal {
    fn new(group: &FiniteGroup, image: &[u32]) -> Self {
        let n = group.order();
        let mut preimage = vec![u32::MAX; n];
        for (a, &h) in image.iter().enumerate() {
            preimage[h as usize] = a as u32;
        }
        let mut rep_of = vec![u32::MAX; n];
        let mut reps = Vec::new();
        for g in 0..n as u32 {
            if rep_of[g as usize] != u32::MAX {
                continue;
            }
            reps.push(g);
            for &h in image {
                rep_of[group.mul(g, h) as usize] = g;
            }
        }
        Transversal { reps, rep_of, preimage }
    }
}

pub fn common_prefix(a: &[Step], b: &[Step]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

#[cfg(test)]
pub(crate) use tests::z3_z5;
