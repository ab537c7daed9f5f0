//! Rotation families on the Bass–Serre tree: primitive roots, stabilizer
//! conditions, axis overlaps and the uniform small cancellation test.

mod pieces;

use std::collections::{BTreeMap, BTreeSet};

use num_rational::Rational64;

use crate::group::{Axis, Element, GroupBackend, GroupError, TreeVertex};

pub use pieces::{max_piece_length, symmetrize};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RotationError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("identical axes")]
    IdenticalAxes,
    #[error("representatives {first} and {second} have the same axis up to translation by {witness}")]
    SharedAxis { first: usize, second: usize, witness: String },
    #[error("overlap of {found} edges exceeds l_max = {l_max}")]
    OverlapExceeds { found: usize, l_max: usize },
}

/// `g = h^n` with `h` not a proper power and `n` maximal.
pub fn primitive_root(backend: &GroupBackend, g: &Element) -> Result<(Element, u32), GroupError> {
    let axis = Axis::new(backend, g)?;
    let l = axis.length;
    for d in (1..=l).filter(|d| l % d == 0) {
        let n = (l / d) as i64;
        let p = &axis.anchor;
        let q = axis.point(backend, d as i64);
        if backend.vertex_type(p) != backend.vertex_type(&q) {
            continue;
        }
        // every root translates the same axis by d and so carries p to q
        let mut roots: Vec<Element> =
            backend.transporters(p, &q).into_iter().filter(|x| backend.pow(x, n) == *g).collect();
        roots.sort();
        if let Some(h) = roots.into_iter().next() {
            return Ok((h, n as u32));
        }
    }
    unreachable!("g is its own root")
}

/// Canonical key of a line: the smaller of the two generators of its
/// stabilizer (valid once the stabilizer is known to be infinite cyclic).
pub fn line_key(axis: &Axis) -> Element {
    std::cmp::min(axis.element.clone(), axis.inverse.clone())
}

/// The axis `t·A` of `t h t^-1`.
pub fn translate_axis(backend: &GroupBackend, axis: &Axis, t: &Element) -> Axis {
    Axis {
        element: backend.conjugate(t, &axis.element),
        inverse: backend.conjugate(t, &axis.inverse),
        length: axis.length,
        anchor: backend.act(t, &axis.anchor),
    }
}

pub fn project(backend: &GroupBackend, axis: &Axis, v: &TreeVertex) -> TreeVertex {
    let gv = backend.act(&axis.element, v);
    let d = backend.distance(v, &gv);
    backend.geodesic_point(v, &gv, (d - axis.length) / 2)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Overlap {
    Disjoint,
    /// Shared segment from `start` to `end`, oriented along the first axis.
    Segment { start: TreeVertex, end: TreeVertex, edges: usize },
}

impl Overlap {
    pub fn edges(&self) -> usize {
        match self {
            Overlap::Disjoint => 0,
            Overlap::Segment { edges, .. } => *edges,
        }
    }
}

/// Intersection of two axes. Distinct axes of a proper action share at most
/// `(N + 1)·l1·l2` edges with `N` the largest vertex group order, so the walk
/// is capped and reaching the cap proves the axes equal.
pub fn overlap(backend: &GroupBackend, a: &Axis, b: &Axis) -> Result<Overlap, RotationError> {
    if line_key(a) == line_key(b) {
        return Err(RotationError::IdenticalAxes);
    }
    let q = project(backend, b, &a.anchor);
    if !a.contains(backend, &q) {
        return Ok(Overlap::Disjoint);
    }
    let cap = (backend.max_vertex_order() + 1) * a.length * b.length + a.length + b.length;
    let mut end = q.clone();
    let mut fwd = 0;
    loop {
        let next = a.forward(backend, &end);
        if !b.contains(backend, &next) {
            break;
        }
        end = next;
        fwd += 1;
        if fwd > cap {
            return Err(RotationError::IdenticalAxes);
        }
    }
    let mut start = q;
    let mut bwd = 0;
    loop {
        let prev = a.backward(backend, &start);
        if !b.contains(backend, &prev) {
            break;
        }
        start = prev;
        bwd += 1;
        if bwd > cap {
            return Err(RotationError::IdenticalAxes);
        }
    }
    Ok(Overlap::Segment { start, end, edges: fwd + bwd })
}

#[derive(Clone, Debug)]
pub struct Member {
    pub word: String,
    pub element: Element,
    pub root: Element,
    pub exponent: u32,
    /// Translation length of the generator.
    pub length: usize,
    /// Axis of the primitive root.
    pub axis: Axis,
}

impl Member {
    pub fn root_length(&self) -> usize {
        self.axis.length
    }
}

#[derive(Clone, Debug)]
pub struct RotationFamily {
    members: Vec<Member>,
}

impl RotationFamily {
    /// Builds the family, enforcing that every generator is hyperbolic.
    pub fn new(backend: &GroupBackend, generators: &[Element]) -> Result<Self, GroupError> {
        let mut members = Vec::with_capacity(generators.len());
        for g in generators {
            let (root, exponent) = primitive_root(backend, g)?;
            let axis = Axis::new(backend, &root)?;
            members.push(Member {
                word: backend.display(g),
                element: g.clone(),
                length: exponent as usize * axis.length,
                root,
                exponent,
                axis,
            });
        }
        Ok(RotationFamily { members })
    }

    pub fn from_words(backend: &GroupBackend, words: &[&str]) -> Result<Self, GroupError> {
        let gens: Result<Vec<_>, _> = words.iter().map(|w| backend.element(w)).collect();
        Self::new(backend, &gens?)
    }

    pub fn members(&self) -> &[Member] {
        &self.members
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn r_min(&self) -> Option<usize> {
        self.members.iter().map(|m| m.length).min()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Rf2Verdict {
    /// Exact: no element fixes the axis pointwise and none reverses it.
    Certified,
    PointwiseFixer { witness: Element },
    Reflection { witness: Element, fixed: TreeVertex },
}

impl Rf2Verdict {
    pub fn passes(&self) -> bool {
        matches!(self, Rf2Verdict::Certified)
    }
}

/// Decides whether the stabilizer of the axis of `h` is infinite cyclic.
///
/// The pointwise fixer is the stable value of `K ↦ K ∩ hKh⁻¹ ∩ h⁻¹Kh`
/// started from the fixer of a fundamental segment; reflections fix an axis
/// vertex, which up to powers of `h` lies in the fundamental segment.
pub fn check_rf2(backend: &GroupBackend, axis: &Axis) -> Rf2Verdict {
    let seg = axis.fundamental_segment(backend);
    let identity = backend.identity();
    let mut fixer: BTreeSet<Element> = backend
        .vertex_stabilizer(&seg[0])
        .into_iter()
        .filter(|x| seg.iter().all(|v| backend.act(x, v) == *v))
        .collect();
    loop {
        let next: BTreeSet<Element> = fixer
            .iter()
            .filter(|k| {
                fixer.contains(&backend.conjugate(&axis.element, k)) && fixer.contains(&backend.conjugate(&axis.inverse, k))
            })
            .cloned()
            .collect();
        if next.len() == fixer.len() {
            break;
        }
        fixer = next;
    }
    if let Some(w) = fixer.into_iter().find(|x| *x != identity) {
        return Rf2Verdict::PointwiseFixer { witness: w };
    }
    for v in &seg[..axis.length] {
        for x in backend.vertex_stabilizer(v) {
            if x != identity && backend.conjugate(&x, &axis.element) == axis.inverse {
                return Rf2Verdict::Reflection { witness: x, fixed: v.clone() };
            }
        }
    }
    Rf2Verdict::Certified
}

/// A translate `element·A_j` meeting the axis `A_i` of a representative.
#[derive(Clone, Debug)]
pub struct OverlapRecord {
    pub other: usize,
    pub element: Element,
    pub axis: Axis,
    /// Positions on `A_i` of the shared segment, `start` in `[0, l(h_i))`.
    pub start: i64,
    pub end: i64,
}

impl OverlapRecord {
    pub fn edges(&self) -> usize {
        (self.end - self.start) as usize
    }
}

#[derive(Clone, Debug)]
pub struct LMaxWitness {
    pub first: usize,
    pub second: usize,
    pub element: Element,
    pub edges: usize,
}

#[derive(Clone, Debug)]
pub struct LMaxReport {
    /// `None` for the empty family.
    pub l_max: Option<usize>,
    pub witness: Option<LMaxWitness>,
    /// For each representative, one translate per orbit under its root,
    /// normalised so the shared segment starts in the fundamental window.
    pub overlaps: Vec<Vec<OverlapRecord>>,
}

/// Exact l_max: every translate meeting `A_i` can be moved by powers of the
/// roots so that a shared vertex `p` lies in the fundamental window of `A_i`
/// and its preimage `q` in that of `A_j`; the translating element then lies
/// in the finite set of transporters from `q` to `p`.
pub fn compute_l_max(backend: &GroupBackend, family: &RotationFamily) -> Result<LMaxReport, RotationError> {
    let members = family.members();
    let windows: Vec<Vec<TreeVertex>> = members
        .iter()
        .map(|m| {
            let mut seg = m.axis.fundamental_segment(backend);
            seg.pop();
            seg
        })
        .collect();
    let keys: Vec<Element> = members.iter().map(|m| line_key(&m.axis)).collect();
    let mut overlaps = Vec::with_capacity(members.len());
    for (i, mi) in members.iter().enumerate() {
        let li = mi.axis.length as i64;
        let mut found: BTreeMap<Element, OverlapRecord> = BTreeMap::new();
        for (j, mj) in members.iter().enumerate() {
            for p in &windows[i] {
                for q in &windows[j] {
                    if backend.vertex_type(p) != backend.vertex_type(q) {
                        continue;
                    }
                    for t in backend.transporters(q, p) {
                        let tr = translate_axis(backend, &mj.axis, &t);
                        let key = line_key(&tr);
                        if key == keys[i] {
                            if i != j {
                                return Err(RotationError::SharedAxis {
                                    first: i,
                                    second: j,
                                    witness: backend.display(&t),
                                });
                            }
                            continue;
                        }
                        if found.contains_key(&key) {
                            continue;
                        }
                        let Overlap::Segment { start, end, .. } = overlap(backend, &mi.axis, &tr)? else {
                            unreachable!("translate through a shared vertex")
                        };
                        let s = mi.axis.position(backend, &start);
                        let e = mi.axis.position(backend, &end);
                        // shift by a power of the root so the start is in the window
                        let k = s.div_euclid(li);
                        let shift = backend.pow(&mi.root, -k);
                        let t2 = backend.mul(&shift, &t);
                        let tr2 = translate_axis(backend, &mj.axis, &t2);
                        let key2 = line_key(&tr2);
                        found.entry(key2).or_insert(OverlapRecord {
                            other: j,
                            element: t2,
                            axis: tr2,
                            start: s - k * li,
                            end: e - k * li,
                        });
                        found.entry(key).or_insert_with(|| OverlapRecord {
                            other: j,
                            element: t.clone(),
                            axis: tr.clone(),
                            start: s,
                            end: e,
                        });
                    }
                }
            }
        }
        let mut list: Vec<OverlapRecord> =
            found.into_values().filter(|r| r.start >= 0 && r.start < li).collect();
        list.sort_by(|a, b| (a.start, a.end, a.other, &a.element).cmp(&(b.start, b.end, b.other, &b.element)));
        overlaps.push(list);
    }
    let mut l_max = if members.is_empty() { None } else { Some(0) };
    let mut witness: Option<LMaxWitness> = None;
    for (i, list) in overlaps.iter().enumerate() {
        for r in list {
            if witness.as_ref().is_none_or(|w| r.edges() > w.edges) {
                witness = Some(LMaxWitness { first: i, second: r.other, element: r.element.clone(), edges: r.edges() });
                l_max = Some(r.edges());
            }
        }
    }
    Ok(LMaxReport { l_max, witness, overlaps })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CancellationVerdict {
    Pass,
    Fail,
    /// Empty family.
    Vacuous,
}

#[derive(Clone, Debug)]
pub struct CancellationReport {
    pub l_max: Option<usize>,
    pub r_min: Option<usize>,
    pub lambda: Rational64,
    pub verdict: CancellationVerdict,
    pub witness: Option<LMaxWitness>,
}

impl CancellationReport {
    pub fn passes(&self) -> bool {
        self.verdict != CancellationVerdict::Fail
    }
}

/// Strict test `l_max < λ·R_min`.
pub fn check_small_cancellation(family: &RotationFamily, lambda: Rational64, lmax: &LMaxReport) -> CancellationReport {
    let r_min = family.r_min();
    let verdict = match (lmax.l_max, r_min) {
        (Some(l), Some(r)) => {
            if Rational64::from_integer(l as i64) < lambda * Rational64::from_integer(r as i64) {
                CancellationVerdict::Pass
            } else {
                CancellationVerdict::Fail
            }
        }
        _ => CancellationVerdict::Vacuous,
    };
    CancellationReport { l_max: lmax.l_max, r_min, lambda, verdict, witness: lmax.witness.clone() }
}

pub fn cancellation_passes(l_max: usize, r_min: usize, lambda: Rational64) -> bool {
    Rational64::from_integer(l_max as i64) < lambda * Rational64::from_integer(r_min as i64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{z3_z5, EdgeSpec, FiniteGroup, TreeBall, VertexSpec};

    fn free2() -> GroupBackend {
        GroupBackend::free_rank(2).unwrap()
    }

    #[test]
    fn roots() {
        let f = free2();
        for (w, r, n) in [("abab", "a b", 2), ("aba", "a b a", 1), ("aaa", "a", 3), ("b a^6 b^-1", "b a b^-1", 6)] {
            let (h, k) = primitive_root(&f, &f.element(w).unwrap()).unwrap();
            assert_eq!((f.display(&h), k), (r.to_string(), n), "{w}");
        }
        assert!(primitive_root(&f, &f.identity()).is_err());
        let g = z3_z5();
        let (h, n) = primitive_root(&g, &g.element("(s t)^3").unwrap()).unwrap();
        assert_eq!(n, 3);
        assert_eq!(g.pow(&h, 3), g.element("(s t)^3").unwrap());
    }

    /// Brute force overlap: intersect axis vertex sets inside a ball.
    fn brute_overlap(backend: &GroupBackend, a: &Axis, b: &Axis, radius: usize) -> Option<usize> {
        let ball = TreeBall::build(backend, radius).unwrap();
        let shared = ball.vertices().iter().filter(|v| a.contains(backend, v) && b.contains(backend, v)).count();
        shared.checked_sub(1)
    }

    #[test]
    fn overlaps_against_ball_oracle() {
        let f = free2();
        let pairs = [("a b", "b a"), ("a", "b a b^-1"), ("a b a^-1 b^-1", "a b^2"), ("a^2 b", "a b a")];
        for (x, y) in pairs {
            let ax = Axis::new(&f, &f.element(x).unwrap()).unwrap();
            let ay = Axis::new(&f, &f.element(y).unwrap()).unwrap();
            let o = overlap(&f, &ax, &ay).unwrap();
            let brute = brute_overlap(&f, &ax, &ay, 6);
            match o {
                Overlap::Disjoint => assert_eq!(brute, None, "{x} {y}"),
                Overlap::Segment { edges, .. } => assert_eq!(brute, Some(edges), "{x} {y}"),
            }
            // symmetric
            assert_eq!(overlap(&f, &ay, &ax).unwrap().edges(), o.edges());
        }
        let a = Axis::new(&f, &f.element("a").unwrap()).unwrap();
        assert!(matches!(overlap(&f, &a, &a), Err(RotationError::IdenticalAxes)));
        let conj = Axis::new(&f, &f.element("b a b^-1").unwrap()).unwrap();
        assert_eq!(overlap(&f, &a, &conj).unwrap(), Overlap::Disjoint);
    }

    #[test]
    fn overlap_is_translation_invariant() {
        let g = z3_z5();
        let a = Axis::new(&g, &g.element("s t s t^2").unwrap()).unwrap();
        let b = Axis::new(&g, &g.element("s^2 t s t").unwrap()).unwrap();
        let base = overlap(&g, &a, &b).unwrap().edges();
        for w in ["s", "t", "s t^3", "t^2 s^2 t"] {
            let x = g.element(w).unwrap();
            let o = overlap(&g, &translate_axis(&g, &a, &x), &translate_axis(&g, &b, &x)).unwrap();
            assert_eq!(o.edges(), base);
        }
    }

    #[test]
    fn rf2_free_always_passes() {
        let f = free2();
        for w in ["a", "a b", "a b a^-1 b^-1", "a^3 b"] {
            let axis = Axis::new(&f, &f.element(w).unwrap()).unwrap();
            assert!(check_rf2(&f, &axis).passes());
        }
    }

    fn z2_z3() -> GroupBackend {
        let u = VertexSpec { name: "U".into(), group: FiniteGroup::cyclic(2), gens: vec![("s".into(), 1)] };
        let w = VertexSpec { name: "W".into(), group: FiniteGroup::cyclic(3), gens: vec![("t".into(), 1)] };
        let e = EdgeSpec { name: "e".into(), origin: 0, terminus: 1, group: FiniteGroup::trivial(), alpha: vec![0], omega: vec![0] };
        GroupBackend::graph_of_groups(vec![u, w], vec![e]).unwrap()
    }

    /// Oracle: search words up to length 4 for reflections `x g x⁻¹ = g⁻¹`.
    fn brute_reflection(backend: &GroupBackend, g: &Element) -> bool {
        let letters = ["s", "t", "t^-1"];
        let mut words = vec![String::new()];
        for _ in 0..4 {
            let mut next = Vec::new();
            for w in &words {
                for l in letters {
                    next.push(format!("{w} {l}"));
                }
            }
            words.extend(next);
        }
        let inv = backend.inverse(g);
        words.iter().any(|w| backend.conjugate(&backend.element(w).unwrap(), g) == inv)
    }

    #[test]
    fn rf2_reflections_in_modular_group() {
        let g = z2_z3();
        let h = g.element("s t s t^2").unwrap();
        let axis = Axis::new(&g, &h).unwrap();
        match check_rf2(&g, &axis) {
            Rf2Verdict::Reflection { witness, .. } => {
                assert_eq!(g.conjugate(&witness, &h), g.inverse(&h));
            }
            other => panic!("{other:?}"),
        }
        assert!(brute_reflection(&g, &h));
        // exact search agrees with the oracle on s t
        let st = g.element("s t").unwrap();
        let verdict = check_rf2(&g, &Axis::new(&g, &st).unwrap());
        assert_eq!(verdict.passes(), !brute_reflection(&g, &st));
    }

    #[test]
    fn rf2_pointwise_fixer() {
        // Z/2 × Z/2 over Z/2: the edge group fixes every axis of the HNN here
        let k4 = FiniteGroup::from_rows(&[vec![0, 1, 2, 3], vec![1, 0, 3, 2], vec![2, 3, 0, 1], vec![3, 2, 1, 0]]).unwrap();
        let v = VertexSpec { name: "V".into(), group: k4, gens: vec![("x".into(), 1), ("y".into(), 2)] };
        let e = EdgeSpec { name: "t".into(), origin: 0, terminus: 0, group: FiniteGroup::cyclic(2), alpha: vec![0, 1], omega: vec![0, 1] };
        let g = GroupBackend::graph_of_groups(vec![v], vec![e]).unwrap();
        let t = g.element("t").unwrap();
        match check_rf2(&g, &Axis::new(&g, &t).unwrap()) {
            Rf2Verdict::PointwiseFixer { witness } => assert_eq!(witness, g.element("x").unwrap()),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn l_max_examples() {
        let f = free2();
        let fam = RotationFamily::from_words(&f, &["a^7"]).unwrap();
        let rep = compute_l_max(&f, &fam).unwrap();
        assert_eq!(rep.l_max, Some(0));
        assert_eq!(fam.r_min(), Some(7));
        let empty = RotationFamily::from_words(&f, &[]).unwrap();
        let rep = compute_l_max(&f, &empty).unwrap();
        assert_eq!(rep.l_max, None);
        let cr = check_small_cancellation(&empty, Rational64::new(1, 6), &rep);
        assert_eq!(cr.verdict, CancellationVerdict::Vacuous);
        let both = RotationFamily::from_words(&f, &["a b", "b^-1 a^-1"]).unwrap();
        assert!(matches!(compute_l_max(&f, &both), Err(RotationError::SharedAxis { .. })));
    }

    #[test]
    fn l_max_matches_translate_enumeration_oracle() {
        // oracle: all translates by words of length ≤ 3, overlap via ball
        let f = free2();
        for rel in [&["a^2 b^3"][..], &["a b a^-1 b^2"], &["a b^2", "a^2 b^-1 a b"]] {
            let fam = RotationFamily::from_words(&f, rel).unwrap();
            let rep = compute_l_max(&f, &fam).unwrap();
            let ball = TreeBall::build(&f, 3).unwrap();
            let mut best = 0;
            for mi in fam.members() {
                for mj in fam.members() {
                    for v in ball.vertices() {
                        let t = f.vertex_as_path(v);
                        let tr = translate_axis(&f, &mj.axis, &t);
                        if line_key(&tr) == line_key(&mi.axis) {
                            continue;
                        }
                        best = best.max(overlap(&f, &mi.axis, &tr).unwrap().edges());
                    }
                }
            }
            assert!(rep.l_max.unwrap() >= best);
            assert_eq!(rep.l_max.unwrap(), best, "{rel:?}");
        }
    }

    #[test]
    fn cancellation_strictness() {
        let q = Rational64::new(1, 6);
        assert!(cancellation_passes(0, 7, q));
        assert!(!cancellation_passes(1, 6, q));
        assert!(cancellation_passes(1, 7, q));
        assert!(!cancellation_passes(1, 7, Rational64::new(1, 8)));
    }

    fn free_word() -> impl proptest::strategy::Strategy<Value = Vec<(usize, bool)>> {
        use proptest::prelude::*;
        prop::collection::vec((0usize..2, any::<bool>()), 2..9)
    }

    fn cyclically_reduced(w: &[(usize, bool)]) -> bool {
        let n = w.len();
        (0..n).all(|k| {
            let (a, b) = (w[k], w[(k + 1) % n]);
            !(a.0 == b.0 && a.1 != b.1)
        })
    }

    proptest::proptest! {
        #[test]
        fn free_l_max_equals_pieces(w in free_word()) {
            proptest::prop_assume!(cyclically_reduced(&w));
            let f = free2();
            let g = f.evaluate(&w);
            let fam = RotationFamily::new(&f, &[g]).unwrap();
            proptest::prop_assume!(fam.members()[0].exponent == 1);
            let rep = compute_l_max(&f, &fam).unwrap();
            proptest::prop_assert_eq!(rep.l_max.unwrap(), max_piece_length(std::slice::from_ref(&w)));
        }
    }
}
