use std::collections::BTreeMap;
use std::fmt::Debug;

use super::{CogViolation, ComplexOfGroups, CxError, Scwol};
use crate::group::FiniteGroup;

/// A group acting without inversion on a finite-quotient cell complex whose
/// cells have only strict faces of lower dimension, with one chosen cell per
/// orbit.
pub trait GroupAction {
    type Elem: Clone + Ord + Debug;
    type Cell: Clone + Ord + Debug;

    fn identity(&self) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
    fn act(&self, g: &Self::Elem, c: &Self::Cell) -> Self::Cell;
    /// One cell per orbit.
    fn representatives(&self) -> Vec<Self::Cell>;
    /// All strict faces.
    fn faces(&self, c: &Self::Cell) -> Vec<Self::Cell>;
    /// The representative of the orbit of `c` and an `h` with `h·c` equal
    /// to it.
    fn normalize(&self, c: &Self::Cell) -> (Self::Cell, Self::Elem);
    /// Setwise stabilizer of a representative; finite.
    fn stabilizer(&self, rep: &Self::Cell) -> Vec<Self::Elem>;
    fn label(&self, c: &Self::Cell) -> String {
        format!("{c:?}")
    }
}

/// The complex of groups of an action, with the data of its morphism to the
/// acting group: local groups are stabilizers of the representatives,
/// `F(a) = h_a`.
#[derive(Clone, Debug)]
pub struct InducedCog<E, C> {
    pub cog: ComplexOfGroups,
    pub cells: Vec<C>,
    /// Elements of each local group, identity first.
    pub local: Vec<Vec<E>>,
    /// The face of the source representative that each edge comes from.
    pub lifts: Vec<C>,
    pub h: Vec<E>,
}

impl<E: Clone + Ord + Debug, C: Clone + Ord + Debug> InducedCog<E, C> {
    /// Checks `Ad(h_a)` equals `ψ_a` through the inclusions, and
    /// `g_{a,b}·h_{ab} = h_a·h_b`.
    pub fn check_morphism_to_group<A>(&self, action: &A) -> Result<(), CogViolation>
    where
        A: GroupAction<Elem = E, Cell = C>,
    {
        let s = &self.cog.scwol;
        for a in 0..s.edges.len() {
            let (src, dst) = (&self.local[s.i(a)], &self.local[s.t(a)]);
            for (x, g) in src.iter().enumerate() {
                let conj = action.mul(&action.mul(&self.h[a], g), &action.inv(&self.h[a]));
                if dst[self.cog.psi[a][x] as usize] != conj {
                    return Err(CogViolation::MorphismAd { edge: a, x: x as u32 });
                }
            }
        }
        for (a, b, ab) in s.composable_pairs() {
            let g = &self.local[s.t(a)][self.cog.twist[&(a, b)] as usize];
            if action.mul(g, &self.h[ab]) != action.mul(&self.h[a], &self.h[b]) {
                return Err(CogViolation::MorphismTwist { a, b });
            }
        }
        Ok(())
    }
}

pub fn induced_cog<A: GroupAction>(action: &A) -> Result<InducedCog<A::Elem, A::Cell>, CxError> {
    let cells = action.representatives();
    let index: BTreeMap<&A::Cell, usize> = cells.iter().enumerate().map(|(i, c)| (c, i)).collect();
    if index.len() != cells.len() {
        return Err(CxError::Scwol("repeated representative".into()));
    }
    let mut local = Vec::new();
    let mut groups = Vec::new();
    for c in &cells {
        let (rep, _) = action.normalize(c);
        if rep != *c {
            return Err(CxError::Scwol(format!("{} does not normalize to itself", action.label(c))));
        }
        let elems = action.stabilizer(c);
        if elems.first() != Some(&action.identity()) {
            return Err(CxError::Scwol("stabilizer must list the identity first".into()));
        }
        for g in &elems {
            if action.act(g, c) != *c {
                return Err(CxError::Scwol(format!("{g:?} does not stabilize {}", action.label(c))));
            }
            // without inversion the stabilizer fixes every face
            for f in action.faces(c) {
                if action.act(g, &f) != f {
                    return Err(CxError::Inversion { cell: action.label(c), element: format!("{g:?}") });
                }
            }
        }
        groups.push(finite_table(action, &elems)?);
        local.push(elems);
    }
    let mut edges = Vec::new();
    let mut lifts = Vec::new();
    let mut h = Vec::new();
    let mut edge_of: BTreeMap<(usize, A::Cell), usize> = BTreeMap::new();
    for (i, c) in cells.iter().enumerate() {
        for f in action.faces(c) {
            let (rep, hf) = action.normalize(&f);
            let Some(&t) = index.get(&rep) else {
                return Err(CxError::Scwol(format!("face {} normalizes outside the representatives", action.label(&f))));
            };
            edge_of.insert((i, f.clone()), edges.len());
            edges.push((i, t));
            lifts.push(f);
            h.push(hf);
        }
    }
    // ab = (source of b, h_b⁻¹ · face of a)
    let mut compose = BTreeMap::new();
    for (a, &(ia, _)) in edges.iter().enumerate() {
        for (b, &(ib, tb)) in edges.iter().enumerate() {
            if ia != tb {
                continue;
            }
            let face = action.act(&action.inv(&h[b]), &lifts[a]);
            let Some(&ab) = edge_of.get(&(ib, face.clone())) else {
                return Err(CxError::Scwol(format!("{} is not a face of {}", action.label(&face), action.label(&cells[ib]))));
            };
            compose.insert((a, b), ab);
        }
    }
    let scwol = Scwol { labels: cells.iter().map(|c| action.label(c)).collect(), edges, compose };
    scwol.validate()?;
    let lookup: Vec<BTreeMap<&A::Elem, u32>> =
        local.iter().map(|l| l.iter().enumerate().map(|(k, g)| (g, k as u32)).collect()).collect();
    let find = |v: usize, g: &A::Elem| -> Result<u32, CxError> {
        lookup[v].get(g).copied().ok_or_else(|| CxError::Scwol(format!("{g:?} is not in the stabilizer of {}", scwol.labels[v])))
    };
    let mut psi = Vec::new();
    for (a, &(i, t)) in scwol.edges.iter().enumerate() {
        let inv = action.inv(&h[a]);
        let table = local[i].iter().map(|g| find(t, &action.mul(&action.mul(&h[a], g), &inv))).collect::<Result<_, _>>()?;
        psi.push(table);
    }
    let mut twist = BTreeMap::new();
    for (a, b, ab) in scwol.composable_pairs() {
        let g = action.mul(&action.mul(&h[a], &h[b]), &action.inv(&h[ab]));
        twist.insert((a, b), find(scwol.t(a), &g)?);
    }
    let cog = ComplexOfGroups { scwol, groups, psi, twist };
    Ok(InducedCog { cog, cells, local, lifts, h })
}

fn finite_table<A: GroupAction>(action: &A, elems: &[A::Elem]) -> Result<FiniteGroup, CxError> {
    let index: BTreeMap<&A::Elem, usize> = elems.iter().enumerate().map(|(k, g)| (g, k)).collect();
    let n = elems.len();
    let mut table = vec![0; n * n];
    for (x, g) in elems.iter().enumerate() {
        for (y, k) in elems.iter().enumerate() {
            let Some(&z) = index.get(&action.mul(g, k)) else {
                return Err(CxError::Scwol("stabilizer is not closed under multiplication".into()));
            };
            table[x * n + y] = z;
        }
    }
    Ok(FiniteGroup::from_closed_set(n, |x, y| table[x * n + y]))
}
