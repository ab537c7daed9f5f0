//! Single-field mutations of a valid complex of groups that are guaranteed
//! to break a named axiom.

use rand::seq::SliceRandom;
use rand::Rng;

use super::{CogViolation, ComplexOfGroups};
use crate::group::FiniteGroup;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mutation {
    /// One entry of `ψ_edge` changed so the map is no longer an injective
    /// homomorphism.
    Map { edge: usize },
    /// `g_{a,b}` replaced by an element whose conjugation differs on
    /// `ψ_{ab}(G_{i(b)})`.
    Twist { a: usize, b: usize },
    DropTwist { a: usize, b: usize },
}

impl Mutation {
    /// Whether `v` names the mutated field.
    pub fn witnessed_by(&self, v: &CogViolation) -> bool {
        match (*self, v) {
            (Mutation::Map { edge }, CogViolation::NotHomomorphism { edge: e, .. } | CogViolation::NotInjective { edge: e, .. }) => {
                edge == *e
            }
            (Mutation::Twist { a, b }, CogViolation::AdCompatibility { a: x, b: y, .. }) => (a, b) == (*x, *y),
            (Mutation::DropTwist { a, b }, CogViolation::MissingTwist { a: x, b: y }) => (a, b) == (*x, *y),
            _ => false,
        }
    }
}

/// A mutated copy of `cog`, or `None` when the drawn kind of mutation has
/// no admissible target.
pub fn mutate<R: Rng>(cog: &ComplexOfGroups, rng: &mut R) -> Option<(ComplexOfGroups, Mutation)> {
    let s = &cog.scwol;
    let mut out = cog.clone();
    match rng.gen_range(0..3) {
        0 => {
            let edges: Vec<usize> = (0..s.edges.len()).filter(|&a| cog.groups[s.i(a)].order() > 1).collect();
            let &a = edges.choose(rng)?;
            let src = &cog.groups[s.i(a)];
            let dst = &cog.groups[s.t(a)];
            let x = rng.gen_range(1..src.order());
            let bad: Vec<u32> = dst
                .elements()
                .filter(|&y| {
                    let mut m = cog.psi[a].clone();
                    m[x] = y;
                    src.check_hom(&m, dst).is_err() || !FiniteGroup::is_injective(&m)
                })
                .collect();
            out.psi[a][x] = *bad.choose(rng)?;
            Some((out, Mutation::Map { edge: a }))
        }
        1 => {
            let pairs: Vec<(usize, usize, usize)> = s.composable_pairs().collect();
            let &(a, b, ab) = pairs.choose(rng)?;
            let g = &cog.groups[s.t(a)];
            let old = cog.twist[&(a, b)];
            let bad: Vec<u32> = g
                .elements()
                .filter(|&y| {
                    cog.groups[s.i(b)].elements().any(|x| {
                        let z = cog.psi[ab][x as usize];
                        g.mul(g.mul(y, z), g.inv(y)) != g.mul(g.mul(old, z), g.inv(old))
                    })
                })
                .collect();
            out.twist.insert((a, b), *bad.choose(rng)?);
            Some((out, Mutation::Twist { a, b }))
        }
        _ => {
            let keys: Vec<(usize, usize)> = cog.twist.keys().copied().collect();
            let &(a, b) = keys.choose(rng)?;
            out.twist.remove(&(a, b));
            Some((out, Mutation::DropTwist { a, b }))
        }
    }
}
