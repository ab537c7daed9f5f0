use std::collections::BTreeMap;
use std::fmt;

use super::Scwol;
use crate::group::FiniteGroup;

/// Local groups `G_σ`, monomorphisms `ψ_a: G_{i(a)} → G_{t(a)}` as tables,
/// and twists `g_{a,b} ∈ G_{t(a)}` for composable pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexOfGroups {
    pub scwol: Scwol,
    pub groups: Vec<FiniteGroup>,
    pub psi: Vec<Vec<u32>>,
    pub twist: BTreeMap<(usize, usize), u32>,
}

/// The first axiom that fails, with a witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CogViolation {
    Scwol(String),
    /// A table has the wrong size or an entry out of range.
    Shape(String),
    NotHomomorphism { edge: usize, x: u32, y: u32 },
    NotInjective { edge: usize, x: u32, y: u32 },
    MissingTwist { a: usize, b: usize },
    /// `Ad(g_{a,b})·ψ_{ab}` and `ψ_a·ψ_b` differ at `x`.
    AdCompatibility { a: usize, b: usize, x: u32 },
    /// `ψ_a(g_{b,c})·g_{a,bc} ≠ g_{a,b}·g_{ab,c}`.
    Cocycle { a: usize, b: usize, c: usize },
    /// Morphism does not commute with `i`, `t` or composition at an edge.
    MorphismFunctor { edge: usize },
    MorphismHom { vertex: usize },
    /// `Ad(F(a))·ψ_{f(a)}·F_{i(a)} ≠ F_{t(a)}·ψ_a` at `x`.
    MorphismAd { edge: usize, x: u32 },
    /// `F_{t(a)}(g_{a,b})·F(ab) ≠ F(a)·ψ_{f(a)}(F(b))·g_{f(a),f(b)}`.
    MorphismTwist { a: usize, b: usize },
}

impl fmt::Display for CogViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CogViolation::Scwol(s) => write!(f, "scwol axioms: {s}"),
            CogViolation::Shape(s) => write!(f, "table shape: {s}"),
            CogViolation::NotHomomorphism { edge, x, y } => write!(f, "ψ_{edge} is not a homomorphism at ({x}, {y})"),
            CogViolation::NotInjective { edge, x, y } => write!(f, "ψ_{edge} identifies {x} and {y}"),
            CogViolation::MissingTwist { a, b } => write!(f, "no twist for ({a}, {b})"),
            CogViolation::AdCompatibility { a, b, x } => write!(f, "Ad(g_{{{a},{b}}})ψ_ab ≠ ψ_a ψ_b at {x}"),
            CogViolation::Cocycle { a, b, c } => write!(f, "cocycle condition at ({a}, {b}, {c})"),
            CogViolation::MorphismFunctor { edge } => write!(f, "morphism is not a functor at edge {edge}"),
            CogViolation::MorphismHom { vertex } => write!(f, "local map at {vertex} is not a homomorphism"),
            CogViolation::MorphismAd { edge, x } => write!(f, "morphism edge condition fails at edge {edge}, element {x}"),
            CogViolation::MorphismTwist { a, b } => write!(f, "morphism twist condition fails at ({a}, {b})"),
        }
    }
}

impl ComplexOfGroups {
    /// All local groups trivial.
    pub fn trivial(scwol: Scwol) -> Self {
        let n = scwol.vertex_count();
        let psi = vec![vec![0]; scwol.edges.len()];
        let twist = scwol.compose.keys().map(|&k| (k, 0)).collect();
        ComplexOfGroups { scwol, groups: vec![FiniteGroup::trivial(); n], psi, twist }
    }

    pub fn validate(&self) -> Result<(), CogViolation> {
        self.scwol.validate().map_err(|e| CogViolation::Scwol(e.to_string()))?;
        let s = &self.scwol;
        if self.groups.len() != s.vertex_count() || self.psi.len() != s.edges.len() {
            return Err(CogViolation::Shape("one group per vertex and one map per edge".into()));
        }
        for (a, map) in self.psi.iter().enumerate() {
            let (src, dst) = (&self.groups[s.i(a)], &self.groups[s.t(a)]);
            if map.len() != src.order() || map.iter().any(|&y| y as usize >= dst.order()) {
                return Err(CogViolation::Shape(format!("ψ_{a} does not map G_{} into G_{}", s.i(a), s.t(a))));
            }
            for x in src.elements() {
                for y in src.elements() {
                    if map[src.mul(x, y) as usize] != dst.mul(map[x as usize], map[y as usize]) {
                        return Err(CogViolation::NotHomomorphism { edge: a, x, y });
                    }
                }
            }
            for x in src.elements() {
                for y in x + 1..src.order() as u32 {
                    if map[x as usize] == map[y as usize] {
                        return Err(CogViolation::NotInjective { edge: a, x, y });
                    }
                }
            }
        }
        for (a, b, ab) in s.composable_pairs() {
            let Some(&g) = self.twist.get(&(a, b)) else { return Err(CogViolation::MissingTwist { a, b }) };
            let target = &self.groups[s.t(a)];
            if g as usize >= target.order() {
                return Err(CogViolation::Shape(format!("twist ({a}, {b}) out of range")));
            }
            for x in self.groups[s.i(b)].elements() {
                let lhs = target.mul(target.mul(g, self.psi[ab][x as usize]), target.inv(g));
                let rhs = self.psi[a][self.psi[b][x as usize] as usize];
                if lhs != rhs {
                    return Err(CogViolation::AdCompatibility { a, b, x });
                }
            }
        }
        if self.twist.len() != s.compose.len() {
            return Err(CogViolation::Shape("twists on non-composable pairs".into()));
        }
        for (a, b, c) in s.composable_triples() {
            let (ab, bc) = (s.compose[&(a, b)], s.compose[&(b, c)]);
            let g = &self.groups[s.t(a)];
            let lhs = g.mul(self.psi[a][self.twist[&(b, c)] as usize], self.twist[&(a, bc)]);
            let rhs = g.mul(self.twist[&(a, b)], self.twist[&(ab, c)]);
            if lhs != rhs {
                return Err(CogViolation::Cocycle { a, b, c });
            }
        }
        Ok(())
    }
}

/// A morphism of complexes of groups over a functor `f` of scwols.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CogMorphism {
    pub vertex_map: Vec<usize>,
    pub edge_map: Vec<usize>,
    /// `F_σ: G_σ → G_{f(σ)}` as tables.
    pub local: Vec<Vec<u32>>,
    /// `F(a) ∈ G_{t(f(a))}`.
    pub elements: Vec<u32>,
}

impl CogMorphism {
    /// Bijective on vertices, edges and every local group.
    pub fn is_isomorphism(&self, src: &ComplexOfGroups, dst: &ComplexOfGroups) -> bool {
        let bijective = |m: &[usize], n: usize| {
            let mut seen = vec![false; n];
            m.len() == n && m.iter().all(|&x| x < n && !std::mem::replace(&mut seen[x], true))
        };
        bijective(&self.vertex_map, dst.scwol.vertex_count())
            && bijective(&self.edge_map, dst.scwol.edges.len())
            && self.local.iter().enumerate().all(|(v, m)| {
                let m: Vec<usize> = m.iter().map(|&x| x as usize).collect();
                bijective(&m, dst.groups[self.vertex_map[v]].order()) && src.groups[v].order() == m.len()
            })
    }
}

pub fn check_morphism(src: &ComplexOfGroups, dst: &ComplexOfGroups, m: &CogMorphism) -> Result<(), CogViolation> {
    let (s, d) = (&src.scwol, &dst.scwol);
    if m.vertex_map.len() != s.vertex_count()
        || m.edge_map.len() != s.edges.len()
        || m.local.len() != s.vertex_count()
        || m.elements.len() != s.edges.len()
    {
        return Err(CogViolation::Shape("morphism tables do not match the source".into()));
    }
    for (a, &fa) in m.edge_map.iter().enumerate() {
        if fa >= d.edges.len() || d.i(fa) != m.vertex_map[s.i(a)] || d.t(fa) != m.vertex_map[s.t(a)] {
            return Err(CogViolation::MorphismFunctor { edge: a });
        }
        if m.elements[a] as usize >= dst.groups[d.t(fa)].order() {
            return Err(CogViolation::Shape(format!("F({a}) out of range")));
        }
    }
    for (a, b, ab) in s.composable_pairs() {
        if d.compose.get(&(m.edge_map[a], m.edge_map[b])) != Some(&m.edge_map[ab]) {
            return Err(CogViolation::MorphismFunctor { edge: ab });
        }
    }
    for (v, map) in m.local.iter().enumerate() {
        let (g, h) = (&src.groups[v], &dst.groups[m.vertex_map[v]]);
        if map.len() != g.order() || map.iter().any(|&y| y as usize >= h.order()) {
            return Err(CogViolation::MorphismHom { vertex: v });
        }
        for x in g.elements() {
            for y in g.elements() {
                if map[g.mul(x, y) as usize] != h.mul(map[x as usize], map[y as usize]) {
                    return Err(CogViolation::MorphismHom { vertex: v });
                }
            }
        }
    }
    for a in 0..s.edges.len() {
        let fa = m.edge_map[a];
        let h = &dst.groups[d.t(fa)];
        let fa_el = m.elements[a];
        for x in src.groups[s.i(a)].elements() {
            let lhs = h.mul(h.mul(fa_el, dst.psi[fa][m.local[s.i(a)][x as usize] as usize]), h.inv(fa_el));
            let rhs = m.local[s.t(a)][src.psi[a][x as usize] as usize];
            if lhs != rhs {
                return Err(CogViolation::MorphismAd { edge: a, x });
            }
        }
    }
    for (a, b, ab) in s.composable_pairs() {
        let (fa, fb) = (m.edge_map[a], m.edge_map[b]);
        let h = &dst.groups[d.t(fa)];
        let lhs = h.mul(m.local[s.t(a)][src.twist[&(a, b)] as usize], m.elements[ab]);
        let rhs = h.mul(h.mul(m.elements[a], dst.psi[fa][m.elements[b] as usize]), dst.twist[&(fa, fb)]);
        if lhs != rhs {
            return Err(CogViolation::MorphismTwist { a, b });
        }
    }
    Ok(())
}
