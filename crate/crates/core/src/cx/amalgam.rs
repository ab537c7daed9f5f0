use std::collections::{BTreeMap, BTreeSet};

use super::{check_morphism, CogMorphism, ComplexOfGroups, CxError, Scwol};

/// A complex of groups glued to the centre along a shared subcomplex.
#[derive(Clone, Debug)]
pub struct Piece {
    pub cog: ComplexOfGroups,
    /// `(piece vertex, centre vertex)` for every shared vertex.
    pub shared: Vec<(usize, usize)>,
    /// Isomorphisms `G^piece_v → G^centre`, parallel to `shared`.
    pub local: Vec<Vec<u32>>,
    /// `(piece edge, centre edge)` for every piece edge leaving a shared
    /// vertex.
    pub edges: Vec<(usize, usize)>,
}

#[derive(Clone, Debug)]
pub struct Amalgam {
    pub cog: ComplexOfGroups,
    /// Vertex and edge of the amalgam that each piece cell became.
    pub vertex_maps: Vec<Vec<usize>>,
    pub edge_maps: Vec<Vec<usize>>,
    /// Local maps of each piece into the amalgam.
    pub local_maps: Vec<Vec<Vec<u32>>>,
}

impl Amalgam {
    /// The amalgam restricted to the image of piece `k`, and the morphism
    /// from the piece onto it.
    pub fn piece_restriction(&self, k: usize) -> Result<(ComplexOfGroups, CogMorphism), CxError> {
        let keep: Vec<usize> = self.vertex_maps[k].iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
        let (sub, edge_ids) = restrict(&self.cog, &keep)?;
        let new_vertex: BTreeMap<usize, usize> = keep.iter().enumerate().map(|(n, &v)| (v, n)).collect();
        let new_edge: BTreeMap<usize, usize> = edge_ids.iter().enumerate().map(|(n, &e)| (e, n)).collect();
        let m = CogMorphism {
            vertex_map: self.vertex_maps[k].iter().map(|v| new_vertex[v]).collect(),
            edge_map: self.edge_maps[k].iter().map(|e| new_edge[e]).collect(),
            local: self.local_maps[k].clone(),
            elements: vec![0; self.edge_maps[k].len()],
        };
        Ok((sub, m))
    }
}

/// The sub-complex of groups on a vertex set closed under `t`, with the
/// original ids of its edges.
pub fn restrict(cog: &ComplexOfGroups, keep: &[usize]) -> Result<(ComplexOfGroups, Vec<usize>), CxError> {
    let s = &cog.scwol;
    let index: BTreeMap<usize, usize> = keep.iter().enumerate().map(|(n, &v)| (v, n)).collect();
    if index.len() != keep.len() || keep.iter().any(|&v| v >= s.vertex_count()) {
        return Err(CxError::Amalgam("vertex list must be distinct vertices".into()));
    }
    let mut edge_ids = Vec::new();
    for (a, &(i, t)) in s.edges.iter().enumerate() {
        if index.contains_key(&i) {
            if !index.contains_key(&t) {
                return Err(CxError::Amalgam(format!("vertex set is not closed under faces at edge {a}")));
            }
            edge_ids.push(a);
        }
    }
    let new_edge: BTreeMap<usize, usize> = edge_ids.iter().enumerate().map(|(n, &e)| (e, n)).collect();
    let scwol = Scwol {
        labels: keep.iter().map(|&v| s.labels[v].clone()).collect(),
        edges: edge_ids.iter().map(|&a| (index[&s.i(a)], index[&s.t(a)])).collect(),
        compose: s
            .composable_pairs()
            .filter(|(a, b, _)| new_edge.contains_key(a) && new_edge.contains_key(b))
            .map(|(a, b, ab)| ((new_edge[&a], new_edge[&b]), new_edge[&ab]))
            .collect(),
    };
    let twist = s
        .composable_pairs()
        .filter(|(a, b, _)| new_edge.contains_key(a) && new_edge.contains_key(b))
        .map(|(a, b, _)| ((new_edge[&a], new_edge[&b]), cog.twist[&(a, b)]))
        .collect();
    let sub = ComplexOfGroups {
        scwol,
        groups: keep.iter().map(|&v| cog.groups[v].clone()).collect(),
        psi: edge_ids.iter().map(|&a| cog.psi[a].clone()).collect(),
        twist,
    };
    Ok((sub, edge_ids))
}

/// Glues pairwise disjoint pieces to a centre. Each shared subcomplex must be
/// non-empty, connected, closed under faces, and embedded as a full
/// subcomplex of the centre with matching local data.
pub fn amalgamate(centre: &ComplexOfGroups, pieces: &[Piece]) -> Result<Amalgam, CxError> {
    centre.validate().map_err(CxError::Violation)?;
    let c = &centre.scwol;
    let mut used = BTreeSet::new();
    let mut labels = c.labels.clone();
    let mut groups = centre.groups.clone();
    let mut edges = c.edges.clone();
    let mut psi = centre.psi.clone();
    let mut compose = c.compose.clone();
    let mut twist = centre.twist.clone();
    let mut out = Amalgam { cog: centre.clone(), vertex_maps: Vec::new(), edge_maps: Vec::new(), local_maps: Vec::new() };
    for (k, piece) in pieces.iter().enumerate() {
        let p = &piece.cog;
        p.validate().map_err(CxError::Violation)?;
        let ps = &p.scwol;
        let err = |m: String| CxError::Amalgam(format!("piece {k}: {m}"));
        if piece.shared.is_empty() {
            return Err(err("shared subcomplex is empty".into()));
        }
        if piece.local.len() != piece.shared.len() {
            return Err(err("one local isomorphism per shared vertex".into()));
        }
        let phi: BTreeMap<usize, (usize, &Vec<u32>)> =
            piece.shared.iter().zip(&piece.local).map(|(&(v, w), l)| (v, (w, l))).collect();
        if phi.len() != piece.shared.len() {
            return Err(err("shared vertex listed twice".into()));
        }
        for &(v, w) in &piece.shared {
            if v >= ps.vertex_count() || w >= c.vertex_count() {
                return Err(err("shared vertex out of range".into()));
            }
            if !used.insert(w) {
                return Err(err(format!("centre vertex {w} is already used by another piece")));
            }
            let map = phi[&v].1;
            let (src, dst) = (&p.groups[v], &centre.groups[w]);
            let bijective = map.len() == dst.order() && map.iter().collect::<BTreeSet<_>>().len() == map.len();
            if !bijective || src.check_hom(map, dst).is_err() {
                return Err(err(format!("local map at shared vertex {v} is not an isomorphism")));
            }
        }
        // matching edges: shared part of piece ↔ edges of the centre leaving the image
        let image: BTreeMap<usize, usize> = piece.shared.iter().map(|&(v, w)| (w, v)).collect();
        let centre_edge: BTreeMap<usize, usize> = piece.edges.iter().copied().collect();
        if centre_edge.len() != piece.edges.len() || centre_edge.values().collect::<BTreeSet<_>>().len() != piece.edges.len() {
            return Err(err("edge matching is not injective".into()));
        }
        for (a, &(i, t)) in ps.edges.iter().enumerate() {
            if !phi.contains_key(&i) {
                if centre_edge.contains_key(&a) {
                    return Err(err(format!("edge {a} leaves an unshared vertex but is matched")));
                }
                continue;
            }
            let Some(&(ti, tmap)) = phi.get(&t) else {
                return Err(err(format!("shared subcomplex is not closed under faces at edge {a}")));
            };
            let Some(&e) = centre_edge.get(&a) else {
                return Err(err(format!("edge {a} has no matching edge in the centre")));
            };
            let (wi, imap) = phi[&i];
            // Φ_t ∘ ψ^P_a = ψ^C_e ∘ Φ_i
            let fits = e < c.edges.len() && c.edges[e] == (wi, ti);
            if !fits || !(0..p.groups[i].order()).all(|x| tmap[p.psi[a][x] as usize] == centre.psi[e][imap[x] as usize]) {
                return Err(err(format!("edge {a} does not match centre edge {e}")));
            }
        }
        let leaving = (0..c.edges.len()).filter(|&e| image.contains_key(&c.i(e))).count();
        if leaving != centre_edge.len() {
            return Err(err("shared subcomplex is not full in the centre".into()));
        }
        for (a, b, ab) in ps.composable_pairs() {
            if let (Some(&ea), Some(&eb)) = (centre_edge.get(&a), centre_edge.get(&b)) {
                let t = phi[&ps.t(a)].1;
                if c.compose[&(ea, eb)] != centre_edge[&ab] || centre.twist[&(ea, eb)] != t[p.twist[&(a, b)] as usize] {
                    return Err(err(format!("composition or twist differs from the centre at ({a}, {b})")));
                }
            }
        }
        let shared_vertices: Vec<usize> = phi.keys().copied().collect();
        let (shared_cog, _) = restrict(p, &shared_vertices).map_err(|e| err(e.to_string()))?;
        if !shared_cog.scwol.is_connected() {
            return Err(err("shared subcomplex is not connected".into()));
        }

        let mut vmap = Vec::with_capacity(ps.vertex_count());
        let mut local = Vec::with_capacity(ps.vertex_count());
        for v in 0..ps.vertex_count() {
            match phi.get(&v) {
                Some(&(w, l)) => {
                    vmap.push(w);
                    local.push(l.clone());
                }
                None => {
                    vmap.push(labels.len());
                    labels.push(format!("{k}:{}", ps.labels[v]));
                    groups.push(p.groups[v].clone());
                    local.push(p.groups[v].elements().collect());
                }
            }
        }
        let mut emap = Vec::with_capacity(ps.edges.len());
        for (a, &(i, t)) in ps.edges.iter().enumerate() {
            match centre_edge.get(&a) {
                Some(&e) => emap.push(e),
                None => {
                    emap.push(edges.len());
                    edges.push((vmap[i], vmap[t]));
                    psi.push(p.psi[a].iter().map(|&x| local[t][x as usize]).collect());
                }
            }
        }
        for (a, b, ab) in ps.composable_pairs() {
            if centre_edge.contains_key(&a) && centre_edge.contains_key(&b) {
                continue;
            }
            compose.insert((emap[a], emap[b]), emap[ab]);
            twist.insert((emap[a], emap[b]), local[ps.t(a)][p.twist[&(a, b)] as usize]);
        }
        out.vertex_maps.push(vmap);
        out.edge_maps.push(emap);
        out.local_maps.push(local);
    }
    out.cog = ComplexOfGroups { scwol: Scwol { labels, edges, compose }, groups, psi, twist };
    out.cog.validate().map_err(CxError::Violation)?;
    for (k, piece) in pieces.iter().enumerate() {
        let m = CogMorphism {
            vertex_map: out.vertex_maps[k].clone(),
            edge_map: out.edge_maps[k].clone(),
            local: out.local_maps[k].clone(),
            elements: vec![0; out.edge_maps[k].len()],
        };
        check_morphism(&piece.cog, &out.cog, &m).map_err(CxError::Violation)?;
    }
    Ok(out)
}
