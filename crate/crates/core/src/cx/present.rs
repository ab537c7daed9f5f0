use std::collections::VecDeque;
use std::fmt;

use super::ComplexOfGroups;
use crate::group::{format_by, BackendKind, GroupBackend};
use crate::rotation::RotationFamily;

/// Letters are `(generator index, inverted)`.
pub type Word = Vec<(usize, bool)>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupPresentation {
    pub generators: Vec<String>,
    pub relators: Vec<Word>,
}

impl GroupPresentation {
    pub fn new(generators: Vec<String>) -> Self {
        GroupPresentation { generators, relators: Vec::new() }
    }

    /// Adds the cyclic reduction of `word`, skipping empty and repeated relators.
    pub fn add_relator(&mut self, word: &[(usize, bool)]) {
        let mut w: Word = Vec::with_capacity(word.len());
        for &x in word {
            assert!(x.0 < self.generators.len(), "relator letter out of range");
            if w.last() == Some(&(x.0, !x.1)) {
                w.pop();
            } else {
                w.push(x);
            }
        }
        let mut lo = 0;
        let mut hi = w.len();
        while hi - lo >= 2 && w[lo] == (w[hi - 1].0, !w[hi - 1].1) {
            lo += 1;
            hi -= 1;
        }
        let w = w[lo..hi].to_vec();
        if !w.is_empty() && !self.relators.contains(&w) {
            self.relators.push(w);
        }
    }

    pub fn format_word(&self, w: &[(usize, bool)]) -> String {
        format_by(w, |l| &self.generators[l])
    }

    /// Exponent sums, one row per relator.
    pub fn relation_matrix(&self) -> Vec<Vec<i64>> {
        self.relators
            .iter()
            .map(|r| {
                let mut row = vec![0; self.generators.len()];
                for &(l, inv) in r {
                    row[l] += if inv { -1 } else { 1 };
                }
                row
            })
            .collect()
    }

    /// Plain-text form: a `generators:` line, then one relator per line.
    pub fn to_text(&self) -> String {
        let mut out = format!("generators: {}\n", self.generators.join(" "));
        for r in &self.relators {
            out.push_str(&format!("relator: {}\n", self.format_word(r)));
        }
        out
    }
}

impl fmt::Display for GroupPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rels: Vec<String> = self.relators.iter().map(|r| self.format_word(r)).collect();
        if rels.is_empty() {
            write!(f, "<{} | >", self.generators.join(", "))
        } else {
            write!(f, "<{} | {}>", self.generators.join(", "), rels.join(", "))
        }
    }
}

/// Vertex group relations, edge relations and stable letters of the backend.
pub fn backend_presentation(backend: &GroupBackend) -> GroupPresentation {
    let mut p = GroupPresentation::new(backend.letters().iter().map(|l| l.name.clone()).collect());
    if let BackendKind::Free { .. } = backend.kind() {
        return p;
    }
    for (v, spec) in backend.vertices().iter().enumerate() {
        let g = &spec.group;
        if let [(name, gen)] = spec.gens.as_slice() {
            if g.element_order(*gen) == g.order() {
                let l = backend.letter(name).expect("vertex letter");
                p.add_relator(&vec![(l, false); g.order()]);
                continue;
            }
        }
        // multiplication by generators on shortest words
        for x in g.elements() {
            for (name, gen) in &spec.gens {
                let l = backend.letter(name).expect("vertex letter");
                let mut w = backend.vertex_word(v, x).to_vec();
                w.push((l, false));
                w.extend(inverse(backend.vertex_word(v, g.mul(x, *gen))));
                p.add_relator(&w);
            }
        }
    }
    for (e, spec) in backend.edges().iter().enumerate() {
        let gens = generating_set(&spec.group);
        let stable = backend.stable_letter(e);
        for y in gens {
            // α(y)·t = t·ω(y)
            let mut w = backend.vertex_word(spec.origin, spec.alpha[y as usize]).to_vec();
            if let Some(t) = stable {
                w.push((t, false));
            }
            w.extend(inverse(backend.vertex_word(spec.terminus, spec.omega[y as usize])));
            if let Some(t) = stable {
                w.push((t, true));
            }
            p.add_relator(&w);
        }
    }
    p
}

fn generating_set(g: &crate::group::FiniteGroup) -> Vec<u32> {
    let mut gens = Vec::new();
    let mut span = vec![0];
    for x in g.elements() {
        if !span.contains(&x) {
            gens.push(x);
            span = g.closure(&gens);
        }
    }
    gens
}

fn inverse(w: &[(usize, bool)]) -> Word {
    w.iter().rev().map(|&(l, i)| (l, !i)).collect()
}

/// The backend presentation with one relator per family member.
pub fn quotient_presentation(backend: &GroupBackend, family: &RotationFamily) -> GroupPresentation {
    let mut p = backend_presentation(backend);
    for m in family.members() {
        p.add_relator(&backend.word_of(&m.element));
    }
    p
}

/// Fundamental group of a complex of finite groups: the local groups, one
/// letter per edge, `a·x·a⁻¹ = ψ_a(x)`, `a·b = g_{a,b}·(ab)`, and the edges
/// of a maximal tree set to 1.
pub fn cog_presentation(cog: &ComplexOfGroups) -> GroupPresentation {
    let s = &cog.scwol;
    let mut names = Vec::new();
    let mut first = Vec::with_capacity(s.vertex_count());
    for (v, g) in cog.groups.iter().enumerate() {
        first.push(names.len());
        for x in 1..g.order() {
            names.push(format!("g{v}_{x}"));
        }
    }
    let edge0 = names.len();
    names.extend((0..s.edges.len()).map(|a| format!("e{a}")));
    let mut p = GroupPresentation::new(names);
    let el = |v: usize, x: u32| -> Word {
        if x == 0 {
            Vec::new()
        } else {
            vec![(first[v] + x as usize - 1, false)]
        }
    };
    for (v, g) in cog.groups.iter().enumerate() {
        for x in 1..g.order() as u32 {
            for y in 1..g.order() as u32 {
                let mut w = el(v, x);
                w.extend(el(v, y));
                w.extend(inverse(&el(v, g.mul(x, y))));
                p.add_relator(&w);
            }
        }
    }
    for a in 0..s.edges.len() {
        let e = (edge0 + a, false);
        for x in 1..cog.groups[s.i(a)].order() as u32 {
            let mut w = vec![e];
            w.extend(el(s.i(a), x));
            w.push((edge0 + a, true));
            w.extend(inverse(&el(s.t(a), cog.psi[a][x as usize])));
            p.add_relator(&w);
        }
    }
    for (a, b, ab) in s.composable_pairs() {
        let mut w = vec![(edge0 + a, false), (edge0 + b, false), (edge0 + ab, true)];
        w.extend(inverse(&el(s.t(a), cog.twist[&(a, b)])));
        p.add_relator(&w);
    }
    for a in spanning_tree(s) {
        p.add_relator(&[(edge0 + a, false)]);
    }
    p
}

fn spanning_tree(s: &super::Scwol) -> Vec<usize> {
    let n = s.vertex_count();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for root in 0..n {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for (a, &(i, t)) in s.edges.iter().enumerate() {
                for (x, y) in [(i, t), (t, i)] {
                    if x == v && !seen[y] {
                        seen[y] = true;
                        out.push(a);
                        queue.push_back(y);
                    }
                }
            }
        }
    }
    out
}

/// `Z^rank ⊕ Z/d_1 ⊕ ... ⊕ Z/d_k` with `d_1 | d_2 | ...`, all `d_i > 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianInvariants {
    pub rank: usize,
    pub torsion: Vec<u64>,
}

impl AbelianInvariants {
    /// `|Hom(A, Z/m)| = m^rank · ∏ gcd(d_i, m)`.
    pub fn hom_count(&self, m: u64) -> u128 {
        let mut n = (m as u128).pow(self.rank as u32);
        for &d in &self.torsion {
            n *= num_integer::gcd(d, m) as u128;
        }
        n
    }
}

impl fmt::Display for AbelianInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.torsion.iter().map(|d| format!("Z/{d}")).collect();
        parts.extend((0..self.rank).map(|_| "Z".to_string()));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" ⊕ "))
        }
    }
}

pub fn abelianization(p: &GroupPresentation) -> AbelianInvariants {
    let factors = invariant_factors(&p.relation_matrix(), p.generators.len());
    AbelianInvariants {
        rank: p.generators.len() - factors.len(),
        torsion: factors.into_iter().filter(|&d| d > 1).map(|d| u64::try_from(d).expect("torsion fits in u64")).collect(),
    }
}

/// Non-zero diagonal of the Smith normal form of a `rows × cols` integer
/// matrix, positive and in divisibility order.
pub fn invariant_factors(matrix: &[Vec<i64>], cols: usize) -> Vec<i128> {
    let mut m: Vec<Vec<i128>> = matrix.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let rows = m.len();
    let mut out = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // smallest non-zero entry of the remaining block as pivot
        let Some((pr, pc)) = (t..rows)
            .flat_map(|r| (t..cols).map(move |c| (r, c)))
            .filter(|&(r, c)| m[r][c] != 0)
            .min_by_key(|&(r, c)| m[r][c].abs())
        else {
            break;
        };
        m.swap(t, pr);
        for row in m.iter_mut() {
            row.swap(t, pc);
        }
        let mut clean = true;
        for r in t + 1..rows {
            let q = m[r][t] / m[t][t];
            if q != 0 {
                for c in t..cols {
                    m[r][c] -= q * m[t][c];
                }
            }
            clean &= m[r][t] == 0;
        }
        for c in t + 1..cols {
            let q = m[t][c] / m[t][t];
            if q != 0 {
                for r in t..rows {
                    m[r][c] -= q * m[r][t];
                }
            }
            clean &= m[t][c] == 0;
        }
        if !clean {
            continue;
        }
        let d = m[t][t];
        if let Some(r) = (t + 1..rows).find(|&r| (t + 1..cols).any(|c| m[r][c] % d != 0)) {
            for c in t..cols {
                m[t][c] += m[r][c];
            }
            continue;
        }
        out.push(d.abs());
        t += 1;
    }
    out
}

/// Exhaustive count of homomorphisms to `Z/m`, or `None` beyond `limit`
/// assignments.
pub fn count_homs_to_cyclic(p: &GroupPresentation, m: u64, limit: u64) -> Option<u128> {
    let n = p.generators.len() as u32;
    let total = m.checked_pow(n).filter(|&t| t <= limit)?;
    let matrix = p.relation_matrix();
    let mut count = 0u128;
    let mut assign = vec![0u64; p.generators.len()];
    for code in 0..total {
        let mut c = code;
        for a in assign.iter_mut() {
            *a = c % m;
            c /= m;
        }
        let ok = matrix.iter().all(|row| {
            let s: i128 = row.iter().zip(&assign).map(|(&e, &x)| e as i128 * x as i128).sum();
            s.rem_euclid(m as i128) == 0
        });
        count += ok as u128;
    }
    Some(count)
}
