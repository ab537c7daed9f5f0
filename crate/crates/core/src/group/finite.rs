use std::collections::VecDeque;

use super::GroupError;

/// A finite group given by its Cayley table. Element 0 is the identity.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<u32>,
    inv: Vec<u32>,
}

impl FiniteGroup {
    pub fn trivial() -> Self {
        FiniteGroup { order: 1, table: vec![0], inv: vec![0] }
    }

    pub fn cyclic(n: usize) -> Self {
        assert!(n >= 1, "cyclic group of order 0");
        let mut table = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                table.push(((a + b) % n) as u32);
            }
        }
        let inv = (0..n).map(|a| ((n - a) % n) as u32).collect();
        FiniteGroup { order: n, table, inv }
    }

    /// Builds a group from explicit rows, checking closure, identity at 0,
    /// inverses and associativity.
    pub fn from_rows(rows: &[Vec<u32>]) -> Result<Self, GroupError> {
        let n = rows.len();
        if n == 0 {
            return Err(GroupError::Table("empty table".into()));
        }
        let mut table = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(GroupError::Table(format!("row {i} has {} entries, expected {n}", row.len())));
            }
            for &x in row {
                if x as usize >= n {
                    return Err(GroupError::Table(format!("entry {x} out of range in row {i}")));
                }
                table.push(x);
            }
        }
        for a in 0..n {
            if table[a] != a as u32 || table[a * n] != a as u32 {
                return Err(GroupError::Table("element 0 is not the identity".into()));
            }
        }
        let mut inv = vec![u32::MAX; n];
        for a in 0..n {
            for b in 0..n {
                if table[a * n + b] == 0 {
                    if inv[a] != u32::MAX {
                        return Err(GroupError::Table(format!("element {a} has two inverses")));
                    }
                    inv[a] = b as u32;
                }
            }
            if inv[a] == u32::MAX {
                return Err(GroupError::Table(format!("element {a} has no inverse")));
            }
        }
        let g = FiniteGroup { order: n, table, inv };
        for a in 0..n as u32 {
            for b in 0..n as u32 {
                let ab = g.mul(a, b);
                for c in 0..n as u32 {
                    if g.mul(ab, c) != g.mul(a, g.mul(b, c)) {
                        return Err(GroupError::Table(format!("not associative at ({a}, {b}, {c})")));
                    }
                }
            }
        }
        Ok(g)
    }

    /// Table of a finite subgroup of some ambient group, given as a list of
    /// elements with the identity first and a lookup for products.
    pub fn from_closed_set<F>(n: usize, mut product: F) -> Self
    where
        F: FnMut(usize, usize) -> usize,
    {
        let mut table = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                table.push(product(a, b) as u32);
            }
        }
        let mut inv = vec![0; n];
        for a in 0..n {
            inv[a] = (0..n).find(|&b| table[a * n + b] == 0).expect("closed set without inverse") as u32;
        }
        FiniteGroup { order: n, table, inv }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.table[a as usize * self.order + b as usize]
    }

    #[inline]
    pub fn inv(&self, a: u32) -> u32 {
        self.inv[a as usize]
    }

    pub fn pow(&self, a: u32, k: i64) -> u32 {
        let base = if k < 0 { self.inv(a) } else { a };
        let mut acc = 0;
        for _ in 0..k.unsigned_abs() {
            acc = self.mul(acc, base);
        }
        acc
    }

    pub fn element_order(&self, a: u32) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.order as u32
    }

    /// Subgroup generated by `gens`, sorted.
    pub fn closure(&self, gens: &[u32]) -> Vec<u32> {
        let mut seen = vec![false; self.order];
        seen[0] = true;
        let mut queue = VecDeque::from([0u32]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    queue.push_back(y);
                }
            }
        }
        (0..self.order as u32).filter(|&x| seen[x as usize]).collect()
    }

    /// Shortest words over `gens` and their inverses, indexed by element.
    /// Letters are `(generator index, inverted)`.
    pub fn shortest_words(&self, gens: &[u32]) -> Vec<Option<Vec<(usize, bool)>>> {
        let mut words: Vec<Option<Vec<(usize, bool)>>> = vec![None; self.order];
        words[0] = Some(Vec::new());
        let mut queue = VecDeque::from([0u32]);
        while let Some(x) = queue.pop_front() {
            for (i, &g) in gens.iter().enumerate() {
                for inverted in [false, true] {
                    let letter = if inverted { self.inv(g) } else { g };
                    let y = self.mul(x, letter);
                    if words[y as usize].is_none() {
                        let mut w = words[x as usize].clone().unwrap();
                        w.push((i, inverted));
                        words[y as usize] = Some(w);
                        queue.push_back(y);
                    }
                }
            }
        }
        words
    }

    /// Extends generator images to a full map, checking that it is a
    /// well-defined homomorphism into `target`.
    pub fn extend_hom(&self, gens: &[u32], images: &[u32], target: &FiniteGroup) -> Result<Vec<u32>, GroupError> {
        assert_eq!(gens.len(), images.len());
        if self.closure(gens).len() != self.order {
            return Err(GroupError::Hom("generator list does not generate the source group".into()));
        }
        let mut map = vec![u32::MAX; self.order];
        map[0] = 0;
        let mut queue = VecDeque::from([0u32]);
        while let Some(x) = queue.pop_front() {
            for (&g, &img) in gens.iter().zip(images) {
                if img as usize >= target.order {
                    return Err(GroupError::Hom(format!("image {img} out of range")));
                }
                let y = self.mul(x, g);
                let fy = target.mul(map[x as usize], img);
                if map[y as usize] == u32::MAX {
                    map[y as usize] = fy;
                    queue.push_back(y);
                } else if map[y as usize] != fy {
                    return Err(GroupError::Hom("generator images do not define a homomorphism".into()));
                }
            }
        }
        self.check_hom(&map, target)?;
        Ok(map)
    }

    pub fn check_hom(&self, map: &[u32], target: &FiniteGroup) -> Result<(), GroupError> {
        if map.len() != self.order {
            return Err(GroupError::Hom("map has wrong length".into()));
        }
        for a in 0..self.order as u32 {
            for b in 0..self.order as u32 {
                let lhs = map[self.mul(a, b) as usize];
                let rhs = target.mul(map[a as usize], map[b as usize]);
                if lhs != rhs {
                    return Err(GroupError::Hom(format!("not multiplicative at ({a}, {b})")));
                }
            }
        }
        Ok(())
    }

    pub fn is_injective(map: &[u32]) -> bool {
        let mut seen = std::collections::HashSet::new();
        map.iter().all(|x| seen.insert(*x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_table_is_a_group() {
        let g = FiniteGroup::cyclic(5);
        let rows: Vec<Vec<u32>> = (0..5).map(|a| (0..5).map(|b| g.mul(a, b)).collect()).collect();
        assert_eq!(FiniteGroup::from_rows(&rows).unwrap(), g);
        assert_eq!(g.pow(2, 3), 1);
        assert_eq!(g.pow(2, -1), 3);
        assert_eq!(g.element_order(1), 5);
    }

    #[test]
    fn rejects_non_associative() {
        // a loop that is not a group
        let rows = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        assert!(FiniteGroup::from_rows(&rows).is_err());
    }

    #[test]
    fn extend_hom_checks_relations() {
        let z6 = FiniteGroup::cyclic(6);
        let z3 = FiniteGroup::cyclic(3);
        let map = z6.extend_hom(&[1], &[1], &z3).unwrap();
        assert_eq!(map, vec![0, 1, 2, 0, 1, 2]);
        let z4 = FiniteGroup::cyclic(4);
        assert!(z3.extend_hom(&[1], &[1], &z4).is_err());
        assert!(!FiniteGroup::is_injective(&map));
    }

    #[test]
    fn shortest_words_cover_group() {
        let z5 = FiniteGroup::cyclic(5);
        let words = z5.shortest_words(&[1]);
        assert_eq!(words[4].as_ref().unwrap(), &vec![(0, true)]);
        assert_eq!(words[2].as_ref().unwrap().len(), 2);
    }
}
