use std::collections::BTreeSet;

type Word = Vec<(usize, bool)>;

fn invert(w: &[(usize, bool)]) -> Word {
    w.iter().rev().map(|&(l, i)| (l, !i)).collect()
}

/// All cyclic conjugates of the relators and their inverses.
pub fn symmetrize(relators: &[Word]) -> BTreeSet<Word> {
    let mut out = BTreeSet::new();
    for r in relators {
        for w in [r.clone(), invert(r)] {
            for k in 0..w.len() {
                let mut c = w[k..].to_vec();
                c.extend_from_slice(&w[..k]);
                out.insert(c);
            }
        }
    }
    out
}

/// Length of the longest piece of a set of cyclically reduced words: a
/// common prefix of two distinct elements of the symmetrized set.
pub fn max_piece_length(relators: &[Word]) -> usize {
    let sym: Vec<Word> = symmetrize(relators).into_iter().collect();
    // with the set sorted, the longest common prefix is between neighbours
    sym.windows(2)
        .map(|p| p[0].iter().zip(&p[1]).take_while(|(x, y)| x == y).count())
        .max()
        .unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupBackend;

    fn pieces(words: &[&str]) -> usize {
        let f = GroupBackend::free_rank(2).unwrap();
        let rels: Vec<Word> = words.iter().map(|w| f.parse_word(w).unwrap()).collect();
        max_piece_length(&rels)
    }

    #[test]
    fn classical_examples() {
        assert_eq!(pieces(&["a^7"]), 0);
        assert_eq!(pieces(&["a b a^-1 b^-1"]), 1);
        assert_eq!(pieces(&["a^2 b^3"]), 2);
        // rotations b a b b a and b a b a b share b a b
        assert_eq!(pieces(&["a b a b^2"]), 3);
    }

    #[test]
    fn neighbour_scan_matches_all_pairs() {
        let f = GroupBackend::free_rank(2).unwrap();
        for w in ["a b a^2 b^-1", "a^3 b a b^-2", "a b^-1 a^-1 b a^2"] {
            let r = vec![f.parse_word(w).unwrap()];
            let sym: Vec<Word> = symmetrize(&r).into_iter().collect();
            let mut best = 0;
            for (i, x) in sym.iter().enumerate() {
                for y in &sym[i + 1..] {
                    best = best.max(x.iter().zip(y).take_while(|(a, b)| a == b).count());
                }
            }
            assert_eq!(max_piece_length(&r), best, "{w}");
        }
    }
}
