use super::GroupAction;

/// The symmetric group on `n` letters acting on the barycentric subdivision
/// of the `(n-1)`-simplex. Cells are flags of non-empty vertex sets; the
/// subflags of `{0} ⊂ {0,1} ⊂ ...` represent the orbits.
#[derive(Clone, Debug)]
pub struct SymmetricFlags {
    n: usize,
    elements: Vec<Vec<u8>>,
}

pub type Flag = Vec<Vec<u8>>;

impl SymmetricFlags {
    pub fn new(n: usize) -> Self {
        assert!((1..=6).contains(&n), "flag complexes of S_{n} are not supported");
        let mut elements = vec![Vec::new()];
        for k in 0..n as u8 {
            elements = elements
                .into_iter()
                .flat_map(|p: Vec<u8>| {
                    (0..=p.len()).map(move |i| {
                        let mut q = p.clone();
                        q.insert(i, k);
                        q
                    })
                })
                .collect();
        }
        elements.sort();
        SymmetricFlags { n, elements }
    }

    fn chamber(&self) -> Flag {
        (1..=self.n as u8).map(|k| (0..k).collect()).collect()
    }

    fn apply(&self, p: &[u8], s: &[u8]) -> Vec<u8> {
        let mut out: Vec<u8> = s.iter().map(|&x| p[x as usize]).collect();
        out.sort_unstable();
        out
    }
}

impl GroupAction for SymmetricFlags {
    type Elem = Vec<u8>;
    type Cell = Flag;

    fn identity(&self) -> Vec<u8> {
        (0..self.n as u8).collect()
    }

    fn mul(&self, a: &Vec<u8>, b: &Vec<u8>) -> Vec<u8> {
        b.iter().map(|&x| a[x as usize]).collect()
    }

    fn inv(&self, a: &Vec<u8>) -> Vec<u8> {
        let mut out = vec![0; a.len()];
        for (i, &x) in a.iter().enumerate() {
            out[x as usize] = i as u8;
        }
        out
    }

    fn act(&self, g: &Vec<u8>, c: &Flag) -> Flag {
        c.iter().map(|s| self.apply(g, s)).collect()
    }

    fn representatives(&self) -> Vec<Flag> {
        let chamber = self.chamber();
        (1u32..1 << self.n)
            .map(|mask| (0..self.n).filter(|k| mask >> k & 1 == 1).map(|k| chamber[k].clone()).collect())
            .collect()
    }

    fn faces(&self, c: &Flag) -> Vec<Flag> {
        (1u32..(1 << c.len()) - 1)
            .map(|mask| (0..c.len()).filter(|k| mask >> k & 1 == 1).map(|k| c[k].clone()).collect())
            .collect()
    }

    fn normalize(&self, c: &Flag) -> (Flag, Vec<u8>) {
        // the representative with the same set sizes
        let chamber = self.chamber();
        let rep: Flag = c.iter().map(|s| chamber[s.len() - 1].clone()).collect();
        let g = self.elements.iter().find(|g| self.act(g, c) == rep).expect("flags of one type form one orbit");
        (rep, g.clone())
    }

    fn stabilizer(&self, rep: &Flag) -> Vec<Vec<u8>> {
        let id = self.identity();
        let mut out = vec![id.clone()];
        out.extend(self.elements.iter().filter(|g| **g != id && self.act(g, rep) == *rep).cloned());
        out
    }
}
