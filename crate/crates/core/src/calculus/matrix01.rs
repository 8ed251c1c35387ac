use crate::cube::Subset;

/// A `rows x n` matrix with entries in {0, 1}, stored as one bitmask per
/// row (column `j` is bit `j`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ZeroOneMatrix {
    pub n: usize,
    pub rows: Vec<usize>,
}

impl ZeroOneMatrix {
    pub fn new(n: usize, rows: Vec<usize>) -> ZeroOneMatrix {
        debug_assert!(rows.iter().all(|&r| r < 1 << n));
        ZeroOneMatrix { n, rows }
    }

    pub fn from_rows(rows: &[Vec<u8>]) -> ZeroOneMatrix {
        let n = rows.first().map_or(0, |r| r.len());
        let bits = rows
            .iter()
            .map(|r| r.iter().enumerate().filter(|(_, &v)| v == 1).map(|(j, _)| 1 << j).sum())
            .collect();
        ZeroOneMatrix { n, rows: bits }
    }

    pub fn entry(&self, row: usize, col: usize) -> u8 {
        (self.rows[row] >> col & 1) as u8
    }

    /// Row `l` as a subset (`U_l`).
    pub fn row(&self, l: usize) -> Subset {
        Subset::new(self.n, self.rows[l])
    }

    /// Rows `s` and `t` as a two-row matrix (`U_{st}`).
    pub fn pair(&self, s: usize, t: usize) -> ZeroOneMatrix {
        ZeroOneMatrix::new(self.n, vec![self.rows[s], self.rows[t]])
    }

    /// Vertical stacking `U | V`.
    pub fn stack(&self, other: &ZeroOneMatrix) -> ZeroOneMatrix {
        let mut rows = self.rows.clone();
        rows.extend(&other.rows);
        ZeroOneMatrix::new(self.n, rows)
    }

    /// Entrywise sum of two rows with disjoint support, as a one-row matrix.
    pub fn row_sum(&self, s: usize, t: usize) -> ZeroOneMatrix {
        debug_assert_eq!(self.rows[s] & self.rows[t], 0);
        ZeroOneMatrix::new(self.n, vec![self.rows[s] | self.rows[t]])
    }

    /// Column sums, when they are all 0 or 1.
    pub fn support(&self) -> Option<Subset> {
        let mut acc = 0;
        for &r in &self.rows {
            if acc & r != 0 {
                return None;
            }
            acc |= r;
        }
        Some(Subset::new(self.n, acc))
    }

    /// The subset of `{0, .., rows·n - 1}` whose `l`-th block of `n`
    /// coordinates is row `l`.
    pub fn to_subset(&self) -> Subset {
        let bits = self.rows.iter().enumerate().map(|(l, &r)| r << (l * self.n)).sum();
        Subset::new(self.rows.len() * self.n, bits)
    }

    pub fn from_subset(w: Subset, rows: usize) -> ZeroOneMatrix {
        let n = w.n / rows;
        let mask = (1 << n) - 1;
        ZeroOneMatrix::new(n, (0..rows).map(|l| w.bits >> (l * n) & mask).collect())
    }
}

/// All matrices with `rows` rows whose column sums are the indicator of `u`;
/// there are `rows^{|u|}` of them.
pub fn enumerate_m(u: Subset, rows: usize) -> Vec<ZeroOneMatrix> {
    let elems: Vec<usize> = u.elements().collect();
    let total = rows.pow(elems.len() as u32);
    (0..total)
        .map(|mut code| {
            let mut r = vec![0; rows];
            for &e in &elems {
                r[code % rows] |= 1 << e;
                code /= rows;
            }
            ZeroOneMatrix::new(u.n, r)
        })
        .collect()
}

/// `sgn(V) = |{i < j : v_{2i} = v_{1j} = 1}|` for a two-row matrix.
pub fn sgn2(v: &ZeroOneMatrix) -> usize {
    assert_eq!(v.rows.len(), 2, "sgn2 takes a two-row matrix");
    let (first, second) = (v.rows[0], v.rows[1]);
    (0..v.n)
        .filter(|&i| second >> i & 1 == 1)
        .map(|i| (first >> (i + 1)).count_ones() as usize)
        .sum()
}

/// The two sides of
/// `sgn(M_23) + sgn(M_1 | M_2 + M_3) = sgn(M_12) + sgn(M_1 + M_2 | M_3)`.
pub fn sign_identity_sides(m: &ZeroOneMatrix) -> (usize, usize) {
    assert_eq!(m.rows.len(), 3, "sign identity takes a three-row matrix");
    let m1 = ZeroOneMatrix::new(m.n, vec![m.rows[0]]);
    let m3 = ZeroOneMatrix::new(m.n, vec![m.rows[2]]);
    let lhs = sgn2(&m.pair(1, 2)) + sgn2(&m1.stack(&m.row_sum(1, 2)));
    let rhs = sgn2(&m.pair(0, 1)) + sgn2(&m.row_sum(0, 1).stack(&m3));
    (lhs, rhs)
}

/// Every counterexample to the sign identity over all `T ⊆ {0..n-1}` and
/// all `M ∈ M_{3n}(T)`; also returns the number of matrices checked.
pub fn sign_identity_counterexamples(n: usize) -> (usize, Vec<ZeroOneMatrix>) {
    let mut checked = 0;
    let mut bad = Vec::new();
    for t in Subset::all(n) {
        for m in enumerate_m(t, 3) {
            checked += 1;
            let (l, r) = sign_identity_sides(&m);
            if l != r {
                bad.push(m);
            }
        }
    }
    (checked, bad)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_enumerations() {
        let u = Subset::new(2, 0b01);
        let ms = enumerate_m(u, 2);
        assert_eq!(ms.len(), 2);
        assert!(ms.contains(&ZeroOneMatrix::from_rows(&[vec![1, 0], vec![0, 0]])));
        assert!(ms.contains(&ZeroOneMatrix::from_rows(&[vec![0, 0], vec![1, 0]])));
        assert_eq!(enumerate_m(Subset::full(2), 2).len(), 4);
        assert_eq!(enumerate_m(Subset::empty(3), 3), vec![ZeroOneMatrix::new(3, vec![0, 0, 0])]);
    }

    #[test]
    fn sgn_examples() {
        assert_eq!(sgn2(&ZeroOneMatrix::from_rows(&[vec![0, 1], vec![1, 0]])), 1);
        assert_eq!(sgn2(&ZeroOneMatrix::from_rows(&[vec![1, 0], vec![0, 1]])), 0);
        assert_eq!(sgn2(&ZeroOneMatrix::new(3, vec![0b111, 0])), 0);
    }

    #[test]
    fn subset_round_trip() {
        for w in Subset::all(6) {
            let m = ZeroOneMatrix::from_subset(w, 2);
            assert_eq!(m.to_subset(), w);
        }
    }

    #[test]
    fn sign_identity_n3() {
        let (checked, bad) = sign_identity_counterexamples(3);
        assert_eq!(checked, 4usize.pow(3));
        assert!(bad.is_empty());
    }
}
