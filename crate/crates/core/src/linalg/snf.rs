use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::Result;
use crate::linalg::{Matrix, Ring, Scalar};

/// Smith normal form `u * m * v = diag(invariants)` over Z.
#[derive(Clone, Debug)]
pub struct SmithForm {
    /// `min(rows, cols)` diagonal entries, nonnegative, each dividing the next.
    pub invariants: Vec<BigInt>,
    pub u: Matrix,
    pub v: Matrix,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.invariants.iter().filter(|d| !d.is_zero()).count()
    }
}

struct Work {
    a: Vec<Vec<BigInt>>,
    u: Vec<Vec<BigInt>>,
    v: Vec<Vec<BigInt>>,
}

impl Work {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap(i, j);
        self.u.swap(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        for row in self.a.iter_mut().chain(self.v.iter_mut()) {
            row.swap(i, j);
        }
    }

    /// row_i -= q * row_j
    fn row_sub(&mut self, i: usize, j: usize, q: &BigInt) {
        for mat in [&mut self.a, &mut self.u] {
            let src = mat[j].clone();
            for (x, s) in mat[i].iter_mut().zip(&src) {
                *x -= q * s;
            }
        }
    }

    /// col_i -= q * col_j
    fn col_sub(&mut self, i: usize, j: usize, q: &BigInt) {
        for mat in [&mut self.a, &mut self.v] {
            for row in mat.iter_mut() {
                let s = row[j].clone();
                row[i] -= q * s;
            }
        }
    }

    fn negate_row(&mut self, i: usize) {
        for mat in [&mut self.a, &mut self.u] {
            for x in mat[i].iter_mut() {
                *x = -x.clone();
            }
        }
    }
}

fn identity(n: usize) -> Vec<Vec<BigInt>> {
    (0..n)
        .map(|i| (0..n).map(|j| BigInt::from(u8::from(i == j))).collect())
        .collect()
}

fn to_matrix(rows: &[Vec<BigInt>], cols: usize) -> Matrix {
    let trip = rows.iter().enumerate().flat_map(|(i, r)| {
        r.iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(move |(j, v)| (i, j, Scalar::from_integer(v.clone())))
    });
    Matrix::from_triplets(Ring::Integers, rows.len(), cols, trip)
}

impl Matrix {
    /// Smith normal form by the classical reduction, always pivoting on the
    /// entry of least nonzero absolute value in the remaining block.
    pub fn smith_normal_form(&self) -> Result<SmithForm> {
        self.ring().require_integers("smith_normal_form")?;
        let (rows, cols) = self.shape();
        let mut w = Work {
            a: self
                .to_dense()
                .into_iter()
                .map(|r| r.into_iter().map(|v| v.to_integer()).collect())
                .collect(),
            u: identity(rows),
            v: identity(cols),
        };
        let n = rows.min(cols);
        for t in 0..n {
            loop {
                // least nonzero |entry| in the trailing block
                let mut best: Option<(usize, usize)> = None;
                for i in t..rows {
                    for j in t..cols {
                        if w.a[i][j].is_zero() {
                            continue;
                        }
                        if best.is_none_or(|(bi, bj)| w.a[i][j].abs() < w.a[bi][bj].abs()) {
                            best = Some((i, j));
                        }
                    }
                }
                let Some((pi, pj)) = best else { break };
                w.swap_rows(t, pi);
                w.swap_cols(t, pj);
                let mut dirty = false;
                for i in t + 1..rows {
                    if w.a[i][t].is_zero() {
                        continue;
                    }
                    let q = w.a[i][t].div_floor(&w.a[t][t]);
                    w.row_sub(i, t, &q);
                    dirty |= !w.a[i][t].is_zero();
                }
                for j in t + 1..cols {
                    if w.a[t][j].is_zero() {
                        continue;
                    }
                    let q = w.a[t][j].div_floor(&w.a[t][t]);
                    w.col_sub(j, t, &q);
                    dirty |= !w.a[t][j].is_zero();
                }
                if dirty {
                    continue;
                }
                // divisibility of the trailing block
                let p = w.a[t][t].clone();
                let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !w.a[i][j].is_multiple_of(&p)));
                match bad {
                    Some(i) => {
                        let minus_one = BigInt::from(-1);
                        w.row_sub(t, i, &minus_one);
                    }
                    None => break,
                }
            }
            if w.a[t][t].is_negative() {
                w.negate_row(t);
            }
        }
        let invariants = (0..n).map(|i| w.a[i][i].clone()).collect();
        Ok(SmithForm {
            invariants,
            u: to_matrix(&w.u, rows),
            v: to_matrix(&w.v, cols),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn invariants(rows: &[Vec<i64>]) -> Vec<i64> {
        let m = Matrix::from_i64_rows(Ring::Integers, rows);
        let s = m.smith_normal_form().unwrap();
        let d: Vec<Scalar> = s.invariants.iter().cloned().map(Scalar::from_integer).collect();
        let diag = Matrix::diagonal(Ring::Integers, m.rows(), m.cols(), &d);
        assert_eq!(s.u.mul(&m).unwrap().mul(&s.v).unwrap(), diag);
        s.invariants.iter().map(|x| i64::try_from(x).unwrap()).collect()
    }

    #[test]
    fn snf_examples() {
        assert_eq!(invariants(&[vec![2]]), vec![2]);
        assert_eq!(invariants(&[vec![6, 0], vec![0, 4]]), vec![2, 12]);
        assert_eq!(invariants(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]), vec![1, 1, 1]);
        assert_eq!(invariants(&[vec![0, 0], vec![0, 0]]), vec![0, 0]);
        assert_eq!(invariants(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]), vec![2, 6, 12]);
    }

    #[test]
    fn snf_rejects_fields() {
        assert!(Matrix::identity(Ring::Rationals, 2).smith_normal_form().is_err());
    }
}
