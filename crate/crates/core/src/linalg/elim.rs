use std::collections::BTreeMap;

use crate::error::Result;
use crate::linalg::{Matrix, Ring, Scalar};

type SparseRow = Vec<(usize, Scalar)>;

/// `row - c * pivot`, merged sparse.
fn axpy(ring: Ring, row: &[(usize, Scalar)], c: &Scalar, pivot: &[(usize, Scalar)]) -> SparseRow {
    let mut out = Vec::with_capacity(row.len() + pivot.len());
    let (mut p, mut q) = (0, 0);
    while p < row.len() || q < pivot.len() {
        let ja = row.get(p).map_or(usize::MAX, |e| e.0);
        let jb = pivot.get(q).map_or(usize::MAX, |e| e.0);
        if ja < jb {
            out.push(row[p].clone());
            p += 1;
        } else if jb < ja {
            let v = ring.neg(&ring.mul(c, &pivot[q].1));
            if !v.is_zero() {
                out.push((jb, v));
            }
            q += 1;
        } else {
            let v = ring.sub(&row[p].1, &ring.mul(c, &pivot[q].1));
            if !v.is_zero() {
                out.push((ja, v));
            }
            p += 1;
            q += 1;
        }
    }
    out
}

/// Row echelon form over a field, held as pivot column -> monic pivot row.
///
/// `limit` restricts pivots to columns below it (used for augmented systems);
/// a row whose leading entry is at or past `limit` is reported back.
struct Echelon {
    ring: Ring,
    pivots: BTreeMap<usize, SparseRow>,
}

impl Echelon {
    fn new(ring: Ring) -> Echelon {
        Echelon {
            ring,
            pivots: BTreeMap::new(),
        }
    }

    fn reduce(&self, mut row: SparseRow) -> SparseRow {
        let mut start = 0;
        loop {
            let Some(pos) = row.iter().position(|e| e.0 >= start && self.pivots.contains_key(&e.0)) else {
                return row;
            };
            let (col, c) = row[pos].clone();
            row = axpy(self.ring, &row, &c, &self.pivots[&col]);
            start = col + 1;
        }
    }

    /// Inserts a row; returns the leading column if it became a pivot.
    fn insert(&mut self, row: SparseRow, limit: usize) -> std::result::Result<Option<usize>, SparseRow> {
        let row = self.reduce(row);
        let Some((lead, lv)) = row.first().cloned() else {
            return Ok(None);
        };
        if lead >= limit {
            return Err(row);
        }
        let inv = self.ring.inv(&lv).expect("nonzero pivot over a field");
        let row: SparseRow = row.iter().map(|(j, v)| (*j, self.ring.mul(v, &inv))).collect();
        self.pivots.insert(lead, row);
        Ok(Some(lead))
    }

    /// Clears every pivot column from the other pivot rows.
    fn into_reduced(self) -> BTreeMap<usize, SparseRow> {
        let ring = self.ring;
        let mut pivots = self.pivots;
        let cols: Vec<usize> = pivots.keys().copied().collect();
        for &pc in cols.iter().rev() {
            let prow = pivots[&pc].clone();
            for &other in cols.iter().filter(|&&c| c < pc) {
                let r = &pivots[&other];
                if let Ok(pos) = r.binary_search_by_key(&pc, |e| e.0) {
                    let c = r[pos].1.clone();
                    let new = axpy(ring, r, &c, &prow);
                    pivots.insert(other, new);
                }
            }
        }
        pivots
    }
}

fn echelon_of(m: &Matrix) -> Echelon {
    let mut e = Echelon::new(m.ring());
    let mut order: Vec<usize> = (0..m.rows()).collect();
    order.sort_by_key(|&i| (m.row(i).len(), i));
    for i in order {
        let _ = e.insert(m.row(i).to_vec(), usize::MAX);
    }
    e
}

impl Matrix {
    /// Rank over a field by exact elimination.
    pub fn rank(&self) -> Result<usize> {
        self.ring().require_field("rank")?;
        Ok(echelon_of(self).pivots.len())
    }

    /// Basis of the right null space as the columns of the result.
    pub fn kernel_basis(&self) -> Result<Matrix> {
        let ring = self.ring();
        ring.require_field("kernel_basis")?;
        let pivots = echelon_of(self).into_reduced();
        let free: Vec<usize> = (0..self.cols()).filter(|j| !pivots.contains_key(j)).collect();
        let mut trip = Vec::new();
        for (k, &f) in free.iter().enumerate() {
            trip.push((f, k, Scalar::one()));
            for (&pc, row) in &pivots {
                if let Ok(pos) = row.binary_search_by_key(&f, |e| e.0) {
                    trip.push((pc, k, ring.neg(&row[pos].1)));
                }
            }
        }
        Ok(Matrix::from_triplets(ring, self.cols(), free.len(), trip))
    }

    /// Some `x` with `self * x = b`, or `None` when the system is inconsistent.
    pub fn solve(&self, b: &Matrix) -> Result<Option<Matrix>> {
        let ring = self.ring();
        ring.require_field("solve")?;
        ring.check_same(b.ring())?;
        let aug = Matrix::hstack(&[self, b])?;
        let n = self.cols();
        let mut e = Echelon::new(ring);
        for i in 0..aug.rows() {
            if e.insert(aug.row(i).to_vec(), n).is_err() {
                return Ok(None);
            }
        }
        let pivots = e.into_reduced();
        let mut trip = Vec::new();
        for (&pc, row) in &pivots {
            for (j, v) in row.iter().filter(|e| e.0 >= n) {
                trip.push((pc, j - n, v.clone()));
            }
        }
        Ok(Some(Matrix::from_triplets(ring, n, b.cols(), trip)))
    }

    /// Inverse of a square matrix; over Z only when it is unimodular.
    pub fn inverse(&self) -> Result<Option<Matrix>> {
        let n = self.rows();
        if n != self.cols() {
            return Ok(None);
        }
        let work = if self.ring() == Ring::Integers { self.over(Ring::Rationals) } else { self.clone() };
        let inv = work.solve(&Matrix::identity(work.ring(), n))?;
        let Some(inv) = inv else { return Ok(None) };
        if work.mul(&inv)? != Matrix::identity(work.ring(), n) {
            return Ok(None);
        }
        if self.ring() == Ring::Integers {
            if inv.entries().any(|(_, _, v)| !v.is_integer()) {
                return Ok(None);
            }
            return Ok(Some(inv.over(Ring::Integers)));
        }
        Ok(Some(inv))
    }

    /// Determinant by elimination over the fraction field.
    pub fn determinant(&self) -> Scalar {
        assert_eq!(self.rows(), self.cols(), "determinant of a non-square matrix");
        let ring = if self.ring() == Ring::Integers { Ring::Rationals } else { self.ring() };
        let mut a = self.over(ring).to_dense();
        let n = a.len();
        let mut det = Scalar::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else {
                return Scalar::zero();
            };
            if p != c {
                a.swap(p, c);
                det = ring.neg(&det);
            }
            det = ring.mul(&det, &a[c][c]);
            let inv = ring.inv(&a[c][c]).unwrap();
            for r in c + 1..n {
                if a[r][c].is_zero() {
                    continue;
                }
                let f = ring.mul(&a[r][c], &inv);
                for k in c..n {
                    let t = ring.mul(&f, &a[c][k]);
                    a[r][k] = ring.sub(&a[r][k], &t);
                }
            }
        }
        det
    }

    /// Reinterprets the entries in another ring (Z -> Q, Z -> F_p, or back when integral).
    pub fn over(&self, ring: Ring) -> Matrix {
        let trip = self.entries().map(|(i, j, v)| (i, j, ring.reduce(v.0.clone())));
        Matrix::from_triplets(ring, self.rows(), self.cols(), trip)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_examples() {
        let q = Ring::Rationals;
        assert_eq!(Matrix::zeros(q, 3, 3).rank().unwrap(), 0);
        assert_eq!(Matrix::identity(q, 4).rank().unwrap(), 4);
        assert_eq!(Matrix::from_i64_rows(q, &[vec![1, 2], vec![2, 4]]).rank().unwrap(), 1);
        assert!(Matrix::identity(Ring::Integers, 2).rank().is_err());
    }

    #[test]
    fn kernel_examples() {
        let q = Ring::Rationals;
        assert_eq!(Matrix::identity(q, 2).kernel_basis().unwrap().cols(), 0);
        let k = Matrix::zeros(q, 2, 3).kernel_basis().unwrap();
        assert_eq!((k.cols(), k.rank().unwrap()), (3, 3));
        let f2 = Ring::PrimeField(2);
        let k = Matrix::from_i64_rows(f2, &[vec![1, 1]]).kernel_basis().unwrap();
        assert_eq!(k, Matrix::from_i64_rows(f2, &[vec![1], vec![1]]));
        assert!(Matrix::identity(Ring::Integers, 2).kernel_basis().is_err());
    }

    #[test]
    fn solve_consistent_and_not() {
        let q = Ring::Rationals;
        let a = Matrix::from_i64_rows(q, &[vec![1, 1], vec![2, 2]]);
        let b = Matrix::from_i64_rows(q, &[vec![3], vec![6]]);
        let x = a.solve(&b).unwrap().unwrap();
        assert_eq!(a.mul(&x).unwrap(), b);
        let bad = Matrix::from_i64_rows(q, &[vec![3], vec![7]]);
        assert!(a.solve(&bad).unwrap().is_none());
    }

    #[test]
    fn determinant_and_inverse() {
        let z = Ring::Integers;
        let m = Matrix::from_i64_rows(z, &[vec![2, 1], vec![1, 1]]);
        assert_eq!(m.determinant(), z.from_i64(1));
        let inv = m.inverse().unwrap().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), Matrix::identity(z, 2));
        let s = Matrix::from_i64_rows(z, &[vec![2, 0], vec![0, 1]]);
        assert!(s.inverse().unwrap().is_none());
    }
}
