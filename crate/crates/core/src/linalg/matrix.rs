use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{Ring, Scalar};

/// Exact matrix over a [`Ring`].
///
/// Storage is row-major and sparse: every row keeps its nonzero entries as
/// `(column, value)` pairs sorted by column. All values are canonical for the
/// ring, so structural equality is exact equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    ring: Ring,
    rows: usize,
    cols: usize,
    data: Vec<Vec<(usize, Scalar)>>,
}

impl Matrix {
    pub fn zeros(ring: Ring, rows: usize, cols: usize) -> Matrix {
        Matrix {
            ring,
            rows,
            cols,
            data: vec![Vec::new(); rows],
        }
    }

    pub fn identity(ring: Ring, n: usize) -> Matrix {
        Matrix {
            ring,
            rows: n,
            cols: n,
            data: (0..n).map(|i| vec![(i, Scalar::one())]).collect(),
        }
    }

    /// Diagonal matrix of the given shape with `diag` on the leading diagonal.
    pub fn diagonal(ring: Ring, rows: usize, cols: usize, diag: &[Scalar]) -> Matrix {
        let mut m = Matrix::zeros(ring, rows, cols);
        for (i, v) in diag.iter().enumerate().take(rows.min(cols)) {
            let v = ring.reduce(v.0.clone());
            if !v.is_zero() {
                m.data[i].push((i, v));
            }
        }
        m
    }

    /// Builds from a dense row-major entry list.
    pub fn from_dense(ring: Ring, rows: usize, cols: usize, entries: Vec<Scalar>) -> Result<Matrix> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                op: "from_dense",
                left: (rows, cols),
                right: (entries.len(), 1),
            });
        }
        let mut data = vec![Vec::new(); rows];
        for (idx, v) in entries.into_iter().enumerate() {
            if ring == Ring::Integers && !v.is_integer() {
                return Err(Error::Parse(format!("non-integer entry {v} over Z")));
            }
            let v = ring.reduce(v.0);
            if !v.is_zero() {
                data[idx / cols].push((idx % cols, v));
            }
        }
        Ok(Matrix { ring, rows, cols, data })
    }

    pub fn from_i64_rows(ring: Ring, rows: &[Vec<i64>]) -> Matrix {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = Matrix::zeros(ring, rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged rows");
            for (j, &v) in row.iter().enumerate() {
                let v = ring.from_i64(v);
                if !v.is_zero() {
                    m.data[i].push((j, v));
                }
            }
        }
        m
    }

    /// Sums duplicate positions; drops zeros.
    pub fn from_triplets<I>(ring: Ring, rows: usize, cols: usize, triplets: I) -> Matrix
    where
        I: IntoIterator<Item = (usize, usize, Scalar)>,
    {
        let mut data: Vec<Vec<(usize, Scalar)>> = vec![Vec::new(); rows];
        for (i, j, v) in triplets {
            assert!(i < rows && j < cols, "triplet ({i},{j}) outside {rows}x{cols}");
            data[i].push((j, v));
        }
        for row in &mut data {
            row.sort_by_key(|e| e.0);
            let mut merged: Vec<(usize, Scalar)> = Vec::with_capacity(row.len());
            for (j, v) in row.drain(..) {
                match merged.last_mut() {
                    Some((lj, lv)) if *lj == j => *lv = ring.add(lv, &v),
                    _ => merged.push((j, ring.reduce(v.0))),
                }
            }
            merged.retain(|(_, v)| !v.is_zero());
            *row = merged;
        }
        Matrix { ring, rows, cols, data }
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn row(&self, i: usize) -> &[(usize, Scalar)] {
        &self.data[i]
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Vec::is_empty)
    }

    pub fn get(&self, i: usize, j: usize) -> Scalar {
        match self.data[i].binary_search_by_key(&j, |e| e.0) {
            Ok(pos) => self.data[i][pos].1.clone(),
            Err(_) => Scalar::zero(),
        }
    }

    /// Iterates `(row, col, value)` over nonzero entries in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Scalar)> + '_ {
        self.data
            .iter()
            .enumerate()
            .flat_map(|(i, row)| row.iter().map(move |(j, v)| (i, *j, v)))
    }

    pub fn to_dense(&self) -> Vec<Vec<Scalar>> {
        let mut out = vec![vec![Scalar::zero(); self.cols]; self.rows];
        for (i, j, v) in self.entries() {
            out[i][j] = v.clone();
        }
        out
    }

    pub fn transpose(&self) -> Matrix {
        let mut data: Vec<Vec<(usize, Scalar)>> = vec![Vec::new(); self.cols];
        for (i, j, v) in self.entries() {
            data[j].push((i, v.clone()));
        }
        Matrix {
            ring: self.ring,
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        self.ring.check_same(other.ring)?;
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                op: "mat_mul",
                left: self.shape(),
                right: other.shape(),
            });
        }
        let ring = self.ring;
        let mut acc: Vec<Scalar> = vec![Scalar::zero(); other.cols];
        let mut touched: Vec<usize> = Vec::new();
        let mut mark = vec![false; other.cols];
        let mut data = Vec::with_capacity(self.rows);
        for row in &self.data {
            for (k, a) in row {
                for (j, b) in &other.data[*k] {
                    if !mark[*j] {
                        mark[*j] = true;
                        touched.push(*j);
                    }
                    let prod = &a.0 * &b.0;
                    acc[*j].0 += prod;
                }
            }
            touched.sort_unstable();
            let mut out = Vec::with_capacity(touched.len());
            for &j in &touched {
                mark[j] = false;
                let v = std::mem::replace(&mut acc[j], Scalar::zero());
                let v = ring.reduce(v.0);
                if !v.is_zero() {
                    out.push((j, v));
                }
            }
            touched.clear();
            data.push(out);
        }
        Ok(Matrix {
            ring,
            rows: self.rows,
            cols: other.cols,
            data,
        })
    }

    fn combine(&self, other: &Matrix, op: &'static str, sign: bool) -> Result<Matrix> {
        self.ring.check_same(other.ring)?;
        if self.shape() != other.shape() {
            return Err(Error::DimensionMismatch {
                op,
                left: self.shape(),
                right: other.shape(),
            });
        }
        let ring = self.ring;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| merge_rows(ring, a, b, sign))
            .collect();
        Ok(Matrix {
            ring,
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        self.combine(other, "add", false)
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        self.combine(other, "sub", true)
    }

    pub fn neg(&self) -> Matrix {
        self.scale(&self.ring.from_i64(-1))
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        let ring = self.ring;
        if c.is_zero() {
            return Matrix::zeros(ring, self.rows, self.cols);
        }
        let data = self
            .data
            .iter()
            .map(|row| {
                row.iter()
                    .map(|(j, v)| (*j, ring.mul(v, c)))
                    .filter(|(_, v)| !v.is_zero())
                    .collect()
            })
            .collect();
        Matrix {
            ring,
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn scale_i64(&self, c: i64) -> Matrix {
        match c {
            1 => self.clone(),
            _ => self.scale(&self.ring.from_i64(c)),
        }
    }

    pub fn submatrix(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Matrix {
        assert!(rows.end <= self.rows && cols.end <= self.cols);
        let data = self.data[rows.clone()]
            .iter()
            .map(|row| {
                row.iter()
                    .filter(|(j, _)| cols.contains(j))
                    .map(|(j, v)| (j - cols.start, v.clone()))
                    .collect()
            })
            .collect();
        Matrix {
            ring: self.ring,
            rows: rows.len(),
            cols: cols.len(),
            data,
        }
    }

    pub fn select_columns(&self, cols: &[usize]) -> Matrix {
        let mut pos = vec![usize::MAX; self.cols];
        for (new, &old) in cols.iter().enumerate() {
            pos[old] = new;
        }
        let data = self
            .data
            .iter()
            .map(|row| {
                let mut r: Vec<(usize, Scalar)> = row
                    .iter()
                    .filter(|(j, _)| pos[*j] != usize::MAX)
                    .map(|(j, v)| (pos[*j], v.clone()))
                    .collect();
                r.sort_by_key(|e| e.0);
                r
            })
            .collect();
        Matrix {
            ring: self.ring,
            rows: self.rows,
            cols: cols.len(),
            data,
        }
    }

    pub fn select_rows(&self, rows: &[usize]) -> Matrix {
        Matrix {
            ring: self.ring,
            rows: rows.len(),
            cols: self.cols,
            data: rows.iter().map(|&i| self.data[i].clone()).collect(),
        }
    }

    pub fn hstack(parts: &[&Matrix]) -> Result<Matrix> {
        let first = parts.first().expect("hstack of nothing");
        let ring = first.ring;
        let rows = first.rows;
        let mut data = vec![Vec::new(); rows];
        let mut off = 0;
        for p in parts {
            ring.check_same(p.ring)?;
            if p.rows != rows {
                return Err(Error::DimensionMismatch {
                    op: "hstack",
                    left: first.shape(),
                    right: p.shape(),
                });
            }
            for (i, row) in p.data.iter().enumerate() {
                data[i].extend(row.iter().map(|(j, v)| (j + off, v.clone())));
            }
            off += p.cols;
        }
        Ok(Matrix { ring, rows, cols: off, data })
    }

    pub fn vstack(parts: &[&Matrix]) -> Result<Matrix> {
        let first = parts.first().expect("vstack of nothing");
        let ring = first.ring;
        let cols = first.cols;
        let mut data = Vec::new();
        for p in parts {
            ring.check_same(p.ring)?;
            if p.cols != cols {
                return Err(Error::DimensionMismatch {
                    op: "vstack",
                    left: first.shape(),
                    right: p.shape(),
                });
            }
            data.extend(p.data.iter().cloned());
        }
        Ok(Matrix {
            ring,
            rows: data.len(),
            cols,
            data,
        })
    }

    /// Kronecker product; row index `i * b.rows + k`, column `j * b.cols + l`.
    pub fn kronecker(&self, b: &Matrix) -> Result<Matrix> {
        self.ring.check_same(b.ring)?;
        let ring = self.ring;
        let mut data = Vec::with_capacity(self.rows * b.rows);
        for arow in &self.data {
            for brow in &b.data {
                let mut out = Vec::with_capacity(arow.len() * brow.len());
                for (j, av) in arow {
                    for (l, bv) in brow {
                        let v = ring.mul(av, bv);
                        if !v.is_zero() {
                            out.push((j * b.cols + l, v));
                        }
                    }
                }
                data.push(out);
            }
        }
        Ok(Matrix {
            ring,
            rows: self.rows * b.rows,
            cols: self.cols * b.cols,
            data,
        })
    }

    /// True when every row and column holds exactly one entry, equal to +-1.
    pub fn is_signed_permutation(&self) -> bool {
        if self.rows != self.cols {
            return false;
        }
        let mut seen = vec![false; self.cols];
        let minus = self.ring.from_i64(-1);
        for row in &self.data {
            if row.len() != 1 {
                return false;
            }
            let (j, v) = &row[0];
            if seen[*j] || !(v.is_one() || *v == minus) {
                return false;
            }
            seen[*j] = true;
        }
        true
    }

    /// First position where the two matrices differ, if any.
    pub fn first_difference(&self, other: &Matrix) -> Option<(usize, usize)> {
        if self.shape() != other.shape() {
            return Some((usize::MAX, usize::MAX));
        }
        for i in 0..self.rows {
            if self.data[i] != other.data[i] {
                let a = &self.data[i];
                let b = &other.data[i];
                let cols = a.iter().chain(b).map(|e| e.0);
                let j = cols
                    .filter(|&j| self.get(i, j) != other.get(i, j))
                    .min()
                    .unwrap_or(0);
                return Some((i, j));
            }
        }
        None
    }
}

fn merge_rows(ring: Ring, a: &[(usize, Scalar)], b: &[(usize, Scalar)], negate_b: bool) -> Vec<(usize, Scalar)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut p, mut q) = (0, 0);
    while p < a.len() || q < b.len() {
        let ja = a.get(p).map_or(usize::MAX, |e| e.0);
        let jb = b.get(q).map_or(usize::MAX, |e| e.0);
        if ja < jb {
            out.push(a[p].clone());
            p += 1;
        } else if jb < ja {
            let v = if negate_b { ring.neg(&b[q].1) } else { b[q].1.clone() };
            out.push((jb, v));
            q += 1;
        } else {
            let v = if negate_b {
                ring.sub(&a[p].1, &b[q].1)
            } else {
                ring.add(&a[p].1, &b[q].1)
            };
            if !v.is_zero() {
                out.push((ja, v));
            }
            p += 1;
            q += 1;
        }
    }
    out
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix<{}> {}x{} [", self.ring, self.rows, self.cols)?;
        if self.rows * self.cols <= 400 {
            for row in self.to_dense() {
                let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
                writeln!(f, "  [{}]", cells.join(", "))?;
            }
        } else {
            writeln!(f, "  ({} nonzeros)", self.nnz())?;
        }
        write!(f, "]")
    }
}

/// Incremental assembly of a matrix out of blocks.
///
/// Row and column blocks are described by their sizes; `place` copies a block
/// scaled by a coefficient into position `(bi, bj)`.
pub struct BlockBuilder {
    ring: Ring,
    row_off: Vec<usize>,
    col_off: Vec<usize>,
    triplets: Vec<(usize, usize, Scalar)>,
}

impl BlockBuilder {
    pub fn new(ring: Ring, row_sizes: &[usize], col_sizes: &[usize]) -> BlockBuilder {
        BlockBuilder {
            ring,
            row_off: offsets(row_sizes),
            col_off: offsets(col_sizes),
            triplets: Vec::new(),
        }
    }

    pub fn from_offsets(ring: Ring, row_off: Vec<usize>, col_off: Vec<usize>) -> BlockBuilder {
        BlockBuilder {
            ring,
            row_off,
            col_off,
            triplets: Vec::new(),
        }
    }

    pub fn place(&mut self, bi: usize, bj: usize, block: &Matrix, coeff: i64) {
        let (r0, c0) = (self.row_off[bi], self.col_off[bj]);
        assert_eq!(block.rows, self.row_off[bi + 1] - r0, "block row size");
        assert_eq!(block.cols, self.col_off[bj + 1] - c0, "block col size");
        let c = self.ring.from_i64(coeff);
        for (i, j, v) in block.entries() {
            let v = if coeff == 1 { v.clone() } else { self.ring.mul(v, &c) };
            self.triplets.push((r0 + i, c0 + j, v));
        }
    }

    /// Places `coeff * I` into a square block.
    pub fn place_identity(&mut self, bi: usize, bj: usize, coeff: i64) {
        let (r0, c0) = (self.row_off[bi], self.col_off[bj]);
        let n = self.row_off[bi + 1] - r0;
        assert_eq!(n, self.col_off[bj + 1] - c0, "identity block must be square");
        let c = self.ring.from_i64(coeff);
        for i in 0..n {
            self.triplets.push((r0 + i, c0 + i, c.clone()));
        }
    }

    pub fn build(self) -> Matrix {
        let rows = *self.row_off.last().unwrap_or(&0);
        let cols = *self.col_off.last().unwrap_or(&0);
        Matrix::from_triplets(self.ring, rows, cols, self.triplets)
    }
}

pub fn offsets(sizes: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(sizes.len() + 1);
    let mut acc = 0;
    out.push(0);
    for s in sizes {
        acc += s;
        out.push(acc);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_times_m() {
        let r = Ring::Rationals;
        let m = Matrix::from_i64_rows(r, &[vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 0]]);
        assert_eq!(Matrix::identity(r, 3).mul(&m).unwrap(), m);
    }

    #[test]
    fn one_by_one_product() {
        let z = Ring::Integers;
        let a = Matrix::from_i64_rows(z, &[vec![2]]);
        let b = Matrix::from_i64_rows(z, &[vec![3]]);
        assert_eq!(a.mul(&b).unwrap(), Matrix::from_i64_rows(z, &[vec![6]]));
    }

    #[test]
    fn mul_errors() {
        let q = Ring::Rationals;
        let a = Matrix::zeros(q, 2, 3);
        assert!(matches!(a.mul(&a), Err(Error::DimensionMismatch { .. })));
        let b = Matrix::zeros(Ring::Integers, 3, 2);
        assert!(matches!(a.mul(&b), Err(Error::RingMismatch(..))));
    }

    #[test]
    fn triplets_cancel_to_zero() {
        let q = Ring::Rationals;
        let m = Matrix::from_triplets(q, 2, 2, vec![(0, 1, q.from_i64(2)), (0, 1, q.from_i64(-2))]);
        assert!(m.is_zero());
    }

    #[test]
    fn fp_entries_reduced() {
        let f = Ring::PrimeField(3);
        let m = Matrix::from_i64_rows(f, &[vec![4, -1, 3]]);
        assert_eq!(m.get(0, 0), f.from_i64(1));
        assert_eq!(m.get(0, 1), f.from_i64(2));
        assert_eq!(m.nnz(), 2);
    }

    #[test]
    fn kronecker_shape() {
        let q = Ring::Rationals;
        let a = Matrix::from_i64_rows(q, &[vec![1, 2]]);
        let b = Matrix::from_i64_rows(q, &[vec![0], vec![3]]);
        let k = a.kronecker(&b).unwrap();
        assert_eq!(k, Matrix::from_i64_rows(q, &[vec![0, 0], vec![3, 6]]));
    }
}
