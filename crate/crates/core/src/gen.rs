//! Seeded random instances: complexes, chain maps and (via [`LinearSystem`])
//! anything else cut out by linear constraints.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::chain::{ChainComplex, ChainMap};
use crate::linalg::{Matrix, Ring, Scalar};

pub struct Gen {
    rng: ChaCha8Rng,
}

impl Gen {
    pub fn new(seed: u64) -> Gen {
        Gen {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn below(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }

    pub fn chance(&mut self, p: f64) -> bool {
        self.rng.gen_bool(p)
    }

    /// Small nonzero integer in `[-2, 2]`.
    pub fn small_nonzero(&mut self) -> i64 {
        [-2, -1, 1, 1, 2][self.below(5)]
    }

    pub fn matrix(&mut self, ring: Ring, rows: usize, cols: usize, density: f64) -> Matrix {
        let mut trip = Vec::new();
        for i in 0..rows {
            for j in 0..cols {
                if self.chance(density) {
                    trip.push((i, j, ring.from_i64(self.small_nonzero())));
                }
            }
        }
        Matrix::from_triplets(ring, rows, cols, trip)
    }

    /// Random complex supported in `lo..=hi` with ranks at most `max_rank`.
    /// Each differential is a random combination of a kernel basis of the
    /// previous one, so `d^2 = 0` by construction.
    pub fn complex(&mut self, ring: Ring, lo: i64, hi: i64, max_rank: usize) -> ChainComplex {
        let ranks: Vec<(i64, usize)> = (lo..=hi).map(|k| (k, self.below(max_rank + 1))).collect();
        let mut diffs: Vec<(i64, Matrix)> = Vec::new();
        let mut prev: Option<Matrix> = None;
        for w in ranks.windows(2) {
            let ((_, r0), (k, r1)) = (w[0], w[1]);
            let d = match &prev {
                None => self.matrix(ring, r0, r1, 0.6),
                Some(p) => {
                    let kernel = integral_kernel(p);
                    let coeffs = self.matrix(ring, kernel.cols(), r1, 0.5);
                    kernel.mul(&coeffs).expect("shapes agree")
                }
            };
            prev = Some(d.clone());
            diffs.push((k, d));
        }
        ChainComplex::new(ring, ranks, diffs).expect("generated shapes agree")
    }

    /// A random chain map `x -> y`, drawn from the solution space of the
    /// chain-map equations.
    pub fn chain_map(&mut self, x: &ChainComplex, y: &ChainComplex) -> ChainMap {
        let ring = x.ring();
        let degrees: Vec<i64> = x.degrees().filter(|&k| y.rank(k) > 0).collect();
        let mut sys = LinearSystem::new(ring);
        let blocks: Vec<usize> = degrees.iter().map(|&k| sys.unknown(y.rank(k), x.rank(k))).collect();
        let block_of = |k: i64| degrees.iter().position(|&d| d == k).map(|i| blocks[i]);
        let mut eqs: Vec<i64> = degrees.iter().flat_map(|&k| [k, k + 1]).collect();
        eqs.sort_unstable();
        eqs.dedup();
        for k in eqs {
            // d^Y_k f_k - f_{k-1} d^X_k = 0
            let mut terms = Vec::new();
            if let Some(b) = block_of(k) {
                terms.push((y.diff(k), b, Matrix::identity(ring, x.rank(k)), 1));
            }
            if let Some(b) = block_of(k - 1) {
                terms.push((Matrix::identity(ring, y.rank(k - 1)), b, x.diff(k), -1));
            }
            sys.equation(&terms);
        }
        let sol = sys.random_solution(self);
        let comps = degrees.iter().zip(&blocks).map(|(&k, &b)| (k, sol[b].clone()));
        ChainMap::new(x.clone(), y.clone(), comps).expect("generated shapes agree")
    }

    /// A random ring among Q, F_2, F_3 and Z.
    pub fn ring(&mut self) -> Ring {
        [Ring::Rationals, Ring::PrimeField(2), Ring::PrimeField(3), Ring::Integers][self.below(4)]
    }
}

/// Kernel basis of `m`; over Z the columns are primitive integer vectors
/// spanning the rational kernel.
pub fn integral_kernel(m: &Matrix) -> Matrix {
    let ring = m.ring();
    if ring != Ring::Integers {
        return m.kernel_basis().expect("field kernel");
    }
    let k = m.over(Ring::Rationals).kernel_basis().expect("rational kernel");
    scale_columns_integral(&k)
}

fn scale_columns_integral(k: &Matrix) -> Matrix {
    let mut factors = vec![BigInt::one(); k.cols()];
    let mut gcds = vec![BigInt::zero(); k.cols()];
    for (_, j, v) in k.entries() {
        factors[j] = factors[j].lcm(v.denom());
    }
    for (_, j, v) in k.entries() {
        let n = v.numer() * (&factors[j] / v.denom());
        gcds[j] = gcds[j].gcd(&n);
    }
    let trip = k.entries().map(|(i, j, v)| {
        let n = v.numer() * (&factors[j] / v.denom()) / &gcds[j];
        (i, j, Scalar::from_integer(n))
    });
    Matrix::from_triplets(Ring::Integers, k.rows(), k.cols(), trip.collect::<Vec<_>>())
}

/// Homogeneous linear equations in matrix-valued unknowns, each equation of
/// the form `Σ c · L · X_b · R = 0`.
pub struct LinearSystem {
    ring: Ring,
    shapes: Vec<(usize, usize)>,
    offsets: Vec<usize>,
    total: usize,
    rows: Vec<(usize, usize, Scalar)>,
    row_count: usize,
}

impl LinearSystem {
    pub fn new(ring: Ring) -> LinearSystem {
        LinearSystem {
            ring,
            shapes: Vec::new(),
            offsets: Vec::new(),
            total: 0,
            rows: Vec::new(),
            row_count: 0,
        }
    }

    /// Registers an unknown `rows x cols` matrix; returns its handle.
    pub fn unknown(&mut self, rows: usize, cols: usize) -> usize {
        self.shapes.push((rows, cols));
        self.offsets.push(self.total);
        self.total += rows * cols;
        self.shapes.len() - 1
    }

    /// Adds the equation `Σ coeff · left · X_block · right = 0`.
    pub fn equation(&mut self, terms: &[(Matrix, usize, Matrix, i64)]) {
        let Some((l0, _, r0, _)) = terms.first() else { return };
        let (p, q) = (l0.rows(), r0.cols());
        let ring = self.ring;
        for (left, b, right, c) in terms {
            let (_, cols) = self.shapes[*b];
            let off = self.offsets[*b];
            let rt = right.transpose();
            for i in 0..p {
                for (a, lv) in left.row(i) {
                    let lc = ring.mul(lv, &ring.from_i64(*c));
                    for j in 0..q {
                        for (bb, rv) in rt.row(j) {
                            let v = ring.mul(&lc, rv);
                            self.rows.push((self.row_count + i * q + j, off + a * cols + bb, v));
                        }
                    }
                }
            }
        }
        self.row_count += p * q;
    }

    /// A random integer combination of a kernel basis, split into blocks.
    pub fn random_solution(&self, g: &mut Gen) -> Vec<Matrix> {
        let ring = self.ring;
        let work = if ring == Ring::Integers { Ring::Rationals } else { ring };
        let trip = self.rows.iter().map(|(i, j, v)| (*i, *j, work.reduce(v.as_rational().clone())));
        let a = Matrix::from_triplets(work, self.row_count, self.total, trip.collect::<Vec<_>>());
        let mut kernel = a.kernel_basis().expect("field kernel");
        if ring == Ring::Integers {
            kernel = scale_columns_integral(&kernel);
        }
        let coeffs = g.matrix(ring, kernel.cols(), 1, 0.7);
        let v = kernel.mul(&coeffs).expect("shapes agree");
        self.shapes
            .iter()
            .zip(&self.offsets)
            .map(|(&(r, c), &off)| {
                let trip = (0..r).flat_map(|i| (0..c).map(move |j| (i, j))).filter_map(|(i, j)| {
                    let e = v.get(off + i * c + j, 0);
                    (!e.is_zero()).then_some((i, j, e))
                });
                Matrix::from_triplets(ring, r, c, trip.collect::<Vec<_>>())
            })
            .collect()
    }
}
