use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{Matrix, Ring};

/// A violated identity found by `validate`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub what: String,
    pub degree: i64,
}

/// Bounded complex of finitely generated free modules, homologically indexed.
///
/// `diffs[k]` is `d_k : C_k -> C_{k-1}` with shape `rank(k-1) x rank(k)`. Only
/// nonzero ranks and nonzero differentials are stored, so two complexes are
/// equal exactly when every rank and every differential matrix agree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplex {
    ring: Ring,
    ranks: Arc<BTreeMap<i64, usize>>,
    diffs: Arc<BTreeMap<i64, Matrix>>,
}

impl ChainComplex {
    pub fn zero(ring: Ring) -> ChainComplex {
        ChainComplex {
            ring,
            ranks: Arc::default(),
            diffs: Arc::default(),
        }
    }

    /// `R^rank` concentrated in degree `k`.
    pub fn concentrated(ring: Ring, k: i64, rank: usize) -> ChainComplex {
        let mut c = ChainComplex::zero(ring);
        if rank > 0 {
            Arc::make_mut(&mut c.ranks).insert(k, rank);
        }
        c
    }

    /// Checks shapes only; use [`ChainComplex::validate`] for `d^2 = 0`.
    pub fn new<R, D>(ring: Ring, ranks: R, diffs: D) -> Result<ChainComplex>
    where
        R: IntoIterator<Item = (i64, usize)>,
        D: IntoIterator<Item = (i64, Matrix)>,
    {
        let ranks: BTreeMap<i64, usize> = ranks.into_iter().filter(|(_, r)| *r > 0).collect();
        let rank = |k: i64| ranks.get(&k).copied().unwrap_or(0);
        let mut out = BTreeMap::new();
        for (k, m) in diffs {
            ring.check_same(m.ring())?;
            if m.shape() != (rank(k - 1), rank(k)) {
                return Err(Error::InvalidComplex(format!(
                    "d_{k} has shape {:?}, expected {:?}",
                    m.shape(),
                    (rank(k - 1), rank(k))
                )));
            }
            if !m.is_zero() {
                out.insert(k, m);
            }
        }
        Ok(ChainComplex {
            ring,
            ranks: Arc::new(ranks),
            diffs: Arc::new(out),
        })
    }

    /// Like [`ChainComplex::new`] but also rejects `d^2 != 0`.
    pub fn new_checked<R, D>(ring: Ring, ranks: R, diffs: D) -> Result<ChainComplex>
    where
        R: IntoIterator<Item = (i64, usize)>,
        D: IntoIterator<Item = (i64, Matrix)>,
    {
        let c = ChainComplex::new(ring, ranks, diffs)?;
        match c.validate().first() {
            None => Ok(c),
            Some(v) => Err(Error::InvalidComplex(format!("{} at degree {}", v.what, v.degree))),
        }
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn rank(&self, k: i64) -> usize {
        self.ranks.get(&k).copied().unwrap_or(0)
    }

    pub fn ranks(&self) -> &BTreeMap<i64, usize> {
        &self.ranks
    }

    pub fn total_rank(&self) -> usize {
        self.ranks.values().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.ranks.is_empty()
    }

    /// Degrees carrying a nonzero module, ascending.
    pub fn degrees(&self) -> impl Iterator<Item = i64> + '_ {
        self.ranks.keys().copied()
    }

    pub fn min_degree(&self) -> Option<i64> {
        self.ranks.keys().next().copied()
    }

    pub fn max_degree(&self) -> Option<i64> {
        self.ranks.keys().next_back().copied()
    }

    /// `d_k`, a zero matrix of the right shape when not stored.
    pub fn diff(&self, k: i64) -> Matrix {
        self.diffs
            .get(&k)
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(self.ring, self.rank(k - 1), self.rank(k)))
    }

    pub fn diff_ref(&self, k: i64) -> Option<&Matrix> {
        self.diffs.get(&k)
    }

    pub fn stored_diffs(&self) -> impl Iterator<Item = (i64, &Matrix)> + '_ {
        self.diffs.iter().map(|(k, m)| (*k, m))
    }

    /// Every `k` with `d_{k-1} d_k != 0`.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for (&k, dk) in self.diffs.iter() {
            let Some(dk1) = self.diffs.get(&(k - 1)) else { continue };
            let prod = dk1.mul(dk).expect("conforming differentials");
            if !prod.is_zero() {
                out.push(Violation {
                    what: format!("d_{}∘d_{} ≠ 0", k - 1, k),
                    degree: k,
                });
            }
        }
        out
    }
}

/// Degreewise matrices `f_k : source_k -> target_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainMap {
    source: ChainComplex,
    target: ChainComplex,
    comps: Arc<BTreeMap<i64, Matrix>>,
}

impl ChainMap {
    pub fn new<I>(source: ChainComplex, target: ChainComplex, comps: I) -> Result<ChainMap>
    where
        I: IntoIterator<Item = (i64, Matrix)>,
    {
        source.ring.check_same(target.ring)?;
        let mut out = BTreeMap::new();
        for (k, m) in comps {
            source.ring.check_same(m.ring())?;
            if m.shape() != (target.rank(k), source.rank(k)) {
                return Err(Error::InvalidMap(format!(
                    "f_{k} has shape {:?}, expected {:?}",
                    m.shape(),
                    (target.rank(k), source.rank(k))
                )));
            }
            if !m.is_zero() {
                out.insert(k, m);
            }
        }
        Ok(ChainMap {
            source,
            target,
            comps: Arc::new(out),
        })
    }

    pub fn new_checked<I>(source: ChainComplex, target: ChainComplex, comps: I) -> Result<ChainMap>
    where
        I: IntoIterator<Item = (i64, Matrix)>,
    {
        let f = ChainMap::new(source, target, comps)?;
        match f.validate().first() {
            None => Ok(f),
            Some(v) => Err(Error::InvalidMap(format!("{} at degree {}", v.what, v.degree))),
        }
    }

    pub fn identity(c: &ChainComplex) -> ChainMap {
        let comps = c.ranks.iter().map(|(&k, &r)| (k, Matrix::identity(c.ring, r))).collect();
        ChainMap {
            source: c.clone(),
            target: c.clone(),
            comps: Arc::new(comps),
        }
    }

    pub fn zero(source: &ChainComplex, target: &ChainComplex) -> ChainMap {
        ChainMap {
            source: source.clone(),
            target: target.clone(),
            comps: Arc::default(),
        }
    }

    pub fn ring(&self) -> Ring {
        self.source.ring
    }

    pub fn source(&self) -> &ChainComplex {
        &self.source
    }

    pub fn target(&self) -> &ChainComplex {
        &self.target
    }

    pub fn component(&self, k: i64) -> Matrix {
        self.comps
            .get(&k)
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(self.ring(), self.target.rank(k), self.source.rank(k)))
    }

    pub fn component_ref(&self, k: i64) -> Option<&Matrix> {
        self.comps.get(&k)
    }

    pub fn stored_components(&self) -> impl Iterator<Item = (i64, &Matrix)> + '_ {
        self.comps.iter().map(|(k, m)| (*k, m))
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    /// Every `k` with `d^target_k f_k != f_{k-1} d^source_k`.
    pub fn validate(&self) -> Vec<Violation> {
        let mut degrees: Vec<i64> = self
            .comps
            .keys()
            .flat_map(|&k| [k, k + 1])
            .chain(self.source.diffs.keys().copied())
            .chain(self.target.diffs.keys().copied())
            .collect();
        degrees.sort_unstable();
        degrees.dedup();
        let mut out = Vec::new();
        for k in degrees {
            let lhs = self.target.diff(k).mul(&self.component(k)).expect("conforming");
            let rhs = self.component(k - 1).mul(&self.source.diff(k)).expect("conforming");
            if lhs != rhs {
                out.push(Violation {
                    what: format!("d∘f_{k} ≠ f_{}∘d", k - 1),
                    degree: k,
                });
            }
        }
        out
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &ChainMap) -> Result<ChainMap> {
        if first.target != self.source {
            return Err(Error::InvalidMap("composition: target/source mismatch".into()));
        }
        let mut comps = BTreeMap::new();
        for (&k, g) in self.comps.iter() {
            if let Some(f) = first.comps.get(&k) {
                let m = g.mul(f)?;
                if !m.is_zero() {
                    comps.insert(k, m);
                }
            }
        }
        Ok(ChainMap {
            source: first.source.clone(),
            target: self.target.clone(),
            comps: Arc::new(comps),
        })
    }

    fn combine(&self, other: &ChainMap, subtract: bool) -> Result<ChainMap> {
        if self.source != other.source || self.target != other.target {
            return Err(Error::InvalidMap("sum of maps with different ends".into()));
        }
        let mut keys: Vec<i64> = self.comps.keys().chain(other.comps.keys()).copied().collect();
        keys.sort_unstable();
        keys.dedup();
        let mut comps = BTreeMap::new();
        for k in keys {
            let (a, b) = (self.component(k), other.component(k));
            let m = if subtract { a.sub(&b)? } else { a.add(&b)? };
            if !m.is_zero() {
                comps.insert(k, m);
            }
        }
        Ok(ChainMap {
            source: self.source.clone(),
            target: self.target.clone(),
            comps: Arc::new(comps),
        })
    }

    pub fn add(&self, other: &ChainMap) -> Result<ChainMap> {
        self.combine(other, false)
    }

    pub fn sub(&self, other: &ChainMap) -> Result<ChainMap> {
        self.combine(other, true)
    }

    pub fn neg(&self) -> ChainMap {
        ChainMap {
            source: self.source.clone(),
            target: self.target.clone(),
            comps: Arc::new(self.comps.iter().map(|(k, m)| (*k, m.neg())).collect()),
        }
    }

    /// Same matrices, reattached to equal-shaped ends (used after rebuilding a
    /// complex with identical ranks).
    pub fn with_ends(&self, source: ChainComplex, target: ChainComplex) -> Result<ChainMap> {
        ChainMap::new(source, target, (*self.comps).clone())
    }

    /// True when every component is a square invertible matrix, i.e. an
    /// isomorphism of chain complexes.
    pub fn is_isomorphism(&self) -> Result<bool> {
        if self.source.ranks != self.target.ranks {
            return Ok(false);
        }
        for k in self.source.degrees() {
            if self.component(k).inverse()?.is_none() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Ring {
        Ring::Rationals
    }

    #[test]
    fn valid_complex_has_empty_report() {
        // R --(1)--> R --(0)--> R
        let c = ChainComplex::new(
            q(),
            [(2, 1), (1, 1), (0, 1)],
            [
                (2, Matrix::from_i64_rows(q(), &[vec![1]])),
                (1, Matrix::from_i64_rows(q(), &[vec![0]])),
            ],
        )
        .unwrap();
        assert!(c.validate().is_empty());
    }

    #[test]
    fn d_squared_violation_reported_at_degree_one() {
        let c = ChainComplex::new(
            q(),
            [(1, 1), (0, 1), (-1, 1)],
            [
                (1, Matrix::from_i64_rows(q(), &[vec![1]])),
                (0, Matrix::from_i64_rows(q(), &[vec![1]])),
            ],
        )
        .unwrap();
        let report = c.validate();
        assert_eq!(report.len(), 1);
        assert_eq!(report[0].degree, 1);
        assert!(ChainComplex::new_checked(q(), [(1, 1), (0, 1), (-1, 1)], [
            (1, Matrix::from_i64_rows(q(), &[vec![1]])),
            (0, Matrix::from_i64_rows(q(), &[vec![1]])),
        ])
        .is_err());
    }

    #[test]
    fn shape_errors() {
        let bad = ChainComplex::new(q(), [(1, 2), (0, 1)], [(1, Matrix::zeros(q(), 2, 2))]);
        assert!(matches!(bad, Err(Error::InvalidComplex(_))));
    }

    #[test]
    fn non_chain_map_reported() {
        let c = ChainComplex::new(q(), [(1, 1), (0, 1)], [(1, Matrix::from_i64_rows(q(), &[vec![1]]))]).unwrap();
        let f = ChainMap::new(c.clone(), c.clone(), [(1, Matrix::identity(q(), 1))]).unwrap();
        assert_eq!(f.validate().len(), 1);
        assert!(ChainMap::identity(&c).validate().is_empty());
        assert!(ChainMap::identity(&c).is_isomorphism().unwrap());
    }
}
