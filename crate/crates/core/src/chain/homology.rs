use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use serde_json::{json, Value};

use crate::chain::constructions::cone;
use crate::chain::{ChainComplex, ChainMap};
use crate::error::Result;
use crate::linalg::json::int_value;
use crate::linalg::{Matrix, Ring};

/// `H_k` of a complex: a dimension over a field, or free rank plus the
/// nontrivial invariant factors over Z.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Homology {
    pub free_rank: usize,
    /// Invariant factors greater than one, ascending in divisibility order.
    pub torsion: Vec<BigInt>,
}

impl Homology {
    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn to_json(&self) -> Value {
        let torsion: Vec<Value> = self.torsion.iter().map(int_value).collect();
        json!({"free_rank": self.free_rank, "torsion": torsion})
    }
}

impl fmt::Display for Homology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        if self.free_rank > 0 {
            parts.push(format!("R^{}", self.free_rank));
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z/{t}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

fn field_rank(m: &Matrix) -> Result<usize> {
    if m.ring() == Ring::Integers {
        m.over(Ring::Rationals).rank()
    } else {
        m.rank()
    }
}

/// `H_k(x)`.
pub fn homology(x: &ChainComplex, k: i64) -> Result<Homology> {
    let n = x.rank(k);
    if n == 0 {
        return Ok(Homology {
            free_rank: 0,
            torsion: Vec::new(),
        });
    }
    let out_rank = match x.diff_ref(k) {
        Some(d) => field_rank(d)?,
        None => 0,
    };
    let (in_rank, torsion) = match x.diff_ref(k + 1) {
        None => (0, Vec::new()),
        Some(d) if x.ring() == Ring::Integers => {
            let snf = d.smith_normal_form()?;
            let tors = snf.invariants.iter().filter(|v| **v > BigInt::one()).cloned().collect();
            (snf.rank(), tors)
        }
        Some(d) => (d.rank()?, Vec::new()),
    };
    Ok(Homology {
        free_rank: n - out_rank - in_rank,
        torsion,
    })
}

/// Nonzero homology groups of `x`, by degree.
pub fn homology_all(x: &ChainComplex) -> Result<BTreeMap<i64, Homology>> {
    let mut out = BTreeMap::new();
    for k in x.degrees() {
        let h = homology(x, k)?;
        if !h.is_zero() {
            out.insert(k, h);
        }
    }
    Ok(out)
}

/// Free ranks of the nonzero homology groups (Betti numbers over a field).
pub fn betti_numbers(x: &ChainComplex) -> Result<BTreeMap<i64, usize>> {
    Ok(homology_all(x)?
        .into_iter()
        .filter(|(_, h)| h.free_rank > 0)
        .map(|(k, h)| (k, h.free_rank))
        .collect())
}

pub fn is_acyclic(x: &ChainComplex) -> Result<bool> {
    for k in x.degrees() {
        if !homology(x, k)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A chain map of bounded free complexes is a quasi-isomorphism exactly when
/// its mapping cone is acyclic; over Z this includes torsion.
pub fn is_quasi_iso(f: &ChainMap) -> Result<bool> {
    is_acyclic(&cone(f)?.complex)
}

/// Rank of `H_k(f)` over a field.
pub fn induced_rank(f: &ChainMap, k: i64) -> Result<usize> {
    let ring = f.ring();
    ring.require_field("induced_rank")?;
    let (x, y) = (f.source(), f.target());
    if x.rank(k) == 0 || y.rank(k) == 0 {
        return Ok(0);
    }
    let cycles = x.diff(k).kernel_basis()?;
    let image = f.component(k).mul(&cycles)?;
    let boundaries = y.diff(k + 1);
    let both = Matrix::hstack(&[&boundaries, &image])?;
    Ok(both.rank()? - boundaries.rank()?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_term(ring: Ring, a: i64) -> ChainComplex {
        ChainComplex::new(ring, [(0, 1), (1, 1)], [(1, Matrix::from_i64_rows(ring, &[vec![a]]))]).unwrap()
    }

    #[test]
    fn point_and_acyclic() {
        let q = Ring::Rationals;
        assert_eq!(homology(&ChainComplex::concentrated(q, 0, 1), 0).unwrap().free_rank, 1);
        assert!(is_acyclic(&two_term(q, 1)).unwrap());
    }

    #[test]
    fn cokernel_of_two() {
        let z = Ring::Integers;
        let h = homology(&two_term(z, -2), 0).unwrap();
        assert_eq!(h.free_rank, 0);
        assert_eq!(h.torsion, vec![BigInt::from(2)]);
        assert_eq!(h.to_string(), "Z/2");
        assert!(homology(&two_term(z, -2), 1).unwrap().is_zero());
    }

    #[test]
    fn identity_is_quasi_iso() {
        let c = two_term(Ring::Integers, 3);
        assert!(is_quasi_iso(&ChainMap::identity(&c)).unwrap());
        assert!(!is_quasi_iso(&ChainMap::zero(&c, &c)).unwrap());
    }
}
