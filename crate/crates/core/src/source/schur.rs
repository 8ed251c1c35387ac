//! Tensor powers and their symmetric / exterior summands, with the Koszul
//! sign rule for permuting factors.

use std::collections::{BTreeMap, HashMap};

use crate::chain::constructions::tensor_map;
use crate::chain::{tensor, ChainComplex, ChainMap};
use crate::error::{Error, Result};
use crate::linalg::{Matrix, Ring, Scalar};

/// `X^{⊗d}`, nested to the left; `X^{⊗0}` is the ring in degree 0.
pub fn tensor_power(x: &ChainComplex, d: usize) -> Result<ChainComplex> {
    if d == 0 {
        return Ok(ChainComplex::concentrated(x.ring(), 0, 1));
    }
    let mut out = x.clone();
    for _ in 1..d {
        out = tensor(&out, x)?;
    }
    Ok(out)
}

pub fn tensor_power_map(f: &ChainMap, d: usize) -> Result<ChainMap> {
    if d == 0 {
        return Ok(ChainMap::identity(&tensor_power(f.source(), 0)?));
    }
    let mut out = f.clone();
    for _ in 1..d {
        out = tensor_map(&out, f)?;
    }
    Ok(out)
}

/// A basis element of `X`: `(degree, index)`.
type Elem = (i64, usize);

/// Basis of `X^{⊗d}` in the order produced by [`tensor_power`].
fn tensor_basis(x: &ChainComplex, d: usize) -> BTreeMap<i64, Vec<Vec<Elem>>> {
    let mut out: BTreeMap<i64, Vec<Vec<Elem>>> = BTreeMap::new();
    if d == 0 {
        out.insert(0, vec![Vec::new()]);
        return out;
    }
    for k in x.degrees() {
        out.insert(k, (0..x.rank(k)).map(|i| vec![(k, i)]).collect());
    }
    for _ in 1..d {
        let prev = std::mem::take(&mut out);
        let mut degrees: Vec<i64> = prev.keys().flat_map(|&i| x.degrees().map(move |j| i + j)).collect();
        degrees.sort_unstable();
        degrees.dedup();
        for k in degrees {
            let mut elems = Vec::new();
            for (&i, left) in &prev {
                let r = x.rank(k - i);
                for p in left {
                    for b in 0..r {
                        let mut t = p.clone();
                        t.push((k - i, b));
                        elems.push(t);
                    }
                }
            }
            if !elems.is_empty() {
                out.insert(k, elems);
            }
        }
    }
    out
}

fn permutations(d: usize) -> Vec<Vec<usize>> {
    if d == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(d - 1) {
        for pos in 0..d {
            let mut q = p.clone();
            q.insert(pos, d - 1);
            out.push(q);
        }
    }
    out
}

/// `σ · (v_1, .., v_d) = ε (v_{σ(1)}, .., v_{σ(d)})`, where `ε` is the Koszul
/// sign of the reordering, times `sign(σ)` when `alternating`.
fn act(sigma: &[usize], t: &[Elem], alternating: bool) -> (Vec<Elem>, i64) {
    let mut s = 1;
    for a in 0..sigma.len() {
        for b in a + 1..sigma.len() {
            if sigma[a] > sigma[b] {
                let (p, q) = (t[sigma[a]].0, t[sigma[b]].0);
                if p.rem_euclid(2) == 1 && q.rem_euclid(2) == 1 {
                    s = -s;
                }
                if alternating {
                    s = -s;
                }
            }
        }
    }
    (sigma.iter().map(|&i| t[i]).collect(), s)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Schur {
    Symmetric,
    Exterior,
}

/// Orbit sums spanning the image of the (anti)symmetrizer in one degree.
struct Summand {
    /// `(rows of X^{⊗d}_k) x (orbits)`.
    basis: Matrix,
    /// Row of each orbit's representative, and the entry there.
    reps: Vec<(usize, Scalar)>,
}

fn summands(x: &ChainComplex, d: usize, kind: Schur) -> BTreeMap<i64, Summand> {
    let ring = x.ring();
    let perms = permutations(d);
    let mut out = BTreeMap::new();
    for (k, elems) in tensor_basis(x, d) {
        let index: HashMap<&Vec<Elem>, usize> = elems.iter().enumerate().map(|(i, t)| (t, i)).collect();
        let mut trip = Vec::new();
        let mut reps = Vec::new();
        for (row, t) in elems.iter().enumerate() {
            let mut sorted = t.clone();
            sorted.sort_unstable();
            if *t != sorted {
                continue;
            }
            let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
            for p in &perms {
                let (u, s) = act(p, t, kind == Schur::Exterior);
                *acc.entry(index[&u]).or_default() += s;
            }
            acc.retain(|_, v| *v != 0);
            let col = reps.len();
            let entries: Vec<(usize, usize, Scalar)> =
                acc.iter().map(|(&i, &v)| (i, col, ring.from_i64(v))).collect();
            if entries.iter().all(|e| e.2.is_zero()) {
                continue;
            }
            let rep = ring.from_i64(acc.get(&row).copied().unwrap_or(0));
            reps.push((row, rep));
            trip.extend(entries);
        }
        if !reps.is_empty() {
            let basis = Matrix::from_triplets(ring, elems.len(), reps.len(), trip);
            out.insert(k, Summand { basis, reps });
        }
    }
    out
}

/// Coordinates in the orbit basis of a block of columns lying in the image.
fn coordinates(s: &Summand, v: &Matrix) -> Matrix {
    let ring = v.ring();
    let rows: Vec<usize> = s.reps.iter().map(|r| r.0).collect();
    let picked = v.select_rows(&rows);
    let inv: Vec<Scalar> = s.reps.iter().map(|r| ring.inv(&r.1).expect("unit on a field")).collect();
    Matrix::diagonal(ring, inv.len(), inv.len(), &inv).mul(&picked).expect("shapes agree")
}

fn check_ring(ring: Ring, d: usize) -> Result<()> {
    let ok = match ring {
        Ring::Rationals => true,
        Ring::PrimeField(p) => p as usize > d,
        Ring::Integers => d <= 1,
    };
    if ok {
        Ok(())
    } else {
        Err(Error::Precondition(format!(
            "symmetric/exterior powers of degree {d} need characteristic 0 or > {d}, got {ring}"
        )))
    }
}

/// `Sym^d X` or `Λ^d X` as a complex, in the basis of orbit sums.
pub fn schur_power(x: &ChainComplex, d: usize, kind: Schur) -> Result<ChainComplex> {
    check_ring(x.ring(), d)?;
    let full = tensor_power(x, d)?;
    let parts = summands(x, d, kind);
    let ranks: Vec<(i64, usize)> = parts.iter().map(|(&k, s)| (k, s.reps.len())).collect();
    let mut diffs = Vec::new();
    for (&k, s) in &parts {
        let Some(lower) = parts.get(&(k - 1)) else { continue };
        let image = full.diff(k).mul(&s.basis)?;
        diffs.push((k, coordinates(lower, &image)));
    }
    ChainComplex::new(x.ring(), ranks, diffs)
}

pub fn schur_power_map(f: &ChainMap, d: usize, kind: Schur) -> Result<ChainMap> {
    check_ring(f.ring(), d)?;
    let full = tensor_power_map(f, d)?;
    let src = summands(f.source(), d, kind);
    let tgt = summands(f.target(), d, kind);
    let mut comps = Vec::new();
    for (&k, s) in &src {
        let Some(t) = tgt.get(&k) else { continue };
        let image = full.component(k).mul(&s.basis)?;
        comps.push((k, coordinates(t, &image)));
    }
    ChainMap::new(
        schur_power(f.source(), d, kind)?,
        schur_power(f.target(), d, kind)?,
        comps,
    )
}
