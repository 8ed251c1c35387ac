//! The cotriple `(t, γ, ξ)` on functors of `n` variables.
//!
//! `t^m G(X)` is modelled as the ifiber of the `(m·n)`-cube
//! `W ↦ G(X(W_1 ∪ .. ∪ W_m))` with `W_1` in the lowest coordinates (the
//! innermost `t`). Summands come in ascending bitmask order, so the outermost
//! index is the most significant.

use crate::calculus::matrix01::{sgn2, ZeroOneMatrix};
use crate::calculus::tcube::{cube_map, multi_cube, TFunctor};
use crate::chain::{ChainComplex, ChainMap};
use crate::cube::{ifiber_closed, ifiber_map, ifiber_sizes, CubicalDiagram, Subset};
use crate::error::{Error, Result};
use crate::linalg::BlockBuilder;
use crate::source::{EtaMorphism, EtaObject, Functor, FunctorRef};

fn sign(e: usize) -> i64 {
    if e % 2 == 0 {
        1
    } else {
        -1
    }
}

fn blocks_of(w: Subset, n: usize) -> Vec<usize> {
    ZeroOneMatrix::from_subset(w, w.n / n).rows
}

fn join(rows: &[usize], n: usize) -> Subset {
    ZeroOneMatrix::new(n, rows.to_vec()).to_subset()
}

/// Map between ifibers of multi-block cubes sending the summand at `W` to
/// the summands listed by `image(W)` with the given signs (identity blocks).
fn summand_map<F>(src: &CubicalDiagram, tgt: &CubicalDiagram, image: F) -> Result<ChainMap>
where
    F: Fn(Subset) -> Vec<(Subset, i64)>,
{
    let ring = src.ring();
    let s = ifiber_closed(src)?;
    let t = ifiber_closed(tgt)?;
    let mut comps = Vec::new();
    for k in s.degrees() {
        let mut b = BlockBuilder::new(ring, &ifiber_sizes(tgt, k), &ifiber_sizes(src, k));
        for w in Subset::all(src.n()) {
            if src.vertex(w).rank(k + w.len() as i64) == 0 {
                continue;
            }
            for (v, c) in image(w) {
                if tgt.vertex(v) != src.vertex(w) {
                    return Err(Error::InvalidCube(format!("summand {} does not match {}", w.key(), v.key())));
                }
                b.place_identity(v.bits, w.bits, c);
            }
        }
        comps.push((k, b.build()));
    }
    ChainMap::new(s, t, comps)
}

/// Splits block `b` of an `m`-block cube into blocks `b` (inner) and `b + 1`:
/// `y ↦ Σ_{V ∈ M_2n(W_b)} (-1)^{sgn V} y`.
pub fn split_map(src: &CubicalDiagram, tgt: &CubicalDiagram, n: usize, b: usize) -> Result<ChainMap> {
    summand_map(src, tgt, |w| {
        let rows = blocks_of(w, n);
        let block = Subset::new(n, rows[b]);
        crate::calculus::matrix01::enumerate_m(block, 2)
            .into_iter()
            .map(|v| {
                let mut out = rows[..b].to_vec();
                out.extend(&v.rows);
                out.extend(&rows[b + 1..]);
                (join(&out, n), sign(sgn2(&v)))
            })
            .collect()
    })
}

/// Projection onto the summands with block `b` empty, dropping that block.
pub fn collapse_map(src: &CubicalDiagram, tgt: &CubicalDiagram, n: usize, b: usize) -> Result<ChainMap> {
    summand_map(src, tgt, |w| {
        let rows = blocks_of(w, n);
        if rows[b] != 0 {
            return Vec::new();
        }
        let mut out = rows.clone();
        out.remove(b);
        let v = if out.is_empty() { Subset::empty(0) } else { join(&out, n) };
        vec![(v, 1)]
    })
}

/// Cubes `t^m G(X)` for `m = 0..=max`.
pub struct TPowers {
    pub n: usize,
    pub cubes: Vec<CubicalDiagram>,
}

impl TPowers {
    pub fn new(g: &dyn Functor, xs: &[EtaObject], max: usize) -> Result<TPowers> {
        let n = xs.len();
        let mut cubes = Vec::new();
        for m in 0..=max {
            let c = multi_cube(g, xs, m.max(1))?;
            cubes.push(if m == 0 { CubicalDiagram::point(c.vertex(Subset::empty(c.n()))) } else { c });
        }
        Ok(TPowers { n, cubes })
    }

    pub fn level(&self, m: usize) -> Result<ChainComplex> {
        ifiber_closed(&self.cubes[m])
    }

    /// `ξ` acting on block `b` of `t^m G`: `t^m G -> t^{m+1} G`.
    pub fn split(&self, m: usize, b: usize) -> Result<ChainMap> {
        split_map(&self.cubes[m], &self.cubes[m + 1], self.n, b)
    }

    /// `γ` acting on block `b` of `t^m G`: `t^m G -> t^{m-1} G`.
    pub fn collapse(&self, m: usize, b: usize) -> Result<ChainMap> {
        collapse_map(&self.cubes[m], &self.cubes[m - 1], self.n, b)
    }
}

/// `ξ : tG(X) -> ttG(X)`.
pub fn xi(g: &dyn Functor, xs: &[EtaObject]) -> Result<ChainMap> {
    TPowers::new(g, xs, 2)?.split(1, 0)
}

/// `γ : tG(X) -> G(X)`, the projection onto the `∅` summand.
pub fn gamma(g: &dyn Functor, xs: &[EtaObject]) -> Result<ChainMap> {
    TPowers::new(g, xs, 1)?.collapse(1, 0)
}

/// First place where two maps with the same ends differ.
pub fn first_mismatch(a: &ChainMap, b: &ChainMap) -> Option<String> {
    if a.source() != b.source() || a.target() != b.target() {
        return Some("maps have different ends".into());
    }
    let degrees: std::collections::BTreeSet<i64> = a
        .stored_components()
        .map(|(k, _)| k)
        .chain(b.stored_components().map(|(k, _)| k))
        .collect();
    for k in degrees {
        let (x, y) = (a.component(k), b.component(k));
        if let Some((i, j)) = x.first_difference(&y) {
            return Some(format!("degree {k}, entry ({i}, {j}): {} vs {}", x.get(i, j), y.get(i, j)));
        }
    }
    None
}

fn chain_failures(name: &str, f: &ChainMap) -> Vec<String> {
    f.validate()
        .into_iter()
        .map(|v| format!("{name}: {} (degree {})", v.what, v.degree))
        .collect()
}

/// `ξ` and `γ` are chain maps.
pub fn verify_chain_maps(g: &dyn Functor, xs: &[EtaObject]) -> Result<Vec<String>> {
    let tw = TPowers::new(g, xs, 2)?;
    let mut out = chain_failures("ξ", &tw.split(1, 0)?);
    out.extend(chain_failures("γ", &tw.collapse(1, 0)?));
    Ok(out)
}

/// `γ_t ∘ ξ = id` and `(tγ) ∘ ξ = id`.
pub fn verify_counital(g: &dyn Functor, xs: &[EtaObject]) -> Result<Vec<String>> {
    let tw = TPowers::new(g, xs, 2)?;
    let x = tw.split(1, 0)?;
    let id = ChainMap::identity(&tw.level(1)?);
    let mut out = Vec::new();
    for (name, b) in [("γ_t∘ξ", 1), ("tγ∘ξ", 0)] {
        if let Some(m) = first_mismatch(&tw.collapse(2, b)?.compose(&x)?, &id) {
            out.push(format!("{name} ≠ id: {m}"));
        }
    }
    Ok(out)
}

/// `(tξ) ∘ ξ = (ξ_t) ∘ ξ` on `tttG(X)`.
pub fn verify_coassoc(g: &dyn Functor, xs: &[EtaObject]) -> Result<Vec<String>> {
    let tw = TPowers::new(g, xs, 3)?;
    let x = tw.split(1, 0)?;
    let left = tw.split(2, 0)?.compose(&x)?;
    let right = tw.split(2, 1)?.compose(&x)?;
    Ok(first_mismatch(&left, &right)
        .map(|m| format!("(tξ)∘ξ ≠ (ξ_t)∘ξ: {m}"))
        .into_iter()
        .collect())
}

/// The `2n`-cube model of `ttG(X)` equals `t(tG)(X)` built literally.
pub fn tt_two_routes(g: &FunctorRef, xs: &[EtaObject]) -> Result<Vec<String>> {
    let cube = ifiber_closed(&multi_cube(&**g, xs, 2)?)?;
    let literal = crate::calculus::tcube::t_apply(&TFunctor(g.clone()), xs)?;
    if cube == literal {
        return Ok(Vec::new());
    }
    if cube.ranks() != literal.ranks() {
        return Ok(vec![format!("ranks differ: {:?} vs {:?}", cube.ranks(), literal.ranks())]);
    }
    let k = cube
        .degrees()
        .find(|&k| cube.diff(k) != literal.diff(k))
        .unwrap_or_default();
    Ok(vec![format!("differentials differ in degree {k}")])
}

/// `ttG(f) ∘ ξ_X = ξ_Y ∘ tG(f)` for a tuple of strict maps.
pub fn verify_naturality(g: &dyn Functor, fs: &[EtaMorphism]) -> Result<Vec<String>> {
    let xs: Vec<EtaObject> = fs.iter().map(|f| f.source().clone()).collect();
    let ys: Vec<EtaObject> = fs.iter().map(|f| f.target().clone()).collect();
    let tf = ifiber_map(&cube_map(g, fs, 1)?)?;
    let ttf = ifiber_map(&cube_map(g, fs, 2)?)?;
    let left = ttf.compose(&xi(g, &xs)?)?;
    let right = xi(g, &ys)?.compose(&tf)?;
    Ok(first_mismatch(&left, &right)
        .map(|m| format!("ξ not natural: {m}"))
        .into_iter()
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Ring;
    use crate::source::{functor_by_name, EtaContext};

    #[test]
    fn identity_on_a_point() {
        let ring = Ring::Rationals;
        let ctx = EtaContext::based(ChainComplex::zero(ring));
        let x = ChainComplex::concentrated(ring, 0, 2);
        let obj = EtaObject::new(&ctx, ChainMap::zero(ctx.a(), &x), ChainMap::zero(&x, ctx.b())).unwrap();
        let id = functor_by_name("identity", &ctx).unwrap();
        let xs = [obj];
        assert!(verify_chain_maps(&*id, &xs).unwrap().is_empty());
        assert!(verify_counital(&*id, &xs).unwrap().is_empty());
        assert!(verify_coassoc(&*id, &xs).unwrap().is_empty());
        assert!(tt_two_routes(&id, &xs).unwrap().is_empty());
    }
}
