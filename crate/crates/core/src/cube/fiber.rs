use std::collections::BTreeSet;

use crate::chain::{hofib, ChainComplex, ChainMap};
use crate::cube::{CubeMap, CubicalDiagram, Subset};
use crate::error::{Error, Result};
use crate::linalg::{BlockBuilder, Matrix};

fn parity(e: usize) -> i64 {
    if e % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Degrees in which `ifiber(x)` can be nonzero.
pub fn ifiber_degrees(x: &CubicalDiagram) -> BTreeSet<i64> {
    Subset::all(x.n())
        .flat_map(|t| x.vertex(t).degrees().map(move |k| k - t.len() as i64))
        .collect()
}

/// Summand sizes of `ifiber(x)_k`: `rank X(T)_{k+|T|}` for ascending `T`.
pub fn ifiber_sizes(x: &CubicalDiagram, k: i64) -> Vec<usize> {
    Subset::all(x.n()).map(|t| x.vertex(t).rank(k + t.len() as i64)).collect()
}

/// Closed form: `ifiber(X)_k = ⊕_T X(T)_{k+|T|}` (ascending bitmask) with
/// `d(x) = (-1)^{|T|} d x + Σ_{i∉T} (-1)^{sgn(σ_i^T)+1} X(σ_i^T)(x)`.
pub fn ifiber_closed(x: &CubicalDiagram) -> Result<ChainComplex> {
    let ring = x.ring();
    let n = x.n();
    let degrees = ifiber_degrees(x);
    let mut ranks = Vec::new();
    let mut diffs = Vec::new();
    for &k in &degrees {
        let cols = ifiber_sizes(x, k);
        ranks.push((k, cols.iter().sum::<usize>()));
        let rows = ifiber_sizes(x, k - 1);
        let mut b = BlockBuilder::new(ring, &rows, &cols);
        for t in Subset::all(n) {
            let deg = k + t.len() as i64;
            if cols[t.bits] == 0 {
                continue;
            }
            if let Some(d) = x.vertex(t).diff_ref(deg) {
                b.place(t.bits, t.bits, d, parity(t.len()));
            }
            for i in (0..n).filter(|&i| !t.contains(i)) {
                if let Some(m) = x.edge(t, i).component_ref(deg) {
                    b.place(t.with(i).bits, t.bits, m, parity(t.sgn_edge(i) + 1));
                }
            }
        }
        diffs.push((k, b.build()));
    }
    ChainComplex::new(ring, ranks, diffs)
}

/// The map `ifiber(X) -> ifiber(Y)` induced by a map of cubes; blockwise
/// diagonal, summand `T` acting by the component at `T`.
pub fn ifiber_map(f: &CubeMap) -> Result<ChainMap> {
    ifiber_map_between(f, ifiber_closed(&f.source)?, ifiber_closed(&f.target)?)
}

/// [`ifiber_map`] with the two ifibers already computed.
pub fn ifiber_map_between(f: &CubeMap, src: ChainComplex, tgt: ChainComplex) -> Result<ChainMap> {
    let ring = f.source.ring();
    let mut comps = Vec::new();
    for k in src.degrees() {
        let mut b = BlockBuilder::new(ring, &ifiber_sizes(&f.target, k), &ifiber_sizes(&f.source, k));
        for t in Subset::all(f.source.n()) {
            if let Some(m) = f.component(t).component_ref(k + t.len() as i64) {
                b.place(t.bits, t.bits, m, 1);
            }
        }
        comps.push((k, b.build()));
    }
    ChainMap::new(src, tgt, comps)
}

/// Recursive form: split off the highest coordinate and take
/// `hofib(ifiber(Y_1) -> ifiber(Y_2))`; the base case is the vertex itself.
///
/// With summands in ascending bitmask order the `Y_1` part (highest
/// coordinate absent) precedes the `Y_2` part, so the result is comparable
/// with [`ifiber_closed`] without any reordering.
pub fn ifiber_recursive(x: &CubicalDiagram) -> Result<ChainComplex> {
    if x.n() == 0 {
        return Ok(x.vertex(Subset::empty(0)).clone());
    }
    let g = recursive_induced(&x.split(x.n() - 1)?)?;
    Ok(hofib(&g)?.complex)
}

/// `ifiber(f)` for a cube map, with both ends computed recursively.
fn recursive_induced(f: &CubeMap) -> Result<ChainMap> {
    if f.source.n() == 0 {
        return Ok(f.comps[0].clone());
    }
    let top = f.source.n() - 1;
    let s = f.source.split(top)?;
    let t = f.target.split(top)?;
    let lower = |side: u8, cube: &CubeMap| -> Result<CubeMap> {
        Ok(CubeMap {
            source: cube.source.face(top, side)?,
            target: cube.target.face(top, side)?,
            comps: Subset::all(top)
                .map(|u| cube.comps[if side == 0 { u.bits } else { u.bits | 1 << top }].clone())
                .collect(),
        })
    };
    let a = recursive_induced(&lower(0, f)?)?;
    let b = recursive_induced(&lower(1, f)?)?;
    let gs = recursive_induced(&s)?;
    let gt = recursive_induced(&t)?;
    crate::chain::constructions::hofib_map(&gs, &gt, &a, &b)
}

fn require_square(x: &CubicalDiagram) -> Result<()> {
    if x.n() != 2 {
        return Err(Error::InvalidCube(format!("total fiber model needs a square, got n = {}", x.n())));
    }
    Ok(())
}

/// The square `A -f-> B -β-> D`, `A -α-> C -g-> D` as
/// `(A, B, C, D) = X(∅), X({1}), X({2}), X({1,2})`.
struct Square<'a> {
    x: &'a CubicalDiagram,
}

impl Square<'_> {
    fn v(&self, bits: usize) -> &ChainComplex {
        self.x.vertex(Subset::new(2, bits))
    }
    fn f(&self) -> &ChainMap {
        self.x.edge(Subset::new(2, 0), 0)
    }
    fn alpha(&self) -> &ChainMap {
        self.x.edge(Subset::new(2, 0), 1)
    }
    fn beta(&self) -> &ChainMap {
        self.x.edge(Subset::new(2, 1), 1)
    }
    fn g(&self) -> &ChainMap {
        self.x.edge(Subset::new(2, 2), 0)
    }
}

/// Total fiber of a square, as the subcomplex of tuples `(a, b, c, d, d')`
/// of `A_k ⊕ B_{k+1} ⊕ C_{k+1} ⊕ D_{k+2} ⊕ D_{k+1}` with `d' = β(b)`, under
/// `d(a,b,c,d,d') = (da, -fa - db, -αa - dc, gc + dd - βb, -βfa - dd')`.
///
/// The carrier is parametrized by `(a, b, c, d)`; the differential is the
/// ambient one restricted along the graph embedding, and the `d'` row is
/// checked to stay on the graph.
pub fn tfiber_square(x: &CubicalDiagram) -> Result<ChainComplex> {
    require_square(x)?;
    let ring = x.ring();
    let sq = Square { x };
    let (a, b, c, d) = (sq.v(0), sq.v(1), sq.v(2), sq.v(3));
    let beta_f = sq.beta().compose(sq.f())?;
    let ambient = |k: i64| [a.rank(k), b.rank(k + 1), c.rank(k + 1), d.rank(k + 2), d.rank(k + 1)];
    let carrier = |k: i64| [a.rank(k), b.rank(k + 1), c.rank(k + 1), d.rank(k + 2)];
    let embed = |k: i64| -> Matrix {
        let mut m = BlockBuilder::new(ring, &ambient(k), &carrier(k));
        for i in 0..4 {
            m.place_identity(i, i, 1);
        }
        if let Some(beta) = sq.beta().component_ref(k + 1) {
            m.place(4, 1, beta, 1);
        }
        m.build()
    };
    let degrees: BTreeSet<i64> = [(a, 0), (b, 1), (c, 1), (d, 2)]
        .iter()
        .flat_map(|(cx, s)| cx.degrees().map(move |k| k - s))
        .collect();
    let mut ranks = Vec::new();
    let mut diffs = Vec::new();
    for &k in &degrees {
        ranks.push((k, carrier(k).iter().sum::<usize>()));
        let mut e = BlockBuilder::new(ring, &ambient(k - 1), &ambient(k));
        let mut put = |bi, bj, m: Option<&Matrix>, s| {
            if let Some(m) = m {
                e.place(bi, bj, m, s);
            }
        };
        put(0, 0, a.diff_ref(k), 1);
        put(1, 0, sq.f().component_ref(k), -1);
        put(1, 1, b.diff_ref(k + 1), -1);
        put(2, 0, sq.alpha().component_ref(k), -1);
        put(2, 2, c.diff_ref(k + 1), -1);
        put(3, 2, sq.g().component_ref(k + 1), 1);
        put(3, 3, d.diff_ref(k + 2), 1);
        put(3, 1, sq.beta().component_ref(k + 1), -1);
        put(4, 0, beta_f.component_ref(k), -1);
        put(4, 4, d.diff_ref(k + 1), -1);
        let image = e.build().mul(&embed(k))?;
        let top: usize = carrier(k - 1).iter().sum();
        let restricted = image.submatrix(0..top, 0..image.cols());
        if embed(k - 1).mul(&restricted)? != image {
            return Err(Error::InvalidCube(format!("graph d' = β(b) not preserved in degree {k}")));
        }
        diffs.push((k, restricted));
    }
    ChainComplex::new(ring, ranks, diffs)
}

/// The isomorphism `tfiber(X) -> ifiber(X)` dropping the determined `d'`
/// coordinate; on the `(a, b, c, d)` carrier it is the identity matrix.
pub fn tfiber_ifiber_iso(x: &CubicalDiagram) -> Result<ChainMap> {
    let t = tfiber_square(x)?;
    let i = ifiber_closed(x)?;
    let comps: Vec<(i64, Matrix)> = t
        .degrees()
        .map(|k| (k, Matrix::identity(t.ring(), t.rank(k))))
        .collect();
    ChainMap::new(t, i, comps)
}
