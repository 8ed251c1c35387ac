use std::collections::BTreeSet;

use crate::chain::{ChainComplex, ChainMap};
use crate::error::{Error, Result};
use crate::linalg::{BlockBuilder, Matrix, Ring};

fn sign(s: i64) -> i64 {
    if s.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// Degrees `k` for which any of `parts(k)` can be nonzero, given the supports
/// of the pieces and their offsets.
fn support_of(pieces: &[(&ChainComplex, i64)]) -> BTreeSet<i64> {
    pieces
        .iter()
        .flat_map(|(c, shift)| c.degrees().map(move |k| k + shift))
        .collect()
}

/// `(shift(X, s))_k = X_{k-s}` with differential `(-1)^s d`.
///
/// `Ω` is `shift(X, -1)`, so `(ΩX)_k = X_{k+1}`.
pub fn shift(x: &ChainComplex, s: i64) -> ChainComplex {
    let ranks = x.ranks().iter().map(|(&k, &r)| (k + s, r));
    let diffs = x.stored_diffs().map(|(k, m)| (k + s, m.scale_i64(sign(s))));
    ChainComplex::new(x.ring(), ranks, diffs).expect("shift preserves shapes")
}

/// The same matrices viewed as a map `shift(X, s) -> shift(Y, s)`.
pub fn shift_map(f: &ChainMap, s: i64) -> ChainMap {
    let comps = f.stored_components().map(|(k, m)| (k + s, m.clone()));
    ChainMap::new(shift(f.source(), s), shift(f.target(), s), comps).expect("shift preserves shapes")
}

/// `Ω` applied `m` times.
pub fn loops(x: &ChainComplex, m: i64) -> ChainComplex {
    shift(x, -m)
}

#[derive(Clone, Debug)]
pub struct DirectSum {
    pub complex: ChainComplex,
    pub injections: Vec<ChainMap>,
    pub projections: Vec<ChainMap>,
}

/// Block-diagonal direct sum; summands concatenated in the given order.
pub fn direct_sum(ring: Ring, xs: &[ChainComplex]) -> Result<DirectSum> {
    for x in xs {
        ring.check_same(x.ring())?;
    }
    let degrees: BTreeSet<i64> = xs.iter().flat_map(|x| x.degrees()).collect();
    let sizes = |k: i64| xs.iter().map(|x| x.rank(k)).collect::<Vec<_>>();
    let ranks: Vec<(i64, usize)> = degrees.iter().map(|&k| (k, sizes(k).iter().sum())).collect();
    let mut diffs = Vec::new();
    for &k in &degrees {
        let mut b = BlockBuilder::new(ring, &sizes(k - 1), &sizes(k));
        let mut any = false;
        for (i, x) in xs.iter().enumerate() {
            if let Some(m) = x.diff_ref(k) {
                b.place(i, i, m, 1);
                any = true;
            }
        }
        if any {
            diffs.push((k, b.build()));
        }
    }
    let complex = ChainComplex::new(ring, ranks, diffs)?;
    let mut injections = Vec::with_capacity(xs.len());
    let mut projections = Vec::with_capacity(xs.len());
    for (i, x) in xs.iter().enumerate() {
        let mut inj = Vec::new();
        let mut proj = Vec::new();
        for k in x.degrees() {
            let sz = sizes(k);
            let mut b = BlockBuilder::new(ring, &sz, &[x.rank(k)]);
            b.place_identity(i, 0, 1);
            let m = b.build();
            proj.push((k, m.transpose()));
            inj.push((k, m));
        }
        injections.push(ChainMap::new(x.clone(), complex.clone(), inj)?);
        projections.push(ChainMap::new(complex.clone(), x.clone(), proj)?);
    }
    Ok(DirectSum {
        complex,
        injections,
        projections,
    })
}

/// Componentwise direct sum of maps `⊕ f_i : ⊕ X_i -> ⊕ Y_i`.
pub fn direct_sum_map(ring: Ring, fs: &[ChainMap]) -> Result<ChainMap> {
    let src: Vec<ChainComplex> = fs.iter().map(|f| f.source().clone()).collect();
    let tgt: Vec<ChainComplex> = fs.iter().map(|f| f.target().clone()).collect();
    let s = direct_sum(ring, &src)?.complex;
    let t = direct_sum(ring, &tgt)?.complex;
    let mut comps = Vec::new();
    for k in s.degrees() {
        let rs: Vec<usize> = tgt.iter().map(|c| c.rank(k)).collect();
        let cs: Vec<usize> = src.iter().map(|c| c.rank(k)).collect();
        let mut b = BlockBuilder::new(ring, &rs, &cs);
        for (i, f) in fs.iter().enumerate() {
            if let Some(m) = f.component_ref(k) {
                b.place(i, i, m, 1);
            }
        }
        comps.push((k, b.build()));
    }
    ChainMap::new(s, t, comps)
}

/// Layout of `(X ⊗ Y)_k`: blocks `X_i ⊗ Y_{k-i}` for ascending `i`, each in
/// Kronecker order.
fn tensor_blocks(x: &ChainComplex, y: &ChainComplex, k: i64) -> Vec<(i64, usize)> {
    x.degrees()
        .filter(|&i| y.rank(k - i) > 0)
        .map(|i| (i, x.rank(i) * y.rank(k - i)))
        .collect()
}

/// Koszul-signed tensor product: `d(a⊗b) = da⊗b + (-1)^{|a|} a⊗db`.
pub fn tensor(x: &ChainComplex, y: &ChainComplex) -> Result<ChainComplex> {
    let ring = x.ring();
    ring.check_same(y.ring())?;
    let degrees: BTreeSet<i64> = x
        .degrees()
        .flat_map(|i| y.degrees().map(move |j| i + j))
        .collect();
    let mut ranks = Vec::new();
    let mut diffs = Vec::new();
    for &k in &degrees {
        let src = tensor_blocks(x, y, k);
        ranks.push((k, src.iter().map(|b| b.1).sum()));
        let tgt = tensor_blocks(x, y, k - 1);
        if tgt.is_empty() {
            continue;
        }
        let mut b = BlockBuilder::new(
            ring,
            &tgt.iter().map(|b| b.1).collect::<Vec<_>>(),
            &src.iter().map(|b| b.1).collect::<Vec<_>>(),
        );
        let find = |i: i64| tgt.iter().position(|b| b.0 == i);
        for (bj, &(i, _)) in src.iter().enumerate() {
            let j = k - i;
            if let (Some(bi), Some(dx)) = (find(i - 1), x.diff_ref(i)) {
                let m = dx.kronecker(&Matrix::identity(ring, y.rank(j)))?;
                b.place(bi, bj, &m, 1);
            }
            if let (Some(bi), Some(dy)) = (find(i), y.diff_ref(j)) {
                let m = Matrix::identity(ring, x.rank(i)).kronecker(dy)?;
                b.place(bi, bj, &m, sign(i));
            }
        }
        diffs.push((k, b.build()));
    }
    ChainComplex::new(ring, ranks, diffs)
}

/// `f ⊗ g : X ⊗ Y -> X' ⊗ Y'` for degree-zero maps.
pub fn tensor_map(f: &ChainMap, g: &ChainMap) -> Result<ChainMap> {
    let ring = f.ring();
    let src = tensor(f.source(), g.source())?;
    let tgt = tensor(f.target(), g.target())?;
    let mut comps = Vec::new();
    for k in src.degrees() {
        let sb = tensor_blocks(f.source(), g.source(), k);
        let tb = tensor_blocks(f.target(), g.target(), k);
        let mut b = BlockBuilder::new(
            ring,
            &tb.iter().map(|b| b.1).collect::<Vec<_>>(),
            &sb.iter().map(|b| b.1).collect::<Vec<_>>(),
        );
        for (bj, &(i, _)) in sb.iter().enumerate() {
            let Some(bi) = tb.iter().position(|b| b.0 == i) else { continue };
            let (Some(fi), Some(gj)) = (f.component_ref(i), g.component_ref(k - i)) else { continue };
            b.place(bi, bj, &fi.kronecker(gj)?, 1);
        }
        comps.push((k, b.build()));
    }
    ChainMap::new(src, tgt, comps)
}

#[derive(Clone, Debug)]
pub struct Cone {
    pub complex: ChainComplex,
    /// `Y -> cone(f)`
    pub inclusion: ChainMap,
    /// `cone(f) -> shift(X, 1)`
    pub projection: ChainMap,
}

/// `cone(f)_k = X_{k-1} ⊕ Y_k`, `d(x, y) = (-dx, -f(x) + dy)`.
pub fn cone(f: &ChainMap) -> Result<Cone> {
    let ring = f.ring();
    let (x, y) = (f.source(), f.target());
    let degrees = support_of(&[(x, 1), (y, 0)]);
    let sizes = |k: i64| [x.rank(k - 1), y.rank(k)];
    let mut ranks = Vec::new();
    let mut diffs = Vec::new();
    for &k in &degrees {
        ranks.push((k, x.rank(k - 1) + y.rank(k)));
        let mut b = BlockBuilder::new(ring, &sizes(k - 1), &sizes(k));
        if let Some(m) = x.diff_ref(k - 1) {
            b.place(0, 0, m, -1);
        }
        if let Some(m) = f.component_ref(k - 1) {
            b.place(1, 0, m, -1);
        }
        if let Some(m) = y.diff_ref(k) {
            b.place(1, 1, m, 1);
        }
        diffs.push((k, b.build()));
    }
    let complex = ChainComplex::new(ring, ranks, diffs)?;
    let mut inc = Vec::new();
    let mut proj = Vec::new();
    for &k in &degrees {
        let mut b = BlockBuilder::new(ring, &sizes(k), &[y.rank(k)]);
        b.place_identity(1, 0, 1);
        inc.push((k, b.build()));
        let mut b = BlockBuilder::new(ring, &[x.rank(k - 1)], &sizes(k));
        b.place_identity(0, 0, 1);
        proj.push((k, b.build()));
    }
    Ok(Cone {
        inclusion: ChainMap::new(y.clone(), complex.clone(), inc)?,
        projection: ChainMap::new(complex.clone(), shift(x, 1), proj)?,
        complex,
    })
}

/// Map of cones induced by a commuting square `g ∘ a = b ∘ f`:
/// `(x, y) ↦ (a x, b y)`.
pub fn cone_map(f: &ChainMap, g: &ChainMap, a: &ChainMap, b: &ChainMap) -> Result<ChainMap> {
    let ring = f.ring();
    let src = cone(f)?.complex;
    let tgt = cone(g)?.complex;
    let mut comps = Vec::new();
    for k in src.degrees() {
        let mut bb = BlockBuilder::new(
            ring,
            &[g.source().rank(k - 1), g.target().rank(k)],
            &[f.source().rank(k - 1), f.target().rank(k)],
        );
        if let Some(m) = a.component_ref(k - 1) {
            bb.place(0, 0, m, 1);
        }
        if let Some(m) = b.component_ref(k) {
            bb.place(1, 1, m, 1);
        }
        comps.push((k, bb.build()));
    }
    ChainMap::new(src, tgt, comps)
}

#[derive(Clone, Debug)]
pub struct Cylinder {
    pub complex: ChainComplex,
    /// `X -> Cyl(f)`, `x ↦ (x, 0, 0)`
    pub source_inclusion: ChainMap,
    /// `Y -> Cyl(f)`, `y ↦ (0, 0, y)`
    pub target_inclusion: ChainMap,
    /// `Cyl(f) -> Y`, `(x, h, y) ↦ f(x) + y`
    pub projection: ChainMap,
}

/// `Cyl(f)_k = X_k ⊕ X_{k-1} ⊕ Y_k` with `d(x, h, y) = (dx + h, -dh, dy - f(h))`.
pub fn cylinder(f: &ChainMap) -> Result<Cylinder> {
    let ring = f.ring();
    let (x, y) = (f.source(), f.target());
    let degrees = support_of(&[(x, 0), (x, 1), (y, 0)]);
    let sizes = |k: i64| [x.rank(k), x.rank(k - 1), y.rank(k)];
    let mut ranks = Vec::new();
    let mut diffs = Vec::new();
    for &k in &degrees {
        ranks.push((k, sizes(k).iter().sum()));
        let mut b = BlockBuilder::new(ring, &sizes(k - 1), &sizes(k));
        if let Some(m) = x.diff_ref(k) {
            b.place(0, 0, m, 1);
        }
        b.place_identity(0, 1, 1);
        if let Some(m) = x.diff_ref(k - 1) {
            b.place(1, 1, m, -1);
        }
        if let Some(m) = f.component_ref(k - 1) {
            b.place(2, 1, m, -1);
        }
        if let Some(m) = y.diff_ref(k) {
            b.place(2, 2, m, 1);
        }
        diffs.push((k, b.build()));
    }
    let complex = ChainComplex::new(ring, ranks, diffs)?;
    let (mut si, mut ti, mut pr) = (Vec::new(), Vec::new(), Vec::new());
    for &k in &degrees {
        let mut b = BlockBuilder::new(ring, &sizes(k), &[x.rank(k)]);
        b.place_identity(0, 0, 1);
        si.push((k, b.build()));
        let mut b = BlockBuilder::new(ring, &sizes(k), &[y.rank(k)]);
        b.place_identity(2, 0, 1);
        ti.push((k, b.build()));
        let mut b = BlockBuilder::new(ring, &[y.rank(k)], &sizes(k));
        if let Some(m) = f.component_ref(k) {
            b.place(0, 0, m, 1);
        }
        b.place_identity(0, 2, 1);
        pr.push((k, b.build()));
    }
    Ok(Cylinder {
        source_inclusion: ChainMap::new(x.clone(), complex.clone(), si)?,
        target_inclusion: ChainMap::new(y.clone(), complex.clone(), ti)?,
        projection: ChainMap::new(complex.clone(), y.clone(), pr)?,
        complex,
    })
}

/// Functoriality of the cylinder in the target: for `g : Y -> Y'` with
/// `f' = g ∘ f`, the map `Cyl(f) -> Cyl(f')`, `(x, h, y) ↦ (x, h, g(y))`.
pub fn cylinder_map(f: &ChainMap, g: &ChainMap) -> Result<ChainMap> {
    let fp = g.compose(f)?;
    cylinder_map_between(f, &fp, &ChainMap::identity(f.source()), g)
}

/// Map `Cyl(f) -> Cyl(f')` induced by a commuting square
/// `f' ∘ a = b ∘ f`: `(x, h, y) ↦ (a x, a h, b y)`.
pub fn cylinder_map_between(f: &ChainMap, fp: &ChainMap, a: &ChainMap, b: &ChainMap) -> Result<ChainMap> {
    let ring = f.ring();
    let src = cylinder(f)?.complex;
    let tgt = cylinder(fp)?.complex;
    let (x, y) = (f.source(), f.target());
    let (xp, yp) = (fp.source(), fp.target());
    let mut comps = Vec::new();
    for k in src.degrees() {
        let mut bb = BlockBuilder::new(
            ring,
            &[xp.rank(k), xp.rank(k - 1), yp.rank(k)],
            &[x.rank(k), x.rank(k - 1), y.rank(k)],
        );
        if let Some(m) = a.component_ref(k) {
            bb.place(0, 0, m, 1);
        }
        if let Some(m) = a.component_ref(k - 1) {
            bb.place(1, 1, m, 1);
        }
        if let Some(m) = b.component_ref(k) {
            bb.place(2, 2, m, 1);
        }
        comps.push((k, bb.build()));
    }
    ChainMap::new(src, tgt, comps)
}

#[derive(Clone, Debug)]
pub struct PathObject {
    pub complex: ChainComplex,
    /// `U -> P(f)`, `u ↦ (u, 0, f(u))`
    pub alpha: ChainMap,
    /// `P(f) -> V`, `(u, v, v') ↦ v'`
    pub beta: ChainMap,
}

/// `P(f)_n = U_n ⊕ V_{n+1} ⊕ V_n`, `d(u, v, v') = (du, -f(u) - dv + v', dv')`.
pub fn path_object(f: &ChainMap) -> Result<PathObject> {
    let ring = f.ring();
    let (u, v) = (f.source(), f.target());
    let degrees = support_of(&[(u, 0), (v, -1), (v, 0)]);
    let sizes = |k: i64| [u.rank(k), v.rank(k + 1), v.rank(k)];
    let mut ranks = Vec::new();
    let mut diffs = Vec::new();
    for &k in &degrees {
        ranks.push((k, sizes(k).iter().sum()));
        let mut b = BlockBuilder::new(ring, &sizes(k - 1), &sizes(k));
        if let Some(m) = u.diff_ref(k) {
            b.place(0, 0, m, 1);
        }
        if let Some(m) = f.component_ref(k) {
            b.place(1, 0, m, -1);
        }
        if let Some(m) = v.diff_ref(k + 1) {
            b.place(1, 1, m, -1);
        }
        b.place_identity(1, 2, 1);
        if let Some(m) = v.diff_ref(k) {
            b.place(2, 2, m, 1);
        }
        diffs.push((k, b.build()));
    }
    let complex = ChainComplex::new(ring, ranks, diffs)?;
    let (mut al, mut be) = (Vec::new(), Vec::new());
    for &k in &degrees {
        let mut b = BlockBuilder::new(ring, &sizes(k), &[u.rank(k)]);
        b.place_identity(0, 0, 1);
        if let Some(m) = f.component_ref(k) {
            b.place(2, 0, m, 1);
        }
        al.push((k, b.build()));
        let mut b = BlockBuilder::new(ring, &[v.rank(k)], &sizes(k));
        b.place_identity(0, 2, 1);
        be.push((k, b.build()));
    }
    Ok(PathObject {
        alpha: ChainMap::new(u.clone(), complex.clone(), al)?,
        beta: ChainMap::new(complex.clone(), v.clone(), be)?,
        complex,
    })
}

#[derive(Clone, Debug)]
pub struct Fiber {
    pub complex: ChainComplex,
    /// `hofib(f) -> U`
    pub projection: ChainMap,
}

/// `hofib(f)_n = U_n ⊕ V_{n+1}`, `d(u, v) = (du, -f(u) - dv)`.
pub fn hofib(f: &ChainMap) -> Result<Fiber> {
    let ring = f.ring();
    let (u, v) = (f.source(), f.target());
    let degrees = support_of(&[(u, 0), (v, -1)]);
    let sizes = |k: i64| [u.rank(k), v.rank(k + 1)];
    let mut ranks = Vec::new();
    let mut diffs = Vec::new();
    for &k in &degrees {
        ranks.push((k, u.rank(k) + v.rank(k + 1)));
        let mut b = BlockBuilder::new(ring, &sizes(k - 1), &sizes(k));
        if let Some(m) = u.diff_ref(k) {
            b.place(0, 0, m, 1);
        }
        if let Some(m) = f.component_ref(k) {
            b.place(1, 0, m, -1);
        }
        if let Some(m) = v.diff_ref(k + 1) {
            b.place(1, 1, m, -1);
        }
        diffs.push((k, b.build()));
    }
    let complex = ChainComplex::new(ring, ranks, diffs)?;
    let mut pr = Vec::new();
    for &k in &degrees {
        let mut b = BlockBuilder::new(ring, &[u.rank(k)], &sizes(k));
        b.place_identity(0, 0, 1);
        pr.push((k, b.build()));
    }
    Ok(Fiber {
        projection: ChainMap::new(complex.clone(), u.clone(), pr)?,
        complex,
    })
}

/// Map of homotopy fibers induced by a commuting square `g ∘ a = b ∘ f`:
/// `(u, v) ↦ (a u, b v)`.
pub fn hofib_map(f: &ChainMap, g: &ChainMap, a: &ChainMap, b: &ChainMap) -> Result<ChainMap> {
    let ring = f.ring();
    let src = hofib(f)?.complex;
    let tgt = hofib(g)?.complex;
    let mut comps = Vec::new();
    for k in src.degrees() {
        let mut bb = BlockBuilder::new(
            ring,
            &[g.source().rank(k), g.target().rank(k + 1)],
            &[f.source().rank(k), f.target().rank(k + 1)],
        );
        if let Some(m) = a.component_ref(k) {
            bb.place(0, 0, m, 1);
        }
        if let Some(m) = b.component_ref(k + 1) {
            bb.place(1, 1, m, 1);
        }
        comps.push((k, bb.build()));
    }
    ChainMap::new(src, tgt, comps)
}

#[derive(Clone, Debug)]
pub struct Subcomplex {
    pub complex: ChainComplex,
    pub inclusion: ChainMap,
}

/// The kernel of a chain map as a complex, on the reduced-echelon kernel basis
/// of each component. Over Z the basis is computed over Q and must be integral.
pub fn kernel_subcomplex(g: &ChainMap) -> Result<Subcomplex> {
    let ring = g.ring();
    let work = if ring == Ring::Integers { Ring::Rationals } else { ring };
    let c = g.source();
    let mut bases = std::collections::BTreeMap::new();
    for k in c.degrees() {
        let basis = g.component(k).over(work).kernel_basis()?;
        if basis.cols() > 0 {
            bases.insert(k, basis);
        }
    }
    let basis_of = |k: i64| {
        bases
            .get(&k)
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(work, c.rank(k), 0))
    };
    let mut diffs = Vec::new();
    for (&k, kk) in &bases {
        let image = c.diff(k).over(work).mul(kk)?;
        let lower = basis_of(k - 1);
        let restricted = lower
            .solve(&image)?
            .ok_or_else(|| Error::InvalidMap("kernel is not a subcomplex".into()))?;
        diffs.push((k, restricted));
    }
    let back = |m: Matrix| -> Result<Matrix> {
        if ring == Ring::Integers && m.entries().any(|(_, _, v)| !v.is_integer()) {
            return Err(Error::Precondition("kernel basis is not integral".into()));
        }
        Ok(m.over(ring))
    };
    let ranks: Vec<(i64, usize)> = bases.iter().map(|(k, b)| (*k, b.cols())).collect();
    let diffs = diffs
        .into_iter()
        .map(|(k, m)| Ok((k, back(m)?)))
        .collect::<Result<Vec<_>>>()?;
    let complex = ChainComplex::new(ring, ranks, diffs)?;
    let incl = bases
        .into_iter()
        .map(|(k, b)| Ok((k, back(b)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(Subcomplex {
        inclusion: ChainMap::new(complex.clone(), c.clone(), incl)?,
        complex,
    })
}
