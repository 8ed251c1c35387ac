//! The diagonal cross effect `⊥_n H(X) = cr_n H(X, .., X)` as a functor,
//! its counit `ε`, comultiplication `δ`, and natural transformations
//! between iterates.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock, Weak};

use crate::calculus::matrix01::{enumerate_m, sgn2};
use crate::calculus::tcube::{multi_cube, replace_by_b};
use crate::chain::{ChainComplex, ChainMap};
use crate::cube::{ifiber_closed, ifiber_map_between, ifiber_sizes, CubeMap, CubicalDiagram, Subset};
use crate::error::Result;
use crate::linalg::BlockBuilder;
use crate::source::{
    copair, coproduct_in, ensure_cofibrant, ensure_cofibrant_morphism, fold, AfterCoproduct, Context, EtaMorphism,
    EtaObject, Functor, FunctorRef,
};

struct Evaluated {
    cube: CubicalDiagram,
    fiber: ChainComplex,
}

/// `⊥_n H`. Instances are shared per `(H, n, context)`, and each keeps the
/// cubes it has evaluated, so iterates reuse the work done one level down.
pub struct Perp {
    pub inner: FunctorRef,
    pub n: usize,
    pub ctx: Context,
    cache: Mutex<Vec<(EtaObject, Arc<Evaluated>)>>,
}

impl fmt::Debug for Perp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Perp").field("inner", &self.inner).field("n", &self.n).finish()
    }
}

type Key = (usize, usize, usize);

fn registry() -> &'static Mutex<HashMap<Key, Weak<Perp>>> {
    static PERPS: OnceLock<Mutex<HashMap<Key, Weak<Perp>>>> = OnceLock::new();
    PERPS.get_or_init(Default::default)
}

fn same_object(a: &EtaObject, b: &EtaObject) -> bool {
    a.complex() == b.complex() && a.unit() == b.unit() && a.aug() == b.aug()
}

impl Perp {
    /// The shared instance for `(inner, n, ctx)`; keyed on the identity of
    /// the `Arc`s, which the instance keeps alive.
    pub fn shared(inner: FunctorRef, n: usize, ctx: &Context) -> Arc<Perp> {
        let key = (Arc::as_ptr(&inner) as *const () as usize, n, Arc::as_ptr(ctx) as usize);
        let mut reg = registry().lock().unwrap();
        if let Some(p) = reg.get(&key).and_then(Weak::upgrade) {
            return p;
        }
        reg.retain(|_, w| w.strong_count() > 0);
        let p = Arc::new(Perp {
            inner,
            n,
            ctx: ctx.clone(),
            cache: Mutex::new(Vec::new()),
        });
        reg.insert(key, Arc::downgrade(&p));
        p
    }

    pub fn new(inner: FunctorRef, n: usize, ctx: &Context) -> FunctorRef {
        Perp::shared(inner, n, ctx)
    }

    /// `⊥^q H`, with `⊥^0 H = H`.
    pub fn iterate(h: &FunctorRef, n: usize, ctx: &Context, q: usize) -> FunctorRef {
        (0..q).fold(h.clone(), |f, _| Perp::new(f, n, ctx))
    }

    fn summed(&self) -> AfterCoproduct {
        AfterCoproduct {
            inner: self.inner.clone(),
            n: self.n,
            ctx: self.ctx.clone(),
        }
    }

    fn eval(&self, x: &EtaObject) -> Result<Arc<Evaluated>> {
        let x = ensure_cofibrant(x)?;
        if let Some((_, e)) = self.cache.lock().unwrap().iter().find(|(y, _)| same_object(&x, y)) {
            return Ok(e.clone());
        }
        let cube = multi_cube(&self.summed(), &vec![x.clone(); self.n], 1)?;
        let fiber = ifiber_closed(&cube)?;
        let e = Arc::new(Evaluated { cube, fiber });
        self.cache.lock().unwrap().push((x, e.clone()));
        Ok(e)
    }

    /// The cube `U ↦ H(⊔ΔX(U))` whose ifiber is `⊥_n H(X)`.
    pub fn cube(&self, x: &EtaObject) -> Result<CubicalDiagram> {
        Ok(self.eval(x)?.cube.clone())
    }

    /// Maps of cubes given vertexwise, between the cubes at `x` of two
    /// instances.
    fn fiber_map(src: &Perp, tgt: &Perp, x: &EtaObject, y: &EtaObject, comps: Vec<ChainMap>) -> Result<ChainMap> {
        let (s, t) = (src.eval(x)?, tgt.eval(y)?);
        let f = CubeMap {
            source: s.cube.clone(),
            target: t.cube.clone(),
            comps,
        };
        ifiber_map_between(&f, s.fiber.clone(), t.fiber.clone())
    }
}

impl Functor for Perp {
    fn name(&self) -> String {
        format!("perp{}({})", self.n, self.inner.name())
    }
    fn apply(&self, xs: &[EtaObject]) -> Result<ChainComplex> {
        crate::source::check_arity(self, xs.len())?;
        Ok(self.eval(&xs[0])?.fiber.clone())
    }
    fn apply_morphism(&self, fs: &[EtaMorphism]) -> Result<ChainMap> {
        crate::source::check_arity(self, fs.len())?;
        let f = ensure_cofibrant_morphism(&fs[0])?;
        let b = EtaMorphism::identity(&EtaObject::terminal(&self.ctx));
        let summed = self.summed();
        let comps = Subset::all(self.n)
            .map(|u| {
                let slots: Vec<EtaMorphism> =
                    (0..self.n).map(|i| if u.contains(i) { b.clone() } else { f.clone() }).collect();
                summed.apply_morphism(&slots)
            })
            .collect::<Result<Vec<_>>>()?;
        Perp::fiber_map(self, self, f.source(), f.target(), comps)
    }
}

/// `⊔ΔX(U)`: the `n`-fold coproduct of `X` with the slots in `U` replaced.
pub fn diagonal_coproduct(ctx: &Context, x: &EtaObject, n: usize, u: Subset) -> Result<EtaObject> {
    let x = ensure_cofibrant(x)?;
    Ok(coproduct_in(ctx, &replace_by_b(&vec![x; n], u))?.object)
}

/// A natural transformation between functors of one variable.
pub trait NatTrans: Send + Sync + fmt::Debug {
    fn source(&self) -> FunctorRef;
    fn target(&self) -> FunctorRef;
    fn at(&self, x: &EtaObject) -> Result<ChainMap>;
}

pub type NatRef = Arc<dyn NatTrans>;

/// `ε : ⊥_n H -> H`, `H(fold) ∘ γ`.
#[derive(Debug)]
pub struct Epsilon {
    pub inner: FunctorRef,
    pub n: usize,
    pub ctx: Context,
}

impl NatTrans for Epsilon {
    fn source(&self) -> FunctorRef {
        Perp::new(self.inner.clone(), self.n, &self.ctx)
    }
    fn target(&self) -> FunctorRef {
        self.inner.clone()
    }
    fn at(&self, x: &EtaObject) -> Result<ChainMap> {
        let x = ensure_cofibrant(x)?;
        let e = Perp::shared(self.inner.clone(), self.n, &self.ctx).eval(&x)?;
        let (cube, src) = (&e.cube, e.fiber.clone());
        let base = cube.vertex(Subset::empty(self.n));
        let mut comps = Vec::new();
        for k in src.degrees() {
            let mut b = BlockBuilder::new(src.ring(), &[base.rank(k)], &ifiber_sizes(cube, k));
            b.place_identity(0, 0, 1);
            comps.push((k, b.build()));
        }
        let gamma = ChainMap::new(src, base.clone(), comps)?;
        let folded = self.inner.apply_morphism(&[fold(&x, self.n)?])?;
        folded.compose(&gamma)
    }
}

/// `κ_{U,V} : ⊔ΔX(U ∪ V) -> ⊔Δ(⊔ΔX(U))(V)` for disjoint `U`, `V`: slot
/// `j ∉ V` goes through the inner then the outer `j`-th inclusion, slot
/// `j ∈ V` is the identity of `B^c` into the outer slot `j`.
pub fn kappa(ctx: &Context, x: &EtaObject, n: usize, u: Subset, v: Subset) -> Result<EtaMorphism> {
    let x = ensure_cofibrant(x)?;
    let slots = replace_by_b(&vec![x.clone(); n], Subset::new(n, u.bits | v.bits));
    let inner = coproduct_in(ctx, &replace_by_b(&vec![x; n], u))?;
    let outer = coproduct_in(ctx, &replace_by_b(&vec![inner.object.clone(); n], v))?;
    let maps = (0..n)
        .map(|j| {
            if v.contains(j) {
                Ok(outer.inclusions[j].map().clone())
            } else {
                outer.inclusions[j].map().compose(inner.inclusions[j].map())
            }
        })
        .collect::<Result<Vec<_>>>()?;
    copair(&slots, &outer.object, &maps)
}

/// `δ : ⊥_n H -> ⊥_n ⊥_n H`. The summand `T` of `⊥_n H(X)` goes to the
/// summands `(V inner, U outer)` with `V ⊔ U = T`, by `(-1)^{sgn} H(κ_{U,V})`
/// where the sign matrix has rows `(V, U)`.
#[derive(Debug)]
pub struct Delta {
    pub inner: FunctorRef,
    pub n: usize,
    pub ctx: Context,
}

impl NatTrans for Delta {
    fn source(&self) -> FunctorRef {
        Perp::new(self.inner.clone(), self.n, &self.ctx)
    }
    fn target(&self) -> FunctorRef {
        Perp::new(self.source(), self.n, &self.ctx)
    }
    fn at(&self, x: &EtaObject) -> Result<ChainMap> {
        let n = self.n;
        let x = ensure_cofibrant(x)?;
        let one = Perp::shared(self.inner.clone(), n, &self.ctx);
        let two = Perp::shared(one.clone(), n, &self.ctx);
        let (src_eval, outer) = (one.eval(&x)?, two.eval(&x)?);
        let src_cube = &src_eval.cube;
        let inner_cubes = Subset::all(n)
            .map(|u| Ok(one.eval(&diagonal_coproduct(&self.ctx, &x, n, u)?)?.cube.clone()))
            .collect::<Result<Vec<_>>>()?;
        let mut blocks = Vec::new();
        for t in Subset::all(n) {
            for m in enumerate_m(t, 2) {
                let (v, u) = (Subset::new(n, m.rows[0]), Subset::new(n, m.rows[1]));
                let h = self.inner.apply_morphism(&[kappa(&self.ctx, &x, n, u, v)?])?;
                let sign = if sgn2(&m) % 2 == 0 { 1 } else { -1 };
                blocks.push((t, u, v, sign, h));
            }
        }
        let (src, tgt) = (src_eval.fiber.clone(), outer.fiber.clone());
        let ring = src.ring();
        let mut comps = Vec::new();
        for k in src.degrees() {
            // rows: outer summands U, each split into inner summands V
            let mut rows = Vec::new();
            for u in Subset::all(n) {
                let deg = k + u.len() as i64;
                rows.extend(ifiber_sizes(&inner_cubes[u.bits], deg));
            }
            let mut b = BlockBuilder::new(ring, &rows, &ifiber_sizes(src_cube, k));
            for (t, u, v, sign, h) in &blocks {
                if let Some(m) = h.component_ref(k + t.len() as i64) {
                    b.place((u.bits << n) | v.bits, t.bits, m, *sign);
                }
            }
            comps.push((k, b.build()));
        }
        ChainMap::new(src, tgt, comps)
    }
}

/// `⊥_n θ`, acting on each vertex of the cube by `θ` at `⊔ΔX(U)`.
#[derive(Debug)]
pub struct PerpNat {
    pub inner: NatRef,
    pub n: usize,
    pub ctx: Context,
}

impl NatTrans for PerpNat {
    fn source(&self) -> FunctorRef {
        Perp::new(self.inner.source(), self.n, &self.ctx)
    }
    fn target(&self) -> FunctorRef {
        Perp::new(self.inner.target(), self.n, &self.ctx)
    }
    fn at(&self, x: &EtaObject) -> Result<ChainMap> {
        let x = ensure_cofibrant(x)?;
        let ps = Perp::shared(self.inner.source(), self.n, &self.ctx);
        let pt = Perp::shared(self.inner.target(), self.n, &self.ctx);
        let comps = Subset::all(self.n)
            .map(|u| self.inner.at(&diagonal_coproduct(&self.ctx, &x, self.n, u)?))
            .collect::<Result<Vec<_>>>()?;
        Perp::fiber_map(&ps, &pt, &x, &x, comps)
    }
}

/// `⊥_n^i θ`.
pub fn perp_power(theta: NatRef, n: usize, ctx: &Context, i: usize) -> NatRef {
    (0..i).fold(theta, |t, _| Arc::new(PerpNat { inner: t, n, ctx: ctx.clone() }))
}

/// `⊥_n H(X^cof)`.
pub fn perp_n(h: &FunctorRef, n: usize, ctx: &Context, x: &EtaObject) -> Result<ChainComplex> {
    Perp::shared(h.clone(), n, ctx).apply(&[x.clone()])
}

pub fn epsilon(h: &FunctorRef, n: usize, ctx: &Context, x: &EtaObject) -> Result<ChainMap> {
    Epsilon { inner: h.clone(), n, ctx: ctx.clone() }.at(x)
}

pub fn delta(h: &FunctorRef, n: usize, ctx: &Context, x: &EtaObject) -> Result<ChainMap> {
    Delta { inner: h.clone(), n, ctx: ctx.clone() }.at(x)
}

/// Chain-map checks for `ε` and `δ`, the counit laws
/// `ε_{⊥H} ∘ δ = id = ⊥ε ∘ δ` and coassociativity `δ_{⊥H} ∘ δ = ⊥δ ∘ δ`.
pub fn verify_perp_cotriple(h: &FunctorRef, n: usize, ctx: &Context, x: &EtaObject) -> Result<Vec<String>> {
    use crate::calculus::cotriple::first_mismatch;
    let mut out = Vec::new();
    let eps: NatRef = Arc::new(Epsilon { inner: h.clone(), n, ctx: ctx.clone() });
    let del: NatRef = Arc::new(Delta { inner: h.clone(), n, ctx: ctx.clone() });
    let e = eps.at(x)?;
    let d = del.at(x)?;
    for (name, f) in [("ε", &e), ("δ", &d)] {
        out.extend(f.validate().into_iter().map(|v| format!("{name}: {} (degree {})", v.what, v.degree)));
    }
    let id = ChainMap::identity(d.source());
    let perp = Perp::new(h.clone(), n, ctx);
    let left = Epsilon { inner: perp.clone(), n, ctx: ctx.clone() }.at(x)?.compose(&d)?;
    if let Some(m) = first_mismatch(&left, &id) {
        out.push(format!("ε_⊥ ∘ δ ≠ id: {m}"));
    }
    let right = perp_power(eps, n, ctx, 1).at(x)?.compose(&d)?;
    if let Some(m) = first_mismatch(&right, &id) {
        out.push(format!("⊥ε ∘ δ ≠ id: {m}"));
    }
    let a = Delta { inner: perp, n, ctx: ctx.clone() }.at(x)?.compose(&d)?;
    let b = perp_power(del, n, ctx, 1).at(x)?.compose(&d)?;
    if let Some(m) = first_mismatch(&a, &b) {
        out.push(format!("δ_⊥ ∘ δ ≠ ⊥δ ∘ δ: {m}"));
    }
    Ok(out)
}
