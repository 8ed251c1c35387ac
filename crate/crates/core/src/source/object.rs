use std::collections::BTreeSet;
use std::sync::{Arc, OnceLock};

use crate::chain::constructions::cylinder_map_between;
use crate::chain::{cylinder, ChainComplex, ChainMap};
use crate::error::{Error, Result};
use crate::linalg::{BlockBuilder, Matrix, Ring};

/// The factorization `A -η-> B` every object lives under.
#[derive(Debug)]
pub struct EtaContext {
    a: ChainComplex,
    b: ChainComplex,
    eta: ChainMap,
    terminal: OnceLock<EtaObject>,
}

impl PartialEq for EtaContext {
    fn eq(&self, other: &Self) -> bool {
        self.eta == other.eta
    }
}

impl Eq for EtaContext {}

pub type Context = Arc<EtaContext>;

impl EtaContext {
    pub fn new(eta: ChainMap) -> Result<Context> {
        if let Some(v) = eta.validate().first() {
            return Err(Error::InvalidMap(format!("η: {} (degree {})", v.what, v.degree)));
        }
        Ok(Arc::new(EtaContext {
            a: eta.source().clone(),
            b: eta.target().clone(),
            eta,
            terminal: OnceLock::new(),
        }))
    }

    /// The based context `0 -> B`.
    pub fn based(b: ChainComplex) -> Context {
        let a = ChainComplex::zero(b.ring());
        EtaContext::new(ChainMap::zero(&a, &b)).expect("zero map is a chain map")
    }

    pub fn ring(&self) -> Ring {
        self.a.ring()
    }

    pub fn a(&self) -> &ChainComplex {
        &self.a
    }

    pub fn b(&self) -> &ChainComplex {
        &self.b
    }

    pub fn eta(&self) -> &ChainMap {
        &self.eta
    }

    pub fn is_based(&self) -> bool {
        self.a.is_zero()
    }
}

/// `A -unit-> X -aug-> B` with `aug ∘ unit = η`.
///
/// Objects whose unit is `[I; 0]` in every degree are *standard*: then
/// `X = A ⊕ C` degreewise, `d_X = [[d_A, h], [0, d_C]]`, and `X` is a
/// cofibrant object under `A` (all complexes here are bounded and free).
#[derive(Clone, Debug)]
pub struct EtaObject {
    ctx: Context,
    complex: ChainComplex,
    unit: ChainMap,
    aug: ChainMap,
    standard: bool,
}

impl PartialEq for EtaObject {
    fn eq(&self, other: &Self) -> bool {
        self.complex == other.complex && self.unit == other.unit && self.aug == other.aug
    }
}

impl Eq for EtaObject {}

fn same_context(a: &Context, b: &Context) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl EtaObject {
    /// Skips the chain-map and `aug ∘ unit = η` checks; for constructions
    /// that satisfy them by design.
    pub(crate) fn trusted(ctx: &Context, unit: ChainMap, aug: ChainMap) -> EtaObject {
        let standard = is_standard_unit(&unit);
        EtaObject {
            ctx: ctx.clone(),
            complex: unit.target().clone(),
            unit,
            aug,
            standard,
        }
    }

    pub fn new(ctx: &Context, unit: ChainMap, aug: ChainMap) -> Result<EtaObject> {
        if unit.source() != ctx.a() || aug.target() != ctx.b() || unit.target() != aug.source() {
            return Err(Error::InvalidObject("unit/augmentation ends do not match the context".into()));
        }
        for (name, f) in [("unit", &unit), ("augmentation", &aug)] {
            if let Some(v) = f.validate().first() {
                return Err(Error::InvalidObject(format!("{name}: {} (degree {})", v.what, v.degree)));
            }
        }
        if aug.compose(&unit)? != *ctx.eta() {
            return Err(Error::InvalidObject("augmentation ∘ unit ≠ η".into()));
        }
        let standard = is_standard_unit(&unit);
        Ok(EtaObject {
            ctx: ctx.clone(),
            complex: unit.target().clone(),
            unit,
            aug,
            standard,
        })
    }

    /// `A` itself, the initial object.
    pub fn initial(ctx: &Context) -> EtaObject {
        EtaObject::new(ctx, ChainMap::identity(ctx.a()), ctx.eta().clone()).expect("initial object")
    }

    /// `B` with `unit = η`, `aug = id`; not cofibrant unless `η` is split.
    pub fn terminal_raw(ctx: &Context) -> EtaObject {
        EtaObject::new(ctx, ctx.eta().clone(), ChainMap::identity(ctx.b())).expect("terminal object")
    }

    /// The cofibrant terminal replacement `B^c = Cyl(η)`.
    pub fn terminal(ctx: &Context) -> EtaObject {
        ctx.terminal
            .get_or_init(|| cofibrant_replace(&EtaObject::terminal_raw(ctx)).expect("cylinder of η").object)
            .clone()
    }

    /// `A ⊕ C` with the split unit, zero twist and augmentation `η` on `A`
    /// and zero on `C`.
    pub fn free(ctx: &Context, c: &ChainComplex) -> Result<EtaObject> {
        let sum = crate::chain::direct_sum(ctx.ring(), &[ctx.a().clone(), c.clone()])?;
        let aug = ctx.eta().compose(&sum.projections[0])?;
        EtaObject::new(ctx, sum.injections[0].clone(), aug)
    }

    pub fn context(&self) -> &Context {
        &self.ctx
    }

    pub fn ring(&self) -> Ring {
        self.complex.ring()
    }

    pub fn complex(&self) -> &ChainComplex {
        &self.complex
    }

    pub fn unit(&self) -> &ChainMap {
        &self.unit
    }

    pub fn aug(&self) -> &ChainMap {
        &self.aug
    }

    pub fn is_standard(&self) -> bool {
        self.standard
    }

    pub(crate) fn require_standard(&self, op: &str) -> Result<()> {
        if self.standard {
            Ok(())
        } else {
            Err(Error::Precondition(format!("{op} needs cofibrant (split) objects")))
        }
    }

    /// `rank A_k`, the width of the `A` part in degree `k`.
    pub(crate) fn a_rank(&self, k: i64) -> usize {
        self.ctx.a().rank(k)
    }

    /// `rank C_k` for a standard object.
    pub(crate) fn c_rank(&self, k: i64) -> usize {
        self.complex.rank(k) - self.a_rank(k)
    }

    /// Degrees where the complementary part `C` can be nonzero.
    pub(crate) fn c_degrees(&self) -> BTreeSet<i64> {
        self.complex.degrees().filter(|&k| self.c_rank(k) > 0).collect()
    }

    /// The twisting map `h_k : C_k -> A_{k-1}`.
    pub(crate) fn twist(&self, k: i64) -> Matrix {
        let d = self.complex.diff(k);
        d.submatrix(0..self.a_rank(k - 1), self.a_rank(k)..d.cols())
    }

    /// `d^C_k : C_k -> C_{k-1}`.
    pub(crate) fn c_diff(&self, k: i64) -> Matrix {
        let d = self.complex.diff(k);
        d.submatrix(self.a_rank(k - 1)..d.rows(), self.a_rank(k)..d.cols())
    }

    /// `aug_k` restricted to `C_k`.
    pub(crate) fn c_aug(&self, k: i64) -> Matrix {
        let m = self.aug.component(k);
        m.submatrix(0..m.rows(), self.a_rank(k)..m.cols())
    }
}

fn is_standard_unit(unit: &ChainMap) -> bool {
    let (a, x) = (unit.source(), unit.target());
    let degrees: BTreeSet<i64> = a.degrees().chain(x.degrees()).collect();
    degrees.into_iter().all(|k| {
        let (ra, rx) = (a.rank(k), x.rank(k));
        if rx < ra {
            return false;
        }
        let mut b = BlockBuilder::new(a.ring(), &[ra, rx - ra], &[ra]);
        b.place_identity(0, 0, 1);
        unit.component(k) == b.build()
    })
}

/// A map of complexes commuting with units and augmentations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EtaMorphism {
    source: EtaObject,
    target: EtaObject,
    map: ChainMap,
}

impl EtaMorphism {
    pub fn new(source: &EtaObject, target: &EtaObject, map: ChainMap) -> Result<EtaMorphism> {
        if !same_context(&source.ctx, &target.ctx) {
            return Err(Error::InvalidObject("morphism between different contexts".into()));
        }
        if map.source() != source.complex() || map.target() != target.complex() {
            return Err(Error::InvalidMap("morphism ends do not match its objects".into()));
        }
        if let Some(v) = map.validate().first() {
            return Err(Error::InvalidMap(format!("{} (degree {})", v.what, v.degree)));
        }
        if map.compose(source.unit())? != *target.unit() {
            return Err(Error::InvalidMap("morphism does not preserve the unit".into()));
        }
        if target.aug().compose(&map)? != *source.aug() {
            return Err(Error::InvalidMap("morphism does not preserve the augmentation".into()));
        }
        Ok(EtaMorphism {
            source: source.clone(),
            target: target.clone(),
            map,
        })
    }

    /// Already-checked constructor for maps built by this crate.
    pub(crate) fn trusted(source: &EtaObject, target: &EtaObject, map: ChainMap) -> EtaMorphism {
        debug_assert!(map.validate().is_empty());
        EtaMorphism {
            source: source.clone(),
            target: target.clone(),
            map,
        }
    }

    pub fn identity(x: &EtaObject) -> EtaMorphism {
        EtaMorphism::trusted(x, x, ChainMap::identity(x.complex()))
    }

    pub fn source(&self) -> &EtaObject {
        &self.source
    }

    pub fn target(&self) -> &EtaObject {
        &self.target
    }

    pub fn map(&self) -> &ChainMap {
        &self.map
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &EtaMorphism) -> Result<EtaMorphism> {
        if first.target != self.source {
            return Err(Error::InvalidMap("composition: target/source mismatch".into()));
        }
        Ok(EtaMorphism::trusted(&first.source, &self.target, self.map.compose(&first.map)?))
    }

    /// The off-diagonal block `φ_k : C^X_k -> A_k` of a map of standard objects.
    pub(crate) fn phi(&self, k: i64) -> Matrix {
        let m = self.map.component(k);
        m.submatrix(0..self.target.a_rank(k), self.source.a_rank(k)..m.cols())
    }

    /// The block `ψ_k : C^X_k -> C^Y_k`.
    pub(crate) fn psi(&self, k: i64) -> Matrix {
        let m = self.map.component(k);
        m.submatrix(self.target.a_rank(k)..m.rows(), self.source.a_rank(k)..m.cols())
    }

    /// Both ends standard and `f(a, c) = (a, ψ c)`.
    pub fn is_strict(&self) -> bool {
        self.source.standard
            && self.target.standard
            && self.source.c_degrees().into_iter().all(|k| self.phi(k).is_zero())
    }
}

/// A cofibrant replacement `q : X' -> X`.
#[derive(Clone, Debug)]
pub struct Replacement {
    pub object: EtaObject,
    pub q: EtaMorphism,
}

/// `X' = Cyl(unit) = A ⊕ (A[-1] ⊕ X)`, with `q` the cylinder projection
/// (a quasi-isomorphism). For based contexts this is `X` itself, up to the
/// empty `A` summands.
pub fn cofibrant_replace(x: &EtaObject) -> Result<Replacement> {
    let cyl = cylinder(x.unit())?;
    let aug = x.aug().compose(&cyl.projection)?;
    let object = EtaObject::trusted(x.context(), cyl.source_inclusion, aug);
    let q = EtaMorphism::trusted(&object, x, cyl.projection);
    Ok(Replacement { object, q })
}

/// `x` if it is already standard, otherwise its cylinder replacement.
pub fn ensure_cofibrant(x: &EtaObject) -> Result<EtaObject> {
    if x.is_standard() {
        Ok(x.clone())
    } else {
        Ok(cofibrant_replace(x)?.object)
    }
}

/// The morphism between [`ensure_cofibrant`] replacements.
///
/// Maps of standard objects must be strict; maps of non-standard objects go
/// to `Cyl(f) : (a, a', x) ↦ (a, a', f x)`. Mixed ends are rejected.
pub fn ensure_cofibrant_morphism(f: &EtaMorphism) -> Result<EtaMorphism> {
    match (f.source.is_standard(), f.target.is_standard()) {
        (true, true) if f.is_strict() => Ok(f.clone()),
        (true, true) => Err(Error::Precondition("map of cofibrant objects is not strict".into())),
        (false, false) => {
            let s = ensure_cofibrant(&f.source)?;
            let t = ensure_cofibrant(&f.target)?;
            let id_a = ChainMap::identity(f.source.context().a());
            let m = cylinder_map_between(f.source.unit(), f.target.unit(), &id_a, &f.map)?;
            Ok(EtaMorphism::trusted(&s, &t, m.with_ends(s.complex().clone(), t.complex().clone())?))
        }
        _ => Err(Error::Precondition(
            "cannot replace a map between a cofibrant and a non-cofibrant object".into(),
        )),
    }
}

/// The unique strict map `g_X : X -> B^c`, `(a, c) ↦ (a, h c, aug(0, c))`.
pub fn terminal_map(x: &EtaObject) -> Result<EtaMorphism> {
    x.require_standard("terminal_map")?;
    let t = EtaObject::terminal(x.context());
    let ring = x.ring();
    let a = x.context().a();
    let b = x.context().b();
    let mut comps = Vec::new();
    for k in x.complex().degrees() {
        let mut m = BlockBuilder::new(ring, &[a.rank(k), a.rank(k - 1), b.rank(k)], &[a.rank(k), x.c_rank(k)]);
        m.place_identity(0, 0, 1);
        m.place(1, 1, &x.twist(k), 1);
        m.place(2, 1, &x.c_aug(k), 1);
        comps.push((k, m.build()));
    }
    let map = ChainMap::new(x.complex().clone(), t.complex().clone(), comps)?;
    Ok(EtaMorphism::trusted(x, &t, map))
}
