use std::fmt;
use std::sync::Arc;

use crate::chain::constructions::{hofib_map, shift_map, tensor_map};
use crate::chain::{hofib, shift, tensor, ChainComplex, ChainMap};
use crate::error::{Error, Result};
use crate::source::coproduct::{coproduct_in, coproduct_map_in};
use crate::source::object::{ensure_cofibrant, ensure_cofibrant_morphism, Context, EtaMorphism, EtaObject};
use crate::source::schur::{schur_power, schur_power_map, tensor_power, tensor_power_map, Schur};
use crate::source::sigma::{sigma_b, sigma_b_map};

/// A functor from objects under `A` over `B` (in each of `arity` slots) to
/// chain complexes.
///
/// `apply_morphism(fs)` must go from `apply(sources)` to `apply(targets)`,
/// respecting identities and composition.
pub trait Functor: Send + Sync + fmt::Debug {
    fn name(&self) -> String;

    fn arity(&self) -> usize {
        1
    }

    fn apply(&self, xs: &[EtaObject]) -> Result<ChainComplex>;

    fn apply_morphism(&self, fs: &[EtaMorphism]) -> Result<ChainMap>;
}

pub type FunctorRef = Arc<dyn Functor>;

pub fn check_arity(f: &dyn Functor, got: usize) -> Result<()> {
    if f.arity() == got {
        Ok(())
    } else {
        Err(Error::Precondition(format!("{} takes {} argument(s), got {got}", f.name(), f.arity())))
    }
}

pub fn apply1(f: &dyn Functor, x: &EtaObject) -> Result<ChainComplex> {
    f.apply(std::slice::from_ref(x))
}

pub fn apply1_morphism(f: &dyn Functor, m: &EtaMorphism) -> Result<ChainMap> {
    f.apply_morphism(std::slice::from_ref(m))
}

fn single<'a, T>(f: &dyn Functor, xs: &'a [T]) -> Result<&'a T> {
    check_arity(f, xs.len())?;
    Ok(&xs[0])
}

#[derive(Debug)]
pub struct Identity;

impl Functor for Identity {
    fn name(&self) -> String {
        "identity".into()
    }
    fn apply(&self, xs: &[EtaObject]) -> Result<ChainComplex> {
        Ok(single(self, xs)?.complex().clone())
    }
    fn apply_morphism(&self, fs: &[EtaMorphism]) -> Result<ChainMap> {
        Ok(single(self, fs)?.map().clone())
    }
}

/// `X ↦ C` for a fixed complex.
#[derive(Debug)]
pub struct Constant {
    pub value: ChainComplex,
    pub arity: usize,
}

impl Functor for Constant {
    fn name(&self) -> String {
        "constant".into()
    }
    fn arity(&self) -> usize {
        self.arity
    }
    fn apply(&self, xs: &[EtaObject]) -> Result<ChainComplex> {
        check_arity(self, xs.len())?;
        Ok(self.value.clone())
    }
    fn apply_morphism(&self, fs: &[EtaMorphism]) -> Result<ChainMap> {
        check_arity(self, fs.len())?;
        Ok(ChainMap::identity(&self.value))
    }
}

/// `X ↦ X^{⊗d}`.
#[derive(Debug)]
pub struct TensorPower(pub usize);

impl Functor for TensorPower {
    fn name(&self) -> String {
        format!("tensor:{}", self.0)
    }
    fn apply(&self, xs: &[EtaObject]) -> Result<ChainComplex> {
        tensor_power(single(self, xs)?.complex(), self.0)
    }
    fn apply_morphism(&self, fs: &[EtaMorphism]) -> Result<ChainMap> {
        tensor_power_map(single(self, fs)?.map(), self.0)
    }
}

/// `Sym^d` or `Λ^d` of the underlying complex.
#[derive(Debug)]
pub struct SchurPower(pub usize, pub Schur);

impl Functor for SchurPower {
    fn name(&self) -> String {
        match self.1 {
            Schur::Symmetric => format!("sym:{}", self.0),
            Schur::Exterior => format!("ext:{}", self.0),
        }
    }
    fn apply(&self, xs: &[EtaObject]) -> Result<ChainComplex> {
        schur_power(single(self, xs)?.complex(), self.0, self.1)
    }
    fn apply_morphism(&self, fs: &[EtaMorphism]) -> Result<ChainMap> {
        schur_power_map(single(self, fs)?.map(), self.0, self.1)
    }
}

/// `X ↦ hofib(aug : X -> B)`; reduced and linear.
#[derive(Debug)]
pub struct StructureFiber;

impl Functor for StructureFiber {
    fn name(&self) -> String {
        "structure_fiber".into()
    }
    fn apply(&self, xs: &[EtaObject]) -> Result<ChainComplex> {
        Ok(hofib(single(self, xs)?.aug())?.complex)
    }
    fn apply_morphism(&self, fs: &[EtaMorphism]) -> Result<ChainMap> {
        let f = single(self, fs)?;
        let id_b = ChainMap::identity(f.source().context().b());
        hofib_map(f.source().aug(), f.target().aug(), f.map(), &id_b)
    }
}

/// `(X_1, .., X_n) ↦ X_1 ⊗ .. ⊗ X_n`.
#[derive(Debug)]
pub struct SlotTensor(pub usize);

impl Functor for SlotTensor {
    fn name(&self) -> String {
        format!("slot_tensor:{}", self.0)
    }
    fn arity(&self) -> usize {
        self.0
    }
    fn apply(&self, xs: &[EtaObject]) -> Result<ChainComplex> {
        check_arity(self, xs.len())?;
        let mut out = xs[0].complex().clone();
        for x in &xs[1..] {
            out = tensor(&out, x.complex())?;
        }
        Ok(out)
    }
    fn apply_morphism(&self, fs: &[EtaMorphism]) -> Result<ChainMap> {
        check_arity(self, fs.len())?;
        let mut out = fs[0].map().clone();
        for f in &fs[1..] {
            out = tensor_map(&out, f.map())?;
        }
        Ok(out)
    }
}

/// `(X_1, .., X_n) ↦ H(X_1 ⊔ .. ⊔ X_n)`, coproduct of cofibrant replacements.
#[derive(Debug)]
pub struct AfterCoproduct {
    pub inner: FunctorRef,
    pub n: usize,
    pub ctx: Context,
}

impl AfterCoproduct {
    pub fn object(&self, xs: &[EtaObject]) -> Result<EtaObject> {
        check_arity(self, xs.len())?;
        let cof = xs.iter().map(ensure_cofibrant).collect::<Result<Vec<_>>>()?;
        Ok(coproduct_in(&self.ctx, &cof)?.object)
    }

    pub fn morphism(&self, fs: &[EtaMorphism]) -> Result<EtaMorphism> {
        check_arity(self, fs.len())?;
        let cof = fs.iter().map(ensure_cofibrant_morphism).collect::<Result<Vec<_>>>()?;
        coproduct_map_in(&self.ctx, &cof)
    }
}

impl Functor for AfterCoproduct {
    fn name(&self) -> String {
        format!("{}∘⊔{}", self.inner.name(), self.n)
    }
    fn arity(&self) -> usize {
        self.n
    }
    fn apply(&self, xs: &[EtaObject]) -> Result<ChainComplex> {
        apply1(&*self.inner, &self.object(xs)?)
    }
    fn apply_morphism(&self, fs: &[EtaMorphism]) -> Result<ChainMap> {
        apply1_morphism(&*self.inner, &self.morphism(fs)?)
    }
}

/// Post-composition with an endofunctor of chain complexes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ComplexOp {
    Shift(i64),
    /// `C ↦ C ⊗ C`.
    Square,
}

#[derive(Debug)]
pub struct PostCompose {
    pub inner: FunctorRef,
    pub op: ComplexOp,
}

impl Functor for PostCompose {
    fn name(&self) -> String {
        match self.op {
            ComplexOp::Shift(s) => format!("shift:{s}:{}", self.inner.name()),
            ComplexOp::Square => format!("square:{}", self.inner.name()),
        }
    }
    fn arity(&self) -> usize {
        self.inner.arity()
    }
    fn apply(&self, xs: &[EtaObject]) -> Result<ChainComplex> {
        let c = self.inner.apply(xs)?;
        match self.op {
            ComplexOp::Shift(s) => Ok(shift(&c, s)),
            ComplexOp::Square => tensor(&c, &c),
        }
    }
    fn apply_morphism(&self, fs: &[EtaMorphism]) -> Result<ChainMap> {
        let f = self.inner.apply_morphism(fs)?;
        match self.op {
            ComplexOp::Shift(s) => Ok(shift_map(&f, s)),
            ComplexOp::Square => tensor_map(&f, &f),
        }
    }
}

/// `F ∘ Σ_B`.
#[derive(Debug)]
pub struct AfterSigma(pub FunctorRef);

impl Functor for AfterSigma {
    fn name(&self) -> String {
        format!("sigma_then:{}", self.0.name())
    }
    fn apply(&self, xs: &[EtaObject]) -> Result<ChainComplex> {
        apply1(&*self.0, &sigma_b(single(self, xs)?)?)
    }
    fn apply_morphism(&self, fs: &[EtaMorphism]) -> Result<ChainMap> {
        apply1_morphism(&*self.0, &sigma_b_map(single(self, fs)?)?)
    }
}

/// Parses `identity`, `constant`, `constant_b`, `tensor:D`, `sym:D`,
/// `ext:D`, `structure_fiber`, `slot_tensor:N`, `square:F`, `shift:S:F`
/// and `sigma_then:F`.
pub fn functor_by_name(spec: &str, ctx: &Context) -> Result<FunctorRef> {
    let bad = || Error::Parse(format!("unknown functor {spec:?}"));
    let num = |s: &str| s.parse::<usize>().map_err(|_| bad());
    let (head, rest) = match spec.split_once(':') {
        Some((h, r)) => (h, Some(r)),
        None => (spec, None),
    };
    Ok(match (head, rest) {
        ("identity", None) => Arc::new(Identity),
        ("constant", None) => Arc::new(Constant {
            value: ChainComplex::concentrated(ctx.ring(), 0, 1),
            arity: 1,
        }),
        ("constant_b", None) => Arc::new(Constant {
            value: ctx.b().clone(),
            arity: 1,
        }),
        ("tensor", Some(d)) => Arc::new(TensorPower(num(d)?)),
        ("sym", Some(d)) => Arc::new(SchurPower(num(d)?, Schur::Symmetric)),
        ("ext", Some(d)) => Arc::new(SchurPower(num(d)?, Schur::Exterior)),
        ("structure_fiber", None) => Arc::new(StructureFiber),
        ("slot_tensor", Some(n)) if num(n)? >= 1 => Arc::new(SlotTensor(num(n)?)),
        ("square", Some(f)) => Arc::new(PostCompose {
            inner: functor_by_name(f, ctx)?,
            op: ComplexOp::Square,
        }),
        ("shift", Some(r)) => {
            let (s, f) = r.split_once(':').ok_or_else(bad)?;
            Arc::new(PostCompose {
                inner: functor_by_name(f, ctx)?,
                op: ComplexOp::Shift(s.parse().map_err(|_| bad())?),
            })
        }
        ("sigma_then", Some(f)) => Arc::new(AfterSigma(functor_by_name(f, ctx)?)),
        _ => return Err(bad()),
    })
}
