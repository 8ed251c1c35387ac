use std::sync::Arc;

use crate::calculus::{perp_power, Delta, Epsilon, NatRef, Perp};
use crate::chain::{cone, cone_map, ChainComplex, ChainMap};
use crate::error::{Error, Result};
use crate::source::{
    apply1_morphism, check_arity, ensure_cofibrant, ensure_cofibrant_morphism, Context, EtaMorphism, EtaObject, Functor,
    FunctorRef,
};
use crate::tower::simplicial::{
    augmentation_map, fat_realization, realization_map, FatRealization, SimplicialChainComplex,
};

/// `⊥_n^{*+1} F(X)` truncated at level `N`: level `q` is `⊥^{q+1} F(X)`,
/// `d_i = ⊥^i ε ⊥^{q-i}` and `s_i = ⊥^i δ ⊥^{q-i}`.
pub fn bar_construction(
    f: &FunctorRef,
    n: usize,
    ctx: &Context,
    x: &EtaObject,
    truncation: usize,
) -> Result<SimplicialChainComplex> {
    if n == 0 {
        return Err(Error::Precondition("⊥_0 is not a cotriple; use n ≥ 1".into()));
    }
    let x = ensure_cofibrant(x)?;
    let levels = (0..=truncation)
        .map(|q| Perp::iterate(f, n, ctx, q + 1).apply(&[x.clone()]))
        .collect::<Result<Vec<_>>>()?;
    let below = |j: usize| Perp::iterate(f, n, ctx, j);
    let eps = |j: usize| -> NatRef {
        Arc::new(Epsilon {
            inner: below(j),
            n,
            ctx: ctx.clone(),
        })
    };
    let del = |j: usize| -> NatRef {
        Arc::new(Delta {
            inner: below(j),
            n,
            ctx: ctx.clone(),
        })
    };
    let mut faces = vec![Vec::new()];
    for q in 1..=truncation {
        let row = (0..=q)
            .map(|i| perp_power(eps(q - i), n, ctx, i).at(&x))
            .collect::<Result<Vec<_>>>()?;
        faces.push(row);
    }
    let mut degeneracies = Vec::new();
    for q in 0..truncation {
        let row = (0..=q)
            .map(|i| perp_power(del(q - i), n, ctx, i).at(&x))
            .collect::<Result<Vec<_>>>()?;
        degeneracies.push(row);
    }
    SimplicialChainComplex::new(levels, faces, degeneracies)
}

/// `Γ_n F(X)` with `p_n : F(X) -> Γ_n F(X)`.
#[derive(Clone, Debug)]
pub struct Gamma {
    pub complex: ChainComplex,
    pub p: ChainMap,
    /// `ε̂ : |⊥_{n+1}^{*+1} F(X)| -> F(X)`.
    pub augmentation: ChainMap,
    pub realization: FatRealization,
    pub bar: SimplicialChainComplex,
}

impl Gamma {
    pub fn valid_up_to(&self) -> i64 {
        self.realization.valid_up_to()
    }
}

/// `Γ_n F = cone(ε̂ : |⊥_{n+1}^{*+1} F| -> F)`, evaluated at `X^cof`.
pub fn gamma_n(f: &FunctorRef, n: usize, ctx: &Context, x: &EtaObject, truncation: usize) -> Result<Gamma> {
    let x = ensure_cofibrant(x)?;
    let bar = bar_construction(f, n + 1, ctx, &x, truncation)?;
    let realization = fat_realization(&bar)?;
    let e = Epsilon {
        inner: f.clone(),
        n: n + 1,
        ctx: ctx.clone(),
    };
    let e = crate::calculus::NatTrans::at(&e, &x)?;
    let augmentation = augmentation_map(&realization, &bar, &e)?;
    let c = cone(&augmentation)?;
    Ok(Gamma {
        complex: c.complex,
        p: c.inclusion,
        augmentation,
        realization,
        bar,
    })
}

/// `X ↦ Γ_n F(X)` at a fixed truncation, as a functor.
#[derive(Debug)]
pub struct GammaFunctor {
    pub inner: FunctorRef,
    pub n: usize,
    pub ctx: Context,
    pub truncation: usize,
}

impl GammaFunctor {
    fn at(&self, x: &EtaObject) -> Result<Gamma> {
        gamma_n(&self.inner, self.n, &self.ctx, x, self.truncation)
    }
}

impl Functor for GammaFunctor {
    fn name(&self) -> String {
        format!("gamma{}({})", self.n, self.inner.name())
    }
    fn apply(&self, xs: &[EtaObject]) -> Result<ChainComplex> {
        check_arity(self, xs.len())?;
        Ok(self.at(&xs[0])?.complex)
    }
    fn apply_morphism(&self, fs: &[EtaMorphism]) -> Result<ChainMap> {
        check_arity(self, fs.len())?;
        let f = ensure_cofibrant_morphism(&fs[0])?;
        let (s, t) = (self.at(f.source())?, self.at(f.target())?);
        let levels = (0..=self.truncation)
            .map(|q| Perp::iterate(&self.inner, self.n + 1, &self.ctx, q + 1).apply_morphism(&[f.clone()]))
            .collect::<Result<Vec<_>>>()?;
        let r = realization_map(&s.realization, &s.bar, &t.realization, &t.bar, &levels)?;
        let base = apply1_morphism(&*self.inner, &f)?;
        cone_map(&s.augmentation, &t.augmentation, &r, &base)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::{betti_numbers, is_acyclic, is_quasi_iso};
    use crate::linalg::Ring;
    use crate::source::{functor_by_name, EtaContext};

    fn based_point() -> (Context, EtaObject) {
        let ctx = EtaContext::based(ChainComplex::zero(Ring::Rationals));
        let r = ChainComplex::concentrated(Ring::Rationals, 0, 1);
        let x = EtaObject::free(&ctx, &r).unwrap();
        (ctx, x)
    }

    #[test]
    fn zero_truncation() {
        let (ctx, x) = based_point();
        let f = functor_by_name("tensor:2", &ctx).unwrap();
        let s = bar_construction(&f, 2, &ctx, &x, 0).unwrap();
        assert_eq!(s.levels.len(), 1);
        assert_eq!(s.levels[0], Perp::new(f, 2, &ctx).apply(&[x]).unwrap());
    }

    #[test]
    fn constant_levels_are_acyclic() {
        let (ctx, x) = based_point();
        let f = functor_by_name("constant", &ctx).unwrap();
        let s = bar_construction(&f, 1, &ctx, &x, 2).unwrap();
        assert!(s.levels.iter().all(|l| is_acyclic(l).unwrap()));
        let g = gamma_n(&f, 0, &ctx, &x, 2).unwrap();
        assert!(is_quasi_iso(&g.p).unwrap());
    }

    #[test]
    fn square_identities() {
        let (ctx, x) = based_point();
        let f = functor_by_name("tensor:2", &ctx).unwrap();
        let s = bar_construction(&f, 2, &ctx, &x, 2).unwrap();
        assert_eq!(s.validate().unwrap(), Vec::<String>::new());
    }

    #[test]
    fn gamma_one() {
        let (ctx, x) = based_point();
        let id = functor_by_name("identity", &ctx).unwrap();
        let g = gamma_n(&id, 1, &ctx, &x, 3).unwrap();
        assert!(g.augmentation.validate().is_empty());
        let h = betti_numbers(&g.complex).unwrap();
        assert_eq!(h.range(..=g.valid_up_to()).collect::<Vec<_>>(), vec![(&0, &1)]);
        let t2 = functor_by_name("tensor:2", &ctx).unwrap();
        let g = gamma_n(&t2, 1, &ctx, &x, 3).unwrap();
        let h = betti_numbers(&g.complex).unwrap();
        assert!(h.range(..=g.valid_up_to() - 1).next().is_none(), "{h:?}");
    }
}
