//! Coproducts under `A` of standard objects: `⊔ X_i = A ⊕ ⊕_i C_i`.

use std::collections::BTreeSet;

use crate::chain::{ChainComplex, ChainMap};
use crate::error::{Error, Result};
use crate::linalg::BlockBuilder;
use crate::source::object::{Context, EtaMorphism, EtaObject};

#[derive(Clone, Debug)]
pub struct Coproduct {
    pub object: EtaObject,
    pub inclusions: Vec<EtaMorphism>,
}

fn sizes(ctx: &Context, xs: &[EtaObject], k: i64) -> Vec<usize> {
    std::iter::once(ctx.a().rank(k)).chain(xs.iter().map(|x| x.c_rank(k))).collect()
}

/// `d = [[d_A, h_1 .. h_n], [0, diag(d_{C_i})]]`, unit `[I; 0]`,
/// augmentation `[η | aug_1|C .. aug_n|C]`. The empty coproduct is `A`.
pub fn coproduct_in(ctx: &Context, xs: &[EtaObject]) -> Result<Coproduct> {
    for x in xs {
        x.require_standard("coproduct")?;
    }
    let ring = ctx.ring();
    let a = ctx.a();
    let degrees: BTreeSet<i64> = a.degrees().chain(xs.iter().flat_map(|x| x.c_degrees())).collect();
    let mut ranks = Vec::new();
    let mut diffs = Vec::new();
    let mut units = Vec::new();
    let mut augs = Vec::new();
    for &k in &degrees {
        let cols = sizes(ctx, xs, k);
        ranks.push((k, cols.iter().sum::<usize>()));
        let mut d = BlockBuilder::new(ring, &sizes(ctx, xs, k - 1), &cols);
        if let Some(m) = a.diff_ref(k) {
            d.place(0, 0, m, 1);
        }
        for (i, x) in xs.iter().enumerate() {
            d.place(0, i + 1, &x.twist(k), 1);
            d.place(i + 1, i + 1, &x.c_diff(k), 1);
        }
        diffs.push((k, d.build()));
        let mut u = BlockBuilder::new(ring, &cols, &[a.rank(k)]);
        u.place_identity(0, 0, 1);
        units.push((k, u.build()));
        let mut e = BlockBuilder::new(ring, &[ctx.b().rank(k)], &cols);
        e.place(0, 0, &ctx.eta().component(k), 1);
        for (i, x) in xs.iter().enumerate() {
            e.place(0, i + 1, &x.c_aug(k), 1);
        }
        augs.push((k, e.build()));
    }
    let complex = ChainComplex::new(ring, ranks, diffs)?;
    let unit = ChainMap::new(a.clone(), complex.clone(), units)?;
    let aug = ChainMap::new(complex.clone(), ctx.b().clone(), augs)?;
    let object = EtaObject::trusted(ctx, unit, aug);
    let mut inclusions = Vec::new();
    for (j, x) in xs.iter().enumerate() {
        let mut comps = Vec::new();
        for k in x.complex().degrees() {
            let mut m = BlockBuilder::new(ring, &sizes(ctx, xs, k), &[a.rank(k), x.c_rank(k)]);
            m.place_identity(0, 0, 1);
            m.place_identity(j + 1, 1, 1);
            comps.push((k, m.build()));
        }
        let map = ChainMap::new(x.complex().clone(), object.complex().clone(), comps)?;
        inclusions.push(EtaMorphism::trusted(x, &object, map));
    }
    Ok(Coproduct { object, inclusions })
}

pub fn coproduct(xs: &[EtaObject]) -> Result<Coproduct> {
    let ctx = xs
        .first()
        .map(|x| x.context().clone())
        .ok_or_else(|| Error::Precondition("empty coproduct needs a context".into()))?;
    coproduct_in(&ctx, xs)
}

/// `⊔ f_i : (a, (c_i)) ↦ (a + Σ φ_i c_i, (ψ_i c_i))`.
pub fn coproduct_map(fs: &[EtaMorphism]) -> Result<EtaMorphism> {
    let ctx = fs
        .first()
        .map(|f| f.source().context().clone())
        .ok_or_else(|| Error::Precondition("empty coproduct needs a context".into()))?;
    coproduct_map_in(&ctx, fs)
}

pub fn coproduct_map_in(ctx: &Context, fs: &[EtaMorphism]) -> Result<EtaMorphism> {
    let xs: Vec<EtaObject> = fs.iter().map(|f| f.source().clone()).collect();
    let ys: Vec<EtaObject> = fs.iter().map(|f| f.target().clone()).collect();
    let src = coproduct_in(ctx, &xs)?.object;
    let tgt = coproduct_in(ctx, &ys)?.object;
    let ring = ctx.ring();
    let mut comps = Vec::new();
    for k in src.complex().degrees() {
        let mut m = BlockBuilder::new(ring, &sizes(ctx, &ys, k), &sizes(ctx, &xs, k));
        m.place_identity(0, 0, 1);
        for (i, f) in fs.iter().enumerate() {
            m.place(0, i + 1, &f.phi(k), 1);
            m.place(i + 1, i + 1, &f.psi(k), 1);
        }
        comps.push((k, m.build()));
    }
    let map = ChainMap::new(src.complex().clone(), tgt.complex().clone(), comps)?;
    Ok(EtaMorphism::trusted(&src, &tgt, map))
}

/// The map `⊔ X_i -> Y` restricting to `g_i` on `X_i`.
pub fn copair(xs: &[EtaObject], target: &EtaObject, gs: &[ChainMap]) -> Result<EtaMorphism> {
    if xs.len() != gs.len() {
        return Err(Error::Precondition("copair: one map per summand".into()));
    }
    let ctx = target.context().clone();
    let src = coproduct_in(&ctx, xs)?.object;
    let ring = ctx.ring();
    let mut comps = Vec::new();
    for k in src.complex().degrees() {
        let mut m = BlockBuilder::new(ring, &[target.complex().rank(k)], &sizes(&ctx, xs, k));
        m.place(0, 0, &target.unit().component(k), 1);
        for (i, (x, g)) in xs.iter().zip(gs).enumerate() {
            let gk = g.component(k);
            m.place(0, i + 1, &gk.submatrix(0..gk.rows(), x.a_rank(k)..gk.cols()), 1);
        }
        comps.push((k, m.build()));
    }
    let map = ChainMap::new(src.complex().clone(), target.complex().clone(), comps)?;
    EtaMorphism::new(&src, target, map)
}

/// The fold map `⊔_n X -> X`.
pub fn fold(x: &EtaObject, n: usize) -> Result<EtaMorphism> {
    let xs = vec![x.clone(); n];
    let ids = vec![ChainMap::identity(x.complex()); n];
    copair(&xs, x, &ids)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::Gen;
    use crate::linalg::Ring;
    use crate::source::object::{cofibrant_replace, terminal_map, EtaContext};

    #[test]
    fn inclusions_and_fold() {
        let mut g = Gen::new(4);
        let ring = Ring::Rationals;
        let a = g.complex(ring, 0, 1, 2);
        let b = g.complex(ring, 0, 2, 3);
        let ctx = EtaContext::new(g.chain_map(&a, &b)).unwrap();
        let x = cofibrant_replace(&EtaObject::terminal_raw(&ctx)).unwrap().object;
        let cp = coproduct(&[x.clone(), x.clone(), x.clone()]).unwrap();
        assert!(cp.object.complex().validate().is_empty());
        let f = fold(&x, 3).unwrap();
        for inc in &cp.inclusions {
            EtaMorphism::new(inc.source(), inc.target(), inc.map().clone()).unwrap();
            assert_eq!(f.compose(inc).unwrap(), EtaMorphism::identity(&x));
        }
        let gx = terminal_map(&x).unwrap();
        let m = coproduct_map(&[gx.clone(), EtaMorphism::identity(&x)]).unwrap();
        EtaMorphism::new(m.source(), m.target(), m.map().clone()).unwrap();
    }
}
