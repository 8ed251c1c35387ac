use std::sync::Arc;

use fck_core::calculus::{cr_n, verify_perp_cotriple};
use fck_core::chain::{betti_numbers, is_acyclic, is_quasi_iso, ChainMap};
use fck_core::linalg::{Matrix, Ring};
use fck_core::source::{functor_by_name, EtaMorphism, EtaObject, Functor, FunctorRef};
use fck_core::tower::{degree_check, gamma_n, GammaFunctor};
use fck_core::verify::based_point;

fn scalar_map(x: &EtaObject, c: i64) -> EtaMorphism {
    let ring = x.ring();
    let m = Matrix::from_i64_rows(ring, &[vec![c]]);
    EtaMorphism::new(x, x, ChainMap::new(x.complex().clone(), x.complex().clone(), [(0, m)]).unwrap()).unwrap()
}

#[test]
fn tensor_powers_have_their_degree() {
    let (ctx, x) = based_point(Ring::Rationals);
    for d in 1..=3 {
        let f = functor_by_name(&format!("tensor:{d}"), &ctx).unwrap();
        let r = degree_check(&f, d, &ctx, &[vec![x.clone(); d + 1]], -4..=4).unwrap();
        assert!(r.passed(), "{:?}", r.failures);
        if d > 1 {
            let r = degree_check(&f, d - 1, &ctx, &[vec![x.clone(); d]], -4..=4).unwrap();
            assert!(!r.passed());
        }
    }
}

#[test]
fn perp_is_a_cotriple() {
    let (ctx, x) = based_point(Ring::Rationals);
    for name in ["identity", "tensor:2"] {
        let f = functor_by_name(name, &ctx).unwrap();
        for n in 1..=2 {
            assert_eq!(verify_perp_cotriple(&f, n, &ctx, &x).unwrap(), Vec::<String>::new(), "{name} n={n}");
        }
    }
}

#[test]
fn gamma_is_a_functor() {
    let (ctx, x) = based_point(Ring::Rationals);
    let t2 = functor_by_name("tensor:2", &ctx).unwrap();
    let g = GammaFunctor { inner: t2, n: 1, ctx: ctx.clone(), truncation: 2 };
    let id = g.apply_morphism(&[EtaMorphism::identity(&x)]).unwrap();
    assert_eq!(id, ChainMap::identity(id.source()));
    let (two, three) = (scalar_map(&x, 2), scalar_map(&x, 3));
    let a = g.apply_morphism(&[three.compose(&two).unwrap()]).unwrap();
    let b = g.apply_morphism(&[three]).unwrap().compose(&g.apply_morphism(&[two]).unwrap()).unwrap();
    assert!(a.validate().is_empty());
    assert_eq!(a, b);
}

#[test]
fn gamma_one_is_degree_one_in_range() {
    let (ctx, x) = based_point(Ring::Rationals);
    for name in ["identity", "tensor:2"] {
        let f = functor_by_name(name, &ctx).unwrap();
        let t = 2;
        let g: FunctorRef = Arc::new(GammaFunctor { inner: f, n: 1, ctx: ctx.clone(), truncation: t });
        let cr = cr_n(&g, &ctx, &[x.clone(), x.clone()]).unwrap();
        let h = betti_numbers(&cr).unwrap();
        assert!(h.range(..=t as i64 - 1).next().is_none(), "{name}: {h:?}");
    }
}

#[test]
fn linear_functors_are_their_own_first_stage() {
    let (ctx, x) = based_point(Ring::Rationals);
    let id = functor_by_name("identity", &ctx).unwrap();
    let g = gamma_n(&id, 1, &ctx, &x, 3).unwrap();
    let h = betti_numbers(&g.complex).unwrap();
    assert_eq!(h.range(..=g.valid_up_to()).collect::<Vec<_>>(), vec![(&0, &1)]);
    assert!(g.augmentation.validate().is_empty());
}

#[test]
fn constant_stage_zero() {
    let (ctx, x) = based_point(Ring::Rationals);
    let c = functor_by_name("constant", &ctx).unwrap();
    for t in 0..=3 {
        let g = gamma_n(&c, 0, &ctx, &x, t).unwrap();
        assert!(is_quasi_iso(&g.p).unwrap(), "N={t}");
    }
}

#[test]
fn reduced_functors_vanish_at_b() {
    let (ctx, _) = based_point(Ring::Rationals);
    let b = EtaObject::terminal(&ctx);
    for name in ["identity", "tensor:2", "tensor:3"] {
        let f = functor_by_name(name, &ctx).unwrap();
        assert!(is_acyclic(&f.apply(&[b.clone()]).unwrap()).unwrap(), "{name}");
    }
}
