use std::ops::RangeInclusive;

use serde_json::json;

use crate::chain::is_acyclic;
use crate::cube::ifiber_closed;
use crate::error::Result;
use crate::report::{describe, homology_in, homology_json, Report};
use crate::source::{
    apply1, coproduct_in, ensure_cofibrant, sigma_b_iter, Context, EtaObject, FunctorRef, SigmaSquare,
};
use crate::tower::degree::degree_check;

fn shifted(window: &RangeInclusive<i64>, by: i64) -> RangeInclusive<i64> {
    window.start() + by..=window.end() + by
}

/// Small test objects: `A`, `B^c`, and `A ⊕ R` in degrees 0 and 1.
pub fn sample_objects(ctx: &Context) -> Result<Vec<EtaObject>> {
    let ring = ctx.ring();
    Ok(vec![
        EtaObject::initial(ctx),
        EtaObject::terminal(ctx),
        EtaObject::free(ctx, &crate::chain::ChainComplex::concentrated(ring, 0, 1))?,
        EtaObject::free(ctx, &crate::chain::ChainComplex::concentrated(ring, 1, 1))?,
    ])
}

/// `F(B^c)` acyclic; records a precondition failure otherwise.
fn check_reduced(f: &FunctorRef, ctx: &Context, report: &mut Report) -> Result<bool> {
    let fb = apply1(&**f, &EtaObject::terminal(ctx))?;
    if is_acyclic(&fb)? {
        return Ok(true);
    }
    let table = crate::chain::homology_all(&fb)?;
    report.fail(format!("precondition: {} is not reduced, F(B) has {}", f.name(), describe(&table)));
    Ok(false)
}

/// Compares `H_k(left)` with `H_{k+shift}(right)` for `k` in the window.
fn compare(
    report: &mut Report,
    left: &crate::chain::ChainComplex,
    right: &crate::chain::ChainComplex,
    shift: i64,
    window: &RangeInclusive<i64>,
) -> Result<()> {
    let l = homology_in(left, window.clone())?;
    let r = homology_in(right, shifted(window, shift))?;
    let mut failures = Vec::new();
    for k in window.clone() {
        let (a, b) = (&l[&k], &r[&(k + shift)]);
        if a != b {
            failures.push(format!("degree {k}: {a} vs {b}"));
        }
    }
    report.record("comparison", failures);
    report.detail("lhs_homology", homology_json(&l));
    report.detail(
        "rhs_homology",
        homology_json(&r.into_iter().map(|(k, h)| (k - shift, h)).collect()),
    );
    Ok(())
}

/// `F(A) ≃ Ω F(B ⊔_A B)`, for `F` reduced and of degree 1 (checked on the
/// sample objects first). Compares homology in the window.
pub fn deloop_degree1(f: &FunctorRef, ctx: &Context, window: RangeInclusive<i64>) -> Result<Report> {
    let mut report = Report::new("deloop-degree1").with_n(1);
    report.detail("functor", json!(f.name()));
    report.detail("window", json!([window.start(), window.end()]));
    let reduced = check_reduced(f, ctx, &mut report)?;
    let objs = sample_objects(ctx)?;
    let pairs: Vec<Vec<EtaObject>> = objs
        .iter()
        .enumerate()
        .flat_map(|(i, x)| objs[i..].iter().map(move |y| vec![x.clone(), y.clone()]))
        .collect();
    let degree = degree_check(f, 1, ctx, &pairs, window.clone())?;
    let degree_ok = degree.passed();
    if !degree_ok {
        report.fail(format!("precondition: {} is not of degree 1 ({} failing sample(s))", f.name(), degree.failures.len()));
    }
    report.detail("precondition", json!(reduced && degree_ok));
    if !(reduced && degree_ok) {
        return Ok(report);
    }
    let b = EtaObject::terminal(ctx);
    let bb = coproduct_in(ctx, &[b.clone(), b])?.object;
    let left = apply1(&**f, &EtaObject::initial(ctx))?;
    let right = apply1(&**f, &bb)?;
    compare(&mut report, &left, &right, 1, &window)?;
    Ok(report)
}

/// `F(X) ≃ Ω^m F(Σ_B^m X)`, after checking that `F` is reduced and takes each
/// square defining `Σ_B^{j+1} X` to a square with acyclic total fiber.
pub fn deloop_excisive(
    f: &FunctorRef,
    ctx: &Context,
    x: &EtaObject,
    m: usize,
    window: RangeInclusive<i64>,
) -> Result<Report> {
    let mut report = Report::new("deloop-excisive").with_n(m);
    report.detail("functor", json!(f.name()));
    report.detail("window", json!([window.start(), window.end()]));
    let x = ensure_cofibrant(x)?;
    let mut ok = check_reduced(f, ctx, &mut report)?;
    let mut y = x.clone();
    for j in 0..m {
        let fiber = ifiber_closed(&SigmaSquare::new(&y)?.image(&**f)?)?;
        if !is_acyclic(&fiber)? {
            let table = crate::chain::homology_all(&fiber)?;
            report.fail(format!("precondition: square {j} is not cartesian, total fiber has {}", describe(&table)));
            ok = false;
        }
        y = sigma_b_iter(&y, 1)?;
    }
    report.detail("precondition", json!(ok));
    if !ok {
        return Ok(report);
    }
    let left = apply1(&**f, &x)?;
    let right = apply1(&**f, &sigma_b_iter(&x, m)?)?;
    compare(&mut report, &left, &right, m as i64, &window)?;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::{ChainComplex, ChainMap};
    use crate::linalg::{Matrix, Ring};
    use crate::source::{functor_by_name, EtaContext};

    /// `A = 0`, `B = R` in degree 0.
    fn ctx() -> Context {
        let ring = Ring::Rationals;
        let b = ChainComplex::concentrated(ring, 0, 1);
        EtaContext::based(b)
    }

    #[test]
    fn structure_fiber_deloops() {
        let ctx = ctx();
        let f = functor_by_name("structure_fiber", &ctx).unwrap();
        let r = deloop_degree1(&f, &ctx, -3..=3).unwrap();
        assert!(r.passed(), "{:?}", r.failures);
        assert_eq!(r.details["lhs_homology"], json!({"-1": {"free_rank": 1, "torsion": []}}));
        let x = sample_objects(&ctx).unwrap()[2].clone();
        for m in 1..=3 {
            let r = deloop_excisive(&f, &ctx, &x, m, -3..=3).unwrap();
            assert!(r.passed(), "m={m}: {:?}", r.failures);
        }
    }

    #[test]
    fn square_is_rejected() {
        let ctx = ctx();
        let f = functor_by_name("tensor:2", &ctx).unwrap();
        let r = deloop_degree1(&f, &ctx, -3..=3).unwrap();
        assert_eq!(r.details["precondition"], json!(false));
        assert!(r.failures.iter().all(|m| m.starts_with("precondition")));
        let x = sample_objects(&ctx).unwrap()[2].clone();
        let r = deloop_excisive(&f, &ctx, &x, 1, -3..=3).unwrap();
        assert_eq!(r.details["precondition"], json!(false));
    }

    #[test]
    fn based_point_is_trivial() {
        let ring = Ring::Rationals;
        let ctx = EtaContext::based(ChainComplex::zero(ring));
        let f = functor_by_name("structure_fiber", &ctx).unwrap();
        let r = deloop_degree1(&f, &ctx, -2..=2).unwrap();
        assert!(r.passed());
        assert_eq!(r.details["lhs_homology"], json!({}));
        // X = B with aug = id: both sides acyclic
        let b = ChainComplex::concentrated(ring, 0, 1);
        let ctx = EtaContext::based(b.clone());
        let f = functor_by_name("structure_fiber", &ctx).unwrap();
        let x = EtaObject::new(&ctx, ChainMap::zero(ctx.a(), &b), ChainMap::new(b.clone(), b.clone(), [(0, Matrix::identity(ring, 1))]).unwrap()).unwrap();
        let r = deloop_excisive(&f, &ctx, &x, 2, -2..=2).unwrap();
        assert!(r.passed(), "{:?}", r.failures);
        assert_eq!(r.details["lhs_homology"], json!({}));
    }
}
