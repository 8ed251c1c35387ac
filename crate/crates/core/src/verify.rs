//! Randomized verification suites. Instance `i` of a suite draws from its own
//! generator seeded by `(seed, i)`, so results do not depend on scheduling.

use std::sync::Arc;

use rayon::prelude::*;
use serde_json::json;

use crate::calculus::{
    sign_identity_counterexamples, tt_two_routes, verify_chain_maps, verify_coassoc, verify_counital, TPowers,
};
use crate::chain::{
    cone, cylinder, direct_sum, hofib, is_acyclic, is_quasi_iso, kernel_subcomplex, path_object, ChainComplex,
    ChainMap, Violation,
};
use crate::cube::{ifiber_closed, ifiber_recursive, random_cube, tfiber_ifiber_iso, tfiber_square};
use crate::error::{Error, Result};
use crate::gen::Gen;
use crate::linalg::Ring;
use crate::report::Report;
use crate::source::{
    functor_by_name, sigma_b, AfterCoproduct, Context, EtaContext, EtaObject, FunctorRef, SigmaSquare, SlotTensor,
};
use crate::tower::{bar_construction, fat_realization, SimplicialChainComplex};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    /// Homotopy fiber and the path-object factorization `f = β α`.
    Hofib,
    PathObject,
    Cone,
    Cylinder,
    SigmaB,
    Ifiber,
    Tfiber,
    XiChainMap,
    Counital,
    Coassoc,
    TwoRoutes,
    SignIdentity,
    Simplicial,
    BarLevels,
    Realization,
}

impl Suite {
    pub const ALL: [Suite; 15] = [
        Suite::Hofib,
        Suite::PathObject,
        Suite::Cone,
        Suite::Cylinder,
        Suite::SigmaB,
        Suite::Ifiber,
        Suite::Tfiber,
        Suite::XiChainMap,
        Suite::Counital,
        Suite::Coassoc,
        Suite::TwoRoutes,
        Suite::SignIdentity,
        Suite::Simplicial,
        Suite::BarLevels,
        Suite::Realization,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Hofib => "hofib",
            Suite::PathObject => "path-object",
            Suite::Cone => "cone",
            Suite::Cylinder => "cylinder",
            Suite::SigmaB => "sigma-b",
            Suite::Ifiber => "ifiber",
            Suite::Tfiber => "tfiber",
            Suite::XiChainMap => "xi-chainmap",
            Suite::Counital => "counital",
            Suite::Coassoc => "coassoc",
            Suite::TwoRoutes => "two-routes",
            Suite::SignIdentity => "sign-identity",
            Suite::Simplicial => "simplicial",
            Suite::BarLevels => "bar-levels",
            Suite::Realization => "realization",
        }
    }

    pub fn from_name(s: &str) -> Option<Suite> {
        Suite::ALL.into_iter().find(|x| x.name() == s)
    }

    pub fn default_instances(self) -> usize {
        match self {
            Suite::SignIdentity => 1,
            Suite::Simplicial => 3,
            Suite::XiChainMap | Suite::Counital | Suite::Coassoc | Suite::TwoRoutes => 50,
            _ => 100,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub seed: u64,
    pub instances: usize,
    /// Cube dimension / arity; `None` cycles through the suite's range.
    pub n: Option<usize>,
    /// `None` draws a ring per instance.
    pub ring: Option<Ring>,
    pub truncation: usize,
}

impl SuiteConfig {
    pub fn new(seed: u64, instances: usize) -> SuiteConfig {
        SuiteConfig {
            seed,
            instances,
            n: None,
            ring: None,
            truncation: 3,
        }
    }
}

/// Generator for instance `i`.
pub fn instance_gen(seed: u64, i: usize) -> Gen {
    Gen::new(seed ^ (i as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

fn violations(name: &str, vs: Vec<Violation>) -> Vec<String> {
    vs.into_iter().map(|v| format!("{name}: {} (degree {})", v.what, v.degree)).collect()
}

fn check_eq(out: &mut Vec<String>, name: &str, a: &ChainMap, b: &ChainMap) {
    if let Some(m) = crate::calculus::first_mismatch(a, b) {
        out.push(format!("{name}: {m}"));
    }
}

fn pick_ring(g: &mut Gen, cfg: &SuiteConfig) -> Ring {
    cfg.ring.unwrap_or_else(|| g.ring())
}

fn random_map(g: &mut Gen, ring: Ring) -> ChainMap {
    let x = g.complex(ring, -1, 2, 3);
    let y = g.complex(ring, -1, 2, 3);
    g.chain_map(&x, &y)
}

/// A random context `A -η-> B` with small `A` (often zero) and `B`.
pub fn random_context(g: &mut Gen, ring: Ring, max_rank: usize) -> Context {
    let a = if g.chance(0.4) { ChainComplex::zero(ring) } else { g.complex(ring, 0, 0, max_rank.min(1)) };
    let b = g.complex(ring, 0, 1, max_rank);
    EtaContext::new(g.chain_map(&a, &b)).expect("random η is a chain map")
}

/// `A ⊕ C` with the split unit and augmentation `(η, g)` for a random
/// `g : C -> B`; occasionally the raw terminal object instead.
pub fn random_object(g: &mut Gen, ctx: &Context, max_rank: usize) -> Result<EtaObject> {
    if g.chance(0.15) {
        return Ok(EtaObject::terminal_raw(ctx));
    }
    let ring = ctx.ring();
    let lo = g.below(2) as i64 - 1;
    let hi = lo + g.below(2) as i64;
    let c = g.complex(ring, lo, hi, max_rank);
    let to_b = g.chain_map(&c, ctx.b());
    let sum = direct_sum(ring, &[ctx.a().clone(), c])?;
    let aug = ctx.eta().compose(&sum.projections[0])?.add(&to_b.compose(&sum.projections[1])?)?;
    EtaObject::new(ctx, sum.injections[0].clone(), aug)
}

/// A random functor of `n` variables built from the registry.
pub fn random_functor(g: &mut Gen, ctx: &Context, n: usize) -> Result<FunctorRef> {
    let inner = ["identity", "tensor:2", "structure_fiber", "constant", "shift:1:identity"];
    let choice = g.below(inner.len() + 1);
    if choice == inner.len() {
        return Ok(Arc::new(SlotTensor(n)));
    }
    Ok(Arc::new(AfterCoproduct {
        inner: functor_by_name(inner[choice], ctx)?,
        n,
        ctx: ctx.clone(),
    }))
}

/// A random functor-cube instance `(G, X_1, .., X_n)`, sized so that the
/// `3n`-cube stays small.
pub fn random_functor_instance(g: &mut Gen, ring: Ring, n: usize) -> Result<(FunctorRef, Vec<EtaObject>)> {
    let rank = if n >= 3 { 2 } else { 3 };
    let ctx = random_context(g, ring, 2);
    let f = random_functor(g, &ctx, n)?;
    let xs = (0..n).map(|_| random_object(g, &ctx, rank)).collect::<Result<Vec<_>>>()?;
    Ok((f, xs))
}

fn hofib_instance(g: &mut Gen, ring: Ring) -> Result<Vec<String>> {
    let f = random_map(g, ring);
    let fib = hofib(&f)?;
    let mut out = violations("hofib", fib.complex.validate());
    out.extend(violations("hofib projection", fib.projection.validate()));
    out.extend(path_object_instance(&f)?);
    Ok(out)
}

/// `β α = f`, `β` surjective in each supported degree, `α` a
/// quasi-isomorphism, and `ker β = hofib(f)` on the nose.
fn path_object_instance(f: &ChainMap) -> Result<Vec<String>> {
    let p = path_object(f)?;
    let mut out = violations("P(f)", p.complex.validate());
    out.extend(violations("α", p.alpha.validate()));
    out.extend(violations("β", p.beta.validate()));
    check_eq(&mut out, "β∘α = f", &p.beta.compose(&p.alpha)?, f);
    // surjective over any ring: every basis vector of V_k is the image of a
    // basis vector of P(f)_k
    for k in f.target().degrees() {
        let bt = p.beta.component(k).transpose();
        let hit: std::collections::BTreeSet<usize> = (0..bt.rows())
            .filter_map(|j| match bt.row(j) {
                [(i, v)] if v.is_one() => Some(*i),
                _ => None,
            })
            .collect();
        if hit.len() != f.target().rank(k) {
            out.push(format!("β not surjective in degree {k}"));
        }
    }
    if !is_quasi_iso(&p.alpha)? {
        out.push("α is not a quasi-isomorphism".into());
    }
    let ker = kernel_subcomplex(&p.beta)?;
    if ker.complex != hofib(f)?.complex {
        out.push("ker β differs from hofib(f)".into());
    }
    Ok(out)
}

fn cone_instance(g: &mut Gen, ring: Ring) -> Result<Vec<String>> {
    let f = random_map(g, ring);
    let c = cone(&f)?;
    let mut out = violations("cone", c.complex.validate());
    out.extend(violations("cone inclusion", c.inclusion.validate()));
    out.extend(violations("cone projection", c.projection.validate()));
    if !c.projection.compose(&c.inclusion)?.is_zero() {
        out.push("projection ∘ inclusion ≠ 0".into());
    }
    Ok(out)
}

fn cylinder_instance(g: &mut Gen, ring: Ring) -> Result<Vec<String>> {
    let f = random_map(g, ring);
    let c = cylinder(&f)?;
    let mut out = violations("Cyl", c.complex.validate());
    for (name, m) in [("i_X", &c.source_inclusion), ("i_Y", &c.target_inclusion), ("p", &c.projection)] {
        out.extend(violations(name, m.validate()));
    }
    check_eq(&mut out, "p∘i_X = f", &c.projection.compose(&c.source_inclusion)?, &f);
    check_eq(&mut out, "p∘i_Y = id", &c.projection.compose(&c.target_inclusion)?, &ChainMap::identity(f.target()));
    if !is_quasi_iso(&c.projection)? {
        out.push("p is not a quasi-isomorphism".into());
    }
    Ok(out)
}

fn sigma_instance(g: &mut Gen, ring: Ring) -> Result<Vec<String>> {
    let ctx = random_context(g, ring, 2);
    let x = random_object(g, &ctx, 2)?;
    let s = sigma_b(&x)?;
    let mut out = violations("Σ_B X", s.complex().validate());
    if let Err(e) = EtaObject::new(&ctx, s.unit().clone(), s.aug().clone()) {
        out.push(format!("Σ_B X is not an object: {e}"));
    }
    let sq = SigmaSquare::new(&x)?;
    let left = sq.edges[2].compose(&sq.edges[0])?;
    let right = sq.edges[3].compose(&sq.edges[1])?;
    check_eq(&mut out, "square commutes", left.map(), right.map());
    let id = functor_by_name("identity", &ctx)?;
    if !is_acyclic(&ifiber_closed(&sq.image(&*id)?)?)? {
        out.push("the defining square is not homotopy cartesian".into());
    }
    Ok(out)
}

fn ifiber_instance(g: &mut Gen, ring: Ring, n: usize) -> Result<Vec<String>> {
    let x = random_cube(g, ring, n, 0, 1, 2);
    let closed = ifiber_closed(&x)?;
    let mut out = violations("cube", x.validate());
    out.extend(violations("ifiber", closed.validate()));
    if closed != ifiber_recursive(&x)? {
        out.push("closed and recursive forms differ".into());
    }
    Ok(out)
}

fn tfiber_instance(g: &mut Gen, ring: Ring) -> Result<Vec<String>> {
    let x = random_cube(g, ring, 2, 0, 1, 2);
    let t = tfiber_square(&x)?;
    let iso = tfiber_ifiber_iso(&x)?;
    let mut out = violations("tfiber", t.validate());
    out.extend(violations("tfiber -> ifiber", iso.validate()));
    if !iso.is_isomorphism()? {
        out.push("comparison is not invertible".into());
    }
    Ok(out)
}

fn cotriple_instance(suite: Suite, g: &mut Gen, ring: Ring, n: usize) -> Result<Vec<String>> {
    let (f, xs) = random_functor_instance(g, ring, n)?;
    let label = |v: Vec<String>| v.into_iter().map(|m| format!("{}: {m}", f.name())).collect();
    Ok(label(match suite {
        Suite::XiChainMap => verify_chain_maps(&*f, &xs)?,
        Suite::Counital => verify_counital(&*f, &xs)?,
        Suite::Coassoc => verify_coassoc(&*f, &xs)?,
        _ => tt_two_routes(&f, &xs)?,
    }))
}

/// All four cotriple checks on one instance, sharing the cubes.
pub fn cotriple_all(f: &FunctorRef, xs: &[EtaObject]) -> Result<Vec<String>> {
    let tw = TPowers::new(&**f, xs, 3)?;
    let x = tw.split(1, 0)?;
    let mut out = violations("ξ", x.validate());
    out.extend(violations("γ", tw.collapse(1, 0)?.validate()));
    let id = ChainMap::identity(&tw.level(1)?);
    check_eq(&mut out, "γ_t∘ξ = id", &tw.collapse(2, 1)?.compose(&x)?, &id);
    check_eq(&mut out, "tγ∘ξ = id", &tw.collapse(2, 0)?.compose(&x)?, &id);
    let left = tw.split(2, 0)?.compose(&x)?;
    let right = tw.split(2, 1)?.compose(&x)?;
    check_eq(&mut out, "(tξ)∘ξ = (ξ_t)∘ξ", &left, &right);
    out.extend(tt_two_routes(f, xs)?);
    Ok(out)
}

/// The functor names the simplicial suite cycles through.
pub const SIMPLICIAL_FUNCTORS: [&str; 3] = ["identity", "constant", "tensor:2"];

/// Based context over `ring` and the object `R` in degree 0.
pub fn based_point(ring: Ring) -> (Context, EtaObject) {
    let ctx = EtaContext::based(ChainComplex::zero(ring));
    let x = EtaObject::free(&ctx, &ChainComplex::concentrated(ring, 0, 1)).expect("free object");
    (ctx, x)
}

fn simplicial_instance(cfg: &SuiteConfig, i: usize, ring: Ring, n: usize) -> Result<Vec<String>> {
    let name = SIMPLICIAL_FUNCTORS[i % SIMPLICIAL_FUNCTORS.len()];
    let (ctx, x) = based_point(ring);
    let f = functor_by_name(name, &ctx)?;
    let s = bar_construction(&f, n, &ctx, &x, cfg.truncation)?;
    let mut out = realization_checks(&s)?;
    out.extend(s.validate()?);
    Ok(out.into_iter().map(|m| format!("{name}: {m}")).collect())
}

fn realization_checks(s: &SimplicialChainComplex) -> Result<Vec<String>> {
    let mut out = Vec::new();
    for (q, l) in s.levels.iter().enumerate() {
        out.extend(violations(&format!("level {q}"), l.validate()));
    }
    let r = fat_realization(s)?;
    out.extend(violations("|S|", r.complex.validate()));
    out.extend(violations("level 0 -> |S|", r.level_zero.validate()));
    Ok(out)
}

/// A small random bar construction: random context, object and functor,
/// `n ∈ {1, 2}`, truncation 1 or 2.
fn random_bar(g: &mut Gen, ring: Ring) -> Result<SimplicialChainComplex> {
    let ctx = random_context(g, ring, 1);
    let x = random_object(g, &ctx, 1)?;
    let names = ["identity", "constant", "structure_fiber", "tensor:2"];
    let f = functor_by_name(names[g.below(names.len())], &ctx)?;
    let n = 1 + g.below(2);
    let trunc = if n == 1 { 1 + g.below(2) } else { 1 };
    bar_construction(&f, n, &ctx, &x, trunc)
}

/// Runs instance `i` of a suite; errors become failures.
pub fn run_instance(suite: Suite, cfg: &SuiteConfig, i: usize) -> Vec<String> {
    let mut g = instance_gen(cfg.seed, i);
    let ring = pick_ring(&mut g, cfg);
    let n_in = |g: &mut Gen, lo: usize, hi: usize| cfg.n.unwrap_or_else(|| lo + g.below(hi - lo + 1));
    let result = match suite {
        Suite::Hofib => hofib_instance(&mut g, ring),
        Suite::PathObject => path_object_instance(&random_map(&mut g, ring)),
        Suite::Cone => cone_instance(&mut g, ring),
        Suite::Cylinder => cylinder_instance(&mut g, ring),
        Suite::SigmaB => sigma_instance(&mut g, ring),
        Suite::Ifiber => {
            let n = n_in(&mut g, 1, 4);
            ifiber_instance(&mut g, ring, n)
        }
        Suite::Tfiber => tfiber_instance(&mut g, ring),
        Suite::XiChainMap | Suite::Counital | Suite::Coassoc | Suite::TwoRoutes => {
            let n = n_in(&mut g, 1, 3);
            cotriple_instance(suite, &mut g, ring, n)
        }
        Suite::SignIdentity => {
            let n = cfg.n.unwrap_or(4);
            Ok((0..=n)
                .flat_map(|m| {
                    let (_, bad) = sign_identity_counterexamples(m);
                    bad.into_iter().map(move |b| format!("n={m}: counterexample {:?}", b.rows))
                })
                .collect())
        }
        Suite::Simplicial => {
            let ring = cfg.ring.unwrap_or(Ring::Rationals);
            simplicial_instance(cfg, i, ring, cfg.n.unwrap_or(1 + (i / 3) % 2))
        }
        Suite::BarLevels | Suite::Realization => random_bar(&mut g, ring).and_then(|s| {
            let mut out = realization_checks(&s)?;
            if suite == Suite::BarLevels {
                for q in 1..=s.truncation {
                    for (i, d) in s.faces[q].iter().enumerate() {
                        out.extend(violations(&format!("d{i} at level {q}"), d.validate()));
                    }
                    for (i, d) in s.degeneracies[q - 1].iter().enumerate() {
                        out.extend(violations(&format!("s{i} at level {}", q - 1), d.validate()));
                    }
                }
            }
            Ok(out)
        }),
    };
    result.unwrap_or_else(|e: Error| vec![format!("error: {e}")])
}

/// Runs every instance (in parallel) and assembles the report in index order.
pub fn run_suite(suite: Suite, cfg: &SuiteConfig) -> Report {
    let results: Vec<Vec<String>> = (0..cfg.instances).into_par_iter().map(|i| run_instance(suite, cfg, i)).collect();
    let mut report = Report::new(suite.name()).with_seed(cfg.seed);
    report.n = cfg.n;
    for (i, r) in results.into_iter().enumerate() {
        report.record(&format!("instance {i}"), r);
    }
    if suite == Suite::SignIdentity {
        let n = cfg.n.unwrap_or(4);
        let checked: usize = (0..=n).map(|m| sign_identity_counterexamples(m).0).sum();
        report.detail("matrices_checked", json!(checked));
    }
    if let Some(ring) = cfg.ring {
        report.detail("ring", json!(ring.to_string()));
    }
    report
}
