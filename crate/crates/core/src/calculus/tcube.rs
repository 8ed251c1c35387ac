//! The cubes `G^X` behind the functor `t`, and their multi-block versions.

use std::collections::HashMap;

use crate::chain::{ChainComplex, ChainMap};
use crate::cube::{ifiber_closed, ifiber_map, CubeMap, CubicalDiagram, Subset};
use crate::error::{Error, Result};
use crate::source::{
    ensure_cofibrant, ensure_cofibrant_morphism, terminal_map, AfterCoproduct, Context, EtaMorphism, EtaObject,
    Functor, FunctorRef,
};

/// `X(U)`: slot `i ∈ U` replaced by `B^c`.
pub fn replace_by_b(xs: &[EtaObject], u: Subset) -> Vec<EtaObject> {
    xs.iter()
        .enumerate()
        .map(|(i, x)| if u.contains(i) { EtaObject::terminal(x.context()) } else { x.clone() })
        .collect()
}

/// The tuple morphism `X(S) -> X(S ∪ {i})`: `g` on slot `i`, identities
/// elsewhere (the identity of `B^c` when `i ∈ S`).
pub fn replacement_edge(xs: &[EtaObject], s: Subset, i: usize) -> Result<Vec<EtaMorphism>> {
    replace_by_b(xs, s)
        .iter()
        .enumerate()
        .map(|(j, x)| if j == i { terminal_map(x) } else { Ok(EtaMorphism::identity(x)) })
        .collect()
}

fn cofibrant_tuple(g: &dyn Functor, xs: &[EtaObject]) -> Result<Vec<EtaObject>> {
    if g.arity() != xs.len() {
        return Err(Error::Precondition(format!(
            "{} takes {} argument(s), got {}",
            g.name(),
            g.arity(),
            xs.len()
        )));
    }
    xs.iter().map(ensure_cofibrant).collect()
}

/// Values of `G` on `X(S)` for every `S`, and on every edge `S -> S ∪ {i}`
/// with `i ∉ S`.
struct Values {
    n: usize,
    vertices: Vec<ChainComplex>,
    edges: HashMap<(usize, usize), ChainMap>,
}

impl Values {
    fn new(g: &dyn Functor, xs: &[EtaObject]) -> Result<Values> {
        let n = xs.len();
        let vertices = Subset::all(n)
            .map(|s| g.apply(&replace_by_b(xs, s)))
            .collect::<Result<Vec<_>>>()?;
        let mut edges = HashMap::new();
        for s in Subset::all(n) {
            for i in (0..n).filter(|&i| !s.contains(i)) {
                edges.insert((s.bits, i), g.apply_morphism(&replacement_edge(xs, s, i)?)?);
            }
        }
        Ok(Values { n, vertices, edges })
    }

    /// Union of the blocks of a multi-block subset.
    fn union(&self, w: Subset) -> usize {
        let mask = (1 << self.n) - 1;
        (0..w.n / self.n.max(1)).fold(0, |acc, l| acc | (w.bits >> (l * self.n) & mask))
    }

    fn cube(&self, blocks: usize) -> Result<CubicalDiagram> {
        let n = self.n;
        if n == 0 {
            return Ok(CubicalDiagram::point(&self.vertices[0]));
        }
        CubicalDiagram::from_fn(
            blocks * n,
            |w| Ok(self.vertices[self.union(w)].clone()),
            |w, c, _, _| {
                let s = self.union(w);
                let i = c % n;
                Ok(if s >> i & 1 == 1 {
                    ChainMap::identity(&self.vertices[s])
                } else {
                    self.edges[&(s, i)].clone()
                })
            },
        )
    }
}

/// `G^X : U ↦ G(X(U))`, with the tuple auto-replaced.
pub fn build_cube(g: &dyn Functor, xs: &[EtaObject]) -> Result<CubicalDiagram> {
    multi_cube(g, xs, 1)
}

/// The `(blocks · n)`-cube `W ↦ G(X(W_1 ∪ .. ∪ W_blocks))`; block 1 holds the
/// lowest coordinates and is the innermost application of `t`.
pub fn multi_cube(g: &dyn Functor, xs: &[EtaObject], blocks: usize) -> Result<CubicalDiagram> {
    let xs = cofibrant_tuple(g, xs)?;
    Values::new(g, &xs)?.cube(blocks)
}

/// `tG(X) = ifiber(G^X)`.
pub fn t_apply(g: &dyn Functor, xs: &[EtaObject]) -> Result<ChainComplex> {
    ifiber_closed(&build_cube(g, xs)?)
}

/// The map of cubes `G^X -> G^Y` induced by a tuple of strict maps.
pub fn cube_map(g: &dyn Functor, fs: &[EtaMorphism], blocks: usize) -> Result<CubeMap> {
    let fs = fs.iter().map(ensure_cofibrant_morphism).collect::<Result<Vec<_>>>()?;
    let xs: Vec<EtaObject> = fs.iter().map(|f| f.source().clone()).collect();
    let ys: Vec<EtaObject> = fs.iter().map(|f| f.target().clone()).collect();
    let source = multi_cube(g, &xs, blocks)?;
    let target = multi_cube(g, &ys, blocks)?;
    let n = fs.len();
    let mut by_union = Vec::new();
    for s in Subset::all(n) {
        let slots: Vec<EtaMorphism> = fs
            .iter()
            .enumerate()
            .map(|(i, f)| {
                if s.contains(i) {
                    EtaMorphism::identity(&EtaObject::terminal(f.source().context()))
                } else {
                    f.clone()
                }
            })
            .collect();
        by_union.push(g.apply_morphism(&slots)?);
    }
    let mask = (1 << n) - 1;
    let comps = Subset::all(blocks * n)
        .map(|w| {
            let u = (0..blocks).fold(0, |acc, l| acc | (w.bits >> (l * n) & mask));
            by_union[u].clone()
        })
        .collect();
    Ok(CubeMap { source, target, comps })
}

/// `tG(f)`.
pub fn t_apply_morphism(g: &dyn Functor, fs: &[EtaMorphism]) -> Result<ChainMap> {
    ifiber_map(&cube_map(g, fs, 1)?)
}

/// `t` applied to a functor, itself a functor of the same arity.
#[derive(Debug)]
pub struct TFunctor(pub FunctorRef);

impl Functor for TFunctor {
    fn name(&self) -> String {
        format!("t({})", self.0.name())
    }
    fn arity(&self) -> usize {
        self.0.arity()
    }
    fn apply(&self, xs: &[EtaObject]) -> Result<ChainComplex> {
        t_apply(&*self.0, xs)
    }
    fn apply_morphism(&self, fs: &[EtaMorphism]) -> Result<ChainMap> {
        t_apply_morphism(&*self.0, fs)
    }
}

/// `cr_n H(X_1, .., X_n) = t(H ∘ ⊔_n)(X_1, .., X_n)`.
pub fn cr_n(h: &FunctorRef, ctx: &Context, xs: &[EtaObject]) -> Result<ChainComplex> {
    let g = AfterCoproduct {
        inner: h.clone(),
        n: xs.len(),
        ctx: ctx.clone(),
    };
    t_apply(&g, xs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::{betti_numbers, homology_all};
    use crate::linalg::Ring;
    use crate::source::{functor_by_name, EtaContext};

    fn point(ctx: &Context, rank: usize) -> EtaObject {
        let x = ChainComplex::concentrated(ctx.ring(), 0, rank);
        let unit = ChainMap::zero(ctx.a(), &x);
        let aug = ChainMap::zero(&x, ctx.b());
        EtaObject::new(ctx, unit, aug).unwrap()
    }

    #[test]
    fn tensor_square_cross_effects() {
        let ctx = EtaContext::based(ChainComplex::zero(Ring::Rationals));
        let t2 = functor_by_name("tensor:2", &ctx).unwrap();
        let r = point(&ctx, 1);
        let cr2 = cr_n(&t2, &ctx, &[r.clone(), r.clone()]).unwrap();
        assert_eq!(betti_numbers(&cr2).unwrap().into_iter().collect::<Vec<_>>(), vec![(0, 2)]);
        let cr3 = cr_n(&t2, &ctx, &[r.clone(), r.clone(), r.clone()]).unwrap();
        assert!(homology_all(&cr3).unwrap().is_empty());
    }

    #[test]
    fn identity_one_cube_is_x() {
        let ctx = EtaContext::based(ChainComplex::zero(Ring::Rationals));
        let id = functor_by_name("identity", &ctx).unwrap();
        let x = point(&ctx, 2);
        assert_eq!(t_apply(&*id, &[x.clone()]).unwrap(), *x.complex());
    }
}
