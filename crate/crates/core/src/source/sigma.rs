//! The suspension `Σ_B X = B ⊔_X B` and the square exhibiting it.

use crate::chain::{cylinder, ChainComplex, ChainMap};
use crate::cube::{CubicalDiagram, Subset};
use crate::error::Result;
use crate::linalg::BlockBuilder;
use crate::source::functor::{apply1, apply1_morphism, Functor};
use crate::source::object::{EtaMorphism, EtaObject};

/// `(Σ_B X)_k = B_k ⊕ X_{k-1} ⊕ B_k`,
/// `d(b, x, b') = (db - p x, -dx, db' + p x)` with `p` the augmentation;
/// unit `a ↦ (η a, 0, 0)`, augmentation `(b, x, b') ↦ b + b'`.
pub fn sigma_b(x: &EtaObject) -> Result<EtaObject> {
    let ctx = x.context();
    let ring = x.ring();
    let (a, b, c) = (ctx.a(), ctx.b(), x.complex());
    let p = x.aug();
    let sizes = |k: i64| [b.rank(k), c.rank(k - 1), b.rank(k)];
    let degrees: std::collections::BTreeSet<i64> = b.degrees().chain(c.degrees().map(|k| k + 1)).collect();
    let (mut ranks, mut diffs, mut unit, mut aug) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
    for &k in &degrees {
        ranks.push((k, sizes(k).iter().sum::<usize>()));
        let mut d = BlockBuilder::new(ring, &sizes(k - 1), &sizes(k));
        if let Some(m) = b.diff_ref(k) {
            d.place(0, 0, m, 1);
            d.place(2, 2, m, 1);
        }
        if let Some(m) = p.component_ref(k - 1) {
            d.place(0, 1, m, -1);
            d.place(2, 1, m, 1);
        }
        if let Some(m) = c.diff_ref(k - 1) {
            d.place(1, 1, m, -1);
        }
        diffs.push((k, d.build()));
        let mut u = BlockBuilder::new(ring, &sizes(k), &[a.rank(k)]);
        u.place(0, 0, &ctx.eta().component(k), 1);
        unit.push((k, u.build()));
        let mut e = BlockBuilder::new(ring, &[b.rank(k)], &sizes(k));
        e.place_identity(0, 0, 1);
        e.place_identity(0, 2, 1);
        aug.push((k, e.build()));
    }
    let complex = ChainComplex::new(ring, ranks, diffs)?;
    let unit = ChainMap::new(a.clone(), complex.clone(), unit)?;
    let aug = ChainMap::new(complex, b.clone(), aug)?;
    Ok(EtaObject::trusted(ctx, unit, aug))
}

/// `Σ_B f : (b, x, b') ↦ (b, f x, b')`.
pub fn sigma_b_map(f: &EtaMorphism) -> Result<EtaMorphism> {
    let s = sigma_b(f.source())?;
    let t = sigma_b(f.target())?;
    let ring = s.ring();
    let b = s.context().b();
    let (x, y) = (f.source().complex(), f.target().complex());
    let mut comps = Vec::new();
    for k in s.complex().degrees() {
        let mut m = BlockBuilder::new(ring, &[b.rank(k), y.rank(k - 1), b.rank(k)], &[b.rank(k), x.rank(k - 1), b.rank(k)]);
        m.place_identity(0, 0, 1);
        m.place(1, 1, &f.map().component(k - 1), 1);
        m.place_identity(2, 2, 1);
        comps.push((k, m.build()));
    }
    let map = ChainMap::new(s.complex().clone(), t.complex().clone(), comps)?;
    EtaMorphism::new(&s, &t, map)
}

/// `Σ_B` applied `m` times.
pub fn sigma_b_iter(x: &EtaObject, m: usize) -> Result<EtaObject> {
    let mut out = x.clone();
    for _ in 0..m {
        out = sigma_b(&out)?;
    }
    Ok(out)
}

/// The strictly commuting pushout square
///
/// ```text
///   X  --aug-->  B
///   |            | j_L
///  incl          v
///   v          Σ_B X
///  Cyl(aug) --j--^
/// ```
///
/// with `X({1}) = B`, `X({2}) = Cyl(aug)`, `X({1,2}) = Σ_B X`. The map
/// `j : (x, x', b) ↦ (p x, -x', b)` identifies `Σ_B X` with the pushout.
#[derive(Clone, Debug)]
pub struct SigmaSquare {
    pub vertices: [EtaObject; 4],
    /// `(∅ → {1}, ∅ → {2}, {1} → {1,2}, {2} → {1,2})`.
    pub edges: [EtaMorphism; 4],
}

impl SigmaSquare {
    pub fn new(x: &EtaObject) -> Result<SigmaSquare> {
        let ctx = x.context();
        let ring = x.ring();
        let b_raw = EtaObject::terminal_raw(ctx);
        let cyl = cylinder(x.aug())?;
        let cyl_obj = EtaObject::new(ctx, cyl.source_inclusion.compose(x.unit())?, cyl.projection.clone())?;
        let sigma = sigma_b(x)?;
        let (b, c) = (ctx.b(), x.complex());
        let mut jl = Vec::new();
        let mut jc = Vec::new();
        for k in sigma.complex().degrees() {
            let sizes = [b.rank(k), c.rank(k - 1), b.rank(k)];
            let mut m = BlockBuilder::new(ring, &sizes, &[b.rank(k)]);
            m.place_identity(0, 0, 1);
            jl.push((k, m.build()));
            let mut m = BlockBuilder::new(ring, &sizes, &[c.rank(k), c.rank(k - 1), b.rank(k)]);
            m.place(0, 0, &x.aug().component(k), 1);
            m.place_identity(1, 1, -1);
            m.place_identity(2, 2, 1);
            jc.push((k, m.build()));
        }
        let jl = ChainMap::new(b.clone(), sigma.complex().clone(), jl)?;
        let jc = ChainMap::new(cyl.complex.clone(), sigma.complex().clone(), jc)?;
        let edges = [
            EtaMorphism::new(x, &b_raw, x.aug().clone())?,
            EtaMorphism::new(x, &cyl_obj, cyl.source_inclusion)?,
            EtaMorphism::new(&b_raw, &sigma, jl)?,
            EtaMorphism::new(&cyl_obj, &sigma, jc)?,
        ];
        Ok(SigmaSquare {
            vertices: [x.clone(), b_raw, cyl_obj, sigma],
            edges,
        })
    }

    /// `F` applied to the square.
    pub fn image(&self, f: &dyn Functor) -> Result<CubicalDiagram> {
        let vs = self.vertices.iter().map(|v| apply1(f, v)).collect::<Result<Vec<_>>>()?;
        let es = self.edges.iter().map(|e| apply1_morphism(f, e)).collect::<Result<Vec<_>>>()?;
        CubicalDiagram::from_fn(
            2,
            |t| Ok(vs[t.bits].clone()),
            |t: Subset, i, _, _| {
                Ok(match (t.bits, i) {
                    (0, 0) => es[0].clone(),
                    (0, 1) => es[1].clone(),
                    (1, 1) => es[2].clone(),
                    _ => es[3].clone(),
                })
            },
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::{homology_all, hofib};
    use crate::cube::ifiber_closed;
    use crate::gen::Gen;
    use crate::linalg::Ring;
    use crate::source::functor::Identity;
    use crate::source::object::EtaContext;

    #[test]
    fn square_commutes_and_is_cartesian_for_identity() {
        let mut g = Gen::new(17);
        for ring in [Ring::Rationals, Ring::Integers] {
            let a = g.complex(ring, 0, 1, 2);
            let b = g.complex(ring, 0, 1, 2);
            let ctx = EtaContext::new(g.chain_map(&a, &b)).unwrap();
            let x = crate::source::object::cofibrant_replace(&EtaObject::terminal_raw(&ctx)).unwrap().object;
            let sq = SigmaSquare::new(&x).unwrap().image(&Identity).unwrap().validated().unwrap();
            assert!(homology_all(&ifiber_closed(&sq).unwrap()).unwrap().is_empty());
            let s = sigma_b(&x).unwrap();
            assert!(s.complex().validate().is_empty());
            let _ = hofib(s.aug()).unwrap();
        }
    }
}
