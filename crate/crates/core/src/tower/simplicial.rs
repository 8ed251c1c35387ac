use crate::chain::{ChainComplex, ChainMap};
use crate::error::{Error, Result};
use crate::linalg::{BlockBuilder, Ring};

/// A simplicial chain complex truncated at level `N`.
///
/// `faces[q][i] = d_i : level q -> level q-1` for `1 ≤ q ≤ N` (`faces[0]` is
/// empty) and `degeneracies[q][i] = s_i : level q -> level q+1` for `q < N`.
#[derive(Clone, Debug)]
pub struct SimplicialChainComplex {
    pub truncation: usize,
    pub levels: Vec<ChainComplex>,
    pub faces: Vec<Vec<ChainMap>>,
    pub degeneracies: Vec<Vec<ChainMap>>,
}

fn mismatch(name: String, a: &ChainMap, b: &ChainMap) -> Option<String> {
    crate::calculus::first_mismatch(a, b).map(|m| format!("{name}: {m}"))
}

impl SimplicialChainComplex {
    pub fn new(
        levels: Vec<ChainComplex>,
        faces: Vec<Vec<ChainMap>>,
        degeneracies: Vec<Vec<ChainMap>>,
    ) -> Result<SimplicialChainComplex> {
        let n = levels.len().checked_sub(1).ok_or_else(|| Error::Precondition("no levels".into()))?;
        let shape_ok = faces.len() == n + 1
            && degeneracies.len() == n
            && (0..=n).all(|q| faces[q].len() == if q == 0 { 0 } else { q + 1 })
            && (0..n).all(|q| degeneracies[q].len() == q + 1);
        if !shape_ok {
            return Err(Error::Precondition("wrong number of faces or degeneracies".into()));
        }
        for q in 0..=n {
            for d in &faces[q] {
                if d.source() != &levels[q] || d.target() != &levels[q - 1] {
                    return Err(Error::InvalidMap(format!("face at level {q} has the wrong ends")));
                }
            }
            if q < n {
                for s in &degeneracies[q] {
                    if s.source() != &levels[q] || s.target() != &levels[q + 1] {
                        return Err(Error::InvalidMap(format!("degeneracy at level {q} has the wrong ends")));
                    }
                }
            }
        }
        Ok(SimplicialChainComplex {
            truncation: n,
            levels,
            faces,
            degeneracies,
        })
    }

    /// Levels `C`, all faces and degeneracies the identity.
    pub fn constant(c: &ChainComplex, n: usize) -> SimplicialChainComplex {
        let id = ChainMap::identity(c);
        SimplicialChainComplex {
            truncation: n,
            levels: vec![c.clone(); n + 1],
            faces: (0..=n).map(|q| vec![id.clone(); if q == 0 { 0 } else { q + 1 }]).collect(),
            degeneracies: (0..n).map(|q| vec![id.clone(); q + 1]).collect(),
        }
    }

    pub fn ring(&self) -> Ring {
        self.levels[0].ring()
    }

    pub fn face(&self, q: usize, i: usize) -> &ChainMap {
        &self.faces[q][i]
    }

    pub fn degeneracy(&self, q: usize, i: usize) -> &ChainMap {
        &self.degeneracies[q][i]
    }

    /// Every violated identity among those whose maps all exist below the
    /// truncation, plus chain-map failures of the faces and degeneracies.
    pub fn validate(&self) -> Result<Vec<String>> {
        let n = self.truncation;
        let mut out = Vec::new();
        for q in 0..=n {
            let maps = self.faces[q].iter().map(|f| ("d", f));
            let maps = maps.chain(self.degeneracies.get(q).into_iter().flatten().map(|s| ("s", s)));
            for (i, (kind, f)) in maps.enumerate() {
                for v in f.validate() {
                    out.push(format!("{kind} #{i} at level {q}: {} (degree {})", v.what, v.degree));
                }
            }
        }
        // d_i d_j = d_{j-1} d_i, i < j, on level q
        for q in 2..=n {
            for j in 1..=q {
                for i in 0..j {
                    let a = self.face(q - 1, i).compose(self.face(q, j))?;
                    let b = self.face(q - 1, j - 1).compose(self.face(q, i))?;
                    out.extend(mismatch(format!("d{i}d{j} = d{}d{i} at level {q}", j - 1), &a, &b));
                }
            }
        }
        // s_i s_j = s_{j+1} s_i, i ≤ j, on level q
        for q in 0..n.saturating_sub(1) {
            for j in 0..=q {
                for i in 0..=j {
                    let a = self.degeneracy(q + 1, i).compose(self.degeneracy(q, j))?;
                    let b = self.degeneracy(q + 1, j + 1).compose(self.degeneracy(q, i))?;
                    out.extend(mismatch(format!("s{i}s{j} = s{}s{i} at level {q}", j + 1), &a, &b));
                }
            }
        }
        // d_i s_j on level q
        for q in 0..n {
            let id = ChainMap::identity(&self.levels[q]);
            for j in 0..=q {
                for i in 0..=q + 1 {
                    let a = self.face(q + 1, i).compose(self.degeneracy(q, j))?;
                    let (b, label) = if i < j {
                        (self.degeneracy(q - 1, j - 1).compose(self.face(q, i))?, format!("s{}d{i}", j - 1))
                    } else if i == j || i == j + 1 {
                        (id.clone(), "id".to_string())
                    } else {
                        (self.degeneracy(q - 1, j).compose(self.face(q, i - 1))?, format!("s{j}d{}", i - 1))
                    };
                    out.extend(mismatch(format!("d{i}s{j} = {label} at level {q}"), &a, &b));
                }
            }
        }
        Ok(out)
    }

    /// `Σ_i (-1)^i d_i : level q -> level q-1`.
    pub fn alternating_face(&self, q: usize) -> Result<ChainMap> {
        let mut acc = ChainMap::zero(&self.levels[q], &self.levels[q - 1]);
        for (i, d) in self.faces[q].iter().enumerate() {
            acc = if i % 2 == 0 { acc.add(d)? } else { acc.sub(d)? };
        }
        Ok(acc)
    }
}

/// Truncated fat realization: the direct-sum total complex with
/// `|S|_m = ⊕_q S_q,(m-q)` and `D = (-1)^q d_int + Σ (-1)^i d_i`.
#[derive(Clone, Debug)]
pub struct FatRealization {
    pub complex: ChainComplex,
    pub truncation: usize,
    /// Inclusion of level 0.
    pub level_zero: ChainMap,
}

impl FatRealization {
    /// Highest degree where the truncation does not affect homology.
    pub fn valid_up_to(&self) -> i64 {
        self.truncation as i64 - 1
    }
}

pub fn fat_realization(s: &SimplicialChainComplex) -> Result<FatRealization> {
    let ring = s.ring();
    let n = s.truncation;
    let horizontal = (1..=n).map(|q| s.alternating_face(q)).collect::<Result<Vec<_>>>()?;
    let sizes = |m: i64| (0..=n).map(|q| s.levels[q].rank(m - q as i64)).collect::<Vec<_>>();
    let mut degrees = std::collections::BTreeSet::new();
    for (q, l) in s.levels.iter().enumerate() {
        degrees.extend(l.degrees().flat_map(|k| [k + q as i64, k + q as i64 + 1]));
    }
    let mut ranks = Vec::new();
    let mut diffs = Vec::new();
    for &m in &degrees {
        ranks.push((m, sizes(m).iter().sum()));
        let mut b = BlockBuilder::new(ring, &sizes(m - 1), &sizes(m));
        for q in 0..=n {
            let k = m - q as i64;
            if let Some(d) = s.levels[q].diff_ref(k) {
                b.place(q, q, d, if q % 2 == 0 { 1 } else { -1 });
            }
            if q > 0 {
                if let Some(h) = horizontal[q - 1].component_ref(k) {
                    b.place(q - 1, q, h, 1);
                }
            }
        }
        diffs.push((m, b.build()));
    }
    let complex = ChainComplex::new(ring, ranks, diffs)?;
    let comps = s.levels[0]
        .degrees()
        .map(|k| {
            let mut b = BlockBuilder::new(ring, &sizes(k), &[s.levels[0].rank(k)]);
            b.place_identity(0, 0, 1);
            (k, b.build())
        })
        .collect::<Vec<_>>();
    let level_zero = ChainMap::new(s.levels[0].clone(), complex.clone(), comps)?;
    Ok(FatRealization {
        complex,
        truncation: n,
        level_zero,
    })
}

/// `|f| : |S| -> |T|` from levelwise maps `f_q : S_q -> T_q` (assumed to
/// commute with faces).
pub fn realization_map(
    rs: &FatRealization,
    s: &SimplicialChainComplex,
    rt: &FatRealization,
    t: &SimplicialChainComplex,
    maps: &[ChainMap],
) -> Result<ChainMap> {
    if maps.len() != s.truncation + 1 || s.truncation != t.truncation {
        return Err(Error::Precondition("one map per level, equal truncations".into()));
    }
    let ring = s.ring();
    let n = s.truncation;
    let comps = rs
        .complex
        .degrees()
        .map(|m| {
            let rows: Vec<usize> = (0..=n).map(|q| t.levels[q].rank(m - q as i64)).collect();
            let cols: Vec<usize> = (0..=n).map(|q| s.levels[q].rank(m - q as i64)).collect();
            let mut b = BlockBuilder::new(ring, &rows, &cols);
            for (q, f) in maps.iter().enumerate() {
                if let Some(c) = f.component_ref(m - q as i64) {
                    b.place(q, q, c, 1);
                }
            }
            (m, b.build())
        })
        .collect::<Vec<_>>();
    ChainMap::new(rs.complex.clone(), rt.complex.clone(), comps)
}

/// The map `|S| -> C` that is `e` on level 0 and zero on higher levels.
pub fn augmentation_map(r: &FatRealization, s: &SimplicialChainComplex, e: &ChainMap) -> Result<ChainMap> {
    if e.source() != &s.levels[0] {
        return Err(Error::InvalidMap("augmentation must start at level 0".into()));
    }
    let ring = s.ring();
    let n = s.truncation;
    let comps = r
        .complex
        .degrees()
        .map(|m| {
            let sizes: Vec<usize> = (0..=n).map(|q| s.levels[q].rank(m - q as i64)).collect();
            let mut b = BlockBuilder::new(ring, &[e.target().rank(m)], &sizes);
            if let Some(c) = e.component_ref(m) {
                b.place(0, 0, c, 1);
            }
            (m, b.build())
        })
        .collect::<Vec<_>>();
    ChainMap::new(r.complex.clone(), e.target().clone(), comps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::betti_numbers;
    use crate::gen::Gen;

    #[test]
    fn constant_object() {
        let mut g = Gen::new(5);
        let c = g.complex(Ring::Rationals, -1, 1, 2);
        for n in 0..4 {
            let s = SimplicialChainComplex::constant(&c, n);
            assert!(s.validate().unwrap().is_empty());
            let r = fat_realization(&s).unwrap();
            assert!(r.complex.validate().is_empty());
            let h = betti_numbers(&r.complex).unwrap();
            let hc = betti_numbers(&c).unwrap();
            for k in -1..=r.valid_up_to() - 1 {
                assert_eq!(h.get(&k), hc.get(&k), "n={n} k={k}");
            }
        }
    }

    #[test]
    fn zero_truncation_is_level_zero() {
        let mut g = Gen::new(6);
        let c = g.complex(Ring::Rationals, 0, 2, 2);
        let r = fat_realization(&SimplicialChainComplex::constant(&c, 0)).unwrap();
        assert_eq!(r.complex, c);
    }
}
