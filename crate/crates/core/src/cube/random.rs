use crate::chain::ChainMap;
use crate::cube::{CubeMap, CubicalDiagram, Subset};
use crate::gen::{Gen, LinearSystem};
use crate::linalg::{Matrix, Ring};

/// A random functorial `n`-cube with vertices supported in `lo..=hi`.
///
/// Built recursively as a random natural map between two random
/// `(n-1)`-cubes; half of the time the target is a copy of the source so that
/// the solution space is never just zero.
pub fn random_cube(g: &mut Gen, ring: Ring, n: usize, lo: i64, hi: i64, max_rank: usize) -> CubicalDiagram {
    if n == 0 {
        return CubicalDiagram::point(&g.complex(ring, lo, hi, max_rank));
    }
    let y1 = random_cube(g, ring, n - 1, lo, hi, max_rank);
    let y2 = if g.chance(0.5) {
        y1.clone()
    } else {
        random_cube(g, ring, n - 1, lo, hi, max_rank)
    };
    let f = random_cube_map(g, &y1, &y2);
    CubicalDiagram::from_cube_map(&f).expect("generated cube is well formed")
}

/// A random natural transformation `x -> y`.
pub fn random_cube_map(g: &mut Gen, x: &CubicalDiagram, y: &CubicalDiagram) -> CubeMap {
    let ring = x.ring();
    let n = x.n();
    let mut sys = LinearSystem::new(ring);
    // per vertex: list of (degree, handle)
    let mut handles: Vec<Vec<(i64, usize)>> = Vec::new();
    for t in Subset::all(n) {
        let (s, d) = (x.vertex(t), y.vertex(t));
        handles.push(
            s.degrees()
                .filter(|&k| d.rank(k) > 0)
                .map(|k| (k, sys.unknown(d.rank(k), s.rank(k))))
                .collect(),
        );
    }
    let find = |t: Subset, k: i64| handles[t.bits].iter().find(|h| h.0 == k).map(|h| h.1);
    for t in Subset::all(n) {
        let (s, d) = (x.vertex(t), y.vertex(t));
        let mut ks: Vec<i64> = handles[t.bits].iter().flat_map(|h| [h.0, h.0 + 1]).collect();
        ks.sort_unstable();
        ks.dedup();
        for k in ks {
            let mut terms = Vec::new();
            if let Some(b) = find(t, k) {
                terms.push((d.diff(k), b, Matrix::identity(ring, s.rank(k)), 1));
            }
            if let Some(b) = find(t, k - 1) {
                terms.push((Matrix::identity(ring, d.rank(k - 1)), b, s.diff(k), -1));
            }
            sys.equation(&terms);
        }
        for i in (0..n).filter(|&i| !t.contains(i)) {
            let u = t.with(i);
            let mut ks: Vec<i64> = handles[t.bits].iter().chain(&handles[u.bits]).map(|h| h.0).collect();
            ks.sort_unstable();
            ks.dedup();
            for k in ks {
                // y_edge φ_T - φ_U x_edge = 0 in degree k
                let mut terms = Vec::new();
                if let Some(b) = find(t, k) {
                    terms.push((y.edge(t, i).component(k), b, Matrix::identity(ring, x.vertex(t).rank(k)), 1));
                }
                if let Some(b) = find(u, k) {
                    terms.push((Matrix::identity(ring, y.vertex(u).rank(k)), b, x.edge(t, i).component(k), -1));
                }
                sys.equation(&terms);
            }
        }
    }
    let sol = sys.random_solution(g);
    let comps = Subset::all(n)
        .map(|t| {
            let c = handles[t.bits].iter().map(|&(k, b)| (k, sol[b].clone()));
            ChainMap::new(x.vertex(t).clone(), y.vertex(t).clone(), c).expect("generated shapes agree")
        })
        .collect();
    CubeMap {
        source: x.clone(),
        target: y.clone(),
        comps,
    }
}
