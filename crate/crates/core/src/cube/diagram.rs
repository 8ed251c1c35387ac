use crate::chain::{ChainComplex, ChainMap, Violation};
use crate::error::{Error, Result};
use crate::linalg::Ring;

/// A subset of `{0, .., n-1}` as a bitmask (coordinate `i` is bit `i`).
///
/// Coordinates are 0-based here; user-facing text numbers them from 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Subset {
    pub n: usize,
    pub bits: usize,
}

impl Subset {
    pub fn new(n: usize, bits: usize) -> Subset {
        debug_assert!(bits < (1 << n));
        Subset { n, bits }
    }

    pub fn empty(n: usize) -> Subset {
        Subset { n, bits: 0 }
    }

    pub fn full(n: usize) -> Subset {
        Subset { n, bits: (1 << n) - 1 }
    }

    pub fn all(n: usize) -> impl Iterator<Item = Subset> {
        (0..1usize << n).map(move |bits| Subset { n, bits })
    }

    pub fn len(self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.bits == 0
    }

    pub fn contains(self, i: usize) -> bool {
        self.bits >> i & 1 == 1
    }

    pub fn with(self, i: usize) -> Subset {
        Subset::new(self.n, self.bits | 1 << i)
    }

    pub fn without(self, i: usize) -> Subset {
        Subset::new(self.n, self.bits & !(1 << i))
    }

    pub fn elements(self) -> impl Iterator<Item = usize> {
        (0..self.n).filter(move |&i| self.contains(i))
    }

    /// `|{s ∈ T : s > i}|`, the sign exponent of the edge `T -> T ∪ {i}`.
    pub fn sgn_edge(self, i: usize) -> usize {
        (self.bits >> (i + 1)).count_ones() as usize
    }

    /// Bitstring with coordinate 1 leftmost, e.g. `"101"` for `{1, 3}`.
    pub fn key(self) -> String {
        (0..self.n).map(|i| if self.contains(i) { '1' } else { '0' }).collect()
    }

    pub fn parse_key(s: &str) -> Result<Subset> {
        let mut bits = 0;
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => bits |= 1 << i,
                _ => return Err(Error::Parse(format!("bad subset key {s:?}"))),
            }
        }
        Ok(Subset { n: s.len(), bits })
    }
}

/// A functor from the subset lattice of `{0, .., n-1}` to chain complexes,
/// given by vertices and the single-coordinate edge maps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubicalDiagram {
    n: usize,
    vertices: Vec<ChainComplex>,
    /// `edges[T * n + i]` for `i ∉ T`.
    edges: Vec<Option<ChainMap>>,
}

impl CubicalDiagram {
    /// Builds a cube from a vertex function and an edge function `(T, i)`.
    /// Checks endpoints only; see [`CubicalDiagram::validate`].
    pub fn from_fn<V, E>(n: usize, mut vertex: V, mut edge: E) -> Result<CubicalDiagram>
    where
        V: FnMut(Subset) -> Result<ChainComplex>,
        E: FnMut(Subset, usize, &ChainComplex, &ChainComplex) -> Result<ChainMap>,
    {
        let vertices = Subset::all(n).map(&mut vertex).collect::<Result<Vec<_>>>()?;
        let mut edges = vec![None; (1 << n) * n];
        for t in Subset::all(n) {
            for i in (0..n).filter(|&i| !t.contains(i)) {
                let (s, d) = (&vertices[t.bits], &vertices[t.with(i).bits]);
                let f = edge(t, i, s, d)?;
                if f.source() != s || f.target() != d {
                    return Err(Error::InvalidCube(format!(
                        "edge {} -> {} has the wrong endpoints",
                        t.key(),
                        t.with(i).key()
                    )));
                }
                edges[t.bits * n + i] = Some(f);
            }
        }
        Ok(CubicalDiagram { n, vertices, edges })
    }

    /// The 1-cube `f`.
    pub fn from_map(f: &ChainMap) -> CubicalDiagram {
        CubicalDiagram {
            n: 1,
            vertices: vec![f.source().clone(), f.target().clone()],
            edges: vec![Some(f.clone()), None],
        }
    }

    /// The 0-cube on `x`.
    pub fn point(x: &ChainComplex) -> CubicalDiagram {
        CubicalDiagram {
            n: 0,
            vertices: vec![x.clone()],
            edges: Vec::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ring(&self) -> Ring {
        self.vertices[0].ring()
    }

    pub fn vertex(&self, t: Subset) -> &ChainComplex {
        &self.vertices[t.bits]
    }

    pub fn edge(&self, t: Subset, i: usize) -> &ChainMap {
        self.edges[t.bits * self.n + i].as_ref().expect("edge T -> T ∪ {i} needs i ∉ T")
    }

    /// Every chain-complex, chain-map and commuting-square violation.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for t in Subset::all(self.n) {
            for v in self.vertex(t).validate() {
                out.push(Violation {
                    what: format!("vertex {}: {}", t.key(), v.what),
                    degree: v.degree,
                });
            }
            for i in (0..self.n).filter(|&i| !t.contains(i)) {
                for v in self.edge(t, i).validate() {
                    out.push(Violation {
                        what: format!("edge {}+{}: {}", t.key(), i + 1, v.what),
                        degree: v.degree,
                    });
                }
                for j in (i + 1..self.n).filter(|&j| !t.contains(j)) {
                    let a = self.edge(t.with(i), j).compose(self.edge(t, i));
                    let b = self.edge(t.with(j), i).compose(self.edge(t, j));
                    let (Ok(a), Ok(b)) = (a, b) else {
                        out.push(Violation {
                            what: format!("square at {} in {},{}: shape mismatch", t.key(), i + 1, j + 1),
                            degree: 0,
                        });
                        continue;
                    };
                    let diff = a.sub(&b).expect("same ends");
                    let first = diff.stored_components().next().map(|(k, _)| k);
                    if let Some(k) = first {
                        out.push(Violation {
                            what: format!("square at {} in directions {},{} does not commute", t.key(), i + 1, j + 1),
                            degree: k,
                        });
                    }
                }
            }
        }
        out
    }

    pub fn validated(self) -> Result<CubicalDiagram> {
        match self.validate().first() {
            None => Ok(self),
            Some(v) => Err(Error::InvalidCube(format!("{} (degree {})", v.what, v.degree))),
        }
    }

    /// The `(n-1)`-face with coordinate `i` absent (`side = 0`) or present
    /// (`side = 1`).
    pub fn face(&self, i: usize, side: u8) -> Result<CubicalDiagram> {
        if i >= self.n || side > 1 {
            return Err(Error::InvalidCube(format!("no face ({}, {side}) of an {}-cube", i + 1, self.n)));
        }
        let lift = |s: Subset| -> Subset {
            let low = s.bits & ((1 << i) - 1);
            let high = (s.bits >> i) << (i + 1);
            Subset::new(self.n, low | high | (side as usize) << i)
        };
        let lift_coord = |j: usize| if j < i { j } else { j + 1 };
        CubicalDiagram::from_fn(
            self.n - 1,
            |s| Ok(self.vertex(lift(s)).clone()),
            |s, j, _, _| Ok(self.edge(lift(s), lift_coord(j)).clone()),
        )
    }

    /// The map of `(n-1)`-cubes `face(i, 0) -> face(i, 1)` given by the
    /// edges in direction `i`.
    pub fn split(&self, i: usize) -> Result<CubeMap> {
        let y1 = self.face(i, 0)?;
        let y2 = self.face(i, 1)?;
        let comps = Subset::all(self.n - 1)
            .map(|s| {
                let low = s.bits & ((1 << i) - 1);
                let high = (s.bits >> i) << (i + 1);
                self.edge(Subset::new(self.n, low | high), i).clone()
            })
            .collect();
        Ok(CubeMap {
            source: y1,
            target: y2,
            comps,
        })
    }

    /// Inverse of [`CubicalDiagram::split`] for the top coordinate: the
    /// `(n+1)`-cube whose last direction is `f`.
    pub fn from_cube_map(f: &CubeMap) -> Result<CubicalDiagram> {
        let n = f.source.n;
        let top = 1 << n;
        CubicalDiagram::from_fn(
            n + 1,
            |t| {
                Ok(if t.bits & top == 0 {
                    f.source.vertex(Subset::new(n, t.bits)).clone()
                } else {
                    f.target.vertex(Subset::new(n, t.bits & !top)).clone()
                })
            },
            |t, i, _, _| {
                Ok(if i == n {
                    f.comps[t.bits].clone()
                } else if t.bits & top == 0 {
                    f.source.edge(Subset::new(n, t.bits), i).clone()
                } else {
                    f.target.edge(Subset::new(n, t.bits & !top), i).clone()
                })
            },
        )
    }
}

/// A natural transformation of `n`-cubes, one chain map per vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubeMap {
    pub source: CubicalDiagram,
    pub target: CubicalDiagram,
    /// Indexed by subset bitmask.
    pub comps: Vec<ChainMap>,
}

impl CubeMap {
    pub fn component(&self, t: Subset) -> &ChainMap {
        &self.comps[t.bits]
    }

    pub fn identity(x: &CubicalDiagram) -> CubeMap {
        CubeMap {
            source: x.clone(),
            target: x.clone(),
            comps: x.vertices.iter().map(ChainMap::identity).collect(),
        }
    }

    /// Component and naturality violations.
    pub fn validate(&self) -> Vec<Violation> {
        let n = self.source.n;
        let mut out = Vec::new();
        for t in Subset::all(n) {
            let f = self.component(t);
            if f.source() != self.source.vertex(t) || f.target() != self.target.vertex(t) {
                out.push(Violation {
                    what: format!("component at {} has the wrong endpoints", t.key()),
                    degree: 0,
                });
                continue;
            }
            out.extend(f.validate().into_iter().map(|v| Violation {
                what: format!("component {}: {}", t.key(), v.what),
                degree: v.degree,
            }));
            for i in (0..n).filter(|&i| !t.contains(i)) {
                let a = self.target.edge(t, i).compose(f).expect("ends agree");
                let b = self.component(t.with(i)).compose(self.source.edge(t, i)).expect("ends agree");
                let diff = a.sub(&b).expect("same ends");
                let first = diff.stored_components().next().map(|(k, _)| k);
                if let Some(k) = first {
                    out.push(Violation {
                        what: format!("not natural along {}+{}", t.key(), i + 1),
                        degree: k,
                    });
                }
            }
        }
        out
    }
}
