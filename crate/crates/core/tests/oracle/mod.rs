//! A small independent model used as an oracle: sparse matrices mod a large
//! prime, complexes of vector spaces, and functors of finite-dimensional
//! vector spaces `V ↦ V^{⊗d}` and `V ↦ ⊥_n H(V)`. Shares no code with the
//! library; its sign conventions are its own.
#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap};
use std::rc::Rc;

pub const P: u64 = 2_147_483_647;

fn modp(v: i64) -> u64 {
    v.rem_euclid(P as i64) as u64
}

/// `n / d` in F_P, as a representative in `[0, P)`.
pub fn fraction(n: i64, d: i64) -> i64 {
    (modp(n) * inv(modp(d)) % P) as i64
}

fn inv(a: u64) -> u64 {
    let (mut base, mut e, mut acc) = (a % P, P - 2, 1u64);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % P;
        }
        base = base * base % P;
        e >>= 1;
    }
    acc
}

/// Row-major sparse matrix over F_P; rows sorted by column, no zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Sparse {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Vec<(usize, u64)>>,
}

impl Sparse {
    pub fn from_triplets(rows: usize, cols: usize, t: impl IntoIterator<Item = (usize, usize, i64)>) -> Sparse {
        let mut acc: Vec<BTreeMap<usize, u64>> = vec![BTreeMap::new(); rows];
        for (i, j, v) in t {
            assert!(i < rows && j < cols, "entry ({i}, {j}) outside {rows}x{cols}");
            let e = acc[i].entry(j).or_insert(0);
            *e = (*e + modp(v)) % P;
        }
        let data = acc.into_iter().map(|r| r.into_iter().filter(|&(_, v)| v != 0).collect()).collect();
        Sparse { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Sparse {
        Sparse { rows, cols, data: vec![Vec::new(); rows] }
    }

    pub fn identity(n: usize) -> Sparse {
        Sparse::from_triplets(n, n, (0..n).map(|i| (i, i, 1)))
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, u64)> + '_ {
        self.data.iter().enumerate().flat_map(|(i, r)| r.iter().map(move |&(j, v)| (i, j, v)))
    }

    pub fn kron(&self, b: &Sparse) -> Sparse {
        let t = self.triplets().flat_map(|(i, j, v)| {
            b.triplets()
                .map(move |(k, l, w)| (i * b.rows + k, j * b.cols + l, (v * w % P) as i64))
        });
        Sparse::from_triplets(self.rows * b.rows, self.cols * b.cols, t.collect::<Vec<_>>())
    }

    pub fn rank(&self) -> usize {
        let mut pivots: HashMap<usize, Vec<(usize, u64)>> = HashMap::new();
        for r in &self.data {
            let mut row = r.clone();
            while let Some(&(c, v)) = row.first() {
                match pivots.get(&c) {
                    Some(p) => row = axpy(&row, P - v, p),
                    None => {
                        let s = inv(v);
                        pivots.insert(c, row.iter().map(|&(j, w)| (j, w * s % P)).collect());
                        break;
                    }
                }
            }
        }
        pivots.len()
    }
}

/// `x + a y` on sorted sparse rows.
fn axpy(x: &[(usize, u64)], a: u64, y: &[(usize, u64)]) -> Vec<(usize, u64)> {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let (cx, cy) = (x.get(i).map_or(usize::MAX, |e| e.0), y.get(j).map_or(usize::MAX, |e| e.0));
        let (c, v) = if cx < cy {
            i += 1;
            (cx, x[i - 1].1)
        } else if cy < cx {
            j += 1;
            (cy, a * y[j - 1].1 % P)
        } else {
            i += 1;
            j += 1;
            (cx, (x[i - 1].1 + a * y[j - 1].1) % P)
        };
        if v != 0 {
            out.push((c, v));
        }
    }
    out
}

/// Accumulates blocks into one sparse matrix.
pub struct Blocks {
    rows: usize,
    cols: usize,
    t: Vec<(usize, usize, i64)>,
}

impl Blocks {
    pub fn new(rows: usize, cols: usize) -> Blocks {
        Blocks { rows, cols, t: Vec::new() }
    }
    pub fn put(&mut self, r0: usize, c0: usize, m: &Sparse, sign: i64) {
        for (i, j, v) in m.triplets() {
            self.t.push((r0 + i, c0 + j, sign * v as i64));
        }
    }
    pub fn done(self) -> Sparse {
        Sparse::from_triplets(self.rows, self.cols, self.t)
    }
}

/// Complex of F_P-vector spaces; `d[k] : C_k -> C_{k-1}`.
#[derive(Clone, Debug, Default)]
pub struct Cx {
    pub dims: BTreeMap<i64, usize>,
    pub d: BTreeMap<i64, Sparse>,
}

impl Cx {
    pub fn dim(&self, k: i64) -> usize {
        self.dims.get(&k).copied().unwrap_or(0)
    }

    pub fn diff(&self, k: i64) -> Sparse {
        self.d.get(&k).cloned().unwrap_or_else(|| Sparse::zeros(self.dim(k - 1), self.dim(k)))
    }

    pub fn in_degree_zero(n: usize) -> Cx {
        let mut c = Cx::default();
        if n > 0 {
            c.dims.insert(0, n);
        }
        c
    }

    fn degrees(&self) -> Vec<i64> {
        self.dims.keys().copied().collect()
    }

    pub fn betti(&self) -> BTreeMap<i64, usize> {
        let rank = |k: i64| self.d.get(&k).map_or(0, |m| m.rank());
        self.dims
            .iter()
            .map(|(&k, &n)| (k, n - rank(k) - rank(k + 1)))
            .filter(|&(_, b)| b > 0)
            .collect()
    }

    /// `d_{k-1} d_k = 0` everywhere.
    pub fn is_complex(&self) -> bool {
        self.d.iter().all(|(k, m)| match self.d.get(&(k - 1)) {
            None => true,
            Some(n) => mul(n, m).data.iter().all(Vec::is_empty),
        })
    }
}

pub fn mul(a: &Sparse, b: &Sparse) -> Sparse {
    let mut t = Vec::new();
    for (i, r) in a.data.iter().enumerate() {
        let mut acc: BTreeMap<usize, u64> = BTreeMap::new();
        for &(k, v) in r {
            for &(j, w) in &b.data[k] {
                let e = acc.entry(j).or_insert(0);
                *e = (*e + v * w) % P;
            }
        }
        t.extend(acc.into_iter().map(|(j, v)| (i, j, v as i64)));
    }
    Sparse::from_triplets(a.rows, b.cols, t)
}

/// Degreewise map between two complexes.
pub type Map = BTreeMap<i64, Sparse>;

/// Total complex of an `n`-cube: the summand at `U` sits in degree
/// `k - |U|`, with `d = (-1)^{|U|} d_U + Σ_{i ∉ U} (-1)^{|U ∩ [0, i)|} e_{U,i}`.
pub fn cube_total(n: usize, vertex: &[Rc<Cx>], edge: &dyn Fn(usize, usize) -> Rc<Map>) -> Cx {
    let size = |u: usize| (u as u32).count_ones() as i64;
    let mut degrees = std::collections::BTreeSet::new();
    for (u, v) in vertex.iter().enumerate() {
        degrees.extend(v.degrees().into_iter().map(|k| k - size(u)));
    }
    let offsets = |k: i64| {
        let mut o = vec![0];
        for (u, v) in vertex.iter().enumerate() {
            o.push(o[u] + v.dim(k + size(u)));
        }
        o
    };
    let mut out = Cx::default();
    for &k in &degrees {
        let (src, tgt) = (offsets(k), offsets(k - 1));
        out.dims.insert(k, src[vertex.len()]);
        let mut b = Blocks::new(tgt[vertex.len()], src[vertex.len()]);
        for (u, v) in vertex.iter().enumerate() {
            let j = k + size(u);
            if let Some(m) = v.d.get(&j) {
                b.put(tgt[u], src[u], m, if size(u) % 2 == 0 { 1 } else { -1 });
            }
            for i in (0..n).filter(|i| u >> i & 1 == 0) {
                let w = u | 1 << i;
                let sign = if (u & ((1 << i) - 1)).count_ones() % 2 == 0 { 1 } else { -1 };
                if let Some(m) = edge(u, i).get(&j) {
                    b.put(tgt[w], src[u], m, sign);
                }
            }
        }
        out.d.insert(k, b.done());
    }
    out.dims.retain(|_, n| *n > 0);
    out
}

/// Block-diagonal map between two cube totals from vertexwise maps.
pub fn cube_total_map(src: &[Rc<Cx>], tgt: &[Rc<Cx>], maps: &[Rc<Map>], degrees: &[i64]) -> Map {
    let size = |u: usize| (u as u32).count_ones() as i64;
    let offsets = |vs: &[Rc<Cx>], k: i64| {
        let mut o = vec![0];
        for (u, v) in vs.iter().enumerate() {
            o.push(o[u] + v.dim(k + size(u)));
        }
        o
    };
    let mut out = Map::new();
    for &k in degrees {
        let (so, to) = (offsets(src, k), offsets(tgt, k));
        let mut b = Blocks::new(to[tgt.len()], so[src.len()]);
        for (u, m) in maps.iter().enumerate() {
            if let Some(c) = m.get(&(k + size(u))) {
                b.put(to[u], so[u], c, 1);
            }
        }
        out.insert(k, b.done());
    }
    out
}

/// Functors from finite-dimensional vector spaces (in degree 0) to complexes.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Fun {
    /// `V ↦ V^{⊗d}`
    Tensor(usize),
    /// `V ↦ ⊥_n H(V)`: the cube `U ↦ H(V^{n - |U|})` of coordinate
    /// projections.
    Perp(usize, Box<Fun>),
}

/// Natural transformations between such functors.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Nat {
    /// `ε : ⊥_n H -> H`, `H(fold)` on the `∅` summand.
    Eps(usize, Fun),
    /// `⊥_n θ`.
    PerpOf(usize, Box<Nat>),
}

impl Nat {
    pub fn source(&self) -> Fun {
        match self {
            Nat::Eps(n, h) => Fun::Perp(*n, Box::new(h.clone())),
            Nat::PerpOf(n, t) => Fun::Perp(*n, Box::new(t.source())),
        }
    }
    pub fn target(&self) -> Fun {
        match self {
            Nat::Eps(_, h) => h.clone(),
            Nat::PerpOf(n, t) => Fun::Perp(*n, Box::new(t.target())),
        }
    }
}

/// `V^{n} -> V^{n-1}` dropping block `i` (blocks of size `k`).
fn drop_block(k: usize, n: usize, i: usize) -> Sparse {
    let t = (0..n).filter(|&b| b != i).enumerate().flat_map(|(nb, b)| (0..k).map(move |e| (nb * k + e, b * k + e, 1)));
    Sparse::from_triplets(k * (n - 1), k * n, t.collect::<Vec<_>>())
}

fn fold(k: usize, n: usize) -> Sparse {
    Sparse::from_triplets(k, k * n, (0..n).flat_map(|b| (0..k).map(move |e| (e, b * k + e, 1))).collect::<Vec<_>>())
}

fn direct_sum_power(f: &Sparse, m: usize) -> Sparse {
    Sparse::identity(m).kron(f)
}

#[derive(Default)]
pub struct Model {
    objs: HashMap<(Fun, usize), Rc<Cx>>,
    mors: HashMap<(Fun, Sparse), Rc<Map>>,
    nats: HashMap<(Nat, usize), Rc<Map>>,
}

fn subsets_without(n: usize, u: usize) -> usize {
    n - (u as u32).count_ones() as usize
}

impl Model {
    pub fn obj(&mut self, f: &Fun, k: usize) -> Rc<Cx> {
        if let Some(c) = self.objs.get(&(f.clone(), k)) {
            return c.clone();
        }
        let c = match f {
            Fun::Tensor(d) => Cx::in_degree_zero(k.pow(*d as u32)),
            Fun::Perp(n, h) => {
                let n = *n;
                let vs: Vec<Rc<Cx>> = (0..1usize << n).map(|u| self.obj(h, k * subsets_without(n, u))).collect();
                let mut edges = HashMap::new();
                for u in 0..1usize << n {
                    for i in (0..n).filter(|i| u >> i & 1 == 0) {
                        // position of slot i among the slots not in u
                        let pos = (0..i).filter(|j| u >> j & 1 == 0).count();
                        let e = drop_block(k, subsets_without(n, u), pos);
                        edges.insert((u, i), self.mor(h, &e));
                    }
                }
                cube_total(n, &vs, &|u, i| edges[&(u, i)].clone())
            }
        };
        let c = Rc::new(c);
        self.objs.insert((f.clone(), k), c.clone());
        c
    }

    /// `F(g)` for a linear map `g : k^a -> k^b` given as a `b x a` matrix.
    pub fn mor(&mut self, f: &Fun, g: &Sparse) -> Rc<Map> {
        if let Some(m) = self.mors.get(&(f.clone(), g.clone())) {
            return m.clone();
        }
        let m = match f {
            Fun::Tensor(d) => {
                let mut acc = Sparse::identity(1);
                for _ in 0..*d {
                    acc = acc.kron(g);
                }
                let mut m = Map::new();
                m.insert(0, acc);
                m
            }
            Fun::Perp(n, h) => {
                let n = *n;
                let (a, b) = (g.cols, g.rows);
                let maps: Vec<Rc<Map>> =
                    (0..1usize << n).map(|u| self.mor(h, &direct_sum_power(g, subsets_without(n, u)))).collect();
                let src: Vec<Rc<Cx>> = (0..1usize << n).map(|u| self.obj(h, a * subsets_without(n, u))).collect();
                let tgt: Vec<Rc<Cx>> = (0..1usize << n).map(|u| self.obj(h, b * subsets_without(n, u))).collect();
                let degrees: Vec<i64> = self.obj(f, a).dims.keys().copied().collect();
                cube_total_map(&src, &tgt, &maps, &degrees)
            }
        };
        let m = Rc::new(m);
        self.mors.insert((f.clone(), g.clone()), m.clone());
        m
    }

    pub fn nat(&mut self, t: &Nat, k: usize) -> Rc<Map> {
        if let Some(m) = self.nats.get(&(t.clone(), k)) {
            return m.clone();
        }
        let m = match t {
            Nat::Eps(n, h) => {
                let src = self.obj(&t.source(), k);
                let tgt = self.obj(h, k);
                let hf = self.mor(h, &fold(k, *n));
                let mut m = Map::new();
                for &j in src.dims.keys() {
                    // the ∅ summand comes first
                    let mut b = Blocks::new(tgt.dim(j), src.dim(j));
                    if let Some(c) = hf.get(&j) {
                        b.put(0, 0, c, 1);
                    }
                    m.insert(j, b.done());
                }
                m
            }
            Nat::PerpOf(n, inner) => {
                let n = *n;
                let (hs, ht) = (inner.source(), inner.target());
                let maps: Vec<Rc<Map>> = (0..1usize << n).map(|u| self.nat(inner, k * subsets_without(n, u))).collect();
                let src: Vec<Rc<Cx>> = (0..1usize << n).map(|u| self.obj(&hs, k * subsets_without(n, u))).collect();
                let tgt: Vec<Rc<Cx>> = (0..1usize << n).map(|u| self.obj(&ht, k * subsets_without(n, u))).collect();
                let degrees: Vec<i64> = self.obj(&t.source(), k).dims.keys().copied().collect();
                cube_total_map(&src, &tgt, &maps, &degrees)
            }
        };
        let m = Rc::new(m);
        self.nats.insert((t.clone(), k), m.clone());
        m
    }
}

pub fn perp_iter(h: &Fun, n: usize, q: usize) -> Fun {
    (0..q).fold(h.clone(), |f, _| Fun::Perp(n, Box::new(f)))
}

fn perp_nat_iter(t: Nat, n: usize, i: usize) -> Nat {
    (0..i).fold(t, |t, _| Nat::PerpOf(n, Box::new(t)))
}

/// `Γ_{n-1} H(k^dim) = cone(|⊥_n^{*+1} H| -> H)` truncated at `N`, with the
/// realization `D = (-1)^q d_int + Σ (-1)^i d_i` and the cone
/// `(x, y) ↦ (-dx, εx + dy)`.
pub fn gamma(h: &Fun, n: usize, dim: usize, truncation: usize) -> Cx {
    let mut model = Model::default();
    let levels: Vec<Rc<Cx>> = (0..=truncation).map(|q| model.obj(&perp_iter(h, n, q + 1), dim)).collect();
    // alternating face sums
    let mut horizontal: Vec<Map> = vec![Map::new()];
    for q in 1..=truncation {
        let mut acc: BTreeMap<i64, Vec<(usize, usize, i64)>> = BTreeMap::new();
        for i in 0..=q {
            let face = model.nat(&perp_nat_iter(Nat::Eps(n, perp_iter(h, n, q - i)), n, i), dim);
            let sign = if i % 2 == 0 { 1 } else { -1 };
            for (&k, m) in face.iter() {
                acc.entry(k).or_default().extend(m.triplets().map(|(a, b, v)| (a, b, sign * v as i64)));
            }
        }
        let sum = acc
            .into_iter()
            .map(|(k, t)| (k, Sparse::from_triplets(levels[q - 1].dim(k), levels[q].dim(k), t)))
            .collect();
        horizontal.push(sum);
    }
    let sizes = |m: i64| (0..=truncation).map(|q| levels[q].dim(m - q as i64)).collect::<Vec<_>>();
    let offs = |s: &[usize]| {
        let mut o = vec![0];
        for x in s {
            o.push(o.last().unwrap() + x);
        }
        o
    };
    let mut real = Cx::default();
    let mut degrees = std::collections::BTreeSet::new();
    for (q, l) in levels.iter().enumerate() {
        degrees.extend(l.dims.keys().flat_map(|k| [k + q as i64, k + q as i64 + 1]));
    }
    for &m in &degrees {
        let (so, to) = (offs(&sizes(m)), offs(&sizes(m - 1)));
        real.dims.insert(m, *so.last().unwrap());
        let mut b = Blocks::new(*to.last().unwrap(), *so.last().unwrap());
        for q in 0..=truncation {
            let k = m - q as i64;
            if let Some(d) = levels[q].d.get(&k) {
                b.put(to[q], so[q], d, if q % 2 == 0 { 1 } else { -1 });
            }
            if q > 0 {
                if let Some(hm) = horizontal[q].get(&k) {
                    b.put(to[q - 1], so[q], hm, 1);
                }
            }
        }
        real.d.insert(m, b.done());
    }
    real.dims.retain(|_, n| *n > 0);
    // ε̂ on level 0, then the cone
    let base = model.obj(h, dim);
    let eps = model.nat(&Nat::Eps(n, h.clone()), dim);
    let mut cone = Cx::default();
    let mut cdeg = std::collections::BTreeSet::new();
    cdeg.extend(real.dims.keys().map(|k| k + 1));
    cdeg.extend(base.dims.keys().copied());
    for &k in &cdeg {
        let (rx, ry) = (real.dim(k - 1), base.dim(k));
        let (rx1, ry1) = (real.dim(k - 2), base.dim(k - 1));
        cone.dims.insert(k, rx + ry);
        let mut b = Blocks::new(rx1 + ry1, rx + ry);
        if let Some(d) = real.d.get(&(k - 1)) {
            b.put(0, 0, d, -1);
        }
        if let Some(e) = eps.get(&(k - 1)) {
            // ε̂ reads the level-0 block, which comes first
            b.put(rx1, 0, e, 1);
        }
        if let Some(d) = base.d.get(&k) {
            b.put(rx1, rx, d, 1);
        }
        cone.d.insert(k, b.done());
    }
    cone.dims.retain(|_, n| *n > 0);
    cone
}
