mod oracle;

use std::collections::BTreeMap;
use std::rc::Rc;

use fck_core::chain::{betti_numbers, cone, cylinder, direct_sum, hofib, is_quasi_iso, tensor, ChainComplex, ChainMap};
use fck_core::cube::{ifiber_closed, ifiber_recursive, random_cube, CubicalDiagram, Subset};
use fck_core::gen::Gen;
use fck_core::linalg::{Matrix, Ring};
use proptest::prelude::*;

fn to_sparse(m: &Matrix) -> oracle::Sparse {
    let t: Vec<(usize, usize, i64)> = m
        .entries()
        .map(|(i, j, v)| {
            let small = |b| i64::try_from(b).expect("small entries");
            (i, j, oracle::fraction(small(v.numer()), small(v.denom())))
        })
        .collect();
    oracle::Sparse::from_triplets(m.rows(), m.cols(), t)
}

fn to_cx(c: &ChainComplex) -> oracle::Cx {
    oracle::Cx {
        dims: c.ranks().iter().filter(|(_, &n)| n > 0).map(|(&k, &n)| (k, n)).collect(),
        d: c.stored_diffs().map(|(k, m)| (k, to_sparse(m))).collect(),
    }
}

fn to_map(f: &ChainMap) -> oracle::Map {
    f.stored_components().map(|(k, m)| (k, to_sparse(m))).collect()
}

fn euler(h: &BTreeMap<i64, usize>) -> i64 {
    h.iter().map(|(&k, &b)| if k % 2 == 0 { b as i64 } else { -(b as i64) }).sum()
}

fn exact_ring() -> impl Strategy<Value = Ring> {
    prop_oneof![Just(Ring::Rationals), Just(Ring::Integers), Just(Ring::PrimeField(3))]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rank_matches_independent_elimination(seed in any::<u64>(), rows in 0usize..7, cols in 0usize..7) {
        let m = Gen::new(seed).matrix(Ring::Rationals, rows, cols, 0.5);
        prop_assert_eq!(m.rank().unwrap(), to_sparse(&m).rank());
        let k = m.kernel_basis().unwrap();
        prop_assert_eq!(k.cols() + m.rank().unwrap(), cols);
        prop_assert!(m.mul(&k).unwrap().is_zero());
    }

    #[test]
    fn smith_form_rank_agrees_with_rational_rank(seed in any::<u64>(), rows in 1usize..6, cols in 1usize..6) {
        let m = Gen::new(seed).matrix(Ring::Integers, rows, cols, 0.6);
        let snf = m.smith_normal_form().unwrap();
        prop_assert_eq!(snf.rank(), m.over(Ring::Rationals).rank().unwrap());
    }

    #[test]
    fn homology_matches_independent_ranks(seed in any::<u64>()) {
        let c = Gen::new(seed).complex(Ring::Rationals, -2, 2, 3);
        prop_assert!(c.validate().is_empty());
        prop_assert_eq!(betti_numbers(&c).unwrap(), to_cx(&c).betti());
    }

    #[test]
    fn constructions_are_complexes(seed in any::<u64>(), ring in exact_ring()) {
        let mut g = Gen::new(seed);
        let x = g.complex(ring, -1, 1, 2);
        let y = g.complex(ring, -1, 2, 2);
        let f = g.chain_map(&x, &y);
        prop_assert!(f.validate().is_empty());
        let c = cone(&f).unwrap();
        let z = cylinder(&f).unwrap();
        let h = hofib(&f).unwrap();
        for v in [&c.complex, &z.complex, &h.complex] {
            prop_assert!(v.validate().is_empty());
        }
        for m in [&c.inclusion, &z.projection] {
            prop_assert!(m.validate().is_empty());
        }
    }

    #[test]
    fn cone_and_fiber_homology(seed in any::<u64>()) {
        let mut g = Gen::new(seed);
        let x = g.complex(Ring::Rationals, -1, 1, 3);
        let y = g.complex(Ring::Rationals, -1, 1, 3);
        let f = g.chain_map(&x, &y);
        let hc = betti_numbers(&cone(&f).unwrap().complex).unwrap();
        let hf = betti_numbers(&hofib(&f).unwrap().complex).unwrap();
        // hofib(f) ≃ Ω cone(f)
        let shifted: BTreeMap<i64, usize> = hc.iter().map(|(&k, &b)| (k - 1, b)).collect();
        prop_assert_eq!(&hf, &shifted);
        let (ex, ey) = (euler(&betti_numbers(&x).unwrap()), euler(&betti_numbers(&y).unwrap()));
        prop_assert_eq!(euler(&hc), ey - ex);
        // the cylinder retracts onto the target
        prop_assert!(is_quasi_iso(&cylinder(&f).unwrap().projection).unwrap());
    }

    #[test]
    fn kunneth_over_a_field(seed in any::<u64>()) {
        let mut g = Gen::new(seed);
        let x = g.complex(Ring::Rationals, -1, 1, 2);
        let y = g.complex(Ring::Rationals, 0, 1, 2);
        let (bx, by) = (betti_numbers(&x).unwrap(), betti_numbers(&y).unwrap());
        let mut expect: BTreeMap<i64, usize> = BTreeMap::new();
        for (i, a) in &bx {
            for (j, b) in &by {
                *expect.entry(i + j).or_default() += a * b;
            }
        }
        prop_assert_eq!(betti_numbers(&tensor(&x, &y).unwrap()).unwrap(), expect);
        let s = direct_sum(Ring::Rationals, &[x.clone(), y.clone()]).unwrap();
        let mut sum = bx.clone();
        for (k, b) in by {
            *sum.entry(k).or_default() += b;
        }
        prop_assert_eq!(betti_numbers(&s.complex).unwrap(), sum);
    }

    #[test]
    fn iterated_fiber_matches_independent_total(seed in any::<u64>(), n in 1usize..4) {
        let x = random_cube(&mut Gen::new(seed), Ring::Rationals, n, -1, 1, 2);
        let closed = ifiber_closed(&x).unwrap();
        prop_assert_eq!(&closed, &ifiber_recursive(&x).unwrap());
        prop_assert_eq!(betti_numbers(&closed).unwrap(), independent_total(&x).betti());
    }

    #[test]
    fn subset_keys_round_trip(n in 1usize..8, bits in any::<usize>()) {
        let t = Subset::new(n, bits & ((1 << n) - 1));
        prop_assert_eq!(Subset::parse_key(&t.key()).unwrap(), t);
        prop_assert_eq!(t.len(), t.elements().count());
    }
}

/// The oracle's total complex of the same cube (its own signs).
fn independent_total(x: &CubicalDiagram) -> oracle::Cx {
    let n = x.n();
    let all: Vec<Subset> = Subset::all(n).collect();
    // oracle vertices are indexed by plain bitmasks with element i at bit i
    let mask = |t: Subset| t.elements().fold(0usize, |m, i| m | 1 << i);
    let mut vertex = vec![Rc::new(oracle::Cx::default()); 1 << n];
    for &t in &all {
        vertex[mask(t)] = Rc::new(to_cx(x.vertex(t)));
    }
    let mut edges = BTreeMap::new();
    for &t in &all {
        for i in (0..n).filter(|&i| !t.contains(i)) {
            edges.insert((mask(t), i), Rc::new(to_map(x.edge(t, i))));
        }
    }
    oracle::cube_total(n, &vertex, &|u, i| edges[&(u, i)].clone())
}
