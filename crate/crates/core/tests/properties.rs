mod common;

use std::collections::BTreeSet;

use common::*;
use freiman_core::bohr::{CosetProgression, ProgressionGenerator};
use freiman_core::freiman::{is_freiman_hom, transport_progression, FreimanMap};
use freiman_core::sumset::iterated_sumset;
use freiman_core::text::{parse_progression, parse_set, write_progression, write_set, SetInput};
use freiman_core::{GroupSet, GroupSpec, Limits, Subgroup};
use proptest::prelude::*;

fn cyclic_set() -> impl Strategy<Value = GroupSet> {
    (2u64..60).prop_flat_map(|n| {
        proptest::collection::btree_set(0..n as usize, 1..=6)
            .prop_map(move |idx| GroupSet::from_indices(GroupSpec::cyclic(n).unwrap(), idx.into_iter().collect()))
    })
}

fn product_set() -> impl Strategy<Value = GroupSet> {
    (prop::sample::select(vec![vec![2u64, 6], vec![4, 4], vec![3, 3, 3], vec![2, 2, 2, 2]])).prop_flat_map(|g| {
        let n: u64 = g.iter().product();
        proptest::collection::btree_set(0..n as usize, 1..=6)
            .prop_map(move |idx| GroupSet::from_indices(GroupSpec::new(g.clone()).unwrap(), idx.into_iter().collect()))
    })
}

fn map_into(target: u64) -> impl Strategy<Value = (GroupSet, Vec<usize>)> {
    cyclic_set().prop_flat_map(move |dom| {
        let k = dom.len();
        (Just(dom), proptest::collection::vec(0..target as usize, k))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn iterated_sumset_matches_oracle(a in product_set(), k in 0usize..3, l in 0usize..3) {
        prop_assume!(k + l > 0);
        let lib: BTreeSet<Pt> = pts(&iterated_sumset(&a, k, l).unwrap()).into_iter().collect();
        prop_assert_eq!(lib, k_minus_l(a.spec().orders(), &pts(&a), k, l));
    }

    #[test]
    fn hom_of_higher_order_is_hom_of_lower((dom, img) in map_into(12), s in 1usize..4) {
        let tgt = GroupSpec::cyclic(12).unwrap();
        let lookup: Vec<(usize, usize)> = dom.indices().iter().copied().zip(img).collect();
        let map = FreimanMap::from_fn(dom, tgt, |x| lookup.iter().find(|p| p.0 == x).unwrap().1);
        if is_freiman_hom(&map, s + 1).unwrap().holds {
            prop_assert!(is_freiman_hom(&map, s).unwrap().holds);
        }
    }

    #[test]
    fn hom_verdict_matches_brute_force((dom, img) in map_into(10), s in 1usize..4) {
        let sspec = dom.spec().clone();
        let tgt = GroupSpec::cyclic(10).unwrap();
        let pairs: Vec<(Pt, Pt)> = dom.indices().iter().zip(&img).map(|(&x, &y)| (sspec.coords_of(x), vec![y as u64])).collect();
        let lookup: Vec<(usize, usize)> = dom.indices().iter().copied().zip(img).collect();
        let map = FreimanMap::from_fn(dom, tgt, |x| lookup.iter().find(|p| p.0 == x).unwrap().1);
        prop_assert_eq!(is_freiman_hom(&map, s).unwrap().holds, is_hom_bruteforce(&[sspec.cardinality()], &[10], &pairs, s));
    }

    #[test]
    fn composition_of_affine_maps_stays_hom(a in cyclic_set(), k in 1u64..10, c in 0u64..50, v in 1u64..50, s in 1usize..4) {
        let n = a.spec().cardinality();
        // x ↦ ux + c from Z/n to Z/50 is well defined once 50 divides u·n
        let u = k * 50 / num_integer::gcd(n, 50);
        let f = FreimanMap::from_fn(a.clone(), GroupSpec::cyclic(50).unwrap(), |x| ((u * x as u64 + c) % 50) as usize);
        let g = FreimanMap::from_fn(f.image_set(), GroupSpec::cyclic(25).unwrap(), |y| (v as usize * y) % 25);
        let fg = f.then(&g).unwrap();
        prop_assert!(is_freiman_hom(&f, s).unwrap().holds);
        prop_assert!(is_freiman_hom(&fg, s).unwrap().holds);
    }

    #[test]
    fn transport_by_unit_preserves_size(n in 7u64..120, u in 1u64..120, c in 0u64..120, v in 1u64..120, len in 0i64..4) {
        prop_assume!(num_integer::gcd(u % n, n) == 1 && u % n != 0);
        let spec = GroupSpec::cyclic(n).unwrap();
        let gens = vec![ProgressionGenerator { element: el(&[v % n]), lo: -len, hi: len }];
        let cp = CosetProgression::new(spec.clone(), spec.zero(), gens, Subgroup::trivial(&spec), &Limits::default()).unwrap();
        prop_assume!(cp.is_proper());
        let dom = cp.materialize(&Limits::default()).unwrap();
        let psi = FreimanMap::from_fn(dom.clone(), spec, |x| ((u * x as u64 + c) % n) as usize);
        let out = transport_progression(&psi, &cp, &Limits::default()).unwrap();
        prop_assert_eq!(out.materialize(&Limits::default()).unwrap().len(), dom.len());
        prop_assert_eq!(out.dimension(), cp.dimension());
    }

    #[test]
    fn set_text_round_trips(a in product_set()) {
        let text = write_set(&a);
        match parse_set(&text).unwrap() {
            SetInput::Group(b) => prop_assert_eq!(b, a),
            SetInput::Integers(_) => prop_assert!(false, "group set parsed as integers"),
        }
    }

    #[test]
    fn integer_text_round_trips(values in proptest::collection::btree_set(-1000i64..1000, 1..10)) {
        let v: Vec<i64> = values.into_iter().collect();
        let text = freiman_core::text::write_integers(&v);
        prop_assert_eq!(parse_set(&text).unwrap(), SetInput::Integers(v));
    }

    #[test]
    fn progression_text_round_trips(n in 5u64..200, v in 1u64..200, w in 0u64..200, lo in -3i64..=0, hi in 0i64..3) {
        let spec = GroupSpec::cyclic(n).unwrap();
        let gens = vec![
            ProgressionGenerator { element: el(&[v % n]), lo, hi },
            ProgressionGenerator { element: el(&[w % n]), lo: 0, hi },
        ];
        let cp = CosetProgression::new(spec.clone(), el(&[w % n]), gens, Subgroup::trivial(&spec), &Limits::default()).unwrap();
        let back = parse_progression(&write_progression(&cp), &Limits::default()).unwrap();
        prop_assert_eq!(back, cp);
    }
}
