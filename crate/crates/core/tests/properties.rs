use proptest::prelude::*;

use shintani::arith::rat;
use shintani::cli::config::{Congruence, EngineConfig, FieldConfig, InstanceConfig, RunConfig};
use shintani::cones::ConeChain;
use shintani::exactfield::prime::{parse_prime, primes_above, Place};
use shintani::exactfield::FieldElement;
use shintani::group_algebra::{
    det, det_leibniz, ideal_lattice, reduce_mod, FiniteAbelianGroup, GroupRingElement, IdealFactor,
};
use shintani::suite::{q_sqrt2, q_sqrt5};
use shintani::theta_reg::hilbert::hilbert_symbol;

fn group() -> impl Strategy<Value = FiniteAbelianGroup> {
    prop_oneof![
        Just(FiniteAbelianGroup::galois_quadratic()),
        Just(FiniteAbelianGroup::signs(2)),
        Just(FiniteAbelianGroup::new(&[3], &["τ"]).unwrap()),
        Just(FiniteAbelianGroup::new(&[2, 2], &["σ", "τ"]).unwrap()),
    ]
}

fn element(g: &FiniteAbelianGroup) -> impl Strategy<Value = GroupRingElement> {
    let g = g.clone();
    prop::collection::vec(-6i64..=6, g.order()).prop_map(move |c| GroupRingElement::from_coeffs(&g, c.into_iter().map(rat).collect()).unwrap())
}

fn pair_in() -> impl Strategy<Value = (GroupRingElement, GroupRingElement, GroupRingElement)> {
    group().prop_flat_map(|g| (element(&g), element(&g), element(&g)))
}

fn nonzero_element() -> impl Strategy<Value = FieldElement> {
    (-15i64..=15, -15i64..=15).prop_filter("nonzero", |(a, b)| *a != 0 || *b != 0).prop_map(|(a, b)| FieldElement::from_ints(&[a, b]))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn group_ring_is_a_commutative_ring((a, b, c) in pair_in()) {
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b).augmentation(), a.augmentation() * b.augmentation());
    }

    #[test]
    fn coefficient_maps_round_trip((a, _, _) in pair_in()) {
        let back = GroupRingElement::from_map(a.group(), &a.to_map()).unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn reduction_depends_only_on_the_class((a, b, _) in pair_in(), k in 1usize..=2) {
        let g = a.group().clone();
        let factors = vec![IdealFactor::Augmentation; k];
        let lat = ideal_lattice(&g, &factors);
        // b·(x − 1) lies in I for every x
        let shift = b.mul(&GroupRingElement::minus_one(&g, g.order() - 1));
        let shift = if k == 2 { shift.mul(&GroupRingElement::minus_one(&g, 1)) } else { shift };
        let lhs = reduce_mod(&a, &lat).unwrap();
        let rhs = reduce_mod(&a.add(&shift), &lat).unwrap();
        prop_assert_eq!(lhs.normal_form, rhs.normal_form);
    }

    #[test]
    fn determinant_expansions_agree(entries in prop::collection::vec(-3i64..=3, 18)) {
        let g = FiniteAbelianGroup::galois_quadratic();
        let m: Vec<Vec<GroupRingElement>> = (0..3)
            .map(|i| (0..3).map(|j| GroupRingElement::from_coeffs(&g, vec![rat(entries[6 * i + 2 * j]), rat(entries[6 * i + 2 * j + 1])]).unwrap()).collect())
            .collect();
        prop_assert_eq!(det(&m, &g), det_leibniz(&m, &g));
    }

    #[test]
    fn hilbert_symbols_are_bilinear(a in nonzero_element(), b in nonzero_element(), c in nonzero_element(), which in 0usize..4) {
        let f = if which % 2 == 0 { q_sqrt5() } else { q_sqrt2() };
        let v = match which {
            0 => Place::Finite(parse_prime(&f, "2").unwrap()),
            1 => Place::Finite(parse_prime(&f, "7:3").unwrap()),
            2 => Place::Finite(parse_prime(&f, "5").unwrap()),
            _ => Place::Real(1),
        };
        let ab = hilbert_symbol(&f, &f.mul(&a, &b), &c, &v).unwrap();
        let split = hilbert_symbol(&f, &a, &c, &v).unwrap() * hilbert_symbol(&f, &b, &c, &v).unwrap();
        prop_assert_eq!(ab, split);
        prop_assert_eq!(hilbert_symbol(&f, &a, &c, &v).unwrap(), hilbert_symbol(&f, &c, &a, &v).unwrap());
    }

    #[test]
    fn valuations_add(a in nonzero_element(), b in nonzero_element()) {
        let f = q_sqrt5();
        let mut ps = primes_above(&f, 11).unwrap();
        ps.push(parse_prime(&f, "5").unwrap());
        ps.push(parse_prime(&f, "2").unwrap());
        for p in ps {
            prop_assert_eq!(p.ord(&f, &f.mul(&a, &b)).unwrap(), p.ord(&f, &a).unwrap() + p.ord(&f, &b).unwrap());
        }
    }

    #[test]
    fn norm_is_the_product_of_embeddings(a in nonzero_element()) {
        let f = q_sqrt2();
        let prod = f.embedding_f64(&a, 0) * f.embedding_f64(&a, 1);
        let n = shintani::arith::to_f64(&f.norm(&a));
        prop_assert!((prod - n).abs() <= 1e-9 * n.abs().max(1.0));
    }

    #[test]
    fn chain_evaluation_is_linear(k in -3i64..=3, z in nonzero_element()) {
        let f = q_sqrt5();
        let a = ConeChain::from_terms(&[(1, vec![f.one(), FieldElement::from_ints(&[1, 1])])]).unwrap();
        let b = ConeChain::from_terms(&[(2, vec![f.one()]), (-1, vec![FieldElement::from_ints(&[0, 1])])]).unwrap();
        prop_assert_eq!(a.scale(k).add(&b).eval(&z), k * a.eval(&z) + b.eval(&z));
        prop_assert_eq!(a.sub(&a).eval(&z), 0);
    }

    #[test]
    fn configs_round_trip(seed in any::<u64>(), witnesses in 1usize..50, tilt in -3i64..=3, tol in 1e-12f64..1e-2, d in prop::option::of((-9i64..=9, -9i64..=9)), t in prop::collection::vec(2u64..30, 0..3)) {
        let cfg = RunConfig {
            field: FieldConfig { poly: vec![-2, 0, 1], place_order: Some(vec![1, 0]) },
            instance: Some(InstanceConfig {
                v0: "inf1".into(),
                places: vec!["inf0".into(), "inf1".into()],
                t: t.iter().map(|p| p.to_string()).collect(),
                d: d.map(|(a, b)| vec![a.to_string(), b.to_string()]),
                q: None,
                m: None,
                j_levels: [("2".to_string(), 5u32)].into_iter().collect(),
                congruence: Some(Congruence::Classic),
            }),
            pairing: None,
            engine: EngineConfig { seed, witnesses, tilt, abel_tolerance: tol, ..EngineConfig::default() },
            output: None,
        };
        let text = cfg.to_toml().unwrap();
        prop_assert_eq!(RunConfig::parse(&text).unwrap(), cfg);
    }
}
