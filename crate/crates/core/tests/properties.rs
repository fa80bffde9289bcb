use kshuffle::partitions::*;
use kshuffle::scalars::*;
use kshuffle::shuffle::*;
use proptest::prelude::*;

fn small_poly() -> impl Strategy<Value = LaurentPoly> {
    let syms = [Symbol::Q1, Symbol::Q2, Symbol::t(1), Symbol::t(2)];
    prop::collection::vec((-3i64..=3, prop::collection::vec(-2i32..=2, 4)), 1..4).prop_map(move |terms| {
        LaurentPoly::from_terms(terms.into_iter().map(|(c, e)| {
            let m = syms.iter().zip(&e).fold(Monomial::one(), |m, (s, &x)| m.with(*s, x));
            (m, int(c))
        }))
    })
}

fn nonzero_poly() -> impl Strategy<Value = LaurentPoly> {
    small_poly().prop_filter("nonzero", |p| !p.is_zero())
}

fn multipartition() -> impl Strategy<Value = MultiPartition> {
    prop::collection::vec(prop::collection::vec(1u32..=4, 0..4), 1..4)
        .prop_map(|parts| {
            MultiPartition::new(
                parts
                    .into_iter()
                    .map(|mut rows| {
                        rows.sort_unstable_by(|a, b| b.cmp(a));
                        Partition::new(rows)
                    })
                    .collect(),
            )
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn multipartition_notation_round_trips(l in multipartition()) {
        let back = MultiPartition::parse_rank(&l.to_string(), l.rank()).unwrap();
        prop_assert_eq!(back, l);
    }

    #[test]
    fn boxes_add_and_remove(l in multipartition()) {
        for b in l.addable_boxes() {
            let bigger = l.add_box(&b).unwrap();
            prop_assert_eq!(bigger.size(), l.size() + 1);
            prop_assert_eq!(bigger.remove_box(&b).unwrap(), l.clone());
        }
        prop_assert_eq!(l.boxes().len() as u32, l.size());
    }

    #[test]
    fn field_operations(a in small_poly(), b in nonzero_poly(), c in nonzero_poly()) {
        let fa = RationalFn::from_poly(a);
        let fb = RationalFn::new(b, &c).unwrap();
        prop_assert!(fa.add(&fb).sub(&fb).eq_exact(&fa));
        prop_assert!(fa.mul(&fb).div(&fb).unwrap().eq_exact(&fa));
        prop_assert!(fb.mul(&fb.inv().unwrap()).eq_exact(&RationalFn::one()));
        prop_assert!(fb.dual().dual().eq_exact(&fb));
    }

    #[test]
    fn randomized_equality_agrees_with_exact(a in nonzero_poly(), b in nonzero_poly(), seed in any::<u64>()) {
        let f = RationalFn::new(a.clone(), &b).unwrap();
        let g = RationalFn::new(&a * &b, &(&b * &b)).unwrap();
        let mode = EqMode::Randomized { seed, trials: 3 };
        prop_assert!(eq(&f, &g, mode));
        let h = f.add(&RationalFn::one());
        prop_assert_eq!(eq(&f, &h, mode), eq(&f, &h, EqMode::Exact));
    }

    #[test]
    fn json_round_trip(a in small_poly(), b in nonzero_poly()) {
        prop_assert_eq!(poly_from_json(&poly_to_json(&a)).unwrap(), a.clone());
        let f = RationalFn::new(a, &b).unwrap();
        prop_assert!(ratfn_from_json(&ratfn_to_json(&f)).unwrap().eq_exact(&f));
    }

    #[test]
    fn gcd_modes_agree(a in small_poly(), b in nonzero_poly(), c in nonzero_poly()) {
        set_gcd_mode(GcdMode::Off);
        let off = RationalFn::new(a.clone(), &b).unwrap().add(&RationalFn::new(c.clone(), &b).unwrap());
        set_gcd_mode(GcdMode::On);
        let on = RationalFn::new(a, &b).unwrap().add(&RationalFn::new(c, &b).unwrap());
        prop_assert!(on.eq_exact(&off));
    }

    #[test]
    fn symmetrization_is_symmetric(e1 in -2i32..=2, e2 in -2i32..=2) {
        let f = RationalFn::mono(z(1).pow(e1).mul(&z(2).pow(e2)));
        let s = symmetrize(&f, 2);
        prop_assert!(is_symmetric(&s, 2));
    }

    #[test]
    fn monomial_shuffle_elements_satisfy_wheel(e1 in -2i32..=2, e2 in -2i32..=2, e3 in -1i32..=1) {
        let m = LaurentPoly::mono(z(1).pow(e1).mul(&z(2).pow(e2)).mul(&z(3).pow(e3)));
        prop_assert!(wheel_check(&build_x(&m, 3).unwrap()).unwrap());
    }
}
