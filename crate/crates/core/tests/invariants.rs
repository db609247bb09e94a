//! Property tests for the invariants the library relies on.

use cantor_core::af_embedding::{embed_iota, gm_level_sizes, BlockMatrix};
use cantor_core::crossed_product::CrossedElement;
use cantor_core::dynamics::{BratteliDiagram, CantorDynamics, Direction, OdometerSpec};
use cantor_core::fredholm::{
    even_bp_pairing, even_bp_pairing_of, odd_commutator, odd_fredholm_index, odd_pairing, odd_rank_bound,
    rave_af_pairing, summability_report, synthesize_index, verify_synthesis, ChoiceFunction, ChoicePair, DiracExponent,
    OddCycleSpec, Side, WeightedDirac,
};
use cantor_core::k_theory::{
    k0_equal, k0_telescope, odometer_k0_class, AfIndexHom, DimensionGroupElement, IndexHom, K0Equality,
};
use cantor_core::symbolic::{metric, Alphabet, IndicatorCombination, Language, Point, Subshift, Word};
use proptest::prelude::*;

fn word(max_len: usize, alphabet: u16) -> impl Strategy<Value = Word> {
    prop::collection::vec(0..alphabet, 0..=max_len).prop_map(|v| Word::new(v.into_iter().map(|s| s as _).collect()))
}

fn nonempty_word(max_len: usize, alphabet: u16) -> impl Strategy<Value = Word> {
    prop::collection::vec(0..alphabet, 1..=max_len).prop_map(|v| Word::new(v.into_iter().map(|s| s as _).collect()))
}

fn binary_point() -> impl Strategy<Value = Point> {
    (word(6, 2), nonempty_word(3, 2)).prop_map(|(a, b)| Point::new(a, b).unwrap())
}

fn odometer() -> impl Strategy<Value = OdometerSpec> {
    (prop::collection::vec(2u32..5, 0..3), prop::collection::vec(2u32..5, 1..3))
        .prop_map(|(a, b)| OdometerSpec::new(a, b).unwrap())
}

fn constant_pair() -> impl Strategy<Value = ChoicePair> {
    (nonempty_word(3, 2), nonempty_word(3, 2)).prop_map(|(a, b)| {
        ChoicePair::new(ChoiceFunction::constant_tail(a).unwrap(), ChoiceFunction::constant_tail(b).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn levels_are_partitioned_by_refinement(n in 0usize..6, golden in any::<bool>()) {
        let lang: Subshift = if golden { Subshift::golden_mean() } else { Subshift::full(Alphabet::digits(3).unwrap()) };
        let refined: Vec<Word> = lang.level(n).iter().flat_map(|w| lang.refine(w)).collect();
        prop_assert_eq!(refined, lang.level(n + 1));
    }

    #[test]
    fn word_text_round_trips(w in word(10, 3)) {
        let a = Alphabet::digits(3).unwrap();
        prop_assert_eq!(a.parse_word(&a.format_word(&w)).unwrap(), w);
    }

    #[test]
    fn point_text_round_trips(p in binary_point()) {
        let a = Alphabet::binary();
        prop_assert_eq!(a.parse_point(&a.format_point(&p)).unwrap(), p);
    }

    #[test]
    fn odometer_step_is_invertible(p in binary_point(), j in -40i64..40) {
        let bin = OdometerSpec::binary();
        let q = bin.iterate(&p, j).unwrap();
        prop_assert_eq!(bin.iterate(&q, -j).unwrap(), p);
    }

    #[test]
    fn odometer_is_an_isometry(x in binary_point(), y in binary_point()) {
        let bin = OdometerSpec::binary();
        let fx = bin.step(&x, Direction::Forward).unwrap();
        let fy = bin.step(&y, Direction::Forward).unwrap();
        prop_assert_eq!(metric(&fx, &fy), metric(&x, &y));
    }

    #[test]
    fn word_addition_is_a_group_action(spec in odometer(), m in 1usize..5, j in -30i64..30, k in -30i64..30) {
        let w = spec.level(m)[0].clone();
        let a = spec.add_to_word(&spec.add_to_word(&w, j), k);
        prop_assert_eq!(a, spec.add_to_word(&w, j + k));
        let period = spec.product(m) as i64;
        prop_assert_eq!(spec.add_to_word(&w, period), w);
    }

    #[test]
    fn cylinder_permutation_is_one_cycle(spec in odometer(), m in 1usize..5) {
        let p = spec.cylinder_permutation(m).unwrap();
        prop_assert!(p.is_single_cycle());
    }

    #[test]
    fn odometer_classes_are_additive(spec in odometer(), m in 0usize..4, pick in any::<prop::sample::Index>()) {
        let words = spec.level(m);
        let mu = pick.get(&words).clone();
        let whole = odometer_k0_class(&spec, &IndicatorCombination::indicator(mu.clone())).unwrap();
        let parts = IndicatorCombination::from_terms(spec.refine(&mu).into_iter().map(|c| (c, 1)));
        prop_assert_eq!(odometer_k0_class(&spec, &parts).unwrap(), whole.clone());
        prop_assert!((whole.as_f64() - 1.0 / spec.product(m) as f64).abs() < 1e-15);
    }

    #[test]
    fn telescoping_preserves_the_class(level in 1usize..4, a in -20i64..20, b in -20i64..20, up in 0usize..4) {
        let d = BratteliDiagram::golden_mean(12);
        let e = DimensionGroupElement::new(&d, level, vec![a, b]).unwrap();
        let t = k0_telescope(&d, &e, level + up).unwrap();
        prop_assert_eq!(k0_equal(&d, &e, &t), K0Equality::Equal);
        if (a, b) != (0, 0) {
            let z = DimensionGroupElement::new(&d, level, vec![0, 0]).unwrap();
            prop_assert_eq!(k0_equal(&d, &e, &z), K0Equality::Distinct);
        }
    }

    #[test]
    fn af_telescope_then_restrict_is_identity(a in -50i64..50, b in -50i64..50, up in 0usize..5) {
        let i = AfIndexHom::new(2, [a, b]).unwrap();
        let mut t = i.telescope(2 + up).unwrap();
        for _ in 0..up {
            t = t.restrict().unwrap();
        }
        prop_assert_eq!(t, i);
    }

    #[test]
    fn even_pairing_is_additive(pair in constant_pair(), mu in word(5, 2)) {
        let full = Subshift::full(Alphabet::binary());
        let whole = even_bp_pairing(&pair, &mu).unwrap();
        let parts: i64 = full.refine(&mu).iter().map(|c| even_bp_pairing(&pair, c).unwrap()).sum();
        prop_assert_eq!(whole, parts);
        prop_assert!(whole.unsigned_abs() as usize <= mu.len());
        prop_assert_eq!(even_bp_pairing(&pair, &Word::empty()).unwrap(), 0);
    }

    #[test]
    fn even_pairing_is_linear(pair in constant_pair(), a in word(4, 2), b in word(4, 2), x in -5i64..5, y in -5i64..5) {
        let f = IndicatorCombination::from_terms([(a.clone(), x), (b.clone(), y)]);
        let direct = x * even_bp_pairing(&pair, &a).unwrap() + y * even_bp_pairing(&pair, &b).unwrap();
        prop_assert_eq!(even_bp_pairing_of(&pair, &f).unwrap(), direct);
    }

    #[test]
    fn odd_index_matches_count(words in prop::collection::btree_set(nonempty_word(3, 2), 0..4), k in -3i64..=3, negative in any::<bool>()) {
        let side = if negative { Side::Negative } else { Side::Positive };
        let n = words.len() as i64;
        let spec = OddCycleSpec::new(ChoiceFunction::constant_tail(Word::new(vec![0])).unwrap(), words.into_iter().collect(), side);
        let expected = if negative { k * n } else { -k * n };
        prop_assert_eq!(odd_pairing(&spec, k), expected);
        let idx = odd_fredholm_index(&spec, &CrossedElement::u_power(k), None, k.unsigned_abs() as usize + 2, 4).unwrap();
        prop_assert_eq!(idx, expected);
    }

    #[test]
    fn partial_sums_grow_with_depth(weight in 1.1f64..5.0, p in 0.2f64..3.0, depth in 1usize..25) {
        let counts: Vec<u128> = (0..=25).map(|n| 1u128 << n).collect();
        let d = WeightedDirac::new(weight, DiracExponent::Word).unwrap();
        let a = summability_report(&d, &counts, p, depth - 1).partial_sum;
        let b = summability_report(&d, &counts, p, depth).partial_sum;
        prop_assert!(b >= a);
    }

    #[test]
    fn synthesis_realizes_targets(values in prop::collection::vec(-3i64..=3, 8)) {
        let full = Subshift::full(Alphabet::binary());
        let level3 = full.level(3);
        let target = IndexHom::new(3, level3.into_iter().zip(values)).unwrap();
        let desc = synthesize_index(&target, &full, 3).unwrap();
        prop_assert!(verify_synthesis(&desc, &target, &full, 3));
    }

    #[test]
    fn iota_preserves_the_pairing(level in 1usize..3, mask in any::<u32>(), a in -4i64..4, b in -4i64..4) {
        let (n1, n2) = gm_level_sizes(level).unwrap();
        let first: Vec<bool> = (0..n1).map(|i| mask >> i & 1 == 1).collect();
        let second: Vec<bool> = (0..n2).map(|i| mask >> (16 + i) & 1 == 1).collect();
        let p = BlockMatrix::diagonal_projection(level, &first, &second).unwrap();
        let q = embed_iota(&p, 1e-9).unwrap();
        prop_assert!(q.is_projection(1e-9));
        let i = AfIndexHom::new(1, [a, b]).unwrap();
        prop_assert_eq!(rave_af_pairing(&i, &p).unwrap(), rave_af_pairing(&i.telescope(q.level()).unwrap(), &q).unwrap());
    }
}

fn laurent_polynomial() -> impl Strategy<Value = CrossedElement> {
    prop::collection::vec((-3i64..=3, word(2, 2), -2i64..=2), 1..4).prop_map(|terms| {
        CrossedElement::from_terms(terms.into_iter().map(|(k, w, c)| (k, IndicatorCombination::from_terms([(w, c)]))))
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn odd_commutator_rank_is_bounded(g in laurent_polynomial(), words in prop::collection::btree_set(nonempty_word(2, 2), 1..3)) {
        let full = Subshift::full(Alphabet::binary());
        let bin = OdometerSpec::binary();
        let spec = OddCycleSpec::new(ChoiceFunction::constant_tail(Word::new(vec![0])).unwrap(), words.into_iter().collect(), Side::Positive);
        let c = odd_commutator(&spec, &g, Some(&bin), &full, 4, 2).unwrap();
        prop_assert!(c.rank(1e-9) <= odd_rank_bound(&spec, &g));
    }
}
