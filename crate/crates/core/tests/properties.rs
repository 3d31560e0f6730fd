use std::sync::Arc;

use ordinal_automata::ordinal::{condense_once, fc_ranks, ord, Ordinal};
use ordinal_automata::random::{random_automaton, random_word, rng, words_over, RandomSpec};
use ordinal_automata::reduction::{AbstractNfa, ClassContext};
use ordinal_automata::word::{convolve, Alphabet, OrdinalWord};
use proptest::prelude::*;

/// Ordinals below w^4 with finite exponents, plus a few with exponent w.
fn arb_ordinal() -> impl Strategy<Value = Ordinal> {
    let small = prop::collection::vec(0u64..4, 0..=4).prop_map(|c| Ordinal::from_finite_coeffs(&c));
    prop_oneof![
        4 => small.clone(),
        1 => (small, 1u64..3).prop_map(|(tail, c)| Ordinal::omega_pow(Ordinal::omega()).mul(&Ordinal::nat(c)).add(&tail)),
    ]
}

fn arb_below_shape(k: u32) -> impl Strategy<Value = Ordinal> {
    prop::collection::vec(0u64..4, k as usize).prop_map(|c| Ordinal::from_finite_coeffs(&c))
}

fn universe() -> Vec<Ordinal> {
    ["0", "2", "w", "w*2+1", "w*4"].iter().map(|s| ord(s)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn addition_is_associative(a in arb_ordinal(), b in arb_ordinal(), c in arb_ordinal()) {
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
    }

    #[test]
    fn multiplication_distributes_on_the_left(a in arb_ordinal(), b in arb_ordinal(), c in arb_ordinal()) {
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
    }

    #[test]
    fn natural_sum_is_commutative_and_associative(a in arb_ordinal(), b in arb_ordinal(), c in arb_ordinal()) {
        prop_assert_eq!(a.natural_sum(&b), b.natural_sum(&a));
        prop_assert_eq!(a.natural_sum(&b).natural_sum(&c), a.natural_sum(&b.natural_sum(&c)));
    }

    #[test]
    fn left_sub_round_trips(a in arb_ordinal(), b in arb_ordinal()) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let d = lo.left_sub(&hi).unwrap();
        prop_assert_eq!(lo.add(&d), hi);
    }

    #[test]
    fn order_is_lexicographic_on_terms(a in arb_ordinal(), b in arb_ordinal()) {
        let key = |x: &Ordinal| x.terms().iter().map(|t| (t.exponent.clone(), t.coeff)).collect::<Vec<_>>();
        prop_assert_eq!(a.cmp(&b), key(&a).cmp(&key(&b)));
    }

    #[test]
    fn degree_many_condensations_reach_a_finite_value(c in prop::collection::vec(0u64..4, 0..=4)) {
        let a = Ordinal::from_finite_coeffs(&c);
        let d = a.finite_degree().unwrap();
        let mut x = a.clone();
        for i in 0..d {
            prop_assert!(!x.is_finite(), "finite after {} of {}", i, d);
            x = condense_once(&x);
        }
        prop_assert!(x.is_finite());
        prop_assert_eq!(fc_ranks(&a).fc_star, Ordinal::nat(d as u64));
    }

    #[test]
    fn fc_is_within_one_of_fc_star(a in arb_ordinal()) {
        let r = fc_ranks(&a);
        prop_assert!(r.fc_star <= r.fc && r.fc <= r.fc_star.succ());
    }

    #[test]
    fn multiplying_by_w_raises_fc_star(a in arb_ordinal().prop_filter("nonzero", |a| !a.is_zero())) {
        let r = fc_ranks(&a);
        prop_assert_eq!(fc_ranks(&a.mul(&Ordinal::omega())).fc_star, r.fc_star.succ());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn convolution_support_is_the_union(s1 in any::<u64>(), s2 in any::<u64>()) {
        let ab = Alphabet::from_symbols(&["a", "b"]);
        let w = random_word(&mut rng(s1), 3, &ab, 4, 3);
        let v = random_word(&mut rng(s2), 3, &ab, 4, 3);
        let c = convolve(&[&w, &v]).unwrap();
        let mut union: Vec<&Ordinal> = w.support().chain(v.support()).collect();
        union.sort();
        union.dedup();
        prop_assert_eq!(c.support().collect::<Vec<_>>(), union);
        prop_assert_eq!(c.project(0), v);
        prop_assert_eq!(c.project(1), w);
    }

    #[test]
    fn gap_profile_reassembles_positions(seed in any::<u64>(), k in 1u32..=3) {
        let w = random_word(&mut rng(seed), k, &Alphabet::from_symbols(&["a"]), 5, 3);
        let g = w.gap_profile();
        prop_assert_eq!(g.positions(), w.support().cloned().collect::<Vec<_>>());
        let end = g.positions().last().map(|p| p.succ()).unwrap_or_default();
        let tail = g.items.last().map(|(_, t)| t.clone()).unwrap_or(g.leading_gap.clone());
        prop_assert_eq!(end.add(&tail), Ordinal::omega_pow(Ordinal::nat(k as u64)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn behavior_composes_across_cuts(seed in any::<u64>(), n in 1usize..=4, ws in any::<u64>()) {
        let spec = RandomSpec::new(n, &["a"]);
        let a = random_automaton(&mut rng(seed), &spec);
        let w = random_word(&mut rng(ws), 2, &spec.alphabet, 4, 3);
        let cuts = [ord("0"), ord("1"), ord("3"), ord("w"), ord("w+2"), ord("w*3"), ord("w^2")];
        for (i, lo) in cuts.iter().enumerate() {
            for (j, mid) in cuts.iter().enumerate().skip(i) {
                for hi in &cuts[j..] {
                    let whole = a.behavior(&w, lo, hi).unwrap();
                    let parts = a.behavior(&w, lo, mid).unwrap().then(&a.behavior(&w, mid, hi).unwrap());
                    prop_assert_eq!(whole, parts, "[{}, {}, {})", lo, mid, hi);
                }
            }
        }
    }

    #[test]
    fn equal_classes_have_equal_gap_relations(seed in any::<u64>(), n in 1usize..=4, d1 in arb_below_shape(3), d2 in arb_below_shape(3)) {
        let a = random_automaton(&mut rng(seed), &RandomSpec::new(n, &["a"]));
        let ctx = ClassContext::for_automata(3, &[&a]);
        if ctx.class_of(&d1).unwrap() == ctx.class_of(&d2).unwrap() {
            prop_assert_eq!(a.gap_relation(&d1).unwrap(), a.gap_relation(&d2).unwrap());
        }
        let g = ctx.class_of(&d1).unwrap();
        prop_assert_eq!(ctx.relation(&a, &g), a.gap_relation(&d1).unwrap());
    }

    #[test]
    fn class_addition_tracks_letterful_merges(seed in any::<u64>(), n in 1usize..=3, d1 in arb_below_shape(2), d2 in arb_below_shape(2)) {
        let a = random_automaton(&mut rng(seed), &RandomSpec::new(n, &["a"]));
        let ctx = ClassContext::for_automata(2, &[&a]);
        let (g1, g2) = (ctx.class_of(&d1).unwrap(), ctx.class_of(&d2).unwrap());
        let merged = ctx.add(&ctx.add(&g1, &ctx.one()), &g2);
        let direct = ctx.class_of(&d1.succ().add(&d2)).unwrap();
        prop_assert_eq!(ctx.relation(&a, &merged), ctx.relation(&a, &direct));
    }

    #[test]
    fn abstraction_is_sound_and_complement_total(seed in any::<u64>(), n in 1usize..=4) {
        let spec = RandomSpec::new(n, &["a"]);
        let a = random_automaton(&mut rng(seed), &spec);
        let ctx = Arc::new(ClassContext::for_automata(2, &[&a]));
        let tracks = vec![spec.alphabet.clone()];
        let nfa = AbstractNfa::from_automaton(&a, ctx, tracks).unwrap();
        let co = nfa.complement();
        for w in words_over(2, &spec.alphabet, &universe()) {
            let w: OrdinalWord = w;
            let hit = nfa.accepts(&w).unwrap();
            prop_assert_eq!(a.accepts(&w).unwrap(), hit, "{}", w);
            prop_assert_ne!(hit, co.accepts(&w).unwrap(), "{}", w);
        }
    }

    #[test]
    fn high_levels_are_stable(seed in any::<u64>(), n in 1usize..=3) {
        let a = random_automaton(&mut rng(seed), &RandomSpec::new(n, &["a"]));
        for j in n as u32..=n as u32 + 1 {
            let base = a.gap_relation_in(&Ordinal::monomial(j, 1), j + 2).unwrap();
            for c in [2, 3] {
                prop_assert_eq!(&a.gap_relation_in(&Ordinal::monomial(j, c), j + 2).unwrap(), &base);
            }
            prop_assert_eq!(&a.gap_relation_in(&Ordinal::monomial(j + 1, 1), j + 2).unwrap(), &base);
        }
    }
}
