use ordinal_automata::oracle::LassoOracle;
use ordinal_automata::ordinal::ord;
use ordinal_automata::random::{random_automaton, rng, words_over, RandomSpec};
use proptest::prelude::*;

fn universe() -> Vec<ordinal_automata::ordinal::Ordinal> {
    ["0", "1", "w", "w+2", "w*3", "w*3+1"].iter().map(|s| ord(s)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn empty_blocks_match_lasso_search(seed in any::<u64>(), n in 1usize..=4) {
        let a = random_automaton(&mut rng(seed), &RandomSpec::new(n, &["a"]));
        let mut o = LassoOracle::new(&a);
        for j in 0..=3 {
            prop_assert_eq!(&o.empty_block(j), &a.gap_behavior(j).triples, "level {}", j);
        }
    }

    #[test]
    fn membership_matches_lasso_search(seed in any::<u64>(), n in 1usize..=4) {
        let spec = RandomSpec::new(n, &["a"]);
        let a = random_automaton(&mut rng(seed), &spec);
        let mut o = LassoOracle::new(&a);
        for w in words_over(2, &spec.alphabet, &universe()) {
            prop_assert_eq!(a.accepts(&w).unwrap(), o.accepts(&w), "{}", w);
        }
    }
}
