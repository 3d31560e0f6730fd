//! Gap relations over `w^j`, `w^j * 2`, `w^j * 3` and `w^(j+1)` coincide
//! once `j` reaches the number of states.

use std::fmt::Write as _;

use crate::automaton::{OrdinalAutomaton, Relation};
use crate::ordinal::Ordinal;

/// Multipliers compared against a single block: 2, 3 and `w`.
pub fn multipliers() -> [Ordinal; 3] {
    [Ordinal::nat(2), Ordinal::nat(3), Ordinal::omega()]
}

#[derive(Clone, Debug)]
pub struct StabilizationReport {
    pub states: usize,
    pub max_level: u32,
    /// Per level `j = 1 ..= max_level`: whether all multipliers agree.
    pub stable: Vec<bool>,
    /// Least `j ≥ 1` from which every checked level is stable.
    pub level: Option<u32>,
    /// Levels `j ≥ |Q|` that are not stable.
    pub violations: Vec<u32>,
}

impl StabilizationReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn report(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "states: {}", self.states);
        let _ = writeln!(s, "levels_checked: 1..={}", self.max_level);
        for (i, st) in self.stable.iter().enumerate() {
            let _ = writeln!(s, "level.{}: {}", i + 1, if *st { "stable" } else { "unstable" });
        }
        match self.level {
            Some(l) => {
                let _ = writeln!(s, "stabilization_level: {l}");
            }
            None => {
                let _ = writeln!(s, "stabilization_level: none");
            }
        }
        let _ = writeln!(s, "violations_from_state_count: {}", self.violations.len());
        s
    }
}

fn block(a: &OrdinalAutomaton, j: u32, c: &Ordinal) -> Relation {
    let len = Ordinal::monomial(j, 1).mul(c);
    a.gap_relation(&len).expect("finite exponent")
}

/// Compares levels `1 ..= max(max_level, |Q|)`.
pub fn stabilization_check(a: &OrdinalAutomaton, max_level: u32) -> StabilizationReport {
    let q = a.num_states() as u32;
    let top = max_level.max(q).max(1);
    let stable: Vec<bool> = (1..=top)
        .map(|j| {
            let one = a.level_relation(j);
            multipliers().iter().all(|c| block(a, j, c) == one)
        })
        .collect();
    let level = (1..=top).find(|&j| stable[j as usize - 1..].iter().all(|&s| s));
    let violations = (q.max(1)..=top).filter(|&j| !stable[j as usize - 1]).collect();
    StabilizationReport {
        states: a.num_states(),
        max_level: top,
        stable,
        level,
        violations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::RawAutomaton;
    use crate::constructions::finite_word_recognizer;
    use crate::random::{random_automaton, rng, RandomSpec};
    use crate::word::Alphabet;

    #[test]
    fn finite_word_recognizer_stabilizes_at_one() {
        let a = finite_word_recognizer(&Alphabet::from_symbols(&["a"]));
        let r = stabilization_check(&a, 4);
        assert_eq!(r.level, Some(1));
        assert!(r.ok());
    }

    #[test]
    fn no_limits_is_trivially_stable() {
        let sigma = Alphabet::from_symbols(&["a"]);
        let mut raw = RawAutomaton::new(&sigma);
        raw.state("p").initial("p").accepting("p").succ("p", sigma.blank(), "p");
        let a = raw.build().unwrap();
        let r = stabilization_check(&a, 3);
        assert!((1..=3).all(|j| a.level_relation(j).is_empty()));
        assert_eq!(r.level, Some(1));
    }

    #[test]
    fn random_automata() {
        let mut g = rng(11);
        for _ in 0..40 {
            let a = random_automaton(&mut g, &RandomSpec::new(4, &["a"]));
            let r = stabilization_check(&a, 5);
            assert!(r.ok(), "{}", r.report());
            assert!(r.level.is_some_and(|l| l <= 4));
        }
    }
}
