//! Seeded random automata for sampling-based checks.

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::automaton::{OrdinalAutomaton, RawAutomaton, RawGuard};
use crate::ordinal::Ordinal;
use crate::word::{Alphabet, Letter, OrdinalWord};

/// Shape of the random automata drawn by [`random_automaton`].
#[derive(Clone, Debug)]
pub struct RandomSpec {
    pub states: usize,
    pub alphabet: Alphabet,
    /// Probability of each possible successor transition.
    pub succ_density: f64,
    /// Probability that a given nonempty state set carries a right-limit transition.
    pub limit_density: f64,
}

impl RandomSpec {
    pub fn new(states: usize, symbols: &[&str]) -> Self {
        RandomSpec {
            states,
            alphabet: Alphabet::from_symbols(symbols),
            succ_density: 0.35,
            limit_density: 0.3,
        }
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_automaton<R: Rng>(rng: &mut R, spec: &RandomSpec) -> OrdinalAutomaton {
    let n = spec.states;
    let names: Vec<String> = (0..n).map(|i| format!("q{i}")).collect();
    let mut raw = RawAutomaton::new(&spec.alphabet);
    for s in &names {
        raw.state(s.clone());
    }
    let pick_nonempty = |rng: &mut R| -> Vec<String> {
        let mut v: Vec<String> = names.iter().filter(|_| rng.gen_bool(0.4)).cloned().collect();
        if v.is_empty() {
            v.push(names.choose(rng).unwrap().clone());
        }
        v
    };
    raw.initial = pick_nonempty(rng);
    raw.final_states = pick_nonempty(rng);
    let mut letters = vec![spec.alphabet.blank()];
    letters.extend(spec.alphabet.letters().iter().cloned());
    for a in &names {
        for l in &letters {
            for b in &names {
                if rng.gen_bool(spec.succ_density) {
                    raw.succ(a.clone(), l.clone(), b.clone());
                }
            }
        }
    }
    for mask in 1u64..(1 << n) {
        if rng.gen_bool(spec.limit_density) {
            let set: Vec<&String> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| &names[i]).collect();
            raw.rlimit(RawGuard::exact(&set), names.choose(rng).unwrap().clone());
        }
    }
    raw.build().expect("generated automaton is well formed")
}

/// All words over `alphabet` (one track) whose support is a subset of `positions`.
pub fn words_over(shape: u32, alphabet: &Alphabet, positions: &[Ordinal]) -> Vec<OrdinalWord> {
    let mut choices = vec![alphabet.blank()];
    choices.extend(alphabet.letters().iter().cloned());
    let total = choices.len().pow(positions.len() as u32);
    (0..total)
        .map(|mut code| {
            let entries: Vec<(Ordinal, Letter)> = positions
                .iter()
                .map(|p| {
                    let l = choices[code % choices.len()].clone();
                    code /= choices.len();
                    (p.clone(), l)
                })
                .collect();
            OrdinalWord::new(shape, alphabet.width(), entries).expect("positions inside the shape")
        })
        .collect()
}

/// A random word with at most `max_letters` letters placed below `w^shape`,
/// using coefficients up to `max_coeff`.
pub fn random_word<R: Rng>(
    rng: &mut R,
    shape: u32,
    alphabet: &Alphabet,
    max_letters: usize,
    max_coeff: u64,
) -> OrdinalWord {
    let count = rng.gen_range(0..=max_letters);
    let mut entries: Vec<(Ordinal, Letter)> = Vec::new();
    for _ in 0..count {
        let coeffs: Vec<u64> = (0..shape).map(|_| rng.gen_range(0..=max_coeff)).collect();
        let p = Ordinal::from_finite_coeffs(&coeffs);
        if entries.iter().any(|(q, _)| q == &p) {
            continue;
        }
        let l = alphabet.letters().choose(rng).expect("nonempty alphabet").clone();
        entries.push((p, l));
    }
    OrdinalWord::new(shape, alphabet.width(), entries).expect("positions inside the shape")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ordinal::ord;

    #[test]
    fn same_seed_same_automaton() {
        let spec = RandomSpec::new(3, &["a", "b"]);
        let a = random_automaton(&mut rng(7), &spec);
        let b = random_automaton(&mut rng(7), &spec);
        assert_eq!(a, b);
    }

    #[test]
    fn word_universe_size() {
        let ab = Alphabet::from_symbols(&["a"]);
        let ws = words_over(2, &ab, &[ord("0"), ord("w"), ord("w+1")]);
        assert_eq!(ws.len(), 8);
        assert!(ws.iter().any(|w| w.is_empty()));
    }
}
