//! Concrete automata.

use std::cmp::Ordering;

use crate::automaton::{OrdinalAutomaton, RawAutomaton, RawGuard};
use crate::word::{Alphabet, Letter};

fn build(raw: &RawAutomaton) -> OrdinalAutomaton {
    raw.build().expect("construction is well formed")
}

/// Accepts exactly the finite-support words over `alphabet`.
///
/// State `p` marks cuts right after a letter, `n` every other cut. The error
/// states `e_l`, `e_r` absorb limits of infinitely many letters.
pub fn finite_word_recognizer(alphabet: &Alphabet) -> OrdinalAutomaton {
    let mut r = RawAutomaton::new(alphabet);
    for s in ["e_l", "e_r", "n", "p"] {
        r.state(s);
    }
    r.initial("n").accepting("n").accepting("p");
    let blank = alphabet.blank();
    r.succ("n", blank.clone(), "n").succ("p", blank, "n");
    for l in alphabet.letters() {
        r.succ("n", l.clone(), "p").succ("p", l.clone(), "p");
    }
    r.rlimit(RawGuard::exact(&["n"]), "n")
        .llimit("n", RawGuard::exact(&["n"]))
        .llimit("p", RawGuard::exact(&["n"]))
        .rlimit(RawGuard::exact(&["p"]), "e_l")
        .llimit("e_r", RawGuard::exact(&["p"]))
        .rlimit(RawGuard::exact(&["n", "p"]), "e_l")
        .llimit("e_r", RawGuard::exact(&["n", "p"]));
    build(&r)
}

/// Name of the state `(i, j)` of [`rank_probe`].
pub fn probe_state(i: usize, j: usize) -> String {
    format!("{i}.{j}")
}

/// The automaton `C_n` on `{0..n}²`, tracking left and right condensation
/// ranks of cuts.
///
/// A right limit whose cofinal set stays inside `{0..i}²` and touches rank
/// `i` enters left rank `i + 1`; left limits mirror this on the second
/// coordinate. Successor transitions reset the left rank to 0.
pub fn rank_probe(n: usize, alphabet: &Alphabet) -> OrdinalAutomaton {
    let mut r = RawAutomaton::new(alphabet);
    for i in 0..=n {
        for j in 0..=n {
            r.state(probe_state(i, j));
        }
    }
    for j in 0..=n {
        r.initial(probe_state(0, j));
        r.accepting(probe_state(j, 0));
    }
    let mut letters = vec![alphabet.blank()];
    letters.extend(alphabet.letters().iter().cloned());
    for i in 0..=n {
        for j in 0..=n {
            for l in &letters {
                r.succ(probe_state(i, 0), l.clone(), probe_state(0, j));
            }
        }
    }
    let range = |i: usize| {
        let within: Vec<String> = (0..=i)
            .flat_map(|a| (0..=i).map(move |b| probe_state(a, b)))
            .collect();
        let meets: Vec<String> = (0..=i)
            .flat_map(|k| [probe_state(i, k), probe_state(k, i)])
            .collect();
        RawGuard::Range { within, meets }
    };
    for i in 0..n {
        for j in 0..=n {
            r.rlimit(range(i), probe_state(i + 1, j));
            r.llimit(probe_state(j, i + 1), range(i));
        }
    }
    build(&r)
}

/// Accepts `w ⊗ v` exactly when `w < v` in the word order: the largest
/// position where the words differ decides, with the blank least.
pub fn word_order_automaton(alphabet: &Alphabet) -> OrdinalAutomaton {
    order_automaton(alphabet, false)
}

/// Accepts `w ⊗ v` exactly when `w ≤ v`.
pub fn word_order_leq_automaton(alphabet: &Alphabet) -> OrdinalAutomaton {
    order_automaton(alphabet, true)
}

fn order_automaton(alphabet: &Alphabet, reflexive: bool) -> OrdinalAutomaton {
    let pairs = Alphabet::product(&[alphabet, alphabet]);
    let mut r = RawAutomaton::new(&pairs);
    r.state("s0").state("s1");
    r.initial("s0").accepting("s1");
    if reflexive {
        r.state("e").initial("e").accepting("e");
    }
    let mut all = vec![pairs.blank()];
    all.extend(pairs.letters().iter().cloned());
    for l in &all {
        let x = l.select(&[0]);
        let y = l.select(&[1]);
        r.succ("s0", l.clone(), "s0");
        match alphabet.cmp_letters(&x, &y) {
            Ordering::Less => {
                r.succ("s0", l.clone(), "s1");
            }
            Ordering::Equal => {
                r.succ("s1", l.clone(), "s1");
                if reflexive {
                    r.succ("e", l.clone(), "e");
                }
            }
            Ordering::Greater => {}
        }
    }
    r.rlimit(RawGuard::exact(&["s0"]), "s0")
        .rlimit(RawGuard::exact(&["s1"]), "s1");
    if reflexive {
        r.rlimit(RawGuard::exact(&["e"]), "e");
    }
    build(&r)
}

/// Domain of the unary presentation of the naturals over `w`: `n` is the
/// word with `a` at positions `0..n`.
pub fn unary_domain() -> OrdinalAutomaton {
    let ab = Alphabet::from_symbols(&["a"]);
    let a = Letter::single("a");
    let mut r = RawAutomaton::new(&ab);
    r.state("d0").state("d1").initial("d0").accepting("d1");
    r.succ("d0", a, "d0")
        .succ("d0", Letter::blank(1), "d1")
        .succ("d1", Letter::blank(1), "d1")
        .rlimit(RawGuard::exact(&["d1"]), "d1");
    build(&r)
}

/// Strict order of the unary presentation.
pub fn unary_less() -> OrdinalAutomaton {
    let ab = Alphabet::from_symbols(&["a"]);
    let pairs = Alphabet::product(&[&ab, &ab]);
    let l = |s: &str| Letter::parse(s).expect("letter literal");
    let mut r = RawAutomaton::new(&pairs);
    r.state("l0").state("l1").state("l2").initial("l0").accepting("l2");
    r.succ("l0", l("(a,a)"), "l0")
        .succ("l0", l("(_,a)"), "l1")
        .succ("l1", l("(_,a)"), "l1")
        .succ("l1", l("(_,_)"), "l2")
        .succ("l2", l("(_,_)"), "l2")
        .rlimit(RawGuard::exact(&["l2"]), "l2");
    build(&r)
}

/// Successor on the encoding of ordinals below `w^w` over `w^2`: one more
/// `a` at the end of the initial run in the first `w`-block, everything
/// else unchanged.
pub fn enc_successor() -> OrdinalAutomaton {
    let ab = Alphabet::from_symbols(&["a"]);
    let pairs = Alphabet::product(&[&ab, &ab]);
    let l = |s: &str| Letter::parse(s).expect("letter literal");
    let mut r = RawAutomaton::new(&pairs);
    r.state("s0").state("s1").state("s2");
    r.initial("s0").accepting("s2");
    r.succ("s0", l("(a,a)"), "s0")
        .succ("s0", l("(_,a)"), "s1")
        .succ("s1", l("(_,_)"), "s1")
        .succ("s2", l("(a,a)"), "s2")
        .succ("s2", l("(_,_)"), "s2")
        .rlimit(RawGuard::exact(&["s1"]), "s2")
        .rlimit(RawGuard::exact(&["s2"]), "s2");
    build(&r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::validate;
    use crate::ordinal::ord;
    use crate::word::OrdinalWord;

    #[test]
    fn example_recognizer_shape() {
        let a = finite_word_recognizer(&Alphabet::from_symbols(&["a", "b"]));
        assert_eq!(a.num_states(), 4);
        assert_eq!(a.state_set_names(a.initial()), "{n}");
        assert_eq!(a.state_set_names(a.final_states()), "{n p}");
        let report = validate(&a.to_raw());
        assert!(report.is_valid());
        assert_eq!(report.warnings.len(), 1);
        assert!(report.warnings[0].starts_with("4 left-limit"));
    }

    #[test]
    fn probe_small_cases() {
        let ab = Alphabet::from_symbols(&["a"]);
        let c1 = rank_probe(1, &ab);
        let w1 = OrdinalWord::empty(1, 1);
        let run = c1.run_witness(&w1).unwrap().unwrap();
        assert_eq!(c1.state_name(run.state_at(&ord("w")).unwrap()), "1.0");
        assert!(!c1.accepts(&OrdinalWord::empty(2, 1)).unwrap());
        let c2 = rank_probe(2, &ab);
        let run = c2.run_witness(&OrdinalWord::empty(2, 1)).unwrap().unwrap();
        assert_eq!(c2.state_name(run.state_at(&ord("w^2")).unwrap()), "2.0");
        assert!(!rank_probe(0, &ab).accepts(&w1).unwrap());
    }

    #[test]
    fn unary_presentation() {
        let d = unary_domain();
        let lt = unary_less();
        let n = |k: u64| OrdinalWord::from_positions(1, "a", &(0..k).map(crate::ordinal::Ordinal::nat).collect::<Vec<_>>());
        for k in 0..4 {
            assert!(d.accepts(&n(k)).unwrap());
        }
        assert!(!d.accepts(&OrdinalWord::parse("a@1", None, 1).unwrap()).unwrap());
        for x in 0..4 {
            for y in 0..4 {
                let pair = crate::word::convolve(&[&n(x), &n(y)]).unwrap();
                assert_eq!(lt.accepts(&pair).unwrap(), x < y, "{x} {y}");
            }
        }
    }
}
