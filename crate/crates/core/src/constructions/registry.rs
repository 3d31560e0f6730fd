//! Named constructions, shared by presentation files and the command line.

use thiserror::Error;

use super::recognizers::{
    enc_successor, finite_word_recognizer, rank_probe, unary_domain, unary_less, word_order_automaton,
    word_order_leq_automaton,
};
use crate::automaton::{OrdinalAutomaton, RawAutomaton, RawGuard, StateSet};
use crate::random::{random_automaton, rng, RandomSpec};
use crate::word::{Alphabet, Letter};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GenError {
    #[error("unknown construction {0:?} (known: {1})")]
    Unknown(String, String),
    #[error("{0}: {1}")]
    BadParams(String, String),
    #[error("product has {0} states, at most {1} supported")]
    TooLarge(usize, usize),
}

/// `(name, parameter summary, description)` of every named construction.
pub const GENERATORS: &[(&str, &str, &str)] = &[
    ("finite-words", "[symbols]", "all finite-support words (default alphabet a)"),
    ("rank-probe", "n [symbols]", "condensation-rank probe C_n"),
    ("word-order", "[symbols]", "strict word order on pairs"),
    ("word-order-leq", "[symbols]", "reflexive word order on pairs"),
    ("unary-domain", "", "unary naturals over w"),
    ("unary-less", "", "strict order of unary naturals"),
    ("enc-domain", "", "encodings of ordinals below w^w over w^2"),
    ("enc-successor", "", "successor on those encodings"),
    ("interval", "[symbols]", "triples (x, y1, y2) with y1 <= x <= y2 in the word order"),
    ("random", "seed [states]", "seeded random automaton over {a}"),
];

fn symbols(args: &[&str]) -> Alphabet {
    if args.is_empty() {
        Alphabet::from_symbols(&["a"])
    } else {
        Alphabet::from_symbols(args)
    }
}

fn nat_arg(name: &str, args: &[&str], i: usize) -> Result<usize, GenError> {
    args.get(i)
        .ok_or_else(|| GenError::BadParams(name.into(), format!("missing parameter {}", i + 1)))?
        .parse()
        .map_err(|_| GenError::BadParams(name.into(), format!("parameter {:?} is not a natural number", args[i])))
}

/// Builds a named construction. `spec` is `name` or `name:arg:arg...`.
pub fn generate(spec: &str) -> Result<OrdinalAutomaton, GenError> {
    let mut parts = spec.split(':');
    let name = parts.next().unwrap_or("");
    let args: Vec<&str> = parts.filter(|s| !s.is_empty()).collect();
    generate_with(name, &args)
}

pub fn generate_with(name: &str, args: &[&str]) -> Result<OrdinalAutomaton, GenError> {
    let none = |a: OrdinalAutomaton| {
        if args.is_empty() {
            Ok(a)
        } else {
            Err(GenError::BadParams(name.into(), "takes no parameters".into()))
        }
    };
    match name {
        "finite-words" => Ok(finite_word_recognizer(&symbols(args))),
        "rank-probe" => {
            let n = nat_arg(name, args, 0)?;
            if (n + 1) * (n + 1) > crate::automaton::MAX_STATES {
                return Err(GenError::BadParams(name.into(), format!("n = {n} is too large")));
            }
            Ok(rank_probe(n, &symbols(&args[1..])))
        }
        "word-order" => Ok(word_order_automaton(&symbols(args))),
        "word-order-leq" => Ok(word_order_leq_automaton(&symbols(args))),
        "unary-domain" => none(unary_domain()),
        "unary-less" => none(unary_less()),
        "enc-domain" => none(enc_domain()),
        "enc-successor" => none(enc_successor()),
        "interval" => interval_automaton(&symbols(args)),
        "random" => {
            let seed = nat_arg(name, args, 0)? as u64;
            let states = if args.len() > 1 { nat_arg(name, args, 1)? } else { 4 };
            if states == 0 || states > 8 {
                return Err(GenError::BadParams(name.into(), "states must lie in 1..=8".into()));
            }
            Ok(random_automaton(&mut rng(seed), &RandomSpec::new(states, &["a"])))
        }
        _ => Err(GenError::Unknown(
            name.into(),
            GENERATORS.iter().map(|g| g.0).collect::<Vec<_>>().join(", "),
        )),
    }
}

/// Encodings of ordinals below `w^w` over `w^2`: every `w`-block starts
/// with a run of `a` and is blank afterwards.
pub fn enc_domain() -> OrdinalAutomaton {
    let ab = Alphabet::from_symbols(&["a"]);
    let mut r = RawAutomaton::new(&ab);
    r.state("r").state("g").state("f");
    r.initial("r").accepting("f");
    r.succ("r", Letter::single("a"), "r")
        .succ("r", Letter::blank(1), "g")
        .succ("g", Letter::blank(1), "g")
        .rlimit(RawGuard::exact(&["g"]), "r")
        .rlimit(RawGuard::exact(&["r", "g"]), "f");
    r.build().expect("construction is well formed")
}

/// `y1 <= x <= y2` on tracks `(x, y1, y2)`.
pub fn interval_automaton(alphabet: &Alphabet) -> Result<OrdinalAutomaton, GenError> {
    let leq = word_order_leq_automaton(alphabet);
    let triples = Alphabet::product(&[alphabet, alphabet, alphabet]);
    let w = alphabet.width();
    let x: Vec<usize> = (0..w).collect();
    let y1: Vec<usize> = (w..2 * w).collect();
    let y2: Vec<usize> = (2 * w..3 * w).collect();
    let lower: Vec<usize> = y1.iter().chain(&x).copied().collect();
    let upper: Vec<usize> = x.iter().chain(&y2).copied().collect();
    track_product(&leq, &lower, &leq, &upper, &triples)
}

/// Largest product handled by [`track_product`]; limit guards are enumerated per subset.
pub const PRODUCT_LIMIT: usize = 16;

/// Synchronous product: `a` reads the tracks `ta` of each letter of
/// `alphabet`, `b` reads `tb`. Accepts when both accept.
pub fn track_product(
    a: &OrdinalAutomaton,
    ta: &[usize],
    b: &OrdinalAutomaton,
    tb: &[usize],
    alphabet: &Alphabet,
) -> Result<OrdinalAutomaton, GenError> {
    let (na, nb) = (a.num_states(), b.num_states());
    let n = na * nb;
    if n > PRODUCT_LIMIT {
        return Err(GenError::TooLarge(n, PRODUCT_LIMIT));
    }
    let name = |p: usize, q: usize| format!("{}.{}", a.state_name(p), b.state_name(q));
    let mut r = RawAutomaton::new(alphabet);
    for p in 0..na {
        for q in 0..nb {
            r.state(name(p, q));
        }
    }
    for p in a.initial().iter() {
        for q in b.initial().iter() {
            r.initial(name(p, q));
        }
    }
    for p in a.final_states().iter() {
        for q in b.final_states().iter() {
            r.accepting(name(p, q));
        }
    }
    let mut letters = vec![alphabet.blank()];
    letters.extend(alphabet.letters().iter().cloned());
    for l in &letters {
        let (la, lb) = (l.select(ta), l.select(tb));
        for p in 0..na {
            let Ok(sa) = a.step_targets(p, &la) else { continue };
            for q in 0..nb {
                let Ok(sb) = b.step_targets(q, &lb) else { continue };
                for p2 in sa.iter() {
                    for q2 in sb.iter() {
                        r.succ(name(p, q), l.clone(), name(p2, q2));
                    }
                }
            }
        }
    }
    // A cofinal set of pairs projects to the cofinal sets of both components.
    for mask in 1u64..(1u64 << n) {
        let (mut sa, mut sb) = (StateSet::EMPTY, StateSet::EMPTY);
        let mut members = Vec::new();
        for i in (0..n).filter(|i| mask >> i & 1 == 1) {
            sa.insert(i / nb);
            sb.insert(i % nb);
            members.push(name(i / nb, i % nb));
        }
        let (ta, tb) = (a.limit_targets(sa), b.limit_targets(sb));
        for p in ta.iter() {
            for q in tb.iter() {
                r.rlimit(RawGuard::Exact(members.clone()), name(p, q));
            }
        }
    }
    r.build().map_err(|e| GenError::BadParams("product".into(), e.to_string()))
}
