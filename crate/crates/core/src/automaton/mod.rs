//! Automata reading words indexed by the cuts of an ordinal shape.
//!
//! An automaton has successor transitions `(q, letter, q')` (the blank is a
//! legal letter), right-limit transitions `(S, q)` fired at cuts without a
//! direct predecessor when `S` is the set of states occurring cofinally
//! below the cut, and left-limit transitions `(q, S)`. On ordinal shapes
//! every cut except the last has a direct successor, so left-limit
//! transitions are kept in the model but never fire.

mod engine;
mod relation;
mod stateset;
pub mod text;

pub use engine::{GapBehavior, RunWitness};
pub use relation::{Relation, TracedRelation};
pub use stateset::{State, StateSet, MAX_STATES};

use std::collections::HashMap;
use std::fmt;
use std::sync::Mutex;

use thiserror::Error;

use crate::word::{Alphabet, Letter};

/// Guard of a limit transition, matched against the set of cofinal states.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum LimitGuard {
    /// The cofinal set equals this set.
    Exact(StateSet),
    /// The cofinal set lies inside `within` and meets `meets`.
    Range { within: StateSet, meets: StateSet },
}

impl LimitGuard {
    pub fn matches(&self, s: StateSet) -> bool {
        match *self {
            LimitGuard::Exact(x) => s == x,
            LimitGuard::Range { within, meets } => {
                s.is_subset(within) && !s.intersect(meets).is_empty()
            }
        }
    }
}

/// Name-based description of an automaton, as read from text or assembled
/// by a construction. [`RawAutomaton::build`] resolves and validates it.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RawAutomaton {
    pub states: Vec<String>,
    pub alphabet: Vec<Letter>,
    pub initial: Vec<String>,
    pub final_states: Vec<String>,
    pub succ: Vec<(String, Letter, String)>,
    pub rlimit: Vec<(RawGuard, String)>,
    pub llimit: Vec<(String, RawGuard)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RawGuard {
    Exact(Vec<String>),
    Range { within: Vec<String>, meets: Vec<String> },
}

impl RawGuard {
    pub fn exact<S: AsRef<str>>(names: &[S]) -> Self {
        RawGuard::Exact(names.iter().map(|s| s.as_ref().to_string()).collect())
    }
}

impl RawAutomaton {
    pub fn new(alphabet: &Alphabet) -> Self {
        RawAutomaton {
            alphabet: alphabet.letters().to_vec(),
            ..Default::default()
        }
    }

    pub fn state(&mut self, name: impl Into<String>) -> &mut Self {
        let name = name.into();
        if !self.states.contains(&name) {
            self.states.push(name);
        }
        self
    }

    pub fn initial(&mut self, name: impl Into<String>) -> &mut Self {
        self.initial.push(name.into());
        self
    }

    pub fn accepting(&mut self, name: impl Into<String>) -> &mut Self {
        self.final_states.push(name.into());
        self
    }

    pub fn succ(&mut self, from: impl Into<String>, l: Letter, to: impl Into<String>) -> &mut Self {
        self.succ.push((from.into(), l, to.into()));
        self
    }

    pub fn rlimit(&mut self, guard: RawGuard, to: impl Into<String>) -> &mut Self {
        self.rlimit.push((guard, to.into()));
        self
    }

    pub fn llimit(&mut self, from: impl Into<String>, guard: RawGuard) -> &mut Self {
        self.llimit.push((from.into(), guard));
        self
    }

    pub fn build(&self) -> Result<OrdinalAutomaton, AutomatonError> {
        let report = validate(self);
        if let Some(e) = report.errors.into_iter().next() {
            return Err(e);
        }
        let index: HashMap<&str, State> = self
            .states
            .iter()
            .enumerate()
            .map(|(i, s)| (s.as_str(), i))
            .collect();
        let st = |s: &str| index[s];
        let set = |v: &[String]| v.iter().map(|s| st(s)).collect::<StateSet>();
        let guard = |g: &RawGuard| match g {
            RawGuard::Exact(v) => LimitGuard::Exact(set(v)),
            RawGuard::Range { within, meets } => LimitGuard::Range {
                within: set(within),
                meets: set(meets),
            },
        };
        let alphabet = Alphabet::new(self.alphabet.clone()).map_err(|e| AutomatonError::Alphabet(e.to_string()))?;
        let mut succ: Vec<(State, Letter, State)> = self
            .succ
            .iter()
            .map(|(a, l, b)| (st(a), l.clone(), st(b)))
            .collect();
        succ.sort();
        succ.dedup();
        Ok(OrdinalAutomaton::assemble(
            self.states.clone(),
            alphabet,
            set(&self.initial),
            set(&self.final_states),
            succ,
            self.rlimit.iter().map(|(g, q)| (guard(g), st(q))).collect(),
            self.llimit.iter().map(|(q, g)| (st(q), guard(g))).collect(),
        ))
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AutomatonError {
    #[error("undeclared state {0:?}")]
    UnknownState(String),
    #[error("undeclared letter {0}")]
    UnknownLetter(String),
    #[error("state {0:?} declared twice")]
    DuplicateState(String),
    #[error("initial state set is empty")]
    NoInitial,
    #[error("final state set is empty")]
    NoFinal,
    #[error("too many states ({0}, at most {MAX_STATES})")]
    TooManyStates(usize),
    #[error("alphabet: {0}")]
    Alphabet(String),
    #[error("letter {0} does not belong to the automaton alphabet")]
    AlphabetMismatch(String),
    #[error("word over w^{word} given to an automaton read over w^{shape}")]
    ShapeMismatch { word: u32, shape: u32 },
    #[error("interval [{0}, {1}) is malformed for shape w^{2}")]
    BadInterval(String, String, u32),
    #[error("gap length {0} exceeds the shape w^{1}")]
    GapTooLong(String, u32),
}

#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub errors: Vec<AutomatonError>,
    pub warnings: Vec<String>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.errors.is_empty()
    }
}

/// Structural checks: declared references, nonempty initial and final sets,
/// consistent letter widths. Left-limit transitions produce a warning.
pub fn validate(raw: &RawAutomaton) -> ValidationReport {
    let mut r = ValidationReport::default();
    if raw.states.len() > MAX_STATES {
        r.errors.push(AutomatonError::TooManyStates(raw.states.len()));
    }
    for (i, s) in raw.states.iter().enumerate() {
        if raw.states[..i].contains(s) {
            r.errors.push(AutomatonError::DuplicateState(s.clone()));
        }
    }
    if let Err(e) = Alphabet::new(raw.alphabet.clone()) {
        r.errors.push(AutomatonError::Alphabet(e.to_string()));
    }
    let width = raw.alphabet.first().map(Letter::width).unwrap_or(1);
    let known = |s: &String, r: &mut ValidationReport| {
        if !raw.states.contains(s) {
            r.errors.push(AutomatonError::UnknownState(s.clone()));
        }
    };
    if raw.initial.is_empty() {
        r.errors.push(AutomatonError::NoInitial);
    }
    if raw.final_states.is_empty() {
        r.errors.push(AutomatonError::NoFinal);
    }
    for s in raw.initial.iter().chain(&raw.final_states) {
        known(s, &mut r);
    }
    for (a, l, b) in &raw.succ {
        known(a, &mut r);
        known(b, &mut r);
        let ok = if l.is_blank() {
            l.width() == width
        } else {
            raw.alphabet.contains(l)
        };
        if !ok {
            r.errors.push(AutomatonError::UnknownLetter(l.to_string()));
        }
    }
    let guard_states = |g: &RawGuard| -> Vec<String> {
        match g {
            RawGuard::Exact(v) => v.clone(),
            RawGuard::Range { within, meets } => within.iter().chain(meets).cloned().collect(),
        }
    };
    for (g, q) in &raw.rlimit {
        known(q, &mut r);
        for s in guard_states(g) {
            known(&s, &mut r);
        }
    }
    for (q, g) in &raw.llimit {
        known(q, &mut r);
        for s in guard_states(g) {
            known(&s, &mut r);
        }
    }
    if !raw.llimit.is_empty() {
        r.warnings.push(format!(
            "{} left-limit transitions unreachable on ordinal shapes",
            raw.llimit.len()
        ));
    }
    r
}

/// A validated automaton with indexed transitions.
pub struct OrdinalAutomaton {
    names: Vec<String>,
    alphabet: Alphabet,
    initial: StateSet,
    final_states: StateSet,
    succ: Vec<(State, Letter, State)>,
    right_limit: Vec<(LimitGuard, State)>,
    left_limit: Vec<(State, LimitGuard)>,
    // step[letter rank][state] = successor targets; rank 0 is the blank.
    step: Vec<Vec<StateSet>>,
    rl_exact: HashMap<StateSet, StateSet>,
    rl_range: Vec<(StateSet, StateSet, State)>,
    cache: Mutex<engine::Cache>,
}

impl OrdinalAutomaton {
    fn assemble(
        names: Vec<String>,
        alphabet: Alphabet,
        initial: StateSet,
        final_states: StateSet,
        succ: Vec<(State, Letter, State)>,
        right_limit: Vec<(LimitGuard, State)>,
        left_limit: Vec<(State, LimitGuard)>,
    ) -> Self {
        let n = names.len();
        let mut step = vec![vec![StateSet::EMPTY; n]; alphabet.letters().len() + 1];
        for (a, l, b) in &succ {
            let r = alphabet.rank(l).expect("validated letter");
            step[r][*a].insert(*b);
        }
        let mut rl_exact: HashMap<StateSet, StateSet> = HashMap::new();
        let mut rl_range = Vec::new();
        for (g, q) in &right_limit {
            match *g {
                LimitGuard::Exact(s) => rl_exact.entry(s).or_default().insert(*q),
                LimitGuard::Range { within, meets } => rl_range.push((within, meets, *q)),
            }
        }
        OrdinalAutomaton {
            names,
            alphabet,
            initial,
            final_states,
            succ,
            right_limit,
            left_limit,
            step,
            rl_exact,
            rl_range,
            cache: Mutex::new(engine::Cache::default()),
        }
    }

    pub fn num_states(&self) -> usize {
        self.names.len()
    }

    pub fn state_names(&self) -> &[String] {
        &self.names
    }

    pub fn state_name(&self, q: State) -> &str {
        &self.names[q]
    }

    pub fn state_index(&self, name: &str) -> Option<State> {
        self.names.iter().position(|n| n == name)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn width(&self) -> usize {
        self.alphabet.width()
    }

    pub fn initial(&self) -> StateSet {
        self.initial
    }

    pub fn final_states(&self) -> StateSet {
        self.final_states
    }

    pub fn successor_transitions(&self) -> &[(State, Letter, State)] {
        &self.succ
    }

    pub fn right_limit_transitions(&self) -> &[(LimitGuard, State)] {
        &self.right_limit
    }

    pub fn left_limit_transitions(&self) -> &[(State, LimitGuard)] {
        &self.left_limit
    }

    pub fn all_states(&self) -> StateSet {
        StateSet::full(self.num_states())
    }

    /// Targets of right-limit transitions whose guard accepts the cofinal set `s`.
    pub fn limit_targets(&self, s: StateSet) -> StateSet {
        let mut out = self.rl_exact.get(&s).copied().unwrap_or_default();
        for &(within, meets, q) in &self.rl_range {
            if s.is_subset(within) && !s.intersect(meets).is_empty() {
                out.insert(q);
            }
        }
        out
    }

    /// Successor targets from `q` on letter `l`.
    pub fn step_targets(&self, q: State, l: &Letter) -> Result<StateSet, AutomatonError> {
        let r = self
            .alphabet
            .rank(l)
            .ok_or_else(|| AutomatonError::AlphabetMismatch(l.to_string()))?;
        Ok(self.step[r][q])
    }

    /// The one-position relation for letter `l`.
    pub fn step_relation(&self, l: &Letter) -> Result<Relation, AutomatonError> {
        let r = self
            .alphabet
            .rank(l)
            .ok_or_else(|| AutomatonError::AlphabetMismatch(l.to_string()))?;
        Ok(Relation::from_rows(self.step[r].clone()))
    }

    pub fn validation_warnings(&self) -> Vec<String> {
        if self.left_limit.is_empty() {
            Vec::new()
        } else {
            vec![format!(
                "{} left-limit transitions unreachable on ordinal shapes",
                self.left_limit.len()
            )]
        }
    }

    pub fn to_raw(&self) -> RawAutomaton {
        let names = |s: StateSet| s.iter().map(|q| self.names[q].clone()).collect::<Vec<_>>();
        let guard = |g: &LimitGuard| match *g {
            LimitGuard::Exact(s) => RawGuard::Exact(names(s)),
            LimitGuard::Range { within, meets } => RawGuard::Range {
                within: names(within),
                meets: names(meets),
            },
        };
        RawAutomaton {
            states: self.names.clone(),
            alphabet: self.alphabet.letters().to_vec(),
            initial: names(self.initial),
            final_states: names(self.final_states),
            succ: self
                .succ
                .iter()
                .map(|(a, l, b)| (self.names[*a].clone(), l.clone(), self.names[*b].clone()))
                .collect(),
            rlimit: self
                .right_limit
                .iter()
                .map(|(g, q)| (guard(g), self.names[*q].clone()))
                .collect(),
            llimit: self
                .left_limit
                .iter()
                .map(|(q, g)| (self.names[*q].clone(), guard(g)))
                .collect(),
        }
    }

    /// Copy with a different final-state set.
    pub fn with_final(&self, final_states: StateSet) -> OrdinalAutomaton {
        OrdinalAutomaton::assemble(
            self.names.clone(),
            self.alphabet.clone(),
            self.initial,
            final_states,
            self.succ.clone(),
            self.right_limit.clone(),
            self.left_limit.clone(),
        )
    }

    /// Copy with a different initial-state set.
    pub fn with_initial(&self, initial: StateSet) -> OrdinalAutomaton {
        OrdinalAutomaton::assemble(
            self.names.clone(),
            self.alphabet.clone(),
            initial,
            self.final_states,
            self.succ.clone(),
            self.right_limit.clone(),
            self.left_limit.clone(),
        )
    }

    pub fn state_set_names(&self, s: StateSet) -> String {
        let v: Vec<&str> = s.iter().map(|q| self.names[q].as_str()).collect();
        format!("{{{}}}", v.join(" "))
    }
}

impl Clone for OrdinalAutomaton {
    fn clone(&self) -> Self {
        OrdinalAutomaton::assemble(
            self.names.clone(),
            self.alphabet.clone(),
            self.initial,
            self.final_states,
            self.succ.clone(),
            self.right_limit.clone(),
            self.left_limit.clone(),
        )
    }
}

impl fmt::Debug for OrdinalAutomaton {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&text::format_automaton(self))
    }
}

impl PartialEq for OrdinalAutomaton {
    fn eq(&self, other: &Self) -> bool {
        self.to_raw() == other.to_raw()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny() -> RawAutomaton {
        let ab = Alphabet::from_symbols(&["a"]);
        let mut r = RawAutomaton::new(&ab);
        r.state("q0").state("q1").initial("q0").accepting("q1");
        r.succ("q0", Letter::single("a"), "q1")
            .succ("q1", Letter::blank(1), "q1")
            .rlimit(RawGuard::exact(&["q1"]), "q1");
        r
    }

    #[test]
    fn builds_valid_automaton() {
        let a = tiny().build().unwrap();
        assert_eq!(a.num_states(), 2);
        assert_eq!(a.limit_targets(StateSet::singleton(1)), StateSet::singleton(1));
        assert!(a.limit_targets(StateSet::singleton(0)).is_empty());
        assert!(a.validation_warnings().is_empty());
    }

    #[test]
    fn empty_final_set_is_an_error() {
        let mut r = tiny();
        r.final_states.clear();
        assert_eq!(validate(&r).errors, vec![AutomatonError::NoFinal]);
        assert!(r.build().is_err());
    }

    #[test]
    fn undeclared_letter_is_an_error() {
        let mut r = tiny();
        r.succ("q0", Letter::single("b"), "q1");
        assert!(matches!(validate(&r).errors[..], [AutomatonError::UnknownLetter(_)]));
    }

    #[test]
    fn dangling_state_is_an_error() {
        let mut r = tiny();
        r.rlimit(RawGuard::exact(&["zz"]), "q0");
        assert!(matches!(validate(&r).errors[..], [AutomatonError::UnknownState(_)]));
    }

    #[test]
    fn range_guards() {
        let g = LimitGuard::Range {
            within: StateSet(0b111),
            meets: StateSet(0b100),
        };
        assert!(g.matches(StateSet(0b101)));
        assert!(!g.matches(StateSet(0b011)));
        assert!(!g.matches(StateSet(0b1100)));
    }
}
