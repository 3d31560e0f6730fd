use std::fmt;

/// Index of a state inside one automaton.
pub type State = usize;

/// Maximum number of states an automaton may declare.
pub const MAX_STATES: usize = 64;

/// A set of states as a 64-bit mask.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct StateSet(pub u64);

impl StateSet {
    pub const EMPTY: StateSet = StateSet(0);

    pub fn singleton(q: State) -> Self {
        StateSet(1 << q)
    }

    pub fn pair(a: State, b: State) -> Self {
        StateSet((1 << a) | (1 << b))
    }

    pub fn full(n: usize) -> Self {
        if n >= 64 {
            StateSet(u64::MAX)
        } else {
            StateSet((1u64 << n) - 1)
        }
    }

    pub fn contains(self, q: State) -> bool {
        self.0 >> q & 1 == 1
    }

    pub fn insert(&mut self, q: State) {
        self.0 |= 1 << q;
    }

    pub fn with(self, q: State) -> Self {
        StateSet(self.0 | 1 << q)
    }

    pub fn union(self, o: StateSet) -> Self {
        StateSet(self.0 | o.0)
    }

    pub fn intersect(self, o: StateSet) -> Self {
        StateSet(self.0 & o.0)
    }

    pub fn is_subset(self, o: StateSet) -> bool {
        self.0 & !o.0 == 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn iter(self) -> impl Iterator<Item = State> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let q = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(q)
            }
        })
    }
}

impl FromIterator<State> for StateSet {
    fn from_iter<I: IntoIterator<Item = State>>(it: I) -> Self {
        it.into_iter().fold(StateSet::EMPTY, StateSet::with)
    }
}

impl fmt::Debug for StateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}
