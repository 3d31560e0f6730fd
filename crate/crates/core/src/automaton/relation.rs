use std::collections::BTreeSet;
use std::fmt;

use super::stateset::{State, StateSet};

/// A binary relation on the states `0..n`, stored as one successor set per row.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Relation {
    rows: Vec<StateSet>,
}

impl Relation {
    pub fn empty(n: usize) -> Self {
        Relation {
            rows: vec![StateSet::EMPTY; n],
        }
    }

    pub fn identity(n: usize) -> Self {
        Relation {
            rows: (0..n).map(StateSet::singleton).collect(),
        }
    }

    pub fn from_rows(rows: Vec<StateSet>) -> Self {
        Relation { rows }
    }

    pub fn from_pairs(n: usize, pairs: impl IntoIterator<Item = (State, State)>) -> Self {
        let mut r = Relation::empty(n);
        for (a, b) in pairs {
            r.rows[a].insert(b);
        }
        r
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn row(&self, q: State) -> StateSet {
        self.rows[q]
    }

    pub fn rows(&self) -> &[StateSet] {
        &self.rows
    }

    pub fn contains(&self, q: State, q2: State) -> bool {
        self.rows[q].contains(q2)
    }

    pub fn is_empty(&self) -> bool {
        self.rows.iter().all(|r| r.is_empty())
    }

    pub fn pairs(&self) -> impl Iterator<Item = (State, State)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(q, r)| r.iter().map(move |q2| (q, q2)))
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &Relation) -> Relation {
        Relation {
            rows: self.rows.iter().map(|&r| other.image(r)).collect(),
        }
    }

    pub fn union(&self, other: &Relation) -> Relation {
        Relation {
            rows: self
                .rows
                .iter()
                .zip(&other.rows)
                .map(|(a, b)| a.union(*b))
                .collect(),
        }
    }

    /// States reachable from some state of `s`.
    pub fn image(&self, s: StateSet) -> StateSet {
        s.iter().fold(StateSet::EMPTY, |acc, q| acc.union(self.rows[q]))
    }

    /// States from which some state of `s` is reachable.
    pub fn preimage(&self, s: StateSet) -> StateSet {
        self.rows
            .iter()
            .enumerate()
            .filter(|(_, r)| !r.intersect(s).is_empty())
            .map(|(q, _)| q)
            .collect()
    }

    pub fn meets(&self, from: StateSet, to: StateSet) -> bool {
        !self.image(from).intersect(to).is_empty()
    }
}

impl fmt::Debug for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.pairs()).finish()
    }
}

/// A relation whose pairs carry the set of states visited on the way.
///
/// Composition joins on the middle state and unites the visited sets.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TracedRelation {
    n: usize,
    triples: BTreeSet<(State, StateSet, State)>,
}

impl TracedRelation {
    pub fn new(n: usize, triples: impl IntoIterator<Item = (State, StateSet, State)>) -> Self {
        TracedRelation {
            n,
            triples: triples.into_iter().collect(),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::new(n, (0..n).map(|q| (q, StateSet::singleton(q), q)))
    }

    pub fn triples(&self) -> &BTreeSet<(State, StateSet, State)> {
        &self.triples
    }

    pub fn then(&self, other: &TracedRelation) -> TracedRelation {
        let mut out = BTreeSet::new();
        for &(a, s, b) in &self.triples {
            for &(_, t, c) in other.triples.range((b, StateSet::EMPTY, 0)..=(b, StateSet(u64::MAX), usize::MAX)) {
                out.insert((a, s.union(t), c));
            }
        }
        TracedRelation { n: self.n, triples: out }
    }

    pub fn relation(&self) -> Relation {
        Relation::from_pairs(self.n, self.triples.iter().map(|&(a, _, b)| (a, b)))
    }
}

impl fmt::Debug for TracedRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(&self.triples).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn arb_traced(n: usize) -> impl Strategy<Value = TracedRelation> {
        prop::collection::vec((0..n, 0u64..(1 << n), 0..n), 0..8).prop_map(move |v| {
            TracedRelation::new(
                n,
                v.into_iter()
                    .map(|(a, s, b)| (a, StateSet(s).with(a).with(b), b)),
            )
        })
    }

    fn arb_rel(n: usize) -> impl Strategy<Value = Relation> {
        prop::collection::vec(0u64..(1 << n), n).prop_map(|v| Relation::from_rows(v.into_iter().map(StateSet).collect()))
    }

    proptest! {
        #[test]
        fn traced_composition_is_associative(a in arb_traced(4), b in arb_traced(4), c in arb_traced(4)) {
            prop_assert_eq!(a.then(&b).then(&c), a.then(&b.then(&c)));
        }

        #[test]
        fn traced_identity_is_neutral(a in arb_traced(4)) {
            let id = TracedRelation::identity(4);
            prop_assert_eq!(id.then(&a), a.clone());
            prop_assert_eq!(a.then(&id), a);
        }

        #[test]
        fn composition_is_associative(a in arb_rel(5), b in arb_rel(5), c in arb_rel(5)) {
            prop_assert_eq!(a.then(&b).then(&c), a.then(&b.then(&c)));
        }

        #[test]
        fn forgetting_traces_commutes_with_composition(a in arb_traced(4), b in arb_traced(4)) {
            prop_assert_eq!(a.then(&b).relation(), a.relation().then(&b.relation()));
        }
    }

    #[test]
    fn image_and_preimage() {
        let r = Relation::from_pairs(3, [(0, 1), (1, 2)]);
        assert_eq!(r.image(StateSet::singleton(0)), StateSet::singleton(1));
        assert_eq!(r.preimage(StateSet::singleton(2)), StateSet::singleton(1));
        assert!(r.then(&r).contains(0, 2));
        assert_eq!(r.then(&Relation::identity(3)), r);
    }
}
