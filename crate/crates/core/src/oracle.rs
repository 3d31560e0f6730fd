//! Bounded lasso enumeration, an independent check on the run engine.
//!
//! A block of length `w^j` is `w` consecutive blocks of length `w^(j-1)`.
//! Only finitely many of them carry letters, after which the run over the
//! empty blocks is guessed as a prefix followed by a cycle, each of bounded
//! length. The state at the end of the block must come from a right-limit
//! transition on the union of the states seen along the cycle.
//!
//! Only the raw transition lists of the automaton are consulted.

use std::collections::{BTreeSet, HashSet};

use crate::automaton::{OrdinalAutomaton, State, StateSet};
use crate::ordinal::Ordinal;
use crate::word::{Letter, OrdinalWord};

type Triples = BTreeSet<(State, StateSet, State)>;

/// Search bounds: maximal prefix and cycle lengths, counted in sub-blocks.
#[derive(Clone, Copy, Debug)]
pub struct LassoBounds {
    pub prefix: usize,
    pub cycle: usize,
}

impl LassoBounds {
    /// Prefix and cycle of at most `2|Q|` sub-blocks.
    pub fn for_automaton(a: &OrdinalAutomaton) -> Self {
        let b = 2 * a.num_states();
        LassoBounds {
            prefix: b,
            cycle: b.max(1),
        }
    }
}

pub struct LassoOracle<'a> {
    a: &'a OrdinalAutomaton,
    bounds: LassoBounds,
    empty_levels: Vec<Triples>,
}

impl<'a> LassoOracle<'a> {
    pub fn new(a: &'a OrdinalAutomaton) -> Self {
        Self::with_bounds(a, LassoBounds::for_automaton(a))
    }

    pub fn with_bounds(a: &'a OrdinalAutomaton, bounds: LassoBounds) -> Self {
        LassoOracle {
            a,
            bounds,
            empty_levels: Vec::new(),
        }
    }

    fn letter_triples(&self, l: &Letter) -> Triples {
        self.a
            .successor_transitions()
            .iter()
            .filter(|(_, x, _)| x == l)
            .map(|&(q, _, q2)| (q, StateSet::pair(q, q2), q2))
            .collect()
    }

    fn limit_targets(&self, s: StateSet) -> impl Iterator<Item = State> + '_ {
        self.a
            .right_limit_transitions()
            .iter()
            .filter(move |(g, _)| g.matches(s))
            .map(|&(_, q)| q)
    }

    /// Runs over `◇^(w^j)` found within the bounds.
    pub fn empty_block(&mut self, j: u32) -> Triples {
        while self.empty_levels.len() <= j as usize {
            let next = if self.empty_levels.is_empty() {
                self.letter_triples(&Letter::blank(self.a.width()))
            } else {
                let sub = self.empty_levels.last().unwrap().clone();
                self.close_block(&[], &sub)
            };
            self.empty_levels.push(next);
        }
        self.empty_levels[j as usize].clone()
    }

    /// Runs over `w` sub-blocks whose first few follow `forced` and whose
    /// remaining ones follow `empty`.
    fn close_block(&self, forced: &[Triples], empty: &Triples) -> Triples {
        let n = self.a.num_states();
        let mut out = Triples::new();
        for q in 0..n {
            let mut cur: HashSet<(State, StateSet)> = [(q, StateSet::singleton(q))].into();
            for t in forced {
                cur = cur
                    .iter()
                    .flat_map(|&(x, u)| {
                        t.iter()
                            .filter(move |&&(a, _, _)| a == x)
                            .map(move |&(_, s, b)| (b, u.union(s)))
                    })
                    .collect();
            }
            // Bounded prefix over empty sub-blocks.
            let mut frontier = cur.clone();
            let mut all = cur;
            for _ in 0..self.bounds.prefix {
                frontier = frontier
                    .iter()
                    .flat_map(|&(x, u)| {
                        empty
                            .iter()
                            .filter(move |&&(a, _, _)| a == x)
                            .map(move |&(_, s, b)| (b, u.union(s)))
                    })
                    .filter(|p| !all.contains(p))
                    .collect();
                all.extend(frontier.iter().copied());
            }
            for (x, u) in all {
                for s in self.cycles(x, empty) {
                    for q2 in self.limit_targets(s) {
                        out.insert((q, u.union(s).with(q2), q2));
                    }
                }
            }
        }
        out
    }

    /// Label unions of closed walks at `x` with between 1 and `bounds.cycle` steps.
    fn cycles(&self, x: State, empty: &Triples) -> BTreeSet<StateSet> {
        let mut seen: HashSet<(State, StateSet, usize)> = HashSet::new();
        let mut stack: Vec<(State, StateSet, usize)> = vec![(x, StateSet::EMPTY, 0)];
        let mut out = BTreeSet::new();
        while let Some((y, u, len)) = stack.pop() {
            if len > 0 && y == x {
                out.insert(u);
            }
            if len == self.bounds.cycle {
                continue;
            }
            for &(a, s, b) in empty {
                if a == y {
                    let nxt = (b, u.union(s), len + 1);
                    if seen.insert(nxt) {
                        stack.push(nxt);
                    }
                }
            }
        }
        out
    }

    /// Runs over the block of length `w^j` starting at `offset`, reading the
    /// given entries (all inside the block).
    fn block(&mut self, j: u32, offset: &Ordinal, entries: &[(Ordinal, Letter)]) -> Triples {
        if entries.is_empty() {
            return self.empty_block(j);
        }
        if j == 0 {
            return self.letter_triples(&entries[0].1);
        }
        let sub_len = Ordinal::monomial(j - 1, 1);
        let index = |p: &Ordinal| offset.left_sub(p).expect("entry inside block").coeff_at(j - 1);
        let last = index(&entries.last().unwrap().0);
        let mut forced = Vec::new();
        for i in 0..=last {
            let start = offset.add(&sub_len.mul(&Ordinal::nat(i)));
            let inside: Vec<(Ordinal, Letter)> =
                entries.iter().filter(|(p, _)| index(p) == i).cloned().collect();
            forced.push(self.block(j - 1, &start, &inside));
        }
        let empty = self.empty_block(j - 1);
        self.close_block(&forced, &empty)
    }

    /// Whether the automaton accepts `w`, by lasso search.
    pub fn accepts(&mut self, w: &OrdinalWord) -> bool {
        let runs = self.block(w.shape(), &Ordinal::zero(), w.entries());
        let (i, f) = (self.a.initial(), self.a.final_states());
        runs.iter().any(|&(q, _, q2)| i.contains(q) && f.contains(q2))
    }

    /// Start/end pairs of runs over `◇^(w^j)`.
    pub fn empty_relation(&mut self, j: u32) -> BTreeSet<(State, State)> {
        self.empty_block(j).iter().map(|&(q, _, q2)| (q, q2)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::text::parse_automaton;

    const EXAMPLE1: &str = "automaton {
        states: e_l e_r n p; alphabet: a; initial: n; final: n p;
        succ: n _ n; p _ n; n a p; p a p;
        rlimit: {n} n; {p} e_l; {n p} e_l;
        llimit: n {n}; p {n}; e_r {p}; e_r {n p}
    }";

    #[test]
    fn example_level_one_matches_engine() {
        let a = parse_automaton(EXAMPLE1).unwrap();
        let mut o = LassoOracle::new(&a);
        for j in 0..3 {
            assert_eq!(o.empty_block(j), a.gap_behavior(j).triples, "level {j}");
        }
    }

    #[test]
    fn example_words() {
        let a = parse_automaton(EXAMPLE1).unwrap();
        let mut o = LassoOracle::new(&a);
        for s in ["", "a@w", "a@0, a@w*2+1", "a@w+3"] {
            let w = OrdinalWord::parse(s, None, 2).unwrap();
            assert!(o.accepts(&w), "{s}");
        }
    }
}
