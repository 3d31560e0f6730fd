//! Runs over ordinal shapes `w^k`, computed from behaviors over empty stretches.
//!
//! Level `j` describes the runs over `◇^(w^j)`. Level `j+1` is a walk over
//! level-`j` blocks: a finite prefix followed by a cycle repeated forever,
//! whose label union is the cofinal set handed to a right-limit transition.
//! Longer empty stretches are compositions of level relations following the
//! Cantor normal form; repeated compositions are eventually periodic, so
//! large coefficients are folded back onto the cycle.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use super::{AutomatonError, OrdinalAutomaton, Relation, State, StateSet, TracedRelation};
use crate::ordinal::Ordinal;
use crate::word::{convolve, shape_ordinal, Letter, OrdinalWord};

/// Runs over the empty input of length `w^level`.
#[derive(Clone, PartialEq, Eq)]
pub struct GapBehavior {
    pub level: u32,
    n: usize,
    /// `(q, A, q')`: a run from `q` to `q'` visiting exactly the states `A`.
    pub triples: BTreeSet<(State, StateSet, State)>,
    /// `(q, S, q')`: some run from `q` to `q'` fired its final limit
    /// transition on the cofinal set `S`. Empty at level 0.
    pub cycle_sets: BTreeSet<(State, StateSet, State)>,
}

impl GapBehavior {
    pub fn relation(&self) -> Relation {
        Relation::from_pairs(self.n, self.triples.iter().map(|&(a, _, b)| (a, b)))
    }

    pub fn traced(&self) -> TracedRelation {
        TracedRelation::new(self.n, self.triples.iter().copied())
    }

    pub fn contains(&self, q: State, visited: StateSet, q2: State) -> bool {
        self.triples.contains(&(q, visited, q2))
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }
}

impl fmt::Debug for GapBehavior {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "level {} ", self.level)?;
        f.debug_set().entries(&self.triples).finish()
    }
}

/// Powers `R^0, R^1, ...` of one level relation, stored up to the first repeat.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerSequence {
    values: Vec<Relation>,
    /// First index of the cycle (at least 1, so `R^0` stays distinct).
    pub preperiod: usize,
    pub period: usize,
}

impl PowerSequence {
    fn new(base: Relation) -> Self {
        let n = base.size();
        let mut values = vec![Relation::identity(n), base.clone()];
        let mut seen: HashMap<Relation, usize> = HashMap::new();
        seen.insert(base, 1);
        loop {
            let next = values.last().unwrap().then(&values[1]);
            if let Some(&i) = seen.get(&next) {
                let period = values.len() - i;
                return PowerSequence {
                    values,
                    preperiod: i,
                    period,
                };
            }
            seen.insert(next.clone(), values.len());
            values.push(next);
        }
    }

    /// Index into the stored values equivalent to exponent `c`.
    pub fn reduce(&self, c: u64) -> usize {
        let (a, b) = (self.preperiod as u64, self.period as u64);
        if c < a + b {
            c as usize
        } else {
            (a + (c - a) % b) as usize
        }
    }

    pub fn power(&self, c: u64) -> &Relation {
        &self.values[self.reduce(c)]
    }
}

#[derive(Default)]
pub(super) struct Cache {
    levels: Vec<Arc<GapBehavior>>,
    powers: HashMap<u32, Arc<PowerSequence>>,
}

/// Cut states of one accepting run at the cuts where the engine splits the word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunWitness {
    /// `(p, q)`: the run is in state `q` at the cut just before position `p`
    /// (the final cut when `p = w^k`).
    pub cuts: Vec<(Ordinal, State)>,
}

impl RunWitness {
    pub fn state_at(&self, p: &Ordinal) -> Option<State> {
        self.cuts.iter().find(|(c, _)| c == p).map(|&(_, q)| q)
    }

    pub fn render(&self, a: &OrdinalAutomaton) -> String {
        self.cuts
            .iter()
            .map(|(p, q)| format!("{p}:{}", a.state_name(*q)))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

enum Segment {
    /// `w^level * coeff` empty positions.
    Block { level: u32, coeff: u64 },
    Letter(Letter),
}

impl OrdinalAutomaton {
    /// Behavior over the empty input of length `w^j`.
    pub fn gap_behavior(&self, j: u32) -> Arc<GapBehavior> {
        let mut cache = self.cache.lock().unwrap_or_else(|e| e.into_inner());
        while cache.levels.len() <= j as usize {
            let next = match cache.levels.last() {
                None => Arc::new(self.level_zero()),
                Some(prev) => Arc::new(self.next_level(prev)),
            };
            cache.levels.push(next);
        }
        cache.levels[j as usize].clone()
    }

    /// The relation of `gap_behavior(j)`.
    pub fn level_relation(&self, j: u32) -> Relation {
        self.level_powers(j).power(1).clone()
    }

    /// Powers of the level-`j` relation with their periodicity.
    pub fn level_powers(&self, j: u32) -> Arc<PowerSequence> {
        if let Some(p) = self.lock_cache().powers.get(&j) {
            return p.clone();
        }
        let base = self.gap_behavior(j).relation();
        let seq = Arc::new(PowerSequence::new(base));
        self.lock_cache().powers.entry(j).or_insert(seq).clone()
    }

    fn lock_cache(&self) -> std::sync::MutexGuard<'_, Cache> {
        self.cache.lock().unwrap_or_else(|e| e.into_inner())
    }

    fn level_zero(&self) -> GapBehavior {
        let n = self.num_states();
        let blank = &self.step[0];
        let triples = (0..n)
            .flat_map(|q| blank[q].iter().map(move |q2| (q, StateSet::pair(q, q2), q2)))
            .collect();
        GapBehavior {
            level: 0,
            n,
            triples,
            cycle_sets: BTreeSet::new(),
        }
    }

    fn next_level(&self, prev: &GapBehavior) -> GapBehavior {
        let n = self.num_states();
        let mut edges: Vec<Vec<(StateSet, State)>> = vec![Vec::new(); n];
        for &(a, s, b) in &prev.triples {
            edges[a].push((s, b));
        }
        // Label unions of nonempty closed walks, per base state.
        let closed: Vec<BTreeSet<StateSet>> = (0..n)
            .map(|p| {
                let start = edges[p].iter().map(|&(s, b)| (b, s));
                saturate(&edges, start)
                    .into_iter()
                    .filter(|&(x, _)| x == p)
                    .map(|(_, s)| s)
                    .collect()
            })
            .collect();
        let mut fire: Vec<Vec<(StateSet, StateSet)>> = vec![Vec::new(); n];
        for p in 0..n {
            for &s in &closed[p] {
                let t = self.limit_targets(s);
                if !t.is_empty() {
                    fire[p].push((s, t));
                }
            }
        }
        let mut triples = BTreeSet::new();
        let mut cycle_sets = BTreeSet::new();
        for q in 0..n {
            for (x, pre) in saturate(&edges, [(q, StateSet::singleton(q))]) {
                for &(s, targets) in &fire[x] {
                    for q2 in targets.iter() {
                        triples.insert((q, pre.union(s).with(q2), q2));
                        cycle_sets.insert((q, s, q2));
                    }
                }
            }
        }
        GapBehavior {
            level: prev.level + 1,
            n,
            triples,
            cycle_sets,
        }
    }

    /// Relation over the empty input of length `delta`.
    pub fn gap_relation(&self, delta: &Ordinal) -> Result<Relation, AutomatonError> {
        let mut rel = Relation::identity(self.num_states());
        for t in delta.terms() {
            let j = t
                .exponent
                .as_nat()
                .and_then(|e| u32::try_from(e).ok())
                .ok_or_else(|| AutomatonError::GapTooLong(delta.to_string(), u32::MAX))?;
            rel = rel.then(self.level_powers(j).power(t.coeff));
        }
        Ok(rel)
    }

    /// Like [`gap_relation`](Self::gap_relation) but rejecting lengths above `w^k`.
    pub fn gap_relation_in(&self, delta: &Ordinal, k: u32) -> Result<Relation, AutomatonError> {
        if delta > &shape_ordinal(k) {
            return Err(AutomatonError::GapTooLong(delta.to_string(), k));
        }
        self.gap_relation(delta)
    }

    fn check_word(&self, w: &OrdinalWord) -> Result<(), AutomatonError> {
        for (_, l) in w.entries() {
            if !self.alphabet.contains(l) {
                return Err(AutomatonError::AlphabetMismatch(l.to_string()));
            }
        }
        if w.width() != self.width() {
            return Err(AutomatonError::AlphabetMismatch(format!(
                "word of width {} for an automaton of width {}",
                w.width(),
                self.width()
            )));
        }
        Ok(())
    }

    fn segments(
        &self,
        w: &OrdinalWord,
        lo: &Ordinal,
        hi: &Ordinal,
    ) -> Result<Vec<(Ordinal, Segment)>, AutomatonError> {
        let k = w.shape();
        if lo > hi || hi > &shape_ordinal(k) {
            return Err(AutomatonError::BadInterval(lo.to_string(), hi.to_string(), k));
        }
        self.check_word(w)?;
        let mut out = Vec::new();
        let mut cur = lo.clone();
        let push_gap = |out: &mut Vec<(Ordinal, Segment)>, from: &Ordinal, to: &Ordinal| {
            let len = from.left_sub(to).expect("ordered cuts");
            let mut at = from.clone();
            for t in len.terms() {
                let level = t.exponent.as_nat().expect("finite degree") as u32;
                out.push((
                    at.clone(),
                    Segment::Block {
                        level,
                        coeff: t.coeff,
                    },
                ));
                at = at.add(&Ordinal::monomial(level, t.coeff));
            }
        };
        for (p, l) in w.entries_in(lo, hi) {
            push_gap(&mut out, &cur, p);
            out.push((p.clone(), Segment::Letter(l.clone())));
            cur = p.succ();
        }
        push_gap(&mut out, &cur, hi);
        Ok(out)
    }

    fn segment_relation(&self, seg: &Segment) -> Result<Relation, AutomatonError> {
        match seg {
            Segment::Block { level, coeff } => Ok(self.level_powers(*level).power(*coeff).clone()),
            Segment::Letter(l) => self.step_relation(l),
        }
    }

    /// Relation between the states at the cuts `lo` and `hi` over `w`.
    pub fn behavior(
        &self,
        w: &OrdinalWord,
        lo: &Ordinal,
        hi: &Ordinal,
    ) -> Result<Relation, AutomatonError> {
        let mut rel = Relation::identity(self.num_states());
        for (_, seg) in self.segments(w, lo, hi)? {
            rel = rel.then(&self.segment_relation(&seg)?);
        }
        Ok(rel)
    }

    /// Whether some run on `w` starts in `I` and ends in `F`.
    pub fn accepts(&self, w: &OrdinalWord) -> Result<bool, AutomatonError> {
        let mut cur = self.initial;
        for (_, seg) in self.segments(w, &Ordinal::zero(), &shape_ordinal(w.shape()))? {
            cur = self.segment_relation(&seg)?.image(cur);
            if cur.is_empty() {
                return Ok(false);
            }
        }
        Ok(!cur.intersect(self.final_states).is_empty())
    }

    /// Membership of `w ⊗ oracle`.
    pub fn accepts_with_oracle(
        &self,
        w: &OrdinalWord,
        oracle: Option<&OrdinalWord>,
    ) -> Result<bool, AutomatonError> {
        match oracle {
            None => self.accepts(w),
            Some(o) => {
                if o.shape() != w.shape() {
                    return Err(AutomatonError::ShapeMismatch {
                        word: o.shape(),
                        shape: w.shape(),
                    });
                }
                let joined = convolve(&[w, o]).map_err(|e| AutomatonError::AlphabetMismatch(e.to_string()))?;
                self.accepts(&joined)
            }
        }
    }

    /// An accepting run restricted to segment boundaries, if one exists.
    pub fn run_witness(&self, w: &OrdinalWord) -> Result<Option<RunWitness>, AutomatonError> {
        let end = shape_ordinal(w.shape());
        let segs = self.segments(w, &Ordinal::zero(), &end)?;
        let rels = segs
            .iter()
            .map(|(_, s)| self.segment_relation(s))
            .collect::<Result<Vec<_>, _>>()?;
        let mut reach = vec![self.initial];
        for r in &rels {
            let next = r.image(*reach.last().unwrap());
            reach.push(next);
        }
        let last = reach.last().unwrap().intersect(self.final_states);
        let Some(mut q) = last.iter().next() else {
            return Ok(None);
        };
        let mut cuts = vec![(end, q)];
        for i in (0..rels.len()).rev() {
            let prev = reach[i]
                .iter()
                .find(|&p| rels[i].contains(p, q))
                .expect("forward reachability");
            cuts.push((segs[i].0.clone(), prev));
            q = prev;
        }
        cuts.reverse();
        Ok(Some(RunWitness { cuts }))
    }
}

/// All `(state, label union)` pairs reachable from `start` along `edges`,
/// including the start pairs themselves.
fn saturate(
    edges: &[Vec<(StateSet, State)>],
    start: impl IntoIterator<Item = (State, StateSet)>,
) -> HashSet<(State, StateSet)> {
    let mut seen: HashSet<(State, StateSet)> = HashSet::new();
    let mut queue = VecDeque::new();
    for s in start {
        if seen.insert(s) {
            queue.push_back(s);
        }
    }
    while let Some((x, u)) = queue.pop_front() {
        for &(s, y) in &edges[x] {
            let nxt = (y, u.union(s));
            if seen.insert(nxt) {
                queue.push_back(nxt);
            }
        }
    }
    seen
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::text::parse_automaton;
    use crate::ordinal::ord;

    pub(crate) const EXAMPLE1: &str = "automaton {
        states: e_l e_r n p; alphabet: a; initial: n; final: n p;
        succ: n _ n; p _ n; n a p; p a p;
        rlimit: {n} n; {p} e_l; {n p} e_l;
        llimit: n {n}; p {n}; e_r {p}; e_r {n p}
    }";

    fn ex1() -> OrdinalAutomaton {
        parse_automaton(EXAMPLE1).unwrap()
    }

    fn st(a: &OrdinalAutomaton, s: &str) -> State {
        a.state_index(s).unwrap()
    }

    #[test]
    fn level_zero_is_blank_successors() {
        let a = ex1();
        let (n, p) = (st(&a, "n"), st(&a, "p"));
        let l0 = a.gap_behavior(0);
        let want: BTreeSet<_> = [(n, StateSet::singleton(n), n), (p, StateSet::pair(p, n), n)].into();
        assert_eq!(l0.triples, want);
    }

    #[test]
    fn example_level_one() {
        let a = ex1();
        let (n, p) = (st(&a, "n"), st(&a, "p"));
        let l1 = a.gap_behavior(1);
        assert!(l1.contains(n, StateSet::singleton(n), n));
        assert!(l1.contains(p, StateSet::pair(p, n), n));
        let r = a.gap_relation(&ord("w")).unwrap();
        assert_eq!(r, Relation::from_pairs(4, [(n, n), (p, n)]));
    }

    #[test]
    fn no_limit_transitions_means_empty_level_one() {
        let a = parse_automaton("automaton { states: q; alphabet: a; initial: q; final: q; succ: q _ q }").unwrap();
        assert!(a.gap_behavior(1).is_empty());
        assert!(!a.accepts(&OrdinalWord::empty(1, 1)).unwrap());
        assert!(a.accepts(&OrdinalWord::empty(0, 1)).unwrap());
    }

    #[test]
    fn finite_gaps_and_identity() {
        let a = ex1();
        let r0 = a.level_relation(0);
        assert_eq!(a.gap_relation(&ord("3")).unwrap(), r0.then(&r0).then(&r0));
        assert_eq!(a.gap_relation(&ord("0")).unwrap(), Relation::identity(4));
    }

    #[test]
    fn behavior_over_letter_then_gap() {
        let a = ex1();
        let (n, p) = (st(&a, "n"), st(&a, "p"));
        let w = OrdinalWord::parse("a@0", None, 2).unwrap();
        let r = a.behavior(&w, &ord("0"), &ord("w")).unwrap();
        assert!(r.contains(n, n));
        assert!(r.contains(p, n));
        assert_eq!(r.row(n), StateSet::singleton(n));
        let c = ord("w+2");
        assert_eq!(a.behavior(&w, &c, &c).unwrap(), Relation::identity(4));
        let e = OrdinalWord::empty(2, 1);
        let d = ord("w*3+1");
        assert_eq!(a.behavior(&e, &ord("0"), &d).unwrap(), a.gap_relation(&d).unwrap());
    }

    #[test]
    fn example_accepts_finite_words() {
        let a = ex1();
        assert!(a.accepts(&OrdinalWord::empty(2, 1)).unwrap());
        for s in ["a@w", "a@0, a@w*3+2, a@w^1*5", "a@1, a@2, a@3"] {
            let w = OrdinalWord::parse(s, None, 2).unwrap();
            assert!(a.accepts(&w).unwrap(), "{s}");
        }
    }

    #[test]
    fn witness_marks_letter_successors_with_p() {
        let a = ex1();
        let w = OrdinalWord::parse("a@1, a@w", None, 2).unwrap();
        let wit = a.run_witness(&w).unwrap().unwrap();
        let p = st(&a, "p");
        let n = st(&a, "n");
        assert_eq!(wit.state_at(&ord("2")), Some(p));
        assert_eq!(wit.state_at(&ord("w+1")), Some(p));
        assert_eq!(wit.state_at(&ord("w")), Some(n));
        assert_eq!(wit.state_at(&ord("0")), Some(n));
    }

    #[test]
    fn rejects_bad_interval_and_letters() {
        let a = ex1();
        let w = OrdinalWord::parse("b@0", None, 1).unwrap();
        assert!(a.accepts(&w).is_err());
        let e = OrdinalWord::empty(1, 1);
        assert!(a.behavior(&e, &ord("3"), &ord("2")).is_err());
        assert!(a.behavior(&e, &ord("0"), &ord("w+1")).is_err());
    }

    #[test]
    fn power_sequence_folds_large_coefficients() {
        let a = ex1();
        let seq = a.level_powers(0);
        assert!(seq.preperiod >= 1 && seq.period >= 1);
        let r = a.level_relation(0);
        let mut acc = Relation::identity(4);
        for c in 0..12u64 {
            assert_eq!(seq.power(c), &acc);
            acc = acc.then(&r);
        }
    }
}
