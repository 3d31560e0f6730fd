//! Classical automata over `(gap class, letter)` symbols.
//!
//! A finite-support word over `w^k` is abstracted to the sequence of its
//! letters, each paired with the class of the empty stretch before it. The
//! stretch after the last letter always has length `w^k`, so acceptance
//! already accounts for it.

use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::Arc;

use thiserror::Error;

use super::gapclass::{ClassContext, GapClass};
use crate::automaton::OrdinalAutomaton;
use crate::ordinal::Ordinal;
use crate::word::{Alphabet, Letter, OrdinalWord};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NfaError {
    #[error("track layouts differ")]
    TrackMismatch,
    #[error("word of width {0} for automaton of width {1}")]
    WidthMismatch(usize, usize),
    #[error("word over w^{0} for automaton over w^{1}")]
    ShapeMismatch(u32, u32),
    #[error("letter {0} outside the track alphabets")]
    UnknownLetter(String),
    #[error("automaton of width {0} cannot read tracks of total width {1}")]
    AutomatonWidth(usize, usize),
}

pub type Symbol = u32;

#[derive(Clone, Debug)]
pub struct AbstractNfa {
    ctx: Arc<ClassContext>,
    tracks: Vec<Alphabet>,
    letters: Alphabet,
    initial: Vec<u32>,
    accepting: Vec<bool>,
    trans: Vec<HashMap<Symbol, Vec<u32>>>,
}

impl AbstractNfa {
    fn empty_shell(ctx: Arc<ClassContext>, tracks: Vec<Alphabet>) -> Self {
        let refs: Vec<&Alphabet> = tracks.iter().collect();
        let letters = Alphabet::product(&refs);
        AbstractNfa {
            ctx,
            tracks,
            letters,
            initial: Vec::new(),
            accepting: Vec::new(),
            trans: Vec::new(),
        }
    }

    fn add_state(&mut self, accepting: bool) -> u32 {
        self.accepting.push(accepting);
        self.trans.push(HashMap::new());
        (self.accepting.len() - 1) as u32
    }

    fn add_edge(&mut self, from: u32, sym: Symbol, to: u32) {
        let v = self.trans[from as usize].entry(sym).or_default();
        if !v.contains(&to) {
            v.push(to);
        }
    }

    pub fn context(&self) -> &Arc<ClassContext> {
        &self.ctx
    }

    pub fn tracks(&self) -> &[Alphabet] {
        &self.tracks
    }

    pub fn letters(&self) -> &Alphabet {
        &self.letters
    }

    pub fn num_states(&self) -> usize {
        self.accepting.len()
    }

    pub fn num_transitions(&self) -> usize {
        self.trans.iter().map(|m| m.values().map(Vec::len).sum::<usize>()).sum()
    }

    pub fn num_symbols(&self) -> usize {
        self.ctx.num_inner() * self.letters.letters().len()
    }

    pub fn symbol(&self, class: &GapClass, letter_rank: usize) -> Symbol {
        (self.ctx.index(class) * self.letters.letters().len() + letter_rank - 1) as Symbol
    }

    /// `(class, letter)` of a symbol.
    pub fn decode_symbol(&self, s: Symbol) -> (GapClass, Letter) {
        let n = self.letters.letters().len();
        let (c, l) = (s as usize / n, s as usize % n);
        (self.ctx.class_at(c), self.letters.letters()[l].clone())
    }

    /// The one-state automaton accepting every abstraction.
    pub fn universal(ctx: Arc<ClassContext>, tracks: Vec<Alphabet>) -> Self {
        let mut a = Self::empty_shell(ctx, tracks);
        let s = a.add_state(true);
        a.initial.push(s);
        for sym in 0..a.num_symbols() as Symbol {
            a.add_edge(s, sym, s);
        }
        a
    }

    /// The automaton accepting nothing.
    pub fn nothing(ctx: Arc<ClassContext>, tracks: Vec<Alphabet>) -> Self {
        let mut a = Self::empty_shell(ctx, tracks);
        let s = a.add_state(false);
        a.initial.push(s);
        a
    }

    /// Accepts exactly the abstraction of `w`.
    pub fn singleton(ctx: Arc<ClassContext>, tracks: Vec<Alphabet>, w: &OrdinalWord) -> Result<Self, NfaError> {
        let mut a = Self::empty_shell(ctx, tracks);
        let syms = a.abstraction(w)?;
        let mut q = a.add_state(syms.is_empty());
        a.initial.push(q);
        for (i, &s) in syms.iter().enumerate() {
            let next = a.add_state(i + 1 == syms.len());
            a.add_edge(q, s, next);
            q = next;
        }
        Ok(a)
    }

    /// Tuples whose track groups `i` and `j` carry the same word.
    pub fn equality(ctx: Arc<ClassContext>, tracks: Vec<Alphabet>, i: usize, j: usize) -> Self {
        let mut a = Self::empty_shell(ctx, tracks);
        let s = a.add_state(true);
        a.initial.push(s);
        let offsets = group_offsets(&a.tracks);
        let classes = a.ctx.num_inner();
        for (r, l) in a.letters.letters().to_vec().iter().enumerate() {
            if group_part(l, &offsets, i) == group_part(l, &offsets, j) {
                for c in 0..classes {
                    let sym = (c * a.letters.letters().len() + r) as Symbol;
                    a.add_edge(s, sym, s);
                }
            }
        }
        a
    }

    /// Classical counterpart of an ordinal automaton reading the given tracks.
    pub fn from_automaton(
        a: &OrdinalAutomaton,
        ctx: Arc<ClassContext>,
        tracks: Vec<Alphabet>,
    ) -> Result<Self, NfaError> {
        let mut out = Self::empty_shell(ctx, tracks);
        if a.width() != out.letters.width() && !a.alphabet().letters().is_empty() {
            return Err(NfaError::AutomatonWidth(a.width(), out.letters.width()));
        }
        let ctx = out.ctx.clone();
        let end = ctx.relation(a, &ctx.terminal());
        let accepting = end.preimage(a.final_states());
        for q in 0..a.num_states() {
            out.add_state(accepting.contains(q));
        }
        out.initial = a.initial().iter().map(|q| q as u32).collect();
        let steps: Vec<Option<crate::automaton::Relation>> = out
            .letters
            .letters()
            .iter()
            .map(|l| a.step_relation(l).ok())
            .collect();
        let n_letters = steps.len();
        for (ci, g) in ctx.inner_classes().enumerate() {
            let gap = ctx.relation(a, &g);
            for (li, step) in steps.iter().enumerate() {
                let Some(step) = step else { continue };
                let r = gap.then(step);
                let sym = (ci * n_letters + li) as Symbol;
                for (q, q2) in r.pairs() {
                    out.add_edge(q as u32, sym, q2 as u32);
                }
            }
        }
        Ok(out)
    }

    /// The symbol sequence of a word over these tracks.
    pub fn abstraction(&self, w: &OrdinalWord) -> Result<Vec<Symbol>, NfaError> {
        if w.shape() != self.ctx.shape() {
            return Err(NfaError::ShapeMismatch(w.shape(), self.ctx.shape()));
        }
        if w.width() != self.letters.width() {
            return Err(NfaError::WidthMismatch(w.width(), self.letters.width()));
        }
        let profile = w.gap_profile();
        let mut gap = profile.leading_gap.clone();
        let mut out = Vec::new();
        for (l, after) in &profile.items {
            let g = self.ctx.class_of(&gap).expect("gap below the shape");
            let r = self
                .letters
                .rank(l)
                .ok_or_else(|| NfaError::UnknownLetter(l.to_string()))?;
            out.push(self.symbol(&g, r));
            gap = after.clone();
        }
        Ok(out)
    }

    pub fn accepts_symbols(&self, syms: &[Symbol]) -> bool {
        let mut cur: HashSet<u32> = self.initial.iter().copied().collect();
        for s in syms {
            cur = cur
                .iter()
                .flat_map(|&q| self.trans[q as usize].get(s).into_iter().flatten().copied())
                .collect();
            if cur.is_empty() {
                return false;
            }
        }
        cur.iter().any(|&q| self.accepting[q as usize])
    }

    pub fn accepts(&self, w: &OrdinalWord) -> Result<bool, NfaError> {
        Ok(self.accepts_symbols(&self.abstraction(w)?))
    }

    fn check_compatible(&self, other: &AbstractNfa) -> Result<(), NfaError> {
        if self.tracks != other.tracks || self.ctx != other.ctx {
            return Err(NfaError::TrackMismatch);
        }
        Ok(())
    }

    pub fn union(&self, other: &AbstractNfa) -> Result<AbstractNfa, NfaError> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        let shift = out.num_states() as u32;
        for q in 0..other.num_states() {
            out.add_state(other.accepting[q]);
        }
        for (q, m) in other.trans.iter().enumerate() {
            for (&s, ts) in m {
                for &t in ts {
                    out.add_edge(q as u32 + shift, s, t + shift);
                }
            }
        }
        out.initial.extend(other.initial.iter().map(|q| q + shift));
        Ok(out)
    }

    pub fn intersect(&self, other: &AbstractNfa) -> Result<AbstractNfa, NfaError> {
        self.check_compatible(other)?;
        let mut out = Self::empty_shell(self.ctx.clone(), self.tracks.clone());
        let mut index: HashMap<(u32, u32), u32> = HashMap::new();
        let mut queue = VecDeque::new();
        for &a in &self.initial {
            for &b in &other.initial {
                let id = out.add_state(self.accepting[a as usize] && other.accepting[b as usize]);
                index.insert((a, b), id);
                out.initial.push(id);
                queue.push_back((a, b));
            }
        }
        while let Some((a, b)) = queue.pop_front() {
            let from = index[&(a, b)];
            for (s, ta) in &self.trans[a as usize] {
                let Some(tb) = other.trans[b as usize].get(s) else { continue };
                for &x in ta {
                    for &y in tb {
                        let to = match index.get(&(x, y)) {
                            Some(&id) => id,
                            None => {
                                let id = out.add_state(self.accepting[x as usize] && other.accepting[y as usize]);
                                index.insert((x, y), id);
                                queue.push_back((x, y));
                                id
                            }
                        };
                        out.add_edge(from, *s, to);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Complement relative to all abstractions over these tracks.
    pub fn complement(&self) -> AbstractNfa {
        let mut out = Self::empty_shell(self.ctx.clone(), self.tracks.clone());
        let n_sym = self.num_symbols() as Symbol;
        let mut start: Vec<u32> = self.initial.clone();
        start.sort_unstable();
        start.dedup();
        let acc = |set: &[u32]| !set.iter().any(|&q| self.accepting[q as usize]);
        let mut index: HashMap<Vec<u32>, u32> = HashMap::new();
        let id = out.add_state(acc(&start));
        out.initial.push(id);
        index.insert(start.clone(), id);
        let mut queue = VecDeque::from([start]);
        while let Some(set) = queue.pop_front() {
            let from = index[&set];
            for s in 0..n_sym {
                let mut next: Vec<u32> = set
                    .iter()
                    .flat_map(|&q| self.trans[q as usize].get(&s).into_iter().flatten().copied())
                    .collect();
                next.sort_unstable();
                next.dedup();
                let to = match index.get(&next) {
                    Some(&id) => id,
                    None => {
                        let id = out.add_state(acc(&next));
                        index.insert(next.clone(), id);
                        queue.push_back(next);
                        id
                    }
                };
                out.add_edge(from, s, to);
            }
        }
        out
    }

    /// A shortest accepted symbol sequence.
    pub fn shortest_accepted(&self) -> Option<Vec<Symbol>> {
        let mut prev: HashMap<u32, Option<(u32, Symbol)>> = HashMap::new();
        let mut queue = VecDeque::new();
        for &q in &self.initial {
            if prev.insert(q, None).is_none() {
                queue.push_back(q);
            }
        }
        while let Some(q) = queue.pop_front() {
            if self.accepting[q as usize] {
                let mut path = Vec::new();
                let mut cur = q;
                while let Some(Some((p, s))) = prev.get(&cur) {
                    path.push(*s);
                    cur = *p;
                }
                path.reverse();
                return Some(path);
            }
            let mut edges: Vec<(&Symbol, &Vec<u32>)> = self.trans[q as usize].iter().collect();
            edges.sort();
            for (s, ts) in edges {
                for &t in ts {
                    if let std::collections::hash_map::Entry::Vacant(e) = prev.entry(t) {
                        e.insert(Some((q, *s)));
                        queue.push_back(t);
                    }
                }
            }
        }
        None
    }

    pub fn is_empty(&self) -> bool {
        self.shortest_accepted().is_none()
    }

    /// A concrete accepted word, placing each letter after the least gap of its class.
    pub fn witness(&self) -> Option<OrdinalWord> {
        let syms = self.shortest_accepted()?;
        Some(self.word_of(&syms))
    }

    pub fn word_of(&self, syms: &[Symbol]) -> OrdinalWord {
        let mut pos = Ordinal::zero();
        let mut entries = Vec::new();
        for (i, &s) in syms.iter().enumerate() {
            let (g, l) = self.decode_symbol(s);
            let gap = self.ctx.least(&g);
            pos = if i == 0 { gap } else { pos.succ().add(&gap) };
            entries.push((pos.clone(), l));
        }
        OrdinalWord::new(self.ctx.shape(), self.letters.width(), entries).expect("positions below the shape")
    }

    /// Reads a wider tuple: group `g` of `self` is group `map[g]` of `new_tracks`.
    /// Positions blank on all mapped groups fold into the surrounding gap.
    pub fn reindex(&self, new_tracks: Vec<Alphabet>, map: &[usize]) -> Result<AbstractNfa, NfaError> {
        if map.len() != self.tracks.len() || map.iter().enumerate().any(|(g, &t)| new_tracks.get(t) != Some(&self.tracks[g])) {
            return Err(NfaError::TrackMismatch);
        }
        let mut out = Self::empty_shell(self.ctx.clone(), new_tracks);
        let offsets = group_offsets(&out.tracks);
        // Rank (in self.letters) of each new letter restricted to the mapped groups; 0 = blank.
        let restricted: Vec<usize> = out
            .letters
            .letters()
            .iter()
            .map(|l| {
                let parts: Vec<Letter> = map.iter().map(|&t| group_part(l, &offsets, t)).collect();
                self.letters.rank(&Letter::concat(parts.iter())).expect("mapped groups match")
            })
            .collect();
        let ctx = self.ctx.clone();
        let one = ctx.one();
        let n_new = restricted.len();
        let n_old = self.letters.letters().len();
        let zero = ctx.index(&ctx.zero()) as u32;
        let mut index: HashMap<(u32, u32), u32> = HashMap::new();
        let mut queue = VecDeque::new();
        for &q in &self.initial {
            let id = out.add_state(self.accepting[q as usize]);
            index.insert((q, zero), id);
            out.initial.push(id);
            queue.push_back((q, zero));
        }
        while let Some((q, h)) = queue.pop_front() {
            let from = index[&(q, h)];
            let pending = ctx.class_at(h as usize);
            for (ci, g) in ctx.inner_classes().enumerate() {
                let total = ctx.add(&pending, &g);
                for (li, &r) in restricted.iter().enumerate() {
                    let sym = (ci * n_new + li) as Symbol;
                    let targets: Vec<(u32, u32)> = if r == 0 {
                        vec![(q, ctx.index(&ctx.add(&total, &one)) as u32)]
                    } else {
                        let old = (ctx.index(&total) * n_old + r - 1) as Symbol;
                        self.trans[q as usize]
                            .get(&old)
                            .into_iter()
                            .flatten()
                            .map(|&t| (t, zero))
                            .collect()
                    };
                    for key in targets {
                        let to = match index.get(&key) {
                            Some(&id) => id,
                            None => {
                                let id = out.add_state(self.accepting[key.0 as usize]);
                                index.insert(key, id);
                                queue.push_back(key);
                                id
                            }
                        };
                        out.add_edge(from, sym, to);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Erases track group `g`; letters that become blank fold into gaps.
    pub fn project(&self, g: usize) -> Result<AbstractNfa, NfaError> {
        if g >= self.tracks.len() {
            return Err(NfaError::TrackMismatch);
        }
        let mut tracks = self.tracks.clone();
        tracks.remove(g);
        let keep: Vec<usize> = (0..self.tracks.len()).filter(|&t| t != g).collect();
        let mut out = Self::empty_shell(self.ctx.clone(), tracks);
        let offsets = group_offsets(&self.tracks);
        let ctx = self.ctx.clone();
        let n_old = self.letters.letters().len();
        let n_new = out.letters.letters().len();
        // Rank in the projected letters of each old letter; 0 = hidden.
        let rest: Vec<usize> = self
            .letters
            .letters()
            .iter()
            .map(|l| {
                let parts: Vec<Letter> = keep.iter().map(|&t| group_part(l, &offsets, t)).collect();
                out.letters.rank(&Letter::concat(parts.iter())).expect("kept groups match")
            })
            .collect();
        let one = ctx.one();
        let zero = ctx.index(&ctx.zero()) as u32;
        for q in 0..self.num_states() {
            out.add_state(false);
            let _ = q;
        }
        out.initial = self.initial.clone();
        for q in 0..self.num_states() as u32 {
            // (state, accumulated gap) reachable through hidden letters only.
            let mut seen: HashSet<(u32, u32)> = HashSet::from([(q, zero)]);
            let mut queue = VecDeque::from([(q, zero)]);
            while let Some((p, h)) = queue.pop_front() {
                let acc = ctx.class_at(h as usize);
                if self.accepting[p as usize] {
                    out.accepting[q as usize] = true;
                }
                for (&sym, targets) in &self.trans[p as usize] {
                    let (ci, li) = (sym as usize / n_old, sym as usize % n_old);
                    let total = ctx.add(&acc, &ctx.class_at(ci));
                    let r = rest[li];
                    for &t in targets {
                        if r == 0 {
                            let key = (t, ctx.index(&ctx.add(&total, &one)) as u32);
                            if seen.insert(key) {
                                queue.push_back(key);
                            }
                        } else {
                            let new_sym = (ctx.index(&total) * n_new + r - 1) as Symbol;
                            out.add_edge(q, new_sym, t);
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// Keeps states that are reachable and can reach acceptance.
    pub fn trim(&self) -> AbstractNfa {
        let n = self.num_states();
        let mut fwd = vec![false; n];
        let mut stack: Vec<u32> = self.initial.clone();
        for &q in &stack {
            fwd[q as usize] = true;
        }
        while let Some(q) = stack.pop() {
            for ts in self.trans[q as usize].values() {
                for &t in ts {
                    if !fwd[t as usize] {
                        fwd[t as usize] = true;
                        stack.push(t);
                    }
                }
            }
        }
        let mut rev: Vec<Vec<u32>> = vec![Vec::new(); n];
        for (q, m) in self.trans.iter().enumerate() {
            for ts in m.values() {
                for &t in ts {
                    rev[t as usize].push(q as u32);
                }
            }
        }
        let mut bwd = self.accepting.clone();
        let mut stack: Vec<u32> = (0..n as u32).filter(|&q| bwd[q as usize]).collect();
        while let Some(q) = stack.pop() {
            for &p in &rev[q as usize] {
                if !bwd[p as usize] {
                    bwd[p as usize] = true;
                    stack.push(p);
                }
            }
        }
        let mut out = Self::empty_shell(self.ctx.clone(), self.tracks.clone());
        let mut map = vec![u32::MAX; n];
        for q in 0..n {
            if fwd[q] && bwd[q] {
                map[q] = out.add_state(self.accepting[q]);
            }
        }
        out.initial = self.initial.iter().map(|&q| map[q as usize]).filter(|&q| q != u32::MAX).collect();
        for (q, m) in self.trans.iter().enumerate() {
            if map[q] == u32::MAX {
                continue;
            }
            for (&s, ts) in m {
                for &t in ts {
                    if map[t as usize] != u32::MAX {
                        out.add_edge(map[q], s, map[t as usize]);
                    }
                }
            }
        }
        out
    }
}

fn group_offsets(tracks: &[Alphabet]) -> Vec<(usize, usize)> {
    let mut off = 0;
    tracks
        .iter()
        .map(|a| {
            let r = (off, a.width());
            off += a.width();
            r
        })
        .collect()
}

fn group_part(l: &Letter, offsets: &[(usize, usize)], g: usize) -> Letter {
    let (o, w) = offsets[g];
    let idx: Vec<usize> = (o..o + w).collect();
    l.select(&idx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{finite_word_recognizer, word_order_automaton};
    use crate::ordinal::ord;
    use crate::random::words_over;

    fn setup() -> (OrdinalAutomaton, Arc<ClassContext>, Alphabet) {
        let ab = Alphabet::from_symbols(&["a"]);
        let a = finite_word_recognizer(&ab);
        let ctx = Arc::new(ClassContext::for_automata(2, &[&a]));
        (a, ctx, ab)
    }

    fn universe() -> Vec<Ordinal> {
        ["0", "2", "w", "w+1", "w*2"].iter().map(|s| ord(s)).collect()
    }

    #[test]
    fn example_abstraction_is_universal_and_complement_empty() {
        let (a, ctx, ab) = setup();
        let n = AbstractNfa::from_automaton(&a, ctx, vec![ab.clone()]).unwrap();
        let c = n.complement();
        for w in words_over(2, &ab, &universe()) {
            assert!(n.accepts(&w).unwrap(), "{w}");
            assert!(!c.accepts(&w).unwrap(), "{w}");
        }
        assert!(c.is_empty());
        assert!(n.intersect(&c).unwrap().is_empty());
        assert_eq!(n.witness().unwrap(), OrdinalWord::empty(2, 1));
    }

    #[test]
    fn empty_language() {
        let (_, ctx, ab) = setup();
        let src = "automaton { states: q; alphabet: a; initial: q; final: q; succ: q a q }";
        let a = crate::automaton::text::parse_automaton(src).unwrap();
        let n = AbstractNfa::from_automaton(&a, ctx, vec![ab]).unwrap();
        assert!(n.is_empty());
        assert!(n.witness().is_none());
    }

    #[test]
    fn projection_of_equality_is_universal() {
        let (_, ctx, ab) = setup();
        let eq = AbstractNfa::equality(ctx.clone(), vec![ab.clone(), ab.clone()], 0, 1);
        let p = eq.project(1).unwrap();
        for w in words_over(2, &ab, &universe()) {
            assert!(p.accepts(&w).unwrap());
        }
    }

    #[test]
    fn order_abstraction_agrees_and_projects() {
        let ab = Alphabet::from_symbols(&["a"]);
        let lt = word_order_automaton(&ab);
        let ctx = Arc::new(ClassContext::for_automata(2, &[&lt]));
        let n = AbstractNfa::from_automaton(&lt, ctx.clone(), vec![ab.clone(), ab.clone()]).unwrap();
        let words = words_over(2, &ab, &universe());
        for x in &words {
            for y in &words {
                let xy = crate::word::convolve(&[x, y]).unwrap();
                assert_eq!(n.accepts(&xy).unwrap(), lt.accepts(&xy).unwrap(), "{x} | {y}");
            }
        }
        // exists y (y < x): every nonempty x.
        let p = n.project(0).unwrap();
        for x in &words {
            assert_eq!(p.accepts(x).unwrap(), !x.is_empty(), "{x}");
        }
        // Swapping the tracks through reindexing gives x > y.
        let swapped = n.reindex(vec![ab.clone(), ab.clone()], &[1, 0]).unwrap();
        let x = OrdinalWord::parse("a@w", None, 2).unwrap();
        let y = OrdinalWord::parse("a@3", None, 2).unwrap();
        assert!(swapped.accepts(&crate::word::convolve(&[&x, &y]).unwrap()).unwrap());
        assert!(!n.accepts(&crate::word::convolve(&[&x, &y]).unwrap()).unwrap());
    }

    #[test]
    fn witness_positions_increase() {
        let ab = Alphabet::from_symbols(&["a"]);
        let lt = word_order_automaton(&ab);
        let ctx = Arc::new(ClassContext::for_automata(2, &[&lt]));
        let n = AbstractNfa::from_automaton(&lt, ctx, vec![ab.clone(), ab]).unwrap();
        let w = n.witness().unwrap();
        assert!(lt.accepts(&w).unwrap());
        let ps: Vec<&Ordinal> = w.support().collect();
        assert!(ps.windows(2).all(|p| p[0] < p[1]));
        assert!(ps.iter().all(|p| **p < ord("w^2")));
    }
}
