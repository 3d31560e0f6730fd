//! Gap lengths up to the equivalence "same empty-stretch relation for every
//! automaton in play".
//!
//! A length `δ < w^k` is `sum w^j * c_j`; its relation is the product of the
//! powers `R_j^(c_j)`. Each power sequence is eventually periodic, so `c_j`
//! only matters up to the largest preperiod and modulo the lcm of periods.

use std::fmt;

use crate::automaton::{AutomatonError, OrdinalAutomaton, Relation};
use crate::ordinal::Ordinal;

/// Reduced coefficient profile, indexed by level `0..=k`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GapClass(pub Vec<u32>);

impl GapClass {
    pub fn coeff(&self, j: usize) -> u32 {
        self.0[j]
    }
}

impl fmt::Debug for GapClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (j, c) in self.0.iter().enumerate().rev() {
            if j + 1 < self.0.len() {
                write!(f, " ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

/// Per-level caps shared by one family of automata over the shape `w^k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassContext {
    k: u32,
    /// `(preperiod, period)` per level `0..k`.
    caps: Vec<(u32, u32)>,
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl ClassContext {
    pub fn new(k: u32, caps: Vec<(u32, u32)>) -> Self {
        assert_eq!(caps.len(), k as usize);
        assert!(caps.iter().all(|&(a, b)| a >= 1 && b >= 1));
        ClassContext { k, caps }
    }

    /// Caps valid for all `automata`: largest preperiod, lcm of periods.
    pub fn for_automata(k: u32, automata: &[&OrdinalAutomaton]) -> Self {
        let mut caps = vec![(1u32, 1u32); k as usize];
        for a in automata {
            for (j, cap) in caps.iter_mut().enumerate() {
                let p = a.level_powers(j as u32);
                let (pre, per) = (p.preperiod as u32, p.period as u32);
                cap.0 = cap.0.max(pre);
                cap.1 = cap.1 / gcd(cap.1, per) * per;
            }
        }
        ClassContext { k, caps }
    }

    pub fn shape(&self) -> u32 {
        self.k
    }

    pub fn caps(&self) -> &[(u32, u32)] {
        &self.caps
    }

    /// Number of distinct values a reduced level-`j` coefficient can take.
    pub fn level_size(&self, j: usize) -> u32 {
        let (a, b) = self.caps[j];
        a + b
    }

    pub fn reduce(&self, j: usize, c: u64) -> u32 {
        let (a, b) = (self.caps[j].0 as u64, self.caps[j].1 as u64);
        if c < a + b {
            c as u32
        } else {
            (a + (c - a) % b) as u32
        }
    }

    pub fn zero(&self) -> GapClass {
        GapClass(vec![0; self.k as usize + 1])
    }

    pub fn one(&self) -> GapClass {
        let mut g = self.zero();
        if self.k == 0 {
            g.0[0] = 1;
        } else {
            g.0[0] = self.reduce(0, 1);
        }
        g
    }

    /// Class of the whole shape `w^k`, the stretch after the last letter.
    pub fn terminal(&self) -> GapClass {
        let mut g = self.zero();
        g.0[self.k as usize] = 1;
        g
    }

    pub fn class_of(&self, delta: &Ordinal) -> Result<GapClass, AutomatonError> {
        let too_long = || AutomatonError::GapTooLong(delta.to_string(), self.k);
        let coeffs = delta.finite_coeffs().ok_or_else(too_long)?;
        if coeffs.len() > self.k as usize + 1 {
            return Err(too_long());
        }
        if coeffs.len() == self.k as usize + 1 {
            return if coeffs[self.k as usize] == 1 && coeffs[..self.k as usize].iter().all(|&c| c == 0) {
                Ok(self.terminal())
            } else {
                Err(too_long())
            };
        }
        let mut g = self.zero();
        for (j, &c) in coeffs.iter().enumerate() {
            g.0[j] = self.reduce(j, c);
        }
        Ok(g)
    }

    /// Class of `δ1 + δ2` from the classes of `δ1` and `δ2`.
    pub fn add(&self, g1: &GapClass, g2: &GapClass) -> GapClass {
        let Some(d) = (0..g2.0.len()).rev().find(|&j| g2.0[j] != 0) else {
            return g1.clone();
        };
        let mut out = g2.clone();
        for j in d + 1..g1.0.len() {
            out.0[j] = g1.0[j];
        }
        if d == self.k as usize {
            // Only `w^k` itself reaches the top level, and it absorbs everything.
            out.0[d] = 1;
        } else {
            out.0[d] = self.reduce(d, g1.0[d] as u64 + g2.0[d] as u64);
        }
        out
    }

    /// The least ordinal of the class.
    pub fn least(&self, g: &GapClass) -> Ordinal {
        let v: Vec<u64> = g.0.iter().map(|&c| c as u64).collect();
        Ordinal::from_finite_coeffs(&v)
    }

    /// Relation of `a` across any stretch of the class.
    pub fn relation(&self, a: &OrdinalAutomaton, g: &GapClass) -> Relation {
        let mut r = Relation::identity(a.num_states());
        for j in (0..g.0.len()).rev() {
            if g.0[j] > 0 {
                r = r.then(a.level_powers(j as u32).power(g.0[j] as u64));
            }
        }
        r
    }

    /// Number of classes of lengths below `w^k`.
    pub fn num_inner(&self) -> usize {
        (0..self.k as usize).map(|j| self.level_size(j) as usize).product()
    }

    /// Index of a class below `w^k` in `0..num_inner()`.
    pub fn index(&self, g: &GapClass) -> usize {
        let mut idx = 0;
        for j in (0..self.k as usize).rev() {
            idx = idx * self.level_size(j) as usize + g.0[j] as usize;
        }
        idx
    }

    pub fn class_at(&self, mut idx: usize) -> GapClass {
        let mut g = self.zero();
        for j in 0..self.k as usize {
            let s = self.level_size(j) as usize;
            g.0[j] = (idx % s) as u32;
            idx /= s;
        }
        g
    }

    pub fn inner_classes(&self) -> impl Iterator<Item = GapClass> + '_ {
        (0..self.num_inner()).map(|i| self.class_at(i))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ordinal::ord;

    fn ctx() -> ClassContext {
        ClassContext::new(2, vec![(2, 3), (1, 2)])
    }

    #[test]
    fn reduce_folds_onto_cycle() {
        let c = ctx();
        let got: Vec<u32> = (0..10).map(|n| c.reduce(0, n)).collect();
        assert_eq!(got, vec![0, 1, 2, 3, 4, 2, 3, 4, 2, 3]);
    }

    #[test]
    fn indexing_round_trips() {
        let c = ctx();
        assert_eq!(c.num_inner(), 15);
        for i in 0..c.num_inner() {
            assert_eq!(c.index(&c.class_at(i)), i);
        }
    }

    #[test]
    fn addition_tracks_ordinal_addition() {
        let c = ctx();
        let samples = ["0", "1", "4", "7", "w", "w+3", "w*2+1", "w*5+6"];
        for a in samples {
            for b in samples {
                let (x, y) = (ord(a), ord(b));
                let sum = c.class_of(&x.add(&y)).unwrap();
                assert_eq!(c.add(&c.class_of(&x).unwrap(), &c.class_of(&y).unwrap()), sum, "{a} + {b}");
            }
        }
        let t = c.terminal();
        assert_eq!(c.add(&c.class_of(&ord("w*3")).unwrap(), &t), t);
        assert!(c.class_of(&ord("w^2+1")).is_err());
        assert_eq!(c.least(&c.class_of(&ord("w*7+9")).unwrap()), ord("w*1+3"));
    }
}
