//! Ordinals below epsilon-zero in hereditary Cantor normal form.
//!
//! An [`Ordinal`] is a list of terms `w^e * c` with strictly decreasing
//! exponents `e` (themselves ordinals) and positive coefficients `c`. The
//! representation is canonical, so structural equality is ordinal equality
//! and the derived lexicographic comparison on terms is the ordinal order.

mod parse;
mod rank;

pub use parse::ParseOrdinalError;
pub use rank::{condense_once, fc_ranks, FcReport};

use std::cmp::Ordering;
use std::fmt;

use thiserror::Error;

/// One Cantor-normal-form term `w^exponent * coeff`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Term {
    pub exponent: Ordinal,
    pub coeff: u64,
}

/// An ordinal below epsilon-zero. The empty term list is zero.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Ordinal {
    terms: Vec<Term>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OrdinalError {
    #[error("left subtraction {0} - {1}: left operand exceeds right operand")]
    LeftSubDomain(String, String),
}

impl Ordinal {
    pub fn zero() -> Self {
        Ordinal { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Ordinal::nat(1)
    }

    pub fn nat(n: u64) -> Self {
        if n == 0 {
            return Ordinal::zero();
        }
        Ordinal {
            terms: vec![Term {
                exponent: Ordinal::zero(),
                coeff: n,
            }],
        }
    }

    pub fn omega() -> Self {
        Ordinal::omega_pow(Ordinal::one())
    }

    /// `w^e`.
    pub fn omega_pow(e: Ordinal) -> Self {
        Ordinal {
            terms: vec![Term {
                exponent: e,
                coeff: 1,
            }],
        }
    }

    /// `w^e * c` for a natural exponent.
    pub fn monomial(e: u32, c: u64) -> Self {
        if c == 0 {
            return Ordinal::zero();
        }
        Ordinal {
            terms: vec![Term {
                exponent: Ordinal::nat(e as u64),
                coeff: c,
            }],
        }
    }

    /// Builds `sum_j w^j * coeffs[j]` (index = exponent).
    pub fn from_finite_coeffs(coeffs: &[u64]) -> Self {
        let terms = coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &c)| c > 0)
            .map(|(e, &c)| Term {
                exponent: Ordinal::nat(e as u64),
                coeff: c,
            })
            .collect();
        Ordinal { terms }
    }

    /// Sums the given terms with ordinal addition, so any order is accepted.
    pub fn from_terms<I: IntoIterator<Item = Term>>(terms: I) -> Self {
        terms.into_iter().fold(Ordinal::zero(), |acc, t| {
            if t.coeff == 0 {
                acc
            } else {
                acc.add(&Ordinal { terms: vec![t] })
            }
        })
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.terms.iter().all(|t| t.exponent.is_zero())
    }

    pub fn as_nat(&self) -> Option<u64> {
        match self.terms.as_slice() {
            [] => Some(0),
            [t] if t.exponent.is_zero() => Some(t.coeff),
            _ => None,
        }
    }

    /// True for limit ordinals other than zero.
    pub fn is_limit(&self) -> bool {
        self.terms.last().is_some_and(|t| !t.exponent.is_zero())
    }

    pub fn is_successor(&self) -> bool {
        self.terms.last().is_some_and(|t| t.exponent.is_zero())
    }

    /// Largest exponent in the normal form; zero for finite values.
    pub fn degree(&self) -> Ordinal {
        self.terms
            .first()
            .map(|t| t.exponent.clone())
            .unwrap_or_default()
    }

    /// The degree as a natural number, if every exponent is finite.
    pub fn finite_degree(&self) -> Option<u32> {
        if self.is_zero() {
            return Some(0);
        }
        self.degree().as_nat().map(|d| d as u32)
    }

    pub fn leading_coeff(&self) -> u64 {
        self.terms.first().map(|t| t.coeff).unwrap_or(0)
    }

    /// Coefficient of `w^j`.
    pub fn coeff_at(&self, j: u32) -> u64 {
        let e = Ordinal::nat(j as u64);
        self.terms
            .iter()
            .find(|t| t.exponent == e)
            .map(|t| t.coeff)
            .unwrap_or(0)
    }

    /// Coefficients indexed by exponent, if all exponents are finite.
    pub fn finite_coeffs(&self) -> Option<Vec<u64>> {
        let d = self.finite_degree()? as usize;
        let mut out = vec![0; if self.is_zero() { 0 } else { d + 1 }];
        for t in &self.terms {
            out[t.exponent.as_nat()? as usize] = t.coeff;
        }
        Some(out)
    }

    pub fn succ(&self) -> Ordinal {
        self.add(&Ordinal::one())
    }

    /// Ordinal sum `self + rhs`.
    pub fn add(&self, rhs: &Ordinal) -> Ordinal {
        let Some(head) = rhs.terms.first() else {
            return self.clone();
        };
        let mut terms: Vec<Term> = Vec::with_capacity(self.terms.len() + rhs.terms.len());
        let mut merged = None;
        for t in &self.terms {
            match t.exponent.cmp(&head.exponent) {
                Ordering::Greater => terms.push(t.clone()),
                Ordering::Equal => merged = Some(t.coeff),
                Ordering::Less => break,
            }
        }
        terms.push(Term {
            exponent: head.exponent.clone(),
            coeff: head.coeff + merged.unwrap_or(0),
        });
        terms.extend(rhs.terms[1..].iter().cloned());
        Ordinal { terms }
    }

    /// The unique `d` with `self + d = rhs`.
    pub fn left_sub(&self, rhs: &Ordinal) -> Result<Ordinal, OrdinalError> {
        if self > rhs {
            return Err(OrdinalError::LeftSubDomain(
                self.to_string(),
                rhs.to_string(),
            ));
        }
        let mut i = 0;
        while i < self.terms.len() && self.terms[i] == rhs.terms[i] {
            i += 1;
        }
        if i == self.terms.len() {
            return Ok(Ordinal {
                terms: rhs.terms[i..].to_vec(),
            });
        }
        let (a, b) = (&self.terms[i], &rhs.terms[i]);
        if a.exponent == b.exponent {
            let mut terms = vec![Term {
                exponent: b.exponent.clone(),
                coeff: b.coeff - a.coeff,
            }];
            terms.extend(rhs.terms[i + 1..].iter().cloned());
            Ok(Ordinal { terms })
        } else {
            Ok(Ordinal {
                terms: rhs.terms[i..].to_vec(),
            })
        }
    }

    /// Ordinal product `self * rhs`.
    pub fn mul(&self, rhs: &Ordinal) -> Ordinal {
        if self.is_zero() || rhs.is_zero() {
            return Ordinal::zero();
        }
        let lead = &self.terms[0];
        let mut acc = Ordinal::zero();
        for t in &rhs.terms {
            let part = if t.exponent.is_zero() {
                let mut terms = self.terms.clone();
                terms[0].coeff = lead.coeff * t.coeff;
                Ordinal { terms }
            } else {
                Ordinal {
                    terms: vec![Term {
                        exponent: lead.exponent.add(&t.exponent),
                        coeff: t.coeff,
                    }],
                }
            };
            acc = acc.add(&part);
        }
        acc
    }

    /// Hessenberg (commutative) sum: coefficient-wise merge of normal forms.
    pub fn natural_sum(&self, rhs: &Ordinal) -> Ordinal {
        let mut terms: Vec<Term> = Vec::with_capacity(self.terms.len() + rhs.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() || j < rhs.terms.len() {
            let next = match (self.terms.get(i), rhs.terms.get(j)) {
                (Some(a), Some(b)) => match a.exponent.cmp(&b.exponent) {
                    Ordering::Greater => {
                        i += 1;
                        a.clone()
                    }
                    Ordering::Less => {
                        j += 1;
                        b.clone()
                    }
                    Ordering::Equal => {
                        i += 1;
                        j += 1;
                        Term {
                            exponent: a.exponent.clone(),
                            coeff: a.coeff + b.coeff,
                        }
                    }
                },
                (Some(a), None) => {
                    i += 1;
                    a.clone()
                }
                (None, Some(b)) => {
                    j += 1;
                    b.clone()
                }
                (None, None) => unreachable!(),
            };
            terms.push(next);
        }
        Ordinal { terms }
    }

    /// Splits off the part with exponents `>= e` (the "head") from the rest.
    pub fn split_at_exponent(&self, e: &Ordinal) -> (Ordinal, Ordinal) {
        let idx = self
            .terms
            .iter()
            .position(|t| &t.exponent < e)
            .unwrap_or(self.terms.len());
        (
            Ordinal {
                terms: self.terms[..idx].to_vec(),
            },
            Ordinal {
                terms: self.terms[idx..].to_vec(),
            },
        )
    }
}

impl PartialOrd for Ordinal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Ordinal {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.terms.iter().zip(&other.terms) {
            let c = a
                .exponent
                .cmp(&b.exponent)
                .then_with(|| a.coeff.cmp(&b.coeff));
            if c != Ordering::Equal {
                return c;
            }
        }
        self.terms.len().cmp(&other.terms.len())
    }
}

impl From<u64> for Ordinal {
    fn from(n: u64) -> Self {
        Ordinal::nat(n)
    }
}

impl fmt::Display for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str("+")?;
            }
            match t.exponent.as_nat() {
                Some(0) => write!(f, "{}", t.coeff)?,
                Some(1) => f.write_str("w")?,
                Some(e) => write!(f, "w^{e}")?,
                None => write!(f, "w^({})", t.exponent)?,
            }
            if !t.exponent.is_zero() && t.coeff != 1 {
                write!(f, "*{}", t.coeff)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ordinal({self})")
    }
}

impl std::str::FromStr for Ordinal {
    type Err = ParseOrdinalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse::parse_ordinal(s)
    }
}

/// Parses an ordinal literal, panicking on malformed input. Test helper.
pub fn ord(s: &str) -> Ordinal {
    s.parse()
        .unwrap_or_else(|e| panic!("bad ordinal literal {s:?}: {e}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn add_absorbs_left() {
        assert_eq!(ord("1").add(&ord("w")), ord("w"));
        assert_eq!(ord("w").add(&ord("1")).to_string(), "w+1");
        assert_eq!(ord("w^2+w*3+1").add(&ord("w*2+5")), ord("w^2+w*5+5"));
    }

    #[test]
    fn left_sub_examples() {
        assert_eq!(ord("w+1").left_sub(&ord("w*2")).unwrap(), ord("w"));
        assert_eq!(ord("3").left_sub(&ord("w")).unwrap(), ord("w"));
        assert_eq!(ord("w").left_sub(&ord("w")).unwrap(), Ordinal::zero());
        assert!(ord("w*2").left_sub(&ord("w+5")).is_err());
    }

    #[test]
    fn mul_examples() {
        assert_eq!(ord("w+1").mul(&ord("2")).to_string(), "w*2+1");
        assert_eq!(ord("2").mul(&ord("w")), ord("w"));
        assert_eq!(ord("w+1").mul(&ord("w")), ord("w^2"));
        assert_eq!(ord("w*2").mul(&ord("w+3")), ord("w^2+w*6"));
    }

    #[test]
    fn natural_sum_merges() {
        assert_eq!(
            ord("w").natural_sum(&ord("w^2+1")).to_string(),
            "w^2+w+1"
        );
    }

    #[test]
    fn ordering_is_lexicographic() {
        assert!(ord("w") > ord("1000"));
        assert!(ord("w^2") > ord("w*9+9"));
        assert!(ord("w^w") > ord("w^9"));
        assert!(ord("w+1") < ord("w+3"));
    }

    #[test]
    fn limits_and_successors() {
        assert!(ord("w*2").is_limit());
        assert!(ord("w+1").is_successor());
        assert!(!Ordinal::zero().is_limit());
        assert_eq!(ord("w^2*3+4").coeff_at(2), 3);
        assert_eq!(ord("w^2*3+4").finite_coeffs(), Some(vec![4, 0, 3]));
    }
}
