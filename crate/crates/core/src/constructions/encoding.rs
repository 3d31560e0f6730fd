//! Ordinals below `w^(w^(k-1))` as finite words over `w^k`.
//!
//! Over `w` the natural `c` is `a` at `0..c`. Over `w^k` with `k >= 2`, an
//! ordinal is written in base `t = w^(w^(k-2))` as `sum t^j * b_j`, and the
//! encoding of each digit `b_j` over `w^(k-1)` is placed in the block
//! `[w^(k-1) * j, w^(k-1) * (j+1))`.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::ordinal::{Ordinal, Term};
use crate::word::{Letter, OrdinalWord};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EncodingError {
    #[error("shape exponent must be at least 1")]
    ZeroShape,
    #[error("{0} is not below w^(w^{1})")]
    OutOfRange(String, u32),
    #[error("word {0} is not an ordinal encoding over w^{1}")]
    NotAnEncoding(String, u32),
}

/// Exclusive upper bound of the encodable ordinals: `w^(w^(k-1))`.
pub fn encoding_bound(k: u32) -> Ordinal {
    Ordinal::omega_pow(Ordinal::omega_pow(Ordinal::nat(k as u64 - 1)))
}

pub fn enc_ordinal(beta: &Ordinal, k: u32) -> Result<OrdinalWord, EncodingError> {
    if k == 0 {
        return Err(EncodingError::ZeroShape);
    }
    if beta >= &encoding_bound(k) {
        return Err(EncodingError::OutOfRange(beta.to_string(), k - 1));
    }
    let mut positions = Vec::new();
    encode_into(beta, k, &Ordinal::zero(), &mut positions);
    let a = Letter::single("a");
    Ok(OrdinalWord::new(k, 1, positions.into_iter().map(|p| (p, a.clone())))
        .expect("positions below the shape"))
}

fn encode_into(beta: &Ordinal, k: u32, offset: &Ordinal, out: &mut Vec<Ordinal>) {
    if k == 1 {
        let c = beta.as_nat().expect("finite digit");
        out.extend((0..c).map(|i| offset.add(&Ordinal::nat(i))));
        return;
    }
    for (j, digit) in digits(beta, k) {
        let start = offset.add(&Ordinal::monomial(k - 1, j));
        encode_into(&digit, k - 1, &start, out);
    }
}

/// Base-`w^(w^(k-2))` digits of `beta`, keyed by digit index.
fn digits(beta: &Ordinal, k: u32) -> BTreeMap<u64, Ordinal> {
    let split = Ordinal::nat(k as u64 - 2);
    let mut groups: BTreeMap<u64, Vec<Term>> = BTreeMap::new();
    for t in beta.terms() {
        let j = t.exponent.coeff_at(k - 2);
        let (_, rest) = t.exponent.split_at_exponent(&split);
        groups.entry(j).or_default().push(Term {
            exponent: rest,
            coeff: t.coeff,
        });
    }
    groups
        .into_iter()
        .map(|(j, ts)| (j, Ordinal::from_terms(ts)))
        .collect()
}

pub fn dec_word(w: &OrdinalWord, k: u32) -> Result<Ordinal, EncodingError> {
    if k == 0 {
        return Err(EncodingError::ZeroShape);
    }
    let bad = || EncodingError::NotAnEncoding(w.to_string(), k);
    if w.shape() != k || w.width() != 1 {
        return Err(bad());
    }
    let a = Letter::single("a");
    if w.entries().iter().any(|(_, l)| l != &a) {
        return Err(bad());
    }
    let positions: Vec<Ordinal> = w.support().cloned().collect();
    let beta = decode(&positions, k).ok_or_else(bad)?;
    if enc_ordinal(&beta, k).ok().as_ref() != Some(w) {
        return Err(bad());
    }
    Ok(beta)
}

fn decode(positions: &[Ordinal], k: u32) -> Option<Ordinal> {
    if k == 1 {
        return Some(Ordinal::nat(positions.len() as u64));
    }
    let split = Ordinal::nat(k as u64 - 1);
    let mut blocks: BTreeMap<u64, Vec<Ordinal>> = BTreeMap::new();
    for p in positions {
        let j = p.coeff_at(k - 1);
        let (_, inner) = p.split_at_exponent(&split);
        blocks.entry(j).or_default().push(inner);
    }
    let mut terms = Vec::new();
    for (j, inner) in blocks.into_iter().rev() {
        let digit = decode(&inner, k - 1)?;
        let shift = Ordinal::monomial(k - 2, j);
        for t in digit.terms() {
            terms.push(Term {
                exponent: shift.add(&t.exponent),
                coeff: t.coeff,
            });
        }
    }
    Some(Ordinal::from_terms(terms))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ordinal::ord;

    #[test]
    fn examples() {
        assert_eq!(enc_ordinal(&ord("w*2+3"), 2).unwrap().to_string(), "a@0, a@1, a@2, a@w, a@w+1");
        assert!(enc_ordinal(&ord("0"), 3).unwrap().is_empty());
        assert_eq!(enc_ordinal(&ord("3"), 1).unwrap().to_string(), "a@0, a@1, a@2");
        assert!(enc_ordinal(&ord("w"), 1).is_err());
        assert!(enc_ordinal(&ord("w^w"), 2).is_err());
        assert_eq!(enc_ordinal(&ord("w^w"), 3).unwrap().to_string(), "a@w^2");
    }

    #[test]
    fn round_trips() {
        for (s, k) in [("w^2*2+w+1", 2), ("w^(w+2)*3+w^w+w^3+5", 3), ("w^(w^2*2+1)", 4), ("0", 1)] {
            let b = ord(s);
            assert_eq!(dec_word(&enc_ordinal(&b, k).unwrap(), k).unwrap(), b, "{s}");
        }
    }

    #[test]
    fn rejects_non_encodings() {
        let w = OrdinalWord::parse("a@1", None, 1).unwrap();
        assert!(dec_word(&w, 1).is_err());
        let w = OrdinalWord::parse("a@w+1", None, 2).unwrap();
        assert!(dec_word(&w, 2).is_err());
    }
}
