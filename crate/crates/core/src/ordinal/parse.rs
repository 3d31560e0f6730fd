use thiserror::Error;

use super::{Ordinal, Term};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("ordinal syntax error at offset {pos}: {msg}")]
pub struct ParseOrdinalError {
    pub pos: usize,
    pub msg: String,
}

pub(super) fn parse_ordinal(s: &str) -> Result<Ordinal, ParseOrdinalError> {
    let mut p = Parser {
        chars: s.char_indices().collect(),
        idx: 0,
        len: s.len(),
    };
    let o = p.ordinal()?;
    p.skip_ws();
    if let Some(&(pos, c)) = p.chars.get(p.idx) {
        return Err(ParseOrdinalError {
            pos,
            msg: format!("unexpected character {c:?}"),
        });
    }
    Ok(o)
}

struct Parser {
    chars: Vec<(usize, char)>,
    idx: usize,
    len: usize,
}

impl Parser {
    fn pos(&self) -> usize {
        self.chars.get(self.idx).map(|&(p, _)| p).unwrap_or(self.len)
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.idx).map(|&(_, c)| c)
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.idx += 1;
        }
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.idx += 1;
            true
        } else {
            false
        }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseOrdinalError> {
        Err(ParseOrdinalError {
            pos: self.pos(),
            msg: msg.into(),
        })
    }

    fn ordinal(&mut self) -> Result<Ordinal, ParseOrdinalError> {
        let mut acc = self.term()?;
        while self.eat('+') {
            let t = self.term()?;
            acc = acc.add(&t);
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Ordinal, ParseOrdinalError> {
        self.skip_ws();
        match self.peek() {
            Some('w') | Some('ω') => {
                self.idx += 1;
                let exponent = if self.eat('^') {
                    self.factor()?
                } else {
                    Ordinal::one()
                };
                let coeff = if self.eat('*') { self.nat()? } else { 1 };
                Ok(Ordinal::from_terms([Term { exponent, coeff }]))
            }
            Some(c) if c.is_ascii_digit() => Ok(Ordinal::nat(self.nat()?)),
            Some(c) => self.err(format!("expected a term, found {c:?}")),
            None => self.err("expected a term, found end of input"),
        }
    }

    fn factor(&mut self) -> Result<Ordinal, ParseOrdinalError> {
        if self.eat('(') {
            let o = self.ordinal()?;
            if !self.eat(')') {
                return self.err("expected ')'");
            }
            Ok(o)
        } else if matches!(self.peek(), Some('w') | Some('ω')) {
            // Bare exponent tower: `w^w^2` reads as `w^(w^2)`.
            self.idx += 1;
            let e = if self.eat('^') {
                self.factor()?
            } else {
                Ordinal::one()
            };
            Ok(Ordinal::omega_pow(e))
        } else {
            Ok(Ordinal::nat(self.nat()?))
        }
    }

    fn nat(&mut self) -> Result<u64, ParseOrdinalError> {
        self.skip_ws();
        let start = self.idx;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.idx += 1;
        }
        if start == self.idx {
            return self.err("expected a natural number");
        }
        let digits: String = self.chars[start..self.idx].iter().map(|&(_, c)| c).collect();
        digits.parse().or_else(|_| self.err("natural number too large"))
    }
}

#[cfg(test)]
mod tests {
    use super::super::ord;
    use super::*;

    #[test]
    fn reads_terms() {
        let o = ord("w^2*3+w*1+4");
        let flat: Vec<(u64, u64)> = o
            .terms()
            .iter()
            .map(|t| (t.exponent.as_nat().unwrap(), t.coeff))
            .collect();
        assert_eq!(flat, vec![(2, 3), (1, 1), (0, 4)]);
        assert_eq!(o.to_string(), "w^2*3+w+4");
    }

    #[test]
    fn zero_and_normalization() {
        assert!(ord("0").is_zero());
        assert_eq!(ord("3+w").to_string(), "w");
        assert_eq!(ord("w+w").to_string(), "w*2");
        assert_eq!(ord("w^(w+1)*2").to_string(), "w^(w+1)*2");
        assert_eq!(ord(" w ^ 2 + 1 ").to_string(), "w^2+1");
    }

    #[test]
    fn reports_positions() {
        let e = parse_ordinal("w^2+").unwrap_err();
        assert_eq!(e.pos, 4);
        let e = parse_ordinal("w^(2").unwrap_err();
        assert_eq!(e.pos, 4);
        let e = parse_ordinal("w x").unwrap_err();
        assert_eq!(e.pos, 2);
    }
}
