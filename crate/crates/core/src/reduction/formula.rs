//! First-order formulas over a presentation's relation symbols.
//!
//! Precedence from loosest: `->` (right associative), `|`, `&`, `!`.
//! Quantifiers `exists x y` / `forall x` scope as far right as possible.
//! Atoms are `R(x, y)`, infix `x R y` for symbolic names such as `<`,
//! `x = y`, `x != y`, `true` and `false`.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Formula {
    True,
    False,
    Atom(String, Vec<String>),
    Eq(String, String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Exists(String, Box<Formula>),
    Forall(String, Box<Formula>),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormulaError {
    #[error("column {col}: {msg}")]
    Syntax { col: usize, msg: String },
    #[error("the quantifier `there exist infinitely many` is not supported")]
    InfiniteQuantifier,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Sym(String),
    LParen,
    RParen,
    Comma,
    Not,
    And,
    Or,
    Arrow,
    Dot,
}

fn is_sym_char(c: char) -> bool {
    "<>=~+*^%$@/\\".contains(c)
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, FormulaError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let single = match c {
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            ',' => Some(Tok::Comma),
            '&' | '∧' => Some(Tok::And),
            '|' | '∨' => Some(Tok::Or),
            '¬' => Some(Tok::Not),
            '→' => Some(Tok::Arrow),
            '.' => Some(Tok::Dot),
            '∃' => Some(Tok::Ident("exists".into())),
            '∀' => Some(Tok::Ident("forall".into())),
            _ => None,
        };
        if let Some(t) = single {
            out.push((t, col));
            i += 1;
        } else if c == '-' && chars.get(i + 1) == Some(&'>') {
            out.push((Tok::Arrow, col));
            i += 2;
        } else if c == '!' {
            if chars.get(i + 1) == Some(&'=') {
                out.push((Tok::Sym("!=".into()), col));
                i += 2;
            } else {
                out.push((Tok::Not, col));
                i += 1;
            }
        } else if c.is_alphanumeric() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            // `exists^inf` and friends.
            if word == "exists" && chars.get(i) == Some(&'^') {
                return Err(FormulaError::InfiniteQuantifier);
            }
            if word == "exists_inf" || word == "existsinf" {
                return Err(FormulaError::InfiniteQuantifier);
            }
            if word == "not" {
                out.push((Tok::Not, col));
                continue;
            }
            if word == "and" || word == "or" {
                out.push((if word == "and" { Tok::And } else { Tok::Or }, col));
                continue;
            }
            out.push((Tok::Ident(word), col));
        } else if is_sym_char(c) {
            let start = i;
            while i < chars.len() && is_sym_char(chars[i]) {
                i += 1;
            }
            out.push((Tok::Sym(chars[start..i].iter().collect()), col));
        } else if c == '∞' {
            return Err(FormulaError::InfiniteQuantifier);
        } else {
            return Err(FormulaError::Syntax {
                col,
                msg: format!("unexpected character {c:?}"),
            });
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |t| t.1)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, FormulaError> {
        Err(FormulaError::Syntax {
            col: self.col(),
            msg: msg.into(),
        })
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn ident(&mut self) -> Result<String, FormulaError> {
        match self.peek() {
            Some(Tok::Ident(s)) if !is_keyword(s) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => self.err("expected a variable"),
        }
    }

    fn implication(&mut self) -> Result<Formula, FormulaError> {
        let lhs = self.disjunction()?;
        if self.eat(&Tok::Arrow) {
            let rhs = self.implication()?;
            return Ok(Formula::Implies(Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula, FormulaError> {
        let mut f = self.conjunction()?;
        while self.eat(&Tok::Or) {
            f = Formula::Or(Box::new(f), Box::new(self.conjunction()?));
        }
        Ok(f)
    }

    fn conjunction(&mut self) -> Result<Formula, FormulaError> {
        let mut f = self.unary()?;
        while self.eat(&Tok::And) {
            f = Formula::And(Box::new(f), Box::new(self.unary()?));
        }
        Ok(f)
    }

    fn unary(&mut self) -> Result<Formula, FormulaError> {
        if self.eat(&Tok::Not) {
            return Ok(Formula::Not(Box::new(self.unary()?)));
        }
        if let Some(Tok::Ident(q)) = self.peek() {
            if q == "exists" || q == "forall" {
                let universal = q == "forall";
                self.pos += 1;
                let mut vars = vec![self.ident()?];
                while matches!(self.peek(), Some(Tok::Ident(s)) if !is_keyword(s)) && !self.starts_atom() {
                    vars.push(self.ident()?);
                }
                self.eat(&Tok::Dot);
                let mut body = self.implication()?;
                for v in vars.into_iter().rev() {
                    body = if universal {
                        Formula::Forall(v, Box::new(body))
                    } else {
                        Formula::Exists(v, Box::new(body))
                    };
                }
                return Ok(body);
            }
        }
        self.atom()
    }

    /// Whether the identifier at the cursor begins an atom rather than
    /// continuing a quantifier's variable list.
    fn starts_atom(&self) -> bool {
        let at = |i: usize| self.toks.get(self.pos + i).map(|t| &t.0);
        match at(1) {
            Some(Tok::Sym(_)) => true,
            // `R(x, ...)` rather than a variable followed by a parenthesized body.
            Some(Tok::LParen) => {
                matches!(at(2), Some(Tok::Ident(_))) && matches!(at(3), Some(Tok::Comma) | Some(Tok::RParen))
            }
            _ => false,
        }
    }

    fn atom(&mut self) -> Result<Formula, FormulaError> {
        match self.peek().cloned() {
            Some(Tok::LParen) => {
                self.pos += 1;
                let f = self.implication()?;
                if !self.eat(&Tok::RParen) {
                    return self.err("expected `)`");
                }
                Ok(f)
            }
            Some(Tok::Ident(s)) if s == "true" => {
                self.pos += 1;
                Ok(Formula::True)
            }
            Some(Tok::Ident(s)) if s == "false" => {
                self.pos += 1;
                Ok(Formula::False)
            }
            Some(Tok::Ident(s)) if !is_keyword(&s) => {
                self.pos += 1;
                if self.eat(&Tok::LParen) {
                    let mut args = vec![self.ident()?];
                    while self.eat(&Tok::Comma) {
                        args.push(self.ident()?);
                    }
                    if !self.eat(&Tok::RParen) {
                        return self.err("expected `)` after arguments");
                    }
                    return Ok(Formula::Atom(s, args));
                }
                let op = match self.peek() {
                    Some(Tok::Sym(op)) => op.clone(),
                    Some(Tok::Ident(op)) if !is_keyword(op) => op.clone(),
                    _ => return self.err("expected a relation after the variable"),
                };
                self.pos += 1;
                let rhs = self.ident()?;
                Ok(match op.as_str() {
                    "=" => Formula::Eq(s, rhs),
                    "!=" => Formula::Not(Box::new(Formula::Eq(s, rhs))),
                    _ => Formula::Atom(op, vec![s, rhs]),
                })
            }
            _ => self.err("expected a formula"),
        }
    }
}

fn is_keyword(s: &str) -> bool {
    matches!(s, "exists" | "forall" | "true" | "false")
}

impl Formula {
    pub fn parse(src: &str) -> Result<Formula, FormulaError> {
        let toks = lex(src)?;
        let mut p = Parser {
            toks,
            pos: 0,
            end: src.chars().count() + 1,
        };
        let f = p.implication()?;
        if p.pos < p.toks.len() {
            return p.err("unexpected trailing input");
        }
        Ok(f)
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        match self {
            Formula::True | Formula::False => BTreeSet::new(),
            Formula::Atom(_, args) => args.iter().cloned().collect(),
            Formula::Eq(a, b) => [a.clone(), b.clone()].into(),
            Formula::Not(f) => f.free_vars(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                let mut s = a.free_vars();
                s.extend(b.free_vars());
                s
            }
            Formula::Exists(v, f) | Formula::Forall(v, f) => {
                let mut s = f.free_vars();
                s.remove(v);
                s
            }
        }
    }

    pub fn is_sentence(&self) -> bool {
        self.free_vars().is_empty()
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::True => write!(f, "true"),
            Formula::False => write!(f, "false"),
            Formula::Atom(r, args) => {
                let symbolic = r.chars().all(is_sym_char);
                if symbolic && args.len() == 2 {
                    write!(f, "{} {r} {}", args[0], args[1])
                } else {
                    write!(f, "{r}({})", args.join(", "))
                }
            }
            Formula::Eq(a, b) => write!(f, "{a} = {b}"),
            Formula::Not(g) => write!(f, "!{}", Paren(g)),
            Formula::And(a, b) => write!(f, "{} & {}", Paren(a), Paren(b)),
            Formula::Or(a, b) => write!(f, "{} | {}", Paren(a), Paren(b)),
            Formula::Implies(a, b) => write!(f, "{} -> {}", Paren(a), Paren(b)),
            Formula::Exists(v, g) => write!(f, "exists {v} {}", Paren(g)),
            Formula::Forall(v, g) => write!(f, "forall {v} {}", Paren(g)),
        }
    }
}

struct Paren<'a>(&'a Formula);

impl fmt::Display for Paren<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Formula::True | Formula::False | Formula::Atom(..) | Formula::Eq(..) => write!(f, "{}", self.0),
            g => write!(f, "({g})"),
        }
    }
}
