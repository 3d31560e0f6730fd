//! Text format for automata.
//!
//! ```text
//! automaton {
//!   states: q0 q1; alphabet: a b; initial: q0; final: q1;
//!   succ: q0 a q1; q1 _ q1;
//!   rlimit: {q1} q0; [within {q0 q1} meets {q1}] q1;
//!   llimit: q0 {q1}
//! }
//! ```
//!
//! `_` (or `◇`) is the blank. Letters of convolved alphabets are written as
//! tuples `(a,_)`. Items inside a section are separated by `;`; a new
//! section starts at `name:`. `#` starts a comment.

use std::fmt::Write as _;

use thiserror::Error;

use super::{AutomatonError, LimitGuard, OrdinalAutomaton, RawAutomaton, RawGuard};
use crate::word::{Letter, Symbol};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TextError {
    #[error("{line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error(transparent)]
    Invalid(#[from] AutomatonError),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Word(String),
    Punct(char),
}

struct Lexer {
    toks: Vec<(Tok, usize, usize)>,
    idx: usize,
    end: (usize, usize),
}

impl Lexer {
    fn new(src: &str) -> Self {
        let mut toks = Vec::new();
        let (mut line, mut col) = (1, 1);
        let mut chars = src.chars().peekable();
        let mut cur: Option<(String, usize, usize)> = None;
        let flush = |cur: &mut Option<(String, usize, usize)>, toks: &mut Vec<_>| {
            if let Some((w, l, c)) = cur.take() {
                toks.push((Tok::Word(w), l, c));
            }
        };
        while let Some(ch) = chars.next() {
            if ch == '#' {
                flush(&mut cur, &mut toks);
                while chars.peek().is_some_and(|&c| c != '\n') {
                    chars.next();
                }
            } else if ch.is_whitespace() {
                flush(&mut cur, &mut toks);
            } else if "{}[]();:,".contains(ch) {
                flush(&mut cur, &mut toks);
                toks.push((Tok::Punct(ch), line, col));
            } else {
                match &mut cur {
                    Some((w, _, _)) => w.push(ch),
                    None => cur = Some((ch.to_string(), line, col)),
                }
            }
            if ch == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
        }
        flush(&mut cur, &mut toks);
        Lexer {
            toks,
            idx: 0,
            end: (line, col),
        }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.idx).map(|t| &t.0)
    }

    fn peek2(&self) -> Option<&Tok> {
        self.toks.get(self.idx + 1).map(|t| &t.0)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, TextError> {
        let (line, col) = self
            .toks
            .get(self.idx)
            .map(|&(_, l, c)| (l, c))
            .unwrap_or(self.end);
        Err(TextError::Syntax {
            line,
            col,
            msg: msg.into(),
        })
    }

    fn punct(&mut self, c: char) -> Result<(), TextError> {
        if self.peek() == Some(&Tok::Punct(c)) {
            self.idx += 1;
            Ok(())
        } else {
            self.err(format!("expected '{c}'"))
        }
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Punct(c)) {
            self.idx += 1;
            true
        } else {
            false
        }
    }

    fn word(&mut self) -> Result<String, TextError> {
        match self.peek() {
            Some(Tok::Word(w)) => {
                let w = w.clone();
                self.idx += 1;
                Ok(w)
            }
            _ => self.err("expected a name"),
        }
    }

    fn at_section_start(&self) -> bool {
        matches!(self.peek(), Some(Tok::Word(_))) && self.peek2() == Some(&Tok::Punct(':'))
    }

    fn at_item_end(&self) -> bool {
        matches!(self.peek(), None | Some(Tok::Punct(';')) | Some(Tok::Punct('}')))
            || self.at_section_start()
    }

    fn component(&mut self) -> Result<Option<Symbol>, TextError> {
        let w = self.word()?;
        Ok(if w == "_" || w == "◇" {
            None
        } else {
            Some(Symbol::from(w.as_str()))
        })
    }

    fn letter(&mut self) -> Result<Letter, TextError> {
        if self.eat('(') {
            let mut parts = vec![self.component()?];
            while self.eat(',') {
                parts.push(self.component()?);
            }
            self.punct(')')?;
            Ok(Letter::tuple(parts))
        } else {
            Ok(Letter::tuple(vec![self.component()?]))
        }
    }

    fn state_set(&mut self) -> Result<Vec<String>, TextError> {
        self.punct('{')?;
        let mut v = Vec::new();
        while !self.eat('}') {
            if self.peek().is_none() {
                return self.err("unterminated state set");
            }
            v.push(self.word()?);
        }
        Ok(v)
    }

    fn guard(&mut self) -> Result<RawGuard, TextError> {
        if self.eat('[') {
            let kw = self.word()?;
            if kw != "within" {
                self.idx -= 1;
                return self.err("expected 'within'");
            }
            let within = self.state_set()?;
            let kw = self.word()?;
            if kw != "meets" {
                self.idx -= 1;
                return self.err("expected 'meets'");
            }
            let meets = self.state_set()?;
            self.punct(']')?;
            Ok(RawGuard::Range { within, meets })
        } else {
            Ok(RawGuard::Exact(self.state_set()?))
        }
    }
}

/// Parses the text format into an unvalidated description.
pub fn parse_raw(src: &str) -> Result<RawAutomaton, TextError> {
    let mut lx = Lexer::new(src);
    match lx.peek() {
        Some(Tok::Word(w)) if w == "automaton" => lx.idx += 1,
        _ => return lx.err("expected 'automaton'"),
    }
    lx.punct('{')?;
    let mut raw = RawAutomaton::default();
    let mut section: Option<String> = None;
    loop {
        if lx.eat('}') {
            break;
        }
        if lx.eat(';') {
            continue;
        }
        if lx.peek().is_none() {
            return lx.err("unexpected end of input, expected '}'");
        }
        if lx.at_section_start() {
            section = Some(lx.word()?);
            lx.idx += 1;
            continue;
        }
        let Some(name) = section.as_deref() else {
            return lx.err("expected a section name such as 'states:'");
        };
        match name {
            "states" | "initial" | "final" => {
                while !lx.at_item_end() {
                    let s = lx.word()?;
                    match name {
                        "states" => raw.states.push(s),
                        "initial" => raw.initial.push(s),
                        _ => raw.final_states.push(s),
                    }
                }
            }
            "alphabet" => {
                while !lx.at_item_end() {
                    raw.alphabet.push(lx.letter()?);
                }
            }
            "succ" => {
                let from = lx.word()?;
                let l = lx.letter()?;
                let to = lx.word()?;
                raw.succ.push((from, l, to));
            }
            "rlimit" => {
                let g = lx.guard()?;
                let to = lx.word()?;
                raw.rlimit.push((g, to));
            }
            "llimit" => {
                let from = lx.word()?;
                let g = lx.guard()?;
                raw.llimit.push((from, g));
            }
            other => {
                lx.idx -= 2;
                return lx.err(format!("unknown section '{other}'"));
            }
        }
        if !lx.at_item_end() {
            return lx.err("expected ';'");
        }
    }
    if lx.peek().is_some() {
        return lx.err("trailing input after automaton");
    }
    Ok(raw)
}

/// Parses and validates an automaton.
pub fn parse_automaton(src: &str) -> Result<OrdinalAutomaton, TextError> {
    Ok(parse_raw(src)?.build()?)
}

fn set_text(names: &[String]) -> String {
    format!("{{{}}}", names.join(" "))
}

fn guard_text(g: &RawGuard) -> String {
    match g {
        RawGuard::Exact(v) => set_text(v),
        RawGuard::Range { within, meets } => {
            format!("[within {} meets {}]", set_text(within), set_text(meets))
        }
    }
}

/// Prints the text format; `parse_automaton(format_raw(r))` gives back `r`.
pub fn format_raw(r: &RawAutomaton) -> String {
    let mut s = String::from("automaton {\n");
    let list = |v: &[String]| v.join(" ");
    let letters: Vec<String> = r.alphabet.iter().map(|l| l.to_string()).collect();
    let _ = writeln!(s, "  states: {};", list(&r.states));
    let _ = writeln!(s, "  alphabet: {};", letters.join(" "));
    let _ = writeln!(s, "  initial: {};", list(&r.initial));
    let _ = writeln!(s, "  final: {};", list(&r.final_states));
    let mut section = |name: &str, items: Vec<String>| {
        if !items.is_empty() {
            let _ = writeln!(s, "  {name}: {};", items.join("; "));
        }
    };
    section(
        "succ",
        r.succ.iter().map(|(a, l, b)| format!("{a} {l} {b}")).collect(),
    );
    section(
        "rlimit",
        r.rlimit.iter().map(|(g, q)| format!("{} {q}", guard_text(g))).collect(),
    );
    section(
        "llimit",
        r.llimit.iter().map(|(q, g)| format!("{q} {}", guard_text(g))).collect(),
    );
    s.push_str("}\n");
    s
}

pub fn format_automaton(a: &OrdinalAutomaton) -> String {
    format_raw(&a.to_raw())
}

impl LimitGuard {
    /// Guard in the text format, with state names from `a`.
    pub fn render(&self, a: &OrdinalAutomaton) -> String {
        match *self {
            LimitGuard::Exact(s) => a.state_set_names(s),
            LimitGuard::Range { within, meets } => format!(
                "[within {} meets {}]",
                a.state_set_names(within),
                a.state_set_names(meets)
            ),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "automaton { states: q0 q1; alphabet: a b; initial: q0; final: q1; \
                          succ: q0 a q1; q1 _ q1; rlimit: {q1} q0; llimit: q0 {q1} }";

    #[test]
    fn parses_sample() {
        let a = parse_automaton(SAMPLE).unwrap();
        assert_eq!(a.num_states(), 2);
        assert_eq!(a.successor_transitions().len(), 2);
        assert_eq!(a.right_limit_transitions().len(), 1);
        assert_eq!(a.left_limit_transitions().len(), 1);
        assert_eq!(a.validation_warnings().len(), 1);
    }

    #[test]
    fn round_trips() {
        let raw = parse_raw(SAMPLE).unwrap();
        assert_eq!(parse_raw(&format_raw(&raw)).unwrap(), raw);
        let tuple = "automaton { states: s; alphabet: (a,_) (_,b) (a,b); initial: s; final: s;\n\
                     succ: s (a,_) s; s (_,_) s; rlimit: [within {s} meets {s}] s }";
        let raw = parse_raw(tuple).unwrap();
        assert_eq!(raw.alphabet.len(), 3);
        assert_eq!(parse_raw(&format_raw(&raw)).unwrap(), raw);
        assert!(raw.build().is_ok());
    }

    #[test]
    fn reports_line_and_column() {
        let src = "automaton {\n  states: q0;\n  succ: q0 a\n}";
        match parse_raw(src) {
            Err(TextError::Syntax { line, col, .. }) => assert_eq!((line, col), (4, 1)),
            other => panic!("{other:?}"),
        }
        match parse_raw("automaton { colours: red }") {
            Err(TextError::Syntax { line, col, msg }) => {
                assert_eq!((line, col), (1, 13));
                assert!(msg.contains("colours"));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn whitespace_and_comments_are_ignored() {
        let src = "automaton{states:q0;alphabet:a;initial:q0;final:q0 # trailing\n succ:q0 a q0}";
        let a = parse_automaton(src).unwrap();
        assert_eq!(a.num_states(), 1);
    }

    #[test]
    fn validation_errors_surface() {
        let src = "automaton { states: q0; alphabet: a; initial: q0; final: q9 }";
        assert!(matches!(
            parse_automaton(src),
            Err(TextError::Invalid(AutomatonError::UnknownState(_)))
        ));
    }
}
