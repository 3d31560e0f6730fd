//! Structures presented by automata: a domain, named relations over
//! convolutions of domain words, and an optional oracle word read as the
//! last track of every input.
//!
//! ```text
//! presentation {
//!   shape: w^2;
//!   domain: file:dom.aut;
//!   relation lt/2: gen:word-order;
//!   oracle: "a@0"
//! }
//! ```
//!
//! Automaton sources are `file:<path>` (relative to the presentation file)
//! or `gen:<name>[:<arg>...]`.

use std::collections::BTreeMap;
use std::path::Path;

use thiserror::Error;

use crate::automaton::text::parse_automaton;
use crate::automaton::OrdinalAutomaton;
use crate::constructions::{
    enc_domain, enc_successor, finite_word_recognizer, generate, unary_domain, unary_less, word_order_automaton,
};
use crate::word::{convolve, Alphabet, Letter, OrdinalWord};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PresentationError {
    #[error("{line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("{0}")]
    Invalid(String),
}

#[derive(Clone, Debug)]
pub struct RelationDef {
    pub arity: usize,
    pub automaton: OrdinalAutomaton,
}

#[derive(Clone, Debug)]
pub struct Presentation {
    shape: u32,
    domain: OrdinalAutomaton,
    relations: BTreeMap<String, RelationDef>,
    oracle: Option<OrdinalWord>,
    /// Alphabet of one variable track.
    sigma: Alphabet,
}

fn invalid(msg: impl Into<String>) -> PresentationError {
    PresentationError::Invalid(msg.into())
}

/// Relation names are identifiers or runs of operator characters such as `<`.
pub fn is_relation_name(s: &str) -> bool {
    let ident = s.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
    let symbolic = !s.is_empty() && s.chars().all(|c| "<>~+*^%$@/\\".contains(c));
    ident || symbolic
}

impl Presentation {
    pub fn new(shape: u32, domain: OrdinalAutomaton, oracle: Option<OrdinalWord>) -> Result<Self, PresentationError> {
        if shape == 0 {
            return Err(invalid("shape exponent must be at least 1"));
        }
        let ow = oracle.as_ref().map_or(0, OrdinalWord::width);
        if let Some(o) = &oracle {
            if o.shape() != shape {
                return Err(invalid(format!("oracle is over w^{}, presentation over w^{shape}", o.shape())));
            }
        }
        let dw = domain.width();
        if dw <= ow {
            return Err(invalid(format!("domain width {dw} leaves no variable track beside the oracle")));
        }
        let w0 = dw - ow;
        let tracks: Vec<usize> = (0..w0).collect();
        let mut letters: Vec<Letter> = Vec::new();
        for l in domain.alphabet().letters() {
            let x = l.select(&tracks);
            if !x.is_blank() && !letters.contains(&x) {
                letters.push(x);
            }
        }
        if letters.is_empty() {
            return Err(invalid("domain alphabet has no variable letters"));
        }
        let sigma = Alphabet::new(letters).map_err(|e| invalid(e.to_string()))?;
        Ok(Presentation {
            shape,
            domain,
            relations: BTreeMap::new(),
            oracle,
            sigma,
        })
    }

    pub fn with_relation(mut self, name: &str, arity: usize, automaton: OrdinalAutomaton) -> Result<Self, PresentationError> {
        self.add_relation(name, arity, automaton)?;
        Ok(self)
    }

    pub fn add_relation(&mut self, name: &str, arity: usize, automaton: OrdinalAutomaton) -> Result<(), PresentationError> {
        if !is_relation_name(name) {
            return Err(invalid(format!("{name:?} is not a relation name")));
        }
        if arity == 0 {
            return Err(invalid(format!("relation {name} has arity 0")));
        }
        let want = arity * self.sigma.width() + self.oracle_width();
        if automaton.width() != want {
            return Err(invalid(format!(
                "relation {name}/{arity} reads width {}, expected {want}",
                automaton.width()
            )));
        }
        if self.relations.contains_key(name) {
            return Err(invalid(format!("relation {name} defined twice")));
        }
        self.relations.insert(name.to_string(), RelationDef { arity, automaton });
        Ok(())
    }

    pub fn shape(&self) -> u32 {
        self.shape
    }

    pub fn domain(&self) -> &OrdinalAutomaton {
        &self.domain
    }

    pub fn relations(&self) -> &BTreeMap<String, RelationDef> {
        &self.relations
    }

    pub fn relation(&self, name: &str) -> Option<&RelationDef> {
        self.relations.get(name)
    }

    pub fn oracle(&self) -> Option<&OrdinalWord> {
        self.oracle.as_ref()
    }

    pub fn oracle_width(&self) -> usize {
        self.oracle.as_ref().map_or(0, OrdinalWord::width)
    }

    pub fn sigma(&self) -> &Alphabet {
        &self.sigma
    }

    /// Alphabet of the oracle track group: the letters the oracle uses.
    pub fn oracle_alphabet(&self) -> Option<Alphabet> {
        let o = self.oracle.as_ref()?;
        let mut letters: Vec<Letter> = Vec::new();
        for (_, l) in o.entries() {
            if !letters.contains(l) {
                letters.push(l.clone());
            }
        }
        if letters.is_empty() {
            // An empty oracle still occupies its tracks.
            return Some(Alphabet::empty(o.width()));
        }
        Some(Alphabet::new(letters).expect("distinct nonblank letters"))
    }

    pub fn automata(&self) -> Vec<&OrdinalAutomaton> {
        std::iter::once(&self.domain)
            .chain(self.relations.values().map(|r| &r.automaton))
            .collect()
    }

    /// `args[0] ⊗ ... ⊗ oracle`, the input the automata read.
    pub fn with_oracle(&self, args: &[&OrdinalWord]) -> OrdinalWord {
        let mut v: Vec<&OrdinalWord> = args.to_vec();
        if let Some(o) = &self.oracle {
            v.push(o);
        }
        if v.is_empty() {
            return OrdinalWord::empty(self.shape, 0);
        }
        convolve(&v).expect("words share the presentation shape")
    }

    pub fn in_domain(&self, w: &OrdinalWord) -> bool {
        self.domain.accepts(&self.with_oracle(&[w])).unwrap_or(false)
    }

    pub fn holds(&self, name: &str, args: &[&OrdinalWord]) -> Option<bool> {
        let r = self.relations.get(name)?;
        if r.arity != args.len() {
            return None;
        }
        Some(r.automaton.accepts(&self.with_oracle(args)).unwrap_or(false))
    }

    /// Reads the text format; `base` resolves `file:` sources.
    pub fn parse(src: &str, base: Option<&Path>) -> Result<Self, PresentationError> {
        parse_presentation(src, base)
    }

    pub fn load(path: &Path) -> Result<Self, PresentationError> {
        let src = std::fs::read_to_string(path).map_err(|e| invalid(format!("{}: {e}", path.display())))?;
        parse_presentation(&src, path.parent())
    }
}

/// Built-in presentations used by the verification suites.
pub fn standard_presentations() -> Vec<(&'static str, Presentation)> {
    let ab = Alphabet::from_symbols(&["a"]);
    let unary = Presentation::new(1, unary_domain(), None)
        .and_then(|p| p.with_relation("<", 2, unary_less()))
        .expect("unary presentation");
    let words = Presentation::new(2, finite_word_recognizer(&ab), None)
        .and_then(|p| p.with_relation("<", 2, word_order_automaton(&ab)))
        .expect("word-order presentation");
    let enc = Presentation::new(2, enc_domain(), None)
        .and_then(|p| p.with_relation("<", 2, word_order_automaton(&ab)))
        .and_then(|p| p.with_relation("succ", 2, enc_successor()))
        .expect("encoding presentation");
    vec![("unary-naturals", unary), ("word-order", words), ("enc-ordinals", enc)]
}

struct Item {
    key: String,
    value: String,
    line: usize,
    col: usize,
}

fn position(src: &str, offset: usize) -> (usize, usize) {
    let before = &src[..offset];
    let line = before.matches('\n').count() + 1;
    let col = before.rsplit('\n').next().map_or(0, |s| s.chars().count()) + 1;
    (line, col)
}

fn strip_comments(src: &str) -> String {
    let mut out = String::with_capacity(src.len());
    let mut in_quote = false;
    let mut skipping = false;
    for ch in src.chars() {
        if skipping {
            if ch == '\n' {
                skipping = false;
                out.push(ch);
            } else {
                out.push(' ');
            }
            continue;
        }
        if ch == '"' {
            in_quote = !in_quote;
        }
        if ch == '#' && !in_quote {
            skipping = true;
            out.push(' ');
        } else {
            out.push(ch);
        }
    }
    out
}

fn split_items(src: &str) -> Result<Vec<Item>, PresentationError> {
    let syntax = |offset: usize, msg: &str| {
        let (line, col) = position(src, offset);
        PresentationError::Syntax { line, col, msg: msg.into() }
    };
    let start = src.find(|c: char| !c.is_whitespace()).ok_or_else(|| syntax(0, "empty input"))?;
    if !src[start..].starts_with("presentation") {
        return Err(syntax(start, "expected `presentation`"));
    }
    let after = start + "presentation".len();
    let open = after + src[after..].find(|c: char| !c.is_whitespace()).ok_or_else(|| syntax(after, "expected `{`"))?;
    if !src[open..].starts_with('{') {
        return Err(syntax(open, "expected `{`"));
    }
    let close = src.rfind('}').filter(|&c| c > open).ok_or_else(|| syntax(src.len(), "missing `}`"))?;
    if let Some(extra) = src[close + 1..].find(|c: char| !c.is_whitespace()) {
        return Err(syntax(close + 1 + extra, "text after the closing `}`"));
    }
    let mut items = Vec::new();
    let mut seg_start = open + 1;
    let mut in_quote = false;
    for (i, ch) in src[open + 1..close].char_indices().map(|(i, c)| (i + open + 1, c)) {
        if ch == '"' {
            in_quote = !in_quote;
        }
        if ch == ';' && !in_quote {
            push_item(src, seg_start, i, &mut items)?;
            seg_start = i + 1;
        }
    }
    if in_quote {
        return Err(syntax(close, "unterminated string"));
    }
    push_item(src, seg_start, close, &mut items)?;
    Ok(items)
}

fn push_item(src: &str, from: usize, to: usize, items: &mut Vec<Item>) -> Result<(), PresentationError> {
    let seg = &src[from..to];
    let Some(lead) = seg.find(|c: char| !c.is_whitespace()) else {
        return Ok(());
    };
    let at = from + lead;
    let (line, col) = position(src, at);
    let body = seg[lead..].trim_end();
    let colon = body.find(':').ok_or_else(|| PresentationError::Syntax {
        line,
        col,
        msg: "expected `key: value`".into(),
    })?;
    items.push(Item {
        key: body[..colon].trim().to_string(),
        value: body[colon + 1..].trim().to_string(),
        line,
        col,
    });
    Ok(())
}

fn load_automaton(source: &str, base: Option<&Path>) -> Result<OrdinalAutomaton, String> {
    if let Some(path) = source.strip_prefix("file:") {
        let p = base.map_or_else(|| Path::new(path).to_path_buf(), |b| b.join(path));
        let text = std::fs::read_to_string(&p).map_err(|e| format!("{}: {e}", p.display()))?;
        parse_automaton(&text).map_err(|e| format!("{}: {e}", p.display()))
    } else if let Some(spec) = source.strip_prefix("gen:") {
        generate(spec).map_err(|e| e.to_string())
    } else {
        Err(format!("automaton source {source:?} must start with file: or gen:"))
    }
}

fn parse_presentation(src: &str, base: Option<&Path>) -> Result<Presentation, PresentationError> {
    let clean = strip_comments(src);
    let items = split_items(&clean)?;
    let at = |it: &Item, msg: String| PresentationError::Syntax { line: it.line, col: it.col, msg };
    let mut shape = None;
    let mut domain = None;
    let mut oracle_text = None;
    let mut relations = Vec::new();
    for it in &items {
        match it.key.as_str() {
            "shape" => {
                let k = crate::word::parse_shape(&it.value).map_err(|e| at(it, e.to_string()))?;
                shape = Some(k);
            }
            "domain" => domain = Some(load_automaton(&it.value, base).map_err(|e| at(it, e))?),
            "oracle" => {
                let v = it.value.trim();
                let inner = v
                    .strip_prefix('"')
                    .and_then(|s| s.strip_suffix('"'))
                    .ok_or_else(|| at(it, "oracle word must be quoted".into()))?;
                oracle_text = Some((inner.to_string(), it));
            }
            key if key.starts_with("relation") => {
                let decl = key["relation".len()..].trim();
                let (name, arity) = decl
                    .rsplit_once('/')
                    .ok_or_else(|| at(it, format!("expected `relation NAME/ARITY`, got {key:?}")))?;
                let arity: usize = arity
                    .trim()
                    .parse()
                    .map_err(|_| at(it, format!("bad arity {arity:?}")))?;
                let a = load_automaton(&it.value, base).map_err(|e| at(it, e))?;
                relations.push((name.trim().to_string(), arity, a, it));
            }
            other => return Err(at(it, format!("unknown key {other:?}"))),
        }
    }
    let missing = |key: &str| PresentationError::Syntax { line: 1, col: 1, msg: format!("missing `{key}`") };
    let shape = shape.ok_or_else(|| missing("shape"))?;
    let domain = domain.ok_or_else(|| missing("domain"))?;
    let oracle = match oracle_text {
        Some((t, it)) => Some(OrdinalWord::parse(&t, None, shape).map_err(|e| at(it, e.to_string()))?),
        None => None,
    };
    let mut p = Presentation::new(shape, domain, oracle)?;
    for (name, arity, a, it) in relations {
        p.add_relation(&name, arity, a).map_err(|e| at(it, e.to_string()))?;
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_generated_sources() {
        let src = "presentation {\n  shape: w^2; # comment\n  domain: gen:finite-words;\n  relation </2: gen:word-order\n}";
        let p = Presentation::parse(src, None).unwrap();
        assert_eq!(p.shape(), 2);
        assert_eq!(p.relation("<").unwrap().arity, 2);
        assert!(p.oracle().is_none());
        let x = OrdinalWord::parse("a@3", None, 2).unwrap();
        let y = OrdinalWord::parse("a@w", None, 2).unwrap();
        assert_eq!(p.holds("<", &[&x, &y]), Some(true));
        assert_eq!(p.holds("<", &[&y, &x]), Some(false));
    }

    #[test]
    fn reports_positions() {
        let src = "presentation {\n  shape: w^2;\n  domian: gen:finite-words\n}";
        match Presentation::parse(src, None) {
            Err(PresentationError::Syntax { line, col, .. }) => assert_eq!((line, col), (3, 3)),
            other => panic!("{other:?}"),
        }
        let src = "presentation { shape: w^2; domain: gen:finite-words; relation lt/3: gen:word-order }";
        assert!(Presentation::parse(src, None).is_err());
    }

    #[test]
    fn oracle_widens_the_inputs() {
        let dom = crate::automaton::text::parse_automaton(
            "automaton { states: q; alphabet: (a,_) (a,o) (_,o); initial: q; final: q;
              succ: q (_,_) q; q (a,_) q; q (a,o) q; q (_,o) q; rlimit: {q} q }",
        )
        .unwrap();
        let o = OrdinalWord::parse("o@0", None, 1).unwrap();
        let p = Presentation::new(1, dom, Some(o)).unwrap();
        assert_eq!(p.sigma().width(), 1);
        assert_eq!(p.oracle_width(), 1);
        assert!(p.in_domain(&OrdinalWord::parse("a@0, a@4", None, 1).unwrap()));
    }

    #[test]
    fn standard_set_is_consistent() {
        for (name, p) in standard_presentations() {
            assert!(!p.relations().is_empty(), "{name}");
        }
    }
}
