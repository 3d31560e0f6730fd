//! Finite-support words over the shape `w^k`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::ordinal::{Ordinal, ParseOrdinalError};

/// A non-blank atomic symbol.
pub type Symbol = Arc<str>;

/// A letter of a (possibly convolved) word: one component per track, `None`
/// standing for the blank. A letter whose components are all blank is the
/// blank of that width.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter(Arc<[Option<Symbol>]>);

impl Letter {
    pub fn single(s: &str) -> Self {
        Letter(Arc::from(vec![Some(Symbol::from(s))]))
    }

    pub fn blank(width: usize) -> Self {
        Letter(Arc::from(vec![None; width]))
    }

    pub fn tuple(parts: Vec<Option<Symbol>>) -> Self {
        Letter(Arc::from(parts))
    }

    pub fn width(&self) -> usize {
        self.0.len()
    }

    pub fn is_blank(&self) -> bool {
        self.0.iter().all(Option::is_none)
    }

    pub fn components(&self) -> &[Option<Symbol>] {
        &self.0
    }

    pub fn component(&self, i: usize) -> Option<&Symbol> {
        self.0[i].as_ref()
    }

    /// Concatenates the tracks of several letters.
    pub fn concat<'a, I: IntoIterator<Item = &'a Letter>>(parts: I) -> Letter {
        let v: Vec<Option<Symbol>> = parts
            .into_iter()
            .flat_map(|l| l.0.iter().cloned())
            .collect();
        Letter(Arc::from(v))
    }

    /// Keeps the listed tracks, in the listed order.
    pub fn select(&self, tracks: &[usize]) -> Letter {
        Letter(tracks.iter().map(|&i| self.0[i].clone()).collect())
    }

    /// Parses `a`, `_` or `(a,_,b)`.
    pub fn parse(s: &str) -> Result<Letter, WordError> {
        let s = s.trim();
        if let Some(inner) = s.strip_prefix('(').and_then(|r| r.strip_suffix(')')) {
            let parts = inner
                .split(',')
                .map(|p| parse_component(p.trim()))
                .collect::<Result<Vec<_>, _>>()?;
            if parts.is_empty() {
                return Err(WordError::Syntax(format!("empty letter tuple {s:?}")));
            }
            Ok(Letter(Arc::from(parts)))
        } else {
            Ok(Letter(Arc::from(vec![parse_component(s)?])))
        }
    }
}

fn parse_component(s: &str) -> Result<Option<Symbol>, WordError> {
    if s == "_" || s == "◇" {
        return Ok(None);
    }
    if s.is_empty() || s.chars().any(|c| "(),@;:{}[] \t\r\n".contains(c)) {
        return Err(WordError::Syntax(format!("invalid symbol {s:?}")));
    }
    Ok(Some(Symbol::from(s)))
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let comp = |c: &Option<Symbol>| c.as_deref().unwrap_or("_").to_string();
        if self.0.len() == 1 {
            f.write_str(&comp(&self.0[0]))
        } else {
            let parts: Vec<String> = self.0.iter().map(comp).collect();
            write!(f, "({})", parts.join(","))
        }
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Ordered list of non-blank letters of one width; the blank is implicit and
/// below every letter.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Alphabet {
    width: usize,
    letters: Vec<Letter>,
}

impl Alphabet {
    pub fn new(letters: Vec<Letter>) -> Result<Self, WordError> {
        let width = letters.first().map(Letter::width).unwrap_or(1);
        for (i, l) in letters.iter().enumerate() {
            if l.is_blank() {
                return Err(WordError::Syntax("the blank is not listed in an alphabet".into()));
            }
            if l.width() != width {
                return Err(WordError::WidthMismatch(width, l.width()));
            }
            if letters[..i].contains(l) {
                return Err(WordError::Syntax(format!("letter {l} listed twice")));
            }
        }
        Ok(Alphabet { width, letters })
    }

    /// An alphabet of the given width with no letters besides the blank.
    pub fn empty(width: usize) -> Self {
        Alphabet { width, letters: Vec::new() }
    }

    /// Single-track alphabet from symbol names.
    pub fn from_symbols(names: &[&str]) -> Self {
        Alphabet::new(names.iter().map(|n| Letter::single(n)).collect()).expect("distinct symbols")
    }

    /// All non-blank tuples over the given per-track alphabets.
    pub fn product(tracks: &[&Alphabet]) -> Self {
        let mut combos: Vec<Vec<Option<Symbol>>> = vec![Vec::new()];
        for a in tracks {
            let mut opts: Vec<Vec<Option<Symbol>>> = vec![vec![None; a.width]];
            opts.extend(a.letters.iter().map(|l| l.components().to_vec()));
            combos = combos
                .into_iter()
                .flat_map(|prefix| {
                    opts.iter().map(move |o| {
                        let mut p = prefix.clone();
                        p.extend(o.iter().cloned());
                        p
                    })
                })
                .collect();
        }
        let letters = combos
            .into_iter()
            .map(Letter::tuple)
            .filter(|l| !l.is_blank())
            .collect();
        Alphabet {
            width: tracks.iter().map(|a| a.width).sum(),
            letters,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn blank(&self) -> Letter {
        Letter::blank(self.width)
    }

    /// Position in the letter order: 0 for the blank, `i + 1` for letters.
    pub fn rank(&self, l: &Letter) -> Option<usize> {
        if l.width() == self.width && l.is_blank() {
            return Some(0);
        }
        self.letters.iter().position(|x| x == l).map(|i| i + 1)
    }

    pub fn contains(&self, l: &Letter) -> bool {
        self.rank(l).is_some()
    }

    pub fn cmp_letters(&self, a: &Letter, b: &Letter) -> Ordering {
        match (self.rank(a), self.rank(b)) {
            (Some(x), Some(y)) => x.cmp(&y),
            _ => a.cmp(b),
        }
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.letters.iter().map(|l| l.to_string()).collect();
        f.write_str(&parts.join(" "))
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("word syntax error: {0}")]
    Syntax(String),
    #[error(transparent)]
    Ordinal(#[from] ParseOrdinalError),
    #[error("duplicate position {0}")]
    DuplicatePosition(String),
    #[error("position {pos} out of shape w^{k}")]
    OutOfShape { pos: String, k: u32 },
    #[error("unknown letter {0}")]
    UnknownLetter(String),
    #[error("letter width mismatch: expected {0}, found {1}")]
    WidthMismatch(usize, usize),
    #[error("shape mismatch: w^{0} vs w^{1}")]
    ShapeMismatch(u32, u32),
}

/// A word over the shape `w^k` with finite support, stored as its sorted
/// non-blank entries.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct OrdinalWord {
    shape: u32,
    width: usize,
    entries: Vec<(Ordinal, Letter)>,
}

/// Reads a shape written `w^k`, `w`, or plain `k`, returning `k`.
pub fn parse_shape(s: &str) -> Result<u32, WordError> {
    let t = s.trim();
    let bad = || WordError::Syntax(format!("bad shape {t:?}, expected w^k"));
    let exp = if t == "w" || t == "ω" {
        "1"
    } else if let Some(e) = t.strip_prefix("w^").or_else(|| t.strip_prefix("ω^")) {
        e
    } else {
        t
    };
    exp.trim().parse().map_err(|_| bad())
}

/// The shape `w^k` as an ordinal.
pub fn shape_ordinal(k: u32) -> Ordinal {
    Ordinal::omega_pow(Ordinal::nat(k as u64))
}

impl OrdinalWord {
    pub fn empty(shape: u32, width: usize) -> Self {
        OrdinalWord {
            shape,
            width,
            entries: Vec::new(),
        }
    }

    /// Builds a word from unsorted entries. Blank entries are dropped.
    pub fn new(
        shape: u32,
        width: usize,
        entries: impl IntoIterator<Item = (Ordinal, Letter)>,
    ) -> Result<Self, WordError> {
        let bound = shape_ordinal(shape);
        let mut map = BTreeMap::new();
        for (p, l) in entries {
            if l.width() != width {
                return Err(WordError::WidthMismatch(width, l.width()));
            }
            if p >= bound {
                return Err(WordError::OutOfShape {
                    pos: p.to_string(),
                    k: shape,
                });
            }
            if map.contains_key(&p) {
                return Err(WordError::DuplicatePosition(p.to_string()));
            }
            map.insert(p, l);
        }
        Ok(OrdinalWord {
            shape,
            width,
            entries: map.into_iter().filter(|(_, l)| !l.is_blank()).collect(),
        })
    }

    /// Single-track word with one symbol at each listed position.
    pub fn from_positions(shape: u32, sym: &str, positions: &[Ordinal]) -> Self {
        let l = Letter::single(sym);
        OrdinalWord::new(shape, 1, positions.iter().map(|p| (p.clone(), l.clone())))
            .expect("valid positions")
    }

    /// Parses `letter@ordinal, ...`; the empty literal is the blank word.
    pub fn parse(text: &str, alphabet: Option<&Alphabet>, shape: u32) -> Result<Self, WordError> {
        let width = alphabet.map(Alphabet::width);
        let mut entries = Vec::new();
        for item in split_top_level(text) {
            let item = item.trim();
            if item.is_empty() {
                continue;
            }
            let (l, p) = item
                .rsplit_once('@')
                .ok_or_else(|| WordError::Syntax(format!("expected letter@position, found {item:?}")))?;
            let letter = Letter::parse(l)?;
            if letter.is_blank() {
                return Err(WordError::Syntax(format!("blank letter in entry {item:?}")));
            }
            if let Some(a) = alphabet {
                if !a.contains(&letter) {
                    return Err(WordError::UnknownLetter(letter.to_string()));
                }
            }
            let pos: Ordinal = p.trim().parse()?;
            entries.push((pos, letter));
        }
        let width = width
            .or_else(|| entries.first().map(|(_, l)| l.width()))
            .unwrap_or(1);
        OrdinalWord::new(shape, width, entries)
    }

    pub fn shape(&self) -> u32 {
        self.shape
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn entries(&self) -> &[(Ordinal, Letter)] {
        &self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn support(&self) -> impl Iterator<Item = &Ordinal> {
        self.entries.iter().map(|(p, _)| p)
    }

    pub fn max_support(&self) -> Option<&Ordinal> {
        self.entries.last().map(|(p, _)| p)
    }

    pub fn get(&self, pos: &Ordinal) -> Letter {
        match self.entries.binary_search_by(|(p, _)| p.cmp(pos)) {
            Ok(i) => self.entries[i].1.clone(),
            Err(_) => Letter::blank(self.width),
        }
    }

    /// Entries with positions in `[lo, hi)`, in order.
    pub fn entries_in(&self, lo: &Ordinal, hi: &Ordinal) -> &[(Ordinal, Letter)] {
        let a = self.entries.partition_point(|(p, _)| p < lo);
        let b = self.entries.partition_point(|(p, _)| p < hi);
        &self.entries[a..b.max(a)]
    }

    /// Keeps the listed tracks; entries that become blank disappear.
    pub fn select_tracks(&self, tracks: &[usize]) -> OrdinalWord {
        OrdinalWord {
            shape: self.shape,
            width: tracks.len(),
            entries: self
                .entries
                .iter()
                .map(|(p, l)| (p.clone(), l.select(tracks)))
                .filter(|(_, l)| !l.is_blank())
                .collect(),
        }
    }

    /// Drops track `i` (projection).
    pub fn project(&self, i: usize) -> OrdinalWord {
        let keep: Vec<usize> = (0..self.width).filter(|&t| t != i).collect();
        self.select_tracks(&keep)
    }

    /// Same entries, read over a different shape.
    pub fn with_shape(&self, shape: u32) -> Result<OrdinalWord, WordError> {
        OrdinalWord::new(shape, self.width, self.entries.iter().cloned())
    }

    pub fn gap_profile(&self) -> GapProfile {
        let end = shape_ordinal(self.shape);
        let Some((first, _)) = self.entries.first() else {
            return GapProfile {
                leading_gap: end,
                items: Vec::new(),
            };
        };
        let items = self
            .entries
            .iter()
            .enumerate()
            .map(|(i, (p, l))| {
                let next = self.entries.get(i + 1).map(|(q, _)| q).unwrap_or(&end);
                let gap = p.succ().left_sub(next).expect("positions increase");
                (l.clone(), gap)
            })
            .collect();
        GapProfile {
            leading_gap: first.clone(),
            items,
        }
    }
}

impl fmt::Display for OrdinalWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .entries
            .iter()
            .map(|(p, l)| format!("{l}@{p}"))
            .collect();
        f.write_str(&parts.join(", "))
    }
}

impl fmt::Debug for OrdinalWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "OrdinalWord(w^{}: {{{self}}})", self.shape)
    }
}

fn split_top_level(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

/// Position-wise pairing of words of one shape.
pub fn convolve(ws: &[&OrdinalWord]) -> Result<OrdinalWord, WordError> {
    let shape = ws.first().map(|w| w.shape).unwrap_or(0);
    if let Some(w) = ws.iter().find(|w| w.shape != shape) {
        return Err(WordError::ShapeMismatch(shape, w.shape));
    }
    let positions: std::collections::BTreeSet<&Ordinal> =
        ws.iter().flat_map(|w| w.support()).collect();
    let width = ws.iter().map(|w| w.width).sum();
    let entries = positions
        .into_iter()
        .map(|p| {
            let parts: Vec<Letter> = ws.iter().map(|w| w.get(p)).collect();
            (p.clone(), Letter::concat(parts.iter()))
        })
        .collect();
    Ok(OrdinalWord {
        shape,
        width,
        entries,
    })
}

/// A finite word factored as `leading_gap, (letter, gap)*`; the last gap is
/// the trailing stretch up to `w^k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GapProfile {
    pub leading_gap: Ordinal,
    pub items: Vec<(Letter, Ordinal)>,
}

impl GapProfile {
    /// Recovers the entry positions by ordinal addition.
    pub fn positions(&self) -> Vec<Ordinal> {
        let mut out = Vec::with_capacity(self.items.len());
        let mut pos = self.leading_gap.clone();
        for (_, gap) in &self.items {
            out.push(pos.clone());
            pos = pos.succ().add(gap);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ordinal::ord;

    fn w(s: &str, k: u32) -> OrdinalWord {
        OrdinalWord::parse(s, None, k).unwrap()
    }

    #[test]
    fn parse_and_format() {
        let x = w("b@w, a@0", 2);
        assert_eq!(x.entries()[0], (ord("0"), Letter::single("a")));
        assert_eq!(x.entries()[1], (ord("w"), Letter::single("b")));
        assert_eq!(x.to_string(), "a@0, b@w");
        assert!(w("", 2).is_empty());
        assert_eq!(w("(a,_)@w^(1)+1", 2).to_string(), "(a,_)@w+1");
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            OrdinalWord::parse("a@w^2", None, 2),
            Err(WordError::OutOfShape { .. })
        ));
        assert!(matches!(
            OrdinalWord::parse("a@1, b@1", None, 2),
            Err(WordError::DuplicatePosition(_))
        ));
        let ab = Alphabet::from_symbols(&["a"]);
        assert!(matches!(
            OrdinalWord::parse("c@1", Some(&ab), 2),
            Err(WordError::UnknownLetter(_))
        ));
        assert!(OrdinalWord::parse("a@", None, 2).is_err());
    }

    #[test]
    fn convolution_examples() {
        let c = convolve(&[&w("a@0", 2), &w("b@w", 2)]).unwrap();
        assert_eq!(c.to_string(), "(a,_)@0, (_,b)@w");
        let e = convolve(&[&w("", 2), &w("", 2)]).unwrap();
        assert!(e.is_empty());
        assert_eq!(e.width(), 2);
        let c = convolve(&[&w("a@1", 1), &w("b@1", 1)]).unwrap();
        assert_eq!(c.to_string(), "(a,b)@1");
        assert!(convolve(&[&w("a@1", 1), &w("b@1", 2)]).is_err());
        assert_eq!(c.project(0).to_string(), "b@1");
    }

    #[test]
    fn gap_profile_examples() {
        let g = w("a@0, b@w^2+w", 3).gap_profile();
        assert_eq!(g.leading_gap, ord("0"));
        assert_eq!(g.items[0].1, ord("w^2+w"));
        assert_eq!(g.items[1].1, ord("w^3"));
        let g = w("", 1).gap_profile();
        assert_eq!(g.leading_gap, ord("w"));
        assert!(g.items.is_empty());
        let g = w("a@3", 1).gap_profile();
        assert_eq!((g.leading_gap.clone(), g.items[0].1.clone()), (ord("3"), ord("w")));
    }

    #[test]
    fn alphabet_order_and_product() {
        let ab = Alphabet::from_symbols(&["b", "a"]);
        assert_eq!(ab.rank(&Letter::blank(1)), Some(0));
        assert_eq!(ab.cmp_letters(&Letter::single("b"), &Letter::single("a")), Ordering::Less);
        let p = Alphabet::product(&[&ab, &Alphabet::from_symbols(&["c"])]);
        assert_eq!(p.letters().len(), 5);
        assert_eq!(p.width(), 2);
    }
}
