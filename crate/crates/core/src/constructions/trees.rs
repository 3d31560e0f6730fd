//! Trees presented by finite words, with the root as the maximum.
//!
//! `x ≤ y` means `y` is an ancestor of `x` (or equal), so every node has
//! finitely many ancestors and ranks grow towards the root.

use std::fmt;

use thiserror::Error;

use crate::ordinal::Ordinal;
use crate::word::{convolve, Letter, OrdinalWord};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TreeError {
    #[error("invalid tree parameter: {0}")]
    Parameter(String),
    #[error("{0} is not a node of {1}")]
    NotANode(String, String),
}

/// A node of the base tree: the root or `(n, m)` with `n ≤ m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum T0Node {
    Root,
    Pair(u64, u64),
}

impl T0Node {
    pub fn is_leaf(self) -> bool {
        matches!(self, T0Node::Pair(0, _))
    }

    /// `(n,m) ≤ (n',m)` for `n ≤ n'`, and every node is below the root.
    pub fn leq(self, other: T0Node) -> bool {
        match (self, other) {
            (_, T0Node::Root) => true,
            (T0Node::Pair(n, m), T0Node::Pair(n2, m2)) => m == m2 && n <= n2,
            (T0Node::Root, T0Node::Pair(..)) => false,
        }
    }

    /// Rank in the full tree: `n` for `(n, m)`; the root has rank `w`.
    pub fn rank(self) -> Ordinal {
        match self {
            T0Node::Root => Ordinal::omega(),
            T0Node::Pair(n, _) => Ordinal::nat(n),
        }
    }

    /// `(n,m)` with `n < m` is `a@n, b@m`; `(m,m)` is `c@m`; the root is `e@0`.
    pub fn encode(self) -> OrdinalWord {
        let entries = match self {
            T0Node::Root => vec![(0, "e")],
            T0Node::Pair(n, m) if n == m => vec![(m, "c")],
            T0Node::Pair(n, m) => vec![(n, "a"), (m, "b")],
        };
        OrdinalWord::new(
            1,
            1,
            entries.into_iter().map(|(p, s)| (Ordinal::nat(p), Letter::single(s))),
        )
        .expect("positions below w")
    }

    pub fn decode(w: &OrdinalWord) -> Option<T0Node> {
        if w.shape() != 1 || w.width() != 1 {
            return None;
        }
        let sym = |i: usize| w.entries()[i].1.component(0).map(|s| s.to_string());
        let pos = |i: usize| w.entries()[i].0.as_nat();
        match w.entries().len() {
            1 => match (sym(0)?.as_str(), pos(0)?) {
                ("e", 0) => Some(T0Node::Root),
                ("c", m) => Some(T0Node::Pair(m, m)),
                _ => None,
            },
            2 => {
                if sym(0)?.as_str() == "a" && sym(1)?.as_str() == "b" {
                    Some(T0Node::Pair(pos(0)?, pos(1)?))
                } else {
                    None
                }
            }
            _ => None,
        }
    }

    /// The root and all `(n, m)` with `m ≤ max_m`.
    pub fn truncation(max_m: u64) -> Vec<T0Node> {
        let mut v = vec![T0Node::Root];
        for m in 0..=max_m {
            for n in 0..=m {
                v.push(T0Node::Pair(n, m));
            }
        }
        v
    }
}

impl fmt::Display for T0Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            T0Node::Root => f.write_str("root"),
            T0Node::Pair(n, m) => write!(f, "({n},{m})"),
        }
    }
}

/// A node of the tree obtained by hanging copies of the base tree below its
/// leaves `c - 1` times: a sequence of base leaves followed by a base node.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TcNode {
    pub leaves: Vec<T0Node>,
    pub top: T0Node,
}

impl TcNode {
    pub fn depth(&self) -> usize {
        self.leaves.len()
    }

    /// `x ≤ y` iff they share the leaf prefix and compare at the same depth,
    /// or `x` is deeper, agrees with `y` on `y`'s leaves, and its next leaf
    /// is below `y`'s top node.
    pub fn leq(&self, other: &TcNode) -> bool {
        let (i, j) = (self.depth(), other.depth());
        if i == j {
            self.leaves == other.leaves && self.top.leq(other.top)
        } else if i > j {
            self.leaves[..j] == other.leaves[..] && self.leaves[j].leq(other.top)
        } else {
            false
        }
    }

    /// Width-`c` convolution: track `r < depth` holds leaf `r`, track
    /// `depth` the top node, later tracks are blank.
    pub fn encode(&self, c: usize) -> OrdinalWord {
        let blank = OrdinalWord::empty(1, 1);
        let mut tracks: Vec<OrdinalWord> = self.leaves.iter().map(|l| l.encode()).collect();
        tracks.push(self.top.encode());
        while tracks.len() < c {
            tracks.push(blank.clone());
        }
        let refs: Vec<&OrdinalWord> = tracks.iter().collect();
        convolve(&refs).expect("tracks share the shape")
    }

    pub fn decode(w: &OrdinalWord, c: usize) -> Option<TcNode> {
        if w.width() != c || c == 0 {
            return None;
        }
        let tracks: Vec<OrdinalWord> = (0..c).map(|i| w.select_tracks(&[i])).collect();
        let depth = tracks.iter().position(|t| t.is_empty()).unwrap_or(c);
        if depth == 0 || tracks[depth..].iter().any(|t| !t.is_empty()) {
            return None;
        }
        let nodes: Vec<T0Node> = tracks[..depth].iter().map(T0Node::decode).collect::<Option<_>>()?;
        let (top, leaves) = nodes.split_last()?;
        if !leaves.iter().all(|l| l.is_leaf()) {
            return None;
        }
        Some(TcNode {
            leaves: leaves.to_vec(),
            top: *top,
        })
    }

    /// All nodes of depth `< c` built from the base truncation at `max_m`.
    pub fn truncation(c: usize, max_m: u64) -> Vec<TcNode> {
        let base = T0Node::truncation(max_m);
        let leaves: Vec<T0Node> = base.iter().copied().filter(|t| t.is_leaf()).collect();
        let mut prefixes: Vec<Vec<T0Node>> = vec![Vec::new()];
        let mut out = Vec::new();
        for _ in 0..c {
            for p in &prefixes {
                for &t in &base {
                    out.push(TcNode {
                        leaves: p.clone(),
                        top: t,
                    });
                }
            }
            prefixes = prefixes
                .iter()
                .flat_map(|p| {
                    leaves.iter().map(move |&l| {
                        let mut q = p.clone();
                        q.push(l);
                        q
                    })
                })
                .collect();
        }
        out
    }
}

impl fmt::Display for TcNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.leaves {
            write!(f, "{l}.")?;
        }
        write!(f, "{}", self.top)
    }
}

/// Marker symbol closing a forest element.
pub const FOREST_MARK: &str = "bot";

/// Forest element: a node of the `c`-fold tree, written over `w^2` as the
/// concatenation of its leaves and top node (one `w`-block each) with the
/// marker at `w*c`.
pub fn forest_encode(c: usize, node: &TcNode) -> Result<OrdinalWord, TreeError> {
    if node.depth() >= c {
        return Err(TreeError::Parameter(format!(
            "depth {} node in the {c}-fold tree",
            node.depth()
        )));
    }
    let mut entries = Vec::new();
    for (b, t) in node.leaves.iter().chain([&node.top]).enumerate() {
        let shift = Ordinal::monomial(1, b as u64);
        for (p, l) in t.encode().entries() {
            entries.push((shift.add(p), l.clone()));
        }
    }
    entries.push((Ordinal::monomial(1, c as u64), Letter::single(FOREST_MARK)));
    Ok(OrdinalWord::new(2, 1, entries).expect("positions below w^2"))
}

pub fn forest_decode(w: &OrdinalWord) -> Option<(usize, TcNode)> {
    if w.shape() != 2 || w.width() != 1 {
        return None;
    }
    let marks: Vec<&Ordinal> = w
        .entries()
        .iter()
        .filter(|(_, l)| l.component(0).map(|s| &**s) == Some(FOREST_MARK))
        .map(|(p, _)| p)
        .collect();
    let [mark] = marks[..] else { return None };
    if !mark.is_limit() || mark.terms().len() != 1 || mark.degree() != Ordinal::one() {
        return None;
    }
    let c = mark.leading_coeff() as usize;
    let mut blocks: Vec<Vec<(Ordinal, Letter)>> = vec![Vec::new(); c];
    for (p, l) in w.entries() {
        if p == mark {
            continue;
        }
        let b = p.coeff_at(1) as usize;
        if b >= c || p.degree() > Ordinal::one() {
            return None;
        }
        blocks[b].push((Ordinal::nat(p.coeff_at(0)), l.clone()));
    }
    let used = blocks.iter().position(Vec::is_empty).unwrap_or(c);
    let depth = used.checked_sub(1)?;
    if blocks[used..].iter().any(|b| !b.is_empty()) {
        return None;
    }
    let nodes: Vec<T0Node> = blocks[..=depth]
        .iter()
        .map(|b| T0Node::decode(&OrdinalWord::new(1, 1, b.clone()).ok()?))
        .collect::<Option<_>>()?;
    let (top, leaves) = nodes.split_last()?;
    if !leaves.iter().all(|l| l.is_leaf()) {
        return None;
    }
    Some((
        c,
        TcNode {
            leaves: leaves.to_vec(),
            top: *top,
        },
    ))
}

/// Words over `{◇, 1}` and shape `w^k` in which every `1` is preceded by
/// `1`s back to the start of its `w`-block.
pub fn suffix_member(w: &OrdinalWord) -> bool {
    let one = Letter::single("1");
    if w.width() != 1 || w.entries().iter().any(|(_, l)| l != &one) {
        return false;
    }
    w.entries().iter().all(|(p, _)| {
        let r = p.coeff_at(0);
        let (head, _) = p.split_at_exponent(&Ordinal::one());
        (0..r).all(|i| w.get(&head.add(&Ordinal::nat(i))) == one)
    })
}

/// `w1 ≤ w2` iff `w1` agrees with `w2` from the least position of `w2` on.
pub fn suffix_leq(w1: &OrdinalWord, w2: &OrdinalWord) -> bool {
    match w2.entries().first() {
        None => true,
        Some((start, _)) => {
            let end = crate::word::shape_ordinal(w1.shape());
            w1.entries_in(start, &end) == w2.entries()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TreeKind {
    /// The base tree over `w`.
    T0,
    /// `c`-fold leaf extension of the base tree, as width-`c` words over `w`.
    Tc(usize),
    /// Disjoint union of all `c`-fold trees over `w^2`.
    ForestTc,
    /// Suffix tree on block-closed words over `w^k`.
    SuffixD(u32),
}

/// A presented tree with membership and order deciders.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TreeHandle {
    pub kind: TreeKind,
}

impl TreeHandle {
    pub fn new(kind: TreeKind) -> Result<Self, TreeError> {
        match kind {
            TreeKind::Tc(0) => Err(TreeError::Parameter("c must be at least 1".into())),
            TreeKind::SuffixD(0) => Err(TreeError::Parameter("k must be at least 1".into())),
            _ => Ok(TreeHandle { kind }),
        }
    }

    pub fn shape(&self) -> u32 {
        match self.kind {
            TreeKind::T0 | TreeKind::Tc(_) => 1,
            TreeKind::ForestTc => 2,
            TreeKind::SuffixD(k) => k,
        }
    }

    pub fn width(&self) -> usize {
        match self.kind {
            TreeKind::Tc(c) => c,
            _ => 1,
        }
    }

    pub fn name(&self) -> String {
        match self.kind {
            TreeKind::T0 => "T0".into(),
            TreeKind::Tc(c) => format!("T{c}"),
            TreeKind::ForestTc => "forest".into(),
            TreeKind::SuffixD(k) => format!("D(w^{k})"),
        }
    }

    pub fn member(&self, w: &OrdinalWord) -> bool {
        if w.shape() != self.shape() {
            return false;
        }
        match self.kind {
            TreeKind::T0 => T0Node::decode(w).is_some(),
            TreeKind::Tc(c) => TcNode::decode(w, c).is_some(),
            TreeKind::ForestTc => forest_decode(w).is_some(),
            TreeKind::SuffixD(_) => suffix_member(w),
        }
    }

    /// Order decider; fails on words that are not nodes.
    pub fn leq(&self, x: &OrdinalWord, y: &OrdinalWord) -> Result<bool, TreeError> {
        let not = |w: &OrdinalWord| TreeError::NotANode(w.to_string(), self.name());
        match self.kind {
            TreeKind::T0 => {
                let a = T0Node::decode(x).ok_or_else(|| not(x))?;
                let b = T0Node::decode(y).ok_or_else(|| not(y))?;
                Ok(a.leq(b))
            }
            TreeKind::Tc(c) => {
                let a = TcNode::decode(x, c).ok_or_else(|| not(x))?;
                let b = TcNode::decode(y, c).ok_or_else(|| not(y))?;
                Ok(a.leq(&b))
            }
            TreeKind::ForestTc => {
                let (c1, a) = forest_decode(x).ok_or_else(|| not(x))?;
                let (c2, b) = forest_decode(y).ok_or_else(|| not(y))?;
                Ok(c1 == c2 && a.leq(&b))
            }
            TreeKind::SuffixD(_) => {
                if !self.member(x) {
                    return Err(not(x));
                }
                if !self.member(y) {
                    return Err(not(y));
                }
                Ok(suffix_leq(x, y))
            }
        }
    }

    /// Nodes of a finite truncation. For the base and `c`-fold trees the
    /// bound caps `m`; for the forest it also caps `c`; for the suffix tree
    /// it caps every Cantor-normal-form coefficient of a position.
    pub fn enumerate(&self, bound: u64) -> Vec<OrdinalWord> {
        match self.kind {
            TreeKind::T0 => T0Node::truncation(bound).into_iter().map(T0Node::encode).collect(),
            TreeKind::Tc(c) => TcNode::truncation(c, bound)
                .iter()
                .map(|t| t.encode(c))
                .collect(),
            TreeKind::ForestTc => (1..=bound.max(1) as usize)
                .flat_map(|c| {
                    TcNode::truncation(c, bound)
                        .into_iter()
                        .map(move |t| forest_encode(c, &t).expect("depth below c"))
                })
                .collect(),
            TreeKind::SuffixD(k) => {
                let positions = grid(k, bound);
                let mut out = Vec::new();
                for mask in 0u64..(1 << positions.len()) {
                    let entries = positions
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| mask >> i & 1 == 1)
                        .map(|(_, p)| (p.clone(), Letter::single("1")));
                    let w = OrdinalWord::new(k, 1, entries).expect("positions below the shape");
                    if suffix_member(&w) {
                        out.push(w);
                    }
                }
                out
            }
        }
    }
}

/// Positions below `w^k` whose coefficients are all below `bound`.
fn grid(k: u32, bound: u64) -> Vec<Ordinal> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|p: Vec<u64>| {
                (0..bound).map(move |c| {
                    let mut q = p.clone();
                    q.push(c);
                    q
                })
            })
            .collect();
    }
    let mut v: Vec<Ordinal> = out.iter().map(|c| Ordinal::from_finite_coeffs(c)).collect();
    v.sort();
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn base_tree_examples() {
        let (a, b, c) = (T0Node::Pair(2, 5), T0Node::Pair(4, 5), T0Node::Pair(1, 6));
        assert!(a.leq(b));
        assert!(!a.leq(c) && !c.leq(a));
        assert!(a.leq(T0Node::Root));
        for t in T0Node::truncation(4) {
            assert_eq!(T0Node::decode(&t.encode()), Some(t));
        }
    }

    #[test]
    fn c_fold_round_trip_and_order() {
        let nodes = TcNode::truncation(2, 2);
        for t in &nodes {
            assert_eq!(TcNode::decode(&t.encode(2), 2).as_ref(), Some(t));
        }
        let leaf = T0Node::Pair(0, 1);
        let deep = TcNode {
            leaves: vec![leaf],
            top: T0Node::Root,
        };
        let up = TcNode {
            leaves: vec![],
            top: T0Node::Pair(1, 1),
        };
        assert!(deep.leq(&up));
        assert!(!up.leq(&deep));
        let other = TcNode {
            leaves: vec![],
            top: T0Node::Pair(3, 3),
        };
        assert!(!deep.leq(&other));
    }

    #[test]
    fn forest_round_trip() {
        for c in 1..=3 {
            for t in TcNode::truncation(c, 2) {
                let w = forest_encode(c, &t).unwrap();
                assert_eq!(forest_decode(&w), Some((c, t)));
            }
        }
    }

    #[test]
    fn suffix_tree_depth_one() {
        let d = TreeHandle::new(TreeKind::SuffixD(1)).unwrap();
        let nodes = d.enumerate(4);
        assert_eq!(nodes.len(), 5);
        let root = OrdinalWord::empty(1, 1);
        for x in &nodes {
            assert!(d.leq(x, &root).unwrap());
            for y in &nodes {
                if x != y && !y.is_empty() {
                    assert!(!d.leq(x, y).unwrap());
                }
            }
        }
        let bad = OrdinalWord::parse("1@1", None, 1).unwrap();
        assert!(!d.member(&bad));
    }

    #[test]
    fn suffix_tree_over_w2() {
        let d = TreeHandle::new(TreeKind::SuffixD(2)).unwrap();
        let w = OrdinalWord::parse("1@0, 1@w, 1@w+1", None, 2).unwrap();
        let v = OrdinalWord::parse("1@w, 1@w+1", None, 2).unwrap();
        assert!(d.member(&w) && d.member(&v));
        assert!(d.leq(&w, &v).unwrap());
        assert!(!d.leq(&v, &w).unwrap());
    }
}
