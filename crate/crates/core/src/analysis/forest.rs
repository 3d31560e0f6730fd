//! Ranks of finite forests given by a partial order with roots on top.

use std::fmt::Write as _;

use super::AnalysisError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ForestRanks {
    /// `rank(a) = max { rank(b) + 1 : b < a }`, 0 for minimal nodes.
    pub ranks: Vec<u64>,
    /// `max (rank(a) + 1)`, 0 for the empty forest.
    pub total: u64,
}

/// Every node of a finite forest has infinite-rank 0: the clauses asking for
/// infinitely many predecessors never apply.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InfRank {
    pub ranks: Vec<u64>,
    pub total: u64,
    pub vacuous_clauses: usize,
}

/// Ranks by a depth-first pass over the strict order; fails on cycles or on
/// distinct nodes that are mutually below each other.
pub fn finite_forest_rank<T>(nodes: &[T], leq: impl Fn(&T, &T) -> bool) -> Result<ForestRanks, AnalysisError> {
    let n = nodes.len();
    let below: Vec<Vec<usize>> = (0..n)
        .map(|a| (0..n).filter(|&b| b != a && leq(&nodes[b], &nodes[a])).collect())
        .collect();
    for a in 0..n {
        if let Some(&b) = below[a].iter().find(|&&b| below[b].contains(&a)) {
            return Err(AnalysisError::Cycle(a.min(b), a.max(b)));
        }
    }
    // 0 = unvisited, 1 = on stack, 2 = done
    let mut state = vec![0u8; n];
    let mut ranks = vec![0u64; n];
    for start in 0..n {
        if state[start] != 0 {
            continue;
        }
        let mut stack = vec![(start, 0usize)];
        state[start] = 1;
        while let Some(&mut (a, ref mut next)) = stack.last_mut() {
            if let Some(&b) = below[a].get(*next) {
                *next += 1;
                match state[b] {
                    0 => {
                        state[b] = 1;
                        stack.push((b, 0));
                    }
                    1 => return Err(AnalysisError::Cycle(a.min(b), a.max(b))),
                    _ => {}
                }
            } else {
                ranks[a] = below[a].iter().map(|&b| ranks[b] + 1).max().unwrap_or(0);
                state[a] = 2;
                stack.pop();
            }
        }
    }
    let total = ranks.iter().map(|r| r + 1).max().unwrap_or(0);
    Ok(ForestRanks { ranks, total })
}

pub fn inf_rank<T>(nodes: &[T], leq: impl Fn(&T, &T) -> bool) -> Result<InfRank, AnalysisError> {
    let r = finite_forest_rank(nodes, leq)?;
    Ok(InfRank {
        ranks: vec![0; nodes.len()],
        total: 0,
        vacuous_clauses: r.ranks.len(),
    })
}

impl ForestRanks {
    /// `rank < w * (inf_rank + 1)`; with finite ranks and inf_rank 0 this
    /// is finiteness.
    pub fn within_inf_bound(&self, inf: &InfRank) -> bool {
        self.ranks.len() == inf.ranks.len() && inf.ranks.iter().all(|&r| r == 0)
    }

    pub fn report(&self, names: &[String]) -> String {
        let mut s = String::new();
        for (name, r) in names.iter().zip(&self.ranks) {
            let _ = writeln!(s, "rank {name}: {r}");
        }
        let _ = writeln!(s, "total: {}", self.total);
        s
    }
}

/// A forest file: `node <name>` and `edge <child> <parent>` lines, `#`
/// comments. The order is the reflexive-transitive closure of the edges.
pub fn parse_forest(src: &str) -> Result<(Vec<String>, Vec<Vec<bool>>), AnalysisError> {
    let mut names: Vec<String> = Vec::new();
    let mut edges = Vec::new();
    for (i, raw) in src.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let bad = |msg: &str| AnalysisError::Input(format!("line {}: {msg}", i + 1));
        let parts: Vec<&str> = line.split_whitespace().collect();
        match parts.as_slice() {
            ["node", name] => {
                if names.iter().any(|n| n == name) {
                    return Err(bad(&format!("duplicate node {name}")));
                }
                names.push(name.to_string());
            }
            ["edge", child, parent] => edges.push((i + 1, child.to_string(), parent.to_string())),
            _ => return Err(bad("expected `node <name>` or `edge <child> <parent>`")),
        }
    }
    let n = names.len();
    let idx = |name: &str, line: usize| {
        names
            .iter()
            .position(|x| x == name)
            .ok_or_else(|| AnalysisError::Input(format!("line {line}: unknown node {name}")))
    };
    let mut leq = vec![vec![false; n]; n];
    for (a, row) in leq.iter_mut().enumerate() {
        row[a] = true;
    }
    for (line, c, p) in &edges {
        let (c, p) = (idx(c, *line)?, idx(p, *line)?);
        leq[c][p] = true;
    }
    #[allow(clippy::needless_range_loop)]
    for k in 0..n {
        for a in 0..n {
            if leq[a][k] {
                for b in 0..n {
                    if leq[k][b] {
                        leq[a][b] = true;
                    }
                }
            }
        }
    }
    Ok((names, leq))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{T0Node, TcNode};

    #[test]
    fn chain() {
        let r = finite_forest_rank(&[0, 1, 2], |a, b| a <= b).unwrap();
        assert_eq!(r.ranks, vec![0, 1, 2]);
        assert_eq!(r.total, 3);
    }

    #[test]
    fn cycles_are_rejected() {
        let nodes = [0usize, 1, 2];
        let leq = |a: &usize, b: &usize| a == b || (b + 3 - a) % 3 == 1;
        assert!(matches!(finite_forest_rank(&nodes, leq), Err(AnalysisError::Cycle(..))));
    }

    #[test]
    fn base_tree_ranks() {
        for max_m in 0..=6 {
            let nodes = T0Node::truncation(max_m);
            let r = finite_forest_rank(&nodes, |a, b| a.leq(*b)).unwrap();
            for (node, rank) in nodes.iter().zip(&r.ranks) {
                match node {
                    T0Node::Pair(n, _) => assert_eq!(rank, n),
                    T0Node::Root => assert_eq!(*rank, max_m + 1),
                }
            }
            let inf = inf_rank(&nodes, |a, b| a.leq(*b)).unwrap();
            assert!(r.within_inf_bound(&inf));
        }
    }

    #[test]
    fn stacked_tree_scales() {
        let max_m = 3;
        let base = finite_forest_rank(&T0Node::truncation(max_m), |a, b| a.leq(*b)).unwrap();
        for c in 1..=3 {
            let nodes = TcNode::truncation(c, max_m);
            let r = finite_forest_rank(&nodes, |a, b| a.leq(b)).unwrap();
            assert_eq!(r.total, c as u64 * base.total);
        }
    }

    #[test]
    fn forest_file() {
        let (names, leq) = parse_forest("node r\nnode a # leaf\nnode b\nedge a b\nedge b r\n").unwrap();
        let idx: Vec<usize> = (0..names.len()).collect();
        let r = finite_forest_rank(&idx, |a, b| leq[*a][*b]).unwrap();
        assert_eq!(r.ranks, vec![2, 0, 1]);
        assert!(parse_forest("node a\nedge a z\n").is_err());
        assert!(parse_forest("vertex a\n").is_err());
    }
}
