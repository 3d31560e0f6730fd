use std::cmp::Ordering;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("the sibling order does not compare {0} and {1}")]
pub struct KbError(pub String, pub String);

/// Kleene–Brouwer comparison of two nodes of a root-maximal forest.
///
/// `ancestors(x)` lists `x` and its ancestors from `x` upwards. A node comes
/// before its ancestors; otherwise the two nodes are ordered like their
/// ancestors that are siblings (same set of strict ancestors), using
/// `sibling_cmp`.
pub fn kb_cmp<T, A, S>(x: &T, y: &T, ancestors: A, sibling_cmp: S) -> Result<Ordering, KbError>
where
    T: PartialEq + std::fmt::Debug,
    A: Fn(&T) -> Vec<T>,
    S: Fn(&T, &T) -> Ordering,
{
    if x == y {
        return Ok(Ordering::Equal);
    }
    let ax = ancestors(x);
    let ay = ancestors(y);
    if ax.contains(y) {
        return Ok(Ordering::Less);
    }
    if ay.contains(x) {
        return Ok(Ordering::Greater);
    }
    // Walk down from the roots while the chains agree.
    let (mut i, mut j) = (ax.len(), ay.len());
    while i > 0 && j > 0 && ax[i - 1] == ay[j - 1] {
        i -= 1;
        j -= 1;
    }
    let (s, t) = (&ax[i - 1], &ay[j - 1]);
    match sibling_cmp(s, t) {
        Ordering::Equal => Err(KbError(format!("{s:?}"), format!("{t:?}"))),
        o => Ok(o),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // Parent array; None marks a root.
    fn chain(parent: &[Option<usize>], x: usize) -> Vec<usize> {
        let mut v = vec![x];
        while let Some(p) = parent[*v.last().unwrap()] {
            v.push(p);
        }
        v
    }

    #[test]
    fn root_with_two_children() {
        // r = 0, a = 1, b = 2.
        let parent = [None, Some(0), Some(0)];
        let cmp = |x: usize, y: usize| kb_cmp(&x, &y, |&n| chain(&parent, n), |a, b| a.cmp(b)).unwrap();
        assert_eq!(cmp(1, 2), Ordering::Less);
        assert_eq!(cmp(2, 0), Ordering::Less);
        assert_eq!(cmp(1, 0), Ordering::Less);
        assert_eq!(cmp(0, 0), Ordering::Equal);
    }

    #[test]
    fn incomparable_siblings_are_an_error() {
        let parent = [None, Some(0), Some(0)];
        let r = kb_cmp(&1, &2, |&n| chain(&parent, n), |_, _| Ordering::Equal);
        assert!(r.is_err());
    }
}
