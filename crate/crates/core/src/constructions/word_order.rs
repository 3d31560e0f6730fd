use std::cmp::Ordering;

use crate::word::{Alphabet, OrdinalWord, WordError};

/// The well-order of finite words: the largest position where `w` and `v`
/// differ decides, comparing letters in alphabet order with the blank least.
///
/// Equivalently, the word with the smaller maximal support comes first
/// (the empty word is least), and ties are broken at the largest differing
/// position.
pub fn word_order_cmp(
    alphabet: &Alphabet,
    w: &OrdinalWord,
    v: &OrdinalWord,
) -> Result<Ordering, WordError> {
    if w.shape() != v.shape() {
        return Err(WordError::ShapeMismatch(w.shape(), v.shape()));
    }
    let (mut i, mut j) = (w.entries().len(), v.entries().len());
    let (we, ve) = (w.entries(), v.entries());
    // Walk both supports downwards from the top.
    while i > 0 || j > 0 {
        let pw = (i > 0).then(|| &we[i - 1].0);
        let pv = (j > 0).then(|| &ve[j - 1].0);
        match (pw, pv) {
            (Some(a), Some(b)) if a == b => {
                let o = alphabet.cmp_letters(&we[i - 1].1, &ve[j - 1].1);
                if o != Ordering::Equal {
                    return Ok(o);
                }
                i -= 1;
                j -= 1;
            }
            (Some(a), Some(b)) => return Ok(if a > b { Ordering::Greater } else { Ordering::Less }),
            (Some(_), None) => return Ok(Ordering::Greater),
            (None, _) => return Ok(Ordering::Less),
        }
    }
    Ok(Ordering::Equal)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> OrdinalWord {
        OrdinalWord::parse(s, None, 2).unwrap()
    }

    #[test]
    fn examples() {
        let ab = Alphabet::from_symbols(&["a", "b"]);
        assert_eq!(word_order_cmp(&ab, &w("a@4"), &w("a@w")).unwrap(), Ordering::Less);
        assert_eq!(
            word_order_cmp(&ab, &w("a@0, a@2"), &w("a@1, a@2")).unwrap(),
            Ordering::Less
        );
        assert_eq!(word_order_cmp(&ab, &w(""), &w("a@0")).unwrap(), Ordering::Less);
        assert_eq!(word_order_cmp(&ab, &w("b@3"), &w("a@3")).unwrap(), Ordering::Greater);
        assert_eq!(word_order_cmp(&ab, &w("b@3"), &w("b@3")).unwrap(), Ordering::Equal);
        let other = OrdinalWord::parse("a@0", None, 1).unwrap();
        assert!(word_order_cmp(&ab, &w("a@0"), &other).is_err());
    }
}
