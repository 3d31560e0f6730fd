//! Finite-condensation ranks of ordinal order types.

use super::{Ordinal, Term};

/// One finite-interval condensation of the order type `a`: writing
/// `a = w*q + m` with `m < w`, the classes are the `q` blocks of type `w`
/// plus the finite tail when `m > 0`.
pub fn condense_once(a: &Ordinal) -> Ordinal {
    let one = Ordinal::one();
    let mut q_terms = Vec::new();
    let mut tail = 0;
    for t in a.terms() {
        if t.exponent.is_zero() {
            tail = t.coeff;
        } else {
            let e = one
                .left_sub(&t.exponent)
                .expect("exponent is at least one");
            q_terms.push(Term {
                exponent: e,
                coeff: t.coeff,
            });
        }
    }
    let q = Ordinal::from_terms(q_terms);
    if tail > 0 {
        q.succ()
    } else {
        q
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FcReport {
    /// Least number of condensations after which the order is finite.
    pub fc_star: Ordinal,
    /// Least number of condensations after which the order is a point.
    pub fc: Ordinal,
    /// Largest Cantor-normal-form exponent (zero for finite values).
    pub degree: Ordinal,
    /// Successive condensations `a, c(a), c(c(a)), ...` down to at most one
    /// point; empty when the closed form was used.
    pub trace: Vec<Ordinal>,
}

/// FC and FC_* of the order type `a`.
///
/// Finite-degree inputs are condensed step by step; transfinite degrees use
/// the closed form `fc_star = degree`, `fc = degree (+1 unless a single
/// leading block remains)`.
pub fn fc_ranks(a: &Ordinal) -> FcReport {
    let degree = a.degree();
    if degree.as_nat().is_some() {
        let mut trace = vec![a.clone()];
        let mut fc_star = None;
        loop {
            let cur = trace.last().unwrap();
            if fc_star.is_none() && cur.is_finite() {
                fc_star = Some(trace.len() as u64 - 1);
            }
            if cur <= &Ordinal::one() {
                break;
            }
            let next = condense_once(cur);
            trace.push(next);
        }
        FcReport {
            fc_star: Ordinal::nat(fc_star.unwrap()),
            fc: Ordinal::nat(trace.len() as u64 - 1),
            degree,
            trace,
        }
    } else {
        let (fc_star, fc) = closed_form(a);
        FcReport {
            fc_star,
            fc,
            degree,
            trace: Vec::new(),
        }
    }
}

/// Closed-form ranks, valid for every nonzero `a` of degree at least one.
pub(crate) fn closed_form(a: &Ordinal) -> (Ordinal, Ordinal) {
    let degree = a.degree();
    let remaining = a.leading_coeff() + u64::from(a.terms().len() > 1);
    let fc = if remaining > 1 {
        degree.succ()
    } else {
        degree.clone()
    };
    (degree, fc)
}

#[cfg(test)]
mod tests {
    use super::super::ord;
    use super::*;

    #[test]
    fn condense_examples() {
        assert_eq!(condense_once(&ord("w*2+3")), ord("3"));
        assert_eq!(condense_once(&ord("w^2")), ord("w"));
        assert_eq!(condense_once(&ord("5")), ord("1"));
        assert_eq!(condense_once(&ord("0")), ord("0"));
        assert_eq!(condense_once(&ord("w^w")), ord("w^w"));
    }

    #[test]
    fn fc_examples() {
        let r = fc_ranks(&ord("w"));
        assert_eq!((r.fc_star, r.fc), (ord("1"), ord("1")));
        let r = fc_ranks(&ord("w*2"));
        assert_eq!((r.fc_star, r.fc), (ord("1"), ord("2")));
        let r = fc_ranks(&ord("w^2+w*3+2"));
        assert_eq!(r.fc_star, ord("2"));
        assert_eq!(r.trace, vec![ord("w^2+w*3+2"), ord("w+4"), ord("2"), ord("1")]);
        let r = fc_ranks(&ord("1"));
        assert_eq!((r.fc_star, r.fc), (ord("0"), ord("0")));
        let r = fc_ranks(&ord("7"));
        assert_eq!((r.fc_star, r.fc), (ord("0"), ord("1")));
    }

    #[test]
    fn transfinite_degree_uses_closed_form() {
        let r = fc_ranks(&ord("w^w*2+1"));
        assert_eq!(r.fc_star, ord("w"));
        assert_eq!(r.fc, ord("w+1"));
        assert!(r.trace.is_empty());
        let r = fc_ranks(&ord("w^(w+1)"));
        assert_eq!((r.fc_star, r.fc), (ord("w+1"), ord("w+1")));
    }

    #[test]
    fn closed_form_matches_iteration_on_finite_degrees() {
        for s in ["w", "w*2", "w^2", "w^2+1", "w^3*2+w", "w^2*3+w*3+2", "w^4+w^2"] {
            let a = ord(s);
            let it = fc_ranks(&a);
            assert_eq!(closed_form(&a), (it.fc_star, it.fc), "{s}");
        }
    }
}
