//! Growth sets `U_m` of ordinals and audits of support growth along
//! automatic relations.
//!
//! For `α = ᾱ + w^m n_m + ... + n_0` with `ᾱ` a multiple of `w^(m+1)`,
//! `U_m(α)` holds `α` and every `γ = ᾱ + w^m l_m + ... + l_0` whose highest
//! differing coefficient `k` has `l_k ≤ n_k + m` and `l_i ≤ m` below it.

use std::collections::{BTreeSet, HashSet};
use std::fmt::Write as _;

use super::AnalysisError;
use crate::automaton::{OrdinalAutomaton, RawAutomaton, RawGuard};
use crate::ordinal::Ordinal;
use crate::par;
use crate::random::words_over;
use crate::reduction::Presentation;
use crate::word::{convolve, shape_ordinal, Alphabet, OrdinalWord};

/// Largest `m` the enumerating functions accept.
pub const MAX_M: u32 = 5;
const LANE: u32 = 16;

/// Splits `α` into `ᾱ` and the coefficients of `w^0 .. w^m`.
pub fn split(alpha: &Ordinal, m: u32) -> Result<(Ordinal, Vec<u64>), AnalysisError> {
    if alpha.finite_degree().is_none() {
        return Err(AnalysisError::Transfinite(alpha.to_string()));
    }
    let (bar, _) = alpha.split_at_exponent(&Ordinal::nat(m as u64 + 1));
    Ok((bar, (0..=m).map(|j| alpha.coeff_at(j)).collect()))
}

fn join(bar: &Ordinal, coeffs: &[u64]) -> Ordinal {
    bar.add(&Ordinal::from_finite_coeffs(coeffs))
}

pub fn c_m(xs: &[Ordinal], m: u32) -> Result<u64, AnalysisError> {
    let mut c = 0;
    for x in xs {
        c = c.max(split(x, m)?.1.into_iter().max().unwrap_or(0));
    }
    Ok(c)
}

/// Number of distinct `ᾱ` over `X ∪ {0}`.
pub fn d_m(xs: &[Ordinal], m: u32) -> Result<usize, AnalysisError> {
    let mut bars = BTreeSet::from([Ordinal::zero()]);
    for x in xs {
        bars.insert(split(x, m)?.0);
    }
    Ok(bars.len())
}

/// `γ ∈ U_m(α)`.
pub fn in_u(gamma: &Ordinal, alpha: &Ordinal, m: u32) -> Result<bool, AnalysisError> {
    let (gb, l) = split(gamma, m)?;
    let (ab, n) = split(alpha, m)?;
    if gb != ab {
        return Ok(false);
    }
    Ok(match (0..=m as usize).rev().find(|&j| l[j] != n[j]) {
        None => true,
        Some(k) => l[k] <= n[k] + m as u64 && l[..k].iter().all(|&x| x <= m as u64),
    })
}

/// `γ ∈ U_m(X)`, or `γ ∈ U_m(X, δ)` when a cut is given.
pub fn in_u_set(gamma: &Ordinal, xs: &[Ordinal], m: u32, delta: Option<&Ordinal>) -> Result<bool, AnalysisError> {
    if delta.is_some_and(|d| gamma >= d) {
        return Ok(false);
    }
    let zero = Ordinal::zero();
    for a in xs.iter().chain([&zero]).chain(delta) {
        if in_u(gamma, a, m)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Points `(ᾱ index, coefficients)` packed into one integer.
#[derive(Clone)]
struct Packing {
    m: u32,
    bars: Vec<Ordinal>,
}

impl Packing {
    fn new(xs: &[Ordinal], m: u32) -> Result<Self, AnalysisError> {
        if m > MAX_M {
            return Err(AnalysisError::Input(format!("m = {m} exceeds {MAX_M}")));
        }
        let mut bars = BTreeSet::from([Ordinal::zero()]);
        for x in xs {
            bars.insert(split(x, m)?.0);
        }
        Ok(Packing { m, bars: bars.into_iter().collect() })
    }

    fn pack(&self, x: &Ordinal) -> Result<u128, AnalysisError> {
        let (bar, cs) = split(x, self.m)?;
        let b = self.bars.binary_search(&bar).expect("bar registered") as u128;
        let mut key = b << 96;
        for (j, c) in cs.into_iter().enumerate() {
            if c >= 1 << LANE {
                return Err(AnalysisError::Input(format!("coefficient of {x} too large")));
            }
            key |= (c as u128) << (LANE * j as u32);
        }
        Ok(key)
    }

    fn coeff(key: u128, j: usize) -> u64 {
        ((key >> (LANE * j as u32)) & 0xffff) as u64
    }

    fn unpack(&self, key: u128) -> Ordinal {
        let cs: Vec<u64> = (0..=self.m as usize).map(|j| Self::coeff(key, j)).collect();
        join(&self.bars[(key >> 96) as usize], &cs)
    }

    /// Calls `f` on every element of `U_m` of the packed point.
    fn expand(&self, key: u128, f: &mut impl FnMut(u128)) -> Result<(), AnalysisError> {
        let m = self.m as u64;
        let lanes = self.m as usize + 1;
        f(key);
        for k in 0..lanes {
            let nk = Self::coeff(key, k);
            if nk + m >= 1 << LANE {
                return Err(AnalysisError::Input("coefficient overflow".into()));
            }
            let high = key & !((1u128 << (LANE * (k as u32 + 1))) - 1);
            let lows = (m + 1).pow(k as u32);
            for lk in (0..=nk + m).filter(|&l| l != nk) {
                let with_k = high | ((lk as u128) << (LANE * k as u32));
                for mut code in 0..lows {
                    let mut p = with_k;
                    for i in 0..k {
                        p |= ((code % (m + 1)) as u128) << (LANE * i as u32);
                        code /= m + 1;
                    }
                    f(p);
                }
            }
        }
        Ok(())
    }
}

/// Iterates of `U_m` starting from `start`, expanding only new points and
/// dropping points at or above the cut.
fn iterate(
    pk: &Packing,
    start: &[u128],
    iterations: usize,
    keep: &(impl Fn(u128) -> bool + ?Sized),
) -> Result<Vec<HashSet<u128>>, AnalysisError> {
    let zero = 0u128;
    let mut cur: HashSet<u128> = HashSet::new();
    let mut frontier: Vec<u128> = start.iter().copied().chain([zero]).collect();
    let mut out = Vec::new();
    for _ in 0..iterations {
        let mut fresh = Vec::new();
        let mut next = cur.clone();
        for &x in &frontier {
            pk.expand(x, &mut |p| {
                if keep(p) && next.insert(p) {
                    fresh.push(p);
                }
            })?;
        }
        frontier = fresh;
        cur = next;
        out.push(cur.clone());
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct GrowthSets {
    pub m: u32,
    pub base: Vec<Ordinal>,
    pub delta: Option<Ordinal>,
    /// `iterates[i-1] = U_m^i(X)` (or the cut variant), sorted.
    pub iterates: Vec<Vec<Ordinal>>,
    /// `c_m` and `d_m` of `X`, or of `X ∪ {δ}` with a cut.
    pub c: u64,
    pub d: usize,
}

impl GrowthSets {
    /// `(c + i m)^(m+1) d` as printed.
    pub fn stated_bound(&self, i: usize) -> u128 {
        stated_bound(self.c, self.m, i, self.d)
    }

    /// `(c + i m + 1)^(m+1) d`: each coefficient ranges over `0 ..= c + i m`.
    pub fn value_count_bound(&self, i: usize) -> u128 {
        value_count_bound(self.c, self.m, i, self.d)
    }

    pub fn report(&self) -> String {
        let mut s = String::new();
        let xs: Vec<String> = self.base.iter().map(|x| x.to_string()).collect();
        let _ = writeln!(s, "m: {}", self.m);
        let _ = writeln!(s, "X: {{{}}}", xs.join(", "));
        if let Some(d) = &self.delta {
            let _ = writeln!(s, "delta: {d}");
        }
        let _ = writeln!(s, "c_m: {}", self.c);
        let _ = writeln!(s, "d_m: {}", self.d);
        for (i, u) in self.iterates.iter().enumerate() {
            let i = i + 1;
            let _ = writeln!(
                s,
                "iterate.{i}: size={} stated_bound={} holds={} value_count_bound={} holds={}",
                u.len(),
                self.stated_bound(i),
                (u.len() as u128) <= self.stated_bound(i),
                self.value_count_bound(i),
                (u.len() as u128) <= self.value_count_bound(i)
            );
        }
        if let Some(last) = self.iterates.last() {
            if last.len() <= 40 {
                let v: Vec<String> = last.iter().map(|x| x.to_string()).collect();
                let _ = writeln!(s, "elements: {{{}}}", v.join(", "));
            }
        }
        s
    }
}

pub fn stated_bound(c: u64, m: u32, i: usize, d: usize) -> u128 {
    (c as u128 + i as u128 * m as u128).pow(m + 1) * d as u128
}

pub fn value_count_bound(c: u64, m: u32, i: usize, d: usize) -> u128 {
    (c as u128 + i as u128 * m as u128 + 1).pow(m + 1) * d as u128
}

pub fn growth_sets(
    m: u32,
    xs: &[Ordinal],
    delta: Option<&Ordinal>,
    iterations: usize,
) -> Result<GrowthSets, AnalysisError> {
    let mut all: Vec<Ordinal> = xs.to_vec();
    all.extend(delta.cloned());
    let pk = Packing::new(&all, m)?;
    let start: Vec<u128> = all.iter().map(|x| pk.pack(x)).collect::<Result<_, _>>()?;
    let keep = |p: u128| delta.is_none_or(|d| &pk.unpack(p) < d);
    let sets = iterate(&pk, &start, iterations, &keep)?;
    let iterates = sets
        .iter()
        .map(|s| {
            let mut v: Vec<Ordinal> = s.iter().map(|&p| pk.unpack(p)).collect();
            v.sort();
            v
        })
        .collect();
    Ok(GrowthSets {
        m,
        base: xs.to_vec(),
        delta: delta.cloned(),
        iterates,
        c: c_m(&all, m)?,
        d: d_m(&all, m)?,
    })
}

/// Outcome of checking the size bound over every small base set.
#[derive(Clone, Debug, Default)]
pub struct BoundSweep {
    pub cases: usize,
    pub stated_failures: usize,
    pub value_count_failures: usize,
    pub first_stated_failure: Option<String>,
    pub worst_ratio: f64,
}

impl BoundSweep {
    pub fn report(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "cases: {}", self.cases);
        let _ = writeln!(s, "stated_bound_failures: {}", self.stated_failures);
        if let Some(f) = &self.first_stated_failure {
            let _ = writeln!(s, "first_stated_failure: {f}");
        }
        let _ = writeln!(s, "value_count_bound_failures: {}", self.value_count_failures);
        let _ = writeln!(s, "max_size_over_value_count_bound: {:.4}", self.worst_ratio);
        s
    }
}

/// All ordinals below `w^(max_degree+1)` with coefficients at most `max_coeff`.
pub fn small_ordinals(max_degree: u32, max_coeff: u64) -> Vec<Ordinal> {
    let lanes = max_degree as usize + 1;
    let base = max_coeff + 1;
    (0..base.pow(lanes as u32))
        .map(|mut code| {
            let cs: Vec<u64> = (0..lanes)
                .map(|_| {
                    let c = code % base;
                    code /= base;
                    c
                })
                .collect();
            Ordinal::from_finite_coeffs(&cs)
        })
        .collect()
}

/// Checks `|U_m^i(X)|` against both bounds for every `m ≤ max_m`,
/// `i ≤ max_i` and every nonempty `X` of at most `max_set` elements from
/// `pool`. Uses `U_m^i(X) = ⋃_{γ ∈ X ∪ {0}} U_m^i({γ})`.
pub fn bound_sweep(pool: &[Ordinal], max_m: u32, max_i: usize, max_set: usize) -> Result<BoundSweep, AnalysisError> {
    let mut sweep = BoundSweep::default();
    // `c_m` is a maximum over `X`, so `X` is nonempty.
    let mut subsets: Vec<Vec<usize>> = Vec::new();
    let mut layer: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..max_set {
        layer = layer
            .iter()
            .flat_map(|s| {
                let from = s.last().map_or(0, |&l| l + 1);
                (from..pool.len()).map(move |e| {
                    let mut t = s.clone();
                    t.push(e);
                    t
                })
            })
            .collect();
        subsets.extend(layer.iter().cloned());
    }
    for m in 0..=max_m {
        let pk = Packing::new(pool, m)?;
        let singles: Vec<Vec<Vec<u128>>> = par::map(pool, |g| -> Result<Vec<Vec<u128>>, AnalysisError> {
            let start = [pk.pack(g)?];
            Ok(iterate(&pk, &start, max_i, &|_| true)?
                .into_iter()
                .map(|s| {
                    let mut v: Vec<u128> = s.into_iter().collect();
                    v.sort_unstable();
                    v
                })
                .collect())
        })
        .into_iter()
        .collect::<Result<_, _>>()?;
        let from_zero: Vec<Vec<u128>> = iterate(&pk, &[], max_i, &|_| true)?
            .into_iter()
            .map(|s| {
                let mut v: Vec<u128> = s.into_iter().collect();
                v.sort_unstable();
                v
            })
            .collect();
        let stats: Vec<(u64, usize)> = pool
            .iter()
            .map(|g| Ok((c_m(std::slice::from_ref(g), m)?, (pk.pack(g)? >> 96) as usize)))
            .collect::<Result<_, AnalysisError>>()?;
        let results = par::map(&subsets, |set| {
            let c = set.iter().map(|&e| stats[e].0).max().unwrap_or(0);
            let mut bars: BTreeSet<usize> = set.iter().map(|&e| stats[e].1).collect();
            bars.insert(0);
            let d = bars.len();
            (1..=max_i)
                .map(|i| {
                    let mut u: Vec<u128> = from_zero[i - 1].clone();
                    for &e in set {
                        u.extend_from_slice(&singles[e][i - 1]);
                    }
                    u.sort_unstable();
                    u.dedup();
                    let size = u.len() as u128;
                    (i, size, stated_bound(c, m, i, d), value_count_bound(c, m, i, d))
                })
                .collect::<Vec<_>>()
        });
        for (set, rows) in subsets.iter().zip(results) {
            for (i, size, stated, counted) in rows {
                sweep.cases += 1;
                if size > stated {
                    sweep.stated_failures += 1;
                    if sweep.first_stated_failure.is_none() {
                        let xs: Vec<String> = set.iter().map(|&e| pool[e].to_string()).collect();
                        sweep.first_stated_failure = Some(format!(
                            "m={m} i={i} X={{{}}}: |U|={size} > {stated}",
                            xs.join(", ")
                        ));
                    }
                }
                if size > counted {
                    sweep.value_count_failures += 1;
                }
                sweep.worst_ratio = sweep.worst_ratio.max(size as f64 / counted as f64);
            }
        }
    }
    Ok(sweep)
}

#[derive(Clone, Debug, Default)]
pub struct GrowthAudit {
    pub relation: String,
    /// States of the relation automaton; containment is checked in `U_{m+1}`.
    pub m: usize,
    pub samples: usize,
    pub pairs_checked: usize,
    pub skipped: Vec<String>,
    pub violations: Vec<String>,
    pub max_images: usize,
}

impl GrowthAudit {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn report(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "relation: {}", self.relation);
        let _ = writeln!(s, "states: {}", self.m);
        let _ = writeln!(s, "samples: {}", self.samples);
        let _ = writeln!(s, "pairs_checked: {}", self.pairs_checked);
        let _ = writeln!(s, "max_images: {}", self.max_images);
        let _ = writeln!(s, "not_locally_finite: {}", self.skipped.len());
        for x in self.skipped.iter().take(5) {
            let _ = writeln!(s, "skipped: {x}");
        }
        let _ = writeln!(s, "violations: {}", self.violations.len());
        for x in self.violations.iter().take(5) {
            let _ = writeln!(s, "violation: {x}");
        }
        let _ = writeln!(s, "verdict: {}", if self.ok() { "contained" } else { "violated" });
        s
    }
}

fn support(w: &OrdinalWord) -> Vec<Ordinal> {
    w.support().cloned().collect()
}

/// `supp(w) ⊆ U_{m+1}(supp(v), w^k)`; returns the first position outside.
pub fn check_pair(v: &OrdinalWord, w: &OrdinalWord, m: usize) -> Result<Option<Ordinal>, AnalysisError> {
    let eta = shape_ordinal(v.shape());
    let xs = support(v);
    for g in w.support() {
        if !in_u_set(g, &xs, m as u32 + 1, Some(&eta))? {
            return Ok(Some(g.clone()));
        }
    }
    Ok(None)
}

/// Audits the binary relation `name` on the domain words supported in
/// `positions`. A sample whose image grows when `extra` positions are added
/// (and was already nonempty) is treated as not locally finite and skipped.
pub fn growth_audit(
    pres: &Presentation,
    name: &str,
    positions: &[Ordinal],
    extra: &[Ordinal],
) -> Result<GrowthAudit, AnalysisError> {
    let rel = pres
        .relation(name)
        .ok_or_else(|| AnalysisError::Input(format!("no relation {name:?}")))?;
    if rel.arity != 2 {
        return Err(AnalysisError::Input(format!("relation {name} is not binary")));
    }
    let k = pres.shape();
    let mut wide: Vec<Ordinal> = positions.to_vec();
    wide.extend(extra.iter().cloned());
    let small: Vec<OrdinalWord> = words_over(k, pres.sigma(), positions)
        .into_iter()
        .filter(|w| pres.in_domain(w))
        .collect();
    let large: Vec<OrdinalWord> = words_over(k, pres.sigma(), &wide)
        .into_iter()
        .filter(|w| pres.in_domain(w))
        .collect();
    let in_small = |w: &OrdinalWord| w.support().all(|p| positions.contains(p));
    let images = par::map(&small, |v| {
        large
            .iter()
            .filter(|w| pres.holds(name, &[v, w]).unwrap_or(false))
            .cloned()
            .collect::<Vec<_>>()
    });
    let m = rel.automaton.num_states();
    let mut audit = GrowthAudit {
        relation: name.to_string(),
        m,
        samples: small.len(),
        ..Default::default()
    };
    for (v, img) in small.iter().zip(images) {
        let within = img.iter().filter(|w| in_small(w)).count();
        audit.max_images = audit.max_images.max(img.len());
        if within > 0 && img.len() > within {
            audit.skipped.push(format!("{{{v}}}: {within} images grow to {}", img.len()));
            continue;
        }
        for w in &img {
            audit.pairs_checked += 1;
            if let Some(g) = check_pair(v, w, m)? {
                audit.violations.push(format!("({{{v}}}, {{{w}}}): {g} outside U_{}", m + 1));
            }
        }
    }
    Ok(audit)
}

/// Checks hand-picked pairs against the containment, as if they belonged to
/// a relation recognised with `m` states.
pub fn audit_pairs(pairs: &[(OrdinalWord, OrdinalWord)], m: usize) -> Result<Vec<String>, AnalysisError> {
    let mut out = Vec::new();
    for (v, w) in pairs {
        if let Some(g) = check_pair(v, w, m)? {
            out.push(format!("({{{v}}}, {{{w}}}): {g} outside U_{}", m + 1));
        }
    }
    Ok(out)
}

/// Union of finite sets of naturals, as words over `w` with letter `a`:
/// tracks `(x, y, z)` with `z = x ∪ y`.
pub fn union_monoid() -> OrdinalAutomaton {
    let sigma = Alphabet::from_symbols(&["a"]);
    let alphabet = Alphabet::product(&[&sigma, &sigma, &sigma]);
    let mut raw = RawAutomaton::new(&alphabet);
    raw.state("q").initial("q").accepting("q");
    for l in std::iter::once(alphabet.blank()).chain(alphabet.letters().iter().cloned()) {
        let c: Vec<bool> = (0..3).map(|i| l.component(i).is_some()).collect();
        if c[2] == (c[0] || c[1]) {
            raw.succ("q", l, "q");
        }
    }
    raw.rlimit(RawGuard::exact(&["q"]), "q");
    raw.build().expect("union automaton is well formed")
}

/// Multiplies `factors` left to right through a monoid automaton, looking
/// for each product among the words over `positions`, and checks
/// `supp(s_1 ... s_n) ⊆ U_{m+1}^{⌈log n⌉}(X)` for `X` the union of the
/// factor supports.
pub fn monoid_audit(
    mul: &OrdinalAutomaton,
    factors: &[OrdinalWord],
    positions: &[Ordinal],
) -> Result<Option<String>, AnalysisError> {
    let n = factors.len();
    if n < 2 {
        return Err(AnalysisError::Input("need at least two factors".into()));
    }
    let shape = factors[0].shape();
    let sigma = Alphabet::from_symbols(&["a"]);
    let candidates = words_over(shape, &sigma, positions);
    let mut acc = factors[0].clone();
    for f in &factors[1..] {
        acc = candidates
            .iter()
            .find(|z| {
                let t = convolve(&[&acc, f, z]).expect("same shape");
                mul.accepts(&t).unwrap_or(false)
            })
            .cloned()
            .ok_or_else(|| AnalysisError::Input("product outside the candidate positions".into()))?;
    }
    let xs: BTreeSet<Ordinal> = factors.iter().flat_map(|f| f.support().cloned()).collect();
    let xs: Vec<Ordinal> = xs.into_iter().collect();
    let rounds = (usize::BITS - (n - 1).leading_zeros()) as usize;
    let m = mul.num_states() as u32 + 1;
    let u = growth_sets(m, &xs, None, rounds)?;
    let last = u.iterates.last().expect("at least one round");
    let outside = acc.support().find(|g| last.binary_search(g).is_err()).cloned();
    Ok(outside.map(|g| format!("{g} of the product lies outside U_{m}^{rounds}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::enc_ordinal;
    use crate::ordinal::ord;
    use crate::reduction::standard_presentations;

    fn brute_u(alpha: &Ordinal, m: u32, limit: u64) -> BTreeSet<Ordinal> {
        let (bar, _) = split(alpha, m).unwrap();
        small_ordinals(m, limit)
            .into_iter()
            .map(|low| bar.add(&low))
            .filter(|g| in_u(g, alpha, m).unwrap())
            .collect()
    }

    #[test]
    fn single_matches_membership() {
        for a in ["0", "3", "w+1", "w^2*2+w*3+1", "w^3+2"] {
            for m in 0..=2 {
                let alpha = ord(a);
                let g = growth_sets(m, std::slice::from_ref(&alpha), None, 1).unwrap();
                let mut expect = brute_u(&alpha, m, 8);
                expect.extend(brute_u(&Ordinal::zero(), m, 8));
                let got: BTreeSet<Ordinal> = g.iterates[0].iter().cloned().collect();
                assert_eq!(got, expect, "alpha={a} m={m}");
                assert!(got.contains(&alpha));
            }
        }
    }

    #[test]
    fn coefficient_statistics() {
        assert_eq!(c_m(&[ord("w^2*3+w+4")], 2).unwrap(), 4);
        assert_eq!(d_m(&[ord("w^3+1"), ord("w^3*2"), ord("5")], 2).unwrap(), 3);
        assert!(split(&ord("w^w"), 1).is_err());
    }

    #[test]
    fn value_count_bound_holds() {
        let g = growth_sets(2, &[ord("w*2+1")], None, 2).unwrap();
        for i in 1..=2 {
            assert!(g.iterates[i - 1].len() as u128 <= g.value_count_bound(i));
        }
        assert!(g.iterates[0].iter().all(|x| g.iterates[1].contains(x)));
    }

    #[test]
    fn stated_bound_misses_the_zero_coefficient() {
        // {0, 1, w, w+1} has four elements; (0 + 1)^2 * 1 = 1.
        let g = growth_sets(1, &[Ordinal::zero()], None, 1).unwrap();
        assert_eq!(g.iterates[0].len(), 4);
        assert_eq!(g.stated_bound(1), 1);
        assert_eq!(g.value_count_bound(1), 4);
    }

    #[test]
    fn cut_variant() {
        let delta = ord("w*2");
        let g = growth_sets(1, &[ord("w+1")], Some(&delta), 2).unwrap();
        for (i, u) in g.iterates.iter().enumerate() {
            assert!(u.iter().all(|x| x < &delta));
            assert!(u.len() as u128 <= g.value_count_bound(i + 1));
            for x in u {
                if i == 0 {
                    assert!(in_u_set(x, &[ord("w+1")], 1, Some(&delta)).unwrap());
                }
            }
        }
    }

    #[test]
    fn sweep_agrees_with_direct_iteration() {
        let pool = small_ordinals(1, 1);
        let s = bound_sweep(&pool, 1, 2, 2).unwrap();
        assert_eq!(s.value_count_failures, 0);
        assert!(s.stated_failures > 0);
        let x = [pool[1].clone(), pool[3].clone()];
        let direct = growth_sets(1, &x, None, 2).unwrap();
        let mut by_union = BTreeSet::new();
        for g in &x {
            by_union.extend(growth_sets(1, std::slice::from_ref(g), None, 2).unwrap().iterates[1].iter().cloned());
        }
        assert_eq!(direct.iterates[1].iter().cloned().collect::<BTreeSet<_>>(), by_union);
    }

    #[test]
    fn successor_support_stays_close() {
        let (_, p) = standard_presentations().into_iter().find(|(n, _)| *n == "enc-ordinals").unwrap();
        let pos: Vec<Ordinal> = ["0", "1", "2", "w", "w+1", "w*2"].iter().map(|s| ord(s)).collect();
        let extra = [ord("3"), ord("w+2")];
        let a = growth_audit(&p, "succ", &pos, &extra).unwrap();
        assert!(a.ok(), "{}", a.report());
        assert!(a.pairs_checked > 0);
        assert!(a.skipped.is_empty());
    }

    #[test]
    fn identity_and_fabricated_pairs() {
        let v = enc_ordinal(&ord("w+2"), 2).unwrap();
        assert!(audit_pairs(&[(v.clone(), v.clone())], 1).unwrap().is_empty());
        let far = enc_ordinal(&ord("w^20"), 2).unwrap();
        assert_eq!(audit_pairs(&[(v, far)], 3).unwrap().len(), 1);
    }

    #[test]
    fn order_relation_is_not_locally_finite() {
        let (_, p) = standard_presentations().into_iter().find(|(n, _)| *n == "word-order").unwrap();
        let pos: Vec<Ordinal> = ["0", "w", "w+1"].iter().map(|s| ord(s)).collect();
        let a = growth_audit(&p, "<", &pos, &[ord("w*2")]).unwrap();
        assert!(!a.skipped.is_empty());
    }

    #[test]
    fn union_products() {
        let mul = union_monoid();
        let pos: Vec<Ordinal> = (0..5).map(Ordinal::nat).collect();
        let sigma = Alphabet::from_symbols(&["a"]);
        let f = |ps: &[u64]| {
            OrdinalWord::new(1, 1, ps.iter().map(|&p| (Ordinal::nat(p), sigma.letters()[0].clone()))).unwrap()
        };
        let factors = [f(&[0]), f(&[2]), f(&[1, 2]), f(&[4])];
        assert_eq!(monoid_audit(&mul, &factors, &pos).unwrap(), None);
    }
}
