//! Constructions of new sharp polynomials: gluing two odd-degree sharp
//! polynomials into an even-degree one, and the substitution
//! `f - c x^j y^k (f_m - 1)` with the even-degree invariant `f_m`.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use crate::exactpoly::{invariant_even, invariant_sharp, is_sharp, BivariatePoly, Monomial, PolyError};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConstructError {
    #[error("{0} is not sharp of odd degree")]
    NotSharp(String),
    #[error("{0} lacks x^d or y^d with coefficient 1")]
    NotDecomposable(String),
    #[error("term {0} appears in both parts of the composition")]
    Collision(Monomial),
    #[error("invalid substitution parameters: {0}")]
    InvalidParams(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// `x^{d1} + y^{d1} q + p_0` for `p = x^{d1} + y^{d1} + p_0`.
pub fn compose_even(p: &BivariatePoly, q: &BivariatePoly) -> Result<BivariatePoly, ConstructError> {
    let odd_sharp = |f: &BivariatePoly| f.degree().filter(|d| d % 2 == 1 && is_sharp(f, *d));
    let d1 = odd_sharp(p).ok_or_else(|| ConstructError::NotSharp(p.to_string()))?;
    let d2 = odd_sharp(q).ok_or_else(|| ConstructError::NotSharp(q.to_string()))?;
    let (xd, yd) = (Monomial::new(d1, 0), Monomial::new(0, d1));
    if !p.coeff(xd).is_one() || !p.coeff(yd).is_one() {
        return Err(ConstructError::NotDecomposable(p.to_string()));
    }
    let mut p0 = p.clone();
    p0.add_term(xd, &-Rational::one());
    p0.add_term(yd, &-Rational::one());
    let lifted = q.shift(yd, &Rational::one());
    for (m, _) in lifted.terms() {
        if *m == xd || p0.coeff_ref(*m).is_some() {
            return Err(ConstructError::Collision(*m));
        }
    }
    let mut f = &lifted + &p0;
    f.add_term(xd, &Rational::one());
    if !is_sharp(&f, d1 + d2) {
        return Err(ConstructError::NotSharp(f.to_string()));
    }
    Ok(f)
}

/// Every composition of sharp polynomials whose odd degrees sum to `d`,
/// closed under swapping. `sharp` maps an odd degree to its full list of
/// sharp polynomials, swaps included.
pub fn compose_closure(
    d: u32,
    sharp: &BTreeMap<u32, Vec<BivariatePoly>>,
) -> Result<Vec<BivariatePoly>, ConstructError> {
    let mut out = BTreeSet::new();
    for d1 in (1..d).step_by(2) {
        let (Some(ps), Some(qs)) = (sharp.get(&d1), sharp.get(&(d - d1))) else {
            continue;
        };
        for p in ps {
            for q in qs {
                let f = compose_even(p, q)?;
                out.insert(f.swap_vars());
                out.insert(f);
            }
        }
    }
    Ok(out.into_iter().collect())
}

/// `2 (a_2 a_{N-1} + ... + a_{N-1} a_2)`: the even-degree count predicted by
/// the composition, from the odd-degree counts `a`.
pub fn even_count_formula(a: impl Fn(usize) -> u64, n: usize) -> u64 {
    2 * (2..n).map(|i| a(i) * a(n + 1 - i)).sum::<u64>()
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct SubstitutionParams {
    pub m: u32,
    pub j: u32,
    pub k: u32,
    #[serde(serialize_with = "crate::rational::serialize_display")]
    pub c: Rational,
}

impl std::fmt::Display for SubstitutionParams {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "m={} j={} k={} c={}", self.m, self.j, self.k, self.c)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Rejection {
    Negative(Monomial),
    DegreeDrop,
    TermCount { expected: usize, actual: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Candidate {
    pub poly: BivariatePoly,
    pub rejection: Option<Rejection>,
}

impl Candidate {
    pub fn accepted(&self) -> bool {
        self.rejection.is_none()
    }
}

/// `f - c x^j y^k (f_m - 1)`, accepted when it keeps the degree, the term
/// count and nonnegativity of `f`.
pub fn substitute(f: &BivariatePoly, params: &SubstitutionParams) -> Result<Candidate, ConstructError> {
    let d = f.degree().ok_or_else(|| ConstructError::InvalidParams("zero polynomial".into()))?;
    let SubstitutionParams { m, j, k, c } = params;
    if *m < 2 || m % 2 == 1 || *m >= d || j + k + m > d || c.is_negative() {
        return Err(ConstructError::InvalidParams(params.to_string()));
    }
    let fm = invariant_even(*m)?;
    let mut correction = fm;
    correction.add_term(Monomial::ONE, &-Rational::one());
    let g = f - &correction.shift(Monomial::new(*j, *k), c);
    let rejection = if let Some((mono, _)) = g.terms().find(|(_, c)| c.is_negative()) {
        Some(Rejection::Negative(*mono))
    } else if g.degree() != Some(d) {
        Some(Rejection::DegreeDrop)
    } else if g.term_count() != f.term_count() {
        Some(Rejection::TermCount { expected: f.term_count(), actual: g.term_count() })
    } else {
        None
    };
    Ok(Candidate { poly: g, rejection })
}

/// Positive part of `f_m` (all terms but `-y^m`).
struct EvenPart {
    m: u32,
    terms: Vec<(Monomial, Rational)>,
}

fn even_parts(d: u32) -> Vec<EvenPart> {
    (2..d)
        .step_by(2)
        .map(|m| {
            let fm = invariant_even(m).expect("even degree");
            let terms = fm.terms().filter(|(_, c)| c.is_positive()).map(|(mono, c)| (*mono, c.clone())).collect();
            EvenPart { m, terms }
        })
        .collect()
}

/// The parameter grid for `f`: every `(m, j, k, c)` for which some positive
/// term of `c x^j y^k f_m` cancels a term of `f` exactly.
pub fn parameter_grid(f: &BivariatePoly) -> Vec<SubstitutionParams> {
    let Some(d) = f.degree() else {
        return Vec::new();
    };
    let mut out = BTreeSet::new();
    for part in even_parts(d) {
        grid_for(f, d, &part, &mut out);
    }
    out.into_iter().collect()
}

fn grid_for(f: &BivariatePoly, d: u32, part: &EvenPart, out: &mut BTreeSet<SubstitutionParams>) {
    for (ab, w) in &part.terms {
        for (uv, coeff) in f.terms() {
            if uv.j < ab.j || uv.k < ab.k {
                continue;
            }
            let (j, k) = (uv.j - ab.j, uv.k - ab.k);
            if j + k + part.m > d {
                continue;
            }
            out.insert(SubstitutionParams { m: part.m, j, k, c: coeff / w });
        }
    }
}

/// Sparse evaluation of [`substitute`]; returns the result only when it is
/// accepted.
fn substitute_fast(
    f: &HashMap<Monomial, Rational>,
    d: u32,
    part: &EvenPart,
    p: &SubstitutionParams,
) -> Option<BivariatePoly> {
    let base = Monomial::new(p.j, p.k);
    let mut changed: Vec<(Monomial, Rational)> = Vec::with_capacity(part.terms.len() + 2);
    for (ab, w) in &part.terms {
        let at = base.times(*ab);
        let v = f.get(&at).cloned().unwrap_or_else(Rational::zero) - &p.c * w;
        if v.is_negative() {
            return None;
        }
        changed.push((at, v));
    }
    for extra in [base, base.times(Monomial::new(0, part.m))] {
        let v = f.get(&extra).cloned().unwrap_or_else(Rational::zero) + &p.c;
        changed.push((extra, v));
    }
    let mut count = f.len() as i64;
    let mut top_lost = 0usize;
    let mut top_gained = false;
    for (at, v) in &changed {
        let before = f.contains_key(at);
        match (before, v.is_zero()) {
            (true, true) => {
                count -= 1;
                if at.degree() == d {
                    top_lost += 1;
                }
            }
            (false, false) => count += 1,
            _ => {}
        }
        if at.degree() == d && !v.is_zero() {
            top_gained = true;
        }
    }
    if count != f.len() as i64 {
        return None;
    }
    let top_before = f.keys().filter(|m| m.degree() == d).count();
    if top_lost == top_before && !top_gained {
        return None;
    }
    let mut g = BivariatePoly::from_terms(f.iter().map(|(m, c)| (*m, c.clone())));
    for (at, v) in changed {
        let delta = &v - &g.coeff(at);
        g.add_term(at, &delta);
    }
    Some(g)
}

/// Accepted substitutions of `f`, in parameter order.
pub fn accepted_substitutions(f: &BivariatePoly) -> Vec<(SubstitutionParams, BivariatePoly)> {
    let Some(d) = f.degree() else {
        return Vec::new();
    };
    let map: HashMap<Monomial, Rational> = f.terms().map(|(m, c)| (*m, c.clone())).collect();
    let mut out = Vec::new();
    for part in even_parts(d) {
        let mut grid = BTreeSet::new();
        grid_for(f, d, &part, &mut grid);
        for p in grid {
            if p.c.is_zero() {
                continue;
            }
            if let Some(g) = substitute_fast(&map, d, &part, &p) {
                out.push((p, g));
            }
        }
    }
    out
}

/// A noninvariant sharp polynomial with the substitutions leading to it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Construction {
    pub steps: Vec<SubstitutionParams>,
    #[serde(serialize_with = "crate::rational::serialize_display")]
    pub polynomial: BivariatePoly,
}

/// All distinct (up to swap) noninvariant sharp polynomials reachable from
/// `f_d` in at most `depth` substitutions.
pub fn construct(d: u32, depth: usize) -> Result<Vec<Construction>, ConstructError> {
    Ok(explore(d, depth, false)?.1)
}

fn explore(d: u32, depth: usize, stop_early: bool) -> Result<(BivariatePoly, Vec<Construction>), ConstructError> {
    let f = invariant_sharp(d)?;
    let origin = f.canonical_form();
    let mut seen: BTreeSet<BivariatePoly> = BTreeSet::from([origin.clone()]);
    let mut found = Vec::new();
    let mut frontier = vec![(f.clone(), Vec::new())];
    for _ in 0..depth {
        let mut next = Vec::new();
        for (g, steps) in &frontier {
            for (p, h) in accepted_substitutions(g) {
                let canon = h.canonical_form();
                if !seen.insert(canon.clone()) {
                    continue;
                }
                let mut path: Vec<SubstitutionParams> = steps.clone();
                path.push(p);
                found.push(Construction { steps: path.clone(), polynomial: canon });
                if stop_early {
                    return Ok((f, found));
                }
                next.push((h, path));
            }
        }
        frontier = next;
    }
    found.sort_by(|a, b| a.polynomial.cmp(&b.polynomial));
    Ok((f, found))
}

/// Outcome of the substitution procedure for one degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScanRecord {
    pub degree: u32,
    pub found_noninvariant: bool,
    pub witness: Option<Construction>,
}

/// Runs the procedure for each odd degree in `degrees`; the first witness
/// in parameter order is kept.
pub fn scan_uniqueness(degrees: &[u32], depth: usize) -> Result<Vec<ScanRecord>, ConstructError> {
    if let Some(d) = degrees.iter().find(|d| *d % 2 == 0) {
        return Err(ConstructError::InvalidParams(format!("scan degree {d} is even")));
    }
    degrees
        .par_iter()
        .map(|&d| {
            let (_, found) = explore(d, depth, true)?;
            let witness = found.into_iter().next();
            Ok(ScanRecord { degree: d, found_noninvariant: witness.is_some(), witness })
        })
        .collect()
}

/// Degrees `((7 + 4√3)^k + (7 - 4√3)^k) / 2` for `k = 1..=count`, computed in
/// `Z[√3]` and checked against `d_{k+1} = 14 d_k - d_{k-1}`.
pub fn pell_degrees(count: usize) -> Vec<BigInt> {
    let (a0, b0) = (BigInt::from(7), BigInt::from(4));
    let (mut a, mut b) = (BigInt::from(1), BigInt::from(0));
    let mut out: Vec<BigInt> = Vec::with_capacity(count);
    for _ in 0..count {
        // (a + b√3)(7 + 4√3); the conjugate sum is 2a.
        let na = &a * &a0 + BigInt::from(3) * &b * &b0;
        let nb = &a * &b0 + &b * &a0;
        a = na;
        b = nb;
        let n = out.len();
        let prev2 = if n >= 2 { out[n - 2].clone() } else { BigInt::from(1) };
        if n >= 1 {
            assert_eq!(a, BigInt::from(14) * &out[n - 1] - prev2, "recurrence");
        }
        out.push(a.clone());
    }
    out
}

/// Clauses of the nonuniqueness theorem.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Clause {
    /// `d` even.
    Even,
    /// `d ≡ 3 (mod 4)`, `d >= 7`.
    ThreeModFour,
    /// `d` in the Pell sequence.
    Pell,
    /// `d ≡ 1 (mod 6)`, `d > 1`.
    OneModSix,
}

/// For each `1 <= d <= d_max`, the clauses that predict nonuniqueness.
pub fn nonuniqueness_degrees(d_max: u32) -> Vec<(u32, Vec<Clause>)> {
    let mut pell = BTreeSet::new();
    for v in pell_degrees(16) {
        match u32::try_from(&v) {
            Ok(x) if x <= d_max => {
                pell.insert(x);
            }
            _ => break,
        }
    }
    (1..=d_max)
        .map(|d| {
            let mut cs = Vec::new();
            if d % 2 == 0 {
                cs.push(Clause::Even);
            }
            if d % 4 == 3 && d >= 7 {
                cs.push(Clause::ThreeModFour);
            }
            if pell.contains(&d) {
                cs.push(Clause::Pell);
            }
            if d % 6 == 1 && d > 1 {
                cs.push(Clause::OneModSix);
            }
            (d, cs)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> BivariatePoly {
        s.parse().unwrap()
    }

    #[test]
    fn whitney_by_composition() {
        let l = p("x + y");
        assert_eq!(compose_even(&l, &l).unwrap(), p("x + xy + y^2"));
        assert!(matches!(compose_even(&p("x + xy + y^2"), &l), Err(ConstructError::NotSharp(_))));
    }

    #[test]
    fn worked_substitution() {
        let f7 = invariant_sharp(7).unwrap();
        let params = SubstitutionParams { m: 2, j: 3, k: 1, c: Rational::from_integer(7) };
        let cand = substitute(&f7, &params).unwrap();
        assert!(cand.accepted());
        assert_eq!(cand.poly, p("x^7 + 7x^3y^3 + 7x^3y + 7xy^3 + y^7"));
        let zero = SubstitutionParams { c: Rational::zero(), ..params };
        assert_eq!(substitute(&f7, &zero).unwrap().poly, f7);
    }

    #[test]
    fn fast_path_agrees_with_substitute() {
        for d in (3..=15).step_by(2) {
            let f = invariant_sharp(d).unwrap();
            let fast: Vec<_> = accepted_substitutions(&f);
            let slow: Vec<_> = parameter_grid(&f)
                .into_iter()
                .filter(|p| !p.c.is_zero())
                .filter_map(|p| {
                    let c = substitute(&f, &p).unwrap();
                    c.accepted().then_some((p, c.poly))
                })
                .collect();
            assert_eq!(fast, slow, "d={d}");
        }
    }

    #[test]
    fn pell() {
        let got: Vec<String> = pell_degrees(5).iter().map(|v| v.to_string()).collect();
        assert_eq!(got, ["7", "97", "1351", "18817", "262087"]);
    }

    #[test]
    fn nonuniqueness_clauses() {
        let t = nonuniqueness_degrees(100);
        assert_eq!(t[18].1, vec![Clause::ThreeModFour, Clause::OneModSix]);
        assert!(t[20].1.is_empty());
        assert!(t[8].1.is_empty());
        assert!(t[0].1.is_empty());
        assert!(t[96].1.contains(&Clause::Pell));
    }

    #[test]
    fn count_formula() {
        let a = |n: usize| [0, 0, 1, 1, 2, 4, 2, 4, 8][n];
        assert_eq!(even_count_formula(a, 4), 4);
        assert_eq!(even_count_formula(a, 5), 10);
        assert_eq!(even_count_formula(a, 6), 24);
    }
}
