use serde::Serialize;

use super::{BivariatePoly, Monomial, UnivariatePoly};
use crate::rational::Rational;

/// Outcome of testing `p ∈ H(2, d)`.
///
/// The three conditions are computed independently; a failure carries the
/// offending data rather than an error.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MembershipReport {
    pub expected_degree: u32,
    pub actual_degree: Option<u32>,
    /// `p(x, 1 - x) ≡ 1`.
    pub on_line: bool,
    pub nonnegative: bool,
    pub degree_matches: bool,
    /// `p(x, 1 - x) - 1`, zero exactly when `on_line`.
    pub line_residual: UnivariatePoly,
    /// The most negative coefficient, if any coefficient is negative.
    pub negative_witness: Option<(Monomial, Rational)>,
}

impl MembershipReport {
    pub fn is_member(&self) -> bool {
        self.on_line && self.nonnegative && self.degree_matches
    }

    /// Human-readable reasons for non-membership.
    pub fn failures(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !self.on_line {
            out.push(format!("p(x,1-x) - 1 = {} (not identically zero)", self.line_residual));
        }
        if let Some((m, c)) = &self.negative_witness {
            out.push(format!("negative coefficient {c} on {m}"));
        }
        if !self.degree_matches {
            match self.actual_degree {
                Some(a) => out.push(format!("degree {a}, expected {}", self.expected_degree)),
                None => out.push("zero polynomial".to_string()),
            }
        }
        out
    }
}

pub fn is_member(p: &BivariatePoly, d: u32) -> MembershipReport {
    let restricted = p.restrict_to_line();
    let mut residual = restricted.coeffs().to_vec();
    if residual.is_empty() {
        residual.push(Rational::zero());
    }
    residual[0] -= Rational::one();
    let line_residual = UnivariatePoly::new(residual);
    let negative_witness = p
        .min_coefficient()
        .filter(|(_, c)| c.is_negative())
        .map(|(m, c)| (m, c.clone()));
    MembershipReport {
        expected_degree: d,
        actual_degree: p.degree(),
        on_line: line_residual.is_zero(),
        nonnegative: negative_witness.is_none(),
        degree_matches: p.degree() == Some(d),
        line_residual,
        negative_witness,
    }
}

/// The least number of terms a member of `H(2, d)` can have:
/// `(d + 3) / 2` for odd `d`, `(d + 4) / 2` for even `d >= 2`.
pub fn minimal_term_count(d: u32) -> usize {
    (d as usize + 4) / 2
}

/// Member of `H(2, d)` with the least possible number of terms.
pub fn is_sharp(p: &BivariatePoly, d: u32) -> bool {
    d >= 1 && is_member(p, d).is_member() && p.term_count() == minimal_term_count(d)
}

/// Summary used by the CLI `verify` command and the bindings.
#[derive(Clone, Debug, Serialize)]
pub struct VerifySummary {
    pub member: bool,
    pub sharp: bool,
    pub terms: usize,
    pub minimal_terms: usize,
    pub failures: Vec<String>,
}

pub fn verify(p: &BivariatePoly, d: u32) -> VerifySummary {
    let report = is_member(p, d);
    VerifySummary {
        member: report.is_member(),
        sharp: is_sharp(p, d),
        terms: p.term_count(),
        minimal_terms: minimal_term_count(d),
        failures: report.failures(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> BivariatePoly {
        s.parse().unwrap()
    }

    #[test]
    fn cubic_member() {
        let r = is_member(&p("x^3 + 3xy + y^3"), 3);
        assert!(r.is_member());
        assert!(is_sharp(&p("x^3 + 3xy + y^3"), 3));
    }

    #[test]
    fn degree_mismatch() {
        let r = is_member(&p("x + y"), 3);
        assert!(r.on_line && r.nonnegative);
        assert!(!r.degree_matches);
        assert!(!r.is_member());
    }

    #[test]
    fn negativity_witness() {
        // x(x + y - 1) vanishes on the line and brings in -x.
        let bad = p("x^3 + 3xy + y^3") + BivariatePoly::line().shift(Monomial::new(1, 0), &Rational::one());
        let r = is_member(&bad, 3);
        assert!(r.on_line);
        assert!(!r.nonnegative);
        assert_eq!(r.negative_witness, Some((Monomial::new(1, 0), -Rational::one())));
    }

    #[test]
    fn off_line() {
        let r = is_member(&p("x^2 + y^2"), 2);
        assert!(!r.on_line);
        assert_eq!(r.failures().len(), 1);
    }
}
