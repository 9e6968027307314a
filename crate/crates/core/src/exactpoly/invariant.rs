//! The group-invariant family
//! `f_d = ((x + √(x²+4y))/2)^d + ((x - √(x²+4y))/2)^d + (-1)^{d+1} y^d`.

use super::{BivariatePoly, Monomial, PolyError};
use crate::rational::{binomial_q, Rational};

/// `f_d` for odd `d`, from the closed-form coefficients: the coefficient of
/// `x^{d-2s} y^s` is `(d/s) C(d-1-s, s-1)` for `s >= 1`, plus `x^d + y^d`.
pub fn invariant_sharp(d: u32) -> Result<BivariatePoly, PolyError> {
    if d == 0 || d.is_multiple_of(2) {
        return Err(PolyError::InvalidDegree { degree: d, expected: "odd positive" });
    }
    let mut terms = vec![(Monomial::new(d, 0), Rational::one()), (Monomial::new(0, d), Rational::one())];
    for s in 1..=(d - 1) / 2 {
        let c = Rational::new(d as i64, s as i64) * binomial_q(d - 1 - s, s - 1);
        terms.push((Monomial::new(d - 2 * s, s), c));
    }
    Ok(BivariatePoly::from_terms(terms))
}

/// `f_m` for even `m`. Not a member of `H(2, m)`: its `y^m` coefficient is
/// `-1`. Still identically 1 on `x + y = 1`.
pub fn invariant_even(m: u32) -> Result<BivariatePoly, PolyError> {
    if m == 0 || m % 2 == 1 {
        return Err(PolyError::InvalidDegree { degree: m, expected: "even positive" });
    }
    Ok(conjugate_pair_expansion(m))
}

/// `f_m + y^m` for even `m`: the nonnegative part of `f_m`.
pub fn invariant_even_positive_part(m: u32) -> Result<BivariatePoly, PolyError> {
    let f = invariant_even(m)?;
    Ok(&f + &BivariatePoly::monomial(Monomial::new(0, m), Rational::one()))
}

/// Direct expansion of the defining formula for any `d >= 1`.
///
/// With `a = x/2`, `b = √(x²+4y)/2`, the sum `(a+b)^d + (a-b)^d` keeps only
/// even powers of `b`, and `b² = (x² + 4y)/4` is polynomial.
pub fn conjugate_pair_expansion(d: u32) -> BivariatePoly {
    let disc = BivariatePoly::from_terms([
        (Monomial::new(2, 0), Rational::one()),
        (Monomial::new(0, 1), Rational::from_integer(4)),
    ]);
    let mut sum = BivariatePoly::zero();
    let mut disc_pow = BivariatePoly::one();
    for i in (0..=d).step_by(2) {
        let term = disc_pow.shift(Monomial::new(d - i, 0), &binomial_q(d, i));
        sum = &sum + &term;
        disc_pow = &disc_pow * &disc;
    }
    let two_pow = Rational::from_bigint(num_bigint::BigInt::from(2).pow(d - 1));
    let mut f = sum.scale(&two_pow.recip());
    let sign = if d % 2 == 1 { Rational::one() } else { -Rational::one() };
    f.add_term(Monomial::new(0, d), &sign);
    f
}

/// Integer coefficient list of `f_d` (odd `d`) indexed by `s`, including the
/// final `y^d` entry. Used by congruence checks.
pub fn invariant_coefficients(d: u32) -> Result<Vec<num_bigint::BigInt>, PolyError> {
    let f = invariant_sharp(d)?;
    let mut out: Vec<num_bigint::BigInt> = (0..=(d - 1) / 2)
        .map(|s| {
            let c = f.coeff(Monomial::new(d - 2 * s, s));
            debug_assert!(c.is_integer());
            c.numer()
        })
        .collect();
    out.push(num_bigint::BigInt::from(1));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::{is_member, BivariatePoly};
    use num_bigint::BigInt;
    use num_traits::Zero;

    fn p(s: &str) -> BivariatePoly {
        s.parse().unwrap()
    }

    #[test]
    fn small_members() {
        assert_eq!(invariant_sharp(1).unwrap(), p("x + y"));
        assert_eq!(invariant_sharp(3).unwrap(), p("x^3 + 3xy + y^3"));
        assert_eq!(invariant_sharp(7).unwrap(), p("x^7 + 7x^5y + 14x^3y^2 + 7xy^3 + y^7"));
        assert!(invariant_sharp(4).is_err());
        assert!(invariant_sharp(0).is_err());
    }

    #[test]
    fn even_family() {
        let f2 = invariant_even(2).unwrap();
        assert_eq!(f2, p("x^2 + 2y - y^2"));
        assert!(f2.restrict_to_line().is_one());
        // (a+b)^4 + (a-b)^4 with a = x/2, b² = (x²+4y)/4 gives x^4 + 4x^2y + 2y^2, then - y^4.
        let f4 = invariant_even(4).unwrap();
        assert_eq!(f4, p("x^4 + 4x^2y + 2y^2 - y^4"));
        assert!(f4.restrict_to_line().is_one());
        assert!(invariant_even(3).is_err());
    }

    #[test]
    fn closed_form_matches_expansion() {
        for d in (1..=25).step_by(2) {
            assert_eq!(invariant_sharp(d).unwrap(), conjugate_pair_expansion(d), "d={d}");
        }
    }

    #[test]
    fn members_with_minimal_terms() {
        for d in (1..=25).step_by(2) {
            let f = invariant_sharp(d).unwrap();
            assert!(is_member(&f, d).is_member(), "d={d}");
            assert_eq!(f.term_count() as u32, (d + 3) / 2);
        }
    }

    #[test]
    fn prime_congruence() {
        for d in [3u32, 5, 7, 11, 13] {
            let coeffs = invariant_coefficients(d).unwrap();
            let mixed = &coeffs[1..coeffs.len() - 1];
            assert!(mixed.iter().all(|c| (c % BigInt::from(d)).is_zero()), "d={d}");
        }
        // f_9 = x^9 + 9x^7y + 27x^5y^2 + 30x^3y^3 + 9xy^4 + y^9 and 9 ∤ 30.
        let coeffs = invariant_coefficients(9).unwrap();
        assert_eq!(coeffs[3], BigInt::from(30));
        assert!(coeffs[1..coeffs.len() - 1].iter().any(|c| !(c % BigInt::from(9)).is_zero()));
    }
}
