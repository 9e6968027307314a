use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use super::{Monomial, PolyError, Support};
use crate::rational::{binomial_q, Rational};

/// A sparse bivariate polynomial with exact rational coefficients.
///
/// Zero coefficients are never stored; the zero polynomial has no terms and
/// no degree.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct BivariatePoly {
    terms: BTreeMap<Monomial, Rational>,
}

impl BivariatePoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(Monomial::ONE, c)
    }

    pub fn x() -> Self {
        Self::monomial(Monomial::new(1, 0), Rational::one())
    }

    pub fn y() -> Self {
        Self::monomial(Monomial::new(0, 1), Rational::one())
    }

    pub fn monomial(m: Monomial, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        BivariatePoly { terms }
    }

    /// Sums repeated monomials and drops zeros.
    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut p = BivariatePoly::zero();
        for (m, c) in terms {
            p.add_term(m, &c);
        }
        p
    }

    /// `(x + y)^n`.
    pub fn line_power(n: u32) -> Self {
        Self::from_terms((0..=n).map(|i| (Monomial::new(n - i, i), binomial_q(n, i))))
    }

    /// `x + y - 1`.
    pub fn line() -> Self {
        Self::from_terms([
            (Monomial::new(1, 0), Rational::one()),
            (Monomial::new(0, 1), Rational::one()),
            (Monomial::ONE, -Rational::one()),
        ])
    }

    pub fn add_term(&mut self, m: Monomial, c: &Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                *existing += c;
                if existing.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c.clone());
            }
        }
    }

    pub fn coeff(&self, m: Monomial) -> Rational {
        self.terms.get(&m).cloned().unwrap_or_default()
    }

    pub fn coeff_ref(&self, m: Monomial) -> Option<&Rational> {
        self.terms.get(&m)
    }

    /// Terms in graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of distinct monomials with nonzero coefficient.
    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(|m| m.degree())
    }

    pub fn support(&self) -> Support {
        Support::new(self.terms.keys().copied())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        BivariatePoly { terms: self.terms.iter().map(|(m, v)| (*m, v * c)).collect() }
    }

    /// Multiplies by the monomial `c * m`.
    pub fn shift(&self, m: Monomial, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        BivariatePoly { terms: self.terms.iter().map(|(t, v)| (t.times(m), v * c)).collect() }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// The homogeneous component of degree `t`.
    pub fn homogeneous_part(&self, t: u32) -> Self {
        BivariatePoly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == t)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    /// Exchanges the roles of `x` and `y`.
    pub fn swap_vars(&self) -> Self {
        BivariatePoly { terms: self.terms.iter().map(|(m, c)| (m.swap(), c.clone())).collect() }
    }

    pub fn is_symmetric(&self) -> bool {
        *self == self.swap_vars()
    }

    /// Of `{p, swap(p)}`, the one whose graded-lex term list compares smaller.
    pub fn canonical_form(&self) -> Self {
        let swapped = self.swap_vars();
        if swapped.cmp_terms(self).is_lt() {
            swapped
        } else {
            self.clone()
        }
    }

    /// Lexicographic comparison of the sorted term lists (monomial, then
    /// coefficient).
    pub fn cmp_terms(&self, other: &Self) -> std::cmp::Ordering {
        self.terms.iter().cmp(other.terms.iter())
    }

    /// Smallest coefficient together with its monomial.
    pub fn min_coefficient(&self) -> Option<(Monomial, &Rational)> {
        self.terms.iter().min_by(|a, b| a.1.cmp(b.1)).map(|(m, c)| (*m, c))
    }

    /// `p(x, 1 - x)`, expanding `(1 - x)^k` exactly for every term.
    pub fn restrict_to_line(&self) -> UnivariatePoly {
        let degree = self.degree().unwrap_or(0) as usize;
        let mut coeffs = vec![Rational::zero(); degree + 1];
        for (m, c) in &self.terms {
            for i in 0..=m.k {
                let mut v = c * binomial_q(m.k, i);
                if i % 2 == 1 {
                    v = -v;
                }
                coeffs[(m.j + i) as usize] += v;
            }
        }
        UnivariatePoly::new(coeffs)
    }

    /// Evaluates at a rational point.
    pub fn eval(&self, x: &Rational, y: &Rational) -> Rational {
        self.terms.iter().map(|(m, c)| c * x.pow(m.j) * y.pow(m.k)).sum()
    }

    /// The quotient `q` with `p - 1 = (x + y - 1) q`.
    ///
    /// Fails with [`PolyError::NotDivisible`] when `p` is not identically 1 on
    /// the line `x + y = 1`.
    pub fn quotient_by_line(&self) -> Result<BivariatePoly, PolyError> {
        let r = self - &BivariatePoly::one();
        let Some(d) = r.degree() else {
            return Ok(BivariatePoly::zero());
        };
        if d == 0 {
            return Err(PolyError::NotDivisible);
        }
        // (x+y-1) q in degree t is (x+y) q_{t-1} - q_t, so descending from the
        // top each q_{t-1} = (r_t + q_t) / (x+y) must divide exactly.
        let mut q = BivariatePoly::zero();
        let mut upper = BivariatePoly::zero();
        for t in (1..=d).rev() {
            let target = &r.homogeneous_part(t) + &upper;
            let part = divide_homogeneous_by_sum(&target, t)?;
            for (m, c) in part.terms() {
                q.add_term(*m, c);
            }
            upper = part;
        }
        // Degree 0: -q_0 must equal r_0.
        if upper.coeff(Monomial::ONE) != -r.coeff(Monomial::ONE) {
            return Err(PolyError::NotDivisible);
        }
        Ok(q)
    }
}

/// Divides a homogeneous polynomial of degree `t >= 1` by `x + y`.
fn divide_homogeneous_by_sum(h: &BivariatePoly, t: u32) -> Result<BivariatePoly, PolyError> {
    // h = sum_i h_i x^{t-i} y^i, g = sum_i g_i x^{t-1-i} y^i,
    // h_i = g_i + g_{i-1}.
    let mut g = BivariatePoly::zero();
    let mut prev = Rational::zero();
    for i in 0..t {
        let gi = h.coeff(Monomial::new(t - i, i)) - &prev;
        g.add_term(Monomial::new(t - 1 - i, i), &gi);
        prev = gi;
    }
    if h.coeff(Monomial::new(0, t)) != prev {
        return Err(PolyError::NotDivisible);
    }
    Ok(g)
}

impl Add<&BivariatePoly> for &BivariatePoly {
    type Output = BivariatePoly;
    fn add(self, rhs: &BivariatePoly) -> BivariatePoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, c);
        }
        out
    }
}

impl Sub<&BivariatePoly> for &BivariatePoly {
    type Output = BivariatePoly;
    fn sub(self, rhs: &BivariatePoly) -> BivariatePoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, &-c);
        }
        out
    }
}

impl Mul<&BivariatePoly> for &BivariatePoly {
    type Output = BivariatePoly;
    fn mul(self, rhs: &BivariatePoly) -> BivariatePoly {
        let mut out = BivariatePoly::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &rhs.terms {
                out.add_term(a.times(*b), &(ca * cb));
            }
        }
        out
    }
}

impl Neg for &BivariatePoly {
    type Output = BivariatePoly;
    fn neg(self) -> BivariatePoly {
        BivariatePoly { terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect() }
    }
}

macro_rules! owned_binop {
    ($tr:ident, $method:ident) => {
        impl $tr<BivariatePoly> for BivariatePoly {
            type Output = BivariatePoly;
            fn $method(self, rhs: BivariatePoly) -> BivariatePoly {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&BivariatePoly> for BivariatePoly {
            type Output = BivariatePoly;
            fn $method(self, rhs: &BivariatePoly) -> BivariatePoly {
                (&self).$method(rhs)
            }
        }
    };
}

owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl PartialOrd for BivariatePoly {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for BivariatePoly {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.cmp_terms(other)
    }
}

/// A univariate polynomial in `x`, coefficients indexed by power.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct UnivariatePoly {
    coeffs: Vec<Rational>,
}

impl UnivariatePoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Rational::is_zero) {
            coeffs.pop();
        }
        UnivariatePoly { coeffs }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Identically the constant 1.
    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn mul(&self, other: &UnivariatePoly) -> UnivariatePoly {
        if self.is_zero() || other.is_zero() {
            return UnivariatePoly::default();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UnivariatePoly::new(out)
    }
}

impl std::fmt::Display for UnivariatePoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let as_bivariate = BivariatePoly::from_terms(
            self.coeffs.iter().enumerate().map(|(i, c)| (Monomial::new(i as u32, 0), c.clone())),
        );
        write!(f, "{as_bivariate}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> BivariatePoly {
        s.parse().unwrap()
    }

    #[test]
    fn binomial_square() {
        let s = &BivariatePoly::x() + &BivariatePoly::y();
        assert_eq!(&s * &s, p("x^2 + 2xy + y^2"));
        assert!((&s * &BivariatePoly::zero()).is_zero());
        assert_eq!(BivariatePoly::zero().degree(), None);
    }

    #[test]
    fn line_times_quotient() {
        let q = p("y^2 + y - xy + x^2 + x + 1");
        let prod = &BivariatePoly::line() * &q;
        assert_eq!(prod, p("x^3 + 3xy + y^3 - 1"));
    }

    #[test]
    fn restriction() {
        assert!(p("x + y").restrict_to_line().is_one());
        assert!(p("x^3 + 3xy + y^3").restrict_to_line().is_one());
        let r = p("x^2").restrict_to_line();
        assert_eq!(r.coeffs(), &[Rational::zero(), Rational::zero(), Rational::one()]);
    }

    #[test]
    fn quotient() {
        assert_eq!(p("x^3 + 3xy + y^3").quotient_by_line().unwrap(), p("y^2 + y - xy + x^2 + x + 1"));
        assert_eq!(p("x + y").quotient_by_line().unwrap(), BivariatePoly::one());
        assert_eq!(p("x^2").quotient_by_line(), Err(PolyError::NotDivisible));
        assert_eq!(p("2").quotient_by_line(), Err(PolyError::NotDivisible));
        assert_eq!(p("x + y + 1").quotient_by_line(), Err(PolyError::NotDivisible));
        assert!(BivariatePoly::one().quotient_by_line().unwrap().is_zero());
    }

    #[test]
    fn swapping() {
        assert_eq!(p("x + xy + y^2").swap_vars(), p("y + xy + x^2"));
        let f3 = p("x^3 + 3xy + y^3");
        assert_eq!(f3.swap_vars(), f3);
        let w = p("x + xy + y^2");
        assert_eq!(w.canonical_form(), w.swap_vars().canonical_form());
    }
}
