use super::check::{basis_entry, SupportSystem};
use crate::exactpoly::{BivariatePoly, Monomial, Support};
use crate::mipsearch::lp::{self, Bounds, LinearSystem, LpError, LpOutcome};
use crate::rational::{binomial_q, Rational};

/// Two distinct members of `H(2, d)` sharing a support whose `A'` kernel has
/// dimension at least 2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyWitness {
    pub support: Support,
    pub nullspace_dim: usize,
    pub members: [BivariatePoly; 2],
}

/// Looks for a point of the kernel that is strictly positive on the support.
///
/// The cone is homogeneous, so strict positivity is normalized to `>= 1` on
/// every support coefficient and on the `(x+y)^d` coordinate.
pub fn find_family(
    system: &SupportSystem<'_>,
    kernel: &[Vec<Rational>],
) -> Result<Option<FamilyWitness>, LpError> {
    let d = system.d;
    let n = system.lower.len();
    let mut lp_sys = LinearSystem::new(n + 1);
    lp_sys.var_bounds = vec![Bounds::at_least(Rational::one()); n + 1];
    for row in Monomial::of_degree(d) {
        let mut coeffs: Vec<(usize, Rational)> = system
            .lower
            .iter()
            .enumerate()
            .map(|(i, m)| (i, basis_entry(d, row.j, *m)))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        coeffs.push((n, binomial_q(d, row.j)));
        let b = if system.support.contains(row) {
            Bounds::at_least(Rational::one())
        } else {
            Bounds::fixed(Rational::zero())
        };
        lp_sys.add_row(coeffs, b);
    }
    let LpOutcome::Feasible(point) = lp::solve(&lp_sys)? else {
        return Ok(None);
    };
    let t = point[n].clone();
    let scaled: Vec<Rational> = point.iter().map(|c| c / &t).collect();
    let first = system.polynomial(&scaled);

    // A kernel direction with zero (x+y)^d coordinate.
    let anchor = kernel.iter().find(|v| !v[n].is_zero()).expect("feasible point has t > 0");
    let other = kernel.iter().find(|v| !std::ptr::eq(*v, anchor)).expect("dimension >= 2");
    let ratio = &other[n] / &anchor[n];
    let w: Vec<Rational> = other.iter().zip(anchor).map(|(o, a)| o - &ratio * a).collect();
    let direction = system.polynomial(&w);
    let mut eps = Rational::one();
    for (m, c) in direction.terms() {
        if c.is_negative() {
            let cap = first.coeff(*m) / (c.abs() * Rational::from_integer(2));
            if cap < eps {
                eps = cap;
            }
        }
    }
    let second = &first + &direction.scale(&eps);
    Ok(Some(FamilyWitness { support: system.support.clone(), nullspace_dim: kernel.len(), members: [first, second] }))
}
