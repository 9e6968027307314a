//! Exact bivariate polynomial arithmetic and membership in `H(2, d)`, the set
//! of degree-`d` polynomials with nonnegative coefficients that equal 1 on
//! the line `x + y = 1`.

mod invariant;
mod membership;
mod monomial;
mod poly;
mod text;

pub use invariant::{
    conjugate_pair_expansion, invariant_coefficients, invariant_even, invariant_even_positive_part,
    invariant_sharp,
};
pub use membership::{is_member, is_sharp, minimal_term_count, verify, MembershipReport, VerifySummary};
pub use monomial::{Monomial, Support};
pub use poly::{BivariatePoly, UnivariatePoly};
pub use text::ParsePolyError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("p - 1 is not divisible by x + y - 1 (p is not identically 1 on the line)")]
    NotDivisible,
    #[error("degree {degree} is not {expected}")]
    InvalidDegree { degree: u32, expected: &'static str },
}
