//! Enumeration, verification and construction of sharp polynomials: bivariate
//! polynomials with nonnegative coefficients that are identically 1 on the
//! line `x + y = 1` and have the fewest terms possible for their degree.

pub mod constructor;
pub mod diagram;
pub mod exactpoly;
pub mod nullsearch;
pub mod rational;

pub use exactpoly::{BivariatePoly, Monomial, Support};
pub use rational::Rational;
pub mod harness;
pub mod mipsearch;
