//! Linear-algebra backend: supports are tested through the kernel of a small
//! exact matrix, with modular rank as a cheap first filter.

mod check;
mod constraints;
mod enumerate;
mod family;
mod matrix;
pub mod modp;

pub use check::{
    basis_entry, basis_poly, build_matrix, check_support, check_support_with, classify, column_index,
    exact_stage, lower_column_count, modular_prefilter, support_hash, support_submatrix, AuditMode,
    ModularVerdict, SupportResult, SupportStatus, SupportSystem, PREFILTER_PRIMES,
};
pub use constraints::{ConstraintSet, ParseShardError, ShardSpec};
pub use enumerate::{default_constraints, enumerate_sharp, enumerate_with_terms, exact_only, SearchConfig, SearchError};
pub use family::{find_family, FamilyWitness};
pub use matrix::{primitive, rank_mod_rows, RationalMatrix};
