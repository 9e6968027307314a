//! Mixed 0-1 feasibility backend: exact simplex relaxations inside a
//! depth-first branch and bound.

mod branch;
pub mod lp;
mod model;

pub use branch::{enumerate_feasible, enumerate_mip, Feasible, MipConfig};
pub use model::{
    build_model, build_model_with_terms, coefficient_bound, lp_feasible, node_tableau, weak_bound, BranchNode,
    MipModel,
};
