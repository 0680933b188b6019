//! Reference MILP engine: revised bounded simplex plus branch-and-bound.

mod backend;
mod bnb;
mod lu;
mod mps;
mod simplex;

pub use backend::{BackendRegistry, MilpBackend, ReferenceBackend, BACKEND_ENV, REFERENCE_BACKEND};
pub use bnb::{solve_milp, BnbOptions, Branching, MilpSolution, MilpStatus};
pub use mps::{to_mps_string, write_mps};
pub use simplex::{solve_lp, Basis, LpModel, LpOptions, LpSolution, LpStatus};

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum SolverError {
    #[error("unknown solver backend `{0}`")]
    UnknownBackend(String),
}
