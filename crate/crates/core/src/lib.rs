//! Day-ahead operation planning for hybrid AC/DC microgrids coupled to a
//! natural-gas network, formulated as a MILP and solved by a built-in
//! branch-and-bound engine.

pub mod analysis;
pub mod builder;
pub mod io;
pub mod linearize;
pub mod model;
pub mod planner;
pub mod problem;
pub mod solver;

pub use planner::{plan, plan_with, PlanError, PlanOptions, PlanOutcome};
