//! Piecewise-linear curves and the fixed-point linear gas-flow model.

mod gas;
mod pwl;

pub use gas::{gas_flow_coefficients, weymouth_flow, LinearFlowModel};
pub use pwl::{pwl_approximate, pwl_evaluate, PwlCurve};

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum LinearizeError {
    #[error("at least one segment required")]
    NoSegments,
    #[error("degenerate domain [{lo}, {hi}]")]
    DegenerateDomain { lo: f64, hi: f64 },
    #[error("curve value at x = {x} is not finite")]
    NonFinite { x: f64 },
    #[error("curve is not convex: secant slope drops from {before} to {after} at x = {x}")]
    NotConvex { x: f64, before: f64, after: f64 },
    #[error("x = {x} outside curve domain [{lo}, {hi}]")]
    OutOfDomain { x: f64, lo: f64, hi: f64 },
    #[error("pipe {pipe}: equal linearization pressures ({pressure}) make the flow model singular")]
    SingularPipe { pipe: String, pressure: f64 },
    #[error("pipe {pipe}: linearization pressures and c_p must be positive")]
    InvalidPipe { pipe: String },
}
