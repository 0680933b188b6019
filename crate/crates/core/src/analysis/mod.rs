//! Post-solve checks, summary metrics and parameter sweeps.

mod metrics;
mod residuals;
mod sweep;
mod weymouth;

pub use metrics::{compute_metrics, HourlyMetrics, SummaryMetrics};
pub use residuals::{balance_residuals, turbine_fuel, FamilyResidual, ResidualReport};
pub use sweep::{remove_storage, resolve_path, set_parameter, sweep, SweepError, SweepRow};
pub use weymouth::{pipe_linearization_error, weymouth_error, PipeError};

use crate::builder::linearize_curve;
use crate::linearize::PwlCurve;
use crate::model::{GasSupplier, Microturbine};

/// Fuel curve of a turbine over its kW range, as used by the builder.
pub fn fuel_curve_kw(turbine: &Microturbine, segments: usize) -> Option<PwlCurve> {
    linearize_curve(&turbine.fuel_curve, turbine.p_min, turbine.p_max, segments).ok().flatten()
}

pub fn supplier_cost_curve(supplier: &GasSupplier, segments: usize) -> Option<PwlCurve> {
    linearize_curve(&supplier.cost_curve, supplier.v_min, supplier.v_max, segments).ok().flatten()
}
