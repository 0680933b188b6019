use std::collections::BTreeMap;

use super::{BuildError, Entity, PlanningModel, Quantity, VarKey};
use crate::problem::VarKind;
use crate::solver::MilpStatus;

/// Solved values in external units (kW, kvar, kWh, p.u. voltage, rad,
/// Skcf/hr, pressure units), keyed semantically.
#[derive(Debug, Clone, PartialEq)]
pub struct DispatchSchedule {
    pub horizon: usize,
    pub segments: usize,
    pub status: MilpStatus,
    pub objective: f64,
    pub values: BTreeMap<VarKey, f64>,
}

impl DispatchSchedule {
    /// Value of a key, 0 when absent (e.g. the reference angle).
    pub fn get(&self, entity: Entity, quantity: Quantity, hour: usize) -> f64 {
        self.values
            .get(&VarKey::new(entity, quantity, hour))
            .copied()
            .unwrap_or(0.0)
    }

    pub fn set(&mut self, entity: Entity, quantity: Quantity, hour: usize, value: f64) {
        self.values.insert(VarKey::new(entity, quantity, hour), value);
    }

    /// Hourly series of one quantity.
    pub fn series(&self, entity: Entity, quantity: Quantity) -> Vec<f64> {
        (0..self.horizon).map(|t| self.get(entity, quantity, t)).collect()
    }
}

/// Map a raw solution vector to a schedule. Values are clamped to their
/// column bounds, binaries rounded, and the objective recomputed.
pub fn extract_solution(
    model: &PlanningModel,
    raw: &[f64],
    solver_objective: f64,
    status: MilpStatus,
) -> Result<DispatchSchedule, BuildError> {
    let n = model.problem.num_variables();
    if raw.len() != n {
        return Err(BuildError::LengthMismatch {
            got: raw.len(),
            expected: n,
        });
    }
    let recomputed = model.problem.objective_value(raw);
    if (recomputed - solver_objective).abs() > 1e-6 * solver_objective.abs().max(1.0) {
        return Err(BuildError::ObjectiveMismatch {
            recomputed,
            reported: solver_objective,
        });
    }
    let mut values = BTreeMap::new();
    for (col, &key) in model.index.keys().iter().enumerate() {
        let var = &model.problem.variables[col];
        let mut v = raw[col];
        if var.kind == VarKind::Binary {
            let r = v.round();
            if (v - r).abs() > 1e-6 {
                return Err(BuildError::NotIntegral {
                    name: var.name.clone(),
                    value: v,
                });
            }
            v = r;
        }
        v = v.clamp(var.lower, var.upper);
        values.insert(key, v * model.scale[col]);
    }
    let mut schedule = DispatchSchedule {
        horizon: model.horizon,
        segments: model.case.costs.pwl_segments,
        status,
        objective: recomputed,
        values,
    };
    // served reactive demand follows the served active demand
    let base = model.base_power();
    for t in 0..model.horizon {
        for (j, hub) in model.case.ac_hubs.iter().enumerate() {
            let (p, q) = (hub.demand_p[t], hub.demand_q[t]);
            let served = if p > 0.0 {
                schedule.get(Entity::AcHub(j), Quantity::Pd, t) * q / p
            } else {
                q * base
            };
            schedule.set(Entity::AcHub(j), Quantity::Qd, t, served);
        }
    }
    Ok(schedule)
}

/// Inverse of [`extract_solution`] on the column keys.
pub fn schedule_to_vector(model: &PlanningModel, schedule: &DispatchSchedule) -> Vec<f64> {
    model
        .index
        .keys()
        .iter()
        .enumerate()
        .map(|(col, k)| schedule.values.get(k).copied().unwrap_or(0.0) / model.scale[col])
        .collect()
}
