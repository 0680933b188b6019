use serde::{Deserialize, Serialize};

use crate::builder::{renewable_quantities, DispatchSchedule, Entity, Quantity};
use crate::model::MicrogridCase;

use super::supplier_cost_curve;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct HourlyMetrics {
    pub lost_load_kw: Vec<f64>,
    pub heat_demand_skcf_hr: Vec<f64>,
    pub heat_served_skcf_hr: Vec<f64>,
    pub generation_kw: Vec<f64>,
    pub discharge_kw: Vec<f64>,
    pub charge_kw: Vec<f64>,
    pub gas_supply_skcf_hr: Vec<f64>,
    pub fuel_cost: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct SummaryMetrics {
    pub lost_load_kwh: f64,
    pub heat_served_fraction: f64,
    /// Gas supply cost in dollars.
    pub fuel_cost: f64,
    pub degradation_cost: f64,
    /// Turbine and renewable output.
    pub total_generation_kwh: f64,
    pub lost_load_cost: f64,
    pub heat_shed_cost: f64,
    /// Sum of the four cost terms; equals the objective.
    pub total_cost: f64,
    pub hourly: HourlyMetrics,
}

/// Metrics from a schedule. `case` is in physical units; supply cost uses the
/// same PWL curves as the objective.
pub fn compute_metrics(case: &MicrogridCase, schedule: &DispatchSchedule) -> SummaryMetrics {
    let horizon = schedule.horizon;
    let mut h = HourlyMetrics::default();
    let curves: Vec<_> = case.suppliers.iter().map(|s| supplier_cost_curve(s, schedule.segments)).collect();
    for t in 0..horizon {
        let get = |e, q| schedule.get(e, q, t);
        let lost: f64 = case
            .ac_hubs
            .iter()
            .enumerate()
            .map(|(j, hub)| hub.demand_p[t] - get(Entity::AcHub(j), Quantity::Pd))
            .chain(
                case.dc_hubs
                    .iter()
                    .enumerate()
                    .map(|(j, hub)| hub.demand_p[t] - get(Entity::DcHub(j), Quantity::Pd)),
            )
            .sum();
        h.lost_load_kw.push(lost);
        h.heat_demand_skcf_hr.push(case.heat_demand(t));
        h.heat_served_skcf_hr
            .push((0..case.gas_hubs.len()).map(|n| get(Entity::GasHub(n), Quantity::Gd)).sum());
        let gen: f64 = (0..case.turbines.len()).map(|g| get(Entity::Turbine(g), Quantity::Pg)).sum::<f64>()
            + case
                .renewables
                .iter()
                .enumerate()
                .map(|(r, u)| get(Entity::Renewable(r), renewable_quantities(u.kind).0))
                .sum::<f64>();
        h.generation_kw.push(gen);
        h.discharge_kw.push((0..case.batteries.len()).map(|k| get(Entity::Battery(k), Quantity::Pdc)).sum());
        h.charge_kw.push((0..case.batteries.len()).map(|k| get(Entity::Battery(k), Quantity::Pch)).sum());
        h.gas_supply_skcf_hr
            .push((0..case.suppliers.len()).map(|s| get(Entity::Supplier(s), Quantity::Vgs)).sum());
        let cost: f64 = case
            .suppliers
            .iter()
            .enumerate()
            .map(|(s, sup)| match &curves[s] {
                Some(c) => {
                    c.start_value()
                        + c.segments()
                            .enumerate()
                            .map(|(k, seg)| seg.slope * get(Entity::Supplier(s), Quantity::CostSegment(k)))
                            .sum::<f64>()
                }
                None => sup.cost_curve.eval(sup.v_min),
            })
            .sum();
        h.fuel_cost.push(cost);
    }

    let sum = |v: &[f64]| v.iter().sum::<f64>();
    let lost_load_kwh = sum(&h.lost_load_kw);
    let heat_demand = sum(&h.heat_demand_skcf_hr);
    let heat_served = sum(&h.heat_served_skcf_hr);
    let heat_served_fraction = if heat_demand > 0.0 {
        (heat_served / heat_demand).clamp(0.0, 1.0)
    } else {
        1.0
    };
    let fuel_cost = sum(&h.fuel_cost);
    let degradation_cost = case.costs.beta * sum(&h.discharge_kw);
    let lost_load_cost = case.costs.voll_e * lost_load_kwh;
    let heat_shed_cost = case.costs.voll_g * (heat_demand - heat_served);
    SummaryMetrics {
        lost_load_kwh,
        heat_served_fraction,
        fuel_cost,
        degradation_cost,
        total_generation_kwh: sum(&h.generation_kw),
        lost_load_cost,
        heat_shed_cost,
        total_cost: fuel_cost + degradation_cost + lost_load_cost + heat_shed_cost,
        hourly: h,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::fixtures::toy_case;
    use crate::solver::MilpStatus;

    fn served_schedule(case: &MicrogridCase) -> DispatchSchedule {
        let mut s = DispatchSchedule {
            horizon: case.horizon,
            segments: case.costs.pwl_segments,
            status: MilpStatus::Optimal,
            objective: 0.0,
            values: Default::default(),
        };
        for t in 0..case.horizon {
            for (j, hub) in case.ac_hubs.iter().enumerate() {
                s.set(Entity::AcHub(j), Quantity::Pd, t, hub.demand_p[t]);
            }
            for (j, hub) in case.dc_hubs.iter().enumerate() {
                s.set(Entity::DcHub(j), Quantity::Pd, t, hub.demand_p[t]);
            }
            for (n, hub) in case.gas_hubs.iter().enumerate() {
                s.set(Entity::GasHub(n), Quantity::Gd, t, hub.heat_demand[t]);
            }
        }
        s
    }

    #[test]
    fn full_service() {
        let case = toy_case();
        let m = compute_metrics(&case, &served_schedule(&case));
        assert_eq!(m.lost_load_kwh, 0.0);
        assert_eq!(m.heat_served_fraction, 1.0);
        assert_eq!(m.lost_load_cost, 0.0);
        assert_eq!(m.hourly.lost_load_kw.len(), case.horizon);
    }

    #[test]
    fn degradation_from_discharge() {
        let case = toy_case();
        let mut s = served_schedule(&case);
        for (t, kw) in [(2, 12.0), (9, 18.0)] {
            s.set(Entity::Battery(0), Quantity::Pdc, t, kw);
        }
        let m = compute_metrics(&case, &s);
        assert!((m.degradation_cost - 15.0).abs() < 1e-12);
    }

    #[test]
    fn no_heat_demand_counts_as_served() {
        let mut case = toy_case();
        for h in &mut case.gas_hubs {
            h.heat_demand.iter_mut().for_each(|v| *v = 0.0);
        }
        let m = compute_metrics(&case, &served_schedule(&case));
        assert_eq!(m.heat_served_fraction, 1.0);
    }
}
