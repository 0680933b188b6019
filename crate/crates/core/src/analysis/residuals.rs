use serde::Serialize;

use crate::builder::{renewable_quantities, DispatchSchedule, Entity, Quantity};
use crate::linearize::PwlCurve;
use crate::model::{Incidence, MicrogridCase, Network};

use super::fuel_curve_kw;

/// Largest absolute residual of one balance family and where it occurs.
#[derive(Debug, Clone, PartialEq, Serialize, Default)]
pub struct FamilyResidual {
    pub max_abs: f64,
    pub hub: String,
    pub hour: usize,
}

impl FamilyResidual {
    fn record(&mut self, value: f64, hub: &str, hour: usize) {
        if value.abs() > self.max_abs {
            self.max_abs = value.abs();
            self.hub = hub.to_string();
            self.hour = hour;
        }
    }
}

/// Balance residuals in kW, kvar and Skcf/hr.
#[derive(Debug, Clone, PartialEq, Serialize, Default)]
pub struct ResidualReport {
    pub ac_active: FamilyResidual,
    pub ac_reactive: FamilyResidual,
    pub dc: FamilyResidual,
    pub gas: FamilyResidual,
}

impl ResidualReport {
    pub fn max(&self) -> f64 {
        [&self.ac_active, &self.ac_reactive, &self.dc, &self.gas]
            .iter()
            .map(|f| f.max_abs)
            .fold(0.0, f64::max)
    }
}

/// Residuals of the AC active/reactive, DC and gas nodal balances evaluated
/// on the schedule. `case` is in physical units.
pub fn balance_residuals(case: &MicrogridCase, schedule: &DispatchSchedule) -> ResidualReport {
    let mut report = ResidualReport::default();
    let Ok(inc) = Incidence::build(case) else {
        return report;
    };
    let Ok(y) = case.admittance() else {
        return report;
    };
    let base = case.base.power;
    let n = case.ac_hubs.len();
    let fuel: Vec<Option<PwlCurve>> = case.turbines.iter().map(|g| fuel_curve_kw(g, schedule.segments)).collect();

    for t in 0..schedule.horizon {
        let get = |e, q| schedule.get(e, q, t);
        let v: Vec<f64> = (0..n).map(|j| get(Entity::AcHub(j), Quantity::V)).collect();
        let th: Vec<f64> = (0..n).map(|j| get(Entity::AcHub(j), Quantity::Theta)).collect();
        for j in 0..n {
            let mut p_inj = (2.0 * v[j] - 1.0) * y.g[j][j];
            let mut q_inj = -(2.0 * v[j] - 1.0) * y.b[j][j];
            for o in (0..n).filter(|&o| o != j) {
                let dth = th[j] - th[o];
                p_inj += y.g[j][o] * (v[j] + v[o] - 1.0) + y.b[j][o] * dth;
                q_inj += y.g[j][o] * dth - y.b[j][o] * (v[j] + v[o] - 1.0);
            }
            let mut p = -get(Entity::AcHub(j), Quantity::Pd) - base * p_inj;
            let mut q = -get(Entity::AcHub(j), Quantity::Qd) - base * q_inj;
            for (g, &(net, h)) in inc.turbine_hub.iter().enumerate() {
                if net == Network::Ac && h == j {
                    p += get(Entity::Turbine(g), Quantity::Pg);
                    q += get(Entity::Turbine(g), Quantity::Qg);
                }
            }
            for (r, &(net, h)) in inc.renewable_hub.iter().enumerate() {
                if net == Network::Ac && h == j {
                    let (pq, qq) = renewable_quantities(case.renewables[r].kind);
                    p += get(Entity::Renewable(r), pq);
                    q += get(Entity::Renewable(r), qq);
                }
            }
            for (c, &(a, _)) in inc.inverter_hubs.iter().enumerate() {
                if a == j {
                    p += get(Entity::Inverter(c), Quantity::Pc);
                    q += get(Entity::Inverter(c), Quantity::Qc);
                }
            }
            report.ac_active.record(p, &case.ac_hubs[j].id, t);
            report.ac_reactive.record(q, &case.ac_hubs[j].id, t);
        }

        for (j, hub) in case.dc_hubs.iter().enumerate() {
            let mut p = -get(Entity::DcHub(j), Quantity::Pd);
            for (k, &h) in inc.battery_hub.iter().enumerate() {
                if h == j {
                    p += get(Entity::Battery(k), Quantity::Pdc) - get(Entity::Battery(k), Quantity::Pch);
                }
            }
            for (g, &(net, h)) in inc.turbine_hub.iter().enumerate() {
                if net == Network::Dc && h == j {
                    p += get(Entity::Turbine(g), Quantity::Pg);
                }
            }
            for (r, &(net, h)) in inc.renewable_hub.iter().enumerate() {
                if net == Network::Dc && h == j {
                    p += get(Entity::Renewable(r), renewable_quantities(case.renewables[r].kind).0);
                }
            }
            for (c, &(_, d)) in inc.inverter_hubs.iter().enumerate() {
                if d == j {
                    p -= get(Entity::Inverter(c), Quantity::Pc);
                }
            }
            for (l, &(a, b)) in inc.dc_line_ends.iter().enumerate() {
                let pl = get(Entity::DcLine(l), Quantity::PL);
                if a == j {
                    p -= pl;
                }
                if b == j {
                    p += pl;
                }
            }
            report.dc.record(p, &hub.id, t);
        }

        for (nh, hub) in case.gas_hubs.iter().enumerate() {
            let mut g = -get(Entity::GasHub(nh), Quantity::Gd);
            for (s, &h) in inc.supplier_hub.iter().enumerate() {
                if h == nh {
                    g += get(Entity::Supplier(s), Quantity::Vgs);
                }
            }
            for (p, &(a, b)) in inc.pipe_ends.iter().enumerate() {
                let f = get(Entity::Pipe(p), Quantity::Fp);
                if a == nh {
                    g -= f;
                }
                if b == nh {
                    g += f;
                }
            }
            for (k, &h) in inc.turbine_gas_hub.iter().enumerate() {
                if h == nh {
                    g -= turbine_fuel(case, schedule, fuel[k].as_ref(), k, t);
                }
            }
            report.gas.record(g, &hub.id, t);
        }
    }
    report
}

/// Fuel drawn by turbine `g` at hour `t` through its PWL expansion.
pub fn turbine_fuel(case: &MicrogridCase, schedule: &DispatchSchedule, curve: Option<&PwlCurve>, g: usize, t: usize) -> f64 {
    match curve {
        Some(c) => {
            c.start_value()
                + c.segments()
                    .enumerate()
                    .map(|(k, s)| s.slope * schedule.get(Entity::Turbine(g), Quantity::FuelSegment(k), t))
                    .sum::<f64>()
        }
        None => case.turbines[g].fuel_curve.eval(case.turbines[g].p_min),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builder::{build, extract_solution, BuildOptions};
    use crate::io::fixtures::toy_case;
    use crate::solver::{solve_milp, BnbOptions, MilpStatus};

    fn solved_toy() -> (MicrogridCase, DispatchSchedule) {
        let case = toy_case();
        let m = build(&case, &BuildOptions::default()).unwrap();
        let s = solve_milp(&m.problem, &BnbOptions::default());
        assert_eq!(s.status, MilpStatus::Optimal);
        let sched = extract_solution(&m, &s.x, s.objective, s.status).unwrap();
        (case, sched)
    }

    #[test]
    fn optimal_toy_balances() {
        let (case, sched) = solved_toy();
        let r = balance_residuals(&case, &sched);
        assert!(r.max() <= 1e-6, "{r:?}");
    }

    #[test]
    fn perturbed_generation_shows_up() {
        let (case, mut sched) = solved_toy();
        let t = 7;
        let pg = sched.get(Entity::Turbine(0), Quantity::Pg, t);
        sched.set(Entity::Turbine(0), Quantity::Pg, t, pg + 1.0);
        let r = balance_residuals(&case, &sched);
        assert!((r.ac_active.max_abs - 1.0).abs() < 1e-6);
        assert_eq!(r.ac_active.hub, case.turbines[0].hub);
        assert_eq!(r.ac_active.hour, t);
        assert!(r.dc.max_abs <= 1e-6 && r.gas.max_abs <= 1e-6);
    }

    #[test]
    fn empty_system_has_zero_residuals() {
        let mut case = toy_case();
        for h in &mut case.ac_hubs {
            h.demand_p.iter_mut().for_each(|v| *v = 0.0);
            h.demand_q.iter_mut().for_each(|v| *v = 0.0);
        }
        for h in &mut case.dc_hubs {
            h.demand_p.iter_mut().for_each(|v| *v = 0.0);
        }
        for h in &mut case.gas_hubs {
            h.heat_demand.iter_mut().for_each(|v| *v = 0.0);
        }
        let mut sched = DispatchSchedule {
            horizon: case.horizon,
            segments: 4,
            status: MilpStatus::Optimal,
            objective: 0.0,
            values: Default::default(),
        };
        for t in 0..case.horizon {
            for j in 0..case.ac_hubs.len() {
                sched.set(Entity::AcHub(j), Quantity::V, t, 1.0);
            }
        }
        let r = balance_residuals(&case, &sched);
        assert_eq!(r.max(), 0.0);
    }
}
