use super::{merge_terms, renewable_quantities, BuildError, Entity, PlanningModel, Quantity};
use crate::model::{MicrogridCase, Network};
use crate::problem::Sense;

/// Nodal balances with linearized injections, line flow definitions and
/// apparent-power limits of the AC network. Device limits are column bounds.
///
/// The injection at hub `j` is expanded around flat start:
/// `P_inj = (2V_j - 1) G_jj + sum_o [G_jo (V_j + V_o - 1) + B_jo (th_j - th_o)]`
/// `Q_inj = -(2V_j - 1) B_jj + sum_o [G_jo (th_j - th_o) - B_jo (V_j + V_o - 1)]`
pub fn add_ac_constraints(model: &mut PlanningModel, case: &MicrogridCase) -> Result<(), BuildError> {
    let reference = case.reference_hub().ok_or(BuildError::MissingReference)?;
    let y = case.admittance()?;
    let n = case.ac_hubs.len();
    let xi = case.costs.xi;
    let inc = model.incidence.clone();

    for t in 0..model.horizon {
        let v = |j: usize| model.col(Entity::AcHub(j), Quantity::V, t);
        // angle column, absent for the reference hub
        let th = |j: usize| (j != reference).then(|| model.col(Entity::AcHub(j), Quantity::Theta, t));

        let mut rows = Vec::new();
        for j in 0..n {
            let hub = &case.ac_hubs[j];
            let mut p_terms = Vec::new();
            let mut q_terms = Vec::new();
            for (g, &(net, h)) in inc.turbine_hub.iter().enumerate() {
                if net == Network::Ac && h == j {
                    p_terms.push((model.col(Entity::Turbine(g), Quantity::Pg, t), 1.0));
                    q_terms.push((model.col(Entity::Turbine(g), Quantity::Qg, t), 1.0));
                }
            }
            for (r, &(net, h)) in inc.renewable_hub.iter().enumerate() {
                if net == Network::Ac && h == j {
                    let (pq, qq) = renewable_quantities(case.renewables[r].kind);
                    p_terms.push((model.col(Entity::Renewable(r), pq, t), 1.0));
                    q_terms.push((model.col(Entity::Renewable(r), qq, t), 1.0));
                }
            }
            for (c, &(a, _)) in inc.inverter_hubs.iter().enumerate() {
                if a == j {
                    p_terms.push((model.col(Entity::Inverter(c), Quantity::Pc, t), 1.0));
                    q_terms.push((model.col(Entity::Inverter(c), Quantity::Qc, t), 1.0));
                }
            }
            let pd = model.col(Entity::AcHub(j), Quantity::Pd, t);
            p_terms.push((pd, -1.0));
            let (p_dem, q_dem) = (hub.demand_p[t], hub.demand_q[t]);
            let mut q_rhs = 0.0;
            if p_dem > 0.0 {
                q_terms.push((pd, -q_dem / p_dem));
            } else {
                q_rhs += q_dem;
            }

            // subtract the injection; its constant part moves to the right-hand side
            let mut p_rhs = 0.0;
            let gjj = y.g[j][j];
            let bjj = y.b[j][j];
            p_terms.push((v(j), -2.0 * gjj));
            p_rhs -= gjj;
            q_terms.push((v(j), 2.0 * bjj));
            q_rhs += bjj;
            for o in (0..n).filter(|&o| o != j) {
                let (gjo, bjo) = (y.g[j][o], y.b[j][o]);
                if gjo == 0.0 && bjo == 0.0 {
                    continue;
                }
                p_terms.push((v(j), -gjo));
                p_terms.push((v(o), -gjo));
                p_rhs -= gjo;
                q_terms.push((v(j), bjo));
                q_terms.push((v(o), bjo));
                q_rhs += bjo;
                if let Some(c) = th(j) {
                    p_terms.push((c, -bjo));
                    q_terms.push((c, -gjo));
                }
                if let Some(c) = th(o) {
                    p_terms.push((c, bjo));
                    q_terms.push((c, gjo));
                }
            }
            rows.push((format!("ac_p_balance[{}]{t}", hub.id), merge_terms(p_terms), Sense::Eq, p_rhs));
            rows.push((format!("ac_q_balance[{}]{t}", hub.id), merge_terms(q_terms), Sense::Eq, q_rhs));
        }

        for (l, &(j, o)) in inc.ac_line_ends.iter().enumerate() {
            let line = &case.ac_lines[l];
            let (gjo, bjo) = (-line.g, -line.b);
            let pl = model.col(Entity::AcLine(l), Quantity::PL, t);
            let ql = model.col(Entity::AcLine(l), Quantity::QL, t);
            let sl = model.col(Entity::AcLine(l), Quantity::SL, t);
            // PL = -G_jo (V_j - V_o) + B_jo (th_j - th_o)
            let mut p = vec![(pl, 1.0), (v(j), gjo), (v(o), -gjo)];
            // QL = B_jo (V_j - V_o) + G_jo (th_j - th_o)
            let mut q = vec![(ql, 1.0), (v(j), -bjo), (v(o), bjo)];
            if let Some(c) = th(j) {
                p.push((c, -bjo));
                q.push((c, -gjo));
            }
            if let Some(c) = th(o) {
                p.push((c, bjo));
                q.push((c, gjo));
            }
            rows.push((format!("ac_pl[{}]{t}", line.id), merge_terms(p), Sense::Eq, 0.0));
            rows.push((format!("ac_ql[{}]{t}", line.id), merge_terms(q), Sense::Eq, 0.0));
            rows.push((
                format!("ac_sl[{}]{t}", line.id),
                merge_terms(vec![(sl, 1.0), (pl, -1.0), (ql, -xi)]),
                Sense::Eq,
                0.0,
            ));
            rows.push((format!("ac_sl_max[{}]{t}", line.id), vec![(sl, 1.0)], Sense::Le, line.sl_max));
            rows.push((format!("ac_sl_min[{}]{t}", line.id), vec![(sl, 1.0)], Sense::Ge, -line.sl_max));
        }
        for (name, terms, sense, rhs) in rows {
            model.problem.add_constraint(name, terms, sense, rhs);
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::super::{prepare, BuildOptions};
    use super::*;
    use crate::io::fixtures::toy_case;
    use crate::problem::MilpProblem;

    fn one_hour() -> MicrogridCase {
        let mut case = toy_case();
        case.horizon = 1;
        for h in &mut case.ac_hubs {
            h.demand_p.truncate(1);
            h.demand_q.truncate(1);
        }
        for h in &mut case.dc_hubs {
            h.demand_p.truncate(1);
        }
        for r in &mut case.renewables {
            r.forecast.truncate(1);
        }
        for h in &mut case.gas_hubs {
            h.heat_demand.truncate(1);
        }
        case
    }

    fn ac_only() -> PlanningModel {
        let case = one_hour();
        let mut m = prepare(&case, &BuildOptions::default()).unwrap();
        let pu = m.case.clone();
        add_ac_constraints(&mut m, &pu).unwrap();
        m
    }

    #[test]
    fn two_hub_row_count() {
        let m = ac_only();
        assert_eq!(m.case.ac_hubs.len(), 2);
        assert_eq!(m.case.ac_lines.len(), 1);
        assert_eq!(m.problem.num_constraints(), 9);
    }

    /// Column vector with V = 1 everywhere and everything else zero.
    fn flat(m: &PlanningModel) -> Vec<f64> {
        m.index
            .keys()
            .iter()
            .map(|k| if k.quantity == Quantity::V { 1.0 } else { 0.0 })
            .collect()
    }

    #[test]
    fn flat_start_satisfies_rows_without_demand() {
        let mut case = one_hour();
        for h in &mut case.ac_hubs {
            h.demand_p = vec![0.0];
            h.demand_q = vec![0.0];
        }
        let mut m = prepare(&case, &BuildOptions::default()).unwrap();
        let pu = m.case.clone();
        add_ac_constraints(&mut m, &pu).unwrap();
        let x = flat(&m);
        for c in &m.problem.constraints {
            assert!(c.violation(&x) < 1e-12, "{}", c.name);
        }
    }

    #[test]
    fn line_flow_example() {
        // g = 2, b = -10 gives G_12 = -2 and B_12 = 10
        let mut m = ac_only();
        m.case.ac_lines[0].g = 2.0;
        m.case.ac_lines[0].b = -10.0;
        let pu = m.case.clone();
        m.problem = MilpProblem {
            constraints: Vec::new(),
            ..m.problem.clone()
        };
        add_ac_constraints(&mut m, &pu).unwrap();
        let r = pu.reference_hub().unwrap();
        let other = 1 - r;
        let (from, to) = m.incidence.ac_line_ends[0];
        assert_eq!(from, r, "toy line runs from the reference hub");
        let mut x = flat(&m);
        x[m.col(Entity::AcHub(from), Quantity::V, 0)] = 1.01;
        x[m.col(Entity::AcHub(to), Quantity::V, 0)] = 0.99;
        // reference angle is fixed at 0, so put -0.01 on the other end
        x[m.col(Entity::AcHub(other), Quantity::Theta, 0)] = -0.01;
        let row = m.problem.constraints.iter().find(|c| c.name.starts_with("ac_pl")).unwrap();
        let pl = m.col(Entity::AcLine(0), Quantity::PL, 0);
        // row is PL - expr = 0, so expr = -(activity without PL)
        let expr = -(row.activity(&x) - x[pl]);
        assert!((expr - 0.14).abs() < 1e-12, "{expr}");
    }

    #[test]
    fn injections_equal_line_flows_out() {
        // random point: the balance rows' injection part equals the sum of
        // line flow definitions leaving each hub
        let m = {
            let mut m = ac_only();
            m.case.ac_lines[0].g = 3.0;
            m.case.ac_lines[0].b = -7.0;
            m.problem.constraints.clear();
            let pu = m.case.clone();
            add_ac_constraints(&mut m, &pu).unwrap();
            m
        };
        let mut x = flat(&m);
        for (col, key) in m.index.keys().iter().enumerate() {
            match key.quantity {
                Quantity::V => x[col] = 1.0 + 0.01 * (col as f64).sin(),
                Quantity::Theta => x[col] = 0.02 * (col as f64).cos(),
                _ => {}
            }
        }
        let flow = |prefix: &str| {
            let row = m.problem.constraints.iter().find(|c| c.name.starts_with(prefix)).unwrap();
            let own = row.terms[0].0;
            -(row.activity(&x) - x[own])
        };
        let (pl, ql) = (flow("ac_pl"), flow("ac_ql"));
        let (from, _) = m.incidence.ac_line_ends[0];
        let hub = &m.case.ac_hubs[from].id;
        let inj = |kind: &str| {
            let row = m.problem.constraints.iter().find(|c| c.name == format!("ac_{kind}_balance[{hub}]0")).unwrap();
            // row reads gen - lin(P_inj) = const(P_inj), so P_inj = -lin + rhs
            let lin: f64 = row
                .terms
                .iter()
                .filter(|(j, _)| matches!(m.index.key(*j).quantity, Quantity::V | Quantity::Theta))
                .map(|&(j, a)| a * x[j])
                .sum();
            -lin + row.rhs
        };
        let q_dem = m.case.ac_hubs[from].demand_q[0];
        let q_const = if m.case.ac_hubs[from].demand_p[0] > 0.0 { 0.0 } else { q_dem };
        assert!((inj("p") - pl).abs() < 1e-12);
        assert!((inj("q") - q_const - ql).abs() < 1e-12);
    }
}
