use super::{merge_terms, renewable_quantities, BuildError, Entity, PlanningModel, Quantity};
use crate::model::{MicrogridCase, Network, TerminalRule};
use crate::problem::Sense;

/// Battery indicator and energy rows, DC line flows and DC nodal balances.
/// Inverter power leaves the DC side, so it enters these balances negated.
pub fn add_dc_constraints(model: &mut PlanningModel, case: &MicrogridCase) -> Result<(), BuildError> {
    let inc = model.incidence.clone();
    let horizon = model.horizon;
    for t in 0..horizon {
        let mut rows = Vec::new();
        for (k, bat) in case.batteries.iter().enumerate() {
            let col = |q| model.col(Entity::Battery(k), q, t);
            let (pch, pdc, ich, idc, e) = (
                col(Quantity::Pch),
                col(Quantity::Pdc),
                col(Quantity::Ich),
                col(Quantity::Idc),
                col(Quantity::E),
            );
            let id = &bat.id;
            rows.push((format!("ch_max[{id}]{t}"), vec![(pch, 1.0), (ich, -bat.p_ch_max)], Sense::Le, 0.0));
            rows.push((format!("ch_min[{id}]{t}"), vec![(pch, 1.0), (ich, -bat.p_ch_min)], Sense::Ge, 0.0));
            rows.push((format!("dc_max[{id}]{t}"), vec![(pdc, 1.0), (idc, -bat.p_dc_max)], Sense::Le, 0.0));
            rows.push((format!("dc_min[{id}]{t}"), vec![(pdc, 1.0), (idc, -bat.p_dc_min)], Sense::Ge, 0.0));
            rows.push((format!("one_mode[{id}]{t}"), vec![(ich, 1.0), (idc, 1.0)], Sense::Le, 1.0));
            // E_t = E_{t-1} + eta_ch P_ch - P_dc / eta_dc
            let mut terms = vec![(e, 1.0), (pch, -bat.eta_ch), (pdc, 1.0 / bat.eta_dc)];
            let rhs = if t == 0 {
                bat.e_initial
            } else {
                terms.push((model.col(Entity::Battery(k), Quantity::E, t - 1), -1.0));
                0.0
            };
            rows.push((format!("energy[{id}]{t}"), terms, Sense::Eq, rhs));
            if t + 1 == horizon && bat.terminal_rule == TerminalRule::AtLeastInitial {
                rows.push((format!("terminal[{id}]"), vec![(e, 1.0)], Sense::Ge, bat.e_initial));
            }
        }

        for (l, &(j, o)) in inc.dc_line_ends.iter().enumerate() {
            let line = &case.dc_lines[l];
            let pl = model.col(Entity::DcLine(l), Quantity::PL, t);
            let vj = model.col(Entity::DcHub(j), Quantity::V, t);
            let vo = model.col(Entity::DcHub(o), Quantity::V, t);
            // PL = (V_j - V_o) / R
            rows.push((
                format!("dc_pl[{}]{t}", line.id),
                vec![(pl, 1.0), (vj, -1.0 / line.r), (vo, 1.0 / line.r)],
                Sense::Eq,
                0.0,
            ));
        }

        for (j, hub) in case.dc_hubs.iter().enumerate() {
            let mut terms = Vec::new();
            for (k, &h) in inc.battery_hub.iter().enumerate() {
                if h == j {
                    terms.push((model.col(Entity::Battery(k), Quantity::Pdc, t), 1.0));
                    terms.push((model.col(Entity::Battery(k), Quantity::Pch, t), -1.0));
                }
            }
            for (g, &(net, h)) in inc.turbine_hub.iter().enumerate() {
                if net == Network::Dc && h == j {
                    terms.push((model.col(Entity::Turbine(g), Quantity::Pg, t), 1.0));
                }
            }
            for (r, &(net, h)) in inc.renewable_hub.iter().enumerate() {
                if net == Network::Dc && h == j {
                    let (pq, _) = renewable_quantities(case.renewables[r].kind);
                    terms.push((model.col(Entity::Renewable(r), pq, t), 1.0));
                }
            }
            for (c, &(_, d)) in inc.inverter_hubs.iter().enumerate() {
                if d == j {
                    terms.push((model.col(Entity::Inverter(c), Quantity::Pc, t), -1.0));
                }
            }
            terms.push((model.col(Entity::DcHub(j), Quantity::Pd, t), -1.0));
            for (l, &(a, b)) in inc.dc_line_ends.iter().enumerate() {
                let pl = model.col(Entity::DcLine(l), Quantity::PL, t);
                if a == j {
                    terms.push((pl, -1.0));
                }
                if b == j {
                    terms.push((pl, 1.0));
                }
            }
            rows.push((format!("dc_balance[{}]{t}", hub.id), merge_terms(terms), Sense::Eq, 0.0));
        }
        for (name, terms, sense, rhs) in rows {
            model.problem.add_constraint(name, terms, sense, rhs);
        }
    }
    Ok(())
}
