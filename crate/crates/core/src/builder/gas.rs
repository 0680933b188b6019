use super::{merge_terms, BuildError, Entity, PlanningModel, Quantity};
use crate::linearize::LinearFlowModel;
use crate::model::MicrogridCase;
use crate::problem::Sense;

/// Pipe flow definitions and limits, turbine fuel expansions and gas hub
/// balances. Turbine fuel is a hard withdrawal; only `g_d` can fall short.
pub fn add_gas_constraints(model: &mut PlanningModel, case: &MicrogridCase, flows: &[LinearFlowModel]) -> Result<(), BuildError> {
    if let Some(p) = case.pipes.get(flows.len()) {
        return Err(BuildError::MissingFlowModel(p.id.clone()));
    }
    let inc = model.incidence.clone();
    let fuel = model.fuel_curves.clone();
    for t in 0..model.horizon {
        let mut rows = Vec::new();
        for (p, pipe) in case.pipes.iter().enumerate() {
            let (n, m) = inc.pipe_ends[p];
            let f = model.col(Entity::Pipe(p), Quantity::Fp, t);
            let pi_n = model.col(Entity::GasHub(n), Quantity::Pi, t);
            let pi_m = model.col(Entity::GasHub(m), Quantity::Pi, t);
            let lin = flows[p];
            rows.push((
                format!("flow[{}]{t}", pipe.id),
                vec![(f, 1.0), (pi_n, -lin.a_n), (pi_m, lin.a_m)],
                Sense::Eq,
                0.0,
            ));
            rows.push((format!("flow_max[{}]{t}", pipe.id), vec![(f, 1.0)], Sense::Le, pipe.f_max));
            rows.push((format!("flow_min[{}]{t}", pipe.id), vec![(f, 1.0)], Sense::Ge, -pipe.f_max));
        }

        // P_g = p_min + sum of segment increments
        for (g, mt) in case.turbines.iter().enumerate() {
            let mut terms = vec![(model.col(Entity::Turbine(g), Quantity::Pg, t), 1.0)];
            if let Some(curve) = &fuel[g] {
                for k in 0..curve.segment_count() {
                    terms.push((model.col(Entity::Turbine(g), Quantity::FuelSegment(k), t), -1.0));
                }
            }
            rows.push((format!("fuel_pwl[{}]{t}", mt.id), terms, Sense::Eq, mt.p_min));
        }

        for (n, hub) in case.gas_hubs.iter().enumerate() {
            let mut terms = Vec::new();
            let mut rhs = 0.0;
            for (s, &h) in inc.supplier_hub.iter().enumerate() {
                if h == n {
                    terms.push((model.col(Entity::Supplier(s), Quantity::Vgs, t), 1.0));
                }
            }
            for (p, &(a, b)) in inc.pipe_ends.iter().enumerate() {
                let f = model.col(Entity::Pipe(p), Quantity::Fp, t);
                if a == n {
                    terms.push((f, -1.0));
                }
                if b == n {
                    terms.push((f, 1.0));
                }
            }
            for (g, &h) in inc.turbine_gas_hub.iter().enumerate() {
                if h != n {
                    continue;
                }
                let mt = &case.turbines[g];
                match &fuel[g] {
                    Some(curve) => {
                        rhs += curve.start_value();
                        for (k, seg) in curve.segments().enumerate() {
                            terms.push((model.col(Entity::Turbine(g), Quantity::FuelSegment(k), t), -seg.slope));
                        }
                    }
                    None => rhs += mt.fuel_curve.eval(mt.p_min * case.base.power),
                }
            }
            terms.push((model.col(Entity::GasHub(n), Quantity::Gd, t), -1.0));
            rows.push((format!("gas_balance[{}]{t}", hub.id), merge_terms(terms), Sense::Eq, rhs));
        }
        for (name, terms, sense, rhs) in rows {
            model.problem.add_constraint(name, terms, sense, rhs);
        }
    }
    Ok(())
}
