use super::{BuildError, Entity, PlanningModel, Quantity};
use crate::linearize::PwlCurve;
use crate::model::MicrogridCase;
use crate::problem::Sense;

/// Supply cost through its PWL expansion, lost-load and heat-shedding
/// penalties, and battery degradation. The constant parts (penalty on the full
/// demand, curve values at the lower end) go into the objective offset so the
/// objective equals the total cost in dollars.
pub fn add_objective(model: &mut PlanningModel, case: &MicrogridCase, costs: &[Option<PwlCurve>]) -> Result<(), BuildError> {
    if let Some(s) = case.suppliers.get(costs.len()) {
        return Err(BuildError::MissingCostCurve(s.id.clone()));
    }
    let base = case.base.power;
    let voll_e = case.costs.voll_e * base;
    let voll_g = case.costs.voll_g;
    let beta = case.costs.beta * base;
    for t in 0..model.horizon {
        for (s, sup) in case.suppliers.iter().enumerate() {
            let v = model.col(Entity::Supplier(s), Quantity::Vgs, t);
            match &costs[s] {
                Some(curve) => {
                    let mut terms = vec![(v, 1.0)];
                    for (k, seg) in curve.segments().enumerate() {
                        let c = model.col(Entity::Supplier(s), Quantity::CostSegment(k), t);
                        terms.push((c, -1.0));
                        model.problem.add_cost(c, seg.slope);
                    }
                    model.problem.objective_offset += curve.start_value();
                    model
                        .problem
                        .add_constraint(format!("cost_pwl[{}]{t}", sup.id), terms, Sense::Eq, sup.v_min);
                }
                None => model.problem.objective_offset += sup.cost_curve.eval(sup.v_min),
            }
        }
        for (j, hub) in case.ac_hubs.iter().enumerate() {
            model.problem.objective_offset += voll_e * hub.demand_p[t];
            model.problem.add_cost(model.col(Entity::AcHub(j), Quantity::Pd, t), -voll_e);
        }
        for (j, hub) in case.dc_hubs.iter().enumerate() {
            model.problem.objective_offset += voll_e * hub.demand_p[t];
            model.problem.add_cost(model.col(Entity::DcHub(j), Quantity::Pd, t), -voll_e);
        }
        for (n, hub) in case.gas_hubs.iter().enumerate() {
            model.problem.objective_offset += voll_g * hub.heat_demand[t];
            model.problem.add_cost(model.col(Entity::GasHub(n), Quantity::Gd, t), -voll_g);
        }
        for k in 0..case.batteries.len() {
            model.problem.add_cost(model.col(Entity::Battery(k), Quantity::Pdc, t), beta);
        }
    }
    Ok(())
}
