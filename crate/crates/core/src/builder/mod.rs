//! Translation of a microgrid case into a [`MilpProblem`] and back.
//!
//! The model is built in per-unit: electrical powers are divided by the base
//! power, energies likewise (one-hour periods). Every column carries a scale
//! factor that maps its raw value back to external units (kW, kvar, kWh).

mod ac;
mod dc;
mod extract;
mod gas;
mod objective;

pub use ac::add_ac_constraints;
pub use dc::add_dc_constraints;
pub use extract::{extract_solution, schedule_to_vector, DispatchSchedule};
pub use gas::add_gas_constraints;
pub use objective::add_objective;

use std::collections::HashMap;
use std::fmt;

use crate::linearize::{gas_flow_coefficients, pwl_approximate, LinearFlowModel, LinearizeError, PwlCurve};
use crate::model::{to_per_unit, validate_case, CurveSpec, Incidence, MicrogridCase, ModelError, Network, RenewableKind, UnitSystem};
use crate::problem::{MilpProblem, ProblemError, VarKind};

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum BuildError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Linearize(#[from] LinearizeError),
    #[error(transparent)]
    Problem(#[from] ProblemError),
    #[error("case has no AC reference hub")]
    MissingReference,
    #[error("case must be in per-unit before building")]
    NotPerUnit,
    #[error("pipe {0} has no linear flow model")]
    MissingFlowModel(String),
    #[error("supplier {0} has no cost curve")]
    MissingCostCurve(String),
    #[error("solution has {got} values for {expected} columns")]
    LengthMismatch { got: usize, expected: usize },
    #[error("binary column {name} has non-integral value {value}")]
    NotIntegral { name: String, value: f64 },
    #[error("recomputed objective {recomputed} differs from solver objective {reported}")]
    ObjectiveMismatch { recomputed: f64, reported: f64 },
}

/// What a column belongs to; indices refer to the case's device lists.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Entity {
    AcHub(usize),
    DcHub(usize),
    GasHub(usize),
    AcLine(usize),
    DcLine(usize),
    Inverter(usize),
    Turbine(usize),
    Renewable(usize),
    Battery(usize),
    Pipe(usize),
    Supplier(usize),
}

impl Entity {
    pub fn kind(self) -> &'static str {
        match self {
            Entity::AcHub(_) => "ac_hub",
            Entity::DcHub(_) => "dc_hub",
            Entity::GasHub(_) => "gas_hub",
            Entity::AcLine(_) => "ac_line",
            Entity::DcLine(_) => "dc_line",
            Entity::Inverter(_) => "inverter",
            Entity::Turbine(_) => "turbine",
            Entity::Renewable(_) => "renewable",
            Entity::Battery(_) => "battery",
            Entity::Pipe(_) => "pipe",
            Entity::Supplier(_) => "supplier",
        }
    }

    /// `kind:id` label using the case's identifiers.
    pub fn label(self, case: &MicrogridCase) -> String {
        let id = match self {
            Entity::AcHub(i) => &case.ac_hubs[i].id,
            Entity::DcHub(i) => &case.dc_hubs[i].id,
            Entity::GasHub(i) => &case.gas_hubs[i].id,
            Entity::AcLine(i) => &case.ac_lines[i].id,
            Entity::DcLine(i) => &case.dc_lines[i].id,
            Entity::Inverter(i) => &case.inverters[i].id,
            Entity::Turbine(i) => &case.turbines[i].id,
            Entity::Renewable(i) => &case.renewables[i].id,
            Entity::Battery(i) => &case.batteries[i].id,
            Entity::Pipe(i) => &case.pipes[i].id,
            Entity::Supplier(i) => &case.suppliers[i].id,
        };
        format!("{}:{}", self.kind(), id)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Quantity {
    Pg,
    Qg,
    Pw,
    Qw,
    Ps,
    Qs,
    Pc,
    Qc,
    V,
    Theta,
    Pd,
    /// Served reactive demand; derived from `Pd`, never a column.
    Qd,
    PL,
    QL,
    SL,
    Pch,
    Pdc,
    Ich,
    Idc,
    E,
    Vgs,
    Pi,
    Fp,
    Gd,
    FuelSegment(usize),
    CostSegment(usize),
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Quantity::Pg => "P_g",
            Quantity::Qg => "Q_g",
            Quantity::Pw => "P_w",
            Quantity::Qw => "Q_w",
            Quantity::Ps => "P_s",
            Quantity::Qs => "Q_s",
            Quantity::Pc => "P_c",
            Quantity::Qc => "Q_c",
            Quantity::V => "V",
            Quantity::Theta => "theta",
            Quantity::Pd => "P_d",
            Quantity::Qd => "Q_d",
            Quantity::PL => "PL",
            Quantity::QL => "QL",
            Quantity::SL => "SL",
            Quantity::Pch => "P_ch",
            Quantity::Pdc => "P_dc",
            Quantity::Ich => "I_ch",
            Quantity::Idc => "I_dc",
            Quantity::E => "E",
            Quantity::Vgs => "v_gs",
            Quantity::Pi => "pi",
            Quantity::Fp => "f_p",
            Quantity::Gd => "g_d",
            Quantity::FuelSegment(k) => return write!(f, "fuel_seg_{k}"),
            Quantity::CostSegment(k) => return write!(f, "cost_seg_{k}"),
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VarKey {
    pub hour: usize,
    pub entity: Entity,
    pub quantity: Quantity,
}

impl VarKey {
    pub fn new(entity: Entity, quantity: Quantity, hour: usize) -> Self {
        Self { hour, entity, quantity }
    }
}

/// Bijection between semantic keys and column numbers.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct VariableIndex {
    keys: Vec<VarKey>,
    cols: HashMap<VarKey, usize>,
}

impl VariableIndex {
    fn push(&mut self, key: VarKey) {
        let prev = self.cols.insert(key, self.keys.len());
        debug_assert!(prev.is_none(), "duplicate key {key:?}");
        self.keys.push(key);
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn get(&self, entity: Entity, quantity: Quantity, hour: usize) -> Option<usize> {
        self.cols.get(&VarKey::new(entity, quantity, hour)).copied()
    }

    /// Column of a key that must exist.
    pub fn col(&self, entity: Entity, quantity: Quantity, hour: usize) -> usize {
        self.get(entity, quantity, hour)
            .unwrap_or_else(|| panic!("no column for {entity:?} {quantity} at hour {hour}"))
    }

    pub fn key(&self, col: usize) -> VarKey {
        self.keys[col]
    }

    pub fn keys(&self) -> &[VarKey] {
        &self.keys
    }
}

/// Number of PWL segments for a curve over `[lo, hi]`; zero when the range is a point.
fn segments_over(lo: f64, hi: f64, segments: usize) -> usize {
    if hi > lo {
        segments
    } else {
        0
    }
}

/// Enumerate the decision columns of `case` over `horizon` hours: hour-major,
/// then device lists in case order. The reference hub has no angle column.
pub fn index_variables(case: &MicrogridCase, horizon: usize) -> VariableIndex {
    let segments = case.costs.pwl_segments;
    let mut ix = VariableIndex::default();
    for t in 0..horizon {
        let mut add = |e: Entity, q: Quantity| ix.push(VarKey::new(e, q, t));
        for (j, hub) in case.ac_hubs.iter().enumerate() {
            add(Entity::AcHub(j), Quantity::V);
            if !hub.is_reference {
                add(Entity::AcHub(j), Quantity::Theta);
            }
            add(Entity::AcHub(j), Quantity::Pd);
        }
        for l in 0..case.ac_lines.len() {
            add(Entity::AcLine(l), Quantity::PL);
            add(Entity::AcLine(l), Quantity::QL);
            add(Entity::AcLine(l), Quantity::SL);
        }
        for c in 0..case.inverters.len() {
            add(Entity::Inverter(c), Quantity::Pc);
            add(Entity::Inverter(c), Quantity::Qc);
        }
        for (g, mt) in case.turbines.iter().enumerate() {
            add(Entity::Turbine(g), Quantity::Pg);
            if mt.network == Network::Ac {
                add(Entity::Turbine(g), Quantity::Qg);
            }
            for k in 0..segments_over(mt.p_min, mt.p_max, segments) {
                add(Entity::Turbine(g), Quantity::FuelSegment(k));
            }
        }
        for (r, unit) in case.renewables.iter().enumerate() {
            let (p, q) = renewable_quantities(unit.kind);
            add(Entity::Renewable(r), p);
            if unit.network == Network::Ac {
                add(Entity::Renewable(r), q);
            }
        }
        for j in 0..case.dc_hubs.len() {
            add(Entity::DcHub(j), Quantity::V);
            add(Entity::DcHub(j), Quantity::Pd);
        }
        for l in 0..case.dc_lines.len() {
            add(Entity::DcLine(l), Quantity::PL);
        }
        for k in 0..case.batteries.len() {
            for q in [Quantity::Pch, Quantity::Pdc, Quantity::Ich, Quantity::Idc, Quantity::E] {
                add(Entity::Battery(k), q);
            }
        }
        for n in 0..case.gas_hubs.len() {
            add(Entity::GasHub(n), Quantity::Pi);
            add(Entity::GasHub(n), Quantity::Gd);
        }
        for p in 0..case.pipes.len() {
            add(Entity::Pipe(p), Quantity::Fp);
        }
        for (s, sup) in case.suppliers.iter().enumerate() {
            add(Entity::Supplier(s), Quantity::Vgs);
            for k in 0..segments_over(sup.v_min, sup.v_max, segments) {
                add(Entity::Supplier(s), Quantity::CostSegment(k));
            }
        }
    }
    ix
}

pub fn renewable_quantities(kind: RenewableKind) -> (Quantity, Quantity) {
    match kind {
        RenewableKind::Wind => (Quantity::Pw, Quantity::Qw),
        RenewableKind::Solar => (Quantity::Ps, Quantity::Qs),
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct BuildOptions {
    /// Overrides `costs.pwl_segments` when set.
    pub segments: Option<usize>,
}

/// A built problem plus everything needed to interpret its columns.
#[derive(Debug, Clone)]
pub struct PlanningModel {
    pub problem: MilpProblem,
    pub index: VariableIndex,
    /// Per-unit copy of the case the problem was built from.
    pub case: MicrogridCase,
    pub incidence: Incidence,
    pub horizon: usize,
    /// Multiplier taking each column to external units.
    pub scale: Vec<f64>,
    /// Fuel curves per turbine with x in per-unit power; `None` for fixed output.
    pub fuel_curves: Vec<Option<PwlCurve>>,
    /// Supplier cost curves over Skcf/hr; `None` for a fixed supply rate.
    pub cost_curves: Vec<Option<PwlCurve>>,
    pub flow_models: Vec<LinearFlowModel>,
}

impl PlanningModel {
    pub fn col(&self, entity: Entity, quantity: Quantity, hour: usize) -> usize {
        self.index.col(entity, quantity, hour)
    }

    pub fn base_power(&self) -> f64 {
        self.case.base.power
    }
}

/// Curve over `[lo, hi]`, or `None` when the interval is a single point.
pub(crate) fn linearize_curve(spec: &CurveSpec, lo: f64, hi: f64, segments: usize) -> Result<Option<PwlCurve>, LinearizeError> {
    if hi > lo {
        pwl_approximate(|x| spec.eval(x), lo, hi, segments).map(Some)
    } else {
        Ok(None)
    }
}

/// Create the index, the columns and their bounds; rows are added by the
/// `add_*` emitters.
pub fn prepare(case: &MicrogridCase, opts: &BuildOptions) -> Result<PlanningModel, BuildError> {
    let report = validate_case(case);
    if !report.is_empty() {
        return Err(ModelError::Invalid(report).into());
    }
    let mut pu = match case.units {
        UnitSystem::Physical => to_per_unit(case)?,
        UnitSystem::PerUnit => case.clone(),
    };
    if let Some(k) = opts.segments {
        pu.costs.pwl_segments = k;
    }
    if pu.costs.pwl_segments == 0 {
        return Err(LinearizeError::NoSegments.into());
    }
    let segments = pu.costs.pwl_segments;
    let base = pu.base.power;
    let incidence = Incidence::build(&pu)?;

    // fuel curves are specified in kW; build there, then map x to per-unit
    let fuel_curves = pu
        .turbines
        .iter()
        .map(|g| {
            linearize_curve(&g.fuel_curve, g.p_min * base, g.p_max * base, segments)
                .map(|c| c.map(|c| c.rescale_x(1.0 / base)))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let cost_curves = pu
        .suppliers
        .iter()
        .map(|s| linearize_curve(&s.cost_curve, s.v_min, s.v_max, segments))
        .collect::<Result<Vec<_>, _>>()?;
    let flow_models = pu.pipes.iter().map(gas_flow_coefficients).collect::<Result<Vec<_>, _>>()?;

    let horizon = pu.horizon;
    let index = index_variables(&pu, horizon);
    let mut problem = MilpProblem::new();
    let mut scale = Vec::with_capacity(index.len());
    for &key in index.keys() {
        let (kind, lo, up, s) = column_spec(&pu, &fuel_curves, &cost_curves, key);
        let name = format!("{}[{}]{}", key.quantity, key.entity.label(&pu), key.hour);
        problem.add_variable(name, kind, lo, up);
        scale.push(s);
    }
    Ok(PlanningModel {
        problem,
        index,
        case: pu,
        incidence,
        horizon,
        scale,
        fuel_curves,
        cost_curves,
        flow_models,
    })
}

/// Kind, bounds and external scale of one column.
fn column_spec(
    case: &MicrogridCase,
    fuel: &[Option<PwlCurve>],
    cost: &[Option<PwlCurve>],
    key: VarKey,
) -> (VarKind, f64, f64, f64) {
    use Quantity::*;
    let base = case.base.power;
    let t = key.hour;
    let inf = f64::INFINITY;
    let c = |lo: f64, up: f64, s: f64| (VarKind::Continuous, lo, up, s);
    match (key.entity, key.quantity) {
        (Entity::AcHub(j), V) => c(case.ac_hubs[j].v_min, case.ac_hubs[j].v_max, 1.0),
        (Entity::AcHub(_), Theta) => c(-std::f64::consts::PI, std::f64::consts::PI, 1.0),
        (Entity::AcHub(j), Pd) => c(0.0, case.ac_hubs[j].demand_p[t], base),
        (Entity::AcLine(_), PL | QL | SL) => c(-inf, inf, base),
        (Entity::Inverter(i), Pc) => c(case.inverters[i].p_min, case.inverters[i].p_max, base),
        (Entity::Inverter(i), Qc) => c(case.inverters[i].q_min, case.inverters[i].q_max, base),
        (Entity::Turbine(g), Pg) => c(case.turbines[g].p_min, case.turbines[g].p_max, base),
        (Entity::Turbine(g), Qg) => c(case.turbines[g].q_min, case.turbines[g].q_max, base),
        (Entity::Turbine(g), FuelSegment(k)) => {
            let w = fuel[g].as_ref().map_or(0.0, |c| c.segments().nth(k).map_or(0.0, |s| s.width));
            c(0.0, w, base)
        }
        (Entity::Renewable(r), Pw | Ps) => c(0.0, case.renewables[r].forecast[t], base),
        (Entity::Renewable(r), Qw | Qs) => {
            let f = case.renewables[r].forecast[t];
            c(-f, f, base)
        }
        (Entity::DcHub(j), V) => c(case.dc_hubs[j].v_min, case.dc_hubs[j].v_max, 1.0),
        (Entity::DcHub(j), Pd) => c(0.0, case.dc_hubs[j].demand_p[t], base),
        (Entity::DcLine(l), PL) => c(-case.dc_lines[l].sl_max, case.dc_lines[l].sl_max, base),
        (Entity::Battery(k), Pch) => c(0.0, case.batteries[k].p_ch_max, base),
        (Entity::Battery(k), Pdc) => c(0.0, case.batteries[k].p_dc_max, base),
        (Entity::Battery(_), Ich | Idc) => (VarKind::Binary, 0.0, 1.0, 1.0),
        (Entity::Battery(k), E) => c(case.batteries[k].e_min, case.batteries[k].e_max, base),
        (Entity::GasHub(n), Pi) => c(case.gas_hubs[n].pi_min, case.gas_hubs[n].pi_max, 1.0),
        (Entity::GasHub(n), Gd) => c(0.0, case.gas_hubs[n].heat_demand[t], 1.0),
        (Entity::Pipe(_), Fp) => c(-inf, inf, 1.0),
        (Entity::Supplier(s), Vgs) => c(case.suppliers[s].v_min, case.suppliers[s].v_max, 1.0),
        (Entity::Supplier(s), CostSegment(k)) => {
            let w = cost[s].as_ref().map_or(0.0, |c| c.segments().nth(k).map_or(0.0, |s| s.width));
            c(0.0, w, 1.0)
        }
        (e, q) => unreachable!("no column spec for {e:?} {q}"),
    }
}

/// Build the complete problem for `case` (physical or per-unit units).
pub fn build(case: &MicrogridCase, opts: &BuildOptions) -> Result<PlanningModel, BuildError> {
    let mut model = prepare(case, opts)?;
    let pu = model.case.clone();
    add_ac_constraints(&mut model, &pu)?;
    add_dc_constraints(&mut model, &pu)?;
    let flows = model.flow_models.clone();
    add_gas_constraints(&mut model, &pu, &flows)?;
    let costs = model.cost_curves.clone();
    add_objective(&mut model, &pu, &costs)?;
    model.problem.check()?;
    Ok(model)
}

/// Merge repeated columns in a term list and drop zeros, keeping first-seen order.
pub(crate) fn merge_terms(terms: Vec<(usize, f64)>) -> Vec<(usize, f64)> {
    let mut out: Vec<(usize, f64)> = Vec::with_capacity(terms.len());
    let mut pos: HashMap<usize, usize> = HashMap::new();
    for (j, a) in terms {
        match pos.get(&j) {
            Some(&k) => out[k].1 += a,
            None => {
                pos.insert(j, out.len());
                out.push((j, a));
            }
        }
    }
    out.retain(|t| t.1 != 0.0);
    out
}
