//! Typed representation of a multi-carrier microgrid instance.
//!
//! Electrical quantities are stored in kW / kvar / kWh while the case is in
//! [`UnitSystem::Physical`]; [`to_per_unit`] rescales them by the base power
//! for model building. Gas quantities (Skcf/hr, pressures) are never rescaled.
//! Line parameters (`g`, `b`, `r`, `sl_max`) are always per-unit.

mod admittance;
mod incidence;
mod per_unit;
mod validate;

pub use admittance::{assemble_admittance, AdmittanceMatrix, Branch};
pub use incidence::Incidence;
pub use per_unit::{from_per_unit, to_per_unit};
pub use validate::{validate_case, ValidationReport, Violation};

use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum ModelError {
    #[error("base {name} must be positive, got {value}")]
    InvalidBase { name: &'static str, value: f64 },
    #[error("case is already in {0:?} units")]
    WrongUnits(UnitSystem),
    #[error("branch {index} endpoint {endpoint} out of range for {n_hubs} hubs")]
    EndpointOutOfRange {
        index: usize,
        endpoint: usize,
        n_hubs: usize,
    },
    #[error("unknown {network} hub `{id}` referenced by {by}")]
    UnknownHub {
        network: &'static str,
        id: String,
        by: String,
    },
    #[error("invalid case:\n{0}")]
    Invalid(ValidationReport),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum UnitSystem {
    #[default]
    Physical,
    PerUnit,
}

/// Which electrical network a device is attached to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Network {
    Ac,
    Dc,
}

impl Network {
    pub fn name(self) -> &'static str {
        match self {
            Network::Ac => "AC",
            Network::Dc => "DC",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RenewableKind {
    Wind,
    Solar,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TerminalRule {
    Free,
    #[default]
    AtLeastInitial,
}

/// A scalar curve used for supplier cost and turbine fuel.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum CurveSpec {
    /// `a + b*x + c*x^2`
    Quadratic { a: f64, b: f64, c: f64 },
    /// Linear interpolation through tabulated `[x, y]` points (x ascending).
    Table { points: Vec<[f64; 2]> },
}

impl CurveSpec {
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            CurveSpec::Quadratic { a, b, c } => a + x * (b + c * x),
            CurveSpec::Table { points } => {
                if points.is_empty() {
                    return f64::NAN;
                }
                if points.len() == 1 {
                    return points[0][1];
                }
                // extrapolate linearly from the end segments
                let k = match points.iter().position(|p| x <= p[0]) {
                    Some(0) => 1,
                    Some(k) => k,
                    None => points.len() - 1,
                };
                let [x0, y0] = points[k - 1];
                let [x1, y1] = points[k];
                y0 + (y1 - y0) * (x - x0) / (x1 - x0)
            }
        }
    }

    /// Sampled check that the curve is convex on `[lo, hi]`.
    pub fn is_convex_on(&self, lo: f64, hi: f64) -> bool {
        match self {
            CurveSpec::Quadratic { c, .. } => *c >= 0.0,
            CurveSpec::Table { points } => {
                if points.windows(2).any(|w| w[1][0] <= w[0][0]) {
                    return false;
                }
                let slopes: Vec<f64> = points
                    .windows(2)
                    .filter(|w| w[1][0] > lo && w[0][0] < hi)
                    .map(|w| (w[1][1] - w[0][1]) / (w[1][0] - w[0][0]))
                    .collect();
                slopes.windows(2).all(|s| s[1] >= s[0] - 1e-12)
            }
        }
    }

    pub fn is_nondecreasing_on(&self, lo: f64, hi: f64) -> bool {
        match self {
            CurveSpec::Quadratic { b, c, .. } => b + 2.0 * c * lo >= -1e-12 && b + 2.0 * c * hi >= -1e-12,
            CurveSpec::Table { .. } => {
                const SAMPLES: usize = 64;
                let mut prev = self.eval(lo);
                (1..=SAMPLES).all(|i| {
                    let y = self.eval(lo + (hi - lo) * i as f64 / SAMPLES as f64);
                    let ok = y >= prev - 1e-12;
                    prev = y;
                    ok
                })
            }
        }
    }

    pub fn is_finite(&self) -> bool {
        match self {
            CurveSpec::Quadratic { a, b, c } => a.is_finite() && b.is_finite() && c.is_finite(),
            CurveSpec::Table { points } => {
                !points.is_empty() && points.iter().flatten().all(|v| v.is_finite())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PerUnitBase {
    #[serde(rename = "power_kva")]
    pub power: f64,
    pub pressure: f64,
}

impl Default for PerUnitBase {
    fn default() -> Self {
        Self {
            power: 100.0,
            pressure: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CostParams {
    /// Value of lost electric load, $/kWh.
    #[serde(rename = "voll_e_per_kwh")]
    pub voll_e: f64,
    /// Value of lost heat load, $/Skcf.
    #[serde(rename = "voll_g_per_skcf")]
    pub voll_g: f64,
    /// Battery degradation cost, $/kWh discharged.
    #[serde(rename = "beta_per_kwh")]
    pub beta: f64,
    /// Weight of reactive flow in the line apparent-power approximation.
    pub xi: f64,
    pub pwl_segments: usize,
}

impl Default for CostParams {
    fn default() -> Self {
        Self {
            voll_e: 10.0,
            voll_g: 20.0,
            beta: 0.5,
            xi: 0.3,
            pwl_segments: 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AcHub {
    pub id: String,
    #[serde(rename = "v_min_pu")]
    pub v_min: f64,
    #[serde(rename = "v_max_pu")]
    pub v_max: f64,
    #[serde(rename = "demand_p_kw")]
    pub demand_p: Vec<f64>,
    #[serde(rename = "demand_q_kvar")]
    pub demand_q: Vec<f64>,
    #[serde(default)]
    pub is_reference: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AcLine {
    pub id: String,
    pub from: String,
    pub to: String,
    #[serde(rename = "g_pu")]
    pub g: f64,
    #[serde(rename = "b_pu")]
    pub b: f64,
    #[serde(rename = "sl_max_pu")]
    pub sl_max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DcHub {
    pub id: String,
    #[serde(rename = "v_min_pu")]
    pub v_min: f64,
    #[serde(rename = "v_max_pu")]
    pub v_max: f64,
    #[serde(rename = "demand_p_kw")]
    pub demand_p: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DcLine {
    pub id: String,
    pub from: String,
    pub to: String,
    #[serde(rename = "r_pu")]
    pub r: f64,
    #[serde(rename = "sl_max_pu")]
    pub sl_max: f64,
}

/// Bidirectional AC/DC converter. Positive active power flows DC → AC.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Inverter {
    pub id: String,
    pub ac_hub: String,
    pub dc_hub: String,
    #[serde(rename = "p_min_kw")]
    pub p_min: f64,
    #[serde(rename = "p_max_kw")]
    pub p_max: f64,
    #[serde(rename = "q_min_kvar")]
    pub q_min: f64,
    #[serde(rename = "q_max_kvar")]
    pub q_max: f64,
}

/// Gas-fired generator. `fuel_curve` maps output in kW to Skcf/hr and is
/// never rescaled by per-unit conversion.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Microturbine {
    pub id: String,
    pub network: Network,
    pub hub: String,
    pub gas_hub: String,
    #[serde(rename = "p_min_kw")]
    pub p_min: f64,
    #[serde(rename = "p_max_kw")]
    pub p_max: f64,
    #[serde(rename = "q_min_kvar", default)]
    pub q_min: f64,
    #[serde(rename = "q_max_kvar", default)]
    pub q_max: f64,
    pub fuel_curve: CurveSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RenewableUnit {
    pub id: String,
    pub kind: RenewableKind,
    pub network: Network,
    pub hub: String,
    #[serde(rename = "forecast_kw")]
    pub forecast: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BatteryUnit {
    pub id: String,
    pub dc_hub: String,
    #[serde(rename = "p_ch_min_kw")]
    pub p_ch_min: f64,
    #[serde(rename = "p_ch_max_kw")]
    pub p_ch_max: f64,
    #[serde(rename = "p_dc_min_kw")]
    pub p_dc_min: f64,
    #[serde(rename = "p_dc_max_kw")]
    pub p_dc_max: f64,
    pub eta_ch: f64,
    pub eta_dc: f64,
    #[serde(rename = "e_min_kwh")]
    pub e_min: f64,
    #[serde(rename = "e_max_kwh")]
    pub e_max: f64,
    #[serde(rename = "e_initial_kwh")]
    pub e_initial: f64,
    #[serde(default)]
    pub terminal_rule: TerminalRule,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GasHub {
    pub id: String,
    pub pi_min: f64,
    pub pi_max: f64,
    #[serde(rename = "heat_demand_skcf_hr")]
    pub heat_demand: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GasPipe {
    pub id: String,
    pub from: String,
    pub to: String,
    pub c_p: f64,
    /// Linearization pressure at `from`.
    pub pi0_from: f64,
    /// Linearization pressure at `to`.
    pub pi0_to: f64,
    #[serde(rename = "f_max_skcf_hr")]
    pub f_max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GasSupplier {
    pub id: String,
    pub gas_hub: String,
    #[serde(rename = "v_min_skcf_hr")]
    pub v_min: f64,
    #[serde(rename = "v_max_skcf_hr")]
    pub v_max: f64,
    /// $/hr as a function of supply rate in Skcf/hr.
    pub cost_curve: CurveSpec,
}

fn default_horizon() -> usize {
    24
}

/// Complete planning instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MicrogridCase {
    #[serde(default = "default_horizon")]
    pub horizon: usize,
    #[serde(default)]
    pub base: PerUnitBase,
    #[serde(default)]
    pub costs: CostParams,
    pub ac_hubs: Vec<AcHub>,
    #[serde(default)]
    pub ac_lines: Vec<AcLine>,
    #[serde(default)]
    pub dc_hubs: Vec<DcHub>,
    #[serde(default)]
    pub dc_lines: Vec<DcLine>,
    #[serde(default)]
    pub inverters: Vec<Inverter>,
    #[serde(default)]
    pub turbines: Vec<Microturbine>,
    #[serde(default)]
    pub renewables: Vec<RenewableUnit>,
    #[serde(default)]
    pub batteries: Vec<BatteryUnit>,
    #[serde(default)]
    pub gas_hubs: Vec<GasHub>,
    #[serde(default)]
    pub pipes: Vec<GasPipe>,
    #[serde(default)]
    pub suppliers: Vec<GasSupplier>,
    #[serde(skip)]
    pub units: UnitSystem,
}

impl MicrogridCase {
    pub fn ac_hub_index(&self, id: &str) -> Option<usize> {
        self.ac_hubs.iter().position(|h| h.id == id)
    }

    pub fn dc_hub_index(&self, id: &str) -> Option<usize> {
        self.dc_hubs.iter().position(|h| h.id == id)
    }

    pub fn gas_hub_index(&self, id: &str) -> Option<usize> {
        self.gas_hubs.iter().position(|h| h.id == id)
    }

    pub fn reference_hub(&self) -> Option<usize> {
        self.ac_hubs.iter().position(|h| h.is_reference)
    }

    /// Y-bus of the AC network (hub order as in `ac_hubs`).
    pub fn admittance(&self) -> Result<AdmittanceMatrix, ModelError> {
        let branches = self
            .ac_lines
            .iter()
            .map(|line| {
                let lookup = |id: &str| {
                    self.ac_hub_index(id).ok_or_else(|| ModelError::UnknownHub {
                        network: "AC",
                        id: id.to_string(),
                        by: format!("line {}", line.id),
                    })
                };
                Ok(Branch {
                    from: lookup(&line.from)?,
                    to: lookup(&line.to)?,
                    g: line.g,
                    b: line.b,
                })
            })
            .collect::<Result<Vec<_>, ModelError>>()?;
        assemble_admittance(&branches, self.ac_hubs.len())
    }

    /// Total requested electric demand (AC + DC) at hour `t`, in case units.
    pub fn electric_demand(&self, t: usize) -> f64 {
        self.ac_hubs.iter().map(|h| h.demand_p[t]).sum::<f64>()
            + self.dc_hubs.iter().map(|h| h.demand_p[t]).sum::<f64>()
    }

    pub fn heat_demand(&self, t: usize) -> f64 {
        self.gas_hubs.iter().map(|h| h.heat_demand[t]).sum()
    }
}
