use std::collections::HashSet;
use std::fmt;

use super::{CurveSpec, MicrogridCase, Network};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    /// Location in the case, e.g. `batteries[0].e_initial`.
    pub path: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    fn push(&mut self, path: impl Into<String>, message: impl Into<String>) {
        self.violations.push(Violation {
            path: path.into(),
            message: message.into(),
        });
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.violations {
            writeln!(f, "  {}: {}", v.path, v.message)?;
        }
        Ok(())
    }
}

/// Collect every invariant violation in `case`. Nothing is thrown; an empty
/// report means the case is well-formed.
pub fn validate_case(case: &MicrogridCase) -> ValidationReport {
    let mut r = ValidationReport::default();
    let t = case.horizon;
    if t < 1 {
        r.push("horizon", "horizon must be at least 1");
    }
    if !(case.base.power > 0.0 && case.base.power.is_finite()) {
        r.push("base.power_kva", format!("must be positive, got {}", case.base.power));
    }
    if !(case.base.pressure > 0.0 && case.base.pressure.is_finite()) {
        r.push("base.pressure", format!("must be positive, got {}", case.base.pressure));
    }
    let c = &case.costs;
    for (name, v) in [("voll_e", c.voll_e), ("voll_g", c.voll_g), ("beta", c.beta), ("xi", c.xi)] {
        if !(v >= 0.0 && v.is_finite()) {
            r.push(format!("costs.{name}"), format!("must be finite and non-negative, got {v}"));
        }
    }
    if c.pwl_segments < 1 {
        r.push("costs.pwl_segments", "at least one segment required");
    }

    unique_ids(&mut r, "ac_hubs", case.ac_hubs.iter().map(|h| h.id.as_str()));
    unique_ids(&mut r, "dc_hubs", case.dc_hubs.iter().map(|h| h.id.as_str()));
    unique_ids(&mut r, "gas_hubs", case.gas_hubs.iter().map(|h| h.id.as_str()));

    let refs = case.ac_hubs.iter().filter(|h| h.is_reference).count();
    if !case.ac_hubs.is_empty() && refs != 1 {
        r.push("ac_hubs", format!("exactly one reference hub required, found {refs}"));
    }
    for (i, h) in case.ac_hubs.iter().enumerate() {
        let p = format!("ac_hubs[{i}]");
        voltage_band(&mut r, &p, h.v_min, h.v_max);
        profile(&mut r, &format!("{p}.demand_p_kw"), &h.demand_p, t);
        profile(&mut r, &format!("{p}.demand_q_kvar"), &h.demand_q, t);
    }
    for (i, h) in case.dc_hubs.iter().enumerate() {
        let p = format!("dc_hubs[{i}]");
        voltage_band(&mut r, &p, h.v_min, h.v_max);
        profile(&mut r, &format!("{p}.demand_p_kw"), &h.demand_p, t);
    }
    for (i, h) in case.gas_hubs.iter().enumerate() {
        let p = format!("gas_hubs[{i}]");
        if !(h.pi_min > 0.0 && h.pi_min <= h.pi_max && h.pi_max.is_finite()) {
            r.push(&p, format!("pressure bounds need 0 < pi_min <= pi_max, got [{}, {}]", h.pi_min, h.pi_max));
        }
        profile(&mut r, &format!("{p}.heat_demand_skcf_hr"), &h.heat_demand, t);
    }

    let has = |net: Network, id: &str| match net {
        Network::Ac => case.ac_hub_index(id).is_some(),
        Network::Dc => case.dc_hub_index(id).is_some(),
    };
    let has_gas = |id: &str| case.gas_hub_index(id).is_some();

    for (i, l) in case.ac_lines.iter().enumerate() {
        let p = format!("ac_lines[{i}]");
        endpoints(&mut r, &p, &l.from, &l.to, |id| has(Network::Ac, id), "AC");
        if !(l.g.is_finite() && l.b.is_finite()) {
            r.push(&p, "admittance must be finite");
        }
        positive(&mut r, &format!("{p}.sl_max_pu"), l.sl_max);
    }
    for (i, l) in case.dc_lines.iter().enumerate() {
        let p = format!("dc_lines[{i}]");
        endpoints(&mut r, &p, &l.from, &l.to, |id| has(Network::Dc, id), "DC");
        positive(&mut r, &format!("{p}.r_pu"), l.r);
        positive(&mut r, &format!("{p}.sl_max_pu"), l.sl_max);
    }
    for (i, inv) in case.inverters.iter().enumerate() {
        let p = format!("inverters[{i}]");
        if !has(Network::Ac, &inv.ac_hub) {
            r.push(&p, format!("unknown AC hub `{}`", inv.ac_hub));
        }
        if !has(Network::Dc, &inv.dc_hub) {
            r.push(&p, format!("unknown DC hub `{}`", inv.dc_hub));
        }
        ordered(&mut r, &format!("{p}.p"), inv.p_min, inv.p_max);
        ordered(&mut r, &format!("{p}.q"), inv.q_min, inv.q_max);
    }
    for (i, g) in case.turbines.iter().enumerate() {
        let p = format!("turbines[{i}]");
        if !has(g.network, &g.hub) {
            r.push(&p, format!("unknown {} hub `{}`", g.network.name(), g.hub));
        }
        if !has_gas(&g.gas_hub) {
            r.push(&p, format!("unknown gas hub `{}`", g.gas_hub));
        }
        if !(g.p_min >= 0.0) {
            r.push(format!("{p}.p_min_kw"), "must be non-negative");
        }
        ordered(&mut r, &format!("{p}.p"), g.p_min, g.p_max);
        if g.network == Network::Ac {
            ordered(&mut r, &format!("{p}.q"), g.q_min, g.q_max);
        }
        curve(&mut r, &format!("{p}.fuel_curve"), &g.fuel_curve, g.p_min, g.p_max, true);
    }
    for (i, u) in case.renewables.iter().enumerate() {
        let p = format!("renewables[{i}]");
        if !has(u.network, &u.hub) {
            r.push(&p, format!("unknown {} hub `{}`", u.network.name(), u.hub));
        }
        profile(&mut r, &format!("{p}.forecast_kw"), &u.forecast, t);
    }
    for (i, b) in case.batteries.iter().enumerate() {
        let p = format!("batteries[{i}]");
        if !has(Network::Dc, &b.dc_hub) {
            r.push(&p, format!("unknown DC hub `{}`", b.dc_hub));
        }
        if !(0.0 <= b.p_ch_min && b.p_ch_min <= b.p_ch_max && b.p_ch_max.is_finite()) {
            r.push(&p, format!("charge bounds need 0 <= p_ch_min <= p_ch_max, got [{}, {}]", b.p_ch_min, b.p_ch_max));
        }
        if !(0.0 <= b.p_dc_min && b.p_dc_min <= b.p_dc_max && b.p_dc_max.is_finite()) {
            r.push(&p, format!("discharge bounds need 0 <= p_dc_min <= p_dc_max, got [{}, {}]", b.p_dc_min, b.p_dc_max));
        }
        for (name, eta) in [("eta_ch", b.eta_ch), ("eta_dc", b.eta_dc)] {
            if !(eta > 0.0 && eta <= 1.0) {
                r.push(format!("{p}.{name}"), format!("efficiency must lie in (0, 1], got {eta}"));
            }
        }
        if !(b.e_min <= b.e_initial && b.e_initial <= b.e_max && b.e_min.is_finite() && b.e_max.is_finite()) {
            r.push(
                format!("{p}.e_initial_kwh"),
                format!("energy bounds need e_min <= e_initial <= e_max, got {} <= {} <= {}", b.e_min, b.e_initial, b.e_max),
            );
        }
    }
    for (i, pipe) in case.pipes.iter().enumerate() {
        let p = format!("pipes[{i}]");
        endpoints(&mut r, &p, &pipe.from, &pipe.to, has_gas, "gas");
        positive(&mut r, &format!("{p}.c_p"), pipe.c_p);
        positive(&mut r, &format!("{p}.f_max_skcf_hr"), pipe.f_max);
        positive(&mut r, &format!("{p}.pi0_from"), pipe.pi0_from);
        positive(&mut r, &format!("{p}.pi0_to"), pipe.pi0_to);
        if pipe.pi0_from == pipe.pi0_to {
            r.push(&p, "equal linearization pressures make the flow model singular");
        }
    }
    for (i, s) in case.suppliers.iter().enumerate() {
        let p = format!("suppliers[{i}]");
        if !has_gas(&s.gas_hub) {
            r.push(&p, format!("unknown gas hub `{}`", s.gas_hub));
        }
        if !(0.0 <= s.v_min && s.v_min <= s.v_max && s.v_max.is_finite()) {
            r.push(&p, format!("supply bounds need 0 <= v_min <= v_max, got [{}, {}]", s.v_min, s.v_max));
        }
        curve(&mut r, &format!("{p}.cost_curve"), &s.cost_curve, s.v_min, s.v_max, false);
    }
    r
}

fn unique_ids<'a>(r: &mut ValidationReport, what: &str, ids: impl Iterator<Item = &'a str>) {
    let mut seen = HashSet::new();
    for id in ids {
        if !seen.insert(id) {
            r.push(what, format!("duplicate hub id `{id}`"));
        }
    }
}

fn voltage_band(r: &mut ValidationReport, path: &str, lo: f64, hi: f64) {
    if !(lo > 0.0 && lo <= hi && hi.is_finite()) {
        r.push(path, format!("voltage bounds need 0 < v_min <= v_max, got [{lo}, {hi}]"));
    }
}

fn profile(r: &mut ValidationReport, path: &str, values: &[f64], horizon: usize) {
    if values.len() != horizon {
        r.push(path, format!("profile has {} entries, expected {horizon}", values.len()));
    }
    if let Some((t, v)) = values.iter().enumerate().find(|(_, v)| !(**v >= 0.0 && v.is_finite())) {
        r.push(path, format!("entry {t} must be finite and non-negative, got {v}"));
    }
}

fn endpoints(r: &mut ValidationReport, path: &str, from: &str, to: &str, exists: impl Fn(&str) -> bool, net: &str) {
    if from == to {
        r.push(path, format!("from and to are the same hub `{from}`"));
    }
    for id in [from, to] {
        if !exists(id) {
            r.push(path, format!("unknown {net} hub `{id}`"));
        }
    }
}

fn positive(r: &mut ValidationReport, path: &str, v: f64) {
    if !(v > 0.0 && v.is_finite()) {
        r.push(path, format!("must be positive, got {v}"));
    }
}

fn ordered(r: &mut ValidationReport, path: &str, lo: f64, hi: f64) {
    if !(lo <= hi && lo.is_finite() && hi.is_finite()) {
        r.push(path, format!("bounds out of order: [{lo}, {hi}]"));
    }
}

fn curve(r: &mut ValidationReport, path: &str, spec: &CurveSpec, lo: f64, hi: f64, nondecreasing: bool) {
    if !spec.is_finite() {
        r.push(path, "curve coefficients must be finite");
        return;
    }
    if let CurveSpec::Table { points } = spec {
        if points.len() < 2 {
            r.push(path, "table needs at least two points");
            return;
        }
    }
    if !spec.is_convex_on(lo, hi) {
        r.push(path, format!("curve is not convex on [{lo}, {hi}]"));
    }
    if nondecreasing && !spec.is_nondecreasing_on(lo, hi) {
        r.push(path, format!("curve is not nondecreasing on [{lo}, {hi}]"));
    }
}
