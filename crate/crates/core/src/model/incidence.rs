use super::{MicrogridCase, ModelError, Network};

/// Hub/device incidence resolved to indices: which devices sit on each hub
/// and which pipes leave or enter each gas hub.
#[derive(Debug, Clone, PartialEq)]
pub struct Incidence {
    pub ac_line_ends: Vec<(usize, usize)>,
    pub dc_line_ends: Vec<(usize, usize)>,
    /// (AC hub, DC hub) per inverter.
    pub inverter_hubs: Vec<(usize, usize)>,
    pub turbine_hub: Vec<(Network, usize)>,
    pub turbine_gas_hub: Vec<usize>,
    pub renewable_hub: Vec<(Network, usize)>,
    pub battery_hub: Vec<usize>,
    pub pipe_ends: Vec<(usize, usize)>,
    pub supplier_hub: Vec<usize>,
}

impl Incidence {
    pub fn build(case: &MicrogridCase) -> Result<Self, ModelError> {
        let ac = |id: &str, by: &str| {
            case.ac_hub_index(id).ok_or_else(|| unknown("AC", id, by))
        };
        let dc = |id: &str, by: &str| {
            case.dc_hub_index(id).ok_or_else(|| unknown("DC", id, by))
        };
        let gas = |id: &str, by: &str| {
            case.gas_hub_index(id).ok_or_else(|| unknown("gas", id, by))
        };
        let on = |net: Network, id: &str, by: &str| match net {
            Network::Ac => ac(id, by),
            Network::Dc => dc(id, by),
        };

        let mut inc = Incidence {
            ac_line_ends: Vec::new(),
            dc_line_ends: Vec::new(),
            inverter_hubs: Vec::new(),
            turbine_hub: Vec::new(),
            turbine_gas_hub: Vec::new(),
            renewable_hub: Vec::new(),
            battery_hub: Vec::new(),
            pipe_ends: Vec::new(),
            supplier_hub: Vec::new(),
        };
        for l in &case.ac_lines {
            let by = format!("AC line {}", l.id);
            inc.ac_line_ends.push((ac(&l.from, &by)?, ac(&l.to, &by)?));
        }
        for l in &case.dc_lines {
            let by = format!("DC line {}", l.id);
            inc.dc_line_ends.push((dc(&l.from, &by)?, dc(&l.to, &by)?));
        }
        for c in &case.inverters {
            let by = format!("inverter {}", c.id);
            inc.inverter_hubs.push((ac(&c.ac_hub, &by)?, dc(&c.dc_hub, &by)?));
        }
        for g in &case.turbines {
            let by = format!("turbine {}", g.id);
            inc.turbine_hub.push((g.network, on(g.network, &g.hub, &by)?));
            inc.turbine_gas_hub.push(gas(&g.gas_hub, &by)?);
        }
        for r in &case.renewables {
            let by = format!("renewable {}", r.id);
            inc.renewable_hub.push((r.network, on(r.network, &r.hub, &by)?));
        }
        for k in &case.batteries {
            inc.battery_hub.push(dc(&k.dc_hub, &format!("battery {}", k.id))?);
        }
        for p in &case.pipes {
            let by = format!("pipe {}", p.id);
            inc.pipe_ends.push((gas(&p.from, &by)?, gas(&p.to, &by)?));
        }
        for s in &case.suppliers {
            inc.supplier_hub.push(gas(&s.gas_hub, &format!("supplier {}", s.id))?);
        }
        Ok(inc)
    }
}

fn unknown(network: &'static str, id: &str, by: &str) -> ModelError {
    ModelError::UnknownHub {
        network,
        id: id.to_string(),
        by: by.to_string(),
    }
}
