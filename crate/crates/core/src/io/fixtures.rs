//! Bundled cases. `case2` and `case3` each differ from `case1` in one field.
//! Profiles, impedances, battery data and cost curves are synthetic.

use super::case_file::parse_case_str;
use crate::model::{
    AcHub, AcLine, BatteryUnit, CostParams, CurveSpec, DcHub, DcLine, GasHub, GasPipe, GasSupplier, Inverter,
    MicrogridCase, Microturbine, Network, PerUnitBase, RenewableKind, RenewableUnit, TerminalRule, UnitSystem,
};

pub const CASE1_JSON: &str = include_str!("../../fixtures/case1.json");
pub const CASE2_JSON: &str = include_str!("../../fixtures/case2.json");
pub const CASE3_JSON: &str = include_str!("../../fixtures/case3.json");

pub fn case1() -> MicrogridCase {
    parse_case_str(CASE1_JSON).expect("bundled case1 is valid")
}

/// `case1` with inverter 1 limited to 80 kW.
pub fn case2() -> MicrogridCase {
    parse_case_str(CASE2_JSON).expect("bundled case2 is valid")
}

/// `case1` with every pipe limited to 20 Skcf/hr.
pub fn case3() -> MicrogridCase {
    parse_case_str(CASE3_JSON).expect("bundled case3 is valid")
}

/// Bundled case by name.
pub fn bundled(name: &str) -> Option<MicrogridCase> {
    match name {
        "case1" => Some(case1()),
        "case2" => Some(case2()),
        "case3" => Some(case3()),
        _ => None,
    }
}

/// Two AC hubs joined by one line, two DC hubs with a battery, one inverter,
/// an AC-side turbine and a two-hub gas network with one pipe.
pub fn toy_case() -> MicrogridCase {
    let h = 24;
    let shape: Vec<f64> = (0..h).map(|t| 0.6 + 0.4 * (std::f64::consts::PI * (t as f64 - 8.0) / 12.0).sin().max(0.0)).collect();
    let scaled = |k: f64| shape.iter().map(|s| k * s).collect::<Vec<f64>>();
    let solar: Vec<f64> = (0..h)
        .map(|t| (40.0 * (std::f64::consts::PI * (t as f64 - 6.0) / 12.0).sin()).max(0.0))
        .collect();
    MicrogridCase {
        horizon: h,
        base: PerUnitBase::default(),
        costs: CostParams::default(),
        ac_hubs: vec![
            AcHub {
                id: "A1".into(),
                v_min: 0.95,
                v_max: 1.05,
                demand_p: scaled(20.0),
                demand_q: scaled(6.0),
                is_reference: true,
            },
            AcHub {
                id: "A2".into(),
                v_min: 0.95,
                v_max: 1.05,
                demand_p: scaled(30.0),
                demand_q: scaled(9.0),
                is_reference: false,
            },
        ],
        ac_lines: vec![AcLine {
            id: "L12".into(),
            from: "A1".into(),
            to: "A2".into(),
            g: 4.0,
            b: -20.0,
            sl_max: 2.0,
        }],
        dc_hubs: vec![
            DcHub {
                id: "D1".into(),
                v_min: 0.95,
                v_max: 1.05,
                demand_p: vec![0.0; h],
            },
            DcHub {
                id: "D2".into(),
                v_min: 0.95,
                v_max: 1.05,
                demand_p: scaled(10.0),
            },
        ],
        dc_lines: vec![DcLine {
            id: "D12".into(),
            from: "D1".into(),
            to: "D2".into(),
            r: 0.01,
            sl_max: 2.0,
        }],
        inverters: vec![Inverter {
            id: "INV".into(),
            ac_hub: "A1".into(),
            dc_hub: "D1".into(),
            p_min: -50.0,
            p_max: 50.0,
            q_min: -30.0,
            q_max: 30.0,
        }],
        turbines: vec![Microturbine {
            id: "MT".into(),
            network: Network::Ac,
            hub: "A2".into(),
            gas_hub: "G2".into(),
            p_min: 0.0,
            p_max: 60.0,
            q_min: -20.0,
            q_max: 30.0,
            fuel_curve: CurveSpec::Quadratic { a: 0.0, b: 0.1, c: 0.0005 },
        }],
        renewables: vec![RenewableUnit {
            id: "PV".into(),
            kind: RenewableKind::Solar,
            network: Network::Dc,
            hub: "D1".into(),
            forecast: solar,
        }],
        batteries: vec![BatteryUnit {
            id: "BAT".into(),
            dc_hub: "D2".into(),
            p_ch_min: 2.0,
            p_ch_max: 20.0,
            p_dc_min: 2.0,
            p_dc_max: 20.0,
            eta_ch: 0.9,
            eta_dc: 0.9,
            e_min: 5.0,
            e_max: 60.0,
            e_initial: 20.0,
            terminal_rule: TerminalRule::AtLeastInitial,
        }],
        gas_hubs: vec![
            GasHub {
                id: "G1".into(),
                pi_min: 60.0,
                pi_max: 110.0,
                heat_demand: vec![2.0; h],
            },
            GasHub {
                id: "G2".into(),
                pi_min: 60.0,
                pi_max: 110.0,
                heat_demand: vec![3.0; h],
            },
        ],
        pipes: vec![GasPipe {
            id: "P12".into(),
            from: "G1".into(),
            to: "G2".into(),
            c_p: 1.0,
            pi0_from: 100.0,
            pi0_to: 95.0,
            f_max: 30.0,
        }],
        suppliers: vec![GasSupplier {
            id: "GS".into(),
            gas_hub: "G1".into(),
            v_min: 0.0,
            v_max: 80.0,
            cost_curve: CurveSpec::Quadratic { a: 0.0, b: 4.0, c: 0.01 },
        }],
        units: UnitSystem::Physical,
    }
}
