use super::{MicrogridCase, ModelError, UnitSystem};

/// Divide every kW/kvar/kWh quantity by the base power. Voltages and line
/// parameters are already per-unit; gas quantities and curve specs are kept
/// in physical units.
pub fn to_per_unit(case: &MicrogridCase) -> Result<MicrogridCase, ModelError> {
    if case.units != UnitSystem::Physical {
        return Err(ModelError::WrongUnits(case.units));
    }
    check_base(case)?;
    let mut out = case.clone();
    scale(&mut out, 1.0 / case.base.power);
    out.units = UnitSystem::PerUnit;
    Ok(out)
}

pub fn from_per_unit(case: &MicrogridCase) -> Result<MicrogridCase, ModelError> {
    if case.units != UnitSystem::PerUnit {
        return Err(ModelError::WrongUnits(case.units));
    }
    check_base(case)?;
    let mut out = case.clone();
    scale(&mut out, case.base.power);
    out.units = UnitSystem::Physical;
    Ok(out)
}

fn check_base(case: &MicrogridCase) -> Result<(), ModelError> {
    let base = &case.base;
    if !(base.power > 0.0 && base.power.is_finite()) {
        return Err(ModelError::InvalidBase {
            name: "power",
            value: base.power,
        });
    }
    if !(base.pressure > 0.0 && base.pressure.is_finite()) {
        return Err(ModelError::InvalidBase {
            name: "pressure",
            value: base.pressure,
        });
    }
    Ok(())
}

fn scale(case: &mut MicrogridCase, k: f64) {
    let all = |v: &mut Vec<f64>| v.iter_mut().for_each(|x| *x *= k);
    for h in &mut case.ac_hubs {
        all(&mut h.demand_p);
        all(&mut h.demand_q);
    }
    for h in &mut case.dc_hubs {
        all(&mut h.demand_p);
    }
    for c in &mut case.inverters {
        c.p_min *= k;
        c.p_max *= k;
        c.q_min *= k;
        c.q_max *= k;
    }
    for g in &mut case.turbines {
        g.p_min *= k;
        g.p_max *= k;
        g.q_min *= k;
        g.q_max *= k;
    }
    for r in &mut case.renewables {
        all(&mut r.forecast);
    }
    for b in &mut case.batteries {
        b.p_ch_min *= k;
        b.p_ch_max *= k;
        b.p_dc_min *= k;
        b.p_dc_max *= k;
        b.e_min *= k;
        b.e_max *= k;
        b.e_initial *= k;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::fixtures;

    #[test]
    fn divides_by_base_power() {
        let mut case = fixtures::toy_case();
        case.turbines[0].p_max = 120.0;
        let pu = to_per_unit(&case).unwrap();
        assert!((pu.turbines[0].p_max - 1.2).abs() < 1e-15);
        assert_eq!(pu.units, UnitSystem::PerUnit);
        // gas untouched
        assert_eq!(pu.pipes, case.pipes);
        assert_eq!(pu.suppliers, case.suppliers);
    }

    #[test]
    fn roundtrip_is_identity() {
        let case = fixtures::case1();
        let back = from_per_unit(&to_per_unit(&case).unwrap()).unwrap();
        assert_eq!(back.units, UnitSystem::Physical);
        for (a, b) in case.ac_hubs.iter().zip(&back.ac_hubs) {
            for (x, y) in a.demand_p.iter().zip(&b.demand_p) {
                assert!((x - y).abs() <= 1e-12 * x.abs().max(1.0));
            }
        }
        for (a, b) in case.batteries.iter().zip(&back.batteries) {
            assert!((a.e_max - b.e_max).abs() <= 1e-12 * a.e_max);
        }
    }

    #[test]
    fn zero_base_rejected() {
        let mut case = fixtures::toy_case();
        case.base.power = 0.0;
        assert_eq!(
            to_per_unit(&case).unwrap_err(),
            ModelError::InvalidBase {
                name: "power",
                value: 0.0
            }
        );
    }

    #[test]
    fn double_conversion_rejected() {
        let pu = to_per_unit(&fixtures::toy_case()).unwrap();
        assert!(matches!(to_per_unit(&pu), Err(ModelError::WrongUnits(UnitSystem::PerUnit))));
    }
}
