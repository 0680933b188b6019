use serde::Serialize;

use crate::builder::{DispatchSchedule, Entity, Quantity};
use crate::linearize::{gas_flow_coefficients, weymouth_flow};
use crate::model::{GasPipe, Incidence, MicrogridCase};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PipeError {
    pub pipe: String,
    pub hour: usize,
    pub linear_flow: f64,
    pub weymouth_flow: f64,
    /// `linear_flow - weymouth_flow`
    pub error: f64,
}

/// Linear-model flow minus the Weymouth flow at pressures `(pi_n, pi_m)`.
/// `None` when the pipe has no valid linear model.
pub fn pipe_linearization_error(pipe: &GasPipe, pi_n: f64, pi_m: f64) -> Option<f64> {
    let lin = gas_flow_coefficients(pipe).ok()?;
    Some(lin.flow(pi_n, pi_m) - weymouth_flow(pipe.c_p, pi_n, pi_m))
}

/// Per-pipe, per-hour error of the linear flow model at the solved pressures.
pub fn weymouth_error(case: &MicrogridCase, schedule: &DispatchSchedule) -> Vec<PipeError> {
    let Ok(inc) = Incidence::build(case) else {
        return Vec::new();
    };
    let mut out = Vec::new();
    for (p, pipe) in case.pipes.iter().enumerate() {
        let Ok(lin) = gas_flow_coefficients(pipe) else {
            continue;
        };
        let (n, m) = inc.pipe_ends[p];
        for t in 0..schedule.horizon {
            let pi_n = schedule.get(Entity::GasHub(n), Quantity::Pi, t);
            let pi_m = schedule.get(Entity::GasHub(m), Quantity::Pi, t);
            let linear_flow = lin.flow(pi_n, pi_m);
            let true_flow = weymouth_flow(pipe.c_p, pi_n, pi_m);
            out.push(PipeError {
                pipe: pipe.id.clone(),
                hour: t,
                linear_flow,
                weymouth_flow: true_flow,
                error: linear_flow - true_flow,
            });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::fixtures::toy_case;
    use crate::solver::MilpStatus;

    fn pipe(pn: f64, pm: f64) -> GasPipe {
        GasPipe {
            id: "p".into(),
            from: "a".into(),
            to: "b".into(),
            c_p: 1.0,
            pi0_from: pn,
            pi0_to: pm,
            f_max: 10.0,
        }
    }

    #[test]
    fn zero_at_linearization_point() {
        let case = toy_case();
        let mut s = DispatchSchedule {
            horizon: 2,
            segments: 4,
            status: MilpStatus::Optimal,
            objective: 0.0,
            values: Default::default(),
        };
        for t in 0..2 {
            s.set(Entity::GasHub(0), Quantity::Pi, t, case.pipes[0].pi0_from);
            s.set(Entity::GasHub(1), Quantity::Pi, t, case.pipes[0].pi0_to);
        }
        let errs = weymouth_error(&case, &s);
        assert_eq!(errs.len(), 2);
        for e in errs {
            assert!(e.error.abs() <= 1e-9, "{e:?}");
        }
    }

    #[test]
    fn hand_example() {
        let e = pipe_linearization_error(&pipe(2.0, 1.0), 2.1, 1.0).unwrap();
        let linear = 3.2 / 3f64.sqrt();
        let truth = (2.1f64 * 2.1 - 1.0).sqrt();
        assert!((linear - 1.8475).abs() < 1e-4);
        assert!((truth - 1.8466).abs() < 1e-4);
        assert!((e - (linear - truth)).abs() < 1e-12);
        assert!((e - 9.2e-4).abs() < 2e-5, "{e}");
    }

    #[test]
    fn error_grows_along_a_ray() {
        let p = pipe(2.0, 1.0);
        for dir in [(1.0, 0.0), (0.0, 1.0), (0.6, -0.8), (-0.3, -0.5)] {
            let mut prev = 0.0;
            for k in 1..=40 {
                let s = 0.01 * k as f64;
                let e = pipe_linearization_error(&p, 2.0 + s * dir.0, 1.0 + s * dir.1).unwrap().abs();
                assert!(e >= prev, "dir {dir:?} step {k}: {e} < {prev}");
                prev = e;
            }
        }
    }
}
