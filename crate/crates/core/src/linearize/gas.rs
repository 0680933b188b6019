use super::LinearizeError;
use crate::model::GasPipe;

/// Linear pipe flow `f = a_n * pi_n - a_m * pi_m`, with `n` the pipe's
/// `from` hub and `m` its `to` hub. Positive flow runs from `n` to `m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFlowModel {
    pub a_n: f64,
    pub a_m: f64,
    /// The linearization point has higher pressure at `to` than at `from`.
    pub reversed: bool,
}

impl LinearFlowModel {
    pub fn flow(&self, pi_n: f64, pi_m: f64) -> f64 {
        self.a_n * pi_n - self.a_m * pi_m
    }
}

/// Weymouth flow `c_p * sign(pi_n^2 - pi_m^2) * sqrt(|pi_n^2 - pi_m^2|)`.
pub fn weymouth_flow(c_p: f64, pi_n: f64, pi_m: f64) -> f64 {
    let d = pi_n * pi_n - pi_m * pi_m;
    c_p * d.signum() * d.abs().sqrt()
}

/// First-order expansion of the Weymouth relation around the pipe's initial
/// pressures. When `pi0_to > pi0_from` the expansion is taken in the
/// reversed orientation and negated, which amounts to using
/// `|pi0_from^2 - pi0_to^2|` under the root.
pub fn gas_flow_coefficients(pipe: &GasPipe) -> Result<LinearFlowModel, LinearizeError> {
    let (pn, pm) = (pipe.pi0_from, pipe.pi0_to);
    if !(pn > 0.0 && pm > 0.0 && pipe.c_p > 0.0 && pn.is_finite() && pm.is_finite() && pipe.c_p.is_finite()) {
        return Err(LinearizeError::InvalidPipe { pipe: pipe.id.clone() });
    }
    if pn == pm {
        return Err(LinearizeError::SingularPipe {
            pipe: pipe.id.clone(),
            pressure: pn,
        });
    }
    let denom = (pn * pn - pm * pm).abs().sqrt();
    Ok(LinearFlowModel {
        a_n: pipe.c_p * pn / denom,
        a_m: pipe.c_p * pm / denom,
        reversed: pm > pn,
    })
}
