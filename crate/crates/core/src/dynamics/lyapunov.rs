use crate::error::{domain, Error, Result};
use crate::model::{step, ModelParams, PriceState};
use crate::stability::jacobian;

use super::orbit::{DEFAULT_TRANSIENT, ESCAPE_BOUND};

fn advance(params: &ModelParams, x: &PriceState) -> Result<PriceState> {
    match step(params, x) {
        Ok(n) if n.p1 <= ESCAPE_BOUND && n.p2 <= ESCAPE_BOUND => Ok(n),
        Ok(n) => domain(format!("trajectory escaped at ({}, {})", n.p1, n.p2)),
        Err(Error::Escaped { p1, p2 }) => domain(format!("trajectory escaped at ({p1}, {p2})")),
        Err(e) => Err(e),
    }
}

/// Largest Lyapunov exponent: after a transient of 1000 steps, the mean of
/// `ln‖J v‖` over `n` steps for a renormalized tangent vector `v`.
pub fn lyapunov_exponent(params: &ModelParams, initial: PriceState, n: usize) -> Result<f64> {
    if n == 0 {
        return domain("need at least one step");
    }
    let mut x = PriceState::new(initial.p1, initial.p2)?;
    for _ in 0..DEFAULT_TRANSIENT {
        x = advance(params, &x)?;
    }
    let mut v = [0.6, 0.8];
    let mut sum = 0.0;
    for _ in 0..n {
        let w = jacobian(params, &x)?.apply(v);
        let r = w[0].hypot(w[1]);
        if r == 0.0 {
            return Ok(f64::NEG_INFINITY);
        }
        sum += r.ln();
        v = [w[0] / r, w[1] / r];
        x = advance(params, &x)?;
    }
    Ok(sum / n as f64)
}
