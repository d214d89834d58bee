use super::jury::Mat2;
use crate::error::{domain, Result};
use crate::model::{gradient_partials, step, ModelParams, PriceState, Substitutability};

fn check(state: &PriceState) -> Result<()> {
    if state.p1 > 0.0 && state.p2 > 0.0 && state.p1.is_finite() && state.p2.is_finite() {
        Ok(())
    } else {
        domain(format!("state ({}, {}) is not strictly positive", state.p1, state.p2))
    }
}

/// Jacobian of the price map. Closed-form entries for α = 1/2 and α = 1/3,
/// the analytic general-β derivative otherwise.
pub fn jacobian(params: &ModelParams, state: &PriceState) -> Result<Mat2> {
    match params.substitutability() {
        Some(Substitutability::Half) => jacobian_half(params, state),
        Some(Substitutability::Third) => jacobian_third(params, state),
        None => jacobian_generic(params, state),
    }
}

/// α = 1/2 entries as rational functions of `p1, p2`.
pub fn jacobian_half(params: &ModelParams, state: &PriceState) -> Result<Mat2> {
    check(state)?;
    let (p1, p2) = (state.p1, state.p2);
    let (c1, c2, k1, k2) = (params.c1(), params.c2(), params.k1(), params.k2());
    let s3 = (p1 + p2).powi(3);
    let diag = |a: f64, b: f64, c: f64, k: f64| {
        (a.powi(6) + 3.0 * a.powi(5) * b + 3.0 * a.powi(4) * b * b + (b.powi(3) + 2.0 * k * b) * a.powi(3)
            - 6.0 * k * b * a * a * c
            - 6.0 * k * b * b * a * c
            - 2.0 * c * k * b.powi(3))
            / (a.powi(3) * s3)
    };
    Ok(Mat2([
        [diag(p1, p2, c1, k1), k1 * (2.0 * c1 - p1 + p2) / s3],
        [k2 * (2.0 * c2 + p1 - p2) / s3, diag(p2, p1, c2, k2)],
    ]))
}

/// α = 1/3 entries in `x = √p1`, `y = √p2`.
pub fn jacobian_third(params: &ModelParams, state: &PriceState) -> Result<Mat2> {
    check(state)?;
    let (x, y) = (state.p1.sqrt(), state.p2.sqrt());
    let (c1, c2, k1, k2) = (params.c1(), params.c2(), params.k1(), params.k2());
    let s3 = (x + y).powi(3);
    let diag = |x: f64, y: f64, c: f64, k: f64| {
        (12.0 * x.powi(9) * y + 4.0 * x.powi(7) * y.powi(3) - 15.0 * c * k * x.powi(3) * y - 8.0 * c * k * y.powi(3) * x
            + 3.0 * k * x.powi(5) * y
            + 4.0 * x.powi(10)
            + 12.0 * x.powi(8) * y * y
            - 21.0 * c * k * x * x * y * y
            + k * x.powi(4) * y * y)
            / (4.0 * x.powi(7) * s3)
    };
    let off = |x: f64, y: f64, c: f64, k: f64| {
        k * (y * x.powi(3) - x.powi(4) + c * y * x + 3.0 * x * x * c) / (4.0 * x.powi(4) * s3 * y)
    };
    Ok(Mat2([[diag(x, y, c1, k1), off(x, y, c1, k1)], [off(y, x, c2, k2), diag(y, x, c2, k2)]]))
}

/// Analytic Jacobian for any α via the derivative of the general gradient.
pub fn jacobian_generic(params: &ModelParams, state: &PriceState) -> Result<Mat2> {
    check(state)?;
    let b = params.beta();
    let (d11, d12) = gradient_partials(b, state.p1, state.p2, params.c1());
    let (d22, d21) = gradient_partials(b, state.p2, state.p1, params.c2());
    Ok(Mat2([
        [1.0 + params.k1() * d11, params.k1() * d12],
        [params.k2() * d21, 1.0 + params.k2() * d22],
    ]))
}

/// Central finite differences of `step`, with step `h_rel · p_i`.
pub fn jacobian_fd(params: &ModelParams, state: &PriceState, h_rel: f64) -> Result<Mat2> {
    check(state)?;
    let mut m = [[0.0; 2]; 2];
    for j in 0..2 {
        let h = h_rel * if j == 0 { state.p1 } else { state.p2 };
        let shift = |d: f64| {
            let mut s = *state;
            if j == 0 {
                s.p1 += d;
            } else {
                s.p2 += d;
            }
            s
        };
        let plus = step(params, &shift(h))?;
        let minus = step(params, &shift(-h))?;
        m[0][j] = (plus.p1 - minus.p1) / (2.0 * h);
        m[1][j] = (plus.p2 - minus.p2) / (2.0 * h);
    }
    Ok(Mat2(m))
}
