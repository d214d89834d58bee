use std::fmt::Write as _;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{usage, Error, Result};
use crate::model::{step, symmetric_statics, ModelParams, Param, PriceState};
use crate::stability::{jacobian, jury, JuryReport, Mat2};

/// Bisection stops once the bracket in α is this narrow.
pub const ALPHA_TOL: f64 = 1e-6;

/// A 2-cycle `a → b → a`, ordered so that `a.p1 <= b.p1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TwoCycle {
    pub alpha: f64,
    pub a: PriceState,
    pub b: PriceState,
    /// Jury report of the second-iterate Jacobian `J(b)·J(a)`.
    pub jury: JuryReport,
    pub eigenvalues: [Complex64; 2],
}

impl TwoCycle {
    pub fn stable(&self) -> bool {
        self.jury.stable
    }
}

fn second_iterate(params: &ModelParams, x: &PriceState) -> Result<(PriceState, PriceState, Mat2)> {
    let fx = step(params, x)?;
    let ffx = step(params, &fx)?;
    let m = jacobian(params, &fx)?.mul(&jacobian(params, x)?);
    Ok((fx, ffx, m))
}

/// Newton's method on `f(f(x)) = x` from `guess`, rejecting fixed points of `f`.
pub fn find_two_cycle(params: &ModelParams, guess: PriceState) -> Result<TwoCycle> {
    let mut x = guess;
    let residual = |x: &PriceState, ffx: &PriceState| ffx.dist(x) / (1.0 + x.norm());
    for _ in 0..200 {
        let (_, ffx, m) = second_iterate(params, &x)?;
        let r = [ffx.p1 - x.p1, ffx.p2 - x.p2];
        if residual(&x, &ffx) <= 1e-14 {
            break;
        }
        // (M - I) δ = -r
        let a = [[m.0[0][0] - 1.0, m.0[0][1]], [m.0[1][0], m.0[1][1] - 1.0]];
        let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
        if det == 0.0 || !det.is_finite() {
            return Err(Error::Computation("singular Newton system for the 2-cycle".into()));
        }
        let d = [(-r[0] * a[1][1] + r[1] * a[0][1]) / det, (-r[1] * a[0][0] + r[0] * a[1][0]) / det];
        let mut t = 1.0;
        loop {
            let next = PriceState { p1: x.p1 + t * d[0], p2: x.p2 + t * d[1] };
            if next.p1 > 0.0 && next.p2 > 0.0 && next.p1.is_finite() && next.p2.is_finite() {
                x = next;
                break;
            }
            t *= 0.5;
            if t < 1e-12 {
                return Err(Error::Computation("Newton step left the positive quadrant".into()));
            }
        }
    }
    let (fx, ffx, m) = second_iterate(params, &x)?;
    if residual(&x, &ffx) > 1e-10 {
        return Err(Error::Computation("Newton did not converge to a 2-cycle".into()));
    }
    if fx.dist(&x) <= 1e-8 * (1.0 + x.norm()) {
        return Err(Error::Computation("Newton converged to a fixed point".into()));
    }
    let (a, b) = if x.p1 <= fx.p1 { (x, fx) } else { (fx, x) };
    Ok(TwoCycle { alpha: params.alpha(), a, b, jury: jury(&m)?, eigenvalues: m.eigenvalues() })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContinuationResult {
    /// Cycles found on the α grid, in increasing α.
    pub cycles: Vec<TwoCycle>,
    /// Grid values of α where no cycle was found, with the reason.
    pub failures: Vec<(f64, String)>,
    /// First α at which a 2-cycle separates from the equilibrium.
    pub branch_alpha: Option<f64>,
    /// Eigenvalues of the equilibrium's Jacobian at `branch_alpha`.
    pub branch_eigenvalues: Option<[Complex64; 2]>,
    /// α where CD3 of the second-iterate Jacobian crosses zero.
    pub ns_alpha: Option<f64>,
    /// Eigenvalues of the second-iterate Jacobian at `ns_alpha`.
    pub ns_eigenvalues: Option<[Complex64; 2]>,
    /// The cycle at `ns_alpha`.
    pub ns_cycle: Option<TwoCycle>,
}

impl ContinuationResult {
    /// `alpha,p1_a,p2_a,p1_b,p2_b,stable`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("alpha,p1_a,p2_a,p1_b,p2_b,stable\n");
        for c in &self.cycles {
            let _ = writeln!(out, "{},{},{},{},{},{}", c.alpha, c.a.p1, c.a.p2, c.b.p1, c.b.p2, c.stable());
        }
        out
    }
}

fn check_symmetric(base: &ModelParams) -> Result<()> {
    if base.c1() != base.c2() || base.k1() != base.k2() {
        return usage("2-cycle continuation needs c1 = c2 and k1 = k2");
    }
    Ok(())
}

fn equilibrium(params: &ModelParams) -> Result<PriceState> {
    let p = symmetric_statics(params.alpha(), params.c1())?.price;
    PriceState::new(p, p)
}

/// Search for a 2-cycle near the equilibrium along the antisymmetric direction.
pub fn two_cycle_near_equilibrium(params: &ModelParams) -> Result<TwoCycle> {
    check_symmetric(params)?;
    let e = equilibrium(params)?;
    let mut last = Error::Computation("no 2-cycle found".into());
    for h in [1e-3, 1e-2, 5e-2, 0.1, 0.2, 0.4] {
        let d = h * e.p1;
        let Ok(guess) = PriceState::new(e.p1 + d, e.p2 - d) else { continue };
        match find_two_cycle(params, guess) {
            Ok(c) => return Ok(c),
            Err(err) => last = err,
        }
    }
    Err(last)
}

fn bisect(mut lo: f64, mut hi: f64, pred: impl Fn(f64) -> bool) -> f64 {
    while hi - lo > ALPHA_TOL {
        let mid = 0.5 * (lo + hi);
        if pred(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Follow the 2-cycle of the symmetric map over `steps` values of α in
/// `[alpha_from, alpha_to]`, locating its birth and the α where CD3 of the
/// second iterate vanishes. Both landmarks are refined by bisection to 1e-6.
pub fn two_cycle_continuation(
    base: &ModelParams,
    alpha_from: f64,
    alpha_to: f64,
    steps: usize,
) -> Result<ContinuationResult> {
    check_symmetric(base)?;
    if steps < 2 || !(0.0 < alpha_from && alpha_from < alpha_to && alpha_to < 1.0) {
        return usage("need 0 < alpha_from < alpha_to < 1 and at least 2 steps");
    }
    let at = |a: f64| base.with(Param::Alpha, a);
    let grid: Vec<f64> = (0..steps).map(|i| alpha_from + (alpha_to - alpha_from) * i as f64 / (steps - 1) as f64).collect();

    let mut cycles = Vec::new();
    let mut failures = Vec::new();
    let mut found: Vec<Option<TwoCycle>> = Vec::with_capacity(steps);
    let mut prev: Option<TwoCycle> = None;
    for &alpha in &grid {
        let params = at(alpha)?;
        let from_prev = prev.as_ref().and_then(|c| find_two_cycle(&params, c.a).ok());
        let result = match from_prev {
            Some(c) => Ok(c),
            None => two_cycle_near_equilibrium(&params),
        };
        match result {
            Ok(c) => {
                cycles.push(c.clone());
                prev = Some(c.clone());
                found.push(Some(c));
            }
            Err(e) => {
                failures.push((alpha, e.to_string()));
                prev = None;
                found.push(None);
            }
        }
    }

    let exists = |a: f64| at(a).and_then(|p| two_cycle_near_equilibrium(&p)).is_ok();
    let mut branch_alpha = None;
    let mut branch_eigenvalues = None;
    if let Some(i) = (1..steps).find(|&i| found[i].is_some() && found[i - 1].is_none()) {
        let a = bisect(grid[i - 1], grid[i], exists);
        let p = at(a)?;
        branch_eigenvalues = Some(jacobian(&p, &equilibrium(&p)?)?.eigenvalues());
        branch_alpha = Some(a);
    }

    let mut ns_alpha = None;
    let mut ns_eigenvalues = None;
    let mut ns_cycle = None;
    let ns_bracket = (1..steps).find_map(|i| match (&found[i - 1], &found[i]) {
        (Some(l), Some(r)) if l.jury.cd3 > 0.0 && r.jury.cd3 <= 0.0 => Some((i, l.clone())),
        _ => None,
    });
    if let Some((i, left)) = ns_bracket {
        let cd3 = |a: f64| {
            at(a).and_then(|p| find_two_cycle(&p, left.a)).map(|c| c.jury.cd3 <= 0.0).unwrap_or(false)
        };
        let a = bisect(grid[i - 1], grid[i], cd3);
        let c = find_two_cycle(&at(a)?, left.a)?;
        ns_eigenvalues = Some(c.eigenvalues);
        ns_cycle = Some(c);
        ns_alpha = Some(a);
    }

    Ok(ContinuationResult { cycles, failures, branch_alpha, branch_eigenvalues, ns_alpha, ns_eigenvalues, ns_cycle })
}
