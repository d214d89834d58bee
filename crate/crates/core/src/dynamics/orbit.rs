use serde::Serialize;

use crate::error::{usage, Error, Result};
use crate::model::{step, ModelParams, PriceState};

pub const DEFAULT_TRANSIENT: usize = 1000;
pub const DEFAULT_SAMPLES: usize = 200;
/// Relative tolerance for period detection.
pub const DEFAULT_TOL: f64 = 1e-6;
/// Any coordinate above this counts as divergence.
pub const ESCAPE_BOUND: f64 = 1e9;
/// Longest period reported as such; longer orbits count as aperiodic.
pub const MAX_PERIOD: usize = 25;
/// Fewest post-transient samples [`classify_orbit`] accepts.
pub const MIN_SAMPLES: usize = 200;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    pub params: ModelParams,
    pub initial: PriceState,
    pub transient: usize,
    /// Iterates `x_t` for `transient <= t < n_total`, cut short at an escape.
    pub samples: Vec<PriceState>,
    /// Index `t` of the first iterate that left the admissible region.
    pub escaped_at: Option<usize>,
}

/// Iteration settings shared by the scans.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OrbitOptions {
    pub transient: usize,
    pub samples: usize,
    pub tol: f64,
}

impl Default for OrbitOptions {
    fn default() -> Self {
        OrbitOptions { transient: DEFAULT_TRANSIENT, samples: DEFAULT_SAMPLES, tol: DEFAULT_TOL }
    }
}

fn admissible(s: &PriceState) -> bool {
    s.p1 <= ESCAPE_BOUND && s.p2 <= ESCAPE_BOUND
}

/// Iterate the map from `initial`, keeping `x_t` for `transient <= t < n_total`.
pub fn iterate(params: &ModelParams, initial: PriceState, n_total: usize, transient: usize) -> Result<Trajectory> {
    if n_total <= transient {
        return usage(format!("n_total ({n_total}) must exceed transient ({transient})"));
    }
    PriceState::new(initial.p1, initial.p2)?;
    let mut samples = Vec::with_capacity(n_total - transient);
    let mut escaped_at = None;
    let mut x = initial;
    for t in 0..n_total {
        if t > 0 {
            match step(params, &x) {
                Ok(next) if admissible(&next) => x = next,
                Ok(_) | Err(Error::Escaped { .. }) => {
                    escaped_at = Some(t);
                    break;
                }
                Err(e) => return Err(e),
            }
        }
        if t >= transient {
            samples.push(x);
        }
    }
    Ok(Trajectory { params: *params, initial, transient, samples, escaped_at })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "n", rename_all = "lowercase")]
pub enum OrbitKind {
    Fixed,
    Periodic(usize),
    Aperiodic,
    Escaped,
}

impl OrbitKind {
    /// 0 escaped, 1 fixed, 2..=25 period, 26 aperiodic.
    pub fn code(self) -> u8 {
        match self {
            OrbitKind::Escaped => 0,
            OrbitKind::Fixed => 1,
            OrbitKind::Periodic(n) => n as u8,
            OrbitKind::Aperiodic => (MAX_PERIOD + 1) as u8,
        }
    }

    /// Period of the orbit; `None` for aperiodic or escaped.
    pub fn period(self) -> Option<usize> {
        match self {
            OrbitKind::Fixed => Some(1),
            OrbitKind::Periodic(n) => Some(n),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrbitClass {
    pub kind: OrbitKind,
    /// One period of the orbit, the raw samples when aperiodic, the last
    /// admissible state when escaped.
    pub representative: Vec<PriceState>,
}

/// Smallest `n <= 25` with `‖s[i+n] − s[i]‖ ≤ tol·(1 + ‖s[i]‖)` over all samples.
pub fn classify_orbit(t: &Trajectory, tol: f64) -> Result<OrbitClass> {
    if t.escaped_at.is_some() {
        let last = t.samples.last().copied().into_iter().collect();
        return Ok(OrbitClass { kind: OrbitKind::Escaped, representative: last });
    }
    let s = &t.samples;
    if s.len() < MIN_SAMPLES {
        return usage(format!("need at least {MIN_SAMPLES} samples, got {}", s.len()));
    }
    for n in 1..=MAX_PERIOD {
        let repeats = (0..s.len() - n).all(|i| s[i + n].dist(&s[i]) <= tol * (1.0 + s[i].norm()));
        if repeats {
            let kind = if n == 1 { OrbitKind::Fixed } else { OrbitKind::Periodic(n) };
            return Ok(OrbitClass { kind, representative: s[..n].to_vec() });
        }
    }
    Ok(OrbitClass { kind: OrbitKind::Aperiodic, representative: s.clone() })
}

/// Iterate with `opts` and classify the attractor reached from `initial`.
pub fn attractor(params: &ModelParams, initial: PriceState, opts: &OrbitOptions) -> Result<(Trajectory, OrbitClass)> {
    let t = iterate(params, initial, opts.transient + opts.samples, opts.transient)?;
    let c = classify_orbit(&t, opts.tol)?;
    Ok((t, c))
}
