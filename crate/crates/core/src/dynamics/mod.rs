//! Iterating the price map: trajectories, orbit classification, parameter
//! scans and continuation of the symmetric 2-cycle.

mod continuation;
mod lyapunov;
mod orbit;
mod scan;

pub use continuation::{
    find_two_cycle, two_cycle_continuation, two_cycle_near_equilibrium, ContinuationResult, TwoCycle, ALPHA_TOL,
};
pub use lyapunov::lyapunov_exponent;
pub use orbit::{
    attractor, classify_orbit, iterate, OrbitClass, OrbitKind, OrbitOptions, Trajectory, DEFAULT_SAMPLES,
    DEFAULT_TOL, DEFAULT_TRANSIENT, ESCAPE_BOUND, MAX_PERIOD, MIN_SAMPLES,
};
pub use scan::{bifurcation_scan_1d, bifurcation_scan_2d, Range, Scan1d, Scan1dPoint, Scan2d};
