//! Local stability of the equilibrium: Jacobians, Jury conditions, the
//! critical polynomials and exact parameter-point classification.

mod classify;
mod critical;
mod identities;
mod jacobian;
mod jury;
mod scan;
mod tables;

pub use classify::{classify_point, classify_point_general, critical_signs, numeric_jury, Classification, Rule};
pub use critical::{critical_polynomials, CriticalPolynomials, GOLDEN, VARS};
pub use identities::{
    cd_fractions, displayed_identities, identity_lhs, random_points, verify_identities_with,
    verify_resultant_identities, CdFraction, IdentityCheck, IdentityReport, IdentitySpec, Mismatch, Tail,
    DEFAULT_SEED, DEFAULT_TRIALS,
};
pub use jacobian::{jacobian, jacobian_fd, jacobian_generic, jacobian_half, jacobian_third};
pub use jury::{jury, jury_with_band, symmetric_threshold, Bifurcation, JuryReport, Mat2, Verdict, CRITICAL_BAND};
pub use scan::{region_scan, Axis, Fixed, RegionCell, RegionScan};
pub use tables::{table, table_half, table_third, TableRow};
