use num_complex::Complex64;
use serde::Serialize;

use crate::error::{domain, Result};
use crate::model::Substitutability;

/// A real 2×2 matrix, row major.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Mat2(pub [[f64; 2]; 2]);

impl Mat2 {
    pub fn identity() -> Self {
        Mat2([[1.0, 0.0], [0.0, 1.0]])
    }

    pub fn trace(&self) -> f64 {
        self.0[0][0] + self.0[1][1]
    }

    pub fn det(&self) -> f64 {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        let a = &self.0;
        let b = &o.0;
        Mat2([
            [a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]],
            [a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]],
        ])
    }

    pub fn apply(&self, v: [f64; 2]) -> [f64; 2] {
        [self.0[0][0] * v[0] + self.0[0][1] * v[1], self.0[1][0] * v[0] + self.0[1][1] * v[1]]
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|x| x.is_finite())
    }

    /// Roots of `λ² - tr λ + det`.
    pub fn eigenvalues(&self) -> [Complex64; 2] {
        let t = self.trace();
        let d = self.det();
        let disc = Complex64::new(t * t - 4.0 * d, 0.0).sqrt();
        [(Complex64::new(t, 0.0) + disc) / 2.0, (Complex64::new(t, 0.0) - disc) / 2.0]
    }

    pub fn spectral_radius(&self) -> f64 {
        let [a, b] = self.eigenvalues();
        a.norm().max(b.norm())
    }
}

/// Loss-of-stability scenario suggested by which Jury quantity vanishes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Bifurcation {
    None,
    /// CD1 = 1 - tr + det at zero: an eigenvalue at +1.
    Fold,
    /// CD2 = 1 + tr + det at zero: an eigenvalue at -1.
    PeriodDoubling,
    /// CD3 = 1 - det at zero: a complex pair on the unit circle.
    NeimarkSacker,
    /// More than one quantity at zero.
    Critical,
}

/// Width of the band around zero treated as a bifurcation locus.
pub const CRITICAL_BAND: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JuryReport {
    pub trace: f64,
    pub det: f64,
    pub cd1: f64,
    pub cd2: f64,
    pub cd3: f64,
    pub stable: bool,
    pub indicated_bifurcation: Bifurcation,
}

/// Three-way verdict once the critical band is taken into account.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Stable,
    Unstable,
    Critical,
}

impl JuryReport {
    pub fn verdict(&self) -> Verdict {
        if self.stable {
            Verdict::Stable
        } else if [self.cd1, self.cd2, self.cd3].iter().any(|c| c.abs() <= CRITICAL_BAND) {
            Verdict::Critical
        } else {
            Verdict::Unstable
        }
    }
}

/// Jury conditions with the default critical band.
pub fn jury(m: &Mat2) -> Result<JuryReport> {
    jury_with_band(m, CRITICAL_BAND)
}

/// Jury conditions; values within `band` of zero count as neither sign.
pub fn jury_with_band(m: &Mat2, band: f64) -> Result<JuryReport> {
    if !m.is_finite() {
        return domain("Jacobian has non-finite entries");
    }
    let trace = m.trace();
    let det = m.det();
    let cd1 = 1.0 - trace + det;
    let cd2 = 1.0 + trace + det;
    let cd3 = 1.0 - det;
    let near = [cd1, cd2, cd3].map(|c| c.abs() <= band);
    let stable = cd1 > band && cd2 > band && cd3 > band;
    let indicated_bifurcation = match near {
        [false, false, false] => Bifurcation::None,
        [true, false, false] => Bifurcation::Fold,
        [false, true, false] => Bifurcation::PeriodDoubling,
        [false, false, true] => Bifurcation::NeimarkSacker,
        _ => Bifurcation::Critical,
    };
    Ok(JuryReport { trace, det, cd1, cd2, cd3, stable, indicated_bifurcation })
}

/// Critical `c²` for the symmetric equilibrium: stable iff `c²` exceeds it.
///
/// α = 1/2: `(2k1 + 2k2 + √(4k1² - 7k1k2 + 4k2²)) / 216`;
/// α = 1/3: `(3k1 + 3k2 + √(9k1² - 17k1k2 + 9k2²)) / 2000`.
pub fn symmetric_threshold(alpha: Substitutability, k1: f64, k2: f64) -> Result<f64> {
    if !(k1 > 0.0 && k2 > 0.0 && k1.is_finite() && k2.is_finite()) {
        return domain("adjustment speeds must be positive");
    }
    Ok(match alpha {
        Substitutability::Half => (2.0 * k1 + 2.0 * k2 + (4.0 * k1 * k1 - 7.0 * k1 * k2 + 4.0 * k2 * k2).sqrt()) / 216.0,
        Substitutability::Third => {
            (3.0 * k1 + 3.0 * k2 + (9.0 * k1 * k1 - 17.0 * k1 * k2 + 9.0 * k2 * k2).sqrt()) / 2000.0
        }
    })
}
