use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use super::classify::{classify_point_general, Rule};
use super::jury::Verdict;
use crate::error::{usage, Result};
use crate::exactpoly::{ser_rational, ser_rational_opt};
use crate::model::{Param, Substitutability};
use crate::par::{map_indexed, Exec};

/// One scanned axis: `n` evenly spaced exact values from `from` to `to` inclusive.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Axis {
    pub param: Param,
    #[serde(serialize_with = "ser_rational")]
    pub from: BigRational,
    #[serde(serialize_with = "ser_rational")]
    pub to: BigRational,
    pub n: usize,
}

impl Axis {
    pub fn new(param: Param, from: BigRational, to: BigRational, n: usize) -> Result<Self> {
        if param == Param::Alpha {
            return usage("alpha cannot be a region-scan axis");
        }
        if !from.is_positive() || !to.is_positive() {
            return usage(format!("{param} bounds must be positive"));
        }
        if n == 0 || (n == 1 && from != to) {
            return usage(format!("{param} axis needs at least 2 points (or 1 with equal bounds)"));
        }
        Ok(Axis { param, from, to, n })
    }

    pub fn value(&self, i: usize) -> BigRational {
        if self.n == 1 {
            return self.from.clone();
        }
        let t = BigRational::new(i.into(), (self.n - 1).into());
        &self.from + (&self.to - &self.from) * t
    }
}

/// Fixed values for the parameters not on an axis. Missing firm-specific
/// values fall back to the shared `c` / `k`.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Fixed {
    #[serde(serialize_with = "ser_rational_opt")]
    pub c: Option<BigRational>,
    #[serde(serialize_with = "ser_rational_opt")]
    pub c1: Option<BigRational>,
    #[serde(serialize_with = "ser_rational_opt")]
    pub c2: Option<BigRational>,
    #[serde(serialize_with = "ser_rational_opt")]
    pub k: Option<BigRational>,
    #[serde(serialize_with = "ser_rational_opt")]
    pub k1: Option<BigRational>,
    #[serde(serialize_with = "ser_rational_opt")]
    pub k2: Option<BigRational>,
}

impl Fixed {
    fn set(&mut self, p: Param, v: BigRational) {
        match p {
            Param::C => {
                self.c1 = Some(v.clone());
                self.c2 = Some(v);
            }
            Param::C1 => self.c1 = Some(v),
            Param::C2 => self.c2 = Some(v),
            Param::K => {
                self.k1 = Some(v.clone());
                self.k2 = Some(v);
            }
            Param::K1 => self.k1 = Some(v),
            Param::K2 => self.k2 = Some(v),
            Param::Alpha => {}
        }
    }

    fn resolve(&self) -> Result<[BigRational; 4]> {
        let pick = |own: &Option<BigRational>, shared: &Option<BigRational>, name: &str| {
            own.clone().or_else(|| shared.clone()).ok_or_else(|| crate::Error::Usage(format!("missing value for {name}")))
        };
        Ok([
            pick(&self.c1, &self.c, "c1")?,
            pick(&self.c2, &self.c, "c2")?,
            pick(&self.k1, &self.k, "k1")?,
            pick(&self.k2, &self.k, "k2")?,
        ])
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegionCell {
    #[serde(serialize_with = "ser_rational")]
    pub x: BigRational,
    #[serde(serialize_with = "ser_rational")]
    pub y: BigRational,
    pub stable: bool,
    /// Some Jury quantity lies within the critical band.
    pub critical: bool,
    /// Numeric `CD1, CD2, CD3`; NaN when the equilibrium could not be located.
    pub cd: [f64; 3],
    pub signs: BTreeMap<String, i8>,
    pub rule: Rule,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegionScan {
    pub alpha: Substitutability,
    pub x: Axis,
    pub y: Axis,
    /// Row-major: `cells[j * x.n + i]` is at `(x.value(i), y.value(j))`.
    pub cells: Vec<RegionCell>,
}

/// Classify every cell of an `x × y` grid.
pub fn region_scan(alpha: Substitutability, x: Axis, y: Axis, fixed: &Fixed, exec: Exec) -> Result<RegionScan> {
    let overlaps = |a: Param, b: Param| {
        a == b || matches!((a, b), (Param::C, Param::C1 | Param::C2) | (Param::C1 | Param::C2, Param::C))
            || matches!((a, b), (Param::K, Param::K1 | Param::K2) | (Param::K1 | Param::K2, Param::K))
    };
    if overlaps(x.param, y.param) {
        return usage(format!("axes {} and {} overlap", x.param, y.param));
    }
    // Fail early on missing fixed values.
    let mut probe = fixed.clone();
    probe.set(x.param, x.from.clone());
    probe.set(y.param, y.from.clone());
    for v in probe.resolve()? {
        if !v.is_positive() {
            return usage("fixed parameters must be positive");
        }
    }
    let nx = x.n;
    let cells = map_indexed(nx * y.n, exec, |idx| {
        let (i, j) = (idx % nx, idx / nx);
        let (xv, yv) = (x.value(i), y.value(j));
        let mut f = fixed.clone();
        f.set(x.param, xv.clone());
        f.set(y.param, yv.clone());
        let [c1, c2, k1, k2] = f.resolve()?;
        let cls = classify_point_general(alpha, &c1, &c2, &k1, &k2)?;
        let (cd, critical) = match &cls.numeric {
            Some(r) => ([r.cd1, r.cd2, r.cd3], r.verdict() == Verdict::Critical),
            None => ([f64::NAN; 3], false),
        };
        Ok(RegionCell { x: xv, y: yv, stable: cls.stable, critical, cd, signs: cls.signs, rule: cls.rule })
    });
    let cells = cells.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(RegionScan { alpha, x, y, cells })
}

fn rational_cell(r: &BigRational) -> String {
    if r.is_zero() {
        "0/1".into()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl RegionScan {
    /// Names of the sign columns, in output order.
    pub fn sign_columns(&self) -> Vec<&'static str> {
        match self.alpha {
            Substitutability::Half => vec!["R1", "R2"],
            Substitutability::Third => vec!["R3", "R4", "A1", "A2", "A3"],
        }
    }

    /// CSV with header `x,y,stable,cd1,cd2,cd3,<signs>`; `stable` is
    /// `stable`, `unstable` or `critical`.
    pub fn to_csv(&self) -> String {
        let cols = self.sign_columns();
        let mut out = String::from("x,y,stable,cd1,cd2,cd3");
        for c in &cols {
            out.push(',');
            out.push_str(c);
        }
        out.push('\n');
        for cell in &self.cells {
            let verdict = if cell.critical {
                "critical"
            } else if cell.stable {
                "stable"
            } else {
                "unstable"
            };
            let _ = write!(
                out,
                "{},{},{},{:e},{:e},{:e}",
                rational_cell(&cell.x),
                rational_cell(&cell.y),
                verdict,
                cell.cd[0],
                cell.cd[1],
                cell.cd[2]
            );
            for c in &cols {
                out.push(',');
                if let Some(s) = cell.signs.get(*c) {
                    let _ = write!(out, "{s}");
                }
            }
            out.push('\n');
        }
        out
    }

    pub fn stable_count(&self) -> usize {
        self.cells.iter().filter(|c| c.stable).count()
    }
}
