use std::fmt::Write as _;

use serde::Serialize;

use super::orbit::{attractor, OrbitKind, OrbitOptions};
use crate::error::{usage, Result};
use crate::model::{ModelParams, Param, PriceState};
use crate::par::{map_indexed, Exec};

/// `n` evenly spaced values from `from` to `to` inclusive (`n = 1` gives `from`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Range {
    pub param: Param,
    pub from: f64,
    pub to: f64,
    pub n: usize,
}

impl Range {
    pub fn new(param: Param, from: f64, to: f64, n: usize) -> Result<Self> {
        if n == 0 || !from.is_finite() || !to.is_finite() {
            return usage(format!("{param} range needs finite bounds and at least one point"));
        }
        Ok(Range { param, from, to, n })
    }

    pub fn value(&self, i: usize) -> f64 {
        if self.n == 1 {
            self.from
        } else {
            self.from + (self.to - self.from) * i as f64 / (self.n - 1) as f64
        }
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.value(i)).collect()
    }

    fn check(&self, base: &ModelParams) -> Result<()> {
        for v in [self.from, self.to] {
            if let Err(e) = base.with(self.param, v) {
                return usage(format!("{} = {v} is outside the model domain ({e})", self.param));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Scan1dPoint {
    pub value: f64,
    pub kind: OrbitKind,
    pub samples: Vec<PriceState>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Scan1d {
    pub range: Range,
    pub points: Vec<Scan1dPoint>,
}

impl Scan1d {
    /// `param,p1,p2`, one row per retained sample.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("param,p1,p2\n");
        for pt in &self.points {
            for s in &pt.samples {
                let _ = writeln!(out, "{},{},{}", pt.value, s.p1, s.p2);
            }
        }
        out
    }
}

/// Attractor samples as one parameter sweeps `range`, each run starting from `initial`.
pub fn bifurcation_scan_1d(
    base: &ModelParams,
    range: Range,
    initial: PriceState,
    opts: &OrbitOptions,
    exec: Exec,
) -> Result<Scan1d> {
    range.check(base)?;
    let points = map_indexed(range.n, exec, |i| {
        let v = range.value(i);
        let params = base.with(range.param, v)?;
        let (t, class) = attractor(&params, initial, opts)?;
        Ok(Scan1dPoint { value: v, kind: class.kind, samples: t.samples })
    });
    Ok(Scan1d { range, points: points.into_iter().collect::<Result<_>>()? })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Scan2d {
    pub x: Range,
    pub y: Range,
    /// Row-major orbit codes: `codes[j * x.n + i]` at `(x.value(i), y.value(j))`.
    pub codes: Vec<u8>,
}

impl Scan2d {
    pub fn code_at(&self, i: usize, j: usize) -> u8 {
        self.codes[j * self.x.n + i]
    }

    /// Codes along the row `j` (fixed y).
    pub fn row(&self, j: usize) -> &[u8] {
        &self.codes[j * self.x.n..(j + 1) * self.x.n]
    }

    /// `x,y,class_code`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,y,class_code\n");
        for j in 0..self.y.n {
            for i in 0..self.x.n {
                let _ = writeln!(out, "{},{},{}", self.x.value(i), self.y.value(j), self.code_at(i, j));
            }
        }
        out
    }
}

/// Orbit code at every cell of an `x × y` parameter grid.
pub fn bifurcation_scan_2d(
    base: &ModelParams,
    x: Range,
    y: Range,
    initial: PriceState,
    opts: &OrbitOptions,
    exec: Exec,
) -> Result<Scan2d> {
    if x.param == y.param {
        return usage("the two scan axes must differ");
    }
    x.check(base)?;
    y.check(base)?;
    let nx = x.n;
    let codes = map_indexed(nx * y.n, exec, |idx| {
        let params = base.with(x.param, x.value(idx % nx))?.with(y.param, y.value(idx / nx))?;
        Ok(attractor(&params, initial, opts)?.1.kind.code())
    });
    Ok(Scan2d { x, y, codes: codes.into_iter().collect::<Result<_>>()? })
}
