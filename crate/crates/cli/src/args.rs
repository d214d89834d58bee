use std::path::PathBuf;
use std::str::FromStr;

use bertrand_core::dynamics::{OrbitOptions, DEFAULT_SAMPLES, DEFAULT_TOL, DEFAULT_TRANSIENT};
use bertrand_core::exactpoly::{parse_rational, rational_from_f64, rational_to_f64, BigRational};
use bertrand_core::model::{ModelParams, Param};
use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use num_traits::{One, Zero};

/// A numeric flag that keeps its exact value when written as `a/b` or an integer.
#[derive(Debug, Clone, PartialEq)]
pub struct Num {
    pub text: String,
    exact: BigRational,
    /// The decimal text has no exact binary64 representation.
    lossy: bool,
}

impl Num {
    pub fn value(&self) -> f64 {
        rational_to_f64(&self.exact)
    }

    /// Exact value. Decimal input that binary64 cannot represent warns once per use.
    pub fn exact(&self, flag: &str) -> BigRational {
        if self.lossy {
            eprintln!(
                "warning: --{flag} {} is not exact in binary64; using {} (write a/b to avoid this)",
                self.text, self.exact
            );
        }
        self.exact.clone()
    }
}

fn decimal(s: &str) -> Option<BigRational> {
    let (mant, exp) = match s.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (neg, mant) = match mant.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mant.strip_prefix('+').unwrap_or(mant)),
    };
    let (int, frac) = mant.split_once('.').unwrap_or((mant, ""));
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    let digits: BigInt = format!("{int}{frac}").parse().ok()?;
    let shift = exp - frac.len() as i32;
    let ten = BigRational::from_integer(10.into());
    let scale = if shift >= 0 {
        num_traits::pow(ten, shift as usize)
    } else {
        BigRational::one() / num_traits::pow(ten, (-shift) as usize)
    };
    let v = BigRational::from_integer(digits) * scale;
    Some(if neg { -v } else { v })
}

impl FromStr for Num {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        if s.contains('/') || s.parse::<BigInt>().is_ok() {
            let exact = parse_rational(s).map_err(|e| e.to_string())?;
            return Ok(Num { text: s.into(), exact, lossy: false });
        }
        let v: f64 = s.parse().map_err(|_| format!("`{s}` is neither a/b nor a decimal number"))?;
        let exact = rational_from_f64(v).map_err(|e| e.to_string())?;
        let lossy = decimal(s).is_none_or(|d| d != exact);
        Ok(Num { text: s.into(), exact, lossy })
    }
}

fn is_positive(n: &Num) -> bool {
    n.exact > BigRational::zero()
}

#[derive(Debug, Parser)]
#[command(name = "bertrand", version, about = "Bertrand duopoly with CES demand: equilibria, stability and dynamics")]
#[command(args_override_self = true)]
pub struct Cli {
    /// Worker threads for scans (0 = all available cores)
    #[arg(long, global = true, default_value_t = 0)]
    pub jobs: usize,
    /// TOML file whose keys mirror the flags; flags on the command line win
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Locate the positive equilibrium and certify its uniqueness
    Equilibrium(ModelArgs),
    /// Jury test at the equilibrium plus the exact sign verdict for α = 1/2, 1/3
    Stability(ModelArgs),
    /// Exact stability classification over a grid of two parameters (CSV)
    Scan(ScanArgs),
    /// Attractor samples while one parameter sweeps a range (CSV)
    #[command(name = "bifurcation-1d")]
    Bifurcation1d(Bif1dArgs),
    /// Orbit class codes over a grid of two parameters (CSV)
    #[command(name = "bifurcation-2d")]
    Bifurcation2d(Bif2dArgs),
    /// Follow the symmetric 2-cycle in α and locate its branch and NS points
    Continuation(ContinuationArgs),
    /// Symmetric-cost equilibrium price, quantity, profit and welfare
    Statics(StaticsArgs),
    /// Re-derive the stability tables and check the resultant identities
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Args)]
pub struct ModelArgs {
    /// Substitutability degree α in (0, 1), as a/b or decimal
    #[arg(long, default_value = "1/2")]
    pub alpha: Num,
    /// Marginal cost of both firms (sets c1 and c2)
    #[arg(long)]
    pub c: Option<Num>,
    /// Marginal cost of firm 1
    #[arg(long)]
    pub c1: Option<Num>,
    /// Marginal cost of firm 2
    #[arg(long)]
    pub c2: Option<Num>,
    /// Adjustment speed of both firms (sets k1 and k2) [default: 1]
    #[arg(long)]
    pub k: Option<Num>,
    /// Adjustment speed of firm 1
    #[arg(long)]
    pub k1: Option<Num>,
    /// Adjustment speed of firm 2
    #[arg(long)]
    pub k2: Option<Num>,
}

/// The four firm-specific values after applying the shared `--c` / `--k`.
pub struct Resolved {
    pub c1: Num,
    pub c2: Num,
    pub k1: Num,
    pub k2: Num,
}

impl ModelArgs {
    pub fn resolve(&self) -> Result<Resolved, String> {
        let one: Num = "1".parse().unwrap();
        let pick = |own: &Option<Num>, shared: &Option<Num>, name: &str| {
            own.clone().or_else(|| shared.clone()).ok_or_else(|| format!("missing --{name} (or --c)"))
        };
        let k = self.k.clone().unwrap_or(one);
        let r = Resolved {
            c1: pick(&self.c1, &self.c, "c1")?,
            c2: pick(&self.c2, &self.c, "c2")?,
            k1: self.k1.clone().unwrap_or_else(|| k.clone()),
            k2: self.k2.clone().unwrap_or(k),
        };
        for (n, v) in [("c1", &r.c1), ("c2", &r.c2), ("k1", &r.k1), ("k2", &r.k2)] {
            if !is_positive(v) {
                return Err(format!("--{n} must be positive"));
            }
        }
        Ok(r)
    }

    pub fn params(&self) -> Result<ModelParams, String> {
        let r = self.resolve()?;
        ModelParams::new(self.alpha.value(), r.c1.value(), r.c2.value(), r.k1.value(), r.k2.value())
            .map_err(|e| e.to_string())
    }
}

#[derive(Debug, Clone, Args)]
pub struct OrbitArgs {
    /// Iterations discarded before sampling (raise it for small alpha, below about 0.15)
    #[arg(long, default_value_t = DEFAULT_TRANSIENT)]
    pub transient: usize,
    /// Iterations recorded after the transient (at least 200)
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    pub samples: usize,
    /// Relative tolerance for the period test
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    /// Initial price of firm 1
    #[arg(long)]
    pub x0: f64,
    /// Initial price of firm 2
    #[arg(long)]
    pub y0: f64,
}

impl OrbitArgs {
    pub fn options(&self) -> OrbitOptions {
        OrbitOptions { transient: self.transient, samples: self.samples, tol: self.tol }
    }
}

fn param(s: &str) -> Result<Param, String> {
    s.parse::<Param>().map_err(|e| e.to_string())
}

#[derive(Debug, Clone, Args)]
pub struct ScanArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Horizontal axis: c, c1, c2, k, k1 or k2
    #[arg(long, value_parser = param)]
    pub x: Param,
    /// First value on the x axis
    #[arg(long)]
    pub x_from: Num,
    /// Last value on the x axis
    #[arg(long)]
    pub x_to: Num,
    /// Grid points along x
    #[arg(long, default_value_t = 50)]
    pub nx: usize,
    /// Vertical axis: c, c1, c2, k, k1 or k2
    #[arg(long, value_parser = param)]
    pub y: Param,
    /// First value on the y axis
    #[arg(long)]
    pub y_from: Num,
    /// Last value on the y axis
    #[arg(long)]
    pub y_to: Num,
    /// Grid points along y
    #[arg(long, default_value_t = 50)]
    pub ny: usize,
    /// CSV output path (stdout when omitted)
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct Bif1dArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub orbit: OrbitArgs,
    /// Swept parameter: alpha, c, c1, c2, k, k1 or k2
    #[arg(long, value_parser = param)]
    pub vary: Param,
    /// First value of the swept parameter
    #[arg(long)]
    pub from: f64,
    /// Last value of the swept parameter
    #[arg(long)]
    pub to: f64,
    /// Number of parameter values
    #[arg(long, default_value_t = 200)]
    pub n: usize,
    /// Write `param,class_code` rows instead of the samples
    #[arg(long)]
    pub classes: bool,
    /// CSV output path (stdout when omitted)
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct Bif2dArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub orbit: OrbitArgs,
    /// Horizontal axis: alpha, c, c1, c2, k, k1 or k2
    #[arg(long, value_parser = param)]
    pub x: Param,
    /// First value on the x axis
    #[arg(long)]
    pub x_from: f64,
    /// Last value on the x axis
    #[arg(long)]
    pub x_to: f64,
    /// Grid points along x
    #[arg(long, default_value_t = 200)]
    pub nx: usize,
    /// Vertical axis: alpha, c, c1, c2, k, k1 or k2
    #[arg(long, value_parser = param)]
    pub y: Param,
    /// First value on the y axis
    #[arg(long)]
    pub y_from: f64,
    /// Last value on the y axis
    #[arg(long)]
    pub y_to: f64,
    /// Grid points along y
    #[arg(long, default_value_t = 200)]
    pub ny: usize,
    /// CSV output path (stdout when omitted)
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ContinuationArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// First α of the sweep
    #[arg(long, default_value_t = 0.54)]
    pub from: f64,
    /// Last α of the sweep
    #[arg(long, default_value_t = 0.59)]
    pub to: f64,
    /// Number of α values
    #[arg(long, default_value_t = 51)]
    pub steps: usize,
    /// Also write every cycle found as CSV
    #[arg(long, value_name = "PATH")]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct StaticsArgs {
    /// Substitutability degree α in (0, 1)
    #[arg(long)]
    pub alpha: Num,
    /// Common marginal cost
    #[arg(long)]
    pub c: Num,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    /// Re-derive every row of both stability tables
    #[arg(long)]
    pub tables: bool,
    /// Check the resultant identities at random rational points
    #[arg(long)]
    pub identities: bool,
    /// Restrict to α = 1/2 or α = 1/3 (both when omitted)
    #[arg(long)]
    pub alpha: Option<Num>,
    /// Random points per identity
    #[arg(long, default_value_t = bertrand_core::stability::DEFAULT_TRIALS)]
    pub trials: usize,
    /// Seed for the random points
    #[arg(long, default_value_t = bertrand_core::stability::DEFAULT_SEED)]
    pub seed: u64,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_and_decimal_numbers() {
        let n: Num = "1/3".parse().unwrap();
        assert!(!n.lossy);
        assert_eq!(n.exact("x"), BigRational::new(1.into(), 3.into()));
        let n: Num = "0.5".parse().unwrap();
        assert!(!n.lossy);
        let n: Num = "0.2".parse().unwrap();
        assert!(n.lossy);
        assert_eq!(n.value(), 0.2);
        let n: Num = "2.5e-1".parse().unwrap();
        assert!(!n.lossy);
        assert!("abc".parse::<Num>().is_err());
        assert!("1/0".parse::<Num>().is_err());
        assert!("inf".parse::<Num>().is_err());
    }
}
