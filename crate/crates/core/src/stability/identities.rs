//! Symbolic Jury quantities at k1 = k2 = k and randomized verification of
//! their resultants against the equilibrium triangular sets.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::critical::critical_polynomials;
use crate::equilibrium::triangular_sets;
use crate::error::Result;
use crate::exactpoly::{assign, resultant_vs_triangular, Assignment, RationalPoly, TriangularSet};
use crate::model::Substitutability;
use crate::par::{map_indexed, Exec};

/// Default seed for identity trials.
pub const DEFAULT_SEED: u64 = 0x5EED;
/// Default number of identity trials.
pub const DEFAULT_TRIALS: usize = 20;

/// A rational function whose denominator is `v1^a · v2^b · (v1 + v2)^c`.
#[derive(Debug, Clone)]
struct Fraction {
    num: RationalPoly,
    exps: [u32; 3],
}

/// Reduced fraction with integer numerator and denominator
/// `scale · v1^a · v2^b · (v1 + v2)^c`, `scale > 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct CdFraction {
    pub numer: RationalPoly,
    pub denom_scale: BigInt,
    pub denom_exps: [u32; 3],
    pub vars: [String; 2],
}

impl CdFraction {
    /// The denominator expanded as a polynomial.
    pub fn denom(&self) -> RationalPoly {
        let v = [self.vars[0].as_str(), self.vars[1].as_str()];
        let x = RationalPoly::var(&v, v[0]).expect("variable");
        let y = RationalPoly::var(&v, v[1]).expect("variable");
        let s = &x + &y;
        let scale = RationalPoly::constant(&v, BigRational::from_integer(self.denom_scale.clone()));
        let [a, b, c] = self.denom_exps;
        &(&(&scale * &x.pow(a)) * &y.pow(b)) * &s.pow(c)
    }
}

struct Ctx {
    v: [String; 2],
    sum_pows: std::cell::RefCell<Vec<RationalPoly>>,
}

impl Ctx {
    fn new(v1: &str, v2: &str) -> Self {
        Ctx { v: [v1.to_string(), v2.to_string()], sum_pows: std::cell::RefCell::new(Vec::new()) }
    }

    fn var(&self, i: usize) -> RationalPoly {
        RationalPoly::var(&[&self.v[0], &self.v[1]], &self.v[i]).expect("variable")
    }

    fn sum_pow(&self, n: u32) -> RationalPoly {
        let mut cache = self.sum_pows.borrow_mut();
        if cache.is_empty() {
            cache.push(RationalPoly::constant(&[&self.v[0], &self.v[1]], BigRational::one()));
        }
        let s = &self.var(0) + &self.var(1);
        while cache.len() <= n as usize {
            let next = &cache[cache.len() - 1] * &s;
            cache.push(next);
        }
        cache[n as usize].clone()
    }

    /// Multiply `num` by the factors that lift `from` to `to`.
    fn lift(&self, num: &RationalPoly, from: [u32; 3], to: [u32; 3]) -> RationalPoly {
        let mut out = num.clone();
        for i in 0..2 {
            if to[i] > from[i] {
                out = &out * &self.var(i).pow(to[i] - from[i]);
            }
        }
        if to[2] > from[2] {
            out = &out * &self.sum_pow(to[2] - from[2]);
        }
        out
    }

    fn add(&self, a: &Fraction, b: &Fraction, sign: i32) -> Fraction {
        let l = [a.exps[0].max(b.exps[0]), a.exps[1].max(b.exps[1]), a.exps[2].max(b.exps[2])];
        let na = self.lift(&a.num, a.exps, l);
        let nb = self.lift(&b.num, b.exps, l);
        Fraction { num: if sign > 0 { &na + &nb } else { &na - &nb }, exps: l }
    }

    fn mul(&self, a: &Fraction, b: &Fraction) -> Fraction {
        Fraction {
            num: &a.num * &b.num,
            exps: [a.exps[0] + b.exps[0], a.exps[1] + b.exps[1], a.exps[2] + b.exps[2]],
        }
    }

    fn one(&self) -> Fraction {
        Fraction { num: RationalPoly::constant(&[&self.v[0], &self.v[1]], BigRational::one()), exps: [0; 3] }
    }

    /// Cancel common factors with the denominator and split off the integer content.
    fn reduce(&self, f: &Fraction) -> CdFraction {
        let mut num = f.num.clone();
        let mut exps = f.exps;
        for i in 0..2 {
            let vi = num.var_index(&self.v[i]);
            while exps[i] > 0 && !num.is_zero() {
                let divisible = match vi {
                    Some(j) => num.terms().all(|(e, _)| e[j] > 0),
                    None => false,
                };
                if !divisible {
                    break;
                }
                num = num.div_exact(&self.var(i)).expect("monomial factor divides");
                exps[i] -= 1;
            }
        }
        let s = self.sum_pow(1);
        let at_antidiagonal = |p: &RationalPoly| {
            let neg = -&self.var(1);
            let coeffs = p.coefficients_in(&self.v[0]);
            let mut acc = RationalPoly::constant(&[], BigRational::zero());
            for c in coeffs.iter().rev() {
                acc = &(&acc * &neg) + c;
            }
            acc.is_zero()
        };
        while exps[2] > 0 && !num.is_zero() && at_antidiagonal(&num) {
            num = num.div_exact(&s).expect("sum factor divides");
            exps[2] -= 1;
        }
        // num = content · primitive; content = a/b in lowest terms.
        let content = num.content();
        let primitive = num.scale(&content.recip());
        let numer = primitive.scale(&BigRational::from_integer(content.numer().clone()));
        CdFraction {
            numer,
            denom_scale: content.denom().clone(),
            denom_exps: exps,
            vars: self.v.clone(),
        }
    }
}

fn entry(vars: &[&str], text: &str, exps: [u32; 3]) -> Fraction {
    Fraction { num: RationalPoly::parse(text, vars).expect("static polynomial"), exps }
}

fn build_cds(alpha: Substitutability) -> [CdFraction; 3] {
    let (ctx, vars, e): (Ctx, [&str; 5], [(&str, [u32; 3]); 4]) = match alpha {
        Substitutability::Half => (
            Ctx::new("p1", "p2"),
            ["p1", "p2", "c1", "c2", "k"],
            [
                (
                    "p1^6 + 3*p1^5*p2 + 3*p1^4*p2^2 + (p2^3 + 2*k*p2)*p1^3 - 6*k*p2*p1^2*c1 - 6*k*p2^2*p1*c1 - 2*c1*k*p2^3",
                    [3, 0, 3],
                ),
                ("k*(2*c1 - p1 + p2)", [0, 0, 3]),
                ("k*(2*c2 + p1 - p2)", [0, 0, 3]),
                (
                    "p2^6 + 3*p1*p2^5 + 3*p1^2*p2^4 + (p1^3 + 2*k*p1)*p2^3 - 6*k*p1*p2^2*c2 - 6*k*p1^2*p2*c2 - 2*c2*k*p1^3",
                    [0, 3, 3],
                ),
            ],
        ),
        Substitutability::Third => (
            Ctx::new("x", "y"),
            ["x", "y", "c1", "c2", "k"],
            [
                (
                    "(12*x^9*y + 4*x^7*y^3 - 15*c1*k*x^3*y - 8*c1*k*y^3*x + 3*k*x^5*y + 4*x^10 + 12*x^8*y^2 - 21*c1*k*x^2*y^2 + k*x^4*y^2)/4",
                    [7, 0, 3],
                ),
                ("k*(y*x^3 - x^4 + c1*y*x + 3*x^2*c1)/4", [4, 1, 3]),
                ("k*(x*y^3 + c2*y*x + 3*y^2*c2 - y^4)/4", [1, 4, 3]),
                (
                    "(12*y^9*x + 4*y^7*x^3 - 15*c2*k*y^3*x - 8*c2*k*x^3*y + 3*k*y^5*x + 4*y^10 + 12*y^8*x^2 - 21*c2*k*x^2*y^2 + k*y^4*x^2)/4",
                    [0, 7, 3],
                ),
            ],
        ),
    };
    let j11 = entry(&vars, e[0].0, e[0].1);
    let j12 = entry(&vars, e[1].0, e[1].1);
    let j21 = entry(&vars, e[2].0, e[2].1);
    let j22 = entry(&vars, e[3].0, e[3].1);
    let tr = ctx.add(&j11, &j22, 1);
    let det = ctx.add(&ctx.mul(&j11, &j22), &ctx.mul(&j12, &j21), -1);
    let one = ctx.one();
    let cd1 = ctx.add(&ctx.add(&one, &tr, -1), &det, 1);
    let cd2 = ctx.add(&ctx.add(&one, &tr, 1), &det, 1);
    let cd3 = ctx.add(&one, &det, -1);
    [ctx.reduce(&cd1), ctx.reduce(&cd2), ctx.reduce(&cd3)]
}

/// `CD1, CD2, CD3` of the equilibrium Jacobian at k1 = k2 = k as reduced
/// fractions in `(p1, p2, c1, c2, k)` or `(x, y, c1, c2, k)`.
pub fn cd_fractions(alpha: Substitutability) -> &'static [CdFraction; 3] {
    static HALF: OnceLock<[CdFraction; 3]> = OnceLock::new();
    static THIRD: OnceLock<[CdFraction; 3]> = OnceLock::new();
    match alpha {
        Substitutability::Half => HALF.get_or_init(|| build_cds(alpha)),
        Substitutability::Third => THIRD.get_or_init(|| build_cds(alpha)),
    }
}

/// Trailing factor of an identity's right-hand side.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Tail {
    /// `a c1² + b c1 c2 + c c2²`.
    Quadratic(i64, i64, i64),
    /// One of the critical polynomials, by name.
    Critical(&'static str),
}

/// `constant · k^k_exp · c1^c1_exp · c2^c2_exp · (c1 ± c2)^pair_exp · tail^tail_exp`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentitySpec {
    pub label: String,
    /// Index 1..=3 of the Jury quantity.
    pub cd: usize,
    /// Whether the left side is `numer · denom` rather than `numer`.
    pub with_denom: bool,
    pub constant: String,
    pub k_exp: u32,
    pub c1_exp: u32,
    pub c2_exp: u32,
    /// `+1` for `(c1 + c2)`, `-1` for `(c1 - c2)`.
    pub pair_sign: i8,
    pub pair_exp: u32,
    pub tail: Tail,
    pub tail_exp: u32,
}

impl IdentitySpec {
    /// Right-hand side at a parameter point.
    pub fn rhs(&self, c1: &BigRational, c2: &BigRational, k: &BigRational) -> Result<BigRational> {
        let konst: BigInt = self.constant.parse().map_err(|_| crate::Error::Usage("bad identity constant".into()))?;
        let pair = if self.pair_sign > 0 { c1 + c2 } else { c1 - c2 };
        let tail = match &self.tail {
            Tail::Quadratic(a, b, c) => {
                let r = |n: i64| BigRational::from_integer(n.into());
                r(*a) * c1 * c1 + r(*b) * c1 * c2 + r(*c) * c2 * c2
            }
            Tail::Critical(name) => critical_polynomials()
                .get(name)
                .expect("known polynomial")
                .eval(&assign([("c1", c1.clone()), ("c2", c2.clone()), ("k", k.clone())]))?,
        };
        let p = |x: &BigRational, n: u32| num_traits::pow(x.clone(), n as usize);
        Ok(BigRational::from_integer(konst)
            * p(k, self.k_exp)
            * p(c1, self.c1_exp)
            * p(c2, self.c2_exp)
            * p(&pair, self.pair_exp)
            * p(&tail, self.tail_exp))
    }

    /// Human-readable right-hand side.
    pub fn display(&self) -> String {
        let pair = if self.pair_sign > 0 { "(c1 + c2)" } else { "(c1 - c2)" };
        let tail = match &self.tail {
            Tail::Quadratic(a, b, c) => format!("({a} c1^2 + {b} c1 c2 + {c} c2^2)"),
            Tail::Critical(n) => n.to_string(),
        };
        let lhs = if self.with_denom { format!("res(numer*denom(CD{}))", self.cd) } else { format!("res(numer(CD{}))", self.cd) };
        format!(
            "{lhs} = {} k^{} c1^{} c2^{} {pair}^{} {tail}^{}",
            self.constant, self.k_exp, self.c1_exp, self.c2_exp, self.pair_exp, self.tail_exp
        )
    }
}

#[allow(clippy::too_many_arguments)]
fn spec(
    label: &str,
    cd: usize,
    with_denom: bool,
    constant: &str,
    (k_exp, c1_exp, c2_exp): (u32, u32, u32),
    (pair_sign, pair_exp): (i8, u32),
    tail: Tail,
    tail_exp: u32,
) -> IdentitySpec {
    IdentitySpec {
        label: label.into(),
        cd,
        with_denom,
        constant: constant.into(),
        k_exp,
        c1_exp,
        c2_exp,
        pair_sign,
        pair_exp,
        tail,
        tail_exp,
    }
}

/// The six published identities for `alpha`, exactly as displayed.
pub fn displayed_identities(alpha: Substitutability) -> Vec<IdentitySpec> {
    match alpha {
        Substitutability::Half => {
            let q = || Tail::Quadratic(32, 61, 32);
            vec![
                spec("numer CD1", 1, false, "81", (6, 18, 6), (1, 1), q(), 1),
                spec("numer CD2", 2, false, "-729", (0, 32, 8), (1, 1), Tail::Critical("R1"), 1),
                spec("numer CD3", 3, false, "729", (3, 32, 8), (1, 1), Tail::Critical("R2"), 1),
                spec("numer*denom CD1", 1, true, "-1594323", (6, 50, 17), (1, 6), q(), 1),
                spec("numer*denom CD2", 2, true, "129140163", (0, 70, 22), (1, 6), Tail::Critical("R1"), 1),
                spec("numer*denom CD3", 3, true, "-129140163", (3, 70, 22), (1, 6), Tail::Critical("R2"), 1),
            ]
        }
        Substitutability::Third => {
            let q = || Tail::Quadratic(2187, -4031, 2187);
            let big = "99035203142830421991929937920000000";
            let k1 = format!("5708990770823839524233143877797980545530986496{}", "0".repeat(20));
            let k2 = format!("6582018229284824168619876730229402019930943462534319453394436096{}", "0".repeat(24));
            vec![
                spec("numer CD1", 1, false, "879609302220800000", (16, 51, 11), (-1, 2), q(), 2),
                spec("numer CD2", 2, false, big, (0, 101, 13), (-1, 2), Tail::Critical("R3"), 2),
                spec("numer CD3", 3, false, big, (8, 101, 13), (-1, 10), Tail::Critical("R4"), 2),
                spec("numer*denom CD1", 1, true, &k1, (16, 156, 36), (-1, 12), q(), 2),
                spec("numer*denom CD2", 2, true, &k2, (0, 218, 42), (-1, 10), Tail::Critical("R3"), 2),
                spec("numer*denom CD3", 3, true, &k2, (8, 218, 42), (-1, 10), Tail::Critical("R4"), 2),
            ]
        }
    }
}

/// One disagreement between the two sides.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Mismatch {
    pub point: [String; 3],
    pub lhs: String,
    pub rhs: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityCheck {
    pub label: String,
    pub displayed: String,
    pub passed: usize,
    pub failed: usize,
    pub mismatches: Vec<Mismatch>,
    /// When every trial fails by the same power of the pair factor, the
    /// exponent correction that makes the identity hold, e.g. `(c1 - c2)^2`.
    pub diagnosis: Option<String>,
}

impl IdentityCheck {
    pub fn ok(&self) -> bool {
        self.failed == 0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityReport {
    pub alpha: Substitutability,
    pub seed: u64,
    pub trials: usize,
    pub checks: Vec<IdentityCheck>,
}

impl IdentityReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(IdentityCheck::ok)
    }
}

/// Seeded random rational points `(c1, c2, k)` with `c1 ≠ c2`.
pub fn random_points(trials: usize, seed: u64) -> Vec<[BigRational; 3]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draw = |rng: &mut ChaCha8Rng| {
        let n: i64 = rng.random_range(1..=60);
        let d: i64 = rng.random_range(1..=60);
        BigRational::new(n.into(), d.into())
    };
    let mut out = Vec::with_capacity(trials);
    while out.len() < trials {
        let p = [draw(&mut rng), draw(&mut rng), draw(&mut rng)];
        if p[0] != p[1] {
            out.push(p);
        }
    }
    out
}

fn general_set(alpha: Substitutability) -> TriangularSet {
    triangular_sets(alpha, false).pop().expect("general branch set")
}

/// Exact `res(numer(CDi) [· denom(CDi)], T)` at one parameter point.
pub fn identity_lhs(
    alpha: Substitutability,
    cd: usize,
    with_denom: bool,
    c1: &BigRational,
    c2: &BigRational,
    k: &BigRational,
) -> Result<BigRational> {
    let f = &cd_fractions(alpha)[cd - 1];
    let a: Assignment = assign([("c1", c1.clone()), ("c2", c2.clone()), ("k", k.clone())]);
    let mut h = f.numer.substitute(&a);
    if with_denom {
        h = &h * &f.denom();
    }
    let t = general_set(alpha).specialize(&assign([("c1", c1.clone()), ("c2", c2.clone())]))?;
    let r = resultant_vs_triangular(&h, &t)?;
    Ok(r.constant_value().expect("resultant eliminates every variable"))
}

fn diagnose(spec: &IdentitySpec, failures: &[(BigRational, [BigRational; 3])]) -> Option<String> {
    let pair = |p: &[BigRational; 3]| if spec.pair_sign > 0 { &p[0] + &p[1] } else { &p[0] - &p[1] };
    let name = if spec.pair_sign > 0 { "(c1 + c2)" } else { "(c1 - c2)" };
    for e in 1..=24i32 {
        for sgn in [1, -1] {
            let ex = sgn * e;
            let fits = failures.iter().all(|(ratio, p)| {
                let base = pair(p);
                !base.is_zero() && *ratio == num_traits::pow(base.clone(), e as usize).pow(sgn)
            });
            if fits {
                return Some(format!(
                    "lhs = rhs · {name}^{ex}; holds with exponent {}",
                    spec.pair_exp as i32 + ex
                ));
            }
        }
    }
    None
}

/// Check `specs` at `trials` seeded rational points.
pub fn verify_identities_with(
    alpha: Substitutability,
    specs: &[IdentitySpec],
    trials: usize,
    seed: u64,
    exec: Exec,
) -> Result<IdentityReport> {
    let points = random_points(trials, seed);
    // Build the symbolic fractions once before fanning out.
    let _ = cd_fractions(alpha);
    let jobs: Vec<(usize, usize)> = (0..specs.len()).flat_map(|s| (0..points.len()).map(move |p| (s, p))).collect();
    let results: Vec<Result<(BigRational, BigRational)>> = map_indexed(jobs.len(), exec, |j| {
        let (s, p) = jobs[j];
        let spec = &specs[s];
        let [c1, c2, k] = &points[p];
        let lhs = identity_lhs(alpha, spec.cd, spec.with_denom, c1, c2, k)?;
        let rhs = spec.rhs(c1, c2, k)?;
        Ok((lhs, rhs))
    });
    let mut checks = Vec::new();
    for (s, spec) in specs.iter().enumerate() {
        let mut passed = 0;
        let mut mismatches = Vec::new();
        let mut ratios = Vec::new();
        for (p, point) in points.iter().enumerate() {
            let (lhs, rhs) = results[s * points.len() + p].clone()?;
            if lhs == rhs {
                passed += 1;
            } else {
                if !rhs.is_zero() {
                    ratios.push((&lhs / &rhs, point.clone()));
                }
                mismatches.push(Mismatch {
                    point: point.clone().map(|x| x.to_string()),
                    lhs: lhs.to_string(),
                    rhs: rhs.to_string(),
                });
            }
        }
        let failed = mismatches.len();
        let diagnosis = if failed > 0 && ratios.len() == failed { diagnose(spec, &ratios) } else { None };
        checks.push(IdentityCheck {
            label: spec.label.clone(),
            displayed: spec.display(),
            passed,
            failed,
            mismatches,
            diagnosis,
        });
    }
    Ok(IdentityReport { alpha, seed, trials, checks })
}

/// Verify the six displayed identities for `alpha`.
pub fn verify_resultant_identities(alpha: Substitutability, trials: usize, seed: u64) -> Result<IdentityReport> {
    verify_identities_with(alpha, &displayed_identities(alpha), trials, seed, Exec::Auto)
}
