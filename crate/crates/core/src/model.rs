//! Demand, profit and the gradient price-adjustment map.

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{domain, usage, Error, Result};

/// The two substitutability degrees with exact algebraic treatment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Substitutability {
    /// α = 1/2, β = 1.
    Half,
    /// α = 1/3, β = 1/2.
    Third,
}

impl Substitutability {
    pub fn alpha(self) -> f64 {
        match self {
            Substitutability::Half => 0.5,
            Substitutability::Third => 1.0 / 3.0,
        }
    }

    pub fn alpha_exact(self) -> BigRational {
        match self {
            Substitutability::Half => crate::exactpoly::ratio(1, 2),
            Substitutability::Third => crate::exactpoly::ratio(1, 3),
        }
    }

    /// Recognise α = 1/2 or α = 1/3 (to binary64 rounding).
    pub fn from_alpha(alpha: f64) -> Option<Self> {
        if (alpha - 0.5).abs() < 1e-14 {
            Some(Substitutability::Half)
        } else if (alpha - 1.0 / 3.0).abs() < 1e-14 {
            Some(Substitutability::Third)
        } else {
            None
        }
    }

    pub fn try_from_alpha(alpha: f64) -> Result<Self> {
        Self::from_alpha(alpha).ok_or_else(|| Error::Usage(format!("α = {alpha} has no exact treatment; use 1/2 or 1/3")))
    }
}

impl fmt::Display for Substitutability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Substitutability::Half => "1/2",
            Substitutability::Third => "1/3",
        })
    }
}

/// Model parameters. α is canonical; β is always derived from it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModelParams {
    alpha: f64,
    c1: f64,
    c2: f64,
    k1: f64,
    k2: f64,
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        domain(format!("{name} must be a positive finite number, got {v}"))
    }
}

impl ModelParams {
    pub fn new(alpha: f64, c1: f64, c2: f64, k1: f64, k2: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 0.0 && alpha < 1.0) {
            return domain(format!("α must lie in (0,1), got {alpha}"));
        }
        positive("c1", c1)?;
        positive("c2", c2)?;
        positive("k1", k1)?;
        positive("k2", k2)?;
        Ok(ModelParams { alpha, c1, c2, k1, k2 })
    }

    /// Equal costs `c` and equal speeds `k`.
    pub fn symmetric(alpha: f64, c: f64, k: f64) -> Result<Self> {
        Self::new(alpha, c, c, k, k)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.alpha / (1.0 - self.alpha)
    }

    pub fn c1(&self) -> f64 {
        self.c1
    }

    pub fn c2(&self) -> f64 {
        self.c2
    }

    pub fn k1(&self) -> f64 {
        self.k1
    }

    pub fn k2(&self) -> f64 {
        self.k2
    }

    pub fn cost(&self, firm: Firm) -> f64 {
        match firm {
            Firm::One => self.c1,
            Firm::Two => self.c2,
        }
    }

    pub fn speed(&self, firm: Firm) -> f64 {
        match firm {
            Firm::One => self.k1,
            Firm::Two => self.k2,
        }
    }

    pub fn substitutability(&self) -> Option<Substitutability> {
        Substitutability::from_alpha(self.alpha)
    }

    pub fn is_symmetric(&self) -> bool {
        self.c1 == self.c2 && self.k1 == self.k2
    }

    /// Copy with one parameter replaced.
    pub fn with(&self, param: Param, value: f64) -> Result<Self> {
        let mut p = *self;
        match param {
            Param::Alpha => p.alpha = value,
            Param::C => {
                p.c1 = value;
                p.c2 = value;
            }
            Param::C1 => p.c1 = value,
            Param::C2 => p.c2 = value,
            Param::K => {
                p.k1 = value;
                p.k2 = value;
            }
            Param::K1 => p.k1 = value,
            Param::K2 => p.k2 = value,
        }
        Self::new(p.alpha, p.c1, p.c2, p.k1, p.k2)
    }
}

/// A scannable model parameter. `C` and `K` move both firms together.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Param {
    Alpha,
    C,
    C1,
    C2,
    K,
    K1,
    K2,
}

impl FromStr for Param {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "alpha" => Param::Alpha,
            "c" => Param::C,
            "c1" => Param::C1,
            "c2" => Param::C2,
            "k" => Param::K,
            "k1" => Param::K1,
            "k2" => Param::K2,
            _ => return usage(format!("unknown parameter `{s}` (alpha, c, c1, c2, k, k1, k2)")),
        })
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Param::Alpha => "alpha",
            Param::C => "c",
            Param::C1 => "c1",
            Param::C2 => "c2",
            Param::K => "k",
            Param::K1 => "k1",
            Param::K2 => "k2",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Firm {
    One,
    Two,
}

/// A strictly positive price pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PriceState {
    pub p1: f64,
    pub p2: f64,
}

impl PriceState {
    pub fn new(p1: f64, p2: f64) -> Result<Self> {
        positive("p1", p1)?;
        positive("p2", p2)?;
        Ok(PriceState { p1, p2 })
    }

    pub fn norm(&self) -> f64 {
        self.p1.hypot(self.p2)
    }

    pub fn dist(&self, o: &PriceState) -> f64 {
        (self.p1 - o.p1).hypot(self.p2 - o.p2)
    }

    pub fn swapped(&self) -> PriceState {
        PriceState { p1: self.p2, p2: self.p1 }
    }

    /// (own, rival) from the point of view of `firm`.
    pub fn own_rival(&self, firm: Firm) -> (f64, f64) {
        match firm {
            Firm::One => (self.p1, self.p2),
            Firm::Two => (self.p2, self.p1),
        }
    }

    fn check(&self) -> Result<()> {
        positive("p1", self.p1)?;
        positive("p2", self.p2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuantityPair {
    pub q1: f64,
    pub q2: f64,
}

/// `p_j^β / (p_i^β + p_j^β)`, written to avoid overflow for large β.
fn rival_share(beta: f64, own: f64, rival: f64) -> f64 {
    1.0 / (1.0 + (beta * (own / rival).ln()).exp())
}

/// CES demand `q_i = p_j^β / (p_i (p_i^β + p_j^β))`.
pub fn demand(params: &ModelParams, prices: &PriceState) -> Result<QuantityPair> {
    prices.check()?;
    let b = params.beta();
    Ok(QuantityPair {
        q1: rival_share(b, prices.p1, prices.p2) / prices.p1,
        q2: rival_share(b, prices.p2, prices.p1) / prices.p2,
    })
}

/// Inverse demand `p_i = q_i^{α-1} / (q_1^α + q_2^α)`.
pub fn inverse_demand(params: &ModelParams, q: &QuantityPair) -> Result<PriceState> {
    positive("q1", q.q1)?;
    positive("q2", q.q2)?;
    let a = params.alpha();
    let s = q.q1.powf(a) + q.q2.powf(a);
    Ok(PriceState { p1: q.q1.powf(a - 1.0) / s, p2: q.q2.powf(a - 1.0) / s })
}

/// `Π_i = (p_i - c_i) q_i`.
pub fn profit(params: &ModelParams, prices: &PriceState, firm: Firm) -> Result<f64> {
    let q = demand(params, prices)?;
    Ok(match firm {
        Firm::One => (prices.p1 - params.c1) * q.q1,
        Firm::Two => (prices.p2 - params.c2) * q.q2,
    })
}

/// `∂Π_i/∂p_i` for general β.
///
/// With `w` the rival's expenditure share, the derivative is
/// `w (c_i - β (1-w)(p_i - c_i)) / p_i²`.
pub fn profit_gradient(params: &ModelParams, prices: &PriceState, firm: Firm) -> Result<f64> {
    prices.check()?;
    let (own, rival) = prices.own_rival(firm);
    Ok(gradient_raw(params.beta(), own, rival, params.cost(firm)))
}

pub(crate) fn gradient_raw(beta: f64, own: f64, rival: f64, c: f64) -> f64 {
    let w = rival_share(beta, own, rival);
    w * (c - beta * (1.0 - w) * (own - c)) / (own * own)
}

/// `(∂g/∂own, ∂g/∂rival)` for the gradient `g` of [`gradient_raw`].
pub(crate) fn gradient_partials(beta: f64, own: f64, rival: f64, c: f64) -> (f64, f64) {
    let w = rival_share(beta, own, rival);
    let u = w * (1.0 - w);
    let (p, p2, p3) = (own, own * own, own * own * own);
    let w_o = -beta * u / own;
    let w_r = beta * u / rival;
    let u_o = (1.0 - 2.0 * w) * w_o;
    let u_r = (1.0 - 2.0 * w) * w_r;
    let d_own = c * w_o / p2 - 2.0 * c * w / p3 - beta * (u_o * (p - c) / p2 + u * (2.0 * c - p) / p3);
    let d_rival = c * w_r / p2 - beta * u_r * (p - c) / p2;
    (d_own, d_rival)
}

fn escaped(p1: f64, p2: f64) -> Result<PriceState> {
    if p1.is_finite() && p2.is_finite() && p1 > 0.0 && p2 > 0.0 {
        Ok(PriceState { p1, p2 })
    } else {
        Err(Error::Escaped { p1, p2 })
    }
}

/// One gradient-adjustment step `p_i ← p_i + k_i ∂Π_i/∂p_i`.
///
/// Dispatches to the rational closed forms for α = 1/2 and α = 1/3.
/// Returns [`Error::Escaped`] when a new price is not positive.
pub fn step(params: &ModelParams, prices: &PriceState) -> Result<PriceState> {
    match params.substitutability() {
        Some(Substitutability::Half) => step_half(params, prices),
        Some(Substitutability::Third) => step_third(params, prices),
        None => step_generic(params, prices),
    }
}

/// The step using real powers `p^β`, valid for any α.
pub fn step_generic(params: &ModelParams, prices: &PriceState) -> Result<PriceState> {
    prices.check()?;
    let b = params.beta();
    let (p1, p2) = (prices.p1, prices.p2);
    escaped(
        p1 + params.k1 * gradient_raw(b, p1, p2, params.c1),
        p2 + params.k2 * gradient_raw(b, p2, p1, params.c2),
    )
}

/// `(-p_j p_i² + (p_j² + 2 p_i p_j) c) / (p_i² (p_i + p_j)²)`.
fn grad_half(own: f64, rival: f64, c: f64) -> f64 {
    let s = own + rival;
    (-rival * own * own + (rival * rival + 2.0 * own * rival) * c) / (own * own * s * s)
}

/// In square roots `x = √p_i`, `y = √p_j`:
/// `(-x³ y + (2y² + 3xy) c) / (2 x⁴ (x + y)²)`.
fn grad_third(own: f64, rival: f64, c: f64) -> f64 {
    let (x, y) = (own.sqrt(), rival.sqrt());
    let s = x + y;
    (-x * x * x * y + (2.0 * y * y + 3.0 * x * y) * c) / (2.0 * own * own * s * s)
}

/// Map for α = 1/2.
pub fn step_half(params: &ModelParams, prices: &PriceState) -> Result<PriceState> {
    prices.check()?;
    let (p1, p2) = (prices.p1, prices.p2);
    escaped(p1 + params.k1 * grad_half(p1, p2, params.c1), p2 + params.k2 * grad_half(p2, p1, params.c2))
}

/// Map for α = 1/3.
pub fn step_third(params: &ModelParams, prices: &PriceState) -> Result<PriceState> {
    prices.check()?;
    let (p1, p2) = (prices.p1, prices.p2);
    escaped(p1 + params.k1 * grad_third(p1, p2, params.c1), p2 + params.k2 * grad_third(p2, p1, params.c2))
}

/// Symmetric-cost equilibrium quantities and welfare.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SymmetricStatics {
    pub alpha: f64,
    pub c: f64,
    pub price: f64,
    pub quantity: f64,
    pub profit: f64,
    pub consumer_surplus_each: f64,
    pub welfare: f64,
}

/// Derivatives of the symmetric statics with respect to α.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StaticsSensitivity {
    pub d_price: f64,
    pub d_quantity: f64,
    pub d_profit: f64,
    pub d_welfare: f64,
}

/// Equilibrium price `c(2+β)/β`, quantity `β/(2c(2+β))`, profit `1/(2+β)`,
/// consumer surplus `ln2/α` per good and welfare `(2/α) ln2 + 2/(α-2) + 2`.
pub fn symmetric_statics(alpha: f64, c: f64) -> Result<SymmetricStatics> {
    let p = ModelParams::symmetric(alpha, c, 1.0)?;
    let b = p.beta();
    let ln2 = std::f64::consts::LN_2;
    Ok(SymmetricStatics {
        alpha,
        c,
        price: c * (2.0 + b) / b,
        quantity: b / (2.0 * c * (2.0 + b)),
        profit: 1.0 / (2.0 + b),
        consumer_surplus_each: ln2 / alpha,
        welfare: 2.0 * ln2 / alpha + 2.0 / (alpha - 2.0) + 2.0,
    })
}

impl SymmetricStatics {
    pub fn sensitivities(&self) -> StaticsSensitivity {
        let a = self.alpha;
        let c = self.c;
        let am2 = (a - 2.0) * (a - 2.0);
        StaticsSensitivity {
            d_price: -2.0 * c / (a * a),
            d_quantity: 1.0 / (am2 * c),
            d_profit: -1.0 / am2,
            d_welfare: -2.0 * std::f64::consts::LN_2 / (a * a) - 2.0 / am2,
        }
    }
}

/// Exact `(price, quantity, profit)` at the symmetric equilibrium for rational α and c.
pub fn symmetric_statics_exact(alpha: &BigRational, c: &BigRational) -> Result<(BigRational, BigRational, BigRational)> {
    let one = BigRational::one();
    let zero = BigRational::from_integer(0.into());
    if *alpha <= zero || *alpha >= one || *c <= zero {
        return domain("need 0 < α < 1 and c > 0");
    }
    let two = BigRational::from_integer(2.into());
    let beta = alpha / (&one - alpha);
    let price = c * (&two + &beta) / &beta;
    let quantity = &beta / (&two * c * (&two + &beta));
    let profit = (&price - c) * &quantity;
    Ok((price, quantity, profit))
}
