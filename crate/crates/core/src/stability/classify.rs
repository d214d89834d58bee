use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::Signed;
use serde::Serialize;

use super::critical::critical_polynomials;
use super::jacobian::jacobian;
use super::jury::{jury, JuryReport, Verdict};
use crate::equilibrium::solve_equilibrium;
use crate::error::{domain, Result};
use crate::exactpoly::{assign, ratio, rational_to_f64, sign_of};
use crate::model::{ModelParams, Substitutability};

/// Which stability rule produced the algebraic verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    /// α = 1/2: R1 > 0 and R2 > 0.
    HalfR1R2,
    /// α = 1/3: R3 > 0 and R4 > 0.
    ThirdR3R4,
    /// α = 1/3: R3 < 0, R4 > 0, A1 > 0, A2 < 0, A3 > 0.
    ThirdDiscriminant,
    /// α = 1/3, c1 = c2 = c: c² > 7k/2000.
    ThirdSymmetric,
    /// No stability clause holds.
    NoClause,
    /// k1 ≠ k2: no algebraic conditions are available; Jury verdict only.
    NumericOnly,
}

/// Verdict at one parameter point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Classification {
    pub alpha: Substitutability,
    pub stable: bool,
    /// Exact signs of the critical polynomials (-1, 0, 1).
    pub signs: BTreeMap<String, i8>,
    pub rule: Rule,
    /// Jury report at the numerically located equilibrium, if it was found.
    pub numeric: Option<JuryReport>,
    /// Whether the numeric verdict matches; `None` when it is critical or missing.
    pub agrees: Option<bool>,
}

fn check_positive(xs: &[&BigRational]) -> Result<()> {
    if xs.iter().all(|x| x.is_positive()) {
        Ok(())
    } else {
        domain("parameters must be positive rationals")
    }
}

/// Exact signs of the critical polynomials relevant to `alpha`.
pub fn critical_signs(
    alpha: Substitutability,
    c1: &BigRational,
    c2: &BigRational,
    k: &BigRational,
) -> Result<BTreeMap<String, i8>> {
    let cp = critical_polynomials();
    let a = assign([("c1", c1.clone()), ("c2", c2.clone()), ("k", k.clone())]);
    let names: &[&str] = match alpha {
        Substitutability::Half => &["R1", "R2"],
        Substitutability::Third => &["R3", "R4", "A1", "A2", "A3"],
    };
    let mut out = BTreeMap::new();
    for n in names {
        let v = cp.get(n).expect("known polynomial").eval(&a)?;
        out.insert(n.to_string(), sign_of(&v));
    }
    Ok(out)
}

/// Numeric Jury report at the located equilibrium.
pub fn numeric_jury(params: &ModelParams) -> Result<JuryReport> {
    let e = solve_equilibrium(params)?;
    jury(&jacobian(params, &e.state)?)
}

fn cross_check(stable: bool, params: Result<ModelParams>) -> (Option<JuryReport>, Option<bool>) {
    let report = params.and_then(|p| numeric_jury(&p)).ok();
    let agrees = report.and_then(|r| match r.verdict() {
        Verdict::Critical => None,
        Verdict::Stable => Some(stable),
        Verdict::Unstable => Some(!stable),
    });
    (report, agrees)
}

/// Classify the equilibrium at `(c1, c2, k)` with k1 = k2 = k in exact arithmetic.
pub fn classify_point(
    alpha: Substitutability,
    c1: &BigRational,
    c2: &BigRational,
    k: &BigRational,
) -> Result<Classification> {
    check_positive(&[c1, c2, k])?;
    let signs = critical_signs(alpha, c1, c2, k)?;
    let s = |n: &str| signs[n];
    let (stable, rule) = match alpha {
        Substitutability::Half => {
            let ok = s("R1") > 0 && s("R2") > 0;
            (ok, if ok { Rule::HalfR1R2 } else { Rule::NoClause })
        }
        Substitutability::Third if c1 == c2 => {
            let ok = c1 * c1 > k * ratio(7, 2000);
            (ok, if ok { Rule::ThirdSymmetric } else { Rule::NoClause })
        }
        Substitutability::Third => {
            if s("R3") > 0 && s("R4") > 0 {
                (true, Rule::ThirdR3R4)
            } else if s("R3") < 0 && s("R4") > 0 && s("A1") > 0 && s("A2") < 0 && s("A3") > 0 {
                (true, Rule::ThirdDiscriminant)
            } else {
                (false, Rule::NoClause)
            }
        }
    };
    let kf = rational_to_f64(k);
    let params = ModelParams::new(alpha.alpha(), rational_to_f64(c1), rational_to_f64(c2), kf, kf);
    let (numeric, agrees) = cross_check(stable, params);
    Ok(Classification { alpha, stable, signs, rule, numeric, agrees })
}

/// Like [`classify_point`] but accepts distinct speeds, in which case only
/// the numeric Jury verdict is available and the result is flagged.
pub fn classify_point_general(
    alpha: Substitutability,
    c1: &BigRational,
    c2: &BigRational,
    k1: &BigRational,
    k2: &BigRational,
) -> Result<Classification> {
    if k1 == k2 {
        return classify_point(alpha, c1, c2, k1);
    }
    check_positive(&[c1, c2, k1, k2])?;
    let params = ModelParams::new(
        alpha.alpha(),
        rational_to_f64(c1),
        rational_to_f64(c2),
        rational_to_f64(k1),
        rational_to_f64(k2),
    )?;
    let report = numeric_jury(&params)?;
    Ok(Classification {
        alpha,
        stable: report.stable,
        signs: BTreeMap::new(),
        rule: Rule::NumericOnly,
        numeric: Some(report),
        agrees: None,
    })
}
