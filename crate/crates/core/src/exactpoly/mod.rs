//! Exact rational algebra: sparse multivariate polynomials, Sylvester
//! resultants and Sturm-based real root counting and isolation.

mod poly;
mod resultant;
mod text;
mod triangular;
mod univariate;

pub use num_rational::BigRational;
pub use poly::{assign, sign_of, Assignment, RationalPoly};
pub use resultant::{resultant_vs_triangular, sylvester_determinant, sylvester_matrix, sylvester_resultant, univariate_resultant};
pub use text::parse_rational;
pub use triangular::TriangularSet;
pub use univariate::{
    count_roots_above, default_tolerance, horner, isolate_positive_roots, isolate_real_roots, isolate_roots_between,
    refine_root, sign_at_root, sturm_positive_root_count, sturm_sequence, Lower, RootInterval, Sturm, UniPoly, Upper,
};

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::error::{domain, Result};

/// Exact rational value of a finite binary64.
pub fn rational_from_f64(x: f64) -> Result<BigRational> {
    match BigRational::from_float(x) {
        Some(r) => Ok(r),
        None => domain(format!("{x} is not a finite number")),
    }
}

/// Nearest binary64 to a rational.
pub fn rational_to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Shorthand for `n/d`.
pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Sturm count on a univariate `RationalPoly`.
pub fn sturm_positive_root_count_poly(p: &RationalPoly) -> Result<usize> {
    let vars = p.used_vars();
    let name = vars.first().map(|s| s.as_str()).unwrap_or("x");
    sturm_positive_root_count(&p.to_univariate(name)?)
}

/// Serialize a rational as its `num/den` string.
pub(crate) fn ser_rational<S: serde::Serializer>(x: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

pub(crate) fn ser_rational_opt<S: serde::Serializer>(
    x: &Option<BigRational>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match x {
        Some(r) => s.serialize_some(&r.to_string()),
        None => s.serialize_none(),
    }
}
