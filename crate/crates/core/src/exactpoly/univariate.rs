use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::poly::sign_of;
use crate::error::{usage, Result};

/// Dense univariate polynomial over ℚ, coefficients in ascending order.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct UniPoly {
    coeffs: Vec<BigRational>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigRational::from_integer(BigInt::from(c))).collect())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::new(vec![c])
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn lead(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn to_f64_coeffs(&self) -> Vec<f64> {
        self.coeffs.iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect()
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn monic(&self) -> Self {
        match self.lead() {
            Some(l) => self.scale(&l.recip()),
            None => self.clone(),
        }
    }

    /// Euclidean division. Panics if `d` is zero.
    pub fn div_rem(&self, d: &UniPoly) -> (UniPoly, UniPoly) {
        let dd = d.degree().expect("division by zero polynomial");
        let lead_inv = d.coeffs[dd].recip();
        let mut r = self.coeffs.clone();
        let Some(n) = self.degree().filter(|&n| n >= dd) else {
            return (UniPoly::zero(), self.clone());
        };
        let mut q = vec![BigRational::zero(); n - dd + 1];
        for i in (0..=n - dd).rev() {
            let t = &r[i + dd] * &lead_inv;
            if t.is_zero() {
                continue;
            }
            for (j, c) in d.coeffs.iter().enumerate() {
                r[i + j] -= &t * c;
            }
            q[i] = t;
        }
        r.truncate(dd);
        (UniPoly::new(q), UniPoly::new(r))
    }

    pub fn rem(&self, d: &UniPoly) -> UniPoly {
        self.div_rem(d).1
    }

    /// Monic greatest common divisor; gcd(0,0) = 0.
    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    /// `p / gcd(p, p′)`: same distinct roots, all simple.
    pub fn squarefree_part(&self) -> UniPoly {
        if self.degree().unwrap_or(0) == 0 {
            return self.clone();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0
    }

    /// Coefficients of `p(t + h)` as a polynomial in `h`.
    pub fn taylor_shift(&self, t: &BigRational) -> Vec<BigRational> {
        let mut c = self.coeffs.clone();
        let n = c.len();
        for i in 0..n {
            for j in (i..n.saturating_sub(1)).rev() {
                let add = &c[j + 1] * t;
                c[j] += add;
            }
        }
        c
    }

    /// `p(-x)`.
    pub fn reflect(&self) -> UniPoly {
        UniPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() })
                .collect(),
        )
    }

    /// Sign of `p` just to the right of `t`.
    pub fn sign_right_of(&self, t: &BigRational) -> i8 {
        self.taylor_shift(t).iter().map(sign_of).find(|&s| s != 0).unwrap_or(0)
    }

    /// Sign of `p` just to the left of `t`.
    pub fn sign_left_of(&self, t: &BigRational) -> i8 {
        for (j, c) in self.taylor_shift(t).iter().enumerate() {
            let s = sign_of(c);
            if s != 0 {
                return if j % 2 == 1 { -s } else { s };
            }
        }
        0
    }

    fn sign_at_pos_inf(&self) -> i8 {
        self.lead().map(sign_of).unwrap_or(0)
    }

    fn sign_at_neg_inf(&self) -> i8 {
        match self.degree() {
            Some(d) => {
                let s = self.sign_at_pos_inf();
                if d % 2 == 1 {
                    -s
                } else {
                    s
                }
            }
            None => 0,
        }
    }

    /// Cauchy bound: every real root has absolute value strictly below it.
    pub fn root_bound(&self) -> BigRational {
        let Some(lead) = self.lead() else {
            return BigRational::one();
        };
        let m = self.coeffs.iter().map(|c| (c / lead).abs()).max().unwrap_or_else(BigRational::zero);
        m + BigRational::from_integer(2.into())
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c} * x")?,
                _ => write!(f, "{c} * x^{i}")?,
            }
        }
        Ok(())
    }
}

impl Add for &UniPoly {
    type Output = UniPoly;
    fn add(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let z = BigRational::zero();
        UniPoly::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&z) + rhs.coeffs.get(i).unwrap_or(&z))
                .collect(),
        )
    }
}

impl Sub for &UniPoly {
    type Output = UniPoly;
    fn sub(self, rhs: &UniPoly) -> UniPoly {
        self + &(-rhs)
    }
}

impl Neg for &UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        UniPoly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Mul for &UniPoly {
    type Output = UniPoly;
    fn mul(self, rhs: &UniPoly) -> UniPoly {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UniPoly::new(out)
    }
}

/// Sturm sequence `p, p′, -rem(p, p′), ...` ending at the last nonzero remainder.
pub fn sturm_sequence(p: &UniPoly) -> Vec<UniPoly> {
    let mut seq = vec![p.clone()];
    if p.degree().unwrap_or(0) == 0 {
        return seq;
    }
    seq.push(p.derivative());
    loop {
        let n = seq.len();
        let r = seq[n - 2].rem(&seq[n - 1]);
        if r.is_zero() {
            return seq;
        }
        seq.push(-&r);
    }
}

fn variations(signs: impl IntoIterator<Item = i8>) -> usize {
    let mut last = 0i8;
    let mut n = 0;
    for s in signs {
        if s == 0 {
            continue;
        }
        if last != 0 && s != last {
            n += 1;
        }
        last = s;
    }
    n
}

/// Left end of an open interval.
#[derive(Clone, Debug)]
pub enum Lower {
    NegInf,
    /// Just to the right of the given point.
    Above(BigRational),
}

/// Right end of an open interval.
#[derive(Clone, Debug)]
pub enum Upper {
    PosInf,
    /// Just to the left of the given point.
    Below(BigRational),
}

/// A precomputed Sturm sequence for repeated counting.
#[derive(Clone, Debug)]
pub struct Sturm {
    seq: Vec<UniPoly>,
}

impl Sturm {
    pub fn new(p: &UniPoly) -> Result<Self> {
        if p.is_zero() {
            return usage("Sturm sequence of the zero polynomial");
        }
        Ok(Sturm { seq: sturm_sequence(p) })
    }

    pub fn sequence(&self) -> &[UniPoly] {
        &self.seq
    }

    fn v_lower(&self, lo: &Lower) -> usize {
        match lo {
            Lower::NegInf => variations(self.seq.iter().map(|q| q.sign_at_neg_inf())),
            Lower::Above(t) => variations(self.seq.iter().map(|q| q.sign_right_of(t))),
        }
    }

    fn v_upper(&self, hi: &Upper) -> usize {
        match hi {
            Upper::PosInf => variations(self.seq.iter().map(|q| q.sign_at_pos_inf())),
            Upper::Below(t) => variations(self.seq.iter().map(|q| q.sign_left_of(t))),
        }
    }

    /// Number of distinct real roots in the open interval `(lo, hi)`.
    pub fn count(&self, lo: &Lower, hi: &Upper) -> usize {
        self.v_lower(lo).saturating_sub(self.v_upper(hi))
    }
}

/// Distinct real roots of `p` in `(0, +∞)`.
pub fn sturm_positive_root_count(p: &UniPoly) -> Result<usize> {
    Ok(Sturm::new(p)?.count(&Lower::Above(BigRational::zero()), &Upper::PosInf))
}

/// Distinct real roots of `p` in `(t, +∞)`.
pub fn count_roots_above(p: &UniPoly, t: &BigRational) -> Result<usize> {
    Ok(Sturm::new(p)?.count(&Lower::Above(t.clone()), &Upper::PosInf))
}

/// Closed rational interval `[lo, hi]` holding exactly one root.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RootInterval {
    #[serde(serialize_with = "crate::exactpoly::ser_rational")]
    pub lo: BigRational,
    #[serde(serialize_with = "crate::exactpoly::ser_rational")]
    pub hi: BigRational,
}

impl RootInterval {
    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> BigRational {
        (&self.lo + &self.hi) / BigRational::from_integer(2.into())
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }
}

/// The default isolation width, 2⁻⁴⁰.
pub fn default_tolerance() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::one() << 40)
}

/// Isolate the distinct positive real roots of `p` into disjoint intervals
/// of width ≤ `tol`, in increasing order. Repeated roots are handled by
/// reducing to the squarefree part first.
pub fn isolate_positive_roots(p: &UniPoly, tol: &BigRational) -> Result<Vec<RootInterval>> {
    isolate_roots_between(p, &BigRational::zero(), None, tol)
}

/// Isolate every distinct real root of `p`.
pub fn isolate_real_roots(p: &UniPoly, tol: &BigRational) -> Result<Vec<RootInterval>> {
    if p.is_zero() {
        return usage("cannot isolate roots of the zero polynomial");
    }
    let b = p.root_bound();
    isolate_roots_between(p, &-b, None, tol)
}

/// Isolate the distinct roots in the open interval `(lo, hi)`; `hi = None` means +∞.
pub fn isolate_roots_between(
    p: &UniPoly,
    lo: &BigRational,
    hi: Option<&BigRational>,
    tol: &BigRational,
) -> Result<Vec<RootInterval>> {
    if p.is_zero() {
        return usage("cannot isolate roots of the zero polynomial");
    }
    if !tol.is_positive() {
        return usage("isolation tolerance must be positive");
    }
    let q = p.squarefree_part();
    let sturm = Sturm::new(&q)?;
    let bound = q.root_bound();
    let hi = match hi {
        Some(h) if *h < bound => h.clone(),
        _ => bound,
    };
    let mut out = Vec::new();
    if *lo >= hi {
        return Ok(out);
    }
    let n = sturm.count(&Lower::Above(lo.clone()), &Upper::Below(hi.clone()));
    bisect(&q, &sturm, lo.clone(), hi, n, tol, &mut out);
    Ok(out)
}

fn bisect(
    q: &UniPoly,
    sturm: &Sturm,
    lo: BigRational,
    hi: BigRational,
    n: usize,
    tol: &BigRational,
    out: &mut Vec<RootInterval>,
) {
    if n == 0 {
        return;
    }
    if n == 1 {
        out.push(refine_single(q, lo, hi, tol));
        return;
    }
    let two = BigRational::from_integer(2.into());
    let mid = (&lo + &hi) / &two;
    let left = sturm.count(&Lower::Above(lo.clone()), &Upper::Below(mid.clone()));
    bisect(q, sturm, lo, mid.clone(), left, tol, out);
    let mut right = n - left;
    if q.eval(&mid).is_zero() {
        out.push(RootInterval { lo: mid.clone(), hi: mid.clone() });
        right -= 1;
    }
    bisect(q, sturm, mid, hi, right, tol, out);
}

/// Shrink an open interval holding exactly one simple root by sign bisection.
fn refine_single(q: &UniPoly, mut lo: BigRational, mut hi: BigRational, tol: &BigRational) -> RootInterval {
    let two = BigRational::from_integer(2.into());
    let s_lo = q.sign_right_of(&lo);
    while &hi - &lo > *tol {
        let mid = (&lo + &hi) / &two;
        let s = sign_of(&q.eval(&mid));
        if s == 0 {
            return RootInterval { lo: mid.clone(), hi: mid };
        }
        if s == s_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    RootInterval { lo, hi }
}

/// Polish a root inside `iv` with Newton iterations in binary64.
///
/// Steps that leave the interval are rejected, so the result always lies
/// within the certified bracket.
pub fn refine_root(p: &UniPoly, iv: &RootInterval, iterations: usize) -> f64 {
    let lo = iv.lo.to_f64().unwrap_or(f64::NAN);
    let hi = iv.hi.to_f64().unwrap_or(f64::NAN);
    let mut x = iv.midpoint().to_f64().unwrap_or(f64::NAN);
    if iv.is_exact() {
        return x;
    }
    let c = p.to_f64_coeffs();
    let dc: Vec<f64> = c.iter().enumerate().skip(1).map(|(i, v)| v * i as f64).collect();
    for _ in 0..iterations {
        let f = horner(&c, x);
        let d = horner(&dc, x);
        if f == 0.0 || d == 0.0 || !d.is_finite() {
            break;
        }
        let nx = x - f / d;
        if !(nx >= lo && nx <= hi) {
            break;
        }
        if nx == x {
            break;
        }
        x = nx;
    }
    x
}

/// Evaluate ascending coefficients at `x`.
pub fn horner(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

/// Sign of `q` at the unique root of squarefree `p` inside `iv`.
///
/// The bracket is narrowed until `q` has no root strictly inside it, then
/// `q` is evaluated at its midpoint. Returns 0 when `q` vanishes at that root.
pub fn sign_at_root(p: &UniPoly, iv: &RootInterval, q: &UniPoly) -> Result<i8> {
    if iv.is_exact() {
        return Ok(sign_of(&q.eval(&iv.lo)));
    }
    let g = p.gcd(q);
    if g.degree().unwrap_or(0) > 0 {
        // Shared factor: q vanishes at the root iff g does.
        let s = Sturm::new(&g)?;
        if s.count(&Lower::Above(iv.lo.clone()), &Upper::Below(iv.hi.clone())) > 0
            || g.eval(&iv.lo).is_zero()
            || g.eval(&iv.hi).is_zero()
        {
            return Ok(0);
        }
    }
    let ps = p.squarefree_part();
    let qs = Sturm::new(q)?;
    let (mut lo, mut hi) = (iv.lo.clone(), iv.hi.clone());
    let two = BigRational::from_integer(2.into());
    let s_lo = ps.sign_right_of(&lo);
    for _ in 0..400 {
        let q_roots = qs.count(&Lower::Above(lo.clone()), &Upper::Below(hi.clone()));
        if q_roots == 0 {
            return Ok(sign_of(&q.eval(&((&lo + &hi) / &two))));
        }
        let mid = (&lo + &hi) / &two;
        let s = sign_of(&ps.eval(&mid));
        if s == 0 {
            return Ok(sign_of(&q.eval(&mid)));
        }
        if s == s_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    usage("could not separate the root from the roots of the sign polynomial")
}
