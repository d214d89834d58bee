use num_rational::BigRational;
use num_traits::{One, Zero};

use super::poly::RationalPoly;
use super::triangular::TriangularSet;
use super::univariate::UniPoly;
use crate::error::{usage, Result};

/// Resultant of two univariate polynomials by the Euclidean recurrence
/// `res(A,B) = (-1)^{mn} · lc(B)^{m-r} · res(B, A mod B)`.
///
/// Constants follow `res(c, B) = c^deg(B)`; a zero argument gives 0.
pub fn univariate_resultant(a: &UniPoly, b: &UniPoly) -> BigRational {
    let (Some(mut m), Some(mut n)) = (a.degree(), b.degree()) else {
        return BigRational::zero();
    };
    let (mut a, mut b) = (a.clone(), b.clone());
    let mut acc = BigRational::one();
    loop {
        if n == 0 {
            return acc * pow(b.lead().unwrap(), m);
        }
        if m == 0 {
            return acc * pow(a.lead().unwrap(), n);
        }
        let r = a.rem(&b);
        let Some(dr) = r.degree() else {
            return BigRational::zero();
        };
        if (m * n) % 2 == 1 {
            acc = -acc;
        }
        acc *= pow(b.lead().unwrap(), m - dr);
        a = b;
        b = r;
        m = n;
        n = dr;
    }
}

fn pow(x: &BigRational, n: usize) -> BigRational {
    num_traits::pow(x.clone(), n)
}

/// Sylvester matrix of two coefficient lists given leading coefficient first.
///
/// Row layout: `deg b` shifted copies of `a`, then `deg a` shifted copies of `b`.
pub fn sylvester_matrix<T: Clone>(a: &[T], b: &[T], zero: &T) -> Vec<Vec<T>> {
    let m = a.len().saturating_sub(1);
    let n = b.len().saturating_sub(1);
    let size = m + n;
    let mut rows = Vec::with_capacity(size);
    for i in 0..n {
        let mut row = vec![zero.clone(); size];
        row[i..i + m + 1].clone_from_slice(a);
        rows.push(row);
    }
    for i in 0..m {
        let mut row = vec![zero.clone(); size];
        row[i..i + n + 1].clone_from_slice(b);
        rows.push(row);
    }
    rows
}

/// Ring operations needed by fraction-free elimination.
pub(crate) trait BareissRing: Clone {
    fn is_zero_elem(&self) -> bool;
    fn mul_elem(&self, o: &Self) -> Self;
    fn sub_elem(&self, o: &Self) -> Self;
    fn neg_elem(&self) -> Self;
    /// Division known to be exact.
    fn div_elem(&self, o: &Self) -> Self;
    fn one_like(&self) -> Self;
}

impl BareissRing for BigRational {
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn mul_elem(&self, o: &Self) -> Self {
        self * o
    }
    fn sub_elem(&self, o: &Self) -> Self {
        self - o
    }
    fn neg_elem(&self) -> Self {
        -self
    }
    fn div_elem(&self, o: &Self) -> Self {
        self / o
    }
    fn one_like(&self) -> Self {
        BigRational::one()
    }
}

impl BareissRing for RationalPoly {
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn mul_elem(&self, o: &Self) -> Self {
        self * o
    }
    fn sub_elem(&self, o: &Self) -> Self {
        self - o
    }
    fn neg_elem(&self) -> Self {
        -self
    }
    fn div_elem(&self, o: &Self) -> Self {
        self.div_exact(o).expect("Bareiss division is exact")
    }
    fn one_like(&self) -> Self {
        RationalPoly::constant_in(self.vars().to_vec(), BigRational::one())
    }
}

/// Determinant by Bareiss fraction-free elimination with row pivoting.
pub(crate) fn bareiss_det<T: BareissRing>(mut m: Vec<Vec<T>>, zero: T) -> T {
    let n = m.len();
    if n == 0 {
        return zero.one_like();
    }
    let mut prev = zero.one_like();
    let mut negate = false;
    for k in 0..n - 1 {
        if m[k][k].is_zero_elem() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero_elem()) {
                Some(i) => {
                    m.swap(k, i);
                    negate = !negate;
                }
                None => return zero,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = m[i][j].mul_elem(&m[k][k]).sub_elem(&m[i][k].mul_elem(&m[k][j]));
                m[i][j] = t.div_elem(&prev);
            }
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if negate {
        d.neg_elem()
    } else {
        d
    }
}

/// Determinant of the Sylvester matrix of two univariate polynomials.
///
/// Independent of [`univariate_resultant`]; the two are cross-checked in tests.
pub fn sylvester_determinant(a: &UniPoly, b: &UniPoly) -> BigRational {
    match (a.degree(), b.degree()) {
        (Some(_), Some(_)) => {}
        _ => return BigRational::zero(),
    }
    let ac: Vec<BigRational> = a.coeffs().iter().rev().cloned().collect();
    let bc: Vec<BigRational> = b.coeffs().iter().rev().cloned().collect();
    let z = BigRational::zero();
    bareiss_det(sylvester_matrix(&ac, &bc, &z), z)
}

/// Resultant of `a` and `b` with respect to `var`, as a polynomial in the
/// remaining variables.
///
/// Uses the Euclidean recurrence when no other variable is involved, the
/// closed form `Σ a_i (-1)^{m-i} b0^i b1^{m-i}` when one side is linear in
/// `var`, and Bareiss elimination of the Sylvester matrix otherwise.
pub fn sylvester_resultant(a: &RationalPoly, b: &RationalPoly, var: &str) -> Result<RationalPoly> {
    let has = |p: &RationalPoly| p.var_index(var).is_some() && p.degree_in(var) > 0;
    if !has(a) && !has(b) {
        return usage(format!("variable `{var}` occurs in neither polynomial"));
    }
    let ca = a.coefficients_in(var);
    let cb = b.coefficients_in(var);
    let (m, n) = (ca.len() - 1, cb.len() - 1);
    let rest = |p: &RationalPoly| -> Vec<String> { p.vars().iter().filter(|v| *v != var).cloned().collect() };
    let mut vars = rest(a);
    for v in rest(b) {
        if !vars.contains(&v) {
            vars.push(v);
        }
    }
    let lift = |p: &RationalPoly| p.with_vars(&vars).expect("union contains all variables");

    if a.is_zero() || b.is_zero() {
        return Ok(RationalPoly::constant_in(vars, BigRational::zero()));
    }
    if m == 0 {
        return Ok(lift(&ca[0].pow(n as u32)));
    }
    if n == 0 {
        return Ok(lift(&cb[0].pow(m as u32)));
    }
    let others_used = ca.iter().chain(&cb).any(|c| !c.used_vars().is_empty());
    if !others_used {
        let ua = a.to_univariate(var)?;
        let ub = b.to_univariate(var)?;
        return Ok(RationalPoly::constant_in(vars, univariate_resultant(&ua, &ub)));
    }
    if n == 1 {
        return Ok(lift(&linear_resultant(&ca, &cb[0], &cb[1])));
    }
    if m == 1 {
        let r = linear_resultant(&cb, &ca[0], &ca[1]);
        let r = if (m * n) % 2 == 1 { -r } else { r };
        return Ok(lift(&r));
    }
    let ca: Vec<RationalPoly> = ca.iter().rev().map(lift).collect();
    let cb: Vec<RationalPoly> = cb.iter().rev().map(lift).collect();
    let zero = RationalPoly::constant_in(vars, BigRational::zero());
    Ok(bareiss_det(sylvester_matrix(&ca, &cb, &zero), zero))
}

/// `res(A, b1·v + b0)` from the coefficients of `A` (ascending) and the linear factor.
fn linear_resultant(a: &[RationalPoly], b0: &RationalPoly, b1: &RationalPoly) -> RationalPoly {
    let m = a.len() - 1;
    let mut b1_pows = vec![RationalPoly::constant_in(b1.vars().to_vec(), BigRational::one())];
    for i in 0..m {
        let next = &b1_pows[i] * b1;
        b1_pows.push(next);
    }
    let mut acc = RationalPoly::constant_in(Vec::new(), BigRational::zero());
    let mut b0_pow = RationalPoly::constant_in(b0.vars().to_vec(), BigRational::one());
    for (i, ai) in a.iter().enumerate() {
        if !ai.is_zero() {
            let mut t = &(ai * &b0_pow) * &b1_pows[m - i];
            if (m - i) % 2 == 1 {
                t = -t;
            }
            acc = &acc + &t;
        }
        if i < m {
            b0_pow = &b0_pow * b0;
        }
    }
    acc
}

/// Iterated resultant against a triangular set, eliminating the
/// last-introduced variable first: `res(res(H, T2, v2), T1, v1)`.
pub fn resultant_vs_triangular(h: &RationalPoly, t: &TriangularSet) -> Result<RationalPoly> {
    let mut r = h.clone();
    for (p, v) in t.polys().iter().zip(t.solved_vars()).rev() {
        r = sylvester_resultant(&r, p, v)?;
    }
    Ok(r)
}
