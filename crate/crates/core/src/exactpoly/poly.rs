use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::univariate::UniPoly;
use crate::error::{usage, Result};

/// Values for some or all variables of a polynomial.
pub type Assignment = BTreeMap<String, BigRational>;

/// Build an [`Assignment`] from `(name, value)` pairs.
pub fn assign<I, S>(pairs: I) -> Assignment
where
    I: IntoIterator<Item = (S, BigRational)>,
    S: Into<String>,
{
    pairs.into_iter().map(|(k, v)| (k.into(), v)).collect()
}

/// Sparse multivariate polynomial with exact rational coefficients.
///
/// Terms are keyed by exponent vectors aligned with `vars`. Zero
/// coefficients are never stored. Two polynomials over different variable
/// lists can be combined freely; the result lives over the union of both
/// lists (left operand's order first).
#[derive(Clone, Debug)]
pub struct RationalPoly {
    vars: Vec<String>,
    terms: BTreeMap<Vec<u32>, BigRational>,
}

fn union_vars(a: &[String], b: &[String]) -> Vec<String> {
    let mut out = a.to_vec();
    for v in b {
        if !out.contains(v) {
            out.push(v.clone());
        }
    }
    out
}

fn owned(vars: &[&str]) -> Vec<String> {
    vars.iter().map(|s| s.to_string()).collect()
}

impl RationalPoly {
    fn check_vars(vars: &[String]) -> Result<()> {
        for (i, v) in vars.iter().enumerate() {
            if v.is_empty() {
                return usage("empty variable name");
            }
            if vars[..i].contains(v) {
                return usage(format!("duplicate variable `{v}`"));
            }
        }
        Ok(())
    }

    /// The zero polynomial over `vars`.
    pub fn zero(vars: &[&str]) -> Self {
        RationalPoly { vars: owned(vars), terms: BTreeMap::new() }
    }

    /// A constant polynomial over `vars`.
    pub fn constant(vars: &[&str], c: BigRational) -> Self {
        Self::constant_in(owned(vars), c)
    }

    pub(crate) fn constant_in(vars: Vec<String>, c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(vec![0; vars.len()], c);
        }
        RationalPoly { vars, terms }
    }

    /// The polynomial `name` over `vars`.
    pub fn var(vars: &[&str], name: &str) -> Result<Self> {
        let vars = owned(vars);
        Self::check_vars(&vars)?;
        let Some(i) = vars.iter().position(|v| v == name) else {
            return usage(format!("`{name}` is not one of {vars:?}"));
        };
        let mut e = vec![0; vars.len()];
        e[i] = 1;
        let mut terms = BTreeMap::new();
        terms.insert(e, BigRational::one());
        Ok(RationalPoly { vars, terms })
    }

    /// Build from explicit `(exponents, coefficient)` pairs; like terms are merged.
    pub fn from_terms<I>(vars: &[&str], terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, BigRational)>,
    {
        let vars = owned(vars);
        Self::check_vars(&vars)?;
        let mut map: BTreeMap<Vec<u32>, BigRational> = BTreeMap::new();
        for (e, c) in terms {
            if e.len() != vars.len() {
                return usage(format!("exponent vector {e:?} does not match {} variables", vars.len()));
            }
            add_term(&mut map, e, c);
        }
        Ok(RationalPoly { vars, terms: map })
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    /// Terms in ascending lexicographic order of exponent vectors.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&[u32], &BigRational)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The constant value if the polynomial has no variable dependence.
    pub fn constant_value(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => {
                let (e, c) = self.terms.iter().next()?;
                e.iter().all(|&x| x == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    /// Degree in `name`; 0 if the variable is absent or the polynomial is zero.
    pub fn degree_in(&self, name: &str) -> u32 {
        match self.var_index(name) {
            Some(i) => self.terms.keys().map(|e| e[i]).max().unwrap_or(0),
            None => 0,
        }
    }

    /// Total degree; 0 for constants and for the zero polynomial.
    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum::<u32>()).max().unwrap_or(0)
    }

    /// Variables that actually occur in some term.
    pub fn used_vars(&self) -> Vec<String> {
        (0..self.vars.len())
            .filter(|&i| self.terms.keys().any(|e| e[i] > 0))
            .map(|i| self.vars[i].clone())
            .collect()
    }

    /// Re-express over `vars`, which must contain every used variable.
    pub fn with_vars(&self, vars: &[String]) -> Result<Self> {
        if vars == self.vars.as_slice() {
            return Ok(self.clone());
        }
        Self::check_vars(vars)?;
        let mut map = Vec::with_capacity(self.vars.len());
        for (i, v) in self.vars.iter().enumerate() {
            match vars.iter().position(|w| w == v) {
                Some(j) => map.push(Some(j)),
                None if self.terms.keys().all(|e| e[i] == 0) => map.push(None),
                None => return usage(format!("variable `{v}` is used but missing from {vars:?}")),
            }
        }
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mut ne = vec![0; vars.len()];
                for (i, &x) in e.iter().enumerate() {
                    if let Some(j) = map[i] {
                        ne[j] = x;
                    }
                }
                (ne, c.clone())
            })
            .collect();
        Ok(RationalPoly { vars: vars.to_vec(), terms })
    }

    fn aligned(a: &Self, b: &Self) -> (Self, Self) {
        if a.vars == b.vars {
            return (a.clone(), b.clone());
        }
        let vars = union_vars(&a.vars, &b.vars);
        (
            a.with_vars(&vars).expect("union contains all variables"),
            b.with_vars(&vars).expect("union contains all variables"),
        )
    }

    /// Multiply every coefficient by `s`.
    pub fn scale(&self, s: &BigRational) -> Self {
        if s.is_zero() {
            return RationalPoly { vars: self.vars.clone(), terms: BTreeMap::new() };
        }
        let terms = self.terms.iter().map(|(e, c)| (e.clone(), c * s)).collect();
        RationalPoly { vars: self.vars.clone(), terms }
    }

    pub fn pow(&self, mut n: u32) -> Self {
        let mut result = Self::constant_in(self.vars.clone(), BigRational::one());
        let mut base = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                result = &result * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Exact value at a full assignment of the used variables.
    pub fn eval(&self, assignment: &Assignment) -> Result<BigRational> {
        let used = self.used_vars();
        for v in &used {
            if !assignment.contains_key(v) {
                return usage(format!("no value assigned to `{v}`"));
            }
        }
        let powers: Vec<Vec<BigRational>> = self
            .vars
            .iter()
            .enumerate()
            .map(|(i, v)| {
                let max = self.terms.keys().map(|e| e[i]).max().unwrap_or(0) as usize;
                match assignment.get(v) {
                    Some(x) if max > 0 => power_table(x, max),
                    _ => vec![BigRational::one()],
                }
            })
            .collect();
        let mut acc = BigRational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (i, &x) in e.iter().enumerate() {
                if x > 0 {
                    t *= &powers[i][x as usize];
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Substitute the assigned variables and drop them from the variable list.
    pub fn substitute(&self, assignment: &Assignment) -> Self {
        let keep: Vec<usize> = (0..self.vars.len()).filter(|&i| !assignment.contains_key(&self.vars[i])).collect();
        let vars: Vec<String> = keep.iter().map(|&i| self.vars[i].clone()).collect();
        let powers: Vec<Option<Vec<BigRational>>> = self
            .vars
            .iter()
            .enumerate()
            .map(|(i, v)| {
                assignment.get(v).map(|x| {
                    let max = self.terms.keys().map(|e| e[i]).max().unwrap_or(0) as usize;
                    power_table(x, max)
                })
            })
            .collect();
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (i, &x) in e.iter().enumerate() {
                if let Some(p) = &powers[i] {
                    t *= &p[x as usize];
                }
            }
            let ne: Vec<u32> = keep.iter().map(|&i| e[i]).collect();
            add_term(&mut terms, ne, t);
        }
        RationalPoly { vars, terms }
    }

    /// Coefficients with respect to `name`, index = power. Each coefficient
    /// lives over the remaining variables.
    pub fn coefficients_in(&self, name: &str) -> Vec<RationalPoly> {
        let Some(vi) = self.var_index(name) else {
            return vec![self.clone()];
        };
        let rest: Vec<String> = self.vars.iter().filter(|v| *v != name).cloned().collect();
        let deg = self.degree_in(name) as usize;
        let mut out: Vec<BTreeMap<Vec<u32>, BigRational>> = vec![BTreeMap::new(); deg + 1];
        for (e, c) in &self.terms {
            let mut ne = e.clone();
            let d = ne.remove(vi) as usize;
            out[d].insert(ne, c.clone());
        }
        out.into_iter().map(|terms| RationalPoly { vars: rest.clone(), terms }).collect()
    }

    /// Rebuild `Σ coeffs[i]·name^i`; `name` is appended to the union of the
    /// coefficient variable lists if not already present.
    pub fn from_coefficients_in(name: &str, coeffs: &[RationalPoly]) -> Self {
        let mut vars: Vec<String> = Vec::new();
        for c in coeffs {
            vars = union_vars(&vars, &c.vars);
        }
        if !vars.iter().any(|v| v == name) {
            vars.push(name.to_string());
        }
        let vi = vars.iter().position(|v| v == name).unwrap();
        let mut terms = BTreeMap::new();
        for (d, c) in coeffs.iter().enumerate() {
            let c = c.with_vars(&vars).expect("union contains all variables");
            for (e, v) in c.terms {
                let mut ne = e;
                ne[vi] += d as u32;
                add_term(&mut terms, ne, v);
            }
        }
        RationalPoly { vars, terms }
    }

    pub fn derivative(&self, name: &str) -> Self {
        let Some(vi) = self.var_index(name) else {
            return RationalPoly { vars: self.vars.clone(), terms: BTreeMap::new() };
        };
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            if e[vi] > 0 {
                let mut ne = e.clone();
                ne[vi] -= 1;
                terms.insert(ne, c * BigRational::from_integer(BigInt::from(e[vi])));
            }
        }
        RationalPoly { vars: self.vars.clone(), terms }
    }

    /// Exchange the roles of two variables.
    pub fn swap_vars(&self, a: &str, b: &str) -> Self {
        let mut vars = self.vars.clone();
        for v in vars.iter_mut() {
            if v == a {
                *v = b.to_string();
            } else if v == b {
                *v = a.to_string();
            }
        }
        RationalPoly { vars, terms: self.terms.clone() }
    }

    /// Rename a variable. The new name must not already be in use.
    pub fn rename_var(&self, from: &str, to: &str) -> Result<Self> {
        if self.var_index(to).is_some() {
            return usage(format!("variable `{to}` already present"));
        }
        let vars = self.vars.iter().map(|v| if v == from { to.to_string() } else { v.clone() }).collect();
        Ok(RationalPoly { vars, terms: self.terms.clone() })
    }

    /// Exact division; fails unless `d` divides `self` in ℚ[vars].
    pub fn div_exact(&self, d: &RationalPoly) -> Result<Self> {
        if d.is_zero() {
            return usage("division by the zero polynomial");
        }
        let (mut r, d) = Self::aligned(self, d);
        let (dl_e, dl_c) = d.terms.iter().next_back().map(|(e, c)| (e.clone(), c.clone())).unwrap();
        let mut q = BTreeMap::new();
        while let Some((re, rc)) = r.terms.iter().next_back().map(|(e, c)| (e.clone(), c.clone())) {
            if re.iter().zip(&dl_e).any(|(a, b)| a < b) {
                return usage("polynomial division is not exact");
            }
            let te: Vec<u32> = re.iter().zip(&dl_e).map(|(a, b)| a - b).collect();
            let tc = rc / &dl_c;
            for (e, c) in &d.terms {
                let ne: Vec<u32> = e.iter().zip(&te).map(|(a, b)| a + b).collect();
                add_term(&mut r.terms, ne, -(c * &tc));
            }
            q.insert(te, tc);
        }
        Ok(RationalPoly { vars: r.vars, terms: q })
    }

    /// Positive rational content: gcd of numerators over lcm of denominators.
    pub fn content(&self) -> BigRational {
        let mut num = BigInt::zero();
        let mut den = BigInt::one();
        for c in self.terms.values() {
            num = num.gcd(c.numer());
            den = den.lcm(c.denom());
        }
        if num.is_zero() {
            return BigRational::one();
        }
        BigRational::new(num, den)
    }

    /// `self / content`, so the result has coprime integer coefficients.
    pub fn primitive(&self) -> Self {
        let c = self.content();
        self.scale(&c.recip())
    }

    /// Leading `(exponents, coefficient)` in lexicographic order.
    pub fn leading_term(&self) -> Option<(&[u32], &BigRational)> {
        self.terms.iter().next_back().map(|(e, c)| (e.as_slice(), c))
    }

    /// View as a dense univariate polynomial in `name`; every other variable must be unused.
    pub fn to_univariate(&self, name: &str) -> Result<UniPoly> {
        let used = self.used_vars();
        if used.iter().any(|v| v != name) {
            return usage(format!("polynomial in {used:?} is not univariate in `{name}`"));
        }
        let Some(vi) = self.var_index(name) else {
            return Ok(UniPoly::constant(self.constant_value().unwrap_or_default()));
        };
        let deg = self.degree_in(name) as usize;
        let mut coeffs = vec![BigRational::zero(); deg + 1];
        for (e, c) in &self.terms {
            coeffs[e[vi] as usize] = c.clone();
        }
        Ok(UniPoly::new(coeffs))
    }

    pub fn from_univariate(name: &str, p: &UniPoly) -> Self {
        let mut terms = BTreeMap::new();
        for (i, c) in p.coeffs().iter().enumerate() {
            if !c.is_zero() {
                terms.insert(vec![i as u32], c.clone());
            }
        }
        RationalPoly { vars: vec![name.to_string()], terms }
    }

    /// Evaluate in binary64 at values aligned with `vars()`.
    pub fn eval_f64(&self, values: &[f64]) -> f64 {
        use num_traits::ToPrimitive;
        self.terms
            .iter()
            .map(|(e, c)| {
                let mut t = c.to_f64().unwrap_or(f64::NAN);
                for (x, &k) in values.iter().zip(e) {
                    t *= x.powi(k as i32);
                }
                t
            })
            .sum()
    }
}

fn power_table(x: &BigRational, max: usize) -> Vec<BigRational> {
    let mut out = Vec::with_capacity(max + 1);
    out.push(BigRational::one());
    for i in 0..max {
        let next = &out[i] * x;
        out.push(next);
    }
    out
}

fn add_term(map: &mut BTreeMap<Vec<u32>, BigRational>, e: Vec<u32>, c: BigRational) {
    if c.is_zero() {
        return;
    }
    use std::collections::btree_map::Entry;
    match map.entry(e) {
        Entry::Vacant(v) => {
            v.insert(c);
        }
        Entry::Occupied(mut o) => {
            *o.get_mut() += c;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

impl PartialEq for RationalPoly {
    fn eq(&self, other: &Self) -> bool {
        if self.vars == other.vars {
            return self.terms == other.terms;
        }
        (self - other).is_zero()
    }
}

impl Eq for RationalPoly {}

impl<'a> Add<&'a RationalPoly> for &'a RationalPoly {
    type Output = RationalPoly;
    fn add(self, rhs: &'a RationalPoly) -> RationalPoly {
        let (mut a, b) = RationalPoly::aligned(self, rhs);
        for (e, c) in b.terms {
            add_term(&mut a.terms, e, c);
        }
        a
    }
}

impl<'a> Sub<&'a RationalPoly> for &'a RationalPoly {
    type Output = RationalPoly;
    fn sub(self, rhs: &'a RationalPoly) -> RationalPoly {
        let (mut a, b) = RationalPoly::aligned(self, rhs);
        for (e, c) in b.terms {
            add_term(&mut a.terms, e, -c);
        }
        a
    }
}

impl<'a> Mul<&'a RationalPoly> for &'a RationalPoly {
    type Output = RationalPoly;
    fn mul(self, rhs: &'a RationalPoly) -> RationalPoly {
        let (a, b) = RationalPoly::aligned(self, rhs);
        let mut terms = BTreeMap::new();
        for (ea, ca) in &a.terms {
            for (eb, cb) in &b.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                add_term(&mut terms, e, ca * cb);
            }
        }
        RationalPoly { vars: a.vars, terms }
    }
}

impl Neg for &RationalPoly {
    type Output = RationalPoly;
    fn neg(self) -> RationalPoly {
        let terms = self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect();
        RationalPoly { vars: self.vars.clone(), terms }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<RationalPoly> for RationalPoly {
            type Output = RationalPoly;
            fn $m(self, rhs: RationalPoly) -> RationalPoly {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a RationalPoly> for RationalPoly {
            type Output = RationalPoly;
            fn $m(self, rhs: &'a RationalPoly) -> RationalPoly {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for RationalPoly {
    type Output = RationalPoly;
    fn neg(self) -> RationalPoly {
        -&self
    }
}

/// Canonical text form: `coeff * var^e * ...` terms joined by ` + `, in
/// descending lexicographic order of exponent vectors. The coefficient is
/// always written and carries its own sign; unit exponents are omitted.
impl fmt::Display for RationalPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c}")?;
            for (v, &x) in self.vars.iter().zip(e) {
                match x {
                    0 => {}
                    1 => write!(f, " * {v}")?,
                    _ => write!(f, " * {v}^{x}")?,
                }
            }
        }
        Ok(())
    }
}

/// Sign of a rational as -1, 0 or 1.
pub fn sign_of(x: &BigRational) -> i8 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}
