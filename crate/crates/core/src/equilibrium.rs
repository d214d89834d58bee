//! Positive equilibria: the triangular sets, exact Sturm counting with
//! positivity filtering, and numeric polishing.

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactpoly::{
    assign, default_tolerance, isolate_positive_roots, isolate_real_roots, rational_from_f64, refine_root,
    sign_at_root, sturm_positive_root_count, Assignment, RationalPoly, RootInterval, TriangularSet, UniPoly,
};
use crate::model::{gradient_partials, gradient_raw, step, ModelParams, PriceState, Substitutability};

/// A located equilibrium.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquilibriumResult {
    pub state: PriceState,
    /// `max |step(e) - e|` over both coordinates.
    pub residual: f64,
    /// Exactly one admissible root survived Sturm counting and the positivity filter.
    pub certified_unique: bool,
    /// Which route produced the state: a triangular set label, `closed-form` or `newton`.
    pub branch: String,
}

fn ts(label: &str, polys: &[&str], vars: &[&str], solved: &[&str]) -> TriangularSet {
    let polys = polys.iter().map(|s| RationalPoly::parse(s, vars).expect("static polynomial")).collect();
    TriangularSet::new(label, polys, solved).expect("static triangular set")
}

/// The decompositions of the equilibrium equations.
///
/// General costs use variables `p1, p2` (α = 1/2) or `x = √p1, y = √p2`
/// (α = 1/3) with parameters `c1, c2`; the symmetric sets use a single `c`.
pub fn triangular_sets(alpha: Substitutability, symmetric: bool) -> Vec<TriangularSet> {
    const G12: [&str; 4] = ["p1", "p2", "c1", "c2"];
    const S12: [&str; 3] = ["p1", "p2", "c"];
    const G13: [&str; 4] = ["x", "y", "c1", "c2"];
    const S13: [&str; 3] = ["x", "y", "c"];
    match (alpha, symmetric) {
        (Substitutability::Half, false) => vec![
            ts("T11", &["p1", "p2"], &G12, &["p1", "p2"]),
            ts(
                "T12",
                &["p1^3 - 4*c1*p1^2 + (4*c1^2 - 2*c1*c2)*p1 + 3*c1^2*c2", "c1*p2 - p1^2 + 2*c1*p1"],
                &G12,
                &["p1", "p2"],
            ),
        ],
        (Substitutability::Half, true) => vec![
            ts("T21", &["p1", "p2"], &S12, &["p1", "p2"]),
            ts("T22", &["p1 - 3*c", "p2 - 3*c"], &S12, &["p1", "p2"]),
            ts("T23", &["p1^2 - c*p1 - c^2", "p2 + p1 - c"], &S12, &["p1", "p2"]),
        ],
        (Substitutability::Third, false) => vec![
            ts("T31", &["x", "y"], &G13, &["x", "y"]),
            ts(
                "T32",
                &[
                    "x^8 - 9*c1*x^6 + 27*c1^2*x^4 + (-27*c1^3 - 12*c1^2*c2)*x^2 + 20*c1^3*c2",
                    "2*c1*y - x^3 + 3*c1*x",
                ],
                &G13,
                &["x", "y"],
            ),
        ],
        (Substitutability::Third, true) => vec![
            ts("T41", &["x", "y"], &S13, &["x", "y"]),
            ts("T42", &["x^2 - c", "y + x"], &S13, &["x", "y"]),
            ts("T43", &["x^2 - 5*c", "y - x"], &S13, &["x", "y"]),
            ts("T44", &["x^4 - 3*c*x^2 + 4*c^2", "2*c*y - x^3 + 3*c*x"], &S13, &["x", "y"]),
        ],
    }
}

/// The fixed-point equations with denominators cleared, in the variables of
/// [`triangular_sets`] (`symmetric` replaces `c1, c2` by `c`).
pub fn equilibrium_equations(alpha: Substitutability, symmetric: bool) -> [RationalPoly; 2] {
    let (eqs, vars): ([&str; 2], [&str; 4]) = match alpha {
        Substitutability::Half => (
            ["-p2*p1^2 + (p2^2 + 2*p2*p1)*c1", "-p1*p2^2 + (p1^2 + 2*p1*p2)*c2"],
            ["p1", "p2", "c1", "c2"],
        ),
        Substitutability::Third => {
            (["-x^3*y + (2*y^2 + 3*x*y)*c1", "-y^3*x + (2*x^2 + 3*x*y)*c2"], ["x", "y", "c1", "c2"])
        }
    };
    let parse = |s: &str| {
        let p = RationalPoly::parse(s, &vars).expect("static polynomial");
        if symmetric {
            let c = RationalPoly::parse("c", &["c"]).expect("static polynomial");
            let p = substitute_poly(&p, "c1", &c);
            substitute_poly(&p, "c2", &c)
        } else {
            p
        }
    };
    [parse(eqs[0]), parse(eqs[1])]
}

/// Replace variable `v` by the polynomial `q`.
fn substitute_poly(p: &RationalPoly, v: &str, q: &RationalPoly) -> RationalPoly {
    let coeffs = p.coefficients_in(v);
    let mut acc = RationalPoly::constant(&[], BigRational::zero());
    for c in coeffs.iter().rev() {
        acc = &(&acc * q) + c;
    }
    acc
}

fn params_assignment(symmetric: bool, c1: &BigRational, c2: &BigRational) -> Assignment {
    if symmetric {
        assign([("c", c1.clone())])
    } else {
        assign([("c1", c1.clone()), ("c2", c2.clone())])
    }
}

/// `|F| / Σ|terms|` at a point given in `F`'s variable order.
fn relative_residual(f: &RationalPoly, values: &[f64]) -> f64 {
    use num_traits::{Signed, ToPrimitive};
    let mut num = 0.0;
    let mut scale = 0.0;
    for (e, c) in f.terms() {
        let mut t = c.to_f64().unwrap_or(f64::NAN);
        let mut a = c.abs().to_f64().unwrap_or(f64::NAN);
        for (x, &k) in values.iter().zip(e) {
            t *= x.powi(k as i32);
            a *= x.abs().powi(k as i32);
        }
        num += t;
        scale += a;
    }
    if scale == 0.0 {
        num.abs()
    } else {
        num.abs() / scale
    }
}

/// Real solutions `(v1, v2)` of a specialised two-polynomial triangular set,
/// with `v2` obtained from the linear second polynomial.
fn real_solutions(t: &TriangularSet) -> Result<Vec<(f64, f64)>> {
    let v = t.solved_vars();
    let t1 = t.polys()[0].to_univariate(&v[0])?;
    let t2 = &t.polys()[1];
    if t2.degree_in(&v[1]) != 1 {
        return Err(Error::Usage(format!("{}: second polynomial is not linear", t.label())));
    }
    let c = t2.coefficients_in(&v[1]);
    let b0 = c[0].to_univariate(&v[0])?;
    let b1 = c[1].to_univariate(&v[0])?;
    let sq = t1.squarefree_part();
    let mut out = Vec::new();
    for iv in isolate_real_roots(&t1, &default_tolerance())? {
        let r = refine_root(&sq, &iv, 30);
        let den = crate::exactpoly::horner(&b1.to_f64_coeffs(), r);
        if den != 0.0 {
            out.push((r, -crate::exactpoly::horner(&b0.to_f64_coeffs(), r) / den));
        }
    }
    Ok(out)
}

/// Check that every positive solution of the hard-coded triangular sets
/// satisfies the fixed-point equations to 1e-9 relative. The symmetric sets
/// are checked too when `c1 = c2`.
pub fn verify_triangular_consistency(alpha: Substitutability, params: &ModelParams) -> bool {
    let run = || -> Result<bool> {
        let c1 = rational_from_f64(params.c1())?;
        let c2 = rational_from_f64(params.c2())?;
        let mut cases = vec![false];
        if c1 == c2 {
            cases.push(true);
        }
        for symmetric in cases {
            let a = params_assignment(symmetric, &c1, &c2);
            let eqs = equilibrium_equations(alpha, symmetric).map(|e| e.substitute(&a));
            for t in triangular_sets(alpha, symmetric) {
                let t = t.specialize(&a)?;
                for (v1, v2) in real_solutions(&t)? {
                    if !(v1 > 0.0 && v2 > 0.0) {
                        continue;
                    }
                    for e in &eqs {
                        let e = e.with_vars(t.solved_vars())?;
                        if relative_residual(&e, &[v1, v2]) > 1e-9 {
                            return Ok(false);
                        }
                    }
                }
            }
        }
        Ok(true)
    };
    run().unwrap_or(false)
}

/// Exact root data for the general-cost branch polynomial at rational costs.
#[derive(Debug, Clone)]
pub struct BranchRoots {
    pub alpha: Substitutability,
    /// Univariate branch polynomial in `p1` (α = 1/2) or `x` (α = 1/3).
    pub poly: UniPoly,
    /// `v2 = num(v1) / den(v1)` from the linear second polynomial.
    pub back_num: UniPoly,
    pub back_den: UniPoly,
    /// Isolating intervals of all distinct positive roots.
    pub positive_roots: Vec<RootInterval>,
    /// Indices into `positive_roots` whose back-substituted coordinate is positive.
    pub admissible: Vec<usize>,
}

impl BranchRoots {
    pub fn raw_positive_count(&self) -> usize {
        self.positive_roots.len()
    }

    pub fn admissible_count(&self) -> usize {
        self.admissible.len()
    }
}

/// Isolate the positive roots of T12's cubic (or T32's octic) and keep those
/// whose back-substituted second coordinate is positive, all in exact arithmetic.
pub fn branch_roots(alpha: Substitutability, c1: &BigRational, c2: &BigRational) -> Result<BranchRoots> {
    if !c1.is_positive() || !c2.is_positive() {
        return Err(Error::Domain("costs must be positive".into()));
    }
    let t = triangular_sets(alpha, false).pop().expect("general branch set");
    let t = t.specialize(&assign([("c1", c1.clone()), ("c2", c2.clone())]))?;
    let v = t.solved_vars();
    let poly = t.polys()[0].to_univariate(&v[0])?;
    let c = t.polys()[1].coefficients_in(&v[1]);
    let back_num = -&c[0].to_univariate(&v[0])?;
    let back_den = c[1].to_univariate(&v[0])?;
    let raw = sturm_positive_root_count(&poly)?;
    let positive_roots = isolate_positive_roots(&poly, &default_tolerance())?;
    debug_assert_eq!(raw, positive_roots.len());
    let sq = poly.squarefree_part();
    let mut admissible = Vec::new();
    for (i, iv) in positive_roots.iter().enumerate() {
        let s = sign_at_root(&sq, iv, &back_num)? * sign_at_root(&sq, iv, &back_den)?;
        if s > 0 {
            admissible.push(i);
        }
    }
    Ok(BranchRoots { alpha, poly, back_num, back_den, positive_roots, admissible })
}

/// Number of equilibria with both prices positive, certified by Sturm counting.
pub fn count_positive_equilibria(params: &ModelParams) -> Result<usize> {
    let alpha = Substitutability::try_from_alpha(params.alpha())?;
    let c1 = rational_from_f64(params.c1())?;
    let c2 = rational_from_f64(params.c2())?;
    Ok(branch_roots(alpha, &c1, &c2)?.admissible_count())
}

fn max_residual(params: &ModelParams, e: &PriceState) -> f64 {
    match step(params, e) {
        Ok(n) => (n.p1 - e.p1).abs().max((n.p2 - e.p2).abs()),
        Err(_) => f64::INFINITY,
    }
}

/// Locate the positive equilibrium.
///
/// α = 1/2 and α = 1/3 go through the exact branch polynomial; other α use
/// the symmetric closed form when `c1 = c2` and damped Newton otherwise.
pub fn solve_equilibrium(params: &ModelParams) -> Result<EquilibriumResult> {
    match params.substitutability() {
        Some(alpha) => solve_exact(alpha, params),
        None if params.c1() == params.c2() => {
            let b = params.beta();
            let p = params.c1() * (2.0 + b) / b;
            let state = PriceState::new(p, p)?;
            Ok(EquilibriumResult {
                state,
                residual: max_residual(params, &state),
                certified_unique: false,
                branch: "closed-form".into(),
            })
        }
        None => solve_newton(params),
    }
}

fn solve_exact(alpha: Substitutability, params: &ModelParams) -> Result<EquilibriumResult> {
    let c1 = rational_from_f64(params.c1())?;
    let c2 = rational_from_f64(params.c2())?;
    let roots = branch_roots(alpha, &c1, &c2)?;
    let sq = roots.poly.squarefree_part();
    let num = roots.back_num.to_f64_coeffs();
    let den = roots.back_den.to_f64_coeffs();
    let mut best: Option<(PriceState, f64)> = None;
    for &i in &roots.admissible {
        let v1 = refine_root(&sq, &roots.positive_roots[i], 30);
        let v2 = crate::exactpoly::horner(&num, v1) / crate::exactpoly::horner(&den, v1);
        let (p1, p2) = match alpha {
            Substitutability::Half => (v1, v2),
            Substitutability::Third => (v1 * v1, v2 * v2),
        };
        let Ok(state) = PriceState::new(p1, p2) else { continue };
        let r = max_residual(params, &state);
        if best.as_ref().is_none_or(|(_, br)| r < *br) {
            best = Some((state, r));
        }
    }
    let Some((state, residual)) = best else {
        return Err(Error::Computation(format!(
            "no admissible positive equilibrium at c1={}, c2={}",
            params.c1(),
            params.c2()
        )));
    };
    let branch = match alpha {
        Substitutability::Half => "T12",
        Substitutability::Third => "T32",
    };
    Ok(EquilibriumResult { state, residual, certified_unique: roots.admissible_count() == 1, branch: branch.into() })
}

/// Damped Newton on the gradient system `∂Π_i/∂p_i = 0`, started from the
/// symmetric closed form at the mean cost.
fn solve_newton(params: &ModelParams) -> Result<EquilibriumResult> {
    let b = params.beta();
    let cbar = 0.5 * (params.c1() + params.c2());
    let p0 = cbar * (2.0 + b) / b;
    let (c1, c2) = (params.c1(), params.c2());
    let g = |p1: f64, p2: f64| (gradient_raw(b, p1, p2, c1), gradient_raw(b, p2, p1, c2));
    let (mut p1, mut p2) = (p0, p0);
    let mut gv = g(p1, p2);
    for _ in 0..200 {
        let norm = gv.0.hypot(gv.1);
        if norm == 0.0 {
            break;
        }
        let (a11, a12) = gradient_partials(b, p1, p2, c1);
        let (a22, a21) = gradient_partials(b, p2, p1, c2);
        let det = a11 * a22 - a12 * a21;
        if det == 0.0 || !det.is_finite() {
            break;
        }
        let d1 = (a22 * gv.0 - a12 * gv.1) / det;
        let d2 = (-a21 * gv.0 + a11 * gv.1) / det;
        let mut lambda = 1.0;
        let mut moved = false;
        while lambda > 1e-12 {
            let (n1, n2) = (p1 - lambda * d1, p2 - lambda * d2);
            if n1 > 0.0 && n2 > 0.0 {
                let ng = g(n1, n2);
                if ng.0.hypot(ng.1) < norm {
                    p1 = n1;
                    p2 = n2;
                    gv = ng;
                    moved = true;
                    break;
                }
            }
            lambda *= 0.5;
        }
        if !moved || lambda * d1.hypot(d2) < 1e-15 * (1.0 + p1.hypot(p2)) {
            break;
        }
    }
    let state = PriceState::new(p1, p2)?;
    let residual = max_residual(params, &state);
    if !residual.is_finite() || residual > 1e-8 * (1.0 + state.norm()) {
        return Err(Error::Computation(format!("Newton did not converge (residual {residual:e})")));
    }
    Ok(EquilibriumResult { state, residual, certified_unique: false, branch: "newton".into() })
}
