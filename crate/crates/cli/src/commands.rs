use std::io::Write;
use std::path::Path;

use bertrand_core::dynamics::{
    bifurcation_scan_1d, bifurcation_scan_2d, two_cycle_continuation, Range,
};
use bertrand_core::equilibrium::{branch_roots, solve_equilibrium};
use bertrand_core::exactpoly::ratio;
use bertrand_core::model::{symmetric_statics, symmetric_statics_exact, PriceState, Substitutability};
use bertrand_core::par::Exec;
use bertrand_core::stability::{
    classify_point, classify_point_general, jacobian, jury, region_scan, symmetric_threshold, table,
    verify_resultant_identities, Axis, Fixed,
};
use serde_json::{json, Value};

use crate::args::*;

/// Failure with its exit code: 1 for computation failures and mismatches, 2 for usage.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

pub fn usage(message: impl Into<String>) -> Failure {
    Failure { code: 2, message: message.into() }
}

impl From<bertrand_core::Error> for Failure {
    fn from(e: bertrand_core::Error) -> Self {
        use bertrand_core::Error::*;
        let code = match e {
            Domain(_) | Usage(_) => 2,
            Escaped { .. } | Computation(_) => 1,
        };
        Failure { code, message: e.to_string() }
    }
}

/// What a command produced: JSON for stdout and whether every check held.
pub struct Outcome {
    pub json: Option<Value>,
    pub ok: bool,
}

fn done(json: Value) -> Result<Outcome, Failure> {
    Ok(Outcome { json: Some(json), ok: true })
}

fn write_out(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| usage(format!("cannot write {}: {e}", p.display()))),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Failure { code: 1, message: format!("cannot write to stdout: {e}") }),
    }
}

fn special(alpha: &Num) -> Option<Substitutability> {
    let a = alpha.exact("alpha");
    [Substitutability::Half, Substitutability::Third].into_iter().find(|s| s.alpha_exact() == a)
}

pub fn equilibrium(m: &ModelArgs) -> Result<Outcome, Failure> {
    let p = m.params().map_err(usage)?;
    let r = m.resolve().map_err(usage)?;
    let e = solve_equilibrium(&p)?;
    let mut out = json!({
        "alpha": m.alpha.text,
        "c1": r.c1.text,
        "c2": r.c2.text,
        "p1": e.state.p1,
        "p2": e.state.p2,
        "residual": e.residual,
        "certified_unique": e.certified_unique,
        "branch": e.branch,
    });
    if let Some(s) = special(&m.alpha) {
        let b = branch_roots(s, &r.c1.exact("c1"), &r.c2.exact("c2"))?;
        out["positive_roots"] = json!(b.raw_positive_count());
        out["admissible_roots"] = json!(b.admissible_count());
    }
    done(out)
}

pub fn stability(m: &ModelArgs) -> Result<Outcome, Failure> {
    let p = m.params().map_err(usage)?;
    let r = m.resolve().map_err(usage)?;
    let e = solve_equilibrium(&p)?;
    let j = jacobian(&p, &e.state)?;
    let report = jury(&j)?;
    let mut out = json!({
        "alpha": m.alpha.text,
        "c1": r.c1.text,
        "c2": r.c2.text,
        "k1": r.k1.text,
        "k2": r.k2.text,
        "equilibrium": e,
        "jacobian": j.0,
        "eigenvalues": j.eigenvalues().map(|z| [z.re, z.im]),
        "jury": report,
        "verdict": report.verdict(),
        "stable": report.stable,
    });
    if let Some(s) = special(&m.alpha) {
        if p.c1() == p.c2() {
            out["threshold_c_squared"] = json!(symmetric_threshold(s, p.k1(), p.k2())?);
        }
        let c = classify_point_general(s, &r.c1.exact("c1"), &r.c2.exact("c2"), &r.k1.exact("k1"), &r.k2.exact("k2"))?;
        out["stable"] = json!(c.stable);
        out["classification"] = serde_json::to_value(&c).expect("serializable");
    }
    done(out)
}

pub fn scan(a: &ScanArgs) -> Result<Outcome, Failure> {
    let s = special(&a.model.alpha).ok_or_else(|| usage("scan needs --alpha 1/2 or 1/3"))?;
    let m = &a.model;
    let ex = |n: &Option<Num>, name: &str| n.as_ref().map(|v| v.exact(name));
    let fixed = Fixed {
        c: ex(&m.c, "c"),
        c1: ex(&m.c1, "c1"),
        c2: ex(&m.c2, "c2"),
        k: Some(m.k.as_ref().map_or_else(|| ratio(1, 1), |v| v.exact("k"))),
        k1: ex(&m.k1, "k1"),
        k2: ex(&m.k2, "k2"),
    };
    let x = Axis::new(a.x, a.x_from.exact("x-from"), a.x_to.exact("x-to"), a.nx)?;
    let y = Axis::new(a.y, a.y_from.exact("y-from"), a.y_to.exact("y-to"), a.ny)?;
    let grid = region_scan(s, x, y, &fixed, Exec::Auto)?;
    write_out(a.out.as_deref(), &grid.to_csv())?;
    Ok(Outcome { json: None, ok: true })
}

fn initial(o: &OrbitArgs) -> Result<PriceState, Failure> {
    Ok(PriceState::new(o.x0, o.y0)?)
}

pub fn bifurcation_1d(a: &Bif1dArgs) -> Result<Outcome, Failure> {
    let base = a.model.params().map_err(usage)?;
    let range = Range::new(a.vary, a.from, a.to, a.n)?;
    let scan = bifurcation_scan_1d(&base, range, initial(&a.orbit)?, &a.orbit.options(), Exec::Auto)?;
    let csv = if a.classes {
        let mut s = String::from("param,class_code\n");
        for p in &scan.points {
            s.push_str(&format!("{},{}\n", p.value, p.kind.code()));
        }
        s
    } else {
        scan.to_csv()
    };
    write_out(a.out.as_deref(), &csv)?;
    Ok(Outcome { json: None, ok: true })
}

pub fn bifurcation_2d(a: &Bif2dArgs) -> Result<Outcome, Failure> {
    let base = a.model.params().map_err(usage)?;
    let x = Range::new(a.x, a.x_from, a.x_to, a.nx)?;
    let y = Range::new(a.y, a.y_from, a.y_to, a.ny)?;
    let grid = bifurcation_scan_2d(&base, x, y, initial(&a.orbit)?, &a.orbit.options(), Exec::Auto)?;
    write_out(a.out.as_deref(), &grid.to_csv())?;
    Ok(Outcome { json: None, ok: true })
}

pub fn continuation(a: &ContinuationArgs) -> Result<Outcome, Failure> {
    let base = a.model.params().map_err(usage)?;
    let r = two_cycle_continuation(&base, a.from, a.to, a.steps)?;
    if let Some(p) = &a.csv {
        write_out(Some(p), &r.to_csv())?;
    }
    let pair = |z: Option<[num_complex::Complex64; 2]>| z.map(|z| z.map(|v| [v.re, v.im]));
    done(json!({
        "alpha_from": a.from,
        "alpha_to": a.to,
        "cycles_found": r.cycles.len(),
        "failures": r.failures.len(),
        "branch_alpha": r.branch_alpha,
        "branch_eigenvalues": pair(r.branch_eigenvalues),
        "ns_alpha": r.ns_alpha,
        "ns_eigenvalues": pair(r.ns_eigenvalues),
        "ns_cycle": r.ns_cycle.map(|c| json!({"a": c.a, "b": c.b})),
    }))
}

pub fn statics(a: &StaticsArgs) -> Result<Outcome, Failure> {
    let s = symmetric_statics(a.alpha.value(), a.c.value())?;
    let (price, quantity, profit) = symmetric_statics_exact(&a.alpha.exact("alpha"), &a.c.exact("c"))?;
    done(json!({
        "statics": s,
        "sensitivities": s.sensitivities(),
        "exact": {
            "price": price.to_string(),
            "quantity": quantity.to_string(),
            "profit": profit.to_string(),
        },
    }))
}

fn verify_tables(s: Substitutability) -> Result<Value, Failure> {
    let names = match s {
        Substitutability::Half => ["R1", "R2"],
        Substitutability::Third => ["R3", "R4"],
    };
    let rows = table(s);
    let mut mismatches = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        let c = classify_point(s, &row.c1, &row.c2, &row.k)?;
        let signs = [c.signs[names[0]], c.signs[names[1]]];
        if c.stable != row.stable || signs != row.signs {
            mismatches.push(json!({
                "row": i + 1,
                "point": [row.c1.to_string(), row.c2.to_string(), row.k.to_string()],
                "expected": {"stable": row.stable, "signs": row.signs},
                "got": {"stable": c.stable, "signs": signs},
            }));
        }
    }
    Ok(json!({"alpha": s.alpha_exact().to_string(), "rows": rows.len(), "mismatches": mismatches}))
}

pub fn verify(a: &VerifyArgs) -> Result<Outcome, Failure> {
    let alphas = match &a.alpha {
        Some(n) => vec![special(n).ok_or_else(|| usage("--alpha must be 1/2 or 1/3"))?],
        None => vec![Substitutability::Half, Substitutability::Third],
    };
    let (tables, identities) = if a.tables || a.identities { (a.tables, a.identities) } else { (true, true) };
    let mut ok = true;
    let mut out = json!({});
    if tables {
        let mut v = Vec::new();
        for &s in &alphas {
            let t = verify_tables(s)?;
            ok &= t["mismatches"].as_array().is_some_and(|m| m.is_empty());
            v.push(t);
        }
        out["tables"] = json!(v);
    }
    if identities {
        let mut v = Vec::new();
        for &s in &alphas {
            let r = verify_resultant_identities(s, a.trials, a.seed)?;
            ok &= r.all_passed();
            v.push(serde_json::to_value(&r).expect("serializable"));
        }
        out["identities"] = json!(v);
    }
    out["ok"] = json!(ok);
    Ok(Outcome { json: Some(out), ok })
}
