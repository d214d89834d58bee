//! Acceptance gate: one PASS/FAIL line per criterion. Exits non-zero if any
//! criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use bertrand_core::dynamics::*;
use bertrand_core::equilibrium::{branch_roots, count_positive_equilibria, solve_equilibrium};
use bertrand_core::exactpoly::{assign, ratio, rational_to_f64, BigRational};
use bertrand_core::model::*;
use bertrand_core::par::Exec;
use bertrand_core::stability::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const HALF: Substitutability = Substitutability::Half;
const THIRD: Substitutability = Substitutability::Third;

struct Check {
    name: String,
    ok: bool,
    detail: String,
}

fn check(name: impl Into<String>, ok: bool, detail: impl Into<String>) -> Check {
    Check { name: name.into(), ok, detail: detail.into() }
}

fn within(name: &str, t: Duration, limit: Duration) -> Check {
    check(format!("{name} runtime"), t < limit, format!("{:.2?} (limit {:.0?})", t, limit))
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

fn frac(s: &str) -> BigRational {
    s.parse().unwrap()
}

fn eval(name: &str, p: &(BigRational, BigRational, BigRational)) -> BigRational {
    let a = assign([("c1", p.0.clone()), ("c2", p.1.clone()), ("k", p.2.clone())]);
    critical_polynomials().get(name).unwrap().eval(&a).unwrap()
}

fn cross_points() -> [(BigRational, BigRational, BigRational); 2] {
    [(ratio(261, 65536), ratio(1, 2), ratio(79, 1024)), (ratio(3, 8), ratio(1, 2), ratio(827, 64))]
}

fn spot_values() -> Vec<Check> {
    let t = Instant::now();
    let [p, q] = cross_points();
    let expected = [
        (&p, "R1", "588713082686404258452596575293972215811486125608829/6129982163463555433433388108601236734474956488734408704"),
        (&p, "R2", "108130364702270905134254005155560019343/340282366920938463463374607431768211456"),
        (&p, "R3", "-791461358900213183480020700044263844445257635142615074110540187/26328072917139296674479506920917608079723773850137277813577744384"),
        (&p, "R4", "526438846625624761986017962528229497389068363385599391/374144419156711147060143317175368453031918731001856"),
        (&p, "A1", "44864955/4294967296"),
        (&p, "A2", "-842240947483983714275440267/81129638414606681695789005144064"),
        (&p, "A3", "-63936547182666560163845458457577/649037107316853453566312041152512"),
        (&q, "R1", "-24200272602071108539/17592186044416"),
        (&q, "R2", "-96467864887/67108864"),
        (&q, "R3", "40079185741889580295152003015/288230376151711744"),
        (&q, "R4", "29339436396656781/17179869184"),
    ];
    let mut out: Vec<Check> = expected
        .iter()
        .map(|(pt, name, want)| {
            let got = eval(name, pt);
            check(format!("{name} at ({}, {}, {})", pt.0, pt.1, pt.2), got == frac(want), format!("got {got}"))
        })
        .collect();
    out.push(within("spot values", t.elapsed(), Duration::from_secs(1)));
    out
}

fn tables() -> Vec<Check> {
    let t = Instant::now();
    let mut out = Vec::new();
    for (alpha, names, n) in [(HALF, ["R1", "R2"], 32), (THIRD, ["R3", "R4"], 40)] {
        let rows = table(alpha);
        out.push(check(format!("{alpha:?} row count"), rows.len() == n, format!("{} rows", rows.len())));
        for (i, row) in rows.iter().enumerate() {
            let c = classify_point(alpha, &row.c1, &row.c2, &row.k).unwrap();
            let signs = [c.signs[names[0]], c.signs[names[1]]];
            out.push(check(
                format!("{alpha:?} row {}", i + 1),
                c.stable == row.stable && signs == row.signs,
                format!("stable {} signs {signs:?}", c.stable),
            ));
        }
    }
    out.push(within("tables", t.elapsed(), Duration::from_secs(60)));
    out
}

fn closed_forms() -> Vec<Check> {
    let mut r = rng(3);
    let mut worst_fp = [0.0f64; 2];
    let mut worst_j = [0.0f64; 2];
    let mut worst_entry = [(0, 0); 2];
    for _ in 0..100 {
        let c: f64 = r.random_range(0.01..10.0);
        let k1: f64 = r.random_range(0.01..10.0);
        let k2: f64 = r.random_range(0.01..10.0);
        for (slot, alpha, mult) in [(0, 0.5, 3.0), (1, 1.0 / 3.0, 5.0)] {
            let p = ModelParams::new(alpha, c, c, k1, k2).unwrap();
            let e = PriceState::new(mult * c, mult * c).unwrap();
            let n = step(&p, &e).unwrap();
            worst_fp[slot] = worst_fp[slot].max(n.dist(&e) / e.norm());
            let m = jacobian(&p, &e).unwrap();
            let c2 = c * c;
            let shown = if slot == 0 {
                [[(27.0 * c2 - k1) / (27.0 * c2), k1 / (216.0 * c2)], [k2 / (216.0 * c2), (27.0 * c2 - k2) / (27.0 * c2)]]
            } else {
                [
                    [(500.0 * c2 - 3.0 * k1) / (500.0 * c2), k1 / (1000.0 * c2)],
                    [k2 / (1000.0 * c2), (500.0 * c2 - 3.0 * k2) / (500.0 * c2)],
                ]
            };
            for i in 0..2 {
                for j in 0..2 {
                    let e = rel(m.0[i][j], shown[i][j]);
                    if e > worst_j[slot] {
                        worst_j[slot] = e;
                        worst_entry[slot] = (i + 1, j + 1);
                    }
                }
            }
        }
    }
    vec![
        check("α=1/2 fixed point (3c,3c)", worst_fp[0] <= 1e-12, format!("max rel residual {:.1e}", worst_fp[0])),
        check("α=1/3 fixed point (5c,5c)", worst_fp[1] <= 1e-12, format!("max rel residual {:.1e}", worst_fp[1])),
        check(
            "α=1/2 displayed J(3c,3c)",
            worst_j[0] <= 1e-12,
            format!("max rel error {:.3e} at entry {:?}", worst_j[0], worst_entry[0]),
        ),
        check(
            "α=1/3 displayed M(5c,5c)",
            worst_j[1] <= 1e-12,
            format!("max rel error {:.1e} at entry {:?}", worst_j[1], worst_entry[1]),
        ),
    ]
}

/// Largest |eigenvalue| at the located equilibrium for k1 = k2 = 1.
fn radius(alpha: f64, c: f64) -> (f64, Mat2) {
    let p = ModelParams::symmetric(alpha, c, 1.0).unwrap();
    let e = solve_equilibrium(&p).unwrap();
    let m = jacobian(&p, &e.state).unwrap();
    (m.spectral_radius(), m)
}

fn thresholds() -> Vec<Check> {
    let mut out = Vec::new();
    for (alpha, name, want) in [(0.5, "α=1/2", (5.0f64 / 216.0).sqrt()), (1.0 / 3.0, "α=1/3", (7.0f64 / 2000.0).sqrt())] {
        let (mut lo, mut hi) = (0.01, 1.0);
        if !(radius(alpha, lo).0 > 1.0 && radius(alpha, hi).0 < 1.0) {
            out.push(check(name, false, "bracket does not straddle the boundary"));
            continue;
        }
        while hi - lo > 1e-12 {
            let mid = 0.5 * (lo + hi);
            if radius(alpha, mid).0 > 1.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let c = 0.5 * (lo + hi);
        let ev = radius(alpha, c).1.eigenvalues();
        let minus_one = ev.iter().any(|z| (z.re + 1.0).abs() < 1e-6 && z.im.abs() < 1e-9);
        out.push(check(format!("{name} critical c"), (c - want).abs() <= 1e-6, format!("c = {c:.9} vs {want:.9}")));
        out.push(check(format!("{name} eigenvalue -1 at crossing"), minus_one, format!("{ev:?}")));
    }
    out
}

fn identities() -> Vec<Check> {
    let t = Instant::now();
    let mut out = Vec::new();
    for alpha in [HALF, THIRD] {
        let r = verify_resultant_identities(alpha, DEFAULT_TRIALS, DEFAULT_SEED).unwrap();
        for c in &r.checks {
            let detail = match &c.diagnosis {
                Some(d) => format!("{}/{} trials; {d}", c.passed, r.trials),
                None => format!("{}/{} trials", c.passed, r.trials),
            };
            out.push(check(format!("{alpha:?} {}", c.label), c.ok() && c.passed == r.trials, detail));
        }
    }
    out.push(within("identities", t.elapsed(), Duration::from_secs(300)));
    out
}

fn uniqueness() -> Vec<Check> {
    let mut out = Vec::new();
    for (alpha, a) in [(HALF, 0.5), (THIRD, 1.0 / 3.0)] {
        let mut bad = Vec::new();
        for row in table(alpha) {
            let p = ModelParams::new(a, rational_to_f64(&row.c1), rational_to_f64(&row.c2), 1.0, 1.0).unwrap();
            let n = count_positive_equilibria(&p).unwrap();
            if n != 1 {
                bad.push(format!("({}, {}) -> {n}", row.c1, row.c2));
            }
        }
        out.push(check(format!("{alpha:?} table points"), bad.is_empty(), bad.join(", ")));
        let mut r = rng(6);
        let mut bad = Vec::new();
        for _ in 0..200 {
            let c1 = ratio(r.random_range(1..=1000), r.random_range(1..=100));
            let c2 = ratio(r.random_range(1..=1000), r.random_range(1..=100));
            let n = branch_roots(alpha, &c1, &c2).unwrap().admissible_count();
            if n != 1 {
                bad.push(format!("({c1}, {c2}) -> {n}"));
            }
        }
        out.push(check(format!("{alpha:?} 200 random points"), bad.is_empty(), bad.join(", ")));
    }
    out
}

fn landmarks() -> Vec<Check> {
    let t = Instant::now();
    let base = ModelParams::symmetric(0.5, 0.2, 1.0).unwrap();
    let r = two_cycle_continuation(&base, 0.54, 0.59, 51).unwrap();
    let mut out = Vec::new();
    match r.branch_alpha {
        Some(a) => out.push(check("2-cycle branch α", (a - 0.553372).abs() <= 1e-3, format!("{a:.6}"))),
        None => out.push(check("2-cycle branch α", false, "not detected")),
    }
    match r.ns_alpha {
        Some(a) => out.push(check("NS on 2-cycle α", (a - 0.577570).abs() <= 1e-3, format!("{a:.6}"))),
        None => out.push(check("NS on 2-cycle α", false, "not detected")),
    }
    let p58 = base.with(Param::Alpha, 0.58).unwrap();
    match two_cycle_near_equilibrium(&p58) {
        Ok(c) => {
            let d = (c.a.p1 - 0.464194).abs().max((c.a.p2 - 0.607384).abs());
            out.push(check(
                "2-cycle at α=0.58",
                d <= 1e-4,
                format!("({:.6}, {:.6}), off by {d:.1e}", c.a.p1, c.a.p2),
            ));
        }
        Err(e) => out.push(check("2-cycle at α=0.58", false, e.to_string())),
    }
    let (_, cls) = attractor(&p58, PriceState::new(0.3, 0.3).unwrap(), &OrbitOptions::default()).unwrap();
    let s = cls.representative[0];
    let d = (s.p1 - 0.489655).abs().max((s.p2 - 0.489655).abs());
    out.push(check(
        "diagonal convergence at α=0.58",
        cls.kind == OrbitKind::Fixed && d <= 1e-4,
        format!("{:?} at ({:.6}, {:.6})", cls.kind, s.p1, s.p2),
    ));
    out.push(within("landmarks", t.elapsed(), Duration::from_secs(120)));
    out
}

fn proposition() -> Vec<Check> {
    let mut r = rng(8);
    let mut bad = 0;
    for _ in 0..1000 {
        let k1: f64 = r.random_range(0.001..100.0);
        let k2: f64 = r.random_range(0.001..100.0);
        if symmetric_threshold(HALF, k1, k2).unwrap() <= symmetric_threshold(THIRD, k1, k2).unwrap() {
            bad += 1;
        }
    }
    let mut out = vec![check("threshold ordering at 1000 (k1,k2)", bad == 0, format!("{bad} violations"))];
    for (pt, half_stable) in cross_points().iter().zip([true, false]) {
        let h = classify_point(HALF, &pt.0, &pt.1, &pt.2).unwrap();
        let t = classify_point(THIRD, &pt.0, &pt.1, &pt.2).unwrap();
        out.push(check(
            format!("cross example ({}, {}, {})", pt.0, pt.1, pt.2),
            h.stable == half_stable && t.stable == !half_stable,
            format!("α=1/2 stable {}, α=1/3 stable {}", h.stable, t.stable),
        ));
    }
    out
}

fn statics() -> Vec<Check> {
    let mut r = rng(9);
    let mut bad = Vec::new();
    for _ in 0..100 {
        let a: f64 = r.random_range(0.05..0.95);
        let c: f64 = r.random_range(0.05..5.0);
        let h = 1e-6;
        let (lo, hi) = (symmetric_statics(a - h, c).unwrap(), symmetric_statics(a + h, c).unwrap());
        let d = |f: fn(&SymmetricStatics) -> f64| (f(&hi) - f(&lo)) / (2.0 * h);
        let signs = [d(|s| s.price) < 0.0, d(|s| s.quantity) > 0.0, d(|s| s.profit) < 0.0, d(|s| s.welfare) < 0.0];
        if signs.contains(&false) {
            bad.push(format!("(α={a:.4}, c={c:.4}) {signs:?}"));
        }
    }
    let mut out = vec![check("derivative signs at 100 (α,c)", bad.is_empty(), bad.join(", "))];
    let one = BigRational::from_integer(1.into());
    let two = BigRational::from_integer(2.into());
    let mut wrong = 0;
    for _ in 0..100 {
        let alpha = ratio(r.random_range(1..1000), 1000);
        let c = ratio(r.random_range(1..1000), r.random_range(1..100));
        let (_, _, profit) = symmetric_statics_exact(&alpha, &c).unwrap();
        let beta = &alpha / (&one - &alpha);
        if profit != &one / (&two + beta) {
            wrong += 1;
        }
    }
    out.push(check("profit = 1/(2+β) exactly", wrong == 0, format!("{wrong} mismatches")));
    out
}

/// Codes in scan order with consecutive repeats collapsed.
fn bands(codes: impl IntoIterator<Item = u8>) -> Vec<u8> {
    let mut out: Vec<u8> = Vec::new();
    for c in codes {
        if out.last() != Some(&c) {
            out.push(c);
        }
    }
    out
}

fn first(seq: &[u8], pred: impl Fn(u8) -> bool) -> Option<usize> {
    seq.iter().position(|&c| pred(c))
}

fn scan(alpha: f64, c1: f64, c2: f64, k1: f64, k2: f64, x: Range, y: Range, init: (f64, f64)) -> Scan2d {
    let base = ModelParams::new(alpha, c1, c2, k1, k2).unwrap();
    let init = PriceState::new(init.0, init.1).unwrap();
    bifurcation_scan_2d(&base, x, y, init, &OrbitOptions::default(), Exec::Auto).unwrap()
}

fn has_all_classes(g: &Scan2d) -> (bool, String) {
    let has = |f: &dyn Fn(u8) -> bool| g.codes.iter().any(|&c| f(c));
    let v = [has(&|c| c == 1), has(&|c| c == 2), has(&|c| (3..=25).contains(&c)), has(&|c| c == 26)];
    (v.iter().all(|&b| b), format!("fixed/2/higher/aperiodic present: {v:?}"))
}

fn figures() -> Vec<Check> {
    let mut out = Vec::new();
    let k = || Range::new(Param::K1, 0.05, 10.0, 200).unwrap();
    let k2 = || Range::new(Param::K2, 0.05, 10.0, 200).unwrap();
    let c1 = || Range::new(Param::C1, 0.005, 1.0, 200).unwrap();
    let c2 = || Range::new(Param::C2, 0.005, 1.0, 200).unwrap();

    let g = scan(0.5, 0.3, 0.4, 1.0, 1.0, k(), k2(), (0.5, 0.8));
    let row = |v: f64| (0..200).find(|&j| (g.y.value(j) - v).abs() < 1e-9).unwrap();
    let ns = bands(g.row(row(7.5)).iter().copied());
    let (f, t, a) = (first(&ns, |c| c == 1), first(&ns, |c| c == 2), first(&ns, |c| c == 26));
    let ok = matches!((f, t, a), (Some(f), Some(t), Some(a)) if f < t && t < a) && !ns[..a.unwrap_or(0)].contains(&4);
    out.push(check("k-plane α=1/2 k2=7.5: fixed -> 2 -> aperiodic without 4", ok, format!("bands {ns:?}")));
    let pd = bands(g.row(row(2.5)).iter().copied());
    let order: Vec<Option<usize>> = [1, 2, 4, 8, 26].iter().map(|&c| first(&pd, |x| x == c)).collect();
    let ok = order.iter().all(Option::is_some) && order.windows(2).all(|w| w[0] < w[1]);
    out.push(check("k-plane α=1/2 k2=2.5: fixed -> 2 -> 4 -> 8 -> aperiodic", ok, format!("bands {pd:?}")));

    let g6 = scan(1.0 / 3.0, 0.1, 0.15, 1.0, 1.0, k(), k2(), (0.6, 0.9));
    let (ok, d) = has_all_classes(&g6);
    out.push(check("k-plane α=1/3 classes", ok, d));

    let g7 = scan(0.5, 0.5, 0.5, 6.0, 12.0, c1(), c2(), (0.5, 0.8));
    let col = (0..200).find(|&i| (g7.x.value(i) - 0.9).abs() < 1e-9).unwrap();
    let down = bands((0..200).rev().map(|j| g7.code_at(col, j)));
    let direct = down.first() == Some(&1) && down.get(1) == Some(&26);
    out.push(check("c-plane α=1/2 c1=0.9: fixed -> aperiodic directly", direct, format!("bands for c2 from 1.0 down {down:?}")));
    let (ok, d) = has_all_classes(&g7);
    out.push(check("c-plane α=1/2 classes", ok, d));

    let g8 = scan(1.0 / 3.0, 0.5, 0.5, 0.3, 0.6, c1(), c2(), (0.6, 0.9));
    let (ok, d) = has_all_classes(&g8);
    out.push(check("c-plane α=1/3 classes", ok, d));
    out
}

type Criterion = (&'static str, fn() -> Vec<Check>);

fn main() {
    let criteria: [Criterion; 10] = [
        ("exact spot values", spot_values),
        ("stability tables", tables),
        ("closed forms", closed_forms),
        ("symmetric thresholds", thresholds),
        ("resultant identities", identities),
        ("uniqueness", uniqueness),
        ("bifurcation landmarks", landmarks),
        ("region ordering", proposition),
        ("comparative statics", statics),
        ("bifurcation diagrams", figures),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let line = match catch_unwind(AssertUnwindSafe(f)) {
            Ok(checks) => {
                let bad: Vec<String> =
                    checks.iter().filter(|c| !c.ok).map(|c| format!("{}: {}", c.name, c.detail)).collect();
                if bad.is_empty() {
                    format!("PASS  {name} ({} checks, {:.2?})", checks.len(), t.elapsed())
                } else {
                    failed += 1;
                    format!("FAIL  {name} ({}/{} checks failed) {}", bad.len(), checks.len(), bad.join(" | "))
                }
            }
            Err(e) => {
                failed += 1;
                let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
                format!("FAIL  {name} panicked: {}", msg.unwrap_or_default())
            }
        };
        println!("criterion {:>2}: {line}", i + 1);
    }
    println!("acceptance: {} passed, {failed} failed", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
