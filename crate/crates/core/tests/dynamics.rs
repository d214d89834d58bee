use bertrand_core::dynamics::*;
use bertrand_core::model::{step, symmetric_statics, ModelParams, Param, PriceState};
use bertrand_core::stability::{jacobian, jury};
use bertrand_core::Exec;
use proptest::prelude::*;

fn sec6(alpha: f64) -> ModelParams {
    ModelParams::symmetric(alpha, 0.2, 1.0).unwrap()
}

fn start() -> PriceState {
    PriceState::new(0.56, 1.06).unwrap()
}

#[test]
fn equilibrium_start_is_constant() {
    let p = sec6(0.3);
    let e = symmetric_statics(0.3, 0.2).unwrap().price;
    let t = iterate(&p, PriceState::new(e, e).unwrap(), 300, 0).unwrap();
    assert!(t.samples.iter().all(|s| (s.p1 - e).abs() < 1e-12 && (s.p2 - e).abs() < 1e-12));
    assert_eq!(classify_orbit(&t, DEFAULT_TOL).unwrap().kind, OrbitKind::Fixed);
}

#[test]
fn samples_exclude_transient() {
    let t = iterate(&sec6(0.3), start(), 250, 50).unwrap();
    assert_eq!(t.samples.len(), 200);
    let direct = iterate(&sec6(0.3), start(), 51, 0).unwrap();
    assert_eq!(t.samples[0], direct.samples[50]);
    assert!(iterate(&sec6(0.3), start(), 10, 10).is_err());
}

#[test]
fn escape_is_recorded() {
    let p = ModelParams::symmetric(0.5, 0.2, 40.0).unwrap();
    let t = iterate(&p, start(), 1200, 1000).unwrap();
    let at = t.escaped_at.expect("huge speed escapes");
    assert!(at < 1200);
    assert_eq!(classify_orbit(&t, DEFAULT_TOL).unwrap().kind, OrbitKind::Escaped);
    assert_eq!(OrbitKind::Escaped.code(), 0);
}

#[test]
fn too_few_samples_is_usage_error() {
    let t = iterate(&sec6(0.3), start(), 100, 0).unwrap();
    assert!(matches!(classify_orbit(&t, DEFAULT_TOL), Err(bertrand_core::Error::Usage(_))));
}

#[test]
fn diagonal_converges_to_equilibrium() {
    let (t, c) = attractor(&sec6(0.58), PriceState::new(0.3, 0.3).unwrap(), &OrbitOptions::default()).unwrap();
    assert_eq!(c.kind, OrbitKind::Fixed);
    let last = t.samples.last().unwrap();
    assert!((last.p1 - 0.489655).abs() < 1e-4 && (last.p2 - 0.489655).abs() < 1e-4);
}

#[test]
fn off_diagonal_start_at_058_is_not_fixed() {
    let (_, c) = attractor(&sec6(0.58), start(), &OrbitOptions::default()).unwrap();
    assert_eq!(c.kind, OrbitKind::Aperiodic);
}

#[test]
fn period_two_at_056() {
    let (_, c) = attractor(&sec6(0.56), start(), &OrbitOptions::default()).unwrap();
    assert_eq!(c.kind, OrbitKind::Periodic(2));
    assert_eq!(c.representative.len(), 2);
    assert!(c.representative[0].dist(&c.representative[1]) > 1e-3);
}

#[test]
fn alpha_059_is_a_long_stable_cycle() {
    // Past the NS point the closed orbit locks into a period-22 cycle here.
    let (_, c) = attractor(&sec6(0.59), start(), &OrbitOptions::default()).unwrap();
    assert_eq!(c.kind, OrbitKind::Periodic(22));
    assert!(lyapunov_exponent(&sec6(0.59), start(), 20_000).unwrap() < 0.0);
}

#[test]
fn alpha_060_is_chaotic() {
    let (_, c) = attractor(&sec6(0.60), start(), &OrbitOptions::default()).unwrap();
    assert_eq!(c.kind, OrbitKind::Aperiodic);
    assert!(lyapunov_exponent(&sec6(0.60), start(), 20_000).unwrap() > 0.05);
}

#[test]
fn lyapunov_negative_on_stable_settings() {
    assert!(lyapunov_exponent(&sec6(0.3), start(), 5000).unwrap() < 0.0);
    assert!(lyapunov_exponent(&sec6(0.56), start(), 5000).unwrap() < 0.0);
    let p = ModelParams::symmetric(0.5, 0.2, 40.0).unwrap();
    assert!(matches!(lyapunov_exponent(&p, start(), 100), Err(bertrand_core::Error::Domain(_))));
}

#[test]
fn one_step_scan_matches_closed_form() {
    let r = Range::new(Param::Alpha, 0.3, 0.3, 1).unwrap();
    let s = bifurcation_scan_1d(&sec6(0.5), r, start(), &OrbitOptions::default(), Exec::Auto).unwrap();
    assert_eq!(s.points.len(), 1);
    assert_eq!(s.points[0].kind, OrbitKind::Fixed);
    let p = s.points[0].samples.last().unwrap();
    assert!((p.p1 - 0.2 * 17.0 / 3.0).abs() < 1e-9);
    let csv = s.to_csv();
    assert!(csv.starts_with("param,p1,p2\n"));
    assert_eq!(csv.lines().count(), 1 + DEFAULT_SAMPLES);
}

#[test]
fn alpha_sweep_has_fixed_two_cycle_and_chaos() {
    let r = Range::new(Param::Alpha, 0.1, 0.7, 61).unwrap();
    let s = bifurcation_scan_1d(&sec6(0.5), r, start(), &OrbitOptions::default(), Exec::Auto).unwrap();
    let kinds: Vec<OrbitKind> = s.points.iter().map(|p| p.kind).collect();
    let fixed = kinds.iter().position(|k| *k == OrbitKind::Fixed).unwrap();
    let two = kinds.iter().position(|k| *k == OrbitKind::Periodic(2)).unwrap();
    let chaos = two + kinds[two..].iter().position(|k| *k == OrbitKind::Aperiodic).unwrap();
    assert!(fixed < two && two < chaos);
    assert!(kinds[fixed..two].iter().all(|k| *k == OrbitKind::Fixed));
    assert!(kinds[chaos..].iter().filter(|k| **k == OrbitKind::Aperiodic).count() >= 8);
}

#[test]
fn small_alpha_needs_longer_transient() {
    // Far from the equilibrium the map contracts slowly for small α.
    let opts = OrbitOptions { transient: 50_000, ..OrbitOptions::default() };
    for alpha in [0.1, 0.12, 0.14] {
        assert_eq!(attractor(&sec6(alpha), start(), &opts).unwrap().1.kind, OrbitKind::Fixed);
    }
}

#[test]
fn two_cycle_onset_at_symmetric_threshold() {
    // Decreasing c through √(5/216) at α = 1/2, k = 1.
    let crit = (5.0f64 / 216.0).sqrt();
    let opts = OrbitOptions { transient: 200_000, ..OrbitOptions::default() };
    let base = ModelParams::symmetric(0.5, 0.2, 1.0).unwrap();
    let r = Range::new(Param::C, crit + 4e-4, crit - 4e-4, 41).unwrap();
    let s = bifurcation_scan_1d(&base, r, start(), &opts, Exec::Auto).unwrap();
    let onset = s.points.iter().find(|p| p.kind != OrbitKind::Fixed).unwrap();
    assert_eq!(onset.kind, OrbitKind::Periodic(2));
    assert!((onset.value - crit).abs() < 1e-4, "onset {} vs {crit}", onset.value);
}

#[test]
fn scan_2d_small_speeds_fixed() {
    let base = ModelParams::new(0.5, 0.3, 0.4, 1.0, 1.0).unwrap();
    let x = Range::new(Param::K1, 0.1, 0.2, 2).unwrap();
    let y = Range::new(Param::K2, 0.1, 0.2, 2).unwrap();
    let g = bifurcation_scan_2d(&base, x, y, PriceState::new(0.5, 0.8).unwrap(), &OrbitOptions::default(), Exec::Auto)
        .unwrap();
    assert!(g.codes.iter().all(|&c| c == 1));
    assert!(g.to_csv().starts_with("x,y,class_code\n0.1,0.1,1\n"));
    assert!(bifurcation_scan_2d(&base, x, x, start(), &OrbitOptions::default(), Exec::Auto).is_err());
}

#[test]
fn scan_2d_independent_of_strategy() {
    let base = ModelParams::new(0.5, 0.3, 0.4, 1.0, 1.0).unwrap();
    let x = Range::new(Param::K1, 0.5, 9.5, 12).unwrap();
    let y = Range::new(Param::K2, 0.5, 9.5, 10).unwrap();
    let init = PriceState::new(0.5, 0.8).unwrap();
    let o = OrbitOptions::default();
    let a = bifurcation_scan_2d(&base, x, y, init, &o, Exec::Sequential).unwrap();
    let b = bifurcation_scan_2d(&base, x, y, init, &o, Exec::Parallel).unwrap();
    assert_eq!(a, b);
}

#[test]
fn out_of_domain_range_is_usage_error() {
    let r = Range::new(Param::Alpha, 0.5, 1.2, 3).unwrap();
    let e = bifurcation_scan_1d(&sec6(0.5), r, start(), &OrbitOptions::default(), Exec::Auto).unwrap_err();
    assert!(matches!(e, bertrand_core::Error::Usage(_)));
}

#[test]
fn continuation_landmarks() {
    let r = two_cycle_continuation(&sec6(0.5), 0.54, 0.59, 51).unwrap();
    let branch = r.branch_alpha.unwrap();
    let ns = r.ns_alpha.unwrap();
    assert!((branch - 0.553372).abs() < 1e-3, "branch {branch}");
    assert!((ns - 0.577570).abs() < 1e-3, "ns {ns}");
    // At the branch the equilibrium has an eigenvalue at -1.
    let ev = r.branch_eigenvalues.unwrap();
    assert!(ev.iter().any(|z| (z.re + 1.0).abs() < 1e-4 && z.im.abs() < 1e-12));
    // At NS the second iterate has a complex pair on the unit circle.
    let nev = r.ns_eigenvalues.unwrap();
    assert!(nev[0].im.abs() > 1e-3);
    assert!((nev[0].norm() - 1.0).abs() < 1e-4);
    // Stable between the two landmarks, unstable past NS.
    for c in &r.cycles {
        if c.alpha > branch + 1e-3 && c.alpha < ns - 1e-3 {
            assert!(c.stable(), "alpha {}", c.alpha);
        }
        if c.alpha > ns + 1e-3 {
            assert!(!c.stable(), "alpha {}", c.alpha);
        }
    }
    assert!(r.to_csv().starts_with("alpha,p1_a,p2_a,p1_b,p2_b,stable\n"));
}

#[test]
fn cycle_at_ns_matches_published_point() {
    let c = two_cycle_near_equilibrium(&sec6(0.577570)).unwrap();
    assert!((c.a.p1 - 0.464194).abs() < 1e-4 && (c.a.p2 - 0.607384).abs() < 1e-4);
}

#[test]
fn cycle_at_058() {
    let c = two_cycle_near_equilibrium(&sec6(0.58)).unwrap();
    assert!((c.a.p1 - 0.462052).abs() < 1e-5 && (c.a.p2 - 0.612097).abs() < 1e-5);
    assert!(!c.stable());
}

#[test]
fn continuation_rejects_asymmetric() {
    let p = ModelParams::new(0.5, 0.2, 0.3, 1.0, 1.0).unwrap();
    assert!(two_cycle_continuation(&p, 0.5, 0.6, 5).is_err());
}

#[test]
fn stable_jury_implies_fixed_orbit() {
    for &(alpha, c, k) in &[(0.5, 0.3, 1.0), (0.3, 0.2, 1.0), (1.0 / 3.0, 0.2, 2.0), (0.7, 0.5, 0.5)] {
        let p = ModelParams::symmetric(alpha, c, k).unwrap();
        let e = symmetric_statics(alpha, c).unwrap().price;
        let r = jury(&jacobian(&p, &PriceState::new(e, e).unwrap()).unwrap()).unwrap();
        assert!(r.stable);
        let near = PriceState::new(e * 1.01, e * 0.99).unwrap();
        assert_eq!(attractor(&p, near, &OrbitOptions::default()).unwrap().1.kind, OrbitKind::Fixed);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn two_cycles_verify(alpha in 0.556f64..0.59) {
        let p = sec6(alpha);
        let c = two_cycle_near_equilibrium(&p).unwrap();
        let ffa = step(&p, &step(&p, &c.a).unwrap()).unwrap();
        prop_assert!(ffa.dist(&c.a) <= 1e-10 * (1.0 + c.a.norm()));
        prop_assert!(step(&p, &c.a).unwrap().dist(&c.a) > 1e-6);
    }

    #[test]
    fn deterministic(alpha in 0.2f64..0.7, x in 0.1f64..2.0, y in 0.1f64..2.0) {
        let p = sec6(alpha);
        let s = PriceState::new(x, y).unwrap();
        let a = iterate(&p, s, 300, 0).unwrap();
        let b = iterate(&p, s, 300, 0).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn swap_symmetry(alpha in 0.2f64..0.7, x in 0.1f64..2.0, y in 0.1f64..2.0) {
        let p = sec6(alpha);
        let a = iterate(&p, PriceState::new(x, y).unwrap(), 300, 0).unwrap();
        let b = iterate(&p, PriceState::new(y, x).unwrap(), 300, 0).unwrap();
        prop_assert_eq!(a.escaped_at, b.escaped_at);
        for (s, t) in a.samples.iter().zip(&b.samples) {
            prop_assert_eq!(*s, t.swapped());
        }
    }

    #[test]
    fn diagonal_invariance(alpha in 0.2f64..0.7, x in 0.1f64..2.0) {
        let p = sec6(alpha);
        let t = iterate(&p, PriceState::new(x, x).unwrap(), 300, 0).unwrap();
        for s in &t.samples {
            prop_assert!((s.p1 - s.p2).abs() <= 1e-12 * (1.0 + s.p1.abs()));
        }
    }
}
