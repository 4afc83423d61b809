use qcurv::barriers::*;
use qcurv::closed_form::Profile;
use qcurv::ivp::integrate_from;
use qcurv::volume::*;
use qcurv::{integrate, Dim, IntegratorConfig, ShotSpec, Status};

fn spec(m: u32, q: f64, alpha: &[f64]) -> ShotSpec {
    ShotSpec::new(Dim::new(m).unwrap(), q, alpha.to_vec()).unwrap()
}

fn cfg(r_max: f64) -> IntegratorConfig {
    IntegratorConfig::default().with_r_max(r_max)
}

#[test]
fn halving_tolerances_is_self_consistent() {
    let s = spec(2, -6.0, &[0.0, -1.0]);
    let coarse = integrate(&s, &cfg(50.0)).unwrap();
    let fine = integrate(&s, &cfg(50.0).with_tol(5e-11, 5e-13)).unwrap();
    let (a, b) = (coarse.u_at(50.0).unwrap(), fine.u_at(50.0).unwrap());
    // the tolerances are relative to |u| ≈ 1250 out there
    assert!((a - b).abs() <= 10.0 * (1e-10 * a.abs() + 1e-12), "{a} {b}");
}

#[test]
fn restart_matches_single_pass() {
    let s = spec(1, 1.0, &Profile::Bubble.initial_data(1));
    let tight = cfg(20.0).with_tol(1e-12, 1e-14);
    let whole = integrate(&s, &tight).unwrap();
    let first = integrate(&s, &IntegratorConfig { r_max: 10.0, ..tight }).unwrap();
    let mid = first.eval(10.0).unwrap();
    let second = integrate_from(&s, mid, &tight).unwrap();
    for r in [10.5, 15.0, 20.0] {
        let d = (whole.u_at(r).unwrap() - second.u_at(r).unwrap()).abs();
        assert!(d < 1e-8, "r = {r}: {d}");
    }
}

#[test]
fn bubble_dense_output() {
    let s = spec(1, 1.0, &[std::f64::consts::LN_2]);
    let t = integrate(&s, &cfg(20.0)).unwrap();
    assert_eq!(t.status, Status::ReachedRmax);
    let u10 = t.eval(10.0).unwrap().u();
    assert!((u10 - (2.0f64 / 101.0).ln()).abs() < 1e-6);
    assert!(t.eval(t.nodes[0] * 0.5).is_err());
    assert!(t.eval(20.5).is_err());
}

#[test]
fn negative_curvature_even_m_reaches_rmax() {
    for (m, q, alpha) in [
        (2, -6.0, vec![0.0, -0.1]),
        (2, -6.0, vec![0.0, -3.0]),
        (2, -1.0, vec![0.0, -1.0]),
        (4, -5040.0, vec![0.0, -1.0, -0.5, -2.0]),
        (4, -5040.0, vec![0.0, -2.0, 0.0, 0.0]),
    ] {
        let t = integrate(&spec(m, q, &alpha), &cfg(50.0)).unwrap();
        assert_eq!(t.status, Status::ReachedRmax, "m = {m}, alpha = {alpha:?}");
    }
}

#[test]
fn zero_curvature_zero_data_is_flat() {
    for m in 1..=4 {
        let t = integrate(&spec(m, 0.0, &vec![0.0; m as usize]), &cfg(10.0)).unwrap();
        assert_eq!(t.status, Status::ReachedRmax);
        assert!(t.states.iter().all(|y| y.iter().all(|&v| v == 0.0)));
    }
}

#[test]
fn even_sandwich_holds_for_sample_data() {
    for a1 in [-0.5, -1.0, -2.0] {
        let s = spec(2, -6.0, &[0.0, a1]);
        let t = integrate(&s, &cfg(50.0)).unwrap();
        let (up, lo) = build_pair(&s).unwrap();
        let rep = verify_sandwich(&t, &up, &lo, 1e-8);
        assert!(rep.pass, "{a1}: {rep:?}");
    }
    let s = spec(4, -5040.0, &[0.0, -1.0, -0.5, -2.0]);
    let t = integrate(&s, &cfg(50.0)).unwrap();
    let (up, lo) = build_pair(&s).unwrap();
    assert!(verify_sandwich(&t, &up, &lo, 1e-8).pass);
}

#[test]
fn tightened_upper_barrier_fails_and_loosened_margin_is_exact() {
    let s = spec(2, -6.0, &[0.0, -1.0]);
    let t = integrate(&s, &cfg(50.0)).unwrap();
    let (_, lo) = build_pair(&s).unwrap();

    // w_+ = α_1 r² sits below u near the origin, where u ≈ α_1 r²/2
    let tight = Barrier::from_parts(BarrierKind::UpperEven, 4, vec![0.0, -1.0], 0.0);
    assert!(!verify_sandwich(&t, &tight, &lo, 1e-8).pass);

    let loose = Barrier::from_parts(BarrierKind::UpperEven, 4, vec![0.0, -0.25], 0.0);
    let rep = verify_sandwich(&t, &loose, &lo, 1e-8);
    let direct = t
        .nodes
        .iter()
        .zip(&t.states)
        .map(|(&r, y)| -0.25 * r * r - y[0])
        .fold(f64::INFINITY, f64::min);
    assert_eq!(rep.upper_margin, direct);
    assert!(rep.pass);
}

#[test]
fn upper_gap_has_nonnegative_ball_integrals() {
    for (m, q, alpha) in [(2, -6.0, vec![0.0, -1.0]), (4, -5040.0, vec![0.0, -1.0, -0.5, -2.0])] {
        let s = spec(m, q, &alpha);
        let t = integrate(&s, &cfg(20.0)).unwrap();
        let up = build_upper_even(&s).unwrap();
        for j in 1..m as usize {
            for big_r in [0.5, 1.0, 2.0, 5.0, 10.0, 20.0] {
                let v = ball_integral_of_gap(&t, &up, j, big_r).unwrap();
                assert!(v >= -1e-8, "m = {m}, j = {j}, R = {big_r}: {v}");
            }
        }
    }
}

#[test]
fn odd_sample_spec_stays_between_barriers() {
    let s = odd_sample_spec(Dim::new(3).unwrap(), -120.0, 1.0).unwrap();
    let t = integrate(&s, &cfg(30.0)).unwrap();
    assert_eq!(t.status, Status::ReachedRmax);
    let (up, lo) = build_odd_pair(&s).unwrap();
    assert!(up.params.certificate.unwrap().holds());
    assert!(verify_sandwich(&t, &up, &lo, 1e-8).pass);
}

#[test]
fn certified_volume_interval_is_tight_and_shrinks() {
    let s = spec(2, -6.0, &[0.0, -1.0]);
    let t = integrate(&s, &cfg(50.0)).unwrap();
    let up = build_upper_even(&s).unwrap();
    let dens = RadialDensity::from_trajectory(&t);
    let at = |r: f64| alpha_total(&dens, r, up.quadratic_bound(r)).unwrap();
    assert!(at(50.0).width() <= 1e-10);

    let widths: Vec<f64> = [1.0, 2.0, 3.0, 4.0].iter().map(|&r| at(r).width()).collect();
    for w in widths.windows(2) {
        assert!(w[1] < 0.5 * w[0], "{widths:?}");
    }
    // the interval always contains the converged value
    let end = at(50.0).bounds().0;
    for r in [1.0, 2.0, 3.0] {
        let (lo, hi) = at(r).bounds();
        assert!(lo <= end && end <= hi);
    }
}

#[test]
fn partial_volume_is_monotone() {
    let t = integrate(&spec(2, -6.0, &[0.0, -0.5]), &cfg(50.0)).unwrap();
    let dens = RadialDensity::from_trajectory(&t);
    let a: Vec<f64> = dens.alpha_at_knots().map(|(_, a)| a).collect();
    assert!(a.windows(2).all(|w| w[1] >= w[0]));
    let mut prev = 0.0;
    for k in 1..=100 {
        let v = alpha_partial(&dens, 0.5 * k as f64).unwrap();
        assert!(v >= prev);
        prev = v;
    }
}

#[test]
fn planar_negative_curvature_diverges() {
    for a0 in [-4.0, 0.0] {
        let t = integrate(&spec(1, -1.0, &[a0]), &cfg(1e3)).unwrap();
        let dens = RadialDensity::from_trajectory(&t);
        let v = divergence_check(&dens, &default_grid(&t), 1e-6).unwrap();
        assert!(
            matches!(v, Verdict::Diverging { increments_decaying: false, .. }),
            "{a0}: {:?} {v:?}",
            t.status
        );
    }
}

#[test]
fn bubble_volume_converges_to_one() {
    let s = spec(1, 1.0, &[std::f64::consts::LN_2]);
    let t = integrate(&s, &cfg(2000.0)).unwrap();
    let dens = RadialDensity::from_trajectory(&t);
    match divergence_check(&dens, &default_grid(&t), 1e-6).unwrap() {
        Verdict::ConvergedTo { alpha, .. } => assert!((alpha - 1.0).abs() < 1e-6, "{alpha}"),
        v => panic!("{v:?}"),
    }
}
