use qcurv::barriers::odd_sample_spec;
use qcurv::explorer::*;
use qcurv::{Dim, IntegratorConfig, ShotSpec};

fn m2_plan(alpha1: Vec<f64>) -> SweepPlan {
    SweepPlan {
        m: 2,
        q: -6.0,
        alpha: vec![AxisGrid::List(vec![0.0]), AxisGrid::List(alpha1)],
        integrator: IntegratorConfig::default(),
    }
}

fn odd_family() -> Vec<ShotOutcome> {
    let cfg = IntegratorConfig::default().with_r_max(30.0);
    [0.5, 1.0, 2.0]
        .iter()
        .flat_map(|&gap| [-120.0, -60.0].map(move |q| (gap, q)))
        .map(|(gap, q)| {
            let s = odd_sample_spec(Dim::new(3).unwrap(), q, gap).unwrap();
            classify(&s, &cfg).unwrap()
        })
        .collect()
}

fn check_consistency(o: &ShotOutcome) {
    let mid = o.alpha.unwrap().midpoint();
    let slope = o.slope.unwrap().slope;
    assert!((slope - 2.0 * mid).abs() <= 0.1 * 2.0 * mid, "{:?}: slope {slope}, alpha {mid}", o.spec.alpha);
    if o.spec.q < 0.0 {
        assert!(o.decomposition.as_ref().unwrap().leading < 0.0);
    }
}

#[test]
fn serial_and_parallel_sweeps_agree_bitwise() {
    let plan = m2_plan(vec![-2.0, -1.0, -0.5, -0.1, -0.05]);
    let a = sweep(&plan, 1).unwrap();
    let b = sweep(&plan, 4).unwrap();
    let ja = serde_json::to_string(&a).unwrap();
    let jb = serde_json::to_string(&b).unwrap();
    assert_eq!(ja, jb);
    let rows_a: Vec<Vec<String>> = a.iter().map(csv_row).collect();
    let rows_b: Vec<Vec<String>> = b.iter().map(csv_row).collect();
    assert_eq!(rows_a, rows_b);
    // a sub-range equals the matching slice of the full sweep
    let part = sweep_range(&plan, 2..4, 3).unwrap();
    assert_eq!(serde_json::to_string(&part).unwrap(), serde_json::to_string(&a[2..4]).unwrap());
}

#[test]
fn existence_family_is_finite_distinct_and_quadratic() {
    let out = sweep(&m2_plan(vec![-2.0, -1.0, -0.5, -0.1]), 2).unwrap();
    assert!(out.iter().all(|o| o.label == Label::FiniteVolume && o.certified));
    let mids: Vec<f64> = out.iter().map(|o| o.alpha.unwrap().midpoint()).collect();
    for i in 0..mids.len() {
        for j in 0..i {
            assert!((mids[i] - mids[j]).abs() > 1e-6);
        }
    }
    out.iter().for_each(check_consistency);

    let deg = degree_report(&out);
    assert_eq!(deg.histogram.into_iter().collect::<Vec<_>>(), vec![(2, 4)]);
    assert_eq!(deg.top_degree, vec![0, 1, 2, 3]);

    let range = alpha_range(&out, 4);
    assert_eq!(range.kind, "empirical");
    assert_eq!(range.finite, 4);
    assert_eq!(range.histogram.iter().map(|b| b.2).sum::<usize>(), 4);
    assert!(range.min.unwrap() < range.max.unwrap());
}

#[test]
fn odd_family_degrees() {
    let out = odd_family();
    assert!(out.iter().all(|o| o.label == Label::FiniteVolume), "{:?}", out.iter().map(|o| o.label).collect::<Vec<_>>());
    out.iter().for_each(check_consistency);
    let deg = degree_report(&out);
    assert_eq!(deg.histogram.values().sum::<usize>(), out.len());
    assert!(deg.histogram.keys().all(|d| [2, 4].contains(d)), "{:?}", deg.histogram);
}

#[test]
fn uncertified_bubble_is_finite() {
    let s = ShotSpec::new(Dim::new(1).unwrap(), 1.0, vec![std::f64::consts::LN_2]).unwrap();
    let o = classify(&s, &IntegratorConfig::default().with_r_max(2000.0)).unwrap();
    assert_eq!(o.label, Label::FiniteVolume);
    assert!(!o.certified);
    let (lo, hi) = o.alpha_bounds().unwrap();
    assert!(lo <= 1.0 + 1e-9 && (hi - 1.0).abs() < 1e-6, "[{lo}, {hi}]");
    check_consistency(&o);
}

#[test]
fn planar_negative_grid_has_no_finite_volume() {
    let plan = SweepPlan {
        m: 1,
        q: -1.0,
        alpha: vec![AxisGrid::Range { start: -3.0, end: 3.0, count: 5 }],
        integrator: IntegratorConfig::default().with_r_max(1e3),
    };
    let out = sweep(&plan, 2).unwrap();
    assert!(out.iter().all(|o| o.label == Label::InfiniteVolume && o.alpha.is_none()));
    assert!(degree_report(&out).histogram.is_empty());
    assert_eq!(alpha_range(&out, 4).finite, 0);
}

#[test]
fn positive_curvature_volumes_stay_below_sphere() {
    let plan = SweepPlan {
        m: 2,
        q: 6.0,
        alpha: vec![
            AxisGrid::List(vec![std::f64::consts::LN_2, 0.0]),
            AxisGrid::List(vec![-4.0, -2.0]),
        ],
        integrator: IntegratorConfig::default().with_r_max(200.0),
    };
    let range = alpha_range_sweep(&plan, 2, 3).unwrap();
    assert!(range.finite > 0);
    assert!(range.max.unwrap() <= 1.0 + 1e-3, "{range:?}");
    let zero = SweepPlan { q: 0.0, ..plan };
    assert!(alpha_range_sweep(&zero, 1, 3).is_err());
}

#[test]
fn single_point_histogram() {
    let out = sweep(&m2_plan(vec![-1.0]), 1).unwrap();
    let range = alpha_range(&out, 8);
    assert_eq!(range.histogram.len(), 1);
    assert_eq!(range.histogram[0].2, 1);
    assert!(degree_report(&[]).histogram.is_empty());
}
