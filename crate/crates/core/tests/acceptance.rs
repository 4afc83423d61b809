//! One PASS/FAIL line per acceptance criterion.
//!
//! Two criteria are red by construction (2 and 7, see the notes on each).
//! For those the run instead asserts the analytic reason for the failure,
//! so the target still fails if the numbers drift away from the explanation.

use std::f64::consts::{LN_2, PI};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use qcurv::barriers::{build_odd_pair, build_pair, odd_sample_spec, verify_sandwich};
use qcurv::closed_form::{Profile, ProfileLaplacians};
use qcurv::constants::{factorial, laplacian_coeffs, sphere_area, Constants};
use qcurv::explorer::{classify, classify_full, Classified, Label};
use qcurv::poly::*;
use qcurv::potential::{curvature_crossing, scalar_curvature};
use qcurv::{integrate, Dim, IntegratorConfig, ShotSpec, Status};

mod common;

const BUBBLE_U_TOL: f64 = 1e-6;
const BUBBLE_ALPHA_TOL: f64 = 1e-6;
const BALL_RESIDUAL_TOL: f64 = 1e-8;
const BJ_TOL: f64 = 1e-12;
const GAMMA_TOL: f64 = 1e-12;
const SANDWICH_TOL: f64 = 1e-8;
const ALPHA_WIDTH_TOL: f64 = 1e-8;
const ALPHA_SEPARATION: f64 = 1e-6;
const DECOMP_RESIDUAL_TOL: f64 = 1e-3;
const OVERFIT_TOL: f64 = 1e-6;
const DRIFT_FRACTION: f64 = 1e-3;
const SLOPE_FRACTION: f64 = 0.1;
const CURVATURE_LEVEL: f64 = -1e3;
const EXAMPLE_VOLUME_RTOL: f64 = 1e-6;
const ALPHA_ANCHOR_SLACK: f64 = 1e-3;
const QUICK: Duration = Duration::from_secs(10);
const MINUTE: Duration = Duration::from_secs(60);

struct Line {
    id: u32,
    pass: bool,
    detail: String,
    /// For a red criterion: whether its explanation checks out.
    explained: Option<bool>,
}

fn spec(m: u32, q: f64, alpha: Vec<f64>) -> ShotSpec {
    ShotSpec::new(Dim::new(m).unwrap(), q, alpha).unwrap()
}

fn linspace(a: f64, b: f64, k: usize) -> impl Iterator<Item = f64> {
    (0..k).map(move |i| a + (b - a) * i as f64 / (k - 1) as f64)
}

fn c1_bubble() -> Line {
    let t0 = Instant::now();
    let mut worst_u: f64 = 0.0;
    let mut worst_a: f64 = 0.0;
    for (m, r_max) in [(1u32, 2000.0), (2, 200.0), (3, 50.0)] {
        let mu = m as usize;
        let s = spec(m, factorial(2 * mu - 1), Profile::Bubble.initial_data(mu));
        let cfg = IntegratorConfig::default().with_r_max(r_max).with_tol(1e-12, 1e-14);
        let o = classify_full(&s, &cfg).unwrap();
        let err = linspace(0.0, 20.0, 2001)
            .map(|r| (o.trajectory.u_at(r).unwrap() - (2.0 / (1.0 + r * r)).ln()).abs())
            .fold(0.0, f64::max);
        let (lo, hi) = o.outcome.alpha_bounds().unwrap_or((f64::NAN, f64::NAN));
        worst_u = worst_u.max(err);
        worst_a = worst_a.max((lo - 1.0).abs()).max((hi - 1.0).abs());
    }
    let dt = t0.elapsed();
    Line {
        id: 1,
        pass: worst_u <= BUBBLE_U_TOL && worst_a <= BUBBLE_ALPHA_TOL && dt < QUICK,
        detail: format!("max |u - bubble| = {worst_u:.2e}, max |alpha - 1| = {worst_a:.2e}, {dt:.2?}"),
        explained: None,
    }
}

/// Literal form: (-Δ)^m w + (2m-1)! e^{2mw} = 0. The ball solves it with
/// right-hand side (-1)^m (2m-1)! e^{2mw}, so for even m the literal
/// relative residual is exactly 2.
fn c2_ball() -> Line {
    let mut literal: f64 = 0.0;
    let mut corrected: f64 = 0.0;
    let mut even_gap: f64 = 0.0;
    for m in 1..=4usize {
        let l = ProfileLaplacians::new(Profile::Ball, m);
        let f = factorial(2 * m - 1);
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        for r in linspace(0.0, 0.9, 181) {
            let src = f * (2.0 * m as f64 * Profile::Ball.u(r)).exp();
            let lhs = sign * l.value(m, r);
            let lit = ((lhs + src) / src).abs();
            literal = literal.max(lit);
            corrected = corrected.max(((lhs - sign * src) / src).abs());
            if m % 2 == 0 {
                even_gap = even_gap.max((lit - 2.0).abs());
            }
        }
    }
    // independent numerical route: shoot from w's Taylor data with both signs
    let mut shoot_ok = 0.0f64;
    let mut shoot_literal = f64::INFINITY;
    for m in [2usize, 4] {
        let data = Profile::Ball.initial_data(m);
        let f = factorial(2 * m - 1);
        let cfg = IntegratorConfig::default().with_r_max(0.9).with_tol(1e-12, 1e-14);
        let dev = |q: f64| {
            let t = integrate(&spec(m as u32, q, data.clone()), &cfg).unwrap();
            linspace(0.0, 0.9, 91)
                .map(|r| (t.u_at(r).unwrap() - Profile::Ball.u(r)).abs())
                .fold(0.0, f64::max)
        };
        shoot_ok = shoot_ok.max(dev(f));
        shoot_literal = shoot_literal.min(dev(-f));
    }
    let pass = literal <= BALL_RESIDUAL_TOL;
    let explained = corrected <= BALL_RESIDUAL_TOL && even_gap <= 1e-8 && shoot_ok <= 1e-6 && shoot_literal > 1e-3;
    Line {
        id: 2,
        pass,
        detail: format!(
            "literal residual {literal:.2e} (even m: |res - 2| = {even_gap:.1e}); \
             with Q = (-1)^m (2m-1)!: {corrected:.2e}, shooting {shoot_ok:.1e} vs {shoot_literal:.1e} for the literal sign"
        ),
        explained: Some(explained),
    }
}

fn c3_constants() -> Line {
    let mut bj: f64 = 0.0;
    for m in 1..=6usize {
        let n = 2 * m;
        let b = laplacian_coeffs(Dim::new(m as u32).unwrap());
        let r2 = MultiPoly::sum_squares(n, 0..n);
        for j in 1..=m {
            let c = rat_to_f64(&r2.pow(j as u32).iterated_laplacian(j).constant_value().unwrap());
            let oracle = c / factorial(2 * j);
            bj = bj.max(((b[j - 1] - oracle) / oracle).abs());
        }
    }
    let mut gamma: f64 = 0.0;
    for m in 1..=5u32 {
        let c = Constants::new(Dim::new(m).unwrap());
        let mu = m as usize;
        // γ_m rebuilt from its product formula, apart from Constants
        let g = sphere_area(2 * mu - 1) * 4f64.powi(m as i32 - 1) * factorial(mu - 1).powi(2);
        gamma = gamma
            .max((factorial(2 * mu - 1) * sphere_area(2 * mu) / g - 2.0).abs())
            .max((c.mass_identity() - 2.0).abs());
    }
    Line {
        id: 3,
        pass: bj <= BJ_TOL && gamma <= GAMMA_TOL,
        detail: format!("b_j rel err {bj:.2e} (m <= 6), |identity - 2| = {gamma:.2e} (m <= 5)"),
        explained: None,
    }
}

fn c4_planar() -> Line {
    let t0 = Instant::now();
    let cfg = IntegratorConfig::default().with_r_max(1e3);
    let grid = [-8.0, -6.0, -4.0, -2.0, -1.0, 0.0, 1.0, 2.0, 3.0];
    let labels: Vec<Label> = grid.iter().map(|&a| classify(&spec(1, -1.0, vec![a]), &cfg).unwrap().label).collect();
    let dt = t0.elapsed();
    let infinite = labels.iter().filter(|&&l| l == Label::InfiniteVolume).count();
    let finite = labels.iter().filter(|&&l| l == Label::FiniteVolume).count();
    Line {
        id: 4,
        pass: infinite == grid.len() && dt < MINUTE,
        detail: format!("{infinite}/9 InfiniteVolume, {finite} FiniteVolume, {dt:.2?}"),
        explained: None,
    }
}

fn existence_runs() -> Vec<Classified> {
    [-2.0, -1.0, -0.5]
        .iter()
        .map(|&a1| classify_full(&spec(2, -6.0, vec![0.0, a1]), &IntegratorConfig::default()).unwrap())
        .collect()
}

fn c5_existence(runs: &[Classified]) -> Line {
    let mut ok = true;
    let mut margin = f64::INFINITY;
    let mut width: f64 = 0.0;
    let mut alphas = Vec::new();
    for c in runs {
        let o = &c.outcome;
        ok &= o.status == Status::ReachedRmax && o.r_end == 50.0;
        let (up, lo) = build_pair(&o.spec).unwrap();
        let sw = verify_sandwich(&c.trajectory, &up, &lo, SANDWICH_TOL);
        ok &= sw.pass;
        margin = margin.min(sw.upper_margin).min(sw.lower_margin);
        let (a, b) = o.alpha_bounds().unwrap_or((f64::NAN, f64::INFINITY));
        width = width.max(b - a);
        alphas.push(0.5 * (a + b));
    }
    let sep = (0..3)
        .flat_map(|i| (0..i).map(move |j| (i, j)))
        .map(|(i, j)| (alphas[i] - alphas[j]).abs())
        .fold(f64::INFINITY, f64::min);
    Line {
        id: 5,
        pass: ok && margin >= -SANDWICH_TOL && width <= ALPHA_WIDTH_TOL && sep > ALPHA_SEPARATION,
        detail: format!(
            "alpha = {:.6}, {:.6}, {:.6}; min margin {margin:.2e}, max width {width:.1e}, min separation {sep:.2e}",
            alphas[0], alphas[1], alphas[2]
        ),
        explained: None,
    }
}

fn c6_decomposition(runs: &[Classified]) -> Line {
    let mut ok = true;
    let mut resid: f64 = 0.0;
    let mut over: f64 = 0.0;
    let mut leads = Vec::new();
    for c in runs {
        let Some(d) = &c.outcome.decomposition else {
            ok = false;
            continue;
        };
        ok &= d.degree == 2 && d.leading < 0.0 && (d.window.0 - 5.0).abs() < 1e-12 && d.window.1 == 50.0;
        resid = resid.max(d.residual);
        over = over.max(d.overfit.map_or(f64::INFINITY, f64::abs));
        leads.push(d.leading);
    }
    Line {
        id: 6,
        pass: ok && resid <= DECOMP_RESIDUAL_TOL && over <= OVERFIT_TOL,
        detail: format!("degree 2, p_1 = {leads:.4?}, residual {resid:.1e}, over-fit r^4 coefficient {over:.1e}"),
        explained: None,
    }
}

/// Δu - Δp = s_Q Δv, and Δv ≈ 4α/r² on R^4, so over [5, 50] the drift of Δu
/// is about 4α(1/25 - 1/2500) whatever the tolerances. That is below
/// 1e-3·|a| only when |a| is large, which here means α_1 = -2.
fn c7_asymptotics(runs: &[Classified]) -> Line {
    let mut pass = true;
    let mut explained = true;
    let mut parts = Vec::new();
    for c in runs {
        let o = &c.outcome;
        let lim = o.limits.as_ref().unwrap();
        let lvl = lim.levels[0];
        let (a, drift) = (lvl.mean, lvl.drift);
        let alpha = o.alpha.unwrap().midpoint();
        let slope = o.slope.unwrap().slope;
        let slope_ok = (slope - 2.0 * alpha).abs() <= SLOPE_FRACTION * 2.0 * alpha;
        let cross = curvature_crossing(&c.trajectory, CURVATURE_LEVEL).unwrap();
        let cross_ok = cross.is_some_and(|r| r < 50.0 && scalar_curvature(&c.trajectory, r).unwrap() < CURVATURE_LEVEL);
        let drift_ok = lim.j == Some(1) && a < 0.0 && drift <= DRIFT_FRACTION * a.abs();
        pass &= drift_ok && slope_ok && cross_ok;

        let (r1, r2) = lim.window;
        let d = o.decomposition.as_ref().unwrap();
        let predicted = d.s_q * 4.0 * alpha * (1.0 / (r1 * r1) - 1.0 / (r2 * r2));
        explained &= lim.j == Some(1) && a < 0.0 && slope_ok && cross_ok && (drift - predicted).abs() <= 0.1 * predicted;
        parts.push(format!(
            "a1={}: a={a:.4} drift/|a|={:.1e} (4a/r^2 predicts {:.1e}) slope/2alpha={:.3} R<-1e3 at r={:.2}",
            o.spec.alpha[1],
            drift / a.abs(),
            predicted / a.abs(),
            slope / (2.0 * alpha),
            cross.unwrap_or(f64::NAN)
        ));
    }
    Line { id: 7, pass, detail: parts.join("; "), explained: Some(explained) }
}

fn c8_bounded(runs: &[Classified]) -> Line {
    let mut ok = true;
    let mut parts = Vec::new();
    for c in runs {
        let (u, r) = c.outcome.max_u;
        ok &= u.is_finite() && r <= 1e-2 && u <= c.outcome.spec.alpha[0] + 1e-12;
        parts.push(format!("sup u = {u:.3e} at r = {r:.1e}"));
    }
    Line { id: 8, pass: ok, detail: parts.join(", "), explained: None }
}

fn c9_odd() -> Line {
    let t0 = Instant::now();
    let s = odd_sample_spec(Dim::new(3).unwrap(), -120.0, 1.0).unwrap();
    let c = classify_full(&s, &IntegratorConfig::default().with_r_max(30.0)).unwrap();
    let (up, lo) = build_odd_pair(&s).unwrap();
    let sw = verify_sandwich(&c.trajectory, &up, &lo, SANDWICH_TOL);
    let dt = t0.elapsed();
    let (a, b) = c.outcome.alpha_bounds().unwrap_or((f64::NAN, f64::INFINITY));
    let pass = c.outcome.status == Status::ReachedRmax && sw.pass && b.is_finite() && c.outcome.certified && dt < MINUTE;
    Line {
        id: 9,
        pass,
        detail: format!("alpha = {:.4?}, alpha in [{a:.6e}, {b:.6e}], margins {:.2e}/{:.2e}, {dt:.2?}", s.alpha, sw.upper_margin, sw.lower_margin),
        explained: None,
    }
}

fn c10_q_zero() -> Line {
    let mut bad = 0;
    let mut solutions = 0;
    let mut degenerate = 0;
    for p in common::random_suite() {
        let probe = integrability_probe(&p, None).unwrap();
        match classify_q0_m2(&p).unwrap() {
            Q0Class::Solution => {
                solutions += 1;
                let neg = asymptotic_laplacian(&p).is_some_and(|(_, a)| a < rat(0, 1));
                if !matches!(probe, Integrability::Integrable { .. }) || !neg {
                    bad += 1;
                }
            }
            Q0Class::NotSolution { reason: NotSolutionReason::Degenerate } => {
                degenerate += 1;
                if !matches!(probe, Integrability::NotIntegrable { .. }) {
                    bad += 1;
                }
            }
            Q0Class::NotSolution { .. } => {}
        }
    }
    let ex = non_coercive_example(3).unwrap();
    let harmonic = ex.poly.iterated_laplacian(3).is_zero();
    // ∫(1+t²)^{-5/2} dt = 4/3 and ∫_{R^5} e^{-6|y|²} dy = (π/6)^{5/2}
    let exact = 4.0 / 3.0 * (PI / 6.0).powf(2.5);
    let rel = match integrability_probe(&ex.poly, Some(&ex.witness)).unwrap() {
        Integrability::Integrable { value, .. } => (value - exact).abs() / exact,
        _ => f64::INFINITY,
    };
    Line {
        id: 10,
        pass: bad == 0 && harmonic && rel <= EXAMPLE_VOLUME_RTOL,
        detail: format!(
            "50 polynomials ({solutions} Solution, {degenerate} degenerate), {bad} inconsistent; \
             Δ^3 u = 0: {harmonic}; volume rel err {rel:.1e}"
        ),
        explained: None,
    }
}

fn c11_anchor() -> Line {
    let cfg = IntegratorConfig::default().with_r_max(200.0);
    let mut finite = 0;
    let mut max_alpha = f64::NEG_INFINITY;
    for a0 in [LN_2 - 0.5, LN_2, LN_2 + 0.5] {
        for a1 in [-4.0, -3.0, -2.0, -1.5] {
            let o = classify(&spec(2, 6.0, vec![a0, a1]), &cfg).unwrap();
            if o.label == Label::FiniteVolume {
                finite += 1;
                max_alpha = max_alpha.max(o.alpha_bounds().unwrap().1);
            }
        }
    }
    Line {
        id: 11,
        pass: finite > 0 && max_alpha <= 1.0 + ALPHA_ANCHOR_SLACK,
        detail: format!("{finite}/12 finite-volume runs, largest alpha upper bound {max_alpha:.10}"),
        explained: None,
    }
}

fn main() -> ExitCode {
    let runs = existence_runs();
    let lines = vec![
        c1_bubble(),
        c2_ball(),
        c3_constants(),
        c4_planar(),
        c5_existence(&runs),
        c6_decomposition(&runs),
        c7_asymptotics(&runs),
        c8_bounded(&runs),
        c9_odd(),
        c10_q_zero(),
        c11_anchor(),
    ];
    let mut ok = true;
    for l in &lines {
        let tag = if l.pass { "PASS" } else { "FAIL" };
        let note = match (l.pass, l.explained) {
            (false, Some(true)) => " [known, explained]",
            (false, Some(false)) => " [explanation does not hold]",
            _ => "",
        };
        println!("{tag} criterion {:>2}: {}{note}", l.id, l.detail);
        ok &= l.pass || l.explained == Some(true);
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
