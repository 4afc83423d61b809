//! Built-in oracle suite: explicit profiles, constants and the kernel.

use serde::Serialize;

use crate::closed_form::{Profile, ProfileLaplacians};
use crate::constants::{factorial, laplacian_coeffs, Constants, Dim};
use crate::ivp::{integrate, IntegratorConfig};
use crate::poly::{rat_to_f64, MultiPoly};
use crate::potential::{sphere_log_mean, LogKernel};
use crate::radial::ShotSpec;

pub const GROUPS: [&str; 5] = ["bubble", "ball", "bj", "gamma", "kernel"];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub group: &'static str,
    pub name: String,
    pub pass: bool,
    /// Measured error or identity value.
    pub value: f64,
    pub tol: f64,
}

#[derive(Debug, Clone, Default)]
pub struct VerifyOptions {
    /// Keep checks whose group or name contains this string.
    pub filter: Option<String>,
    /// Relative perturbation applied to γ_m; a test hook, 0 in normal use.
    pub gamma_perturbation: f64,
}

fn check(group: &'static str, name: String, err: f64, tol: f64) -> CheckResult {
    CheckResult { group, name, pass: err.is_finite() && err <= tol, value: err, tol }
}

fn linspace(a: f64, b: f64, k: usize) -> impl Iterator<Item = f64> {
    (0..k).map(move |i| a + (b - a) * i as f64 / (k - 1) as f64)
}

fn bubble() -> Vec<CheckResult> {
    let mut out = Vec::new();
    for m in 1..=4 {
        let l = ProfileLaplacians::new(Profile::Bubble, m);
        let err = linspace(0.0, 20.0, 401).map(|r| l.residual(r)).fold(0.0, f64::max);
        out.push(check("bubble", format!("bubble-residual-m{m}"), err, 1e-8));
    }
    for m in 1..=3 {
        let dim = Dim::new(m as u32).expect("m ≥ 1");
        let spec = ShotSpec::new(dim, Profile::Bubble.q(m), Profile::Bubble.initial_data(m)).expect("finite data");
        let cfg = IntegratorConfig::default().with_r_max(20.0).with_tol(1e-12, 1e-14);
        let err = match integrate(&spec, &cfg) {
            Ok(t) if t.reached_rmax() => linspace(0.0, 20.0, 401)
                .map(|r| t.u_at(r).map(|u| (u - Profile::Bubble.u(r)).abs()).unwrap_or(f64::INFINITY))
                .fold(0.0, f64::max),
            _ => f64::INFINITY,
        };
        out.push(check("bubble", format!("bubble-shooting-m{m}"), err, 1e-6));
    }
    out
}

fn ball() -> Vec<CheckResult> {
    (1..=4)
        .map(|m| {
            let l = ProfileLaplacians::new(Profile::Ball, m);
            let err = linspace(0.0, 0.9, 181).map(|r| l.residual(r)).fold(0.0, f64::max);
            check("ball", format!("ball-residual-m{m}"), err, 1e-8)
        })
        .collect()
}

/// Δ^j |x|^{2j} is the constant b_j (2j)!, computed in exact arithmetic.
fn bj() -> Vec<CheckResult> {
    let mut out = Vec::new();
    for m in 1..=6usize {
        let dim = Dim::new(m as u32).expect("m ≥ 1");
        let n = dim.n();
        let b = laplacian_coeffs(dim);
        let r2 = MultiPoly::sum_squares(n, 0..n);
        let mut err: f64 = 0.0;
        for j in 1..=m {
            let c = r2.pow(j as u32).iterated_laplacian(j).constant_value().map(|c| rat_to_f64(&c));
            let oracle = c.unwrap_or(f64::NAN) / factorial(2 * j);
            err = err.max(((b[j - 1] - oracle) / oracle).abs());
        }
        out.push(check("bj", format!("bj-monomial-m{m}"), err, 1e-12));
    }
    out
}

fn gamma(perturb: f64) -> Vec<CheckResult> {
    (1..=5)
        .map(|m| {
            let c = Constants::new(Dim::new(m).expect("m ≥ 1"));
            let value = c.mass_identity() / (1.0 + perturb);
            let mut r = check("gamma", format!("gamma-identity-m{m}"), (value - 2.0).abs(), 1e-12);
            r.value = value;
            r
        })
        .collect()
}

fn kernel() -> Vec<CheckResult> {
    let pairs = [(0.3, 1.0), (1.0, 0.3), (1.0, 1.0), (2.5, 0.7), (1e-3, 5.0)];
    let mut out = Vec::new();
    // planar case: the angular mean of log|x - y| is log max(r, s)
    let err = pairs
        .iter()
        .map(|&(r, s)| (sphere_log_mean(2, r, s).unwrap_or(f64::NAN) - f64::max(r, s).ln()).abs())
        .fold(0.0, f64::max);
    out.push(check("kernel", "kernel-planar".into(), err, 1e-10));
    for m in 2..=4 {
        let k = LogKernel::new(Dim::new(m).expect("m ≥ 1"));
        let err = pairs
            .iter()
            .map(|&(r, s)| {
                let series = k.eval(r, s).unwrap_or(f64::NAN);
                (series - sphere_log_mean(2 * m as usize, r, s).unwrap_or(f64::NAN)).abs()
            })
            .fold(0.0, f64::max);
        out.push(check("kernel", format!("kernel-series-m{m}"), err, 1e-10));
    }
    out
}

pub fn run_suite(opts: &VerifyOptions) -> Vec<CheckResult> {
    let keep = |g: &str| opts.filter.as_deref().is_none_or(|f| g.contains(f));
    let mut out = Vec::new();
    for g in GROUPS {
        let results = match g {
            "bubble" if keep(g) => bubble(),
            "ball" if keep(g) => ball(),
            "bj" if keep(g) => bj(),
            "gamma" if keep(g) => gamma(opts.gamma_perturbation),
            "kernel" if keep(g) => kernel(),
            _ => Vec::new(),
        };
        out.extend(results);
    }
    if let Some(f) = &opts.filter {
        if out.is_empty() {
            // the filter may name a single check rather than a group
            let all = run_suite(&VerifyOptions { filter: None, ..opts.clone() });
            out = all.into_iter().filter(|c| c.name.contains(f.as_str())).collect();
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_suite_passes() {
        let res = run_suite(&VerifyOptions::default());
        assert_eq!(res.len(), 7 + 4 + 6 + 5 + 4);
        for r in &res {
            assert!(r.pass, "{r:?}");
        }
    }

    #[test]
    fn perturbed_gamma_fails_identity() {
        let opts = VerifyOptions { filter: Some("gamma".into()), gamma_perturbation: 1e-6 };
        let res = run_suite(&opts);
        assert_eq!(res.len(), 5);
        assert!(res.iter().all(|r| !r.pass && r.group == "gamma"));
    }

    #[test]
    fn filter_by_name() {
        let res = run_suite(&VerifyOptions { filter: Some("kernel-planar".into()), ..Default::default() });
        assert_eq!(res.len(), 1);
        let res = run_suite(&VerifyOptions { filter: Some("kernel".into()), ..Default::default() });
        assert!(res.iter().all(|r| r.group == "kernel"));
        assert_eq!(res.len(), 4);
    }
}
