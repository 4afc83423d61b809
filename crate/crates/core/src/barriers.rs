//! Explicit super- and sub-solutions for Q < 0 and the sandwich check
//! w_- ≤ u ≤ w_+ along a computed trajectory.
//!
//! Every barrier has the form P(r²) + L (log(1 + r²) - log 2) with P a
//! polynomial, so its iterated Laplacians are available in closed form.

use serde::Serialize;

use crate::closed_form::log_laplacians;
use crate::constants::{factorial, Dim};
use crate::defaults;
use crate::error::{Error, Result};
use crate::ivp::Trajectory;
use crate::radial::{EvenPoly, ShotSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BarrierKind {
    UpperEven,
    LowerEven,
    UpperOdd,
    LowerOdd,
}

/// Dense check of a feasibility inequality on r ∈ {0} ∪ log grid [1e-6, r_max].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridCertificate {
    pub points: usize,
    pub r_max: f64,
    /// Smallest value of (log lhs - log rhs) seen on the grid.
    pub min_log_margin: f64,
    /// Whether the inequality is monotone in the right direction past r_max.
    pub tail_ok: bool,
}

impl GridCertificate {
    pub fn holds(&self) -> bool {
        self.min_log_margin >= 0.0 && self.tail_ok
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Default)]
pub struct BarrierParams {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha1: Option<f64>,
    /// Weight of the log term.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    /// Smallest admissible A before the safety factor.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a_min: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    /// Largest admissible β from the feasibility inequality.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta_max: Option<f64>,
    /// Coefficients β_i of r^{2i}.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub beta_i: Vec<f64>,
    /// |Q| / (2m-1)!.
    pub kappa: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<GridCertificate>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Barrier {
    pub kind: BarrierKind,
    pub n: usize,
    /// Polynomial part in t = r².
    pub poly: Vec<f64>,
    /// Coefficient L of log(1 + r²) - log 2.
    pub log_coeff: f64,
    pub params: BarrierParams,
}

impl Barrier {
    pub fn from_parts(kind: BarrierKind, n: usize, poly: Vec<f64>, log_coeff: f64) -> Self {
        Barrier { kind, n, poly, log_coeff, params: BarrierParams::default() }
    }

    pub fn eval(&self, r: f64) -> f64 {
        let t = r * r;
        let p = EvenPoly::new(self.poly.clone()).eval(r);
        if self.log_coeff == 0.0 {
            p
        } else {
            p + self.log_coeff * (t.ln_1p() - std::f64::consts::LN_2)
        }
    }

    /// Δ^j w(r).
    pub fn laplacian(&self, j: usize, r: f64) -> f64 {
        if j == 0 {
            return self.eval(r);
        }
        let mut p = EvenPoly::new(self.poly.clone());
        for _ in 0..j {
            p = p.laplacian(self.n);
        }
        let mut v = p.eval(r);
        if self.log_coeff != 0.0 {
            v += self.log_coeff * log_laplacians(self.n, 1, j)[j - 1].eval(r * r);
        }
        v
    }

    /// (δ, C) with w(s) ≤ -δ s² + C for all s ≥ R; upper barriers only.
    pub fn quadratic_bound(&self, big_r: f64) -> Option<(f64, f64)> {
        match self.kind {
            BarrierKind::UpperEven => {
                let a1 = self.params.alpha1?;
                Some((-a1 / 2.0, 0.0))
            }
            BarrierKind::UpperOdd => {
                // β - t + log((1+t)/2) = -t/2 + [β - t/2 + log((1+t)/2)],
                // and the bracket decreases for t ≥ 1.
                let beta = self.params.beta?;
                let t = big_r.max(1.0).powi(2);
                Some((0.5, beta - t / 2.0 + ((1.0 + t) / 2.0).ln()))
            }
            _ => None,
        }
    }
}

fn kappa(spec: &ShotSpec) -> f64 {
    spec.q.abs() / factorial(2 * spec.m() - 1)
}

fn log_grid(points: usize, r_max: f64) -> impl Iterator<Item = f64> {
    let lo: f64 = 1e-6;
    let step = (r_max / lo).ln() / (points - 2) as f64;
    std::iter::once(0.0).chain((0..points - 1).map(move |k| lo * (step * k as f64).exp()))
}

/// Maximum of a concave function on [a, b] by golden-section search.
pub fn golden_max<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a) > tol * (1.0 + a.abs() + b.abs()) {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    let mut best = (x, f(x));
    for e in [a, b] {
        let fe = f(e);
        if fe > best.1 {
            best = (e, fe);
        }
    }
    best
}

fn check_even(spec: &ShotSpec) -> Result<()> {
    let bad = |s: String| Err(Error::BarrierPrecondition(s));
    if spec.m() % 2 != 0 {
        return bad(format!("m = {} is odd", spec.m()));
    }
    if !(spec.q < 0.0) {
        return bad("Q must be negative".into());
    }
    if spec.alpha[0] != 0.0 {
        return bad("alpha_0 must be 0".into());
    }
    if !(spec.alpha[1] < 0.0) {
        return bad("alpha_1 must be negative".into());
    }
    if spec.alpha.iter().skip(2).any(|&a| a > 0.0) {
        return bad("alpha_j must be non-positive".into());
    }
    Ok(())
}

/// w_+(r) = (α_1/2) r².
pub fn build_upper_even(spec: &ShotSpec) -> Result<Barrier> {
    check_even(spec)?;
    let a1 = spec.alpha[1];
    let mut b = Barrier::from_parts(BarrierKind::UpperEven, spec.n(), vec![0.0, a1 / 2.0], 0.0);
    b.params.alpha1 = Some(a1);
    b.params.kappa = kappa(spec);
    Ok(b)
}

/// w_-(r) = Σ β_i r^{2i} + A (log(1 + r²) - log 2).
///
/// A makes A (2/(1+r²))^{2m} ≥ κ e^{mα_1 r²}; the β_i match the Taylor
/// data of u, so Δ^j (u - w_-)(0) = 0 for j < m.
pub fn build_lower_even(spec: &ShotSpec) -> Result<Barrier> {
    check_even(spec)?;
    let m = spec.m();
    let mf = m as f64;
    let a1 = spec.alpha[1];
    let k = kappa(spec);
    let t_max = defaults::BARRIER_GRID_MAX.powi(2);
    let phi = |t: f64| mf * a1 * t + 2.0 * mf * t.ln_1p();
    let (_, phi_max) = golden_max(phi, 0.0, t_max, 1e-14);
    let a_min = k * (phi_max - 2.0 * mf * 2f64.ln()).exp();
    let a = defaults::BARRIER_SAFETY * a_min;

    let mut beta = Vec::with_capacity(m);
    beta.push(spec.alpha[0] + a * 2f64.ln());
    for j in 1..m {
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        beta.push(spec.alpha[j] / factorial(2 * j) + a * sign / j as f64);
    }

    let mut min_log_margin = f64::INFINITY;
    for r in log_grid(defaults::BARRIER_GRID_POINTS, defaults::BARRIER_GRID_MAX) {
        let t = r * r;
        let lhs = a.ln() + 2.0 * mf * (2f64.ln() - t.ln_1p());
        let rhs = k.ln() + mf * a1 * t;
        min_log_margin = min_log_margin.min(lhs - rhs);
    }
    // past the grid the ratio e^{mα_1 t}(1+t)^{2m} decreases when mα_1 + 2m/(1+t) < 0
    let tail_ok = mf * a1 + 2.0 * mf / (1.0 + t_max) < 0.0;

    let mut b = Barrier::from_parts(BarrierKind::LowerEven, spec.n(), beta.clone(), a);
    b.params = BarrierParams {
        alpha1: Some(a1),
        a: Some(a),
        a_min: Some(a_min),
        beta_i: beta,
        kappa: k,
        certificate: Some(GridCertificate {
            points: defaults::BARRIER_GRID_POINTS,
            r_max: defaults::BARRIER_GRID_MAX,
            min_log_margin,
            tail_ok,
        }),
        ..Default::default()
    };
    Ok(b)
}

/// Largest β with κ^{1/(2m)} e^{β - t} ≤ (2/(1+t))² for all t ≥ 0.
fn odd_beta_max(m: usize, k: f64) -> f64 {
    let (_, neg_min) = golden_max(
        |t| -(t + 2.0 * 2f64.ln() - 2.0 * t.ln_1p()),
        0.0,
        defaults::BARRIER_GRID_MAX.powi(2),
        1e-14,
    );
    -neg_min - k.ln() / (2 * m) as f64
}

/// u^{(2i)}(0) of the odd upper barrier β - r² + log((1+r²)/2), i = 0..m-1.
pub fn odd_upper_derivs(m: usize, beta: f64) -> Vec<f64> {
    (0..m)
        .map(|i| match i {
            0 => beta - 2f64.ln(),
            1 => 0.0,
            _ => {
                let sign = if i % 2 == 1 { 1.0 } else { -1.0 };
                sign / i as f64 * factorial(2 * i)
            }
        })
        .collect()
}

/// β chosen for the odd construction: negative and feasible.
pub fn odd_beta(m: usize, q: f64) -> f64 {
    let k = q.abs() / factorial(2 * m - 1);
    odd_beta_max(m, k).min(0.0) - 0.5
}

/// Initial data strictly below the odd upper barrier's Taylor data, by `gap`.
pub fn odd_sample_spec(dim: Dim, q: f64, gap: f64) -> Result<ShotSpec> {
    let beta = odd_beta(dim.m(), q);
    let alpha = odd_upper_derivs(dim.m(), beta).into_iter().map(|a| a - gap).collect();
    ShotSpec::new(dim, q, alpha)
}

/// w_+ = β - r² + log((1+r²)/2) and w_- = Σ α_i r^{2i}/(2i)!.
pub fn build_odd_pair(spec: &ShotSpec) -> Result<(Barrier, Barrier)> {
    let m = spec.m();
    let bad = |s: String| Err(Error::BarrierPrecondition(s));
    if m % 2 == 0 || m < 3 {
        return bad(format!("odd construction needs odd m ≥ 3, got {m}"));
    }
    if !(spec.q < 0.0) {
        return bad("Q must be negative".into());
    }
    let k = kappa(spec);
    let beta_max = odd_beta_max(m, k);
    let beta = odd_beta(m, spec.q);
    let upper_d = odd_upper_derivs(m, beta);
    for (i, (&a, &w)) in spec.alpha.iter().zip(&upper_d).enumerate() {
        if !(a < w) {
            return bad(format!("alpha_{i} = {a} must be below the barrier value {w}"));
        }
    }

    let mf = m as f64;
    let mut min_log_margin = f64::INFINITY;
    for r in log_grid(defaults::BARRIER_GRID_POINTS, defaults::BARRIER_GRID_MAX) {
        let t = r * r;
        let lhs = 2.0 * (2f64.ln() - t.ln_1p());
        let rhs = k.ln() / (2.0 * mf) + beta - t;
        min_log_margin = min_log_margin.min(lhs - rhs);
    }
    // d/dt of (lhs - rhs) = 1 - 2/(1+t) > 0 past t = 1
    let tail_ok = defaults::BARRIER_GRID_MAX.powi(2) >= 1.0;
    let cert = GridCertificate {
        points: defaults::BARRIER_GRID_POINTS,
        r_max: defaults::BARRIER_GRID_MAX,
        min_log_margin,
        tail_ok,
    };

    let mut upper = Barrier::from_parts(BarrierKind::UpperOdd, spec.n(), vec![beta, -1.0], 1.0);
    upper.params = BarrierParams {
        beta: Some(beta),
        beta_max: Some(beta_max),
        kappa: k,
        certificate: Some(cert),
        ..Default::default()
    };

    let beta_i: Vec<f64> = spec
        .alpha
        .iter()
        .enumerate()
        .map(|(i, &a)| a / factorial(2 * i))
        .collect();
    let mut lower = Barrier::from_parts(BarrierKind::LowerOdd, spec.n(), beta_i.clone(), 0.0);
    lower.params = BarrierParams { beta_i, kappa: k, ..Default::default() };
    Ok((upper, lower))
}

/// Upper and lower barrier for any spec the constructions cover.
pub fn build_pair(spec: &ShotSpec) -> Result<(Barrier, Barrier)> {
    if spec.m() % 2 == 0 {
        Ok((build_upper_even(spec)?, build_lower_even(spec)?))
    } else {
        build_odd_pair(spec)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SandwichReport {
    /// min (w_+ - u) over the nodes and where it occurs.
    pub upper_margin: f64,
    pub upper_at: f64,
    /// min (u - w_-) over the nodes and where it occurs.
    pub lower_margin: f64,
    pub lower_at: f64,
    pub tol: f64,
    pub nodes: usize,
    pub pass: bool,
}

pub fn verify_sandwich(traj: &Trajectory, upper: &Barrier, lower: &Barrier, tol: f64) -> SandwichReport {
    let mut up = (f64::INFINITY, f64::NAN);
    let mut lo = (f64::INFINITY, f64::NAN);
    for (&r, y) in traj.nodes.iter().zip(&traj.states) {
        let du = upper.eval(r) - y[0];
        let dl = y[0] - lower.eval(r);
        if du < up.0 || du.is_nan() {
            up = (du, r);
        }
        if dl < lo.0 || dl.is_nan() {
            lo = (dl, r);
        }
    }
    let pass = up.0 >= -tol && lo.0 >= -tol;
    SandwichReport {
        upper_margin: up.0,
        upper_at: up.1,
        lower_margin: lo.0,
        lower_at: lo.1,
        tol,
        nodes: traj.nodes.len(),
        pass,
    }
}

/// ∫_{B_R} Δ^j (w_+ - u) dx by radial quadrature along the trajectory, 1 ≤ j ≤ m-1.
pub fn ball_integral_of_gap(traj: &Trajectory, upper: &Barrier, j: usize, big_r: f64) -> Result<f64> {
    let m = traj.spec.m();
    if j == 0 || j >= m {
        return Err(Error::Precondition(format!("j must lie in 1..{m}")));
    }
    let n = traj.spec.n();
    let surf = crate::constants::sphere_area(n - 1);
    let r0 = traj.r_start();
    if big_r > traj.r_end() {
        return Err(Error::OutOfCoverage { r: big_r, lo: r0, hi: traj.r_end() });
    }
    let f = |s: f64| {
        let y = traj.eval(s).expect("inside coverage").y;
        (upper.laplacian(j, s) - y[2 * j]) * s.powi(n as i32 - 1)
    };
    // the piece below the start radius is O(r0^n) and taken as constant-density
    let inner = {
        let y = &traj.states[0];
        (upper.laplacian(j, r0) - y[2 * j]) * r0.powi(n as i32) / n as f64
    };
    let q = crate::quad::adaptive(&f, r0, big_r, 1e-14, 1e-10);
    Ok(surf * (inner + q.value))
}
