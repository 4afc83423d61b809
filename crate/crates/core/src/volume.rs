//! Normalised conformal volume α(R) = (|S^{2m-1}|/|S^{2m}|) ∫_0^R e^{2mu} s^{2m-1} ds.

use serde::Serialize;

use crate::constants::{factorial, sphere_area};
use crate::defaults;
use crate::error::{Error, Result};
use crate::ivp::{Status, Trajectory};
use crate::quad;

/// The radial measure ρ(s) s^{2m-1} ds with ρ = e^{2mu}, and its cumulative
/// mass at a set of knots.
pub struct RadialDensity<'a> {
    m: usize,
    rho: Box<dyn Fn(f64) -> f64 + Send + Sync + 'a>,
    knots: Vec<f64>,
    cum: Vec<f64>,
    pub quadrature_converged: bool,
}

impl std::fmt::Debug for RadialDensity<'_> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("RadialDensity")
            .field("m", &self.m)
            .field("r_end", &self.r_end())
            .field("mass", &self.total_mass())
            .finish()
    }
}

fn piece<F: Fn(f64) -> f64>(w: &F, a: f64, b: f64) -> quad::QuadResult {
    quad::adaptive(w, a, b, 1e-300, defaults::VOLUME_RTOL)
}

impl<'a> RadialDensity<'a> {
    /// ρ = e^{2mu} along a trajectory; knots are the integrator nodes, and
    /// u is taken from the Taylor polynomial below the start radius.
    pub fn from_trajectory(traj: &'a Trajectory) -> Self {
        let m = traj.spec.m();
        let two_m = 2.0 * m as f64;
        let rho = move |s: f64| match traj.u_at(s) {
            Ok(u) => (two_m * u).exp(),
            Err(_) => f64::NAN,
        };
        let mut knots = Vec::with_capacity(traj.nodes.len() + 1);
        if traj.u_coverage_start() == 0.0 {
            knots.push(0.0);
        }
        knots.extend_from_slice(&traj.nodes);
        Self::with_knots(m, Box::new(rho), knots)
    }

    /// A closed-form ρ on [0, r_end], with knots on a geometric grid.
    pub fn from_fn<F>(m: usize, rho: F, r_end: f64) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'a,
    {
        let lo = (r_end * 1e-6).min(1e-3);
        let count = 400;
        let ratio = (r_end / lo).powf(1.0 / count as f64);
        let mut knots = vec![0.0];
        knots.extend((0..=count).map(|k| lo * ratio.powi(k as i32)));
        *knots.last_mut().expect("non-empty") = r_end;
        Self::with_knots(m, Box::new(rho), knots)
    }

    fn with_knots(m: usize, rho: Box<dyn Fn(f64) -> f64 + Send + Sync + 'a>, knots: Vec<f64>) -> Self {
        let n = 2 * m;
        let mut cum = Vec::with_capacity(knots.len());
        cum.push(0.0);
        let mut ok = true;
        {
            let w = |s: f64| rho(s) * s.powi(n as i32 - 1);
            let mut acc = 0.0;
            for k in knots.windows(2) {
                let q = piece(&w, k[0], k[1]);
                ok &= q.converged;
                acc += q.value;
                cum.push(acc);
            }
        }
        RadialDensity { m, rho, knots, cum, quadrature_converged: ok }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn rho(&self, s: f64) -> f64 {
        (self.rho)(s)
    }

    pub fn r_start(&self) -> f64 {
        self.knots[0]
    }

    pub fn r_end(&self) -> f64 {
        *self.knots.last().expect("knots")
    }

    pub fn total_mass(&self) -> f64 {
        *self.cum.last().expect("cum")
    }

    /// ∫_{r_start}^{R} ρ s^{2m-1} ds.
    pub fn mass(&self, big_r: f64) -> Result<f64> {
        let (lo, hi) = (self.r_start(), self.r_end());
        if !(big_r >= lo && big_r <= hi) {
            return Err(Error::OutOfCoverage { r: big_r, lo, hi });
        }
        let i = self.knots.partition_point(|&x| x <= big_r) - 1;
        if self.knots[i] == big_r {
            return Ok(self.cum[i]);
        }
        let n = 2 * self.m;
        let w = |s: f64| self.rho(s) * s.powi(n as i32 - 1);
        Ok(self.cum[i] + piece(&w, self.knots[i], big_r).value)
    }

    /// |S^{2m-1}| / |S^{2m}|.
    pub fn ratio(&self) -> f64 {
        sphere_area(2 * self.m - 1) / sphere_area(2 * self.m)
    }

    /// Cumulative α at the knots.
    pub fn alpha_at_knots(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        let c = self.ratio();
        self.knots.iter().zip(&self.cum).map(move |(&r, &v)| (r, c * v))
    }
}

/// α(R).
pub fn alpha_partial(dens: &RadialDensity, big_r: f64) -> Result<f64> {
    Ok(dens.ratio() * dens.mass(big_r)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TailBound {
    Bound { value: f64 },
    Unknown,
}

/// log Γ(m, x) for integer m ≥ 1, from Γ(m, x) = (m-1)! e^{-x} Σ_{k<m} x^k/k!.
pub fn ln_upper_gamma_int(m: usize, x: f64) -> f64 {
    if x <= 0.0 {
        return factorial(m - 1).ln();
    }
    let terms: Vec<f64> = (0..m).map(|k| k as f64 * x.ln() - factorial(k).ln()).collect();
    let top = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let s: f64 = terms.iter().map(|t| (t - top).exp()).sum();
    factorial(m - 1).ln() - x + top + s.ln()
}

/// (|S^{2m-1}|/|S^{2m}|) e^{2mC} ∫_R^∞ e^{-2mδs²} s^{2m-1} ds, given u ≤ -δs² + C on [R, ∞).
pub fn tail_bound(dens: &RadialDensity, big_r: f64, delta: f64, c: f64) -> TailBound {
    let m = dens.m();
    if !(delta > 0.0) || !c.is_finite() || !big_r.is_finite() || big_r < 0.0 {
        return TailBound::Unknown;
    }
    let a = 2.0 * m as f64 * delta;
    let ln_b = dens.ratio().ln() + 2.0 * m as f64 * c - 2f64.ln() - m as f64 * a.ln()
        + ln_upper_gamma_int(m, a * big_r * big_r);
    let v = ln_b.exp();
    if v.is_finite() {
        TailBound::Bound { value: v }
    } else {
        TailBound::Unknown
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AlphaTotal {
    Interval { lo: f64, hi: f64, r: f64 },
    /// Only the partial volume is known.
    Unknown { lo: f64, r: f64 },
}

impl AlphaTotal {
    pub fn bounds(&self) -> (f64, f64) {
        match *self {
            AlphaTotal::Interval { lo, hi, .. } => (lo, hi),
            AlphaTotal::Unknown { lo, .. } => (lo, f64::INFINITY),
        }
    }

    pub fn width(&self) -> f64 {
        let (lo, hi) = self.bounds();
        hi - lo
    }

    pub fn midpoint(&self) -> f64 {
        let (lo, hi) = self.bounds();
        0.5 * (lo + hi)
    }
}

/// [α(R), α(R) + tail] when (δ, C) is certified on [R, ∞).
pub fn alpha_total(dens: &RadialDensity, big_r: f64, certified: Option<(f64, f64)>) -> Result<AlphaTotal> {
    let lo = alpha_partial(dens, big_r)?;
    let tail = match certified {
        Some((d, c)) => tail_bound(dens, big_r, d, c),
        None => TailBound::Unknown,
    };
    Ok(match tail {
        TailBound::Bound { value } => AlphaTotal::Interval { lo, hi: lo + value, r: big_r },
        TailBound::Unknown => AlphaTotal::Unknown { lo, r: big_r },
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Verdict {
    ConvergedTo { alpha: f64, last_increment: f64 },
    Diverging { alpha_at_end: f64, last_increment: f64, increments_decaying: bool },
}

/// Doubling radii r_end/2^k, k = count-1..0, above `r_min`.
pub fn doubling_grid(r_min: f64, r_end: f64) -> Vec<f64> {
    let mut g = vec![r_end];
    let mut r = r_end;
    while r / 2.0 > r_min && g.len() < 64 {
        r /= 2.0;
        g.push(r);
    }
    g.reverse();
    g
}

/// Radii approaching r_end with halving distance down to `d_min`, for a
/// trajectory stopped near a singularity.
pub fn halving_grid(r_min: f64, r_end: f64, d_min: f64) -> Vec<f64> {
    let mut g = Vec::new();
    let mut d = (r_end - r_min) / 2.0;
    let floor = d_min.max(4.0 * f64::EPSILON * r_end);
    while d > floor && g.len() < 60 {
        g.push(r_end - d);
        d /= 2.0;
    }
    g.push(r_end);
    g
}

/// Cauchy test on α along an increasing grid: converged when the last
/// increment is at most `tol`·α at the end of the grid.
pub fn divergence_check(dens: &RadialDensity, grid: &[f64], tol: f64) -> Result<Verdict> {
    if grid.len() < 2 {
        return Err(Error::EmptyGrid("divergence check needs at least two radii".into()));
    }
    let alphas = grid.iter().map(|&r| alpha_partial(dens, r)).collect::<Result<Vec<_>>>()?;
    let incs: Vec<f64> = alphas.windows(2).map(|w| w[1] - w[0]).collect();
    let end = *alphas.last().expect("non-empty");
    let last = *incs.last().expect("non-empty");
    if last <= tol * end && end.is_finite() {
        return Ok(Verdict::ConvergedTo { alpha: end, last_increment: last });
    }
    let k = incs.len();
    let decaying = k >= 3 && incs[k - 1] < 0.75 * incs[k - 2] && incs[k - 2] < 0.75 * incs[k - 3];
    Ok(Verdict::Diverging { alpha_at_end: end, last_increment: last, increments_decaying: decaying })
}

/// The grid used for a trajectory: doubling up to r_max, or halving towards a blow-up radius.
pub fn default_grid(traj: &Trajectory) -> Vec<f64> {
    let lo = traj.r_start().max(1e-3);
    match traj.status {
        Status::BlowUp { .. } | Status::StepUnderflow { .. } => {
            // u ≈ -log(r* - r) near a blow-up, so 1/u' estimates the distance left
            let du = traj.eval(traj.r_end()).map(|s| s.du()).unwrap_or(0.0);
            let gap = if du > 0.0 { 1.0 / du } else { 0.0 };
            halving_grid(lo, traj.r_end(), gap)
        }
        Status::ReachedRmax => doubling_grid(lo, traj.r_end()),
    }
}
