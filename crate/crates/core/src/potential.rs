//! The logarithmic potential v of the conformal density and the asymptotic
//! diagnostics built on it.
//!
//! v(x) = ((2m-1)!/γ_m) ∫ log(|x-y|/|y|) e^{2mu(y)} dy. For radial densities
//! the angular average of log|x-y| is A(r,s) = log max(r,s) - K(min/max) with
//! a finite even polynomial K, so v reduces to a handful of radial moments.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::constants::{factorial, sphere_area, Constants, Dim};
use crate::defaults;
use crate::error::{Error, Result};
use crate::ivp::Trajectory;
use crate::quad;
use crate::volume::RadialDensity;

fn binom(a: usize, b: usize) -> f64 {
    factorial(a) / (factorial(b) * factorial(a - b))
}

/// Angular mean of log|r e_1 - s ω| over ω ∈ S^{n-1}, n = 2m.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LogKernel {
    pub n: usize,
    /// Coefficients c_j of K(t) = Σ_{j=1}^{m-1} c_j t^{2j}.
    pub k_coeffs: Vec<f64>,
}

impl LogKernel {
    pub fn new(dim: Dim) -> Self {
        let m = dim.m();
        let mid = binom(2 * m - 2, m - 1);
        let k_coeffs = (1..m)
            .map(|j| {
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                let mu = sign * binom(2 * m - 2, m - 1 - j) / mid;
                mu / (2 * j) as f64
            })
            .collect();
        LogKernel { n: dim.n(), k_coeffs }
    }

    /// K(t) for 0 ≤ t ≤ 1.
    pub fn k(&self, t: f64) -> f64 {
        let t2 = t * t;
        self.k_coeffs.iter().rev().fold(0.0, |acc, c| acc * t2 + c) * t2
    }

    /// Σ |c_j|, a bound for |K| on [0, 1] divided by t².
    pub fn k_abs_sum(&self) -> f64 {
        self.k_coeffs.iter().map(|c| c.abs()).sum()
    }

    /// A(r, s) from the closed-form series.
    pub fn eval(&self, r: f64, s: f64) -> Result<f64> {
        if r == 0.0 && s == 0.0 {
            return Err(Error::KernelOrigin);
        }
        let (lo, hi) = if r < s { (r, s) } else { (s, r) };
        Ok(hi.ln() - self.k(lo / hi))
    }
}

/// A(r, s) by graded Gauss–Legendre quadrature over the polar angle.
///
/// Panels [π 2^{-k-1}, π 2^{-k}] resolve the log singularity at θ = 0 when
/// r = s; the innermost piece is integrated with sin θ ≈ θ.
pub fn sphere_log_mean(n: usize, r: f64, s: f64) -> Result<f64> {
    if r < 0.0 || s < 0.0 {
        return Err(Error::NonPositiveRadius(r.min(s)));
    }
    if r == 0.0 && s == 0.0 {
        return Err(Error::KernelOrigin);
    }
    if r == 0.0 {
        return Ok(s.ln());
    }
    if s == 0.0 {
        return Ok(r.ln());
    }
    const LEVELS: i32 = 50;
    let (x, w) = quad::gauss_legendre(24);
    let p = (n - 2) as i32;
    let f = |th: f64| {
        // r² + s² - 2rs cos θ = (r-s)² + 4rs sin²(θ/2), stable near θ = 0
        let h = (th / 2.0).sin();
        let d2 = (r - s) * (r - s) + 4.0 * r * s * h * h;
        0.5 * d2.ln() * th.sin().powi(p)
    };
    let mut total = 0.0;
    let mut hi = std::f64::consts::PI;
    for _ in 0..LEVELS {
        let lo = hi / 2.0;
        let (c, hw) = (0.5 * (lo + hi), 0.5 * (hi - lo));
        total += hw * x.iter().zip(&w).map(|(xi, wi)| wi * f(c + hw * xi)).sum::<f64>();
        hi = lo;
    }
    let eps = hi;
    let d = (r - s).abs();
    let b = (r * s).sqrt();
    total += if n == 2 {
        // ∫_0^ε ½ log(d² + b²θ²) dθ
        let base = 0.5 * eps * (d * d + b * b * eps * eps).ln() - eps;
        if d > 0.0 {
            base + (d / b) * (b * eps / d).atan()
        } else {
            base
        }
    } else {
        0.5 * (d * d + b * b * eps * eps).ln() * eps.powi(p + 1) / (p + 1) as f64
    };
    let weight = sphere_area(n - 1) / sphere_area(n - 2);
    Ok(total / weight)
}

/// Cumulative radial moments of a density, enough to evaluate v anywhere on its support.
pub struct Potential<'d, 'a> {
    dens: &'d RadialDensity<'a>,
    kernel: LogKernel,
    prefactor: f64,
    knots: Vec<f64>,
    /// Per knot: ∫_0^{r} [1, log s, s^{2j}..] ρ s^{n-1} ds.
    below: Vec<Vec<f64>>,
    /// Per knot: ∫_{r}^{R} s^{-2j} ρ s^{n-1} ds.
    above: Vec<Vec<f64>>,
    tail_mass: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PotentialValue {
    pub r: f64,
    pub v: f64,
    /// Bound on the contribution of mass beyond the density's support; None when uncertified.
    pub tail_error: Option<f64>,
}

impl<'d, 'a> Potential<'d, 'a> {
    /// `tail_mass`: a bound on ∫_R^∞ ρ s^{n-1} ds past the support, if certified.
    pub fn new(dens: &'d RadialDensity<'a>, tail_mass: Option<f64>) -> Self {
        let m = dens.m();
        let dim = Dim::new(m as u32).expect("density has m ≥ 1");
        let kernel = LogKernel::new(dim);
        let prefactor = Constants::new(dim).potential_prefactor();
        let knots: Vec<f64> = dens.alpha_at_knots().map(|(r, _)| r).collect();
        let nk = knots.len();
        let below_len = 2 + (m - 1);
        let mut below = vec![vec![0.0; below_len]; nk];
        let mut pieces_above = vec![vec![0.0; m - 1]; nk];
        for i in 1..nk {
            let (a, b) = (knots[i - 1], knots[i]);
            let mut row = below[i - 1].clone();
            let inc = Self::piece_below(dens, m, a, b);
            for (x, d) in row.iter_mut().zip(inc) {
                *x += d;
            }
            below[i] = row;
            pieces_above[i] = Self::piece_above(dens, m, a, b);
        }
        let mut above = vec![vec![0.0; m - 1]; nk];
        for i in (0..nk.saturating_sub(1)).rev() {
            for j in 0..m - 1 {
                above[i][j] = above[i + 1][j] + pieces_above[i + 1][j];
            }
        }
        Potential { dens, kernel, prefactor, knots, below, above, tail_mass }
    }

    fn piece_below(dens: &RadialDensity, m: usize, a: f64, b: f64) -> Vec<f64> {
        let n = 2 * m;
        let w = |s: f64| dens.rho(s) * s.powi(n as i32 - 1);
        let tol = |f: &dyn Fn(f64) -> f64| quad::adaptive(&f, a, b, 1e-300, 1e-12).value;
        let mut out = vec![tol(&w), tol(&|s: f64| if s > 0.0 { s.ln() * w(s) } else { 0.0 })];
        for j in 1..m {
            out.push(tol(&|s: f64| s.powi(2 * j as i32) * w(s)));
        }
        out
    }

    fn piece_above(dens: &RadialDensity, m: usize, a: f64, b: f64) -> Vec<f64> {
        let n = 2 * m;
        (1..m)
            .map(|j| {
                let f = |s: f64| dens.rho(s) * s.powi(n as i32 - 1 - 2 * j as i32);
                quad::adaptive(&f, a, b, 1e-300, 1e-12).value
            })
            .collect()
    }

    pub fn kernel(&self) -> &LogKernel {
        &self.kernel
    }

    pub fn prefactor(&self) -> f64 {
        self.prefactor
    }

    pub fn r_end(&self) -> f64 {
        *self.knots.last().expect("knots")
    }

    /// v(r) for 0 ≤ r ≤ support end.
    pub fn v(&self, r: f64) -> Result<PotentialValue> {
        let (lo, hi) = (0.0, self.r_end());
        if !(r >= lo && r <= hi) {
            return Err(Error::OutOfCoverage { r, lo, hi });
        }
        let tail_error = self
            .tail_mass
            .map(|mt| self.prefactor * self.kernel.k_abs_sum() * (r / hi).powi(2) * mt);
        if r == 0.0 {
            return Ok(PotentialValue { r, v: 0.0, tail_error: Some(0.0) });
        }
        let m = self.dens.m();
        let i = self.knots.partition_point(|&x| x <= r) - 1;
        let mut below = self.below[i].clone();
        let mut above = self.above[i].clone();
        if self.knots[i] < r {
            let inc = Self::piece_below(self.dens, m, self.knots[i], r);
            for (x, d) in below.iter_mut().zip(inc) {
                *x += d;
            }
            let dec = Self::piece_above(self.dens, m, self.knots[i], r);
            for (x, d) in above.iter_mut().zip(dec) {
                *x -= d;
            }
        }
        // ∫_0^r (log(r/s) - K(s/r)) dμ - ∫_r^R K(r/s) dμ
        let mut acc = r.ln() * below[0] - below[1];
        for (j, c) in self.kernel.k_coeffs.iter().enumerate() {
            let e = 2 * (j + 1) as i32;
            acc -= c * (below[2 + j] / r.powi(e) + r.powi(e) * above[j]);
        }
        Ok(PotentialValue { r, v: self.prefactor * acc, tail_error })
    }

    /// v on a geometric grid of `count` radii in [r1, r2].
    pub fn sample_geometric(&self, r1: f64, r2: f64, count: usize) -> Result<Vec<(f64, f64)>> {
        geometric_grid(r1, r2, count)
            .into_iter()
            .map(|r| Ok((r, self.v(r)?.v)))
            .collect()
    }
}

/// One-shot v(r); builds the moment tables each call.
pub fn potential_v(dens: &RadialDensity, r: f64) -> Result<PotentialValue> {
    Potential::new(dens, None).v(r)
}

pub fn geometric_grid(r1: f64, r2: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![r2];
    }
    let q = (r2 / r1).ln() / (count - 1) as f64;
    (0..count)
        .map(|k| if k + 1 == count { r2 } else { r1 * (q * k as f64).exp() })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SlopeEstimate {
    pub slope: f64,
    pub intercept: f64,
    /// 95% Student-t half-width of the slope.
    pub half_width: f64,
    pub used: usize,
}

/// Least-squares slope of v against log r on the outer half of a geometric grid.
pub fn slope_estimate(samples: &[(f64, f64)]) -> Result<SlopeEstimate> {
    if samples.len() < 8 {
        return Err(Error::TooFewSamples { needed: 8, got: samples.len() });
    }
    let ratios: Vec<f64> = samples.windows(2).map(|w| w[1].0 / w[0].0).collect();
    let q0 = ratios[0];
    if !(q0 > 1.0) || ratios.iter().any(|q| (q - q0).abs() > 1e-6 * q0) {
        return Err(Error::NotGeometric);
    }
    let outer = &samples[samples.len() / 2..];
    let k = outer.len() as f64;
    let xs: Vec<f64> = outer.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = outer.iter().map(|p| p.1).collect();
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum();
    let dof = k - 2.0;
    let se = (sse / dof / sxx).sqrt();
    let t = StudentsT::new(0.0, 1.0, dof).expect("dof > 0").inverse_cdf(0.975);
    Ok(SlopeEstimate { slope, intercept, half_width: t * se, used: outer.len() })
}

/// max over samples of v(r) - 2α log r: the constant C in v ≤ 2α log r + C.
pub fn log_upper_constant(samples: &[(f64, f64)], alpha: f64) -> f64 {
    samples
        .iter()
        .map(|&(r, v)| v - 2.0 * alpha * r.ln())
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Smallest sampled radius from which v(r) ≥ (2α - ε) log r holds at every later sample.
pub fn log_lower_onset(samples: &[(f64, f64)], alpha: f64, eps: f64) -> Option<f64> {
    let mut onset = None;
    for &(r, v) in samples.iter().rev() {
        if v >= (2.0 * alpha - eps) * r.ln() {
            onset = Some(r);
        } else {
            break;
        }
    }
    onset
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Decomposition {
    /// p(r) = Σ_k p_k r^{2k}.
    pub coeffs: Vec<f64>,
    /// max |residual| / max |u - s_Q v| on the window.
    pub residual: f64,
    pub window: (f64, f64),
    /// Even degree of the fitted polynomial (0 for a constant).
    pub degree: usize,
    /// Coefficient of the top retained power.
    pub leading: f64,
    /// v enters as u - s_Q v with s_Q = -Q/(2m-1)!.
    pub s_q: f64,
    pub condition: f64,
    /// Coefficient of r^{2m} when one extra power is fitted.
    pub overfit: Option<f64>,
}

impl Decomposition {
    pub fn eval(&self, r: f64) -> f64 {
        let t = r * r;
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * t + c)
    }

    /// Δ^ℓ p(r) on R^n.
    pub fn laplacian(&self, n: usize, l: usize, r: f64) -> f64 {
        let mut p = crate::radial::EvenPoly::new(self.coeffs.clone());
        for _ in 0..l {
            p = p.laplacian(n);
        }
        p.eval(r)
    }
}

const MAX_CONDITION: f64 = 1e12;

/// Fit u - s_Q v = Σ_{k<m} p_k r^{2k} on the sampled window (and one extra
/// power when `overfit` is set).
pub fn decompose_p(traj: &Trajectory, v_samples: &[(f64, f64)], overfit: bool) -> Result<Decomposition> {
    let m = traj.spec.m();
    if v_samples.len() < m + 2 {
        return Err(Error::TooFewSamples { needed: m + 2, got: v_samples.len() });
    }
    let s_q = -traj.spec.q / factorial(2 * m - 1);
    let r1 = v_samples.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    let r2 = v_samples.iter().map(|p| p.0).fold(0.0, f64::max);
    let mut target = Vec::with_capacity(v_samples.len());
    for &(r, v) in v_samples {
        target.push(traj.u_at(r)? - s_q * v);
    }
    let terms = if overfit { m + 1 } else { m };
    let rows = v_samples.len();
    let a = DMatrix::from_fn(rows, terms, |i, k| (v_samples[i].0 / r2).powi(2 * k as i32));
    let b = DVector::from_vec(target.clone());
    let svd = a.clone().svd(true, true);
    let sv = &svd.singular_values;
    let smax = sv.iter().copied().fold(0.0, f64::max);
    let smin = sv.iter().copied().fold(f64::INFINITY, f64::min);
    let condition = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    if !(condition <= MAX_CONDITION) {
        return Err(Error::IllConditioned(condition));
    }
    let x = svd.solve(&b, 0.0).map_err(|e| Error::Precondition(e.to_string()))?;
    let fit = &a * &x;
    let scale = target.iter().map(|t| t.abs()).fold(0.0, f64::max);
    let resid = fit
        .iter()
        .zip(&target)
        .map(|(f, t)| (f - t).abs())
        .fold(0.0, f64::max);
    let residual = if scale > 0.0 { resid / scale } else { resid };
    let scaled: Vec<f64> = x.iter().copied().collect();
    let coeffs: Vec<f64> = scaled
        .iter()
        .enumerate()
        .map(|(k, c)| c / r2.powi(2 * k as i32))
        .collect();
    let significant = |k: usize| scaled[k].abs() > 1e-6 * scale.max(f64::MIN_POSITIVE);
    let top = (0..m).rev().find(|&k| significant(k)).unwrap_or(0);
    let (base, overfit_coeff) = if overfit {
        (coeffs[..m].to_vec(), Some(coeffs[m]))
    } else {
        (coeffs, None)
    };
    Ok(Decomposition {
        leading: base[top],
        coeffs: base,
        residual,
        window: (r1, r2),
        degree: 2 * top,
        s_q,
        condition,
        overfit: overfit_coeff,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LevelStat {
    pub level: usize,
    pub mean: f64,
    /// max - min over the window.
    pub drift: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LaplacianLimits {
    pub window: (f64, f64),
    pub levels: Vec<LevelStat>,
    /// Largest level with |mean| > 10·drift, and its limit.
    pub j: Option<usize>,
    pub a: Option<f64>,
}

impl LaplacianLimits {
    pub fn inconclusive(&self) -> bool {
        self.j.is_none()
    }
}

fn level_stats<F: Fn(usize, f64) -> Result<f64>>(
    levels: std::ops::RangeInclusive<usize>,
    r1: f64,
    r2: f64,
    f: F,
) -> Result<Vec<LevelStat>> {
    let grid = geometric_grid(r1, r2, defaults::LIMIT_SAMPLES);
    levels
        .map(|l| {
            let vals = grid.iter().map(|&r| f(l, r)).collect::<Result<Vec<_>>>()?;
            let mean = vals.iter().sum::<f64>() / vals.len() as f64;
            let max = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let min = vals.iter().copied().fold(f64::INFINITY, f64::min);
            Ok(LevelStat { level: l, mean, drift: max - min })
        })
        .collect()
}

/// Limits of Δ^ℓ u, 1 ≤ ℓ ≤ m-1, over the outer decade of the run.
pub fn laplacian_limits(traj: &Trajectory) -> Result<LaplacianLimits> {
    if !traj.reached_rmax() {
        return Err(Error::Precondition("laplacian limits need a run that reached r_max".into()));
    }
    let m = traj.spec.m();
    let r2 = traj.r_end();
    let r1 = (r2 / 10.0).max(traj.r_start());
    let levels = if m >= 2 {
        level_stats(1..=m - 1, r1, r2, |l, r| traj.component(r, 2 * l))?
    } else {
        Vec::new()
    };
    let pick = levels.iter().rev().find(|s| s.mean.abs() > 10.0 * s.drift);
    Ok(LaplacianLimits {
        window: (r1, r2),
        j: pick.map(|s| s.level),
        a: pick.map(|s| s.mean),
        levels,
    })
}

/// Δ^ℓ v = (Δ^ℓ u - Δ^ℓ p)/s_Q over the outer decade, ℓ = 1..m-1.
pub fn v_laplacian_limits(traj: &Trajectory, dec: &Decomposition) -> Result<Vec<LevelStat>> {
    let m = traj.spec.m();
    if m < 2 || dec.s_q == 0.0 {
        return Ok(Vec::new());
    }
    let n = traj.spec.n();
    let r2 = traj.r_end();
    let r1 = (r2 / 10.0).max(traj.r_start());
    level_stats(1..=m - 1, r1, r2, |l, r| {
        Ok((traj.component(r, 2 * l)? - dec.laplacian(n, l, r)) / dec.s_q)
    })
}

/// Scalar curvature of e^{2u}|dx|² on R^n: e^{-2u}(-2(n-1)Δu - (n-1)(n-2)u'²).
pub fn scalar_curvature(traj: &Trajectory, r: f64) -> Result<f64> {
    let n = traj.spec.n() as f64;
    let st = traj.eval(r)?;
    let (u, du) = (st.y[0], st.y[1]);
    let lap = if traj.spec.m() == 1 {
        st.laplacian(&traj.spec, 1)
    } else {
        st.y[2]
    };
    Ok((-2.0 * u).exp() * (-2.0 * (n - 1.0) * lap - (n - 1.0) * (n - 2.0) * du * du))
}

/// First node radius where the running minimum of R drops below `level`.
pub fn curvature_crossing(traj: &Trajectory, level: f64) -> Result<Option<f64>> {
    for &r in &traj.nodes {
        if scalar_curvature(traj, r)? < level {
            return Ok(Some(r));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::Dim;

    #[test]
    fn kernel_series_small_dimensions() {
        let k2 = LogKernel::new(Dim::new(1).unwrap());
        assert!(k2.k_coeffs.is_empty());
        assert_eq!(k2.eval(2.0, 3.0).unwrap(), 3f64.ln());
        let k4 = LogKernel::new(Dim::new(2).unwrap());
        // n = 4: A = log r + t²/4
        assert!((k4.eval(2.0, 1.0).unwrap() - (2f64.ln() + 0.0625)).abs() < 1e-15);
        assert_eq!(k4.eval(0.0, 5.0).unwrap(), 5f64.ln());
        assert_eq!(k4.eval(0.0, 0.0), Err(Error::KernelOrigin));
    }

    #[test]
    fn quadrature_matches_series() {
        for m in 1..=4u32 {
            let d = Dim::new(m).unwrap();
            let k = LogKernel::new(d);
            for (r, s) in [(1.0, 0.3), (0.5, 2.0), (3.0, 2.9), (1.0, 1.0 + 1e-9), (7.0, 0.01)] {
                let q = sphere_log_mean(d.n(), r, s).unwrap();
                let e = k.eval(r, s).unwrap();
                assert!((q - e).abs() < 1e-9 * e.abs().max(1.0), "m={m} r={r} s={s}: {q} vs {e}");
            }
            let q = sphere_log_mean(d.n(), 2.0, 2.0).unwrap();
            assert!((q - k.eval(2.0, 2.0).unwrap()).abs() < 1e-7);
        }
    }

    #[test]
    fn kernel_symmetric_and_origin() {
        assert_eq!(sphere_log_mean(6, 0.0, 3.0).unwrap(), 3f64.ln());
        let a = sphere_log_mean(6, 1.3, 0.4).unwrap();
        let b = sphere_log_mean(6, 0.4, 1.3).unwrap();
        assert!((a - b).abs() < 1e-13);
        assert_eq!(sphere_log_mean(4, 0.0, 0.0), Err(Error::KernelOrigin));
    }

    #[test]
    fn potential_vanishes_at_origin_and_for_zero_density() {
        let d = RadialDensity::from_fn(2, |_| 0.0, 10.0);
        let p = Potential::new(&d, Some(0.0));
        assert_eq!(p.v(0.0).unwrap().v, 0.0);
        assert_eq!(p.v(3.0).unwrap().v, 0.0);
        let d = RadialDensity::from_fn(2, |s: f64| (-s * s).exp(), 10.0);
        assert_eq!(potential_v(&d, 0.0).unwrap().v, 0.0);
    }

    #[test]
    fn potential_matches_direct_kernel_quadrature() {
        let d = RadialDensity::from_fn(2, |s: f64| (-s * s).exp(), 12.0);
        let p = Potential::new(&d, None);
        let k = LogKernel::new(Dim::new(2).unwrap());
        for r in [0.5, 1.0, 3.0] {
            let f = |s: f64| {
                if s == 0.0 {
                    0.0
                } else {
                    (k.eval(r, s).unwrap() - s.ln()) * (-s * s).exp() * s.powi(3)
                }
            };
            let direct = (quad::adaptive(&f, 0.0, r, 1e-15, 1e-13).value
                + quad::adaptive(&f, r, 12.0, 1e-15, 1e-13).value)
                * p.prefactor();
            let got = p.v(r).unwrap().v;
            assert!((got - direct).abs() < 1e-10, "r={r}: {got} vs {direct}");
        }
    }

    #[test]
    fn slope_of_exact_log() {
        let s: Vec<(f64, f64)> = geometric_grid(1.0, 100.0, 16)
            .into_iter()
            .map(|r| (r, 1.4 * r.ln() + 2.0))
            .collect();
        let e = slope_estimate(&s).unwrap();
        assert!((e.slope - 1.4).abs() < 1e-12);
        assert!(e.half_width < 1e-10);
        let zero: Vec<(f64, f64)> = s.iter().map(|p| (p.0, 0.0)).collect();
        assert_eq!(slope_estimate(&zero).unwrap().slope, 0.0);
        assert!(matches!(slope_estimate(&s[..7]), Err(Error::TooFewSamples { .. })));
        let mut bad = s.clone();
        bad[3].0 *= 1.01;
        assert_eq!(slope_estimate(&bad), Err(Error::NotGeometric));
    }

    #[test]
    fn log_bound_helpers() {
        let s: Vec<(f64, f64)> = geometric_grid(1.0, 100.0, 10).into_iter().map(|r| (r, r.ln() + 0.5)).collect();
        assert!((log_upper_constant(&s, 0.5) - 0.5).abs() < 1e-14);
        assert_eq!(log_lower_onset(&s, 0.5, 0.1), Some(1.0));
    }
}
