//! Sign of the leading form, integrability of e^{n p}, and classification of
//! polynomial solutions of Δ^m u = 0 with finite volume.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use super::fpoly::{complement_basis, FPoly};
use super::{rat_to_f64, MultiPoly};
use crate::defaults;
use crate::error::{Error, Result};
use crate::quad::{adaptive, adaptive_real_line, gauss_legendre};

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind")]
pub enum LeadingForm {
    NegativeDefinite,
    /// The sampled maximum of the leading form is within tolerance of 0.
    HasZeroSet { witness: Vec<f64>, exact: bool },
    PositiveSomewhere { witness: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LeadingFormReport {
    pub verdict: LeadingForm,
    pub degree: usize,
    /// Largest value of a_d found on the unit sphere (sampled, then refined).
    pub max_value: f64,
    pub argmax: Vec<f64>,
    /// Directions with |a_d| ≤ tol; exact coordinate-axis zeros first.
    pub near_zero: Vec<Vec<f64>>,
    pub samples: usize,
    pub tol: f64,
    pub sampled: bool,
}

fn unit(n: usize, i: usize, sign: f64) -> Vec<f64> {
    let mut e = vec![0.0; n];
    e[i] = sign;
    e
}

fn normalize(v: &mut [f64]) {
    let s = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if s > 0.0 {
        v.iter_mut().for_each(|x| *x /= s);
    }
}

fn random_direction(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    loop {
        let mut v: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
        let s = v.iter().map(|x| x * x).sum::<f64>();
        if s > 1e-12 {
            normalize(&mut v);
            return v;
        }
    }
}

/// Random-perturbation ascent of `f` on the unit sphere.
fn refine_max(f: &FPoly, start: &[f64], rng: &mut ChaCha8Rng) -> (Vec<f64>, f64) {
    let n = start.len();
    let mut x = start.to_vec();
    let mut fx = f.eval(&x);
    let mut sigma = 0.1;
    let mut fails = 0;
    while sigma > 1e-9 {
        let g = random_direction(rng, n);
        let mut y: Vec<f64> = x.iter().zip(&g).map(|(a, b)| a + sigma * b).collect();
        normalize(&mut y);
        let fy = f.eval(&y);
        if fy > fx {
            x = y;
            fx = fy;
            fails = 0;
        } else {
            fails += 1;
            if fails >= 12 {
                sigma *= 0.5;
                fails = 0;
            }
        }
    }
    (x, fx)
}

/// Leading-form sign analysis with the default sample size and a fixed seed.
pub fn leading_form_sign(p: &MultiPoly) -> Result<LeadingFormReport> {
    leading_form_sign_with(p, defaults::LEADING_FORM_SAMPLES_PER_VAR, 0)
}

pub fn leading_form_sign_with(p: &MultiPoly, samples_per_var: usize, seed: u64) -> Result<LeadingFormReport> {
    let d = p.degree().unwrap_or(0);
    if d < 1 {
        return Err(Error::Precondition("leading form needs deg p ≥ 1".into()));
    }
    let n = p.n();
    let lead = p.leading_form();
    let f = FPoly::from_exact(&lead);
    let tol = defaults::LEADING_FORM_TOL * lead.coeff_abs_sum();

    // coordinate axes, exactly
    let mut near_zero = Vec::new();
    let mut best: Option<(Vec<f64>, f64)> = None;
    for i in 0..n {
        let mut e = vec![0u32; n];
        e[i] = d as u32;
        let c = lead.coeff(&e);
        for sign in [1.0, -1.0] {
            let v = if d % 2 == 1 && sign < 0.0 { -c.clone() } else { c.clone() };
            if v.is_zero() {
                near_zero.push(unit(n, i, sign));
            }
            let fv = rat_to_f64(&v);
            if best.as_ref().is_none_or(|b| fv > b.1) {
                best = Some((unit(n, i, sign), fv));
            }
        }
    }
    let exact_zero = !near_zero.is_empty();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let count = samples_per_var * n;
    let pts: Vec<Vec<f64>> = (0..count).map(|_| random_direction(&mut rng, n)).collect();
    let vals: Vec<f64> = pts.par_iter().map(|x| f.eval(x)).collect();
    let mut order: Vec<usize> = (0..count).collect();
    order.sort_by(|&a, &b| vals[b].total_cmp(&vals[a]));

    let mut starts: Vec<Vec<f64>> = order.iter().take(8).map(|&k| pts[k].clone()).collect();
    if d == 2 {
        let (_, _, h) = f.quadratic_parts();
        let eig = nalgebra::SymmetricEigen::new(h);
        let k = eig.eigenvalues.imax();
        starts.insert(0, eig.eigenvectors.column(k).iter().copied().collect());
    }
    for s in &starts {
        let (x, fx) = refine_max(&f, s, &mut rng);
        if fx.abs() <= tol {
            near_zero.push(x.clone());
        }
        if best.as_ref().is_none_or(|b| fx > b.1) {
            best = Some((x, fx));
        }
    }
    let (argmax, max_value) = best.expect("at least one axis");
    let verdict = if max_value > tol {
        LeadingForm::PositiveSomewhere { witness: argmax.clone() }
    } else if max_value < -tol {
        LeadingForm::NegativeDefinite
    } else {
        LeadingForm::HasZeroSet { witness: near_zero.first().cloned().unwrap_or(argmax.clone()), exact: exact_zero }
    };
    Ok(LeadingFormReport { verdict, degree: d, max_value, argmax, near_zero, samples: count, tol, sampled: true })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum NotSolutionReason {
    /// Degree outside 2 ≤ deg ≤ 2m - 2.
    DegreeBound { degree: Option<usize> },
    /// Quadratic form negative semidefinite but singular.
    Degenerate,
    /// Quadratic form has a positive eigenvalue.
    PositiveDirection,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum Q0Class {
    Solution,
    NotSolution { reason: NotSolutionReason },
}

/// Coefficients c_0..c_n of det(λI - A), by Faddeev–LeVerrier.
pub fn char_poly(a: &[Vec<BigRational>]) -> Vec<BigRational> {
    let n = a.len();
    let zero = || vec![vec![BigRational::zero(); n]; n];
    let mut c = vec![BigRational::zero(); n + 1];
    c[n] = BigRational::one();
    let mut m = zero();
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I
        let mut next = zero();
        for i in 0..n {
            for j in 0..n {
                let mut s = BigRational::zero();
                for l in 0..n {
                    s += &a[i][l] * &m[l][j];
                }
                if i == j {
                    s += &c[n - k + 1];
                }
                next[i][j] = s;
            }
        }
        m = next;
        let mut tr = BigRational::zero();
        for i in 0..n {
            for l in 0..n {
                tr += &a[i][l] * &m[l][i];
            }
        }
        c[n - k] = -tr / BigRational::from_integer(BigInt::from(k));
    }
    c
}

/// Exact Hessian of the quadratic part.
pub fn hessian(p: &MultiPoly) -> Vec<Vec<BigRational>> {
    let n = p.n();
    let mut h = vec![vec![BigRational::zero(); n]; n];
    for (e, c) in p.homogeneous_part(2).terms() {
        let idx: Vec<usize> = e
            .iter()
            .enumerate()
            .flat_map(|(i, &a)| std::iter::repeat_n(i, a as usize))
            .collect();
        let (i, j) = (idx[0], idx[1]);
        if i == j {
            h[i][i] += c * BigRational::from_integer(BigInt::from(2));
        } else {
            h[i][j] += c;
            h[j][i] += c;
        }
    }
    h
}

/// Four variables, degree at most two: a solution iff the quadratic form is
/// negative definite, decided on the characteristic polynomial of the Hessian.
pub fn classify_q0_m2(p: &MultiPoly) -> Result<Q0Class> {
    if p.n() != 4 {
        return Err(Error::VariableCount { expected: 4, got: p.n() });
    }
    let deg = p.degree();
    if !matches!(deg, Some(2)) {
        return Ok(Q0Class::NotSolution { reason: NotSolutionReason::DegreeBound { degree: deg } });
    }
    // eigenvalues all negative ⇔ every coefficient of det(λI - H) positive
    let c = char_poly(&hessian(p));
    if c.iter().all(|x| x.is_positive()) {
        Ok(Q0Class::Solution)
    } else if c.iter().all(|x| !x.is_negative()) {
        Ok(Q0Class::NotSolution { reason: NotSolutionReason::Degenerate })
    } else {
        Ok(Q0Class::NotSolution { reason: NotSolutionReason::PositiveDirection })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind")]
pub enum Integrability {
    Integrable { value: f64, error: f64, method: &'static str },
    NotIntegrable { witness: Vec<f64> },
    Inconclusive { reason: String },
}

const QUAD_RTOL: f64 = 1e-11;
/// Largest tensor grid, in points.
const TENSOR_BUDGET: usize = 40_000_000;

/// ∫ e^{w q} over R^k for a quadratic q with negative definite Hessian, as a
/// product of one-dimensional quadratures along the principal axes.
fn gaussian_product(q: &FPoly, w: f64) -> Option<(f64, f64)> {
    let (peak, lam) = q.concave_quadratic()?;
    let mut value = (w * peak).exp();
    let mut rel = 0.0;
    for l in lam {
        let r = adaptive_real_line(&|z: f64| (0.5 * w * l * z * z).exp(), 0.0, QUAD_RTOL);
        value *= r.value;
        rel += r.error / r.value;
    }
    Some((value, rel * value))
}

/// Tensor Gauss–Legendre on a box around the peak of q, for q → -∞.
fn tensor_quadrature(q: &FPoly, w: f64) -> Option<(f64, f64)> {
    let k = q.n;
    if k == 0 {
        return Some(((w * q.eval(&[])).exp(), 0.0));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    // rough peak
    let mut c = vec![0.0; k];
    let mut fc = q.eval(&c);
    let mut step = 1.0;
    while step > 1e-6 {
        let mut moved = false;
        for i in 0..k {
            for s in [step, -step] {
                c[i] += s;
                let f = q.eval(&c);
                if f > fc {
                    fc = f;
                    moved = true;
                } else {
                    c[i] -= s;
                }
            }
        }
        if !moved {
            step *= 0.5;
        }
    }
    let dirs: Vec<Vec<f64>> = (0..k)
        .flat_map(|i| [unit(k, i, 1.0), unit(k, i, -1.0)])
        .chain((0..256).map(|_| random_direction(&mut rng, k)))
        .collect();
    let drop = 40.0 / w;
    let mut half = 0.25;
    let below = |h: f64| {
        dirs.iter().all(|d| {
            let x: Vec<f64> = c.iter().zip(d).map(|(a, b)| a + h * b).collect();
            q.eval(&x) < fc - drop
        })
    };
    while !below(half) {
        half *= 1.5;
        if half > 1e6 {
            return None;
        }
    }
    let mut prev: Option<f64> = None;
    for nodes in [16usize, 24, 32, 48, 64, 96] {
        if nodes.checked_pow(k as u32).is_none_or(|t| t > TENSOR_BUDGET) {
            break;
        }
        let (x, wts) = gauss_legendre(nodes);
        let axis: Vec<Vec<(f64, f64)>> = (0..k)
            .map(|i| x.iter().zip(&wts).map(|(t, wt)| (c[i] + half * t, half * wt)).collect())
            .collect();
        let sum = tensor_sum(q, w, &axis, nodes, fc);
        if let Some(p) = prev {
            let diff = (sum - p).abs();
            if diff <= 1e-9 * sum.abs() {
                return Some((sum, diff));
            }
        }
        prev = Some(sum);
    }
    None
}

fn tensor_sum(q: &FPoly, w: f64, axis: &[Vec<(f64, f64)>], nodes: usize, peak: f64) -> f64 {
    let k = axis.len();
    let total = nodes.pow(k as u32);
    let scaled: f64 = (0..total)
        .into_par_iter()
        .with_min_len(4096)
        .map(|mut idx| {
            let mut pt = vec![0.0; k];
            let mut weight = 1.0;
            for (i, ax) in axis.iter().enumerate() {
                let (xv, wv) = ax[idx % nodes];
                idx /= nodes;
                pt[i] = xv;
                weight *= wv;
            }
            weight * (w * (q.eval(&pt) - peak)).exp()
        })
        .sum();
    scaled * (w * peak).exp()
}

/// ∫ over the slice {t ξ + y : y ⊥ ξ}.
fn slice_integral(p: &FPoly, xi: &[f64], basis: &[Vec<f64>], t: f64, w: f64) -> Option<f64> {
    let origin: Vec<f64> = xi.iter().map(|x| t * x).collect();
    let q = p.compose_affine(&origin, basis);
    if q.degree() <= 2 {
        return match gaussian_product(&q, w) {
            Some((v, _)) => Some(v),
            None => Some(f64::INFINITY),
        };
    }
    tensor_quadrature(&q, w).map(|(v, _)| v)
}

/// Decay exponent s of I(t) ~ |t|^{-s} from the last doublings.
fn local_exponents(vals: &[f64]) -> Vec<f64> {
    vals.windows(2).map(|w| -(w[1] / w[0]).log2()).collect()
}

fn sliced_probe(p: &FPoly, xi: &[f64], w: f64) -> Integrability {
    let basis = complement_basis(xi);
    let ks: Vec<i32> = (0..=12).collect();
    let t_max = 2f64.powi(*ks.last().unwrap());
    let mut exps = Vec::new();
    let mut tail_vals = Vec::new();
    for sign in [1.0, -1.0] {
        let mut vals = Vec::new();
        for &k in &ks {
            match slice_integral(p, xi, &basis, sign * 2f64.powi(k), w) {
                Some(v) => vals.push(v),
                None => return Integrability::Inconclusive { reason: "slice quadrature did not converge".into() },
            }
        }
        let witness: Vec<f64> = xi.iter().map(|x| sign * x).collect();
        if vals.iter().any(|v| !v.is_finite()) {
            return Integrability::NotIntegrable { witness };
        }
        let e = local_exponents(&vals);
        let last = &e[e.len() - 3..];
        if last.iter().all(|&s| s > 1.1) {
            exps.push(last[2]);
            tail_vals.push(*vals.last().unwrap());
        } else if last[2] <= 1.0 {
            return Integrability::NotIntegrable { witness };
        } else {
            return Integrability::Inconclusive { reason: format!("slice integrals decay like |t|^-{:.3}", last[2]) };
        }
    }
    let failed = std::cell::Cell::new(false);
    let r = adaptive(
        &|t| {
            slice_integral(p, xi, &basis, t, w).unwrap_or_else(|| {
                failed.set(true);
                0.0
            })
        },
        -t_max,
        t_max,
        0.0,
        QUAD_RTOL,
    );
    if failed.get() || !r.converged {
        return Integrability::Inconclusive { reason: "quadrature along the slice direction did not converge".into() };
    }
    let tails: f64 = exps.iter().zip(&tail_vals).map(|(s, v)| v * t_max / (s - 1.0)).sum();
    Integrability::Integrable { value: r.value + tails, error: r.error + tails, method: "sliced" }
}

/// Decide whether ∫ e^{n p} dx is finite over R^n, n = p.n().
///
/// `hint` is an optional zero direction of the leading form to slice along.
pub fn integrability_probe(p: &MultiPoly, hint: Option<&[f64]>) -> Result<Integrability> {
    let n = p.n();
    let w = n as f64;
    match p.degree() {
        None | Some(0) => return Ok(Integrability::NotIntegrable { witness: unit(n, 0, 1.0) }),
        _ => {}
    }
    let fp = FPoly::from_exact(p);
    let lf = leading_form_sign(p)?;
    Ok(match lf.verdict {
        LeadingForm::PositiveSomewhere { witness } => Integrability::NotIntegrable { witness },
        LeadingForm::NegativeDefinite => {
            let full = if lf.degree == 2 {
                gaussian_product(&fp, w).map(|r| (r, "gaussian-product"))
            } else {
                tensor_quadrature(&fp, w).map(|r| (r, "tensor"))
            };
            match full {
                Some(((value, error), method)) => Integrability::Integrable { value, error, method },
                None => Integrability::Inconclusive { reason: "product quadrature did not converge".into() },
            }
        }
        LeadingForm::HasZeroSet { .. } => {
            let mut dirs: Vec<Vec<f64>> = hint.map(|h| h.to_vec()).into_iter().collect();
            dirs.extend(lf.near_zero.iter().cloned());
            let mut last = Integrability::Inconclusive { reason: "no zero direction of the leading form".into() };
            for mut d in dirs {
                normalize(&mut d);
                last = sliced_probe(&fp, &d, w);
                if !matches!(last, Integrability::Inconclusive { .. }) {
                    break;
                }
            }
            last
        }
    })
}

/// (j, a) with Δ^j p = a constant and Δ^{j+1} p = 0, for non-constant p.
pub fn asymptotic_laplacian(p: &MultiPoly) -> Option<(usize, BigRational)> {
    if p.degree().unwrap_or(0) == 0 {
        return None;
    }
    let mut j = 0;
    let mut cur = p.clone();
    loop {
        let next = cur.laplacian();
        if next.is_zero() {
            break;
        }
        cur = next;
        j += 1;
    }
    if j == 0 {
        return None;
    }
    cur.constant_value().map(|a| (j, a))
}

/// u = -(1 + x_1²)(x_2² + ... + x_{2m}²) on R^{2m}: polyharmonic, finite
/// volume, and u = 0 along the x_1 axis.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NonCoerciveExample {
    pub m: usize,
    pub poly: MultiPoly,
    /// Direction along which the leading form vanishes.
    pub witness: Vec<f64>,
}

pub fn non_coercive_example(m: usize) -> Result<NonCoerciveExample> {
    if m < 3 {
        return Err(Error::Precondition("the non-coercive example needs m ≥ 3".into()));
    }
    let n = 2 * m;
    let one_plus = &MultiPoly::constant(n, BigRational::one()) + &MultiPoly::sum_squares(n, 0..1);
    let poly = -&(&one_plus * &MultiPoly::sum_squares(n, 1..n));
    Ok(NonCoerciveExample { m, poly, witness: unit(n, 0, 1.0) })
}

impl NonCoerciveExample {
    /// ∫ (1+t²)^{-(2m-1)/2} dt · (π/2m)^{(2m-1)/2}.
    pub fn closed_form_volume(&self) -> f64 {
        use statrs::function::gamma::gamma;
        let k = (2 * self.m - 1) as f64;
        let line = std::f64::consts::PI.sqrt() * gamma((k - 1.0) / 2.0) / gamma(k / 2.0);
        line * (std::f64::consts::PI / (2 * self.m) as f64).powf(k / 2.0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Q0Report {
    pub polynomial: MultiPoly,
    pub m: usize,
    pub degree: Option<usize>,
    /// Δ^m p = 0, exactly.
    pub polyharmonic: bool,
    /// 2 ≤ deg p ≤ 2m - 2.
    pub degree_in_range: bool,
    pub leading_form: Option<LeadingFormReport>,
    pub integrability: Integrability,
    /// (j, a) as exact text and as a float.
    pub asymptotic_laplacian: Option<(usize, String, f64)>,
    pub classification_m2: Option<Q0Class>,
    /// "Solution", "NotSolution" or "Inconclusive".
    pub verdict: &'static str,
}

/// Full pipeline for a candidate solution p of Δ^m p = 0 on R^{2m}.
pub fn analyze_q0(p: &MultiPoly, m: usize, hint: Option<&[f64]>) -> Result<Q0Report> {
    if p.n() != 2 * m {
        return Err(Error::VariableCount { expected: 2 * m, got: p.n() });
    }
    let degree = p.degree();
    let polyharmonic = p.iterated_laplacian(m).is_zero();
    let degree_in_range = degree.is_some_and(|d| (2..=2 * m - 2).contains(&d));
    let leading_form = if degree.unwrap_or(0) >= 1 { Some(leading_form_sign(p)?) } else { None };
    let integrability = integrability_probe(p, hint)?;
    let asymptotic_laplacian = asymptotic_laplacian(p).map(|(j, a)| (j, a.to_string(), rat_to_f64(&a)));
    let classification_m2 =
        if m == 2 && degree.unwrap_or(0) <= 2 { Some(classify_q0_m2(p)?) } else { None };
    let verdict = match (&integrability, polyharmonic && degree_in_range) {
        (_, false) | (Integrability::NotIntegrable { .. }, _) => "NotSolution",
        (Integrability::Integrable { .. }, true) => "Solution",
        (Integrability::Inconclusive { .. }, true) => "Inconclusive",
    };
    Ok(Q0Report {
        polynomial: p.clone(),
        m,
        degree,
        polyharmonic,
        degree_in_range,
        leading_form,
        integrability,
        asymptotic_laplacian,
        classification_m2,
        verdict,
    })
}
