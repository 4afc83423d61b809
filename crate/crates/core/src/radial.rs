//! The radial reduction of (-Δ)^m u = Q e^{2mu}.
//!
//! A radial function is carried through its iterated Laplacians: the phase
//! vector at radius r is y[2j] = Δ^j u(r), y[2j+1] = (Δ^j u)'(r) for
//! j = 0..m-1. With Δf = f'' + (n-1) f'/r the system is first order, and the
//! last equation closes with Δ^m u = (-1)^m Q e^{2mu}.

use serde::{Deserialize, Serialize};

use crate::constants::{factorial, laplacian_coeffs, laplacian_to_deriv, Dim};
use crate::error::{Error, Result};

/// Exponent beyond which e^x overflows f64.
pub(crate) const EXP_LIMIT: f64 = 709.0;

/// One shooting attempt: curvature and the even derivatives u^{(2j)}(0).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShotSpec {
    pub dim: Dim,
    #[serde(rename = "Q")]
    pub q: f64,
    pub alpha: Vec<f64>,
}

impl ShotSpec {
    pub fn new(dim: Dim, q: f64, alpha: Vec<f64>) -> Result<Self> {
        if alpha.len() != dim.m() {
            return Err(Error::AlphaLength { expected: dim.m(), got: alpha.len() });
        }
        if !q.is_finite() {
            return Err(Error::NonFinite("Q"));
        }
        if alpha.iter().any(|a| !a.is_finite()) {
            return Err(Error::NonFinite("alpha"));
        }
        Ok(ShotSpec { dim, q, alpha })
    }

    pub fn m(&self) -> usize {
        self.dim.m()
    }

    pub fn n(&self) -> usize {
        self.dim.n()
    }

    /// (-1)^m Q, the coefficient of e^{2mu} in Δ^m u.
    pub fn signed_q(&self) -> f64 {
        if self.m() % 2 == 0 {
            self.q
        } else {
            -self.q
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialState {
    pub r: f64,
    pub y: Vec<f64>,
}

impl RadialState {
    pub fn u(&self) -> f64 {
        self.y[0]
    }

    pub fn du(&self) -> f64 {
        self.y[1]
    }

    /// Δ^ℓ u for 0 ≤ ℓ ≤ m; the top one comes from the equation itself.
    pub fn laplacian(&self, spec: &ShotSpec, l: usize) -> f64 {
        let m = spec.m();
        assert!(l <= m, "Δ^{l} u is not part of the phase vector for m = {m}");
        if l < m {
            self.y[2 * l]
        } else {
            spec.signed_q() * (2.0 * m as f64 * self.y[0]).exp()
        }
    }
}

/// Even polynomial Σ c_k r^{2k}, stored by powers of t = r².
#[derive(Debug, Clone, PartialEq)]
pub struct EvenPoly {
    pub coeffs: Vec<f64>,
}

impl EvenPoly {
    pub fn new(coeffs: Vec<f64>) -> Self {
        EvenPoly { coeffs }
    }

    pub fn eval(&self, r: f64) -> f64 {
        let t = r * r;
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * t + c)
    }

    /// d/dr.
    pub fn deriv(&self, r: f64) -> f64 {
        let t = r * r;
        let mut acc = 0.0;
        for (k, &c) in self.coeffs.iter().enumerate().skip(1).rev() {
            acc = acc * t + 2.0 * k as f64 * c;
        }
        // the loop above folded Σ 2k c_k t^{k-1}
        acc * r
    }

    /// Radial Laplacian in R^n: Δ r^{2k} = 2k(2k+n-2) r^{2k-2}.
    pub fn laplacian(&self, n: usize) -> EvenPoly {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &c)| c * (2 * k) as f64 * (2 * k + n - 2) as f64)
            .collect();
        EvenPoly { coeffs }
    }
}

/// Writes dy/dr into `dy`; returns false when the source term overflows.
pub(crate) fn rhs_into(m: usize, signed_q: f64, r: f64, y: &[f64], dy: &mut [f64]) -> bool {
    let n = 2 * m;
    let damp = (n - 1) as f64 / r;
    for j in 0..m - 1 {
        dy[2 * j] = y[2 * j + 1];
        dy[2 * j + 1] = y[2 * j + 2] - damp * y[2 * j + 1];
    }
    let expo = 2.0 * m as f64 * y[0];
    let source = if signed_q == 0.0 {
        0.0
    } else if expo > EXP_LIMIT || expo.is_nan() {
        return false;
    } else {
        signed_q * expo.exp()
    };
    dy[2 * m - 2] = y[2 * m - 1];
    dy[2 * m - 1] = source - damp * y[2 * m - 1];
    dy.iter().all(|v| v.is_finite())
}

/// d/dr of the phase vector. Rejects r = 0, where (n-1)/r is singular.
pub fn rhs(spec: &ShotSpec, state: &RadialState) -> Result<Vec<f64>> {
    if !(state.r > 0.0) {
        return Err(Error::NonPositiveRadius(state.r));
    }
    let mut dy = vec![0.0; spec.n()];
    if rhs_into(spec.m(), spec.signed_q(), state.r, &state.y, &mut dy) {
        Ok(dy)
    } else {
        Err(Error::SourceOverflow { r: state.r, u: state.y[0] })
    }
}

/// Degree-2m even Taylor polynomial of the solution at r = 0.
///
/// c_{2j} = α_j/(2j)! for j < m; the top coefficient is forced by the
/// equation at the origin, Δ^m u(0) = b_m (2m)! c_{2m} = (-1)^m Q e^{2mα_0}.
pub fn taylor_poly(spec: &ShotSpec) -> EvenPoly {
    let m = spec.m();
    let b = laplacian_coeffs(spec.dim);
    let mut c: Vec<f64> = spec
        .alpha
        .iter()
        .enumerate()
        .map(|(j, &a)| a / factorial(2 * j))
        .collect();
    let top = spec.signed_q() * (2.0 * m as f64 * spec.alpha[0]).exp();
    c.push(top / (b[m - 1] * factorial(2 * m)));
    EvenPoly::new(c)
}

/// Phase vector at r = h from the Taylor polynomial.
///
/// The first omitted term is O(h^{2m+2}) in u; each Laplacian and each radial
/// derivative costs two and one powers of h respectively.
pub fn taylor_start(spec: &ShotSpec, h: f64) -> Result<RadialState> {
    if !(h > 0.0) || !h.is_finite() {
        return Err(Error::NonPositiveRadius(h));
    }
    let n = spec.n();
    let mut p = taylor_poly(spec);
    let mut y = Vec::with_capacity(n);
    for _ in 0..spec.m() {
        y.push(p.eval(h));
        y.push(p.deriv(h));
        p = p.laplacian(n);
    }
    Ok(RadialState { r: h, y })
}

/// Reads the even derivatives at the origin back off a near-origin state,
/// using Δ^j u(h) = Δ^j u(0) + O(h²).
pub fn reverse_taylor(dim: Dim, state: &RadialState) -> Vec<f64> {
    let lap: Vec<f64> = state.y.iter().step_by(2).copied().collect();
    laplacian_to_deriv(dim, &lap)
}
