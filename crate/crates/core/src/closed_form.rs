//! Exact iterated Laplacians of the explicit profiles log(2/(1 ± r²)).
//!
//! Radial functions of t = r² transform as Δ = 4t ∂_t² + 2n ∂_t. Every
//! Δ^j log(1 + σt), j ≥ 1, is a rational function N(t)/(1 + σt)^k with
//! rational coefficients, which we carry exactly and reduce before
//! evaluating in floating point.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

fn q(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// N(t) / (1 + σ t)^pow with σ = ±1.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialRational {
    pub sigma: i64,
    pub num: Vec<BigRational>,
    pub pow: u32,
}

fn trim(p: &mut Vec<BigRational>) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn poly_deriv(p: &[BigRational]) -> Vec<BigRational> {
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * q(i as i64))
        .collect()
}

fn poly_add(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let len = a.len().max(b.len());
    let mut out: Vec<BigRational> = (0..len)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_else(BigRational::zero);
            let y = b.get(i).cloned().unwrap_or_else(BigRational::zero);
            x + y
        })
        .collect();
    trim(&mut out);
    out
}

/// p · (c0 + c1 t)
fn poly_mul_linear(p: &[BigRational], c0: &BigRational, c1: &BigRational) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); p.len() + 1];
    for (i, c) in p.iter().enumerate() {
        out[i] += c * c0;
        out[i + 1] += c * c1;
    }
    trim(&mut out);
    out
}

fn poly_eval(p: &[BigRational], t: &BigRational) -> BigRational {
    p.iter().rev().fold(BigRational::zero(), |acc, c| acc * t + c)
}

impl RadialRational {
    /// ∂_t, before reduction.
    fn dt(&self) -> RadialRational {
        let s = q(self.sigma);
        let d = poly_deriv(&self.num);
        // N'(1 + σt) - kσ N
        let a = poly_mul_linear(&d, &BigRational::one(), &s);
        let b: Vec<BigRational> = self
            .num
            .iter()
            .map(|c| -(c * &s) * q(self.pow as i64))
            .collect();
        RadialRational { sigma: self.sigma, num: poly_add(&a, &b), pow: self.pow + 1 }
    }

    /// Raise the denominator power by one without changing the value.
    fn lift(&self) -> RadialRational {
        let num = poly_mul_linear(&self.num, &BigRational::one(), &q(self.sigma));
        RadialRational { sigma: self.sigma, num, pow: self.pow + 1 }
    }

    /// Cancel common factors (1 + σt).
    pub fn reduce(mut self) -> RadialRational {
        let root = q(-self.sigma);
        while self.pow > 0 && !self.num.is_empty() && poly_eval(&self.num, &root).is_zero() {
            // synthetic division by (t - root), then rescale to (1 + σt) = σ (t - root)
            let deg = self.num.len() - 1;
            let mut quot = vec![BigRational::zero(); deg];
            let mut carry = BigRational::zero();
            for i in (0..=deg).rev() {
                let c = &self.num[i] + &carry * &root;
                if i > 0 {
                    quot[i - 1] = c.clone();
                }
                carry = c;
            }
            let s = q(self.sigma);
            self.num = quot.into_iter().map(|c| c / &s).collect();
            self.pow -= 1;
        }
        if self.num.is_empty() {
            self.pow = 0;
        }
        self
    }

    /// Δ = 4t ∂² + 2n ∂ on R^n.
    pub fn laplacian(&self, n: usize) -> RadialRational {
        let d1 = self.dt();
        let d2 = d1.dt();
        let a = poly_mul_linear(&d2.num, &BigRational::zero(), &q(4));
        let b: Vec<BigRational> = d1.lift().num.iter().map(|c| c * q(2 * n as i64)).collect();
        RadialRational { sigma: self.sigma, num: poly_add(&a, &b), pow: d2.pow }.reduce()
    }

    pub fn eval(&self, t: f64) -> f64 {
        let num = self
            .num
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * t + c.to_f64().unwrap_or(f64::NAN));
        num / (1.0 + self.sigma as f64 * t).powi(self.pow as i32)
    }

    /// d/dr = 2r ∂_t.
    pub fn eval_dr(&self, r: f64) -> f64 {
        2.0 * r * self.dt().reduce().eval(r * r)
    }

    /// True when N is a constant, i.e. the function is c (1 + σt)^{-pow}.
    pub fn is_monomial_form(&self) -> bool {
        self.num.len() <= 1
    }

    pub fn leading_constant(&self) -> Option<BigRational> {
        if self.num.len() == 1 {
            Some(self.num[0].clone())
        } else {
            None
        }
    }
}

/// Δ^j log(1 + σt) on R^n for j = 1..=count.
pub fn log_laplacians(n: usize, sigma: i64, count: usize) -> Vec<RadialRational> {
    assert!(sigma == 1 || sigma == -1);
    if count == 0 {
        return Vec::new();
    }
    // Δ log(1+σt) = (2nσ + (2n - 4σ²) t) / (1+σt)^2
    let first = RadialRational {
        sigma,
        num: {
            let mut v = vec![q(2 * n as i64 * sigma), q(2 * n as i64 - 4)];
            trim(&mut v);
            v
        },
        pow: 2,
    }
    .reduce();
    let mut out = vec![first];
    while out.len() < count {
        let next = out.last().expect("non-empty").laplacian(n);
        out.push(next);
    }
    out
}

/// The explicit profiles u = log(2/(1 + σ r²)): σ = +1 is the round bubble
/// (Q = (2m-1)!, entire), σ = -1 the hyperbolic ball (Q = (-1)^m (2m-1)!, r < 1).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Profile {
    Bubble,
    Ball,
}

impl Profile {
    pub fn sigma(self) -> i64 {
        match self {
            Profile::Bubble => 1,
            Profile::Ball => -1,
        }
    }

    pub fn u(self, r: f64) -> f64 {
        (2.0 / (1.0 + self.sigma() as f64 * r * r)).ln()
    }

    pub fn du(self, r: f64) -> f64 {
        let s = self.sigma() as f64;
        -2.0 * s * r / (1.0 + s * r * r)
    }

    /// The curvature constant it solves for on R^{2m}.
    pub fn q(self, m: usize) -> f64 {
        let f = crate::constants::factorial(2 * m - 1);
        match self {
            Profile::Bubble => f,
            Profile::Ball if m % 2 == 1 => -f,
            Profile::Ball => f,
        }
    }

    /// u^{(2j)}(0), j = 0..m-1: the shooting data reproducing the profile.
    pub fn initial_data(self, m: usize) -> Vec<f64> {
        // log 2 - log(1+σt) = log 2 - Σ_k (-1)^{k+1} σ^k t^k / k
        let s = self.sigma() as f64;
        (0..m)
            .map(|j| {
                if j == 0 {
                    2f64.ln()
                } else {
                    let coeff = -(-1f64).powi(j as i32 + 1) * s.powi(j as i32) / j as f64;
                    coeff * crate::constants::factorial(2 * j)
                }
            })
            .collect()
    }
}

/// Exact Δ^j u, j = 1..=m, for a profile on R^{2m}.
#[derive(Debug, Clone)]
pub struct ProfileLaplacians {
    pub profile: Profile,
    pub n: usize,
    /// Δ^j log(1 + σt); Δ^j u is the negative of these.
    logs: Vec<RadialRational>,
}

impl ProfileLaplacians {
    pub fn new(profile: Profile, m: usize) -> Self {
        let n = 2 * m;
        ProfileLaplacians { profile, n, logs: log_laplacians(n, profile.sigma(), m) }
    }

    /// Δ^j u(r).
    pub fn value(&self, j: usize, r: f64) -> f64 {
        if j == 0 {
            self.profile.u(r)
        } else {
            -self.logs[j - 1].eval(r * r)
        }
    }

    /// (Δ^j u)'(r).
    pub fn radial_deriv(&self, j: usize, r: f64) -> f64 {
        if j == 0 {
            self.profile.du(r)
        } else {
            -self.logs[j - 1].eval_dr(r)
        }
    }

    /// Exact form of Δ^j log(1 + σt).
    pub fn log_term(&self, j: usize) -> &RadialRational {
        &self.logs[j - 1]
    }

    /// Relative residual of (-Δ)^m u - Q e^{2mu} at r.
    pub fn residual(&self, r: f64) -> f64 {
        let m = self.n / 2;
        let lhs = if m % 2 == 0 { 1.0 } else { -1.0 } * self.value(m, r);
        let rhs = self.profile.q(m) * (2.0 * m as f64 * self.profile.u(r)).exp();
        ((lhs - rhs) / rhs).abs()
    }
}

/// Whether Δ^m log(1 + σt) reduces exactly to c (1 + σt)^{-2m}, c ≠ 0.
pub fn top_laplacian_is_pure_power(profile: Profile, m: usize) -> bool {
    let l = ProfileLaplacians::new(profile, m);
    let top = l.log_term(m);
    top.is_monomial_form()
        && top.pow as usize == 2 * m
        && top.leading_constant().is_some_and(|c| !c.is_zero())
}
