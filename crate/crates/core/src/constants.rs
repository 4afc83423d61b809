//! Dimension-dependent constants of the polyharmonic problem on R^{2m}.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Half the space dimension. The ambient space is R^n with n = 2m.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Dim(u32);

impl Dim {
    pub fn new(m: u32) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidDim(m));
        }
        Ok(Dim(m))
    }

    pub fn m(self) -> usize {
        self.0 as usize
    }

    pub fn n(self) -> usize {
        2 * self.0 as usize
    }

    /// Number of entries of the radial phase vector.
    pub fn state_len(self) -> usize {
        self.n()
    }
}

impl TryFrom<u32> for Dim {
    type Error = Error;
    fn try_from(m: u32) -> Result<Self> {
        Dim::new(m)
    }
}

impl From<Dim> for u32 {
    fn from(d: Dim) -> u32 {
        d.0
    }
}

pub fn factorial(k: usize) -> f64 {
    (1..=k).fold(1.0, |acc, i| acc * i as f64)
}

/// Gamma at a positive half-integer `k/2`, computed from Γ(1) = 1 and Γ(1/2) = √π.
fn gamma_half(k: usize) -> f64 {
    debug_assert!(k > 0);
    if k % 2 == 0 {
        factorial(k / 2 - 1)
    } else {
        // Γ(j + 1/2) = (2j)! √π / (4^j j!)
        let j = (k - 1) / 2;
        factorial(2 * j) * PI.sqrt() / (4f64.powi(j as i32) * factorial(j))
    }
}

/// Area of the unit sphere S^k ⊂ R^{k+1}.
pub fn sphere_area(k: usize) -> f64 {
    2.0 * PI.powf((k + 1) as f64 / 2.0) / gamma_half(k + 1)
}

/// (|S^{2m-1}|, |S^{2m}|).
pub fn surface_areas(dim: Dim) -> (f64, f64) {
    (sphere_area(dim.n() - 1), sphere_area(dim.n()))
}

/// b_1..b_m with Δ^j u(0) = b_j u^{(2j)}(0) for smooth radial u on R^n.
///
/// b_j = ∏_{k=1}^{j} 2k(2k+n-2) / (2j)!, accumulated as
/// b_j = b_{j-1} (2j+n-2)/(2j-1).
pub fn laplacian_coeffs(dim: Dim) -> Vec<f64> {
    laplacian_coeffs_n(dim.n(), dim.m())
}

pub(crate) fn laplacian_coeffs_n(n: usize, count: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(count);
    let mut b = 1.0;
    for j in 1..=count {
        b *= (2 * j + n - 2) as f64 / (2 * j - 1) as f64;
        out.push(b);
    }
    out
}

/// γ_m = |S^{2m-1}| 4^{m-1} ((m-1)!)², the normalisation of the fundamental
/// solution (1/γ_m) log(1/|x|) of (-Δ)^m on R^{2m}.
pub fn gamma_const(dim: Dim) -> f64 {
    let m = dim.m();
    let fm = factorial(m - 1);
    sphere_area(dim.n() - 1) * 4f64.powi(m as i32 - 1) * fm * fm
}

/// Maps u^{(2j)}(0) to Δ^j u(0) for j = 0..m-1.
pub fn deriv_to_laplacian(dim: Dim, alpha: &[f64]) -> Vec<f64> {
    let b = laplacian_coeffs(dim);
    alpha
        .iter()
        .enumerate()
        .map(|(j, &a)| if j == 0 { a } else { b[j - 1] * a })
        .collect()
}

/// Inverse of [`deriv_to_laplacian`].
pub fn laplacian_to_deriv(dim: Dim, lap: &[f64]) -> Vec<f64> {
    let b = laplacian_coeffs(dim);
    lap.iter()
        .enumerate()
        .map(|(j, &l)| if j == 0 { l } else { l / b[j - 1] })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Constants {
    pub dim: Dim,
    pub b: Vec<f64>,
    pub gamma_m: f64,
    /// |S^{2m-1}|
    pub surf_odd: f64,
    /// |S^{2m}|
    pub surf_even: f64,
    /// (2m-1)!
    pub fact: f64,
}

impl Constants {
    pub fn new(dim: Dim) -> Self {
        let (surf_odd, surf_even) = surface_areas(dim);
        Constants {
            dim,
            b: laplacian_coeffs(dim),
            gamma_m: gamma_const(dim),
            surf_odd,
            surf_even,
            fact: factorial(2 * dim.m() - 1),
        }
    }

    /// (2m-1)! |S^{2m}| / γ_m, which equals 2.
    pub fn mass_identity(&self) -> f64 {
        self.fact * self.surf_even / self.gamma_m
    }

    /// |S^{2m-1}| / |S^{2m}|: converts ∫ e^{2mu} s^{2m-1} ds into normalised volume.
    pub fn volume_ratio(&self) -> f64 {
        self.surf_odd / self.surf_even
    }

    /// (2m-1)!/γ_m · |S^{2m-1}|: prefactor of the radial log-potential.
    pub fn potential_prefactor(&self) -> f64 {
        self.fact / self.gamma_m * self.surf_odd
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn sphere_areas_closed_forms() {
        let d1 = Dim::new(1).unwrap();
        let (o, e) = surface_areas(d1);
        assert_relative_eq!(o, 2.0 * PI, max_relative = 1e-15);
        assert_relative_eq!(e, 4.0 * PI, max_relative = 1e-15);
        let (o, e) = surface_areas(Dim::new(2).unwrap());
        assert_relative_eq!(o, 2.0 * PI * PI, max_relative = 1e-15);
        assert_relative_eq!(e, 8.0 * PI * PI / 3.0, max_relative = 1e-15);
        let (o, _) = surface_areas(Dim::new(3).unwrap());
        assert_relative_eq!(o, PI.powi(3), max_relative = 1e-15);
    }

    #[test]
    fn b_small_dimensions() {
        assert_eq!(laplacian_coeffs(Dim::new(2).unwrap()), vec![4.0, 8.0]);
        assert_eq!(laplacian_coeffs(Dim::new(3).unwrap()), vec![6.0, 16.0, 32.0]);
        for m in 1..8 {
            let d = Dim::new(m).unwrap();
            assert_eq!(laplacian_coeffs(d)[0], d.n() as f64);
        }
    }

    #[test]
    fn gamma_fundamental_solutions() {
        assert_relative_eq!(gamma_const(Dim::new(1).unwrap()), 2.0 * PI, max_relative = 1e-15);
        assert_relative_eq!(gamma_const(Dim::new(2).unwrap()), 8.0 * PI * PI, max_relative = 1e-15);
        for m in 1..=5 {
            let c = Constants::new(Dim::new(m).unwrap());
            assert!((c.mass_identity() - 2.0).abs() <= 2.0 * 1e-12);
        }
    }

    #[test]
    fn deriv_laplacian_round_trip() {
        let d = Dim::new(2).unwrap();
        assert_eq!(deriv_to_laplacian(d, &[0.0, -1.0]), vec![0.0, -4.0]);
        assert_eq!(deriv_to_laplacian(d, &[0.0, 0.0]), vec![0.0, 0.0]);
        let d3 = Dim::new(3).unwrap();
        assert_eq!(deriv_to_laplacian(d3, &[0.0, 0.0, 1.0])[2], 16.0);
        let a = [0.3, -1.7, 2.5];
        let back = laplacian_to_deriv(d3, &deriv_to_laplacian(d3, &a));
        for (x, y) in a.iter().zip(&back) {
            assert!((x - y).abs() <= 1e-14);
        }
    }

    #[test]
    fn zero_m_rejected() {
        assert_eq!(Dim::new(0), Err(Error::InvalidDim(0)));
    }
}
