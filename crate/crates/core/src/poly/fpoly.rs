//! Floating-point polynomials, used only for quadrature after an affine change
//! of variables. The exact algebra lives in [`super::MultiPoly`].

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use super::{rat_to_f64, MultiPoly};

#[derive(Debug, Clone, PartialEq)]
pub struct FPoly {
    pub n: usize,
    pub terms: Vec<(Vec<u32>, f64)>,
}

fn mul_maps(a: &BTreeMap<Vec<u32>, f64>, b: &BTreeMap<Vec<u32>, f64>) -> BTreeMap<Vec<u32>, f64> {
    let mut out = BTreeMap::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            *out.entry(e).or_insert(0.0) += ca * cb;
        }
    }
    out
}

impl FPoly {
    pub fn from_exact(p: &MultiPoly) -> Self {
        FPoly { n: p.n(), terms: p.terms().iter().map(|(e, c)| (e.clone(), rat_to_f64(c))).collect() }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| c * x.iter().zip(e).map(|(xi, &a)| xi.powi(a as i32)).product::<f64>())
            .sum()
    }

    pub fn degree(&self) -> usize {
        self.terms.iter().map(|(e, _)| e.iter().sum::<u32>() as usize).max().unwrap_or(0)
    }

    /// q(y) = p(origin + Σ_j y_j basis[j]), a polynomial in basis.len() variables.
    pub fn compose_affine(&self, origin: &[f64], basis: &[Vec<f64>]) -> FPoly {
        let k = basis.len();
        // x_i as a polynomial in y
        let lin: Vec<BTreeMap<Vec<u32>, f64>> = (0..self.n)
            .map(|i| {
                let mut m = BTreeMap::new();
                if origin[i] != 0.0 {
                    m.insert(vec![0; k], origin[i]);
                }
                for (j, b) in basis.iter().enumerate() {
                    if b[i] != 0.0 {
                        let mut e = vec![0; k];
                        e[j] = 1;
                        m.insert(e, b[i]);
                    }
                }
                m
            })
            .collect();
        let mut acc: BTreeMap<Vec<u32>, f64> = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut t = BTreeMap::from([(vec![0; k], *c)]);
            for (i, &a) in e.iter().enumerate() {
                for _ in 0..a {
                    t = mul_maps(&t, &lin[i]);
                }
            }
            for (f, v) in t {
                *acc.entry(f).or_insert(0.0) += v;
            }
        }
        let scale = acc.values().fold(0.0f64, |s, v| s.max(v.abs()));
        FPoly {
            n: k,
            terms: acc.into_iter().filter(|(_, v)| v.abs() > 1e-15 * scale).collect(),
        }
    }

    /// Gradient at 0 and Hessian, for polynomials of degree ≤ 2.
    pub fn quadratic_parts(&self) -> (f64, DVector<f64>, DMatrix<f64>) {
        let mut c = 0.0;
        let mut g = DVector::zeros(self.n);
        let mut h = DMatrix::zeros(self.n, self.n);
        for (e, v) in &self.terms {
            let idx: Vec<usize> = e
                .iter()
                .enumerate()
                .flat_map(|(i, &a)| std::iter::repeat_n(i, a as usize))
                .collect();
            match idx.as_slice() {
                [] => c += v,
                [i] => g[*i] += v,
                [i, j] if i == j => h[(*i, *i)] += 2.0 * v,
                [i, j] => {
                    h[(*i, *j)] += v;
                    h[(*j, *i)] += v;
                }
                _ => {}
            }
        }
        (c, g, h)
    }

    /// For a quadratic with negative definite Hessian: (max value, eigenvalues).
    pub fn concave_quadratic(&self) -> Option<(f64, Vec<f64>)> {
        if self.degree() > 2 {
            return None;
        }
        let (c, g, h) = self.quadratic_parts();
        if self.n == 0 {
            return Some((c, Vec::new()));
        }
        let eig = SymmetricEigen::new(h.clone());
        let lam: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        let top = lam.iter().fold(0.0f64, |s, l| s.max(l.abs()));
        if lam.iter().any(|&l| l >= -1e-12 * top.max(1.0)) {
            return None;
        }
        // maximiser y* = -H⁻¹ g
        let y = h.lu().solve(&(-&g))?;
        let peak = c + 0.5 * g.dot(&y);
        Some((peak, lam))
    }
}

/// Orthonormal basis of the complement of the unit vector `xi`.
pub fn complement_basis(xi: &[f64]) -> Vec<Vec<f64>> {
    let n = xi.len();
    let mut basis: Vec<Vec<f64>> = vec![xi.to_vec()];
    for i in 0..n {
        let mut v = vec![0.0; n];
        v[i] = 1.0;
        for b in &basis {
            let d: f64 = v.iter().zip(b).map(|(a, c)| a * c).sum();
            for (vk, bk) in v.iter_mut().zip(b) {
                *vk -= d * bk;
            }
        }
        let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        if norm > 1e-8 {
            basis.push(v.into_iter().map(|a| a / norm).collect());
        }
        if basis.len() == n {
            break;
        }
    }
    basis.remove(0);
    basis
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse;

    #[test]
    fn compose_matches_eval() {
        let p = parse("x1^2*x2 - 3*x3 + 2*x1*x3 + 1", Some(3)).unwrap();
        let f = FPoly::from_exact(&p);
        let origin = [0.5, -1.0, 2.0];
        let basis = vec![vec![1.0, 0.0, 1.0], vec![0.0, 2.0, -1.0]];
        let q = f.compose_affine(&origin, &basis);
        for y in [[0.0, 0.0], [1.0, -2.0], [0.3, 0.7]] {
            let x: Vec<f64> = (0..3).map(|i| origin[i] + y[0] * basis[0][i] + y[1] * basis[1][i]).collect();
            assert!((q.eval(&y) - f.eval(&x)).abs() < 1e-12);
        }
    }

    #[test]
    fn complement_is_orthonormal() {
        let xi = [0.6, 0.0, 0.8, 0.0];
        let b = complement_basis(&xi);
        assert_eq!(b.len(), 3);
        for (i, u) in b.iter().enumerate() {
            let d: f64 = u.iter().zip(&xi).map(|(a, c)| a * c).sum();
            assert!(d.abs() < 1e-14);
            for (j, w) in b.iter().enumerate() {
                let d: f64 = u.iter().zip(w).map(|(a, c)| a * c).sum();
                assert!((d - if i == j { 1.0 } else { 0.0 }).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn concave_quadratic_peak() {
        let p = parse("-x1^2 - x2^2 + 2*x1 + 3", Some(2)).unwrap();
        let (peak, lam) = FPoly::from_exact(&p).concave_quadratic().unwrap();
        assert!((peak - 4.0).abs() < 1e-14);
        assert!(lam.iter().all(|&l| (l + 2.0).abs() < 1e-14));
        let p = parse("-x1^2 + 2*x1", Some(2)).unwrap();
        assert!(FPoly::from_exact(&p).concave_quadratic().is_none());
    }
}
