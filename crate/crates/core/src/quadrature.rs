//! Gauss-type quadrature rules on [-1, 1].

use std::f64::consts::PI;

use crate::error::Result;
use crate::jacobi::JacobiMatrix;

/// Default node count for measures on [-1, 1].
pub const DEFAULT_NODES: usize = 512;

/// Nodes and weights approximating `∫ f dν ≈ Σ w_j f(x_j)` for some measure ν.
#[derive(Debug, Clone, PartialEq)]
pub struct Quadrature {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl Quadrature {
    pub fn from_parts(nodes: Vec<f64>, weights: Vec<f64>) -> Self {
        assert_eq!(nodes.len(), weights.len());
        Quadrature { nodes, weights }
    }

    /// Gauss–Chebyshev of the second kind: `∫ f(x) √(1−x²) dx`, exact for
    /// polynomials of degree ≤ 2K − 1.
    pub fn chebyshev_second_kind(k: usize) -> Self {
        let h = PI / (k + 1) as f64;
        let (nodes, weights) = (1..=k)
            .rev()
            .map(|j| {
                let t = j as f64 * h;
                (t.cos(), h * t.sin().powi(2))
            })
            .unzip();
        Quadrature { nodes, weights }
    }

    /// Gauss–Chebyshev of the first kind: `∫ f(x) / √(1−x²) dx`, exact for
    /// polynomials of degree ≤ 2K − 1.
    pub fn chebyshev_first_kind(k: usize) -> Self {
        let h = PI / k as f64;
        let (nodes, weights) = (1..=k)
            .rev()
            .map(|j| (((2 * j - 1) as f64 * PI / (2 * k) as f64).cos(), h))
            .unzip();
        Quadrature { nodes, weights }
    }

    /// Gauss–Legendre on [-1, 1] via the Golub–Welsch eigenproblem.
    pub fn gauss_legendre(k: usize) -> Result<Self> {
        let off = (1..k)
            .map(|i| {
                let i = i as f64;
                i / (4.0 * i * i - 1.0).sqrt()
            })
            .collect();
        let eig = JacobiMatrix::new(vec![0.0; k], off)?.eigen(false)?;
        let weights = eig.first_components.iter().map(|z| 2.0 * z * z).collect();
        Ok(Quadrature {
            nodes: eig.values,
            weights,
        })
    }

    /// Same nodes, weights multiplied by `density(x_j)`.
    pub fn reweighted<F: Fn(f64) -> f64>(&self, density: F) -> Self {
        Quadrature {
            nodes: self.nodes.clone(),
            weights: self
                .nodes
                .iter()
                .zip(&self.weights)
                .map(|(&x, &w)| w * density(x))
                .collect(),
        }
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }

    pub fn integrate_complex<F>(&self, f: F) -> num_complex::Complex64
    where
        F: Fn(f64) -> num_complex::Complex64,
    {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| f(x) * w)
            .sum()
    }
}

/// `∫_a^b f` by composite Gauss–Legendre with `panels` equal subintervals.
pub fn integrate_interval<F: Fn(f64) -> f64>(rule: &Quadrature, a: f64, b: f64, panels: usize, f: F) -> f64 {
    let h = (b - a) / panels as f64;
    (0..panels)
        .map(|p| {
            let mid = a + (p as f64 + 0.5) * h;
            rule.integrate(|t| f(mid + 0.5 * h * t)) * 0.5 * h
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    // ∫ x^{2m} √(1−x²) dx over [-1,1] = π (2m)! / (2^{2m+1} m! (m+1)!)
    fn chebyshev_u_moment(m: u32) -> f64 {
        let mut v = PI / 2.0;
        for j in 1..=m {
            v *= (2 * j - 1) as f64 / (2 * j + 2) as f64;
        }
        v
    }

    #[test]
    fn second_kind_exact_up_to_degree_2k_minus_1() {
        let k = 6;
        let q = Quadrature::chebyshev_second_kind(k);
        for m in 0..k as u32 {
            let exact = chebyshev_u_moment(m);
            assert!((q.integrate(|x| x.powi(2 * m as i32)) - exact).abs() < 1e-14);
            assert!(q.integrate(|x| x.powi(2 * m as i32 + 1)).abs() < 1e-14);
        }
        // degree 2K is not integrated exactly
        let exact = chebyshev_u_moment(k as u32);
        assert!((q.integrate(|x| x.powi(2 * k as i32)) - exact).abs() > 1e-6);
    }

    #[test]
    fn first_kind_integrates_arcsine_moments() {
        let q = Quadrature::chebyshev_first_kind(10);
        assert!((q.integrate(|_| 1.0) - PI).abs() < 1e-14);
        assert!((q.integrate(|x| x * x) - PI / 2.0).abs() < 1e-14);
        assert!((q.integrate(|x| 1.0 + x) - PI).abs() < 1e-14);
    }

    #[test]
    fn gauss_legendre_polynomials_and_smooth() {
        let q = Quadrature::gauss_legendre(12).unwrap();
        assert!((q.integrate(|_| 1.0) - 2.0).abs() < 1e-14);
        assert!((q.integrate(|x| x.powi(22)) - 2.0 / 23.0).abs() < 1e-14);
        let v = integrate_interval(&q, 0.0, PI, 8, f64::sin);
        assert!((v - 2.0).abs() < 1e-14);
    }

    #[test]
    fn nodes_ascending() {
        for q in [
            Quadrature::chebyshev_first_kind(7),
            Quadrature::chebyshev_second_kind(7),
            Quadrature::gauss_legendre(7).unwrap(),
        ] {
            assert!(q.nodes().windows(2).all(|w| w[0] < w[1]));
        }
    }
}
