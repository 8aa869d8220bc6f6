//! Borel (Stieltjes) transforms `F(z) = ∫ dμ(x)/(x − z)` of the semicircle
//! law and of its rank-one perturbations, and recovery of densities from
//! boundary values.

use std::f64::consts::{FRAC_2_PI, PI};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Result, SpectralError};
use crate::measures::catalan::catalan_f64;

/// Principal square root with the branch cut on `(−∞, 0]`, from the explicit
/// real/imaginary decomposition
/// `√(x+iy) = √((|w|+x)/2) + i·sgn(y)·√((|w|−x)/2)`.
///
/// The smaller of the two parts is recovered from `re·im = y/2` to avoid
/// cancellation.
pub fn principal_sqrt(w: Complex64) -> Complex64 {
    let (x, y) = (w.re, w.im);
    let r = w.norm();
    if r == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    let sgn = if y > 0.0 {
        1.0
    } else if y < 0.0 {
        -1.0
    } else {
        0.0
    };
    if x >= 0.0 {
        let re = ((r + x) / 2.0).sqrt();
        Complex64::new(re, y / (2.0 * re))
    } else {
        let im = ((r - x) / 2.0).sqrt();
        Complex64::new(y.abs() / (2.0 * im), sgn * im)
    }
}

fn on_cut(z: Complex64) -> bool {
    z.im == 0.0 && z.re.abs() <= 1.0
}

/// Borel transform of μ_c, `F(z) = −2z(1 − √(1 − 1/z²))`, on ℂ∖[−1, 1].
///
/// Evaluated as `−2 / (z(1 + √(1 − 1/z²)))`, which is the same expression
/// rationalised and stays accurate for large `|z|`.
pub fn borel_mu_c(z: Complex64) -> Result<Complex64> {
    if on_cut(z) || !z.is_finite() {
        return Err(SpectralError::OnSpectrum(z.to_string()));
    }
    let s = principal_sqrt(Complex64::new(1.0, 0.0) - (z * z).inv());
    Ok(-2.0 / (z * (1.0 + s)))
}

/// Truncated moment expansion `−(1/z) Σ_{n<terms} C_n (4z²)^{−n}`, valid for `|z| > 1`.
pub fn borel_mu_c_series(z: Complex64, terms: usize) -> Result<Complex64> {
    if !(z.norm() > 1.0) {
        return Err(SpectralError::Domain(format!(
            "moment series needs |z| > 1, got {z}"
        )));
    }
    let q = (4.0 * z * z).inv();
    let mut power = Complex64::new(1.0, 0.0);
    let mut sum = Complex64::new(0.0, 0.0);
    for n in 0..terms {
        sum += power * catalan_f64(n);
        power *= q;
    }
    Ok(-sum / z)
}

/// Aronszajn–Krein formula `F_α = F / (1 + αF)`: the Borel transform of the
/// spectral measure of `M_x + αE` for the cyclic vector 1 in `L²(μ_c)`.
pub fn aronszajn_krein(z: Complex64, alpha: f64) -> Result<Complex64> {
    let f = borel_mu_c(z)?;
    let den = 1.0 + alpha * f;
    if den.norm() <= 1e-14 * (1.0 + (alpha * f).norm()) {
        return Err(SpectralError::Pole(z.to_string()));
    }
    Ok(f / den)
}

/// `(1/π) Im F_α(x + iε)`.
pub fn boundary_density(x: f64, alpha: f64, eps: f64) -> Result<f64> {
    if !(x > -1.0 && x < 1.0) {
        return Err(SpectralError::Domain(format!("x must lie in (−1, 1), got {x}")));
    }
    if !(eps > 0.0) {
        return Err(SpectralError::Domain(format!("ε must be positive, got {eps}")));
    }
    Ok(aronszajn_krein(Complex64::new(x, eps), alpha)?.im / PI)
}

/// The ε ↓ 0 limit of [`boundary_density`]:
/// `(2/π)√(1−x²) / (1 − 4αx + 4α²)`.
pub fn boundary_limit(x: f64, alpha: f64) -> f64 {
    if x.abs() >= 1.0 {
        return 0.0;
    }
    FRAC_2_PI * ((1.0 - x) * (1.0 + x)).sqrt() / (1.0 - 4.0 * alpha * x + 4.0 * alpha * alpha)
}

/// Default height above the real axis for boundary values.
pub const DEFAULT_EPSILON: f64 = 1e-6;

/// Boundary value at `ε` together with a refinement check at `ε/2` and `ε/4`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundaryEstimate {
    pub value: f64,
    pub half_step: f64,
    pub quarter_step: f64,
    /// `|v(ε/4) − v(ε/2)| ≤ |v(ε/2) − v(ε)|`, or both differences at rounding level.
    pub converging: bool,
    /// Richardson extrapolation `2 v(ε/2) − v(ε)`.
    pub extrapolated: f64,
}

pub fn boundary_density_refined(x: f64, alpha: f64, eps: f64) -> Result<BoundaryEstimate> {
    let value = boundary_density(x, alpha, eps)?;
    let half_step = boundary_density(x, alpha, eps / 2.0)?;
    let quarter_step = boundary_density(x, alpha, eps / 4.0)?;
    let d1 = (half_step - value).abs();
    let d2 = (quarter_step - half_step).abs();
    let floor = 1e-13 * value.abs().max(1.0);
    Ok(BoundaryEstimate {
        value,
        half_step,
        quarter_step,
        converging: d2 <= d1 || d2.max(d1) <= floor,
        extrapolated: 2.0 * half_step - value,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::spectral::{mu_cp_density, SpectralMeasure};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn sqrt_matches_principal_branch() {
        for &(x, y) in &[
            (1.0, 0.0),
            (4.0, 1e-12),
            (-4.0, 1e-12),
            (-4.0, -1e-12),
            (0.3, -2.0),
            (-1e-3, 5.0),
            (1e8, 1.0),
        ] {
            let w = c(x, y);
            let ours = principal_sqrt(w);
            let reference = w.sqrt();
            assert!((ours - reference).norm() <= 1e-15 * reference.norm().max(1.0));
        }
    }

    #[test]
    fn sqrt_branch_limits_onto_the_cut() {
        for x in [-0.5, -2.0, -7.0] {
            let above = principal_sqrt(c(x, 1e-14));
            let below = principal_sqrt(c(x, -1e-14));
            assert!((above - c(0.0, (-x).sqrt())).norm() < 1e-12);
            assert!((below - c(0.0, -(-x).sqrt())).norm() < 1e-12);
        }
    }

    #[test]
    fn inner_root_limits() {
        // √(1 − 1/z²) → ±i√(1/x² − 1) as z ↓ x from the upper half-plane
        for x in [0.2, 0.7, -0.2, -0.7] {
            let z = c(x, 1e-12);
            let s = principal_sqrt(1.0 - (z * z).inv());
            let target = (1.0 / (x * x) - 1.0).sqrt() * x.signum();
            assert!((s - c(0.0, target)).norm() < 1e-8, "{x}: {s}");
        }
    }

    #[test]
    fn borel_at_two() {
        let f = borel_mu_c(c(2.0, 0.0)).unwrap();
        let expected = -4.0 * (1.0 - 3f64.sqrt() / 2.0);
        assert!((f.re - expected).abs() < 1e-15);
        assert_eq!(f.im, 0.0);
        let series = borel_mu_c_series(c(2.0, 0.0), 60).unwrap();
        assert!((series - f).norm() <= 1e-14);
        assert!((f.re + 0.535898).abs() < 1e-6);
    }

    #[test]
    fn borel_matches_quadrature() {
        let mu = SpectralMeasure::semicircle();
        for z in [c(0.0, 10.0), c(0.3, 0.5), c(-2.0, 0.1), c(1.5, -0.7)] {
            let closed = borel_mu_c(z).unwrap();
            let quad = mu.borel(z);
            assert!((closed - quad).norm() < 1e-10, "{z}");
        }
    }

    #[test]
    fn borel_asymptotics_and_symmetry() {
        for r in [1e3, 1e6, 1e9] {
            for z in [c(r, 0.0), c(0.0, r), c(r, -r)] {
                assert!((z * borel_mu_c(z).unwrap() + 1.0).norm() < 1.0 / r);
            }
        }
        for z in [c(0.1, 0.2), c(3.0, -1.0), c(-0.5, 2.0), c(1.2, 0.0)] {
            let lhs = borel_mu_c(-z).unwrap();
            let rhs = -borel_mu_c(z).unwrap();
            assert!((lhs - rhs).norm() < 1e-12);
        }
    }

    #[test]
    fn borel_rejects_cut() {
        assert!(borel_mu_c(c(0.5, 0.0)).is_err());
        assert!(borel_mu_c(c(-1.0, 0.0)).is_err());
        assert!(borel_mu_c(c(1.0, 1e-300)).is_ok());
    }

    #[test]
    fn boundary_value_of_unperturbed() {
        for x in [-0.9, -0.4, 0.1, 0.6] {
            let f = borel_mu_c(c(x, 1e-10)).unwrap();
            assert!((f - c(-2.0 * x, 2.0 * (1.0 - x * x).sqrt())).norm() < 1e-8);
        }
    }

    #[test]
    fn aronszajn_krein_matches_perturbed_quadrature() {
        for n in 1..=4 {
            let alpha = 0.5 / (n as f64).sqrt();
            let mu = SpectralMeasure::perturbed(n).unwrap();
            for z in [c(0.0, 1.0), c(0.5, 0.3), c(-0.8, 0.5), c(2.0, 0.0), c(0.2, -0.4)] {
                let closed = aronszajn_krein(z, alpha).unwrap();
                let quad = mu.borel(z);
                assert!((closed - quad).norm() < 1e-8, "N={n} z={z}");
            }
        }
        let z = c(0.7, -0.2);
        assert_eq!(aronszajn_krein(z, 0.0).unwrap(), borel_mu_c(z).unwrap());
        let f = aronszajn_krein(c(0.0, 2.0), 0.5).unwrap();
        assert!(f.is_finite() && f.im > 0.0);
    }

    #[test]
    fn aronszajn_krein_pole() {
        // F(z) = −1/α has a real root outside [−1, 1] once α > 1/2.
        let alpha = 1.0;
        // F(t) = −2t(1 − √(1 − 1/t²)) = −1 at t = 5/4
        assert!(matches!(
            aronszajn_krein(c(1.25, 0.0), alpha),
            Err(SpectralError::Pole(_))
        ));
    }

    #[test]
    fn boundary_density_limits() {
        let b = boundary_density(0.0, 0.5, 1e-6).unwrap();
        assert!((b - 1.0 / PI).abs() < 1e-4);
        for n in [1, 2, 4] {
            let alpha = 0.5 / (n as f64).sqrt();
            for i in 0..=40 {
                let x = -0.95 + 1.9 * i as f64 / 40.0;
                assert!((boundary_limit(x, alpha) - mu_cp_density(x, n)).abs() < 1e-12);
                let est = boundary_density_refined(x, alpha, DEFAULT_EPSILON).unwrap();
                assert!((est.value - mu_cp_density(x, n)).abs() < 1e-4);
                assert!(est.converging, "x={x} {est:?}");
            }
        }
        for x in [-0.5, 0.3] {
            let v = boundary_density(x, 0.0, 1e-7).unwrap();
            assert!((v - FRAC_2_PI * (1.0 - x * x).sqrt()).abs() < 1e-6);
        }
        assert!(boundary_density(1.0, 0.5, 1e-6).is_err());
        assert!(boundary_density(0.0, 0.5, 0.0).is_err());
    }
}
