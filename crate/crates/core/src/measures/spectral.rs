use std::f64::consts::{FRAC_2_PI, PI};

use num_complex::Complex64;

use crate::error::{Result, SpectralError};
use crate::measures::catalan::catalan_f64;
use crate::quadrature::{integrate_interval, Quadrature, DEFAULT_NODES};

/// Density `(2/π)√(1−x²)` of the semicircle law on [-1, 1].
pub fn mu_c_density(x: f64) -> f64 {
    if x.abs() >= 1.0 {
        return 0.0;
    }
    FRAC_2_PI * ((1.0 - x) * (1.0 + x)).sqrt()
}

/// `1 − 2x/√N + 1/N`, written as `(1 − 1/√N)² + 2(1−x)/√N` so it stays
/// accurate near `x = 1` when `N = 1`.
fn perturbation_denominator(x: f64, branching: usize) -> f64 {
    let r = 1.0 / (branching as f64).sqrt();
    (1.0 - r).powi(2) + 2.0 * r * (1.0 - x)
}

/// Density of the spectral measure of δ_∅ in the variable `x`, where the
/// Laplacian acts as multiplication by `N + 1 − 2√N x`:
/// `(2/π)√(1−x²) / (1 − 2x/√N + 1/N)`.
///
/// Returns 0 at `x = ±1`. For `N = 1` the density is unbounded as `x → 1`
/// (it behaves like `(1−x)^{-1/2}`) but remains integrable.
pub fn mu_cp_density(x: f64, branching: usize) -> f64 {
    if x.abs() >= 1.0 {
        return 0.0;
    }
    mu_c_density(x) / perturbation_denominator(x, branching)
}

/// `∫ xⁿ dμ_c`: `C_{n/2} / 2ⁿ` for even `n`, zero for odd `n`.
pub fn mu_c_moment(n: usize) -> f64 {
    if n % 2 == 1 {
        return 0.0;
    }
    catalan_f64(n / 2) / 2f64.powi(n as i32)
}

/// `∫ x^{2k} (2/(πR²))√(R²−x²) dx = (R/2)^{2k} C_k`.
pub fn scaled_moment(radius: f64, k: usize) -> Result<f64> {
    if !(radius > 0.0) {
        return Err(SpectralError::Domain(format!("radius must be positive, got {radius}")));
    }
    Ok((radius / 2.0).powi(2 * k as i32) * catalan_f64(k))
}

/// Spectrum `[N+1−2√N, N+1+2√N]` of the tree Laplacian.
pub fn spectrum_interval(branching: usize) -> Result<(f64, f64)> {
    if branching == 0 {
        return Err(SpectralError::ZeroBranching);
    }
    let n = branching as f64;
    let s = n.sqrt();
    Ok(((s - 1.0).powi(2), n + 1.0 + 2.0 * s))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeasureKind {
    /// Wigner's semicircle law μ_c.
    Semicircle,
    /// The rank-one perturbed measure μ_{c+p} for branching `N`.
    Perturbed { branching: usize },
}

/// An absolutely continuous probability measure on [-1, 1] with a
/// quadrature rule for integrating against it.
///
/// μ_c uses Gauss–Chebyshev of the second kind. μ_{c+p} uses the first kind,
/// with `(1−x²)/(1 − 2x/√N + 1/N)` folded into the weights; for `N = 1` that
/// factor is the polynomial `(1+x)/2`, so the endpoint singularity is
/// integrated exactly.
#[derive(Debug, Clone)]
pub struct SpectralMeasure {
    kind: MeasureKind,
    label: String,
    quadrature: Quadrature,
    legendre: Quadrature,
}

impl SpectralMeasure {
    pub fn semicircle() -> Self {
        Self::semicircle_with_nodes(DEFAULT_NODES)
    }

    pub fn semicircle_with_nodes(nodes: usize) -> Self {
        let quadrature = Quadrature::chebyshev_second_kind(nodes).reweighted(|_| FRAC_2_PI);
        SpectralMeasure {
            kind: MeasureKind::Semicircle,
            label: "mu_c".into(),
            quadrature,
            legendre: legendre_rule(),
        }
    }

    pub fn perturbed(branching: usize) -> Result<Self> {
        Self::perturbed_with_nodes(branching, DEFAULT_NODES)
    }

    pub fn perturbed_with_nodes(branching: usize, nodes: usize) -> Result<Self> {
        if branching == 0 {
            return Err(SpectralError::ZeroBranching);
        }
        let quadrature = Quadrature::chebyshev_first_kind(nodes).reweighted(|x| {
            FRAC_2_PI * (1.0 + x) * (1.0 - x) / perturbation_denominator(x, branching)
        });
        Ok(SpectralMeasure {
            kind: MeasureKind::Perturbed { branching },
            label: format!("mu_c+p(N={branching})"),
            quadrature,
            legendre: legendre_rule(),
        })
    }

    pub fn kind(&self) -> MeasureKind {
        self.kind
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn quadrature(&self) -> &Quadrature {
        &self.quadrature
    }

    pub fn density(&self, x: f64) -> f64 {
        match self.kind {
            MeasureKind::Semicircle => mu_c_density(x),
            MeasureKind::Perturbed { branching } => mu_cp_density(x, branching),
        }
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.quadrature.integrate(f)
    }

    pub fn total_mass(&self) -> f64 {
        self.integrate(|_| 1.0)
    }

    pub fn moment(&self, n: usize) -> f64 {
        self.integrate(|x| x.powi(n as i32))
    }

    /// Borel transform `∫ dμ(x) / (x − z)` by quadrature.
    pub fn borel(&self, z: Complex64) -> Complex64 {
        self.quadrature
            .integrate_complex(|x| (Complex64::new(x, 0.0) - z).inv())
    }

    /// Distribution function `μ((−∞, t])`, integrated in `θ = arccos x`
    /// where the integrand is smooth for every `N`.
    pub fn cdf(&self, t: f64) -> f64 {
        if t <= -1.0 {
            return 0.0;
        }
        if t >= 1.0 {
            return 1.0;
        }
        let theta0 = t.acos();
        let integrand = |theta: f64| {
            let s2 = theta.sin().powi(2);
            match self.kind {
                MeasureKind::Semicircle => FRAC_2_PI * s2,
                MeasureKind::Perturbed { branching } => {
                    let r = 1.0 / (branching as f64).sqrt();
                    let den = (1.0 - r).powi(2) + 4.0 * r * (theta / 2.0).sin().powi(2);
                    FRAC_2_PI * s2 / den
                }
            }
        };
        integrate_interval(&self.legendre, theta0, PI, 16, integrand)
    }
}

fn legendre_rule() -> Quadrature {
    Quadrature::gauss_legendre(32).expect("Golub–Welsch on a 32×32 Jacobi matrix converges")
}
