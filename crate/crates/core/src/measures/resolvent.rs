//! The operator `A_Δ f = 2√N x f + E(f)` on `L²(μ_c)`, where `E(f) = ∫ f dμ_c`
//! (projection onto constants), and its resolvent off the spectrum.

use std::f64::consts::FRAC_2_PI;

use crate::error::{Result, SpectralError};
use crate::quadrature::{Quadrature, DEFAULT_NODES};

fn check_outside(lambda: f64, branching: usize) -> Result<f64> {
    if branching == 0 {
        return Err(SpectralError::ZeroBranching);
    }
    let edge = 2.0 * (branching as f64).sqrt();
    if !(lambda.abs() >= edge) || !lambda.is_finite() {
        return Err(SpectralError::Domain(format!(
            "λ = {lambda} lies inside (−2√N, 2√N) = (−{edge}, {edge})"
        )));
    }
    Ok(edge)
}

/// `I_λ = ∫ (λ − 2√N x)^{−1} dμ_c(x)` for `|λ| ≥ 2√N`.
///
/// Integrated as `∫ (2/π)(1−x²)/(λ − 2√N x) · dx/√(1−x²)` with Gauss–Chebyshev
/// of the first kind: at `λ = ±2√N` one factor of `1 ∓ x` cancels and the
/// integrand is a polynomial, so the edge values are exact.
pub fn i_lambda(lambda: f64, branching: usize) -> Result<f64> {
    let edge = check_outside(lambda, branching)?;
    let rule = Quadrature::chebyshev_first_kind(DEFAULT_NODES);
    Ok(rule.integrate(|x| {
        let (p, m) = (1.0 + x, 1.0 - x);
        if lambda > 0.0 && lambda == edge {
            FRAC_2_PI * p / edge
        } else if lambda < 0.0 && -lambda == edge {
            -FRAC_2_PI * m / edge
        } else {
            FRAC_2_PI * p * m / (lambda - edge * x)
        }
    }))
}

/// Quadrature rule for `∫ · dμ_c` used by the resolvent solver.
pub fn semicircle_rule(nodes: usize) -> Quadrature {
    Quadrature::chebyshev_second_kind(nodes).reweighted(|_| FRAC_2_PI)
}

/// The solution `f = (λ − A_Δ)^{−1} g`, `f(x) = (g(x) + E(f)) / (λ − 2√N x)`.
pub struct Resolvent<G> {
    lambda: f64,
    edge: f64,
    mean: f64,
    g: G,
}

impl<G: Fn(f64) -> f64> Resolvent<G> {
    /// `E(f)`, the constant component of the solution.
    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn eval(&self, x: f64) -> f64 {
        ((self.g)(x) + self.mean) / (self.lambda - self.edge * x)
    }
}

/// Solves `(λI − A_Δ) f = g` for `|λ| > 2√N` using
/// `E(f) = E(g/(λ − 2√N x)) / (1 − I_λ)`.
pub fn resolvent_a_delta<G>(lambda: f64, g: G, branching: usize, rule: &Quadrature) -> Result<Resolvent<G>>
where
    G: Fn(f64) -> f64,
{
    let edge = check_outside(lambda, branching)?;
    if lambda.abs() == edge {
        return Err(SpectralError::Domain(format!(
            "λ = {lambda} is on the edge of the spectrum"
        )));
    }
    let i = rule.integrate(|x| 1.0 / (lambda - edge * x));
    let projected = rule.integrate(|x| g(x) / (lambda - edge * x));
    Ok(Resolvent {
        lambda,
        edge,
        mean: projected / (1.0 - i),
        g,
    })
}

/// `‖(λ − A_Δ) f − g‖_{L²(μ_c)}` evaluated with `rule`, computing `E(f)`
/// afresh from `f` itself.
pub fn resolvent_residual<F, G>(lambda: f64, branching: usize, f: F, g: G, rule: &Quadrature) -> f64
where
    F: Fn(f64) -> f64,
    G: Fn(f64) -> f64,
{
    let edge = 2.0 * (branching as f64).sqrt();
    let mean = rule.integrate(&f);
    rule.integrate(|x| {
        let r = lambda * f(x) - (edge * x * f(x) + mean) - g(x);
        r * r
    })
    .sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::borel::borel_mu_c;
    use num_complex::Complex64;

    // Independent route: I_λ = −F(λ/(2√N)) / (2√N) via the Borel transform.
    fn i_lambda_borel(lambda: f64, n: usize) -> f64 {
        let edge = 2.0 * (n as f64).sqrt();
        -borel_mu_c(Complex64::new(lambda / edge, 0.0)).unwrap().re / edge
    }

    #[test]
    fn edge_values() {
        for n in 1..=6 {
            let s = (n as f64).sqrt();
            assert!((i_lambda(2.0 * s, n).unwrap() - 1.0 / s).abs() < 1e-14);
            assert!((i_lambda(-2.0 * s, n).unwrap() + 1.0 / s).abs() < 1e-14);
        }
    }

    #[test]
    fn odd_and_matches_borel() {
        for n in 1..=4 {
            for lambda in [2.0 * (n as f64).sqrt() + 1e-3, 5.0, 12.5, 100.0] {
                let a = i_lambda(lambda, n).unwrap();
                let b = i_lambda(-lambda, n).unwrap();
                assert!((a + b).abs() < 1e-14);
                assert!((a - i_lambda_borel(lambda, n)).abs() < 1e-10, "N={n} λ={lambda}");
            }
        }
        let v = i_lambda(100.0, 1).unwrap();
        assert!((v - 0.01).abs() < 1e-5);
    }

    #[test]
    fn rejects_inside_spectrum() {
        assert!(i_lambda(1.9, 1).is_err());
        assert!(i_lambda(0.0, 4).is_err());
        let rule = semicircle_rule(64);
        assert!(resolvent_a_delta(1.0, |_| 1.0, 1, &rule).is_err());
        assert!(resolvent_a_delta(2.0, |_| 1.0, 1, &rule).is_err());
    }

    #[test]
    fn zero_data_gives_zero() {
        let rule = semicircle_rule(DEFAULT_NODES);
        let f = resolvent_a_delta(3.0, |_| 0.0, 1, &rule).unwrap();
        assert_eq!(f.mean(), 0.0);
        assert_eq!(f.eval(0.4), 0.0);
    }

    #[test]
    fn residual_is_small() {
        let solve = semicircle_rule(DEFAULT_NODES);
        let check = Quadrature::chebyshev_first_kind(1001).reweighted(|x| FRAC_2_PI * (1.0 - x * x));
        let cases: Vec<(usize, f64)> = vec![
            (1, 3.0),
            (1, 2.0 + 1e-3),
            (1, -2.5),
            (2, 2.0 * 2f64.sqrt() + 1e-3),
            (3, 10.0),
            (4, -4.2),
        ];
        let gs: Vec<Box<dyn Fn(f64) -> f64>> = vec![
            Box::new(|_| 1.0),
            Box::new(|x| x * x - 0.3),
            Box::new(|x: f64| (3.0 * x).cos()),
        ];
        for (n, lambda) in cases {
            for g in &gs {
                let f = resolvent_a_delta(lambda, g, n, &solve).unwrap();
                let r = resolvent_residual(lambda, n, |x| f.eval(x), g, &check);
                assert!(r <= 1e-8, "N={n} λ={lambda}: residual {r}");
            }
        }
    }
}
