//! Named invariant suites. Each check reports a residual against a fixed
//! tolerance; a check passes when `residual ≤ tolerance`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cyclic::{kolmogorov_to_perturbed, labels_up_to, level_completeness, truncated_spectral_measure, verify_block_structure};
use crate::error::{Result, SpectralError};
use crate::graph::{LatticeTorus, TruncatedTree};
use crate::jacobi::JacobiMatrix;
use crate::lattice::{dft_verify, spectrum_mismatch};
use crate::measures::{
    borel_mu_c, borel_mu_c_series, boundary_density, i_lambda, mu_c_moment, mu_cp_density, resolvent_a_delta,
    resolvent_residual, semicircle_rule, spectrum_interval, CatalanTable, SpectralMeasure, DEFAULT_EPSILON,
};
use crate::operators::{apply_laplacian, verify_operator_identities, VertexVector};
use crate::periodic::{
    char_poly, char_poly_sequence, detect_period, eigvec_generate, golden_eigenvalues, resultant, root_check,
};
use crate::quadrature::Quadrature;
use crate::resistance::resistance_report;
use crate::walks::{
    adjacency_return_count, bridge_check, brute_force_path_count, laplacian_moment_from_paths,
    laplacian_transition_deviation, monte_carlo_check, path_count, WalkConfig,
};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl Check {
    pub fn new(name: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        Check {
            name: name.into(),
            residual,
            tolerance,
            passed: residual <= tolerance,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Operators,
    Cyclic,
    Measures,
    Resistance,
    Walks,
    Eigen,
    Lattice,
    All,
}

impl Suite {
    pub const INDIVIDUAL: [Suite; 7] = [
        Suite::Operators,
        Suite::Cyclic,
        Suite::Measures,
        Suite::Resistance,
        Suite::Walks,
        Suite::Eigen,
        Suite::Lattice,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Operators => "operators",
            Suite::Cyclic => "cyclic",
            Suite::Measures => "measures",
            Suite::Resistance => "resistance",
            Suite::Walks => "walks",
            Suite::Eigen => "eigen",
            Suite::Lattice => "lattice",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = SpectralError;

    fn from_str(s: &str) -> Result<Self> {
        Suite::INDIVIDUAL
            .iter()
            .chain(&[Suite::All])
            .copied()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| SpectralError::Domain(format!("unknown suite {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct VerifyOptions {
    /// Restricts tree checks to a single branching number.
    pub branching: Option<usize>,
    pub trials: u64,
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            branching: None,
            trials: 1_000_000,
            seed: 0,
        }
    }
}

impl VerifyOptions {
    fn branchings(&self, default: &[usize]) -> Vec<usize> {
        match self.branching {
            Some(n) => vec![n],
            None => default.to_vec(),
        }
    }

    /// Deterministic sub-seed for one component of a suite.
    fn sub_seed(&self, tag: u64) -> u64 {
        let mut z = self.seed ^ tag.wrapping_mul(0x9E37_79B9_7F4A_7C15);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }
}

/// Runs one suite, or all of them in a fixed order.
pub fn run_suite(suite: Suite, opts: &VerifyOptions) -> Result<Vec<Check>> {
    if opts.branching == Some(0) {
        return Err(SpectralError::ZeroBranching);
    }
    match suite {
        Suite::Operators => operators_suite(opts),
        Suite::Cyclic => cyclic_suite(opts),
        Suite::Measures => measures_suite(opts),
        Suite::Resistance => resistance_suite(opts),
        Suite::Walks => walks_suite(opts),
        Suite::Eigen => eigen_suite(),
        Suite::Lattice => lattice_suite(),
        Suite::All => {
            let mut all = Vec::new();
            for s in Suite::INDIVIDUAL {
                all.extend(run_suite(s, opts)?);
            }
            Ok(all)
        }
    }
}

fn max_over<I: IntoIterator<Item = Result<f64>>>(values: I) -> Result<f64> {
    values.into_iter().try_fold(0.0f64, |m, v| Ok(m.max(v?)))
}

fn operators_suite(opts: &VerifyOptions) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.sub_seed(1));
    for n in opts.branchings(&[1, 2, 3]) {
        let tree = TruncatedTree::new(n, 6)?;
        let r = verify_operator_identities(&tree)?;
        let p = format!("operators.N{n}");
        checks.push(Check::new(format!("{p}.shift_coisometry"), r.shift_coisometry, 1e-12));
        checks.push(Check::new(format!("{p}.shift_sum"), r.shift_sum, 1e-12));
        checks.push(Check::new(format!("{p}.u_adjoint"), r.u_adjoint, 1e-12));
        checks.push(Check::new(format!("{p}.laplacian_decomposition"), r.laplacian, 1e-12));

        let mut symmetry: f64 = 0.0;
        let mut positivity: f64 = 0.0;
        for _ in 0..20 {
            let u = random_vector(&mut rng, tree.len());
            let v = random_vector(&mut rng, tree.len());
            let lu = apply_laplacian(&tree, &u)?;
            let lv = apply_laplacian(&tree, &v)?;
            symmetry = symmetry.max((u.dot(&lv) - lu.dot(&v)).abs() / u.norm().max(1.0) / v.norm().max(1.0));
            positivity = positivity.max(-v.dot(&lv));
        }
        checks.push(Check::new(format!("{p}.laplacian_symmetry"), symmetry, 1e-12));
        checks.push(Check::new(format!("{p}.laplacian_positivity"), positivity.max(0.0), 1e-12));
    }
    Ok(checks)
}

fn random_vector(rng: &mut ChaCha8Rng, len: usize) -> VertexVector {
    VertexVector::from_vec((0..len).map(|_| rng.random_range(-1.0..1.0)).collect())
}

fn cyclic_suite(opts: &VerifyOptions) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for n in opts.branchings(&[2, 3]) {
        let tree = TruncatedTree::new(n, 8)?;
        let r = verify_block_structure(&tree, &labels_up_to(n, 2), 5)?;
        let p = format!("cyclic.N{n}");
        checks.push(Check::new(format!("{p}.block_entries"), r.block_deviation, 1e-12));
        checks.push(Check::new(format!("{p}.cross_block_zero"), r.cross_block, 1e-12));
        checks.push(Check::new(format!("{p}.orthonormality"), r.orthonormality, 1e-12));
        let mut deficit = 0usize;
        for m in 0..=4 {
            let (count, rank) = level_completeness(n, m)?;
            deficit = deficit.max(n.pow(m as u32).abs_diff(count)).max(count.abs_diff(rank));
        }
        checks.push(Check::new(format!("{p}.completeness_rank"), deficit as f64, 0.0));
    }
    for n in opts.branchings(&[1, 2, 3, 4]) {
        let p = format!("cyclic.N{n}");
        let (lo, hi) = spectrum_interval(n)?;
        let mut outside: f64 = 0.0;
        for j in [JacobiMatrix::d_omega(n, 200)?, JacobiMatrix::d(n, 200)?] {
            for lambda in j.eigen(false)?.values {
                outside = outside.max(lo - lambda).max(lambda - hi);
            }
        }
        checks.push(Check::new(format!("{p}.spectrum_interval_M200"), outside.max(0.0), 0.05));
        checks.push(Check::new(format!("{p}.kolmogorov_M200"), kolmogorov_to_perturbed(n, 200)?, 0.02));
        let size = 10;
        let discrete = truncated_spectral_measure(n, size)?;
        let continuous = SpectralMeasure::perturbed(n)?;
        let s = (n as f64).sqrt();
        let moment_gap = max_over((0..=2 * size - 1).map(|k| {
            let exact = continuous.integrate(|x| (n as f64 + 1.0 - 2.0 * s * x).powi(k as i32));
            Ok((discrete.moment(k) - exact).abs() / exact.abs().max(1.0))
        }))?;
        checks.push(Check::new(format!("{p}.truncated_moments"), moment_gap, 1e-9));
    }
    Ok(checks)
}

fn measures_suite(opts: &VerifyOptions) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let re_s = JacobiMatrix::shift_real_part(13)?;
    let catalan = CatalanTable::new(12)?;
    let even = max_over((0..=12).map(|n| {
        let exact = catalan.get(n).unwrap_or(0) as f64 / 4f64.powi(n as i32);
        Ok((re_s.moment(2 * n)? - exact).abs())
    }))?;
    let odd = max_over((0..12).map(|n| Ok(re_s.moment(2 * n + 1)?.abs())))?;
    checks.push(Check::new("measures.semicircle_even_moments", even, 1e-12));
    checks.push(Check::new("measures.semicircle_odd_moments", odd, 1e-14));
    let table = CatalanTable::new(33)?;
    checks.push(Check::new(
        "measures.catalan_recursion_closed_form",
        table.closed_form_mismatches().len() as f64,
        0.0,
    ));
    let mu_c = SpectralMeasure::semicircle();
    let quad = max_over((0..=24).map(|n| Ok((mu_c.moment(n) - mu_c_moment(n)).abs())))?;
    checks.push(Check::new("measures.semicircle_quadrature_moments", quad, 1e-12));

    let mut series_gap: f64 = 0.0;
    for r in [1.5, 2.0, 4.0, 10.0] {
        for k in 0..16 {
            let z = Complex64::from_polar(r, 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / 16.0);
            let closed = borel_mu_c(z)?;
            let series = borel_mu_c_series(z, 60)?;
            series_gap = series_gap.max((closed - series).norm() / closed.norm());
        }
    }
    checks.push(Check::new("measures.borel_series_agreement", series_gap, 1e-12));

    for n in opts.branchings(&[1, 2, 4]) {
        let p = format!("measures.N{n}");
        let alpha = 0.5 / (n as f64).sqrt();
        let sup = max_over((0..=1980).map(|i| {
            let x = -0.99 + i as f64 * 0.001;
            Ok((boundary_density(x, alpha, DEFAULT_EPSILON)? - mu_cp_density(x, n)).abs())
        }))?;
        checks.push(Check::new(format!("{p}.aronszajn_krein_boundary"), sup, 1e-4));
        let mu = SpectralMeasure::perturbed(n)?;
        checks.push(Check::new(format!("{p}.perturbed_unit_mass"), (mu.total_mass() - 1.0).abs(), 1e-10));
        let borel_gap = [Complex64::new(0.0, 1.0), Complex64::new(0.5, 0.3), Complex64::new(-2.0, 0.0)]
            .iter()
            .map(|&z| Ok((crate::measures::aronszajn_krein(z, alpha)? - mu.borel(z)).norm()))
            .collect::<Result<Vec<f64>>>()?
            .into_iter()
            .fold(0.0, f64::max);
        checks.push(Check::new(format!("{p}.aronszajn_krein_vs_quadrature"), borel_gap, 1e-8));

        let edge = 2.0 * (n as f64).sqrt();
        let i_gap = max_over([edge + 1e-3, 5.0 + edge, -edge - 0.5].iter().map(|&lambda| {
            let oracle = -borel_mu_c(Complex64::new(lambda / edge, 0.0))?.re / edge;
            Ok((i_lambda(lambda, n)? - oracle).abs())
        }))?;
        checks.push(Check::new(format!("{p}.i_lambda_vs_borel"), i_gap, 1e-10));
        // F(1+) = -2, so the edge value is 1/sqrt(N).
        let at_edge = (i_lambda(edge, n)? - 1.0 / (n as f64).sqrt()).abs();
        checks.push(Check::new(format!("{p}.i_lambda_at_edge"), at_edge, 1e-10));

        let solve = semicircle_rule(512);
        let check_rule = Quadrature::chebyshev_first_kind(1001)
            .reweighted(|x| std::f64::consts::FRAC_2_PI * (1.0 - x * x));
        let resid = max_over([edge + 1e-3, edge + 1.0, -edge - 2.0].iter().map(|&lambda| {
            let g = |x: f64| (3.0 * x).cos() + x;
            let f = resolvent_a_delta(lambda, g, n, &solve)?;
            Ok(resolvent_residual(lambda, n, |x| f.eval(x), g, &check_rule))
        }))?;
        checks.push(Check::new(format!("{p}.resolvent_residual"), resid, 1e-8));
    }
    Ok(checks)
}

fn resistance_suite(opts: &VerifyOptions) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for n in opts.branchings(&[1, 2, 3]) {
        let depth = if n == 3 { 5 } else { 6 };
        let r = resistance_report(n, depth, 1000, opts.sub_seed(100 + n as u64))?;
        let p = format!("resistance.N{n}");
        checks.push(Check::new(format!("{p}.potential_dipole_residual"), r.potential_residual, 1e-12));
        checks.push(Check::new(format!("{p}.distance_two_ways"), r.distance_mismatch, 0.0));
        checks.push(Check::new(format!("{p}.gram_psd"), (-r.gram_min_eigenvalue).max(0.0), 1e-10));
        checks.push(Check::new(format!("{p}.negative_semidefinite"), r.neg_semidefinite_max.max(0.0), 1e-10));
        checks.push(Check::new(format!("{p}.independent_increments"), r.increment_residual, 1e-12));
        checks.push(Check::new(format!("{p}.grounded_solve_spread"), r.solve_spread, 1e-6));
    }
    Ok(checks)
}

fn walks_suite(opts: &VerifyOptions) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for n in opts.branchings(&[1, 2, 3]) {
        let p = format!("walks.N{n}");
        let mut mismatches = 0u32;
        for k in 0..=8 {
            mismatches += u32::from(path_count(n, k)? != brute_force_path_count(n, k)?);
        }
        checks.push(Check::new(format!("{p}.dp_vs_brute_force"), mismatches as f64, 0.0));
        let mut operator_mismatch = 0u32;
        for k in 0..=14 {
            let tree = TruncatedTree::new(n, k / 2 + 1)?;
            operator_mismatch += u32::from(adjacency_return_count(&tree, k)? != path_count(n, k)?);
        }
        checks.push(Check::new(format!("{p}.matrix_free_returns"), operator_mismatch as f64, 0.0));
        let tree = TruncatedTree::new(n, 5)?;
        checks.push(Check::new(
            format!("{p}.laplacian_transition"),
            laplacian_transition_deviation(&tree)?,
            1e-12,
        ));
    }
    for n in opts.branchings(&[1, 2, 3, 4]) {
        let p = format!("walks.N{n}");
        let bridge = max_over((0..=16).map(|k| Ok(bridge_check(n, k)?.max_relative)))?;
        checks.push(Check::new(format!("{p}.moment_bridge"), bridge, 1e-9));
        let j = JacobiMatrix::d_omega(n, 8)?;
        let chain = max_over((0..=14).map(|k| {
            let exact = laplacian_moment_from_paths(n, k)? as f64;
            Ok((j.moment(k)? - exact).abs() / exact.abs())
        }))?;
        checks.push(Check::new(format!("{p}.binomial_chain"), chain, 1e-9));
    }
    for n in opts.branchings(&[1, 2]) {
        let mut worst: f64 = 0.0;
        for steps in 0..=10 {
            let cfg = WalkConfig {
                branching: n,
                steps,
                trials: opts.trials,
                seed: opts.sub_seed(1000 * n as u64 + steps as u64),
            };
            worst = worst.max(monte_carlo_check(&cfg)?.deviation_in_sigma);
        }
        checks.push(Check::new(format!("walks.N{n}.monte_carlo_sigma"), worst, 4.0));
    }
    Ok(checks)
}

fn eigen_suite() -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let p3 = char_poly(3)?;
    let p3_mismatch = p3.coefficients() != [1, -6, 5, -1];
    checks.push(Check::new("eigen.p3_expansion", f64::from(u8::from(p3_mismatch)), 0.0));
    let (plus, minus) = golden_eigenvalues();
    let p2 = char_poly(2)?;
    checks.push(Check::new(
        "eigen.golden_roots_of_p2",
        p2.eval(plus).abs().max(p2.eval(minus).abs()),
        1e-14,
    ));
    for (label, lambda, period) in [("zero", 0.0, 1), ("one", 1.0, 6), ("golden_minus", minus, 10), ("golden_plus", plus, 10)] {
        let seq = eigvec_generate(lambda, 200)?;
        checks.push(Check::new(format!("eigen.{label}.residual"), seq.residual(), 1e-9));
        let detected = detect_period(&seq.values)?;
        let miss = if detected == Some(period) { 0.0 } else { 1.0 };
        checks.push(Check::new(format!("eigen.{label}.period_{period}"), miss, 0.0));
        let e = eigvec_generate(lambda, 400)?.partial_energy();
        checks.push(Check::new(format!("eigen.{label}.energy_linear_growth"), (e[400] / e[200] - 2.0).abs(), 0.05));
    }
    let seq = char_poly_sequence(7)?;
    let zero_resultants = (1..=6).filter(|&n| resultant(&seq[n], &seq[n + 1]) == 0.into()).count();
    checks.push(Check::new("eigen.consecutive_resultants_nonzero", zero_resultants as f64, 0.0));
    let sampled = max_over((1..=6).flat_map(|n| {
        let p = &seq[n];
        [-0.5, 0.7, 1.9, 3.3].into_iter().map(move |lambda| {
            let v = eigvec_generate(lambda, 8)?;
            Ok((v.values[n] - p.eval(lambda)).abs())
        })
    }))?;
    checks.push(Check::new("eigen.sequence_equals_polynomial", sampled, 1e-10));
    for n in 1..=5 {
        let r = root_check(n, 200)?;
        let p = format!("eigen.p{n}_roots");
        checks.push(Check::new(format!("{p}.polynomial_residual"), r.polynomial_residual, 1e-12));
        checks.push(Check::new(format!("{p}.companion_vs_jacobi"), r.oracle_gap, 1e-12));
        checks.push(Check::new(format!("{p}.eigen_residual"), r.eigen_residual, 1e-8));
        checks.push(Check::new(format!("{p}.bounded"), r.max_abs, 10.0));
    }
    Ok(checks)
}

fn lattice_suite() -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for d in 1..=3 {
        let mut residual: f64 = 0.0;
        let mut outside: f64 = 0.0;
        let mut dense: f64 = 0.0;
        for side in 2..=16 {
            let torus = LatticeTorus::new(d, side)?;
            let r = dft_verify(&torus)?;
            residual = residual.max(r.max_residual);
            outside = outside.max(-r.min_eigenvalue).max(r.max_eigenvalue - 4.0 * d as f64);
            if torus.len() <= 512 {
                dense = dense.max(spectrum_mismatch(&torus)?);
            }
        }
        checks.push(Check::new(format!("lattice.d{d}.plane_wave_residual"), residual, 1e-10));
        checks.push(Check::new(format!("lattice.d{d}.symbol_range"), outside.max(0.0), 1e-12));
        checks.push(Check::new(format!("lattice.d{d}.dense_spectrum_vs_symbol"), dense, 1e-10));
    }
    Ok(checks)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::INDIVIDUAL.iter().chain(&[Suite::All]) {
            assert_eq!(s.name().parse::<Suite>().unwrap(), *s);
        }
        assert!("bogus".parse::<Suite>().is_err());
    }

    #[test]
    fn checks_fail_on_nan() {
        assert!(!Check::new("x", f64::NAN, 1.0).passed);
        assert!(Check::new("x", 1.0, 1.0).passed);
    }

    #[test]
    fn fast_suites_pass() {
        let opts = VerifyOptions::default();
        for suite in [Suite::Operators, Suite::Eigen, Suite::Resistance] {
            for c in run_suite(suite, &opts).unwrap() {
                assert!(c.passed, "{c:?}");
            }
        }
    }

    #[test]
    fn branching_restriction() {
        let opts = VerifyOptions {
            branching: Some(2),
            ..VerifyOptions::default()
        };
        let checks = run_suite(Suite::Operators, &opts).unwrap();
        assert!(checks.iter().all(|c| c.name.starts_with("operators.N2.")));
        assert!(run_suite(Suite::Operators, &VerifyOptions { branching: Some(0), ..opts }).is_err());
    }

    #[test]
    fn sub_seeds_differ() {
        let opts = VerifyOptions::default();
        assert_ne!(opts.sub_seed(1), opts.sub_seed(2));
        assert_eq!(opts.sub_seed(7), opts.sub_seed(7));
    }
}
