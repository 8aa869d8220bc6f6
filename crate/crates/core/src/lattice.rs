//! The ℤ^d Laplacian on the periodic torus ℤ_L^d and its diagonalisation by
//! plane waves.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Result, SpectralError};
use crate::graph::LatticeTorus;

/// Complex values indexed by the torus vertices in row-major order.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeVector(Vec<Complex64>);

impl LatticeVector {
    pub fn zeros(len: usize) -> Self {
        LatticeVector(vec![Complex64::new(0.0, 0.0); len])
    }

    pub fn from_real(values: &[f64]) -> Self {
        LatticeVector(values.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    pub fn from_complex(values: Vec<Complex64>) -> Self {
        LatticeVector(values)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.0
    }

    /// `Σ conj(u) v`.
    pub fn inner(&self, other: &LatticeVector) -> Complex64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn max_abs_diff(&self, other: &LatticeVector) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

fn check_size(torus: &LatticeTorus, v: &LatticeVector) -> Result<()> {
    if v.len() != torus.len() {
        return Err(SpectralError::SizeMismatch {
            expected: torus.len(),
            actual: v.len(),
        });
    }
    Ok(())
}

/// `(Δv)(n) = Σ_{m∼n} (v(n) − v(m))` over the `2d` periodic neighbour slots.
pub fn apply_lattice_laplacian(torus: &LatticeTorus, v: &LatticeVector) -> Result<LatticeVector> {
    check_size(torus, v)?;
    let out = (0..torus.len())
        .map(|n| torus.neighbors(n).map(|m| v.0[n] - v.0[m]).sum())
        .collect();
    Ok(LatticeVector(out))
}

/// `2v(n) − v(n − e_axis) − v(n + e_axis)`.
pub fn apply_axis_laplacian(torus: &LatticeTorus, v: &LatticeVector, axis: usize) -> Result<LatticeVector> {
    check_size(torus, v)?;
    if axis >= torus.dim() {
        return Err(SpectralError::Domain(format!(
            "axis {axis} out of range for dimension {}",
            torus.dim()
        )));
    }
    let out = (0..torus.len())
        .map(|n| 2.0 * v.0[n] - v.0[torus.step(n, axis, false)] - v.0[torus.step(n, axis, true)])
        .collect();
    Ok(LatticeVector(out))
}

/// Fourier symbol `4 Σ_k sin²(x_k / 2)`.
pub fn symbol(x: &[f64]) -> f64 {
    x.iter().map(|&t| 4.0 * (t / 2.0).sin().powi(2)).sum()
}

/// `e^{2πi m·n/L}` for frequency `m`, built from an exact table of `L`-th
/// roots of unity.
pub fn plane_wave(torus: &LatticeTorus, frequency: &[usize]) -> LatticeVector {
    let coords: Vec<Vec<usize>> = (0..torus.len()).map(|n| torus.coords(n)).collect();
    plane_wave_with(&coords, &roots_of_unity(torus.side()), frequency)
}

fn plane_wave_with(coords: &[Vec<usize>], roots: &[Complex64], frequency: &[usize]) -> LatticeVector {
    let side = roots.len();
    let values = coords
        .iter()
        .map(|c| {
            let phase = c.iter().zip(frequency).map(|(a, b)| a * b).sum::<usize>() % side;
            roots[phase]
        })
        .collect();
    LatticeVector(values)
}

fn roots_of_unity(side: usize) -> Vec<Complex64> {
    (0..side)
        .map(|j| Complex64::from_polar(1.0, 2.0 * PI * j as f64 / side as f64))
        .collect()
}

/// `symbol(2π m / L)` for every frequency `m`, in vertex order.
pub fn symbol_samples(torus: &LatticeTorus) -> Vec<f64> {
    let side = torus.side() as f64;
    (0..torus.len())
        .map(|m| {
            let x: Vec<f64> = torus.coords(m).iter().map(|&k| 2.0 * PI * k as f64 / side).collect();
            symbol(&x)
        })
        .collect()
}

/// Largest vertex count accepted by [`dft_verify`].
pub const MAX_DFT_VERTICES: usize = 100_000;
/// Largest vertex count accepted by [`dense_spectrum`].
pub const MAX_DENSE_VERTICES: usize = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DftReport {
    pub dim: usize,
    pub side: usize,
    pub frequencies: usize,
    /// `max_m ‖Δ e_m − symbol(2πm/L) e_m‖_∞`.
    pub max_residual: f64,
    pub min_eigenvalue: f64,
    pub max_eigenvalue: f64,
}

/// `‖Δ e_m − symbol(2πm/L) e_m‖_∞` for every frequency `m`, in vertex
/// order; frequencies run in parallel.
pub fn plane_wave_residuals(torus: &LatticeTorus) -> Result<Vec<f64>> {
    if torus.len() > MAX_DFT_VERTICES {
        return Err(SpectralError::Domain(format!(
            "torus with {} vertices exceeds the limit of {MAX_DFT_VERTICES}",
            torus.len()
        )));
    }
    let samples = symbol_samples(torus);
    let coords: Vec<Vec<usize>> = (0..torus.len()).map(|n| torus.coords(n)).collect();
    let roots = roots_of_unity(torus.side());
    (0..torus.len())
        .into_par_iter()
        .map(|m| {
            let wave = plane_wave_with(&coords, &roots, &coords[m]);
            let image = apply_lattice_laplacian(torus, &wave)?;
            let scaled = LatticeVector(wave.0.iter().map(|w| w * samples[m]).collect());
            Ok(image.max_abs_diff(&scaled))
        })
        .collect()
}

pub fn dft_verify(torus: &LatticeTorus) -> Result<DftReport> {
    let residuals = plane_wave_residuals(torus)?;
    let samples = symbol_samples(torus);
    Ok(DftReport {
        dim: torus.dim(),
        side: torus.side(),
        frequencies: torus.len(),
        max_residual: residuals.into_iter().fold(0.0, f64::max),
        min_eigenvalue: samples.iter().copied().fold(f64::INFINITY, f64::min),
        max_eigenvalue: samples.iter().copied().fold(f64::NEG_INFINITY, f64::max),
    })
}

/// Eigenvalues, ascending, of the assembled dense Laplacian matrix.
pub fn dense_spectrum(torus: &LatticeTorus) -> Result<Vec<f64>> {
    let v = torus.len();
    if v > MAX_DENSE_VERTICES {
        return Err(SpectralError::Domain(format!(
            "dense diagonalisation limited to {MAX_DENSE_VERTICES} vertices, got {v}"
        )));
    }
    let mut matrix = DMatrix::<f64>::zeros(v, v);
    for n in 0..v {
        for m in torus.neighbors(n) {
            matrix[(n, n)] += 1.0;
            matrix[(n, m)] -= 1.0;
        }
    }
    let mut values: Vec<f64> = matrix.symmetric_eigenvalues().iter().copied().collect();
    values.sort_by(f64::total_cmp);
    Ok(values)
}

/// Largest gap between the sorted dense spectrum and the sorted symbol samples.
pub fn spectrum_mismatch(torus: &LatticeTorus) -> Result<f64> {
    let dense = dense_spectrum(torus)?;
    let mut samples = symbol_samples(torus);
    samples.sort_by(f64::total_cmp);
    Ok(dense
        .iter()
        .zip(&samples)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max))
}
