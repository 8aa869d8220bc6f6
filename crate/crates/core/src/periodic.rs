//! Infinite-energy periodic eigenvectors of the half-line Laplacian (`N = 1`):
//! `(Δv)_0 = v_0 − v_1`, `(Δv)_k = 2v_k − v_{k−1} − v_{k+1}`.
//!
//! Starting from `v_0 = 1`, the eigen-equation forces `v_n = p_n(λ)` with
//! `p_0 = 1`, `p_1 = 1 − λ`, `p_{n+1} = (2 − λ) p_n − p_{n−1}`. The roots of
//! `p_n` are the eigenvalues of the `n × n` truncation `diag(1, 2, …, 2)`
//! with off-diagonal `−1`.

use std::fmt;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use serde::Serialize;

use crate::error::{Result, SpectralError};
use crate::jacobi::JacobiMatrix;

/// Polynomial in λ with exact integer coefficients in ascending powers.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct IntPolynomial(Vec<i64>);

impl IntPolynomial {
    /// Trailing zero coefficients are dropped.
    pub fn new(mut coefficients: Vec<i64>) -> Self {
        while coefficients.len() > 1 && coefficients.last() == Some(&0) {
            coefficients.pop();
        }
        if coefficients.is_empty() {
            coefficients.push(0);
        }
        IntPolynomial(coefficients)
    }

    pub fn coefficients(&self) -> &[i64] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len() - 1
    }

    pub fn leading(&self) -> i64 {
        self.0[self.0.len() - 1]
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, &c| acc * x + c as f64)
    }

    pub fn derivative_at(&self, x: f64) -> f64 {
        self.0
            .iter()
            .enumerate()
            .skip(1)
            .rev()
            .fold(0.0, |acc, (k, &c)| acc * x + (k as i64 * c) as f64)
    }

    /// `(a + bλ)·p − q`, checked.
    fn linear_step(&self, a: i64, b: i64, q: &IntPolynomial) -> Result<IntPolynomial> {
        let overflow = || SpectralError::Overflow("polynomial coefficient");
        let len = (self.0.len() + 1).max(q.0.len());
        let mut out = vec![0i64; len];
        for (k, &c) in self.0.iter().enumerate() {
            out[k] = out[k].checked_add(c.checked_mul(a).ok_or_else(overflow)?).ok_or_else(overflow)?;
            out[k + 1] = out[k + 1]
                .checked_add(c.checked_mul(b).ok_or_else(overflow)?)
                .ok_or_else(overflow)?;
        }
        for (k, &c) in q.0.iter().enumerate() {
            out[k] = out[k].checked_sub(c).ok_or_else(overflow)?;
        }
        Ok(IntPolynomial::new(out))
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, &c) in self.0.iter().enumerate() {
            if c == 0 && !(first && k == self.degree()) {
                continue;
            }
            let sign = if c < 0 { "-" } else { "+" };
            if first {
                if c < 0 {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let mag = c.unsigned_abs();
            match (k, mag) {
                (0, _) => write!(f, "{mag}")?,
                (_, 1) => {}
                _ => write!(f, "{mag}")?,
            }
            match k {
                0 => {}
                1 => f.write_str("λ")?,
                _ => write!(f, "λ^{k}")?,
            }
            first = false;
        }
        Ok(())
    }
}

/// `p_0, p_1, …, p_n`.
pub fn char_poly_sequence(n: usize) -> Result<Vec<IntPolynomial>> {
    let mut seq = vec![IntPolynomial::new(vec![1]), IntPolynomial::new(vec![1, -1])];
    while seq.len() <= n {
        let k = seq.len();
        let next = seq[k - 1].linear_step(2, -1, &seq[k - 2])?;
        seq.push(next);
    }
    seq.truncate(n + 1);
    Ok(seq)
}

/// `p_n`, for `n ≥ 1`.
pub fn char_poly(n: usize) -> Result<IntPolynomial> {
    if n == 0 {
        return Err(SpectralError::Domain("characteristic polynomials start at n = 1".into()));
    }
    Ok(char_poly_sequence(n)?.swap_remove(n))
}

/// Resultant of two integer polynomials: the determinant of their Sylvester
/// matrix, by fraction-free Bareiss elimination.
pub fn resultant(p: &IntPolynomial, q: &IntPolynomial) -> BigInt {
    let (m, n) = (p.degree(), q.degree());
    let size = m + n;
    if size == 0 {
        return BigInt::from(1);
    }
    let mut a = vec![vec![BigInt::from(0); size]; size];
    // rows hold coefficients from the highest power down
    for row in 0..n {
        for (k, &c) in p.0.iter().rev().enumerate() {
            a[row][row + k] = BigInt::from(c);
        }
    }
    for row in 0..m {
        for (k, &c) in q.0.iter().rev().enumerate() {
            a[n + row][row + k] = BigInt::from(c);
        }
    }
    bareiss_determinant(a)
}

fn bareiss_determinant(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    let zero = BigInt::from(0);
    let mut sign = 1;
    let mut prev = BigInt::from(1);
    for k in 0..n {
        if a[k][k] == zero {
            match (k + 1..n).find(|&r| a[r][k] != zero) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return zero,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    a[n - 1][n - 1].clone() * sign
}

/// Real roots from the eigenvalues of the companion matrix, ascending, each
/// polished by two Newton steps.
pub fn polynomial_roots(p: &IntPolynomial) -> Result<Vec<f64>> {
    let n = p.degree();
    if n == 0 {
        return Ok(Vec::new());
    }
    let lead = p.leading() as f64;
    let companion = DMatrix::from_fn(n, n, |i, j| {
        if j == n - 1 {
            -p.0[i] as f64 / lead
        } else if i == j + 1 {
            1.0
        } else {
            0.0
        }
    });
    let mut roots: Vec<f64> = companion
        .complex_eigenvalues()
        .iter()
        .map(|z| z.re)
        .collect();
    for r in roots.iter_mut() {
        for _ in 0..2 {
            let d = p.derivative_at(*r);
            if d != 0.0 {
                *r -= p.eval(*r) / d;
            }
        }
    }
    roots.sort_by(f64::total_cmp);
    Ok(roots)
}

/// Eigenvalues of `diag(1, 2, …, 2)` with off-diagonal `−1`, size `n`.
pub fn truncation_eigenvalues(n: usize) -> Result<Vec<f64>> {
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut diagonal = vec![2.0; n];
    diagonal[0] = 1.0;
    Ok(JacobiMatrix::new(diagonal, vec![-1.0; n - 1])?.eigen(false)?.values)
}

/// `((3 + √5)/2, (3 − √5)/2)`, the roots of `p_2`.
pub fn golden_eigenvalues() -> (f64, f64) {
    let r = 5f64.sqrt();
    ((3.0 + r) / 2.0, 2.0 / (3.0 + r))
}

/// Solution of the half-line eigen-equation with `v_0 = 1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenSequence {
    pub lambda: f64,
    pub values: Vec<f64>,
}

impl EigenSequence {
    /// `max_{k ≤ L−1} |(Δv)_k − λ v_k|`.
    pub fn residual(&self) -> f64 {
        let v = &self.values;
        let lambda = self.lambda;
        (0..v.len() - 1)
            .map(|k| {
                let lap = if k == 0 {
                    v[0] - v[1]
                } else {
                    2.0 * v[k] - v[k - 1] - v[k + 1]
                };
                (lap - lambda * v[k]).abs()
            })
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Partial energies `Σ_{j ≤ k} v_j²`.
    pub fn partial_energy(&self) -> Vec<f64> {
        self.values
            .iter()
            .scan(0.0, |acc, v| {
                *acc += v * v;
                Some(*acc)
            })
            .collect()
    }
}

/// `v_0, …, v_L` with `v_0 = 1`, `v_1 = 1 − λ`, `v_{k+1} = (2 − λ) v_k − v_{k−1}`.
pub fn eigvec_generate(lambda: f64, len: usize) -> Result<EigenSequence> {
    if len < 2 {
        return Err(SpectralError::Domain(format!("sequence length must be at least 2, got {len}")));
    }
    if !lambda.is_finite() {
        return Err(SpectralError::Domain(format!("λ must be finite, got {lambda}")));
    }
    let mut values = Vec::with_capacity(len + 1);
    values.push(1.0);
    values.push(1.0 - lambda);
    for k in 1..len {
        values.push((2.0 - lambda) * values[k] - values[k - 1]);
    }
    Ok(EigenSequence { lambda, values })
}

pub const PERIOD_TOLERANCE: f64 = 1e-9;

/// Smallest `q ≤ L/2` with `max_k |v_{k+q} − v_k| ≤ 1e−9`, where the
/// sequence is `v_0, …, v_L`. Requires `L ≥ 20`.
pub fn detect_period(values: &[f64]) -> Result<Option<usize>> {
    let len = values.len().saturating_sub(1);
    if len < 20 {
        return Err(SpectralError::Domain(format!(
            "period detection needs at least 21 terms, got {}",
            values.len()
        )));
    }
    Ok((1..=len / 2).find(|&q| {
        values
            .iter()
            .zip(&values[q..])
            .all(|(a, b)| (a - b).abs() <= PERIOD_TOLERANCE)
    }))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RootCheck {
    pub degree: usize,
    pub roots: Vec<f64>,
    /// `max |p_n(λ)|` over the roots.
    pub polynomial_residual: f64,
    /// Largest gap between companion-matrix and Jacobi-truncation roots.
    pub oracle_gap: f64,
    /// Largest eigen-residual of the generated sequences.
    pub eigen_residual: f64,
    /// Largest `|v_k|` seen.
    pub max_abs: f64,
}

/// Roots of `p_n` and the eigen-sequences they generate over `len` terms.
pub fn root_check(n: usize, len: usize) -> Result<RootCheck> {
    let p = char_poly(n)?;
    let roots = polynomial_roots(&p)?;
    let oracle = truncation_eigenvalues(n)?;
    let mut check = RootCheck {
        degree: n,
        polynomial_residual: 0.0,
        oracle_gap: 0.0,
        eigen_residual: 0.0,
        max_abs: 0.0,
        roots: roots.clone(),
    };
    for (r, o) in roots.iter().zip(&oracle) {
        check.polynomial_residual = check.polynomial_residual.max(p.eval(*r).abs());
        check.oracle_gap = check.oracle_gap.max((r - o).abs());
        let seq = eigvec_generate(*r, len)?;
        check.eigen_residual = check.eigen_residual.max(seq.residual());
        check.max_abs = check.max_abs.max(seq.max_abs());
    }
    Ok(check)
}
