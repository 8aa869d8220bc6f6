use num_bigint::BigUint;

use crate::error::{Result, SpectralError};

/// Exact Catalan number `C_n = binom(2n, n) / (n + 1)`.
///
/// Fails with [`SpectralError::Overflow`] once the value leaves `u64`
/// (n ≥ 37); use [`catalan_big`] beyond that.
pub fn catalan(n: usize) -> Result<u64> {
    let mut c: u128 = 1;
    for k in 0..n as u128 {
        // C_{k+1} = 2(2k+1) C_k / (k+2); the division is exact.
        c = c
            .checked_mul(2 * (2 * k + 1))
            .ok_or(SpectralError::Overflow("Catalan number"))?
            / (k + 2);
        if c > u64::MAX as u128 {
            return Err(SpectralError::Overflow("Catalan number"));
        }
    }
    Ok(c as u64)
}

/// Arbitrary-precision Catalan number.
pub fn catalan_big(n: usize) -> BigUint {
    let mut c = BigUint::from(1u32);
    for k in 0..n as u64 {
        c = c * (2 * (2 * k + 1)) / (k + 2);
    }
    c
}

/// `C_n` rounded to the nearest double; used for long series.
pub fn catalan_f64(n: usize) -> f64 {
    let mut c = 1.0f64;
    for k in 0..n {
        c *= (2 * (2 * k + 1)) as f64 / (k + 2) as f64;
    }
    c
}

/// Table `C_0..=C_max` built from the convolution recursion
/// `C_{k+1} = Σ_{n=0}^{k} C_n C_{k−n}` in exact 128-bit arithmetic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalanTable {
    values: Vec<u128>,
}

impl CatalanTable {
    pub fn new(max: usize) -> Result<Self> {
        let mut values: Vec<u128> = vec![1];
        for k in 0..max {
            let mut next: u128 = 0;
            for n in 0..=k {
                let term = values[n]
                    .checked_mul(values[k - n])
                    .ok_or(SpectralError::Overflow("Catalan recursion"))?;
                next = next
                    .checked_add(term)
                    .ok_or(SpectralError::Overflow("Catalan recursion"))?;
            }
            values.push(next);
        }
        Ok(CatalanTable { values })
    }

    pub fn max(&self) -> usize {
        self.values.len() - 1
    }

    pub fn get(&self, n: usize) -> Option<u128> {
        self.values.get(n).copied()
    }

    pub fn values(&self) -> &[u128] {
        &self.values
    }

    /// Indices where the recursion disagrees with `binom(2n,n)/(n+1)`.
    pub fn closed_form_mismatches(&self) -> Vec<usize> {
        self.values
            .iter()
            .enumerate()
            .filter(|&(n, &c)| catalan_big(n) != BigUint::from(c))
            .map(|(n, _)| n)
            .collect()
    }
}

/// Generating function `𝒞(x) = Σ C_n xⁿ = (1 − √(1−4x)) / (2x)`, evaluated
/// as `2 / (1 + √(1−4x))` so that `𝒞(0) = 1` needs no special case.
///
/// Defined for `x ≤ 1/4`; `𝒞(1/4) = 2`.
pub fn catalan_gf(x: f64) -> Result<f64> {
    if !(x <= 0.25) {
        return Err(SpectralError::Domain(format!(
            "generating function needs x ≤ 1/4, got {x}"
        )));
    }
    Ok(2.0 / (1.0 + (1.0 - 4.0 * x).sqrt()))
}

/// Partial sum `Σ_{n<terms} C_n xⁿ`; requires `|x| < 1/4`.
pub fn catalan_series(x: f64, terms: usize) -> Result<f64> {
    if !(x.abs() < 0.25) {
        return Err(SpectralError::Domain(format!(
            "series converges only for |x| < 1/4, got {x}"
        )));
    }
    let mut sum = 0.0;
    let mut power = 1.0;
    for n in 0..terms {
        sum += catalan_f64(n) * power;
        power *= x;
    }
    Ok(sum)
}
