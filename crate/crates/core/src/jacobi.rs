//! Symmetric tridiagonal (Jacobi) matrices: the tree Laplacian blocks, their
//! δ_0 moments and spectral decomposition.

use serde::Serialize;

use crate::error::{Result, SpectralError};

/// Symmetric tridiagonal matrix with diagonal `a_0..a_{M-1}` and
/// off-diagonal `b_0..b_{M-2}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JacobiMatrix {
    diagonal: Vec<f64>,
    off_diagonal: Vec<f64>,
}

impl JacobiMatrix {
    pub fn new(diagonal: Vec<f64>, off_diagonal: Vec<f64>) -> Result<Self> {
        if diagonal.is_empty() {
            return Err(SpectralError::Domain("Jacobi matrix must be non-empty".into()));
        }
        if off_diagonal.len() + 1 != diagonal.len() {
            return Err(SpectralError::SizeMismatch {
                expected: diagonal.len() - 1,
                actual: off_diagonal.len(),
            });
        }
        Ok(JacobiMatrix {
            diagonal,
            off_diagonal,
        })
    }

    /// Restriction of the tree Laplacian to the cyclic subspace of δ_∅:
    /// `(N+1)I − 2√N Re S − P_{δ_0}`.
    pub fn d_omega(branching: usize, size: usize) -> Result<Self> {
        let mut j = Self::d(branching, size)?;
        j.diagonal[0] -= 1.0;
        Ok(j)
    }

    /// `(N+1)I − 2√N Re S`, the block on every other cyclic subspace.
    pub fn d(branching: usize, size: usize) -> Result<Self> {
        if branching == 0 {
            return Err(SpectralError::ZeroBranching);
        }
        if size == 0 {
            return Err(SpectralError::Domain("size must be ≥ 1".into()));
        }
        let n = branching as f64;
        Self::new(vec![n + 1.0; size], vec![-n.sqrt(); size - 1])
    }

    /// `Re S = (S + S*)/2` for the unilateral shift: zero diagonal, ½ off the diagonal.
    pub fn shift_real_part(size: usize) -> Result<Self> {
        if size == 0 {
            return Err(SpectralError::Domain("size must be ≥ 1".into()));
        }
        Self::new(vec![0.0; size], vec![0.5; size - 1])
    }

    pub fn size(&self) -> usize {
        self.diagonal.len()
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.diagonal
    }

    pub fn off_diagonal(&self) -> &[f64] {
        &self.off_diagonal
    }

    /// `shift·I + scale·J`.
    pub fn affine(&self, shift: f64, scale: f64) -> JacobiMatrix {
        JacobiMatrix {
            diagonal: self.diagonal.iter().map(|a| shift + scale * a).collect(),
            off_diagonal: self.off_diagonal.iter().map(|b| scale * b).collect(),
        }
    }

    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        let m = self.size();
        (0..m)
            .map(|i| {
                let mut acc = self.diagonal[i] * v[i];
                if i > 0 {
                    acc += self.off_diagonal[i - 1] * v[i - 1];
                }
                if i + 1 < m {
                    acc += self.off_diagonal[i] * v[i + 1];
                }
                acc
            })
            .collect()
    }

    /// Largest moment order that the `M × M` truncation reproduces exactly:
    /// a closed walk of length `2M − 1` from 0 never reaches index `M`.
    pub fn exact_moment_order(&self) -> usize {
        2 * self.size() - 1
    }

    /// `⟨δ_0, Jⁿ δ_0⟩` by repeated application.
    ///
    /// Orders above [`exact_moment_order`](Self::exact_moment_order) would
    /// differ from the infinite operator's moment and are rejected.
    pub fn moment(&self, order: usize) -> Result<f64> {
        if order > self.exact_moment_order() {
            return Err(SpectralError::TruncationTooSmall {
                order,
                size: self.size(),
                required: (order + 1).div_ceil(2),
            });
        }
        Ok(self.moments(order)[order])
    }

    /// Moments `0..=max_order` (unchecked against the truncation bound).
    pub fn moments(&self, max_order: usize) -> Vec<f64> {
        let mut v = vec![0.0; self.size()];
        v[0] = 1.0;
        let mut out = Vec::with_capacity(max_order + 1);
        out.push(1.0);
        for _ in 0..max_order {
            v = self.apply(&v);
            out.push(v[0]);
        }
        out
    }

    /// Eigenvalues (ascending) and the squared first components of the
    /// normalised eigenvectors, i.e. the spectral measure of δ_0.
    pub fn spectral_measure(&self) -> Result<DiscreteMeasure> {
        let eig = self.eigen(false)?;
        Ok(DiscreteMeasure {
            atoms: eig.values,
            weights: eig.first_components.iter().map(|z| z * z).collect(),
        })
    }

    /// Eigen-decomposition by implicit QL with Wilkinson shifts.
    ///
    /// When `vectors` is false only the first row of the eigenvector matrix is
    /// accumulated.
    pub fn eigen(&self, vectors: bool) -> Result<TridiagonalEigen> {
        let m = self.size();
        let mut d = self.diagonal.clone();
        let mut e = self.off_diagonal.clone();
        e.push(0.0);
        let rows = if vectors { m } else { 1 };
        let mut z: Vec<Vec<f64>> = (0..rows)
            .map(|r| {
                let mut row = vec![0.0; m];
                row[r] = 1.0;
                row
            })
            .collect();
        ql_implicit(&mut d, &mut e, &mut z)?;

        let mut order: Vec<usize> = (0..m).collect();
        order.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
        let values = order.iter().map(|&k| d[k]).collect();
        let first_components = order.iter().map(|&k| z[0][k]).collect();
        let vectors = vectors.then(|| {
            order
                .iter()
                .map(|&k| (0..m).map(|r| z[r][k]).collect())
                .collect()
        });
        Ok(TridiagonalEigen {
            values,
            first_components,
            vectors,
        })
    }
}

/// Output of [`JacobiMatrix::eigen`].
#[derive(Debug, Clone)]
pub struct TridiagonalEigen {
    pub values: Vec<f64>,
    pub first_components: Vec<f64>,
    /// Eigenvectors in the order of `values`, when requested.
    pub vectors: Option<Vec<Vec<f64>>>,
}

/// A finitely supported probability measure `Σ w_j δ_{λ_j}` with sorted atoms.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiscreteMeasure {
    pub atoms: Vec<f64>,
    pub weights: Vec<f64>,
}

impl DiscreteMeasure {
    pub fn total_mass(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn moment(&self, order: usize) -> f64 {
        self.atoms
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| w * x.powi(order as i32))
            .sum()
    }

    pub fn max_weight(&self) -> f64 {
        self.weights.iter().copied().fold(0.0, f64::max)
    }

    /// Pushes the atoms through `f`, re-sorting them.
    pub fn map_atoms<F: Fn(f64) -> f64>(&self, f: F) -> DiscreteMeasure {
        let mut pairs: Vec<(f64, f64)> = self
            .atoms
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| (f(x), w))
            .collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        DiscreteMeasure {
            atoms: pairs.iter().map(|p| p.0).collect(),
            weights: pairs.iter().map(|p| p.1).collect(),
        }
    }

    /// Kolmogorov distance to a continuous distribution function `cdf`:
    /// the supremum is attained at an atom, on one side of the jump.
    pub fn kolmogorov_distance<F: Fn(f64) -> f64>(&self, cdf: F) -> f64 {
        let mut below = 0.0;
        let mut sup: f64 = 0.0;
        for (&x, &w) in self.atoms.iter().zip(&self.weights) {
            let f = cdf(x);
            let above = below + w;
            sup = sup.max((f - below).abs()).max((f - above).abs());
            below = above;
        }
        sup
    }
}

fn ql_implicit(d: &mut [f64], e: &mut [f64], z: &mut [Vec<f64>]) -> Result<()> {
    const MAX_SWEEPS: usize = 60;
    let n = d.len();
    for l in 0..n {
        let mut sweeps = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            sweeps += 1;
            if sweeps > MAX_SWEEPS {
                return Err(SpectralError::NoConvergence(MAX_SWEEPS));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                for row in z.iter_mut() {
                    let f = row[i + 1];
                    row[i + 1] = s * row[i] + c * f;
                    row[i] = c * row[i] - s * f;
                }
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}
