//! Cyclic-subspace decomposition of the tree Laplacian, realised inside a
//! truncated tree.
//!
//! With an orthonormal basis `x_1 = s_0 = (1,…,1)/√N, x_2, …, x_N` of ℝ^N,
//! the vector labelled `(i_1…i_n, p)` takes the value
//! `x_{i_1}(ω_1) ⋯ x_{i_n}(ω_n) · N^{−p/2}` on every word `ω` of length
//! `n + p`. The label Ω is the empty word; other labels end in a letter
//! `≠ 1`. The Laplacian is block diagonal over labels: `D_Ω` on Ω and `D`
//! on every other label.

use std::fmt;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Result, SpectralError};
use crate::graph::{TruncatedTree, Word};
use crate::jacobi::{DiscreteMeasure, JacobiMatrix};
use crate::measures::SpectralMeasure;
use crate::operators::{apply_laplacian, VertexVector};

/// Orthonormal basis of ℝ^N whose first vector is `s_0 = (1,…,1)/√N`.
///
/// Built as the columns of the Householder reflection that maps `e_1` to `s_0`.
pub fn orthobasis_with_s0(branching: usize) -> Result<Vec<Vec<f64>>> {
    if branching == 0 {
        return Err(SpectralError::ZeroBranching);
    }
    let n = branching;
    let s0 = 1.0 / (n as f64).sqrt();
    let mut u = vec![-s0; n];
    u[0] += 1.0;
    let uu: f64 = u.iter().map(|a| a * a).sum();
    let basis = (0..n)
        .map(|col| {
            (0..n)
                .map(|row| {
                    let id = if row == col { 1.0 } else { 0.0 };
                    if uu == 0.0 {
                        id
                    } else {
                        id - 2.0 * u[row] * u[col] / uu
                    }
                })
                .collect()
        })
        .collect();
    Ok(basis)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum CyclicLabel {
    Omega,
    Word(Word),
}

impl CyclicLabel {
    /// A non-Ω label; its last letter must differ from 1.
    pub fn word(w: Word, branching: usize) -> Result<Self> {
        w.check_alphabet(branching)?;
        match w.last() {
            None => Ok(CyclicLabel::Omega),
            Some(1) => Err(SpectralError::InvalidWord(format!(
                "cyclic label {w} must not end in 1"
            ))),
            Some(_) => Ok(CyclicLabel::Word(w)),
        }
    }

    pub fn len(&self) -> usize {
        match self {
            CyclicLabel::Omega => 0,
            CyclicLabel::Word(w) => w.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_omega(&self) -> bool {
        matches!(self, CyclicLabel::Omega)
    }
}

impl fmt::Display for CyclicLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CyclicLabel::Omega => f.write_str("Ω"),
            CyclicLabel::Word(w) => write!(f, "{w}"),
        }
    }
}

/// Ω followed by every admissible label of length `1..=max_len`.
pub fn labels_up_to(branching: usize, max_len: usize) -> Vec<CyclicLabel> {
    let mut out = vec![CyclicLabel::Omega];
    let mut words = vec![Word::root()];
    for _ in 0..max_len {
        words = words
            .iter()
            .flat_map(|w| (1..=branching).map(move |i| w.child(i)))
            .collect();
        out.extend(
            words
                .iter()
                .filter(|w| w.last() != Some(1))
                .cloned()
                .map(CyclicLabel::Word),
        );
    }
    out
}

#[derive(Debug, Clone)]
pub struct CyclicBasisVector {
    pub label: CyclicLabel,
    pub level: usize,
    pub vector: VertexVector,
}

pub fn cyclic_vector(label: &CyclicLabel, level: usize, tree: &TruncatedTree) -> Result<CyclicBasisVector> {
    let basis = orthobasis_with_s0(tree.branching())?;
    cyclic_vector_with_basis(label, level, tree, &basis)
}

fn cyclic_vector_with_basis(
    label: &CyclicLabel,
    level: usize,
    tree: &TruncatedTree,
    basis: &[Vec<f64>],
) -> Result<CyclicBasisVector> {
    let prefix: &[usize] = match label {
        CyclicLabel::Omega => &[],
        CyclicLabel::Word(w) => w.letters(),
    };
    let len = prefix.len() + level;
    if len > tree.depth() {
        return Err(SpectralError::WordTooDeep {
            len,
            depth: tree.depth(),
        });
    }
    let tail = (tree.branching() as f64).powf(-(level as f64) / 2.0);
    let mut vector = VertexVector::zeros(tree.len());
    for idx in tree.level_range(len) {
        let word = tree.word(idx);
        let head: f64 = prefix
            .iter()
            .zip(word.letters())
            .map(|(&i, &letter)| basis[i - 1][letter - 1])
            .product();
        vector[idx] = head * tail;
    }
    Ok(CyclicBasisVector {
        label: label.clone(),
        level,
        vector,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BlockReport {
    /// Max `|⟨b, Δb'⟩ − J(p, p')|` over pairs with equal labels.
    pub block_deviation: f64,
    /// Max `|⟨b, Δb'⟩|` over pairs with different labels.
    pub cross_block: f64,
    /// Max deviation of the Gram matrix from the identity.
    pub orthonormality: f64,
    pub vectors: usize,
}

impl BlockReport {
    pub fn max_deviation(&self) -> f64 {
        self.block_deviation.max(self.cross_block).max(self.orthonormality)
    }
}

fn jacobi_entry(j: &JacobiMatrix, p: usize, q: usize) -> f64 {
    if p == q {
        j.diagonal()[p]
    } else if p.abs_diff(q) == 1 {
        j.off_diagonal()[p.min(q)]
    } else {
        0.0
    }
}

/// Compares `⟨b, Δ b'⟩` for all constructed basis vectors against the
/// block-diagonal Jacobi structure.
///
/// Requires `max_level + max label length ≤ D − 1` so that no vector or its
/// Laplacian touches the truncation boundary.
pub fn verify_block_structure(
    tree: &TruncatedTree,
    labels: &[CyclicLabel],
    max_level: usize,
) -> Result<BlockReport> {
    let longest = labels.iter().map(CyclicLabel::len).max().unwrap_or(0);
    let required = max_level + longest + 1;
    if tree.depth() < required {
        return Err(SpectralError::DepthTooSmall {
            depth: tree.depth(),
            required,
        });
    }
    let n = tree.branching();
    let basis = orthobasis_with_s0(n)?;
    let mut vectors = Vec::new();
    for label in labels {
        for p in 0..=max_level {
            vectors.push(cyclic_vector_with_basis(label, p, tree, &basis)?);
        }
    }
    let images = vectors
        .iter()
        .map(|b| apply_laplacian(tree, &b.vector))
        .collect::<Result<Vec<_>>>()?;
    let size = max_level + 1;
    let d_omega = JacobiMatrix::d_omega(n, size)?;
    let d = JacobiMatrix::d(n, size)?;

    let mut report = BlockReport {
        block_deviation: 0.0,
        cross_block: 0.0,
        orthonormality: 0.0,
        vectors: vectors.len(),
    };
    for a in &vectors {
        for (b, image) in vectors.iter().zip(&images) {
            let value = a.vector.dot(image);
            let gram = a.vector.dot(&b.vector);
            let id = if a.label == b.label && a.level == b.level { 1.0 } else { 0.0 };
            report.orthonormality = report.orthonormality.max((gram - id).abs());
            if a.label == b.label {
                let j = if a.label.is_omega() { &d_omega } else { &d };
                let expected = jacobi_entry(j, a.level, b.level);
                report.block_deviation = report.block_deviation.max((value - expected).abs());
            } else {
                report.cross_block = report.cross_block.max(value.abs());
            }
        }
    }
    Ok(report)
}

/// Number of cyclic basis vectors supported on words of length `m`, and the
/// numerical rank of their restriction to that level.
pub fn level_completeness(branching: usize, m: usize) -> Result<(usize, usize)> {
    let tree = TruncatedTree::new(branching, m.max(1))?;
    let basis = orthobasis_with_s0(branching)?;
    let range = tree.level_range(m);
    let mut columns = Vec::new();
    for label in labels_up_to(branching, m) {
        let level = m - label.len();
        let v = cyclic_vector_with_basis(&label, level, &tree, &basis)?;
        columns.push(v.vector.as_slice()[range.clone()].to_vec());
    }
    let rows = range.len();
    let matrix = DMatrix::from_fn(rows, columns.len(), |r, c| columns[c][r]);
    Ok((columns.len(), matrix.rank(1e-10)))
}

/// Spectral measure of δ_0 for the `M × M` truncation of `D_Ω`.
pub fn truncated_spectral_measure(branching: usize, size: usize) -> Result<DiscreteMeasure> {
    JacobiMatrix::d_omega(branching, size)?.spectral_measure()
}

/// Kolmogorov distance between the truncated spectral measure, pulled back
/// through `λ = N + 1 − 2√N x`, and μ_{c+p}.
pub fn kolmogorov_to_perturbed(branching: usize, size: usize) -> Result<f64> {
    let measure = truncated_spectral_measure(branching, size)?;
    let n = branching as f64;
    let pulled = measure.map_atoms(|lambda| (n + 1.0 - lambda) / (2.0 * n.sqrt()));
    let mu = SpectralMeasure::perturbed(branching)?;
    Ok(pulled.kolmogorov_distance(|t| mu.cdf(t)))
}
