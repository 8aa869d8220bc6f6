//! Matrix-free operators on functions over a truncated tree.
//!
//! Truncation convention: a vertex at depth `D` has no children, so the
//! shifts `S_i` vanish there and the Laplacian sees a reduced degree. All the
//! operator identities hold for vectors supported away from the boundary.

use serde::Serialize;

use crate::error::{Result, SpectralError};
use crate::graph::TruncatedTree;

/// Real values indexed by the vertices of a [`TruncatedTree`].
#[derive(Debug, Clone, PartialEq)]
pub struct VertexVector(Vec<f64>);

impl VertexVector {
    pub fn zeros(len: usize) -> Self {
        VertexVector(vec![0.0; len])
    }

    pub fn from_vec(values: Vec<f64>) -> Self {
        VertexVector(values)
    }

    /// The indicator δ_x of a single vertex.
    pub fn delta(len: usize, idx: usize) -> Self {
        let mut v = Self::zeros(len);
        v.0[idx] = 1.0;
        v
    }

    pub fn constant(len: usize, value: f64) -> Self {
        VertexVector(vec![value; len])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn dot(&self, other: &VertexVector) -> f64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn max_abs_diff(&self, other: &VertexVector) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// `self + scale * other`.
    pub fn axpy(&self, scale: f64, other: &VertexVector) -> VertexVector {
        VertexVector(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + scale * b)
                .collect(),
        )
    }

    pub fn scaled(&self, scale: f64) -> VertexVector {
        VertexVector(self.0.iter().map(|a| a * scale).collect())
    }
}

impl std::ops::Index<usize> for VertexVector {
    type Output = f64;
    fn index(&self, idx: usize) -> &f64 {
        &self.0[idx]
    }
}

impl std::ops::IndexMut<usize> for VertexVector {
    fn index_mut(&mut self, idx: usize) -> &mut f64 {
        &mut self.0[idx]
    }
}

fn check_size(tree: &TruncatedTree, v: &VertexVector) -> Result<()> {
    if v.len() != tree.len() {
        return Err(SpectralError::SizeMismatch {
            expected: tree.len(),
            actual: v.len(),
        });
    }
    Ok(())
}

fn check_letter(tree: &TruncatedTree, letter: usize) -> Result<()> {
    if letter == 0 || letter > tree.branching() {
        return Err(SpectralError::LetterOutOfRange {
            letter,
            branching: tree.branching(),
        });
    }
    Ok(())
}

/// `(Δv)(x) = Σ_{y∼x} c(xy) (v(x) − v(y))`, neighbours beyond depth D absent.
pub fn apply_laplacian(tree: &TruncatedTree, v: &VertexVector) -> Result<VertexVector> {
    check_size(tree, v)?;
    let out = (0..tree.len())
        .map(|x| {
            tree.neighbors(x)
                .map(|(y, c)| c * (v[x] - v[y]))
                .sum::<f64>()
        })
        .collect();
    Ok(VertexVector(out))
}

/// `(Uv)(x) = v(σx)`, with σ(∅) = ∅.
pub fn apply_u(tree: &TruncatedTree, v: &VertexVector) -> Result<VertexVector> {
    check_size(tree, v)?;
    let out = (0..tree.len())
        .map(|x| v[tree.parent(x).unwrap_or(0)])
        .collect();
    Ok(VertexVector(out))
}

/// `(U*v)(x) = Σ_i v(xi) + [x = ∅] v(∅)`.
pub fn apply_u_adjoint(tree: &TruncatedTree, v: &VertexVector) -> Result<VertexVector> {
    check_size(tree, v)?;
    let mut out = VertexVector::zeros(tree.len());
    for y in 0..tree.len() {
        out[tree.parent(y).unwrap_or(0)] += v[y];
    }
    Ok(out)
}

/// `(S_i v)(x) = v(xi)`, zero at depth D.
pub fn apply_shift(tree: &TruncatedTree, v: &VertexVector, letter: usize) -> Result<VertexVector> {
    check_size(tree, v)?;
    check_letter(tree, letter)?;
    let out = (0..tree.len())
        .map(|x| tree.child(x, letter).map_or(0.0, |c| v[c]))
        .collect();
    Ok(VertexVector(out))
}

/// `(S_i* v)(y) = v(σy)` when the last letter of `y` is `i`, zero otherwise.
pub fn apply_shift_adjoint(
    tree: &TruncatedTree,
    v: &VertexVector,
    letter: usize,
) -> Result<VertexVector> {
    check_size(tree, v)?;
    check_letter(tree, letter)?;
    let out = (0..tree.len())
        .map(|y| match (tree.last_letter(y), tree.parent(y)) {
            (Some(l), Some(p)) if l == letter => v[p],
            _ => 0.0,
        })
        .collect();
    Ok(VertexVector(out))
}

/// Projection `P_∅` onto the root indicator.
pub fn apply_root_projection(tree: &TruncatedTree, v: &VertexVector) -> Result<VertexVector> {
    check_size(tree, v)?;
    let mut out = VertexVector::zeros(tree.len());
    out[0] = v[0];
    Ok(out)
}

/// Maximum absolute deviation of each shift/Laplacian identity over the
/// interior basis vectors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IdentityReport {
    /// `S_i S_i* = I`, maximised over `i`.
    pub shift_coisometry: f64,
    /// `Σ_i S_i* S_i = I − P_∅`.
    pub shift_sum: f64,
    /// `U* = Σ_i S_i + P_∅`.
    pub u_adjoint: f64,
    /// `Δ = (N+1)I − (U + U* − P_∅)`.
    pub laplacian: f64,
    /// Number of basis vectors tested.
    pub basis_vectors: usize,
}

impl IdentityReport {
    pub fn max_deviation(&self) -> f64 {
        self.shift_coisometry
            .max(self.shift_sum)
            .max(self.u_adjoint)
            .max(self.laplacian)
    }
}

/// Checks the shift relations and the Laplacian decomposition on every δ_x
/// with `|x| ≤ D − 2`. Requires `D ≥ 3`.
pub fn verify_operator_identities(tree: &TruncatedTree) -> Result<IdentityReport> {
    if tree.depth() < 3 {
        return Err(SpectralError::DepthTooSmall {
            depth: tree.depth(),
            required: 3,
        });
    }
    let n = tree.branching();
    let len = tree.len();
    let mut report = IdentityReport {
        shift_coisometry: 0.0,
        shift_sum: 0.0,
        u_adjoint: 0.0,
        laplacian: 0.0,
        basis_vectors: 0,
    };
    for x in tree.up_to_level(tree.depth() - 2) {
        let delta = VertexVector::delta(len, x);
        let p_root = apply_root_projection(tree, &delta)?;

        let mut shift_sum = VertexVector::zeros(len);
        let mut star_sum = VertexVector::zeros(len);
        for i in 1..=n {
            let co = apply_shift(tree, &apply_shift_adjoint(tree, &delta, i)?, i)?;
            report.shift_coisometry = report.shift_coisometry.max(co.max_abs_diff(&delta));
            let s = apply_shift(tree, &delta, i)?;
            star_sum = star_sum.axpy(1.0, &apply_shift_adjoint(tree, &s, i)?);
            shift_sum = shift_sum.axpy(1.0, &s);
        }
        let id_minus_p = delta.axpy(-1.0, &p_root);
        report.shift_sum = report.shift_sum.max(star_sum.max_abs_diff(&id_minus_p));

        let u_star = apply_u_adjoint(tree, &delta)?;
        report.u_adjoint = report
            .u_adjoint
            .max(u_star.max_abs_diff(&shift_sum.axpy(1.0, &p_root)));

        let u = apply_u(tree, &delta)?;
        let rhs = delta
            .scaled((n + 1) as f64)
            .axpy(-1.0, &u)
            .axpy(-1.0, &u_star)
            .axpy(1.0, &p_root);
        let lap = apply_laplacian(tree, &delta)?;
        report.laplacian = report.laplacian.max(lap.max_abs_diff(&rhs));
        report.basis_vectors += 1;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Word;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn idx(t: &TruncatedTree, s: &str) -> usize {
        t.index(&s.parse::<Word>().unwrap()).unwrap()
    }

    #[test]
    fn laplacian_of_root_indicator() {
        let t = TruncatedTree::new(2, 3).unwrap();
        let out = apply_laplacian(&t, &VertexVector::delta(t.len(), 0)).unwrap();
        let mut expected = VertexVector::zeros(t.len());
        expected[0] = 2.0;
        expected[idx(&t, "1")] = -1.0;
        expected[idx(&t, "2")] = -1.0;
        assert_eq!(out, expected);
    }

    #[test]
    fn laplacian_of_first_child_indicator() {
        let t = TruncatedTree::new(2, 3).unwrap();
        let out = apply_laplacian(&t, &VertexVector::delta(t.len(), idx(&t, "1"))).unwrap();
        let mut expected = VertexVector::zeros(t.len());
        expected[idx(&t, "1")] = 3.0;
        expected[0] = -1.0;
        expected[idx(&t, "11")] = -1.0;
        expected[idx(&t, "12")] = -1.0;
        assert_eq!(out, expected);
    }

    #[test]
    fn laplacian_kills_constants() {
        let t = TruncatedTree::new(3, 4).unwrap();
        let out = apply_laplacian(&t, &VertexVector::constant(t.len(), 1.0)).unwrap();
        assert!(out.as_slice().iter().all(|&x| x == 0.0));
    }

    #[test]
    fn size_mismatch_is_reported() {
        let t = TruncatedTree::new(2, 2).unwrap();
        assert_eq!(
            apply_laplacian(&t, &VertexVector::zeros(3)),
            Err(SpectralError::SizeMismatch {
                expected: 7,
                actual: 3
            })
        );
    }

    #[test]
    fn shifts_on_basis_vectors() {
        let t = TruncatedTree::new(2, 3).unwrap();
        let len = t.len();
        for i in 1..=2 {
            let out = apply_shift(&t, &VertexVector::delta(len, 0), i).unwrap();
            assert!(out.as_slice().iter().all(|&x| x == 0.0));
        }
        let d21 = VertexVector::delta(len, idx(&t, "21"));
        assert_eq!(
            apply_shift(&t, &d21, 1).unwrap(),
            VertexVector::delta(len, idx(&t, "2"))
        );
        assert_eq!(apply_shift(&t, &d21, 2).unwrap(), VertexVector::zeros(len));
        let u = apply_u(&t, &VertexVector::delta(len, idx(&t, "1"))).unwrap();
        assert_eq!(u[idx(&t, "11")], 1.0);
        assert_eq!(u[idx(&t, "12")], 1.0);
        assert_eq!(u[idx(&t, "1")], 0.0);
        assert!(apply_shift(&t, &d21, 3).is_err());
        assert!(apply_shift(&t, &d21, 0).is_err());
    }

    #[test]
    fn adjoints_are_transposes() {
        let t = TruncatedTree::new(3, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut random = || {
            VertexVector::from_vec((0..t.len()).map(|_| rng.random_range(-1.0..1.0)).collect())
        };
        let (a, b) = (random(), random());
        let lhs = apply_u(&t, &a).unwrap().dot(&b);
        let rhs = a.dot(&apply_u_adjoint(&t, &b).unwrap());
        assert!((lhs - rhs).abs() < 1e-12);
        for i in 1..=3 {
            let lhs = apply_shift(&t, &a, i).unwrap().dot(&b);
            let rhs = a.dot(&apply_shift_adjoint(&t, &b, i).unwrap());
            assert!((lhs - rhs).abs() < 1e-12);
        }
    }

    #[test]
    fn identities_hold_on_interior() {
        for n in 1..=3 {
            let t = TruncatedTree::new(n, 5).unwrap();
            let r = verify_operator_identities(&t).unwrap();
            assert!(r.max_deviation() <= 1e-12, "N={n}: {r:?}");
            assert_eq!(r.basis_vectors, t.up_to_level(3).len());
        }
    }

    #[test]
    fn identities_fail_at_boundary() {
        // S_i S_i* δ_x vanishes when |x| = D, so the relation is truncated away.
        let t = TruncatedTree::new(2, 3).unwrap();
        let leaf = VertexVector::delta(t.len(), idx(&t, "111"));
        let co = apply_shift(&t, &apply_shift_adjoint(&t, &leaf, 1).unwrap(), 1).unwrap();
        assert_eq!(co.max_abs_diff(&leaf), 1.0);
    }

    #[test]
    fn identities_need_depth_three() {
        let t = TruncatedTree::new(2, 2).unwrap();
        assert!(matches!(
            verify_operator_identities(&t),
            Err(SpectralError::DepthTooSmall { .. })
        ));
    }

    #[test]
    fn laplacian_symmetric_and_nonnegative() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for n in 1..=3 {
            let t = TruncatedTree::new(n, 5)
                .unwrap()
                .with_conductance(|_, c| 0.5 + c.len() as f64 * 0.25)
                .unwrap();
            for _ in 0..20 {
                let u = VertexVector::from_vec(
                    (0..t.len()).map(|_| rng.random_range(-1.0..1.0)).collect(),
                );
                let v = VertexVector::from_vec(
                    (0..t.len()).map(|_| rng.random_range(-1.0..1.0)).collect(),
                );
                let lu = apply_laplacian(&t, &u).unwrap();
                let lv = apply_laplacian(&t, &v).unwrap();
                assert!((u.dot(&lv) - lu.dot(&v)).abs() <= 1e-12 * (1.0 + u.dot(&lv).abs()));
                assert!(v.dot(&lv) >= 0.0);
            }
        }
    }
}
