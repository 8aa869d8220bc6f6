//! Tree potentials, the energy form and the resistance metric.
//!
//! The potential of a word `η` is the solution of `Δv = δ_∅ − δ_η` (unit
//! conductances), pinned by `v(η) = 0`: `v(ω) = |η| − cpl(ω, η)`, where
//! `cpl` is the length of the longest common prefix.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Result, SpectralError};
use crate::graph::{common_prefix_len, tree_path_length, TruncatedTree, Word};
use crate::operators::{apply_laplacian, VertexVector};

/// `|η| − cpl(ω, η)`; identically zero for `η = ∅`.
pub fn potential_value(eta: &Word, omega: &Word) -> f64 {
    (eta.len() - common_prefix_len(eta, omega)) as f64
}

#[derive(Debug, Clone, PartialEq)]
pub struct Potential {
    target: Word,
    values: VertexVector,
}

impl Potential {
    pub fn target(&self) -> &Word {
        &self.target
    }

    pub fn values(&self) -> &VertexVector {
        &self.values
    }

    pub fn into_values(self) -> VertexVector {
        self.values
    }
}

/// Closed-form potential of `η` on every vertex of `tree`.
pub fn potential(eta: &Word, tree: &TruncatedTree) -> Result<Potential> {
    if eta.is_root() {
        return Err(SpectralError::InvalidWord(
            "the root needs no potential".into(),
        ));
    }
    eta.check_alphabet(tree.branching())?;
    let required = eta.len() + 1;
    if tree.depth() < required {
        return Err(SpectralError::DepthTooSmall {
            depth: tree.depth(),
            required,
        });
    }
    let values = (0..tree.len())
        .map(|idx| potential_value(eta, &tree.word(idx)))
        .collect();
    Ok(Potential {
        target: eta.clone(),
        values: VertexVector::from_vec(values),
    })
}

/// `max |Δv − (δ_∅ − δ_η)|` over vertices of depth `≤ D − 1`.
pub fn potential_residual(p: &Potential, tree: &TruncatedTree) -> Result<f64> {
    let lap = apply_laplacian(tree, &p.values)?;
    let eta = tree.index(&p.target)?;
    let mut worst: f64 = 0.0;
    for idx in tree.up_to_level(tree.depth() - 1) {
        let mut target = 0.0;
        if idx == 0 {
            target += 1.0;
        }
        if idx == eta {
            target -= 1.0;
        }
        worst = worst.max((lap[idx] - target).abs());
    }
    Ok(worst)
}

/// Energy pairing `ℰ(u', u) = Σ_x Σ_{y∼x} c(xy)(u'(x) − u'(y))(u(x) − u(y))`;
/// every edge is visited from both ends.
pub fn energy(u: &VertexVector, u_prime: &VertexVector, tree: &TruncatedTree) -> Result<f64> {
    for v in [u, u_prime] {
        if v.len() != tree.len() {
            return Err(SpectralError::SizeMismatch {
                expected: tree.len(),
                actual: v.len(),
            });
        }
    }
    Ok((0..tree.len())
        .map(|x| {
            tree.neighbors(x)
                .map(|(y, c)| c * (u_prime[x] - u_prime[y]) * (u[x] - u[y]))
                .sum::<f64>()
        })
        .sum())
}

/// Resistance metric `√(2 l(x, y))`.
pub fn resistance_dist(x: &Word, y: &Word) -> f64 {
    (2.0 * tree_path_length(x, y) as f64).sqrt()
}

/// `√2 · (v_x(y) + v_y(x) − v_x(x) − v_y(y))^{1/2}` from the potentials.
pub fn resistance_dist_from_potentials(x: &Word, y: &Word) -> f64 {
    let s = potential_value(x, y) + potential_value(y, x)
        - potential_value(x, x)
        - potential_value(y, y);
    (2.0 * s).sqrt()
}

/// `⟨v_x, v_y⟩_E = 2(v_y(∅) − v_y(x)) = 2 cpl(x, y)`.
pub fn covariance(x: &Word, y: &Word) -> f64 {
    2.0 * (potential_value(y, &Word::root()) - potential_value(y, x))
}

pub fn covariance_gram(words: &[Word]) -> DMatrix<f64> {
    DMatrix::from_fn(words.len(), words.len(), |i, j| covariance(&words[i], &words[j]))
}

/// Smallest eigenvalue of the covariance Gram matrix.
pub fn gram_min_eigenvalue(words: &[Word]) -> f64 {
    if words.is_empty() {
        return 0.0;
    }
    covariance_gram(words)
        .symmetric_eigenvalues()
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

/// Non-root words of length `1..=depth`.
pub fn words_up_to(branching: usize, depth: usize) -> Vec<Word> {
    let mut out = Vec::new();
    let mut level = vec![Word::root()];
    for _ in 0..depth {
        level = level
            .iter()
            .flat_map(|w| (1..=branching).map(move |i| w.child(i)))
            .collect();
        out.extend(level.iter().cloned());
    }
    out
}

/// `Σ_x Σ_y ξ(x) l(x, y) ξ(y)` after projecting `ξ` onto mean zero.
pub fn neg_semidefinite_check(words: &[Word], xi: &[f64]) -> Result<f64> {
    if words.len() != xi.len() {
        return Err(SpectralError::SizeMismatch {
            expected: words.len(),
            actual: xi.len(),
        });
    }
    if xi.is_empty() {
        return Ok(0.0);
    }
    let mean = xi.iter().sum::<f64>() / xi.len() as f64;
    let centred: Vec<f64> = xi.iter().map(|v| v - mean).collect();
    let mut total = 0.0;
    for (a, x) in centred.iter().zip(words) {
        for (b, y) in centred.iter().zip(words) {
            total += a * b * tree_path_length(x, y) as f64;
        }
    }
    Ok(total)
}

/// Largest quadratic-form value over `trials` random mean-zero vectors on
/// all words of length `≤ depth` (the root included).
pub fn neg_semidefinite_sweep(branching: usize, depth: usize, trials: usize, seed: u64) -> Result<f64> {
    let mut words = vec![Word::root()];
    words.extend(words_up_to(branching, depth));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..trials {
        let xi: Vec<f64> = (0..words.len()).map(|_| rng.random_range(-1.0..1.0)).collect();
        worst = worst.max(neg_semidefinite_check(&words, &xi)?);
    }
    Ok(worst)
}

/// `v_y(y) + v_z(x) − v_y(x) − v_z(y)` for `x ≤ y ≤ z` in prefix order.
pub fn independent_increments_check(x: &Word, y: &Word, z: &Word) -> Result<f64> {
    if !x.is_prefix_of(y) || !y.is_prefix_of(z) {
        return Err(SpectralError::NotNested);
    }
    Ok(potential_value(y, y) + potential_value(z, x) - potential_value(y, x) - potential_value(z, y))
}

/// Worst increment residual over `trials` random nested triples of length `≤ depth`.
pub fn independent_increments_sweep(branching: usize, depth: usize, trials: usize, seed: u64) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..trials {
        let len = rng.random_range(0..=depth);
        let letters: Vec<usize> = (0..len).map(|_| rng.random_range(1..=branching)).collect();
        let z = Word::new(letters)?;
        let cut_y = rng.random_range(0..=len);
        let cut_x = rng.random_range(0..=cut_y);
        worst = worst.max(independent_increments_check(&z.prefix(cut_x), &z.prefix(cut_y), &z)?.abs());
    }
    Ok(worst)
}

/// Solves `Δw = δ_∅ − δ_η` on the full truncated tree with the natural
/// (free) boundary at depth D and `w` grounded to zero at the last leaf,
/// by a dense Cholesky factorisation.
pub fn grounded_potential_solve(eta: &Word, tree: &TruncatedTree) -> Result<VertexVector> {
    let eta_idx = tree.index(eta)?;
    let n = tree.len();
    if n < 2 {
        return Err(SpectralError::DepthTooSmall {
            depth: tree.depth(),
            required: 1,
        });
    }
    let ground = n - 1;
    let free = n - 1;
    let mut matrix = DMatrix::<f64>::zeros(free, free);
    for x in 0..free {
        for (y, c) in tree.neighbors(x) {
            matrix[(x, x)] += c;
            if y != ground {
                matrix[(x, y)] -= c;
            }
        }
    }
    let mut rhs = DVector::<f64>::zeros(free);
    rhs[0] += 1.0;
    if eta_idx != ground {
        rhs[eta_idx] -= 1.0;
    }
    let solution = matrix
        .cholesky()
        .ok_or_else(|| SpectralError::Domain("grounded Laplacian is not positive definite".into()))?
        .solve(&rhs);
    let mut out = solution.iter().copied().collect::<Vec<_>>();
    out.push(0.0);
    Ok(VertexVector::from_vec(out))
}

/// `max − min` of `closed form − grounded solve` over vertices of depth `≤ D − 1`.
pub fn potential_solve_spread(eta: &Word, tree: &TruncatedTree) -> Result<f64> {
    let closed = potential(eta, tree)?;
    let solved = grounded_potential_solve(eta, tree)?;
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for idx in tree.up_to_level(tree.depth() - 1) {
        let d = closed.values[idx] - solved[idx];
        lo = lo.min(d);
        hi = hi.max(d);
    }
    Ok(hi - lo)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResistanceReport {
    pub potential_residual: f64,
    pub distance_mismatch: f64,
    pub gram_min_eigenvalue: f64,
    pub neg_semidefinite_max: f64,
    pub increment_residual: f64,
    pub solve_spread: f64,
}

/// Runs every resistance check for branching `N` on words up to `depth`.
pub fn resistance_report(branching: usize, depth: usize, trials: usize, seed: u64) -> Result<ResistanceReport> {
    let tree = TruncatedTree::new(branching, depth + 1)?;
    let words = words_up_to(branching, depth);
    let mut potential_residual_max: f64 = 0.0;
    for eta in &words {
        let p = potential(eta, &tree)?;
        potential_residual_max = potential_residual_max.max(potential_residual(&p, &tree)?);
    }
    let mut all = vec![Word::root()];
    all.extend(words.iter().cloned());
    let mut distance_mismatch: f64 = 0.0;
    for x in &all {
        for y in &all {
            distance_mismatch =
                distance_mismatch.max((resistance_dist(x, y) - resistance_dist_from_potentials(x, y)).abs());
        }
    }
    let gram_words = words_up_to(branching, depth.min(4));
    let solve_tree = TruncatedTree::new(branching, 7)?;
    let eta = Word::new(vec![1])?;
    Ok(ResistanceReport {
        potential_residual: potential_residual_max,
        distance_mismatch,
        gram_min_eigenvalue: gram_min_eigenvalue(&gram_words),
        neg_semidefinite_max: neg_semidefinite_sweep(branching, depth.min(4), trials, seed)?,
        increment_residual: independent_increments_sweep(branching, depth, trials, seed ^ 0x5eed)?,
        solve_spread: potential_solve_spread(&eta, &solve_tree)?,
    })
}
