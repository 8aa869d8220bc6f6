//! Walks on the looped tree T̃: the N-ary tree with one extra loop edge at
//! the root, so every vertex has degree `N + 1`.
//!
//! The distance from the root is a sufficient statistic for counting closed
//! walks: from the root a step either takes the loop (1 way) or descends
//! (N ways); from any other vertex it ascends (1 way) or descends (N ways).

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Result, SpectralError};
use crate::graph::{TruncatedTree, Word};
use crate::jacobi::JacobiMatrix;
use crate::measures::SpectralMeasure;
use crate::operators::{apply_laplacian, VertexVector};

/// Exact table of walk counts from the root, `count(step, level)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WalkCounter {
    branching: usize,
    table: Vec<Vec<u128>>,
}

impl WalkCounter {
    pub fn new(branching: usize, horizon: usize) -> Result<Self> {
        if branching == 0 {
            return Err(SpectralError::ZeroBranching);
        }
        let down = branching as u128;
        let overflow = || SpectralError::Overflow("walk count");
        let mut table = vec![vec![1u128]];
        for step in 0..horizon {
            let prev = &table[step];
            let mut next = vec![0u128; step + 2];
            for (level, &count) in prev.iter().enumerate() {
                if count == 0 {
                    continue;
                }
                let stay_or_up = if level == 0 { 0 } else { level - 1 };
                next[stay_or_up] = next[stay_or_up].checked_add(count).ok_or_else(overflow)?;
                let descend = count.checked_mul(down).ok_or_else(overflow)?;
                next[level + 1] = next[level + 1].checked_add(descend).ok_or_else(overflow)?;
            }
            table.push(next);
        }
        Ok(WalkCounter { branching, table })
    }

    pub fn branching(&self) -> usize {
        self.branching
    }

    pub fn horizon(&self) -> usize {
        self.table.len() - 1
    }

    /// Number of length-`step` walks from the root ending at distance `level`.
    pub fn count(&self, step: usize, level: usize) -> Option<u128> {
        self.table.get(step).map(|row| row.get(level).copied().unwrap_or(0))
    }

    /// Closed walks `N_T̃(n)` for `n = 0..=horizon`.
    pub fn closed_walks(&self) -> Vec<u128> {
        self.table.iter().map(|row| row[0]).collect()
    }
}

/// Number `N_T̃(n)` of closed walks of length `n` at the root of T̃.
pub fn path_count(branching: usize, n: usize) -> Result<u128> {
    Ok(WalkCounter::new(branching, n)?.closed_walks()[n])
}

/// [`path_count`] in arbitrary precision.
pub fn path_count_big(branching: usize, n: usize) -> Result<BigUint> {
    if branching == 0 {
        return Err(SpectralError::ZeroBranching);
    }
    let mut row = vec![BigUint::from(1u32)];
    for _ in 0..n {
        let mut next = vec![BigUint::from(0u32); row.len() + 1];
        for (level, count) in row.iter().enumerate() {
            next[level.saturating_sub(1)] += count;
            next[level + 1] += count * branching;
        }
        row = next;
    }
    Ok(row.swap_remove(0))
}

/// Counts closed walks by following every sequence of edges explicitly,
/// tracking the current vertex as a word.
pub fn brute_force_path_count(branching: usize, n: usize) -> Result<u128> {
    if branching == 0 {
        return Err(SpectralError::ZeroBranching);
    }
    fn walk(at: &mut Vec<usize>, remaining: usize, branching: usize) -> u128 {
        if remaining == 0 {
            return u128::from(at.is_empty());
        }
        let mut total = 0;
        if let Some(last) = at.pop() {
            total += walk(at, remaining - 1, branching);
            at.push(last);
        } else {
            total += walk(at, remaining - 1, branching);
        }
        for letter in 1..=branching {
            at.push(letter);
            total += walk(at, remaining - 1, branching);
            at.pop();
        }
        total
    }
    Ok(walk(&mut Vec::new(), n, branching))
}

/// `N_T̃(n) / (N+1)ⁿ`.
pub fn return_probability_exact(branching: usize, n: usize) -> Result<f64> {
    let count = path_count(branching, n)? as f64;
    Ok(count / ((branching + 1) as f64).powi(n as i32))
}

/// `(A v)(x) = Σ_{y∼x} v(y) + [x = ∅] v(∅)`: adjacency of T̃ restricted to the truncation.
pub fn apply_looped_adjacency(tree: &TruncatedTree, v: &VertexVector) -> Result<VertexVector> {
    if v.len() != tree.len() {
        return Err(SpectralError::SizeMismatch {
            expected: tree.len(),
            actual: v.len(),
        });
    }
    let mut out = VertexVector::from_vec(
        (0..tree.len())
            .map(|x| tree.neighbors(x).map(|(y, _)| v[y]).sum())
            .collect(),
    );
    out[0] += v[0];
    Ok(out)
}

/// Transition operator `𝓜̃ = A / (N + 1)` of the simple random walk on T̃.
pub fn apply_transition(tree: &TruncatedTree, v: &VertexVector) -> Result<VertexVector> {
    Ok(apply_looped_adjacency(tree, v)?.scaled(1.0 / (tree.branching() + 1) as f64))
}

fn check_horizon(tree: &TruncatedTree, n: usize) -> Result<()> {
    let required = n / 2 + 1;
    if tree.depth() < required {
        return Err(SpectralError::DepthTooSmall {
            depth: tree.depth(),
            required,
        });
    }
    Ok(())
}

/// `⟨δ_∅, 𝓜̃ⁿ δ_∅⟩` by repeated application on `tree`.
///
/// A closed walk of length `n` stays within depth `⌊n/2⌋`, so any tree of
/// depth `> n/2` gives the untruncated value.
pub fn transition_return_probability(tree: &TruncatedTree, n: usize) -> Result<f64> {
    check_horizon(tree, n)?;
    let mut v = VertexVector::delta(tree.len(), 0);
    for _ in 0..n {
        v = apply_transition(tree, &v)?;
    }
    Ok(v[0])
}

/// `⟨δ_∅, Aⁿ δ_∅⟩` in exact integer arithmetic on `tree`.
pub fn adjacency_return_count(tree: &TruncatedTree, n: usize) -> Result<u128> {
    check_horizon(tree, n)?;
    let overflow = || SpectralError::Overflow("adjacency power");
    let mut v = vec![0u128; tree.len()];
    v[0] = 1;
    for _ in 0..n {
        let mut next = vec![0u128; tree.len()];
        for (x, slot) in next.iter_mut().enumerate() {
            let mut acc: u128 = if x == 0 { v[0] } else { 0 };
            for (y, _) in tree.neighbors(x) {
                acc = acc.checked_add(v[y]).ok_or_else(overflow)?;
            }
            *slot = acc;
        }
        v = next;
    }
    Ok(v[0])
}

/// `max ‖Δ δ_x − (N+1)(I − 𝓜̃) δ_x‖_∞` over `|x| ≤ D − 1`.
pub fn laplacian_transition_deviation(tree: &TruncatedTree) -> Result<f64> {
    let scale = (tree.branching() + 1) as f64;
    let mut worst: f64 = 0.0;
    for x in tree.up_to_level(tree.depth() - 1) {
        let delta = VertexVector::delta(tree.len(), x);
        let lap = apply_laplacian(tree, &delta)?;
        let rhs = delta.axpy(-1.0, &apply_transition(tree, &delta)?).scaled(scale);
        worst = worst.max(lap.max_abs_diff(&rhs));
    }
    Ok(worst)
}

/// `|∫ xⁿ dμ_{c+p} − N_T̃(n)/(2√N)ⁿ|`, relative to the exact value.
pub fn moment_identity_check(branching: usize, n: usize) -> Result<f64> {
    let mu = SpectralMeasure::perturbed(branching)?;
    let exact = path_moment(branching, n)?;
    let quad = mu.moment(n);
    Ok((quad - exact).abs() / exact.abs())
}

/// `N_T̃(n) / (2√N)ⁿ`.
pub fn path_moment(branching: usize, n: usize) -> Result<f64> {
    let count = path_count(branching, n)? as f64;
    Ok(count / (2.0 * (branching as f64).sqrt()).powi(n as i32))
}

/// `⟨δ_∅, Δⁿ δ_∅⟩ = Σ_k binom(n,k) (N+1)^{n−k} (−1)^k N_T̃(k)`, exactly.
pub fn laplacian_moment_from_paths(branching: usize, n: usize) -> Result<i128> {
    let overflow = || SpectralError::Overflow("Laplacian moment");
    let counts = WalkCounter::new(branching, n)?.closed_walks();
    let base = (branching + 1) as i128;
    let mut binom: i128 = 1;
    let mut total: i128 = 0;
    for (k, &count) in counts.iter().enumerate() {
        let count = i128::try_from(count).map_err(|_| overflow())?;
        let power = base.checked_pow((n - k) as u32).ok_or_else(overflow)?;
        let term = binom
            .checked_mul(power)
            .and_then(|t| t.checked_mul(count))
            .ok_or_else(overflow)?;
        total = if k % 2 == 0 {
            total.checked_add(term)
        } else {
            total.checked_sub(term)
        }
        .ok_or_else(overflow)?;
        binom = binom.checked_mul((n - k) as i128).ok_or_else(overflow)? / (k as i128 + 1);
    }
    Ok(total)
}

/// The three routes to `∫ xⁿ dμ_{c+p}` side by side.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BridgeReport {
    pub order: usize,
    pub quadrature: f64,
    pub jacobi: f64,
    pub paths: f64,
    /// Largest pairwise relative difference.
    pub max_relative: f64,
}

/// Quadrature moment of μ_{c+p}, the Jacobi moment of `(N+1 − D_Ω)/(2√N)`,
/// and the path-count moment.
pub fn bridge_check(branching: usize, n: usize) -> Result<BridgeReport> {
    let quadrature = SpectralMeasure::perturbed(branching)?.moment(n);
    let s = (branching as f64).sqrt();
    let size = n / 2 + 1;
    let mapped = JacobiMatrix::d_omega(branching, size)?.affine((branching + 1) as f64 / (2.0 * s), -1.0 / (2.0 * s));
    let jacobi = mapped.moment(n)?;
    let paths = path_moment(branching, n)?;
    let rel = |a: f64, b: f64| (a - b).abs() / a.abs().max(b.abs());
    Ok(BridgeReport {
        order: n,
        quadrature,
        jacobi,
        paths,
        max_relative: rel(quadrature, jacobi).max(rel(jacobi, paths)).max(rel(quadrature, paths)),
    })
}

/// Monte Carlo configuration for the return frequency after `steps` steps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct WalkConfig {
    pub branching: usize,
    pub steps: usize,
    pub trials: u64,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WalkEstimate {
    pub returns: u64,
    pub trials: u64,
    pub frequency: f64,
    /// `√(p̂(1 − p̂)/trials)`.
    pub standard_error: f64,
}

/// Trials per independently seeded chunk. Chunk `k` draws from the ChaCha
/// stream `k` of the configured seed, so the result does not depend on how
/// chunks are scheduled across threads.
pub const TRIALS_PER_CHUNK: u64 = 1 << 16;

fn simulate_chunk(branching: usize, steps: usize, trials: u64, seed: u64, chunk: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    let mut returns = 0;
    for _ in 0..trials {
        let mut level = 0usize;
        for _ in 0..steps {
            // edge 0 is the loop at the root and the parent edge elsewhere
            if rng.random_range(0..=branching) == 0 {
                level = level.saturating_sub(1);
            } else {
                level += 1;
            }
        }
        returns += u64::from(level == 0);
    }
    returns
}

pub fn walk_simulate(cfg: &WalkConfig) -> Result<WalkEstimate> {
    if cfg.branching == 0 {
        return Err(SpectralError::ZeroBranching);
    }
    if cfg.trials == 0 {
        return Err(SpectralError::Domain("at least one trial is required".into()));
    }
    let chunks = cfg.trials.div_ceil(TRIALS_PER_CHUNK);
    let returns: u64 = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let start = chunk * TRIALS_PER_CHUNK;
            let size = TRIALS_PER_CHUNK.min(cfg.trials - start);
            simulate_chunk(cfg.branching, cfg.steps, size, cfg.seed, chunk)
        })
        .sum();
    let frequency = returns as f64 / cfg.trials as f64;
    Ok(WalkEstimate {
        returns,
        trials: cfg.trials,
        frequency,
        standard_error: (frequency * (1.0 - frequency) / cfg.trials as f64).sqrt(),
    })
}

/// Simulated frequency against the exact probability, in units of the exact
/// binomial standard deviation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MonteCarloCheck {
    pub estimate: WalkEstimate,
    pub exact: f64,
    pub sigma: f64,
    pub deviation_in_sigma: f64,
}

pub fn monte_carlo_check(cfg: &WalkConfig) -> Result<MonteCarloCheck> {
    let estimate = walk_simulate(cfg)?;
    let exact = return_probability_exact(cfg.branching, cfg.steps)?;
    let sigma = (exact * (1.0 - exact) / cfg.trials as f64).sqrt();
    let diff = (estimate.frequency - exact).abs();
    let deviation_in_sigma = if sigma > 0.0 {
        diff / sigma
    } else if diff == 0.0 {
        0.0
    } else {
        f64::INFINITY
    };
    Ok(MonteCarloCheck {
        estimate,
        exact,
        sigma,
        deviation_in_sigma,
    })
}

/// Vertices visited by one simulated walk on T̃, starting at the root.
pub fn sample_path(branching: usize, steps: usize, seed: u64) -> Result<Vec<Word>> {
    if branching == 0 {
        return Err(SpectralError::ZeroBranching);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut at = Word::root();
    let mut path = vec![at.clone()];
    for _ in 0..steps {
        let edge = rng.random_range(0..=branching);
        at = match (edge, at.is_root()) {
            (0, true) => at,
            (0, false) => at.prefix(at.len() - 1),
            (letter, _) => at.child(letter),
        };
        path.push(at.clone());
    }
    Ok(path)
}
