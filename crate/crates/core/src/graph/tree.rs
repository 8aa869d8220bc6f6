use crate::error::{Result, SpectralError};
use crate::graph::word::Word;

/// All words of length at most `depth` over `1..=branching`, indexed level by
/// level and lexicographically within a level, together with a positive
/// conductance on every edge.
///
/// Each edge is identified with its lower endpoint, so the conductance table
/// is indexed by the child vertex; slot 0 (the root) is unused.
#[derive(Debug, Clone)]
pub struct TruncatedTree {
    branching: usize,
    depth: usize,
    offsets: Vec<usize>,
    level: Vec<usize>,
    conductance: Vec<f64>,
}

impl TruncatedTree {
    /// Tree with unit conductance on every edge.
    pub fn new(branching: usize, depth: usize) -> Result<Self> {
        if branching == 0 {
            return Err(SpectralError::ZeroBranching);
        }
        if depth == 0 {
            return Err(SpectralError::DepthTooSmall { depth, required: 1 });
        }
        let mut offsets = Vec::with_capacity(depth + 2);
        let mut acc = 0usize;
        let mut width = 1usize;
        for _ in 0..=depth {
            offsets.push(acc);
            acc = acc
                .checked_add(width)
                .ok_or(SpectralError::Overflow("tree vertex count"))?;
            width = width
                .checked_mul(branching)
                .ok_or(SpectralError::Overflow("tree vertex count"))?;
        }
        offsets.push(acc);
        let mut level = Vec::with_capacity(acc);
        for k in 0..=depth {
            level.extend(std::iter::repeat_n(k, offsets[k + 1] - offsets[k]));
        }
        let mut conductance = vec![1.0; acc];
        conductance[0] = 0.0;
        Ok(TruncatedTree {
            branching,
            depth,
            offsets,
            level,
            conductance,
        })
    }

    /// Replaces the conductances with `c(parent, child)`, which must be positive.
    pub fn with_conductance<F>(mut self, c: F) -> Result<Self>
    where
        F: Fn(&Word, &Word) -> f64,
    {
        for idx in 1..self.len() {
            let child = self.word(idx);
            let value = c(&crate::graph::word::parent(&child), &child);
            if !(value > 0.0 && value.is_finite()) {
                return Err(SpectralError::Domain(format!(
                    "conductance {value} on edge to {child} is not positive"
                )));
            }
            self.conductance[idx] = value;
        }
        Ok(self)
    }

    pub fn branching(&self) -> usize {
        self.branching
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    /// Number of vertices, Σ_{k≤D} N^k.
    pub fn len(&self) -> usize {
        self.offsets[self.depth + 1]
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn level(&self, idx: usize) -> usize {
        self.level[idx]
    }

    /// Index range of the vertices at word length `k`.
    pub fn level_range(&self, k: usize) -> std::ops::Range<usize> {
        self.offsets[k]..self.offsets[k + 1]
    }

    pub fn index(&self, w: &Word) -> Result<usize> {
        w.check_alphabet(self.branching)?;
        if w.len() > self.depth {
            return Err(SpectralError::WordTooDeep {
                len: w.len(),
                depth: self.depth,
            });
        }
        let pos = w
            .letters()
            .iter()
            .fold(0usize, |acc, &l| acc * self.branching + (l - 1));
        Ok(self.offsets[w.len()] + pos)
    }

    pub fn word(&self, idx: usize) -> Word {
        let k = self.level[idx];
        let mut pos = idx - self.offsets[k];
        let mut letters = vec![0; k];
        for slot in letters.iter_mut().rev() {
            *slot = pos % self.branching + 1;
            pos /= self.branching;
        }
        Word::new(letters).expect("letters are in 1..=N")
    }

    /// Parent index; `None` for the root.
    pub fn parent(&self, idx: usize) -> Option<usize> {
        let k = self.level[idx];
        if k == 0 {
            return None;
        }
        let pos = idx - self.offsets[k];
        Some(self.offsets[k - 1] + pos / self.branching)
    }

    /// Index of the child with letter `letter` (1-based); `None` at depth D.
    pub fn child(&self, idx: usize, letter: usize) -> Option<usize> {
        let k = self.level[idx];
        if k == self.depth {
            return None;
        }
        let pos = idx - self.offsets[k];
        Some(self.offsets[k + 1] + pos * self.branching + (letter - 1))
    }

    /// Last letter of the word at `idx`; `None` for the root.
    pub fn last_letter(&self, idx: usize) -> Option<usize> {
        let k = self.level[idx];
        (k > 0).then(|| (idx - self.offsets[k]) % self.branching + 1)
    }

    /// Conductance of the edge joining `idx` to its parent.
    pub fn parent_conductance(&self, idx: usize) -> f64 {
        self.conductance[idx]
    }

    /// Neighbors inside the truncation, with the conductance of the joining edge.
    pub fn neighbors(&self, idx: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let up = self.parent(idx).map(|p| (p, self.conductance[idx]));
        let down = (1..=self.branching)
            .filter_map(move |l| self.child(idx, l))
            .map(move |c| (c, self.conductance[c]));
        up.into_iter().chain(down)
    }

    pub fn degree(&self, idx: usize) -> usize {
        self.neighbors(idx).count()
    }

    /// Indices of all vertices with word length at most `k`.
    pub fn up_to_level(&self, k: usize) -> std::ops::Range<usize> {
        0..self.offsets[k.min(self.depth) + 1]
    }
}
