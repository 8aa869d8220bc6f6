use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Result, SpectralError};

/// A vertex of the N-ary tree: a finite word over the alphabet `1..=N`.
///
/// The empty word is the root. Letters are stored as given (1-based).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct Word(Vec<usize>);

impl Word {
    pub fn root() -> Self {
        Word(Vec::new())
    }

    /// Builds a word, rejecting zero letters. Range against a particular
    /// branching number is checked with [`Word::check_alphabet`].
    pub fn new(letters: Vec<usize>) -> Result<Self> {
        if letters.contains(&0) {
            return Err(SpectralError::InvalidWord(format!("{letters:?}")));
        }
        Ok(Word(letters))
    }

    pub fn letters(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// Same as [`Word::is_root`].
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    pub fn last(&self) -> Option<usize> {
        self.0.last().copied()
    }

    pub fn check_alphabet(&self, branching: usize) -> Result<()> {
        if branching == 0 {
            return Err(SpectralError::ZeroBranching);
        }
        match self.0.iter().find(|&&l| l == 0 || l > branching) {
            Some(&letter) => Err(SpectralError::LetterOutOfRange { letter, branching }),
            None => Ok(()),
        }
    }

    /// The word with `letter` appended (the map τ_i).
    pub fn child(&self, letter: usize) -> Word {
        let mut letters = self.0.clone();
        letters.push(letter);
        Word(letters)
    }

    /// Prefix of the first `len` letters.
    pub fn prefix(&self, len: usize) -> Word {
        Word(self.0[..len.min(self.0.len())].to_vec())
    }

    pub fn concat(&self, tail: &Word) -> Word {
        let mut letters = self.0.clone();
        letters.extend_from_slice(&tail.0);
        Word(letters)
    }

    pub fn is_prefix_of(&self, other: &Word) -> bool {
        other.0.starts_with(&self.0)
    }
}

/// The `N` children `w1, …, wN` in letter order.
pub fn children(w: &Word, branching: usize) -> Result<Vec<Word>> {
    w.check_alphabet(branching)?;
    Ok((1..=branching).map(|i| w.child(i)).collect())
}

/// Drops the last letter; the root is its own parent.
pub fn parent(w: &Word) -> Word {
    let mut letters = w.0.clone();
    letters.pop();
    Word(letters)
}

pub fn common_prefix_len(a: &Word, b: &Word) -> usize {
    a.0.iter().zip(&b.0).take_while(|(x, y)| x == y).count()
}

/// Graph distance between two vertices of the tree.
pub fn tree_path_length(a: &Word, b: &Word) -> usize {
    a.len() + b.len() - 2 * common_prefix_len(a, b)
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("∅");
        }
        if self.0.iter().all(|&l| l < 10) {
            for l in &self.0 {
                write!(f, "{l}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.0.iter().map(|l| l.to_string()).collect();
            f.write_str(&parts.join("."))
        }
    }
}

impl FromStr for Word {
    type Err = SpectralError;

    /// Accepts `""`, `"∅"` or `"root"` for the root, digit strings such as
    /// `"121"`, and dot- or comma-separated letters (`"1.12.3"`) when N ≥ 10.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "∅" || s.eq_ignore_ascii_case("root") {
            return Ok(Word::root());
        }
        let letters: Option<Vec<usize>> = if s.contains(['.', ',']) {
            s.split(['.', ',']).map(|p| p.trim().parse().ok()).collect()
        } else {
            s.chars().map(|c| c.to_digit(10).map(|d| d as usize)).collect()
        };
        let letters = letters.ok_or_else(|| SpectralError::InvalidWord(s.to_string()))?;
        Word::new(letters).map_err(|_| SpectralError::InvalidWord(s.to_string()))
    }
}
