//! Words over `{0,…,N−1}` that do not end in 0, and the truncated basis
//! `{(i, w) : |w| ≤ depth}`.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize)]
#[serde(transparent)]
pub struct DilationWord(Vec<usize>);

impl DilationWord {
    pub fn empty() -> Self {
        Self(Vec::new())
    }

    /// Rejects words ending in 0.
    pub fn from_digits(digits: Vec<usize>) -> Result<Self> {
        if digits.last() == Some(&0) {
            return Err(Error::InvalidArgument(format!("word {digits:?} ends in 0")));
        }
        Ok(Self(digits))
    }

    pub fn digits(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `kw`, with `0∅ = ∅`.
    pub fn prepend(&self, k: usize) -> Self {
        if k == 0 && self.is_empty() {
            return Self::empty();
        }
        let mut digits = Vec::with_capacity(self.len() + 1);
        digits.push(k);
        digits.extend_from_slice(&self.0);
        Self(digits)
    }

    /// `w′` with `kw′ = w`; `strip(∅, 0) = ∅`, `strip(∅, k≠0)` is absent.
    pub fn strip(&self, k: usize) -> Option<Self> {
        match self.0.first() {
            None => (k == 0).then(Self::empty),
            Some(&d) if d == k => Some(Self(self.0[1..].to_vec())),
            Some(_) => None,
        }
    }

    /// First digit, reading `∅` as `0`.
    pub fn first_digit(&self) -> usize {
        self.0.first().copied().unwrap_or(0)
    }

    /// Every word of length `≤ max_len` over `n` digits, ordered by length and
    /// then lexicographically. There are `n^max_len` of them.
    pub fn enumerate(n: usize, max_len: usize) -> Vec<Self> {
        let mut out = vec![Self::empty()];
        let mut layer: Vec<Vec<usize>> = vec![Vec::new()];
        for _ in 0..max_len {
            let mut next = Vec::with_capacity(layer.len() * n);
            for w in &layer {
                for d in 0..n {
                    let mut v = w.clone();
                    v.push(d);
                    next.push(v);
                }
            }
            out.extend(
                next.iter()
                    .filter(|w| w.last() != Some(&0))
                    .cloned()
                    .map(Self),
            );
            layer = next;
        }
        out
    }
}

impl fmt::Display for DilationWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "∅");
        }
        let parts: Vec<String> = self.0.iter().map(|d| d.to_string()).collect();
        write!(f, "{}", parts.join("."))
    }
}

/// Ordered basis `(i, w)` with `|w| ≤ depth + 1`, by word length, then word,
/// then vertex. The level-`≤ m` vectors form the prefix of length
/// `|V|·N^m`.
#[derive(Debug, Clone)]
pub struct DilationSpace {
    depth: usize,
    vertices: usize,
    digits: usize,
    words: Vec<DilationWord>,
    word_index: HashMap<DilationWord, usize>,
}

impl DilationSpace {
    pub fn new(vertices: usize, digits: usize, depth: usize) -> Self {
        let words = DilationWord::enumerate(digits, depth + 1);
        let word_index = words
            .iter()
            .cloned()
            .enumerate()
            .map(|(k, w)| (w, k))
            .collect();
        Self {
            depth,
            vertices,
            digits,
            words,
            word_index,
        }
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices
    }

    pub fn num_digits(&self) -> usize {
        self.digits
    }

    /// Number of basis vectors `(i, w)` with `|w| ≤ level`.
    pub fn dim(&self, level: usize) -> usize {
        let level = level.min(self.depth + 1);
        self.vertices * self.digits.pow(level as u32)
    }

    /// Dimension of the whole stored space (level `≤ depth + 1`).
    pub fn stored_dim(&self) -> usize {
        self.dim(self.depth + 1)
    }

    pub fn index(&self, vertex: usize, word: &DilationWord) -> Option<usize> {
        self.word_index
            .get(word)
            .map(|&k| k * self.vertices + vertex)
    }

    pub fn basis(&self, index: usize) -> (usize, &DilationWord) {
        (index % self.vertices, &self.words[index / self.vertices])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(d: &[usize]) -> DilationWord {
        DilationWord::from_digits(d.to_vec()).unwrap()
    }

    #[test]
    fn conventions_for_the_empty_word() {
        let e = DilationWord::empty();
        assert_eq!(e.prepend(0), e);
        assert_eq!(e.prepend(2), w(&[2]));
        assert_eq!(e.strip(0), Some(e.clone()));
        assert_eq!(e.strip(1), None);
        assert_eq!(e.first_digit(), 0);
    }

    #[test]
    fn prepend_and_strip_are_inverse() {
        let x = w(&[0, 1]);
        assert_eq!(x.prepend(0), w(&[0, 0, 1]));
        assert_eq!(x.prepend(0).strip(0), Some(x.clone()));
        assert_eq!(x.strip(1), None);
        assert_eq!(w(&[2]).strip(2), Some(DilationWord::empty()));
    }

    #[test]
    fn trailing_zero_rejected() {
        assert!(DilationWord::from_digits(vec![1, 0]).is_err());
    }

    #[test]
    fn enumeration_counts_and_order() {
        for n in 1..4 {
            for l in 0..4 {
                let words = DilationWord::enumerate(n, l);
                assert_eq!(words.len(), n.pow(l as u32));
                assert!(words
                    .windows(2)
                    .all(|p| (p[0].len(), &p[0]) < (p[1].len(), &p[1])));
            }
        }
        let words: Vec<String> = DilationWord::enumerate(2, 2)
            .iter()
            .map(|w| w.to_string())
            .collect();
        assert_eq!(words, ["∅", "1", "0.1", "1.1"]);
    }

    #[test]
    fn space_indexing_round_trips() {
        let space = DilationSpace::new(3, 2, 2);
        assert_eq!(space.stored_dim(), 24);
        assert_eq!(space.dim(0), 3);
        assert_eq!(space.dim(2), 12);
        for idx in 0..space.stored_dim() {
            let (v, word) = space.basis(idx);
            assert_eq!(space.index(v, word), Some(idx));
            assert!(word.len() <= 3);
            assert!(idx < space.dim(word.len()));
        }
    }
}
