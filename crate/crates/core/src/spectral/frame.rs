//! Frame `{(∏ α_{l_j}) e_{l₀ + Rl₁ + ⋯ + R^k l_k + R^{k+1}c}}` over words that
//! do not end in a cycle word for the anchor `c` of each minimal set.

use num_rational::Rational64;
use num_traits::{CheckedAdd, CheckedMul};
use serde::Serialize;

use super::{adaptive_terms, MinSet, SpectralSystem};
use crate::error::{Error, Result};
use crate::linalg::{C64, ONE};

#[derive(Debug, Clone, PartialEq)]
pub struct FrameElement {
    /// Index of the minimal set in the list passed in.
    pub min_set: usize,
    /// Indices into `L`.
    pub word: Vec<usize>,
    pub frequency: Rational64,
    pub coefficient: C64,
}

impl FrameElement {
    pub fn frequency_f64(&self) -> f64 {
        *self.frequency.numer() as f64 / *self.frequency.denom() as f64
    }
}

/// Elements for words of length `0..=depth`, ordered by minimal set, then
/// word length, then lexicographically in the order of `L`. Repeated
/// frequencies are kept.
pub fn frame_frequencies(
    sys: &SpectralSystem,
    min_sets: &[MinSet],
    depth: usize,
) -> Result<Vec<FrameElement>> {
    let r = Rational64::from_integer(sys.r());
    let overflow = || Error::InvalidSystem("frame frequency overflows 64 bits".into());
    let m = sys.frequencies().len();
    let mut out = Vec::new();
    for (si, set) in min_sets.iter().enumerate() {
        let c = set.anchor();
        // (word, Σ R^j l_j, R^len, coefficient)
        let mut layer: Vec<(Vec<usize>, Rational64, Rational64, C64)> = vec![(
            Vec::new(),
            Rational64::from_integer(0),
            Rational64::from_integer(1),
            ONE,
        )];
        for len in 0..=depth {
            if len > 0 {
                let mut next = Vec::with_capacity(layer.len() * m);
                for (word, sum, power, coeff) in &layer {
                    for li in 0..m {
                        let l = Rational64::from_integer(sys.frequencies()[li]);
                        let mut w = word.clone();
                        w.push(li);
                        let term = power.checked_mul(&l).ok_or_else(overflow)?;
                        next.push((
                            w,
                            sum.checked_add(&term).ok_or_else(overflow)?,
                            power.checked_mul(&r).ok_or_else(overflow)?,
                            coeff * sys.alpha()[li],
                        ));
                    }
                }
                layer = next;
            }
            for (word, sum, power, coeff) in &layer {
                if set.ends_in_cycle_word(word) {
                    continue;
                }
                let tail = power.checked_mul(&c).ok_or_else(overflow)?;
                out.push(FrameElement {
                    min_set: si,
                    word: word.clone(),
                    frequency: sum.checked_add(&tail).ok_or_else(overflow)?,
                    coefficient: *coeff,
                });
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParsevalRow {
    pub point: f64,
    /// `partial[d]`: sum over frame elements with word length `≤ d`.
    pub partial: Vec<f64>,
}

/// `Σ |coefficient|² |μ̂(t − frequency)|²` over the frame truncated at each
/// depth `0..=depth`. `μ̂` uses at least `terms` factors, more for large
/// arguments.
pub fn verify_parseval(
    sys: &SpectralSystem,
    min_sets: &[MinSet],
    points: &[f64],
    depth: usize,
    terms: usize,
) -> Result<Vec<ParsevalRow>> {
    sys.require_assumptions()?;
    let frame = frame_frequencies(sys, min_sets, depth)?;
    Ok(points
        .iter()
        .map(|&t| {
            let mut by_len = vec![0.0; depth + 1];
            for e in &frame {
                let xi = t - e.frequency_f64();
                let k = adaptive_terms(sys.r(), xi, terms);
                by_len[e.word.len()] += e.coefficient.norm_sqr() * sys.mu_hat(xi, k).norm_sqr();
            }
            let mut acc = 0.0;
            let partial = by_len
                .into_iter()
                .map(|x| {
                    acc += x;
                    acc
                })
                .collect();
            ParsevalRow { point: t, partial }
        })
        .collect())
}
