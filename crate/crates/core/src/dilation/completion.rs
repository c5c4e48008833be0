//! Unitary completions `C_i` and the pairing `φ` of missing incoming labels
//! with unused digits.

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, C64, ONE};
use crate::walk::LabeledWalk;

/// Deterministic unitary whose first column is `column`, set exactly.
///
/// With `θ = a₀/|a₀|` (or 1) and `v = a + θe₀`, the matrix `−θ(I − 2vv*/v*v)`
/// sends `e₀` to `a`.
pub fn complete_unitary(column: &[C64]) -> Result<CMatrix> {
    let n = column.len();
    let norm = column.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if n == 0 || (norm - 1.0).abs() > 1e-9 {
        return Err(Error::NonUnitColumn(norm));
    }
    let a0 = column[0];
    let theta = if a0.norm() == 0.0 {
        ONE
    } else {
        a0 / a0.norm()
    };
    let mut v: Vec<C64> = column.iter().map(|z| z / norm).collect();
    v[0] += theta;
    let vv: f64 = v.iter().map(|z| z.norm_sqr()).sum();
    let mut u = CMatrix::zeros(n, n);
    for r in 0..n {
        for c in 0..n {
            let id = if r == c { ONE } else { C64::new(0.0, 0.0) };
            u[(r, c)] = -theta * (id - v[r] * v[c].conj() * (2.0 / vv));
        }
    }
    for (r, &z) in column.iter().enumerate() {
        u[(r, 0)] = z;
    }
    Ok(u)
}

/// Labels `Λ_i` leaving each vertex, completions `C_i` (rows indexed by
/// `Λ_i` in label order) and the pairing `(j,λ) ↦ (i,k)` of
/// `{(j,λ) : λ ∉ Λ^j}` with `{(i,k) : n_i ≤ k < N}`.
///
/// Fields are public so that tests can inject other completions or a broken
/// pairing before assembling.
#[derive(Debug, Clone)]
pub struct DilationAssembler {
    pub out_labels: Vec<Vec<usize>>,
    /// `targets[i][p]` is the end of the edge labelled `out_labels[i][p]`.
    pub targets: Vec<Vec<usize>>,
    pub completions: Vec<CMatrix>,
    pub pairing: Vec<((usize, usize), (usize, usize))>,
}

impl DilationAssembler {
    /// Householder completions and the lexicographic pairing in input order.
    pub fn new(walk: &LabeledWalk) -> Result<Self> {
        let n = walk.num_vertices();
        let labels = walk.num_labels();
        let out_labels: Vec<Vec<usize>> = (0..n).map(|i| walk.out_labels(i)).collect();
        let completions = out_labels
            .iter()
            .enumerate()
            .map(|(i, ls)| {
                let column: Vec<C64> = ls.iter().map(|&l| walk.alpha(i, l)).collect();
                complete_unitary(&column)
            })
            .collect::<Result<Vec<_>>>()?;

        let mut missing = Vec::new();
        for j in 0..n {
            let entering: Vec<usize> = walk.in_labels(j).iter().map(|&(l, _)| l).collect();
            missing.extend(
                (0..labels)
                    .filter(|l| !entering.contains(l))
                    .map(|l| (j, l)),
            );
        }
        let spare: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| (out_labels[i].len()..labels).map(move |k| (i, k)))
            .collect();
        if missing.len() != spare.len() {
            return Err(Error::InvalidWalk(format!(
                "{} missing incoming labels against {} spare digits",
                missing.len(),
                spare.len()
            )));
        }
        let targets = out_labels
            .iter()
            .enumerate()
            .map(|(i, ls)| {
                ls.iter()
                    .map(|&l| walk.edge(i, l).unwrap().target)
                    .collect()
            })
            .collect();
        Ok(Self {
            out_labels,
            targets,
            completions,
            pairing: missing.into_iter().zip(spare).collect(),
        })
    }

    /// Position of `λ` in `Λ_i`.
    pub fn position(&self, i: usize, label: usize) -> Option<usize> {
        self.out_labels[i].iter().position(|&l| l == label)
    }

    /// Target of the edge leaving `i` with the `p`-th label of `Λ_i`.
    pub fn target_of(&self, i: usize, p: usize) -> Option<usize> {
        self.targets.get(i).and_then(|t| t.get(p)).copied()
    }

    /// `c^k_{i,λ}`.
    pub fn coefficient(&self, i: usize, label: usize, k: usize) -> Option<C64> {
        self.position(i, label).map(|p| self.completions[i][(p, k)])
    }

    /// `φ(j,λ) = (F(j,λ), G(j,λ))`.
    pub fn phi(&self, j: usize, label: usize) -> Option<(usize, usize)> {
        self.pairing
            .iter()
            .find(|(d, _)| *d == (j, label))
            .map(|&(_, c)| c)
    }

    /// `φ⁻¹(i,k) = (F̃(i,k), G̃(i,k))`.
    pub fn phi_inverse(&self, i: usize, k: usize) -> Option<(usize, usize)> {
        self.pairing
            .iter()
            .find(|(_, c)| *c == (i, k))
            .map(|&(d, _)| d)
    }
}
