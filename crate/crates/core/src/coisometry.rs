//! The row coisometry `(V_λ)` on `ℓ²[V]` and the transfer map `σ`.
//!
//! Matrix convention, used by every operator in this crate: an operator
//! `T: ℓ²[V] → ℓ²[V′]` is stored as its ordinary matrix, so the entry
//! `T(i, i′) = ⟨T e_i, e_i′⟩` sits at row `i′`, column `i`.

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, SparseMatrix};
use crate::walk::{LabeledWalk, DEFAULT_NORMALIZATION_TOL};

#[derive(Debug, Clone)]
pub struct Coisometry {
    walk: LabeledWalk,
    v: Vec<SparseMatrix>,
    v_star: Vec<SparseMatrix>,
}

impl Coisometry {
    /// Materializes `V_λ e_j = conj(α(i,λ)) e_i` for `i →λ j`, and its adjoint
    /// `V_λ* e_i = α(i,λ) e_{i·λ}`.
    pub fn new(walk: &LabeledWalk) -> Result<Self> {
        walk.ensure_operator_ready(DEFAULT_NORMALIZATION_TOL)?;
        let n = walk.num_vertices();
        let mut v_star = Vec::with_capacity(walk.num_labels());
        let mut v = Vec::with_capacity(walk.num_labels());
        for l in 0..walk.num_labels() {
            let trips: Vec<_> = (0..n)
                .filter_map(|i| walk.edge(i, l).map(|e| (e.target, i, e.alpha)))
                .collect();
            let adj = SparseMatrix::from_triplets(n, n, trips.iter().copied());
            v.push(SparseMatrix::from_triplets(
                n,
                n,
                trips.iter().map(|&(j, i, a)| (i, j, a.conj())),
            ));
            v_star.push(adj);
        }
        Ok(Self {
            walk: walk.clone(),
            v,
            v_star,
        })
    }

    pub fn walk(&self) -> &LabeledWalk {
        &self.walk
    }

    pub fn dim(&self) -> usize {
        self.walk.num_vertices()
    }

    pub fn v(&self, label: usize) -> &SparseMatrix {
        &self.v[label]
    }

    pub fn v_star(&self, label: usize) -> &SparseMatrix {
        &self.v_star[label]
    }

    /// `max |Σ_λ V_λ V_λ* − I|` entrywise.
    pub fn identity_residual(&self) -> f64 {
        let n = self.dim();
        let mut sum = SparseMatrix::zeros(n, n);
        for l in 0..self.v.len() {
            sum = sum.add(&self.v[l].mul(&self.v_star[l]));
        }
        let diff = sum.to_dense() - CMatrix::identity(n, n);
        crate::linalg::max_abs(&diff)
    }
}

/// `σ(T) = Σ_λ V′_λ T V_λ*` for `T: ℓ²[V] → ℓ²[V′]` (shape `|V′| × |V|`).
/// With `source == target` this is the usual `σ(A) = Σ V_λ A V_λ*`.
pub fn apply_sigma(source: &Coisometry, target: &Coisometry, t: &CMatrix) -> Result<CMatrix> {
    if !source.walk.same_alphabet(&target.walk) {
        return Err(Error::AlphabetMismatch);
    }
    let expected = (target.dim(), source.dim());
    if t.shape() != expected {
        return Err(Error::ShapeMismatch {
            expected,
            got: t.shape(),
        });
    }
    let mut out = CMatrix::zeros(expected.0, expected.1);
    for l in 0..source.v.len() {
        let right = source.v_star[l].left_mul_dense(t);
        out += target.v[l].mul_dense(&right);
    }
    Ok(out)
}
