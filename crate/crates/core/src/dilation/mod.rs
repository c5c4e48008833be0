//! Explicit Cuntz dilation of a row coisometry on `ℓ²[V × Ω_N*]`, truncated
//! to words of bounded length, with numerical checks of the Cuntz relations.

mod completion;
mod word;

pub use completion::{complete_unitary, DilationAssembler};
pub use word::{DilationSpace, DilationWord};

use rayon::prelude::*;
use serde::Serialize;

use crate::coisometry::Coisometry;
use crate::error::{Error, Result};
use crate::linalg::{max_abs_diff, rank, CMatrix, SparseMatrix, C64, ONE};
use crate::product::MinimalSetReport;
use crate::walk::LabeledWalk;

/// Singular-value cutoff for [`Dilation::cyclicity_rank`].
pub const RANK_TOL: f64 = 1e-8;

/// `S_λ` and `S_λ*` on the truncated space. Columns of `S_λ` are populated
/// for `|w| ≤ depth` (images reach `depth + 1`); `S_λ*` is assembled from its
/// own case formula on every stored column.
#[derive(Debug, Clone)]
pub struct Dilation {
    walk: LabeledWalk,
    space: DilationSpace,
    assembler: DilationAssembler,
    s: Vec<SparseMatrix>,
    s_star: Vec<SparseMatrix>,
}

/// Builds with Householder completions and the lexicographic pairing.
pub fn build_dilation(walk: &LabeledWalk, depth: usize) -> Result<Dilation> {
    walk.ensure_operator_ready(crate::walk::DEFAULT_NORMALIZATION_TOL)?;
    let assembler = DilationAssembler::new(walk)?;
    Dilation::assemble(walk, depth, assembler)
}

impl Dilation {
    /// Builds from explicit completions and pairing, which are used as given.
    pub fn assemble(
        walk: &LabeledWalk,
        depth: usize,
        assembler: DilationAssembler,
    ) -> Result<Self> {
        if depth == 0 {
            return Err(Error::InvalidArgument(
                "dilation depth must be at least 1".into(),
            ));
        }
        let n = walk.num_labels();
        let space = DilationSpace::new(walk.num_vertices(), n, depth);
        let stored = space.stored_dim();
        let mut s = Vec::with_capacity(n);
        let mut s_star = Vec::with_capacity(n);
        for l in 0..n {
            let mut forward = Vec::new();
            for col in 0..space.dim(depth) {
                let (j, w) = space.basis(col);
                for (i, word, z) in Self::s_column(walk, &assembler, l, j, w) {
                    let row = space.index(i, &word).expect("image stays within depth + 1");
                    forward.push((row, col, z));
                }
            }
            s.push(SparseMatrix::from_triplets(stored, stored, forward));

            let mut backward = Vec::new();
            for col in 0..stored {
                let (i, u) = space.basis(col);
                if let Some((j, word, z)) = Self::s_star_column(&assembler, l, i, u) {
                    let row = space.index(j, &word).expect("adjoint lowers the level");
                    backward.push((row, col, z));
                }
            }
            s_star.push(SparseMatrix::from_triplets(stored, stored, backward));
        }
        Ok(Self {
            walk: walk.clone(),
            space,
            assembler,
            s,
            s_star,
        })
    }

    /// `S_λ(j,w)`: `Σ_{k<n_i} conj(c^k_{i,λ}) (i, kw)` when `i →λ j`, otherwise
    /// `(F(j,λ), G(j,λ)w)`.
    fn s_column(
        walk: &LabeledWalk,
        a: &DilationAssembler,
        label: usize,
        j: usize,
        w: &DilationWord,
    ) -> Vec<(usize, DilationWord, C64)> {
        let source = walk
            .in_labels(j)
            .into_iter()
            .find(|&(l, _)| l == label)
            .map(|(_, i)| i);
        match source {
            Some(i) => (0..a.out_labels[i].len())
                .map(|k| (i, w.prepend(k), a.coefficient(i, label, k).unwrap().conj()))
                .collect(),
            None => match a.phi(j, label) {
                Some((i, k)) => vec![(i, w.prepend(k), ONE)],
                None => Vec::new(),
            },
        }
    }

    /// `S_λ*(i,u)` with `k′` the first digit of `u` (0 for `∅`):
    /// `c^{k′}_{i,λ} (i·λ, u∖k′)` when `λ ∈ Λ_i` and `k′ < n_i`;
    /// `(F̃(i,k′), u∖k′)` when `k′ ≥ n_i` and `G̃(i,k′) = λ`; otherwise 0.
    fn s_star_column(
        a: &DilationAssembler,
        label: usize,
        i: usize,
        u: &DilationWord,
    ) -> Option<(usize, DilationWord, C64)> {
        let k = u.first_digit();
        let rest = u.strip(k)?;
        if k < a.out_labels[i].len() {
            let p = a.position(i, label)?;
            let target = a.target_of(i, p)?;
            Some((target, rest, a.completions[i][(p, k)]))
        } else {
            match a.phi_inverse(i, k) {
                Some((j, l)) if l == label => Some((j, rest, ONE)),
                _ => None,
            }
        }
    }

    pub fn walk(&self) -> &LabeledWalk {
        &self.walk
    }

    pub fn space(&self) -> &DilationSpace {
        &self.space
    }

    pub fn depth(&self) -> usize {
        self.space.depth()
    }

    pub fn assembler(&self) -> &DilationAssembler {
        &self.assembler
    }

    pub fn s(&self, label: usize) -> &SparseMatrix {
        &self.s[label]
    }

    pub fn s_star(&self, label: usize) -> &SparseMatrix {
        &self.s_star[label]
    }

    /// Entries of `m` in the first `cols` columns.
    fn columns_up_to(
        m: &SparseMatrix,
        cols: usize,
    ) -> impl Iterator<Item = (usize, usize, C64)> + '_ {
        m.triplets().filter(move |&(_, c, _)| c < cols)
    }

    fn identity_residual_on(m: &SparseMatrix, cols: usize, scale: C64) -> f64 {
        let mut worst: f64 = 0.0;
        let mut diag_seen = vec![false; cols];
        for (r, c, z) in Self::columns_up_to(m, cols) {
            let expected = if r == c { scale } else { C64::new(0.0, 0.0) };
            if r == c {
                diag_seen[c] = true;
            }
            worst = worst.max((z - expected).norm());
        }
        if scale != C64::new(0.0, 0.0) && diag_seen.iter().any(|s| !s) {
            worst = worst.max(scale.norm());
        }
        worst
    }

    /// Residuals of the Cuntz relations on level `≤ depth`, the compression
    /// identity and the adjoint consistency. Pairs `(μ, λ)` are checked in
    /// parallel; the reduction is order independent.
    pub fn verify_cuntz(&self, tol: f64) -> CuntzReport {
        let n = self.s.len();
        let cols = self.space.dim(self.depth());
        let isometry = (0..n * n)
            .into_par_iter()
            .map(|p| {
                let (mu, l) = (p / n, p % n);
                let prod = self.s_star[mu].mul(&self.s[l]);
                let scale = if mu == l { ONE } else { C64::new(0.0, 0.0) };
                Self::identity_residual_on(&prod, cols, scale)
            })
            .reduce(|| 0.0, f64::max);

        let stored = self.space.stored_dim();
        let mut sum = SparseMatrix::zeros(stored, stored);
        for l in 0..n {
            sum = sum.add(&self.s[l].mul(&self.s_star[l]));
        }
        let completeness = Self::identity_residual_on(&sum, cols, ONE);

        let co = Coisometry::new(&self.walk);
        let k = self.space.dim(0);
        let compression = match co {
            Ok(co) => (0..n)
                .map(|l| {
                    let mut block = CMatrix::zeros(k, k);
                    for (r, c, z) in self.s_star[l].triplets() {
                        if r < k && c < k {
                            block[(r, c)] = z;
                        }
                    }
                    max_abs_diff(&block, &co.v_star(l).to_dense())
                })
                .fold(0.0, f64::max),
            Err(_) => f64::INFINITY,
        };

        let adjoint = (0..n)
            .map(|l| {
                let diff = self.s[l].adjoint().add(&self.s_star[l].scale(-ONE));
                diff.max_abs()
            })
            .fold(0.0, f64::max);

        CuntzReport {
            depth: self.depth(),
            dimension: cols,
            isometry,
            completeness,
            compression,
            adjoint,
            passed: isometry <= tol && completeness <= tol && compression <= tol && adjoint <= tol,
        }
    }

    /// `S_w(i,∅)` for every word `w` with `|w| ≤ level`, breadth first.
    fn orbit_vectors(&self, level: usize) -> Vec<Vec<C64>> {
        let stored = self.space.stored_dim();
        let mut layer: Vec<Vec<C64>> = (0..self.space.dim(0))
            .map(|i| {
                let mut v = vec![C64::new(0.0, 0.0); stored];
                v[i] = ONE;
                v
            })
            .collect();
        let mut all = layer.clone();
        for _ in 0..level {
            let next: Vec<Vec<C64>> = layer
                .iter()
                .flat_map(|v| self.s.iter().map(move |s| s.mul_vec(v)))
                .collect();
            all.extend(next.iter().cloned());
            layer = next;
        }
        all
    }

    /// Rank of `{S_w(i,∅) : |w| ≤ level}` in the level-`≤ level` space.
    pub fn cyclicity_rank(&self, level: usize) -> Result<usize> {
        if level > self.depth() {
            return Err(Error::DepthExceeded {
                requested: level,
                depth: self.depth(),
            });
        }
        let rows = self.space.dim(level);
        let vectors = self.orbit_vectors(level);
        let m = CMatrix::from_fn(rows, vectors.len(), |r, c| vectors[c][r]);
        Ok(rank(&m, RANK_TOL))
    }

    /// `P_{K_m} = Σ_{|λ|=m} S_λ P_K S_λ*` on the level-`≤ depth` space.
    pub fn km_projection(&self, m: usize) -> Result<CMatrix> {
        if m > self.depth() {
            return Err(Error::DepthExceeded {
                requested: m,
                depth: self.depth(),
            });
        }
        let dim = self.space.dim(self.depth());
        let mut layer: Vec<Vec<C64>> = (0..self.space.dim(0))
            .map(|i| {
                let mut v = vec![C64::new(0.0, 0.0); self.space.stored_dim()];
                v[i] = ONE;
                v
            })
            .collect();
        for _ in 0..m {
            layer = layer
                .iter()
                .flat_map(|v| self.s.iter().map(move |s| s.mul_vec(v)))
                .collect();
        }
        let mut p = CMatrix::zeros(dim, dim);
        for v in &layer {
            for r in 0..dim {
                if v[r] == C64::new(0.0, 0.0) {
                    continue;
                }
                for c in 0..dim {
                    p[(r, c)] += v[r] * v[c].conj();
                }
            }
        }
        Ok(p)
    }

    /// `‖(i,∅) − Σ_{λ∈F(i,i), |λ|≤n} α_{i,λ} S_λ(i·λ,∅)‖²` for `n = 1..=n_max`,
    /// where `F(i,i)` holds the first arrivals at the designated points of
    /// `report` (computed on the walk paired with itself).
    pub fn first_return_decomposition(
        &self,
        vertex: usize,
        report: &MinimalSetReport,
        n_max: usize,
    ) -> Result<Vec<f64>> {
        if n_max > self.depth() {
            return Err(Error::DepthExceeded {
                requested: n_max,
                depth: self.depth(),
            });
        }
        let nv = self.walk.num_vertices();
        let designated = report.designated_mask(nv * nv);
        let is_designated = |v: usize| designated[v * nv + v];
        let stored = self.space.stored_dim();
        let mut x = vec![C64::new(0.0, 0.0); stored];
        x[vertex] = ONE;
        // paths still travelling: (current vertex, labels, amplitude)
        let mut paths: Vec<(usize, Vec<usize>, C64)> = vec![(vertex, Vec::new(), ONE)];
        let mut out = Vec::with_capacity(n_max);
        for _ in 0..n_max {
            let mut next = Vec::new();
            for (at, word, amp) in &paths {
                for l in self.walk.out_labels(*at) {
                    let e = self.walk.edge(*at, l).unwrap();
                    let mut w = word.clone();
                    w.push(l);
                    let a = amp * e.alpha;
                    if is_designated(e.target) {
                        let mut v = vec![C64::new(0.0, 0.0); stored];
                        v[e.target] = ONE;
                        for &label in w.iter().rev() {
                            v = self.s[label].mul_vec(&v);
                        }
                        for (xr, vr) in x.iter_mut().zip(&v) {
                            *xr -= a * vr;
                        }
                    } else {
                        next.push((e.target, w, a));
                    }
                }
            }
            paths = next;
            out.push(x.iter().map(|z| z.norm_sqr()).sum());
        }
        Ok(out)
    }

    /// `(row, col, value)` triplets of `S_λ`.
    pub fn triplets(&self, label: usize) -> Vec<(usize, usize, C64)> {
        self.s[label].triplets().collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CuntzReport {
    pub depth: usize,
    /// Dimension of the level-`≤ depth` space the relations are checked on.
    pub dimension: usize,
    /// `max |S_μ*S_λ − δ_{μλ} I|`.
    pub isometry: f64,
    /// `max |Σ_λ S_λ S_λ* − I|`.
    pub completeness: f64,
    /// `max |P_K S_λ* P_K − V_λ*|`.
    pub compression: f64,
    /// `max |S_λ* − (S_λ)^H|` on the stored space.
    pub adjoint: f64,
    pub passed: bool,
}
