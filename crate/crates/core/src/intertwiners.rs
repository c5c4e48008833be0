//! Intertwiners between two dilations, realized as fixed points
//! `T = Σ_λ V′_λ T V_λ*` of `σ` on `|V′| × |V|` matrices.
//!
//! Matrix convention: the entry `T_{i,i′} = ⟨T e_i, e′_{i′}⟩` sits at row `i′`,
//! column `i`.

use serde::Serialize;

use crate::coisometry::{apply_sigma, Coisometry};
use crate::error::{Error, Result};
use crate::linalg::{
    max_abs_diff, null_space, orthonormal_span, projection_residual, unvectorize, vectorize,
    CMatrix, CVector, C64, ONE, ZERO,
};
use crate::product::{Balance, MinimalSetReport, ProductGraph};
use crate::walk::LabeledWalk;

/// Default singular-value cutoff for the dense null-space oracle.
pub const ORACLE_TOL: f64 = 1e-8;
/// Default bound on `|V|·|V′|` for the dense oracle.
pub const ORACLE_LIMIT: usize = 400;
/// Stopping residual of the iterative transient solve.
pub const ITERATIVE_TOL: f64 = 1e-12;
/// Iteration cap for iterative solves.
pub const MAX_ITERATIONS: usize = 100_000;

/// Basis of the intertwiner space, one element per balanced minimal set.
#[derive(Debug, Clone)]
pub struct IntertwinerSpace {
    pub graph: ProductGraph,
    pub report: MinimalSetReport,
    /// Representative pair `(i, i′)` of each balanced set, in basis order.
    pub representatives: Vec<(usize, usize)>,
    /// Basis matrices of shape `|V′| × |V|`.
    pub basis: Vec<CMatrix>,
}

impl IntertwinerSpace {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn source(&self) -> &LabeledWalk {
        self.graph.left()
    }

    pub fn target(&self) -> &LabeledWalk {
        self.graph.right()
    }

    /// Largest `max|σ(T) − T|` over the basis.
    pub fn sigma_residual(&self) -> Result<f64> {
        let src = Coisometry::new(self.source())?;
        let dst = Coisometry::new(self.target())?;
        let mut worst: f64 = 0.0;
        for t in &self.basis {
            worst = worst.max(max_abs_diff(&apply_sigma(&src, &dst, t)?, t));
        }
        Ok(worst)
    }

    pub fn vectors(&self) -> Vec<CVector> {
        self.basis.iter().map(vectorize).collect()
    }

    pub fn to_document(&self) -> BasisDocument {
        let (src, dst) = (self.source(), self.target());
        BasisDocument {
            source_vertices: src.vertices().to_vec(),
            target_vertices: dst.vertices().to_vec(),
            dimension: self.dimension(),
            basis: self
                .representatives
                .iter()
                .zip(&self.basis)
                .map(|(&(i, ip), t)| BasisElement {
                    representative: Some((src.vertex_id(i).into(), dst.vertex_id(ip).into())),
                    entries: dense_rows(t),
                })
                .collect(),
        }
    }
}

/// Row-major `[re, im]` entries.
pub fn dense_rows(t: &CMatrix) -> Vec<Vec<[f64; 2]>> {
    (0..t.nrows())
        .map(|r| {
            (0..t.ncols())
                .map(|c| [t[(r, c)].re, t[(r, c)].im])
                .collect()
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct BasisDocument {
    /// Column labels.
    pub source_vertices: Vec<String>,
    /// Row labels.
    pub target_vertices: Vec<String>,
    pub dimension: usize,
    pub basis: Vec<BasisElement>,
}

#[derive(Debug, Clone, Serialize)]
pub struct BasisElement {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub representative: Option<(String, String)>,
    pub entries: Vec<Vec<[f64; 2]>>,
}

/// Structured basis. Each element is the potential anchored at one balanced
/// set's representative and vanishes on the other minimal sets. Transient
/// pairs get the unique solution of `T_u = Σ_λ α(i,λ) conj(α′(i′,λ)) T_{u·λ}`.
pub fn intertwiner_basis(source: &LabeledWalk, target: &LabeledWalk) -> Result<IntertwinerSpace> {
    source.ensure_operator_ready(crate::walk::DEFAULT_NORMALIZATION_TOL)?;
    target.ensure_operator_ready(crate::walk::DEFAULT_NORMALIZATION_TOL)?;
    let graph = ProductGraph::new(source, target)?;
    let report = graph.analyze();
    let nodes = graph.num_nodes();

    let mut in_min_set = vec![false; nodes];
    for s in &report.sets {
        for &v in &s.nodes {
            in_min_set[v] = true;
        }
    }
    let transient: Vec<usize> = (0..nodes).filter(|&v| !in_min_set[v]).collect();
    let mut slot = vec![usize::MAX; nodes];
    for (k, &v) in transient.iter().enumerate() {
        slot[v] = k;
    }

    let mut fixed: Vec<Vec<C64>> = Vec::new();
    let mut representatives = Vec::new();
    for s in &report.sets {
        if let Some(Balance::Balanced { potential }) = &s.balance {
            let mut values = vec![ZERO; nodes];
            for (&v, &p) in s.nodes.iter().zip(potential) {
                values[v] = p;
            }
            fixed.push(values);
            representatives.push(graph.pair(s.representative));
        }
    }

    let k = fixed.len();
    let nt = transient.len();
    if nt > 0 && k > 0 {
        let mut a = CMatrix::zeros(nt, nt);
        let mut rhs = CMatrix::zeros(nt, k);
        for (r, &u) in transient.iter().enumerate() {
            for (l, v) in graph.successors(u) {
                let w = graph.weight(u, l);
                if slot[v] != usize::MAX {
                    a[(r, slot[v])] += w;
                } else {
                    for (c, values) in fixed.iter().enumerate() {
                        rhs[(r, c)] += w * values[v];
                    }
                }
            }
        }
        let solution = solve_transient(&a, &rhs)?;
        for (c, values) in fixed.iter_mut().enumerate() {
            for (r, &u) in transient.iter().enumerate() {
                values[u] = solution[(r, c)];
            }
        }
    }

    let (m, n) = (target.num_vertices(), source.num_vertices());
    let basis = fixed
        .iter()
        .map(|values| {
            let mut t = CMatrix::zeros(m, n);
            for (u, &x) in values.iter().enumerate() {
                let (i, ip) = graph.pair(u);
                t[(ip, i)] = x;
            }
            t
        })
        .collect();
    Ok(IntertwinerSpace {
        graph,
        report,
        representatives,
        basis,
    })
}

/// Solves `(I − A) X = B`; LU first, plain iteration `X ← AX + B` if the
/// factorization is singular or inaccurate.
fn solve_transient(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    let n = a.nrows();
    let system = CMatrix::identity(n, n) - a;
    if let Some(x) = system.clone().lu().solve(b) {
        let residual = max_abs_diff(&(&system * &x), b);
        if x.iter().all(|z| z.re.is_finite() && z.im.is_finite()) && residual <= 1e-10 {
            return Ok(x);
        }
    }
    let mut x = b.clone();
    for _ in 0..MAX_ITERATIONS {
        let next = a * &x + b;
        let change = max_abs_diff(&next, &x);
        x = next;
        if change <= ITERATIVE_TOL {
            return Ok(x);
        }
    }
    Err(Error::NoConvergence(MAX_ITERATIONS))
}

/// Dense fixed-point space of `σ`, independent of the product-graph analysis.
#[derive(Debug, Clone)]
pub struct OracleSpace {
    pub shape: (usize, usize),
    /// Orthonormal basis of `ker(Id − σ)`, vectorized column-major.
    pub vectors: Vec<CVector>,
}

impl OracleSpace {
    pub fn dimension(&self) -> usize {
        self.vectors.len()
    }

    pub fn matrices(&self) -> Vec<CMatrix> {
        self.vectors
            .iter()
            .map(|v| unvectorize(v, self.shape.0, self.shape.1))
            .collect()
    }
}

/// Null space of `Id − σ` by SVD with singular-value cutoff `tol`. The matrix
/// of `σ` is assembled column by column from `σ(E_{r,c})`.
pub fn fixed_point_oracle(
    source: &LabeledWalk,
    target: &LabeledWalk,
    tol: f64,
    limit: usize,
) -> Result<OracleSpace> {
    let src = Coisometry::new(source)?;
    let dst = Coisometry::new(target)?;
    let shape = (dst.dim(), src.dim());
    let unknowns = shape.0 * shape.1;
    if unknowns > limit {
        return Err(Error::SizeLimit { unknowns, limit });
    }
    let mut op = CMatrix::identity(unknowns, unknowns);
    let mut unit = CMatrix::zeros(shape.0, shape.1);
    for c in 0..shape.1 {
        for r in 0..shape.0 {
            unit[(r, c)] = ONE;
            let image = vectorize(&apply_sigma(&src, &dst, &unit)?);
            let col = r + shape.0 * c;
            for (row, z) in image.iter().enumerate() {
                op[(row, col)] -= *z;
            }
            unit[(r, c)] = ZERO;
        }
    }
    Ok(OracleSpace {
        shape,
        vectors: null_space(&op, tol),
    })
}

/// Largest mutual projection residual between two spans; `∞` when the
/// dimensions differ.
pub fn span_distance(a: &[CVector], b: &[CVector]) -> f64 {
    let qa = orthonormal_span(a, 1e-10);
    let qb = orthonormal_span(b, 1e-10);
    if qa.len() != qb.len() {
        return f64::INFINITY;
    }
    projection_residual(a, &qb).max(projection_residual(b, &qa))
}

/// `T1 ∗ T2 = lim σⁿ(T1 T2)`, iterating until successive iterates agree to `tol`.
pub fn commutant_product(
    walk: &LabeledWalk,
    t1: &CMatrix,
    t2: &CMatrix,
    tol: f64,
    max_iterations: usize,
) -> Result<CMatrix> {
    let co = Coisometry::new(walk)?;
    let n = co.dim();
    for t in [t1, t2] {
        if t.shape() != (n, n) {
            return Err(Error::ShapeMismatch {
                expected: (n, n),
                got: t.shape(),
            });
        }
    }
    let mut x = t1 * t2;
    for _ in 0..max_iterations {
        let next = apply_sigma(&co, &co, &x)?;
        let change = max_abs_diff(&next, &x);
        x = next;
        if change <= tol {
            return Ok(x);
        }
    }
    Err(Error::NoConvergence(max_iterations))
}

/// Largest `|T_{i,i′} − Σ_{λ∈F(i,i′), |λ|≤n_max} α(i,λ) conj(α′(i′,λ)) T_{(i,i′)·λ}|`
/// over all pairs, where `F(i,i′)` holds the nonempty words whose path first
/// meets a designated representative at its last step.
pub fn first_arrival_check(
    source: &LabeledWalk,
    target: &LabeledWalk,
    t: &CMatrix,
    n_max: usize,
) -> Result<f64> {
    let graph = ProductGraph::new(source, target)?;
    let expected = (target.num_vertices(), source.num_vertices());
    if t.shape() != expected {
        return Err(Error::ShapeMismatch {
            expected,
            got: t.shape(),
        });
    }
    let report = graph.analyze();
    let nodes = graph.num_nodes();
    let designated = report.designated_mask(nodes);
    let value = |u: usize| {
        let (i, ip) = graph.pair(u);
        t[(ip, i)]
    };
    let mut worst: f64 = 0.0;
    for start in 0..nodes {
        let mut mass = vec![ZERO; nodes];
        mass[start] = ONE;
        let mut rhs = ZERO;
        for _ in 0..n_max {
            let mut next = vec![ZERO; nodes];
            for (u, &x) in mass.iter().enumerate() {
                if x == ZERO {
                    continue;
                }
                for (l, v) in graph.successors(u) {
                    next[v] += x * graph.weight(u, l);
                }
            }
            for (v, x) in next.iter_mut().enumerate() {
                if designated[v] {
                    rhs += *x * value(v);
                    *x = ZERO;
                }
            }
            mass = next;
        }
        worst = worst.max((value(start) - rhs).norm());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::linalg::max_abs;

    fn entry(space: &IntertwinerSpace, t: &CMatrix, i: &str, ip: &str) -> C64 {
        let i = space.source().vertex(i).unwrap();
        let ip = space.target().vertex(ip).unwrap();
        t[(ip, i)]
    }

    #[test]
    fn commutant_of_graph_v() {
        let w = fixtures::graph_v();
        let space = intertwiner_basis(&w, &w).unwrap();
        assert_eq!(space.dimension(), 2);
        assert!(space.sigma_residual().unwrap() < 1e-10);
        for t in &space.basis {
            for r in 0..5 {
                for c in 0..5 {
                    if r != c {
                        assert_eq!(t[(r, c)], ZERO);
                    }
                }
            }
            let a = entry(&space, t, "1", "1");
            let b = entry(&space, t, "4", "4");
            assert!((entry(&space, t, "2", "2") - a).norm() < 1e-12);
            assert!((entry(&space, t, "3", "3") - a).norm() < 1e-12);
            assert!((entry(&space, t, "0", "0") - (a + b) / 2.0).norm() < 1e-12);
        }
    }

    #[test]
    fn graph_v_into_graph_v_prime() {
        let (w, wp) = (fixtures::graph_v(), fixtures::graph_v_prime());
        let space = intertwiner_basis(&w, &wp).unwrap();
        assert_eq!(space.dimension(), 2);
        assert!(space.sigma_residual().unwrap() < 1e-10);
        for t in &space.basis {
            let a = entry(&space, t, "1", "1");
            let b = entry(&space, t, "4", "4");
            assert!((entry(&space, t, "4", "5") - b).norm() < 1e-12);
            assert!((entry(&space, t, "0", "0") - (a + b) / 2.0).norm() < 1e-12);
            let allowed = [
                ("0", "0"),
                ("1", "1"),
                ("2", "2"),
                ("3", "3"),
                ("4", "4"),
                ("4", "5"),
            ];
            for i in w.vertices() {
                for ip in wp.vertices() {
                    if !allowed.contains(&(i.as_str(), ip.as_str())) {
                        assert_eq!(entry(&space, t, i, ip), ZERO, "({i},{ip})");
                    }
                }
            }
        }
    }

    #[test]
    fn phased_triangle_commutant_is_scalar() {
        let w = fixtures::phased_triangle();
        let space = intertwiner_basis(&w, &w).unwrap();
        assert_eq!(space.dimension(), 1);
        let t = &space.basis[0];
        assert!(max_abs_diff(t, &CMatrix::identity(3, 3)) < 1e-12);
    }

    #[test]
    fn oracle_agrees_on_ring_pairs() {
        for (m, n) in [(2, 2), (2, 3), (4, 6)] {
            let (a, b) = (fixtures::cyclic_walk(m), fixtures::cyclic_walk(n));
            let space = intertwiner_basis(&a, &b).unwrap();
            let oracle = fixed_point_oracle(&a, &b, ORACLE_TOL, ORACLE_LIMIT).unwrap();
            let g = num_integer::gcd(m, n);
            assert_eq!(space.dimension(), g);
            assert_eq!(oracle.dimension(), g);
            assert!(span_distance(&space.vectors(), &oracle.vectors) < 1e-8);
        }
    }

    #[test]
    fn oracle_refuses_large_inputs() {
        let w = fixtures::cyclic_walk(21);
        assert!(matches!(
            fixed_point_oracle(&w, &w, ORACLE_TOL, ORACLE_LIMIT),
            Err(Error::SizeLimit {
                unknowns: 441,
                limit: 400
            })
        ));
    }

    #[test]
    fn identity_is_always_fixed() {
        let w = fixtures::graph_v_prime();
        let oracle = fixed_point_oracle(&w, &w, ORACLE_TOL, ORACLE_LIMIT).unwrap();
        assert_eq!(oracle.dimension(), 3);
        let id = vectorize(&CMatrix::identity(6, 6));
        assert!(projection_residual(&[id], &oracle.vectors) < 1e-8);
    }

    #[test]
    fn right_translations_multiply_like_the_group() {
        let w = fixtures::z3_cayley();
        let shift = |g: usize| {
            let mut m = CMatrix::zeros(3, 3);
            for x in 0..3 {
                m[((x + g) % 3, x)] = ONE;
            }
            m
        };
        for g in 0..3 {
            for h in 0..3 {
                let p = commutant_product(&w, &shift(g), &shift(h), 1e-13, 1000).unwrap();
                assert!(max_abs_diff(&p, &shift((g + h) % 3)) < 1e-12);
            }
        }
    }

    #[test]
    fn product_with_identity_is_neutral() {
        let w = fixtures::graph_v();
        let space = intertwiner_basis(&w, &w).unwrap();
        for t in &space.basis {
            let p = commutant_product(&w, t, &CMatrix::identity(5, 5), 1e-13, 10_000).unwrap();
            assert!(max_abs_diff(&p, t) < 1e-12);
        }
    }

    #[test]
    fn commutant_product_rejects_non_fixed_points() {
        let w = fixtures::z2_cayley();
        let mut t = CMatrix::zeros(2, 2);
        t[(0, 0)] = ONE;
        // σ swaps the two diagonal entries forever
        assert!(matches!(
            commutant_product(&w, &t, &CMatrix::identity(2, 2), 1e-12, 50),
            Err(Error::NoConvergence(50))
        ));
    }

    #[test]
    fn first_arrival_identity() {
        let w = fixtures::graph_v();
        let space = intertwiner_basis(&w, &w).unwrap();
        // worst start is the representative (1,1); each lap of the 3-cycle
        // returns half the mass, leaving 2^-19 in flight after 40 steps
        let at_40 = first_arrival_check(&w, &w, &space.basis[0], 40).unwrap();
        assert!((at_40 - 2f64.powi(-19)).abs() < 1e-15, "{at_40}");
        for t in &space.basis {
            assert!(first_arrival_check(&w, &w, t, 60).unwrap() < 1e-6);
        }
        let id = CMatrix::identity(5, 5);
        let short = first_arrival_check(&w, &w, &id, 2).unwrap();
        let long = first_arrival_check(&w, &w, &id, 40).unwrap();
        assert!(long < short && long < 1e-5);
    }

    #[test]
    fn basis_matches_representative_values() {
        let w = fixtures::graph_v();
        let space = intertwiner_basis(&w, &w).unwrap();
        for (k, t) in space.basis.iter().enumerate() {
            for (j, &(i, ip)) in space.representatives.iter().enumerate() {
                let expected = if j == k { ONE } else { ZERO };
                assert_eq!(t[(ip, i)], expected);
            }
            assert!(max_abs(t) <= 1.0 + 1e-12);
        }
    }
}
