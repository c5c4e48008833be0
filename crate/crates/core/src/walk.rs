//! Labeled weighted graphs ("random walks") and their JSON form.
//!
//! A walk assigns to every vertex `i` and label `λ` a complex amplitude
//! `α(i, λ)`; a nonzero amplitude means the edge `i →λ i·λ` exists. Vertex and
//! label identifiers are opaque strings, indexed densely in input order.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{C64, ONE};

/// Amplitudes with modulus below this are stored as exact zero.
pub const ZERO_THRESHOLD: f64 = 1e-12;

/// Default tolerance for the row normalization check.
pub const DEFAULT_NORMALIZATION_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub target: usize,
    pub alpha: C64,
}

/// A finite word over the label alphabet, stored as label indices.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(pub Vec<usize>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn labels(&self) -> &[usize] {
        &self.0
    }
}

impl From<Vec<usize>> for Word {
    fn from(v: Vec<usize>) -> Self {
        Word(v)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LabeledWalk {
    vertices: Vec<String>,
    labels: Vec<String>,
    /// `edges[i][λ]`, `None` when `α(i, λ) = 0`.
    edges: Vec<Vec<Option<Edge>>>,
    vertex_index: HashMap<String, usize>,
    label_index: HashMap<String, usize>,
}

fn index_ids(ids: &[String], what: &str) -> Result<HashMap<String, usize>> {
    let mut map = HashMap::with_capacity(ids.len());
    for (k, id) in ids.iter().enumerate() {
        if map.insert(id.clone(), k).is_some() {
            return Err(Error::Schema(format!("duplicate {what} id `{id}`")));
        }
    }
    Ok(map)
}

impl LabeledWalk {
    /// Builds a walk from index-based edges `(from, label, to, α)`.
    ///
    /// Amplitudes below [`ZERO_THRESHOLD`] are dropped. A second edge for the
    /// same `(from, label)` is an error.
    pub fn new<V, L, E>(vertices: V, labels: L, edges: E) -> Result<Self>
    where
        V: IntoIterator,
        V::Item: Into<String>,
        L: IntoIterator,
        L::Item: Into<String>,
        E: IntoIterator<Item = (usize, usize, usize, C64)>,
    {
        let vertices: Vec<String> = vertices.into_iter().map(Into::into).collect();
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if vertices.is_empty() {
            return Err(Error::Schema("a walk needs at least one vertex".into()));
        }
        if labels.is_empty() {
            return Err(Error::Schema("a walk needs at least one label".into()));
        }
        let vertex_index = index_ids(&vertices, "vertex")?;
        let label_index = index_ids(&labels, "label")?;
        let mut table = vec![vec![None; labels.len()]; vertices.len()];
        let mut seen = HashSet::new();
        for (from, label, to, alpha) in edges {
            if from >= vertices.len() || to >= vertices.len() {
                return Err(Error::UnknownVertex(format!("#{}", from.max(to))));
            }
            if label >= labels.len() {
                return Err(Error::UnknownLabel(format!("#{label}")));
            }
            if !alpha.re.is_finite() || !alpha.im.is_finite() {
                return Err(Error::Schema("amplitude is not finite".into()));
            }
            if !seen.insert((from, label)) {
                return Err(Error::DuplicateEdge {
                    vertex: vertices[from].clone(),
                    label: labels[label].clone(),
                });
            }
            if alpha.norm() >= ZERO_THRESHOLD {
                table[from][label] = Some(Edge { target: to, alpha });
            }
        }
        Ok(Self {
            vertices,
            labels,
            edges: table,
            vertex_index,
            label_index,
        })
    }

    /// Builds a walk from identifier-based edges `(from, label, to, α)`.
    pub fn from_named<V, L>(
        vertices: V,
        labels: L,
        edges: &[(&str, &str, &str, C64)],
    ) -> Result<Self>
    where
        V: IntoIterator,
        V::Item: Into<String>,
        L: IntoIterator,
        L::Item: Into<String>,
    {
        let vertices: Vec<String> = vertices.into_iter().map(Into::into).collect();
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        let vi = index_ids(&vertices, "vertex")?;
        let li = index_ids(&labels, "label")?;
        let mut indexed = Vec::with_capacity(edges.len());
        for &(from, label, to, alpha) in edges {
            let f = *vi
                .get(from)
                .ok_or_else(|| Error::UnknownVertex(from.into()))?;
            let t = *vi.get(to).ok_or_else(|| Error::UnknownVertex(to.into()))?;
            let l = *li
                .get(label)
                .ok_or_else(|| Error::UnknownLabel(label.into()))?;
            indexed.push((f, l, t, alpha));
        }
        Self::new(vertices, labels, indexed)
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_labels(&self) -> usize {
        self.labels.len()
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn vertex_id(&self, i: usize) -> &str {
        &self.vertices[i]
    }

    pub fn label_id(&self, l: usize) -> &str {
        &self.labels[l]
    }

    pub fn vertex(&self, id: &str) -> Result<usize> {
        self.vertex_index
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownVertex(id.into()))
    }

    pub fn label(&self, id: &str) -> Result<usize> {
        self.label_index
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownLabel(id.into()))
    }

    /// Parses a word from label identifiers.
    pub fn word(&self, ids: &[&str]) -> Result<Word> {
        ids.iter()
            .map(|id| self.label(id))
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }

    /// The edge `i →λ i·λ`, if `α(i, λ) ≠ 0`.
    pub fn edge(&self, i: usize, label: usize) -> Option<Edge> {
        self.edges[i][label]
    }

    /// `α(i, λ)`, zero when the transition is impossible.
    pub fn alpha(&self, i: usize, label: usize) -> C64 {
        self.edges[i][label].map_or(C64::new(0.0, 0.0), |e| e.alpha)
    }

    /// Labels leaving `i` with nonzero amplitude, in label order.
    pub fn out_labels(&self, i: usize) -> Vec<usize> {
        (0..self.labels.len())
            .filter(|&l| self.edges[i][l].is_some())
            .collect()
    }

    /// Labels arriving at `j`, in label order, each with its unique source
    /// (the first source if in-injectivity is violated).
    pub fn in_labels(&self, j: usize) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for l in 0..self.labels.len() {
            if let Some(i) = (0..self.vertices.len())
                .find(|&i| matches!(self.edges[i][l], Some(e) if e.target == j))
            {
                out.push((l, i));
            }
        }
        out
    }

    /// All edges `(from, label, edge)` in vertex-then-label order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, Edge)> + '_ {
        self.edges.iter().enumerate().flat_map(|(i, row)| {
            row.iter()
                .enumerate()
                .filter_map(move |(l, e)| e.map(|e| (i, l, e)))
        })
    }

    pub fn same_alphabet(&self, other: &LabeledWalk) -> bool {
        self.labels == other.labels
    }

    /// Follows `word` from `i`, returning `(i·word, α(i, word))` when every
    /// step is a possible transition. The empty word yields `(i, 1)`.
    pub fn step(&self, i: usize, word: &Word) -> Result<Option<(usize, C64)>> {
        if i >= self.vertices.len() {
            return Err(Error::UnknownVertex(format!("#{i}")));
        }
        if let Some(&bad) = word.0.iter().find(|&&l| l >= self.labels.len()) {
            return Err(Error::UnknownLabel(format!("#{bad}")));
        }
        let mut at = i;
        let mut amp = ONE;
        for &l in &word.0 {
            match self.edges[at][l] {
                Some(e) => {
                    amp *= e.alpha;
                    at = e.target;
                }
                None => return Ok(None),
            }
        }
        Ok(Some((at, amp)))
    }

    /// Checks every walk invariant; never fails, only reports.
    pub fn validate(&self, tol: f64) -> ValidationReport {
        let mut violations = Vec::new();
        for i in 0..self.vertices.len() {
            let sum: f64 = (0..self.labels.len())
                .map(|l| self.alpha(i, l).norm_sqr())
                .sum();
            if (sum - 1.0).abs() > tol {
                violations.push(Violation::RowNormalization {
                    vertex: self.vertices[i].clone(),
                    sum,
                });
            }
            let mut targets: HashMap<usize, usize> = HashMap::new();
            for l in 0..self.labels.len() {
                if let Some(e) = self.edges[i][l] {
                    if let Some(&first) = targets.get(&e.target) {
                        violations.push(Violation::OutInjectivity {
                            vertex: self.vertices[i].clone(),
                            labels: (self.labels[first].clone(), self.labels[l].clone()),
                            target: self.vertices[e.target].clone(),
                        });
                    } else {
                        targets.insert(e.target, l);
                    }
                }
            }
        }
        for l in 0..self.labels.len() {
            let mut sources: HashMap<usize, usize> = HashMap::new();
            for i in 0..self.vertices.len() {
                if let Some(e) = self.edges[i][l] {
                    if let Some(&first) = sources.get(&e.target) {
                        violations.push(Violation::InInjectivity {
                            target: self.vertices[e.target].clone(),
                            label: self.labels[l].clone(),
                            sources: (self.vertices[first].clone(), self.vertices[i].clone()),
                        });
                    } else {
                        sources.insert(e.target, i);
                    }
                }
            }
        }
        ValidationReport { violations }
    }

    /// Fails unless the walk satisfies what the operator constructions rely
    /// on: normalized rows and at most one incoming edge per label.
    ///
    /// Out-injectivity is not needed by any of the operator identities, so a
    /// walk whose only defect is two labels sharing an end vertex (the ring
    /// `Z/2Z` with labels `±1`) is accepted here.
    pub fn ensure_operator_ready(&self, tol: f64) -> Result<()> {
        let report = self.validate(tol);
        let blocking: Vec<String> = report
            .violations
            .iter()
            .filter(|v| !matches!(v, Violation::OutInjectivity { .. }))
            .map(|v| v.to_string())
            .collect();
        if blocking.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidWalk(blocking.join("; ")))
        }
    }

    pub fn to_document(&self) -> WalkDocument {
        WalkDocument {
            vertices: self.vertices.iter().cloned().map(Id::Str).collect(),
            labels: self.labels.iter().cloned().map(Id::Str).collect(),
            edges: self
                .edges()
                .map(|(i, l, e)| EdgeDocument {
                    from: Id::Str(self.vertices[i].clone()),
                    label: Id::Str(self.labels[l].clone()),
                    to: Id::Str(self.vertices[e.target].clone()),
                    alpha: ComplexDocument::from(e.alpha),
                })
                .collect(),
        }
    }

    pub fn from_document(doc: &WalkDocument) -> Result<Self> {
        let vertices: Vec<String> = doc.vertices.iter().map(Id::to_string).collect();
        let labels: Vec<String> = doc.labels.iter().map(Id::to_string).collect();
        let vi = index_ids(&vertices, "vertex")?;
        let li = index_ids(&labels, "label")?;
        let lookup = |map: &HashMap<String, usize>, id: &Id, what: &str| {
            map.get(&id.to_string())
                .copied()
                .ok_or_else(|| Error::Schema(format!("edge refers to unknown {what} `{id}`")))
        };
        let mut edges = Vec::with_capacity(doc.edges.len());
        for e in &doc.edges {
            edges.push((
                lookup(&vi, &e.from, "vertex")?,
                lookup(&li, &e.label, "label")?,
                lookup(&vi, &e.to, "vertex")?,
                C64::from(e.alpha),
            ));
        }
        Self::new(vertices, labels, edges)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: WalkDocument =
            serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
        Self::from_document(&doc)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("walk serializes")
    }
}

/// One violated invariant, naming the offending vertex or label.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    RowNormalization {
        vertex: String,
        sum: f64,
    },
    OutInjectivity {
        vertex: String,
        labels: (String, String),
        target: String,
    },
    InInjectivity {
        target: String,
        label: String,
        sources: (String, String),
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::RowNormalization { vertex, sum } => {
                write!(f, "row `{vertex}` has squared amplitudes summing to {sum}")
            }
            Violation::OutInjectivity {
                vertex,
                labels,
                target,
            } => write!(
                f,
                "labels `{}` and `{}` both lead from `{vertex}` to `{target}`",
                labels.0, labels.1
            ),
            Violation::InInjectivity {
                target,
                label,
                sources,
            } => write!(
                f,
                "label `{label}` enters `{target}` from both `{}` and `{}`",
                sources.0, sources.1
            ),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Vertex or label identifier as it appears in JSON: a string or an integer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Id {
    Str(String),
    Int(i64),
}

impl fmt::Display for Id {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Id::Str(s) => f.write_str(s),
            Id::Int(n) => write!(f, "{n}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexDocument {
    pub re: f64,
    pub im: f64,
}

impl From<C64> for ComplexDocument {
    fn from(z: C64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

impl From<ComplexDocument> for C64 {
    fn from(z: ComplexDocument) -> Self {
        C64::new(z.re, z.im)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeDocument {
    pub from: Id,
    pub label: Id,
    pub to: Id,
    pub alpha: ComplexDocument,
}

/// On-disk schema of a walk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WalkDocument {
    pub vertices: Vec<Id>,
    pub labels: Vec<Id>,
    #[serde(default)]
    pub edges: Vec<EdgeDocument>,
}

/// Multiplication table of a finite group: `product[a][b] = a·b`.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupTable {
    pub elements: Vec<String>,
    pub product: Vec<Vec<usize>>,
}

impl GroupTable {
    /// The cyclic group `Z/nZ` with elements named `"0"…"n-1"`.
    pub fn cyclic(n: usize) -> Self {
        Self {
            elements: (0..n).map(|k| k.to_string()).collect(),
            product: (0..n)
                .map(|a| (0..n).map(|b| (a + b) % n).collect())
                .collect(),
        }
    }

    /// Checks closure, associativity, identity and inverses.
    pub fn check(&self) -> Result<usize> {
        let n = self.elements.len();
        if n == 0 {
            return Err(Error::InvalidGroup("empty element list".into()));
        }
        if self.product.len() != n || self.product.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidGroup("table is not square".into()));
        }
        if self.product.iter().flatten().any(|&x| x >= n) {
            return Err(Error::InvalidGroup("table is not closed".into()));
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let ab = self.product[a][b];
                    let bc = self.product[b][c];
                    if self.product[ab][c] != self.product[a][bc] {
                        return Err(Error::InvalidGroup(format!(
                            "not associative at ({}, {}, {})",
                            self.elements[a], self.elements[b], self.elements[c]
                        )));
                    }
                }
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|a| self.product[e][a] == a && self.product[a][e] == a))
            .ok_or_else(|| Error::InvalidGroup("no identity element".into()))?;
        for a in 0..n {
            if !(0..n).any(|b| self.product[a][b] == identity && self.product[b][a] == identity) {
                return Err(Error::InvalidGroup(format!(
                    "`{}` has no inverse",
                    self.elements[a]
                )));
            }
        }
        Ok(identity)
    }
}

/// A Cayley-graph generator: the label it is known by and its group element.
#[derive(Debug, Clone, PartialEq)]
pub struct Generator {
    pub label: String,
    pub element: usize,
}

impl Generator {
    pub fn new(label: impl Into<String>, element: usize) -> Self {
        Self {
            label: label.into(),
            element,
        }
    }
}

/// Cayley graph walk: vertices are group elements, edge `g →λ λg`, and
/// `α(g, λ) = phase(λ)/√|generators|`.
///
/// Phases are per generator only; vertex-dependent phases have to be built
/// with [`LabeledWalk::new`].
pub fn cayley_walk(
    group: &GroupTable,
    generators: &[Generator],
    phases: Option<&[C64]>,
) -> Result<LabeledWalk> {
    let identity = group.check()?;
    let n = group.elements.len();
    if generators.is_empty() {
        return Err(Error::InvalidGroup("no generators".into()));
    }
    let mut seen = HashSet::new();
    for g in generators {
        if g.element >= n {
            return Err(Error::InvalidGroup(format!(
                "generator `{}` out of range",
                g.label
            )));
        }
        if !seen.insert(g.element) {
            return Err(Error::InvalidGroup(format!(
                "generator element `{}` listed twice",
                group.elements[g.element]
            )));
        }
    }
    if let Some(p) = phases {
        if p.len() != generators.len() {
            return Err(Error::InvalidArgument(format!(
                "{} phases given for {} generators",
                p.len(),
                generators.len()
            )));
        }
        if let Some(bad) = p.iter().find(|z| (z.norm() - 1.0).abs() > 1e-12) {
            return Err(Error::InvalidArgument(format!(
                "phase {bad} is not unimodular"
            )));
        }
    }
    // Left multiplication by the generators must reach every element.
    let mut reached = vec![false; n];
    reached[identity] = true;
    let mut queue = VecDeque::from([identity]);
    while let Some(g) = queue.pop_front() {
        for gen in generators {
            let h = group.product[gen.element][g];
            if !reached[h] {
                reached[h] = true;
                queue.push_back(h);
            }
        }
    }
    if reached.iter().any(|r| !r) {
        return Err(Error::InvalidGroup(
            "generators do not generate the group".into(),
        ));
    }
    let scale = (1.0 / generators.len() as f64).sqrt();
    let mut edges = Vec::with_capacity(n * generators.len());
    for g in 0..n {
        for (l, gen) in generators.iter().enumerate() {
            let phase = phases.map_or(ONE, |p| p[l]);
            edges.push((g, l, group.product[gen.element][g], phase * scale));
        }
    }
    LabeledWalk::new(
        group.elements.clone(),
        generators.iter().map(|g| g.label.clone()),
        edges,
    )
}
