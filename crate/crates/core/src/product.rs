//! Product transition structure on `V × V′`: orbits, minimal invariant sets,
//! balancedness, first-passage mass and the connected/separating tests.

use std::collections::{HashSet, VecDeque};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{C64, ONE};
use crate::scc;
use crate::walk::{LabeledWalk, Word};

/// Edge-ratio consistency tolerance for the loop (holonomy) condition and
/// the modulus condition.
pub const BALANCE_TOL: f64 = 1e-9;

/// Transition graph on pairs; `(i,i′) →λ (i·λ, i′·λ)` exists exactly when both
/// `α(i,λ)` and `α′(i′,λ)` are nonzero. Node `(i,i′)` has index `i·|V′| + i′`.
#[derive(Debug, Clone)]
pub struct ProductGraph {
    left: LabeledWalk,
    right: LabeledWalk,
    succ: Vec<Vec<Option<usize>>>,
}

impl ProductGraph {
    pub fn new(left: &LabeledWalk, right: &LabeledWalk) -> Result<Self> {
        if !left.same_alphabet(right) {
            return Err(Error::AlphabetMismatch);
        }
        let (n, m) = (left.num_vertices(), right.num_vertices());
        let mut succ = Vec::with_capacity(n * m);
        for i in 0..n {
            for ip in 0..m {
                succ.push(
                    (0..left.num_labels())
                        .map(|l| match (left.edge(i, l), right.edge(ip, l)) {
                            (Some(a), Some(b)) => Some(a.target * m + b.target),
                            _ => None,
                        })
                        .collect(),
                );
            }
        }
        Ok(Self {
            left: left.clone(),
            right: right.clone(),
            succ,
        })
    }

    pub fn left(&self) -> &LabeledWalk {
        &self.left
    }

    pub fn right(&self) -> &LabeledWalk {
        &self.right
    }

    pub fn num_nodes(&self) -> usize {
        self.succ.len()
    }

    pub fn node(&self, i: usize, ip: usize) -> usize {
        i * self.right.num_vertices() + ip
    }

    pub fn pair(&self, node: usize) -> (usize, usize) {
        let m = self.right.num_vertices();
        (node / m, node % m)
    }

    pub fn pair_ids(&self, node: usize) -> (String, String) {
        let (i, ip) = self.pair(node);
        (
            self.left.vertex_id(i).to_string(),
            self.right.vertex_id(ip).to_string(),
        )
    }

    /// Successor of `node` under `label`, if the transition is possible.
    pub fn successor(&self, node: usize, label: usize) -> Option<usize> {
        self.succ[node][label]
    }

    /// `(label, successor)` for every possible one-step transition.
    pub fn successors(&self, node: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.succ[node]
            .iter()
            .enumerate()
            .filter_map(|(l, s)| s.map(|s| (l, s)))
    }

    /// `α(i,λ)·conj(α′(i′,λ))` for the pair at `node`.
    pub fn weight(&self, node: usize, label: usize) -> C64 {
        let (i, ip) = self.pair(node);
        self.left.alpha(i, label) * self.right.alpha(ip, label).conj()
    }

    /// `|α(i,λ)|·|α′(i′,λ)|`.
    pub fn modulus_weight(&self, node: usize, label: usize) -> f64 {
        let (i, ip) = self.pair(node);
        self.left.alpha(i, label).norm() * self.right.alpha(ip, label).norm()
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        (0..self.num_nodes())
            .map(|v| {
                let mut out: Vec<usize> = self.successors(v).map(|(_, w)| w).collect();
                out.sort_unstable();
                out.dedup();
                out
            })
            .collect()
    }

    /// Forward-reachable closure of `node`, the node included.
    pub fn orbit(&self, node: usize) -> Vec<usize> {
        scc::reachable(&self.adjacency(), node)
    }

    /// Minimal invariant sets: the sink strongly connected components of the
    /// product graph. Each set is sorted; sets are ordered by their smallest
    /// node, which is also the designated representative.
    pub fn minimal_invariant_sets(&self) -> Vec<MinimalSet> {
        scc::sink_components(&self.adjacency())
            .into_iter()
            .map(|nodes| MinimalSet {
                representative: nodes[0],
                nodes,
                balance: None,
            })
            .collect()
    }

    /// Minimal sets with their balanced/unbalanced classification.
    pub fn analyze(&self) -> MinimalSetReport {
        let sets = self.minimal_invariant_sets();
        self.classify_balanced(sets)
    }

    pub fn classify_balanced(&self, sets: Vec<MinimalSet>) -> MinimalSetReport {
        let sets = sets
            .into_iter()
            .map(|mut set| {
                set.balance = Some(self.classify_set(&set));
                set
            })
            .collect();
        MinimalSetReport { sets }
    }

    fn classify_set(&self, set: &MinimalSet) -> Balance {
        for &node in &set.nodes {
            let (i, ip) = self.pair(node);
            for l in 0..self.left.num_labels() {
                let a = self.left.alpha(i, l);
                let b = self.right.alpha(ip, l);
                let mismatch = (a.norm() - b.norm()).abs() > BALANCE_TOL
                    || ((a.norm() == 0.0) != (b.norm() == 0.0));
                if mismatch {
                    return Balance::Unbalanced(Witness::Modulus {
                        pair: node,
                        label: l,
                        alpha: a,
                        alpha_prime: b,
                    });
                }
            }
        }

        // Potential over a BFS arborescence rooted at the representative, with
        // edge ratio α′/α; it is consistent iff every loop has α = α′.
        let rep = set.representative;
        let members: HashSet<usize> = set.nodes.iter().copied().collect();
        let mut theta: Vec<Option<C64>> = vec![None; self.num_nodes()];
        let mut parent: Vec<Option<(usize, usize)>> = vec![None; self.num_nodes()];
        theta[rep] = Some(ONE);
        let mut queue = VecDeque::from([rep]);
        while let Some(u) = queue.pop_front() {
            for (l, v) in self.successors(u) {
                if theta[v].is_none() {
                    theta[v] = Some(theta[u].unwrap() * self.ratio(u, l));
                    parent[v] = Some((u, l));
                    queue.push_back(v);
                }
            }
        }
        for &u in &set.nodes {
            for (l, v) in self.successors(u) {
                debug_assert!(members.contains(&v));
                let expected = theta[u].unwrap() * self.ratio(u, l);
                if (theta[v].unwrap() - expected).norm() > BALANCE_TOL {
                    return Balance::Unbalanced(self.holonomy_witness(rep, u, l, v, &parent));
                }
            }
        }
        Balance::Balanced {
            potential: set.nodes.iter().map(|&v| theta[v].unwrap()).collect(),
        }
    }

    fn ratio(&self, node: usize, label: usize) -> C64 {
        let (i, ip) = self.pair(node);
        self.right.alpha(ip, label) / self.left.alpha(i, label)
    }

    fn tree_path(&self, to: usize, parent: &[Option<(usize, usize)>]) -> Vec<usize> {
        let mut word = Vec::new();
        let mut at = to;
        while let Some((p, l)) = parent[at] {
            word.push(l);
            at = p;
        }
        word.reverse();
        word
    }

    fn shortest_path(&self, from: usize, to: usize) -> Vec<usize> {
        let mut prev: Vec<Option<(usize, usize)>> = vec![None; self.num_nodes()];
        let mut seen = vec![false; self.num_nodes()];
        seen[from] = true;
        let mut queue = VecDeque::from([from]);
        while let Some(u) = queue.pop_front() {
            if u == to {
                break;
            }
            for (l, v) in self.successors(u) {
                if !seen[v] {
                    seen[v] = true;
                    prev[v] = Some((u, l));
                    queue.push_back(v);
                }
            }
        }
        let mut word = Vec::new();
        let mut at = to;
        while at != from {
            let (p, l) = prev[at].expect("target reachable inside a minimal set");
            word.push(l);
            at = p;
        }
        word.reverse();
        word
    }

    /// Of the two loops `tree(rep→u)·λ·path(v→rep)` and `tree(rep→v)·path(v→rep)`
    /// at least one has `α ≠ α′`, since the edge `u →λ v` breaks the potential.
    fn holonomy_witness(
        &self,
        rep: usize,
        u: usize,
        label: usize,
        v: usize,
        parent: &[Option<(usize, usize)>],
    ) -> Witness {
        let back = self.shortest_path(v, rep);
        let mut through_edge = self.tree_path(u, parent);
        through_edge.push(label);
        through_edge.extend_from_slice(&back);
        let mut through_tree = self.tree_path(v, parent);
        through_tree.extend_from_slice(&back);
        let (i, ip) = self.pair(rep);
        let products = |word: &[usize]| {
            let w = Word(word.to_vec());
            let a = self.left.step(i, &w).unwrap().map(|x| x.1).unwrap();
            let b = self.right.step(ip, &w).unwrap().map(|x| x.1).unwrap();
            (a, b)
        };
        let (a1, b1) = products(&through_edge);
        let (a2, b2) = products(&through_tree);
        let (word, a, b) = if (a1 - b1).norm() >= (a2 - b2).norm() {
            (through_edge, a1, b1)
        } else {
            (through_tree, a2, b2)
        };
        Witness::Holonomy {
            start: rep,
            word,
            product: a,
            product_prime: b,
        }
    }

    /// `P((i,i′); k)` for `k = 0..=n`: total `|α(i,w)||α′(i′,w)|` over words `w`
    /// of length `k` whose path avoids every designated representative at all
    /// times `0..=k`. Mass entering a representative is removed.
    pub fn first_passage(&self, report: &MinimalSetReport, node: usize, n: usize) -> Vec<f64> {
        let designated = report.designated_mask(self.num_nodes());
        let mut mass = vec![0.0; self.num_nodes()];
        if !designated[node] {
            mass[node] = 1.0;
        }
        let mut out = Vec::with_capacity(n + 1);
        out.push(mass.iter().sum());
        for _ in 0..n {
            let mut next = vec![0.0; self.num_nodes()];
            for (u, &m) in mass.iter().enumerate() {
                if m == 0.0 {
                    continue;
                }
                for (l, v) in self.successors(u) {
                    if !designated[v] {
                        next[v] += m * self.modulus_weight(u, l);
                    }
                }
            }
            mass = next;
            out.push(mass.iter().sum());
        }
        out
    }
}

impl ProductGraph {
    /// `1 − Σ_{λ∈F(i,i), |λ|≤n} |α_{i,λ}|²` for `n = 1..=n_max`, on the left
    /// walk paired with itself. `F(i,i)` holds the nonempty words that first
    /// reach a designated diagonal point at their last step.
    pub fn first_return_residuals(
        &self,
        report: &MinimalSetReport,
        vertex: usize,
        n_max: usize,
    ) -> Vec<f64> {
        let walk = &self.left;
        let nv = walk.num_vertices();
        let designated = report.designated_mask(self.num_nodes());
        let mut mass = vec![0.0; nv];
        mass[vertex] = 1.0;
        let mut arrived = 0.0;
        let mut out = Vec::with_capacity(n_max);
        for _ in 0..n_max {
            let mut next = vec![0.0; nv];
            for (u, &m) in mass.iter().enumerate() {
                if m == 0.0 {
                    continue;
                }
                for l in walk.out_labels(u) {
                    let e = walk.edge(u, l).unwrap();
                    let p = m * e.alpha.norm_sqr();
                    if designated[self.node(e.target, e.target)] {
                        arrived += p;
                    } else {
                        next[e.target] += p;
                    }
                }
            }
            mass = next;
            out.push(1.0 - arrived);
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Witness {
    /// Moduli differ: `|α(i,λ)| ≠ |α′(i′,λ)|` at `pair`.
    Modulus {
        pair: usize,
        label: usize,
        alpha: C64,
        alpha_prime: C64,
    },
    /// Loop products differ: the loop `word` at `start` has `α ≠ α′`.
    Holonomy {
        start: usize,
        word: Vec<usize>,
        product: C64,
        product_prime: C64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub enum Balance {
    /// `potential[k]` is the value at `nodes[k]` of the unique function with
    /// value 1 at the representative and `θ(i·λ, i′·λ) = θ(i,i′)·α′(i′,λ)/α(i,λ)`.
    Balanced {
        potential: Vec<C64>,
    },
    Unbalanced(Witness),
}

#[derive(Debug, Clone, PartialEq)]
pub struct MinimalSet {
    /// Node indices, sorted.
    pub nodes: Vec<usize>,
    /// Designated point: the smallest pair of the set.
    pub representative: usize,
    /// `None` until classified.
    pub balance: Option<Balance>,
}

impl MinimalSet {
    pub fn is_balanced(&self) -> bool {
        matches!(self.balance, Some(Balance::Balanced { .. }))
    }

    pub fn contains(&self, node: usize) -> bool {
        self.nodes.binary_search(&node).is_ok()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MinimalSetReport {
    pub sets: Vec<MinimalSet>,
}

impl MinimalSetReport {
    pub fn balanced(&self) -> impl Iterator<Item = &MinimalSet> {
        self.sets.iter().filter(|s| s.is_balanced())
    }

    pub fn num_balanced(&self) -> usize {
        self.balanced().count()
    }

    pub fn designated_mask(&self, num_nodes: usize) -> Vec<bool> {
        let mut mask = vec![false; num_nodes];
        for s in &self.sets {
            mask[s.representative] = true;
        }
        mask
    }

    /// Index of the minimal set containing `node`, if any.
    pub fn set_of(&self, node: usize) -> Option<usize> {
        self.sets.iter().position(|s| s.contains(node))
    }

    pub fn to_document(&self, pg: &ProductGraph) -> ReportDocument {
        let labels = pg.left.labels();
        ReportDocument {
            sets: self
                .sets
                .iter()
                .map(|s| SetDocument {
                    pairs: s.nodes.iter().map(|&v| pg.pair_ids(v)).collect(),
                    representative: pg.pair_ids(s.representative),
                    balanced: s.is_balanced(),
                    witness: match &s.balance {
                        Some(Balance::Unbalanced(Witness::Modulus {
                            pair,
                            label,
                            alpha,
                            alpha_prime,
                        })) => Some(WitnessDocument::Modulus {
                            pair: pg.pair_ids(*pair),
                            label: labels[*label].clone(),
                            modulus: alpha.norm(),
                            modulus_prime: alpha_prime.norm(),
                        }),
                        Some(Balance::Unbalanced(Witness::Holonomy {
                            start,
                            word,
                            product,
                            product_prime,
                        })) => Some(WitnessDocument::Holonomy {
                            start: pg.pair_ids(*start),
                            word: word.iter().map(|&l| labels[l].clone()).collect(),
                            product: [product.re, product.im],
                            product_prime: [product_prime.re, product_prime.im],
                        }),
                        _ => None,
                    },
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ReportDocument {
    pub sets: Vec<SetDocument>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SetDocument {
    pub pairs: Vec<(String, String)>,
    pub representative: (String, String),
    pub balanced: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessDocument>,
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WitnessDocument {
    Modulus {
        pair: (String, String),
        label: String,
        modulus: f64,
        modulus_prime: f64,
    },
    Holonomy {
        start: (String, String),
        word: Vec<String>,
        product: [f64; 2],
        product_prime: [f64; 2],
    },
}

/// Every vertex reaches every other through possible transitions.
pub fn is_connected(walk: &LabeledWalk) -> bool {
    let adj: Vec<Vec<usize>> = (0..walk.num_vertices())
        .map(|i| {
            walk.out_labels(i)
                .iter()
                .map(|&l| walk.edge(i, l).unwrap().target)
                .collect()
        })
        .collect();
    scc::tarjan_scc(&adj).len() == 1
}

/// Smallest `n` such that no word of length `n` is possible from both `i` and
/// `i′`, or `None` if every length admits a common word. The set of pairs alive
/// after `k` steps is iterated; a path of `|V|²` steps must revisit a pair, so
/// the search stops there.
pub fn separation_depth(walk: &LabeledWalk, i: usize, ip: usize) -> Option<usize> {
    let n = walk.num_vertices();
    let mut alive: HashSet<(usize, usize)> = HashSet::from([(i, ip)]);
    for depth in 0..=n * n {
        if alive.is_empty() {
            return Some(depth);
        }
        let mut next = HashSet::new();
        for &(a, b) in &alive {
            for l in 0..walk.num_labels() {
                if let (Some(x), Some(y)) = (walk.edge(a, l), walk.edge(b, l)) {
                    next.insert((x.target, y.target));
                }
            }
        }
        alive = next;
    }
    None
}

/// Every pair of distinct vertices is eventually separated.
pub fn is_separating(walk: &LabeledWalk) -> bool {
    let n = walk.num_vertices();
    (0..n).all(|i| (i + 1..n).all(|ip| separation_depth(walk, i, ip).is_some()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Irreducibility {
    pub connected: bool,
    pub separating: bool,
    /// Connected and separating together imply an irreducible dilation; the
    /// converse does not hold.
    pub irreducible_by_sufficient_condition: bool,
}

pub fn irreducibility(walk: &LabeledWalk) -> Irreducibility {
    let connected = is_connected(walk);
    let separating = is_separating(walk);
    Irreducibility {
        connected,
        separating,
        irreducible_by_sufficient_condition: connected && separating,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn node_of(pg: &ProductGraph, a: &str, b: &str) -> usize {
        pg.node(pg.left().vertex(a).unwrap(), pg.right().vertex(b).unwrap())
    }

    fn ids(pg: &ProductGraph, nodes: &[usize]) -> Vec<(String, String)> {
        let mut v: Vec<_> = nodes.iter().map(|&n| pg.pair_ids(n)).collect();
        v.sort();
        v
    }

    fn pairs(list: &[(&str, &str)]) -> Vec<(String, String)> {
        let mut v: Vec<_> = list
            .iter()
            .map(|(a, b)| (a.to_string(), b.to_string()))
            .collect();
        v.sort();
        v
    }

    #[test]
    fn ring_product_has_full_successors() {
        let w = fixtures::z3_cayley();
        let pg = ProductGraph::new(&w, &w).unwrap();
        assert_eq!(pg.num_nodes(), 9);
        assert!((0..9).all(|v| pg.successors(v).count() == 2));
    }

    #[test]
    fn graph_v_successors_of_origin() {
        let w = fixtures::graph_v();
        let pg = ProductGraph::new(&w, &w).unwrap();
        let origin = node_of(&pg, "0", "0");
        let succ: Vec<_> = pg
            .successors(origin)
            .map(|(l, v)| (w.label_id(l).to_string(), pg.pair_ids(v)))
            .collect();
        assert_eq!(
            succ,
            vec![
                ("l2".to_string(), ("4".to_string(), "4".to_string())),
                ("l3".to_string(), ("1".to_string(), "1".to_string())),
            ]
        );
    }

    #[test]
    fn mismatched_alphabets() {
        let a = fixtures::graph_v();
        let b = fixtures::z3_cayley();
        assert!(matches!(
            ProductGraph::new(&a, &b),
            Err(Error::AlphabetMismatch)
        ));
    }

    #[test]
    fn orbits() {
        let w = fixtures::graph_v();
        let pg = ProductGraph::new(&w, &w).unwrap();
        let orbit = pg.orbit(node_of(&pg, "0", "3"));
        assert_eq!(
            ids(&pg, &orbit),
            pairs(&[("0", "3"), ("4", "2"), ("4", "3"), ("4", "1")])
        );

        let (a, b) = (fixtures::cyclic_walk(4), fixtures::cyclic_walk(6));
        let pg = ProductGraph::new(&a, &b).unwrap();
        // with both labels ±1 the orbit of (i,i′) is {(i+k, i′+k)}
        for (i, ip) in [(0usize, 0usize), (1, 4), (3, 5)] {
            let expected: HashSet<_> = (0..12)
                .map(|k| pg.node((i + k) % 4, (ip + k) % 6))
                .collect();
            let got: HashSet<_> = pg.orbit(pg.node(i, ip)).into_iter().collect();
            assert_eq!(got, expected);
        }
    }

    #[test]
    fn absorbing_node_orbit_is_singleton() {
        let w = fixtures::graph_v();
        let pg = ProductGraph::new(&w, &w).unwrap();
        let v = node_of(&pg, "0", "1");
        assert_eq!(pg.successors(v).count(), 0);
        assert_eq!(pg.orbit(v), vec![v]);
    }

    #[test]
    fn twelve_minimal_sets_of_graph_v_two_balanced() {
        let w = fixtures::graph_v();
        let pg = ProductGraph::new(&w, &w).unwrap();
        let report = pg.analyze();
        let reps = [
            ("1", "1"),
            ("4", "4"),
            ("0", "1"),
            ("0", "2"),
            ("0", "4"),
            ("1", "0"),
            ("1", "2"),
            ("1", "3"),
            ("1", "4"),
            ("2", "0"),
            ("4", "0"),
            ("4", "1"),
        ];
        assert_eq!(report.sets.len(), 12);
        for (a, b) in reps {
            let node = node_of(&pg, a, b);
            let expected = pg.orbit(node);
            assert!(
                report.sets.iter().any(|s| s.nodes == expected),
                "O({a},{b})"
            );
        }
        let balanced: Vec<_> = report.balanced().map(|s| ids(&pg, &s.nodes)).collect();
        assert_eq!(
            balanced,
            vec![
                pairs(&[("1", "1"), ("2", "2"), ("3", "3")]),
                pairs(&[("4", "4")])
            ]
        );
        for s in report.sets.iter().filter(|s| !s.is_balanced()) {
            assert!(matches!(
                s.balance,
                Some(Balance::Unbalanced(Witness::Modulus { .. }))
            ));
        }
    }

    #[test]
    fn phased_triangle_off_diagonal_sets_fail_loop_condition() {
        let w = fixtures::phased_triangle();
        let pg = ProductGraph::new(&w, &w).unwrap();
        let report = pg.analyze();
        assert_eq!(report.sets.len(), 3);
        assert_eq!(report.num_balanced(), 1);
        let diag = report.balanced().next().unwrap();
        assert_eq!(
            ids(&pg, &diag.nodes),
            pairs(&[("1", "1"), ("2", "2"), ("3", "3")])
        );
        for s in report.sets.iter().filter(|s| !s.is_balanced()) {
            match &s.balance {
                Some(Balance::Unbalanced(Witness::Holonomy {
                    start,
                    word,
                    product,
                    product_prime,
                })) => {
                    assert_eq!(*start, s.representative);
                    assert!((product - product_prime).norm() > 0.1);
                    let (i, ip) = pg.pair(*start);
                    let wd = Word(word.clone());
                    assert_eq!(w.step(i, &wd).unwrap().unwrap().0, i);
                    assert_eq!(w.step(ip, &wd).unwrap().unwrap().0, ip);
                }
                other => panic!("expected a loop witness, got {other:?}"),
            }
        }
    }

    #[test]
    fn the_two_loops_named_for_the_triangle() {
        // l1 l2 from 1, 2, 3 returns home with products 1/2, i/2, −1/2
        let w = fixtures::phased_triangle();
        let word = w.word(&["l1", "l2"]).unwrap();
        let expected = [C64::new(0.5, 0.0), C64::new(0.0, 0.5), C64::new(-0.5, 0.0)];
        for (k, id) in ["1", "2", "3"].iter().enumerate() {
            let i = w.vertex(id).unwrap();
            let (end, amp) = w.step(i, &word).unwrap().unwrap();
            assert_eq!(end, i);
            assert!((amp - expected[k]).norm() < 1e-15);
        }
    }

    #[test]
    fn single_loop_node_is_its_own_minimal_set() {
        let w = LabeledWalk::new(["x"], ["a", "b"], vec![(0, 0, 0, ONE)]).unwrap();
        let pg = ProductGraph::new(&w, &w).unwrap();
        let report = pg.analyze();
        assert_eq!(report.sets.len(), 1);
        assert_eq!(report.sets[0].nodes, vec![0]);
        assert!(report.sets[0].is_balanced());
    }

    #[test]
    fn first_passage_is_zero_from_designated_points() {
        let w = fixtures::z2_cayley();
        let pg = ProductGraph::new(&w, &w).unwrap();
        let report = pg.analyze();
        let rep = report.sets[0].representative;
        assert!(pg.first_passage(&report, rep, 5).iter().all(|&p| p == 0.0));
    }

    #[test]
    fn first_passage_decays_on_graph_v() {
        let w = fixtures::graph_v();
        let pg = ProductGraph::new(&w, &w).unwrap();
        let report = pg.analyze();
        let p = pg.first_passage(&report, node_of(&pg, "0", "3"), 40);
        assert!(p.windows(2).all(|x| x[1] <= x[0] + 1e-15));
        assert!(p[40] < 1e-3);
    }

    #[test]
    fn connectivity_and_separation() {
        let single = LabeledWalk::new(["t"], ["0", "1"], vec![(0, 0, 0, ONE)]).unwrap();
        assert!(irreducibility(&single).irreducible_by_sufficient_condition);

        let ring = fixtures::z3_cayley();
        let verdict = irreducibility(&ring);
        assert!(verdict.connected);
        assert!(!verdict.separating);

        assert!(!is_connected(&fixtures::graph_v()));

        // a 2-cycle on l1 with an l2 escape from one side only separates
        let w = LabeledWalk::from_named(
            ["a", "b"],
            ["l1", "l2"],
            &[
                (
                    "a",
                    "l1",
                    "b",
                    C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0),
                ),
                (
                    "a",
                    "l2",
                    "a",
                    C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0),
                ),
                ("b", "l1", "a", ONE),
            ],
        )
        .unwrap();
        assert!(is_connected(&w));
        assert_eq!(separation_depth(&w, 0, 1), None);
    }
}
