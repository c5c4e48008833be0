//! Reference walks shared by the tests and the CLI `verify-all` command,
//! plus a generator of random walks.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use rand::seq::SliceRandom;
use rand::Rng;

use crate::linalg::{C64, ONE};
use crate::walk::{cayley_walk, Generator, GroupTable, LabeledWalk};

fn r(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// Ring `Z/mZ` with labels `+1`, `-1` and all amplitudes `1/√2`.
///
/// For `m = 2` both labels lead to the same vertex; the walk then fails
/// out-injectivity but is still a valid input for every operator routine.
pub fn cyclic_walk(m: usize) -> LabeledWalk {
    assert!(m >= 1);
    let a = r(FRAC_1_SQRT_2);
    let edges = (0..m).flat_map(|i| [(i, 0, (i + 1) % m, a), (i, 1, (i + m - 1) % m, a)]);
    LabeledWalk::new((0..m).map(|i| i.to_string()), ["+1", "-1"], edges).expect("ring walk")
}

/// Cayley walk of `Z/2Z` with the single generator `+1`.
pub fn z2_cayley() -> LabeledWalk {
    cayley_walk(&GroupTable::cyclic(2), &[Generator::new("+1", 1)], None).expect("Z/2Z")
}

/// Cayley walk of `Z/3Z` with generators `±1`.
pub fn z3_cayley() -> LabeledWalk {
    cayley_walk(
        &GroupTable::cyclic(3),
        &[Generator::new("+1", 1), Generator::new("-1", 2)],
        None,
    )
    .expect("Z/3Z")
}

const V_EDGES: [(&str, &str, &str, f64); 7] = [
    ("0", "l2", "4", FRAC_1_SQRT_2),
    ("0", "l3", "1", FRAC_1_SQRT_2),
    ("1", "l1", "2", 1.0),
    ("2", "l1", "3", 1.0),
    ("3", "l1", "1", FRAC_1_SQRT_2),
    ("3", "l2", "2", FRAC_1_SQRT_2),
    ("4", "l1", "4", 1.0),
];

/// The five-vertex graph `𝒱`: a branch at 0 into a 3-cycle and a fixed loop.
pub fn graph_v() -> LabeledWalk {
    let edges: Vec<_> = V_EDGES
        .iter()
        .map(|&(a, l, b, x)| (a, l, b, r(x)))
        .collect();
    LabeledWalk::from_named(["0", "1", "2", "3", "4"], ["l1", "l2", "l3"], &edges).expect("𝒱")
}

/// The six-vertex variant `𝒱′` where the loop at 4 is replaced by a 2-cycle 4 ↔ 5.
pub fn graph_v_prime() -> LabeledWalk {
    let mut edges: Vec<_> = V_EDGES
        .iter()
        .filter(|e| e.0 != "4")
        .map(|&(a, l, b, x)| (a, l, b, r(x)))
        .collect();
    edges.push(("4", "l1", "5", ONE));
    edges.push(("5", "l1", "4", ONE));
    LabeledWalk::from_named(["0", "1", "2", "3", "4", "5"], ["l1", "l2", "l3"], &edges).expect("𝒱′")
}

/// Triangle `1 → 2 → 3 → 1` under `l1` and the reverse under `l2`, with
/// amplitudes `α(1,l1) = 1/√2`, `α(2,l1) = i/√2`, `α(3,l1) = −1/√2` and
/// `1/√2` on every `l2` edge.
pub fn phased_triangle() -> LabeledWalk {
    triangle([r(1.0), C64::new(0.0, 1.0), r(-1.0)])
}

/// The same triangle with every amplitude equal to `1/√2`.
pub fn equal_triangle() -> LabeledWalk {
    triangle([ONE; 3])
}

fn triangle(l1_phases: [C64; 3]) -> LabeledWalk {
    let a = FRAC_1_SQRT_2;
    let edges = [
        ("1", "l1", "2", l1_phases[0] * a),
        ("2", "l1", "3", l1_phases[1] * a),
        ("3", "l1", "1", l1_phases[2] * a),
        ("2", "l2", "1", r(a)),
        ("3", "l2", "2", r(a)),
        ("1", "l2", "3", r(a)),
    ];
    LabeledWalk::from_named(["1", "2", "3"], ["l1", "l2"], &edges).expect("triangle")
}

/// Every named fixture as `(name, walk)`.
pub fn all() -> Vec<(&'static str, LabeledWalk)> {
    vec![
        ("z2-cayley", z2_cayley()),
        ("z3-cayley", z3_cayley()),
        ("ring-2", cyclic_walk(2)),
        ("ring-4", cyclic_walk(4)),
        ("graph-v", graph_v()),
        ("graph-v-prime", graph_v_prime()),
        ("phased-triangle", phased_triangle()),
        ("equal-triangle", equal_triangle()),
    ]
}

/// How amplitudes of a random walk are drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AmplitudeStyle {
    /// Random moduli and random phases.
    Generic,
    /// `1/√n_i` on each of the `n_i` edges leaving `i`, positive.
    Uniform,
    /// `1/√n_i` times a random fourth root of unity.
    UniformPhased,
}

/// Random walk satisfying every walk invariant. Each label acts as a random
/// partial permutation of the vertices; labels colliding on a target are
/// dropped, keeping at least one edge per vertex.
pub fn random_walk<R: Rng + ?Sized>(
    rng: &mut R,
    vertices: usize,
    labels: usize,
    style: AmplitudeStyle,
) -> LabeledWalk {
    assert!(vertices >= 1 && labels >= 1);
    let perms: Vec<Vec<usize>> = (0..labels)
        .map(|_| {
            let mut p: Vec<usize> = (0..vertices).collect();
            p.shuffle(rng);
            p
        })
        .collect();
    let mut edges = Vec::new();
    #[allow(clippy::needless_range_loop)]
    for i in 0..vertices {
        let mut chosen: Vec<usize> = Vec::new();
        let first = rng.random_range(0..labels);
        let mut order: Vec<usize> = (0..labels).collect();
        order.retain(|&l| l != first);
        order.shuffle(rng);
        order.insert(0, first);
        for (k, &l) in order.iter().enumerate() {
            if k > 0 && rng.random::<f64>() < 0.35 {
                continue;
            }
            if chosen.iter().all(|&c| perms[c][i] != perms[l][i]) {
                chosen.push(l);
            }
        }
        chosen.sort_unstable();
        let n = chosen.len() as f64;
        let weights: Vec<f64> = match style {
            AmplitudeStyle::Generic => {
                let raw: Vec<f64> = chosen.iter().map(|_| 0.2 + rng.random::<f64>()).collect();
                let total: f64 = raw.iter().sum();
                raw.iter().map(|w| (w / total).sqrt()).collect()
            }
            _ => vec![1.0 / n.sqrt(); chosen.len()],
        };
        for (&l, w) in chosen.iter().zip(weights) {
            let phase = match style {
                AmplitudeStyle::Generic => C64::from_polar(1.0, 2.0 * PI * rng.random::<f64>()),
                AmplitudeStyle::Uniform => ONE,
                AmplitudeStyle::UniformPhased => C64::new(0.0, 1.0).powu(rng.random_range(0..4u32)),
            };
            edges.push((i, l, perms[l][i], phase * w));
        }
    }
    LabeledWalk::new(
        (0..vertices).map(|i| i.to_string()),
        (0..labels).map(|l| format!("l{l}")),
        edges,
    )
    .expect("random walk")
}
