//! Brute-force enumeration oracles for the dynamic-programming routines.

mod common;

use std::collections::BTreeSet;

use cuntzwalk::fixtures;
use cuntzwalk::spectral::Cyclotomic;
use cuntzwalk::{
    find_min_sets, frame_frequencies, LabeledWalk, MinSet, ProductGraph, SpectralSystem,
};
use num_rational::Rational64;

/// Every word of length `n` over `k` labels.
fn words(k: usize, n: usize) -> Vec<Vec<usize>> {
    (0..n).fold(vec![Vec::new()], |acc, _| {
        acc.into_iter()
            .flat_map(|w| {
                (0..k).map(move |l| {
                    let mut v = w.clone();
                    v.push(l);
                    v
                })
            })
            .collect()
    })
}

/// Σ |α_{i,λ}||α′_{i′,λ}| over words of length `n` that avoid `designated`
/// at every step, start included.
fn avoid_mass(
    a: &LabeledWalk,
    b: &LabeledWalk,
    designated: &BTreeSet<(usize, usize)>,
    start: (usize, usize),
    n: usize,
) -> f64 {
    if designated.contains(&start) {
        return 0.0;
    }
    let mut total = 0.0;
    'word: for w in words(a.num_labels(), n) {
        let (mut x, mut y, mut m) = (start.0, start.1, 1.0);
        for &l in &w {
            let (Some(e), Some(f)) = (a.edge(x, l), b.edge(y, l)) else {
                continue 'word;
            };
            x = e.target;
            y = f.target;
            m *= e.alpha.norm() * f.alpha.norm();
            if designated.contains(&(x, y)) {
                continue 'word;
            }
        }
        total += m;
    }
    total
}

fn designated(pg: &ProductGraph) -> BTreeSet<(usize, usize)> {
    pg.analyze()
        .sets
        .iter()
        .map(|s| pg.pair(s.representative))
        .collect()
}

#[test]
fn two_cycle_first_passage_matches_enumeration() {
    let w = fixtures::z2_cayley();
    let pg = ProductGraph::new(&w, &w).unwrap();
    let report = pg.analyze();
    let des = designated(&pg);
    assert!(des.contains(&(0, 0)));
    let start = pg.node(1, 1);
    let p = pg.first_passage(&report, start, 10);
    for (n, &pn) in p.iter().enumerate() {
        let brute = avoid_mass(&w, &w, &des, (1, 1), n);
        assert!((pn - brute).abs() < 1e-14, "n = {n}: {pn} vs {brute}");
    }
}

#[test]
fn first_passage_matches_enumeration_on_fixture_pairs() {
    for (name, a, b) in common::fixture_pairs() {
        let pg = ProductGraph::new(&a, &b).unwrap();
        let report = pg.analyze();
        let des = designated(&pg);
        let depth = if a.num_labels() > 2 { 5 } else { 8 };
        for node in 0..pg.num_nodes() {
            let p = pg.first_passage(&report, node, depth);
            for (n, &pn) in p.iter().enumerate() {
                let brute = avoid_mass(&a, &b, &des, pg.pair(node), n);
                assert!((pn - brute).abs() < 1e-12, "{name}, node {node}, n = {n}");
            }
        }
    }
}

/// `1 − Σ |α_{i,λ}|²` over nonempty words of length `≤ n` whose diagonal path
/// lands on a designated point at the last step and not before.
fn first_return_brute(
    w: &LabeledWalk,
    des: &BTreeSet<(usize, usize)>,
    i: usize,
    n_max: usize,
) -> Vec<f64> {
    let mut out = Vec::new();
    let mut found = 0.0;
    for n in 1..=n_max {
        'word: for word in words(w.num_labels(), n) {
            let mut at = i;
            let mut amp = 1.0;
            for (k, &l) in word.iter().enumerate() {
                let Some(e) = w.edge(at, l) else {
                    continue 'word;
                };
                at = e.target;
                amp *= e.alpha.norm_sqr();
                if des.contains(&(at, at)) {
                    if k + 1 == word.len() {
                        found += amp;
                    }
                    continue 'word;
                }
            }
        }
        out.push(1.0 - found);
    }
    out
}

#[test]
fn first_return_residuals_match_enumeration() {
    for (name, w) in fixtures::all() {
        let pg = ProductGraph::new(&w, &w).unwrap();
        let report = pg.analyze();
        let des = designated(&pg);
        let n_max = if w.num_labels() > 2 { 6 } else { 9 };
        for i in 0..w.num_vertices() {
            let fast = pg.first_return_residuals(&report, i, n_max);
            let brute = first_return_brute(&w, &des, i, n_max);
            for (n, (x, y)) in fast.iter().zip(&brute).enumerate() {
                assert!(
                    (x - y).abs() < 1e-12,
                    "{name}, vertex {i}, n = {}: {x} vs {y}",
                    n + 1
                );
            }
        }
    }
}

/// Whether the label word returns to the anchor for the first time at its
/// end, staying inside the set's points.
fn cycles(sys: &SpectralSystem, set: &MinSet, word: &[usize]) -> bool {
    if word.is_empty() {
        return false;
    }
    let r = Rational64::from_integer(sys.r());
    let mut t = set.anchor();
    for (k, &l) in word.iter().enumerate() {
        t = (t - Rational64::from_integer(sys.frequencies()[l])) / r;
        if !set.points.contains(&t) {
            return false;
        }
        if t == set.anchor() {
            return k + 1 == word.len();
        }
    }
    false
}

fn brute_frame(sys: &SpectralSystem, sets: &[MinSet], depth: usize) -> Vec<(usize, Rational64)> {
    let r = sys.r() as i128;
    let mut out = Vec::new();
    for (si, set) in sets.iter().enumerate() {
        let c = set.anchor();
        for n in 0..=depth {
            for w in words(sys.frequencies().len(), n) {
                if (0..w.len()).any(|s| cycles(sys, set, &w[s..])) {
                    continue;
                }
                let mut f: i128 = 0;
                for &l in w.iter().rev() {
                    f = f * r + sys.frequencies()[l] as i128;
                }
                let tail = Rational64::from_integer(r.pow(n as u32) as i64) * c;
                out.push((si, Rational64::from_integer(f as i64) + tail));
            }
        }
    }
    out.sort();
    out
}

#[test]
fn frame_matches_enumeration() {
    let systems = [
        SpectralSystem::uniform(4, vec![0, 2], vec![0, 1]).unwrap(),
        SpectralSystem::uniform(2, vec![0, 1], vec![0, 1]).unwrap(),
        SpectralSystem::uniform(2, vec![0, 1], vec![0, 3]).unwrap(),
        SpectralSystem::uniform(4, vec![0, 2], vec![0, 3]).unwrap(),
    ];
    for sys in &systems {
        let sets = find_min_sets(sys).unwrap();
        for depth in 0..=6 {
            let mut fast: Vec<(usize, Rational64)> = frame_frequencies(sys, &sets, depth)
                .unwrap()
                .iter()
                .map(|e| (e.min_set, e.frequency))
                .collect();
            fast.sort();
            assert_eq!(
                fast,
                brute_frame(sys, &sets, depth),
                "R = {}, depth {depth}",
                sys.r()
            );
        }
    }
}

#[test]
fn exact_zero_test_agrees_with_floating_point() {
    let mut cyc = Cyclotomic::new();
    let digit_sets: [&[i64]; 4] = [&[0, 1], &[0, 2], &[0, 1, 2], &[0, 3, 4, 7]];
    for b in digit_sets {
        for q in 1..=24i64 {
            for p in -30..=30i64 {
                let exps: Vec<i128> = b.iter().map(|&d| (p * d) as i128).collect();
                let exact = cyc.sum_vanishes(q as u64, &exps);
                let s: num_complex::Complex64 = b
                    .iter()
                    .map(|&d| {
                        num_complex::Complex64::from_polar(
                            1.0,
                            2.0 * std::f64::consts::PI * (p * d) as f64 / q as f64,
                        )
                    })
                    .sum();
                assert_eq!(
                    exact,
                    s.norm() < 1e-9,
                    "B = {b:?}, t = {p}/{q}, |sum| = {}",
                    s.norm()
                );
            }
        }
    }
}
