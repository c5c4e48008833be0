#![allow(dead_code)]

use cuntzwalk::fixtures::{self, AmplitudeStyle};
use cuntzwalk::LabeledWalk;
use rand::seq::SliceRandom;
use rand::Rng;

pub fn fixture_dir() -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

/// Every ordered pair of fixtures sharing a label alphabet.
pub fn fixture_pairs() -> Vec<(String, LabeledWalk, LabeledWalk)> {
    let all = fixtures::all();
    let mut out = Vec::new();
    for (a, wa) in &all {
        for (b, wb) in &all {
            if wa.same_alphabet(wb) {
                out.push((format!("{a} x {b}"), wa.clone(), wb.clone()));
            }
        }
    }
    out
}

/// The same walk with vertices renamed by a random permutation.
pub fn permuted<R: Rng>(rng: &mut R, w: &LabeledWalk) -> LabeledWalk {
    let n = w.num_vertices();
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let edges: Vec<_> = w
        .edges()
        .map(|(i, l, e)| (perm[i], l, perm[e.target], e.alpha))
        .collect();
    LabeledWalk::new((0..n).map(|i| format!("p{i}")), w.labels().to_vec(), edges).unwrap()
}

/// A random pair with `|V|·|V′| ≤ 25`, drawn from a mix of shapes so that
/// both trivial and nontrivial intertwiner spaces occur.
pub fn random_pair<R: Rng>(rng: &mut R, k: usize) -> (LabeledWalk, LabeledWalk) {
    let labels = rng.random_range(1..=3);
    let n = rng.random_range(1..=5);
    let styles = [
        AmplitudeStyle::Generic,
        AmplitudeStyle::Uniform,
        AmplitudeStyle::UniformPhased,
    ];
    match k % 4 {
        0 => {
            let w = fixtures::random_walk(rng, n, labels, styles[k / 4 % 3]);
            (w.clone(), w)
        }
        1 => {
            let w = fixtures::random_walk(rng, n, labels, styles[k / 4 % 3]);
            let p = permuted(rng, &w);
            (w, p)
        }
        _ => {
            let m = rng.random_range(1..=(25 / n).min(5));
            let style = if k % 4 == 2 {
                AmplitudeStyle::Uniform
            } else {
                AmplitudeStyle::UniformPhased
            };
            (
                fixtures::random_walk(rng, n, labels, style),
                fixtures::random_walk(rng, m, labels, style),
            )
        }
    }
}
