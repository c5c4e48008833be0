//! Finite minimal invariant sets of `t ↦ g_l(t) = (t − l)/R` under the
//! possible transitions, computed with exact rationals.

use num_integer::Integer;
use num_rational::Rational64;

use super::{Cyclotomic, SpectralSystem};
use crate::error::{Error, Result};
use crate::linalg::ZERO;
use crate::scc;
use crate::walk::LabeledWalk;

/// A finite minimal invariant set, with points ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct MinSet {
    pub points: Vec<Rational64>,
    /// `transitions[p][k]`: index of `g_{L[k]}(points[p])` when that
    /// transition is possible.
    pub transitions: Vec<Vec<Option<usize>>>,
}

impl MinSet {
    /// The point `c(M)` anchoring the frame: the smallest one.
    pub fn anchor(&self) -> Rational64 {
        self.points[0]
    }

    /// Whether the label indices in `word`, read from the anchor, form a cycle
    /// word: every step possible, back at the anchor at the end and not before.
    pub fn is_cycle_word(&self, word: &[usize]) -> bool {
        if word.is_empty() {
            return false;
        }
        let mut at = 0;
        for (k, &l) in word.iter().enumerate() {
            match self.transitions[at][l] {
                Some(next) => at = next,
                None => return false,
            }
            if at == 0 && k + 1 < word.len() {
                return false;
            }
        }
        at == 0
    }

    /// Whether some suffix of `word` is a cycle word.
    pub fn ends_in_cycle_word(&self, word: &[usize]) -> bool {
        (0..word.len()).any(|s| self.is_cycle_word(&word[s..]))
    }
}

/// `p/q` or `p` when integral.
pub fn format_point(t: Rational64) -> String {
    if t.is_integer() {
        t.numer().to_string()
    } else {
        format!("{}/{}", t.numer(), t.denom())
    }
}

fn overflow() -> Error {
    Error::InvalidSystem("rational arithmetic overflows 64 bits".into())
}

/// Whether `m_B(t)` vanishes, decided exactly.
fn m_b_vanishes(sys: &SpectralSystem, cyc: &mut Cyclotomic, t: Rational64) -> bool {
    let (p, q) = (*t.numer() as i128, *t.denom() as i128);
    let exps: Vec<i128> = sys.digits().iter().map(|&b| p * b as i128).collect();
    cyc.sum_vanishes(q as u64, &exps)
}

/// Minimal sets, ordered by smallest point. Candidates are the points of
/// `(1/g)Z` in `[min(−L)/(R−1), max(−L)/(R−1)]`, `g = gcd(B∖{0})`; a
/// transition into a non-candidate leads to an absorbing outside node, and
/// sets that can reach it are discarded.
pub fn find_min_sets(sys: &SpectralSystem) -> Result<Vec<MinSet>> {
    sys.require_assumptions()?;
    let r = sys.r();
    let g = sys.digits().iter().fold(0i64, |acc, &b| acc.gcd(&b));
    let lmax = *sys.frequencies().iter().max().unwrap();
    let lmin = *sys.frequencies().iter().min().unwrap();
    let lo = Rational64::new(-lmax, r - 1);
    let hi = Rational64::new(-lmin, r - 1);
    let kmin = (lo * g).ceil().to_integer();
    let kmax = (hi * g).floor().to_integer();
    let count = usize::try_from(kmax - kmin + 1).map_err(|_| overflow())?;
    if count > 5_000_000 {
        return Err(Error::InvalidSystem(format!("{count} candidate points")));
    }
    let point = |k: usize| Rational64::new(kmin + k as i64, g);
    let outside = count;
    let mut cyc = Cyclotomic::new();
    let mut graph: Vec<Vec<usize>> = vec![Vec::new(); count + 1];
    let mut labelled: Vec<Vec<Option<usize>>> = vec![vec![None; sys.frequencies().len()]; count];
    graph[outside].push(outside);
    for k in 0..count {
        let t = point(k);
        for (li, &l) in sys.frequencies().iter().enumerate() {
            let u = (t - l) / r;
            if m_b_vanishes(sys, &mut cyc, u) {
                continue;
            }
            let scaled = u * g;
            let target = if scaled.is_integer() {
                let j = scaled.to_integer() - kmin;
                if (0..count as i64).contains(&j) {
                    j as usize
                } else {
                    outside
                }
            } else {
                outside
            };
            graph[k].push(target);
            if target != outside {
                labelled[k][li] = Some(target);
            }
        }
    }
    let mut sets = Vec::new();
    for comp in scc::sink_components(&graph) {
        if comp.contains(&outside) || comp.iter().any(|&k| graph[k].is_empty()) {
            continue;
        }
        let points: Vec<Rational64> = comp.iter().map(|&k| point(k)).collect();
        let local = |k: usize| comp.binary_search(&k).expect("sink component is closed");
        let transitions = comp
            .iter()
            .map(|&k| labelled[k].iter().map(|t| t.map(local)).collect())
            .collect();
        sets.push(MinSet {
            points,
            transitions,
        });
    }
    Ok(sets)
}

/// The walk on the points of `m` with labels `L` and `α_{t,l} = conj(α_l)` on
/// possible transitions.
pub fn export_min_set_walk(sys: &SpectralSystem, m: &MinSet) -> Result<LabeledWalk> {
    let mut edges = Vec::new();
    for (p, row) in m.transitions.iter().enumerate() {
        for (li, target) in row.iter().enumerate() {
            if let Some(t) = target {
                edges.push((p, li, *t, sys.alpha()[li].conj() + ZERO));
            }
        }
    }
    LabeledWalk::new(
        m.points.iter().map(|&t| format_point(t)),
        sys.frequencies().iter().map(|l| l.to_string()),
        edges,
    )
}
