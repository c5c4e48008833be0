//! Self-affine systems `(R, B, L, α)`: assumption checks, finite minimal
//! invariant sets of the maps `g_l(t) = (t − l)/R`, the walks they carry, the
//! associated Parseval frame and numerical frame checks through `μ̂`.

mod cyclotomic;
mod frame;
mod minsets;

pub use cyclotomic::Cyclotomic;
pub use frame::{frame_frequencies, verify_parseval, FrameElement, ParsevalRow};
pub use minsets::{export_min_set_walk, find_min_sets, format_point, MinSet};

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, C64, ONE};
use crate::walk::ComplexDocument;

/// Default truncation of the product defining `μ̂`.
pub const DEFAULT_MU_TERMS: usize = 40;
/// Default frame depth.
pub const DEFAULT_FRAME_DEPTH: usize = 10;

/// Scale `R`, digits `B ∋ 0`, frequencies `L ∋ 0` and weights `α_l`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralSystem {
    r: i64,
    b: Vec<i64>,
    l: Vec<i64>,
    alpha: Vec<C64>,
    no_overlap: Option<bool>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemDocument {
    #[serde(rename = "R")]
    pub r: i64,
    #[serde(rename = "B")]
    pub b: Vec<i64>,
    #[serde(rename = "L")]
    pub l: Vec<i64>,
    /// One weight per element of `L`; all ones when omitted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<Vec<ComplexDocument>>,
    /// Attestation of the no-overlap condition.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub no_overlap: Option<bool>,
}

impl SpectralSystem {
    pub fn new(r: i64, b: Vec<i64>, l: Vec<i64>, alpha: Vec<C64>) -> Result<Self> {
        let bad = |m: &str| Err(Error::InvalidSystem(m.to_string()));
        if r < 2 {
            return bad("R must be at least 2");
        }
        for (name, set) in [("B", &b), ("L", &l)] {
            if !set.contains(&0) {
                return bad(&format!("{name} must contain 0"));
            }
            let mut sorted = set.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != set.len() {
                return bad(&format!("{name} has repeated elements"));
            }
        }
        if b.len() < 2 {
            return bad("B needs a nonzero digit");
        }
        if alpha.len() != l.len() {
            return bad(&format!(
                "{} weights for {} frequencies",
                alpha.len(),
                l.len()
            ));
        }
        if alpha
            .iter()
            .any(|a| !a.re.is_finite() || !a.im.is_finite() || a.norm() == 0.0)
        {
            return bad("weights must be finite and nonzero");
        }
        Ok(Self {
            r,
            b,
            l,
            alpha,
            no_overlap: None,
        })
    }

    /// Unit weights.
    pub fn uniform(r: i64, b: Vec<i64>, l: Vec<i64>) -> Result<Self> {
        let alpha = vec![ONE; l.len()];
        Self::new(r, b, l, alpha)
    }

    pub fn with_no_overlap(mut self, attested: bool) -> Self {
        self.no_overlap = Some(attested);
        self
    }

    pub fn r(&self) -> i64 {
        self.r
    }

    pub fn digits(&self) -> &[i64] {
        &self.b
    }

    pub fn frequencies(&self) -> &[i64] {
        &self.l
    }

    pub fn alpha(&self) -> &[C64] {
        &self.alpha
    }

    pub fn from_document(doc: &SystemDocument) -> Result<Self> {
        let alpha = match &doc.alpha {
            Some(a) => a.iter().map(|z| C64::new(z.re, z.im)).collect(),
            None => vec![ONE; doc.l.len()],
        };
        let mut sys = Self::new(doc.r, doc.b.clone(), doc.l.clone(), alpha)?;
        sys.no_overlap = doc.no_overlap;
        Ok(sys)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: SystemDocument =
            serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
        Self::from_document(&doc)
    }

    pub fn to_document(&self) -> SystemDocument {
        SystemDocument {
            r: self.r,
            b: self.b.clone(),
            l: self.l.clone(),
            alpha: Some(
                self.alpha
                    .iter()
                    .map(|z| ComplexDocument { re: z.re, im: z.im })
                    .collect(),
            ),
            no_overlap: self.no_overlap,
        }
    }

    /// `m_B(x) = (1/N) Σ_b e^{2πi b x}`.
    pub fn m_b(&self, x: f64) -> C64 {
        let n = self.b.len() as f64;
        self.b
            .iter()
            .map(|&b| C64::from_polar(1.0, 2.0 * PI * (b as f64 * x).rem_euclid(1.0)))
            .sum::<C64>()
            / n
    }

    /// `∏_{k=1}^{terms} m_B(R^{−k} ξ)`.
    pub fn mu_hat(&self, xi: f64, terms: usize) -> C64 {
        let r = self.r as f64;
        let mut x = xi;
        let mut prod = ONE;
        for _ in 0..terms {
            x /= r;
            prod *= self.m_b(x);
            if prod == C64::new(0.0, 0.0) {
                break;
            }
        }
        prod
    }

    /// [`Self::mu_hat`] with `max(min_terms, ⌈log_R |ξ|⌉ + min_terms)` factors,
    /// so that the omitted factors differ from 1 by `O(R^{−min_terms})`.
    pub fn mu_hat_adaptive(&self, xi: f64, min_terms: usize) -> C64 {
        self.mu_hat(xi, adaptive_terms(self.r, xi, min_terms))
    }

    /// The `M × N` matrix `(1/√N) e^{2πi l b/R} α_l`.
    pub fn transfer_matrix(&self) -> CMatrix {
        let n = self.b.len();
        let scale = 1.0 / (n as f64).sqrt();
        CMatrix::from_fn(self.l.len(), n, |i, j| {
            let phase = (self.l[i] as i128 * self.b[j] as i128).rem_euclid(self.r as i128);
            C64::from_polar(scale, 2.0 * PI * phase as f64 / self.r as f64) * self.alpha[i]
        })
    }

    pub fn check_assumptions(&self, tol: f64) -> AssumptionReport {
        let zero = self.l.iter().position(|&l| l == 0).unwrap();
        let alpha_zero_is_one = (self.alpha[zero] - ONE).norm() <= tol;
        let t = self.transfer_matrix();
        let gram = t.adjoint() * &t;
        let n = self.b.len();
        let isometry_residual = crate::linalg::max_abs_diff(&gram, &CMatrix::identity(n, n));
        let mut residues: Vec<i64> = self.b.iter().map(|b| b.rem_euclid(self.r)).collect();
        residues.sort_unstable();
        residues.dedup();
        let no_overlap = match self.no_overlap {
            Some(true) => NoOverlap::Attested,
            Some(false) => NoOverlap::Denied,
            None if residues.len() == n => NoOverlap::DistinctResidues,
            None => NoOverlap::Unattested,
        };
        let passed = alpha_zero_is_one
            && isometry_residual <= tol
            && matches!(
                no_overlap,
                NoOverlap::Attested | NoOverlap::DistinctResidues
            );
        AssumptionReport {
            alpha_zero_is_one,
            isometry_residual,
            no_overlap,
            passed,
        }
    }

    pub(crate) fn require_assumptions(&self) -> Result<()> {
        let report = self.check_assumptions(1e-10);
        if report.passed {
            Ok(())
        } else {
            Err(Error::InvalidSystem(format!(
                "assumptions fail: {report:?}"
            )))
        }
    }
}

pub(crate) fn adaptive_terms(r: i64, xi: f64, min_terms: usize) -> usize {
    let a = xi.abs();
    if a <= 1.0 {
        return min_terms;
    }
    let extra = (a.ln() / (r as f64).ln()).ceil().max(0.0) as usize;
    min_terms.max(extra + min_terms)
}

/// How the no-overlap condition is established; it is not decided here.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NoOverlap {
    /// Distinct digits modulo `R`, taken as sufficient.
    DistinctResidues,
    /// The input says it holds.
    Attested,
    /// The input says it fails.
    Denied,
    /// Neither sufficient condition nor attestation.
    Unattested,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AssumptionReport {
    pub alpha_zero_is_one: bool,
    /// `max |T*T − I|`.
    pub isometry_residual: f64,
    pub no_overlap: NoOverlap,
    pub passed: bool,
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn cantor4() -> SpectralSystem {
        SpectralSystem::uniform(4, vec![0, 2], vec![0, 1]).unwrap()
    }

    #[test]
    fn assumption_examples() {
        assert!(cantor4().check_assumptions(1e-10).passed);
        let lebesgue = SpectralSystem::uniform(2, vec![0, 1], vec![0, 1]).unwrap();
        assert!(lebesgue.check_assumptions(1e-10).passed);
        let bad = SpectralSystem::uniform(4, vec![0, 2], vec![0, 2]).unwrap();
        let r = bad.check_assumptions(1e-10);
        assert!(!r.passed && r.isometry_residual > 0.5);
    }

    #[test]
    fn alpha_zero_must_be_one() {
        let s =
            SpectralSystem::new(4, vec![0, 2], vec![0, 1], vec![C64::new(0.0, 1.0), ONE]).unwrap();
        let r = s.check_assumptions(1e-10);
        assert!(!r.alpha_zero_is_one && !r.passed);
    }

    #[test]
    fn overlapping_digits_need_attestation() {
        // B = {0, 3} repeats residue 0 modulo 3
        let s = SpectralSystem::uniform(3, vec![0, 3], vec![0, 1]).unwrap();
        assert_eq!(s.check_assumptions(1e-10).no_overlap, NoOverlap::Unattested);
        let s = s.with_no_overlap(true);
        assert_eq!(s.check_assumptions(1e-10).no_overlap, NoOverlap::Attested);
    }

    #[test]
    fn structural_errors() {
        assert!(SpectralSystem::uniform(1, vec![0, 1], vec![0, 1]).is_err());
        assert!(SpectralSystem::uniform(4, vec![1, 2], vec![0, 1]).is_err());
        assert!(SpectralSystem::uniform(4, vec![0, 2, 2], vec![0, 1]).is_err());
        assert!(SpectralSystem::uniform(4, vec![0], vec![0, 1]).is_err());
        assert!(SpectralSystem::new(4, vec![0, 2], vec![0, 1], vec![ONE]).is_err());
    }

    #[test]
    fn json_round_trip() {
        let s = SpectralSystem::from_json(
            r#"{"R":4,"B":[0,2],"L":[0,1],"alpha":[{"re":1,"im":0},{"re":1,"im":0}]}"#,
        )
        .unwrap();
        assert_eq!(s, cantor4());
        let text = serde_json::to_string(&s.to_document()).unwrap();
        assert_eq!(SpectralSystem::from_json(&text).unwrap(), s);
        assert!(SpectralSystem::from_json(r#"{"R":4,"B":[0,2]}"#).is_err());
    }

    #[test]
    fn mu_hat_values() {
        let s = cantor4();
        assert_eq!(s.mu_hat(0.0, 40), ONE);
        let lebesgue = SpectralSystem::uniform(2, vec![0, 1], vec![0, 1]).unwrap();
        for k in 1..20 {
            assert!(lebesgue.mu_hat_adaptive(k as f64, 40).norm() < 1e-12);
        }
        // Lebesgue measure: μ̂(ξ) = (e^{2πiξ} − 1)/(2πiξ)
        let xi = 0.3;
        let exact = (C64::from_polar(1.0, 2.0 * PI * xi) - ONE) / C64::new(0.0, 2.0 * PI * xi);
        assert!((lebesgue.mu_hat(xi, 60) - exact).norm() < 1e-12);
    }

    #[test]
    fn adaptive_term_count() {
        assert_eq!(adaptive_terms(4, 0.5, 40), 40);
        assert_eq!(adaptive_terms(4, 64.0, 40), 43);
        assert_eq!(adaptive_terms(2, -1000.0, 40), 50);
    }
}
