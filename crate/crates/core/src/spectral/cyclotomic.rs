//! Exact vanishing test for sums of roots of unity.
//!
//! `Σ_b ζ_q^{e_b}` with `ζ_q = e^{2πi/q}` is zero iff the cyclotomic
//! polynomial `Φ_q` divides `Σ_b x^{e_b}`, because `Φ_q` is the minimal
//! polynomial of `ζ_q` over the rationals.

use std::collections::HashMap;

use num_integer::Integer;

type Poly = Vec<i128>;

#[derive(Debug, Default, Clone)]
pub struct Cyclotomic {
    cache: HashMap<u64, Poly>,
}

impl Cyclotomic {
    pub fn new() -> Self {
        Self::default()
    }

    /// Coefficients of `Φ_q`, lowest degree first.
    pub fn phi(&mut self, q: u64) -> Poly {
        if let Some(p) = self.cache.get(&q) {
            return p.clone();
        }
        // x^q − 1 = Π_{d | q} Φ_d
        let mut p: Poly = vec![0; q as usize + 1];
        p[0] = -1;
        p[q as usize] = 1;
        for d in 1..q {
            if q.is_multiple_of(d) {
                let f = self.phi(d);
                p = divide_exact(&p, &f);
            }
        }
        self.cache.insert(q, p.clone());
        p
    }

    /// Whether `Σ_k ζ_q^{exponents[k]}` vanishes.
    pub fn sum_vanishes(&mut self, q: u64, exponents: &[i128]) -> bool {
        if exponents.is_empty() {
            return true;
        }
        if q == 1 {
            return false;
        }
        let mut p: Poly = vec![0; q as usize];
        for &e in exponents {
            p[e.mod_floor(&(q as i128)) as usize] += 1;
        }
        let f = self.phi(q);
        remainder(&p, &f).iter().all(|&c| c == 0)
    }
}

/// Remainder of `p` modulo the monic polynomial `f`.
fn remainder(p: &[i128], f: &[i128]) -> Poly {
    let mut r = p.to_vec();
    let df = f.len() - 1;
    while r.len() > df {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - df;
        for (k, &c) in f.iter().enumerate() {
            r[shift + k] -= lead * c;
        }
        r.pop();
    }
    r
}

/// Quotient of `p` by the monic `f`, assuming exact divisibility.
fn divide_exact(p: &[i128], f: &[i128]) -> Poly {
    let mut r = p.to_vec();
    let df = f.len() - 1;
    let dq = r.len() - 1 - df;
    let mut q = vec![0; dq + 1];
    for s in (0..=dq).rev() {
        let lead = r[s + df];
        q[s] = lead;
        for (k, &c) in f.iter().enumerate() {
            r[s + k] -= lead * c;
        }
    }
    debug_assert!(r.iter().all(|&c| c == 0));
    q
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cyclotomic_polynomials() {
        let mut c = Cyclotomic::new();
        assert_eq!(c.phi(1), vec![-1, 1]);
        assert_eq!(c.phi(2), vec![1, 1]);
        assert_eq!(c.phi(4), vec![1, 0, 1]);
        assert_eq!(c.phi(6), vec![1, -1, 1]);
        assert_eq!(c.phi(12), vec![1, 0, -1, 0, 1]);
        // the first coefficient of absolute value 2 appears in Φ_105
        assert!(c.phi(105).iter().any(|&x| x.abs() == 2));
    }

    #[test]
    fn vanishing_sums_against_floating_point() {
        let mut c = Cyclotomic::new();
        for q in 1..=24u64 {
            for mask in 0u32..(1 << 5) {
                let exps: Vec<i128> = (0..5)
                    .filter(|k| mask >> k & 1 == 1)
                    .map(|k| (k * k + 3 * k) as i128)
                    .collect();
                let z: num_complex::Complex64 = exps
                    .iter()
                    .map(|&e| {
                        num_complex::Complex64::from_polar(
                            1.0,
                            2.0 * std::f64::consts::PI * e as f64 / q as f64,
                        )
                    })
                    .sum();
                assert_eq!(c.sum_vanishes(q, &exps), z.norm() < 1e-9, "q={q} {exps:?}");
            }
        }
    }

    #[test]
    fn two_opposite_roots_cancel() {
        let mut c = Cyclotomic::new();
        assert!(c.sum_vanishes(2, &[0, 1]));
        assert!(c.sum_vanishes(4, &[-1, 1]));
        assert!(!c.sum_vanishes(4, &[0, 1]));
        assert!(c.sum_vanishes(3, &[0, 1, 2]));
    }
}
