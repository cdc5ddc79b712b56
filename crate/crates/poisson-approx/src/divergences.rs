//! Exact probability metrics between finite PMFs.
//!
//! These are the oracles every closed-form bound is checked against. Natural
//! logarithms throughout; terms with `P(k) = 0` contribute nothing.
//!
//! A truncated Poisson PMF carries its dropped `tail_mass`. Total variation
//! and Hellinger distance add it as the mass of points where the other law
//! is zero; relative entropy, the Bhattacharyya parameter and Chernoff
//! information are unaffected by mass the first argument does not charge.

use serde::{Deserialize, Serialize};

use crate::pmf::FinitePmf;

/// Which metric a [`MetricValue`] measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MetricKind {
    Tv,
    Kl,
    Hellinger,
    Bc,
    Chernoff,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricValue {
    pub value: f64,
    pub kind: MetricKind,
}

impl MetricValue {
    fn new(value: f64, kind: MetricKind) -> Self {
        Self { value, kind }
    }
}

/// Tolerance on θ for the Chernoff-information search.
pub const CHERNOFF_THETA_TOL: f64 = 1e-10;

fn joint_range(p: &FinitePmf, q: &FinitePmf) -> std::ops::Range<usize> {
    p.offset().min(q.offset())..p.end().max(q.end())
}

/// Total variation distance, one-half of the L1 distance.
///
/// ```
/// use poisson_approx::divergences::tv;
/// use poisson_approx::pmf::FinitePmf;
///
/// let d = tv(&FinitePmf::point_mass(0), &FinitePmf::point_mass(1));
/// assert_eq!(d.value, 1.0);
/// ```
pub fn tv(p: &FinitePmf, q: &FinitePmf) -> MetricValue {
    let l1: f64 = joint_range(p, q).map(|k| (p.get(k) - q.get(k)).abs()).sum();
    let value = 0.5 * (l1 + p.tail_mass() + q.tail_mass());
    MetricValue::new(value.min(1.0), MetricKind::Tv)
}

/// Relative entropy `D(P || Q)`; `+inf` when `P` charges a point `Q` does not.
pub fn kl(p: &FinitePmf, q: &FinitePmf) -> MetricValue {
    let mut total = 0.0;
    for (i, &pk) in p.probs().iter().enumerate() {
        if pk == 0.0 {
            continue;
        }
        let qk = q.get(p.offset() + i);
        if qk == 0.0 {
            return MetricValue::new(f64::INFINITY, MetricKind::Kl);
        }
        total += pk * (pk / qk).ln();
    }
    MetricValue::new(total.max(0.0), MetricKind::Kl)
}

/// Hellinger distance `sqrt(½ Σ (√P - √Q)²)`.
pub fn hellinger(p: &FinitePmf, q: &FinitePmf) -> MetricValue {
    let sq: f64 = joint_range(p, q)
        .map(|k| {
            let d = p.get(k).sqrt() - q.get(k).sqrt();
            d * d
        })
        .sum();
    let value = (0.5 * (sq + p.tail_mass() + q.tail_mass())).sqrt();
    MetricValue::new(value.min(1.0), MetricKind::Hellinger)
}

/// Bhattacharyya parameter `Σ √(P Q)`.
pub fn bhattacharyya(p: &FinitePmf, q: &FinitePmf) -> MetricValue {
    let value: f64 = joint_range(p, q)
        .map(|k| (p.get(k) * q.get(k)).sqrt())
        .sum();
    MetricValue::new(value.min(1.0), MetricKind::Bc)
}

/// Minimizes a unimodal `f` on `[a, b]` by golden-section search until the
/// bracket is narrower than `tol`. Returns `(x, f(x))`.
pub fn golden_section_min<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> (f64, f64) {
    let inv_phi = (5.0_f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (a, b);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while b - a > tol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    let fx = f(x);
    [(c, fc), (d, fd), (x, fx)].into_iter().fold(
        (x, fx),
        |best, cand| if cand.1 < best.1 { cand } else { best },
    )
}

/// `log Σ P(k)^θ Q(k)^{1-θ}` over points charged by both laws.
fn chernoff_log_sum(pairs: &[(f64, f64)], theta: f64) -> f64 {
    pairs
        .iter()
        .map(|&(lp, lq)| (theta * lp + (1.0 - theta) * lq).exp())
        .sum::<f64>()
        .ln()
}

/// Chernoff information `-min_{θ∈[0,1]} log Σ P^θ Q^{1-θ}`.
///
/// The objective is convex in θ, so golden-section search applies. Returns
/// `+inf` when the supports are disjoint.
pub fn chernoff_information(p: &FinitePmf, q: &FinitePmf) -> MetricValue {
    let pairs: Vec<(f64, f64)> = joint_range(p, q)
        .filter_map(|k| {
            let (pk, qk) = (p.get(k), q.get(k));
            (pk > 0.0 && qk > 0.0).then(|| (pk.ln(), qk.ln()))
        })
        .collect();
    if pairs.is_empty() {
        return MetricValue::new(f64::INFINITY, MetricKind::Chernoff);
    }
    let (_, g) = golden_section_min(
        |t| chernoff_log_sum(&pairs, t),
        0.0,
        1.0,
        CHERNOFF_THETA_TOL,
    );
    MetricValue::new((-g).max(0.0), MetricKind::Chernoff)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pmf::{
        convolve_bernoulli_sum, poisson_pmf_truncated, BernoulliSumSpec, PoissonSpec,
    };

    fn pmf(v: &[f64]) -> FinitePmf {
        FinitePmf::new(0, v.to_vec()).unwrap()
    }

    #[test]
    fn identity_values() {
        let p = pmf(&[0.2, 0.3, 0.5]);
        assert_eq!(tv(&p, &p).value, 0.0);
        assert_eq!(kl(&p, &p).value, 0.0);
        assert!(hellinger(&p, &p).value < 1e-8);
        assert!((bhattacharyya(&p, &p).value - 1.0).abs() < 1e-15);
        assert!(chernoff_information(&p, &p).value < 1e-15);
    }

    #[test]
    fn disjoint_supports() {
        let (a, b) = (FinitePmf::point_mass(0), FinitePmf::point_mass(1));
        assert_eq!(tv(&a, &b).value, 1.0);
        assert_eq!(hellinger(&a, &b).value, 1.0);
        assert_eq!(bhattacharyya(&a, &b).value, 0.0);
        assert_eq!(kl(&a, &b).value, f64::INFINITY);
        assert_eq!(chernoff_information(&a, &b).value, f64::INFINITY);
    }

    #[test]
    fn kl_single_bernoulli_against_poisson_by_hand() {
        // P = (0.5, 0.5), Q = Po(0.5): two terms.
        let p = convolve_bernoulli_sum(&BernoulliSumSpec::new(vec![0.5]).unwrap());
        let q = poisson_pmf_truncated(&PoissonSpec::new(0.5).unwrap(), 1e-14).unwrap();
        let e = (-0.5f64).exp();
        let want = 0.5 * (0.5 / e).ln() + 0.5 * (0.5 / (0.5 * e)).ln();
        assert!((kl(&p, &q).value - want).abs() < 1e-15);
        assert!(want > 0.0);
    }

    #[test]
    fn tv_small_spec_is_interior() {
        let p = convolve_bernoulli_sum(&BernoulliSumSpec::new(vec![0.1, 0.2, 0.3]).unwrap());
        let q = poisson_pmf_truncated(&PoissonSpec::new(0.6).unwrap(), 1e-14).unwrap();
        let d = tv(&p, &q).value;
        assert!(d > 0.0 && d < 1.0);
    }

    #[test]
    fn chernoff_at_least_bhattacharyya_exponent() {
        let p = pmf(&[0.7, 0.2, 0.1]);
        let q = pmf(&[0.1, 0.3, 0.6]);
        let c = chernoff_information(&p, &q).value;
        assert!(c >= -bhattacharyya(&p, &q).value.ln() - 1e-15);
    }

    #[test]
    fn golden_section_finds_parabola_vertex() {
        let (x, fx) = golden_section_min(|t| (t - 0.3) * (t - 0.3), 0.0, 1.0, 1e-10);
        assert!((x - 0.3).abs() < 1e-9);
        assert!(fx < 1e-18);
        let (_, fx) = golden_section_min(|t| (t - 0.3) * (t - 0.3) + 1.0, 0.0, 1.0, 1e-10);
        assert!((fx - 1.0).abs() < 1e-15);
    }
}
