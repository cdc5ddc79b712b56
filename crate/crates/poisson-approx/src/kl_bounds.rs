//! Relative-entropy bounds for a Bernoulli sum against `Po(λ)`, and generic
//! lower bounds on relative entropy in terms of total variation.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::pmf::SumMoments;

/// Upper bound `(1/λ) Σ p_i³ / (1 - p_i)`.
pub fn kl_upper_kontoyiannis(m: impl Into<SumMoments>) -> Result<f64> {
    let m = m.into();
    let s3 = m
        .sum_p3_over_1mp
        .ok_or(Error::MissingMoment("sum of p^3/(1-p)"))?;
    if s3 == 0.0 {
        return Ok(0.0);
    }
    Ok(s3 / m.lambda)
}

/// `m(λ) = log(1/(e^λ - 1)) / (2e^{-λ} - 1)` below `log 2`, and 2 above.
///
/// ```
/// use poisson_approx::kl_bounds::m_lambda;
///
/// assert_eq!(m_lambda(2f64.ln()), 2.0);
/// assert!((m_lambda(0.1) - 2.7815).abs() < 1e-4);
/// ```
pub fn m_lambda(lambda: f64) -> f64 {
    if lambda >= std::f64::consts::LN_2 {
        return 2.0;
    }
    let den = 1.0 + 2.0 * (-lambda).exp_m1();
    let num = -lambda.exp_m1().ln();
    // Both vanish at log 2; close to it the quotient is replaced by its limit.
    if den.abs() < 1e-9 {
        return 2.0;
    }
    num / den
}

/// `K2(λ) = m(λ) K1(λ)²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct K2Coefficient {
    pub k2: f64,
    pub m_lambda: f64,
    pub k1: f64,
}

impl K2Coefficient {
    pub fn new(lambda: f64, k1: f64) -> Self {
        let m = m_lambda(lambda);
        Self {
            k2: m * k1 * k1,
            m_lambda: m,
            k1,
        }
    }
}

/// Lower bound `m(λ) K1² (Σ p_i²)²`.
pub fn kl_lower_improved(m: impl Into<SumMoments>, k1: f64) -> f64 {
    let m = m.into();
    if m.sum_p2 == 0.0 {
        return 0.0;
    }
    K2Coefficient::new(m.lambda, k1).k2 * m.sum_p2 * m.sum_p2
}

/// Lower bound `(1/512) min(1, 1/λ²) (Σ p_i²)²`.
pub fn kl_lower_loosened(m: impl Into<SumMoments>) -> f64 {
    let m = m.into();
    if m.sum_p2 == 0.0 {
        return 0.0;
    }
    (1.0 / (m.lambda * m.lambda)).min(1.0) * m.sum_p2 * m.sum_p2 / 512.0
}

/// Pinsker: `D ≥ 2 d_TV²`.
pub fn pinsker(d_tv: f64) -> f64 {
    2.0 * d_tv * d_tv
}

/// `φ(p) = log((1 - p)/p) / (1 - 2p)` on `(0, 1/2]`, with `φ(1/2) = 2`.
pub fn phi(p: f64) -> f64 {
    if p <= 0.0 {
        return f64::INFINITY;
    }
    let x = 1.0 - 2.0 * p;
    if x.abs() < 1e-4 {
        // log((1+x)/(1-x))/x = 2(1 + x²/3 + x⁴/5 + ...)
        let x2 = x * x;
        return 2.0 * (1.0 + x2 / 3.0 + x2 * x2 / 5.0);
    }
    ((1.0 - p) / p).ln() / x
}

/// `π_Q` and the matching refinement factor `φ(π_Q) ≥ 2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RefinedPinskerContext {
    pub pi_q: f64,
    pub phi: f64,
}

impl RefinedPinskerContext {
    pub fn new(pi_q: f64) -> Result<Self> {
        if !(0.0..=0.5).contains(&pi_q) {
            return Err(invalid(format!("pi_Q = {pi_q} outside [0, 1/2]")));
        }
        Ok(Self {
            pi_q,
            phi: phi(pi_q),
        })
    }

    /// Context for `Q = Po(λ)`.
    pub fn poisson(lambda: f64) -> Self {
        let pi_q = poisson_pi_q(lambda);
        Self {
            pi_q,
            phi: phi(pi_q),
        }
    }
}

/// Refined Pinsker: `D ≥ φ(π_Q) d_TV²`.
pub fn refined_pinsker(d_tv: f64, ctx: &RefinedPinskerContext) -> f64 {
    if d_tv == 0.0 {
        return 0.0;
    }
    ctx.phi * d_tv * d_tv
}

/// `π_Q` for `Po(λ)`: `1 - e^{-λ}` for `λ ≤ log 2`; beyond that the
/// refinement is not used and `1/2` (so `φ = 2`) is returned.
pub fn poisson_pi_q(lambda: f64) -> f64 {
    if lambda < std::f64::consts::LN_2 {
        -(-lambda).exp_m1()
    } else {
        0.5
    }
}

/// `D ≥ log(1/(1 - d_TV²))`; `+inf` at `d_TV = 1`.
pub fn kl_lower_log_form(d_tv: f64) -> f64 {
    if d_tv >= 1.0 {
        return f64::INFINITY;
    }
    -(-d_tv * d_tv).ln_1p()
}

/// Vajda: `D ≥ log((1 + t)/(1 - t)) - 2t/(1 + t)`; `+inf` at `t = 1`.
pub fn vajda_lower(d_tv: f64) -> f64 {
    if d_tv >= 1.0 {
        return f64::INFINITY;
    }
    let t = d_tv;
    (t.ln_1p() - (-t).ln_1p()) - 2.0 * t / (1.0 + t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pmf::BernoulliSumSpec;

    #[test]
    fn m_lambda_values() {
        assert_eq!(m_lambda(2f64.ln()), 2.0);
        assert_eq!(m_lambda(5.0), 2.0);
        let l: f64 = 0.1;
        let want = (1.0 / (l.exp() - 1.0)).ln() / (2.0 * (-l).exp() - 1.0);
        assert!((m_lambda(l) - want).abs() < 1e-13);
        // Left limit at log 2.
        assert!((m_lambda(2f64.ln() - 1e-7) - 2.0).abs() < 1e-5);
        // Grows like log(1/λ) near zero.
        let l = 1e-12;
        assert!((m_lambda(l) / (1.0 / l).ln() - 1.0).abs() < 1e-3);
    }

    #[test]
    fn pi_q_values() {
        assert!((poisson_pi_q(0.1) - 0.09516).abs() < 1e-5);
        assert_eq!(poisson_pi_q(2f64.ln()), 0.5);
        assert_eq!(poisson_pi_q(5.0), 0.5);
    }

    #[test]
    fn refined_equals_plain_at_half() {
        let ctx = RefinedPinskerContext::new(0.5).unwrap();
        assert_eq!(ctx.phi, 2.0);
        assert_eq!(refined_pinsker(0.3, &ctx), pinsker(0.3));
        assert_eq!(refined_pinsker(0.0, &ctx), 0.0);
        assert!(RefinedPinskerContext::new(0.7).is_err());
    }

    #[test]
    fn phi_is_decreasing() {
        let mut prev = f64::INFINITY;
        for i in 1..=500 {
            let p = 0.5 * i as f64 / 500.0;
            let v = phi(p);
            assert!(v <= prev, "{p}");
            assert!(v >= 2.0);
            prev = v;
        }
    }

    #[test]
    fn vajda_dominates_log_form() {
        for i in 0..1000 {
            let t = i as f64 / 1000.0;
            assert!(vajda_lower(t) >= kl_lower_log_form(t) - 1e-15, "{t}");
        }
        assert_eq!(vajda_lower(0.0), 0.0);
        assert_eq!(kl_lower_log_form(0.0), 0.0);
        assert_eq!(vajda_lower(1.0), f64::INFINITY);
        assert_eq!(kl_lower_log_form(1.0), f64::INFINITY);
    }

    #[test]
    fn log_form_beats_pinsker_from_0_893() {
        // Crossing of -log(1 - t²) and 2t².
        let cross = (1..100_000)
            .map(|i| i as f64 / 100_000.0)
            .find(|&t| kl_lower_log_form(t) > pinsker(t))
            .unwrap();
        assert!((cross - 0.893).abs() < 1e-3, "{cross}");
    }

    #[test]
    fn iid_kontoyiannis_is_lambda_sq_over_n_sq() {
        let (lambda, n) = (2.0, 4000);
        let spec = BernoulliSumSpec::new(vec![lambda / n as f64; n]).unwrap();
        let v = kl_upper_kontoyiannis(&spec).unwrap();
        let lead = lambda * lambda / (n * n) as f64;
        assert!((v / lead - 1.0).abs() < 2.0 * lambda / n as f64);
    }

    #[test]
    fn zero_spec_bounds() {
        let spec = BernoulliSumSpec::new(vec![0.0; 3]).unwrap();
        assert_eq!(kl_upper_kontoyiannis(&spec), Ok(0.0));
        assert_eq!(kl_lower_improved(&spec, 0.3), 0.0);
        assert_eq!(kl_lower_loosened(&spec), 0.0);
    }

    #[test]
    fn missing_third_moment_is_an_error() {
        let m = SumMoments {
            index_count: 1.0,
            lambda: 1.0,
            sum_p2: 0.1,
            sum_p3_over_1mp: None,
        };
        assert!(kl_upper_kontoyiannis(m).is_err());
    }
}
