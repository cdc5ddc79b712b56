//! Poisson entropy and bounds on `|H(Po(λ)) - H(W)|`.
//!
//! Every bound has the shape `η log(M - 1) + h(η) + μ`, where η bounds the
//! total variation distance, `M = max(m + 1, 1/(1 - η))` for a variable with
//! `m` support points, and μ bounds the entropy carried by the Poisson tail
//! beyond `M - 2`. μ is kept in log form because it underflows for the large
//! index sets of the worked examples.

use serde::{Deserialize, Serialize};

use crate::chen_stein::{
    cekanavicius_roos_factor, compute_b123, tv_upper_agg, ChenSteinCoefficients, DependencyModel,
};
use crate::error::{inapplicable, invalid, Result};
use crate::pmf::{poisson_log_pmf, poisson_tail_chernoff, LogBound, SumMoments};
use crate::special::{ln_factorial, one_minus_exp_over, xlogx_neg};

/// Below this mean the entropy comes from the series; at or above it from
/// the midpoint of the asymptotic interval.
pub const SERIES_CUTOFF: f64 = 20.0;

/// Binary entropy in nats.
pub fn binary_entropy(x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(invalid(format!(
            "binary entropy argument {x} outside [0, 1]"
        )));
    }
    Ok(xlogx_neg(x) + xlogx_neg(1.0 - x))
}

fn check_lambda(lambda: f64) -> Result<()> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(invalid(format!(
            "lambda = {lambda} must be positive and finite"
        )));
    }
    Ok(())
}

fn series_term(lambda: f64, k: u64) -> f64 {
    let lf = ln_factorial(k as f64);
    (poisson_log_pmf(lambda, k)).exp() * lf
}

/// `λ log(e/λ) + Σ_{k=1}^{terms} e^{-λ} λ^k log(k!)/k!`.
pub fn poisson_entropy_series_truncated(lambda: f64, terms: u64) -> f64 {
    let head = lambda * (1.0 - lambda.ln());
    head + (2..=terms).map(|k| series_term(lambda, k)).sum::<f64>()
}

/// The series summed to convergence, and never fewer than `⌈10λ⌉` terms.
pub fn poisson_entropy_series(lambda: f64) -> f64 {
    let head = lambda * (1.0 - lambda.ln());
    let min_terms = (10.0 * lambda).ceil() as u64;
    let mut sum = 0.0;
    let mut k = 2;
    loop {
        let term = series_term(lambda, k);
        sum += term;
        if k >= min_terms && k as f64 > lambda && (term == 0.0 || term <= 1e-18 * sum) {
            break;
        }
        k += 1;
    }
    head + sum
}

/// Two-sided interval for `H(Po(λ))` around `½ log(2πeλ) - 1/(12λ)`.
pub fn adell_interval(lambda: f64) -> (f64, f64) {
    let centre = 0.5 * (2.0 * std::f64::consts::PI * std::f64::consts::E * lambda).ln()
        - 1.0 / (12.0 * lambda);
    let l2 = lambda * lambda;
    let lo = centre - 31.0 / (24.0 * l2) - 33.0 / (20.0 * l2 * lambda) - 1.0 / (20.0 * l2 * l2);
    let hi = centre + 5.0 / (24.0 * l2) + 1.0 / (60.0 * l2 * lambda);
    (lo, hi)
}

/// Entropy of `Po(λ)` in nats: series below [`SERIES_CUTOFF`], midpoint of
/// [`adell_interval`] from there on.
///
/// ```
/// use poisson_approx::entropy_bounds::poisson_entropy;
///
/// assert!((poisson_entropy(1e6).unwrap() - 8.327).abs() < 5e-4);
/// ```
pub fn poisson_entropy(lambda: f64) -> Result<f64> {
    check_lambda(lambda)?;
    if lambda < SERIES_CUTOFF {
        Ok(poisson_entropy_series(lambda))
    } else {
        let (lo, hi) = adell_interval(lambda);
        Ok(0.5 * (lo + hi))
    }
}

/// Inputs of the generic bound `η log(M - 1) + h(η) + μ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntropyErrorInputs {
    pub eta: f64,
    /// Support size `m` of the finite variable, as a float.
    pub m_count: f64,
    pub mu: f64,
    pub big_m: f64,
}

impl EntropyErrorInputs {
    /// Sets `M = max(m + 1, 1/(1 - η))`; inapplicable for `η ≥ 1`.
    pub fn new(eta: f64, m_count: f64, mu: f64) -> Result<Self> {
        if !(eta >= 0.0) {
            return Err(invalid(format!("eta = {eta} must be nonnegative")));
        }
        if !(eta < 1.0) {
            return Err(inapplicable(format!("eta = {eta} must be below 1")));
        }
        if !(mu >= 0.0) {
            return Err(invalid(format!("mu = {mu} must be nonnegative")));
        }
        if !(m_count >= 1.0) {
            return Err(invalid(format!(
                "support size {m_count} must be at least 1"
            )));
        }
        let big_m = (m_count + 1.0).max(1.0 / (1.0 - eta));
        Ok(Self {
            eta,
            m_count,
            mu,
            big_m,
        })
    }
}

/// `η log(M - 1) + h(η) + μ`.
pub fn entropy_diff_bound(inputs: &EntropyErrorInputs) -> Result<f64> {
    if !(inputs.eta < 1.0) {
        return Err(inapplicable(format!(
            "eta = {} must be below 1",
            inputs.eta
        )));
    }
    let log_term = if inputs.eta == 0.0 {
        0.0
    } else {
        inputs.eta * (inputs.big_m - 1.0).ln()
    };
    Ok(log_term + binary_entropy(inputs.eta)? + inputs.mu)
}

/// `μ = [(λ log(e/λ))_+ + λ² + (6 log(2π) + 1)/12] · chernoff(λ, M)`.
pub fn poisson_mu(lambda: f64, big_m: f64) -> Result<LogBound> {
    check_lambda(lambda)?;
    let tail = poisson_tail_chernoff(lambda, big_m)?;
    let prefix = (lambda * (1.0 - lambda.ln())).max(0.0)
        + lambda * lambda
        + (6.0 * (2.0 * std::f64::consts::PI).ln() + 1.0) / 12.0;
    Ok(LogBound::from_log(prefix.ln() + tail.log_value))
}

/// A certified bound on `|H(Po(λ)) - H(W)|` with its ingredients.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntropyErrorBound {
    pub bound: f64,
    pub eta: f64,
    pub big_m: f64,
    pub mu: LogBound,
}

/// Assembles the bound for a variable with `m_count` support points.
pub fn entropy_error_from_eta(lambda: f64, eta: f64, m_count: f64) -> Result<EntropyErrorBound> {
    check_lambda(lambda)?;
    let base = EntropyErrorInputs::new(eta, m_count, 0.0)?;
    if base.big_m - 2.0 < lambda {
        return Err(inapplicable(format!(
            "tail term needs M - 2 = {} >= lambda = {lambda}",
            base.big_m - 2.0
        )));
    }
    let mu = poisson_mu(lambda, base.big_m)?;
    let inputs = EntropyErrorInputs {
        mu: mu.value,
        ..base
    };
    Ok(EntropyErrorBound {
        bound: entropy_diff_bound(&inputs)?,
        eta,
        big_m: base.big_m,
        mu,
    })
}

/// Bound from Chen-Stein coefficients for `index_count` summands
/// (so `W` has `index_count + 1` support points).
pub fn entropy_error_chen_stein(
    c: &ChenSteinCoefficients,
    index_count: f64,
) -> Result<EntropyErrorBound> {
    entropy_error_from_eta(c.lambda, tv_upper_agg(c), index_count + 1.0)
}

/// Bound for a dependency model, with η from the aggregate Chen-Stein bound.
pub fn entropy_error_poisson(model: &DependencyModel) -> Result<EntropyErrorBound> {
    entropy_error_chen_stein(&compute_b123(model)?, model.len() as f64)
}

/// Independent summands, `η = ((1 - e^{-λ})/λ) Σ p_i²`.
///
/// ```
/// use poisson_approx::entropy_bounds::entropy_error_independent;
/// use poisson_approx::pmf::BernoulliSumSpec;
///
/// let spec = BernoulliSumSpec::new(vec![0.1, 0.2, 0.3]).unwrap();
/// let b = entropy_error_independent(&spec).unwrap();
/// assert!(b.bound > 0.0 && b.eta < 1.0);
/// ```
pub fn entropy_error_independent(m: impl Into<SumMoments>) -> Result<EntropyErrorBound> {
    let m = m.into();
    check_lambda(m.lambda)?;
    entropy_error_from_eta(
        m.lambda,
        one_minus_exp_over(m.lambda) * m.sum_p2,
        m.index_count + 1.0,
    )
}

/// Independent summands, `η = θ_r min(1 - e^{-λ}, 3/(4e(1 - √θ_r)^{3/2}))`
/// with `θ_r = Σ p_i²/λ`; inapplicable for `θ_r ≥ 1`.
pub fn entropy_error_independent_improved(m: impl Into<SumMoments>) -> Result<EntropyErrorBound> {
    let m = m.into();
    check_lambda(m.lambda)?;
    let t = m.theta_r();
    if !(t < 1.0) {
        return Err(inapplicable(format!("theta_r = {t} must be below 1")));
    }
    let eta = t * (-(-m.lambda).exp_m1()).min(cekanavicius_roos_factor(t));
    entropy_error_from_eta(m.lambda, eta, m.index_count + 1.0)
}

/// Summands with values in `{0, ..., A}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundedIntegerSumSpec {
    /// Cap `A`.
    pub cap: u64,
    /// `Pr(X_α = 1)`.
    pub p: Vec<f64>,
    /// `Pr(X_α ≥ 2)`.
    pub q: Vec<f64>,
    /// Coefficients for the indicators of `{X_α = 1}`.
    pub chen_stein: ChenSteinCoefficients,
}

impl BoundedIntegerSumSpec {
    pub fn new(
        cap: u64,
        p: Vec<f64>,
        q: Vec<f64>,
        chen_stein: ChenSteinCoefficients,
    ) -> Result<Self> {
        if cap == 0 {
            return Err(invalid("cap A must be positive"));
        }
        if p.len() != q.len() {
            return Err(invalid(format!(
                "{} p-values but {} q-values",
                p.len(),
                q.len()
            )));
        }
        for (a, (&pa, &qa)) in p.iter().zip(&q).enumerate() {
            if !(pa >= 0.0 && qa >= 0.0 && pa + qa <= 1.0) {
                return Err(invalid(format!(
                    "p[{a}] = {pa}, q[{a}] = {qa} do not form probabilities"
                )));
            }
        }
        let lambda: f64 = p.iter().sum();
        check_lambda(lambda)?;
        Ok(Self {
            cap,
            p,
            q,
            chen_stein,
        })
    }

    pub fn n(&self) -> usize {
        self.p.len()
    }

    pub fn lambda(&self) -> f64 {
        self.p.iter().sum()
    }

    pub fn q_total(&self) -> f64 {
        self.q.iter().sum()
    }

    /// `η_A = 2(b'1 + b'2)(1 - e^{-λ})/λ + b'3 min(1, 1.4/√λ) + q`.
    pub fn eta(&self) -> f64 {
        let c = &self.chen_stein;
        let lambda = self.lambda();
        2.0 * (c.b1 + c.b2) * one_minus_exp_over(lambda)
            + c.b3 * (1.4 / lambda.sqrt()).min(1.0)
            + self.q_total()
    }
}

/// `η_A log(M_A - 1) + h(η_A) + μ_A` with `M_A = max(nA + 2, 1/(1 - η_A))`.
pub fn entropy_error_bounded_integer(spec: &BoundedIntegerSumSpec) -> Result<EntropyErrorBound> {
    let support = spec.n() as f64 * spec.cap as f64 + 1.0;
    entropy_error_from_eta(spec.lambda(), spec.eta(), support)
}
