//! Exact discrete distributions on the nonnegative integers.
//!
//! [`FinitePmf`] is the currency of the oracles: the exact law of a Bernoulli
//! sum comes from [`convolve_bernoulli_sum`], and the Poisson reference law
//! from [`poisson_pmf_truncated`], which records the mass it drops.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::special::{ln_factorial, xlogx_neg};

/// Default tail mass allowed when truncating a Poisson PMF.
pub const DEFAULT_TAIL_EPS: f64 = 1e-14;

const SUM_TOL: f64 = 1e-12;

/// Largest support a truncated Poisson PMF may materialize.
const MAX_SUPPORT: f64 = 5e7;

/// Probability vector supported on `offset, offset + 1, ...`.
///
/// `tail_mass` is the probability of points beyond the stored support that
/// was dropped by truncation (zero for exact laws).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FinitePmf {
    offset: usize,
    probs: Vec<f64>,
    tail_mass: f64,
}

impl FinitePmf {
    /// Validates nonnegativity and that the entries sum to one.
    pub fn new(offset: usize, probs: Vec<f64>) -> Result<Self> {
        Self::with_tail(offset, probs, 0.0)
    }

    /// As [`FinitePmf::new`], with `tail_mass` of probability living beyond
    /// the stored support.
    pub fn with_tail(offset: usize, probs: Vec<f64>, tail_mass: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&tail_mass) {
            return Err(invalid(format!("tail mass {tail_mass} outside [0, 1)")));
        }
        if let Some(bad) = probs.iter().find(|&&q| !(q >= 0.0 && q.is_finite())) {
            return Err(invalid(format!(
                "probability {bad} is not a nonnegative number"
            )));
        }
        let total: f64 = probs.iter().sum();
        if (total + tail_mass - 1.0).abs() > SUM_TOL {
            return Err(invalid(format!(
                "probabilities sum to {total} with tail mass {tail_mass}"
            )));
        }
        Ok(Self {
            offset,
            probs,
            tail_mass,
        })
    }

    /// Point mass at `k`.
    pub fn point_mass(k: usize) -> Self {
        Self {
            offset: k,
            probs: vec![1.0],
            tail_mass: 0.0,
        }
    }

    pub fn offset(&self) -> usize {
        self.offset
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn tail_mass(&self) -> f64 {
        self.tail_mass
    }

    /// One past the largest stored support point.
    pub fn end(&self) -> usize {
        self.offset + self.probs.len()
    }

    /// Probability of `k`; zero outside the stored support.
    pub fn get(&self, k: usize) -> f64 {
        if k < self.offset {
            return 0.0;
        }
        self.probs.get(k - self.offset).copied().unwrap_or(0.0)
    }

    pub fn mean(&self) -> f64 {
        self.probs
            .iter()
            .enumerate()
            .map(|(i, &q)| (self.offset + i) as f64 * q)
            .sum()
    }

    /// Shannon entropy in nats of the stored entries.
    pub fn entropy(&self) -> f64 {
        self.probs.iter().map(|&q| xlogx_neg(q)).sum()
    }
}

/// Success probabilities of independent Bernoulli summands.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct BernoulliSumSpec {
    p: Vec<f64>,
}

impl BernoulliSumSpec {
    /// Rejects any `p_i` outside `[0, 1)`.
    pub fn new(p: Vec<f64>) -> Result<Self> {
        if let Some((i, &bad)) = p
            .iter()
            .enumerate()
            .find(|(_, &q)| !(0.0..1.0).contains(&q))
        {
            return Err(invalid(format!("p[{i}] = {bad} outside [0, 1)")));
        }
        Ok(Self { p })
    }

    pub fn p(&self) -> &[f64] {
        &self.p
    }

    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }

    pub fn lambda(&self) -> f64 {
        self.p.iter().sum()
    }

    pub fn sum_sq(&self) -> f64 {
        self.p.iter().map(|q| q * q).sum()
    }

    pub fn moments(&self) -> SumMoments {
        SumMoments::from(self)
    }
}

impl TryFrom<Vec<f64>> for BernoulliSumSpec {
    type Error = crate::Error;

    fn try_from(p: Vec<f64>) -> Result<Self> {
        Self::new(p)
    }
}

impl From<BernoulliSumSpec> for Vec<f64> {
    fn from(spec: BernoulliSumSpec) -> Self {
        spec.p
    }
}

/// Summary statistics of a Bernoulli sum that the closed-form bounds need.
///
/// Profiles too long to materialize (such as 10^8 summands) can be described
/// directly by their moments; `sum_p3_over_1mp` may then be absent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SumMoments {
    /// Number of summands, as a float so astronomically large index sets fit.
    pub index_count: f64,
    /// λ = Σ p_i.
    pub lambda: f64,
    /// Σ p_i².
    pub sum_p2: f64,
    /// Σ p_i³ / (1 - p_i).
    pub sum_p3_over_1mp: Option<f64>,
}

impl SumMoments {
    /// θ_r = Σ p_i² / λ.
    pub fn theta_r(&self) -> f64 {
        self.sum_p2 / self.lambda
    }
}

impl From<&BernoulliSumSpec> for SumMoments {
    fn from(spec: &BernoulliSumSpec) -> Self {
        Self {
            index_count: spec.len() as f64,
            lambda: spec.lambda(),
            sum_p2: spec.sum_sq(),
            sum_p3_over_1mp: Some(spec.p.iter().map(|&q| q * q * q / (1.0 - q)).sum()),
        }
    }
}

/// Poisson law parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PoissonSpec {
    lambda: f64,
}

impl PoissonSpec {
    pub fn new(lambda: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(invalid(format!(
                "Poisson mean {lambda} must be positive and finite"
            )));
        }
        Ok(Self { lambda })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }
}

/// Exact law of `W = Σ X_i` by left-to-right pairwise convolution.
///
/// ```
/// use poisson_approx::pmf::{convolve_bernoulli_sum, BernoulliSumSpec};
///
/// let spec = BernoulliSumSpec::new(vec![0.5, 0.5]).unwrap();
/// assert_eq!(convolve_bernoulli_sum(&spec).probs(), &[0.25, 0.5, 0.25]);
/// ```
pub fn convolve_bernoulli_sum(spec: &BernoulliSumSpec) -> FinitePmf {
    let mut probs = Vec::with_capacity(spec.len() + 1);
    probs.push(1.0);
    for &q in spec.p() {
        probs.push(0.0);
        for k in (1..probs.len()).rev() {
            probs[k] = probs[k] * (1.0 - q) + probs[k - 1] * q;
        }
        probs[0] *= 1.0 - q;
    }
    FinitePmf {
        offset: 0,
        probs,
        tail_mass: 0.0,
    }
}

/// `log Π_λ(k) = -λ + k log λ - log k!`.
pub fn poisson_log_pmf(lambda: f64, k: u64) -> f64 {
    let k = k as f64;
    let k_log = if k == 0.0 { 0.0 } else { k * lambda.ln() };
    -lambda + k_log - ln_factorial(k)
}

/// A bound carried together with its natural log, so that values far below
/// the smallest positive double remain auditable.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogBound {
    pub value: f64,
    pub log_value: f64,
}

impl LogBound {
    pub fn from_log(log_value: f64) -> Self {
        Self {
            value: log_value.exp(),
            log_value,
        }
    }
}

/// Chernoff bound `Pr(Z ≥ M - 2) ≤ exp{-[λ + (M-2) log((M-2)/(λe))]}`.
///
/// `big_m` is a float so index sets such as 2^100 are representable.
pub fn poisson_tail_chernoff(lambda: f64, big_m: f64) -> Result<LogBound> {
    PoissonSpec::new(lambda)?;
    let s = big_m - 2.0;
    if !(s >= lambda) {
        return Err(invalid(format!(
            "Chernoff tail needs M - 2 = {s} >= lambda = {lambda}"
        )));
    }
    Ok(LogBound::from_log(chernoff_log(lambda, s)))
}

fn chernoff_log(lambda: f64, s: f64) -> f64 {
    // λ + s log(s/(λe)) = λ - s + s log(s/λ); the log of the ratio keeps
    // precision when s and λ are both huge.
    -(lambda - s + s * (s / lambda).ln())
}

/// Poisson PMF on `{0, ..., k_max}`; the exact remaining tail is recorded.
pub fn poisson_pmf_upto(spec: &PoissonSpec, k_max: usize) -> FinitePmf {
    let lambda = spec.lambda();
    let probs: Vec<f64> = (0..=k_max as u64)
        .map(|k| poisson_log_pmf(lambda, k).exp())
        .collect();
    let tail_mass = poisson_tail_sum(lambda, k_max as u64 + 1);
    FinitePmf {
        offset: 0,
        probs,
        tail_mass,
    }
}

/// Poisson PMF truncated at the first `K` whose Chernoff certificate gives
/// `Pr(Z > K) ≤ tail_eps`.
///
/// ```
/// use poisson_approx::pmf::{poisson_pmf_truncated, PoissonSpec};
///
/// let pmf = poisson_pmf_truncated(&PoissonSpec::new(1.0).unwrap(), 1e-14).unwrap();
/// assert!((pmf.get(0) - (-1.0f64).exp()).abs() < 1e-16);
/// assert!(pmf.tail_mass() <= 1e-14);
/// ```
pub fn poisson_pmf_truncated(spec: &PoissonSpec, tail_eps: f64) -> Result<FinitePmf> {
    if !(tail_eps > 0.0 && tail_eps < 1.0) {
        return Err(invalid(format!("tail_eps {tail_eps} outside (0, 1)")));
    }
    let k = truncation_point(spec.lambda(), tail_eps);
    if k > MAX_SUPPORT {
        return Err(invalid(format!(
            "Poisson support up to {k} is too large to materialize"
        )));
    }
    Ok(poisson_pmf_upto(spec, k as usize))
}

/// Smallest integer `K ≥ λ - 1` with `chernoff(λ, K + 1) ≤ tail_eps`.
fn truncation_point(lambda: f64, tail_eps: f64) -> f64 {
    let target = tail_eps.ln();
    let ok = |k: f64| chernoff_log(lambda, k + 1.0) <= target;
    let mut lo = (lambda - 1.0).max(0.0).ceil();
    if ok(lo) {
        return lo;
    }
    // The certificate decreases in K past λ - 1; bracket then bisect.
    // Integer steps keep the bisection below on integers.
    let mut step = lambda.sqrt().ceil().max(1.0);
    let mut hi = lo + step;
    while !ok(hi) {
        lo = hi;
        step *= 2.0;
        hi = lo + step;
    }
    while hi - lo > 1.0 {
        let mid = ((lo + hi) / 2.0).floor();
        if ok(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// `Pr(Z ≥ start)` summed directly from `start` upward.
fn poisson_tail_sum(lambda: f64, start: u64) -> f64 {
    let mut total = 0.0;
    let mut k = start;
    loop {
        let term = poisson_log_pmf(lambda, k).exp();
        total += term;
        let decreasing = k as f64 + 1.0 > lambda;
        if decreasing && (term == 0.0 || term < total * 1e-18) {
            break;
        }
        k += 1;
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_sum_is_point_mass_at_zero() {
        let pmf = convolve_bernoulli_sum(&BernoulliSumSpec::new(vec![]).unwrap());
        assert_eq!(pmf.probs(), &[1.0]);
    }

    #[test]
    fn three_summands_match_enumeration() {
        // Enumerated by hand over the eight outcomes.
        let pmf = convolve_bernoulli_sum(&BernoulliSumSpec::new(vec![0.1, 0.2, 0.3]).unwrap());
        let want = [0.504, 0.398, 0.092, 0.006];
        for (got, want) in pmf.probs().iter().zip(want) {
            assert!((got - want).abs() < 1e-15, "{got} vs {want}");
        }
    }

    #[test]
    fn rejects_probability_one() {
        assert!(BernoulliSumSpec::new(vec![0.2, 1.0]).is_err());
        assert!(BernoulliSumSpec::new(vec![-0.1]).is_err());
        assert!(BernoulliSumSpec::new(vec![f64::NAN]).is_err());
    }

    #[test]
    fn poisson_unit_mean_head() {
        let pmf = poisson_pmf_truncated(&PoissonSpec::new(1.0).unwrap(), DEFAULT_TAIL_EPS).unwrap();
        let e1 = (-1.0f64).exp();
        assert!((pmf.get(0) - e1).abs() < 1e-16);
        assert!((pmf.get(1) - e1).abs() < 1e-16);
    }

    #[test]
    fn poisson_truncation_certificate_holds() {
        let spec = PoissonSpec::new(28.7).unwrap();
        let pmf = poisson_pmf_truncated(&spec, 1e-12).unwrap();
        let head: f64 = pmf.probs().iter().sum();
        assert!(head >= 1.0 - 1e-12 - 1e-14);
        assert!(pmf.tail_mass() <= 1e-12);
        let k = pmf.end() as f64 - 1.0;
        let cert = poisson_tail_chernoff(28.7, k + 3.0).unwrap();
        assert!(cert.value <= 1e-12);
        // One fewer point would not be certified.
        let prev = poisson_tail_chernoff(28.7, k + 2.0).unwrap();
        assert!(prev.value > 1e-12);
    }

    #[test]
    fn chernoff_tail_closed_form_values() {
        assert_eq!(poisson_tail_chernoff(1.0, 3.0).unwrap().value, 1.0);
        let v = poisson_tail_chernoff(1.0, 12.0).unwrap().value;
        let want = (-(1.0 + 10.0 * (10.0f64 / std::f64::consts::E).ln())).exp();
        assert!((v / want - 1.0).abs() < 1e-14);
        assert!((v - 8.1e-7).abs() < 0.05e-7);
        assert!(poisson_tail_chernoff(5.0, 6.0).is_err());
    }

    #[test]
    fn chernoff_tail_beyond_hundred_at_mean_ten() {
        // Pr(Z ≥ 101) for Z ~ Po(10), as used for the n = 100 linear profile.
        let v = poisson_tail_chernoff(10.0, 103.0).unwrap().value;
        assert!((v / 1.22e-62 - 1.0).abs() < 0.01, "{v}");
    }

    #[test]
    fn chernoff_log_survives_underflow() {
        let b = poisson_tail_chernoff(4060.0, 2f64.powi(30) + 2.0).unwrap();
        assert_eq!(b.value, 0.0);
        assert!(b.log_value < -1e9);
    }

    #[test]
    fn pmf_rejects_bad_vectors() {
        assert!(FinitePmf::new(0, vec![0.5, 0.6]).is_err());
        assert!(FinitePmf::new(0, vec![-0.1, 1.1]).is_err());
        assert!(FinitePmf::new(2, vec![0.5, 0.5]).is_ok());
    }
}
