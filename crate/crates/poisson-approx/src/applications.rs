//! Worked examples: a random directed hypercube, a Gaussian moving average
//! crossing a level, probability profiles for hypothesis testing, and the
//! sample-size calculators.

use serde::{Deserialize, Serialize};

use crate::chen_stein::ChenSteinCoefficients;
use crate::entropy_bounds::{entropy_error_chen_stein, poisson_entropy, EntropyErrorBound};
use crate::error::{invalid, Result};
use crate::pmf::{BernoulliSumSpec, SumMoments};
use crate::special::binomial;

pub use crate::special::{std_normal_cdf, std_normal_pdf, std_normal_sf};

/// Vertices of the `n`-cube whose out-degree is `k` after every edge gets an
/// independent uniformly random direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RandomGraphCase {
    pub n: u32,
    pub k: u32,
}

/// λ, Chen-Stein coefficients and index-set size of a worked example.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExampleModel {
    pub lambda: f64,
    pub coefficients: ChenSteinCoefficients,
    /// Size of the index set; the sum has `index_count + 1` support points.
    pub index_count: f64,
}

/// `λ = C(n,k)`, `b1 = 2^{-n}(n+1)C(n,k)²`,
/// `b2 = n 2^{2-n} C(n-1,k) C(n-1,k-1)`, `b3 = 0`, over `2^n` vertices.
pub fn random_graph_model(case: RandomGraphCase) -> Result<ExampleModel> {
    let (n, k) = (case.n, case.k);
    if n == 0 || k > n {
        return Err(invalid(format!(
            "need 0 <= k <= n and n >= 1, got n = {n}, k = {k}"
        )));
    }
    let c = binomial(n as u64, k as i64);
    let half_n = 0.5f64.powi(n as i32);
    let b1 = half_n * (n as f64 + 1.0) * c * c;
    let b2 = n as f64
        * 4.0
        * half_n
        * binomial(n as u64 - 1, k as i64)
        * binomial(n as u64 - 1, k as i64 - 1);
    Ok(ExampleModel {
        lambda: c,
        coefficients: ChenSteinCoefficients {
            b1,
            b2,
            b3: 0.0,
            lambda: c,
        },
        index_count: 2f64.powi(n as i32),
    })
}

/// Poisson entropy and the certified relative error of approximating `H(W)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntropyTableRow {
    pub lambda: f64,
    pub entropy: f64,
    pub error: EntropyErrorBound,
    /// `error.bound / entropy`.
    pub max_rel_error: f64,
}

fn entropy_row(model: &ExampleModel) -> Result<EntropyTableRow> {
    let entropy = poisson_entropy(model.lambda)?;
    let error = entropy_error_chen_stein(&model.coefficients, model.index_count)?;
    Ok(EntropyTableRow {
        lambda: model.lambda,
        entropy,
        error,
        max_rel_error: error.bound / entropy,
    })
}

/// Entropy row for the random hypercube.
pub fn random_graph_entropy_report(case: RandomGraphCase) -> Result<EntropyTableRow> {
    entropy_row(&random_graph_model(case)?)
}

/// `(n, k)` rows of the hypercube entropy table, in print order.
pub const RANDOM_GRAPH_TABLE: [(u32, u32); 14] = [
    (30, 27),
    (30, 26),
    (30, 25),
    (50, 48),
    (50, 46),
    (50, 44),
    (50, 42),
    (50, 40),
    (100, 95),
    (100, 90),
    (100, 85),
    (100, 80),
    (100, 75),
    (100, 70),
];

/// `n` steps of `Y_i = (Z_i + θ Z_{i-1})/sqrt(1 + θ²)` and the count of
/// `Y_i > t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianMaCase {
    pub n: f64,
    pub theta_ma: f64,
    pub t: f64,
}

impl GaussianMaCase {
    /// Lag-one correlation `ρ = θ/(1 + θ²)`.
    pub fn rho(&self) -> f64 {
        self.theta_ma / (1.0 + self.theta_ma * self.theta_ma)
    }
}

/// Model and the intermediate quantities of the level-crossing example.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianMaModel {
    pub rho: f64,
    pub u: f64,
    pub b1_bound: f64,
    pub b2_bound: f64,
    pub model: ExampleModel,
}

/// `λ = n(1 - Φ(t))`, `b1 ≤ 3λ²/n`, `u = t sqrt(2/(1+ρ))`,
/// `b2 ≤ 2n sqrt(2(1+ρ)/(π(1-ρ))) [φ(u) - u(1 - Φ(u))]`, `b3 = 0`.
pub fn gaussian_ma_model(case: GaussianMaCase) -> Result<GaussianMaModel> {
    if !(case.n >= 1.0 && case.t > 0.0 && case.theta_ma.is_finite()) {
        return Err(invalid(format!(
            "need n >= 1, t > 0 and finite theta, got {case:?}"
        )));
    }
    let n = case.n;
    let rho = case.rho();
    let lambda = n * std_normal_sf(case.t);
    let b1 = 3.0 * lambda * lambda / n;
    let u = case.t * (2.0 / (1.0 + rho)).sqrt();
    let scale = 2.0 * n * (2.0 * (1.0 + rho) / (std::f64::consts::PI * (1.0 - rho))).sqrt();
    let b2 = scale * (std_normal_pdf(u) - u * std_normal_sf(u)).max(0.0);
    Ok(GaussianMaModel {
        rho,
        u,
        b1_bound: b1,
        b2_bound: b2,
        model: ExampleModel {
            lambda,
            coefficients: ChenSteinCoefficients {
                b1,
                b2,
                b3: 0.0,
                lambda,
            },
            index_count: n,
        },
    })
}

/// Entropy row for the moving-average example.
pub fn gaussian_ma_entropy_report(case: GaussianMaCase) -> Result<EntropyTableRow> {
    entropy_row(&gaussian_ma_model(case)?.model)
}

/// `(n, θ, t)` rows of the moving-average entropy table, in print order.
pub const MOVING_AVERAGE_TABLE: [(f64, f64, f64); 15] = [
    (1e4, 1.0, 5.0),
    (1e6, 1.0, 5.0),
    (1e8, 1.0, 5.0),
    (1e10, 1.0, 5.0),
    (1e12, 1.0, 5.0),
    (1e4, -1.0, 5.0),
    (1e6, -1.0, 5.0),
    (1e8, -1.0, 5.0),
    (1e10, -1.0, 5.0),
    (1e12, -1.0, 5.0),
    (1e4, 1.0, 6.0),
    (1e6, 1.0, 6.0),
    (1e8, 1.0, 6.0),
    (1e10, 1.0, 6.0),
    (1e12, 1.0, 6.0),
];

/// `p_i = i p_n / n` with `p_n = 2λ/(n+1)`.
pub fn p_profile_linear(n: usize, lambda: f64) -> Result<BernoulliSumSpec> {
    if n == 0 || !(lambda > 0.0) {
        return Err(invalid("linear profile needs n >= 1 and lambda > 0"));
    }
    let pn = 2.0 * lambda / (n as f64 + 1.0);
    BernoulliSumSpec::new((1..=n).map(|i| i as f64 * pn / n as f64).collect())
}

/// `Σ p_i² = (2λ²/3)(2n+1)/(n(n+1))` for [`p_profile_linear`].
pub fn p_profile_linear_sum_sq(n: usize, lambda: f64) -> f64 {
    let n = n as f64;
    2.0 * lambda * lambda / 3.0 * (2.0 * n + 1.0) / (n * (n + 1.0))
}

/// `p_i = p_1 α^{i-1}` with `p_1 = λ(1-α)/(1-α^n)`, for `0 < α < 1`.
pub fn p_profile_geometric(n: usize, lambda: f64, alpha: f64) -> Result<BernoulliSumSpec> {
    if n == 0 || !(lambda > 0.0) || !(alpha > 0.0 && alpha < 1.0) {
        return Err(invalid(
            "geometric profile needs n >= 1, lambda > 0, 0 < alpha < 1",
        ));
    }
    let p1 = lambda * (1.0 - alpha) / (1.0 - alpha.powi(n as i32));
    BernoulliSumSpec::new((0..n).map(|i| p1 * alpha.powi(i as i32)).collect())
}

/// `Σ p_i² = λ²(1-α)/(1+α) · (1+α^n)/(1-α^n)` for [`p_profile_geometric`].
pub fn p_profile_geometric_sum_sq(n: usize, lambda: f64, alpha: f64) -> f64 {
    let an = alpha.powi(n as i32);
    lambda * lambda * (1.0 - alpha) / (1.0 + alpha) * (1.0 + an) / (1.0 - an)
}

/// Moments of `p_i = 2a i`, `i = 1..n`, in closed form (the profile itself
/// may be far too long to store). Σ p³/(1-p) is not provided.
pub fn p_profile_arithmetic_moments(n: f64, a: f64) -> Result<SumMoments> {
    if !(n >= 1.0 && a > 0.0 && 2.0 * a * n < 1.0) {
        return Err(invalid(
            "arithmetic profile needs n >= 1, a > 0 and 2an < 1",
        ));
    }
    Ok(SumMoments {
        index_count: n,
        lambda: a * n * (n + 1.0),
        sum_p2: 4.0 * a * a * n * (n + 1.0) * (2.0 * n + 1.0) / 6.0,
        sum_p3_over_1mp: None,
    })
}

/// Samples needed so that an error exponent `d_lower` drives the error
/// probability below `epsilon`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HypothesisPlan {
    pub d_lower: f64,
    pub epsilon: f64,
    pub n_required: u64,
}

fn plan(d_lower: f64, epsilon: f64) -> Result<HypothesisPlan> {
    if !(d_lower > 0.0 && d_lower.is_finite()) {
        return Err(invalid(format!(
            "exponent {d_lower} must be positive and finite"
        )));
    }
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(invalid(format!("epsilon {epsilon} outside (0, 1)")));
    }
    let n = ((1.0 / epsilon).ln() / d_lower).ceil();
    Ok(HypothesisPlan {
        d_lower,
        epsilon,
        n_required: n as u64,
    })
}

/// Type-II error below `epsilon` from a relative-entropy lower bound:
/// `N = ⌈log(1/ε)/D⌉`.
///
/// ```
/// use poisson_approx::applications::chernoff_stein_plan;
///
/// let p = chernoff_stein_plan(2.47e-4, 1e-10).unwrap();
/// assert_eq!(p.n_required, 93223);
/// ```
pub fn chernoff_stein_plan(d_lower: f64, epsilon: f64) -> Result<HypothesisPlan> {
    plan(d_lower, epsilon)
}

/// Bayesian error below `epsilon` from a Chernoff-information lower bound:
/// `N = ⌈log(1/ε)/C⌉`.
pub fn bayes_plan(c_lower: f64, epsilon: f64) -> Result<HypothesisPlan> {
    plan(c_lower, epsilon)
}
