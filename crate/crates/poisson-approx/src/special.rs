//! Special functions shared by the bound calculators.
//!
//! Log-gamma comes from `statrs` and the complementary error function from
//! `libm` (statrs' erfc is off by about 1e-11 near 1). The helpers here only
//! fix conventions (natural logs, `0 log 0 = 0`, binomial
//! coefficients outside the triangle are zero).

use statrs::function::gamma;

/// `log Γ(x)` for `x > 0`.
pub fn ln_gamma(x: f64) -> f64 {
    gamma::ln_gamma(x)
}

/// `log k!`.
pub fn ln_factorial(k: f64) -> f64 {
    if k < 2.0 {
        0.0
    } else {
        gamma::ln_gamma(k + 1.0)
    }
}

/// `log C(n, k)`; `-inf` when `k < 0` or `k > n`.
pub fn ln_binomial(n: f64, k: f64) -> f64 {
    if k < 0.0 || k > n {
        return f64::NEG_INFINITY;
    }
    ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)
}

/// `C(n, k)` as a float, evaluated through log-gamma.
pub fn binomial(n: u64, k: i64) -> f64 {
    if k < 0 || k as u64 > n {
        return 0.0;
    }
    let k = (k as u64).min(n - k as u64);
    // Exact integer arithmetic while C(n, k)·n fits in u128.
    if n <= 120 {
        let mut c: u128 = 1;
        for i in 0..k {
            c = c * (n - i) as u128 / (i + 1) as u128;
        }
        return c as f64;
    }
    ln_binomial(n as f64, k as f64).exp()
}

/// Complementary error function.
pub fn erfc(x: f64) -> f64 {
    libm::erfc(x)
}

/// Standard normal CDF, `Φ(t) = erfc(-t/√2)/2`.
pub fn std_normal_cdf(t: f64) -> f64 {
    0.5 * libm::erfc(-t / std::f64::consts::SQRT_2)
}

/// Upper tail `1 - Φ(t)` without cancellation for large `t`.
pub fn std_normal_sf(t: f64) -> f64 {
    0.5 * libm::erfc(t / std::f64::consts::SQRT_2)
}

/// Standard normal density `φ(u)`.
pub fn std_normal_pdf(u: f64) -> f64 {
    (-0.5 * u * u).exp() / (2.0 * std::f64::consts::PI).sqrt()
}

/// `-x log x` with the convention `0 log 0 = 0`.
pub fn xlogx_neg(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        -x * x.ln()
    }
}

/// `(1 - e^{-λ}) / λ`, stable for small λ.
pub fn one_minus_exp_over(lambda: f64) -> f64 {
    -(-lambda).exp_m1() / lambda
}
