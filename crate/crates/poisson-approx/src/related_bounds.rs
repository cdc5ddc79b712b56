//! Two-sided Hellinger and Bhattacharyya bounds in terms of total variation
//! and relative entropy, the total-variation lower bound on Chernoff
//! information, and their instantiations for a Bernoulli sum against
//! `Po(λ)`.

use serde::{Deserialize, Serialize};

use crate::divergences::{bhattacharyya, hellinger, kl, tv, MetricKind};
use crate::error::{invalid, Result};
use crate::kl_bounds::kl_upper_kontoyiannis;
use crate::pmf::{
    convolve_bernoulli_sum, poisson_pmf_upto, BernoulliSumSpec, PoissonSpec, SumMoments,
};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricBoundPair {
    pub lower: f64,
    pub upper: f64,
    pub kind: MetricKind,
}

/// `sqrt(1 - sqrt(1 - t²)) ≤ d_H ≤ sqrt(1 - exp(-D/2))`.
pub fn hellinger_bounds(d_tv: f64, kl: f64) -> MetricBoundPair {
    let t2 = (d_tv * d_tv).min(1.0);
    // 1 - sqrt(1 - t²) = t² / (1 + sqrt(1 - t²))
    let lower = (t2 / (1.0 + (1.0 - t2).sqrt())).sqrt();
    let upper = (-(-kl / 2.0).exp_m1()).sqrt();
    MetricBoundPair {
        lower,
        upper,
        kind: MetricKind::Hellinger,
    }
}

/// `exp(-D/2) ≤ BC ≤ sqrt(1 - t²)`.
pub fn bc_bounds(d_tv: f64, kl: f64) -> MetricBoundPair {
    let t2 = (d_tv * d_tv).min(1.0);
    MetricBoundPair {
        lower: (-kl / 2.0).exp(),
        upper: (1.0 - t2).sqrt(),
        kind: MetricKind::Bc,
    }
}

/// `C ≥ -½ log(1 - t²)`; `+inf` at `t = 1`.
pub fn chernoff_lower_from_tv(d_tv: f64) -> f64 {
    if d_tv >= 1.0 {
        return f64::INFINITY;
    }
    -0.5 * (-d_tv * d_tv).ln_1p()
}

fn poisson_inputs(m: &SumMoments, k1: f64) -> Result<(f64, f64)> {
    Ok((k1 * m.sum_p2, kl_upper_kontoyiannis(*m)?))
}

/// Hellinger bounds with `t = K1 Σ p_i²` and `D` the Kontoyiannis bound.
pub fn hellinger_bounds_poisson(m: impl Into<SumMoments>, k1: f64) -> Result<MetricBoundPair> {
    let (t, d) = poisson_inputs(&m.into(), k1)?;
    Ok(hellinger_bounds(t, d))
}

/// Bhattacharyya bounds with `t = K1 Σ p_i²` and `D` the Kontoyiannis bound.
pub fn bc_bounds_poisson(m: impl Into<SumMoments>, k1: f64) -> Result<MetricBoundPair> {
    let (t, d) = poisson_inputs(&m.into(), k1)?;
    Ok(bc_bounds(t, d))
}

/// `C(P_W, Po(λ)) ≥ -½ log(1 - K1² (Σ p_i²)²)`.
pub fn chernoff_lower_poisson(m: impl Into<SumMoments>, k1: f64) -> f64 {
    chernoff_lower_from_tv(k1 * m.into().sum_p2)
}

/// `C(P_W, Po(λ)) ≥ -½ log(1 - (1/1024) min(1, 1/λ²) (Σ p_i²)²)`.
pub fn chernoff_lower_poisson_loosened(m: impl Into<SumMoments>) -> f64 {
    let m = m.into();
    if m.sum_p2 == 0.0 {
        return 0.0;
    }
    let x = (1.0 / (m.lambda * m.lambda)).min(1.0) * m.sum_p2 * m.sum_p2 / 1024.0;
    -0.5 * (-x).ln_1p()
}

/// Exact metrics of `Bin(n, λ/n)` against `Po(λ)` over a list of `n`, with
/// least-squares log-log slopes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateReport {
    pub lambda: f64,
    pub n: Vec<usize>,
    pub kl: Vec<f64>,
    pub tv: Vec<f64>,
    pub hellinger: Vec<f64>,
    /// `1 - BC`, evaluated as `d_H²` to avoid cancellation.
    pub one_minus_bc: Vec<f64>,
    pub slope_kl: f64,
    pub slope_tv: f64,
    pub slope_hellinger: f64,
    pub slope_one_minus_bc: f64,
}

fn loglog_slope(xs: &[usize], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|&x| (x as f64).ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let k = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / k;
    let my = ly.iter().sum::<f64>() / k;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Computes the exact metrics for `p_i = λ/n` at each `n` and fits slopes.
pub fn asymptotic_rate_check(lambda: f64, n_list: &[usize]) -> Result<RateReport> {
    if n_list.len() < 2 {
        return Err(invalid("at least two sample sizes are needed for a slope"));
    }
    let mut report = RateReport {
        lambda,
        n: n_list.to_vec(),
        kl: vec![],
        tv: vec![],
        hellinger: vec![],
        one_minus_bc: vec![],
        slope_kl: 0.0,
        slope_tv: 0.0,
        slope_hellinger: 0.0,
        slope_one_minus_bc: 0.0,
    };
    for &n in n_list {
        if !(lambda / (n as f64) < 1.0) {
            return Err(invalid(format!(
                "lambda/n = {} must be below 1",
                lambda / n as f64
            )));
        }
        let p = convolve_bernoulli_sum(&BernoulliSumSpec::new(vec![lambda / n as f64; n])?);
        let q = poisson_pmf_upto(&PoissonSpec::new(lambda)?, n.max(64));
        let h = hellinger(&p, &q).value;
        report.kl.push(kl(&p, &q).value);
        report.tv.push(tv(&p, &q).value);
        report.hellinger.push(h);
        report.one_minus_bc.push(h * h);
        debug_assert!(((1.0 - bhattacharyya(&p, &q).value) - h * h).abs() < 1e-12);
    }
    report.slope_kl = loglog_slope(n_list, &report.kl);
    report.slope_tv = loglog_slope(n_list, &report.tv);
    report.slope_hellinger = loglog_slope(n_list, &report.hellinger);
    report.slope_one_minus_bc = loglog_slope(n_list, &report.one_minus_bc);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_pairs() {
        let h = hellinger_bounds(0.0, 0.0);
        assert_eq!((h.lower, h.upper), (0.0, 0.0));
        assert_eq!(hellinger_bounds(1.0, 5.0).lower, 1.0);
        let b = bc_bounds(0.0, 0.0);
        assert_eq!((b.lower, b.upper), (1.0, 1.0));
        assert_eq!(bc_bounds(0.3, f64::INFINITY).lower, 0.0);
    }

    #[test]
    fn chernoff_from_tv_values() {
        assert_eq!(chernoff_lower_from_tv(0.0), 0.0);
        assert!((chernoff_lower_from_tv(0.6) - 0.2231).abs() < 1e-4);
        assert_eq!(chernoff_lower_from_tv(1.0), f64::INFINITY);
    }

    #[test]
    fn refines_classical_inequalities() {
        for i in 0..=1000 {
            let t = i as f64 / 1000.0;
            assert!(hellinger_bounds(t, 0.0).lower >= t / 2f64.sqrt() - 1e-15);
            let d = 10.0 * t;
            assert!(hellinger_bounds(0.0, d).upper <= (d / 2.0).sqrt() + 1e-15);
        }
    }

    #[test]
    fn hellinger_pair_comparison_gives_log_form() {
        // lower ≤ upper  ⇔  D ≥ log(1/(1 - t²))
        for i in 1..100 {
            let t = i as f64 / 100.0;
            let d = crate::kl_bounds::kl_lower_log_form(t);
            let h = hellinger_bounds(t, d);
            assert!((h.lower - h.upper).abs() < 1e-12, "{t}");
        }
    }

    #[test]
    fn vanishing_spec_pairs() {
        let spec = BernoulliSumSpec::new(vec![1e-9; 4]).unwrap();
        let h = hellinger_bounds_poisson(&spec, 0.5).unwrap();
        assert!(h.lower < 1e-8 && h.upper < 1e-8);
        let b = bc_bounds_poisson(&spec, 0.5).unwrap();
        assert!((b.lower - 1.0).abs() < 1e-15 && (b.upper - 1.0).abs() < 1e-15);
        let zero = BernoulliSumSpec::new(vec![0.0; 2]).unwrap();
        assert_eq!(chernoff_lower_poisson(&zero, 0.5), 0.0);
        assert_eq!(chernoff_lower_poisson_loosened(&zero), 0.0);
    }

    #[test]
    fn slope_of_exact_power_law() {
        let xs = [10, 20, 40, 80];
        let ys: Vec<f64> = xs.iter().map(|&x| 3.0 * (x as f64).powf(-1.5)).collect();
        assert!((loglog_slope(&xs, &ys) + 1.5).abs() < 1e-12);
    }
}
