use anyhow::Result;

use poisson_approx::applications::{
    gaussian_ma_entropy_report, gaussian_ma_model, random_graph_entropy_report, GaussianMaCase,
    RandomGraphCase, MOVING_AVERAGE_TABLE, RANDOM_GRAPH_TABLE,
};
use poisson_approx::divergences::kl;
use poisson_approx::kl_bounds::{kl_lower_improved, kl_lower_loosened, kl_upper_kontoyiannis};
use poisson_approx::pmf::{
    convolve_bernoulli_sum, poisson_pmf_upto, BernoulliSumSpec, PoissonSpec,
};
use poisson_approx::report::ContextValue;
use poisson_approx::special::one_minus_exp_over;
use poisson_approx::tv_lower_improved::{
    k1_optimize, k1_optimize_equal_alphas, k1_tilde, GridSchedule,
};

use crate::cli::TableKind;

/// Grid of the TV ratio figure.
pub const RATIO_GRID: (f64, f64, usize) = (1e-3, 1e3, 31);
/// Grid and sample count of the binomial relative entropy figure.
pub const BINOMIAL_GRID: (f64, f64, usize) = (1e-2, 50.0, 31);
pub const BINOMIAL_N: usize = 1000;

/// A wide table: one row per case, cells in column order.
#[derive(Debug, Clone)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<ContextValue>>,
}

fn log_grid((lo, hi, points): (f64, f64, usize)) -> Vec<f64> {
    (0..points)
        .map(|i| (lo.ln() + (hi / lo).ln() * i as f64 / (points - 1) as f64).exp())
        .collect()
}

pub fn build(which: TableKind, schedule: &GridSchedule) -> Result<Table> {
    match which {
        TableKind::RandomGraph => random_graph(),
        TableKind::MovingAverage => moving_average(),
        TableKind::TvRatios => Ok(tv_ratios(schedule)),
        TableKind::BinomialKl => binomial_kl(schedule),
    }
}

fn random_graph() -> Result<Table> {
    let mut rows = Vec::new();
    for &(n, k) in &RANDOM_GRAPH_TABLE {
        let r = random_graph_entropy_report(RandomGraphCase { n, k })?;
        rows.push(vec![
            (n as usize).into(),
            (k as usize).into(),
            r.lambda.into(),
            r.entropy.into(),
            r.error.eta.into(),
            r.error.bound.into(),
            r.max_rel_error.into(),
        ]);
    }
    Ok(Table {
        columns: vec![
            "n",
            "k",
            "lambda",
            "entropy_nats",
            "eta",
            "entropy_error",
            "max_rel_error",
        ],
        rows,
    })
}

fn moving_average() -> Result<Table> {
    let mut rows = Vec::new();
    for &(n, theta_ma, t) in &MOVING_AVERAGE_TABLE {
        let case = GaussianMaCase { n, theta_ma, t };
        let m = gaussian_ma_model(case)?;
        let r = gaussian_ma_entropy_report(case)?;
        rows.push(vec![
            n.into(),
            theta_ma.into(),
            t.into(),
            r.lambda.into(),
            r.entropy.into(),
            m.b1_bound.into(),
            m.b2_bound.into(),
            r.error.eta.into(),
            r.error.bound.into(),
            r.max_rel_error.into(),
        ]);
    }
    Ok(Table {
        columns: vec![
            "n",
            "theta",
            "t",
            "lambda",
            "entropy_nats",
            "b1",
            "b2",
            "eta",
            "entropy_error",
            "max_rel_error",
        ],
        rows,
    })
}

/// Ratios of the upper TV bound to each lower bound; the sum of squares
/// cancels, so they depend on λ alone.
fn tv_ratios(schedule: &GridSchedule) -> Table {
    let rows = log_grid(RATIO_GRID)
        .into_iter()
        .map(|lambda| {
            let upper = one_minus_exp_over(lambda);
            let original = 32.0 * (1.0 - (-lambda).exp()) / lambda.min(1.0);
            vec![
                lambda.into(),
                original.into(),
                (upper / k1_optimize(lambda, schedule).k1).into(),
                (upper / k1_optimize_equal_alphas(lambda, schedule).k1).into(),
                (upper / k1_tilde(lambda)).into(),
            ]
        })
        .collect();
    Table {
        columns: vec![
            "lambda",
            "ratio_original",
            "ratio_k1",
            "ratio_k1_equal_alphas",
            "ratio_k1_tilde",
        ],
        rows,
    }
}

/// `n² D(Bin(n, λ/n) || Po(λ))` with its bounds, all scaled by `n²`.
fn binomial_kl(schedule: &GridSchedule) -> Result<Table> {
    let n = BINOMIAL_N;
    let scale = (n * n) as f64;
    let mut rows = Vec::new();
    for lambda in log_grid(BINOMIAL_GRID) {
        let spec = BernoulliSumSpec::new(vec![lambda / n as f64; n])?;
        let exact = kl(
            &convolve_bernoulli_sum(&spec),
            &poisson_pmf_upto(&PoissonSpec::new(lambda)?, n),
        )
        .value;
        let k1 = k1_optimize(lambda, schedule).k1;
        let s2 = spec.sum_sq();
        // Pinsker applied to the improved TV bound, without the refinement.
        let pinsker_only = 2.0 * (k1 * s2).powi(2);
        rows.push(vec![
            lambda.into(),
            (scale * exact).into(),
            (scale * kl_upper_kontoyiannis(&spec)?).into(),
            (lambda * lambda / 4.0).into(),
            (scale * kl_lower_improved(&spec, k1)).into(),
            (scale * pinsker_only).into(),
            (scale * kl_lower_loosened(&spec)).into(),
        ]);
    }
    Ok(Table {
        columns: vec![
            "lambda",
            "exact",
            "upper",
            "asymptotic",
            "lower_improved",
            "lower_pinsker",
            "lower_loosened",
        ],
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use poisson_approx::chen_stein::{tv_lower_barbour_hall, tv_upper_barbour_hall};

    #[test]
    fn original_ratio_matches_the_bound_pair() {
        let spec = BernoulliSumSpec::new(vec![0.01; 300]).unwrap();
        let lambda = spec.lambda();
        let want = tv_upper_barbour_hall(&spec) / tv_lower_barbour_hall(&spec);
        let got = 32.0 * (1.0 - (-lambda).exp()) / lambda.min(1.0);
        assert!((got / want - 1.0).abs() < 1e-12);
    }

    #[test]
    fn grids_hit_their_endpoints() {
        let g = log_grid(RATIO_GRID);
        assert_eq!(g.len(), 31);
        assert!((g[0] - 1e-3).abs() < 1e-15 && (g[30] / 1e3 - 1.0).abs() < 1e-12);
    }
}
