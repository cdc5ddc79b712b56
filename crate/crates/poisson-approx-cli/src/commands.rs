use anyhow::{bail, Result};

use poisson_approx::applications::{
    bayes_plan, chernoff_stein_plan, gaussian_ma_entropy_report, gaussian_ma_model,
    random_graph_entropy_report, EntropyTableRow, GaussianMaCase, RandomGraphCase,
};
use poisson_approx::chen_stein::{
    compute_b123, tv_lower_barbour_hall, tv_upper_agg, tv_upper_barbour_hall,
    tv_upper_cekanavicius_roos, tv_upper_lecam, DependencyModel,
};
use poisson_approx::divergences::{kl, tv};
use poisson_approx::entropy_bounds::{
    entropy_error_independent, entropy_error_independent_improved, entropy_error_poisson,
    poisson_entropy, EntropyErrorBound,
};
use poisson_approx::kl_bounds::{
    kl_lower_improved, kl_lower_loosened, kl_upper_kontoyiannis, K2Coefficient,
};
use poisson_approx::pmf::{
    convolve_bernoulli_sum, poisson_pmf_truncated, BernoulliSumSpec, FinitePmf, PoissonSpec,
};
use poisson_approx::related_bounds::{chernoff_lower_poisson, chernoff_lower_poisson_loosened};
use poisson_approx::report::{BoundKind, BoundReport};
use poisson_approx::special::one_minus_exp_over;
use poisson_approx::tv_lower_improved::{
    k1_optimize, k1_tilde, k1_tilde_theta, tv_lower_improved, GridSchedule,
};

use crate::cli::PlanMode;
use crate::input::SpecInput;

/// Largest n for which the exact law is convolved and compared.
pub const ORACLE_MAX_N: usize = 20;

const ORACLE_TAIL_EPS: f64 = 1e-16;

fn report(name: &str, value: f64, kind: BoundKind, provenance: &str) -> Result<BoundReport> {
    Ok(BoundReport::new(name, value, kind, provenance)?)
}

/// Attaches the spec's parameters to every report.
fn with_spec(reports: Vec<BoundReport>, input: &SpecInput) -> Vec<BoundReport> {
    let spec = &input.spec;
    reports
        .into_iter()
        .map(|r| {
            r.with("spec", input.label.as_str())
                .with("n", spec.len())
                .with("lambda", spec.lambda())
                .with("sum_p2", spec.sum_sq())
        })
        .collect()
}

fn oracle_pair(spec: &BernoulliSumSpec) -> Result<Option<(FinitePmf, FinitePmf)>> {
    if spec.len() > ORACLE_MAX_N {
        return Ok(None);
    }
    let q = poisson_pmf_truncated(&PoissonSpec::new(spec.lambda())?, ORACLE_TAIL_EPS)?;
    Ok(Some((convolve_bernoulli_sum(spec), q)))
}

pub fn tv_bounds(input: &SpecInput, schedule: &GridSchedule) -> Result<Vec<BoundReport>> {
    let spec = &input.spec;
    let lambda = spec.lambda();
    let k1 = k1_optimize(lambda, schedule);
    let mut out = vec![
        report(
            "tv_lower",
            tv_lower_barbour_hall(spec),
            BoundKind::Lower,
            "barbour-hall",
        )?,
        report(
            "tv_lower",
            tv_lower_improved(spec, k1.k1),
            BoundKind::Lower,
            "improved-k1",
        )?
        .with("k1", k1.k1),
        report(
            "tv_upper",
            tv_upper_barbour_hall(spec),
            BoundKind::Upper,
            "barbour-hall",
        )?,
        report("tv_upper", tv_upper_lecam(spec), BoundKind::Upper, "le-cam")?,
        report(
            "tv_upper",
            tv_upper_cekanavicius_roos(spec)?,
            BoundKind::Upper,
            "cekanavicius-roos",
        )?
        .with("theta_r", spec.moments().theta_r()),
    ];
    if let Some((p, q)) = oracle_pair(spec)? {
        out.push(report("tv", tv(&p, &q).value, BoundKind::Exact, "oracle")?);
    }
    Ok(with_spec(out, input))
}

pub fn kl_bounds(input: &SpecInput, schedule: &GridSchedule) -> Result<Vec<BoundReport>> {
    let spec = &input.spec;
    let lambda = spec.lambda();
    let k1 = k1_optimize(lambda, schedule).k1;
    let k2 = K2Coefficient::new(lambda, k1);
    let mut out = vec![
        report(
            "kl_lower",
            kl_lower_loosened(spec),
            BoundKind::Lower,
            "loosened-1/512",
        )?,
        report(
            "kl_lower",
            kl_lower_improved(spec, k1),
            BoundKind::Lower,
            "refined-pinsker-k2",
        )?
        .with("k1", k1)
        .with("k2", k2.k2)
        .with("m_lambda", k2.m_lambda),
        report(
            "kl_upper",
            kl_upper_kontoyiannis(spec)?,
            BoundKind::Upper,
            "third-moment",
        )?,
    ];
    if let Some((p, q)) = oracle_pair(spec)? {
        out.push(report("kl", kl(&p, &q).value, BoundKind::Exact, "oracle")?);
    }
    Ok(with_spec(out, input))
}

pub fn k1(lambda: f64, closed_form: bool, schedule: &GridSchedule) -> Result<Vec<BoundReport>> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        bail!(poisson_approx::Error::InvalidInput(format!(
            "lambda {lambda} must be positive"
        )));
    }
    let upper = one_minus_exp_over(lambda);
    let tilde = k1_tilde(lambda);
    let mut out = vec![report("k1", tilde, BoundKind::Lower, "closed-form")?
        .with("alpha1", lambda)
        .with("alpha2", lambda)
        .with("theta_s", k1_tilde_theta(lambda))
        .with("ratio_to_upper", upper / tilde)];
    if !closed_form {
        let r = k1_optimize(lambda, schedule);
        out.push(
            report("k1", r.k1, BoundKind::Lower, "grid-search")?
                .with("alpha1", r.argmax.alpha1)
                .with("alpha2", r.argmax.alpha2)
                .with("theta_s", r.argmax.theta_s)
                .with("ratio_to_upper", upper / r.k1)
                .with("iterations", r.iterations)
                .with("evaluations", r.evaluations),
        );
    }
    Ok(out.into_iter().map(|r| r.with("lambda", lambda)).collect())
}

fn entropy_bound_report(b: &EntropyErrorBound, provenance: &str) -> Result<BoundReport> {
    Ok(
        report("entropy_error", b.bound, BoundKind::Upper, provenance)?
            .with("eta", b.eta)
            .with("big_m", b.big_m)
            .with("mu", b.mu.value)
            .with("log_mu", b.mu.log_value),
    )
}

pub fn entropy_bounds_spec(input: &SpecInput) -> Result<Vec<BoundReport>> {
    let spec = &input.spec;
    let h = poisson_entropy(spec.lambda())?;
    let mut out = vec![
        report("poisson_entropy", h, BoundKind::Approx, "poisson-entropy")?,
        entropy_bound_report(&entropy_error_independent(spec)?, "entropy-basic")?,
        entropy_bound_report(
            &entropy_error_independent_improved(spec)?,
            "entropy-theta-r",
        )?,
    ];
    if spec.len() <= ORACLE_MAX_N {
        let hw = convolve_bernoulli_sum(spec).entropy();
        out.push(report("entropy", hw, BoundKind::Exact, "oracle")?);
        out.push(report(
            "entropy_gap",
            (h - hw).abs(),
            BoundKind::Exact,
            "oracle",
        )?);
    }
    Ok(with_spec(out, input))
}

pub fn entropy_bounds_model(model: &DependencyModel) -> Result<Vec<BoundReport>> {
    let c = compute_b123(model)?;
    let h = poisson_entropy(c.lambda)?;
    let b = entropy_error_poisson(model)?;
    let out = vec![
        report("poisson_entropy", h, BoundKind::Approx, "poisson-entropy")?,
        report("tv_upper", tv_upper_agg(&c), BoundKind::Upper, "chen-stein")?,
        entropy_bound_report(&b, "entropy-chen-stein")?,
    ];
    Ok(out
        .into_iter()
        .map(|r| {
            r.with("n", model.len())
                .with("lambda", c.lambda)
                .with("b1", c.b1)
                .with("b2", c.b2)
                .with("b3", c.b3)
        })
        .collect())
}

fn table_row_reports(row: &EntropyTableRow) -> Result<Vec<BoundReport>> {
    Ok(vec![
        report("lambda", row.lambda, BoundKind::Exact, "mean")?,
        report(
            "poisson_entropy",
            row.entropy,
            BoundKind::Approx,
            "poisson-entropy",
        )?,
        entropy_bound_report(&row.error, "entropy-chen-stein")?,
        report(
            "max_rel_error",
            row.max_rel_error,
            BoundKind::Upper,
            "entropy-chen-stein",
        )?,
    ])
}

pub fn example_random_graph(n: u32, k: u32) -> Result<Vec<BoundReport>> {
    let row = random_graph_entropy_report(RandomGraphCase { n, k })?;
    Ok(table_row_reports(&row)?
        .into_iter()
        .map(|r| {
            r.with("example", "random-graph")
                .with("n", n as usize)
                .with("k", k as usize)
        })
        .collect())
}

pub fn example_gaussian(n: f64, theta: f64, t: f64) -> Result<Vec<BoundReport>> {
    let case = GaussianMaCase {
        n,
        theta_ma: theta,
        t,
    };
    let model = gaussian_ma_model(case)?;
    let row = gaussian_ma_entropy_report(case)?;
    let mut out = vec![
        report("b1", model.b1_bound, BoundKind::Upper, "moving-average")?,
        report("b2", model.b2_bound, BoundKind::Upper, "moving-average")?,
    ];
    out.extend(table_row_reports(&row)?);
    Ok(out
        .into_iter()
        .map(|r| {
            r.with("example", "gaussian")
                .with("n", n)
                .with("theta", theta)
                .with("t", t)
                .with("rho", model.rho)
        })
        .collect())
}

fn plan_reports(
    mode: PlanMode,
    exponent: f64,
    epsilon: f64,
    provenance: &str,
) -> Result<Vec<BoundReport>> {
    let (plan, name, how) = match mode {
        PlanMode::Stein => (
            chernoff_stein_plan(exponent, epsilon)?,
            "kl_lower",
            "chernoff-stein",
        ),
        PlanMode::Bayes => (
            bayes_plan(exponent, epsilon)?,
            "chernoff_lower",
            "bayes-chernoff",
        ),
    };
    Ok(vec![
        report(name, exponent, BoundKind::Lower, provenance)?,
        report("n_required", plan.n_required as f64, BoundKind::Upper, how)?
            .with("exponent_from", provenance),
    ])
}

pub fn plan_direct(mode: PlanMode, exponent: f64, epsilon: f64) -> Result<Vec<BoundReport>> {
    Ok(plan_reports(mode, exponent, epsilon, "given")?
        .into_iter()
        .map(|r| r.with("epsilon", epsilon))
        .collect())
}

pub fn plan_spec(
    mode: PlanMode,
    epsilon: f64,
    input: &SpecInput,
    schedule: &GridSchedule,
) -> Result<Vec<BoundReport>> {
    let spec = &input.spec;
    let k1 = k1_optimize(spec.lambda(), schedule).k1;
    let (improved, loosened) = match mode {
        PlanMode::Stein => (kl_lower_improved(spec, k1), kl_lower_loosened(spec)),
        PlanMode::Bayes => (
            chernoff_lower_poisson(spec, k1),
            chernoff_lower_poisson_loosened(spec),
        ),
    };
    let (p_improved, p_loosened) = match mode {
        PlanMode::Stein => ("refined-pinsker-k2", "loosened-1/512"),
        PlanMode::Bayes => ("improved-k1", "loosened-1/1024"),
    };
    let mut out = plan_reports(mode, improved, epsilon, p_improved)?;
    out.extend(plan_reports(mode, loosened, epsilon, p_loosened)?);
    Ok(with_spec(out, input)
        .into_iter()
        .map(|r| r.with("epsilon", epsilon).with("k1", k1))
        .collect())
}
