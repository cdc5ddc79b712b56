use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::Deserialize;

use poisson_approx::applications::{p_profile_geometric, p_profile_linear};
use poisson_approx::chen_stein::DependencyModel;
use poisson_approx::pmf::BernoulliSumSpec;
use poisson_approx::tv_lower_improved::GridSchedule;

use crate::cli::{ProfileKind, ScheduleArgs, SpecArgs};

/// Where the spec came from, recorded in report context.
pub struct SpecInput {
    pub spec: BernoulliSumSpec,
    pub label: String,
}

pub fn spec(args: &SpecArgs) -> Result<SpecInput> {
    if let Some(p) = &args.p {
        if args.n.is_some() || args.lambda.is_some() || args.alpha.is_some() {
            bail!("--n, --lambda and --alpha only apply with --profile");
        }
        return Ok(SpecInput {
            spec: BernoulliSumSpec::new(p.clone())?,
            label: "list".into(),
        });
    }
    let Some(profile) = args.profile else {
        bail!("give either --p or --profile");
    };
    let (n, lambda) = (args.n.unwrap_or(0), args.lambda.unwrap_or(0.0));
    match profile {
        ProfileKind::Linear => {
            if args.alpha.is_some() {
                bail!("--alpha only applies to the geometric profile");
            }
            Ok(SpecInput {
                spec: p_profile_linear(n, lambda)?,
                label: "linear".into(),
            })
        }
        ProfileKind::Geometric => {
            let Some(alpha) = args.alpha else {
                bail!("the geometric profile needs --alpha");
            };
            Ok(SpecInput {
                spec: p_profile_geometric(n, lambda, alpha)?,
                label: format!("geometric(alpha={alpha})"),
            })
        }
    }
}

pub fn schedule(args: &ScheduleArgs) -> Result<GridSchedule> {
    let Some(path) = &args.schedule else {
        return Ok(GridSchedule::default());
    };
    let schedule: GridSchedule = parse_toml(path)?;
    schedule.validate()?;
    Ok(schedule)
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelFile {
    p: Vec<f64>,
    neighbors: Vec<Vec<usize>>,
    #[serde(default)]
    s: Option<Vec<f64>>,
    #[serde(default)]
    pair: Vec<PairMoment>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PairMoment {
    alpha: usize,
    beta: usize,
    moment: f64,
}

pub fn model(path: &Path) -> Result<DependencyModel> {
    let file: ModelFile = parse_toml(path)?;
    let s = file.s.unwrap_or_else(|| vec![0.0; file.p.len()]);
    let mut pairs = BTreeMap::new();
    for pm in file.pair {
        if pairs.insert((pm.alpha, pm.beta), pm.moment).is_some() {
            bail!("pair ({}, {}) is listed twice", pm.alpha, pm.beta);
        }
    }
    Ok(DependencyModel::new(file.p, file.neighbors, pairs, s)?)
}

fn parse_toml<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}
