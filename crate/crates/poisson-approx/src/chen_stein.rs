//! Chen-Stein coefficients and the classical total variation bounds.
//!
//! Total variation follows the one-half-L1 normalization used everywhere in
//! this crate.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{inapplicable, invalid, Error, Result};
use crate::pmf::SumMoments;
use crate::special::one_minus_exp_over;

/// Index set with dependency neighborhoods and the moments feeding b1, b2, b3.
#[derive(Debug, Clone, PartialEq)]
pub struct DependencyModel {
    p: Vec<f64>,
    neighborhoods: Vec<Vec<usize>>,
    pair_moments: BTreeMap<(usize, usize), f64>,
    s: Vec<f64>,
}

impl DependencyModel {
    /// `neighborhoods[α]` must contain `α`. `pair_moments[(α, β)]` is
    /// `E[X_α X_β]` and is looked up for every `β ∈ B_α \ {α}` when the
    /// coefficients are computed. `s` defaults to zeros when empty.
    pub fn new(
        p: Vec<f64>,
        neighborhoods: Vec<Vec<usize>>,
        pair_moments: BTreeMap<(usize, usize), f64>,
        s: Vec<f64>,
    ) -> Result<Self> {
        let n = p.len();
        if let Some((a, &bad)) = p.iter().enumerate().find(|(_, &q)| !(q > 0.0 && q <= 1.0)) {
            return Err(invalid(format!("p[{a}] = {bad} outside (0, 1]")));
        }
        if neighborhoods.len() != n {
            return Err(invalid(format!(
                "{} neighborhoods for {n} indices",
                neighborhoods.len()
            )));
        }
        for (a, nb) in neighborhoods.iter().enumerate() {
            if !nb.contains(&a) {
                return Err(invalid(format!("neighborhood of {a} does not contain {a}")));
            }
            if let Some(&b) = nb.iter().find(|&&b| b >= n) {
                return Err(invalid(format!("neighbor {b} of {a} is out of range")));
            }
        }
        for (&(a, b), &m) in &pair_moments {
            if a >= n || b >= n {
                return Err(invalid(format!("pair moment ({a}, {b}) is out of range")));
            }
            if !(m >= 0.0 && m <= p[a].min(p[b])) {
                return Err(invalid(format!(
                    "pair moment ({a}, {b}) = {m} outside [0, min(p)]"
                )));
            }
        }
        let s = if s.is_empty() { vec![0.0; n] } else { s };
        if s.len() != n {
            return Err(invalid(format!("{} s-values for {n} indices", s.len())));
        }
        if let Some(bad) = s.iter().find(|&&v| !(v >= 0.0)) {
            return Err(invalid(format!("s-value {bad} is negative")));
        }
        Ok(Self {
            p,
            neighborhoods,
            pair_moments,
            s,
        })
    }

    /// Independent summands: `B_α = {α}`.
    pub fn independent(p: Vec<f64>) -> Result<Self> {
        let neighborhoods = (0..p.len()).map(|a| vec![a]).collect();
        Self::new(p, neighborhoods, BTreeMap::new(), Vec::new())
    }

    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }

    pub fn p(&self) -> &[f64] {
        &self.p
    }

    pub fn neighborhoods(&self) -> &[Vec<usize>] {
        &self.neighborhoods
    }

    pub fn pair_moments(&self) -> &BTreeMap<(usize, usize), f64> {
        &self.pair_moments
    }

    pub fn s(&self) -> &[f64] {
        &self.s
    }

    pub fn lambda(&self) -> f64 {
        self.p.iter().sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChenSteinCoefficients {
    pub b1: f64,
    pub b2: f64,
    pub b3: f64,
    pub lambda: f64,
}

/// `b1 = Σ_α Σ_{β∈B_α} p_α p_β`, `b2 = Σ_α Σ_{β∈B_α\{α}} p_{αβ}`,
/// `b3 = Σ_α s_α`.
///
/// ```
/// use poisson_approx::chen_stein::{compute_b123, DependencyModel};
///
/// let c = compute_b123(&DependencyModel::independent(vec![0.3]).unwrap()).unwrap();
/// assert!((c.b1 - 0.09).abs() < 1e-15);
/// assert_eq!((c.b2, c.b3), (0.0, 0.0));
/// ```
pub fn compute_b123(model: &DependencyModel) -> Result<ChenSteinCoefficients> {
    let mut b1 = 0.0;
    let mut b2 = 0.0;
    for (a, nb) in model.neighborhoods.iter().enumerate() {
        for &b in nb {
            b1 += model.p[a] * model.p[b];
            if b != a {
                b2 += model
                    .pair_moments
                    .get(&(a, b))
                    .ok_or(Error::MissingPairMoment { alpha: a, beta: b })?;
            }
        }
    }
    Ok(ChenSteinCoefficients {
        b1,
        b2,
        b3: model.s.iter().sum(),
        lambda: model.lambda(),
    })
}

/// `(b1 + b2)(1 - e^{-λ})/λ + b3 min(1, 1.4/√λ)`.
pub fn tv_upper_agg(c: &ChenSteinCoefficients) -> f64 {
    if c.b1 + c.b2 + c.b3 == 0.0 {
        return 0.0;
    }
    (c.b1 + c.b2) * one_minus_exp_over(c.lambda) + c.b3 * (1.4 / c.lambda.sqrt()).min(1.0)
}

/// `((1 - e^{-λ})/λ) Σ p_i²`.
pub fn tv_upper_barbour_hall(m: impl Into<SumMoments>) -> f64 {
    let m = m.into();
    if m.sum_p2 == 0.0 {
        return 0.0;
    }
    one_minus_exp_over(m.lambda) * m.sum_p2
}

/// `(1/32) min(1, 1/λ) Σ p_i²`.
pub fn tv_lower_barbour_hall(m: impl Into<SumMoments>) -> f64 {
    let m = m.into();
    if m.sum_p2 == 0.0 {
        return 0.0;
    }
    (1.0 / m.lambda).min(1.0) * m.sum_p2 / 32.0
}

/// Le Cam: `Σ p_i²`.
pub fn tv_upper_lecam(m: impl Into<SumMoments>) -> f64 {
    m.into().sum_p2
}

/// `3θ_r / (4e (1 - √θ_r)^{3/2})` with `θ_r = Σ p_i² / λ`; inapplicable for
/// `θ_r ≥ 1`.
pub fn tv_upper_cekanavicius_roos(m: impl Into<SumMoments>) -> Result<f64> {
    let m = m.into();
    if m.sum_p2 == 0.0 {
        return Ok(0.0);
    }
    let t = m.theta_r();
    if !(t < 1.0) {
        return Err(inapplicable(format!("theta_r = {t} must be below 1")));
    }
    Ok(t * cekanavicius_roos_factor(t))
}

/// `3/(4e(1 - √θ_r)^{3/2})`.
pub(crate) fn cekanavicius_roos_factor(theta_r: f64) -> f64 {
    3.0 / (4.0 * std::f64::consts::E * (1.0 - theta_r.sqrt()).powf(1.5))
}
