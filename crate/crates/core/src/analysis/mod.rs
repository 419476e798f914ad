//! Analytic upper bounds on `(1/n) ln R_gen` for random formulas of density
//! `alpha`. A negative value means the generic rank is exponentially small,
//! so random formulas at that density are unsatisfiable with high
//! probability.

mod nosegay;
pub mod quadrature;
mod sunflower;

pub use nosegay::{
    nosegay_bound, nosegay_bound_with, nosegay_mu, nosegay_nu0, nosegay_ode, NosegayWeights,
    OdeState, DEFAULT_QUADRATURE_POINTS, DEFAULT_TRUNCATION,
};
pub use sunflower::{
    adaptive_d_max, degree_density_estimate, degree_density_incomplete_gamma, ln_lower_gamma,
    sunflower_bound, sunflower_bound_with, sunflower_degree_density, sunflower_weight,
    DEFAULT_D_MAX, DEFAULT_MAX_PANELS,
};

use std::f64::consts::LN_2;

use serde::Serialize;

use crate::{Error, Execution, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundMethod {
    SingleClause,
    Sunflower,
    Nosegay,
    GeneralK,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "unsat-whp")]
    UnsatWhp,
    #[serde(rename = "inconclusive")]
    Inconclusive,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct BoundParams {
    pub d_max: Option<usize>,
    pub poisson_truncation: Option<usize>,
    pub quadrature_points: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub method: BoundMethod,
    pub alpha: f64,
    pub k: usize,
    pub params: BoundParams,
    /// Nats per qubit.
    pub value: f64,
    pub verdict: Verdict,
    /// Richardson estimate of the quadrature error in `value`.
    pub quadrature_error: Option<f64>,
    /// Probability mass of the gadget parameters dropped by truncation.
    pub tail_mass: Option<f64>,
}

impl BoundReport {
    pub fn new(
        method: BoundMethod,
        alpha: f64,
        k: usize,
        params: BoundParams,
        value: f64,
        quadrature_error: Option<f64>,
        tail_mass: Option<f64>,
    ) -> Self {
        let verdict = if value < 0.0 {
            Verdict::UnsatWhp
        } else {
            Verdict::Inconclusive
        };
        Self {
            method,
            alpha,
            k,
            params,
            value,
            verdict,
            quadrature_error,
            tail_mass,
        }
    }
}

fn check(alpha: f64, k: usize) -> Result<()> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "alpha must be positive, got {alpha}"
        )));
    }
    if !(2..=62).contains(&k) {
        return Err(Error::InvalidParameter(format!(
            "arity must lie in 2..=62, got {k}"
        )));
    }
    Ok(())
}

/// `ln 2 + alpha ln(1 - 2^-k)`: every clause as its own gadget.
pub fn single_clause_bound(alpha: f64, k: usize) -> Result<BoundReport> {
    check(alpha, k)?;
    let value = LN_2 + alpha * (-(0.5f64.powi(k as i32))).ln_1p();
    Ok(BoundReport::new(
        BoundMethod::SingleClause,
        alpha,
        k,
        BoundParams::default(),
        value,
        None,
        None,
    ))
}

/// Density above which the single-clause bound is negative:
/// `ln 2 / -ln(1 - 2^-k)`.
pub fn single_clause_threshold(k: usize) -> Result<f64> {
    check(1.0, k)?;
    Ok(LN_2 / -(-(0.5f64.powi(k as i32))).ln_1p())
}

/// `ln 2 + alpha ln(1 - 2^(1-k)) + ln(alpha / (2^k - 2) + 1)`: the sunflower
/// bound with the mean log-degree term relaxed by Jensen's inequality.
pub fn general_k_bound(alpha: f64, k: usize) -> Result<BoundReport> {
    check(alpha, k)?;
    let value = LN_2
        + alpha * (-(0.5f64.powi(k as i32 - 1))).ln_1p()
        + (alpha / ((1u64 << k) - 2) as f64).ln_1p();
    Ok(BoundReport::new(
        BoundMethod::GeneralK,
        alpha,
        k,
        BoundParams::default(),
        value,
        None,
        None,
    ))
}

/// The positive root of `ln 2 - 2b + ln(b + 1) = 0`, by bisection on `(0, 2)`.
pub fn solve_b() -> f64 {
    let f = |b: f64| LN_2 - 2.0 * b + b.ln_1p();
    let (mut lo, mut hi) = (0.0, 2.0);
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RootMethod {
    Sunflower,
    Nosegay,
    GeneralK,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RootParams {
    /// Bracket; defaults to `[1e-3, single_clause_threshold(k)]`.
    pub lo: Option<f64>,
    pub hi: Option<f64>,
    pub tolerance: f64,
    /// Sunflower degree cutoff; `None` picks [`adaptive_d_max`] at each alpha.
    pub d_max: Option<usize>,
    pub truncation: usize,
    pub quadrature_points: usize,
}

impl Default for RootParams {
    fn default() -> Self {
        Self {
            lo: None,
            hi: None,
            tolerance: 1e-4,
            d_max: None,
            truncation: DEFAULT_TRUNCATION,
            quadrature_points: DEFAULT_QUADRATURE_POINTS,
        }
    }
}

/// Density where the selected bound changes sign, by bisection.
pub fn threshold_root(method: RootMethod, k: usize, params: &RootParams) -> Result<f64> {
    let exec = Execution::default();
    let lo = params.lo.unwrap_or(1e-3);
    let hi = match params.hi {
        Some(hi) => hi,
        None => single_clause_threshold(k)?,
    };
    if !(lo > 0.0 && hi > lo) {
        return Err(Error::InvalidParameter(format!(
            "invalid bracket [{lo}, {hi}]"
        )));
    }
    let weights = match method {
        RootMethod::Nosegay if k != 3 => {
            return Err(Error::InvalidParameter(
                "the nosegay bound is for k = 3".into(),
            ))
        }
        RootMethod::Nosegay => Some(NosegayWeights::new(params.truncation, exec)),
        _ => None,
    };
    let bound = |alpha: f64| -> Result<f64> {
        Ok(match method {
            RootMethod::Sunflower => {
                let d_max = params.d_max.unwrap_or_else(|| adaptive_d_max(alpha, k));
                sunflower_bound_with(alpha, k, d_max, DEFAULT_MAX_PANELS, exec)?.value
            }
            RootMethod::Nosegay => {
                let w = weights.as_ref().expect("built above");
                nosegay_bound_with(alpha, w, params.quadrature_points, exec)?.value
            }
            RootMethod::GeneralK => general_k_bound(alpha, k)?.value,
        })
    };
    if bound(hi)? >= 0.0 || bound(lo)? < 0.0 {
        return Err(Error::NoSignChange { lo, hi });
    }
    let (mut lo, mut hi) = (lo, hi);
    while hi - lo > params.tolerance {
        let mid = 0.5 * (lo + hi);
        if bound(mid)? < 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
