//! Fluid limit of the nosegay peel and the resulting bound.
//!
//! With `nu` the fraction of vertices left and `mu` the remaining edges per
//! original vertex, each step removes 3 vertices, the central edge, and on
//! average `9 mu / nu` further edges, giving
//!
//! `d mu / d nu = 1/3 + 3 mu / nu`, `mu(1) = alpha`,
//!
//! solved by `mu(nu) = (nu / 6) ((6 alpha + 1) nu^2 - 1)`, which vanishes at
//! `nu_0 = 1 / sqrt(6 alpha + 1)`. Along the way the hanging-edge counts at the
//! three centers are independent Poisson variables with mean `3 mu / nu`.

use serde::Serialize;

use super::quadrature::{ln_factorials, poisson_pmf, simpson_with_error};
use super::{BoundMethod, BoundParams, BoundReport};
use crate::gadgets::nosegay3_rank;
use crate::{Error, Execution, Result};

pub const DEFAULT_TRUNCATION: usize = 50;
pub const DEFAULT_QUADRATURE_POINTS: usize = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct OdeState {
    pub nu: f64,
    pub mu: f64,
    pub nu0: f64,
}

/// Vertex fraction at which the nosegay peel runs out of edges.
pub fn nosegay_nu0(alpha: f64) -> f64 {
    1.0 / (6.0 * alpha + 1.0).sqrt()
}

/// `mu(nu)` without range checks; negative below `nu_0`.
pub fn nosegay_mu(alpha: f64, nu: f64) -> f64 {
    nu / 6.0 * ((6.0 * alpha + 1.0) * nu * nu - 1.0)
}

pub fn nosegay_ode(alpha: f64, nu: f64) -> Result<OdeState> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "alpha must be positive, got {alpha}"
        )));
    }
    let nu0 = nosegay_nu0(alpha);
    // Allow rounding slack at the lower end so that nu0 itself is accepted.
    if !(nu >= nu0 * (1.0 - 1e-12) && nu <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "nu = {nu} lies outside [{nu0}, 1]"
        )));
    }
    Ok(OdeState {
        nu,
        mu: nosegay_mu(alpha, nu).max(0.0),
        nu0,
    })
}

/// `ln R_(a,b,c) - (3 + 2(a+b+c)) ln 2` for `a, b, c <= truncation`, flattened
/// with `c` fastest.
#[derive(Clone, Debug)]
pub struct NosegayWeights {
    truncation: usize,
    table: Vec<f64>,
}

impl NosegayWeights {
    pub fn new(truncation: usize, exec: Execution) -> Self {
        let side = truncation + 1;
        let planes = exec.map(side, |a| {
            let mut plane = Vec::with_capacity(side * side);
            for b in 0..side {
                for c in 0..side {
                    plane.push(nosegay3_rank(a, b, c).log_weight().value());
                }
            }
            plane
        });
        Self {
            truncation,
            table: planes.concat(),
        }
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn get(&self, a: usize, b: usize, c: usize) -> f64 {
        let side = self.truncation + 1;
        self.table[(a * side + b) * side + c]
    }

    /// `E[w(a, b, c)]` over independent draws with probabilities `p`, ignoring
    /// indices beyond the truncation.
    fn expectation(&self, p: &[f64]) -> f64 {
        let side = self.truncation + 1;
        let mut total = 0.0;
        for (a, &pa) in p.iter().enumerate() {
            if pa == 0.0 {
                continue;
            }
            let mut inner_a = 0.0;
            for (b, &pb) in p.iter().enumerate() {
                if pb == 0.0 {
                    continue;
                }
                let row = &self.table[(a * side + b) * side..(a * side + b + 1) * side];
                let inner_b: f64 = row.iter().zip(p).map(|(w, pc)| w * pc).sum();
                inner_a += pb * inner_b;
            }
            total += pa * inner_a;
        }
        total
    }
}

/// `ln 2 + (1/3) int_{nu_0}^1 E[ln(R_(a,b,c) / 2^(3 + 2(a+b+c)))] d nu`.
pub fn nosegay_bound(
    alpha: f64,
    truncation: usize,
    quadrature_points: usize,
) -> Result<BoundReport> {
    let exec = Execution::default();
    let weights = NosegayWeights::new(truncation, exec);
    nosegay_bound_with(alpha, &weights, quadrature_points, exec)
}

pub fn nosegay_bound_with(
    alpha: f64,
    weights: &NosegayWeights,
    quadrature_points: usize,
    exec: Execution,
) -> Result<BoundReport> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "alpha must be positive, got {alpha}"
        )));
    }
    let truncation = weights.truncation();
    if truncation < 10 {
        return Err(Error::InvalidParameter(format!(
            "truncation must be at least 10, got {truncation}"
        )));
    }
    if quadrature_points < 100 {
        return Err(Error::InvalidParameter(format!(
            "need at least 100 quadrature panels, got {quadrature_points}"
        )));
    }
    let panels = quadrature_points.next_multiple_of(4);
    let nu0 = nosegay_nu0(alpha);
    let ln_fact = ln_factorials(truncation);
    let samples = exec.map(panels + 1, |i| {
        let nu = nu0 + (1.0 - nu0) * i as f64 / panels as f64;
        let mean = 3.0 * nosegay_mu(alpha, nu).max(0.0) / nu;
        let p = poisson_pmf(mean, &ln_fact);
        let kept: f64 = p.iter().sum();
        (weights.expectation(&p), 1.0 - kept.powi(3))
    });
    let values: Vec<f64> = samples.iter().map(|s| s.0).collect();
    let tail = samples.iter().map(|s| s.1).fold(0.0, f64::max);
    let integral = simpson_with_error(&values, 1.0 - nu0);
    Ok(BoundReport::new(
        BoundMethod::Nosegay,
        alpha,
        3,
        BoundParams {
            poisson_truncation: Some(truncation),
            quadrature_points: Some(panels),
            ..Default::default()
        },
        std::f64::consts::LN_2 + integral.value / 3.0,
        Some(integral.error / 3.0),
        Some(tail.max(0.0)),
    ))
}
