//! Degree density of the sunflower peel and the resulting bound.
//!
//! A vertex visited at continuous time `t` takes each of its Poisson(`k alpha`)
//! edges independently with probability `t^(k-1)`, so its sunflower degree is
//! Poisson with mean `lambda(t) = k alpha t^(k-1)`. Averaging over `t` in
//! `[0, 1]` gives the density
//!
//! `a_d = int_0^1 exp(-lambda(t)) lambda(t)^d / d! dt`.

use super::quadrature::{adaptive_simpson, ln_factorial, Estimate};
use super::{BoundMethod, BoundParams, BoundReport};
use crate::{Error, Execution, Result};

/// Panel cap for one density integral.
pub const DEFAULT_MAX_PANELS: usize = 4096;
pub const DEFAULT_D_MAX: usize = 100;

/// The integrand is negligible where its log falls this far below the peak.
const WINDOW_NATS: f64 = 60.0;

/// `a_d` by Simpson quadrature of the log-space integrand, restricted to
/// the window of `t` where the integrand is within `e^-60` of its peak.
pub fn sunflower_degree_density(d: usize, alpha: f64, k: usize) -> f64 {
    degree_density_estimate(d, alpha, k, DEFAULT_MAX_PANELS).value
}

pub fn degree_density_estimate(d: usize, alpha: f64, k: usize, max_panels: usize) -> Estimate {
    let scale = k as f64 * alpha;
    let power = (k - 1) as f64;
    let ln_fact = ln_factorial(d);
    let df = d as f64;
    let log_integrand = move |lambda: f64| {
        if d == 0 {
            -lambda
        } else {
            df * lambda.ln() - lambda - ln_fact
        }
    };
    // The integral over a unit interval is at most the integrand's peak.
    if log_integrand(df.min(scale)) < -700.0 {
        return Estimate {
            value: 0.0,
            error: 0.0,
        };
    }
    let (lo, hi) = lambda_window(df, scale, |l| log_integrand(l) + ln_fact);
    let to_t = |lambda: f64| (lambda / scale).powf(1.0 / power).clamp(0.0, 1.0);
    let (t_lo, t_hi) = (to_t(lo), to_t(hi));
    if t_hi <= t_lo {
        return Estimate {
            value: 0.0,
            error: 0.0,
        };
    }
    adaptive_simpson(
        |t| log_integrand(scale * t.powf(power)).exp(),
        t_lo,
        t_hi,
        64,
        max_panels,
        1e-300,
        1e-12,
    )
}

/// Range of `lambda` in `[0, scale]` where `phi(lambda) = d ln(lambda) - lambda`
/// is within `WINDOW_NATS` of its maximum over that range.
fn lambda_window(d: f64, scale: f64, phi: impl Fn(f64) -> f64) -> (f64, f64) {
    let peak = d.min(scale);
    let target = if d == 0.0 {
        -WINDOW_NATS
    } else {
        phi(peak) - WINDOW_NATS
    };
    let lo = if d == 0.0 {
        0.0
    } else {
        bisect_level(&phi, 0.0, peak, target, true)
    };
    let hi = if phi(scale) >= target {
        scale
    } else {
        bisect_level(&phi, peak, scale, target, false)
    };
    (lo, hi)
}

/// Point in `[a, b]` where a monotone `phi` crosses `target`.
fn bisect_level(
    phi: &impl Fn(f64) -> f64,
    mut a: f64,
    mut b: f64,
    target: f64,
    increasing: bool,
) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        if (phi(mid) < target) == increasing {
            a = mid;
        } else {
            b = mid;
        }
    }
    if increasing {
        a
    } else {
        b
    }
}

/// `a_d` from the lower incomplete Gamma function:
/// `gamma(d + 1/(k-1), k alpha) / ((k-1) (k alpha)^(1/(k-1)) d!)`.
///
/// Only used to cross-check the quadrature.
pub fn degree_density_incomplete_gamma(d: usize, alpha: f64, k: usize) -> f64 {
    let x = k as f64 * alpha;
    let inv = 1.0 / (k - 1) as f64;
    let s = d as f64 + inv;
    (ln_lower_gamma(s, x) - ((k - 1) as f64).ln() - inv * x.ln() - ln_factorial(d)).exp()
}

/// `ln gamma(s, x)` from the series `x^s e^-x sum_n x^n / (s (s+1) .. (s+n))`.
pub fn ln_lower_gamma(s: f64, x: f64) -> f64 {
    let mut term = 1.0 / s;
    let mut sum = term;
    let mut n = 0.0;
    while term > sum * 1e-17 {
        n += 1.0;
        term *= x / (s + n);
        sum += term;
    }
    s * x.ln() - x + sum.ln()
}

/// Log-weight of a degree-`d` sunflower: `d ln(1 - 2^(1-k)) + ln(d / (2^k - 2) + 1)`.
pub fn sunflower_weight(d: usize, k: usize) -> f64 {
    let half = 0.5f64.powi(k as i32 - 1);
    d as f64 * (-half).ln_1p() + (d as f64 / ((1u64 << k) - 2) as f64).ln_1p()
}

/// Degree cutoff that keeps the dropped density mass negligible at `alpha`.
pub fn adaptive_d_max(alpha: f64, k: usize) -> usize {
    let mean = k as f64 * alpha;
    DEFAULT_D_MAX.max((mean + 12.0 * mean.sqrt() + 60.0).ceil() as usize)
}

/// `ln 2 + sum_{d=0}^{d_max} a_d (d ln(1 - 2^(1-k)) + ln(d / (2^k - 2) + 1))`.
pub fn sunflower_bound(alpha: f64, k: usize, d_max: usize) -> Result<BoundReport> {
    sunflower_bound_with(alpha, k, d_max, DEFAULT_MAX_PANELS, Execution::default())
}

pub fn sunflower_bound_with(
    alpha: f64,
    k: usize,
    d_max: usize,
    max_panels: usize,
    exec: Execution,
) -> Result<BoundReport> {
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
    if d_max < 1 {
        return Err(Error::InvalidParameter("d_max must be at least 1".into()));
    }
    let terms = exec.map(d_max + 1, |d| {
        let est = degree_density_estimate(d, alpha, k, max_panels);
        (est, sunflower_weight(d, k))
    });
    let mut value = std::f64::consts::LN_2;
    let mut error = 0.0;
    let mut mass = 0.0;
    for (est, w) in &terms {
        value += est.value * w;
        error += est.error * w.abs();
        mass += est.value;
    }
    Ok(BoundReport::new(
        BoundMethod::Sunflower,
        alpha,
        k,
        BoundParams {
            d_max: Some(d_max),
            quadrature_points: Some(max_panels),
            ..Default::default()
        },
        value,
        Some(error),
        Some((1.0 - mass).max(0.0)),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn a0_matches_error_function_value() {
        // a_0 = (1/2) sqrt(pi / 3 alpha) erf(sqrt(3 alpha)); erf(sqrt(11.682)) = 1 - 6e-7.
        let a0 = sunflower_degree_density(0, 3.894, 3);
        assert!((a0 - 0.2593).abs() < 5e-5, "a0 = {a0}");
    }

    #[test]
    fn density_is_normalized_with_mean_alpha() {
        for &(alpha, k) in &[(3.894, 3), (1.0, 2), (7.5, 4), (20.0, 5)] {
            let d_max = adaptive_d_max(alpha, k);
            let a: Vec<f64> = (0..=d_max)
                .map(|d| sunflower_degree_density(d, alpha, k))
                .collect();
            let total: f64 = a.iter().sum();
            let mean: f64 = a.iter().enumerate().map(|(d, x)| d as f64 * x).sum();
            assert!((total - 1.0).abs() < 1e-8, "k={k}: total {total}");
            assert!((mean - alpha).abs() < 1e-8, "k={k}: mean {mean}");
        }
    }

    #[test]
    fn quadrature_matches_incomplete_gamma() {
        for d in 0..=100 {
            let q = sunflower_degree_density(d, 3.894, 3);
            let g = degree_density_incomplete_gamma(d, 3.894, 3);
            assert!((q - g).abs() < 1e-10, "d={d}: {q} vs {g}");
        }
        for d in [0, 1, 5, 40, 400] {
            let q = sunflower_degree_density(d, 50.0, 6);
            let g = degree_density_incomplete_gamma(d, 50.0, 6);
            assert!((q - g).abs() <= 1e-10 + 1e-9 * g, "d={d}: {q} vs {g}");
        }
    }

    #[test]
    fn weight_matches_three_uniform_expression() {
        for d in 0..20 {
            let direct = d as f64 * 0.75f64.ln() + (d as f64 / 6.0 + 1.0).ln();
            assert!((sunflower_weight(d, 3) - direct).abs() < 1e-14);
        }
    }

    #[test]
    fn low_density_is_inconclusive() {
        let r = sunflower_bound(0.1, 3, 100).unwrap();
        assert!(r.value > 0.0);
        assert_eq!(r.verdict, super::super::Verdict::Inconclusive);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(sunflower_bound(-1.0, 3, 100).is_err());
        assert!(sunflower_bound(1.0, 1, 100).is_err());
        assert!(sunflower_bound(1.0, 3, 0).is_err());
    }
}
