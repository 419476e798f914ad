//! Composite Simpson rules with a Richardson error estimate.

/// Integral estimate and its Richardson error estimate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

/// Composite Simpson rule over `samples`, the integrand at `panels + 1`
/// equally spaced points of a width-`width` interval. `panels` must be even.
pub fn simpson_from_samples(samples: &[f64], width: f64) -> f64 {
    let panels = samples.len() - 1;
    debug_assert!(panels >= 2 && panels.is_multiple_of(2));
    let h = width / panels as f64;
    let mut acc = samples[0] + samples[panels];
    for (i, &y) in samples.iter().enumerate().take(panels).skip(1) {
        acc += if i % 2 == 1 { 4.0 * y } else { 2.0 * y };
    }
    acc * h / 3.0
}

/// Simpson's rule with `panels` panels, and the Richardson estimate
/// `|S(panels) - S(panels / 2)| / 15` when `panels` is divisible by 4.
pub fn simpson_with_error(samples: &[f64], width: f64) -> Estimate {
    let panels = samples.len() - 1;
    let value = simpson_from_samples(samples, width);
    let error = if panels.is_multiple_of(4) {
        let coarse: Vec<f64> = samples.iter().step_by(2).copied().collect();
        (value - simpson_from_samples(&coarse, width)).abs() / 15.0
    } else {
        f64::NAN
    };
    Estimate { value, error }
}

/// Simpson's rule on `[a, b]`, doubling the panel count from `min_panels`
/// until the Richardson estimate drops below `abs_tol + rel_tol * |value|`
/// or `max_panels` is reached.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    min_panels: usize,
    max_panels: usize,
    abs_tol: f64,
    rel_tol: f64,
) -> Estimate {
    let width = b - a;
    let mut panels = min_panels.max(4).next_multiple_of(4);
    let mut samples: Vec<f64> = (0..=panels)
        .map(|i| f(a + width * i as f64 / panels as f64))
        .collect();
    loop {
        let est = simpson_with_error(&samples, width);
        if est.error <= abs_tol + rel_tol * est.value.abs() || panels * 2 > max_panels {
            return est;
        }
        // Refine, reusing the existing samples at even positions.
        let fine = panels * 2;
        let mut next = Vec::with_capacity(fine + 1);
        for (i, &y) in samples.iter().enumerate() {
            next.push(y);
            if i < panels {
                next.push(f(a + width * (2 * i + 1) as f64 / fine as f64));
            }
        }
        samples = next;
        panels = fine;
    }
}

/// `ln(d!)` by exact summation of logarithms.
pub fn ln_factorial(d: usize) -> f64 {
    (2..=d).map(|i| (i as f64).ln()).sum()
}

/// Table of `ln(j!)` for `j = 0..=max`.
pub fn ln_factorials(max: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(max + 1);
    let mut acc = 0.0;
    out.push(0.0);
    for j in 1..=max {
        acc += (j as f64).ln();
        out.push(acc);
    }
    out
}

/// Poisson probabilities `P(X = j)` for `j = 0..=max` at mean `mean`.
pub fn poisson_pmf(mean: f64, ln_fact: &[f64]) -> Vec<f64> {
    if mean <= 0.0 {
        let mut p = vec![0.0; ln_fact.len()];
        p[0] = 1.0;
        return p;
    }
    let ln_mean = mean.ln();
    ln_fact
        .iter()
        .enumerate()
        .map(|(j, &lf)| (j as f64 * ln_mean - mean - lf).exp())
        .collect()
}
