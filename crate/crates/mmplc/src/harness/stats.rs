//! Goodness-of-fit and summary statistics for Monte Carlo runs.

use crate::{Error, Result};

/// A sorted sample set, the form every distribution test consumes.
#[derive(Debug, Clone)]
pub struct EmpiricalDistribution {
    samples: Vec<f64>,
}

impl EmpiricalDistribution {
    /// Sorts the samples; rejects empty input and NaN entries.
    pub fn new(mut samples: Vec<f64>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::Domain("empty sample set".into()));
        }
        if samples.iter().any(|x| x.is_nan()) {
            return Err(Error::Domain("NaN in sample set".into()));
        }
        samples.sort_by(|a, b| a.partial_cmp(b).unwrap());
        Ok(EmpiricalDistribution { samples })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    /// Empirical CDF (right-continuous) at `x`.
    pub fn cdf_at(&self, x: f64) -> f64 {
        let idx = self.samples.partition_point(|&s| s <= x);
        idx as f64 / self.samples.len() as f64
    }
}

/// Two-sided Kolmogorov-Smirnov statistic: the sup distance between the
/// empirical CDF and the reference `cdf`.
pub fn ks_statistic<F: Fn(f64) -> f64>(emp: &EmpiricalDistribution, cdf: F) -> f64 {
    let n = emp.len() as f64;
    let mut d = 0.0f64;
    for (i, &x) in emp.samples().iter().enumerate() {
        let f = cdf(x);
        let upper = (i as f64 + 1.0) / n - f;
        let lower = f - i as f64 / n;
        d = d.max(upper).max(lower);
    }
    d
}

const WILSON_Z: f64 = 1.959_963_984_540_054; // 95% two-sided

/// Wilson-interval half-width for `k` successes in `n` trials.
pub fn wilson_half_width(k: usize, n: usize) -> f64 {
    assert!(n > 0, "empty trial set");
    let nf = n as f64;
    let p = k as f64 / nf;
    let z2 = WILSON_Z * WILSON_Z;
    WILSON_Z * (p * (1.0 - p) / nf + z2 / (4.0 * nf * nf)).sqrt() / (1.0 + z2 / nf)
}

/// Fraction of rows satisfying the predicate, with its 95% Wilson
/// half-width.
pub fn empirical_probability<T, F: Fn(&T) -> bool>(rows: &[T], pred: F) -> (f64, f64) {
    assert!(!rows.is_empty(), "empty trial set");
    let k = rows.iter().filter(|r| pred(r)).count();
    (
        k as f64 / rows.len() as f64,
        wilson_half_width(k, rows.len()),
    )
}

/// Sample median (mean of the central pair for even counts).
pub fn median(xs: &[f64]) -> f64 {
    assert!(!xs.is_empty(), "median of empty slice");
    let mut v = xs.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Pearson correlation of two equal-length samples.
pub fn correlation(xs: &[f64], ys: &[f64]) -> f64 {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut cov = 0.0;
    let mut vx = 0.0;
    let mut vy = 0.0;
    for (&x, &y) in xs.iter().zip(ys) {
        cov += (x - mx) * (y - my);
        vx += (x - mx) * (x - mx);
        vy += (y - my) * (y - my);
    }
    cov / (vx.sqrt() * vy.sqrt())
}
