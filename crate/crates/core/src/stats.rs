//! Spearman rank correlation, p-values and percentile bootstrap intervals.

use rand::RngExt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::error::{Error, Result};
use crate::rng;

/// Below this sample size p-values come from the exact permutation distribution.
pub const EXACT_PVALUE_LIMIT: usize = 10;
const MAX_REDRAWS: usize = 10;

/// Average ranks (1-based); tied values share the mean of their positions.
pub fn average_ranks(x: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..x.len()).collect();
    order.sort_by(|&a, &b| x[a].total_cmp(&x[b]));
    let mut ranks = vec![0.0; x.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && x[order[j + 1]] == x[order[i]] {
            j += 1;
        }
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for &k in &order[i..=j] {
            ranks[k] = avg;
        }
        i = j + 1;
    }
    ranks
}

fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx <= 0.0 || syy <= 0.0 {
        return Err(Error::DegenerateRanks);
    }
    Ok((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

/// Pearson correlation of the average ranks of `x` and `y`.
pub fn spearman(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::InvalidParameter(format!(
            "length mismatch: {} vs {}",
            x.len(),
            y.len()
        )));
    }
    if x.len() < 3 {
        return Err(Error::InvalidParameter("spearman needs n >= 3".into()));
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(Error::InvalidParameter("non-finite input".into()));
    }
    pearson(&average_ranks(x), &average_ranks(y))
}

/// Two-sided p-value of `rho` under independence.
///
/// `|rho| = 1` gives 0. For `n < 10` the tie-free permutation distribution is
/// enumerated exactly; otherwise `t = rho sqrt((n - 2) / (1 - rho^2))` is
/// referred to Student's t with `n - 2` degrees of freedom.
pub fn spearman_pvalue(rho: f64, n: usize) -> Result<f64> {
    if n < 4 {
        return Err(Error::InvalidParameter("p-value needs n >= 4".into()));
    }
    if !(-1.0..=1.0).contains(&rho) {
        return Err(Error::InvalidParameter(format!(
            "rho {rho} outside [-1, 1]"
        )));
    }
    if rho.abs() >= 1.0 {
        return Ok(0.0);
    }
    if rho == 0.0 {
        return Ok(1.0);
    }
    if n < EXACT_PVALUE_LIMIT {
        return Ok(exact_permutation_pvalue(rho, n));
    }
    let df = (n - 2) as f64;
    let t = rho * (df / (1.0 - rho * rho)).sqrt();
    let dist = StudentsT::new(0.0, 1.0, df).map_err(|e| Error::InvalidParameter(e.to_string()))?;
    Ok((2.0 * dist.sf(t.abs())).clamp(0.0, 1.0))
}

fn exact_permutation_pvalue(rho: f64, n: usize) -> f64 {
    let denom = (n * (n * n - 1)) as f64;
    let mut perm: Vec<usize> = (0..n).collect();
    let mut hits = 0u64;
    let mut total = 0u64;
    let mut count = |perm: &[usize]| {
        let d2: usize = perm
            .iter()
            .enumerate()
            .map(|(i, &p)| i.abs_diff(p).pow(2))
            .sum();
        let r = 1.0 - 6.0 * d2 as f64 / denom;
        total += 1;
        if r.abs() >= rho.abs() - 1e-12 {
            hits += 1;
        }
    };
    // Heap's algorithm
    let mut c = vec![0usize; n];
    count(&perm);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            count(&perm);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    hits as f64 / total as f64
}

/// Percentile with linear interpolation between order statistics:
/// `h = (len - 1) q`, `v[floor h] + (h - floor h) (v[floor h + 1] - v[floor h])`
/// over the ascending sorted values.
pub fn percentile(sorted: &[f64], q: f64) -> f64 {
    assert!(!sorted.is_empty());
    let h = (sorted.len() - 1) as f64 * q.clamp(0.0, 1.0);
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

#[derive(Debug, Clone, PartialEq)]
pub struct BootstrapDistribution {
    /// Resampled correlations, ascending.
    pub values: Vec<f64>,
    /// Resamples dropped after repeated degenerate draws.
    pub skipped: usize,
}

impl BootstrapDistribution {
    /// Central percentile interval at confidence `gamma`.
    pub fn interval(&self, gamma: f64) -> (f64, f64) {
        let tail = (1.0 - gamma) / 2.0;
        (
            percentile(&self.values, tail),
            percentile(&self.values, 1.0 - tail),
        )
    }
}

/// Spearman correlations of `resamples` paired resamples drawn with
/// replacement. Resample `b` uses its own stream `(seed, "bootstrap", b)`;
/// a resample with constant ranks is redrawn up to ten times, then skipped.
pub fn bootstrap_distribution(
    x: &[f64],
    y: &[f64],
    resamples: usize,
    seed: u64,
) -> Result<BootstrapDistribution> {
    let n = x.len();
    if n != y.len() || n < 3 {
        return Err(Error::InvalidParameter(
            "bootstrap needs paired samples with n >= 3".into(),
        ));
    }
    if resamples < 100 {
        return Err(Error::InvalidParameter(
            "bootstrap needs at least 100 resamples".into(),
        ));
    }
    let draws: Vec<Option<f64>> = (0..resamples)
        .into_par_iter()
        .map(|b| {
            let mut r = rng::stream(seed, "bootstrap", b as u64);
            let mut xs = vec![0.0; n];
            let mut ys = vec![0.0; n];
            for _ in 0..=MAX_REDRAWS {
                for k in 0..n {
                    let i = r.random_range(0..n);
                    xs[k] = x[i];
                    ys[k] = y[i];
                }
                if let Ok(rho) = spearman(&xs, &ys) {
                    return Some(rho);
                }
            }
            None
        })
        .collect();
    let skipped = draws.iter().filter(|d| d.is_none()).count();
    let mut values: Vec<f64> = draws.into_iter().flatten().collect();
    if values.is_empty() {
        return Err(Error::DegenerateRanks);
    }
    values.sort_by(f64::total_cmp);
    Ok(BootstrapDistribution { values, skipped })
}

/// Percentile bootstrap interval of Spearman's rho at confidence `gamma`.
pub fn bootstrap_ci(
    x: &[f64],
    y: &[f64],
    resamples: usize,
    gamma: f64,
    seed: u64,
) -> Result<(f64, f64)> {
    check_gamma(gamma)?;
    Ok(bootstrap_distribution(x, y, resamples, seed)?.interval(gamma))
}

fn check_gamma(gamma: f64) -> Result<()> {
    if gamma > 0.0 && gamma < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "confidence level {gamma} outside (0, 1)"
        )))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BootstrapSettings {
    pub resamples: usize,
    pub gamma: f64,
    pub seed: u64,
}

impl Default for BootstrapSettings {
    fn default() -> Self {
        Self {
            resamples: 1000,
            gamma: 0.95,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationReport {
    pub rho: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub p_value: f64,
    pub n: usize,
    pub bootstrap_b: usize,
    pub gamma: f64,
    pub seed: u64,
    pub skipped_resamples: usize,
}

/// Spearman's rho of `(x, y)` with p-value and bootstrap interval.
pub fn correlation_report(
    x: &[f64],
    y: &[f64],
    settings: &BootstrapSettings,
) -> Result<CorrelationReport> {
    check_gamma(settings.gamma)?;
    let rho = spearman(x, y)?;
    let p_value = spearman_pvalue(rho, x.len())?;
    let dist = bootstrap_distribution(x, y, settings.resamples, settings.seed)?;
    let (ci_low, ci_high) = dist.interval(settings.gamma);
    Ok(CorrelationReport {
        rho,
        ci_low,
        ci_high,
        p_value,
        n: x.len(),
        bootstrap_b: settings.resamples,
        gamma: settings.gamma,
        seed: settings.seed,
        skipped_resamples: dist.skipped,
    })
}
