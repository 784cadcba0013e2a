use rand::Rng;

use super::counting::{count_keys, WinCounts};
use super::stats::{check_alpha, CiMethod, Estimate, PointEstimates, WinStats};
use crate::error::{HceError, Result};
use crate::exec::Execution;
use crate::model::OrderKey;
use crate::rng::stream;

pub const DEFAULT_BOOT_REPS: usize = 2000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BootstrapConfig {
    pub reps: usize,
    pub seed: u64,
    pub exec: Execution,
}

impl Default for BootstrapConfig {
    fn default() -> Self {
        BootstrapConfig { reps: DEFAULT_BOOT_REPS, seed: 0, exec: Execution::default() }
    }
}

/// Linear-interpolation quantile of an ascending slice; infinite endpoints
/// propagate without producing NaN.
pub(crate) fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let frac = pos - lo as f64;
    let (a, b) = (sorted[lo], sorted[hi]);
    if frac == 0.0 || a == b {
        a
    } else {
        a + frac * (b - a)
    }
}

fn resample(keys: &[OrderKey], rng: &mut impl Rng) -> Vec<OrderKey> {
    (0..keys.len()).map(|_| keys[rng.random_range(0..keys.len())]).collect()
}

/// Replicate point estimates; replicate `b` draws from its own stream
/// derived from `(seed, b)`.
pub fn bootstrap_replicates(
    active: &[OrderKey],
    control: &[OrderKey],
    config: &BootstrapConfig,
) -> Vec<PointEstimates> {
    config.exec.map_indexed(config.reps, |b| {
        let mut rng = stream(config.seed, &[b as u64]);
        let a = resample(active, &mut rng);
        let c = resample(control, &mut rng);
        PointEstimates::from_counts(&count_keys(a, c))
    })
}

fn percentile(mut values: Vec<f64>, est: f64, alpha: f64) -> Estimate {
    // all-ties replicates have an undefined win ratio; they count as the null value
    for v in values.iter_mut() {
        if v.is_nan() {
            *v = 1.0;
        }
    }
    values.sort_by(f64::total_cmp);
    Estimate { est, lo: quantile_sorted(&values, alpha / 2.0), hi: quantile_sorted(&values, 1.0 - alpha / 2.0) }
}

/// Point estimates from the full sample with percentile intervals over
/// subject resamples within each arm.
pub fn bootstrap_stats(
    counts: &WinCounts,
    active: &[OrderKey],
    control: &[OrderKey],
    alpha: f64,
    config: &BootstrapConfig,
) -> Result<WinStats> {
    check_alpha(alpha)?;
    if config.reps < 2 {
        return Err(HceError::invalid("bootstrap needs at least 2 replicates"));
    }
    if active.is_empty() || control.is_empty() {
        return Err(HceError::degenerate("both arms must be non-empty"));
    }
    let pts = PointEstimates::from_counts(counts);
    let reps = bootstrap_replicates(active, control, config);
    let col = |f: fn(&PointEstimates) -> f64| reps.iter().map(f).collect::<Vec<f64>>();
    let wr_est = if pts.win_ratio.is_nan() { 1.0 } else { pts.win_ratio };
    Ok(WinStats {
        counts: *counts,
        theta: percentile(col(|p| p.theta), pts.theta, alpha),
        win_odds: percentile(col(|p| p.win_odds), pts.win_odds, alpha),
        win_ratio: percentile(col(|p| p.win_ratio), wr_est, alpha),
        net_benefit: percentile(col(|p| p.net_benefit), pts.net_benefit, alpha),
        alpha,
        ci_method: CiMethod::Bootstrap,
        degenerate: pts.is_degenerate(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quantile_interpolates() {
        let v = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(quantile_sorted(&v, 0.0), 1.0);
        assert_eq!(quantile_sorted(&v, 1.0), 4.0);
        assert!((quantile_sorted(&v, 0.5) - 2.5).abs() < 1e-15);
        assert_eq!(quantile_sorted(&[1.0, f64::INFINITY], 1.0), f64::INFINITY);
        assert_eq!(quantile_sorted(&[1.0, f64::INFINITY, f64::INFINITY], 0.9), f64::INFINITY);
    }
}
