//! Density and box summaries for violin plots.

use serde::Serialize;

use crate::error::{HceError, Result};

pub const KDE_POINTS: usize = 256;
pub const MIN_KDE_VALUES: usize = 5;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Kde {
    pub bandwidth: f64,
    pub xs: Vec<f64>,
    pub density: Vec<f64>,
}

impl Kde {
    pub fn max_density(&self) -> f64 {
        self.density.iter().cloned().fold(0.0, f64::max)
    }
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

fn sample_sd(v: &[f64]) -> f64 {
    let m = mean(v);
    (v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (v.len() as f64 - 1.0)).sqrt()
}

/// Linear-interpolation quantile on sorted data (type 7).
pub fn quantile(sorted: &[f64], p: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Silverman's rule of thumb: 0.9 · min(sd, IQR/1.34) · n^(−1/5).
pub fn silverman_bandwidth(values: &[f64]) -> f64 {
    let mut s = values.to_vec();
    s.sort_by(f64::total_cmp);
    let iqr = quantile(&s, 0.75) - quantile(&s, 0.25);
    let sd = sample_sd(values);
    let spread = if iqr > 0.0 { sd.min(iqr / 1.34) } else { sd };
    0.9 * spread * (values.len() as f64).powf(-0.2)
}

/// Gaussian KDE evaluated on an even grid over the data range.
pub fn gaussian_kde(values: &[f64]) -> Result<Kde> {
    if values.len() < MIN_KDE_VALUES {
        return Err(HceError::invalid(format!(
            "density needs at least {MIN_KDE_VALUES} values, got {}; use a scatter display instead",
            values.len()
        )));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(HceError::invalid("density input contains non-finite values"));
    }
    let bw = silverman_bandwidth(values);
    if bw.is_nan() || bw <= 0.0 {
        return Err(HceError::invalid("values are constant (zero bandwidth); use a scatter display instead"));
    }
    let lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let norm = 1.0 / (values.len() as f64 * bw * (2.0 * std::f64::consts::PI).sqrt());
    let xs: Vec<f64> = (0..KDE_POINTS).map(|i| lo + (hi - lo) * i as f64 / (KDE_POINTS - 1) as f64).collect();
    let density =
        xs.iter().map(|x| norm * values.iter().map(|v| (-0.5 * ((x - v) / bw).powi(2)).exp()).sum::<f64>()).collect();
    Ok(Kde { bandwidth: bw, xs, density })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoxStats {
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    /// Most extreme observations within 1.5 IQR of the box.
    pub whisker_lo: f64,
    pub whisker_hi: f64,
    pub mean: f64,
}

pub fn box_stats(values: &[f64]) -> Result<BoxStats> {
    if values.is_empty() {
        return Err(HceError::invalid("box summary of an empty sample"));
    }
    let mut s = values.to_vec();
    s.sort_by(f64::total_cmp);
    let (q1, median, q3) = (quantile(&s, 0.25), quantile(&s, 0.5), quantile(&s, 0.75));
    let iqr = q3 - q1;
    let whisker_lo = *s.iter().find(|&&v| v >= q1 - 1.5 * iqr).unwrap();
    let whisker_hi = *s.iter().rev().find(|&&v| v <= q3 + 1.5 * iqr).unwrap();
    Ok(BoxStats { q1, median, q3, whisker_lo, whisker_hi, mean: mean(values) })
}
