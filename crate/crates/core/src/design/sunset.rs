use serde::Serialize;

use super::scenario::{hce_theta, simulate_values, Scenario};
use crate::error::{HceError, Result};
use crate::exec::Execution;
use crate::model::ComponentConfig;
use crate::rng::derive_seed;
use crate::win::count_keys;

/// Nuisance parameters of a win-odds landscape.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SunsetParams {
    /// Probability that a control subject has any event within follow-up.
    pub p_event_control: f64,
    /// Standard deviation of the continuous outcome in each arm.
    pub sd: f64,
    pub follow_up: f64,
}

impl Default for SunsetParams {
    fn default() -> Self {
        SunsetParams { p_event_control: 0.5, sd: 4.0, follow_up: 1095.0 }
    }
}

impl SunsetParams {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..1.0).contains(&self.p_event_control) {
            return Err(HceError::invalid(format!("p_event_control must lie in [0, 1), got {}", self.p_event_control)));
        }
        if !(self.sd.is_finite() && self.sd > 0.0) {
            return Err(HceError::invalid(format!("sd must be positive, got {}", self.sd)));
        }
        if !(self.follow_up.is_finite() && self.follow_up > 0.0) {
            return Err(HceError::invalid(format!("follow-up must be positive, got {}", self.follow_up)));
        }
        Ok(())
    }

    fn control_rate(&self) -> f64 {
        -(-self.p_event_control).ln_1p() / self.follow_up
    }

    /// Single-event-component scenario realizing this cell.
    pub fn scenario(&self, hr: f64, delta: f64, n_per_arm: usize, seed: u64) -> Scenario {
        Scenario {
            n_per_arm,
            control_event_probs: vec![self.p_event_control],
            component_names: Some(vec!["Event".into()]),
            continuous_name: "Continuous".into(),
            hr,
            control_mean: 0.0,
            active_mean: delta,
            sd: self.sd,
            follow_up_days: self.follow_up,
            seed,
        }
    }
}

fn check_hr(hr: f64) -> Result<()> {
    if !(hr.is_finite() && hr > 0.0) {
        return Err(HceError::invalid(format!("hazard ratio must be positive, got {hr}")));
    }
    Ok(())
}

/// Exact win probability for one landscape cell.
pub fn sunset_theta_closed_form(hr: f64, delta: f64, params: &SunsetParams) -> Result<f64> {
    check_hr(hr)?;
    params.validate()?;
    if !delta.is_finite() {
        return Err(HceError::invalid("mean difference must be finite"));
    }
    let lc = params.control_rate();
    Ok(hce_theta(&[hr * lc], &[lc], params.follow_up, delta, params.sd))
}

/// Exact win odds for one landscape cell.
pub fn sunset_cell_closed_form(hr: f64, delta: f64, params: &SunsetParams) -> Result<f64> {
    let theta = sunset_theta_closed_form(hr, delta, params)?;
    Ok(theta / (1.0 - theta))
}

/// Monte Carlo estimate of a cell: the mean of per-replicate θ̂ mapped to the
/// odds scale, with its standard error by the delta method.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McEstimate {
    pub theta: f64,
    pub theta_se: f64,
    pub win_odds: f64,
    pub win_odds_se: f64,
    pub reps: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McConfig {
    pub n_per_arm: usize,
    pub reps: usize,
    pub seed: u64,
    pub exec: Execution,
}

impl Default for McConfig {
    fn default() -> Self {
        McConfig { n_per_arm: 500, reps: 200, seed: 1, exec: Execution::default() }
    }
}

pub fn sunset_cell_mc(hr: f64, delta: f64, params: &SunsetParams, mc: &McConfig) -> Result<McEstimate> {
    check_hr(hr)?;
    params.validate()?;
    if mc.n_per_arm < 2 || mc.reps < 1 {
        return Err(HceError::invalid("Monte Carlo needs n_per_arm >= 2 and reps >= 1"));
    }
    let scenario = params.scenario(hr, delta, mc.n_per_arm, mc.seed);
    let config = scenario.config()?;
    let thetas: Vec<f64> = mc
        .exec
        .map_indexed(mc.reps, |r| replicate_theta(&scenario, &config, derive_seed(mc.seed, &[r as u64])))
        .into_iter()
        .collect::<Result<_>>()?;
    let k = thetas.len() as f64;
    let theta = thetas.iter().sum::<f64>() / k;
    let theta_se = if thetas.len() > 1 {
        (thetas.iter().map(|t| (t - theta).powi(2)).sum::<f64>() / (k - 1.0) / k).sqrt()
    } else {
        f64::NAN
    };
    Ok(McEstimate {
        theta,
        theta_se,
        win_odds: theta / (1.0 - theta),
        win_odds_se: theta_se / (1.0 - theta).powi(2),
        reps: mc.reps,
    })
}

fn replicate_theta(scenario: &Scenario, config: &ComponentConfig, seed: u64) -> Result<f64> {
    let (a, c) = simulate_values(scenario, seed)?;
    let keys = |v: Vec<_>| v.iter().map(|x| config.key(x)).collect::<Vec<_>>();
    let counts = count_keys(keys(a), keys(c));
    Ok((2 * counts.wins + counts.ties) as f64 / (2 * counts.pairs()) as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GridMethod {
    ClosedForm,
    MonteCarlo,
}

/// Win odds over a hazard-ratio × mean-difference grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SunsetGrid {
    pub hr_axis: Vec<f64>,
    pub delta_axis: Vec<f64>,
    /// `values[row][col]`: row indexes `delta_axis`, column `hr_axis`.
    pub values: Vec<Vec<f64>>,
    /// Monte Carlo standard errors, same layout as `values`.
    pub std_errors: Option<Vec<Vec<f64>>>,
    pub params: SunsetParams,
    pub method: GridMethod,
    pub iso_levels: Vec<f64>,
}

impl SunsetGrid {
    pub fn min_value(&self) -> f64 {
        self.values.iter().flatten().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().flatten().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// CSV matrix: header `delta\hr,<hr...>`, then one row per delta.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("delta\\hr");
        for h in &self.hr_axis {
            out.push(',');
            out.push_str(&h.to_string());
        }
        out.push('\n');
        for (d, row) in self.delta_axis.iter().zip(&self.values) {
            out.push_str(&d.to_string());
            for v in row {
                out.push(',');
                out.push_str(&v.to_string());
            }
            out.push('\n');
        }
        out
    }
}

pub const DEFAULT_HR_RANGE: (f64, f64) = (0.50, 1.15);
pub const DEFAULT_DELTA_RANGE: (f64, f64) = (-0.5, 2.0);
pub const DEFAULT_RESOLUTION: usize = 60;

/// `n` evenly spaced values from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    (0..n).map(|i| if i == n - 1 { hi } else { lo + (hi - lo) * i as f64 / (n - 1) as f64 }).collect()
}

/// Ten equally spaced contour levels from 1.00 to 1.86.
pub fn default_iso_levels() -> Vec<f64> {
    linspace(1.0, 1.86, 10)
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub hr_range: (f64, f64),
    pub delta_range: (f64, f64),
    /// Points per axis (hr, delta).
    pub resolution: (usize, usize),
    pub params: SunsetParams,
    pub method: GridMethod,
    pub mc: McConfig,
    pub iso_levels: Vec<f64>,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            hr_range: DEFAULT_HR_RANGE,
            delta_range: DEFAULT_DELTA_RANGE,
            resolution: (DEFAULT_RESOLUTION, DEFAULT_RESOLUTION),
            params: SunsetParams::default(),
            method: GridMethod::ClosedForm,
            mc: McConfig::default(),
            iso_levels: default_iso_levels(),
        }
    }
}

/// Evaluates every cell. Monte Carlo cell (row, col) draws from seeds derived
/// from `(mc.seed, row, col)`, so results do not depend on scheduling.
pub fn sunset_grid(spec: &GridSpec) -> Result<SunsetGrid> {
    let (h0, h1) = spec.hr_range;
    let (d0, d1) = spec.delta_range;
    if !(h0.is_finite() && h1.is_finite() && h0 > 0.0 && h0 < h1) {
        return Err(HceError::invalid(format!("hr range must be positive and ascending, got {h0}..{h1}")));
    }
    if !(d0.is_finite() && d1.is_finite() && d0 < d1) {
        return Err(HceError::invalid(format!("delta range must be ascending, got {d0}..{d1}")));
    }
    if spec.resolution.0 < 2 || spec.resolution.1 < 2 {
        return Err(HceError::invalid("grid resolution must be at least 2 per axis"));
    }
    spec.params.validate()?;
    let hr_axis = linspace(h0, h1, spec.resolution.0);
    let delta_axis = linspace(d0, d1, spec.resolution.1);
    let (rows, cols) = (delta_axis.len(), hr_axis.len());

    let (values, std_errors) = match spec.method {
        GridMethod::ClosedForm => {
            let flat = spec.mc.exec.map_indexed(rows * cols, |i| {
                sunset_cell_closed_form(hr_axis[i % cols], delta_axis[i / cols], &spec.params)
            });
            let flat: Vec<f64> = flat.into_iter().collect::<Result<_>>()?;
            (flat.chunks(cols).map(<[f64]>::to_vec).collect(), None)
        }
        GridMethod::MonteCarlo => {
            // cells run in parallel; replicates inside a cell stay sequential
            let flat = spec.mc.exec.map_indexed(rows * cols, |i| {
                let (r, c) = (i / cols, i % cols);
                let mc = McConfig {
                    seed: derive_seed(spec.mc.seed, &[r as u64, c as u64]),
                    exec: Execution::Sequential,
                    ..spec.mc
                };
                sunset_cell_mc(hr_axis[c], delta_axis[r], &spec.params, &mc)
            });
            let flat: Vec<McEstimate> = flat.into_iter().collect::<Result<_>>()?;
            let wo: Vec<Vec<f64>> = flat.chunks(cols).map(|row| row.iter().map(|e| e.win_odds).collect()).collect();
            let se: Vec<Vec<f64>> = flat.chunks(cols).map(|row| row.iter().map(|e| e.win_odds_se).collect()).collect();
            (wo, Some(se))
        }
    };
    Ok(SunsetGrid {
        hr_axis,
        delta_axis,
        values,
        std_errors,
        params: spec.params,
        method: spec.method,
        iso_levels: spec.iso_levels.clone(),
    })
}

/// Mean difference at which the closed-form win odds equals `target_wo` for
/// the given hazard ratio.
pub fn solve_delta_for_wo(hr: f64, target_wo: f64, params: &SunsetParams) -> Result<f64> {
    check_hr(hr)?;
    params.validate()?;
    let f = |d: f64| sunset_cell_closed_form(hr, d, params).unwrap_or(f64::NAN);
    super::bisect_increasing(f, target_wo, -50.0 * params.sd, 50.0 * params.sd).ok_or_else(|| {
        HceError::invalid(format!("win odds {target_wo} is not attainable at hr {hr} with these parameters"))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use statrs::distribution::{ContinuousCDF, Normal};

    #[test]
    fn null_cell_is_one() {
        for p in [0.0, 0.25, 0.5, 0.9] {
            let params = SunsetParams { p_event_control: p, ..Default::default() };
            let wo = sunset_cell_closed_form(1.0, 0.0, &params).unwrap();
            assert!((wo - 1.0).abs() < 1e-12, "p={p}: {wo}");
        }
    }

    #[test]
    fn continuous_only_cell() {
        let params = SunsetParams { p_event_control: 0.0, sd: 1.0, follow_up: 365.0 };
        let theta = sunset_theta_closed_form(0.7, 1.0, &params).unwrap();
        let expected = Normal::standard().cdf(1.0 / 2f64.sqrt());
        assert!((theta - expected).abs() < 1e-15);
        assert!((theta - 0.7602).abs() < 1e-4);
        let wo = theta / (1.0 - theta);
        assert!((wo - 3.171).abs() < 1e-3);
    }

    #[test]
    fn errors() {
        let p = SunsetParams::default();
        assert!(sunset_cell_closed_form(0.0, 0.0, &p).is_err());
        assert!(sunset_cell_closed_form(-1.0, 0.0, &p).is_err());
        let certain = SunsetParams { p_event_control: 1.0, ..p };
        assert!(sunset_cell_closed_form(0.8, 0.0, &certain).is_err());
        assert!(sunset_cell_mc(1.0, 0.0, &p, &McConfig { n_per_arm: 1, ..Default::default() }).is_err());
        let bad = GridSpec { hr_range: (1.0, 0.5), ..Default::default() };
        assert!(sunset_grid(&bad).is_err());
        let bad = GridSpec { resolution: (1, 5), ..Default::default() };
        assert!(sunset_grid(&bad).is_err());
    }

    #[test]
    fn two_by_two_grid_is_monotone() {
        let spec = GridSpec { resolution: (2, 2), ..Default::default() };
        let g = sunset_grid(&spec).unwrap();
        assert_eq!(g.values.len(), 2);
        let v = &g.values;
        for r in 0..2 {
            assert!(v[r][0] > v[r][1], "decreasing in hr");
        }
        for c in 0..2 {
            assert!(v[0][c] < v[1][c], "increasing in delta");
        }
        for (r, d) in g.delta_axis.iter().enumerate() {
            for (c, h) in g.hr_axis.iter().enumerate() {
                assert_eq!(v[r][c], sunset_cell_closed_form(*h, *d, &spec.params).unwrap());
            }
        }
    }

    #[test]
    fn default_grid_corner_orientation() {
        let g = sunset_grid(&GridSpec::default()).unwrap();
        assert_eq!(g.values.len(), 60);
        assert_eq!(g.values[0].len(), 60);
        let worst = g.values[0][59]; // hr 1.15, delta -0.5
        let best = g.values[59][0]; // hr 0.50, delta 2.0
        assert!(worst < 1.0 && best > 1.0, "{worst} {best}");
    }

    #[test]
    fn mc_is_deterministic() {
        let p = SunsetParams::default();
        let mc = McConfig { n_per_arm: 50, reps: 20, seed: 7, exec: Execution::Parallel };
        let a = sunset_cell_mc(0.8, 0.5, &p, &mc).unwrap();
        let b = sunset_cell_mc(0.8, 0.5, &p, &McConfig { exec: Execution::Sequential, ..mc }).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn anchor_delta_solves() {
        let p = SunsetParams::default();
        let d = solve_delta_for_wo(0.8, 1.2, &p).unwrap();
        assert!((sunset_cell_closed_form(0.8, d, &p).unwrap() - 1.2).abs() < 1e-9);
        assert!(solve_delta_for_wo(0.8, 1e6, &p).is_err());
    }

    #[test]
    fn linspace_endpoints_exact() {
        let v = linspace(0.5, 1.15, 60);
        assert_eq!(v[0], 0.5);
        assert_eq!(v[59], 1.15);
        assert_eq!(default_iso_levels().len(), 10);
    }
}
