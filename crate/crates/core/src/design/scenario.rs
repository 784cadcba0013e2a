use rand::Rng;
use rand_distr::{Distribution, Exp, Normal};
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal as StdNormal};

use crate::error::{HceError, Result};
use crate::model::{Arm, ComponentConfig, HceDataset, HceValue, SubjectRecord};
use crate::rng::stream;

/// Synthetic two-arm trial under the landscape model: independent
/// exponential event times per component over a fixed follow-up window,
/// a common hazard ratio for the active arm, and a Normal continuous outcome
/// for event-free subjects.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub n_per_arm: usize,
    /// Control-arm probability that a subject's HCE category is component k
    /// (in priority order); the remainder is the event-free probability.
    pub control_event_probs: Vec<f64>,
    #[serde(default)]
    pub component_names: Option<Vec<String>>,
    #[serde(default = "default_continuous_name")]
    pub continuous_name: String,
    pub hr: f64,
    pub control_mean: f64,
    pub active_mean: f64,
    pub sd: f64,
    pub follow_up_days: f64,
    pub seed: u64,
}

fn default_continuous_name() -> String {
    "eGFR change".to_string()
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Scenario> {
        let s: Scenario = serde_json::from_str(text).map_err(|e| HceError::invalid(format!("scenario: {e}")))?;
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(HceError::invalid(m));
        if self.n_per_arm == 0 {
            return bad("n_per_arm must be positive".into());
        }
        if self.control_event_probs.is_empty() {
            return bad("at least one time-to-event component is required".into());
        }
        if self.control_event_probs.iter().any(|p| !(0.0..=1.0).contains(p)) {
            return bad("event probabilities must lie in [0, 1]".into());
        }
        let total: f64 = self.control_event_probs.iter().sum();
        if total >= 1.0 {
            return bad(format!("total event probability must be below 1, got {total}"));
        }
        if !(self.hr.is_finite() && self.hr > 0.0) {
            return bad(format!("hr must be positive, got {}", self.hr));
        }
        if !(self.sd.is_finite() && self.sd > 0.0) {
            return bad(format!("sd must be positive, got {}", self.sd));
        }
        if !(self.follow_up_days.is_finite() && self.follow_up_days > 0.0) {
            return bad("follow_up_days must be positive".into());
        }
        if !(self.control_mean.is_finite() && self.active_mean.is_finite()) {
            return bad("continuous means must be finite".into());
        }
        if let Some(names) = &self.component_names {
            if names.len() != self.control_event_probs.len() {
                return bad("component_names must match control_event_probs in length".into());
            }
        }
        Ok(())
    }

    pub fn mean_difference(&self) -> f64 {
        self.active_mean - self.control_mean
    }

    pub fn total_control_event_prob(&self) -> f64 {
        self.control_event_probs.iter().sum()
    }

    pub fn config(&self) -> Result<ComponentConfig> {
        let names: Vec<String> = match &self.component_names {
            Some(n) => n.clone(),
            None => (1..=self.control_event_probs.len()).map(|i| format!("Outcome {i}")).collect(),
        };
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        ComponentConfig::from_names(&refs, &self.continuous_name, self.follow_up_days)
    }

    /// Per-component control hazards reproducing the category probabilities
    /// when components are independent.
    pub fn control_rates(&self) -> Vec<f64> {
        let mut remaining = 1.0;
        self.control_event_probs
            .iter()
            .map(|&p| {
                let q = p / remaining;
                remaining -= p;
                -(-q).ln_1p() / self.follow_up_days
            })
            .collect()
    }

    /// Exact win probability of the active arm under the model.
    pub fn closed_form_theta(&self) -> f64 {
        let rates_c = self.control_rates();
        let rates_a: Vec<f64> = rates_c.iter().map(|r| r * self.hr).collect();
        hce_theta(&rates_a, &rates_c, self.follow_up_days, self.mean_difference(), self.sd)
    }

    pub fn closed_form_win_odds(&self) -> f64 {
        let t = self.closed_form_theta();
        t / (1.0 - t)
    }
}

/// P(T_c < T_a ≤ τ) for independent exponentials with rates `la` (active)
/// and `lc` (control): both events inside the window, the active one later.
pub(crate) fn later_within_window(la: f64, lc: f64, tau: f64) -> f64 {
    if lc == 0.0 || la == 0.0 {
        return 0.0;
    }
    let s = la + lc;
    // lc/s (1 - e^{-sτ}) - e^{-la τ} (1 - e^{-lc τ})
    let v = lc / s * -(-s * tau).exp_m1() - (-la * tau).exp() * -(-lc * tau).exp_m1();
    v.max(0.0)
}

/// Win probability for per-component hazards of both arms (priority order),
/// fixed follow-up `tau`, and event-free continuous outcomes
/// Normal(mean_c + delta, sd²) vs Normal(mean_c, sd²).
pub fn hce_theta(rates_a: &[f64], rates_c: &[f64], tau: f64, delta: f64, sd: f64) -> f64 {
    debug_assert_eq!(rates_a.len(), rates_c.len());
    let k = rates_a.len();
    // category probabilities (index k = event-free) and survivor products
    let cat = |rates: &[f64]| {
        let mut pi = Vec::with_capacity(k + 1);
        let mut surv = Vec::with_capacity(k + 1);
        let mut s = 1.0;
        for &r in rates {
            surv.push(s);
            let q = -(-r * tau).exp_m1();
            pi.push(s * q);
            s *= 1.0 - q;
        }
        surv.push(s);
        pi.push(s);
        (pi, surv)
    };
    let (pi_a, surv_a) = cat(rates_a);
    let (pi_c, surv_c) = cat(rates_c);

    let mut theta = 0.0;
    // active in a less severe category than control
    let mut cum_c = 0.0;
    for i in 0..=k {
        theta += pi_a[i] * cum_c;
        cum_c += pi_c[i];
    }
    for j in 0..k {
        theta += surv_a[j] * surv_c[j] * later_within_window(rates_a[j], rates_c[j], tau);
    }
    let phi = StdNormal::standard().cdf(delta / (sd * std::f64::consts::SQRT_2));
    theta + pi_a[k] * pi_c[k] * phi
}

fn simulate_arm(rng: &mut impl Rng, rates: &[f64], tau: f64, mean: f64, sd: f64, n: usize) -> Result<Vec<HceValue>> {
    let exps: Vec<Option<Exp<f64>>> = rates.iter().map(|&r| if r > 0.0 { Exp::new(r).ok() } else { None }).collect();
    let normal = Normal::new(mean, sd).map_err(|e| HceError::invalid(e.to_string()))?;
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        // draw every component so the stream layout does not depend on outcomes
        let mut value = None;
        for (k, e) in exps.iter().enumerate() {
            let t = match e {
                Some(e) => e.sample(rng),
                None => f64::INFINITY,
            };
            if value.is_none() && t <= tau {
                value = Some(HceValue::new(k as u32 + 1, t));
            }
        }
        let z = normal.sample(rng);
        out.push(value.unwrap_or(HceValue::new(rates.len() as u32 + 1, z)));
    }
    Ok(out)
}

/// Both arms' values, drawn from one stream seeded by `seed`.
pub(crate) fn simulate_values(scenario: &Scenario, seed: u64) -> Result<(Vec<HceValue>, Vec<HceValue>)> {
    scenario.validate()?;
    let rates_c = scenario.control_rates();
    let rates_a: Vec<f64> = rates_c.iter().map(|r| r * scenario.hr).collect();
    let mut rng = stream(seed, &[]);
    let tau = scenario.follow_up_days;
    let n = scenario.n_per_arm;
    let active = simulate_arm(&mut rng, &rates_a, tau, scenario.active_mean, scenario.sd, n)?;
    let control = simulate_arm(&mut rng, &rates_c, tau, scenario.control_mean, scenario.sd, n)?;
    Ok((active, control))
}

/// Draws a dataset; identical scenarios (including the seed) give identical data.
pub fn simulate_trial(scenario: &Scenario) -> Result<HceDataset> {
    let (active, control) = simulate_values(scenario, scenario.seed)?;
    let mut subjects = Vec::with_capacity(active.len() + control.len());
    for (arm, values, prefix) in [(Arm::Active, &active, "A"), (Arm::Control, &control, "C")] {
        for (i, v) in values.iter().enumerate() {
            subjects.push(SubjectRecord { subject_id: format!("{prefix}{:05}", i + 1), arm, value: *v });
        }
    }
    HceDataset::new(scenario.config()?, subjects)
}

/// Finds the mean difference giving `target_wo` with everything else fixed.
pub fn tune_mean_difference(scenario: &Scenario, target_wo: f64) -> Result<f64> {
    let f = |d: f64| {
        let s = Scenario { active_mean: scenario.control_mean + d, ..scenario.clone() };
        s.closed_form_win_odds()
    };
    super::bisect_increasing(f, target_wo, -50.0 * scenario.sd, 50.0 * scenario.sd)
        .ok_or_else(|| HceError::invalid(format!("win odds {target_wo} not attainable by shifting the mean")))
}
