//! Pairwise win statistics.

mod bootstrap;
mod counting;
mod cumulative;
mod odg;
mod stats;

pub use bootstrap::{bootstrap_replicates, bootstrap_stats, BootstrapConfig, DEFAULT_BOOT_REPS};
pub use counting::{
    arm_keys, count_keys, count_sorted, tally, tally_keys, win_counts_brute, win_counts_fast, Placements, Tally,
    WinCounts,
};
pub use cumulative::{cumulative_components, cumulative_row, CumulativeRow};
pub use odg::{category_odg, key_groups, ordinal_dominance_graph, OdgCurve};
pub use stats::{serialize_f64, win_loss_covariance, win_statistics, CiMethod, Estimate, PointEstimates, WinStats};

use serde::Serialize;

use crate::error::{HceError, Result};
use crate::model::{HceDataset, OrderKey};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalysisOptions {
    pub alpha: f64,
    pub ci_method: CiMethod,
    pub bootstrap: BootstrapConfig,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        AnalysisOptions { alpha: 0.05, ci_method: CiMethod::Analytic, bootstrap: BootstrapConfig::default() }
    }
}

pub(crate) fn stats_from_keys(active: &[OrderKey], control: &[OrderKey], opts: &AnalysisOptions) -> Result<WinStats> {
    match opts.ci_method {
        CiMethod::Analytic => {
            let (counts, placements) = tally_keys(active, control);
            win_statistics(&counts, &placements, opts.alpha)
        }
        CiMethod::Bootstrap => {
            let counts = count_keys(active.to_vec(), control.to_vec());
            bootstrap_stats(&counts, active, control, opts.alpha, &opts.bootstrap)
        }
    }
}

/// Full-hierarchy win statistics for a dataset.
pub fn analyze(dataset: &HceDataset, opts: &AnalysisOptions) -> Result<WinStats> {
    dataset.require_both_arms()?;
    let (active, control) = arm_keys(dataset);
    stats_from_keys(&active, &control, opts)
}

/// Per-arm category proportions.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Marginals {
    pub active: Vec<f64>,
    pub control: Vec<f64>,
}

impl Marginals {
    pub fn len(&self) -> usize {
        self.active.len()
    }

    pub fn is_empty(&self) -> bool {
        self.active.is_empty()
    }
}

pub fn marginal_proportions(active: &[u64], control: &[u64]) -> Result<Marginals> {
    if active.len() != control.len() || active.is_empty() {
        return Err(HceError::invalid("arms must have the same, non-zero number of categories"));
    }
    let norm = |counts: &[u64]| -> Result<Vec<f64>> {
        let total: u64 = counts.iter().sum();
        if total == 0 {
            return Err(HceError::degenerate("arm has no subjects"));
        }
        Ok(counts.iter().map(|&c| c as f64 / total as f64).collect())
    };
    Ok(Marginals { active: norm(active)?, control: norm(control)? })
}
