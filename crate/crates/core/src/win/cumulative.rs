use serde::Serialize;

use super::counting::arm_keys;
use super::{stats_from_keys, AnalysisOptions, WinStats};
use crate::error::{HceError, Result};
use crate::model::{HceDataset, OrderKey};

/// Win statistics restricted to the first `depth` components.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CumulativeRow {
    pub depth: u32,
    pub included_components: Vec<String>,
    pub win_pct_active: f64,
    pub win_pct_control: f64,
    pub tie_pct: f64,
    pub stats: WinStats,
}

/// Collapses every outcome below `depth` in priority into one shared bucket
/// that ranks above all included outcomes.
fn truncate(keys: &[OrderKey], depth: u32) -> Vec<OrderKey> {
    keys.iter().map(|k| if k.category > depth { OrderKey { category: depth + 1, oriented: 0.0 } } else { *k }).collect()
}

pub fn cumulative_row(dataset: &HceDataset, depth: u32, opts: &AnalysisOptions) -> Result<CumulativeRow> {
    let k = dataset.config().k();
    if depth < 1 || depth > k {
        return Err(HceError::invalid(format!("depth {depth} outside 1..={k}")));
    }
    dataset.require_both_arms()?;
    let (active, control) = arm_keys(dataset);
    let stats = stats_from_keys(&truncate(&active, depth), &truncate(&control, depth), opts)?;
    let pairs = stats.counts.pairs() as f64;
    Ok(CumulativeRow {
        depth,
        included_components: dataset.config().components()[..depth as usize].iter().map(|c| c.name.clone()).collect(),
        win_pct_active: 100.0 * stats.counts.wins as f64 / pairs,
        win_pct_control: 100.0 * stats.counts.losses as f64 / pairs,
        tie_pct: 100.0 * stats.counts.ties as f64 / pairs,
        stats,
    })
}

/// Rows for depths 1..=K; the last row is the full analysis.
pub fn cumulative_components(dataset: &HceDataset, opts: &AnalysisOptions) -> Result<Vec<CumulativeRow>> {
    (1..=dataset.config().k()).map(|d| cumulative_row(dataset, d, opts)).collect()
}
