use serde::Serialize;

use super::{Arm, ComponentKind, Direction, HceDataset};
use crate::error::{HceError, Result};

/// Per-arm subject counts over ordered categories (index 0 = worst).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrdinalTable {
    pub labels: Vec<String>,
    pub active: Vec<u64>,
    pub control: Vec<u64>,
}

impl OrdinalTable {
    pub fn counts(&self, arm: Arm) -> &[u64] {
        match arm {
            Arm::Active => &self.active,
            Arm::Control => &self.control,
        }
    }

    pub fn proportions(&self, arm: Arm) -> Vec<f64> {
        let counts = self.counts(arm);
        let total: u64 = counts.iter().sum();
        counts.iter().map(|&c| if total == 0 { 0.0 } else { c as f64 / total as f64 }).collect()
    }
}

/// Eight-category ordinal view of a seven-component kidney HCE: the six
/// event categories, then negative continuous change (category 7) and
/// non-negative change (category 8). Zero counts as non-negative.
pub fn ordinalize_8(dataset: &HceDataset) -> Result<OrdinalTable> {
    let config = dataset.config();
    if config.k() != 7 {
        return Err(HceError::invalid(format!("8-category ordinalization needs K = 7 components, got {}", config.k())));
    }
    let cont = config.continuous();
    if cont.kind != ComponentKind::Continuous || cont.direction != Direction::HigherIsBetter {
        return Err(HceError::invalid("8-category ordinalization needs a higher-is-better continuous component"));
    }
    let mut active = vec![0u64; 8];
    let mut control = vec![0u64; 8];
    for s in dataset.subjects() {
        let idx = match s.value.category {
            7 if s.value.magnitude >= 0.0 => 7,
            7 => 6,
            c => c as usize - 1,
        };
        match s.arm {
            Arm::Active => active[idx] += 1,
            Arm::Control => control[idx] += 1,
        }
    }
    let mut labels: Vec<String> = config.components()[..6].iter().map(|c| c.name.clone()).collect();
    labels.push(format!("{} < 0", cont.name));
    labels.push(format!("{} >= 0", cont.name));
    Ok(OrdinalTable { labels, active, control })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{ComponentConfig, HceValue};

    #[test]
    fn sign_rule_and_boundary() {
        let cfg = ComponentConfig::kidney_example();
        let ds = HceDataset::from_arms(
            cfg,
            &[HceValue::new(7, -2.3), HceValue::new(7, 0.0), HceValue::new(2, 10.0)],
            &[HceValue::new(7, 5.0)],
        )
        .unwrap();
        let t = ordinalize_8(&ds).unwrap();
        assert_eq!(t.active, vec![0, 1, 0, 0, 0, 0, 1, 1]);
        assert_eq!(t.control, vec![0, 0, 0, 0, 0, 0, 0, 1]);
        assert_eq!(t.labels.len(), 8);
    }

    #[test]
    fn proportions_sum_to_one() {
        let cfg = ComponentConfig::kidney_example();
        let active: Vec<HceValue> = (0..10)
            .map(|i| if i < 4 { HceValue::new(i + 1, 30.0) } else { HceValue::new(7, i as f64 - 6.5) })
            .collect();
        let ds = HceDataset::from_arms(cfg, &active, &active[..3]).unwrap();
        let t = ordinalize_8(&ds).unwrap();
        for arm in [Arm::Active, Arm::Control] {
            let s: f64 = t.proportions(arm).iter().sum();
            assert!((s - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn non_kidney_shape_rejected() {
        let cfg = ComponentConfig::from_names(&["Death"], "Score", 365.0).unwrap();
        let ds = HceDataset::from_arms(cfg, &[HceValue::new(2, 1.0)], &[HceValue::new(2, 1.0)]).unwrap();
        assert!(ordinalize_8(&ds).is_err());
    }
}
