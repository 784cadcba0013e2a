//! Domain types for hierarchical composite endpoints and their total order.

mod config;
mod io;
mod ordinal;

pub use config::{parse_component_config, ComponentConfig, ComponentKind, ComponentSpec, Direction};
pub use io::{compose_hce, load_dataset, load_wide_dataset, write_dataset, ArmLabels, EventObservation, WideRow};
pub use ordinal::{ordinalize_8, OrdinalTable};

use std::cmp::Ordering;
use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{HceError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Arm {
    Active,
    Control,
}

impl Arm {
    pub fn other(self) -> Arm {
        match self {
            Arm::Active => Arm::Control,
            Arm::Control => Arm::Active,
        }
    }
}

/// One subject's composite outcome.
///
/// `category` is the priority of the worst outcome the subject experienced
/// (1 = most severe, K = the continuous, event-free category). `magnitude` is
/// the event time in days for time-to-event categories and the raw outcome
/// value for the continuous category.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HceValue {
    pub category: u32,
    pub magnitude: f64,
}

impl HceValue {
    pub fn new(category: u32, magnitude: f64) -> Self {
        HceValue { category, magnitude }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Comparison {
    AWins,
    BWins,
    Tie,
}

impl Comparison {
    pub fn reverse(self) -> Comparison {
        match self {
            Comparison::AWins => Comparison::BWins,
            Comparison::BWins => Comparison::AWins,
            Comparison::Tie => Comparison::Tie,
        }
    }
}

/// Position of a value in the HCE order: category-major, then magnitude
/// oriented so that larger is always better. Equal keys are ties.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrderKey {
    pub category: u32,
    pub oriented: f64,
}

impl Eq for OrderKey {}

impl PartialOrd for OrderKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for OrderKey {
    fn cmp(&self, other: &Self) -> Ordering {
        self.category.cmp(&other.category).then_with(|| self.oriented.total_cmp(&other.oriented))
    }
}

/// Pairwise comparison of two HCE values: a less severe category wins; within
/// a category the component's direction decides (for event times the default
/// direction makes the later event the better one); exact equality is a tie.
pub fn compare(a: &HceValue, b: &HceValue, config: &ComponentConfig) -> Comparison {
    match a.category.cmp(&b.category) {
        Ordering::Greater => Comparison::AWins,
        Ordering::Less => Comparison::BWins,
        Ordering::Equal => {
            let dir = config.direction_of(a.category);
            let ord = a.magnitude.partial_cmp(&b.magnitude).unwrap_or(Ordering::Equal);
            let ord = match dir {
                Direction::HigherIsBetter => ord,
                Direction::LowerIsBetter => ord.reverse(),
            };
            match ord {
                Ordering::Greater => Comparison::AWins,
                Ordering::Less => Comparison::BWins,
                Ordering::Equal => Comparison::Tie,
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubjectRecord {
    pub subject_id: String,
    pub arm: Arm,
    pub value: HceValue,
}

/// Arm-labelled subjects plus the component configuration they refer to.
#[derive(Debug, Clone, PartialEq)]
pub struct HceDataset {
    config: ComponentConfig,
    subjects: Vec<SubjectRecord>,
}

impl HceDataset {
    /// Validates every record against `config` and checks id uniqueness.
    pub fn new(config: ComponentConfig, subjects: Vec<SubjectRecord>) -> Result<Self> {
        let mut seen = HashSet::with_capacity(subjects.len());
        for s in &subjects {
            if !seen.insert(s.subject_id.as_str()) {
                return Err(HceError::invalid(format!("duplicate subject id {:?}", s.subject_id)));
            }
            config
                .validate_value(&s.value)
                .map_err(|e| HceError::invalid(format!("subject {:?}: {e}", s.subject_id)))?;
        }
        Ok(HceDataset { config, subjects })
    }

    /// Builds a dataset from bare per-arm values, naming subjects `A0001`, `C0001`, ...
    pub fn from_arms(config: ComponentConfig, active: &[HceValue], control: &[HceValue]) -> Result<Self> {
        let mut subjects = Vec::with_capacity(active.len() + control.len());
        for (i, v) in active.iter().enumerate() {
            subjects.push(SubjectRecord { subject_id: format!("A{:04}", i + 1), arm: Arm::Active, value: *v });
        }
        for (i, v) in control.iter().enumerate() {
            subjects.push(SubjectRecord { subject_id: format!("C{:04}", i + 1), arm: Arm::Control, value: *v });
        }
        Self::new(config, subjects)
    }

    pub fn config(&self) -> &ComponentConfig {
        &self.config
    }

    pub fn subjects(&self) -> &[SubjectRecord] {
        &self.subjects
    }

    pub fn values(&self, arm: Arm) -> Vec<HceValue> {
        self.subjects.iter().filter(|s| s.arm == arm).map(|s| s.value).collect()
    }

    pub fn arm_size(&self, arm: Arm) -> usize {
        self.subjects.iter().filter(|s| s.arm == arm).count()
    }

    /// Fails with a degenerate-analysis error when either arm has no subjects.
    pub fn require_both_arms(&self) -> Result<(usize, usize)> {
        let n = self.arm_size(Arm::Active);
        let m = self.arm_size(Arm::Control);
        if n == 0 || m == 0 {
            return Err(HceError::degenerate(format!("both arms must be non-empty (active {n}, control {m})")));
        }
        Ok((n, m))
    }

    /// Same subjects with the arm labels exchanged.
    pub fn swap_arms(&self) -> HceDataset {
        let subjects = self.subjects.iter().map(|s| SubjectRecord { arm: s.arm.other(), ..s.clone() }).collect();
        HceDataset { config: self.config.clone(), subjects }
    }

    /// Applies `f` to every continuous-category magnitude.
    pub fn map_continuous(&self, f: impl Fn(f64) -> f64) -> Result<HceDataset> {
        let k = self.config.k();
        let subjects = self
            .subjects
            .iter()
            .map(|s| {
                let mut s = s.clone();
                if s.value.category == k {
                    s.value.magnitude = f(s.value.magnitude);
                }
                s
            })
            .collect();
        HceDataset::new(self.config.clone(), subjects)
    }

    /// Fraction of subjects in `arm` (or pooled, for `None`) with a
    /// time-to-event outcome.
    pub fn event_fraction(&self, arm: Option<Arm>) -> f64 {
        let k = self.config.k();
        let (mut events, mut total) = (0usize, 0usize);
        for s in self.subjects.iter().filter(|s| arm.is_none_or(|a| s.arm == a)) {
            total += 1;
            if s.value.category < k {
                events += 1;
            }
        }
        if total == 0 {
            0.0
        } else {
            events as f64 / total as f64
        }
    }

    /// Per-arm subject counts by HCE category (index 0 = category 1).
    pub fn category_counts(&self) -> (Vec<u64>, Vec<u64>) {
        let k = self.config.k() as usize;
        let mut active = vec![0u64; k];
        let mut control = vec![0u64; k];
        for s in &self.subjects {
            let idx = s.value.category as usize - 1;
            match s.arm {
                Arm::Active => active[idx] += 1,
                Arm::Control => control[idx] += 1,
            }
        }
        (active, control)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn kidney() -> ComponentConfig {
        ComponentConfig::kidney_example()
    }

    #[test]
    fn later_death_is_better() {
        let c = kidney();
        assert_eq!(compare(&HceValue::new(1, 100.0), &HceValue::new(1, 50.0), &c), Comparison::AWins);
    }

    #[test]
    fn event_free_beats_any_event() {
        let c = kidney();
        assert_eq!(compare(&HceValue::new(7, 2.0), &HceValue::new(3, 900.0), &c), Comparison::AWins);
        assert_eq!(compare(&HceValue::new(3, 900.0), &HceValue::new(7, -40.0), &c), Comparison::BWins);
    }

    #[test]
    fn identical_values_tie() {
        let c = kidney();
        assert_eq!(compare(&HceValue::new(7, 1.0), &HceValue::new(7, 1.0), &c), Comparison::Tie);
        assert_eq!(compare(&HceValue::new(2, 300.0), &HceValue::new(2, 300.0), &c), Comparison::Tie);
        assert_eq!(compare(&HceValue::new(7, 0.0), &HceValue::new(7, -0.0), &c), Comparison::Tie);
    }

    #[test]
    fn lower_is_better_direction_flips_within_category() {
        let c = parse_component_config(
            r#"{"follow_up_days": 100, "components": [
                {"name": "Death", "kind": "TimeToEvent", "direction": "HigherIsBetter"},
                {"name": "Score", "kind": "Continuous", "direction": "LowerIsBetter"}]}"#,
        )
        .unwrap();
        assert_eq!(compare(&HceValue::new(2, 1.0), &HceValue::new(2, 3.0), &c), Comparison::AWins);
        assert_eq!(c.key(&HceValue::new(2, 1.0)).cmp(&c.key(&HceValue::new(2, 3.0))), Ordering::Greater);
    }

    #[test]
    fn duplicate_ids_rejected() {
        let c = kidney();
        let s = SubjectRecord { subject_id: "S1".into(), arm: Arm::Active, value: HceValue::new(7, 0.0) };
        let err = HceDataset::new(c, vec![s.clone(), s]).unwrap_err();
        assert!(err.to_string().contains("duplicate subject id"));
    }

    #[test]
    fn tte_magnitude_outside_follow_up_rejected() {
        let c = kidney();
        assert!(HceDataset::from_arms(c.clone(), &[HceValue::new(2, 1200.0)], &[]).is_err());
        assert!(HceDataset::from_arms(c.clone(), &[HceValue::new(2, -1.0)], &[]).is_err());
        assert!(HceDataset::from_arms(c, &[HceValue::new(7, -1200.0)], &[]).is_ok());
    }

    fn value() -> impl Strategy<Value = HceValue> {
        (1u32..=7, 0u32..40).prop_map(|(cat, m)| {
            if cat == 7 {
                HceValue::new(7, m as f64 / 4.0 - 5.0)
            } else {
                HceValue::new(cat, (m * 25) as f64)
            }
        })
    }

    proptest! {
        #[test]
        fn compare_is_antisymmetric(a in value(), b in value()) {
            let c = kidney();
            prop_assert_eq!(compare(&a, &b, &c), compare(&b, &a, &c).reverse());
            prop_assert_eq!(compare(&a, &a, &c), Comparison::Tie);
        }

        #[test]
        fn compare_is_transitive(a in value(), b in value(), d in value()) {
            let c = kidney();
            if compare(&a, &b, &c) == Comparison::AWins && compare(&b, &d, &c) == Comparison::AWins {
                prop_assert_eq!(compare(&a, &d, &c), Comparison::AWins);
            }
        }

        #[test]
        fn compare_agrees_with_order_key(a in value(), b in value()) {
            let c = kidney();
            let expected = match c.key(&a).cmp(&c.key(&b)) {
                Ordering::Greater => Comparison::AWins,
                Ordering::Less => Comparison::BWins,
                Ordering::Equal => Comparison::Tie,
            };
            prop_assert_eq!(compare(&a, &b, &c), expected);
        }

        #[test]
        fn increasing_transform_keeps_comparisons(a in value(), b in value()) {
            let c = kidney();
            let f = |x: f64| (x * 0.7).exp() + 3.0 * x;
            let t = |v: HceValue| if v.category == 7 { HceValue::new(7, f(v.magnitude)) } else { v };
            prop_assert_eq!(compare(&a, &b, &c), compare(&t(a), &t(b), &c));
        }
    }
}
