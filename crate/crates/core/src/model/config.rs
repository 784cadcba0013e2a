use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::{HceValue, OrderKey};
use crate::error::{HceError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ComponentKind {
    #[serde(alias = "time_to_event", alias = "tte")]
    TimeToEvent,
    #[serde(alias = "continuous")]
    Continuous,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    #[serde(alias = "higher_is_better", alias = "higher")]
    HigherIsBetter,
    #[serde(alias = "lower_is_better", alias = "lower")]
    LowerIsBetter,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComponentSpec {
    pub name: String,
    pub kind: ComponentKind,
    /// 1 = most severe.
    pub priority: u32,
    /// Which magnitudes are favorable within this component. For event
    /// times, `HigherIsBetter` (the default) means a later event wins.
    pub direction: Direction,
}

/// Ordered components (priority 1..K, the continuous one last) and the fixed
/// follow-up window.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComponentConfig {
    components: Vec<ComponentSpec>,
    follow_up: f64,
}

#[derive(Deserialize)]
struct RawConfig {
    follow_up_days: f64,
    components: Vec<RawComponent>,
}

#[derive(Deserialize)]
struct RawComponent {
    name: String,
    kind: ComponentKind,
    #[serde(default)]
    direction: Option<Direction>,
}

/// Parses the JSON component configuration. Priorities follow array order.
pub fn parse_component_config(text: &str) -> Result<ComponentConfig> {
    let raw: RawConfig =
        serde_json::from_str(text).map_err(|e| HceError::Config(format!("malformed document: {e}")))?;
    let components = raw
        .components
        .into_iter()
        .enumerate()
        .map(|(i, c)| ComponentSpec {
            name: c.name,
            kind: c.kind,
            priority: i as u32 + 1,
            direction: c.direction.unwrap_or(Direction::HigherIsBetter),
        })
        .collect();
    ComponentConfig::new(components, raw.follow_up_days)
}

impl ComponentConfig {
    pub fn new(components: Vec<ComponentSpec>, follow_up: f64) -> Result<Self> {
        if !(follow_up.is_finite() && follow_up > 0.0) {
            return Err(HceError::Config(format!("follow_up_days must be positive, got {follow_up}")));
        }
        if components.is_empty() {
            return Err(HceError::Config("at least one component is required".into()));
        }
        let mut names = HashSet::new();
        for (i, c) in components.iter().enumerate() {
            if c.name.trim().is_empty() {
                return Err(HceError::Config(format!("component {} has an empty name", i + 1)));
            }
            if !names.insert(c.name.as_str()) {
                return Err(HceError::Config(format!("duplicate name {:?}", c.name)));
            }
            if c.priority != i as u32 + 1 {
                return Err(HceError::Config(format!(
                    "priorities must be consecutive from 1; {:?} has {}",
                    c.name, c.priority
                )));
            }
        }
        let n_cont = components.iter().filter(|c| c.kind == ComponentKind::Continuous).count();
        match n_cont {
            0 => return Err(HceError::Config("exactly one Continuous component is required, found none".into())),
            1 => {}
            n => return Err(HceError::Config(format!("exactly one Continuous component is required, found {n}"))),
        }
        if components.last().map(|c| c.kind) != Some(ComponentKind::Continuous) {
            return Err(HceError::Config("continuous must be last".into()));
        }
        Ok(ComponentConfig { components, follow_up })
    }

    /// Builds a config from TTE names plus one continuous name, all with the
    /// default higher-is-better direction.
    pub fn from_names(tte: &[&str], continuous: &str, follow_up: f64) -> Result<Self> {
        let mut components: Vec<ComponentSpec> = tte
            .iter()
            .enumerate()
            .map(|(i, n)| ComponentSpec {
                name: n.to_string(),
                kind: ComponentKind::TimeToEvent,
                priority: i as u32 + 1,
                direction: Direction::HigherIsBetter,
            })
            .collect();
        components.push(ComponentSpec {
            name: continuous.to_string(),
            kind: ComponentKind::Continuous,
            priority: tte.len() as u32 + 1,
            direction: Direction::HigherIsBetter,
        });
        Self::new(components, follow_up)
    }

    /// Seven-component kidney layout over three years of follow-up with
    /// placeholder names for outcomes 3 to 6.
    pub fn kidney_example() -> Self {
        Self::from_names(
            &["Death", "Kidney failure", "Outcome 3", "Outcome 4", "Outcome 5", "Outcome 6"],
            "eGFR change",
            1095.0,
        )
        .expect("static config is valid")
    }

    pub fn components(&self) -> &[ComponentSpec] {
        &self.components
    }

    /// Number of components; also the continuous category.
    pub fn k(&self) -> u32 {
        self.components.len() as u32
    }

    pub fn follow_up(&self) -> f64 {
        self.follow_up
    }

    pub fn component(&self, category: u32) -> &ComponentSpec {
        &self.components[category as usize - 1]
    }

    pub fn continuous(&self) -> &ComponentSpec {
        self.components.last().expect("non-empty")
    }

    pub fn direction_of(&self, category: u32) -> Direction {
        self.component(category).direction
    }

    pub fn kind_of(&self, category: u32) -> ComponentKind {
        self.component(category).kind
    }

    /// Sort key consistent with [`super::compare`].
    pub fn key(&self, v: &HceValue) -> OrderKey {
        let m = if v.magnitude == 0.0 { 0.0 } else { v.magnitude };
        let oriented = match self.direction_of(v.category) {
            Direction::HigherIsBetter => m,
            Direction::LowerIsBetter => -m,
        };
        OrderKey { category: v.category, oriented }
    }

    pub fn validate_value(&self, v: &HceValue) -> Result<()> {
        if v.category < 1 || v.category > self.k() {
            return Err(HceError::invalid(format!("category {} out of range 1..={}", v.category, self.k())));
        }
        match self.kind_of(v.category) {
            ComponentKind::TimeToEvent => {
                if !(v.magnitude >= 0.0 && v.magnitude <= self.follow_up) {
                    return Err(HceError::invalid(format!(
                        "event time {} outside [0, {}]",
                        v.magnitude, self.follow_up
                    )));
                }
            }
            ComponentKind::Continuous => {
                if !v.magnitude.is_finite() {
                    return Err(HceError::invalid(format!("continuous value {} is not finite", v.magnitude)));
                }
            }
        }
        Ok(())
    }

    /// Serializes back into the JSON document accepted by
    /// [`parse_component_config`].
    pub fn to_json(&self) -> String {
        let comps: Vec<serde_json::Value> = self
            .components
            .iter()
            .map(|c| serde_json::json!({"name": c.name, "kind": c.kind, "direction": c.direction}))
            .collect();
        serde_json::to_string_pretty(&serde_json::json!({
            "follow_up_days": self.follow_up,
            "components": comps,
        }))
        .expect("config serializes")
    }
}
