#![allow(dead_code)]

use hce_core::model::{ComponentConfig, ComponentKind, ComponentSpec, Direction, HceDataset, HceValue};
use rand::Rng;
use rand_distr::{Distribution, Normal};

pub fn config(lower_is_better: [bool; 3]) -> ComponentConfig {
    let dir = |b: bool| if b { Direction::LowerIsBetter } else { Direction::HigherIsBetter };
    let spec = |name: &str, kind, priority, d| ComponentSpec { name: name.into(), kind, priority, direction: d };
    ComponentConfig::new(
        vec![
            spec("Death", ComponentKind::TimeToEvent, 1, dir(lower_is_better[0])),
            spec("Hospitalization", ComponentKind::TimeToEvent, 2, dir(lower_is_better[1])),
            spec("Score", ComponentKind::Continuous, 3, dir(lower_is_better[2])),
        ],
        100.0,
    )
    .unwrap()
}

/// Random mixed dataset. With `heavy_ties`, times and scores come from a
/// handful of values so that exact ties are common.
pub fn random_dataset(rng: &mut impl Rng, max_n: usize, heavy_ties: bool) -> HceDataset {
    let cfg = config([rng.random_bool(0.3), rng.random_bool(0.3), rng.random_bool(0.3)]);
    let n = rng.random_range(1..=max_n);
    let m = rng.random_range(1..=max_n);
    let p_event = rng.random_range(0.0..0.9);
    let shift = rng.random_range(-1.0..1.0);
    let normal = Normal::new(0.0, 1.0).unwrap();
    let draw = |rng: &mut dyn rand::RngCore, offset: f64| -> HceValue {
        if rng.random_bool(p_event) {
            let cat = if rng.random_bool(0.4) { 1 } else { 2 };
            let t = if heavy_ties {
                rng.random_range(0..=4) as f64 * 25.0
            } else {
                (rng.random_range(0.0..100.0f64) * 10.0).round() / 10.0
            };
            HceValue::new(cat, t)
        } else {
            let x = normal.sample(rng) + offset;
            HceValue::new(3, if heavy_ties { x.round() } else { x })
        }
    };
    let a: Vec<HceValue> = (0..n).map(|_| draw(rng, shift)).collect();
    let c: Vec<HceValue> = (0..m).map(|_| draw(rng, 0.0)).collect();
    HceDataset::from_arms(cfg, &a, &c).unwrap()
}

/// Continuous-only two-arm fixture from evenly spaced normal quantiles;
/// `bin` floors scores into bins of that width (nested for 1, 2, 4).
pub fn coarsening_fixture(bin: Option<f64>) -> HceDataset {
    use statrs::distribution::{ContinuousCDF, Normal as StdNormal};
    let n = 150;
    let z = StdNormal::standard();
    let q: Vec<f64> = (0..n).map(|i| z.inverse_cdf((i as f64 + 0.5) / n as f64)).collect();
    let f = |x: f64| bin.map_or(x, |w| (x / w).floor());
    let cfg = ComponentConfig::from_names(&["Death"], "Score", 100.0).unwrap();
    let a: Vec<HceValue> = q.iter().map(|x| HceValue::new(2, f(x + 0.4))).collect();
    let c: Vec<HceValue> = q.iter().map(|x| HceValue::new(2, f(*x))).collect();
    HceDataset::from_arms(cfg, &a, &c).unwrap()
}
