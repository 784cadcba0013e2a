use serde::Serialize;

use super::counting::arm_keys;
use crate::error::{HceError, Result};
use crate::model::{HceDataset, OrderKey};

/// Ordinal dominance graph: cumulative control fraction (u) against
/// cumulative active fraction (v), swept from the worst outcome to the best.
/// Outcomes shared by both arms produce diagonal segments.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OdgCurve {
    pub vertices: Vec<(f64, f64)>,
    /// Area of the unit square above the curve; equals the win probability.
    pub area_above: f64,
    pub n_active: u64,
    pub n_control: u64,
}

impl OdgCurve {
    /// Builds the curve from per-outcome group sizes in ascending outcome
    /// order: `(active count, control count)` for each distinct value.
    pub fn from_groups(groups: &[(u64, u64)]) -> Result<OdgCurve> {
        let n: u64 = groups.iter().map(|g| g.0).sum();
        let m: u64 = groups.iter().map(|g| g.1).sum();
        if n == 0 || m == 0 {
            return Err(HceError::degenerate("both arms must be non-empty"));
        }
        let (nf, mf) = (n as f64, m as f64);
        let mut vertices = vec![(0.0, 0.0)];
        let (mut a_cum, mut c_cum) = (0u64, 0u64);
        // twice the area above, in units of 1 / (n m)
        let mut area2: u64 = 0;
        let mut last_dir: Option<bool> = None;
        for &(a_g, c_g) in groups {
            if a_g == 0 && c_g == 0 {
                continue;
            }
            area2 += c_g * (2 * n - 2 * a_cum - a_g);
            a_cum += a_g;
            c_cum += c_g;
            let point = (c_cum as f64 / mf, a_cum as f64 / nf);
            // axis-aligned runs collapse into one segment
            let dir = match (a_g, c_g) {
                (0, _) => Some(false),
                (_, 0) => Some(true),
                _ => None,
            };
            if dir.is_some() && dir == last_dir {
                *vertices.last_mut().unwrap() = point;
            } else {
                vertices.push(point);
            }
            last_dir = dir;
        }
        Ok(OdgCurve { vertices, area_above: area2 as f64 / (2.0 * nf * mf), n_active: n, n_control: m })
    }

    /// Whether `(u, v)` lies on the curve within `tol`.
    pub fn passes_through(&self, u: f64, v: f64, tol: f64) -> bool {
        self.vertices.windows(2).any(|w| {
            let ((x0, y0), (x1, y1)) = (w[0], w[1]);
            let (dx, dy) = (x1 - x0, y1 - y0);
            let len2 = dx * dx + dy * dy;
            let t = if len2 == 0.0 { 0.0 } else { (((u - x0) * dx + (v - y0) * dy) / len2).clamp(0.0, 1.0) };
            let (px, py) = (x0 + t * dx, y0 + t * dy);
            ((px - u).powi(2) + (py - v).powi(2)).sqrt() <= tol
        })
    }
}

/// Groups two key sets into ascending `(active, control)` counts per distinct key.
pub fn key_groups(active: &[OrderKey], control: &[OrderKey]) -> Vec<(u64, u64)> {
    let mut a = active.to_vec();
    let mut c = control.to_vec();
    a.sort_unstable();
    c.sort_unstable();
    let (mut i, mut j) = (0, 0);
    let mut groups = Vec::new();
    while i < a.len() || j < c.len() {
        let key = match (a.get(i), c.get(j)) {
            (Some(x), Some(y)) => *x.min(y),
            (Some(x), None) => *x,
            (None, Some(y)) => *y,
            (None, None) => unreachable!(),
        };
        let (mut a_g, mut c_g) = (0, 0);
        while i < a.len() && a[i] == key {
            a_g += 1;
            i += 1;
        }
        while j < c.len() && c[j] == key {
            c_g += 1;
            j += 1;
        }
        groups.push((a_g, c_g));
    }
    groups
}

pub fn ordinal_dominance_graph(dataset: &HceDataset) -> Result<OdgCurve> {
    let (active, control) = arm_keys(dataset);
    OdgCurve::from_groups(&key_groups(&active, &control))
}

/// Curve over category-level outcomes only (timing and magnitude ignored);
/// every within-category block becomes one diagonal segment.
pub fn category_odg(active_counts: &[u64], control_counts: &[u64]) -> Result<OdgCurve> {
    if active_counts.len() != control_counts.len() {
        return Err(HceError::invalid("category count vectors differ in length"));
    }
    let groups: Vec<(u64, u64)> = active_counts.iter().copied().zip(control_counts.iter().copied()).collect();
    OdgCurve::from_groups(&groups)
}
