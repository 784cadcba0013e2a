use std::io::Read;

use csv::ReaderBuilder;
use serde::Serialize;

use crate::error::{HceError, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OverlayPoint {
    pub hr: f64,
    pub delta: f64,
    pub label: Option<String>,
}

/// User-supplied (hr, delta) points and an optional region drawn over a
/// sunset plot. No inference happens here.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct FeasibilityOverlay {
    pub points: Vec<OverlayPoint>,
    pub polygon: Option<Vec<(f64, f64)>>,
}

impl FeasibilityOverlay {
    pub fn is_empty(&self) -> bool {
        self.points.is_empty() && self.polygon.is_none()
    }
}

/// Validates the overlay. With `hull`, the polygon becomes the convex hull of
/// the points (when they span a region); an explicit polygon must be simple.
pub fn feasibility_overlay(
    points: Vec<OverlayPoint>,
    polygon: Option<Vec<(f64, f64)>>,
    hull: bool,
) -> Result<FeasibilityOverlay> {
    if points.iter().any(|p| !(p.hr.is_finite() && p.delta.is_finite())) {
        return Err(HceError::invalid("overlay points must be finite"));
    }
    let polygon = match (polygon, hull) {
        (Some(poly), _) => {
            if poly.len() < 3 || poly.iter().any(|(x, y)| !(x.is_finite() && y.is_finite())) {
                return Err(HceError::invalid("overlay polygon needs at least 3 finite vertices"));
            }
            if !is_simple(&poly) {
                return Err(HceError::invalid("overlay polygon is self-intersecting"));
            }
            Some(poly)
        }
        (None, true) => {
            let h = convex_hull(&points.iter().map(|p| (p.hr, p.delta)).collect::<Vec<_>>());
            (h.len() >= 3).then_some(h)
        }
        (None, false) => None,
    };
    Ok(FeasibilityOverlay { points, polygon })
}

fn cross(o: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

/// Andrew's monotone chain; counter-clockwise, collinear points dropped.
pub fn convex_hull(points: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut lower: Vec<(f64, f64)> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0.0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<(f64, f64)> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0.0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

fn segments_intersect(p1: (f64, f64), p2: (f64, f64), q1: (f64, f64), q2: (f64, f64)) -> bool {
    let d1 = cross(q1, q2, p1);
    let d2 = cross(q1, q2, p2);
    let d3 = cross(p1, p2, q1);
    let d4 = cross(p1, p2, q2);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0)) && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0)) {
        return true;
    }
    let on = |a: (f64, f64), b: (f64, f64), c: (f64, f64)| {
        c.0 >= a.0.min(b.0) && c.0 <= a.0.max(b.0) && c.1 >= a.1.min(b.1) && c.1 <= a.1.max(b.1)
    };
    (d1 == 0.0 && on(q1, q2, p1))
        || (d2 == 0.0 && on(q1, q2, p2))
        || (d3 == 0.0 && on(p1, p2, q1))
        || (d4 == 0.0 && on(p1, p2, q2))
}

/// True when no two non-adjacent edges of the closed polygon touch.
pub fn is_simple(poly: &[(f64, f64)]) -> bool {
    let n = poly.len();
    for i in 0..n {
        let (a1, a2) = (poly[i], poly[(i + 1) % n]);
        for j in i + 1..n {
            if j == i + 1 || (i == 0 && j == n - 1) {
                continue;
            }
            let (b1, b2) = (poly[j], poly[(j + 1) % n]);
            if segments_intersect(a1, a2, b1, b2) {
                return false;
            }
        }
    }
    true
}

/// Reads `HR,DELTA[,LABEL]` rows.
pub fn load_overlay_csv<R: Read>(input: R) -> Result<Vec<OverlayPoint>> {
    let mut reader = ReaderBuilder::new().trim(csv::Trim::All).flexible(true).from_reader(input);
    let headers = reader.headers().map_err(|e| HceError::Row { line: 1, message: e.to_string() })?.clone();
    let col = |name: &str| headers.iter().position(|h| h.eq_ignore_ascii_case(name));
    let hr_col = col("HR").ok_or(HceError::Row { line: 1, message: "missing column HR".into() })?;
    let d_col = col("DELTA").ok_or(HceError::Row { line: 1, message: "missing column DELTA".into() })?;
    let label_col = col("LABEL");
    let mut points = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let line = i + 2;
        let rec = rec.map_err(|e| HceError::Row { line, message: e.to_string() })?;
        let num = |c: usize, name: &str| -> Result<f64> {
            let f = rec.get(c).unwrap_or("");
            f.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| HceError::Row { line, message: format!("column {name}: cannot parse {f:?}") })
        };
        let label = label_col.and_then(|c| rec.get(c)).filter(|s| !s.is_empty()).map(str::to_string);
        points.push(OverlayPoint { hr: num(hr_col, "HR")?, delta: num(d_col, "DELTA")?, label });
    }
    Ok(points)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(hr: f64, delta: f64) -> OverlayPoint {
        OverlayPoint { hr, delta, label: None }
    }

    #[test]
    fn hull_of_seven_points() {
        let pts =
            vec![pt(0.6, 1.5), pt(0.7, 1.0), pt(0.9, 0.2), pt(0.8, 0.8), pt(0.65, 1.6), pt(0.75, 0.9), pt(0.95, 0.1)];
        let o = feasibility_overlay(pts, None, true).unwrap();
        let poly = o.polygon.unwrap();
        assert!(poly.len() >= 3 && poly.len() <= 7);
        assert!(is_simple(&poly));
        assert!(!poly.contains(&(0.75, 0.9)));
    }

    #[test]
    fn empty_and_single() {
        assert!(feasibility_overlay(vec![], None, true).unwrap().is_empty());
        let o = feasibility_overlay(vec![pt(0.8, 1.0)], None, true).unwrap();
        assert_eq!(o.points.len(), 1);
        assert!(o.polygon.is_none());
    }

    #[test]
    fn bowtie_rejected() {
        let bowtie = vec![(0.0, 0.0), (1.0, 1.0), (1.0, 0.0), (0.0, 1.0)];
        assert!(feasibility_overlay(vec![], Some(bowtie), false).is_err());
        let square = vec![(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)];
        assert!(feasibility_overlay(vec![], Some(square), false).is_ok());
    }

    #[test]
    fn csv_with_optional_label() {
        let pts = load_overlay_csv("HR,DELTA,LABEL\n0.8,1.0,CREDENCE\n0.7,1.2,\n".as_bytes()).unwrap();
        assert_eq!(pts[0].label.as_deref(), Some("CREDENCE"));
        assert_eq!(pts[1].label, None);
        assert!(load_overlay_csv("HR,DELTA\nx,1\n".as_bytes()).is_err());
        let no_label = load_overlay_csv("HR,DELTA\n0.9,0.5\n".as_bytes()).unwrap();
        assert_eq!(no_label, vec![pt(0.9, 0.5)]);
    }
}
