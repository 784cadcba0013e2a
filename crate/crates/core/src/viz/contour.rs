//! Marching-squares iso-lines.

use std::collections::BTreeMap;

/// Identifies a grid edge: horizontal edges join `(r, c)`–`(r, c+1)`,
/// vertical edges join `(r, c)`–`(r+1, c)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Edge {
    H(usize, usize),
    V(usize, usize),
}

/// Polylines where the field crosses `level`, in grid coordinates
/// `(column, row)` with linear interpolation along cell edges.
///
/// Closed loops repeat their first point at the end. Saddle cells are split
/// according to whether the cell average lies above the level. A level
/// outside the value range yields no polylines.
pub fn extract_iso_contour(values: &[Vec<f64>], level: f64) -> Vec<Vec<(f64, f64)>> {
    let rows = values.len();
    let cols = values.first().map_or(0, |r| r.len());
    if rows < 2 || cols < 2 || values.iter().any(|r| r.len() != cols) || !level.is_finite() {
        return vec![];
    }
    let (lo, hi) = values.iter().flatten().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    if level < lo || level > hi {
        return vec![];
    }
    let inside = |r: usize, c: usize| values[r][c] >= level;

    let point = |e: Edge| -> (f64, f64) {
        let (r0, c0, r1, c1) = match e {
            Edge::H(r, c) => (r, c, r, c + 1),
            Edge::V(r, c) => (r, c, r + 1, c),
        };
        let (a, b) = (values[r0][c0], values[r1][c1]);
        let t = if b == a { 0.5 } else { ((level - a) / (b - a)).clamp(0.0, 1.0) };
        (c0 as f64 + t * (c1 - c0) as f64, r0 as f64 + t * (r1 - r0) as f64)
    };

    let mut adjacency: BTreeMap<Edge, Vec<Edge>> = BTreeMap::new();
    let mut link = |a: Edge, b: Edge| {
        adjacency.entry(a).or_default().push(b);
        adjacency.entry(b).or_default().push(a);
    };

    for r in 0..rows - 1 {
        for c in 0..cols - 1 {
            // corners counter-clockwise from (r, c); each corner's two edges
            let corners = [(r, c), (r, c + 1), (r + 1, c + 1), (r + 1, c)];
            let corner_edges = [
                [Edge::H(r, c), Edge::V(r, c)],
                [Edge::H(r, c), Edge::V(r, c + 1)],
                [Edge::H(r + 1, c), Edge::V(r, c + 1)],
                [Edge::H(r + 1, c), Edge::V(r, c)],
            ];
            let flags: Vec<bool> = corners.iter().map(|&(rr, cc)| inside(rr, cc)).collect();
            let n_in = flags.iter().filter(|&&f| f).count();
            match n_in {
                0 | 4 => {}
                1 | 3 => {
                    let minority = n_in == 1;
                    let i = flags.iter().position(|&f| f == minority).unwrap();
                    link(corner_edges[i][0], corner_edges[i][1]);
                }
                _ => {
                    if flags[0] == flags[1] || flags[1] == flags[2] {
                        // the two inside corners share a side
                        let edges: Vec<Edge> =
                            (0..4).filter(|&i| flags[i] != flags[(i + 1) % 4]).map(|i| side_edge(r, c, i)).collect();
                        link(edges[0], edges[1]);
                    } else {
                        let avg = corners.iter().map(|&(rr, cc)| values[rr][cc]).sum::<f64>() / 4.0;
                        let cut_inside = avg < level;
                        for i in 0..4 {
                            if flags[i] == cut_inside {
                                link(corner_edges[i][0], corner_edges[i][1]);
                            }
                        }
                    }
                }
            }
        }
    }

    let mut visited: BTreeMap<Edge, bool> = adjacency.keys().map(|&e| (e, false)).collect();
    let mut lines = Vec::new();
    let walk = |start: Edge, visited: &mut BTreeMap<Edge, bool>| -> Vec<Edge> {
        let mut chain = vec![start];
        visited.insert(start, true);
        let mut prev: Option<Edge> = None;
        let mut cur = start;
        loop {
            let next = adjacency[&cur].iter().copied().find(|&n| Some(n) != prev && !visited[&n]);
            match next {
                Some(n) => {
                    visited.insert(n, true);
                    chain.push(n);
                    prev = Some(cur);
                    cur = n;
                }
                None => {
                    if chain.len() > 2 && adjacency[&cur].contains(&start) {
                        chain.push(start);
                    }
                    return chain;
                }
            }
        }
    };
    // open chains start at boundary edges (degree one)
    let ends: Vec<Edge> = adjacency.iter().filter(|(_, n)| n.len() == 1).map(|(&e, _)| e).collect();
    for e in ends {
        if !visited[&e] {
            lines.push(walk(e, &mut visited));
        }
    }
    let rest: Vec<Edge> = adjacency.keys().copied().collect();
    for e in rest {
        if !visited[&e] {
            lines.push(walk(e, &mut visited));
        }
    }
    lines.into_iter().map(|chain| chain.into_iter().map(point).collect()).collect()
}

/// Edge on side `i` of cell `(r, c)`: 0 top, 1 right, 2 bottom, 3 left
/// (sides between consecutive corners).
fn side_edge(r: usize, c: usize, i: usize) -> Edge {
    match i {
        0 => Edge::H(r, c),
        1 => Edge::V(r, c + 1),
        2 => Edge::H(r + 1, c),
        _ => Edge::V(r, c),
    }
}
