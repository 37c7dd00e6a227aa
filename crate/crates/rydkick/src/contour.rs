//! Iso-level extraction from a gridded scalar field by marching squares,
//! with segment chaining into polylines. Output order is deterministic:
//! cells are scanned row-major and chains start from the earliest unused
//! segment.

/// A scalar field sampled on the tensor grid `axis_a x axis_b`;
/// `values[i][j]` belongs to `(axis_a[i], axis_b[j])`.
#[derive(Clone, Debug)]
pub struct Field2d {
    pub axis_a: Vec<f64>,
    pub axis_b: Vec<f64>,
    pub values: Vec<Vec<f64>>,
}

/// A chained iso-line in `(a, b)` coordinates.
pub type Polyline = Vec<(f64, f64)>;

#[derive(Clone, Copy, PartialEq)]
struct Point {
    a: f64,
    b: f64,
}

impl Point {
    fn key(&self) -> (u64, u64) {
        (self.a.to_bits(), self.b.to_bits())
    }
}

/// Extract the iso-lines of `field = level`.
pub fn extract_contours(field: &Field2d, level: f64) -> Vec<Polyline> {
    let segments = marching_squares(field, level);
    chain_segments(&segments)
}

fn marching_squares(field: &Field2d, level: f64) -> Vec<(Point, Point)> {
    let na = field.axis_a.len();
    let nb = field.axis_b.len();
    let mut segments = Vec::new();
    // Nudge node values sitting exactly on the level to keep cell topology
    // non-degenerate.
    let sample = |i: usize, j: usize| -> f64 {
        let v = field.values[i][j];
        if v == level {
            level + level.abs().max(1.0) * 1e-12
        } else {
            v
        }
    };
    let interp = |x0: f64, x1: f64, v0: f64, v1: f64| -> f64 {
        x0 + (level - v0) / (v1 - v0) * (x1 - x0)
    };
    for i in 0..na.saturating_sub(1) {
        for j in 0..nb.saturating_sub(1) {
            let (a0, a1) = (field.axis_a[i], field.axis_a[i + 1]);
            let (b0, b1) = (field.axis_b[j], field.axis_b[j + 1]);
            let v00 = sample(i, j);
            let v01 = sample(i, j + 1);
            let v10 = sample(i + 1, j);
            let v11 = sample(i + 1, j + 1);
            if !(v00.is_finite() && v01.is_finite() && v10.is_finite() && v11.is_finite()) {
                continue;
            }
            let mut case = 0usize;
            if v00 > level {
                case |= 1;
            }
            if v10 > level {
                case |= 2;
            }
            if v11 > level {
                case |= 4;
            }
            if v01 > level {
                case |= 8;
            }
            if case == 0 || case == 15 {
                continue;
            }
            // Crossing points on the four cell edges.
            let bottom = || Point { a: interp(a0, a1, v00, v10), b: b0 };
            let top = || Point { a: interp(a0, a1, v01, v11), b: b1 };
            let left = || Point { a: a0, b: interp(b0, b1, v00, v01) };
            let right = || Point { a: a1, b: interp(b0, b1, v10, v11) };
            match case {
                1 | 14 => segments.push((bottom(), left())),
                2 | 13 => segments.push((bottom(), right())),
                3 | 12 => segments.push((left(), right())),
                4 | 11 => segments.push((top(), right())),
                6 | 9 => segments.push((bottom(), top())),
                7 | 8 => segments.push((top(), left())),
                5 | 10 => {
                    // Saddle: split by the cell-center average.
                    let center = (v00 + v01 + v10 + v11) / 4.0;
                    let flip = (center > level) == (case == 5);
                    if flip {
                        segments.push((bottom(), right()));
                        segments.push((top(), left()));
                    } else {
                        segments.push((bottom(), left()));
                        segments.push((top(), right()));
                    }
                }
                _ => unreachable!(),
            }
        }
    }
    segments
}

/// Join segments that share bit-identical endpoints (shared cell edges
/// interpolate from the same node values, so the coordinates match exactly).
fn chain_segments(segments: &[(Point, Point)]) -> Vec<Polyline> {
    use std::collections::HashMap;
    let mut by_endpoint: HashMap<(u64, u64), Vec<usize>> = HashMap::new();
    for (idx, (p, q)) in segments.iter().enumerate() {
        by_endpoint.entry(p.key()).or_default().push(idx);
        by_endpoint.entry(q.key()).or_default().push(idx);
    }
    let mut used = vec![false; segments.len()];
    let mut polylines = Vec::new();
    for start in 0..segments.len() {
        if used[start] {
            continue;
        }
        used[start] = true;
        let (p, q) = segments[start];
        let mut chain = std::collections::VecDeque::from([p, q]);
        for forward in [true, false] {
            loop {
                let tip = if forward { *chain.back().unwrap() } else { *chain.front().unwrap() };
                let Some(candidates) = by_endpoint.get(&tip.key()) else { break };
                let Some(&next_idx) = candidates.iter().find(|i| !used[**i]) else { break };
                used[next_idx] = true;
                let (a, b) = segments[next_idx];
                let next = if a.key() == tip.key() { b } else { a };
                if forward {
                    chain.push_back(next);
                } else {
                    chain.push_front(next);
                }
            }
        }
        polylines.push(chain.into_iter().map(|pt| (pt.a, pt.b)).collect());
    }
    polylines
}
