//! Zero level set of a sampled scalar field by marching squares.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// Cell edge, identified by its lower-left grid vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Edge {
    /// From `(i, j)` to `(i + 1, j)`.
    Horizontal(usize, usize),
    /// From `(i, j)` to `(i, j + 1)`.
    Vertical(usize, usize),
}

/// Values sampled on a rectilinear grid, `values[j * xs.len() + i]` at
/// `(xs[i], ys[j])`.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledField {
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    pub values: Vec<f64>,
}

impl SampledField {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if xs.len() < 2 || ys.len() < 2 {
            return Err(Error::InvalidGrid("need at least 2×2 samples".into()));
        }
        if values.len() != xs.len() * ys.len() {
            return Err(Error::InvalidGrid(format!(
                "{} values for a {}×{} grid",
                values.len(),
                xs.len(),
                ys.len()
            )));
        }
        let increasing = |v: &[f64]| v.windows(2).all(|w| w[1] > w[0]);
        if !increasing(&xs) || !increasing(&ys) {
            return Err(Error::InvalidGrid("axes must be strictly increasing".into()));
        }
        if values.iter().chain(&xs).chain(&ys).any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("sampled field"));
        }
        Ok(SampledField { xs, ys, values })
    }

    /// Samples `f` on the grid.
    pub fn sample<F>(xs: Vec<f64>, ys: Vec<f64>, f: F) -> Result<Self>
    where
        F: Fn(f64, f64) -> Result<f64>,
    {
        let mut values = Vec::with_capacity(xs.len() * ys.len());
        for &y in &ys {
            for &x in &xs {
                values.push(f(x, y)?);
            }
        }
        Self::new(xs, ys, values)
    }

    fn at(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.xs.len() + i]
    }

    fn crossing(&self, e: Edge) -> (f64, f64) {
        let ((i0, j0), (i1, j1)) = match e {
            Edge::Horizontal(i, j) => ((i, j), (i + 1, j)),
            Edge::Vertical(i, j) => ((i, j), (i, j + 1)),
        };
        let (v0, v1) = (self.at(i0, j0), self.at(i1, j1));
        let s = v0 / (v0 - v1);
        (
            self.xs[i0] + s * (self.xs[i1] - self.xs[i0]),
            self.ys[j0] + s * (self.ys[j1] - self.ys[j0]),
        )
    }
}

/// Polylines along which the field changes sign.
///
/// A vertex is inside when its value is strictly positive; crossings are
/// placed by linear interpolation along cell edges. Ambiguous saddle cells
/// are resolved with the mean of the four corners. Open curves end on the
/// grid boundary; closed curves repeat their first point at the end.
pub fn zero_contour(field: &SampledField) -> Vec<Vec<(f64, f64)>> {
    let (nx, ny) = (field.xs.len(), field.ys.len());
    let inside = |i: usize, j: usize| field.at(i, j) > 0.0;

    let mut segments: Vec<[Edge; 2]> = Vec::new();
    for j in 0..ny - 1 {
        for i in 0..nx - 1 {
            let corners = [
                inside(i, j),
                inside(i + 1, j),
                inside(i + 1, j + 1),
                inside(i, j + 1),
            ];
            let bottom = Edge::Horizontal(i, j);
            let right = Edge::Vertical(i + 1, j);
            let top = Edge::Horizontal(i, j + 1);
            let left = Edge::Vertical(i, j);
            let edges = [bottom, right, top, left];
            let cut: Vec<Edge> = (0..4)
                .filter(|&k| corners[k] != corners[(k + 1) % 4])
                .map(|k| edges[k])
                .collect();
            match cut.len() {
                2 => segments.push([cut[0], cut[1]]),
                4 => {
                    let mean = 0.25
                        * (field.at(i, j)
                            + field.at(i + 1, j)
                            + field.at(i + 1, j + 1)
                            + field.at(i, j + 1));
                    if (mean > 0.0) == corners[0] {
                        segments.push([bottom, right]);
                        segments.push([top, left]);
                    } else {
                        segments.push([bottom, left]);
                        segments.push([right, top]);
                    }
                }
                _ => {}
            }
        }
    }

    let mut by_edge: BTreeMap<Edge, Vec<usize>> = BTreeMap::new();
    for (s, seg) in segments.iter().enumerate() {
        for e in seg {
            by_edge.entry(*e).or_default().push(s);
        }
    }

    let mut used = vec![false; segments.len()];
    let mut chains = Vec::new();
    let walk = |start: usize, from: Edge, used: &mut Vec<bool>| -> Vec<Edge> {
        let mut chain = vec![from];
        let mut seg = start;
        let mut at = from;
        loop {
            used[seg] = true;
            let [a, b] = segments[seg];
            let next = if a == at { b } else { a };
            chain.push(next);
            match by_edge[&next].iter().find(|&&s| !used[s]) {
                Some(&s) => {
                    seg = s;
                    at = next;
                }
                None => break,
            }
        }
        chain
    };

    // Open chains start at edges touched by a single segment.
    for (edge, segs) in &by_edge {
        if segs.len() == 1 && !used[segs[0]] {
            chains.push(walk(segs[0], *edge, &mut used));
        }
    }
    for s in 0..segments.len() {
        if !used[s] {
            chains.push(walk(s, segments[s][0], &mut used));
        }
    }

    chains
        .into_iter()
        .map(|c| c.into_iter().map(|e| field.crossing(e)).collect())
        .collect()
}
