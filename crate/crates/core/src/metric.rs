//! Finite metric spaces, graph path metrics and Gromov products.
//!
//! Distances are `f64`; an infinite distance (points in different
//! components) is the IEEE infinity sentinel [`UNREACHABLE`], never a large
//! finite number. JSON writes it as `null`.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, VecDeque};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{check_index, Error, Result};
use crate::graph::WeightedGraph;

/// Absolute tolerance for comparisons between computed lengths.
pub const EPS: f64 = 1e-9;

/// Distance between points in different components.
pub const UNREACHABLE: f64 = f64::INFINITY;

/// Read access to a metric on the points `0..len()`.
pub trait Metric: Sync {
    fn len(&self) -> usize;

    fn dist(&self, x: usize, y: usize) -> f64;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `d(x, set)` for every point `x`; [`UNREACHABLE`] everywhere if `set` is empty.
    fn dist_to_set(&self, set: &[usize]) -> Vec<f64> {
        (0..self.len())
            .map(|x| {
                set.iter()
                    .map(|&y| self.dist(x, y))
                    .fold(UNREACHABLE, f64::min)
            })
            .collect()
    }
}

/// Symmetric distance matrix over `n` points, stored row-major.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MetricJson", into = "MetricJson")]
pub struct FiniteMetricSpace {
    n: usize,
    dist: Vec<f64>,
}

impl FiniteMetricSpace {
    /// Builds and validates a metric: zero diagonal, symmetry, non-negativity
    /// and the triangle inequality (up to [`EPS`]).
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        let mut dist = Vec::with_capacity(n * n);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidMetric(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            dist.extend(row);
        }
        let m = Self { n, dist };
        m.validate()?;
        Ok(m)
    }

    pub(crate) fn from_flat_unchecked(n: usize, dist: Vec<f64>) -> Self {
        debug_assert_eq!(dist.len(), n * n);
        Self { n, dist }
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n;
        for x in 0..n {
            if self.dist(x, x) != 0.0 {
                return Err(Error::InvalidMetric(format!("d({x},{x}) is not 0")));
            }
            for y in 0..n {
                let d = self.dist(x, y);
                if d.is_nan() || d < 0.0 {
                    return Err(Error::InvalidMetric(format!("d({x},{y}) = {d}")));
                }
                if d != self.dist(y, x) {
                    return Err(Error::InvalidMetric(format!("d({x},{y}) != d({y},{x})")));
                }
            }
        }
        for y in 0..n {
            for x in 0..n {
                let dxy = self.dist(x, y);
                if dxy.is_infinite() {
                    continue;
                }
                for z in 0..n {
                    let dyz = self.dist(y, z);
                    if self.dist(x, z) > dxy + dyz + EPS {
                        return Err(Error::InvalidMetric(format!(
                            "triangle inequality fails for ({x}, {y}, {z})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn points(&self) -> usize {
        self.n
    }

    pub fn row(&self, x: usize) -> &[f64] {
        &self.dist[x * self.n..(x + 1) * self.n]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.n).map(|x| self.row(x).to_vec()).collect()
    }

    pub fn is_connected(&self) -> bool {
        self.dist.iter().all(|d| d.is_finite())
    }

    /// Largest distance; [`UNREACHABLE`] for a disconnected space, 0 when empty.
    pub fn diameter(&self) -> f64 {
        self.dist.iter().copied().fold(0.0, f64::max)
    }

    /// Smallest positive distance, if any.
    pub fn min_positive_distance(&self) -> Option<f64> {
        self.dist
            .iter()
            .copied()
            .filter(|&d| d > 0.0)
            .min_by(f64::total_cmp)
    }

    /// Metric with every distance multiplied by `lambda`.
    pub fn rescale(&self, lambda: f64) -> Result<Self> {
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "rescaling factor must be positive, got {lambda}"
            )));
        }
        Ok(Self {
            n: self.n,
            dist: self.dist.iter().map(|d| d * lambda).collect(),
        })
    }

    /// The metric restricted to `subset`, in the given order.
    pub fn restrict(&self, subset: &[usize]) -> Result<Self> {
        for &x in subset {
            check_index(x, self.n)?;
        }
        let k = subset.len();
        let mut dist = Vec::with_capacity(k * k);
        for &x in subset {
            dist.extend(subset.iter().map(|&y| self.dist(x, y)));
        }
        Ok(Self { n: k, dist })
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

impl Metric for FiniteMetricSpace {
    fn len(&self) -> usize {
        self.n
    }

    #[inline]
    fn dist(&self, x: usize, y: usize) -> f64 {
        self.dist[x * self.n + y]
    }

    fn dist_to_set(&self, set: &[usize]) -> Vec<f64> {
        let mut out = vec![UNREACHABLE; self.n];
        for &y in set {
            for (o, &d) in out.iter_mut().zip(self.row(y)) {
                *o = o.min(d);
            }
        }
        out
    }
}

#[derive(Serialize, Deserialize)]
struct MetricJson {
    points: usize,
    dist: Vec<Vec<Option<f64>>>,
}

impl TryFrom<MetricJson> for FiniteMetricSpace {
    type Error = Error;

    fn try_from(raw: MetricJson) -> Result<Self> {
        if raw.dist.len() != raw.points {
            return Err(Error::InvalidMetric(format!(
                "declared {} points but found {} rows",
                raw.points,
                raw.dist.len()
            )));
        }
        let rows = raw
            .dist
            .into_iter()
            .map(|row| row.into_iter().map(|d| d.unwrap_or(UNREACHABLE)).collect())
            .collect();
        FiniteMetricSpace::new(rows)
    }
}

impl From<FiniteMetricSpace> for MetricJson {
    fn from(m: FiniteMetricSpace) -> Self {
        MetricJson {
            points: m.n,
            dist: (0..m.n)
                .map(|x| {
                    m.row(x)
                        .iter()
                        .map(|&d| d.is_finite().then_some(d))
                        .collect()
                })
                .collect(),
        }
    }
}

/// All-pairs shortest-path metric of `g`; [`UNREACHABLE`] across components.
pub fn path_metric(g: &WeightedGraph) -> FiniteMetricSpace {
    let n = g.vertex_count();
    let rows: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|s| shortest_paths(g, &[s], None))
        .collect();
    FiniteMetricSpace::from_flat_unchecked(n, rows.concat())
}

/// `½ (d(x,z) + d(y,z) − d(x,y))`, the Gromov product of `x` and `y` at `z`.
pub fn gromov_product<M: Metric + ?Sized>(m: &M, x: usize, y: usize, z: usize) -> Result<f64> {
    for p in [x, y, z] {
        check_index(p, m.len())?;
    }
    let (dxz, dyz, dxy) = (m.dist(x, z), m.dist(y, z), m.dist(x, y));
    if !(dxz.is_finite() && dyz.is_finite() && dxy.is_finite()) {
        return Err(Error::DisconnectedTriple(x, y, z));
    }
    Ok(0.5 * (dxz + dyz - dxy))
}

/// Path metric of a graph evaluated on demand by single-source searches.
///
/// Useful when the dense matrix would not fit (large Cayley-ball windows).
pub struct GraphMetric<'g> {
    graph: &'g WeightedGraph,
}

impl<'g> GraphMetric<'g> {
    pub fn new(graph: &'g WeightedGraph) -> Self {
        Self { graph }
    }

    pub fn graph(&self) -> &WeightedGraph {
        self.graph
    }

    pub fn row(&self, x: usize) -> Vec<f64> {
        shortest_paths(self.graph, &[x], None)
    }
}

impl Metric for GraphMetric<'_> {
    fn len(&self) -> usize {
        self.graph.vertex_count()
    }

    fn dist(&self, x: usize, y: usize) -> f64 {
        if x == y {
            return 0.0;
        }
        shortest_paths(self.graph, &[x], Some(y))[y]
    }

    fn dist_to_set(&self, set: &[usize]) -> Vec<f64> {
        shortest_paths(self.graph, set, None)
    }
}

#[derive(Clone, Copy, PartialEq)]
struct Frontier(f64, usize);

impl Eq for Frontier {}

impl Ord for Frontier {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.total_cmp(&self.0).then(other.1.cmp(&self.1))
    }
}

impl PartialOrd for Frontier {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Multi-source shortest distances. Stops early once `target` is settled;
/// entries not settled by then are left at [`UNREACHABLE`].
pub(crate) fn shortest_paths(g: &WeightedGraph, sources: &[usize], target: Option<usize>) -> Vec<f64> {
    let n = g.vertex_count();
    let mut dist = vec![UNREACHABLE; n];
    if let Some(unit) = g.uniform_length() {
        // breadth-first search in hop counts
        let mut hops = vec![usize::MAX; n];
        let mut queue = VecDeque::new();
        for &s in sources {
            if hops[s] == usize::MAX {
                hops[s] = 0;
                queue.push_back(s);
            }
        }
        while let Some(u) = queue.pop_front() {
            if Some(u) == target {
                break;
            }
            for &(v, _) in g.neighbors(u) {
                if hops[v] == usize::MAX {
                    hops[v] = hops[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        for (d, h) in dist.iter_mut().zip(hops) {
            if h != usize::MAX {
                *d = h as f64 * unit;
            }
        }
        return dist;
    }
    let mut heap = BinaryHeap::new();
    for &s in sources {
        dist[s] = 0.0;
        heap.push(Frontier(0.0, s));
    }
    let mut done = vec![false; n];
    while let Some(Frontier(d, u)) = heap.pop() {
        if done[u] {
            continue;
        }
        done[u] = true;
        if Some(u) == target {
            break;
        }
        for &(v, len) in g.neighbors(u) {
            let nd = d + len;
            if nd < dist[v] {
                dist[v] = nd;
                heap.push(Frontier(nd, v));
            }
        }
    }
    dist
}
