//! Graph with vertex set `G × S₀` on which `G` acts freely.
//!
//! `S₀` holds one representative for each orbit in a maximal `r`-separated
//! set of orbits; `(u, s)` and `(u′, s′)` are joined when
//! `d(us, u′s′) ≤ R = 2r + 1`.

use serde::{Deserialize, Serialize};

use super::quotient::orbits;
use super::{uniform_properness_bound, ActionTable};
use crate::error::{Error, Result};
use crate::geometry::bounded_geometry_bound;
use crate::graph::WeightedGraph;
use crate::metric::{path_metric, FiniteMetricSpace, Metric, EPS};

/// Measured quasi-isometry constants of `(u, s) ↦ us`.
///
/// With `λ = multiplicative` and `c = additive`:
/// `d_X ≤ λ d_Γ` and `d_Γ ≤ λ d_X + c` for all vertex pairs, and every point
/// of `X` lies within `coboundedness` of the image.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Distortion {
    pub multiplicative: Option<f64>,
    pub additive: Option<f64>,
    pub coboundedness: Option<f64>,
}

impl Distortion {
    pub fn is_finite(&self) -> bool {
        [self.multiplicative, self.additive, self.coboundedness]
            .iter()
            .all(|v| v.is_some_and(f64::is_finite))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrbitGraph {
    pub r: f64,
    #[serde(rename = "R")]
    pub big_r: f64,
    /// `S₀`: one point per chosen orbit.
    pub representatives: Vec<usize>,
    /// `(u, s)` for every vertex, `u` a group element and `s ∈ S₀`.
    pub vertices: Vec<(usize, usize)>,
    pub graph: WeightedGraph,
    pub max_valence: usize,
    /// `N₁`: bound on the `r`-capacity of balls of radius `R`.
    pub capacity_bound: usize,
    /// `N₂`: bound on `|{g : d(x, gx) ≤ 2R}|`.
    pub properness_bound: usize,
    pub free_action: bool,
    pub distortion: Distortion,
}

impl OrbitGraph {
    pub fn valence_within_bound(&self) -> bool {
        self.max_valence <= self.capacity_bound * self.properness_bound
    }

    /// Vertex index of `(u, s)`; `s` is a position in `representatives`.
    pub fn vertex(&self, u: usize, s_pos: usize) -> usize {
        u * self.representatives.len() + s_pos
    }
}

pub fn build_orbit_graph(a: &ActionTable, m: &FiniteMetricSpace, r: f64) -> Result<OrbitGraph> {
    if !(r.is_finite() && r > 0.0) {
        return Err(Error::InvalidParameter(format!("r must be positive, got {r}")));
    }
    a.check_isometric(m)?;
    let big_r = 2.0 * r + 1.0;
    let whole: Vec<usize> = (0..a.order()).collect();
    let orbit_list = orbits(a, &whole)?;

    // greedy maximal r-separated set of orbits in X/G, in representative order
    let orbit_dist = |o1: &[usize], o2: &[usize]| {
        o1.iter()
            .flat_map(|&x| o2.iter().map(move |&y| (x, y)))
            .map(|(x, y)| m.dist(x, y))
            .fold(f64::INFINITY, f64::min)
    };
    let mut chosen: Vec<&Vec<usize>> = Vec::new();
    for orbit in &orbit_list {
        if chosen.iter().all(|c| orbit_dist(c, orbit) >= r - EPS) {
            chosen.push(orbit);
        }
    }
    let representatives: Vec<usize> = chosen.iter().map(|o| o[0]).collect();

    let k = representatives.len();
    let mut vertices = Vec::with_capacity(a.order() * k);
    let mut image = Vec::with_capacity(a.order() * k);
    for u in 0..a.order() {
        for &s in &representatives {
            vertices.push((u, s));
            image.push(a.act(u, s));
        }
    }
    let mut graph = WeightedGraph::with_labels(vertices.iter().map(|(u, s)| format!("({u},{s})")).collect());
    for i in 0..vertices.len() {
        for j in i + 1..vertices.len() {
            if m.dist(image[i], image[j]) <= big_r + EPS {
                graph.add_edge(i, j, 1.0)?;
            }
        }
    }

    let free_action = (0..a.order()).filter(|&g| g != a.identity()).all(|g| {
        vertices
            .iter()
            .all(|&(u, _)| a.mul(g, u) != u)
    }) && edges_preserved(a, &graph, k);

    let capacity_bound = bounded_geometry_bound(m, r, big_r)?.bound;
    let properness_bound = uniform_properness_bound(a, m, 2.0 * big_r)?.bound;
    let distortion = measure_distortion(m, &graph, &image);
    Ok(OrbitGraph {
        r,
        big_r,
        max_valence: graph.max_degree(),
        representatives,
        vertices,
        graph,
        capacity_bound,
        properness_bound,
        free_action,
        distortion,
    })
}

/// `g · (u, s) = (gu, s)` maps edges to edges.
fn edges_preserved(a: &ActionTable, graph: &WeightedGraph, k: usize) -> bool {
    let edges = graph.edge_index_map();
    (0..a.order()).all(|g| {
        graph.edges().iter().all(|e| {
            let moved = |v: usize| a.mul(g, v / k) * k + v % k;
            let (x, y) = (moved(e.u), moved(e.v));
            edges.contains_key(&(x.min(y), x.max(y)))
        })
    })
}

fn measure_distortion(m: &FiniteMetricSpace, graph: &WeightedGraph, image: &[usize]) -> Distortion {
    let gamma = path_metric(graph);
    let n = image.len();
    let mut multiplicative: f64 = 1.0;
    let mut additive: f64 = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            let dg = gamma.dist(i, j);
            let dx = m.dist(image[i], image[j]);
            if dg.is_infinite() && dx.is_finite() {
                return Distortion {
                    multiplicative: None,
                    additive: None,
                    coboundedness: None,
                };
            }
            if dx > 0.0 {
                multiplicative = multiplicative.max(dg / dx).max(dx / dg);
            } else {
                additive = additive.max(dg);
            }
        }
    }
    let coboundedness = m
        .dist_to_set(image)
        .into_iter()
        .fold(0.0f64, f64::max);
    Distortion {
        multiplicative: Some(multiplicative),
        additive: Some(additive),
        coboundedness: coboundedness.is_finite().then_some(coboundedness),
    }
}
