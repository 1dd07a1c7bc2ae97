//! Cone-off spaces: a cone of radius `ρ` attached along each subset `Y` of a
//! family, realized on base vertices plus one apex per cone.
//!
//! Inside a cone, two rim points at induced distance `d_Y` subtend the angle
//! `θ = min(π, d_Y / sinh ρ)` at the apex and points at heights `r, r′` are at
//! distance `arccosh(cosh r cosh r′ − sinh r sinh r′ cos θ)`.

mod comparison;
mod params;

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::actions::ActionTable;
use crate::error::{check_index, Error, Result};
use crate::graph::WeightedGraph;
use crate::metric::{path_metric, FiniteMetricSpace, Metric, EPS};

pub use comparison::{
    ball_injectivity_dehn, ball_injectivity_table, coneoff_quotient, quotient_comparison, ConeOffQuotient,
    InjectivityReport, QuotientComparison,
};
pub use params::{
    check_sc_hypotheses, delta_param, inj_param, inj_param_windowed, Clause, DeltaParam, InjParam, ScConstants,
    ScHypothesisReport, ScParameters, CONSTANTS_ENV,
};

/// Apex angle `min(π, d_Y / sinh ρ)`; an infinite `d_Y` gives `π`.
pub fn cone_angle(d_y: f64, rho: f64) -> f64 {
    if d_y.is_infinite() {
        return PI;
    }
    (d_y / rho.sinh()).min(PI)
}

/// Distance in the cone of radius `rho` between points at heights `r` and
/// `r2` above rim points at induced distance `d_y`. Returns NaN outside
/// `0 ≤ r, r2 ≤ rho`, `d_y ≥ 0`, `rho > 0`.
pub fn cone_distance(r: f64, r2: f64, d_y: f64, rho: f64) -> f64 {
    let tol = EPS * rho.max(1.0);
    if !(rho > 0.0 && r >= 0.0 && r2 >= 0.0 && r <= rho + tol && r2 <= rho + tol && d_y >= 0.0) {
        return f64::NAN;
    }
    let theta = cone_angle(d_y, rho);
    // cosh d − 1 = 2 sinh²((r − r′)/2) + 2 sinh r sinh r′ sin²(θ/2)
    let a = ((r - r2) / 2.0).sinh();
    let b = (theta / 2.0).sin();
    let s = a * a + r.sinh() * r2.sinh() * b * b;
    2.0 * s.sqrt().asinh()
}

/// One pair `(H, Y)`: `H` lists group elements, `Y` lists vertices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeEntry {
    #[serde(rename = "H", default)]
    pub subgroup: Vec<usize>,
    #[serde(rename = "Y")]
    pub support: Vec<usize>,
}

impl ConeEntry {
    fn canonical(mut self) -> Self {
        self.subgroup.sort_unstable();
        self.subgroup.dedup();
        self.support.sort_unstable();
        self.support.dedup();
        self
    }

    /// `(gHg⁻¹, gY)`.
    pub fn translate(&self, a: &ActionTable, g: usize) -> ConeEntry {
        let gi = a.inverse(g);
        ConeEntry {
            subgroup: self.subgroup.iter().map(|&h| a.mul(a.mul(g, h), gi)).collect(),
            support: self.support.iter().map(|&y| a.act(g, y)).collect(),
        }
        .canonical()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConeFamily {
    pub rho: f64,
    pub cones: Vec<ConeEntry>,
}

impl ConeFamily {
    pub fn new(rho: f64, cones: Vec<ConeEntry>) -> Result<Self> {
        if !(rho.is_finite() && rho > 0.0) {
            return Err(Error::InvalidParameter(format!("rho must be positive, got {rho}")));
        }
        Ok(ConeFamily {
            rho,
            cones: cones.into_iter().map(ConeEntry::canonical).collect(),
        })
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let raw: ConeFamily = serde_json::from_str(s)?;
        ConeFamily::new(raw.rho, raw.cones)
    }

    pub fn len(&self) -> usize {
        self.cones.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cones.is_empty()
    }

    /// Checks supports against `points` and, when an action is given, that
    /// each `H` is a subgroup preserving its `Y`.
    pub fn validate(&self, points: usize, a: Option<&ActionTable>) -> Result<()> {
        for (i, c) in self.cones.iter().enumerate() {
            if c.support.is_empty() {
                return Err(Error::InvalidParameter(format!("cone {i} has an empty support")));
            }
            for &y in &c.support {
                check_index(y, points)?;
            }
            if let Some(a) = a {
                if !c.subgroup.is_empty() && !a.is_subgroup(&c.subgroup) {
                    return Err(Error::InvalidAction(format!("H of cone {i} is not a subgroup")));
                }
                for &h in &c.subgroup {
                    let mut image: Vec<usize> = c.support.iter().map(|&y| a.act(h, y)).collect();
                    image.sort_unstable();
                    if image != c.support {
                        return Err(Error::InvalidAction(format!("H of cone {i} does not preserve Y")));
                    }
                }
            }
        }
        Ok(())
    }

    /// Closes the family under `(H, Y) ↦ (gHg⁻¹, gY)`. Listed entries come
    /// first; translates follow in order of entry, then element.
    pub fn expand(&self, a: &ActionTable) -> Result<ConeFamily> {
        self.validate(a.points(), Some(a))?;
        let mut cones: Vec<ConeEntry> = Vec::new();
        for c in &self.cones {
            if !cones.contains(c) {
                cones.push(c.clone());
            }
        }
        for c in &self.cones {
            for g in 0..a.order() {
                let t = c.translate(a, g);
                if !cones.contains(&t) {
                    cones.push(t);
                }
            }
        }
        Ok(ConeFamily { rho: self.rho, cones })
    }
}

/// Base graph plus apices. Vertices `0..base_vertices` are the base; apex
/// `i` (for cone `i`) is vertex `base_vertices + i`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConeOffSpace {
    pub base_vertices: usize,
    pub rho: f64,
    pub graph: WeightedGraph,
    pub apices: Vec<usize>,
    pub rim_edges: usize,
    pub chord_edges: usize,
}

impl ConeOffSpace {
    pub fn metric(&self) -> FiniteMetricSpace {
        path_metric(&self.graph)
    }

    /// Cone-off distances between base vertices only.
    pub fn base_metric(&self) -> Result<FiniteMetricSpace> {
        let base: Vec<usize> = (0..self.base_vertices).collect();
        self.metric().restrict(&base)
    }

    /// Extends `a` to the apices: `g` sends the apex of `(H, Y)` to the apex
    /// of `(gHg⁻¹, gY)`. The family must be closed under `a`.
    pub fn extend_action(&self, a: &ActionTable, family: &ConeFamily) -> Result<ActionTable> {
        if a.points() != self.base_vertices || family.len() != self.apices.len() {
            return Err(Error::VertexMismatch(format!(
                "action on {} points, cone-off built over {} base vertices and {} cones",
                a.points(),
                self.base_vertices,
                self.apices.len()
            )));
        }
        let mut perms = Vec::with_capacity(a.order());
        for g in 0..a.order() {
            let mut p = a.perm(g).to_vec();
            for c in &family.cones {
                let t = c.translate(a, g);
                let j = family.cones.iter().position(|d| *d == t).ok_or_else(|| {
                    Error::InvalidAction("cone family is not closed under the action".into())
                })?;
                p.push(self.apices[j]);
            }
            perms.push(p);
        }
        let mult = (0..a.order())
            .map(|x| (0..a.order()).map(|y| a.mul(x, y)).collect())
            .collect();
        ActionTable::new(mult, perms, a.generators().to_vec())
    }
}

/// Attaches one cone per entry: an apex with rim edges of length `ρ` to each
/// `y ∈ Y`, and chord edges `y — y′` of length
/// `cone_distance(ρ, ρ, d_Y(y, y′), ρ)` whenever the apex angle is below `π`.
/// `d_Y` is the path metric of the subgraph induced on `Y`.
pub fn build_coneoff(g: &WeightedGraph, q: &ConeFamily) -> Result<ConeOffSpace> {
    q.validate(g.vertex_count(), None)?;
    let n = g.vertex_count();
    let mut graph = g.clone();
    let mut apices = Vec::with_capacity(q.len());
    let (mut rim_edges, mut chord_edges) = (0, 0);
    let rho = q.rho;
    for (i, c) in q.cones.iter().enumerate() {
        let apex = graph.add_vertex(format!("apex{i}"));
        apices.push(apex);
        for &y in &c.support {
            graph.add_edge(apex, y, rho)?;
            rim_edges += 1;
        }
        let (sub, order) = g.induced_subgraph(&c.support)?;
        let dy = path_metric(&sub);
        for a in 0..order.len() {
            for b in a + 1..order.len() {
                let d = dy.dist(a, b);
                if cone_angle(d, rho) < PI {
                    graph.add_edge(order[a], order[b], cone_distance(rho, rho, d, rho))?;
                    chord_edges += 1;
                }
            }
        }
    }
    debug_assert!(apices.iter().enumerate().all(|(i, &v)| v == n + i));
    Ok(ConeOffSpace {
        base_vertices: n,
        rho,
        graph,
        apices,
        rim_edges,
        chord_edges,
    })
}
