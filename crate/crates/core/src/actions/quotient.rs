use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::ActionTable;
use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::metric::{FiniteMetricSpace, Metric};

/// Orbits of the subgroup `k`, each sorted, listed by their least point.
pub fn orbits(a: &ActionTable, k: &[usize]) -> Result<Vec<Vec<usize>>> {
    if !a.is_subgroup(k) {
        return Err(Error::InvalidAction("element set is not a subgroup".into()));
    }
    let n = a.points();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for x in 0..n {
        if seen[x] {
            continue;
        }
        let orbit: BTreeSet<usize> = k.iter().map(|&g| a.act(g, x)).collect();
        for &y in &orbit {
            seen[y] = true;
        }
        out.push(orbit.into_iter().collect());
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuotientMetric {
    pub orbits: Vec<Vec<usize>>,
    /// Orbit index of every point.
    pub orbit_of: Vec<usize>,
    pub metric: FiniteMetricSpace,
    /// Distinct orbit pairs at distance 0.
    pub collapsed: Vec<(usize, usize)>,
}

/// `d(x̄, x̄′) = min_{k,k′ ∈ K} d(kx, k′x′)` on the orbits of `K`.
pub fn quotient_metric(m: &FiniteMetricSpace, a: &ActionTable, k: &[usize]) -> Result<QuotientMetric> {
    if m.points() != a.points() {
        return Err(Error::VertexMismatch(format!(
            "action on {} points, space has {}",
            a.points(),
            m.points()
        )));
    }
    let orbit_list = orbits(a, k)?;
    let mut orbit_of = vec![0; m.points()];
    for (i, o) in orbit_list.iter().enumerate() {
        for &x in o {
            orbit_of[x] = i;
        }
    }
    let q = orbit_list.len();
    let mut rows = vec![vec![f64::INFINITY; q]; q];
    for x in 0..m.points() {
        for y in 0..m.points() {
            let (i, j) = (orbit_of[x], orbit_of[y]);
            rows[i][j] = rows[i][j].min(m.dist(x, y));
        }
    }
    let collapsed = (0..q)
        .flat_map(|i| (i + 1..q).map(move |j| (i, j)))
        .filter(|&(i, j)| rows[i][j] == 0.0)
        .collect();
    Ok(QuotientMetric {
        metric: FiniteMetricSpace::new(rows)?,
        orbits: orbit_list,
        orbit_of,
        collapsed,
    })
}

/// Splits every edge at its midpoint. Midpoint of edge `e` becomes vertex
/// `n + e`; the action is extended so that `g` maps the midpoint of `e` to
/// the midpoint of `ge`. The result acts without inversion.
pub fn barycentric_subdivision(g: &WeightedGraph, a: &ActionTable) -> Result<(WeightedGraph, ActionTable)> {
    if !g.is_simple() {
        return Err(Error::InvalidGraph(
            "barycentric subdivision needs a graph without loops or parallel edges".into(),
        ));
    }
    a.check_graph_automorphism(g)?;
    let n = g.vertex_count();
    let mut sub = WeightedGraph::with_labels(g.labels().to_vec());
    for e in g.edges() {
        let mid = sub.add_vertex(format!("[{}|{}]", g.label(e.u), g.label(e.v)));
        sub.add_edge(e.u, mid, e.length / 2.0)?;
        sub.add_edge(mid, e.v, e.length / 2.0)?;
    }
    let edge_index = g.edge_index_map();
    let mut perms = Vec::with_capacity(a.order());
    for el in 0..a.order() {
        let p = a.perm(el);
        let mut q: Vec<usize> = p.to_vec();
        for e in g.edges() {
            let (x, y) = (p[e.u], p[e.v]);
            let target = edge_index[&(x.min(y), x.max(y))];
            q.push(n + target);
        }
        perms.push(q);
    }
    let mult = (0..a.order())
        .map(|x| (0..a.order()).map(|y| a.mul(x, y)).collect())
        .collect();
    let lifted = ActionTable::new(mult, perms, a.generators().to_vec())?;
    Ok((sub, lifted))
}
