//! Finite weighted graphs with positive edge lengths.
//!
//! Vertices are dense indices `0..n`. Parallel edges and loops of positive
//! length are allowed (graphs in the sense of Serre); operations that need a
//! simple graph check [`WeightedGraph::is_simple`] themselves.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{check_index, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub length: f64,
}

impl Edge {
    /// The endpoint opposite to `w`, if `w` is an endpoint.
    pub fn other(&self, w: usize) -> Option<usize> {
        if self.u == w {
            Some(self.v)
        } else if self.v == w {
            Some(self.u)
        } else {
            None
        }
    }

    fn key(&self) -> (usize, usize) {
        (self.u.min(self.v), self.u.max(self.v))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GraphJson", into = "GraphJson")]
pub struct WeightedGraph {
    labels: Vec<String>,
    edges: Vec<Edge>,
    adjacency: Vec<Vec<(usize, f64)>>,
}

impl WeightedGraph {
    /// `n` isolated vertices labelled `v0, v1, ...`.
    pub fn new(n: usize) -> Self {
        Self::with_labels((0..n).map(|i| format!("v{i}")).collect())
    }

    pub fn with_labels(labels: Vec<String>) -> Self {
        let n = labels.len();
        Self {
            labels,
            edges: Vec::new(),
            adjacency: vec![Vec::new(); n],
        }
    }

    pub fn add_vertex(&mut self, label: impl Into<String>) -> usize {
        self.labels.push(label.into());
        self.adjacency.push(Vec::new());
        self.labels.len() - 1
    }

    pub fn add_edge(&mut self, u: usize, v: usize, length: f64) -> Result<usize> {
        let n = self.vertex_count();
        check_index(u, n)?;
        check_index(v, n)?;
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::InvalidGraph(format!(
                "edge ({u}, {v}) has non-positive or non-finite length {length}"
            )));
        }
        self.edges.push(Edge { u, v, length });
        self.adjacency[u].push((v, length));
        if u != v {
            self.adjacency[v].push((u, length));
        }
        Ok(self.edges.len() - 1)
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn neighbors(&self, v: usize) -> &[(usize, f64)] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Common length of all edges, if every edge has the same length.
    pub fn uniform_length(&self) -> Option<f64> {
        let first = self.edges.first()?.length;
        self.edges
            .iter()
            .all(|e| e.length == first)
            .then_some(first)
    }

    /// No loops and no parallel edges.
    pub fn is_simple(&self) -> bool {
        let mut seen = BTreeSet::new();
        self.edges
            .iter()
            .all(|e| e.u != e.v && seen.insert(e.key()))
    }

    /// Index of an edge joining `u` and `v` (either orientation).
    pub fn find_edge(&self, u: usize, v: usize) -> Option<usize> {
        let key = (u.min(v), u.max(v));
        self.edges.iter().position(|e| e.key() == key)
    }

    pub(crate) fn edge_index_map(&self) -> HashMap<(usize, usize), usize> {
        self.edges
            .iter()
            .enumerate()
            .map(|(i, e)| (e.key(), i))
            .collect()
    }

    /// Subgraph spanned by `members` (sorted, deduplicated); vertex `i` of the
    /// result corresponds to the `i`-th member.
    pub fn induced_subgraph(&self, members: &[usize]) -> Result<(WeightedGraph, Vec<usize>)> {
        let set: BTreeSet<usize> = members.iter().copied().collect();
        let order: Vec<usize> = set.into_iter().collect();
        let mut local = vec![usize::MAX; self.vertex_count()];
        for (i, &v) in order.iter().enumerate() {
            check_index(v, self.vertex_count())?;
            local[v] = i;
        }
        let mut sub =
            WeightedGraph::with_labels(order.iter().map(|&v| self.labels[v].clone()).collect());
        for e in &self.edges {
            let (a, b) = (local[e.u], local[e.v]);
            if a != usize::MAX && b != usize::MAX {
                sub.add_edge(a, b, e.length)?;
            }
        }
        Ok((sub, order))
    }

    pub fn path(n: usize) -> Self {
        let mut g = Self::new(n);
        for i in 1..n {
            g.add_edge(i - 1, i, 1.0).expect("valid edge");
        }
        g
    }

    pub fn cycle(n: usize) -> Self {
        let mut g = Self::path(n);
        if n > 2 {
            g.add_edge(n - 1, 0, 1.0).expect("valid edge");
        }
        g
    }

    /// `width x height` grid with unit edges; vertex `(i, j)` has index `j * width + i`.
    pub fn grid(width: usize, height: usize) -> Self {
        let mut g = Self::with_labels(
            (0..height)
                .flat_map(|j| (0..width).map(move |i| format!("({i},{j})")))
                .collect(),
        );
        for j in 0..height {
            for i in 0..width {
                let v = j * width + i;
                if i + 1 < width {
                    g.add_edge(v, v + 1, 1.0).expect("valid edge");
                }
                if j + 1 < height {
                    g.add_edge(v, v + width, 1.0).expect("valid edge");
                }
            }
        }
        g
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(self).expect("graph serializes")
    }

    /// Graphviz rendering of the graph; edge lengths become `label` attributes.
    pub fn to_dot(&self, name: &str) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "graph \"{}\" {{", escape(name));
        for (i, label) in self.labels.iter().enumerate() {
            let _ = writeln!(out, "  {i} [label=\"{}\"];", escape(label));
        }
        for e in &self.edges {
            let _ = writeln!(out, "  {} -- {} [label=\"{}\"];", e.u, e.v, e.length);
        }
        out.push_str("}\n");
        out
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    vertices: Vec<String>,
    edges: Vec<(usize, usize, f64)>,
}

impl TryFrom<GraphJson> for WeightedGraph {
    type Error = Error;

    fn try_from(raw: GraphJson) -> Result<Self> {
        let mut g = WeightedGraph::with_labels(raw.vertices);
        for (u, v, len) in raw.edges {
            g.add_edge(u, v, len)?;
        }
        Ok(g)
    }
}

impl From<WeightedGraph> for GraphJson {
    fn from(g: WeightedGraph) -> Self {
        GraphJson {
            vertices: g.labels,
            edges: g.edges.iter().map(|e| (e.u, e.v, e.length)).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_lengths() {
        let mut g = WeightedGraph::new(2);
        assert!(g.add_edge(0, 1, 0.0).is_err());
        assert!(g.add_edge(0, 1, -1.0).is_err());
        assert!(g.add_edge(0, 1, f64::INFINITY).is_err());
        assert!(g.add_edge(0, 0, 0.0).is_err());
        assert!(g.add_edge(0, 2, 1.0).is_err());
        assert!(g.add_edge(0, 0, 1.0).is_ok());
        assert!(!g.is_simple());
    }

    #[test]
    fn json_round_trip() {
        let g = WeightedGraph::grid(3, 2);
        let back = WeightedGraph::from_json_str(&g.to_json_string()).unwrap();
        assert_eq!(g, back);
        let raw = r#"{"vertices": ["a", "b"], "edges": [[0, 1, 2.5]]}"#;
        let h = WeightedGraph::from_json_str(raw).unwrap();
        assert_eq!(h.edges()[0].length, 2.5);
        assert!(WeightedGraph::from_json_str(r#"{"vertices": ["a"], "edges": [[0, 1, 1]]}"#)
            .is_err());
    }

    #[test]
    fn dot_lists_every_edge() {
        let dot = WeightedGraph::cycle(4).to_dot("c4");
        assert_eq!(dot.matches(" -- ").count(), 4);
        assert!(dot.starts_with("graph \"c4\""));
    }

    #[test]
    fn induced_subgraph_keeps_inner_edges() {
        let g = WeightedGraph::cycle(6);
        let (sub, order) = g.induced_subgraph(&[4, 0, 5]).unwrap();
        assert_eq!(order, vec![0, 4, 5]);
        assert_eq!(sub.edge_count(), 2);
    }
}
