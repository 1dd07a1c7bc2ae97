//! Isometric group actions on finite spaces.
//!
//! A finite group is an [`ActionTable`]: multiplication table plus one vertex
//! permutation per element. Infinite groups only appear through finite
//! windows (Cayley balls), where an element acts by a [`PartialPerm`] that is
//! undefined wherever the image leaves the window.

mod dynamics;
mod orbit_graph;
mod quotient;

pub use dynamics::{
    classify_element, displacement, min_power_for_injectivity, min_set_axis, overlap_diameter,
    translation_length, uniform_properness_bound, ClassificationReport, PowerThreshold,
    PropernessReport, Verdict,
};
pub use orbit_graph::{build_orbit_graph, Distortion, OrbitGraph};
pub use quotient::{barycentric_subdivision, orbits, quotient_metric, QuotientMetric};

use std::collections::{BTreeSet, HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{check_index, Error, Result};
use crate::graph::WeightedGraph;
use crate::metric::{Metric, EPS};

/// Injective map defined on part of `0..len`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PartialPerm(Vec<Option<usize>>);

impl PartialPerm {
    pub fn identity(n: usize) -> Self {
        Self((0..n).map(Some).collect())
    }

    pub fn from_total(images: &[usize]) -> Self {
        Self(images.iter().copied().map(Some).collect())
    }

    pub fn from_partial(images: Vec<Option<usize>>) -> Self {
        Self(images)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Image of every point, `None` where undefined.
    pub fn images(&self) -> &[Option<usize>] {
        &self.0
    }

    #[inline]
    pub fn apply(&self, x: usize) -> Option<usize> {
        self.0.get(x).copied().flatten()
    }

    pub fn is_total(&self) -> bool {
        self.0.iter().all(Option::is_some)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(x, y)| *y == Some(x))
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![None; self.0.len()];
        for (x, y) in self.0.iter().enumerate() {
            if let Some(y) = *y {
                inv[y] = Some(x);
            }
        }
        Self(inv)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &PartialPerm) -> Self {
        Self(other.0.iter().map(|y| y.and_then(|y| self.apply(y))).collect())
    }

    /// Image of a set, dropping points where the map is undefined; sorted.
    pub fn image(&self, set: &[usize]) -> Vec<usize> {
        let out: BTreeSet<usize> = set.iter().filter_map(|&x| self.apply(x)).collect();
        out.into_iter().collect()
    }
}

/// A finite group acting on the points `0..points` by permutations.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ActionJson", into = "ActionJson")]
pub struct ActionTable {
    mult: Vec<Vec<usize>>,
    perm: Vec<Vec<usize>>,
    generators: Vec<usize>,
    identity: usize,
    inverse: Vec<usize>,
}

impl ActionTable {
    /// Validates the group axioms of `mult` (row `g`, column `h` holds `gh`),
    /// that each `perm[g]` is a permutation, and that `g ↦ perm[g]` is a
    /// homomorphism for the left action `(gh)x = g(hx)`.
    pub fn new(mult: Vec<Vec<usize>>, perm: Vec<Vec<usize>>, generators: Vec<usize>) -> Result<Self> {
        let k = mult.len();
        if k == 0 {
            return Err(Error::InvalidAction("group has no elements".into()));
        }
        if perm.len() != k {
            return Err(Error::InvalidAction(format!(
                "{} permutations for a group of order {k}",
                perm.len()
            )));
        }
        for row in &mult {
            if row.len() != k || row.iter().any(|&x| x >= k) {
                return Err(Error::InvalidAction("multiplication table is not k x k over 0..k".into()));
            }
        }
        let identity = (0..k)
            .find(|&e| (0..k).all(|g| mult[e][g] == g && mult[g][e] == g))
            .ok_or_else(|| Error::InvalidAction("no identity element".into()))?;
        let mut inverse = vec![0; k];
        for g in 0..k {
            inverse[g] = (0..k)
                .find(|&h| mult[g][h] == identity && mult[h][g] == identity)
                .ok_or_else(|| Error::InvalidAction(format!("element {g} has no inverse")))?;
        }
        for a in 0..k {
            for b in 0..k {
                let ab = mult[a][b];
                for c in 0..k {
                    if mult[ab][c] != mult[a][mult[b][c]] {
                        return Err(Error::InvalidAction(format!(
                            "multiplication is not associative at ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        let n = perm[0].len();
        for (g, p) in perm.iter().enumerate() {
            if p.len() != n {
                return Err(Error::InvalidAction(format!("permutation {g} has the wrong length")));
            }
            let mut seen = vec![false; n];
            for &x in p {
                if x >= n || std::mem::replace(&mut seen[x], true) {
                    return Err(Error::InvalidAction(format!("element {g} does not permute the points")));
                }
            }
        }
        for g in 0..k {
            for h in 0..k {
                let gh = &perm[mult[g][h]];
                if (0..n).any(|x| gh[x] != perm[g][perm[h][x]]) {
                    return Err(Error::InvalidAction(format!(
                        "points are not acted on homomorphically at ({g}, {h})"
                    )));
                }
            }
        }
        for &s in &generators {
            check_index(s, k)?;
        }
        Ok(Self {
            mult,
            perm,
            generators,
            identity,
            inverse,
        })
    }

    /// The group of permutations generated by `generators` (each a permutation
    /// of `0..points`), with the identity as element 0 and generators next.
    pub fn generated_by(points: usize, generators: &[Vec<usize>]) -> Result<Self> {
        let id: Vec<usize> = (0..points).collect();
        let mut elements = vec![id.clone()];
        let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(id, 0)]);
        let mut gen_ids = Vec::new();
        for g in generators {
            if g.len() != points {
                return Err(Error::InvalidAction("generator has the wrong length".into()));
            }
            let mut sorted = g.clone();
            sorted.sort_unstable();
            if sorted != (0..points).collect::<Vec<_>>() {
                return Err(Error::InvalidAction("generator is not a permutation".into()));
            }
            let id = *index.entry(g.clone()).or_insert_with(|| {
                elements.push(g.clone());
                elements.len() - 1
            });
            gen_ids.push(id);
        }
        let mut queue: VecDeque<usize> = (0..elements.len()).collect();
        while let Some(e) = queue.pop_front() {
            for g in generators {
                let prod: Vec<usize> = elements[e].iter().map(|&x| g[x]).collect();
                if !index.contains_key(&prod) {
                    index.insert(prod.clone(), elements.len());
                    elements.push(prod);
                    queue.push_back(elements.len() - 1);
                }
            }
        }
        let k = elements.len();
        let mult = (0..k)
            .map(|a| {
                (0..k)
                    .map(|b| {
                        let ab: Vec<usize> = elements[b].iter().map(|&x| elements[a][x]).collect();
                        index[&ab]
                    })
                    .collect()
            })
            .collect();
        Self::new(mult, elements, gen_ids)
    }

    /// The trivial group acting on `points` points.
    pub fn trivial(points: usize) -> Self {
        Self::new(vec![vec![0]], vec![(0..points).collect()], Vec::new()).expect("trivial group")
    }

    /// `Z/n` rotating the cycle `C_n` by `step`.
    pub fn rotations(n: usize, step: usize) -> Self {
        let rot: Vec<usize> = (0..n).map(|i| (i + step) % n).collect();
        Self::generated_by(n, &[rot]).expect("rotation group")
    }

    pub fn order(&self) -> usize {
        self.mult.len()
    }

    pub fn points(&self) -> usize {
        self.perm[0].len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn mul(&self, g: usize, h: usize) -> usize {
        self.mult[g][h]
    }

    pub fn inverse(&self, g: usize) -> usize {
        self.inverse[g]
    }

    pub fn perm(&self, g: usize) -> &[usize] {
        &self.perm[g]
    }

    #[inline]
    pub fn act(&self, g: usize, x: usize) -> usize {
        self.perm[g][x]
    }

    pub fn element_map(&self, g: usize) -> PartialPerm {
        PartialPerm::from_total(&self.perm[g])
    }

    /// Smallest subgroup containing `elements`.
    pub fn subgroup_generated(&self, elements: &[usize]) -> Result<Vec<usize>> {
        for &g in elements {
            check_index(g, self.order())?;
        }
        let mut members = BTreeSet::from([self.identity]);
        let mut queue = VecDeque::from([self.identity]);
        while let Some(h) = queue.pop_front() {
            for &g in elements {
                let p = self.mult[h][g];
                if members.insert(p) {
                    queue.push_back(p);
                }
            }
        }
        Ok(members.into_iter().collect())
    }

    pub fn is_subgroup(&self, set: &[usize]) -> bool {
        let members: BTreeSet<usize> = set.iter().copied().collect();
        members.contains(&self.identity)
            && members.iter().all(|&g| g < self.order())
            && members
                .iter()
                .all(|&a| members.iter().all(|&b| members.contains(&self.mult[a][b])))
    }

    /// Every element preserves `m` up to [`EPS`].
    pub fn check_isometric<M: Metric + ?Sized>(&self, m: &M) -> Result<()> {
        if m.len() != self.points() {
            return Err(Error::VertexMismatch(format!(
                "action on {} points, space has {}",
                self.points(),
                m.len()
            )));
        }
        for g in 0..self.order() {
            let p = &self.perm[g];
            for x in 0..m.len() {
                for y in x + 1..m.len() {
                    let (a, b) = (m.dist(x, y), m.dist(p[x], p[y]));
                    if !(a == b || (a - b).abs() <= EPS) {
                        return Err(Error::NotIsometric(format!(
                            "element {g} maps ({x}, {y}) at distance {a} to distance {b}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Every element maps edges to edges of the same length (as multisets).
    pub fn check_graph_automorphism(&self, g: &WeightedGraph) -> Result<()> {
        if g.vertex_count() != self.points() {
            return Err(Error::VertexMismatch(format!(
                "action on {} points, graph has {}",
                self.points(),
                g.vertex_count()
            )));
        }
        let key = |u: usize, v: usize, len: f64| (u.min(v), u.max(v), len.to_bits());
        let mut edges: Vec<_> = g.edges().iter().map(|e| key(e.u, e.v, e.length)).collect();
        edges.sort_unstable();
        for el in 0..self.order() {
            let p = &self.perm[el];
            let mut image: Vec<_> = g
                .edges()
                .iter()
                .map(|e| key(p[e.u], p[e.v], e.length))
                .collect();
            image.sort_unstable();
            if image != edges {
                return Err(Error::NotIsometric(format!("element {el} does not preserve the edges")));
            }
        }
        Ok(())
    }

    /// First `(element, edge)` where the element swaps the endpoints of the edge.
    pub fn inversion(&self, g: &WeightedGraph) -> Option<(usize, usize)> {
        (0..self.order()).find_map(|el| {
            g.edges()
                .iter()
                .position(|e| e.u != e.v && self.perm[el][e.u] == e.v && self.perm[el][e.v] == e.u)
                .map(|i| (el, i))
        })
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

#[derive(Serialize, Deserialize)]
struct ActionJson {
    order: usize,
    mult: Vec<Vec<usize>>,
    perm: Vec<Vec<usize>>,
    #[serde(default)]
    generators: Vec<usize>,
}

impl TryFrom<ActionJson> for ActionTable {
    type Error = Error;

    fn try_from(raw: ActionJson) -> Result<Self> {
        if raw.mult.len() != raw.order {
            return Err(Error::InvalidAction(format!(
                "declared order {} but the table has {} rows",
                raw.order,
                raw.mult.len()
            )));
        }
        ActionTable::new(raw.mult, raw.perm, raw.generators)
    }
}

impl From<ActionTable> for ActionJson {
    fn from(a: ActionTable) -> Self {
        ActionJson {
            order: a.mult.len(),
            mult: a.mult,
            perm: a.perm,
            generators: a.generators,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::path_metric;

    #[test]
    fn rotations_of_c4() {
        let a = ActionTable::rotations(4, 1);
        assert_eq!(a.order(), 4);
        assert_eq!(a.identity(), 0);
        let g = a.generators()[0];
        assert_eq!(a.act(g, 3), 0);
        assert_eq!(a.mul(g, a.inverse(g)), a.identity());
        a.check_isometric(&path_metric(&WeightedGraph::cycle(4))).unwrap();
        a.check_graph_automorphism(&WeightedGraph::cycle(4)).unwrap();
    }

    #[test]
    fn rejects_broken_tables() {
        // not a group: no inverses
        assert!(ActionTable::new(vec![vec![0, 1], vec![1, 1]], vec![vec![0], vec![0]], vec![]).is_err());
        // permutation does not respect the multiplication
        let z2 = vec![vec![0, 1], vec![1, 0]];
        assert!(ActionTable::new(z2.clone(), vec![vec![0, 1], vec![0, 1]], vec![]).is_ok());
        assert!(ActionTable::new(z2.clone(), vec![vec![0, 1, 2], vec![1, 2, 0]], vec![]).is_err());
        assert!(ActionTable::new(z2, vec![vec![0, 1], vec![0, 0]], vec![]).is_err());
    }

    #[test]
    fn non_isometric_action_is_detected() {
        // swap 0 and 1 on the path 0-1-2
        let a = ActionTable::generated_by(3, &[vec![1, 0, 2]]).unwrap();
        let g = WeightedGraph::path(3);
        assert!(matches!(a.check_isometric(&path_metric(&g)), Err(Error::NotIsometric(_))));
        assert!(a.check_graph_automorphism(&g).is_err());
    }

    #[test]
    fn inversions() {
        let swap = ActionTable::generated_by(2, &[vec![1, 0]]).unwrap();
        assert_eq!(swap.inversion(&WeightedGraph::path(2)), Some((1, 0)));
        assert_eq!(ActionTable::rotations(4, 1).inversion(&WeightedGraph::cycle(4)), None);
    }

    #[test]
    fn subgroups() {
        let a = ActionTable::rotations(6, 1);
        let g = a.generators()[0];
        let g3 = a.mul(g, a.mul(g, g));
        let k = a.subgroup_generated(&[g3]).unwrap();
        assert_eq!(k.len(), 2);
        assert!(a.is_subgroup(&k));
        assert!(!a.is_subgroup(&[a.identity(), g]));
    }

    #[test]
    fn json_round_trip() {
        let a = ActionTable::rotations(5, 2);
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(ActionTable::from_json_str(&s).unwrap(), a);
        assert!(ActionTable::from_json_str(r#"{"order": 2, "mult": [[0]], "perm": [[0]]}"#).is_err());
    }

    #[test]
    fn partial_perm_algebra() {
        let p = PartialPerm::from_partial(vec![Some(1), Some(2), None]);
        let inv = p.inverse();
        assert_eq!(inv.apply(2), Some(1));
        assert_eq!(inv.apply(0), None);
        assert!(inv.compose(&p).apply(0) == Some(0));
        assert_eq!(p.image(&[0, 1, 2]), vec![1, 2]);
        assert!(!p.is_total());
        assert!(PartialPerm::identity(3).is_identity());
    }
}
