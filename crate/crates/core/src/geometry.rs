//! Neighborhoods, quasi-convexity, separated nets and capacities.

use serde::{Deserialize, Serialize};

use crate::error::{check_index, Error, Result};
use crate::graph::WeightedGraph;
use crate::metric::{gromov_product, path_metric, Metric, EPS, UNREACHABLE};

/// Largest region accepted by [`capacity`].
pub const MAX_CAPACITY_REGION: usize = 64;

fn normalized(set: &[usize], len: usize) -> Result<Vec<usize>> {
    let mut v = set.to_vec();
    v.sort_unstable();
    v.dedup();
    for &x in &v {
        check_index(x, len)?;
    }
    Ok(v)
}

/// `{x : d(x, Y) ≤ alpha}`, sorted.
pub fn neighborhood<M: Metric + ?Sized>(m: &M, set: &[usize], alpha: f64) -> Result<Vec<usize>> {
    if alpha.is_nan() || alpha < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "neighborhood radius must be non-negative, got {alpha}"
        )));
    }
    let set = normalized(set, m.len())?;
    Ok(m.dist_to_set(&set)
        .into_iter()
        .enumerate()
        .filter(|&(_, d)| d <= alpha + EPS)
        .map(|(x, _)| x)
        .collect())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuasiConvexity {
    pub holds: bool,
    pub alpha: f64,
    /// First `(x, y, y′)` in lexicographic order with `d(x,Y) > ⟨y,y′⟩_x + α`.
    pub violation: Option<[usize; 3]>,
}

/// Checks `d(x, Y) ≤ ⟨y, y′⟩_x + alpha` for all `x` and all `y, y′ ∈ Y`.
pub fn is_quasiconvex<M: Metric + ?Sized>(m: &M, set: &[usize], alpha: f64) -> Result<QuasiConvexity> {
    let set = normalized(set, m.len())?;
    let to_set = m.dist_to_set(&set);
    for x in 0..m.len() {
        if set.is_empty() {
            break;
        }
        if to_set[x].is_infinite() {
            return Err(Error::Disconnected);
        }
        for &y in &set {
            for &y2 in &set {
                let product = gromov_product(m, y, y2, x)?;
                if to_set[x] > product + alpha + EPS {
                    return Ok(QuasiConvexity {
                        holds: false,
                        alpha,
                        violation: Some([x, y, y2]),
                    });
                }
            }
        }
    }
    Ok(QuasiConvexity {
        holds: true,
        alpha,
        violation: None,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StrongQuasiConvexity {
    pub holds: bool,
    pub delta: f64,
    pub quasiconvexity: QuasiConvexity,
    /// `(y, y′, d_X, d_Y)` where `d_X ≤ d_Y ≤ d_X + 8δ` fails; `d_Y` is `null` when infinite.
    pub induced_violation: Option<InducedViolation>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InducedViolation {
    pub y: usize,
    pub y2: usize,
    pub ambient: f64,
    pub induced: Option<f64>,
}

/// `Y` is `2δ`-quasi-convex and its induced path metric satisfies
/// `d_X ≤ d_Y ≤ d_X + 8δ`. Paths for `d_Y` use edges with both ends in `Y`.
pub fn is_strongly_quasiconvex(g: &WeightedGraph, set: &[usize], delta: f64) -> Result<StrongQuasiConvexity> {
    if delta.is_nan() || delta < 0.0 {
        return Err(Error::InvalidParameter(format!("delta must be non-negative, got {delta}")));
    }
    let set = normalized(set, g.vertex_count())?;
    let ambient = path_metric(g);
    let quasiconvexity = is_quasiconvex(&ambient, &set, 2.0 * delta)?;
    let (sub, order) = g.induced_subgraph(&set)?;
    let induced = path_metric(&sub);
    let mut induced_violation = None;
    'scan: for i in 0..order.len() {
        for j in 0..order.len() {
            let dx = ambient.dist(order[i], order[j]);
            let dy = induced.dist(i, j);
            if dy < dx - EPS || dy > dx + 8.0 * delta + EPS {
                induced_violation = Some(InducedViolation {
                    y: order[i],
                    y2: order[j],
                    ambient: dx,
                    induced: dy.is_finite().then_some(dy),
                });
                break 'scan;
            }
        }
    }
    Ok(StrongQuasiConvexity {
        holds: quasiconvexity.holds && induced_violation.is_none(),
        delta,
        quasiconvexity,
        induced_violation,
    })
}

fn check_separation(r: f64) -> Result<()> {
    if r.is_finite() && r > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("separation must be positive, got {r}")))
    }
}

/// `true` if all distinct members are at distance at least `r`.
pub fn is_separated<M: Metric + ?Sized>(m: &M, set: &[usize], r: f64) -> bool {
    set.iter().enumerate().all(|(i, &a)| {
        set[i + 1..]
            .iter()
            .all(|&b| a == b || m.dist(a, b) >= r - EPS)
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CapacityReport {
    pub r: f64,
    pub region: Vec<usize>,
    pub capacity: usize,
    pub witness_net: Vec<usize>,
}

/// Exact `r`-capacity of `region`: the size of a largest `r`-separated subset.
///
/// Branch and bound over the conflict graph (pairs closer than `r`), pruned
/// with a greedy clique cover. Regions are limited to
/// [`MAX_CAPACITY_REGION`] points.
pub fn capacity<M: Metric + ?Sized>(m: &M, region: &[usize], r: f64) -> Result<CapacityReport> {
    check_separation(r)?;
    let region = normalized(region, m.len())?;
    let k = region.len();
    if k > MAX_CAPACITY_REGION {
        return Err(Error::RegionTooLarge(k));
    }
    let mut conflicts = vec![0u64; k];
    for i in 0..k {
        for j in 0..k {
            if i != j && m.dist(region[i], region[j]) < r - EPS {
                conflicts[i] |= 1 << j;
            }
        }
    }
    let all = if k == 64 { u64::MAX } else { (1u64 << k) - 1 };
    let mut search = IndependentSetSearch {
        conflicts: &conflicts,
        best: 0,
        best_size: 0,
    };
    search.expand(0, all);
    let witness_net: Vec<usize> = (0..k)
        .filter(|&i| search.best >> i & 1 == 1)
        .map(|i| region[i])
        .collect();
    Ok(CapacityReport {
        r,
        capacity: witness_net.len(),
        region,
        witness_net,
    })
}

struct IndependentSetSearch<'a> {
    conflicts: &'a [u64],
    best: u64,
    best_size: u32,
}

impl IndependentSetSearch<'_> {
    fn expand(&mut self, chosen: u64, candidates: u64) {
        let size = chosen.count_ones();
        if candidates == 0 {
            if size > self.best_size || self.best_size == 0 && size > 0 {
                self.best = chosen;
                self.best_size = size;
            }
            return;
        }
        if size + self.clique_cover_bound(candidates) <= self.best_size {
            return;
        }
        let v = candidates.trailing_zeros() as usize;
        let bit = 1u64 << v;
        let rest = candidates & !bit;
        self.expand(chosen | bit, rest & !self.conflicts[v]);
        // excluding v only helps when it blocks someone
        if rest & self.conflicts[v] != 0 {
            self.expand(chosen, rest);
        }
    }

    /// An independent set meets each clique at most once.
    fn clique_cover_bound(&self, mut candidates: u64) -> u32 {
        let mut cliques = 0;
        while candidates != 0 {
            let v = candidates.trailing_zeros() as usize;
            let mut clique = 1u64 << v;
            let mut open = candidates & self.conflicts[v];
            while open != 0 {
                let w = open.trailing_zeros() as usize;
                clique |= 1 << w;
                open &= self.conflicts[w];
            }
            candidates &= !clique;
            cliques += 1;
        }
        cliques
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundedGeometryReport {
    pub r: f64,
    pub radius: f64,
    pub bound: usize,
    /// Ball center attaining the bound.
    pub center: Option<usize>,
    pub witness_net: Vec<usize>,
}

/// Points within `radius` of `center`.
pub fn ball<M: Metric + ?Sized>(m: &M, center: usize, radius: f64) -> Result<Vec<usize>> {
    neighborhood(m, &[center], radius)
}

/// Largest `r`-capacity of a closed ball of the given radius.
pub fn bounded_geometry_bound<M: Metric + ?Sized>(m: &M, r: f64, radius: f64) -> Result<BoundedGeometryReport> {
    check_separation(r)?;
    if radius.is_nan() || radius < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "ball radius must be non-negative, got {radius}"
        )));
    }
    let mut report = BoundedGeometryReport {
        r,
        radius,
        bound: 0,
        center: None,
        witness_net: Vec::new(),
    };
    for x in 0..m.len() {
        let region = ball(m, x, radius)?;
        let c = capacity(m, &region, r)?;
        if c.capacity > report.bound {
            report.bound = c.capacity;
            report.center = Some(x);
            report.witness_net = c.witness_net;
        }
    }
    Ok(report)
}

/// Maximal `r`-separated subset built greedily in index order.
pub fn greedy_maximal_net<M: Metric + ?Sized>(m: &M, r: f64) -> Result<Vec<usize>> {
    check_separation(r)?;
    let mut net: Vec<usize> = Vec::new();
    for x in 0..m.len() {
        if net.iter().all(|&s| m.dist(x, s) >= r - EPS) {
            net.push(x);
        }
    }
    Ok(net)
}

/// Diameter of a finite set; `None` when empty.
pub fn set_diameter<M: Metric + ?Sized>(m: &M, set: &[usize]) -> Option<f64> {
    if set.is_empty() {
        return None;
    }
    let mut diam: f64 = 0.0;
    for (i, &a) in set.iter().enumerate() {
        for &b in &set[i + 1..] {
            diam = diam.max(m.dist(a, b));
            if diam == UNREACHABLE {
                return Some(diam);
            }
        }
    }
    Some(diam)
}
