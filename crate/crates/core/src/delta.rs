//! Exact δ-hyperbolicity of a finite metric space via the four-point inequality
//!
//! `⟨x,z⟩_t ≥ min{⟨x,y⟩_t, ⟨y,z⟩_t} − δ` for all ordered quadruples. The
//! least such δ is the largest *defect* `min{⟨x,y⟩_t, ⟨y,z⟩_t} − ⟨x,z⟩_t`.
//!
//! The scan fixes the base point `t`, tabulates all Gromov products at `t`,
//! then sweeps pairs `(x, z)` with `x ≤ z` (the defect is symmetric in `x` and
//! `z`) against contiguous rows. Every variant evaluates each defect with the
//! same floating-point expression and resolves ties towards the
//! lexicographically least `(x, y, z, t)`, so serial, parallel and pruned
//! scans agree bit for bit.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metric::{FiniteMetricSpace, Metric};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeltaCertificate {
    pub delta: f64,
    /// `(x, y, z, t)` attaining the maximal defect.
    pub witness: [usize; 4],
}

impl DeltaCertificate {
    fn better_than(&self, other: &DeltaCertificate) -> bool {
        self.delta > other.delta || (self.delta == other.delta && self.witness < other.witness)
    }
}

/// Four-point defect of one ordered quadruple.
pub fn four_point_defect(m: &FiniteMetricSpace, x: usize, y: usize, z: usize, t: usize) -> f64 {
    let p = |a: usize, b: usize| 0.5 * (m.dist(a, t) + m.dist(b, t) - m.dist(a, b));
    p(x, y).min(p(y, z)) - p(x, z)
}

/// Least δ satisfying the four-point inequality, with a witness quadruple.
/// Base points are scanned in parallel.
pub fn hyperbolicity_delta(m: &FiniteMetricSpace) -> Result<DeltaCertificate> {
    check_input(m)?;
    let n = m.points();
    let best = (0..n)
        .into_par_iter()
        .map(|t| scan_base_point(m, t, f64::NEG_INFINITY, false))
        .reduce_with(pick)
        .expect("non-empty space");
    Ok(best)
}

/// Same scan, one base point after the other.
pub fn hyperbolicity_delta_serial(m: &FiniteMetricSpace) -> Result<DeltaCertificate> {
    check_input(m)?;
    let best = (0..m.points())
        .map(|t| scan_base_point(m, t, f64::NEG_INFINITY, false))
        .reduce(pick)
        .expect("non-empty space");
    Ok(best)
}

/// Serial scan that skips pairs `(x, z)` whose row maxima cannot reach the
/// running best defect.
pub fn hyperbolicity_delta_pruned(m: &FiniteMetricSpace) -> Result<DeltaCertificate> {
    check_input(m)?;
    let mut best: Option<DeltaCertificate> = None;
    for t in 0..m.points() {
        let floor = best.map_or(f64::NEG_INFINITY, |b| b.delta);
        let cand = scan_base_point(m, t, floor, true);
        best = Some(match best {
            Some(b) => pick(b, cand),
            None => cand,
        });
    }
    Ok(best.expect("non-empty space"))
}

fn check_input(m: &FiniteMetricSpace) -> Result<()> {
    if m.points() == 0 {
        return Err(Error::EmptySpace);
    }
    if !m.is_connected() {
        return Err(Error::Disconnected);
    }
    Ok(())
}

fn pick(a: DeltaCertificate, b: DeltaCertificate) -> DeltaCertificate {
    if b.better_than(&a) {
        b
    } else {
        a
    }
}

fn scan_base_point(m: &FiniteMetricSpace, t: usize, floor: f64, prune: bool) -> DeltaCertificate {
    let n = m.points();
    let dt = m.row(t);
    let mut products = vec![0.0f64; n * n];
    for x in 0..n {
        let dx = m.row(x);
        let row = &mut products[x * n..(x + 1) * n];
        for y in 0..n {
            row[y] = 0.5 * (dt[x] + dt[y] - dx[y]);
        }
    }
    let row_max: Vec<f64> = if prune {
        products
            .chunks_exact(n)
            .map(|r| r.iter().copied().fold(f64::NEG_INFINITY, f64::max))
            .collect()
    } else {
        Vec::new()
    };

    // (x, x, x, t) has defect 0, so this start is always attained.
    let mut best = DeltaCertificate {
        delta: 0.0,
        witness: [0, 0, 0, t],
    };
    if floor > 0.0 {
        best.delta = f64::NEG_INFINITY;
    }
    for x in 0..n {
        let px = &products[x * n..(x + 1) * n];
        for z in x..n {
            let pz = &products[z * n..(z + 1) * n];
            let base = px[z];
            if prune {
                let bound = row_max[x].min(row_max[z]) - base;
                if bound < best.delta.max(floor) {
                    continue;
                }
            }
            let mut top = f64::NEG_INFINITY;
            for (a, b) in px.iter().zip(pz) {
                top = top.max(a.min(*b));
            }
            let value = top - base;
            if value < best.delta {
                continue;
            }
            let y = (0..n)
                .find(|&y| px[y].min(pz[y]) == top)
                .expect("maximum is attained");
            let cand = DeltaCertificate {
                delta: value,
                witness: [x, y, z, t],
            };
            if cand.better_than(&best) {
                best = cand;
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::WeightedGraph;
    use crate::metric::path_metric;

    /// Direct evaluation over all ordered quadruples, written independently
    /// of the row-sweep above.
    fn brute_force(m: &FiniteMetricSpace) -> f64 {
        let n = m.points();
        let gp = |x: usize, y: usize, t: usize| (m.dist(x, t) + m.dist(y, t) - m.dist(x, y)) / 2.0;
        let mut delta: f64 = 0.0;
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    for t in 0..n {
                        let lhs = gp(x, z, t);
                        let rhs = gp(x, y, t).min(gp(y, z, t));
                        delta = delta.max(rhs - lhs);
                    }
                }
            }
        }
        delta
    }

    #[test]
    fn single_point() {
        let m = path_metric(&WeightedGraph::new(1));
        let c = hyperbolicity_delta(&m).unwrap();
        assert_eq!(c.delta, 0.0);
        assert_eq!(c.witness, [0, 0, 0, 0]);
    }

    #[test]
    fn trees_are_zero_hyperbolic() {
        let mut tripod = WeightedGraph::new(7);
        for (u, v) in [(0, 1), (1, 2), (0, 3), (3, 4), (0, 5), (5, 6)] {
            tripod.add_edge(u, v, 1.0).unwrap();
        }
        for g in [WeightedGraph::path(6), tripod] {
            let c = hyperbolicity_delta(&path_metric(&g)).unwrap();
            assert_eq!(c.delta, 0.0);
        }
    }

    #[test]
    fn cycle_six_matches_exhaustive_scan() {
        let m = path_metric(&WeightedGraph::cycle(6));
        let c = hyperbolicity_delta(&m).unwrap();
        // frozen from the exhaustive 6^4 scan
        assert_eq!(brute_force(&m), 1.0);
        assert_eq!(c.delta, 1.0);
        let [x, y, z, t] = c.witness;
        assert_eq!(four_point_defect(&m, x, y, z, t), c.delta);
    }

    #[test]
    fn rescaling_scales_delta() {
        let m = path_metric(&WeightedGraph::cycle(6));
        let d1 = hyperbolicity_delta(&m).unwrap().delta;
        let d3 = hyperbolicity_delta(&m.rescale(3.0).unwrap()).unwrap().delta;
        assert_eq!(d3, 3.0 * d1);
    }

    #[test]
    fn disconnected_and_empty_are_errors() {
        let m = path_metric(&WeightedGraph::new(2));
        assert!(matches!(hyperbolicity_delta(&m), Err(Error::Disconnected)));
        let e = path_metric(&WeightedGraph::new(0));
        assert!(matches!(hyperbolicity_delta(&e), Err(Error::EmptySpace)));
    }

    #[test]
    fn witness_is_lexicographically_least() {
        let m = path_metric(&WeightedGraph::cycle(8));
        let c = hyperbolicity_delta(&m).unwrap();
        let n = m.points();
        let mut first = None;
        'outer: for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    for t in 0..n {
                        if four_point_defect(&m, x, y, z, t) == c.delta {
                            first = Some([x, y, z, t]);
                            break 'outer;
                        }
                    }
                }
            }
        }
        assert_eq!(Some(c.witness), first);
    }

    #[test]
    fn lowering_delta_breaks_the_inequality_at_the_witness() {
        let m = path_metric(&WeightedGraph::grid(3, 3));
        let c = hyperbolicity_delta(&m).unwrap();
        let [x, y, z, t] = c.witness;
        assert!(four_point_defect(&m, x, y, z, t) > c.delta - 1e-6);
    }

    #[test]
    fn variants_agree() {
        for g in [
            WeightedGraph::cycle(9),
            WeightedGraph::grid(4, 3),
            WeightedGraph::path(4),
        ] {
            let m = path_metric(&g);
            let a = hyperbolicity_delta(&m).unwrap();
            assert_eq!(a, hyperbolicity_delta_serial(&m).unwrap());
            assert_eq!(a, hyperbolicity_delta_pruned(&m).unwrap());
            assert_eq!(a.delta, brute_force(&m));
        }
    }
}
