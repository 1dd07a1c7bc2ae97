use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{ActionTable, PartialPerm};
use crate::error::{check_index, Error, Result};
use crate::geometry::{neighborhood, set_diameter};
use crate::metric::{Metric, EPS};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PropernessReport {
    pub r: f64,
    /// `max_x |{g : d(x, gx) ≤ r}|`
    pub bound: usize,
    /// A point attaining the bound.
    pub point: usize,
}

/// Exact uniform-properness count of a finite action at radius `r`.
pub fn uniform_properness_bound<M: Metric + ?Sized>(a: &ActionTable, m: &M, r: f64) -> Result<PropernessReport> {
    if m.len() != a.points() {
        return Err(Error::VertexMismatch(format!(
            "action on {} points, space has {}",
            a.points(),
            m.len()
        )));
    }
    if m.is_empty() {
        return Err(Error::EmptySpace);
    }
    let mut best = PropernessReport { r, bound: 0, point: 0 };
    for x in 0..m.len() {
        let count = (0..a.order())
            .filter(|&g| m.dist(x, a.act(g, x)) <= r + EPS)
            .count();
        if count > best.bound {
            best.bound = count;
            best.point = x;
        }
    }
    Ok(best)
}

/// `d(x, gx)`, or `d(g⁻¹x, x)` when `gx` leaves the window (the two agree for
/// an isometry). `None` if neither image is defined.
pub fn displacement<M: Metric + ?Sized>(m: &M, g: &PartialPerm, g_inv: &PartialPerm, x: usize) -> Option<f64> {
    g.apply(x)
        .or_else(|| g_inv.apply(x))
        .map(|y| m.dist(x, y))
}

fn displacements<M: Metric + ?Sized>(m: &M, g: &PartialPerm) -> Vec<Option<f64>> {
    let inv = g.inverse();
    (0..m.len().min(g.len()))
        .into_par_iter()
        .map(|x| displacement(m, g, &inv, x))
        .collect()
}

/// Minimum displacement over the points where it is defined.
pub fn translation_length<M: Metric + ?Sized>(m: &M, g: &PartialPerm) -> Option<f64> {
    displacements(m, g)
        .into_iter()
        .flatten()
        .min_by(f64::total_cmp)
}

/// Points of minimal displacement: the min-set of `g`, used as a stand-in for
/// its invariant quasi-line.
pub fn min_set_axis<M: Metric + ?Sized>(m: &M, g: &PartialPerm) -> Vec<usize> {
    let d = displacements(m, g);
    let Some(min) = d.iter().flatten().copied().min_by(f64::total_cmp) else {
        return Vec::new();
    };
    d.iter()
        .enumerate()
        .filter(|(_, v)| v.is_some_and(|v| v <= min + EPS))
        .map(|(x, _)| x)
        .collect()
}

/// Diameter of `Y₁^{+5δ} ∩ Y₂^{+5δ}`; `None` when the intersection is empty.
pub fn overlap_diameter<M: Metric + ?Sized>(m: &M, y1: &[usize], y2: &[usize], delta: f64) -> Result<Option<f64>> {
    if delta.is_nan() || delta < 0.0 {
        return Err(Error::InvalidParameter(format!("delta must be non-negative, got {delta}")));
    }
    let n1 = neighborhood(m, y1, 5.0 * delta)?;
    let n2 = neighborhood(m, y2, 5.0 * delta)?;
    let common: Vec<usize> = n1
        .into_iter()
        .filter(|x| n2.binary_search(x).is_ok())
        .collect();
    Ok(set_diameter(m, &common))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Elliptic,
    Loxodromic,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub base_point: usize,
    pub translation_length: Option<f64>,
    /// `d(x, gⁿx)` for `n = 1, 2, ...` while `gⁿx` stays in the window and
    /// the orbit has not returned.
    pub displacements: Vec<f64>,
    /// `d(x, gⁿx) / n` for the same `n`.
    pub stable_estimates: Vec<f64>,
    /// Estimate at the largest available `n`.
    pub stable_length: Option<f64>,
    /// Smallest `n > 0` with `gⁿx = x`, when observed.
    pub period: Option<usize>,
    pub verdict: Verdict,
}

/// Classifies `g` by following the orbit of `base`.
///
/// * the orbit returns to `base` → elliptic;
/// * `gⁿ·base` stays defined for `n ≤ n_max` and `d(base, gⁿ·base)` strictly
///   increases over that range → loxodromic;
/// * otherwise (window left early, stalled growth, `n_max < 2`) → inconclusive.
///
/// The orbit is followed past `n_max` while it stays in the window, so the
/// stable length uses the largest available power.
pub fn classify_element<M: Metric + ?Sized>(m: &M, g: &PartialPerm, base: usize, n_max: usize) -> Result<ClassificationReport> {
    check_index(base, m.len())?;
    let mut displacements = Vec::new();
    let mut period = None;
    let mut point = base;
    for n in 1..=m.len().max(1) {
        let Some(next) = g.apply(point) else { break };
        if next == base {
            period = Some(n);
            break;
        }
        displacements.push(m.dist(base, next));
        point = next;
    }
    let stable_estimates: Vec<f64> = displacements
        .iter()
        .enumerate()
        .map(|(i, d)| d / (i + 1) as f64)
        .collect();
    let verdict = if period.is_some() {
        Verdict::Elliptic
    } else if n_max >= 2
        && displacements.len() >= n_max
        && displacements[..n_max].windows(2).all(|w| w[1] > w[0] + EPS)
        && displacements[0] > EPS
    {
        Verdict::Loxodromic
    } else {
        Verdict::Inconclusive
    };
    Ok(ClassificationReport {
        base_point: base,
        translation_length: translation_length(m, g),
        stable_length: stable_estimates.last().copied(),
        displacements,
        stable_estimates,
        period,
        verdict,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum PowerThreshold {
    Power {
        n: u64,
        stable_length: f64,
        threshold: f64,
    },
    Elliptic,
}

/// Least `n` with `n · ℓ ≥ 2π sinh ρ`, where `ℓ` is the stable length
/// measured on the window.
pub fn min_power_for_injectivity<M: Metric + ?Sized>(
    m: &M,
    g: &PartialPerm,
    base: usize,
    rho: f64,
    n_max: usize,
) -> Result<PowerThreshold> {
    if rho.is_nan() || rho < 0.0 {
        return Err(Error::InvalidParameter(format!("rho must be non-negative, got {rho}")));
    }
    let report = classify_element(m, g, base, n_max)?;
    match report.verdict {
        Verdict::Elliptic => Ok(PowerThreshold::Elliptic),
        Verdict::Inconclusive => Err(Error::InsufficientWindow(format!(
            "orbit of {base} gives no loxodromic evidence within n_max = {n_max}"
        ))),
        Verdict::Loxodromic => {
            let stable = report.stable_length.expect("loxodromic orbits have estimates");
            let threshold = 2.0 * PI * rho.sinh();
            let n = ((threshold / stable) - EPS).ceil().max(1.0);
            Ok(PowerThreshold::Power {
                n: n as u64,
                stable_length: stable,
                threshold,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::WeightedGraph;
    use crate::metric::path_metric;

    fn line_window(radius: usize) -> (crate::metric::FiniteMetricSpace, PartialPerm) {
        // vertices 0..=2r stand for a^{-r}..a^{r}; left multiplication by a shifts by one
        let n = 2 * radius + 1;
        let shift = (0..n).map(|i| (i + 1 < n).then_some(i + 1)).collect();
        (path_metric(&WeightedGraph::path(n)), PartialPerm::from_partial(shift))
    }

    #[test]
    fn properness_examples() {
        let c4 = path_metric(&WeightedGraph::cycle(4));
        let trivial = ActionTable::trivial(4);
        assert_eq!(uniform_properness_bound(&trivial, &c4, 10.0).unwrap().bound, 1);
        let rot = ActionTable::rotations(4, 1);
        assert_eq!(uniform_properness_bound(&rot, &c4, 0.0).unwrap().bound, 1);
        // displacement table of Z/4 on C4: rows are 0,1,2,1 for every vertex
        assert_eq!(uniform_properness_bound(&rot, &c4, 1.0).unwrap().bound, 3);
        assert_eq!(uniform_properness_bound(&rot, &c4, 2.0).unwrap().bound, 4);
    }

    #[test]
    fn translation_lengths() {
        let c4 = path_metric(&WeightedGraph::cycle(4));
        let rot = ActionTable::rotations(4, 1);
        assert_eq!(translation_length(&c4, &rot.element_map(rot.identity())), Some(0.0));
        assert_eq!(translation_length(&c4, &rot.element_map(rot.generators()[0])), Some(1.0));
        let p3 = path_metric(&WeightedGraph::path(3));
        let flip = PartialPerm::from_total(&[2, 1, 0]);
        assert_eq!(translation_length(&p3, &flip), Some(0.0));
    }

    #[test]
    fn classification_examples() {
        let (m, a) = line_window(5);
        let rep = classify_element(&m, &a, 5, 5).unwrap();
        assert_eq!(rep.verdict, Verdict::Loxodromic);
        assert_eq!(rep.stable_length, Some(1.0));

        let id = PartialPerm::identity(m.len());
        assert_eq!(classify_element(&m, &id, 5, 5).unwrap().verdict, Verdict::Elliptic);

        // order-3 rotation of a tripod with legs of length 1 around vertex 0
        let mut tripod = WeightedGraph::new(4);
        for leaf in 1..4 {
            tripod.add_edge(0, leaf, 1.0).unwrap();
        }
        let rot = PartialPerm::from_total(&[0, 2, 3, 1]);
        let rep = classify_element(&path_metric(&tripod), &rot, 1, 5).unwrap();
        assert_eq!((rep.verdict, rep.period), (Verdict::Elliptic, Some(3)));
    }

    #[test]
    fn exhausted_window_is_inconclusive() {
        let (m, a) = line_window(3);
        let rep = classify_element(&m, &a, 3, 5).unwrap();
        assert_eq!(rep.verdict, Verdict::Inconclusive);
        assert!(matches!(
            min_power_for_injectivity(&m, &a, 3, 1.0, 5),
            Err(Error::InsufficientWindow(_))
        ));
    }

    #[test]
    fn min_set_axis_examples() {
        let c4 = path_metric(&WeightedGraph::cycle(4));
        let rot = ActionTable::rotations(4, 1);
        assert_eq!(min_set_axis(&c4, &rot.element_map(rot.generators()[0])), vec![0, 1, 2, 3]);
        assert_eq!(min_set_axis(&c4, &PartialPerm::identity(4)), vec![0, 1, 2, 3]);
        let (m, a) = line_window(3);
        assert_eq!(min_set_axis(&m, &a).len(), 7);
    }

    #[test]
    fn overlap_examples() {
        let m = path_metric(&WeightedGraph::path(10));
        assert_eq!(overlap_diameter(&m, &[2, 3, 4], &[2, 3, 4], 0.2).unwrap(), Some(4.0));
        assert_eq!(overlap_diameter(&m, &[0], &[9], 0.8).unwrap(), None);
        assert_eq!(overlap_diameter(&m, &[0], &[9], 1.0).unwrap(), Some(1.0));
    }

    #[test]
    fn power_threshold_examples() {
        let (m, a) = line_window(6);
        let rho = (10.0 / (2.0 * PI)).asinh();
        match min_power_for_injectivity(&m, &a, 6, rho, 5).unwrap() {
            PowerThreshold::Power { n, stable_length, .. } => {
                assert_eq!(stable_length, 1.0);
                assert_eq!(n, 10);
            }
            other => panic!("unexpected {other:?}"),
        }
        match min_power_for_injectivity(&m, &a, 6, 0.0, 5).unwrap() {
            PowerThreshold::Power { n, .. } => assert_eq!(n, 1),
            other => panic!("unexpected {other:?}"),
        }
        let id = PartialPerm::identity(m.len());
        assert_eq!(min_power_for_injectivity(&m, &id, 6, 1.0, 5).unwrap(), PowerThreshold::Elliptic);
    }
}
