//! Comparing `X/K` with the quotient of the cone-off, and injectivity of
//! small balls under the quotient map.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{build_coneoff, ConeFamily};
use crate::actions::{quotient_metric, ActionTable, QuotientMetric};
use crate::error::{check_index, Error, Result};
use crate::geometry::set_diameter;
use crate::graph::WeightedGraph;
use crate::metric::{path_metric, FiniteMetricSpace, Metric, EPS};
use crate::words::{DehnReducer, Letter, Presentation, Word};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuotientComparison {
    pub rho: f64,
    #[serde(rename = "D")]
    pub d: f64,
    /// `max{1, π sinh ρ / 2ρ, D / 2ρ}`
    pub lambda: f64,
    /// `d_X̄ ≤ d_{X/K}` on every pair.
    pub lower_holds: bool,
    /// `d_{X/K} ≤ λ d_X̄` on every pair.
    pub upper_holds: bool,
    /// Largest `d_{X/K} / d_X̄` over pairs with `d_X̄ > 0`.
    pub measured_ratio: f64,
    /// Largest distance from a point of `X̄` to the image of `X/K`.
    pub coboundedness: f64,
    pub cobounded_holds: bool,
    /// First pair violating either inequality.
    pub violation: Option<(usize, usize)>,
    pub holds: bool,
}

pub fn comparison_lambda(rho: f64, d: f64) -> f64 {
    1f64.max(PI * rho.sinh() / (2.0 * rho)).max(d / (2.0 * rho))
}

/// The first `x_mod_k.points()` points of `coneoff_mod_k` must be the images
/// of the base orbits, in the same order.
pub fn quotient_comparison(
    x_mod_k: &FiniteMetricSpace,
    coneoff_mod_k: &FiniteMetricSpace,
    rho: f64,
    d: f64,
) -> Result<QuotientComparison> {
    if !(rho.is_finite() && rho > 0.0) {
        return Err(Error::InvalidParameter(format!("rho must be positive, got {rho}")));
    }
    if d.is_nan() || d < 0.0 {
        return Err(Error::InvalidParameter(format!("D must be non-negative, got {d}")));
    }
    let n = x_mod_k.points();
    if coneoff_mod_k.points() < n {
        return Err(Error::VertexMismatch(format!(
            "cone-off quotient has {} points, fewer than the {n} base orbits",
            coneoff_mod_k.points()
        )));
    }
    let lambda = comparison_lambda(rho, d);
    let (mut lower_holds, mut upper_holds) = (true, true);
    let mut measured_ratio: f64 = 0.0;
    let mut violation = None;
    for i in 0..n {
        for j in i + 1..n {
            let dq = x_mod_k.dist(i, j);
            let dc = coneoff_mod_k.dist(i, j);
            let lower = dc <= dq + EPS;
            let upper = dq <= lambda * dc + EPS;
            lower_holds &= lower;
            upper_holds &= upper;
            if !(lower && upper) && violation.is_none() {
                violation = Some((i, j));
            }
            if dc > 0.0 {
                measured_ratio = measured_ratio.max(dq / dc);
            } else if dq > 0.0 {
                measured_ratio = f64::INFINITY;
            }
        }
    }
    let base: Vec<usize> = (0..n).collect();
    let coboundedness = coneoff_mod_k
        .dist_to_set(&base)
        .into_iter()
        .fold(0.0f64, f64::max);
    let cobounded_holds = coboundedness <= 2.0 * rho + EPS;
    Ok(QuotientComparison {
        rho,
        d,
        lambda,
        lower_holds,
        upper_holds,
        measured_ratio,
        coboundedness,
        cobounded_holds,
        violation,
        holds: lower_holds && upper_holds && cobounded_holds,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConeOffQuotient {
    pub x_mod_k: QuotientMetric,
    pub coneoff_mod_k: QuotientMetric,
    pub comparison: QuotientComparison,
}

/// Builds the cone-off of `g` along the `a`-expansion of `q`, takes both
/// quotients by `K`, measures `D` (largest diameter of the image of a `Y`
/// in `X/K`) and compares.
pub fn coneoff_quotient(g: &WeightedGraph, q: &ConeFamily, a: &ActionTable, k: &[usize]) -> Result<ConeOffQuotient> {
    let family = q.expand(a)?;
    let space = build_coneoff(g, &family)?;
    let lifted = space.extend_action(a, &family)?;
    let x = path_metric(g);
    a.check_isometric(&x)?;
    let x_mod_k = quotient_metric(&x, a, k)?;
    let coneoff_mod_k = quotient_metric(&space.metric(), &lifted, k)?;
    if coneoff_mod_k.orbits[..x_mod_k.orbits.len()] != x_mod_k.orbits[..] {
        return Err(Error::VertexMismatch("base orbits do not lead the cone-off orbits".into()));
    }
    let d = family
        .cones
        .iter()
        .map(|c| {
            let mut image: Vec<usize> = c.support.iter().map(|&y| x_mod_k.orbit_of[y]).collect();
            image.sort_unstable();
            image.dedup();
            set_diameter(&x_mod_k.metric, &image).unwrap_or(0.0)
        })
        .fold(0.0f64, f64::max);
    let comparison = quotient_comparison(&x_mod_k.metric, &coneoff_mod_k.metric, q.rho, d)?;
    Ok(ConeOffQuotient {
        x_mod_k,
        coneoff_mod_k,
        comparison,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InjectivityReport {
    pub injective: bool,
    /// Size of the set being mapped.
    pub checked: usize,
    /// Two distinct elements with the same image, as group elements or words.
    pub collision: Option<(String, String)>,
}

/// Finite version: `{g : d(gx, x) ≤ ρ/100}` maps injectively to `G/K` iff no
/// two of its elements differ by an element of `K`. `K` must be normal.
pub fn ball_injectivity_table<M: Metric + ?Sized>(
    a: &ActionTable,
    m: &M,
    k: &[usize],
    x: usize,
    rho: f64,
) -> Result<InjectivityReport> {
    check_index(x, m.len())?;
    if rho.is_nan() || rho < 0.0 {
        return Err(Error::InvalidParameter(format!("rho must be non-negative, got {rho}")));
    }
    if !a.is_subgroup(k) {
        return Err(Error::InvalidAction("K is not a subgroup".into()));
    }
    let normal = (0..a.order()).all(|g| {
        k.iter()
            .all(|&h| k.contains(&a.mul(a.mul(g, h), a.inverse(g))))
    });
    if !normal {
        return Err(Error::InvalidAction("K is not normal".into()));
    }
    let set: Vec<usize> = (0..a.order())
        .filter(|&g| m.dist(a.act(g, x), x) <= rho / 100.0 + EPS)
        .collect();
    let mut collision = None;
    'outer: for (i, &g) in set.iter().enumerate() {
        for &h in &set[i + 1..] {
            if k.contains(&a.mul(a.inverse(g), h)) {
                collision = Some((g.to_string(), h.to_string()));
                break 'outer;
            }
        }
    }
    Ok(InjectivityReport {
        injective: collision.is_none(),
        checked: set.len(),
        collision,
    })
}

/// Upper limit on the number of words enumerated by the Dehn variant.
const MAX_DEHN_WORDS: u64 = 20_000_000;

/// Free-group version: the ball of radius `radius` in `F` maps injectively
/// to `F/⟨⟨R⟩⟩` iff no nonempty reduced `g₁g₂⁻¹` with `|gᵢ| ≤ radius` is
/// trivial. Those products are exactly the nonempty reduced words of length
/// at most `2·radius`; each is Dehn-reduced. Requires C′(1/6).
pub fn ball_injectivity_dehn(p: &Presentation, radius: usize) -> Result<InjectivityReport> {
    let dehn = DehnReducer::new(p);
    if !dehn.is_sound() {
        return Err(Error::InvalidParameter("Dehn injectivity check needs a C'(1/6) presentation".into()));
    }
    let rank = p.rank() as u64;
    let max_len = 2 * radius;
    let mut total: u64 = 0;
    let mut layer = 2 * rank;
    for _ in 0..max_len {
        total = total.saturating_add(layer);
        layer = layer.saturating_mul((2 * rank).saturating_sub(1).max(1));
    }
    if total > MAX_DEHN_WORDS {
        return Err(Error::InsufficientWindow(format!(
            "{total} words of length ≤ {max_len}; limit is {MAX_DEHN_WORDS}"
        )));
    }
    let letters: Vec<Letter> = (1..=p.rank() as Letter).flat_map(|l| [l, -l]).collect();
    let mut checked = 0;
    let mut stack: Vec<Vec<Letter>> = vec![Vec::new()];
    while let Some(w) = stack.pop() {
        if !w.is_empty() {
            checked += 1;
            if dehn.reduce(&Word::new(w.clone())).is_empty() {
                let half = w.len().div_ceil(2);
                let g1 = Word::new(w[..half].to_vec());
                let g2 = Word::new(w[half..].to_vec()).inverse();
                return Ok(InjectivityReport {
                    injective: false,
                    checked,
                    collision: Some((p.display_word(&g1), p.display_word(&g2))),
                });
            }
        }
        if w.len() < max_len {
            for &l in letters.iter().rev() {
                if w.last() != Some(&-l) {
                    let mut next = w.clone();
                    next.push(l);
                    stack.push(next);
                }
            }
        }
    }
    Ok(InjectivityReport {
        injective: true,
        checked,
        collision: None,
    })
}
