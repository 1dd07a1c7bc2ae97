//! Small-cancellation parameters of a cone family and the hypothesis check.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::ConeFamily;
use crate::actions::{overlap_diameter, translation_length, ActionTable, PartialPerm};
use crate::error::{Error, Result};
use crate::metric::{Metric, EPS};

/// Environment variable naming the constants file.
pub const CONSTANTS_ENV: &str = "HYPCONE_CONSTANTS";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeltaParam {
    /// Longest overlap; `0` when no pair of cones overlaps.
    pub value: f64,
    /// Cone indices attaining the value.
    pub pair: Option<(usize, usize)>,
}

/// Max over pairs of distinct entries of `diam(Y₁^{+5δ} ∩ Y₂^{+5δ})`, with an
/// empty intersection counting as `0`. The family should already be
/// expanded over the group.
pub fn delta_param<M: Metric + ?Sized>(q: &ConeFamily, m: &M, delta: f64) -> Result<DeltaParam> {
    q.validate(m.len(), None)?;
    let mut best = DeltaParam { value: 0.0, pair: None };
    for i in 0..q.len() {
        for j in i + 1..q.len() {
            if q.cones[i] == q.cones[j] {
                continue;
            }
            let d = overlap_diameter(m, &q.cones[i].support, &q.cones[j].support, delta)?;
            if let Some(d) = d {
                if d > best.value || best.pair.is_none() {
                    best = DeltaParam { value: d, pair: Some((i, j)) };
                }
            }
        }
    }
    Ok(best)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InjParam {
    /// Shortest translation length of a nontrivial `h ∈ H`; `∞` (`null` in
    /// JSON) when every `H` is trivial.
    pub value: f64,
    /// `(cone, element)` attaining the value.
    pub witness: Option<(usize, usize)>,
}

/// `min ‖h‖` over `h ∈ H ∖ {1}` and all entries `(H, Y)`.
pub fn inj_param<M: Metric + ?Sized>(q: &ConeFamily, a: &ActionTable, m: &M) -> Result<InjParam> {
    if m.len() != a.points() {
        return Err(Error::VertexMismatch(format!(
            "action on {} points, space has {}",
            a.points(),
            m.len()
        )));
    }
    q.validate(m.len(), Some(a))?;
    let mut best = InjParam {
        value: f64::INFINITY,
        witness: None,
    };
    for (i, c) in q.cones.iter().enumerate() {
        for &h in &c.subgroup {
            if h == a.identity() {
                continue;
            }
            let t = translation_length(m, &a.element_map(h)).unwrap_or(f64::INFINITY);
            if t < best.value {
                best = InjParam {
                    value: t,
                    witness: Some((i, h)),
                };
            }
        }
    }
    Ok(best)
}

/// Window version: each inner list holds the nontrivial elements of one `H`
/// as partial maps. The witness is `(subgroup, position in its list)`.
pub fn inj_param_windowed<M: Metric + ?Sized>(m: &M, subgroups: &[Vec<PartialPerm>]) -> Result<InjParam> {
    let mut best = InjParam {
        value: f64::INFINITY,
        witness: None,
    };
    for (i, elements) in subgroups.iter().enumerate() {
        for (k, h) in elements.iter().enumerate() {
            if h.is_identity() {
                continue;
            }
            let t = translation_length(m, h).ok_or_else(|| {
                Error::InsufficientWindow(format!("element {k} of subgroup {i} is nowhere defined"))
            })?;
            if t < best.value {
                best = InjParam {
                    value: t,
                    witness: Some((i, k)),
                };
            }
        }
    }
    Ok(best)
}

/// The constants `δ₀, Δ₀, ρ₀` (and optionally `δ₁`) the hypothesis check is
/// measured against. There are no defaults.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScConstants {
    pub delta0: f64,
    #[serde(rename = "Delta0")]
    pub big_delta0: f64,
    pub rho0: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta1: Option<f64>,
}

impl ScConstants {
    /// Reads `{"delta0": …, "Delta0": …, "rho0": …, "delta1": …}`.
    pub fn from_json_str(s: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(s)?;
        let get = |key: &'static str| -> Result<Option<f64>> {
            match v.get(key) {
                None | Some(Value::Null) => Ok(None),
                Some(x) => x
                    .as_f64()
                    .filter(|f| f.is_finite() && *f >= 0.0)
                    .map(Some)
                    .ok_or_else(|| Error::InvalidParameter(format!("constant `{key}` must be a non-negative number"))),
            }
        };
        Ok(ScConstants {
            delta0: get("delta0")?.ok_or(Error::MissingConstant("delta0"))?,
            big_delta0: get("Delta0")?.ok_or(Error::MissingConstant("Delta0"))?,
            rho0: get("rho0")?.ok_or(Error::MissingConstant("rho0"))?,
            delta1: get("delta1")?,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScParameters {
    pub delta_x: f64,
    #[serde(rename = "Delta_Q")]
    pub big_delta_q: f64,
    /// `∞` when every `H` is trivial.
    pub inj_q: f64,
    pub rho: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Clause {
    pub name: String,
    pub holds: bool,
    pub value: f64,
    pub bound: f64,
    /// Signed slack; positive when the clause holds strictly.
    pub margin: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScHypothesisReport {
    pub holds: bool,
    pub clauses: Vec<Clause>,
    pub constants: ScConstants,
}

fn at_most(name: &str, value: f64, bound: f64) -> Clause {
    Clause {
        name: name.into(),
        holds: value <= bound + EPS * bound.abs().max(1.0),
        value,
        bound,
        margin: bound - value,
    }
}

fn at_least(name: &str, value: f64, bound: f64) -> Clause {
    Clause {
        name: name.into(),
        holds: value >= bound - EPS * bound.abs().max(1.0),
        value,
        bound,
        margin: value - bound,
    }
}

/// Checks `δ ≤ δ₀`, `Δ ≤ Δ₀`, `inj ≥ 2π sinh ρ` and `ρ ≥ ρ₀` (all inclusive).
/// With `δ₁` configured and a measured cone-off `δ`, also checks that
/// `δ_coneoff ≤ δ₁`.
pub fn check_sc_hypotheses(p: &ScParameters, c: &ScConstants, coneoff_delta: Option<f64>) -> ScHypothesisReport {
    let mut clauses = vec![
        at_most("delta", p.delta_x, c.delta0),
        at_most("Delta", p.big_delta_q, c.big_delta0),
        at_least("inj", p.inj_q, 2.0 * PI * p.rho.sinh()),
        at_least("rho", p.rho, c.rho0),
    ];
    if let (Some(d1), Some(d)) = (c.delta1, coneoff_delta) {
        clauses.push(at_most("coneoff_delta", d, d1));
    }
    ScHypothesisReport {
        holds: clauses.iter().all(|k| k.holds),
        clauses,
        constants: c.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coneoff::ConeEntry;
    use crate::graph::WeightedGraph;
    use crate::metric::path_metric;

    fn entry(h: Vec<usize>, y: Vec<usize>) -> ConeEntry {
        ConeEntry { subgroup: h, support: y }
    }

    #[test]
    fn delta_param_examples() {
        let m = path_metric(&WeightedGraph::path(20));
        let one = ConeFamily::new(1.0, vec![entry(vec![], vec![0, 1, 2])]).unwrap();
        assert_eq!(delta_param(&one, &m, 1.0).unwrap().value, 0.0);
        let far = ConeFamily::new(1.0, vec![entry(vec![], vec![0]), entry(vec![], vec![19])]).unwrap();
        let d = delta_param(&far, &m, 0.0).unwrap();
        assert_eq!((d.value, d.pair), (0.0, None));
        let overlapping = ConeFamily::new(
            1.0,
            vec![
                entry(vec![], vec![0, 1, 2, 3, 4]),
                entry(vec![], vec![3, 4, 5, 6]),
                entry(vec![], vec![10, 11]),
            ],
        )
        .unwrap();
        // 5δ = 1: {0..5} ∩ {2..7} = {2..5}
        let d = delta_param(&overlapping, &m, 0.2).unwrap();
        assert_eq!((d.value, d.pair), (3.0, Some((0, 1))));
    }

    #[test]
    fn inj_param_examples() {
        let c8 = path_metric(&WeightedGraph::cycle(8));
        let rot = ActionTable::rotations(8, 1);
        let trivial = ConeFamily::new(1.0, vec![entry(vec![rot.identity()], (0..8).collect())]).unwrap();
        let r = inj_param(&trivial, &rot, &c8).unwrap();
        assert_eq!((r.value, r.witness), (f64::INFINITY, None));
        let all: Vec<usize> = (0..8).collect();
        let full = ConeFamily::new(1.0, vec![entry(all.clone(), all)]).unwrap();
        assert_eq!(inj_param(&full, &rot, &c8).unwrap().value, 1.0);
    }

    #[test]
    fn constants_are_required() {
        let c = ScConstants::from_json_str(r#"{"delta0": 0.1, "Delta0": 0.5, "rho0": 10}"#).unwrap();
        assert_eq!(c.delta1, None);
        for missing in [r#"{"Delta0": 1, "rho0": 1}"#, r#"{"delta0": 1, "rho0": 1}"#, r#"{"delta0": 1, "Delta0": 1}"#] {
            assert!(matches!(ScConstants::from_json_str(missing), Err(Error::MissingConstant(_))));
        }
        assert!(ScConstants::from_json_str(r#"{"delta0": -1, "Delta0": 1, "rho0": 1}"#).is_err());
    }

    #[test]
    fn hypothesis_clauses() {
        let c = ScConstants {
            delta0: 1.0,
            big_delta0: 2.0,
            rho0: 1.0,
            delta1: None,
        };
        let rho: f64 = 1.5;
        let threshold = 2.0 * PI * rho.sinh();
        let p = ScParameters {
            delta_x: 0.5,
            big_delta_q: 1.0,
            inj_q: threshold + 1.0,
            rho,
        };
        let r = check_sc_hypotheses(&p, &c, None);
        assert!(r.holds);
        assert!(r.clauses.iter().all(|k| k.margin > 0.0));
        let exact = ScParameters { inj_q: threshold, ..p.clone() };
        assert!(check_sc_hypotheses(&exact, &c, None).holds);
        let rough = ScParameters { delta_x: 1.5, ..p.clone() };
        let r = check_sc_hypotheses(&rough, &c, None);
        assert!(!r.holds);
        let failed: Vec<&str> = r.clauses.iter().filter(|k| !k.holds).map(|k| k.name.as_str()).collect();
        assert_eq!(failed, vec!["delta"]);
        let unbounded = ScParameters { inj_q: f64::INFINITY, ..p };
        assert!(check_sc_hypotheses(&unbounded, &c, None).holds);
    }
}
