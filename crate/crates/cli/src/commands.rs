use std::path::PathBuf;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, ValueEnum};
use hypcone::actions::{
    barycentric_subdivision, build_orbit_graph, classify_element, min_power_for_injectivity, min_set_axis,
    quotient_metric, translation_length, uniform_properness_bound,
};
use hypcone::coneoff::{
    build_coneoff, check_sc_hypotheses, coneoff_quotient, delta_param, inj_param, ScParameters,
};
use hypcone::delta::{hyperbolicity_delta_pruned, hyperbolicity_delta_serial};
use hypcone::geometry::{
    bounded_geometry_bound, capacity, greedy_maximal_net, is_quasiconvex, is_strongly_quasiconvex,
};
use hypcone::words::{
    are_commensurable_free, cayley_ball, check_metric_sc, h2_presentation, piece_report, DehnReducer,
    Presentation, Word,
};
use hypcone::{
    gromov_product, hyperbolicity_delta, path_metric, FiniteMetricSpace, GraphMetric, Metric, PartialPerm, WeightedGraph,
};
use num_rational::Ratio;
use serde_json::{json, Value};

use crate::input::{self, located};
use crate::output::Outcome;
use crate::{Command, Space, Window};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Scan {
    Parallel,
    Serial,
    Pruned,
}

/// An element of a finite action, or a word acting on a Cayley-ball window.
#[derive(Args, Debug)]
pub struct ElementTarget {
    #[arg(long, requires = "action", conflicts_with = "presentation")]
    graph: Option<PathBuf>,
    #[arg(long, requires = "element")]
    action: Option<PathBuf>,
    #[arg(long)]
    element: Option<usize>,
    #[arg(long, requires_all = ["radius", "word"])]
    presentation: Option<PathBuf>,
    #[arg(long)]
    radius: Option<usize>,
    #[arg(long)]
    word: Option<String>,
}

#[derive(Args, Debug)]
pub struct ParamInputs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    family: PathBuf,
    /// Action used to expand the family and read the subgroups H.
    #[arg(long)]
    action: Option<PathBuf>,
    /// Use this δ instead of computing it.
    #[arg(long)]
    delta: Option<f64>,
}

fn space(s: &Space) -> Result<FiniteMetricSpace> {
    match (&s.graph, &s.metric) {
        (Some(g), _) => Ok(path_metric(&input::graph(g)?)),
        (None, Some(m)) => input::metric(m),
        (None, None) => bail!("one of --graph or --metric is required"),
    }
}

fn lib<T>(r: hypcone::Result<T>) -> Result<T> {
    r.map_err(|e| anyhow!(e))
}

/// A resolved element target: a finite action evaluated on its dense metric,
/// or a Cayley-ball window evaluated lazily.
enum Target {
    Finite(FiniteMetricSpace, PartialPerm, Vec<String>),
    Window(WeightedGraph, PartialPerm),
}

impl Target {
    fn with<T>(&self, f: impl FnOnce(&dyn Metric, &PartialPerm, &[String]) -> T) -> T {
        match self {
            Target::Finite(m, g, labels) => f(m, g, labels),
            Target::Window(graph, g) => f(&GraphMetric::new(graph), g, graph.labels()),
        }
    }
}

fn element(t: &ElementTarget) -> Result<Target> {
    if let Some(p) = &t.presentation {
        let w = Window {
            presentation: p.clone(),
            radius: t.radius.context("--radius is required with --presentation")?,
            word: t.word.clone().context("--word is required with --presentation")?,
        };
        let pres = input::presentation(&w.presentation)?;
        let g = input::word("--word", &w.word, &pres.generators)?;
        let ball = lib(cayley_ball(&pres, w.radius))?;
        let map = ball.element_map(&g);
        return Ok(Target::Window(ball.graph, map));
    }
    let (Some(gp), Some(ap), Some(e)) = (&t.graph, &t.action, t.element) else {
        bail!("give --graph, --action and --element, or --presentation, --radius and --word");
    };
    let graph = input::graph(gp)?;
    let a = input::action(ap)?;
    if e >= a.order() {
        bail!("--element {e} out of range for a group of order {}", a.order());
    }
    let m = path_metric(&graph);
    lib(a.check_isometric(&m)).map_err(|err| anyhow!("{}: {err}", ap.display()))?;
    let map = a.element_map(e);
    Ok(Target::Finite(m, map, graph.labels().to_vec()))
}

fn words_json(p: &Presentation, ws: &[Word]) -> Vec<String> {
    ws.iter().map(|w| p.display_word(w)).collect()
}

fn c_prime(p: &Presentation, lambda: Ratio<u64>) -> Result<Outcome> {
    let sc = lib(check_metric_sc(p, lambda))?;
    let pieces = piece_report(p);
    let witnesses: Vec<Value> = pieces
        .witnesses
        .iter()
        .map(|w| {
            json!({
                "piece": p.display_word(&w.piece),
                "first": p.display_word(&w.first),
                "second": p.display_word(&w.second),
            })
        })
        .collect();
    let violation = sc.violation.as_ref().map(|w| {
        json!({
            "piece": p.display_word(&w.piece),
            "first": p.display_word(&w.first),
            "second": p.display_word(&w.second),
        })
    });
    let report = json!({
        "holds": sc.holds,
        "lambda": sc.lambda,
        "max_piece": sc.max_piece_length,
        "min_relator": sc.min_relator_length,
        "ratio": pieces.ratio,
        "relators": words_json(p, &p.relators),
        "witnesses": witnesses,
        "violation": violation,
    });
    Ok(Outcome::check(report, sc.holds))
}

fn sc_parameters(p: &ParamInputs) -> Result<(ScParameters, Value, Option<f64>)> {
    let graph = input::graph(&p.graph)?;
    let mut family = input::family(&p.family)?;
    let m = path_metric(&graph);
    let action = p.action.as_ref().map(|a| input::action(a)).transpose()?;
    if let Some(a) = &action {
        family = lib(family.expand(a))?;
    }
    let delta = match p.delta {
        Some(d) => d,
        None => lib(hyperbolicity_delta(&m))?.delta,
    };
    let big_delta = lib(delta_param(&family, &m, delta))?;
    let inj = match &action {
        Some(a) => lib(inj_param(&family, a, &m))?,
        None => hypcone::coneoff::InjParam {
            value: f64::INFINITY,
            witness: None,
        },
    };
    let params = ScParameters {
        delta_x: delta,
        big_delta_q: big_delta.value,
        inj_q: inj.value,
        rho: family.rho,
    };
    let space = lib(build_coneoff(&graph, &family))?;
    let coneoff_delta = lib(hyperbolicity_delta(&space.metric()))?.delta;
    let detail = json!({
        "parameters": params,
        "Delta_pair": big_delta.pair,
        "inj_witness": inj.witness,
        "cones": family.len(),
        "coneoff_delta": coneoff_delta,
    });
    Ok((params, detail, Some(coneoff_delta)))
}

pub fn run(cmd: &Command) -> Result<Outcome> {
    match cmd {
        Command::Delta { space: s, scan } => {
            let m = space(s)?;
            let cert = lib(match scan {
                Scan::Parallel => hyperbolicity_delta(&m),
                Scan::Serial => hyperbolicity_delta_serial(&m),
                Scan::Pruned => hyperbolicity_delta_pruned(&m),
            })?;
            Ok(Outcome::ok(json!({
                "delta": cert.delta,
                "witness": cert.witness,
                "points": m.points(),
            })))
        }
        Command::Gromov { space: s, x, y, z } => {
            let m = space(s)?;
            let product = lib(gromov_product(&m, *x, *y, *z))?;
            Ok(Outcome::ok(json!({ "x": x, "y": y, "z": z, "product": product })))
        }
        Command::Capacity { space: s, r, region } => {
            let m = space(s)?;
            let region = region.clone().unwrap_or_else(|| (0..m.points()).collect());
            Ok(Outcome::ok(serde_json::to_value(lib(capacity(&m, &region, *r))?)?))
        }
        Command::Net { space: s, r, radius } => {
            let m = space(s)?;
            let net = lib(greedy_maximal_net(&m, *r))?;
            let mut report = json!({ "r": r, "net": net, "size": net.len() });
            if let Some(radius) = radius {
                report["bounded_geometry"] = serde_json::to_value(lib(bounded_geometry_bound(&m, *r, *radius))?)?;
            }
            Ok(Outcome::ok(report))
        }
        Command::Quasiconvex { graph, set, alpha, delta } => {
            let g = input::graph(graph)?;
            match (alpha, delta) {
                (_, Some(d)) => {
                    let r = lib(is_strongly_quasiconvex(&g, set, *d))?;
                    Ok(Outcome::check(serde_json::to_value(&r)?, r.holds))
                }
                (Some(a), None) => {
                    let r = lib(is_quasiconvex(&path_metric(&g), set, *a))?;
                    Ok(Outcome::check(serde_json::to_value(&r)?, r.holds))
                }
                (None, None) => bail!("give --alpha, or --delta for strong quasi-convexity"),
            }
        }
        Command::Properness { space: s, action, r } => {
            let m = space(s)?;
            let a = input::action(action)?;
            Ok(Outcome::ok(serde_json::to_value(lib(uniform_properness_bound(&a, &m, *r))?)?))
        }
        Command::Translation { target } => {
            let report = element(target)?.with(|m, g, labels| {
                let axis = min_set_axis(m, g);
                let names: Vec<&str> = axis.iter().map(|&i| labels[i].as_str()).collect();
                json!({
                    "translation_length": translation_length(m, g),
                    "min_set": axis,
                    "min_set_labels": names,
                })
            });
            Ok(Outcome::ok(report))
        }
        Command::Classify { target, base, n_max, rho } => {
            element(target)?.with(|m, g, _| {
                let report = lib(classify_element(m, g, *base, *n_max))?;
                let mut out = serde_json::to_value(&report)?;
                if let Some(rho) = rho {
                    out["power_threshold"] = match min_power_for_injectivity(m, g, *base, *rho, *n_max) {
                        Ok(t) => serde_json::to_value(t)?,
                        Err(e) => json!({ "kind": "inconclusive", "reason": e.to_string() }),
                    };
                }
                Ok(Outcome::ok(out))
            })
        }
        Command::OrbitGraph { graph, action, r } => {
            let g = input::graph(graph)?;
            let a = input::action(action)?;
            let og = lib(build_orbit_graph(&a, &path_metric(&g), *r))?;
            let passed = og.free_action && og.valence_within_bound() && og.distortion.is_finite();
            let mut report = serde_json::to_value(&og)?;
            report["valence_bound"] = json!(og.capacity_bound * og.properness_bound);
            report["valence_within_bound"] = json!(og.valence_within_bound());
            Ok(Outcome::check(report, passed).with_graph("orbit_graph", og.graph))
        }
        Command::Quotient { graph, action, subgroup, subdivide } => {
            let g = input::graph(graph)?;
            let a = input::action(action)?;
            if *subdivide {
                let (sub, lifted) = lib(barycentric_subdivision(&g, &a))?;
                let report = json!({
                    "graph": sub,
                    "action": lifted,
                    "inversion_free": lifted.inversion(&sub).is_none(),
                });
                return Ok(Outcome::ok(report).with_graph("subdivision", sub));
            }
            let k = match subgroup {
                Some(gens) => lib(a.subgroup_generated(gens))?,
                None => (0..a.order()).collect(),
            };
            let q = lib(quotient_metric(&path_metric(&g), &a, &k))?;
            Ok(Outcome::ok(json!({
                "subgroup": k,
                "orbits": q.orbits,
                "metric": q.metric,
                "collapsed": q.collapsed,
            })))
        }
        Command::Coneoff { graph, family, action } => {
            let g = input::graph(graph)?;
            let mut fam = input::family(family)?;
            if let Some(a) = action {
                fam = lib(fam.expand(&input::action(a)?))?;
            }
            let space = lib(build_coneoff(&g, &fam))?;
            let full = space.metric();
            let base = path_metric(&g);
            let n = g.vertex_count();
            let lipschitz = (0..n).all(|x| (0..n).all(|y| full.dist(x, y) <= base.dist(x, y) + hypcone::metric::EPS));
            let report = json!({
                "rho": space.rho,
                "base_vertices": space.base_vertices,
                "apices": space.apices,
                "rim_edges": space.rim_edges,
                "chord_edges": space.chord_edges,
                "one_lipschitz": lipschitz,
                "diameter": full.diameter(),
                "metric": full,
            });
            Ok(Outcome::check(report, lipschitz).with_graph("coneoff", space.graph))
        }
        Command::ScParams { params } => {
            let (_, detail, _) = sc_parameters(params)?;
            Ok(Outcome::ok(detail))
        }
        Command::ScCheck { params, constants } => {
            let c = input::constants(constants.as_ref())?;
            let (p, detail, coneoff_delta) = sc_parameters(params)?;
            let report = check_sc_hypotheses(&p, &c, coneoff_delta);
            let mut out = serde_json::to_value(&report)?;
            out["parameters"] = detail;
            Ok(Outcome::check(out, report.holds))
        }
        Command::QiCheck { graph, action, family, subgroup } => {
            let g = input::graph(graph)?;
            let a = input::action(action)?;
            let fam = input::family(family)?;
            let k = lib(a.subgroup_generated(subgroup))?;
            let r = lib(coneoff_quotient(&g, &fam, &a, &k))?;
            let passed = r.comparison.holds;
            Ok(Outcome::check(serde_json::to_value(&r)?, passed))
        }
        Command::Pieces { presentation } => {
            let p = input::presentation(presentation)?;
            let r = piece_report(&p);
            let witnesses: Vec<Value> = r
                .witnesses
                .iter()
                .map(|w| json!({"piece": p.display_word(&w.piece), "first": p.display_word(&w.first), "second": p.display_word(&w.second)}))
                .collect();
            Ok(Outcome::ok(json!({
                "max_piece_length": r.max_piece_length,
                "min_relator_length": r.min_relator_length,
                "ratio": r.ratio,
                "symmetrized_count": r.symmetrized_count,
                "witnesses": witnesses,
            })))
        }
        Command::CPrime { presentation, lambda } => {
            let p = input::presentation(presentation)?;
            let lambda: Ratio<u64> = lambda
                .trim()
                .parse()
                .map_err(|_| anyhow!("--lambda: expected a fraction such as 1/6, got {lambda:?}"))?;
            c_prime(&p, lambda)
        }
        Command::Dehn { presentation, word } => {
            let p = input::presentation(presentation)?;
            let w = input::word("--word", word, &p.generators)?;
            let out = DehnReducer::new(&p).outcome(&w);
            Ok(Outcome::ok(json!({
                "input": p.display_word(&w),
                "reduced": p.display_word(&out.reduced),
                "trivial": out.trivial,
                "heuristic": out.heuristic,
            })))
        }
        Command::Commensurable { g, h, presentation } => {
            let names = match presentation {
                Some(p) => input::presentation(p)?.generators,
                None => input::letters_of(&[g, h]),
            };
            let gw = input::word("--g", g, &names)?;
            let hw = input::word("--h", h, &names)?;
            let c = are_commensurable_free(&gw, &hw).map_err(|e| located("--g/--h", e))?;
            Ok(Outcome::ok(json!({
                "g": gw.display(&names),
                "h": hw.display(&names),
                "commensurable": c.commensurable,
                "n": c.n,
                "m": c.m,
                "u": c.conjugator.as_ref().map(|u| u.display(&names)),
            })))
        }
        Command::CayleyBall { presentation, radius } => {
            let p = input::presentation(presentation)?;
            let ball = lib(cayley_ball(&p, *radius))?;
            let generators: Vec<Value> = ball
                .generator_maps()
                .iter()
                .zip(&p.generators)
                .map(|(m, name)| json!({ "name": name, "map": m.images() }))
                .collect();
            let report = json!({
                "radius": radius,
                "vertices": ball.len(),
                "edges": ball.graph.edge_count(),
                "graph": ball.graph,
                "generators": generators,
            });
            Ok(Outcome::ok(report).with_graph("cayley_ball", ball.graph))
        }
        Command::H2 => {
            let p = h2_presentation();
            let r = &p.relators[0];
            let check = c_prime(&p, Ratio::new(1, 6))?;
            let report = json!({
                "presentation": p.to_string(),
                "relator": p.display_word(r),
                "length": r.len(),
                "exponent_sum_x": r.exponent_sum(0),
                "exponent_sum_y": r.exponent_sum(1),
                "c_prime_1_6": check.report,
            });
            Ok(Outcome::check(report, check.passed))
        }
    }
}
