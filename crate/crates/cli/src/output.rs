use std::fmt::Write as _;

use anyhow::{bail, Result};
use clap::ValueEnum;
use hypcone::WeightedGraph;
use serde_json::{Map, Number, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Dot,
    Text,
}

/// What a command produces: a JSON report, whether its check passed, and a
/// graph for DOT output when there is one.
pub struct Outcome {
    pub report: Value,
    pub passed: bool,
    pub graph: Option<(String, WeightedGraph)>,
}

impl Outcome {
    pub fn ok(report: Value) -> Self {
        Outcome {
            report,
            passed: true,
            graph: None,
        }
    }

    pub fn check(report: Value, passed: bool) -> Self {
        Outcome {
            report,
            passed,
            graph: None,
        }
    }

    pub fn with_graph(mut self, name: &str, g: WeightedGraph) -> Self {
        self.graph = Some((name.to_string(), g));
        self
    }
}

/// Rounds every non-integer number to 12 significant digits.
pub fn round_floats(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().expect("f64 number");
            let r: f64 = format!("{x:.11e}").parse().expect("formatted float parses");
            Number::from_f64(r).map_or(Value::Null, Value::Number)
        }
        Value::Array(a) => Value::Array(a.into_iter().map(round_floats).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, round_floats(v))).collect::<Map<_, _>>()),
        other => other,
    }
}

pub fn render(outcome: &Outcome, format: Format) -> Result<String> {
    let report = round_floats(outcome.report.clone());
    match format {
        Format::Json => Ok(format!("{}\n", serde_json::to_string_pretty(&report)?)),
        Format::Dot => match &outcome.graph {
            Some((name, g)) => Ok(g.to_dot(name)),
            None => bail!("this command has no graph to render as DOT"),
        },
        Format::Text => {
            let mut out = String::new();
            text(&report, "", &mut out);
            Ok(out)
        }
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn text(v: &Value, prefix: &str, out: &mut String) {
    match v {
        Value::Object(o) => {
            for (k, v) in o {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                text(v, &key, out);
            }
        }
        Value::Array(a) if a.iter().any(|x| x.is_object() || x.is_array()) => {
            for (i, v) in a.iter().enumerate() {
                text(v, &format!("{prefix}[{i}]"), out);
            }
        }
        Value::Array(a) => {
            let items: Vec<String> = a.iter().map(scalar).collect();
            let _ = writeln!(out, "{prefix}: [{}]", items.join(", "));
        }
        other => {
            let _ = writeln!(out, "{prefix}: {}", scalar(other));
        }
    }
}
