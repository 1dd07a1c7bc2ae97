use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Result};
use hypcone::coneoff::{ConeFamily, ScConstants, CONSTANTS_ENV};
use hypcone::words::{parse_word, Presentation, Word};
use hypcone::{ActionTable, Error, FiniteMetricSpace, WeightedGraph};

/// Turns a library error into `source:line:column: message` where a position
/// is known, `source: message` otherwise.
pub fn located(source: &str, e: Error) -> anyhow::Error {
    match e {
        Error::Json(j) => {
            let text = j.to_string();
            let suffix = format!(" at line {} column {}", j.line(), j.column());
            let msg = text.strip_suffix(&suffix).unwrap_or(&text);
            anyhow!("{source}:{}:{}: {msg}", j.line(), j.column())
        }
        Error::Parse { line, column, message } => anyhow!("{source}:{line}:{column}: {message}"),
        other => anyhow!("{source}: {other}"),
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| anyhow!("{}: cannot read: {e}", path.display()))
}

fn load<T>(path: &Path, parse: impl FnOnce(&str) -> hypcone::Result<T>) -> Result<T> {
    let text = read(path)?;
    parse(&text).map_err(|e| located(&path.display().to_string(), e))
}

pub fn graph(path: &Path) -> Result<WeightedGraph> {
    load(path, WeightedGraph::from_json_str)
}

pub fn metric(path: &Path) -> Result<FiniteMetricSpace> {
    load(path, FiniteMetricSpace::from_json_str)
}

pub fn action(path: &Path) -> Result<ActionTable> {
    load(path, ActionTable::from_json_str)
}

pub fn presentation(path: &Path) -> Result<Presentation> {
    load(path, Presentation::parse)
}

pub fn family(path: &Path) -> Result<ConeFamily> {
    load(path, ConeFamily::from_json_str)
}

/// `--constants` wins over the environment variable; there is no default.
pub fn constants(flag: Option<&PathBuf>) -> Result<ScConstants> {
    let path = match flag {
        Some(p) => p.clone(),
        None => match std::env::var_os(CONSTANTS_ENV) {
            Some(p) if !p.is_empty() => PathBuf::from(p),
            _ => bail!("no constants file: pass --constants or set {CONSTANTS_ENV} to a JSON file with delta0, Delta0, rho0"),
        },
    };
    load(&path, ScConstants::from_json_str)
}

pub fn word(flag: &str, text: &str, names: &[String]) -> Result<Word> {
    parse_word(text, names).map_err(|e| located(flag, e))
}

/// Generator names for free words: the letters used, in alphabetical order.
pub fn letters_of(texts: &[&str]) -> Vec<String> {
    let mut seen: Vec<char> = texts
        .iter()
        .flat_map(|t| t.chars())
        .filter(char::is_ascii_alphabetic)
        .map(|c| c.to_ascii_lowercase())
        .collect();
    seen.sort_unstable();
    seen.dedup();
    seen.into_iter().map(String::from).collect()
}
