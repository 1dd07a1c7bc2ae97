//! Text format for words and presentations.
//!
//! Letters are single ASCII letters: lowercase for a generator, uppercase for
//! its inverse. Factors take integer exponents (`x^3`, `x^-1`, `(Yxy)^2`) and
//! whitespace is ignored. `1` is the empty word. A presentation has one
//! relator per line; `lhs = rhs` stands for the relator `lhs⁻¹ rhs`; `#`
//! starts a comment; an optional `gens: x y` line fixes generator order
//! (otherwise generators are the letters used, in alphabetical order).

use std::fmt;

use serde::{Deserialize, Serialize};

use super::Word;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Presentation {
    pub generators: Vec<String>,
    /// Cyclically reduced and nonempty.
    pub relators: Vec<Word>,
}

impl Presentation {
    pub fn new(generators: Vec<String>, relators: Vec<Word>) -> Result<Self> {
        for name in &generators {
            if name.len() != 1 || !name.as_bytes()[0].is_ascii_lowercase() {
                return Err(Error::InvalidParameter(format!(
                    "generator names are single lowercase letters, got {name:?}"
                )));
            }
        }
        let mut reduced = Vec::with_capacity(relators.len());
        for r in relators {
            if r.rank() > generators.len() {
                return Err(Error::InvalidParameter(format!(
                    "relator uses generator {} of {}",
                    r.rank(),
                    generators.len()
                )));
            }
            let r = r.cyclic_reduce();
            if r.is_empty() {
                return Err(Error::TrivialWord("relator"));
            }
            reduced.push(r);
        }
        Ok(Presentation {
            generators,
            relators: reduced,
        })
    }

    /// Free group on the given names.
    pub fn free(names: &[&str]) -> Result<Self> {
        Presentation::new(names.iter().map(|s| s.to_string()).collect(), Vec::new())
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn is_free(&self) -> bool {
        self.relators.is_empty()
    }

    pub fn parse_word(&self, s: &str) -> Result<Word> {
        parse_word(s, &self.generators)
    }

    pub fn display_word(&self, w: &Word) -> String {
        w.display(&self.generators)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut declared: Option<Vec<String>> = None;
        let mut raw: Vec<(usize, &str, usize)> = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let body = line.split('#').next().unwrap_or("");
            let trimmed = body.trim_start();
            let offset = body.len() - trimmed.len();
            if trimmed.trim().is_empty() {
                continue;
            }
            if let Some(rest) = trimmed.strip_prefix("gens:") {
                let names: Vec<String> = rest
                    .split(|c: char| c.is_whitespace() || c == ',')
                    .filter(|s| !s.is_empty())
                    .map(str::to_string)
                    .collect();
                if let Some(bad) = names.iter().find(|n| n.len() != 1 || !n.as_bytes()[0].is_ascii_lowercase()) {
                    return Err(Error::Parse {
                        line: i + 1,
                        column: offset + 1,
                        message: format!("generator names are single lowercase letters, got {bad:?}"),
                    });
                }
                declared = Some(names);
            } else {
                raw.push((i + 1, trimmed, offset));
            }
        }
        let generators = declared.unwrap_or_else(|| {
            let mut seen: Vec<char> = raw
                .iter()
                .flat_map(|(_, s, _)| s.chars())
                .filter(char::is_ascii_alphabetic)
                .map(|c| c.to_ascii_lowercase())
                .collect();
            seen.sort_unstable();
            seen.dedup();
            seen.into_iter().map(String::from).collect()
        });
        let mut relators = Vec::with_capacity(raw.len());
        for (line, s, offset) in raw {
            let r = parse_relator(s, &generators).map_err(|e| shift(e, line, offset))?;
            if r.cyclic_reduce().is_empty() {
                return Err(Error::Parse {
                    line,
                    column: offset + 1,
                    message: "relator reduces to the empty word".into(),
                });
            }
            relators.push(r);
        }
        Presentation::new(generators, relators)
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rels: Vec<String> = self.relators.iter().map(|r| self.display_word(r)).collect();
        write!(f, "<{} | {}>", self.generators.join(", "), rels.join(", "))
    }
}

fn shift(e: Error, line: usize, offset: usize) -> Error {
    match e {
        Error::Parse { column, message, .. } => Error::Parse {
            line,
            column: column + offset,
            message,
        },
        other => other,
    }
}

fn parse_relator(s: &str, names: &[String]) -> Result<Word> {
    match s.find('=') {
        Some(eq) => {
            let lhs = parse_word(&s[..eq], names)?;
            let rhs = parse_word(&s[eq + 1..], names).map_err(|e| shift(e, 1, eq + 1))?;
            Ok(lhs.inverse().mul(&rhs))
        }
        None => parse_word(s, names),
    }
}

/// Parses a single word on one line; positions in errors are 1-based columns.
pub fn parse_word(s: &str, names: &[String]) -> Result<Word> {
    let mut p = Parser {
        chars: s.chars().collect(),
        pos: 0,
        names,
    };
    let w = p.sequence()?;
    p.skip_ws();
    if p.pos < p.chars.len() {
        return Err(p.error(format!("unexpected {:?}", p.chars[p.pos])));
    }
    Ok(w)
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    names: &'a [String],
}

impl Parser<'_> {
    fn error(&self, message: String) -> Error {
        Error::Parse {
            line: 1,
            column: self.pos + 1,
            message,
        }
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace() || *c == '*' || *c == '.') {
            self.pos += 1;
        }
    }

    fn sequence(&mut self) -> Result<Word> {
        let mut letters = Vec::new();
        loop {
            self.skip_ws();
            match self.chars.get(self.pos) {
                None | Some(')') => break,
                _ => {
                    let f = self.factor()?;
                    letters.extend_from_slice(f.letters());
                }
            }
        }
        Ok(Word::new(letters))
    }

    fn factor(&mut self) -> Result<Word> {
        let atom = match self.chars[self.pos] {
            '(' => {
                self.pos += 1;
                let inner = self.sequence()?;
                if self.chars.get(self.pos) != Some(&')') {
                    return Err(self.error("missing ')'".into()));
                }
                self.pos += 1;
                inner
            }
            '1' => {
                self.pos += 1;
                Word::empty()
            }
            c if c.is_ascii_alphabetic() => {
                let name = c.to_ascii_lowercase().to_string();
                let Some(k) = self.names.iter().position(|n| *n == name) else {
                    return Err(self.error(format!("unknown generator {name:?}")));
                };
                self.pos += 1;
                let l = (k + 1) as i32;
                Word::new(vec![if c.is_ascii_uppercase() { -l } else { l }])
            }
            c => return Err(self.error(format!("unexpected {c:?}"))),
        };
        self.skip_ws();
        if self.chars.get(self.pos) != Some(&'^') {
            return Ok(atom);
        }
        self.pos += 1;
        self.skip_ws();
        let start = self.pos;
        if matches!(self.chars.get(self.pos), Some('-' | '+')) {
            self.pos += 1;
        }
        while self.chars.get(self.pos).is_some_and(char::is_ascii_digit) {
            self.pos += 1;
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        let e: i64 = text.parse().map_err(|_| Error::Parse {
            line: 1,
            column: start + 1,
            message: format!("bad exponent {text:?}"),
        })?;
        // exponents apply to the literal letters; free reduction is left to callers
        let base = atom.letters();
        let inv = atom.inverse();
        let unit = if e < 0 { inv.letters() } else { base };
        let mut letters = Vec::with_capacity(unit.len() * e.unsigned_abs() as usize);
        for _ in 0..e.unsigned_abs() {
            letters.extend_from_slice(unit);
        }
        Ok(Word::new(letters))
    }
}

/// `⟨x, y | y = x(y⁻¹xy)x²(y⁻¹xy)⋯x¹⁰(y⁻¹xy)⟩`, relator
/// `y⁻¹ · x(y⁻¹xy)x²(y⁻¹xy)⋯x¹⁰(y⁻¹xy)` cyclically reduced.
pub fn h2_presentation() -> Presentation {
    let (x, y) = (1, 2);
    let mut letters = vec![-y];
    for k in 1..=10 {
        letters.extend(std::iter::repeat_n(x, k));
        letters.extend([-y, x, y]);
    }
    Presentation::new(vec!["x".into(), "y".into()], vec![Word::new(letters)]).expect("valid presentation")
}
