use std::collections::HashMap;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use super::{Letter, Presentation, Word};
use crate::error::{Error, Result};

/// Every cyclic shift of every relator and of its inverse, sorted and
/// deduplicated.
pub fn symmetrize(p: &Presentation) -> Vec<Word> {
    let mut out: Vec<Word> = sourced(p).into_iter().map(|(w, _)| w).collect();
    out.dedup();
    out
}

/// Symmetrized words tagged with the relator they come from, sorted.
fn sourced(p: &Presentation) -> Vec<(Word, usize)> {
    let mut out = Vec::new();
    for (i, r) in p.relators.iter().enumerate() {
        for w in [r.clone(), r.inverse()] {
            for k in 0..w.len() {
                out.push((w.rotate(k), i));
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

fn common_prefix(a: &[Letter], b: &[Letter]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PieceWitness {
    pub piece: Word,
    pub first: Word,
    pub second: Word,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PieceReport {
    pub max_piece_length: usize,
    pub min_relator_length: usize,
    /// `max_piece_length / min_relator_length` in lowest terms.
    pub ratio: String,
    pub symmetrized_count: usize,
    /// One entry per distinct piece of maximal length.
    pub witnesses: Vec<PieceWitness>,
}

/// Pieces are common prefixes of two distinct symmetrized words; the same
/// word arising from two different relators counts as a piece of full length.
fn scan_pieces(p: &Presentation, mut visit: impl FnMut(usize, &Word, &Word)) {
    let words = sourced(p);
    for (i, (w1, s1)) in words.iter().enumerate() {
        for (j, (w2, s2)) in words.iter().enumerate() {
            if i == j {
                continue;
            }
            if w1 == w2 {
                if s1 != s2 {
                    visit(w1.len(), w1, w2);
                }
                continue;
            }
            visit(common_prefix(w1.letters(), w2.letters()), w1, w2);
        }
    }
}

pub fn piece_report(p: &Presentation) -> PieceReport {
    let mut best = 0;
    let mut witnesses: Vec<PieceWitness> = Vec::new();
    scan_pieces(p, |len, w1, w2| {
        if len == 0 || len < best {
            return;
        }
        if len > best {
            best = len;
            witnesses.clear();
        }
        let piece = Word::new(w1.letters()[..len].to_vec());
        if !witnesses.iter().any(|w| w.piece == piece) {
            witnesses.push(PieceWitness {
                piece,
                first: w1.clone(),
                second: w2.clone(),
            });
        }
    });
    let min_relator_length = p.relators.iter().map(Word::len).min().unwrap_or(0);
    let ratio = if min_relator_length == 0 {
        "0".to_string()
    } else {
        Ratio::new(best, min_relator_length).to_string()
    };
    PieceReport {
        max_piece_length: best,
        min_relator_length,
        ratio,
        symmetrized_count: symmetrize(p).len(),
        witnesses,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScReport {
    pub holds: bool,
    pub lambda: String,
    pub max_piece_length: usize,
    pub min_relator_length: usize,
    /// First pair found whose common piece is too long.
    pub violation: Option<PieceWitness>,
}

/// C′(λ): every piece is shorter than `λ` times each relator containing it.
/// The comparison is exact integer arithmetic.
pub fn check_metric_sc(p: &Presentation, lambda: Ratio<u64>) -> Result<ScReport> {
    if *lambda.numer() == 0 || lambda >= Ratio::from_integer(1) {
        return Err(Error::InvalidParameter(format!("lambda must lie in (0, 1), got {lambda}")));
    }
    let (num, den) = (*lambda.numer() as u128, *lambda.denom() as u128);
    let mut violation = None;
    scan_pieces(p, |len, w1, w2| {
        if violation.is_some() || len == 0 {
            return;
        }
        let short = |r: &Word| (len as u128) * den < num * r.len() as u128;
        if !(short(w1) && short(w2)) {
            violation = Some(PieceWitness {
                piece: Word::new(w1.letters()[..len].to_vec()),
                first: w1.clone(),
                second: w2.clone(),
            });
        }
    });
    let report = piece_report(p);
    Ok(ScReport {
        holds: violation.is_none(),
        lambda: lambda.to_string(),
        max_piece_length: report.max_piece_length,
        min_relator_length: report.min_relator_length,
        violation,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DehnOutcome {
    pub reduced: Word,
    /// `None` when the reduced word is nonempty and the presentation is not
    /// known to satisfy C′(1/6).
    pub trivial: Option<bool>,
    pub heuristic: bool,
}

/// Dehn's algorithm over a fixed presentation.
#[derive(Clone, Debug)]
pub struct DehnReducer {
    words: Vec<Word>,
    by_first: HashMap<Letter, Vec<usize>>,
    sound: bool,
}

impl DehnReducer {
    pub fn new(p: &Presentation) -> Self {
        let words = symmetrize(p);
        let mut by_first: HashMap<Letter, Vec<usize>> = HashMap::new();
        for (i, w) in words.iter().enumerate() {
            by_first.entry(w.letters()[0]).or_default().push(i);
        }
        let sound = check_metric_sc(p, Ratio::new(1, 6)).map(|r| r.holds).unwrap_or(false);
        DehnReducer { words, by_first, sound }
    }

    /// Whether the presentation satisfies C′(1/6), so that the reduced word
    /// is empty exactly when the input is trivial.
    pub fn is_sound(&self) -> bool {
        self.sound
    }

    /// Leftmost replaceable subword first, longest match among those; ties
    /// go to the least symmetrized word.
    fn find(&self, w: &[Letter]) -> Option<(usize, usize, usize)> {
        for i in 0..w.len() {
            let Some(cands) = self.by_first.get(&w[i]) else {
                continue;
            };
            let mut best: Option<(usize, usize)> = None;
            for &c in cands {
                let r = self.words[c].letters();
                let k = common_prefix(&w[i..], r);
                if 2 * k > r.len() && best.is_none_or(|(bk, _)| k > bk) {
                    best = Some((k, c));
                }
            }
            if let Some((k, c)) = best {
                return Some((i, k, c));
            }
        }
        None
    }

    pub fn reduce(&self, w: &Word) -> Word {
        let mut cur = w.free_reduce();
        while let Some((i, k, c)) = self.find(cur.letters()) {
            let r = self.words[c].letters();
            let complement = Word::new(r[k..].to_vec()).inverse();
            let mut next = cur.letters()[..i].to_vec();
            next.extend_from_slice(complement.letters());
            next.extend_from_slice(&cur.letters()[i + k..]);
            cur = Word::new(next).free_reduce();
        }
        cur
    }

    pub fn outcome(&self, w: &Word) -> DehnOutcome {
        let reduced = self.reduce(w);
        let trivial = if reduced.is_empty() {
            Some(true)
        } else if self.sound {
            Some(false)
        } else {
            None
        };
        DehnOutcome {
            reduced,
            trivial,
            heuristic: !self.sound,
        }
    }

    /// Whether `a` and `b` represent the same element (sound presentations).
    pub fn equal(&self, a: &Word, b: &Word) -> bool {
        self.reduce(&a.mul(&b.inverse())).is_empty()
    }
}

pub fn dehn_reduce(w: &Word, p: &Presentation) -> DehnOutcome {
    DehnReducer::new(p).outcome(w)
}
