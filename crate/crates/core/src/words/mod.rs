//! Words in free groups, finite presentations and small cancellation.
//!
//! A letter is a nonzero `i32`: generator `k` is `k + 1` and its inverse is
//! `-(k + 1)`. Words print with lowercase names for generators and uppercase
//! for inverses, so `xYxy` is `x y⁻¹ x y`.

mod cayley;
mod parse;
mod small_cancellation;

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use cayley::{cayley_ball, CayleyBall};
pub use parse::{h2_presentation, parse_word, Presentation};
pub use small_cancellation::{
    check_metric_sc, dehn_reduce, piece_report, symmetrize, DehnOutcome, DehnReducer, PieceReport, PieceWitness,
    ScReport,
};

pub type Letter = i32;

#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn new(letters: Vec<Letter>) -> Self {
        debug_assert!(letters.iter().all(|&l| l != 0));
        Word(letters)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    /// Generator `k` (zero-based) raised to `e`.
    pub fn generator_power(k: usize, e: i64) -> Self {
        let l = (k + 1) as Letter;
        let l = if e < 0 { -l } else { l };
        Word(vec![l; e.unsigned_abs() as usize])
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| -l).collect())
    }

    /// Freely reduced product `self · other`.
    pub fn mul(&self, other: &Word) -> Word {
        let mut out = self.free_reduce().0;
        for &l in &other.0 {
            push_reduced(&mut out, l);
        }
        Word(out)
    }

    /// Freely reduced `self^e`; negative exponents invert.
    pub fn pow(&self, e: i64) -> Word {
        let base = if e < 0 { self.inverse() } else { self.clone() };
        let (c, core) = base.cyclic_core();
        let mut body = Vec::with_capacity(core.len() * e.unsigned_abs() as usize);
        for _ in 0..e.unsigned_abs() {
            body.extend_from_slice(&core.0);
        }
        c.mul(&Word(body)).mul(&c.inverse())
    }

    /// `self · other · self⁻¹`.
    pub fn conjugate(&self, other: &Word) -> Word {
        self.mul(other).mul(&self.inverse())
    }

    pub fn free_reduce(&self) -> Word {
        let mut out = Vec::with_capacity(self.0.len());
        for &l in &self.0 {
            push_reduced(&mut out, l);
        }
        Word(out)
    }

    pub fn is_freely_reduced(&self) -> bool {
        self.0.windows(2).all(|p| p[0] != -p[1])
    }

    /// Splits the free reduction as `c · s · c⁻¹` with `s` cyclically reduced.
    pub fn cyclic_core(&self) -> (Word, Word) {
        let w = self.free_reduce().0;
        let mut i = 0;
        let mut j = w.len();
        while j >= i + 2 && w[i] == -w[j - 1] {
            i += 1;
            j -= 1;
        }
        (Word(w[..i].to_vec()), Word(w[i..j].to_vec()))
    }

    pub fn cyclic_reduce(&self) -> Word {
        self.cyclic_core().1
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        self.is_freely_reduced() && (self.0.len() < 2 || self.0[0] != -self.0[self.0.len() - 1])
    }

    /// Cyclic shift starting at position `k`.
    pub fn rotate(&self, k: usize) -> Word {
        let mut v = self.0.clone();
        let n = v.len();
        if n > 0 {
            v.rotate_left(k % n);
        }
        Word(v)
    }

    pub fn exponent_sum(&self, generator: usize) -> i64 {
        let g = (generator + 1) as Letter;
        self.0
            .iter()
            .map(|&l| match l {
                l if l == g => 1,
                l if l == -g => -1,
                _ => 0,
            })
            .sum()
    }

    /// Largest generator index used, plus one.
    pub fn rank(&self) -> usize {
        self.0.iter().map(|l| l.unsigned_abs() as usize).max().unwrap_or(0)
    }

    /// Prints using single-letter names `a, b, c, …`.
    pub fn to_letters(&self) -> String {
        let names: Vec<String> = (0..self.rank()).map(default_name).collect();
        self.display(&names)
    }

    pub fn display(&self, names: &[String]) -> String {
        self.0
            .iter()
            .map(|&l| {
                let name = names[l.unsigned_abs() as usize - 1].as_str();
                if l > 0 {
                    name.to_string()
                } else {
                    name.to_uppercase()
                }
            })
            .collect()
    }
}

impl From<Vec<Letter>> for Word {
    fn from(v: Vec<Letter>) -> Self {
        Word::new(v)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_letters())
    }
}

pub(crate) fn default_name(k: usize) -> String {
    char::from(b'a' + (k % 26) as u8).to_string()
}

fn push_reduced(out: &mut Vec<Letter>, l: Letter) {
    if out.last() == Some(&-l) {
        out.pop();
    } else {
        out.push(l);
    }
}

/// Smallest period `p` of `s` (KMP failure function); `s` is a power of its
/// length-`p` prefix iff `p` divides `|s|`.
fn smallest_period(s: &[Letter]) -> usize {
    let n = s.len();
    if n == 0 {
        return 0;
    }
    let mut fail = vec![0usize; n];
    let mut k = 0;
    for i in 1..n {
        while k > 0 && s[i] != s[k] {
            k = fail[k - 1];
        }
        if s[i] == s[k] {
            k += 1;
        }
        fail[i] = k;
    }
    n - fail[n - 1]
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimitiveRoot {
    pub root: Word,
    pub exponent: u32,
    /// `root = conjugator · core · conjugator⁻¹`, `core` cyclically reduced.
    pub conjugator: Word,
    pub core: Word,
}

/// The unique `r` with `w = r^k` and `k` maximal.
pub fn primitive_root(w: &Word) -> Result<PrimitiveRoot> {
    let (c, s) = w.cyclic_core();
    if s.is_empty() {
        return Err(Error::TrivialWord("primitive root of the identity"));
    }
    let p = smallest_period(&s.0);
    let (core, exponent) = if s.len() % p == 0 {
        (Word(s.0[..p].to_vec()), (s.len() / p) as u32)
    } else {
        (s, 1)
    };
    Ok(PrimitiveRoot {
        root: c.conjugate(&core),
        exponent,
        conjugator: c,
        core,
    })
}

/// Shortest `u` (ties broken lexicographically on letters) with
/// `w1 = u w2 u⁻¹`; `None` when the two are not conjugate.
pub fn conjugator_free(w1: &Word, w2: &Word) -> Option<Word> {
    let (c1, s1) = w1.cyclic_core();
    let (c2, s2) = w2.cyclic_core();
    if s1.len() != s2.len() {
        return None;
    }
    if s1.is_empty() {
        return Some(c1.mul(&c2.inverse()).free_reduce());
    }
    let n = s1.len();
    // s2 = s1[j..] s1[..j] = A⁻¹ s1 A with A = s1[..j], so s1 = A s2 A⁻¹
    (0..n)
        .filter(|&j| s1.rotate(j) == s2)
        .map(|j| {
            let a = Word(s1.0[..j].to_vec());
            c1.mul(&a).mul(&c2.inverse())
        })
        .min_by(|x, y| x.len().cmp(&y.len()).then_with(|| x.cmp(y)))
}

pub fn is_conjugate_free(w1: &Word, w2: &Word) -> bool {
    conjugator_free(w1, w2).is_some()
}

/// Witness `gⁿ = u hᵐ u⁻¹` with `n > 0`, `m ≠ 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Commensurability {
    pub commensurable: bool,
    pub n: Option<i64>,
    pub m: Option<i64>,
    pub conjugator: Option<Word>,
}

impl Commensurability {
    /// Recomputes `gⁿ (u hᵐ u⁻¹)⁻¹` and checks that it is trivial.
    pub fn verify(&self, g: &Word, h: &Word) -> bool {
        match (self.n, self.m, &self.conjugator) {
            (Some(n), Some(m), Some(u)) => g.pow(n).mul(&u.conjugate(&h.pow(m)).inverse()).is_empty(),
            _ => !self.commensurable,
        }
    }
}

pub fn are_commensurable_free(g: &Word, h: &Word) -> Result<Commensurability> {
    let rg = primitive_root(g)?;
    let rh = primitive_root(h)?;
    let (k1, k2) = (i64::from(rg.exponent), i64::from(rh.exponent));
    let d = k1.gcd(&k2);
    let witness = |sign: i64, target: &Word| {
        conjugator_free(&rg.root, target).map(|u| Commensurability {
            commensurable: true,
            n: Some(k2 / d),
            m: Some(sign * k1 / d),
            conjugator: Some(u),
        })
    };
    Ok(witness(1, &rh.root)
        .or_else(|| witness(-1, &rh.root.inverse()))
        .unwrap_or(Commensurability {
            commensurable: false,
            n: None,
            m: None,
            conjugator: None,
        }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        parse_word(s, &["a".to_string(), "b".to_string()]).unwrap()
    }

    #[test]
    fn reductions() {
        assert!(w("aA").free_reduce().is_empty());
        assert_eq!(w("baAb").free_reduce(), w("bb"));
        assert_eq!(w("BaAab").cyclic_reduce(), w("a"));
        assert_eq!(w("BabbA").cyclic_core(), (w(""), w("BabbA")));
        assert_eq!(w("abAB").cyclic_reduce(), w("abAB"));
        assert!(w("abAB").is_cyclically_reduced());
        assert!(!w("abA").is_cyclically_reduced());
    }

    #[test]
    fn products_and_powers() {
        assert_eq!(w("ab").mul(&w("Ba")), w("aa"));
        assert_eq!(w("bab").pow(2), w("babbab"));
        assert_eq!(w("aba").pow(-1), w("ABA"));
        assert_eq!(w("Bab").pow(3), w("Baaab"));
        assert_eq!(w("b").conjugate(&w("a")), w("baB"));
        assert_eq!(w("aab").exponent_sum(0), 2);
    }

    #[test]
    fn roots() {
        let r = primitive_root(&w("ababab")).unwrap();
        assert_eq!((r.root, r.exponent), (w("ab"), 3));
        let r = primitive_root(&w("a")).unwrap();
        assert_eq!((r.root, r.exponent), (w("a"), 1));
        let r = primitive_root(&w("abababab")).unwrap();
        assert_eq!((r.root, r.exponent), (w("ab"), 4));
        let r = primitive_root(&w("baaaB")).unwrap();
        assert_eq!((r.root, r.exponent), (w("baB"), 3));
        assert_eq!(primitive_root(&w("aab")).unwrap().exponent, 1);
        assert!(primitive_root(&w("aA")).is_err());
    }

    #[test]
    fn conjugacy() {
        assert!(is_conjugate_free(&w("ab"), &w("ba")));
        assert!(!is_conjugate_free(&w("a"), &w("b")));
        assert!(!is_conjugate_free(&w("a"), &w("A")));
        let u = conjugator_free(&w("aab"), &w("Baabb")).unwrap();
        assert_eq!(u.conjugate(&w("Baabb")), w("aab"));
    }

    #[test]
    fn commensurability_examples() {
        let c = are_commensurable_free(&w("ab"), &w("ababab")).unwrap();
        assert_eq!((c.n, c.m, c.conjugator.clone()), (Some(3), Some(1), Some(w(""))));
        assert!(!are_commensurable_free(&w("a"), &w("b")).unwrap().commensurable);
        // gⁿ = u hᵐ u⁻¹ with g = a, h = b a b⁻¹ forces u = b⁻¹
        let c = are_commensurable_free(&w("a"), &w("baB")).unwrap();
        assert_eq!((c.n, c.m, c.conjugator.clone()), (Some(1), Some(1), Some(w("B"))));
        assert!(c.verify(&w("a"), &w("baB")));
        let c = are_commensurable_free(&w("aa"), &w("AAA")).unwrap();
        assert_eq!((c.n, c.m), (Some(3), Some(-2)));
        assert!(c.verify(&w("aa"), &w("AAA")));
        assert!(are_commensurable_free(&w(""), &w("a")).is_err());
    }
}
