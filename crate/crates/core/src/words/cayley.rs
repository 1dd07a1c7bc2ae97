//! Balls in Cayley graphs, with left multiplication as partial maps.

use std::cell::RefCell;
use std::collections::{BTreeSet, HashMap};

use super::{DehnReducer, Letter, Presentation, Word};
use crate::actions::PartialPerm;
use crate::error::{Error, Result};
use crate::graph::WeightedGraph;

/// Elements of word length at most `radius`, joined by `x — xs` for each
/// generator `s`. Element `0` is the identity and `elements[i]` is a
/// geodesic word for element `i`, listed in breadth-first order.
#[derive(Debug)]
pub struct CayleyBall {
    pub presentation: Presentation,
    pub radius: usize,
    pub elements: Vec<Word>,
    pub graph: WeightedGraph,
    sphere_start: Vec<usize>,
    reducer: Option<DehnReducer>,
    lookup: RefCell<HashMap<Word, Option<usize>>>,
}

fn letters_in_order(rank: usize) -> Vec<Letter> {
    (1..=rank as Letter).flat_map(|l| [l, -l]).collect()
}

/// Requires a free presentation or one satisfying C′(1/6), where Dehn's
/// algorithm decides equality and the ball is exact.
pub fn cayley_ball(p: &Presentation, radius: usize) -> Result<CayleyBall> {
    let reducer = if p.is_free() {
        None
    } else {
        let d = DehnReducer::new(p);
        if !d.is_sound() {
            return Err(Error::InvalidParameter(
                "Cayley balls of non-free presentations need C'(1/6)".into(),
            ));
        }
        Some(d)
    };
    let mut ball = CayleyBall {
        presentation: p.clone(),
        radius,
        elements: vec![Word::empty()],
        graph: WeightedGraph::new(0),
        sphere_start: vec![0, 1],
        reducer,
        lookup: RefCell::new(HashMap::new()),
    };
    ball.lookup.borrow_mut().insert(Word::empty(), Some(0));
    let letters = letters_in_order(p.rank());
    let mut edges = BTreeSet::new();
    for k in 0..=radius {
        let (lo, hi) = (ball.sphere_start[k], ball.sphere_start[k + 1]);
        for x in lo..hi {
            for &s in &letters {
                let v = ball.elements[x].mul(&Word::new(vec![s]));
                let found = ball.find_near(&v, k);
                let j = match found {
                    Some(j) => j,
                    None if k < radius => {
                        ball.elements.push(v.clone());
                        let j = ball.elements.len() - 1;
                        ball.lookup.borrow_mut().insert(ball.key(&v), Some(j));
                        j
                    }
                    None => continue,
                };
                let (a, b) = if s > 0 { (x, j) } else { (j, x) };
                edges.insert((a, b, s.unsigned_abs()));
            }
        }
        ball.sphere_start.push(ball.elements.len());
    }
    let labels = ball
        .elements
        .iter()
        .map(|w| if w.is_empty() { "1".to_string() } else { p.display_word(w) })
        .collect();
    let mut graph = WeightedGraph::with_labels(labels);
    for (a, b, _) in edges {
        graph.add_edge(a, b, 1.0)?;
    }
    ball.graph = graph;
    Ok(ball)
}

impl CayleyBall {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Word length of element `i`.
    pub fn word_length(&self, i: usize) -> usize {
        self.elements[i].len()
    }

    fn key(&self, w: &Word) -> Word {
        match &self.reducer {
            None => w.free_reduce(),
            Some(d) => d.reduce(w),
        }
    }

    /// Searches spheres `k-1 ..= k+1` for an element equal to `v`.
    fn find_near(&self, v: &Word, k: usize) -> Option<usize> {
        let key = self.key(v);
        if let Some(&hit) = self.lookup.borrow().get(&key) {
            return hit;
        }
        let d = self.reducer.as_ref()?;
        let lo = self.sphere_start[k.saturating_sub(1)];
        let hi = self.elements.len();
        let hit = (lo..hi).find(|&i| d.equal(v, &self.elements[i]));
        if let Some(i) = hit {
            self.lookup.borrow_mut().insert(key, Some(i));
        }
        hit
    }

    /// Index of the element represented by `w`, if it lies in the ball.
    pub fn index_of(&self, w: &Word) -> Option<usize> {
        let key = self.key(w);
        if let Some(&hit) = self.lookup.borrow().get(&key) {
            return hit;
        }
        let hit = match &self.reducer {
            None => None,
            Some(d) => (0..self.elements.len()).find(|&i| d.equal(w, &self.elements[i])),
        };
        self.lookup.borrow_mut().insert(key, hit);
        hit
    }

    /// Left multiplication `x ↦ wx`, undefined where `wx` leaves the ball.
    pub fn element_map(&self, w: &Word) -> PartialPerm {
        PartialPerm::from_partial(
            self.elements
                .iter()
                .map(|x| self.index_of(&w.mul(x)))
                .collect(),
        )
    }

    pub fn generator_maps(&self) -> Vec<PartialPerm> {
        (0..self.presentation.rank())
            .map(|k| self.element_map(&Word::generator_power(k, 1)))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::{path_metric, Metric};

    #[test]
    fn free_group_balls() {
        let f2 = Presentation::free(&["a", "b"]).unwrap();
        assert_eq!(cayley_ball(&f2, 0).unwrap().len(), 1);
        assert_eq!(cayley_ball(&f2, 1).unwrap().len(), 5);
        let b2 = cayley_ball(&f2, 2).unwrap();
        assert_eq!(b2.len(), 17);
        assert_eq!(b2.graph.edge_count(), 16);
        assert_eq!(b2.graph.label(1), "a");
    }

    #[test]
    fn integers_give_paths() {
        let z = Presentation::free(&["a"]).unwrap();
        let b = cayley_ball(&z, 4).unwrap();
        assert_eq!(b.len(), 9);
        assert_eq!(b.graph.edge_count(), 8);
        assert_eq!(b.graph.max_degree(), 2);
        let m = path_metric(&b.graph);
        assert_eq!(m.diameter(), 8.0);
    }

    #[test]
    fn left_multiplication_is_partial() {
        let z = Presentation::free(&["a"]).unwrap();
        let b = cayley_ball(&z, 2).unwrap();
        let a = &b.generator_maps()[0];
        let top = b.index_of(&Word::generator_power(0, 2)).unwrap();
        let bottom = b.index_of(&Word::generator_power(0, -2)).unwrap();
        assert_eq!(a.apply(top), None);
        assert_eq!(a.apply(bottom), b.index_of(&Word::generator_power(0, -1)));
        assert_eq!(a.apply(0), Some(1));
    }

    #[test]
    fn finite_quotient_ball() {
        // ⟨a | a⁵⟩ has no pieces, so Dehn's algorithm is exact; the ball of
        // radius 3 is the whole 5-cycle
        let p = Presentation::parse("a^5").unwrap();
        let b = cayley_ball(&p, 3).unwrap();
        assert_eq!(b.len(), 5);
        assert_eq!(b.graph.edge_count(), 5);
        let m = path_metric(&b.graph);
        assert_eq!(m.dist(0, b.index_of(&Word::generator_power(0, 3)).unwrap()), 2.0);
        let gen = &b.generator_maps()[0];
        assert!(gen.is_total());
    }

    #[test]
    fn unsound_presentations_are_rejected() {
        let p = Presentation::parse("abAB").unwrap();
        assert!(cayley_ball(&p, 2).is_err());
    }
}
