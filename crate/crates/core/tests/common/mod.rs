#![allow(dead_code)]

use std::collections::{HashSet, VecDeque};

use hypcone::words::{symmetrize, Presentation, Word};
use hypcone::WeightedGraph;
use rand::seq::SliceRandom;
use rand::Rng;

/// Random connected graph: a random spanning tree plus `extra` further edges,
/// integer lengths in `1..=max_len`.
pub fn random_connected_graph<R: Rng>(rng: &mut R, n: usize, extra: usize, max_len: u32) -> WeightedGraph {
    let mut g = WeightedGraph::new(n);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    for i in 1..n {
        let parent = order[rng.gen_range(0..i)];
        g.add_edge(order[i], parent, f64::from(rng.gen_range(1..=max_len))).unwrap();
    }
    for _ in 0..extra {
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        if u != v {
            g.add_edge(u, v, f64::from(rng.gen_range(1..=max_len))).unwrap();
        }
    }
    g
}

pub fn random_tree<R: Rng>(rng: &mut R, n: usize, max_len: u32) -> WeightedGraph {
    random_connected_graph(rng, n, 0, max_len)
}

/// Floyd-Warshall on the edge list.
pub fn floyd_warshall(g: &WeightedGraph) -> Vec<Vec<f64>> {
    let n = g.vertex_count();
    let mut d = vec![vec![f64::INFINITY; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = 0.0;
    }
    for e in g.edges() {
        let (u, v) = (e.u, e.v);
        d[u][v] = d[u][v].min(e.length);
        d[v][u] = d[v][u].min(e.length);
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = d[i][k] + d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    d
}

/// Half the gap between the two largest of the three pair sums of a quadruple.
pub fn quadruple_delta(d: &[Vec<f64>], x: usize, y: usize, z: usize, t: usize) -> f64 {
    let mut s = [d[x][y] + d[z][t], d[x][z] + d[y][t], d[x][t] + d[y][z]];
    s.sort_by(|a, b| b.total_cmp(a));
    (s[0] - s[1]) / 2.0
}

pub fn brute_force_delta(d: &[Vec<f64>]) -> f64 {
    let n = d.len();
    let mut best: f64 = 0.0;
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                for t in 0..n {
                    best = best.max(quadruple_delta(d, x, y, z, t));
                }
            }
        }
    }
    best
}

/// Uniformly random letter sequence of length `len` over `rank` generators,
/// not necessarily reduced.
pub fn random_letters<R: Rng>(rng: &mut R, rank: i32, len: usize) -> Vec<i32> {
    (0..len)
        .map(|_| {
            let g = rng.gen_range(1..=rank);
            if rng.gen_bool(0.5) {
                g
            } else {
                -g
            }
        })
        .collect()
}

/// Uniformly random freely reduced word of length `len`.
pub fn random_reduced<R: Rng>(rng: &mut R, rank: i32, len: usize) -> Word {
    let mut v: Vec<i32> = Vec::with_capacity(len);
    while v.len() < len {
        let l = random_letters(rng, rank, 1)[0];
        if v.last() != Some(&-l) {
            v.push(l);
        }
    }
    Word::new(v)
}

/// Random cyclically reduced word of length `len`.
pub fn random_cyclically_reduced<R: Rng>(rng: &mut R, rank: i32, len: usize) -> Word {
    loop {
        let w = random_reduced(rng, rank, len);
        if len < 2 || w.letters()[0] != -w.letters()[len - 1] {
            return w;
        }
    }
}

/// All freely reduced words of length at most `max_len`.
pub fn reduced_words_up_to(rank: i32, max_len: usize) -> Vec<Word> {
    let letters: Vec<i32> = (1..=rank).flat_map(|g| [g, -g]).collect();
    let mut out = vec![Vec::new()];
    let mut layer: Vec<Vec<i32>> = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for &l in &letters {
                if w.last() != Some(&-l) {
                    let mut v = w.clone();
                    v.push(l);
                    next.push(v);
                }
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out.into_iter().map(Word::new).collect()
}

fn free_reduce(v: &[i32]) -> Vec<i32> {
    let mut out: Vec<i32> = Vec::with_capacity(v.len());
    for &l in v {
        if out.last() == Some(&-l) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

/// Outcome of the normal-closure search.
#[derive(Debug, PartialEq, Eq)]
pub enum Closure {
    Trivial,
    NotFound,
    Aborted,
}

/// Breadth-first search over freely reduced words reachable from `w` by
/// replacing any subword `u` of a cyclic conjugate `uv` of a relator or its
/// inverse by `v⁻¹`, never exceeding `max_len` letters. Every move stays in
/// the same coset of the normal closure; reaching the empty word proves
/// triviality. Exhausting the bounded state space returns `NotFound`,
/// exceeding `max_states` returns `Aborted`.
pub fn normal_closure_search(w: &Word, p: &Presentation, max_len: usize, max_states: usize) -> Closure {
    let rels: Vec<Vec<i32>> = symmetrize(p).iter().map(|r| r.letters().to_vec()).collect();
    let start = free_reduce(w.letters());
    let mut seen: HashSet<Vec<i32>> = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    while let Some(cur) = queue.pop_front() {
        if cur.is_empty() {
            return Closure::Trivial;
        }
        for r in &rels {
            for i in 0..cur.len() {
                let mut k = 0;
                while i + k < cur.len() && k < r.len() && cur[i + k] == r[k] {
                    k += 1;
                    let rest: Vec<i32> = r[k..].iter().rev().map(|&l| -l).collect();
                    let mut next = cur[..i].to_vec();
                    next.extend(&rest);
                    next.extend(&cur[i + k..]);
                    let next = free_reduce(&next);
                    if next.len() <= max_len && seen.insert(next.clone()) {
                        if seen.len() > max_states {
                            return Closure::Aborted;
                        }
                        queue.push_back(next);
                    }
                }
            }
        }
    }
    Closure::NotFound
}
