//! Configuration model with degree-preserving repair.
//!
//! Stubs are shuffled and paired; self-loops and multi-edges are then removed
//! by double-edge swaps that never create a new defect, so the output is a
//! simple graph with exactly the requested degrees. Sequences denser than
//! one half are realised through their complement, where pairing produces far
//! fewer collisions. If repair stalls, which happens on small sequences with
//! few realisations, a Havel–Hakimi graph is shuffled by random swaps instead.

use std::collections::{HashMap, HashSet};

use rand::seq::SliceRandom;
use rand::Rng;

use super::stream_rng;
use crate::error::{Error, Result};
use crate::graph::Graph;

const SWAP_CAP_PER_EDGE: usize = 100;
const PAIRING_RETRIES: usize = 4;
const SHUFFLE_SWAPS_PER_EDGE: usize = 10;

pub fn gen_config(degrees: &[usize], seed: u64) -> Result<Graph> {
    gen_config_with_rng(degrees, &mut stream_rng(seed, 0))
}

pub fn gen_config_with_rng<R: Rng + ?Sized>(degrees: &[usize], rng: &mut R) -> Result<Graph> {
    let n = degrees.len();
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    if !is_graphical(degrees) {
        return Err(Error::NonGraphical("sequence fails the Erdős–Gallai conditions".into()));
    }
    let stubs: usize = degrees.iter().sum();
    let pairs_total = n * (n - 1) / 2;
    if stubs / 2 > pairs_total / 2 {
        let complement: Vec<usize> = degrees.iter().map(|&k| n - 1 - k).collect();
        return Ok(realise(&complement, rng).complement());
    }
    Ok(realise(degrees, rng))
}

fn realise<R: Rng + ?Sized>(degrees: &[usize], rng: &mut R) -> Graph {
    for _ in 0..PAIRING_RETRIES {
        if let Some(edges) = pair_and_repair(degrees, rng) {
            return from_edges(degrees.len(), edges);
        }
    }
    log::debug!("swap repair stalled, falling back to a shuffled Havel-Hakimi graph");
    let mut edges = havel_hakimi(degrees);
    shuffle_by_swaps(&mut edges, rng);
    from_edges(degrees.len(), edges)
}

fn from_edges(n: usize, mut edges: Vec<(u32, u32)>) -> Graph {
    edges.sort_unstable();
    debug_assert!(edges.windows(2).all(|w| w[0] != w[1]));
    Graph::from_sorted_pairs(n, &edges)
}

fn key(u: u32, v: u32) -> (u32, u32) {
    (u.min(v), u.max(v))
}

fn pair_and_repair<R: Rng + ?Sized>(degrees: &[usize], rng: &mut R) -> Option<Vec<(u32, u32)>> {
    let mut stubs: Vec<u32> = degrees.iter().enumerate().flat_map(|(i, &k)| std::iter::repeat_n(i as u32, k)).collect();
    stubs.shuffle(rng);
    let mut edges: Vec<(u32, u32)> = stubs.chunks_exact(2).map(|c| key(c[0], c[1])).collect();
    let m = edges.len();
    let mut count: HashMap<(u32, u32), u32> = HashMap::with_capacity(m);
    for &e in &edges {
        *count.entry(e).or_insert(0) += 1;
    }
    let is_bad = |e: (u32, u32), count: &HashMap<(u32, u32), u32>| e.0 == e.1 || count[&e] > 1;
    let mut bad: Vec<usize> = (0..m).filter(|&i| is_bad(edges[i], &count)).collect();

    let cap = SWAP_CAP_PER_EDGE * m.max(10);
    let mut attempts = 0usize;
    while let Some(&idx) = bad.last() {
        if !is_bad(edges[idx], &count) {
            bad.pop();
            continue;
        }
        if attempts >= cap {
            return None;
        }
        attempts += 1;
        let other = rng.random_range(0..m);
        if other == idx {
            continue;
        }
        let (u, v) = edges[idx];
        let (mut x, mut y) = edges[other];
        if rng.random::<bool>() {
            std::mem::swap(&mut x, &mut y);
        }
        if u == x || v == y {
            continue;
        }
        let (a, b) = (key(u, x), key(v, y));
        if a == b || count.get(&a).is_some_and(|&c| c > 0) || count.get(&b).is_some_and(|&c| c > 0) {
            continue;
        }
        for old in [edges[idx], edges[other]] {
            *count.get_mut(&old).unwrap() -= 1;
        }
        *count.entry(a).or_insert(0) += 1;
        *count.entry(b).or_insert(0) += 1;
        edges[idx] = a;
        edges[other] = b;
    }
    Some(edges)
}

/// Deterministic realisation of a graphical sequence: repeatedly connect the
/// node with the largest residual degree to the next largest ones.
fn havel_hakimi(degrees: &[usize]) -> Vec<(u32, u32)> {
    let mut residual: Vec<(usize, u32)> = degrees.iter().enumerate().map(|(i, &k)| (k, i as u32)).collect();
    let mut edges = Vec::with_capacity(degrees.iter().sum::<usize>() / 2);
    loop {
        residual.sort_unstable_by(|a, b| b.cmp(a));
        let (k, u) = residual[0];
        if k == 0 {
            return edges;
        }
        residual[0].0 = 0;
        for entry in &mut residual[1..=k] {
            entry.0 -= 1;
            edges.push(key(u, entry.1));
        }
    }
}

/// Random double-edge swaps that keep the graph simple.
fn shuffle_by_swaps<R: Rng + ?Sized>(edges: &mut [(u32, u32)], rng: &mut R) {
    let m = edges.len();
    if m < 2 {
        return;
    }
    let mut present: HashSet<(u32, u32)> = edges.iter().copied().collect();
    for _ in 0..SHUFFLE_SWAPS_PER_EDGE * m {
        let (i, j) = (rng.random_range(0..m), rng.random_range(0..m));
        let (u, v) = edges[i];
        let (mut x, mut y) = edges[j];
        if rng.random::<bool>() {
            std::mem::swap(&mut x, &mut y);
        }
        if i == j || u == x || v == y || u == y || v == x {
            continue;
        }
        let (a, b) = (key(u, x), key(v, y));
        if present.contains(&a) || present.contains(&b) {
            continue;
        }
        present.remove(&edges[i]);
        present.remove(&edges[j]);
        present.insert(a);
        present.insert(b);
        edges[i] = a;
        edges[j] = b;
    }
}

/// Erdős–Gallai test: even sum and, for every `r`, the `r` largest degrees
/// fit inside a clique plus edges to the rest.
pub fn is_graphical(degrees: &[usize]) -> bool {
    let n = degrees.len();
    if degrees.iter().sum::<usize>() % 2 == 1 || degrees.iter().any(|&k| k >= n.max(1)) {
        return false;
    }
    let mut d: Vec<usize> = degrees.to_vec();
    d.sort_unstable_by(|a, b| b.cmp(a));
    let mut suffix = vec![0usize; n + 1];
    for i in (0..n).rev() {
        suffix[i] = suffix[i + 1] + d[i];
    }
    let mut lhs = 0usize;
    for r in 1..=n {
        lhs += d[r - 1];
        // First index holding a degree below r; d is descending.
        let p = d.partition_point(|&x| x >= r).max(r);
        let rhs = r * (r - 1) + (p - r) * r + suffix[p];
        if lhs > rhs {
            return false;
        }
    }
    true
}
