//! Top-m geometric families.
//!
//! Nodes are uniform points in `[0, 1]^q`; a pair's weight is its inverse
//! Euclidean distance (RGG) or `d_ij (s_i + s_j)` with log-normal node
//! strengths `s_i` (RHGG). The `m` heaviest pairs become edges. Selection is
//! streamed through a bounded heap holding `min(m, N - m)` pairs.

use std::cmp::{Ordering, Reverse};
use std::collections::{BinaryHeap, HashSet};

use rand::Rng;
use rand_distr::StandardNormal;

use super::stream_rng;
use crate::error::{Error, Result};
use crate::graph::Graph;

/// `round(d · n(n-1)/2)`.
pub fn target_edge_count(n: usize, density: f64) -> usize {
    let pairs = n * n.saturating_sub(1) / 2;
    ((density * pairs as f64).round() as usize).min(pairs)
}

pub fn gen_rgg(n: usize, density: f64, dims: usize, seed: u64) -> Result<Graph> {
    gen_rgg_with_rng(n, density, dims, &mut stream_rng(seed, 0))
}

pub fn gen_rgg_with_rng<R: Rng + ?Sized>(n: usize, density: f64, dims: usize, rng: &mut R) -> Result<Graph> {
    check(n, density, dims)?;
    let points = sample_points(n, dims, rng);
    let m = target_edge_count(n, density);
    let pairs = top_m_pairs(n, m, |i, j| {
        let d = inverse_distance(&points, dims, i, j);
        (d, d)
    });
    Ok(Graph::from_sorted_pairs(n, &pairs))
}

pub fn gen_rhgg(n: usize, density: f64, dims: usize, mu: f64, sigma_h: f64, seed: u64) -> Result<Graph> {
    gen_rhgg_with_rng(n, density, dims, mu, sigma_h, &mut stream_rng(seed, 0))
}

/// Coordinates are drawn before strengths, so with `sigma_h = 0` the edge set
/// equals [`gen_rgg_with_rng`] on the same stream.
pub fn gen_rhgg_with_rng<R: Rng + ?Sized>(
    n: usize,
    density: f64,
    dims: usize,
    mu: f64,
    sigma_h: f64,
    rng: &mut R,
) -> Result<Graph> {
    check(n, density, dims)?;
    if sigma_h.is_nan() || sigma_h < 0.0 || !mu.is_finite() {
        return Err(Error::InvalidParameter(format!("invalid log-normal parameters ({mu}, {sigma_h})")));
    }
    let points = sample_points(n, dims, rng);
    let strengths: Vec<f64> = (0..n)
        .map(|_| {
            let z: f64 = rng.sample(StandardNormal);
            (mu + sigma_h * z).exp()
        })
        .collect();
    let m = target_edge_count(n, density);
    let pairs = top_m_pairs(n, m, |i, j| {
        let d = inverse_distance(&points, dims, i, j);
        (d * (strengths[i] + strengths[j]), d)
    });
    Ok(Graph::from_sorted_pairs(n, &pairs))
}

fn check(n: usize, density: f64, dims: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidParameter("n must be at least 2".into()));
    }
    if dims == 0 {
        return Err(Error::InvalidParameter("dims must be at least 1".into()));
    }
    if !(density > 0.0 && density <= 1.0) {
        return Err(Error::InvalidParameter(format!("target density {density} outside (0, 1]")));
    }
    Ok(())
}

/// Row-major `n × dims` coordinates; a point equal to an earlier one is redrawn.
fn sample_points<R: Rng + ?Sized>(n: usize, dims: usize, rng: &mut R) -> Vec<f64> {
    let mut points = Vec::with_capacity(n * dims);
    let mut seen: HashSet<Vec<u64>> = HashSet::with_capacity(n);
    while points.len() < n * dims {
        let p: Vec<f64> = (0..dims).map(|_| rng.random::<f64>()).collect();
        if seen.insert(p.iter().map(|x| x.to_bits()).collect()) {
            points.extend(p);
        }
    }
    points
}

fn inverse_distance(points: &[f64], dims: usize, i: usize, j: usize) -> f64 {
    let a = &points[i * dims..(i + 1) * dims];
    let b = &points[j * dims..(j + 1) * dims];
    let sq: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
    1.0 / sq.sqrt()
}

/// Ranking key: heavier weight first, then larger secondary key, then the
/// lexicographically smaller pair.
#[derive(Clone, Copy, Debug)]
struct Key {
    weight: f64,
    secondary: f64,
    i: u32,
    j: u32,
}

impl Ord for Key {
    fn cmp(&self, other: &Self) -> Ordering {
        self.weight
            .total_cmp(&other.weight)
            .then(self.secondary.total_cmp(&other.secondary))
            .then((other.i, other.j).cmp(&(self.i, self.j)))
    }
}

impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl PartialEq for Key {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Key {}

/// The `m` greatest pairs under `key(i, j) = (weight, secondary)`, sorted.
pub(crate) fn top_m_pairs<F>(n: usize, m: usize, key: F) -> Vec<(u32, u32)>
where
    F: Fn(usize, usize) -> (f64, f64),
{
    let total = n * n.saturating_sub(1) / 2;
    let m = m.min(total);
    let all_pairs = || (0..n).flat_map(move |i| ((i + 1)..n).map(move |j| (i, j)));
    let make = |i: usize, j: usize| {
        let (weight, secondary) = key(i, j);
        Key { weight, secondary, i: i as u32, j: j as u32 }
    };
    if m == 0 {
        return Vec::new();
    }
    if m == total {
        return all_pairs().map(|(i, j)| (i as u32, j as u32)).collect();
    }
    let mut pairs: Vec<(u32, u32)> = if m <= total / 2 {
        let mut heap: BinaryHeap<Reverse<Key>> = BinaryHeap::with_capacity(m + 1);
        for (i, j) in all_pairs() {
            let k = make(i, j);
            if heap.len() < m {
                heap.push(Reverse(k));
            } else if k > heap.peek().unwrap().0 {
                heap.pop();
                heap.push(Reverse(k));
            }
        }
        heap.into_iter().map(|Reverse(k)| (k.i, k.j)).collect()
    } else {
        // Keep the N - m lightest pairs and take everything else.
        let drop = total - m;
        let mut heap: BinaryHeap<Key> = BinaryHeap::with_capacity(drop + 1);
        for (i, j) in all_pairs() {
            let k = make(i, j);
            if heap.len() < drop {
                heap.push(k);
            } else if k < *heap.peek().unwrap() {
                heap.pop();
                heap.push(k);
            }
        }
        let mut excluded: Vec<(u32, u32)> = heap.into_iter().map(|k| (k.i, k.j)).collect();
        excluded.sort_unstable();
        let mut skip = excluded.into_iter().peekable();
        all_pairs()
            .map(|(i, j)| (i as u32, j as u32))
            .filter(|p| {
                if skip.peek() == Some(p) {
                    skip.next();
                    false
                } else {
                    true
                }
            })
            .collect()
    };
    pairs.sort_unstable();
    pairs
}
