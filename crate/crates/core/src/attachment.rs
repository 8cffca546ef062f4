//! Edge-addition mechanisms and density sweeps.
//!
//! Each mechanism scores every absent pair `(i, j)`:
//!
//! | mechanism      | weight                       |
//! |----------------|------------------------------|
//! | random         | 1                            |
//! | hierarchical   | `k_i + k_j`                  |
//! | similarity     | `|g_i ∩ g_j| / |g_i ∪ g_j|`  |
//! | combined       | `|g_i ∩ g_j|`                |
//!
//! and pairs are drawn without replacement with probability proportional to
//! the weights. Overlap-based weights vanish outside two-hop pairs, so only
//! those are enumerated. Uniform and degree-sum weights use rejection
//! sampling on sparse graphs, which gives the same sequential draw
//! distribution without touching all `O(n²)` pairs.

use std::collections::HashSet;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::complexity::nhc_global;
use crate::error::{Error, Result};
use crate::generators::stream_rng;
use crate::graph::Graph;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mechanism {
    Random,
    Hierarchical,
    Similarity,
    Combined,
}

impl Mechanism {
    pub const ALL: [Mechanism; 4] =
        [Mechanism::Random, Mechanism::Hierarchical, Mechanism::Similarity, Mechanism::Combined];

    pub fn name(self) -> &'static str {
        match self {
            Mechanism::Random => "random",
            Mechanism::Hierarchical => "hierarchical",
            Mechanism::Similarity => "similarity",
            Mechanism::Combined => "combined",
        }
    }
}

impl std::fmt::Display for Mechanism {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Mechanism {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "random" => Ok(Mechanism::Random),
            "hierarchical" => Ok(Mechanism::Hierarchical),
            "similarity" => Ok(Mechanism::Similarity),
            "combined" => Ok(Mechanism::Combined),
            other => Err(Error::InvalidParameter(format!("unknown mechanism '{other}'"))),
        }
    }
}

/// Unnormalised weights over absent pairs.
///
/// For the overlap mechanisms only pairs with a shared neighbour are listed;
/// every other absent pair has weight zero. When all weights vanish the map
/// falls back to uniform weights over every absent pair.
#[derive(Clone, Debug, PartialEq)]
pub struct NonEdgeWeights {
    pub pairs: Vec<(usize, usize)>,
    pub weights: Vec<f64>,
    pub total: f64,
    pub uniform_fallback: bool,
}

impl NonEdgeWeights {
    pub fn probability(&self, idx: usize) -> f64 {
        self.weights[idx] / self.total
    }

    pub fn weight_of(&self, u: usize, v: usize) -> Option<f64> {
        let key = (u.min(v), u.max(v));
        self.pairs.binary_search(&key).ok().map(|i| self.weights[i])
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

fn all_non_edges(g: &Graph) -> Vec<(usize, usize)> {
    g.complement().edges().collect()
}

/// Absent pairs sharing at least one neighbour, with the shared count. Sorted.
fn two_hop_pairs(g: &Graph) -> Vec<(usize, usize, usize)> {
    let n = g.node_count();
    (0..n)
        .into_par_iter()
        .map_init(
            || (vec![0u32; n], Vec::new()),
            |(counts, touched), u| {
                for &w in g.neighbors(u) {
                    for &v in g.neighbors(w as usize) {
                        let v = v as usize;
                        if v > u {
                            if counts[v] == 0 {
                                touched.push(v);
                            }
                            counts[v] += 1;
                        }
                    }
                }
                touched.sort_unstable();
                let mut out = Vec::new();
                for &v in touched.iter() {
                    if !g.has_edge(u, v) {
                        out.push((u, v, counts[v] as usize));
                    }
                    counts[v] = 0;
                }
                touched.clear();
                out
            },
        )
        .flatten_iter()
        .collect()
}

pub fn edge_weights(g: &Graph, mechanism: Mechanism) -> Result<NonEdgeWeights> {
    let available = g.max_edges() - g.edge_count();
    if available == 0 {
        return Err(Error::NotEnoughNonEdges { requested: 1, available: 0 });
    }
    let (pairs, weights): (Vec<(usize, usize)>, Vec<f64>) = match mechanism {
        Mechanism::Random => {
            let pairs = all_non_edges(g);
            let weights = vec![1.0; pairs.len()];
            (pairs, weights)
        }
        Mechanism::Hierarchical => {
            let pairs = all_non_edges(g);
            let weights = pairs.iter().map(|&(u, v)| (g.degree(u) + g.degree(v)) as f64).collect();
            (pairs, weights)
        }
        Mechanism::Similarity | Mechanism::Combined => two_hop_pairs(g)
            .into_iter()
            .map(|(u, v, shared)| {
                let w = if mechanism == Mechanism::Combined {
                    shared as f64
                } else {
                    jaccard(g.degree(u), g.degree(v), shared)
                };
                ((u, v), w)
            })
            .unzip(),
    };
    let total: f64 = weights.iter().sum();
    if total > 0.0 {
        return Ok(NonEdgeWeights { pairs, weights, total, uniform_fallback: false });
    }
    log::info!("all {mechanism} weights vanish; falling back to uniform attachment");
    let pairs = all_non_edges(g);
    let weights = vec![1.0; pairs.len()];
    Ok(NonEdgeWeights { total: pairs.len() as f64, pairs, weights, uniform_fallback: true })
}

/// Jaccard index from degrees and the shared count; zero for two empty sets.
fn jaccard(ku: usize, kv: usize, shared: usize) -> f64 {
    let union = ku + kv - shared;
    if union == 0 {
        0.0
    } else {
        shared as f64 / union as f64
    }
}

/// Weighted sampling without replacement (Efraimidis–Spirakis keys).
/// Returns indices of the chosen items; zero-weight items are never chosen.
fn weighted_without_replacement<R: Rng + ?Sized>(weights: &[f64], count: usize, rng: &mut R) -> Vec<usize> {
    let mut keyed: Vec<(f64, usize)> = weights
        .iter()
        .enumerate()
        .filter(|(_, &w)| w > 0.0)
        .map(|(i, &w)| {
            let u: f64 = rng.random::<f64>().max(f64::MIN_POSITIVE);
            (u.ln() / w, i)
        })
        .collect();
    let count = count.min(keyed.len());
    if count == 0 {
        return Vec::new();
    }
    if count < keyed.len() {
        keyed.select_nth_unstable_by(count - 1, |a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
        keyed.truncate(count);
    }
    keyed.sort_unstable_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
    keyed.into_iter().map(|(_, i)| i).collect()
}

fn key(u: usize, v: usize) -> (usize, usize) {
    (u.min(v), u.max(v))
}

/// Sequential proportional draws of absent pairs by rejection. `accept`
/// returns the acceptance probability of a pair, which must be in `[0, 1]`.
fn rejection_sample<R, F>(g: &Graph, count: usize, rng: &mut R, accept: F) -> Vec<(usize, usize)>
where
    R: Rng + ?Sized,
    F: Fn(usize, usize) -> f64,
{
    let n = g.node_count();
    let mut chosen = HashSet::with_capacity(count);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let u = rng.random_range(0..n);
        let v = rng.random_range(0..n);
        if u == v || g.has_edge(u, v) {
            continue;
        }
        let pair = key(u, v);
        if chosen.contains(&pair) {
            continue;
        }
        if rng.random::<f64>() < accept(u, v) {
            chosen.insert(pair);
            out.push(pair);
        }
    }
    out
}

/// Draws `count` more absent pairs uniformly, avoiding `taken`.
fn fill_uniform<R: Rng + ?Sized>(
    g: &Graph,
    taken: &[(usize, usize)],
    count: usize,
    rng: &mut R,
) -> Vec<(usize, usize)> {
    if count == 0 {
        return Vec::new();
    }
    let taken: HashSet<(usize, usize)> = taken.iter().copied().collect();
    let pool: Vec<(usize, usize)> = all_non_edges(g).into_iter().filter(|p| !taken.contains(p)).collect();
    let weights = vec![1.0; pool.len()];
    weighted_without_replacement(&weights, count, rng).into_iter().map(|i| pool[i]).collect()
}

/// Pairs whose degree sum is positive.
fn positive_degree_pairs(g: &Graph) -> usize {
    let isolated = (0..g.node_count()).filter(|&i| g.degree(i) == 0).count();
    g.max_edges() - g.edge_count() - isolated * isolated.saturating_sub(1) / 2
}

/// Chooses `count` distinct absent pairs for one batch under `mechanism`.
pub fn sample_non_edges<R: Rng + ?Sized>(
    g: &Graph,
    mechanism: Mechanism,
    count: usize,
    rng: &mut R,
) -> Result<Vec<(usize, usize)>> {
    let available = g.max_edges() - g.edge_count();
    if count > available {
        return Err(Error::NotEnoughNonEdges { requested: count, available });
    }
    if count == 0 {
        return Ok(Vec::new());
    }
    // Rejection pays off while absent pairs dominate and the batch is small.
    let sparse = 2 * g.edge_count() < g.max_edges() && 4 * count < available;
    let mut picked = match mechanism {
        Mechanism::Random if sparse => rejection_sample(g, count, rng, |_, _| 1.0),
        Mechanism::Hierarchical if sparse && 4 * count < positive_degree_pairs(g) => {
            let mut top: Vec<usize> = g.degrees();
            top.sort_unstable_by(|a, b| b.cmp(a));
            let ceiling = (top[0] + top.get(1).copied().unwrap_or(0)) as f64;
            rejection_sample(g, count, rng, |u, v| (g.degree(u) + g.degree(v)) as f64 / ceiling)
        }
        _ => {
            let w = edge_weights(g, mechanism)?;
            weighted_without_replacement(&w.weights, count, rng).into_iter().map(|i| w.pairs[i]).collect()
        }
    };
    if picked.len() < count {
        log::info!(
            "{mechanism}: only {} absent pairs carry weight; drawing {} uniformly",
            picked.len(),
            count - picked.len()
        );
        let extra = fill_uniform(g, &picked, count - picked.len(), rng);
        picked.extend(extra);
    }
    Ok(picked)
}

/// Adds `count` absent pairs drawn under `mechanism` in a single batch.
pub fn add_edges(g: &Graph, mechanism: Mechanism, count: usize, seed: u64) -> Result<Graph> {
    let mut rng = stream_rng(seed, 0);
    let picked = sample_non_edges(g, mechanism, count, &mut rng)?;
    Ok(g.with_added_edges(&picked))
}

/// How sweep fractions map to target edge counts.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GrowthMode {
    /// `m = round(m0 (1 + f))`.
    #[default]
    Relative,
    /// `m = round((d0 + f) n (n - 1) / 2)`.
    Absolute,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepStep {
    pub fraction: f64,
    pub edge_count: usize,
    pub r_hat: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepTrace {
    pub mechanism: Mechanism,
    pub base: String,
    pub steps: Vec<SweepStep>,
}

impl SweepTrace {
    pub const CSV_HEADER: &'static str = "network,mechanism,fraction,m,r_hat";

    pub fn csv_rows(&self) -> Vec<String> {
        self.steps
            .iter()
            .map(|s| format!("{},{},{},{},{}", self.base, self.mechanism, s.fraction, s.edge_count, s.r_hat))
            .collect()
    }
}

/// `0, 0.001, ..., 0.020`.
pub fn default_fractions() -> Vec<f64> {
    (0..=20).map(|i| i as f64 / 1000.0).collect()
}

pub fn density_sweep(g: &Graph, mechanism: Mechanism, fractions: &[f64], seed: u64) -> Result<SweepTrace> {
    density_sweep_with(g, mechanism, fractions, seed, GrowthMode::Relative, "base")
}

/// Grows `g` through the target sizes in `fractions`, recomputing weights
/// once per step and recording `R̂` after each.
pub fn density_sweep_with(
    g: &Graph,
    mechanism: Mechanism,
    fractions: &[f64],
    seed: u64,
    mode: GrowthMode,
    base: &str,
) -> Result<SweepTrace> {
    if fractions.first() != Some(&0.0) {
        return Err(Error::InvalidParameter("fractions must start at 0".into()));
    }
    if fractions.windows(2).any(|w| w[1].partial_cmp(&w[0]) != Some(std::cmp::Ordering::Greater)) {
        return Err(Error::InvalidParameter("fractions must be strictly increasing".into()));
    }
    let m0 = g.edge_count() as f64;
    let pairs = g.max_edges() as f64;
    let d0 = g.density();
    let mut rng = stream_rng(seed, 0);
    let mut current = g.clone();
    let mut steps = Vec::with_capacity(fractions.len());
    for &f in fractions {
        let target = match mode {
            GrowthMode::Relative => (m0 * (1.0 + f)).round(),
            GrowthMode::Absolute => ((d0 + f) * pairs).round(),
        } as usize;
        let need = target.saturating_sub(current.edge_count());
        if need > 0 {
            let picked = sample_non_edges(&current, mechanism, need, &mut rng)?;
            current = current.with_added_edges(&picked);
        }
        steps.push(SweepStep { fraction: f, edge_count: current.edge_count(), r_hat: nhc_global(&current) });
    }
    Ok(SweepTrace { mechanism, base: base.to_string(), steps })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::lattice::{complete, cycle, path, star};

    #[test]
    fn path_weights() {
        let p3 = path(3);
        let w = edge_weights(&p3, Mechanism::Hierarchical).unwrap();
        assert_eq!(w.pairs, vec![(0, 2)]);
        assert_eq!(w.weights, vec![2.0]);
        assert_eq!(w.probability(0), 1.0);
        let w = edge_weights(&p3, Mechanism::Similarity).unwrap();
        assert_eq!(w.weight_of(0, 2), Some(1.0));
    }

    #[test]
    fn four_cycle_combined() {
        let w = edge_weights(&cycle(4), Mechanism::Combined).unwrap();
        assert_eq!(w.pairs, vec![(0, 2), (1, 3)]);
        assert_eq!(w.weights, vec![2.0, 2.0]);
        assert_eq!((w.probability(0), w.probability(1)), (0.5, 0.5));
    }

    #[test]
    fn overlap_fallback_is_uniform() {
        // Perfect matching on four nodes: no absent pair shares a neighbour.
        let g = Graph::from_edges([(0, 1), (2, 3)], None).unwrap();
        let w = edge_weights(&g, Mechanism::Similarity).unwrap();
        assert!(w.uniform_fallback);
        assert_eq!(w.len(), 4);
        assert!(w.weights.iter().all(|&x| x == 1.0));
    }

    #[test]
    fn complete_graph_has_no_candidates() {
        assert!(edge_weights(&complete(4), Mechanism::Random).is_err());
        assert!(add_edges(&path(3), Mechanism::Random, 2, 0).is_err());
    }

    #[test]
    fn fill_to_complete() {
        for mechanism in Mechanism::ALL {
            let g = cycle(7);
            let available = g.max_edges() - g.edge_count();
            let full = add_edges(&g, mechanism, available, 3).unwrap();
            assert!(full.is_complete(), "{mechanism}");
        }
    }

    #[test]
    fn hierarchical_on_star_only_joins_leaves() {
        let g = star(6);
        for seed in 0..20 {
            let h = add_edges(&g, Mechanism::Hierarchical, 3, seed).unwrap();
            assert_eq!(h.edge_count(), 9);
            assert_eq!(h.degree(0), 6);
        }
        let w = edge_weights(&g, Mechanism::Hierarchical).unwrap();
        assert!(w.weights.iter().all(|&x| x == 2.0));
    }

    #[test]
    fn sweep_basics() {
        let g = cycle(40);
        let t = density_sweep(&g, Mechanism::Random, &[0.0], 1).unwrap();
        assert_eq!(t.steps.len(), 1);
        assert_eq!(t.steps[0].r_hat, 0.0);
        assert_eq!(t.steps[0].edge_count, 40);
        let t = density_sweep(&g, Mechanism::Combined, &[0.0, 0.05, 0.1], 1).unwrap();
        let ms: Vec<usize> = t.steps.iter().map(|s| s.edge_count).collect();
        assert_eq!(ms, vec![40, 42, 44]);
        assert!(density_sweep(&g, Mechanism::Random, &[0.1, 0.2], 1).is_err());
        assert!(density_sweep(&g, Mechanism::Random, &[0.0, 0.2, 0.1], 1).is_err());
    }

    #[test]
    fn absolute_growth() {
        let g = cycle(40);
        let t = density_sweep_with(&g, Mechanism::Random, &[0.0, 0.01], 2, GrowthMode::Absolute, "c40").unwrap();
        // 0.01 of 780 pairs is 7.8 more edges.
        assert_eq!(t.steps[1].edge_count, 48);
        assert_eq!(t.csv_rows()[0], "c40,random,0,40,0");
    }

    #[test]
    fn weighted_sampling_skips_zero_weights() {
        let mut rng = stream_rng(0, 0);
        let picked = weighted_without_replacement(&[0.0, 1.0, 0.0, 2.0], 4, &mut rng);
        let mut sorted = picked.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, vec![1, 3]);
    }

    #[test]
    fn mechanism_names_round_trip() {
        for m in Mechanism::ALL {
            assert_eq!(m.name().parse::<Mechanism>().unwrap(), m);
        }
    }
}
