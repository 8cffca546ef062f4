//! Hierarchical complexity measures.
//!
//! For every degree class `k` held by at least two nodes, the neighbourhood
//! degree sequences of its `ℓ` members form an `ℓ × k` matrix. The original
//! measure averages the column variances, `R_k = Σ σ_j² / k`; the normalised
//! measure sums the column standard deviations and divides by `(1 - d) m`,
//! `R̂_k = Σ σ_j / ((1 - d) m)`. Global values are plain means over the
//! supported degree classes.
//!
//! Column moments are accumulated as exact integer sums, so a column of
//! identical entries has a variance of exactly zero and results do not depend
//! on evaluation order or worker count.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, NdsMatrix};

/// Divisor used for column variances.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SdConvention {
    /// Divide by `ℓ`.
    #[default]
    Population,
    /// Divide by `ℓ - 1`.
    Sample,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexityConfig {
    pub sd: SdConvention,
}

/// Per-degree entry of a [`ComplexityReport`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DegreeTerm {
    /// `R_k`, the mean column variance.
    pub r: f64,
    /// `R̂_k`, the normalised measure.
    pub r_hat: f64,
    /// Number of nodes of this degree.
    pub rows: usize,
    /// Sum of the column standard deviations.
    pub sigma_sum: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexityReport {
    pub node_count: usize,
    pub edge_count: usize,
    pub density: f64,
    pub components: usize,
    /// `R`, un-normalised global complexity.
    pub r: f64,
    /// `R̂`, normalised global complexity.
    pub r_hat: f64,
    /// `Σ σ_j / (√k (1 - d) m)` averaged over degree classes.
    pub r_hat_sqrtk: f64,
    /// `Σ σ_j / (√k (1 - d) √m)` averaged over degree classes.
    pub r_hat_sqrtk_sqrtm: f64,
    pub d2_size: usize,
    pub per_degree: BTreeMap<usize, DegreeTerm>,
}

/// Exact column moments of one NDS matrix.
struct ColumnMoments {
    rows: u128,
    sum: Vec<u64>,
    sum_sq: Vec<u128>,
}

impl ColumnMoments {
    fn new(k: usize) -> Self {
        ColumnMoments { rows: 0, sum: vec![0; k], sum_sq: vec![0; k] }
    }

    fn push(&mut self, row: &[usize]) {
        self.rows += 1;
        for (j, &x) in row.iter().enumerate() {
            self.sum[j] += x as u64;
            self.sum_sq[j] += (x as u128) * (x as u128);
        }
    }

    fn variances(&self, sd: SdConvention) -> Vec<f64> {
        let l = self.rows;
        let divisor = match sd {
            SdConvention::Population => (l * l) as f64,
            SdConvention::Sample => (l * (l - 1)) as f64,
        };
        self.sum
            .iter()
            .zip(&self.sum_sq)
            .map(|(&s1, &s2)| {
                // ℓ Σx² - (Σx)² is a non-negative integer.
                let num = l * s2 - (s1 as u128) * (s1 as u128);
                num as f64 / divisor
            })
            .collect()
    }
}

/// Column standard deviations of an NDS matrix, population convention.
pub fn column_sigmas(s: &NdsMatrix) -> Result<Vec<f64>> {
    column_sigmas_with(s, SdConvention::Population)
}

pub fn column_sigmas_with(s: &NdsMatrix, sd: SdConvention) -> Result<Vec<f64>> {
    if s.row_count() < 2 {
        return Err(Error::TooFewRows { degree: s.degree, rows: s.row_count() });
    }
    let mut moments = ColumnMoments::new(s.degree);
    for row in &s.rows {
        moments.push(row);
    }
    Ok(moments.variances(sd).into_iter().map(f64::sqrt).collect())
}

/// Variance and standard-deviation sums for one degree class.
#[derive(Clone, Copy, Debug)]
struct ClassSums {
    variance_sum: f64,
    sigma_sum: f64,
    rows: usize,
}

fn class_sums(g: &Graph, k: usize, nodes: &[usize], sd: SdConvention) -> ClassSums {
    let mut moments = ColumnMoments::new(k);
    let mut buf = Vec::with_capacity(k);
    for &i in nodes {
        g.nds_into(i, &mut buf);
        moments.push(&buf);
    }
    let variances = moments.variances(sd);
    ClassSums {
        variance_sum: variances.iter().sum(),
        sigma_sum: variances.iter().map(|v| v.sqrt()).sum(),
        rows: nodes.len(),
    }
}

/// Sums for every class in the degree support, ascending `k`.
fn all_class_sums(g: &Graph, sd: SdConvention) -> Vec<(usize, ClassSums)> {
    let buckets = g.nodes_by_degree();
    let support: Vec<usize> = g.degree_support_d2();
    support.par_iter().map(|&k| (k, class_sums(g, k, &buckets[k], sd))).collect()
}

fn single_class(g: &Graph, k: usize, sd: SdConvention) -> Result<ClassSums> {
    let nodes: Vec<usize> = (0..g.node_count()).filter(|&i| k >= 1 && g.degree(i) == k).collect();
    if nodes.len() < 2 {
        return Err(Error::DegreeNotInSupport(k));
    }
    Ok(class_sums(g, k, &nodes, sd))
}

/// `(1 - d) m`, or `None` when it vanishes (complete or edgeless graph).
fn normaliser(g: &Graph) -> Option<f64> {
    if g.edge_count() == 0 || g.is_complete() {
        return None;
    }
    Some((1.0 - g.density()) * g.edge_count() as f64)
}

fn mean(values: impl ExactSizeIterator<Item = f64>) -> f64 {
    let len = values.len();
    if len == 0 {
        return 0.0;
    }
    values.sum::<f64>() / len as f64
}

/// `R_k = Σ σ_j² / k` for a degree held by at least two nodes.
pub fn hc_k(g: &Graph, k: usize) -> Result<f64> {
    let c = single_class(g, k, SdConvention::Population)?;
    Ok(c.variance_sum / k as f64)
}

/// `R(G)`, the mean of `R_k` over the degree support; zero when it is empty.
pub fn hc_global(g: &Graph) -> f64 {
    let sums = all_class_sums(g, SdConvention::Population);
    mean(sums.iter().map(|(k, c)| c.variance_sum / *k as f64))
}

/// `R̂_k = Σ σ_j / ((1 - d) m)`.
pub fn nhc_k(g: &Graph, k: usize) -> Result<f64> {
    nhc_k_with(g, k, ComplexityConfig::default())
}

pub fn nhc_k_with(g: &Graph, k: usize, config: ComplexityConfig) -> Result<f64> {
    let c = single_class(g, k, config.sd)?;
    let norm = normaliser(g).ok_or(Error::NormalisationSingular)?;
    Ok(c.sigma_sum / norm)
}

/// `R̂(G)`, the mean of `R̂_k` over the degree support.
///
/// Zero when the support is empty or the graph is complete.
pub fn nhc_global(g: &Graph) -> f64 {
    nhc_global_with(g, ComplexityConfig::default())
}

pub fn nhc_global_with(g: &Graph, config: ComplexityConfig) -> f64 {
    let Some(norm) = normaliser(g) else { return 0.0 };
    let sums = all_class_sums(g, config.sd);
    mean(sums.iter().map(|(_, c)| c.sigma_sum / norm))
}

/// The two `√k` normalisations used for comparison against [`nhc_global`].
///
/// With `sqrt_m = false` each class contributes `Σ σ_j / (√k (1 - d) m)`;
/// with `sqrt_m = true` the `m` in the denominator becomes `√m`.
pub fn nhc_alt_sqrtk(g: &Graph, sqrt_m: bool) -> f64 {
    if normaliser(g).is_none() {
        return 0.0;
    }
    let sums = all_class_sums(g, SdConvention::Population);
    let denom = alt_denominator(g, sqrt_m);
    mean(sums.iter().map(|(k, c)| c.sigma_sum / ((*k as f64).sqrt() * denom)))
}

fn alt_denominator(g: &Graph, sqrt_m: bool) -> f64 {
    let m = g.edge_count() as f64;
    (1.0 - g.density()) * if sqrt_m { m.sqrt() } else { m }
}

pub fn complexity_report(g: &Graph) -> ComplexityReport {
    complexity_report_with(g, ComplexityConfig::default())
}

pub fn complexity_report_with(g: &Graph, config: ComplexityConfig) -> ComplexityReport {
    let sums = all_class_sums(g, config.sd);
    let norm = normaliser(g);
    let mut per_degree = BTreeMap::new();
    for (k, c) in &sums {
        per_degree.insert(
            *k,
            DegreeTerm {
                r: c.variance_sum / *k as f64,
                r_hat: norm.map_or(0.0, |z| c.sigma_sum / z),
                rows: c.rows,
                sigma_sum: c.sigma_sum,
            },
        );
    }
    let (alt, alt_m) = match norm {
        Some(_) => {
            let (d1, d2) = (alt_denominator(g, false), alt_denominator(g, true));
            (
                mean(sums.iter().map(|(k, c)| c.sigma_sum / ((*k as f64).sqrt() * d1))),
                mean(sums.iter().map(|(k, c)| c.sigma_sum / ((*k as f64).sqrt() * d2))),
            )
        }
        None => (0.0, 0.0),
    };
    let r_hat = mean(per_degree.values().map(|t| t.r_hat));
    if r_hat > 1.0 {
        log::warn!("normalised hierarchical complexity {r_hat} exceeds 1");
    }
    ComplexityReport {
        node_count: g.node_count(),
        edge_count: g.edge_count(),
        density: g.density(),
        components: g.component_count(),
        r: mean(per_degree.values().map(|t| t.r)),
        r_hat,
        r_hat_sqrtk: alt,
        r_hat_sqrtk_sqrtm: alt_m,
        d2_size: sums.len(),
        per_degree,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_graph;

    fn six_node() -> Graph {
        build_graph(&[(0, 1), (1, 2), (2, 3), (1, 3), (3, 4), (4, 5)], None).unwrap()
    }

    fn cycle(n: usize) -> Graph {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        build_graph(&edges, None).unwrap()
    }

    fn matrix(k: usize, rows: &[&[usize]]) -> NdsMatrix {
        NdsMatrix { degree: k, rows: rows.iter().map(|r| r.to_vec()).collect() }
    }

    const TOL: f64 = 1e-12;

    #[test]
    fn column_sigma_examples() {
        assert_eq!(column_sigmas(&matrix(1, &[&[3], &[3], &[3]])).unwrap(), vec![0.0]);
        assert_eq!(column_sigmas(&matrix(2, &[&[1, 2], &[1, 2]])).unwrap(), vec![0.0, 0.0]);
        assert_eq!(column_sigmas(&matrix(2, &[&[3, 3], &[1, 3]])).unwrap(), vec![1.0, 0.0]);
        assert_eq!(column_sigmas(&matrix(2, &[&[3, 3]])), Err(Error::TooFewRows { degree: 2, rows: 1 }));
    }

    #[test]
    fn sample_convention_rescales() {
        let s = matrix(2, &[&[3, 3], &[1, 3]]);
        let sample = column_sigmas_with(&s, SdConvention::Sample).unwrap();
        assert!((sample[0] - 2f64.sqrt()).abs() < TOL);
    }

    #[test]
    fn hc_k_examples() {
        let g = six_node();
        assert!((hc_k(&g, 2).unwrap() - 0.5).abs() < TOL);
        assert!((hc_k(&g, 1).unwrap() - 0.25).abs() < TOL);
        assert_eq!(hc_k(&cycle(7), 2).unwrap(), 0.0);
        assert_eq!(hc_k(&g, 4), Err(Error::DegreeNotInSupport(4)));
    }

    #[test]
    fn hc_global_examples() {
        assert_eq!(hc_global(&cycle(5)), 0.0);
        assert!((hc_global(&six_node()) - (0.25 + 0.5 + 1.0 / 12.0) / 3.0).abs() < TOL);
        let p4 = build_graph(&[(0, 1), (1, 2), (2, 3)], None).unwrap();
        assert_eq!(hc_global(&p4), 0.0);
    }

    #[test]
    fn nhc_k_examples() {
        let g = six_node();
        assert!((nhc_k(&g, 2).unwrap() - 1.0 / 3.6).abs() < TOL);
        assert!((nhc_k(&g, 3).unwrap() - 0.5 / 3.6).abs() < TOL);
        assert_eq!(nhc_k(&cycle(6), 2).unwrap(), 0.0);
        let k4 = build_graph(&[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)], None).unwrap();
        assert_eq!(nhc_k(&k4, 3), Err(Error::NormalisationSingular));
    }

    #[test]
    fn nhc_global_examples() {
        let expected = (0.5 / 3.6 + 1.0 / 3.6 + 0.5 / 3.6) / 3.0;
        assert!((nhc_global(&six_node()) - expected).abs() < TOL);
        assert!((expected - 0.185185).abs() < 1e-6);
        assert_eq!(nhc_global(&cycle(9)), 0.0);
        let k5: Vec<_> = (0..5).flat_map(|u| ((u + 1)..5).map(move |v| (u, v))).collect();
        assert_eq!(nhc_global(&build_graph(&k5, None).unwrap()), 0.0);
        assert_eq!(nhc_global(&Graph::empty(4)), 0.0);
    }

    #[test]
    fn alt_normalisations() {
        let g = six_node();
        let numerator = (0.5 / 1.0 + 1.0 / 2f64.sqrt() + 0.5 / 3f64.sqrt()) / 3.0;
        assert!((nhc_alt_sqrtk(&g, false) - numerator / 3.6).abs() < TOL);
        assert!((nhc_alt_sqrtk(&g, true) - numerator / (0.6 * 6f64.sqrt())).abs() < TOL);
        assert_eq!(nhc_alt_sqrtk(&cycle(8), false), 0.0);
        assert_eq!(nhc_alt_sqrtk(&cycle(8), true), 0.0);
    }

    #[test]
    fn report_star_and_six_node() {
        let star = build_graph(&[(0, 1), (0, 2), (0, 3)], None).unwrap();
        let r = complexity_report(&star);
        assert_eq!((r.r, r.r_hat, r.d2_size), (0.0, 0.0, 1));
        assert_eq!(r.per_degree[&1], DegreeTerm { r: 0.0, r_hat: 0.0, rows: 3, sigma_sum: 0.0 });

        let r = complexity_report(&six_node());
        assert!((r.r - hc_global(&six_node())).abs() < TOL);
        assert!((r.r_hat - nhc_global(&six_node())).abs() < TOL);
        assert!((r.r_hat_sqrtk - nhc_alt_sqrtk(&six_node(), false)).abs() < TOL);
        assert_eq!(r.d2_size, 3);
        assert_eq!(r.per_degree[&3].rows, 2);

        let r = complexity_report(&Graph::empty(3));
        assert_eq!((r.r, r.r_hat, r.d2_size), (0.0, 0.0, 0));
    }
}
