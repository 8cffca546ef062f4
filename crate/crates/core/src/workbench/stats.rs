//! Rank statistics used by the experiment drivers.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal, StudentsT};

use crate::error::{Error, Result};

/// Below this sample size Spearman p-values come from full enumeration.
pub const EXACT_PERMUTATION_BELOW: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Correlation {
    pub rho: f64,
    pub p_value: f64,
}

/// 1-based ranks with ties replaced by their average rank.
pub fn average_ranks(x: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..x.len()).collect();
    order.sort_by(|&a, &b| x[a].total_cmp(&x[b]));
    let mut ranks = vec![0.0; x.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && x[order[end]] == x[order[start]] {
            end += 1;
        }
        let rank = (start + end + 1) as f64 / 2.0;
        for &i in &order[start..end] {
            ranks[i] = rank;
        }
        start = end;
    }
    ranks
}

pub fn mean(x: &[f64]) -> f64 {
    x.iter().sum::<f64>() / x.len() as f64
}

/// Sample standard deviation.
pub fn std_dev(x: &[f64]) -> f64 {
    if x.len() < 2 {
        return 0.0;
    }
    let m = mean(x);
    (x.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (x.len() - 1) as f64).sqrt()
}

pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch(x.len(), y.len()));
    }
    let (mx, my) = (mean(x), mean(y));
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::ConstantInput);
    }
    Ok((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

/// Spearman's rank correlation with a two-sided p-value.
///
/// The p-value uses the t approximation on `n - 2` degrees of freedom, or an
/// exact enumeration of rank permutations for fewer than ten observations.
pub fn spearman(x: &[f64], y: &[f64]) -> Result<Correlation> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch(x.len(), y.len()));
    }
    if x.len() < 3 {
        return Err(Error::TooFewObservations { needed: 3, got: x.len() });
    }
    let (rx, ry) = (average_ranks(x), average_ranks(y));
    let rho = pearson(&rx, &ry)?;
    let p_value =
        if x.len() < EXACT_PERMUTATION_BELOW { permutation_p(&rx, &ry, rho) } else { t_p_value(rho, x.len()) };
    Ok(Correlation { rho, p_value })
}

fn t_p_value(rho: f64, n: usize) -> f64 {
    let df = (n - 2) as f64;
    let denom = 1.0 - rho * rho;
    if denom <= 0.0 {
        return 0.0;
    }
    let t = rho.abs() * (df / denom).sqrt();
    let dist = StudentsT::new(0.0, 1.0, df).expect("df is positive");
    (2.0 * (1.0 - dist.cdf(t))).clamp(0.0, 1.0)
}

/// Share of rank permutations of `ry` at least as extreme as `rho`.
fn permutation_p(rx: &[f64], ry: &[f64], rho: f64) -> f64 {
    let mut perm = ry.to_vec();
    let n = perm.len();
    let (mut extreme, mut total) = (0u64, 0u64);
    let threshold = rho.abs() - 1e-12;
    // Heap's algorithm, iterative.
    let mut c = vec![0usize; n];
    let mut visit = |p: &[f64]| {
        total += 1;
        if pearson(rx, p).is_ok_and(|r| r.abs() >= threshold) {
            extreme += 1;
        }
    };
    visit(&perm);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            visit(&perm);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    extreme as f64 / total as f64
}

/// Ordinary least squares `y = intercept + slope · x`.
pub fn ols(y: &[f64], x: &[f64]) -> Result<(f64, f64)> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch(x.len(), y.len()));
    }
    let (mx, my) = (mean(x), mean(y));
    let sxx: f64 = x.iter().map(|v| (v - mx) * (v - mx)).sum();
    if sxx == 0.0 {
        return Err(Error::DegenerateDesign);
    }
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    Ok((my - slope * mx, slope))
}

/// Regresses density on network size and correlates the residuals with `hc`.
pub fn residual_correlation(hc: &[f64], density: &[f64], n_nodes: &[f64]) -> Result<Correlation> {
    if hc.len() != density.len() {
        return Err(Error::LengthMismatch(hc.len(), density.len()));
    }
    if density.len() != n_nodes.len() {
        return Err(Error::LengthMismatch(density.len(), n_nodes.len()));
    }
    if hc.len() < 4 {
        return Err(Error::TooFewObservations { needed: 4, got: hc.len() });
    }
    let (intercept, slope) = ols(density, n_nodes)?;
    let residuals: Vec<f64> = density.iter().zip(n_nodes).map(|(d, n)| d - intercept - slope * n).collect();
    // Rounding noise left by an exact fit is not a signal.
    let scale = density.iter().fold(0.0f64, |a, d| a.max(d.abs())).max(f64::MIN_POSITIVE);
    if residuals.iter().all(|r| r.abs() <= 1e-12 * scale) {
        return Err(Error::ConstantInput);
    }
    spearman(&residuals, hc)
}

/// Wilcoxon rank-sum / Mann–Whitney test, normal approximation with tie and
/// continuity corrections.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RankSum {
    /// `U` statistic of the first sample.
    pub u: f64,
    pub z: f64,
    /// One-sided p-value for the first sample tending larger.
    pub p_greater: f64,
    pub p_two_sided: f64,
}

pub fn rank_sum(a: &[f64], b: &[f64]) -> Result<RankSum> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::TooFewObservations { needed: 1, got: 0 });
    }
    let (n1, n2) = (a.len() as f64, b.len() as f64);
    let pooled: Vec<f64> = a.iter().chain(b).copied().collect();
    let ranks = average_ranks(&pooled);
    let r1: f64 = ranks[..a.len()].iter().sum();
    let u = r1 - n1 * (n1 + 1.0) / 2.0;
    let n = n1 + n2;
    let mut sorted = pooled.clone();
    sorted.sort_by(f64::total_cmp);
    let mut tie_term = 0.0;
    let mut i = 0;
    while i < sorted.len() {
        let mut j = i + 1;
        while j < sorted.len() && sorted[j] == sorted[i] {
            j += 1;
        }
        let t = (j - i) as f64;
        tie_term += t * t * t - t;
        i = j;
    }
    let var = n1 * n2 / 12.0 * ((n + 1.0) - tie_term / (n * (n - 1.0)));
    let mu = n1 * n2 / 2.0;
    let normal = Normal::new(0.0, 1.0).expect("standard normal");
    if var <= 0.0 {
        return Ok(RankSum { u, z: 0.0, p_greater: 1.0, p_two_sided: 1.0 });
    }
    let sd = var.sqrt();
    let z = (u - mu) / sd;
    let z_greater = (u - mu - 0.5) / sd;
    let z_two = ((u - mu).abs() - 0.5).max(0.0) / sd;
    Ok(RankSum {
        u,
        z,
        p_greater: 1.0 - normal.cdf(z_greater),
        p_two_sided: (2.0 * (1.0 - normal.cdf(z_two))).min(1.0),
    })
}
