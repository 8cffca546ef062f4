//! Order-statistic approximation of the expected normalised complexity.
//!
//! If the `k` neighbour degrees of a node behave like `k` independent draws
//! from the degree law `X`, column `i` of the NDS matrix is the `i`-th order
//! statistic of that sample. Its standard deviation is approximately
//!
//! ```text
//! σ_i ≈ √(i (k - i + 1) / ((k + 1)² (k + 2))) / f(F⁻¹(i / (k + 1)))
//! ```
//!
//! and summing over `i` then dividing by `(1 - p) m = p (1 - p) n (n - 1) / 2`
//! gives the per-degree estimate. The global estimate averages over the
//! degree range `[a, b]` spanned by the expected extreme order statistics of
//! the `n` node degrees.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Terms whose mass or density falls below this are dropped from the sums.
pub const VANISHING_PMF: f64 = 1e-300;

/// A univariate law exposing the three functions the approximation needs.
///
/// `pmf` is the probability mass for discrete laws and the density for
/// continuous ones.
pub trait DegreeDistribution {
    fn pmf(&self, x: f64) -> f64;
    fn cdf(&self, x: f64) -> f64;
    /// `F⁻¹(u) = min { x : F(x) >= u }`.
    fn quantile(&self, u: f64) -> f64;
    fn support(&self) -> (f64, f64);
}

/// `B(trials, p)` with mass and cumulative tables computed once.
#[derive(Clone, Debug)]
pub struct Binomial {
    trials: u64,
    p: f64,
    pmf: Vec<f64>,
    cdf: Vec<f64>,
}

impl Binomial {
    pub fn new(trials: u64, p: f64) -> Result<Self> {
        if trials == 0 {
            return Err(Error::InvalidParameter("binomial needs at least one trial".into()));
        }
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidParameter(format!("p = {p} outside [0, 1]")));
        }
        let n = trials as usize;
        let mut pmf = vec![0.0; n + 1];
        if p == 0.0 {
            pmf[0] = 1.0;
        } else if p == 1.0 {
            pmf[n] = 1.0;
        } else {
            // ln P(k+1) = ln P(k) + ln((n-k)/(k+1)) + ln(p/(1-p)), from ln P(0) = n ln(1-p).
            let log_odds = p.ln() - (-p).ln_1p();
            let mut log_mass = n as f64 * (-p).ln_1p();
            pmf[0] = log_mass.exp();
            for k in 0..n {
                log_mass += ((n - k) as f64).ln() - ((k + 1) as f64).ln() + log_odds;
                pmf[k + 1] = log_mass.exp();
            }
        }
        let mut cdf = Vec::with_capacity(n + 1);
        let (mut sum, mut carry) = (0.0f64, 0.0f64);
        for &x in &pmf {
            // Neumaier summation.
            let t = sum + x;
            carry += if sum.abs() >= x.abs() { (sum - t) + x } else { (x - t) + sum };
            sum = t;
            cdf.push((sum + carry).min(1.0));
        }
        Ok(Binomial { trials, p, pmf, cdf })
    }

    pub fn trials(&self) -> u64 {
        self.trials
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn mass(&self, k: u64) -> f64 {
        self.pmf.get(k as usize).copied().unwrap_or(0.0)
    }

    pub fn mean(&self) -> f64 {
        self.trials as f64 * self.p
    }

    pub fn variance(&self) -> f64 {
        self.trials as f64 * self.p * (1.0 - self.p)
    }
}

impl DegreeDistribution for Binomial {
    fn pmf(&self, x: f64) -> f64 {
        if x < 0.0 || x.fract() != 0.0 {
            return 0.0;
        }
        self.mass(x as u64)
    }

    fn cdf(&self, x: f64) -> f64 {
        if x < 0.0 {
            return 0.0;
        }
        let k = (x.floor() as usize).min(self.cdf.len() - 1);
        self.cdf[k]
    }

    fn quantile(&self, u: f64) -> f64 {
        let k = self.cdf.partition_point(|&c| c < u);
        k.min(self.cdf.len() - 1) as f64
    }

    fn support(&self) -> (f64, f64) {
        (0.0, self.trials as f64)
    }
}

/// Continuous `U[0, 1]`, the textbook reference case.
#[derive(Clone, Copy, Debug, Default)]
pub struct UnitUniform;

impl DegreeDistribution for UnitUniform {
    fn pmf(&self, x: f64) -> f64 {
        if (0.0..=1.0).contains(&x) {
            1.0
        } else {
            0.0
        }
    }

    fn cdf(&self, x: f64) -> f64 {
        x.clamp(0.0, 1.0)
    }

    fn quantile(&self, u: f64) -> f64 {
        u.clamp(0.0, 1.0)
    }

    fn support(&self) -> (f64, f64) {
        (0.0, 1.0)
    }
}

pub fn binom(trials: u64, p: f64) -> Result<Binomial> {
    Binomial::new(trials, p)
}

fn spread(i: usize, k: usize) -> f64 {
    ((i * (k - i + 1)) as f64).sqrt()
}

/// Approximate standard deviation of the `i`-th smallest of `k` draws.
pub fn order_stat_sigma(i: usize, k: usize, dist: &dyn DegreeDistribution) -> Result<f64> {
    if i == 0 || i > k {
        return Err(Error::InvalidParameter(format!("order statistic {i} of {k}")));
    }
    let u = i as f64 / (k + 1) as f64;
    let f = dist.pmf(dist.quantile(u));
    if f < VANISHING_PMF {
        return Err(Error::PmfVanishes(u));
    }
    let kf = k as f64;
    Ok(spread(i, k) / ((kf + 1.0) * (kf + 2.0).sqrt()) / f)
}

/// `Σ_i √(i (k - i + 1)) / f(F⁻¹(i / (k + 1)))` and the number of dropped terms.
fn order_stat_sum(k: usize, dist: &dyn DegreeDistribution) -> (f64, usize) {
    let mut sum = 0.0;
    let mut dropped = 0;
    for i in 1..=k {
        let f = dist.pmf(dist.quantile(i as f64 / (k + 1) as f64));
        if f < VANISHING_PMF {
            dropped += 1;
        } else {
            sum += spread(i, k) / f;
        }
    }
    (sum, dropped)
}

fn approx_k_with_drops(n: usize, p: f64, k: usize, dist: &dyn DegreeDistribution) -> Result<(f64, usize)> {
    if k == 0 {
        return Err(Error::InvalidParameter("degree must be at least 1".into()));
    }
    let (sum, dropped) = order_stat_sum(k, dist);
    if dropped == k {
        return Err(Error::PmfVanishes(0.5));
    }
    let (nf, kf) = (n as f64, k as f64);
    let denom = p * (1.0 - p) * (nf - 1.0) * nf * (kf + 1.0) * (kf + 2.0).sqrt();
    Ok((2.0 * sum / denom, dropped))
}

/// Approximate `R̂_k` for a graph on `n` nodes of density `p` whose degrees follow `dist`.
pub fn nhc_k_approx(n: usize, p: f64, k: usize, dist: &dyn DegreeDistribution) -> Result<f64> {
    approx_k_with_drops(n, p, k, dist).map(|(v, _)| v)
}

/// Which quantiles define the degree range `[a, b]`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RangeBounds {
    /// `F⁻¹(1/n)` and `F⁻¹((n-1)/n)`, the form used for G(n, p).
    #[default]
    ErForm,
    /// `F⁻¹(1/(n+1))` and `F⁻¹(n/(n+1))`, the general form.
    GeneralForm,
}

/// Divisor of the sum over `k = a..=b`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RangeDivisor {
    /// `b - a`, as the closed form is written.
    #[default]
    Span,
    /// `b - a + 1`, the number of summed terms.
    TermCount,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoryOptions {
    pub bounds: RangeBounds,
    pub divisor: RangeDivisor,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TheoryApprox {
    pub n: usize,
    pub p: f64,
    pub a: i64,
    pub b: i64,
    pub per_degree: BTreeMap<usize, f64>,
    pub global: f64,
    /// Order-statistic terms skipped because the mass underflowed.
    pub dropped_terms: usize,
    pub options: TheoryOptions,
}

impl TheoryApprox {
    /// `k,approx` rows with a header.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,approx\n");
        for (k, v) in &self.per_degree {
            out.push_str(&format!("{k},{v}\n"));
        }
        out
    }
}

/// Degree range `[a, b]` for `n` nodes with degree law `dist`, `a` clamped to 1.
pub fn degree_range(n: usize, dist: &dyn DegreeDistribution, bounds: RangeBounds) -> (i64, i64) {
    let nf = n as f64;
    let (lo, hi) = match bounds {
        RangeBounds::ErForm => (1.0 / nf, (nf - 1.0) / nf),
        RangeBounds::GeneralForm => (1.0 / (nf + 1.0), nf / (nf + 1.0)),
    };
    let a = (dist.quantile(lo).floor() as i64).max(1);
    let b = dist.quantile(hi).ceil() as i64;
    (a, b)
}

/// Global approximation for G(n, p), degrees `B(n - 1, p)`.
pub fn nhc_global_approx(n: usize, p: f64) -> Result<TheoryApprox> {
    nhc_global_approx_with(n, p, TheoryOptions::default())
}

pub fn nhc_global_approx_with(n: usize, p: f64, options: TheoryOptions) -> Result<TheoryApprox> {
    if n < 3 {
        return Err(Error::InvalidParameter("n must be at least 3".into()));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("p = {p} outside [0, 1]")));
    }
    if p == 0.0 || p == 1.0 {
        // G(n, 0) and G(n, 1) are regular.
        let k = if p == 0.0 { 0 } else { n as i64 - 1 };
        return Ok(TheoryApprox {
            n,
            p,
            a: k,
            b: k,
            per_degree: BTreeMap::new(),
            global: 0.0,
            dropped_terms: 0,
            options,
        });
    }
    let dist = Binomial::new(n as u64 - 1, p)?;
    nhc_global_approx_for(n, p, &dist, options)
}

/// Global approximation for an arbitrary degree law.
pub fn nhc_global_approx_for(
    n: usize,
    p: f64,
    dist: &dyn DegreeDistribution,
    options: TheoryOptions,
) -> Result<TheoryApprox> {
    let (a, b) = degree_range(n, dist, options.bounds);
    if b <= a {
        return Err(Error::DegenerateRange { a, b });
    }
    let mut per_degree = BTreeMap::new();
    let mut dropped_terms = 0;
    for k in a..=b {
        let (v, dropped) = approx_k_with_drops(n, p, k as usize, dist)?;
        dropped_terms += dropped;
        per_degree.insert(k as usize, v);
    }
    let divisor = match options.divisor {
        RangeDivisor::Span => (b - a) as f64,
        RangeDivisor::TermCount => (b - a + 1) as f64,
    };
    let global = per_degree.values().sum::<f64>() / divisor;
    Ok(TheoryApprox { n, p, a, b, per_degree, global, dropped_terms, options })
}

/// Closed-form upper bound `√π b / (n √(2 p (1 - p) (n - 1)))` on the G(n, p)
/// approximation, with `b` from [`degree_range`]. Decays like `n^{-1/2}` or faster.
pub fn corollary_bound(n: usize, p: f64) -> Result<f64> {
    if n < 3 || !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidParameter(format!("bound needs n >= 3 and 0 < p < 1 (n = {n}, p = {p})")));
    }
    let dist = Binomial::new(n as u64 - 1, p)?;
    let (_, b) = degree_range(n, &dist, RangeBounds::ErForm);
    let nf = n as f64;
    Ok(PI.sqrt() * b as f64 / (nf * (2.0 * p * (1.0 - p) * (nf - 1.0)).sqrt()))
}

/// Normal-approximation shortcut for `f(F⁻¹(x))` of `B(n - 1, p)`:
/// `4 x (1 - x) / √(2π (n - 1) p (1 - p))`. Diagnostic only.
pub fn normal_mass_at_quantile(x: f64, n: usize, p: f64) -> f64 {
    let var = (n as f64 - 1.0) * p * (1.0 - p);
    4.0 * x * (1.0 - x) / (2.0 * PI * var).sqrt()
}

/// Normal-approximation quantile of `B(n - 1, p)` using
/// `erf⁻¹(2x - 1) ≈ sign · √(-ln(4x(1-x)) / 2)`. Diagnostic only.
pub fn normal_quantile(x: f64, n: usize, p: f64) -> f64 {
    let var = (n as f64 - 1.0) * p * (1.0 - p);
    let mean = (n as f64 - 1.0) * p;
    let magnitude = (-(4.0 * x * (1.0 - x)).ln() * 2.0 * var).sqrt();
    mean + (2.0 * x - 1.0).signum() * magnitude
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_examples() {
        let b = binom(10, 0.5).unwrap();
        assert_eq!(b.quantile(0.5), 5.0);
        assert!((b.pmf(5.0) - 252.0 / 1024.0).abs() < 1e-14);
        for k in 0..=10 {
            assert_eq!(b.quantile(b.cdf(k as f64)), k as f64);
        }
        assert!((b.cdf(10.0) - 1.0).abs() < 1e-15);
        assert_eq!(b.pmf(2.5), 0.0);
        assert_eq!(b.pmf(11.0), 0.0);
    }

    #[test]
    fn binomial_mass_sums_to_one() {
        for &(n, p) in &[(1u64, 0.3), (99, 0.1), (1999, 0.005), (20_000, 0.5), (50, 0.999)] {
            let b = binom(n, p).unwrap();
            let total: f64 = (0..=n).map(|k| b.mass(k)).sum();
            assert!((total - 1.0).abs() < 1e-9, "B({n}, {p}) sums to {total}");
        }
    }

    #[test]
    fn binomial_matches_exact_coefficients() {
        // B(20, 0.3) against products of exact binomial coefficients.
        let b = binom(20, 0.3).unwrap();
        let mut c = 1.0f64;
        for k in 0..=20u64 {
            if k > 0 {
                c = c * (21 - k) as f64 / k as f64;
            }
            let exact = c * 0.3f64.powi(k as i32) * 0.7f64.powi(20 - k as i32);
            assert!((b.mass(k) - exact).abs() <= 1e-12 * exact.max(1e-300), "k = {k}");
        }
    }

    #[test]
    fn degenerate_binomials() {
        let b = binom(5, 0.0).unwrap();
        assert_eq!(b.mass(0), 1.0);
        assert_eq!(b.quantile(0.7), 0.0);
        let b = binom(5, 1.0).unwrap();
        assert_eq!(b.mass(5), 1.0);
        assert!(binom(0, 0.5).is_err());
    }

    #[test]
    fn uniform_order_statistics() {
        let s = order_stat_sigma(1, 1, &UnitUniform).unwrap();
        assert!((s - (1.0f64 / 12.0).sqrt()).abs() < 1e-15);
        let s = order_stat_sigma(2, 3, &UnitUniform).unwrap();
        assert!((s - 0.5 / 5f64.sqrt()).abs() < 1e-15);
        assert!(order_stat_sigma(0, 3, &UnitUniform).is_err());
        assert!(order_stat_sigma(4, 3, &UnitUniform).is_err());
    }

    #[test]
    fn vanishing_mass_is_an_error() {
        struct Spike;
        impl DegreeDistribution for Spike {
            fn pmf(&self, _: f64) -> f64 {
                0.0
            }
            fn cdf(&self, x: f64) -> f64 {
                x
            }
            fn quantile(&self, u: f64) -> f64 {
                u
            }
            fn support(&self) -> (f64, f64) {
                (0.0, 1.0)
            }
        }
        assert!(matches!(order_stat_sigma(1, 2, &Spike), Err(Error::PmfVanishes(_))));
        assert!(matches!(nhc_k_approx(100, 0.1, 3, &Spike), Err(Error::PmfVanishes(_))));
    }

    #[test]
    fn symmetric_terms_mirror() {
        let b = binom(100, 0.5).unwrap();
        let k = 11;
        for i in 1..=k {
            let fi = b.pmf(b.quantile(i as f64 / (k + 1) as f64));
            let fj = b.pmf(b.quantile((k + 1 - i) as f64 / (k + 1) as f64));
            let (ti, tj) = (spread(i, k) / fi, spread(k + 1 - i, k) / fj);
            assert!((ti - tj).abs() <= 1e-9 * ti, "i = {i}: {ti} vs {tj}");
        }
    }

    #[test]
    fn k_approx_scales_with_n_squared() {
        // Fixed degree law isolates the n(n-1) factor in the denominator.
        let b = binom(999, 0.01).unwrap();
        let v1 = nhc_k_approx(1000, 0.01, 10, &b).unwrap();
        let v2 = nhc_k_approx(2000, 0.01, 10, &b).unwrap();
        let ratio = v1 / v2;
        assert!((ratio - 2000.0 * 1999.0 / (1000.0 * 999.0)).abs() < 1e-9);
        // With the law following n, the ratio stays near 4 up to the Σ's drift.
        let v2 = nhc_k_approx(2000, 0.01, 10, &binom(1999, 0.01).unwrap()).unwrap();
        let ratio = v1 / v2;
        assert!(ratio > 2.5 && ratio < 6.0, "ratio {ratio}");
    }

    #[test]
    fn global_approx_shape() {
        let t = nhc_global_approx(2000, 0.005).unwrap();
        assert!(t.a >= 1 && t.a < t.b);
        assert_eq!(t.per_degree.len() as i64, t.b - t.a + 1);
        let mean_k = t.per_degree.values().sum::<f64>() / (t.b - t.a) as f64;
        assert!((t.global - mean_k).abs() < 1e-15);
        let csv = t.to_csv();
        assert!(csv.starts_with("k,approx\n"));
        assert_eq!(csv.lines().count() as i64, t.b - t.a + 2);
        let counted = nhc_global_approx_with(
            2000,
            0.005,
            TheoryOptions { divisor: RangeDivisor::TermCount, ..Default::default() },
        )
        .unwrap();
        assert!(counted.global < t.global);
    }

    #[test]
    fn global_approx_limits_and_trend() {
        assert_eq!(nhc_global_approx(100, 0.0).unwrap().global, 0.0);
        assert_eq!(nhc_global_approx(100, 1.0).unwrap().global, 0.0);
        let small = nhc_global_approx(2000, 0.01).unwrap().global;
        let large = nhc_global_approx(20_000, 0.01).unwrap().global;
        assert!(large < small);
        assert!(nhc_global_approx(2, 0.5).is_err());
        // Four nodes at p = 0.5: B(3, 0.5) gives a = 1, b = ceil(F⁻¹(0.75)) = 2.
        assert!(nhc_global_approx(4, 0.5).is_ok());
        assert!(matches!(nhc_global_approx(3, 0.01), Err(Error::DegenerateRange { .. })));
    }

    #[test]
    fn bound_examples() {
        let big = corollary_bound(1_000_000, 0.1).unwrap();
        let small = corollary_bound(10_000, 0.1).unwrap();
        assert!(big < small / 10.0);
        for &n in &[10_000usize, 30_000] {
            for &p in &[0.01, 0.1] {
                let bound = corollary_bound(n, p).unwrap();
                let approx = nhc_global_approx(n, p).unwrap().global;
                assert!(bound > 0.0);
                assert!(bound >= approx, "n = {n}, p = {p}: {bound} < {approx}");
            }
        }
        assert!(corollary_bound(100, 0.0).is_err());
    }

    #[test]
    fn normal_quantile_is_centred() {
        assert!((normal_quantile(0.5, 1001, 0.3) - 300.0).abs() < 1e-9);
        assert!(normal_quantile(0.2, 1001, 0.3) < 300.0);
        assert!(normal_quantile(0.8, 1001, 0.3) > 300.0);
    }
}
