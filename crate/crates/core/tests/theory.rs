use netcomplexity::complexity::nhc_k;
use netcomplexity::generators::gen_er;
use netcomplexity::theory::{
    binom, corollary_bound, nhc_global_approx, nhc_k_approx, normal_mass_at_quantile, order_stat_sigma,
    DegreeDistribution,
};
use netcomplexity::workbench::experiments::simulate_er;
use rand::SeedableRng;
use rand_distr::Distribution;

#[test]
fn binomial_median_order_statistic_k20() {
    let (k, i, trials) = (20usize, 10usize, 100_000);
    let b = binom(99, 0.1).unwrap();
    let sampler = rand_distr::Binomial::new(99, 0.1).unwrap();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(20);
    let (mut s1, mut s2) = (0.0, 0.0);
    let mut sample = vec![0u64; k];
    for _ in 0..trials {
        for x in sample.iter_mut() {
            *x = sampler.sample(&mut rng);
        }
        sample.sort_unstable();
        let v = sample[i - 1] as f64;
        s1 += v;
        s2 += v * v;
    }
    let m = s1 / trials as f64;
    let empirical = (s2 / trials as f64 - m * m).sqrt();
    let approx = order_stat_sigma(i, k, &b).unwrap();
    assert!((approx - empirical).abs() / empirical < 0.10, "{approx} vs {empirical}");
}

#[test]
fn per_degree_approximation_against_simulation() {
    let (n, p, k) = (2000, 0.005, 10);
    let b = binom(n as u64 - 1, p).unwrap();
    let approx = nhc_k_approx(n, p, k, &b).unwrap();
    let sims: Vec<f64> = (0..20).map(|s| nhc_k(&gen_er(n, p, 300 + s).unwrap(), k).unwrap()).collect();
    let sim = sims.iter().sum::<f64>() / sims.len() as f64;
    assert!((approx - sim).abs() / sim < 0.25, "{approx} vs {sim}");
}

#[test]
fn global_error_shrinks_with_n() {
    let p = 0.002;
    let errors: Vec<f64> = [500, 2000, 8000]
        .iter()
        .map(|&n| {
            let approx = nhc_global_approx(n, p).unwrap().global;
            let (sim, _) = simulate_er(n, p, 20, 8).unwrap();
            (approx - sim).abs() / sim
        })
        .collect();
    assert!(errors[2] <= errors[0], "{errors:?}");
    assert!(errors[1] <= errors[0], "{errors:?}");
}

#[test]
fn large_n_value_below_smaller_n() {
    let small = nhc_global_approx(2000, 0.01).unwrap().global;
    let large = nhc_global_approx(20_000, 0.01).unwrap().global;
    assert!(large < small);
}

#[test]
fn bound_dominates_approximation() {
    for p in [0.01, 0.1] {
        let n = 10_000;
        assert!(corollary_bound(n, p).unwrap() >= nhc_global_approx(n, p).unwrap().global);
    }
    assert!(corollary_bound(1_000_000, 0.1).unwrap() < corollary_bound(10_000, 0.1).unwrap() / 10.0);
}

fn normal_shortcut_error(x: f64, n: usize, p: f64) -> f64 {
    let b = binom(n as u64 - 1, p).unwrap();
    let exact = b.pmf(b.quantile(x));
    (normal_mass_at_quantile(x, n, p) - exact).abs() / exact
}

#[test]
fn normal_shortcut_tracks_exact_mass_away_from_tails() {
    for n in [1_000, 5_000, 20_000] {
        for p in [0.05, 0.3, 0.5] {
            for step in 0..=60 {
                let x = 0.2 + step as f64 * 0.01;
                let err = normal_shortcut_error(x, n, p);
                assert!(err < 0.15, "x={x} n={n} p={p}: {err}");
            }
        }
    }
}

// 4x(1 - x) undershoots exp(-z²/2) by about 18% at x = 0.1 whatever n is,
// and the lattice adds a few percent either way.
#[test]
fn normal_shortcut_undershoots_at_tenth_quantile() {
    for n in [1_000, 5_000, 20_000] {
        for p in [0.05, 0.3, 0.5] {
            let err = normal_shortcut_error(0.1, n, p);
            assert!(err > 0.15 && err < 0.25, "n={n} p={p}: {err}");
        }
    }
}
