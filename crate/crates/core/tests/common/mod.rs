//! Brute-force reference implementations, written from the definitions and
//! sharing no code with the library.

#![allow(dead_code)]

/// Complexity values computed directly from an adjacency matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Reference {
    pub r: f64,
    pub r_hat: f64,
    pub r_hat_sqrtk: f64,
    pub r_hat_sqrtk_sqrtm: f64,
}

pub fn adjacency(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<bool>> {
    let mut a = vec![vec![false; n]; n];
    for &(u, v) in edges {
        if u != v {
            a[u][v] = true;
            a[v][u] = true;
        }
    }
    a
}

fn population_variance(xs: &[f64]) -> f64 {
    let mean = xs.iter().sum::<f64>() / xs.len() as f64;
    xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / xs.len() as f64
}

pub fn reference(n: usize, edges: &[(usize, usize)]) -> Reference {
    let a = adjacency(n, edges);
    let degree: Vec<usize> = a.iter().map(|row| row.iter().filter(|&&b| b).count()).collect();
    let m = degree.iter().sum::<usize>() / 2;
    let d = if n < 2 { 0.0 } else { 2.0 * m as f64 / (n as f64 * (n as f64 - 1.0)) };

    let mut r_terms = Vec::new();
    let mut sigma_sums = Vec::new();
    for k in 1..n {
        let members: Vec<usize> = (0..n).filter(|&i| degree[i] == k).collect();
        if members.len() < 2 {
            continue;
        }
        let nds: Vec<Vec<usize>> = members
            .iter()
            .map(|&i| {
                let mut s: Vec<usize> = (0..n).filter(|&j| a[i][j]).map(|j| degree[j]).collect();
                s.sort();
                s
            })
            .collect();
        let mut var_sum = 0.0;
        let mut sigma_sum = 0.0;
        for j in 0..k {
            let col: Vec<f64> = nds.iter().map(|row| row[j] as f64).collect();
            let v = population_variance(&col);
            var_sum += v;
            sigma_sum += v.sqrt();
        }
        r_terms.push(var_sum / k as f64);
        sigma_sums.push((k, sigma_sum));
    }

    let avg = |xs: &[f64]| if xs.is_empty() { 0.0 } else { xs.iter().sum::<f64>() / xs.len() as f64 };
    let r = avg(&r_terms);
    let scale = (1.0 - d) * m as f64;
    if m == 0 || d >= 1.0 {
        return Reference { r, r_hat: 0.0, r_hat_sqrtk: 0.0, r_hat_sqrtk_sqrtm: 0.0 };
    }
    let plain: Vec<f64> = sigma_sums.iter().map(|&(_, s)| s / scale).collect();
    let sqrtk: Vec<f64> = sigma_sums.iter().map(|&(k, s)| s / (k as f64).sqrt() / scale).collect();
    let sqrtm_scale = (1.0 - d) * (m as f64).sqrt();
    let sqrtk_sqrtm: Vec<f64> = sigma_sums.iter().map(|&(k, s)| s / (k as f64).sqrt() / sqrtm_scale).collect();
    Reference { r, r_hat: avg(&plain), r_hat_sqrtk: avg(&sqrtk), r_hat_sqrtk_sqrtm: avg(&sqrtk_sqrtm) }
}

/// Average ranks (1-based) by counting, ties share the mean position.
pub fn ranks_by_counting(x: &[f64]) -> Vec<f64> {
    x.iter()
        .map(|&xi| {
            let below = x.iter().filter(|&&xj| xj < xi).count() as f64;
            let equal = x.iter().filter(|&&xj| xj == xi).count() as f64;
            below + (equal + 1.0) / 2.0
        })
        .collect()
}

pub fn pearson_by_definition(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let syy: f64 = y.iter().map(|b| (b - my) * (b - my)).sum();
    sxy / (sxx * syy).sqrt()
}

pub fn spearman_by_definition(x: &[f64], y: &[f64]) -> f64 {
    pearson_by_definition(&ranks_by_counting(x), &ranks_by_counting(y))
}

/// Edge list of the labeled graph on `n` nodes selected by bit mask over
/// the pairs `(u, v), u < v`, in lexicographic order.
pub fn edges_from_mask(n: usize, mask: u64) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    let mut bit = 0;
    for u in 0..n {
        for v in u + 1..n {
            if mask >> bit & 1 == 1 {
                edges.push((u, v));
            }
            bit += 1;
        }
    }
    edges
}

pub fn is_connected(n: usize, edges: &[(usize, usize)]) -> bool {
    if n == 0 {
        return true;
    }
    let mut adj = vec![0u64; n];
    for &(u, v) in edges {
        adj[u] |= 1 << v;
        adj[v] |= 1 << u;
    }
    let mut seen = 1u64;
    let mut frontier = 1u64;
    while frontier != 0 {
        let mut next = 0;
        for (i, row) in adj.iter().enumerate() {
            if frontier >> i & 1 == 1 {
                next |= row;
            }
        }
        frontier = next & !seen;
        seen |= next;
    }
    seen.count_ones() as usize == n
}

pub fn close(a: f64, b: f64, rel: f64) -> bool {
    a == b || (a - b).abs() <= rel * a.abs().max(b.abs())
}
