use rand::Rng;

use super::stream_rng;
use crate::error::{Error, Result};
use crate::graph::Graph;

/// G(n, p): every unordered pair is an edge independently with probability `p`.
pub fn gen_er(n: usize, p: f64, seed: u64) -> Result<Graph> {
    gen_er_with_rng(n, p, &mut stream_rng(seed, 0))
}

/// Geometric skipping over the pair sequence (Batagelj & Brandes), O(n + m).
pub fn gen_er_with_rng<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Result<Graph> {
    if n < 2 {
        return Err(Error::InvalidParameter("n must be at least 2".into()));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("p = {p} outside [0, 1]")));
    }
    let mut pairs: Vec<(u32, u32)> = Vec::new();
    if p == 1.0 {
        for u in 0..n as u32 {
            for v in (u + 1)..n as u32 {
                pairs.push((u, v));
            }
        }
    } else if p > 0.0 {
        let log_q = (1.0 - p).ln();
        let (mut v, mut w): (i64, i64) = (1, -1);
        let n = n as i64;
        while v < n {
            let r: f64 = rng.random();
            w += 1 + ((1.0 - r).ln() / log_q).floor() as i64;
            while w >= v && v < n {
                w -= v;
                v += 1;
            }
            if v < n {
                pairs.push((w as u32, v as u32));
            }
        }
        pairs.sort_unstable();
    }
    Ok(Graph::from_sorted_pairs(n, &pairs))
}
