//! Seeded random-graph families and a few deterministic reference graphs.
//!
//! Every generator draws from a ChaCha8 stream selected by `(seed, stream)`,
//! so a realisation is reproducible on its own regardless of how many other
//! realisations run beside it or in which order.

mod config;
mod er;
mod geometric;
pub mod lattice;

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

pub use config::{gen_config, gen_config_with_rng, is_graphical};
pub use er::{gen_er, gen_er_with_rng};
pub use geometric::{gen_rgg, gen_rgg_with_rng, gen_rhgg, gen_rhgg_with_rng, target_edge_count};

/// Independent RNG stream `stream` of `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// Erdős–Rényi G(n, p).
    Er,
    /// Random geometric graph, top-m inverse distances in the unit cube.
    Rgg,
    /// Random hierarchical geometric graph, weights `d_ij (s_i + s_j)`.
    Rhgg,
    /// Configuration model on an RHGG degree sequence.
    Rhg,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::Er, Family::Rgg, Family::Rhg, Family::Rhgg];

    pub fn name(self) -> &'static str {
        match self {
            Family::Er => "er",
            Family::Rgg => "rgg",
            Family::Rhgg => "rhgg",
            Family::Rhg => "rhg",
        }
    }
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "er" => Ok(Family::Er),
            "rgg" => Ok(Family::Rgg),
            "rhgg" => Ok(Family::Rhgg),
            "rhg" => Ok(Family::Rhg),
            other => Err(Error::InvalidParameter(format!("unknown family '{other}'"))),
        }
    }
}

/// Either an edge probability (ER) or a target density (top-m families).
///
/// The two are interchangeable: ER reads a density as `p`, the geometric
/// families read `p` as the density to hit.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Target {
    P(f64),
    Density(f64),
}

impl Target {
    pub fn value(self) -> f64 {
        match self {
            Target::P(x) | Target::Density(x) => x,
        }
    }
}

fn default_dims() -> usize {
    3
}

fn default_sigma_h() -> f64 {
    0.2
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    pub family: Family,
    pub n: usize,
    pub target: Target,
    #[serde(default = "default_dims")]
    pub dims: usize,
    #[serde(default)]
    pub mu: f64,
    #[serde(default = "default_sigma_h")]
    pub sigma_h: f64,
    #[serde(default)]
    pub seed: u64,
    /// RHG only; when absent an RHGG with the same parameters supplies it.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree_sequence: Option<Vec<usize>>,
}

impl ModelSpec {
    pub fn new(family: Family, n: usize, target: f64, seed: u64) -> Self {
        ModelSpec {
            family,
            n,
            target: match family {
                Family::Er => Target::P(target),
                _ => Target::Density(target),
            },
            dims: default_dims(),
            mu: 0.0,
            sigma_h: default_sigma_h(),
            seed,
            degree_sequence: None,
        }
    }

    pub fn with_sigma_h(mut self, sigma_h: f64) -> Self {
        self.sigma_h = sigma_h;
        self
    }

    pub fn with_dims(mut self, dims: usize) -> Self {
        self.dims = dims;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let t = self.target.value();
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::InvalidParameter(format!("target {t} outside [0, 1]")));
        }
        if (self.family != Family::Rhg || self.degree_sequence.is_none()) && self.n < 2 {
            return Err(Error::InvalidParameter("n must be at least 2".into()));
        }
        if matches!(self.family, Family::Rgg | Family::Rhgg | Family::Rhg) {
            if self.dims == 0 {
                return Err(Error::InvalidParameter("dims must be at least 1".into()));
            }
            if self.sigma_h.is_nan() || self.sigma_h < 0.0 {
                return Err(Error::InvalidParameter("sigma_h must be non-negative".into()));
            }
        }
        Ok(())
    }

    /// Generates the realisation for this spec's seed (stream 0).
    pub fn generate(&self) -> Result<Graph> {
        self.generate_stream(0)
    }

    /// Generates on stream `stream` of this spec's seed.
    pub fn generate_stream(&self, stream: u64) -> Result<Graph> {
        self.validate()?;
        let mut rng = stream_rng(self.seed, stream);
        let t = self.target.value();
        match self.family {
            Family::Er => gen_er_with_rng(self.n, t, &mut rng),
            Family::Rgg => gen_rgg_with_rng(self.n, t, self.dims, &mut rng),
            Family::Rhgg => gen_rhgg_with_rng(self.n, t, self.dims, self.mu, self.sigma_h, &mut rng),
            Family::Rhg => {
                let degrees = match &self.degree_sequence {
                    Some(seq) => seq.clone(),
                    None => gen_rhgg_with_rng(self.n, t, self.dims, self.mu, self.sigma_h, &mut rng)?.degrees(),
                };
                gen_config_with_rng(&degrees, &mut rng)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_json_defaults() {
        let spec: ModelSpec = serde_json::from_str(r#"{"family":"rhgg","n":50,"target":{"density":0.1}}"#).unwrap();
        assert_eq!(spec.dims, 3);
        assert_eq!(spec.sigma_h, 0.2);
        assert_eq!(spec.mu, 0.0);
        let g = spec.generate().unwrap();
        assert_eq!(g.edge_count(), target_edge_count(50, 0.1));
    }

    #[test]
    fn spec_validation() {
        assert!(ModelSpec::new(Family::Er, 1, 0.5, 0).generate().is_err());
        assert!(ModelSpec::new(Family::Er, 10, 1.5, 0).generate().is_err());
        assert!(ModelSpec::new(Family::Rgg, 10, 0.5, 0).with_dims(0).generate().is_err());
        assert!(ModelSpec::new(Family::Rhgg, 10, 0.5, 0).with_sigma_h(-1.0).generate().is_err());
    }

    #[test]
    fn rhg_preserves_rhgg_degrees() {
        let spec = ModelSpec::new(Family::Rhgg, 200, 0.05, 9);
        let source = spec.generate().unwrap();
        let rhg = ModelSpec { family: Family::Rhg, ..spec }.generate().unwrap();
        let mut a = source.degrees();
        let mut b = rhg.degrees();
        a.sort_unstable();
        b.sort_unstable();
        assert_eq!(a, b);
    }

    #[test]
    fn family_parse() {
        assert_eq!("RHGG".parse::<Family>().unwrap(), Family::Rhgg);
        assert!("ba".parse::<Family>().is_err());
    }
}
