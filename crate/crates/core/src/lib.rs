//! Neighbour-degree heterogeneity measures for undirected graphs, random
//! graph models to exercise them, and a binomial approximation for G(n, p).
//!
//! ```
//! use netcomplexity::{build_graph, nhc_global};
//!
//! let g = build_graph(&[(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)], None).unwrap();
//! assert!(nhc_global(&g) >= 0.0);
//! ```

pub mod attachment;
pub mod complexity;
pub mod error;
pub mod generators;
pub mod graph;
pub mod theory;
pub mod workbench;

pub use attachment::{add_edges, density_sweep, edge_weights, Mechanism, SweepTrace};
pub use complexity::{
    column_sigmas, complexity_report, hc_global, hc_k, nhc_alt_sqrtk, nhc_global, nhc_k, ComplexityConfig,
    ComplexityReport, SdConvention,
};
pub use error::{Error, Result};
pub use generators::{gen_config, gen_er, gen_rgg, gen_rhgg, Family, ModelSpec};
pub use graph::{build_graph, Graph, NdsMatrix};
pub use theory::{corollary_bound, nhc_global_approx, nhc_k_approx, order_stat_sigma, TheoryApprox};
