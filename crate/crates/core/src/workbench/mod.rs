//! Loading, statistics and experiment drivers around the core measures.

pub mod experiments;
pub mod io;
pub mod stats;

pub use experiments::{
    analyze_directory, analyze_path, ranking_csv, run_manifest, Experiment, NetworkRecord, RunManifest,
};
pub use io::{parse_edgelist, read_edgelist, write_edgelist, FormatHint, LoadedGraph};
pub use stats::{rank_sum, residual_correlation, spearman, Correlation, RankSum};
