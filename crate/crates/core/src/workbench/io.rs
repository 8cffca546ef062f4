//! Whitespace edge lists (SNAP style) and MatrixMarket coordinate files.

use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FormatHint {
    /// MatrixMarket when the first line carries the `%%MatrixMarket` banner.
    #[default]
    Auto,
    EdgeList,
    MatrixMarket,
}

/// A parsed graph with the original label of each dense id.
#[derive(Clone, Debug, PartialEq)]
pub struct LoadedGraph {
    pub graph: Graph,
    pub labels: Vec<String>,
}

pub fn read_edgelist(path: impl AsRef<Path>, hint: FormatHint) -> Result<LoadedGraph> {
    let text =
        std::fs::read_to_string(path.as_ref()).map_err(|e| Error::Io(format!("{}: {e}", path.as_ref().display())))?;
    parse_edgelist(&text, hint)
}

/// Parses one pair per line; `#` and `%` lines are comments and extra columns
/// (weights, timestamps) are ignored.
///
/// Labels become dense ids. When every label is a non-negative integer the
/// ids follow numeric order, otherwise order of first appearance.
pub fn parse_edgelist(text: &str, hint: FormatHint) -> Result<LoadedGraph> {
    let matrix_market = match hint {
        FormatHint::MatrixMarket => true,
        FormatHint::EdgeList => false,
        FormatHint::Auto => text.trim_start().starts_with("%%MatrixMarket"),
    };
    let mut raw: Vec<(&str, &str)> = Vec::new();
    let mut size_line_pending = matrix_market;
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with('%') {
            continue;
        }
        let mut tokens = line.split_whitespace();
        let (Some(a), Some(b)) = (tokens.next(), tokens.next()) else {
            return Err(Error::Parse { line: idx + 1, message: format!("expected two node labels, found '{line}'") });
        };
        if size_line_pending {
            size_line_pending = false;
            continue;
        }
        raw.push((a, b));
    }
    if raw.is_empty() {
        return Err(Error::EmptyGraph);
    }

    let numeric: Option<Vec<(u64, u64)>> =
        raw.iter().map(|(a, b)| Some((a.parse::<u64>().ok()?, b.parse::<u64>().ok()?))).collect();
    let (labels, edges): (Vec<String>, Vec<(usize, usize)>) = match numeric {
        Some(pairs) => {
            let mut ids: Vec<u64> = pairs.iter().flat_map(|&(a, b)| [a, b]).collect();
            ids.sort_unstable();
            ids.dedup();
            let index = |x: u64| ids.binary_search(&x).unwrap();
            let edges = pairs.iter().map(|&(a, b)| (index(a), index(b))).collect();
            (ids.iter().map(u64::to_string).collect(), edges)
        }
        None => {
            let mut labels: Vec<String> = Vec::new();
            let mut lookup = std::collections::HashMap::new();
            let mut id = |s: &str| -> usize {
                *lookup.entry(s.to_string()).or_insert_with(|| {
                    labels.push(s.to_string());
                    labels.len() - 1
                })
            };
            let edges = raw.iter().map(|&(a, b)| (id(a), id(b))).collect();
            (labels, edges)
        }
    };
    let graph = Graph::from_edges(edges, Some(labels.len()))?;
    Ok(LoadedGraph { graph, labels })
}

/// Writes `u v` lines in lexicographic edge order using dense ids or `labels`.
pub fn write_edgelist<W: Write>(g: &Graph, labels: Option<&[String]>, mut out: W) -> Result<()> {
    for (u, v) in g.edges() {
        match labels {
            Some(l) => writeln!(out, "{} {}", l[u], l[v])?,
            None => writeln!(out, "{u} {v}")?,
        }
    }
    Ok(())
}

pub fn edgelist_string(g: &Graph) -> String {
    let mut buf = Vec::new();
    write_edgelist(g, None, &mut buf).expect("writing to memory cannot fail");
    String::from_utf8(buf).expect("edge lists are ASCII")
}
