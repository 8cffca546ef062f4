//! Immutable simple undirected graphs and their neighbourhood degree sequences.
//!
//! Adjacency is stored in compressed sparse row form with every neighbour list
//! sorted ascending. Degrees are precomputed, so extracting the neighbourhood
//! degree sequence (NDS) of a node is one pass over its neighbours plus a sort
//! of `k` small integers.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A simple undirected graph on the dense node ids `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    targets: Vec<u32>,
    edge_count: usize,
}

/// The stacked neighbourhood degree sequences of every node of one degree.
///
/// Row `r` is the ascending NDS of the `r`-th node of degree `degree`, in
/// ascending node-id order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NdsMatrix {
    pub degree: usize,
    pub rows: Vec<Vec<usize>>,
}

impl NdsMatrix {
    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Entries of column `j` (0-based), top to bottom.
    pub fn column(&self, j: usize) -> impl Iterator<Item = usize> + '_ {
        self.rows.iter().map(move |row| row[j])
    }
}

/// Builds a simple graph from a list of node-id pairs.
///
/// Self-loops are dropped and duplicate or reversed pairs collapse to one
/// edge. With `n_hint` the graph has exactly that many nodes, so trailing
/// isolated nodes survive; without it `n` is one past the largest id seen.
pub fn build_graph(edges: &[(usize, usize)], n_hint: Option<usize>) -> Result<Graph> {
    Graph::from_edges(edges.iter().copied(), n_hint)
}

impl Graph {
    pub fn from_edges<I>(edges: I, n_hint: Option<usize>) -> Result<Graph>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut pairs: Vec<(u32, u32)> = Vec::new();
        let mut max_id: Option<usize> = None;
        for (u, v) in edges {
            let hi = u.max(v);
            if let Some(n) = n_hint {
                if hi >= n {
                    return Err(Error::IdOutOfRange { id: hi, n });
                }
            }
            if hi > u32::MAX as usize - 1 {
                return Err(Error::IdOutOfRange { id: hi, n: u32::MAX as usize });
            }
            max_id = Some(max_id.map_or(hi, |m| m.max(hi)));
            if u != v {
                pairs.push((u.min(v) as u32, hi as u32));
            }
        }
        let n = match (n_hint, max_id) {
            (Some(n), _) => n,
            (None, Some(m)) => m + 1,
            (None, None) => return Err(Error::EmptyGraph),
        };
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        pairs.sort_unstable();
        pairs.dedup();
        Ok(Self::from_sorted_pairs(n, &pairs))
    }

    /// `pairs` must be sorted, deduplicated and satisfy `u < v < n`.
    pub(crate) fn from_sorted_pairs(n: usize, pairs: &[(u32, u32)]) -> Graph {
        let mut degree = vec![0usize; n];
        for &(u, v) in pairs {
            degree[u as usize] += 1;
            degree[v as usize] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut cursor = offsets[..n].to_vec();
        let mut targets = vec![0u32; offsets[n]];
        // Sorted (u, v) order leaves every neighbour list sorted: node x first
        // receives all u < x, then all v > x, each ascending.
        for &(u, v) in pairs {
            targets[cursor[u as usize]] = v;
            cursor[u as usize] += 1;
            targets[cursor[v as usize]] = u;
            cursor[v as usize] += 1;
        }
        Graph { offsets, targets, edge_count: pairs.len() }
    }

    /// `n` isolated nodes.
    pub fn empty(n: usize) -> Graph {
        Graph::from_sorted_pairs(n, &[])
    }

    pub fn node_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn degree(&self, i: usize) -> usize {
        self.offsets[i + 1] - self.offsets[i]
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.node_count()).map(|i| self.degree(i)).collect()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.node_count()).map(|i| self.degree(i)).max().unwrap_or(0)
    }

    pub fn neighbors(&self, i: usize) -> &[u32] {
        &self.targets[self.offsets[i]..self.offsets[i + 1]]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        if u >= self.node_count() || v >= self.node_count() {
            return false;
        }
        let (a, b) = if self.degree(u) <= self.degree(v) { (u, v) } else { (v, u) };
        self.neighbors(a).binary_search(&(b as u32)).is_ok()
    }

    /// 2m / (n(n-1)); zero for graphs with fewer than two nodes.
    pub fn density(&self) -> f64 {
        let n = self.node_count() as f64;
        if n < 2.0 {
            return 0.0;
        }
        2.0 * self.edge_count as f64 / (n * (n - 1.0))
    }

    pub fn max_edges(&self) -> usize {
        let n = self.node_count();
        n * n.saturating_sub(1) / 2
    }

    pub fn is_complete(&self) -> bool {
        self.edge_count == self.max_edges()
    }

    pub fn is_regular(&self) -> bool {
        let n = self.node_count();
        n == 0 || (1..n).all(|i| self.degree(i) == self.degree(0))
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.node_count()).flat_map(move |u| {
            self.neighbors(u).iter().map(|&v| v as usize).filter(move |&v| v > u).map(move |v| (u, v))
        })
    }

    pub(crate) fn sorted_pairs(&self) -> Vec<(u32, u32)> {
        self.edges().map(|(u, v)| (u as u32, v as u32)).collect()
    }

    /// Returns a new graph with `extra` pairs added. Pairs must be valid non-edges.
    pub(crate) fn with_added_edges(&self, extra: &[(usize, usize)]) -> Graph {
        let mut pairs = self.sorted_pairs();
        pairs.extend(extra.iter().map(|&(u, v)| (u.min(v) as u32, u.max(v) as u32)));
        pairs.sort_unstable();
        pairs.dedup();
        Graph::from_sorted_pairs(self.node_count(), &pairs)
    }

    pub fn complement(&self) -> Graph {
        let n = self.node_count();
        let mut pairs = Vec::with_capacity(self.max_edges() - self.edge_count);
        for u in 0..n {
            let mut nb = self.neighbors(u).iter().map(|&v| v as usize).peekable();
            for v in (u + 1)..n {
                while nb.peek().is_some_and(|&w| w < v) {
                    nb.next();
                }
                if nb.peek() != Some(&v) {
                    pairs.push((u as u32, v as u32));
                }
            }
        }
        Graph::from_sorted_pairs(n, &pairs)
    }

    pub fn component_count(&self) -> usize {
        let n = self.node_count();
        let mut seen = vec![false; n];
        let mut stack = Vec::new();
        let mut components = 0;
        for s in 0..n {
            if seen[s] {
                continue;
            }
            components += 1;
            seen[s] = true;
            stack.push(s);
            while let Some(u) = stack.pop() {
                for &v in self.neighbors(u) {
                    let v = v as usize;
                    if !seen[v] {
                        seen[v] = true;
                        stack.push(v);
                    }
                }
            }
        }
        components
    }

    /// Neighbourhood degree sequence of node `i`, sorted ascending.
    pub fn nds(&self, i: usize) -> Result<Vec<usize>> {
        if i >= self.node_count() {
            return Err(Error::IdOutOfRange { id: i, n: self.node_count() });
        }
        let mut out = Vec::with_capacity(self.degree(i));
        self.nds_into(i, &mut out);
        Ok(out)
    }

    pub(crate) fn nds_into(&self, i: usize, out: &mut Vec<usize>) {
        out.clear();
        out.extend(self.neighbors(i).iter().map(|&v| self.degree(v as usize)));
        out.sort_unstable();
    }

    pub fn nds_matrix(&self, k: usize) -> NdsMatrix {
        let rows = (0..self.node_count())
            .filter(|&i| k >= 1 && self.degree(i) == k)
            .map(|i| {
                let mut row = Vec::with_capacity(k);
                self.nds_into(i, &mut row);
                row
            })
            .collect();
        NdsMatrix { degree: k, rows }
    }

    /// Node ids grouped by degree; index `k` holds the ascending ids of degree `k`.
    pub(crate) fn nodes_by_degree(&self) -> Vec<Vec<usize>> {
        let mut buckets = vec![Vec::new(); self.max_degree() + 1];
        for i in 0..self.node_count() {
            buckets[self.degree(i)].push(i);
        }
        buckets
    }

    /// Degrees `k >= 1` held by at least two nodes, ascending.
    pub fn degree_support_d2(&self) -> Vec<usize> {
        let mut counts = vec![0usize; self.max_degree() + 1];
        for i in 0..self.node_count() {
            counts[self.degree(i)] += 1;
        }
        counts.iter().enumerate().skip(1).filter(|&(_, &c)| c >= 2).map(|(k, _)| k).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn six_node() -> Graph {
        build_graph(&[(0, 1), (1, 2), (2, 3), (1, 3), (3, 4), (4, 5)], None).unwrap()
    }

    fn star3() -> Graph {
        build_graph(&[(0, 1), (0, 2), (0, 3)], None).unwrap()
    }

    fn path4() -> Graph {
        build_graph(&[(0, 1), (1, 2), (2, 3)], None).unwrap()
    }

    #[test]
    fn build_collapses_duplicates_and_loops() {
        let g = build_graph(&[(0, 1), (1, 0), (1, 1), (1, 2)], None).unwrap();
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.degrees(), vec![1, 2, 1]);
    }

    #[test]
    fn build_keeps_isolated_nodes_with_hint() {
        let g = build_graph(&[(0, 1)], Some(4)).unwrap();
        assert_eq!(g.node_count(), 4);
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.degrees(), vec![1, 1, 0, 0]);
    }

    #[test]
    fn build_errors() {
        assert_eq!(build_graph(&[], None), Err(Error::EmptyGraph));
        assert_eq!(build_graph(&[(0, 4)], Some(4)), Err(Error::IdOutOfRange { id: 4, n: 4 }));
        assert_eq!(build_graph(&[], Some(3)).unwrap().node_count(), 3);
    }

    #[test]
    fn six_node_degrees_and_density() {
        let g = six_node();
        assert_eq!(g.degrees(), vec![1, 3, 2, 3, 2, 1]);
        assert!((g.density() - 0.4).abs() < 1e-15);
        assert_eq!(g.component_count(), 1);
    }

    #[test]
    fn nds_examples() {
        assert_eq!(star3().nds(0).unwrap(), vec![1, 1, 1]);
        assert_eq!(star3().nds(2).unwrap(), vec![3]);
        assert_eq!(six_node().nds(3).unwrap(), vec![2, 2, 3]);
        assert!(star3().nds(4).is_err());
        assert!(build_graph(&[(0, 1)], Some(3)).unwrap().nds(2).unwrap().is_empty());
    }

    #[test]
    fn nds_matrix_examples() {
        assert_eq!(path4().nds_matrix(2).rows, vec![vec![1, 2], vec![1, 2]]);
        assert_eq!(star3().nds_matrix(1).rows, vec![vec![3], vec![3], vec![3]]);
        assert_eq!(star3().nds_matrix(2).row_count(), 0);
        assert_eq!(star3().nds_matrix(0).row_count(), 0);
    }

    #[test]
    fn d2_examples() {
        assert_eq!(path4().degree_support_d2(), vec![1, 2]);
        let k4 = build_graph(&[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)], None).unwrap();
        assert_eq!(k4.degree_support_d2(), vec![3]);
        // Pigeonhole forces a repeated degree among non-isolated nodes, so
        // only edgeless graphs have an empty support.
        assert!(Graph::empty(5).degree_support_d2().is_empty());
        let g = build_graph(&[(0, 1)], Some(4)).unwrap();
        assert_eq!(g.degree_support_d2(), vec![1]);
    }

    #[test]
    fn complement_round_trip() {
        let g = six_node();
        let c = g.complement();
        assert_eq!(c.edge_count(), 15 - 6);
        assert_eq!(c.complement(), g);
        for (u, v) in c.edges() {
            assert!(!g.has_edge(u, v));
        }
    }

    #[test]
    fn adjacency_sorted_and_symmetric() {
        let g = six_node();
        for u in 0..g.node_count() {
            assert!(g.neighbors(u).windows(2).all(|w| w[0] < w[1]));
            for &v in g.neighbors(u) {
                assert!(g.has_edge(v as usize, u));
            }
        }
    }
}
