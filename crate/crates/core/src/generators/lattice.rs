//! Deterministic reference graphs.

use crate::graph::Graph;

pub fn cycle(n: usize) -> Graph {
    let edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    Graph::from_edges(edges, Some(n)).expect("cycle ids are in range")
}

pub fn path(n: usize) -> Graph {
    Graph::from_edges((1..n).map(|i| (i - 1, i)), Some(n)).expect("path ids are in range")
}

pub fn complete(n: usize) -> Graph {
    Graph::from_edges((0..n).flat_map(|u| ((u + 1)..n).map(move |v| (u, v))), Some(n))
        .expect("complete graph ids are in range")
}

/// Star with centre 0 and `leaves` leaves.
pub fn star(leaves: usize) -> Graph {
    Graph::from_edges((1..=leaves).map(|i| (0, i)), Some(leaves + 1)).expect("star ids are in range")
}

/// `rows × cols` grid with wrap-around in both directions.
///
/// Regular for any size: 4-regular when both sides are at least 3, with
/// coinciding wrap edges collapsing otherwise.
pub fn torus(rows: usize, cols: usize) -> Graph {
    let id = |r: usize, c: usize| r * cols + c;
    let mut edges = Vec::with_capacity(2 * rows * cols);
    for r in 0..rows {
        for c in 0..cols {
            edges.push((id(r, c), id(r, (c + 1) % cols)));
            edges.push((id(r, c), id((r + 1) % rows, c)));
        }
    }
    Graph::from_edges(edges, Some(rows * cols)).expect("torus ids are in range")
}
