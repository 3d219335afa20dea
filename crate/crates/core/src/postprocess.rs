//! Edge-list transformations applied after sampling.
//!
//! The public functions are pure: they return a new list and leave the input
//! untouched.

use crate::error::{Error, Result};
use crate::sampler::EdgeList;

/// Drops edge directions, storing each edge as `(min, max)`. Multiplicities
/// are preserved, so `(1, 2)` and `(2, 1)` become two copies of `(1, 2)`.
pub fn symmetrize(edges: &EdgeList) -> Result<EdgeList> {
    if !edges.is_square() {
        return Err(Error::NotSquare);
    }
    let mut out = edges.clone();
    symmetrize_in_place(&mut out);
    Ok(out)
}

/// Collapses repeated pairs to one occurrence (`t(A) = 1(A > 0)`) and sorts
/// the result lexicographically.
pub fn threshold(edges: &EdgeList) -> EdgeList {
    let mut out = edges.clone();
    threshold_in_place(&mut out);
    out
}

/// Deletes every `(i, i)` edge.
///
/// Applied to a raw Poisson multigraph this lowers the expected edge count
/// by `Σᵢ λᵢᵢ`. The off-diagonal cells keep their independent `Poisson(λᵢⱼ)`
/// counts, so the result has the same law as sampling with
/// `allow_self_loops = false`, though not the same edges for a given seed.
pub fn strip_self_loops(edges: &EdgeList) -> Result<EdgeList> {
    if !edges.is_square() {
        return Err(Error::NotSquare);
    }
    let kept = edges.edges().iter().copied().filter(|(i, j)| i != j).collect();
    Ok(EdgeList::from_parts(edges.n(), edges.d(), edges.is_directed(), kept))
}

pub(crate) fn symmetrize_in_place(graph: &mut EdgeList) {
    debug_assert!(graph.is_square());
    for e in graph.edges_mut() {
        if e.0 > e.1 {
            *e = (e.1, e.0);
        }
    }
    graph.set_directed(false);
}

pub(crate) fn threshold_in_place(graph: &mut EdgeList) {
    let edges = graph.edges_mut();
    edges.sort_unstable();
    edges.dedup();
}
