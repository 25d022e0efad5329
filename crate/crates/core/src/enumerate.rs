//! Bounded enumeration of walks and pause decorations.

use std::collections::BTreeSet;

use crate::complex::Complex;
use crate::graph::{Graph, VertexId};
use crate::route::Route;

/// Pause-free walks from `start` of length at most `max`, shortest first and
/// then by edge ids. A walk is extended only while `keep` accepts it; the
/// constant walk is always produced.
pub fn walks_from(graph: &Graph, start: VertexId, max: usize, mut keep: impl FnMut(&Route) -> bool) -> Vec<Route> {
    let mut out = vec![Route::constant(start)];
    let mut layer = vec![Route::constant(start)];
    for _ in 0..max {
        let mut next = Vec::new();
        for r in &layer {
            for &e in graph.out_edges(r.end()) {
                let mut edges = r.edges().to_vec();
                edges.push(e);
                let mut vertices = r.vertices().to_vec();
                vertices.push(graph.dst(e));
                let w = Route::from_parts(vertices, edges, BTreeSet::new());
                if keep(&w) {
                    next.push(w);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        next.sort();
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Nonconstant walks of `x` of length at most `max` that occur inside some
/// controlled route, possibly paused.
pub fn restriction_words(x: &Complex, max: usize) -> Vec<Route> {
    let mut out = Vec::new();
    for v in x.graph().vertices() {
        out.extend(
            walks_from(x.graph(), v, max, |w| x.is_restriction(&w.with_all_dwells()))
                .into_iter()
                .filter(|w| !w.is_constant()),
        );
    }
    out
}

/// Every way of pausing the walk of `r`.
pub fn decorations(r: &Route) -> impl Iterator<Item = Route> + '_ {
    let n = r.len();
    let count: u64 = if n == 0 { 1 } else { 1u64 << (n + 1) };
    (0..count).map(move |mask| {
        let dwells = (0..=n).filter(|i| mask >> i & 1 == 1).collect();
        r.with_dwells(dwells).expect("positions are in range")
    })
}

/// Controlled routes of `x` of length at most `max`, every decoration
/// included. Only feasible for small bounds.
pub fn controlled_routes(x: &Complex, max: usize) -> Vec<Route> {
    let mut out = Vec::new();
    for v in x.flexible_vertices() {
        out.push(Route::constant(v));
    }
    for w in restriction_words(x, max) {
        if !x.is_flexible(w.start()) || !x.is_flexible(w.end()) {
            continue;
        }
        let max_decorated = w.with_all_dwells();
        if !x.is_controlled(&max_decorated) {
            continue;
        }
        out.extend(decorations(&w).filter(|d| x.is_controlled(d)));
    }
    out
}

/// All routes of `x` (controlled or not) of length at most `max`, every
/// decoration included.
pub fn all_routes(x: &Complex, max: usize) -> Vec<Route> {
    let mut out = Vec::new();
    for v in x.graph().vertices() {
        for w in walks_from(x.graph(), v, max, |_| true) {
            out.extend(decorations(&w));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;

    #[test]
    fn walks_are_ordered_by_length() {
        let mut g = Graph::new();
        let a = g.add_vertex("a").unwrap();
        g.add_edge("l", a, a).unwrap();
        let ws = walks_from(&g, a, 3, |_| true);
        assert_eq!(ws.iter().map(Route::len).collect::<Vec<_>>(), vec![0, 1, 2, 3]);
        assert_eq!(decorations(&ws[2]).count(), 8);
        assert_eq!(decorations(&ws[0]).count(), 1);
    }
}
