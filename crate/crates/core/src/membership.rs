//! Membership procedures shared by the complex variants.

use std::collections::BTreeSet;

use crate::complex::{Complex, SubgraphMap};
use crate::graph::{EdgeId, Graph, VertexId};
use crate::route::Route;

/// Interval DP: `r` splits at cuts into segments, each carrying the edges of
/// a nonconstant generator and at least that generator's pauses.
pub(crate) fn generated(generators: &[Route], r: &Route) -> bool {
    let n = r.len();
    let mut reach = vec![false; n + 1];
    reach[0] = true;
    for i in 0..n {
        if !reach[i] {
            continue;
        }
        for g in generators {
            let len = g.len();
            if len == 0 || i + len > n || reach[i + len] {
                continue;
            }
            if r.edges()[i..i + len] == *g.edges() && g.dwells().iter().all(|d| r.has_dwell(i + d)) {
                reach[i + len] = true;
            }
        }
    }
    reach[n]
}

/// Restriction test for finitely presented complexes. A span of a
/// concatenation of generators is a suffix of one generator, then whole
/// generators, then a prefix of another (or an infix of a single one).
/// Generator pauses landing strictly inside the span must be allowed by
/// `piece`.
pub(crate) fn generated_restriction(generators: &[Route], piece: &Route) -> bool {
    let w = piece.edges();
    let n = w.len();
    if n == 0 {
        let v = piece.start();
        return generators.iter().any(|g| g.vertices().contains(&v));
    }
    // pause at generator position `gp`, where the generator starts at span
    // position `offset` (possibly negative), is allowed
    let allowed = |gp: usize, offset: isize| {
        let sp = gp as isize + offset;
        sp <= 0 || sp >= n as isize || piece.has_dwell(sp as usize)
    };
    for g in generators {
        let len = g.len();
        if len < n {
            continue;
        }
        for o in 0..=len - n {
            if g.edges()[o..o + n] == *w && g.dwells().iter().all(|&d| allowed(d, -(o as isize))) {
                return true;
            }
        }
    }
    // junction[i]: the span up to interior position i ends exactly where a
    // generator ends
    let mut junction = vec![false; n];
    for i in 1..n {
        for g in generators {
            let len = g.len();
            if len >= i
                && g.edges()[len - i..] == w[..i]
                && g.dwells().iter().all(|&d| allowed(d, i as isize - len as isize))
            {
                junction[i] = true;
                break;
            }
        }
    }
    for i in 1..n {
        if !junction[i] {
            continue;
        }
        for g in generators {
            let len = g.len();
            if len == 0 {
                continue;
            }
            let k = len.min(n - i);
            if g.edges()[..k] != w[i..i + k] || !g.dwells().iter().all(|&d| allowed(d, i as isize)) {
                continue;
            }
            if i + len >= n {
                return true;
            }
            junction[i + len] = true;
        }
    }
    false
}

/// Splits a product route into its two factor routes. A step in the other
/// factor, like a pause, projects to a pause.
pub(crate) fn project(x: &Complex, y: &Complex, r: &Route) -> (Route, Route) {
    let ny = y.graph().vertex_count() as u32;
    let ex = x.graph().edge_count() as u32;
    let ey = y.graph().edge_count() as u32;
    let x0 = VertexId(r.start().0 / ny);
    let y0 = VertexId(r.start().0 % ny);
    let mut xv = vec![x0];
    let mut yv = vec![y0];
    let mut xe = Vec::new();
    let mut ye = Vec::new();
    let mut xd = BTreeSet::new();
    let mut yd = BTreeSet::new();
    for (i, &e) in r.edges().iter().enumerate() {
        if r.has_dwell(i) {
            xd.insert(xe.len());
            yd.insert(ye.len());
        }
        if e.0 < ex * ny {
            let xedge = EdgeId(e.0 / ny);
            yd.insert(ye.len());
            xe.push(xedge);
            xv.push(x.graph().dst(xedge));
        } else {
            let yedge = EdgeId((e.0 - ex * ny) % ey);
            xd.insert(xe.len());
            ye.push(yedge);
            yv.push(y.graph().dst(yedge));
        }
    }
    if r.has_dwell(r.len()) {
        xd.insert(xe.len());
        yd.insert(ye.len());
    }
    (Route::from_parts(xv, xe, xd), Route::from_parts(yv, ye, yd))
}

/// For a sum, the side `r` lives on, with ids translated into that summand.
pub(crate) fn sum_side(x: &Complex, r: &Route) -> std::result::Result<Route, Route> {
    let nx = x.graph().vertex_count() as u32;
    let ex = x.graph().edge_count() as u32;
    if r.start().0 < nx {
        Ok(r.clone())
    } else {
        let vertices = r.vertices().iter().map(|v| VertexId(v.0 - nx)).collect();
        let edges = r.edges().iter().map(|e| EdgeId(e.0 - ex)).collect();
        Err(Route::from_parts(vertices, edges, r.dwells().clone()))
    }
}

pub(crate) fn to_inner(map: &SubgraphMap, r: &Route) -> Route {
    Route::from_parts(
        r.vertices().iter().map(|v| map.vertex_to_inner[v.index()]).collect(),
        r.edges().iter().map(|e| map.edge_to_inner[e.index()]).collect(),
        r.dwells().clone(),
    )
}

/// Whether the edge word of `r` splits into pieces that are each a
/// pause-free restriction of `inner`. Pauses of `r` are ignored.
#[allow(clippy::needless_range_loop)]
pub(crate) fn decomposes_into_restrictions(inner: &Complex, r: &Route) -> bool {
    let n = r.len();
    let plain = r.without_dwells();
    let mut reach = vec![false; n + 1];
    reach[0] = true;
    for i in 0..n {
        if !reach[i] {
            continue;
        }
        // sub-spans of restrictions are restrictions
        for j in i + 1..=n {
            if !inner.is_restriction(&plain.span(i, j)) {
                break;
            }
            reach[j] = true;
        }
        if reach[n] {
            return true;
        }
    }
    reach[n]
}

/// Membership in the closure of `inner` under removing end pauses: the
/// route splits at cuts into segments that become controlled in `inner`
/// once paused at both ends.
#[allow(clippy::needless_range_loop)]
pub(crate) fn border_closure(inner: &Complex, r: &Route) -> bool {
    let n = r.len();
    let mut reach = vec![false; n + 1];
    reach[0] = true;
    for i in 0..n {
        if !reach[i] {
            continue;
        }
        for j in i + 1..=n {
            if reach[j] {
                continue;
            }
            let seg = r.span(i, j);
            let mut dwells = seg.dwells().clone();
            dwells.insert(0);
            dwells.insert(seg.len());
            let seg = seg.with_dwells(dwells).expect("span positions are in range");
            if inner.is_controlled(&seg) {
                reach[j] = true;
            }
        }
    }
    reach[n]
}

/// Searches for a controlled route of `c` extending `piece` by at most the
/// complex's extension horizon on either side.
pub(crate) fn bounded_restriction_search(c: &Complex, piece: &Route) -> bool {
    let h = c.extension_horizon();
    let g = c.graph();
    let lefts = walks(g, piece.start(), h, true);
    let rights = walks(g, piece.end(), h, false);
    for left in &lefts {
        for right in &rights {
            let mut vertices: Vec<VertexId> = Vec::new();
            let mut edges: Vec<EdgeId> = Vec::new();
            let mut at = piece.start();
            for &e in left.iter().rev() {
                vertices.push(g.src(e));
                edges.push(e);
                at = g.dst(e);
            }
            debug_assert_eq!(at, piece.start());
            let offset = edges.len();
            vertices.extend_from_slice(piece.vertices());
            edges.extend_from_slice(piece.edges());
            for &e in right {
                edges.push(e);
                vertices.push(g.dst(e));
            }
            let total = edges.len();
            let mut dwells: BTreeSet<usize> = (0..=offset).collect();
            dwells.extend(offset + piece.len()..=total);
            dwells.extend(piece.dwells().iter().map(|d| d + offset));
            let candidate = Route::from_parts(vertices, edges, dwells);
            if c.is_controlled(&candidate) {
                return true;
            }
        }
    }
    false
}

/// Walks of length at most `max` leaving `from` (or, with `backward`,
/// arriving at it, listed from `from` outwards).
pub(crate) fn walks(g: &Graph, from: VertexId, max: usize, backward: bool) -> Vec<Vec<EdgeId>> {
    let mut out = vec![Vec::new()];
    let mut frontier = vec![(from, Vec::new())];
    for _ in 0..max {
        let mut next = Vec::new();
        for (v, word) in &frontier {
            let adjacent = if backward { g.in_edges(*v) } else { g.out_edges(*v) };
            for &e in adjacent {
                let mut w: Vec<EdgeId> = word.clone();
                w.push(e);
                let u = if backward { g.src(e) } else { g.dst(e) };
                out.push(w.clone());
                next.push((u, w));
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    out
}
