//! The four reflections of a controlled complex.

use std::collections::BTreeSet;

use crate::cell::SquareCell;
use crate::complex::{Complex, OracleKind, Reflector, Structure, SubgraphMap};
use crate::graph::{EdgeId, Graph, VertexId};
use crate::route::Route;

/// The generated d-space: every vertex is flexible and a route is
/// controlled when its walk splits into restrictions of controlled routes.
pub fn dhat(x: &Complex) -> Complex {
    if x.kind() == OracleKind::Reflected(Reflector::Dhat) {
        return x.clone();
    }
    wrap(x, Reflector::Dhat)
}

/// The generated preflexible space: the same flexible vertices, and every
/// route of the generated d-space between them.
pub fn pf(x: &Complex) -> Complex {
    if x.kind() == OracleKind::Reflected(Reflector::Pf) {
        return x.clone();
    }
    wrap(x, Reflector::Pf)
}

/// The least structure containing `x` that is closed under removing pauses
/// at the two ends of a controlled route.
pub fn bf(x: &Complex) -> Complex {
    if x.kind() == OracleKind::Reflected(Reflector::Bf) {
        return x.clone();
    }
    if let Some(generators) = x.generators() {
        let mut all: BTreeSet<Route> = BTreeSet::new();
        for g in generators {
            for stripped in border_variants(g) {
                all.insert(stripped);
            }
        }
        let kind = x.kind();
        let c = Complex::generated_with_kind(x.graph().clone(), all.into_iter().collect(), x.cells().to_vec(), kind)
            .expect("stripped generators stay in the graph");
        return match x.name() {
            Some(n) => c.with_name(n),
            None => c,
        };
    }
    wrap(x, Reflector::Bf)
}

/// The flexible part: the subgraph on flexible vertices, with the routes of
/// `x` all of whose restrictions are controlled.
pub fn fl(x: &Complex) -> Complex {
    if x.kind() == OracleKind::Reflected(Reflector::Fl) {
        return x.clone();
    }
    let g = x.graph();
    let mut sub = Graph::new();
    let mut vertex_to_inner = Vec::new();
    let mut vertex_from_inner = vec![None; g.vertex_count()];
    for v in g.vertices().filter(|&v| x.is_flexible(v)) {
        let id = sub.add_vertex(g.vertex_name(v)).expect("names are unique");
        vertex_from_inner[v.index()] = Some(id);
        vertex_to_inner.push(v);
    }
    let mut edge_to_inner = Vec::new();
    let mut edge_from_inner = vec![None; g.edge_count()];
    for e in g.edge_ids() {
        if let (Some(s), Some(d)) = (vertex_from_inner[g.src(e).index()], vertex_from_inner[g.dst(e).index()]) {
            let id = sub.add_edge(g.edge_name(e), s, d).expect("names are unique");
            edge_from_inner[e.index()] = Some(id);
            edge_to_inner.push(e);
        }
    }
    let map_word = |w: &[EdgeId]| w.iter().map(|e| edge_from_inner[e.index()]).collect::<Option<Vec<_>>>();
    let cells = x
        .cells()
        .iter()
        .filter_map(|c| {
            let start = vertex_from_inner[c.start().index()]?;
            let end = vertex_from_inner[c.end().index()]?;
            Some(SquareCell::from_parts(start, end, map_word(c.left())?, map_word(c.right())?))
        })
        .collect();
    Complex::derived(
        sub,
        cells,
        Structure::Reflected {
            reflector: Reflector::Fl,
            inner: x.clone(),
            subgraph: Some(SubgraphMap { vertex_to_inner, edge_to_inner }),
        },
    )
}

/// Vertex of the flexible part corresponding to `v`, if `v` is flexible.
pub fn fl_vertex(x: &Complex, v: VertexId) -> Option<VertexId> {
    x.is_flexible(v).then(|| VertexId(x.graph().vertices().filter(|&u| u < v && x.is_flexible(u)).count() as u32))
}

pub fn reflect(x: &Complex, reflector: Reflector) -> Complex {
    match reflector {
        Reflector::Dhat => dhat(x),
        Reflector::Fl => fl(x),
        Reflector::Pf => pf(x),
        Reflector::Bf => bf(x),
    }
}

/// `g` with each subset of its end pauses removed.
pub(crate) fn border_variants(g: &Route) -> Vec<Route> {
    let mut out = vec![g.clone()];
    let ends: Vec<usize> = [0, g.len()].into_iter().filter(|&p| g.has_dwell(p)).collect::<BTreeSet<_>>().into_iter().collect();
    for mask in 1..(1u32 << ends.len()) {
        let mut dwells = g.dwells().clone();
        for (i, p) in ends.iter().enumerate() {
            if mask >> i & 1 == 1 {
                dwells.remove(p);
            }
        }
        out.push(g.with_dwells(dwells).expect("removing pauses keeps positions in range"));
    }
    out
}

fn wrap(x: &Complex, reflector: Reflector) -> Complex {
    Complex::derived(
        x.graph().clone(),
        x.cells().to_vec(),
        Structure::Reflected { reflector, inner: x.clone(), subgraph: None },
    )
}
