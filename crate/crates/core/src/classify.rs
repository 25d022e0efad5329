//! Classification predicates: flexibility, path support, preflexibility,
//! border flexibility and the middle-restriction property.

use std::collections::BTreeSet;

use crate::complex::Complex;
use crate::enumerate::{controlled_routes, walks_from};
use crate::graph::{EdgeId, VertexId};
use crate::reflect::{border_variants, dhat};
use crate::route::Route;

/// Outcome of a predicate. `bound` is set when a positive answer was only
/// confirmed up to that route length; refutations are always exact.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub holds: bool,
    pub witness: Option<Route>,
    pub bound: Option<usize>,
}

impl Verdict {
    fn exact(holds: bool, witness: Option<Route>) -> Self {
        Verdict { holds, witness, bound: None }
    }

    fn bounded(bound: usize) -> Self {
        Verdict { holds: true, witness: None, bound: Some(bound) }
    }

    pub fn is_exact(&self) -> bool {
        self.bound.is_none()
    }
}

/// Whether every restriction of `r` is controlled.
pub fn is_flexible_route(x: &Complex, r: &Route) -> bool {
    let n = r.len();
    (0..=n).all(|p| (p..=n).all(|q| x.is_controlled(&r.span(p, q))))
}

/// A complex is flexible when all its vertices are flexible and all its
/// controlled routes are flexible. Exact for finitely presented complexes.
pub fn is_flexible_space(x: &Complex, bound: usize) -> Verdict {
    if let Some(v) = x.graph().vertices().find(|&v| !x.is_flexible(v)) {
        return Verdict::exact(false, Some(Route::constant(v)));
    }
    if let Some(generators) = x.generators() {
        let bad = generators.iter().find(|g| !is_flexible_route(x, g)).cloned();
        return Verdict::exact(bad.is_none(), bad);
    }
    match controlled_routes(x, bound).into_iter().find(|r| !is_flexible_route(x, r)) {
        Some(r) => Verdict::exact(false, Some(r)),
        None => Verdict::bounded(bound),
    }
}

/// Vertices and edges visited by some controlled route.
pub fn path_support(x: &Complex) -> (BTreeSet<VertexId>, BTreeSet<EdgeId>) {
    let g = x.graph();
    let vertices = g.vertices().filter(|&v| x.is_restriction(&Route::constant(v))).collect();
    let edges = g
        .edge_ids()
        .filter(|&e| {
            let r = Route::path(g, g.src(e), vec![e]).expect("single edges are routes");
            x.is_restriction(&r)
        })
        .collect();
    (vertices, edges)
}

/// Whether the path support is the whole graph. The witness, if any, is a
/// constant route at a missing vertex or a single-edge route on a missing
/// edge.
pub fn has_total_path_support(x: &Complex) -> Verdict {
    let g = x.graph();
    let (vs, es) = path_support(x);
    if let Some(v) = g.vertices().find(|v| !vs.contains(v)) {
        return Verdict::exact(false, Some(Route::constant(v)));
    }
    if let Some(e) = g.edge_ids().find(|e| !es.contains(e)) {
        return Verdict::exact(false, Some(Route::path(g, g.src(e), vec![e]).expect("single edges are routes")));
    }
    Verdict::exact(true, None)
}

/// Routes of the generated d-space between flexible vertices, pause-free,
/// of length 1 to `bound`.
pub(crate) fn dhat_words_between_flexible(x: &Complex, bound: usize) -> Vec<Route> {
    let d = dhat(x);
    let mut out = Vec::new();
    for v in x.flexible_vertices() {
        for w in walks_from(x.graph(), v, bound, |w| d.is_controlled(w)) {
            if !w.is_constant() && x.is_flexible(w.end()) {
                out.push(w);
            }
        }
    }
    out
}

/// Whether every route of the generated d-space between flexible vertices
/// is already controlled. Confirmed up to `bound`.
pub fn is_preflexible(x: &Complex, bound: usize) -> Verdict {
    match dhat_words_between_flexible(x, bound).into_iter().find(|w| !x.is_controlled(w)) {
        Some(w) => Verdict::exact(false, Some(w)),
        None => Verdict::bounded(bound),
    }
}

/// Whether removing pauses at the ends of a controlled route keeps it
/// controlled. Exact for finitely presented complexes; the witness is the
/// stripped route that fails.
pub fn is_border_flexible(x: &Complex, bound: usize) -> Verdict {
    let candidates: Vec<Route> = match x.generators() {
        Some(gs) => gs.to_vec(),
        None => controlled_routes(x, bound),
    };
    for r in &candidates {
        for stripped in border_variants(r) {
            if !x.is_controlled(&stripped) {
                return Verdict::exact(false, Some(stripped));
            }
        }
    }
    if x.generators().is_some() {
        Verdict::exact(true, None)
    } else {
        Verdict::bounded(bound)
    }
}

/// Extension of a route of the generated d-space to a controlled route.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MiddleWitness {
    pub route: Route,
    pub before: Route,
    pub after: Route,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MiddleRestrictionReport {
    pub applicable: bool,
    pub witnesses: Vec<MiddleWitness>,
    pub counterexample: Option<Route>,
    pub bound: usize,
}

impl MiddleRestrictionReport {
    pub fn holds(&self) -> bool {
        self.applicable && self.counterexample.is_none()
    }
}

/// For a preflexible complex, every route `r` of the generated d-space sits
/// inside a controlled route `b' r b''` whose outer pieces are routes of
/// the generated d-space from and to flexible vertices. Checks every pause-free
/// `r` up to `bound` and every constant on the path support, searching
/// outer pieces up to `bound` each.
pub fn check_middle_restriction(x: &Complex, bound: usize) -> MiddleRestrictionReport {
    if !is_preflexible(x, bound).holds {
        return MiddleRestrictionReport { applicable: false, witnesses: Vec::new(), counterexample: None, bound };
    }
    let d = dhat(x);
    let g = x.graph();
    let (support, _) = path_support(x);
    let mut targets: Vec<Route> = support.iter().map(|&v| Route::constant(v)).collect();
    for v in g.vertices() {
        targets.extend(walks_from(g, v, bound, |w| d.is_controlled(w)).into_iter().filter(|w| !w.is_constant()));
    }
    let mut witnesses = Vec::new();
    for r in targets {
        match middle_witness(x, &d, &r, bound) {
            Some(w) => witnesses.push(w),
            None => {
                return MiddleRestrictionReport { applicable: true, witnesses, counterexample: Some(r), bound };
            }
        }
    }
    MiddleRestrictionReport { applicable: true, witnesses, counterexample: None, bound }
}

fn middle_witness(x: &Complex, d: &Complex, r: &Route, bound: usize) -> Option<MiddleWitness> {
    let g = x.graph();
    let mut befores: Vec<Route> = Vec::new();
    for v in g.vertices().filter(|&v| x.is_flexible(v)) {
        befores.extend(walks_from(g, v, bound, |w| d.is_controlled(w)).into_iter().filter(|w| w.end() == r.start()));
    }
    befores.sort_by_key(|b| b.len());
    let afters: Vec<Route> = walks_from(g, r.end(), bound, |w| d.is_controlled(w))
        .into_iter()
        .filter(|w| x.is_flexible(w.end()))
        .collect();
    let mut best: Option<MiddleWitness> = None;
    for b1 in &befores {
        for b2 in &afters {
            if let Some(w) = &best {
                if b1.len() + b2.len() >= w.before.len() + w.after.len() {
                    continue;
                }
            }
            let mut edges = b1.edges().to_vec();
            edges.extend_from_slice(r.edges());
            edges.extend_from_slice(b2.edges());
            let joined = Route::path(g, b1.start(), edges).expect("pieces chain");
            if x.is_controlled(&joined) {
                best = Some(MiddleWitness { route: r.clone(), before: b1.clone(), after: b2.clone() });
            }
        }
    }
    best
}
