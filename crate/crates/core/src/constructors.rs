//! Standard complexes and combinators.

use std::collections::{BTreeMap, BTreeSet};

use crate::cell::SquareCell;
use crate::classify::is_flexible_route;
use crate::complex::{Complex, OracleKind, Structure};
use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph, VertexId};
use crate::route::Route;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StandardSpaceKind {
    /// One edge `e: 0 -> 1` traversed in one go.
    IntervalC,
    /// Two edges through a flexible midpoint `m`.
    IntervalJ,
    /// One edge, with a mandatory pause before leaving `0`.
    IntervalDelayedMinus,
    /// One edge, with a mandatory pause on arrival at `1`.
    IntervalDelayedPlus,
    /// Two edges through a midpoint where routes must pause but cannot stop.
    IntervalMiddleDelay,
    /// Edges `e: 0 -> 1` and `er: 1 -> 0`.
    IntervalReversible,
    /// Vertices `-m..=m`, one edge `k -> k+1` for each step.
    LineC(i64),
    /// Cycle on `n` flexible vertices.
    CircleNStop(usize),
    /// `k` isolated flexible vertices.
    Discrete(usize),
}

impl StandardSpaceKind {
    pub fn name(&self) -> String {
        match self {
            Self::IntervalC => "interval".into(),
            Self::IntervalJ => "interval-j".into(),
            Self::IntervalDelayedMinus => "delayed-minus".into(),
            Self::IntervalDelayedPlus => "delayed-plus".into(),
            Self::IntervalMiddleDelay => "middle-delay".into(),
            Self::IntervalReversible => "reversible".into(),
            Self::LineC(m) => format!("line({m})"),
            Self::CircleNStop(n) => format!("circle({n})"),
            Self::Discrete(k) => format!("discrete({k})"),
        }
    }
}

pub fn std_space(kind: StandardSpaceKind) -> Result<Complex> {
    use StandardSpaceKind as K;
    let mut g = Graph::new();
    let mut gens = Vec::new();
    match kind {
        K::IntervalC | K::IntervalDelayedMinus | K::IntervalDelayedPlus => {
            let a = g.add_vertex("0")?;
            let b = g.add_vertex("1")?;
            let e = g.add_edge("e", a, b)?;
            let dwells: &[usize] = match kind {
                K::IntervalDelayedMinus => &[0],
                K::IntervalDelayedPlus => &[1],
                _ => &[],
            };
            gens.push(Route::new(&g, a, vec![e], dwells.iter().copied())?);
        }
        K::IntervalJ | K::IntervalMiddleDelay => {
            let a = g.add_vertex("0")?;
            let m = g.add_vertex("m")?;
            let b = g.add_vertex("1")?;
            let e1 = g.add_edge("e1", a, m)?;
            let e2 = g.add_edge("e2", m, b)?;
            if kind == K::IntervalJ {
                gens.push(Route::path(&g, a, vec![e1])?);
                gens.push(Route::path(&g, m, vec![e2])?);
            } else {
                gens.push(Route::new(&g, a, vec![e1, e2], [1])?);
            }
        }
        K::IntervalReversible => {
            let a = g.add_vertex("0")?;
            let b = g.add_vertex("1")?;
            let e = g.add_edge("e", a, b)?;
            let er = g.add_edge("er", b, a)?;
            gens.push(Route::path(&g, a, vec![e])?);
            gens.push(Route::path(&g, b, vec![er])?);
        }
        K::LineC(m) => {
            if m <= 0 {
                return Err(Error::InvalidParameter(format!("line window must be positive, got {m}")));
            }
            return line_segment(-m, m).map(|c| c.with_name(kind.name()));
        }
        K::CircleNStop(n) => {
            if n == 0 {
                return Err(Error::InvalidParameter("a circle needs at least one stop".into()));
            }
            let vs: Vec<VertexId> = (0..n).map(|i| g.add_vertex(format!("x{i}"))).collect::<Result<_>>()?;
            for i in 0..n {
                let e = g.add_edge(format!("a{i}"), vs[i], vs[(i + 1) % n])?;
                gens.push(Route::path(&g, vs[i], vec![e])?);
            }
        }
        K::Discrete(k) => {
            if k == 0 {
                return Err(Error::InvalidParameter("a discrete complex needs at least one point".into()));
            }
            for i in 0..k {
                let v = g.add_vertex(i.to_string())?;
                gens.push(Route::constant(v));
            }
        }
    }
    Ok(Complex::generated(g, gens, Vec::new())?.with_name(kind.name()))
}

/// The line on `lo..=hi` with one controlled step per edge. Edge `e{k}`
/// runs from `k` to `k+1`.
pub fn line_segment(lo: i64, hi: i64) -> Result<Complex> {
    if lo >= hi {
        return Err(Error::InvalidParameter(format!("empty line segment {lo}..{hi}")));
    }
    let mut g = Graph::new();
    let vs: Vec<VertexId> = (lo..=hi).map(|k| g.add_vertex(k.to_string())).collect::<Result<_>>()?;
    let mut gens = Vec::new();
    for (i, k) in (lo..hi).enumerate() {
        let e = g.add_edge(format!("e{k}"), vs[i], vs[i + 1])?;
        gens.push(Route::path(&g, vs[i], vec![e])?);
    }
    Ok(Complex::generated(g, gens, Vec::new())?.with_name(format!("line[{lo},{hi}]")))
}

/// An interval subdivided into `k` edges `e1..ek` that must be crossed in
/// one go: only the two ends are flexible.
pub fn one_jump_interval(k: usize) -> Result<Complex> {
    if k == 0 {
        return Err(Error::InvalidParameter("need at least one edge".into()));
    }
    let mut g = Graph::new();
    let vs: Vec<VertexId> = (0..=k).map(|i| g.add_vertex(i.to_string())).collect::<Result<_>>()?;
    let es: Vec<EdgeId> = (0..k).map(|i| g.add_edge(format!("e{}", i + 1), vs[i], vs[i + 1])).collect::<Result<_>>()?;
    let r = Route::path(&g, vs[0], es)?;
    Ok(Complex::generated(g, vec![r], Vec::new())?.with_name(format!("one-jump({k})")))
}

/// A circle subdivided into `k` edges whose only controlled loop goes all
/// the way round from `x0`.
pub fn one_stop_circle(k: usize) -> Result<Complex> {
    if k == 0 {
        return Err(Error::InvalidParameter("need at least one edge".into()));
    }
    let mut g = Graph::new();
    let vs: Vec<VertexId> = (0..k).map(|i| g.add_vertex(format!("x{i}"))).collect::<Result<_>>()?;
    let es: Vec<EdgeId> = (0..k).map(|i| g.add_edge(format!("a{i}"), vs[i], vs[(i + 1) % k])).collect::<Result<_>>()?;
    let r = Route::path(&g, vs[0], es)?;
    Ok(Complex::generated(g, vec![r], Vec::new())?.with_name(format!("one-stop-circle({k})")))
}

/// A square with two crossing diagonals through a centre `m`. Controlled
/// routes follow a whole diagonal; the four sides are present in the graph
/// but carry no controlled route.
pub fn diagonal_square() -> Result<Complex> {
    Complex::builder()
        .name("diagonal-square")
        .vertices(&["00", "10", "01", "11", "m"])?
        .edge("a1", "00", "m")?
        .edge("a2", "m", "11")?
        .edge("b1", "01", "m")?
        .edge("b2", "m", "10")?
        .edge("s0", "00", "10")?
        .edge("s1", "01", "11")?
        .edge("t0", "00", "01")?
        .edge("t1", "10", "11")?
        .generator("00", &["a1", "a2"], &[])
        .generator("01", &["b1", "b2"], &[])
        .build()
}

/// Two-edge reversible interval whose steps must pause before leaving, so
/// neither step is flexible.
pub fn delayed_reversible_interval() -> Result<Complex> {
    Complex::builder()
        .name("delayed-reversible")
        .vertices(&["0", "1"])?
        .edge("e", "0", "1")?
        .edge("er", "1", "0")?
        .generator("0", &["e"], &[0])
        .generator("1", &["er"], &[0])
        .build()
}

impl Complex {
    pub fn builder() -> crate::complex::ComplexBuilder {
        crate::complex::ComplexBuilder::new()
    }
}

fn fresh_name(taken: &BTreeSet<String>, base: String) -> String {
    let mut name = base;
    while taken.contains(&name) {
        name.push('\'');
    }
    name
}

/// Product vertex for a pair of factor vertices.
pub fn product_vertex(y: &Complex, vx: VertexId, vy: VertexId) -> VertexId {
    VertexId(vx.0 * y.graph().vertex_count() as u32 + vy.0)
}

/// Product edge moving in the first factor along `e` at `vy`.
pub fn product_left_edge(y: &Complex, e: EdgeId, vy: VertexId) -> EdgeId {
    EdgeId(e.0 * y.graph().vertex_count() as u32 + vy.0)
}

/// Product edge moving in the second factor along `f` at `vx`.
pub fn product_right_edge(x: &Complex, y: &Complex, vx: VertexId, f: EdgeId) -> EdgeId {
    let ny = y.graph().vertex_count() as u32;
    let ex = x.graph().edge_count() as u32;
    let ey = y.graph().edge_count() as u32;
    EdgeId(ex * ny + vx.0 * ey + f.0)
}

/// The product complex. A route is controlled when both of its projections
/// are; steps in one factor project to pauses in the other.
pub fn product(x: &Complex, y: &Complex) -> Complex {
    let (gx, gy) = (x.graph(), y.graph());
    let mut g = Graph::new();
    for vx in gx.vertices() {
        for vy in gy.vertices() {
            g.add_vertex(format!("({},{})", gx.vertex_name(vx), gy.vertex_name(vy))).expect("pairs are distinct");
        }
    }
    let mut taken: BTreeSet<String> = BTreeSet::new();
    for e in gx.edge_ids() {
        for vy in gy.vertices() {
            let name = fresh_name(&taken, format!("({},{})", gx.edge_name(e), gy.vertex_name(vy)));
            taken.insert(name.clone());
            g.add_edge(name, product_vertex(y, gx.src(e), vy), product_vertex(y, gx.dst(e), vy))
                .expect("fresh names");
        }
    }
    for vx in gx.vertices() {
        for f in gy.edge_ids() {
            let name = fresh_name(&taken, format!("({},{})", gx.vertex_name(vx), gy.edge_name(f)));
            taken.insert(name.clone());
            g.add_edge(name, product_vertex(y, vx, gy.src(f)), product_vertex(y, vx, gy.dst(f)))
                .expect("fresh names");
        }
    }
    let mut cells = Vec::new();
    for e in gx.edge_ids() {
        for f in gy.edge_ids() {
            let (s, t) = (gx.src(e), gx.dst(e));
            let (u, w) = (gy.src(f), gy.dst(f));
            cells.push(SquareCell::from_parts(
                product_vertex(y, s, u),
                product_vertex(y, t, w),
                vec![product_left_edge(y, e, u), product_right_edge(x, y, t, f)],
                vec![product_right_edge(x, y, s, f), product_left_edge(y, e, w)],
            ));
        }
    }
    for c in x.cells() {
        for vy in gy.vertices() {
            let map = |w: &[EdgeId]| w.iter().map(|&e| product_left_edge(y, e, vy)).collect();
            cells.push(SquareCell::from_parts(
                product_vertex(y, c.start(), vy),
                product_vertex(y, c.end(), vy),
                map(c.left()),
                map(c.right()),
            ));
        }
    }
    for c in y.cells() {
        for vx in gx.vertices() {
            let map = |w: &[EdgeId]| w.iter().map(|&f| product_right_edge(x, y, vx, f)).collect();
            cells.push(SquareCell::from_parts(
                product_vertex(y, vx, c.start()),
                product_vertex(y, vx, c.end()),
                map(c.left()),
                map(c.right()),
            ));
        }
    }
    Complex::derived(g, cells, Structure::Product(x.clone(), y.clone()))
}

/// Disjoint union. Vertex and edge names are prefixed with `L:` and `R:`.
pub fn sum(x: &Complex, y: &Complex) -> Complex {
    let (gx, gy) = (x.graph(), y.graph());
    let mut g = Graph::new();
    for v in gx.vertices() {
        g.add_vertex(format!("L:{}", gx.vertex_name(v))).expect("tagged names are distinct");
    }
    for v in gy.vertices() {
        g.add_vertex(format!("R:{}", gy.vertex_name(v))).expect("tagged names are distinct");
    }
    let nx = gx.vertex_count() as u32;
    let ex = gx.edge_count() as u32;
    for e in gx.edge_ids() {
        g.add_edge(format!("L:{}", gx.edge_name(e)), gx.src(e), gx.dst(e)).expect("tagged names");
    }
    for e in gy.edge_ids() {
        g.add_edge(
            format!("R:{}", gy.edge_name(e)),
            VertexId(gy.src(e).0 + nx),
            VertexId(gy.dst(e).0 + nx),
        )
        .expect("tagged names");
    }
    let shift_cell = |c: &SquareCell| {
        SquareCell::from_parts(
            VertexId(c.start().0 + nx),
            VertexId(c.end().0 + nx),
            c.left().iter().map(|e| EdgeId(e.0 + ex)).collect(),
            c.right().iter().map(|e| EdgeId(e.0 + ex)).collect(),
        )
    };
    let shift_route = |r: &Route| {
        Route::from_parts(
            r.vertices().iter().map(|v| VertexId(v.0 + nx)).collect(),
            r.edges().iter().map(|e| EdgeId(e.0 + ex)).collect(),
            r.dwells().clone(),
        )
    };
    let mut cells: Vec<SquareCell> = x.cells().to_vec();
    cells.extend(y.cells().iter().map(shift_cell));
    if let (Some(gxs), Some(gys)) = (x.generators(), y.generators()) {
        let mut gens = gxs.to_vec();
        gens.extend(gys.iter().map(shift_route));
        return Complex::generated(g, gens, cells).expect("summands are well formed");
    }
    Complex::derived(g, cells, Structure::Sum(x.clone(), y.clone()))
}

/// The opposite complex: every edge reversed, routes read backwards.
pub fn opposite(x: &Complex) -> Complex {
    if let Structure::Opposite(inner) = x.structure() {
        return inner.clone();
    }
    let gx = x.graph();
    let mut g = Graph::new();
    for v in gx.vertices() {
        g.add_vertex(gx.vertex_name(v)).expect("names are unique");
    }
    for e in gx.edge_ids() {
        g.add_edge(gx.edge_name(e), gx.dst(e), gx.src(e)).expect("names are unique");
    }
    let cells: Vec<SquareCell> = x.cells().iter().map(SquareCell::reversed).collect();
    let named = |c: Complex| match x.name() {
        Some(n) if !n.starts_with("op(") => c.with_name(format!("op({n})")),
        Some(n) if n.ends_with(')') => c.with_name(n[3..n.len() - 1].to_string()),
        _ => c,
    };
    if let Some(gens) = x.generators() {
        let gens = gens.iter().map(Route::reversed).collect();
        return named(Complex::generated(g, gens, cells).expect("reversal preserves validity"));
    }
    named(Complex::derived(g, cells, Structure::Opposite(x.clone())))
}

/// The full substructure on flexible vertices `keep`: controlled routes of
/// `x` with both ends in `keep`.
pub fn full_substructure(x: &Complex, keep: &BTreeSet<VertexId>) -> Result<Complex> {
    for &v in keep {
        if !x.graph().contains_vertex(v) {
            return Err(Error::UnknownVertex(v.to_string()));
        }
        if !x.is_flexible(v) {
            return Err(Error::NotFlexible(x.graph().vertex_name(v).to_string()));
        }
    }
    Ok(Complex::derived(
        x.graph().clone(),
        x.cells().to_vec(),
        Structure::Restricted { inner: x.clone(), keep: keep.clone() },
    ))
}

/// Identification of vertices into blocks, optionally collapsing edges that
/// lie inside a block. Vertices in no block stay on their own.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct QuotientSpec {
    pub blocks: Vec<BTreeSet<VertexId>>,
    pub collapse: BTreeSet<EdgeId>,
}

impl QuotientSpec {
    pub fn by_names(x: &Complex, blocks: &[&[&str]], collapse: &[&str]) -> Result<QuotientSpec> {
        let blocks = blocks
            .iter()
            .map(|b| b.iter().map(|n| x.vertex(n)).collect::<Result<BTreeSet<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let collapse = collapse.iter().map(|n| x.edge(n)).collect::<Result<BTreeSet<_>>>()?;
        Ok(QuotientSpec { blocks, collapse })
    }
}

/// Quotient of a finitely presented complex. Traversals of collapsed edges
/// become pauses at the image vertex.
pub fn quotient(x: &Complex, spec: &QuotientSpec) -> Result<Complex> {
    let gens = x
        .generators()
        .ok_or_else(|| Error::Unsupported("quotients of derived complexes".into()))?;
    let gx = x.graph();
    let mut block_of: Vec<Option<usize>> = vec![None; gx.vertex_count()];
    for (i, b) in spec.blocks.iter().enumerate() {
        if b.is_empty() {
            return Err(Error::MalformedQuotient(format!("block {i} is empty")));
        }
        for &v in b {
            if !gx.contains_vertex(v) {
                return Err(Error::MalformedQuotient(format!("block {i} names unknown vertex {v}")));
            }
            if block_of[v.index()].is_some() {
                return Err(Error::MalformedQuotient(format!(
                    "vertex {} lies in two blocks",
                    gx.vertex_name(v)
                )));
            }
            block_of[v.index()] = Some(i);
        }
    }
    // every vertex gets a class; classes are ordered by their smallest member
    let mut members: BTreeMap<VertexId, Vec<VertexId>> = BTreeMap::new();
    let mut leader = vec![VertexId(0); gx.vertex_count()];
    for v in gx.vertices() {
        let lead = match block_of[v.index()] {
            Some(b) => *spec.blocks[b].iter().next().expect("blocks are nonempty"),
            None => v,
        };
        leader[v.index()] = lead;
        members.entry(lead).or_default().push(v);
    }
    let mut g = Graph::new();
    let mut image_of_leader: BTreeMap<VertexId, VertexId> = BTreeMap::new();
    for (lead, ms) in &members {
        let name = ms.iter().map(|&v| gx.vertex_name(v)).collect::<Vec<_>>().join("~");
        image_of_leader.insert(*lead, g.add_vertex(name)?);
    }
    let image = |v: VertexId| image_of_leader[&leader[v.index()]];
    let mut edge_image: Vec<Option<EdgeId>> = vec![None; gx.edge_count()];
    for e in gx.edge_ids() {
        if spec.collapse.contains(&e) {
            if image(gx.src(e)) != image(gx.dst(e)) {
                return Err(Error::MalformedQuotient(format!(
                    "collapsed edge {} joins different blocks",
                    gx.edge_name(e)
                )));
            }
            continue;
        }
        edge_image[e.index()] = Some(g.add_edge(gx.edge_name(e), image(gx.src(e)), image(gx.dst(e)))?);
    }
    for &e in &spec.collapse {
        if !gx.contains_edge(e) {
            return Err(Error::MalformedQuotient(format!("unknown collapsed edge {e}")));
        }
    }
    let mut new_gens = Vec::new();
    for r in gens {
        let mut vertices = vec![image(r.start())];
        let mut edges = Vec::new();
        let mut dwells = BTreeSet::new();
        for (i, &e) in r.edges().iter().enumerate() {
            if r.has_dwell(i) {
                dwells.insert(edges.len());
            }
            match edge_image[e.index()] {
                Some(f) => {
                    edges.push(f);
                    vertices.push(g.dst(f));
                }
                None => {
                    dwells.insert(edges.len());
                }
            }
        }
        if r.has_dwell(r.len()) {
            dwells.insert(edges.len());
        }
        new_gens.push(Route::from_parts(vertices, edges, dwells));
    }
    let mut cells = Vec::new();
    for c in x.cells() {
        let map = |w: &[EdgeId]| w.iter().filter_map(|e| edge_image[e.index()]).collect::<Vec<_>>();
        let (l, r) = (map(c.left()), map(c.right()));
        if l == r {
            continue;
        }
        cells.push(SquareCell::new(&g, image(c.start()), l, r)?);
    }
    let kind = OracleKind::QuotientImage;
    let q = Complex::generated_with_kind(g, new_gens, cells, kind)?;
    Ok(match x.name() {
        Some(n) => q.with_name(format!("{n}/~")),
        None => q,
    })
}

/// Partner of each edge: an edge running the other way with both
/// cancellation cells present.
fn partners(x: &Complex) -> Vec<Option<EdgeId>> {
    let g = x.graph();
    let cells: BTreeSet<(VertexId, Vec<EdgeId>, Vec<EdgeId>)> =
        x.cells().iter().map(|c| (c.start(), c.left().to_vec(), c.right().to_vec())).collect();
    let cancels = |a: EdgeId, b: EdgeId| {
        let s = g.src(a);
        cells.contains(&(s, vec![a, b], vec![])) || cells.contains(&(s, vec![], vec![a, b]))
    };
    let mut out = vec![None; g.edge_count()];
    for e in g.edge_ids() {
        if out[e.index()].is_some() {
            continue;
        }
        for f in g.edge_ids() {
            if f == e || out[f.index()].is_some() {
                continue;
            }
            if g.src(f) == g.dst(e) && g.dst(f) == g.src(e) && cancels(e, f) && cancels(f, e) {
                out[e.index()] = Some(f);
                out[f.index()] = Some(e);
                break;
            }
        }
    }
    out
}

/// Adds a reverse for every edge lacking one, makes every single step and
/// every vertex controlled, and records cancellation cells both ways.
pub fn symmetrize(x: &Complex) -> Complex {
    let gx = x.graph();
    let mut g = gx.clone();
    let mut partner = partners(x);
    let mut taken: BTreeSet<String> = gx.edge_ids().map(|e| gx.edge_name(e).to_string()).collect();
    for e in gx.edge_ids() {
        if partner[e.index()].is_none() {
            let name = fresh_name(&taken, format!("rev.{}", gx.edge_name(e)));
            taken.insert(name.clone());
            let r = g.add_edge(name, gx.dst(e), gx.src(e)).expect("fresh name");
            partner[e.index()] = Some(r);
            partner.push(Some(e));
        }
    }
    let partner: Vec<EdgeId> = partner.into_iter().map(|p| p.expect("every edge is paired")).collect();
    let mut cells: BTreeSet<SquareCell> = x.cells().iter().cloned().collect();
    for c in x.cells() {
        let rev = |w: &[EdgeId]| w.iter().rev().map(|e| partner[e.index()]).collect();
        cells.insert(SquareCell::from_parts(c.end(), c.start(), rev(c.left()), rev(c.right())));
    }
    for e in g.edge_ids() {
        cells.insert(SquareCell::from_parts(g.src(e), g.src(e), vec![e, partner[e.index()]], vec![]));
    }
    let mut gens: Vec<Route> = g.vertices().map(Route::constant).collect();
    gens.extend(g.edge_ids().map(|e| Route::path(&g, g.src(e), vec![e]).expect("single edges are routes")));
    let s = Complex::generated(g, gens, cells.into_iter().collect()).expect("symmetrization is well formed");
    match x.name() {
        Some(n) if n.starts_with("sym(") => s.with_name(n),
        Some(n) => s.with_name(format!("sym({n})")),
        None => s,
    }
}

/// Records that `e` and its reverse `er` cancel in both orders. Both single
/// steps must be controlled and flexible.
pub fn reversible_cancellation(x: &Complex, e: EdgeId, er: EdgeId) -> Result<Complex> {
    let g = x.graph();
    if !g.contains_edge(e) || !g.contains_edge(er) {
        return Err(Error::UnknownEdge(format!("{e} or {er}")));
    }
    if g.src(er) != g.dst(e) || g.dst(er) != g.src(e) {
        return Err(Error::Precondition(format!(
            "{} does not reverse {}",
            g.edge_name(er),
            g.edge_name(e)
        )));
    }
    for step in [e, er] {
        let r = Route::path(g, g.src(step), vec![step])?;
        if !x.is_controlled(&r) || !is_flexible_route(x, &r) {
            return Err(Error::Precondition(format!(
                "step {} is not a flexible controlled route",
                g.edge_name(step)
            )));
        }
    }
    x.with_extra_cells(vec![
        SquareCell::from_parts(g.src(e), g.src(e), vec![e, er], vec![]),
        SquareCell::from_parts(g.dst(e), g.dst(e), vec![er, e], vec![]),
    ])
}
