//! Dwell-marked edge paths.
//!
//! A route traverses a walk in the graph and may pause ("dwell") at any of the
//! vertices it visits. Position `i` is the vertex reached after `i` steps.
//! Only the set of pause positions is recorded; how long a pause lasts is not
//! observable.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph, VertexId};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Route {
    vertices: Vec<VertexId>,
    edges: Vec<EdgeId>,
    dwells: BTreeSet<usize>,
}

impl Route {
    /// The constant route at `v`.
    pub fn constant(v: VertexId) -> Self {
        Route {
            vertices: vec![v],
            edges: Vec::new(),
            dwells: BTreeSet::new(),
        }
    }

    /// Builds a route over `graph`, checking that the edges chain and that
    /// every dwell lies in `0..=len`.
    pub fn new(
        graph: &Graph,
        start: VertexId,
        edges: Vec<EdgeId>,
        dwells: impl IntoIterator<Item = usize>,
    ) -> Result<Self> {
        graph.walk_end(start, &edges)?;
        let mut vertices = Vec::with_capacity(edges.len() + 1);
        vertices.push(start);
        for &e in &edges {
            vertices.push(graph.dst(e));
        }
        let len = edges.len();
        let mut set = BTreeSet::new();
        for pos in dwells {
            if pos > len {
                return Err(Error::DwellOutOfRange { pos, len });
            }
            set.insert(pos);
        }
        if len == 0 {
            set.clear();
        }
        Ok(Route {
            vertices,
            edges,
            dwells: set,
        })
    }

    /// Route without dwells.
    pub fn path(graph: &Graph, start: VertexId, edges: Vec<EdgeId>) -> Result<Self> {
        Self::new(graph, start, edges, [])
    }

    /// Builds a route from already-chained parts. The caller guarantees that
    /// `vertices` is the vertex sequence of `edges`.
    pub(crate) fn from_parts(vertices: Vec<VertexId>, edges: Vec<EdgeId>, mut dwells: BTreeSet<usize>) -> Self {
        debug_assert_eq!(vertices.len(), edges.len() + 1);
        debug_assert!(dwells.iter().all(|&d| d <= edges.len()));
        if edges.is_empty() {
            dwells.clear();
        }
        Route {
            vertices,
            edges,
            dwells,
        }
    }

    pub fn start(&self) -> VertexId {
        self.vertices[0]
    }

    pub fn end(&self) -> VertexId {
        *self.vertices.last().expect("routes visit at least one vertex")
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn dwells(&self) -> &BTreeSet<usize> {
        &self.dwells
    }

    pub fn has_dwell(&self, pos: usize) -> bool {
        self.dwells.contains(&pos)
    }

    /// Concatenation. A constant factor contributes a pause at the junction,
    /// since prefixing a path with a trivial loop is a delayed
    /// reparametrisation of it.
    pub fn concat(&self, other: &Route) -> Result<Route> {
        if self.end() != other.start() {
            return Err(Error::Composition {
                end: self.end(),
                start: other.start(),
            });
        }
        let shift = self.len();
        let mut vertices = self.vertices.clone();
        vertices.extend_from_slice(&other.vertices[1..]);
        let mut edges = self.edges.clone();
        edges.extend_from_slice(&other.edges);
        let mut dwells = self.dwells.clone();
        dwells.extend(other.dwells.iter().map(|d| d + shift));
        if self.is_constant() || other.is_constant() {
            dwells.insert(shift);
        }
        Ok(Route::from_parts(vertices, edges, dwells))
    }

    /// Adds a pause at `pos`. Idempotent.
    pub fn insert_dwell(&self, pos: usize) -> Result<Route> {
        if pos > self.len() {
            return Err(Error::DwellOutOfRange { pos, len: self.len() });
        }
        let mut r = self.clone();
        if !r.is_constant() {
            r.dwells.insert(pos);
        }
        Ok(r)
    }

    /// The sub-route between positions `p` and `q`, keeping only the pauses
    /// strictly inside the span.
    pub fn span(&self, p: usize, q: usize) -> Route {
        assert!(p <= q && q <= self.len(), "span {p}..{q} out of range");
        let dwells = if q > p + 1 {
            self.dwells.range(p + 1..q).map(|d| d - p).collect()
        } else {
            BTreeSet::new()
        };
        Route::from_parts(
            self.vertices[p..=q].to_vec(),
            self.edges[p..q].to_vec(),
            dwells,
        )
    }

    /// Every contiguous restriction, including the constant route at each
    /// visited vertex.
    pub fn subroutes(&self) -> BTreeSet<Route> {
        let n = self.len();
        let mut out = BTreeSet::new();
        for p in 0..=n {
            for q in p..=n {
                out.insert(self.span(p, q));
            }
        }
        out
    }

    /// The same walk with every pause removed.
    pub fn without_dwells(&self) -> Route {
        Route::from_parts(self.vertices.clone(), self.edges.clone(), BTreeSet::new())
    }

    /// The same walk paused at every position.
    pub fn with_all_dwells(&self) -> Route {
        Route::from_parts(self.vertices.clone(), self.edges.clone(), (0..=self.len()).collect())
    }

    /// The same route with its first and last pause positions removed.
    pub fn without_border_dwells(&self) -> Route {
        let mut r = self.clone();
        r.dwells.remove(&0);
        r.dwells.remove(&self.len());
        r
    }

    pub fn with_dwells(&self, dwells: BTreeSet<usize>) -> Result<Route> {
        if let Some(&pos) = dwells.iter().find(|&&d| d > self.len()) {
            return Err(Error::DwellOutOfRange { pos, len: self.len() });
        }
        Ok(Route::from_parts(self.vertices.clone(), self.edges.clone(), dwells))
    }

    /// Traversal in the opposite direction; pause `i` moves to `len - i`.
    /// Only meaningful in a graph whose edges were reversed.
    pub fn reversed(&self) -> Route {
        let n = self.len();
        let mut vertices = self.vertices.clone();
        vertices.reverse();
        let mut edges = self.edges.clone();
        edges.reverse();
        let dwells = self.dwells.iter().map(|d| n - d).collect();
        Route::from_parts(vertices, edges, dwells)
    }

    pub fn display<'a>(&'a self, graph: &'a Graph) -> RouteDisplay<'a> {
        RouteDisplay { route: self, graph }
    }
}

pub struct RouteDisplay<'a> {
    route: &'a Route,
    graph: &'a Graph,
}

impl fmt::Display for RouteDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self.route.edges.iter().map(|&e| self.graph.edge_name(e)).collect();
        write!(f, "({},[{}]", self.graph.vertex_name(self.route.start()), names.join(","))?;
        let dwells: Vec<String> = self.route.dwells.iter().map(|d| d.to_string()).collect();
        write!(f, ",{{{}}})", dwells.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_edges() -> (Graph, [VertexId; 3], [EdgeId; 2]) {
        let mut g = Graph::new();
        let a = g.add_vertex("0").unwrap();
        let b = g.add_vertex("m").unwrap();
        let c = g.add_vertex("1").unwrap();
        let e = g.add_edge("e", a, b).unwrap();
        let f = g.add_edge("f", b, c).unwrap();
        (g, [a, b, c], [e, f])
    }

    #[test]
    fn concat_plain() {
        let (g, [a, b, _], [e, f]) = two_edges();
        let r1 = Route::path(&g, a, vec![e]).unwrap();
        let r2 = Route::path(&g, b, vec![f]).unwrap();
        assert_eq!(r1.concat(&r2).unwrap(), Route::path(&g, a, vec![e, f]).unwrap());
    }

    #[test]
    fn concat_merges_junction_dwells() {
        let (g, [a, b, _], [e, f]) = two_edges();
        let r1 = Route::new(&g, a, vec![e], [1]).unwrap();
        let r2 = Route::new(&g, b, vec![f], [0]).unwrap();
        let joined = r1.concat(&r2).unwrap();
        assert_eq!(joined, Route::new(&g, a, vec![e, f], [1]).unwrap());
    }

    #[test]
    fn constant_prefix_becomes_initial_dwell() {
        let (g, [a, _, _], [e, _]) = two_edges();
        let c = Route::constant(a);
        let r = Route::path(&g, a, vec![e]).unwrap();
        let joined = c.concat(&r).unwrap();
        assert_eq!(joined, Route::new(&g, a, vec![e], [0]).unwrap());
        assert_eq!(joined.without_dwells(), r);
    }

    #[test]
    fn concat_rejects_mismatch() {
        let (g, [a, _, _], [e, _]) = two_edges();
        let r = Route::path(&g, a, vec![e]).unwrap();
        assert!(matches!(r.concat(&r), Err(Error::Composition { .. })));
    }

    #[test]
    fn insert_dwell_is_idempotent_and_checked() {
        let (g, [a, _, _], [e, f]) = two_edges();
        let r = Route::path(&g, a, vec![e]).unwrap();
        let once = r.insert_dwell(0).unwrap();
        assert_eq!(once, Route::new(&g, a, vec![e], [0]).unwrap());
        assert_eq!(once.insert_dwell(0).unwrap(), once);
        let middle = Route::path(&g, a, vec![e, f]).unwrap().insert_dwell(1).unwrap();
        assert_eq!(middle.dwells().iter().copied().collect::<Vec<_>>(), vec![1]);
        assert!(matches!(r.insert_dwell(2), Err(Error::DwellOutOfRange { pos: 2, len: 1 })));
    }

    #[test]
    fn constant_routes_are_canonical() {
        let (g, [a, _, _], _) = two_edges();
        let r = Route::new(&g, a, vec![], [0]).unwrap();
        assert_eq!(r, Route::constant(a));
        assert_eq!(r.insert_dwell(0).unwrap(), Route::constant(a));
    }

    #[test]
    fn subroutes_of_single_edge() {
        let (g, [a, b, _], [e, _]) = two_edges();
        let r = Route::path(&g, a, vec![e]).unwrap();
        let subs: BTreeSet<_> = [r.clone(), Route::constant(a), Route::constant(b)].into_iter().collect();
        assert_eq!(r.subroutes(), subs);
        assert_eq!(Route::constant(a).subroutes().len(), 1);
    }

    #[test]
    fn subroutes_keep_interior_dwells_only() {
        let (g, [a, b, c], [e, f]) = two_edges();
        let r = Route::new(&g, a, vec![e, f], [1]).unwrap();
        let subs = r.subroutes();
        // spans (0,0) (1,1) (2,2) (0,1) (1,2) (0,2)
        assert_eq!(subs.len(), 6);
        assert!(subs.contains(&Route::path(&g, a, vec![e]).unwrap()));
        assert!(subs.contains(&Route::path(&g, b, vec![f]).unwrap()));
        assert!(subs.contains(&r));
        assert!(subs.contains(&Route::constant(b)));
        assert!(subs.contains(&Route::constant(c)));
    }

    #[test]
    fn reversal_mirrors_dwells() {
        let (g, [a, _, _], [e, f]) = two_edges();
        let r = Route::new(&g, a, vec![e, f], [0]).unwrap();
        let back = r.reversed();
        assert_eq!(back.dwells().iter().copied().collect::<Vec<_>>(), vec![2]);
        assert_eq!(back.reversed(), r);
    }
}
