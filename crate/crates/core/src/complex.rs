//! Controlled complexes: a graph, its square cells, and a decision procedure
//! for which routes are controlled.
//!
//! Finitely presented complexes carry a generator set and decide membership
//! by interval dynamic programming. Derived complexes (products, sums,
//! reflections, restrictions) keep their operands and answer membership
//! queries by delegating to them.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::cell::SquareCell;
use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph, VertexId};
use crate::membership;
use crate::route::Route;

/// Which of the four reflections produced a complex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Reflector {
    /// Generated d-space.
    Dhat,
    /// Flexible part.
    Fl,
    /// Generated preflexible space.
    Pf,
    /// Generated border-flexible space.
    Bf,
}

impl Reflector {
    pub fn name(self) -> &'static str {
        match self {
            Reflector::Dhat => "dhat",
            Reflector::Fl => "fl",
            Reflector::Pf => "pf",
            Reflector::Bf => "bf",
        }
    }
}

/// Reporting tag describing how membership is decided.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OracleKind {
    GeneratorBacked,
    QuotientImage,
    Product,
    Sum,
    Opposite,
    Reflected(Reflector),
    Restricted,
}

#[derive(Clone, Debug)]
pub(crate) struct SubgraphMap {
    pub vertex_to_inner: Vec<VertexId>,
    pub edge_to_inner: Vec<EdgeId>,
}

#[derive(Clone, Debug)]
pub(crate) enum Structure {
    Generated { generators: Vec<Route>, kind: OracleKind },
    Product(Complex, Complex),
    Sum(Complex, Complex),
    Opposite(Complex),
    Reflected { reflector: Reflector, inner: Complex, subgraph: Option<SubgraphMap> },
    Restricted { inner: Complex, keep: BTreeSet<VertexId> },
}

#[derive(Debug)]
struct Inner {
    name: Option<String>,
    graph: Graph,
    cells: Vec<SquareCell>,
    extra_cells: Vec<SquareCell>,
    structure: Structure,
    flexible: Vec<bool>,
}

/// A controlled complex. Cloning is cheap; values are immutable.
#[derive(Clone, Debug)]
pub struct Complex(Arc<Inner>);

impl Complex {
    /// A finitely presented complex. Generators must be routes of `graph`.
    pub fn generated(graph: Graph, generators: Vec<Route>, cells: Vec<SquareCell>) -> Result<Complex> {
        Self::generated_with_kind(graph, generators, cells, OracleKind::GeneratorBacked)
    }

    pub(crate) fn generated_with_kind(
        graph: Graph,
        generators: Vec<Route>,
        cells: Vec<SquareCell>,
        kind: OracleKind,
    ) -> Result<Complex> {
        for g in &generators {
            let end = graph.walk_end(g.start(), g.edges())?;
            if end != g.end() {
                return Err(Error::InvalidParameter("generator does not belong to this graph".into()));
            }
        }
        for c in &cells {
            validate_cell(&graph, c)?;
        }
        let generators: Vec<Route> = generators.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        let cells: Vec<SquareCell> = cells.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        let mut flexible = vec![false; graph.vertex_count()];
        for g in &generators {
            flexible[g.start().index()] = true;
            flexible[g.end().index()] = true;
        }
        Ok(Complex(Arc::new(Inner {
            name: None,
            graph,
            cells,
            extra_cells: Vec::new(),
            structure: Structure::Generated { generators, kind },
            flexible,
        })))
    }

    pub(crate) fn derived(graph: Graph, cells: Vec<SquareCell>, structure: Structure) -> Complex {
        let cells: Vec<SquareCell> = cells.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        let mut inner = Inner {
            name: None,
            graph,
            cells,
            extra_cells: Vec::new(),
            structure,
            flexible: Vec::new(),
        };
        inner.flexible = inner.graph.vertices().map(|v| derived_flexible(&inner.structure, v)).collect();
        Complex(Arc::new(inner))
    }

    /// A copy carrying a display name.
    pub fn with_name(&self, name: impl Into<String>) -> Complex {
        let inner = &self.0;
        Complex(Arc::new(Inner {
            name: Some(name.into()),
            graph: inner.graph.clone(),
            cells: inner.cells.clone(),
            extra_cells: inner.extra_cells.clone(),
            structure: inner.structure.clone(),
            flexible: inner.flexible.clone(),
        }))
    }

    /// A copy with additional cells. Membership is unchanged.
    pub fn with_extra_cells(&self, cells: Vec<SquareCell>) -> Result<Complex> {
        for c in &cells {
            validate_cell(self.graph(), c)?;
        }
        let inner = &self.0;
        let mut all = inner.cells.clone();
        all.extend(cells.iter().cloned());
        let all: Vec<SquareCell> = all.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        let mut extra = inner.extra_cells.clone();
        if matches!(inner.structure, Structure::Generated { .. }) {
            extra.clear();
        } else {
            extra.extend(cells);
            extra = extra.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        }
        Ok(Complex(Arc::new(Inner {
            name: inner.name.clone(),
            graph: inner.graph.clone(),
            cells: all,
            extra_cells: extra,
            structure: inner.structure.clone(),
            flexible: inner.flexible.clone(),
        })))
    }

    pub fn name(&self) -> Option<&str> {
        self.0.name.as_deref()
    }

    pub fn graph(&self) -> &Graph {
        &self.0.graph
    }

    pub fn cells(&self) -> &[SquareCell] {
        &self.0.cells
    }

    /// Cells added on top of those a derived complex inherits from its
    /// operands.
    pub fn extra_cells(&self) -> &[SquareCell] {
        &self.0.extra_cells
    }

    pub(crate) fn structure(&self) -> &Structure {
        &self.0.structure
    }

    pub fn kind(&self) -> OracleKind {
        match &self.0.structure {
            Structure::Generated { kind, .. } => *kind,
            Structure::Product(..) => OracleKind::Product,
            Structure::Sum(..) => OracleKind::Sum,
            Structure::Opposite(_) => OracleKind::Opposite,
            Structure::Reflected { reflector, .. } => OracleKind::Reflected(*reflector),
            Structure::Restricted { .. } => OracleKind::Restricted,
        }
    }

    /// Generators, for finitely presented complexes.
    pub fn generators(&self) -> Option<&[Route]> {
        match &self.0.structure {
            Structure::Generated { generators, .. } => Some(generators),
            _ => None,
        }
    }

    pub fn is_generator_backed(&self) -> bool {
        self.generators().is_some()
    }

    pub fn is_flexible(&self, v: VertexId) -> bool {
        self.0.flexible.get(v.index()).copied().unwrap_or(false)
    }

    pub fn flexible_vertices(&self) -> BTreeSet<VertexId> {
        self.graph().vertices().filter(|&v| self.is_flexible(v)).collect()
    }

    /// Decides whether `r` is controlled.
    pub fn is_controlled(&self, r: &Route) -> bool {
        if r.is_constant() {
            return self.is_flexible(r.start());
        }
        match &self.0.structure {
            Structure::Generated { generators, .. } => membership::generated(generators, r),
            Structure::Product(x, y) => {
                let (px, py) = membership::project(x, y, r);
                x.is_controlled(&px) && y.is_controlled(&py)
            }
            Structure::Sum(x, y) => match membership::sum_side(x, r) {
                Ok(rx) => x.is_controlled(&rx),
                Err(ry) => y.is_controlled(&ry),
            },
            Structure::Opposite(inner) => inner.is_controlled(&r.reversed()),
            Structure::Reflected { reflector, inner, subgraph } => match reflector {
                Reflector::Dhat => membership::decomposes_into_restrictions(inner, r),
                Reflector::Pf => {
                    inner.is_flexible(r.start())
                        && inner.is_flexible(r.end())
                        && membership::decomposes_into_restrictions(inner, r)
                }
                Reflector::Bf => membership::border_closure(inner, r),
                Reflector::Fl => {
                    let map = subgraph.as_ref().expect("flexible part keeps its vertex map");
                    crate::classify::is_flexible_route(inner, &membership::to_inner(map, r))
                }
            },
            Structure::Restricted { inner, keep } => {
                keep.contains(&r.start()) && keep.contains(&r.end()) && inner.is_controlled(r)
            }
        }
    }

    /// Whether `piece` occurs as a contiguous span of some controlled route
    /// whose pauses strictly inside the span are among those of `piece`.
    /// Pauses at the two ends of `piece` are ignored. For a constant piece
    /// this asks whether its vertex is visited by a controlled route.
    pub fn is_restriction(&self, piece: &Route) -> bool {
        match &self.0.structure {
            Structure::Generated { generators, .. } => membership::generated_restriction(generators, piece),
            Structure::Product(x, y) => {
                let (px, py) = membership::project(x, y, piece);
                x.is_restriction(&px) && y.is_restriction(&py)
            }
            Structure::Sum(x, y) => match membership::sum_side(x, piece) {
                Ok(rx) => x.is_restriction(&rx),
                Err(ry) => y.is_restriction(&ry),
            },
            Structure::Opposite(inner) => inner.is_restriction(&piece.reversed()),
            Structure::Reflected { reflector, inner, .. } => match reflector {
                Reflector::Dhat | Reflector::Fl => piece.is_constant() || self.is_controlled(&piece.without_dwells()),
                Reflector::Pf => {
                    if piece.is_constant() {
                        inner.is_restriction(piece)
                    } else {
                        membership::decomposes_into_restrictions(inner, piece)
                    }
                }
                Reflector::Bf => membership::bounded_restriction_search(self, piece),
            },
            Structure::Restricted { .. } => membership::bounded_restriction_search(self, piece),
        }
    }

    /// Upper bound on how far a restriction may need to be extended on
    /// either side before it becomes a controlled route.
    pub(crate) fn extension_horizon(&self) -> usize {
        match &self.0.structure {
            Structure::Generated { generators, .. } => generators.iter().map(Route::len).sum::<usize>(),
            Structure::Product(x, y) => x.extension_horizon() + y.extension_horizon(),
            Structure::Sum(x, y) => x.extension_horizon().max(y.extension_horizon()),
            Structure::Opposite(inner) => inner.extension_horizon(),
            Structure::Reflected { inner, .. } => inner.extension_horizon(),
            Structure::Restricted { inner, .. } => inner.extension_horizon(),
        }
    }

    /// Convenience lookup of a route by vertex and edge names.
    pub fn route(&self, start: &str, edges: &[&str], dwells: &[usize]) -> Result<Route> {
        let g = self.graph();
        let v = g.vertex(start).ok_or_else(|| Error::UnknownVertex(start.to_string()))?;
        let es = edges
            .iter()
            .map(|n| g.edge_named(n).ok_or_else(|| Error::UnknownEdge(n.to_string())))
            .collect::<Result<Vec<_>>>()?;
        Route::new(g, v, es, dwells.iter().copied())
    }

    pub fn vertex(&self, name: &str) -> Result<VertexId> {
        self.graph().vertex(name).ok_or_else(|| Error::UnknownVertex(name.to_string()))
    }

    pub fn edge(&self, name: &str) -> Result<EdgeId> {
        self.graph().edge_named(name).ok_or_else(|| Error::UnknownEdge(name.to_string()))
    }
}

fn validate_cell(graph: &Graph, c: &SquareCell) -> Result<()> {
    let rebuilt = SquareCell::new(graph, c.start(), c.left().to_vec(), c.right().to_vec())?;
    if rebuilt.end() != c.end() {
        return Err(Error::InvalidParameter("cell does not belong to this graph".into()));
    }
    Ok(())
}

fn derived_flexible(structure: &Structure, v: VertexId) -> bool {
    match structure {
        Structure::Generated { .. } => unreachable!("generated complexes compute flexibility directly"),
        Structure::Product(x, y) => {
            let ny = y.graph().vertex_count() as u32;
            x.is_flexible(VertexId(v.0 / ny)) && y.is_flexible(VertexId(v.0 % ny))
        }
        Structure::Sum(x, y) => {
            let nx = x.graph().vertex_count() as u32;
            if v.0 < nx {
                x.is_flexible(v)
            } else {
                y.is_flexible(VertexId(v.0 - nx))
            }
        }
        Structure::Opposite(inner) => inner.is_flexible(v),
        Structure::Reflected { reflector, inner, .. } => match reflector {
            Reflector::Dhat | Reflector::Fl => true,
            Reflector::Pf | Reflector::Bf => inner.is_flexible(v),
        },
        Structure::Restricted { keep, .. } => keep.contains(&v),
    }
}

/// Builder for finitely presented complexes addressed by name.
#[derive(Debug, Default)]
pub struct ComplexBuilder {
    graph: Graph,
    generators: Vec<(String, Vec<String>, Vec<usize>)>,
    cells: Vec<(String, Vec<String>, Vec<String>)>,
    name: Option<String>,
}

impl ComplexBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn vertex(mut self, name: &str) -> Result<Self> {
        self.graph.add_vertex(name)?;
        Ok(self)
    }

    pub fn vertices(mut self, names: &[&str]) -> Result<Self> {
        for n in names {
            self.graph.add_vertex(*n)?;
        }
        Ok(self)
    }

    pub fn edge(mut self, name: &str, src: &str, dst: &str) -> Result<Self> {
        let s = self.graph.vertex(src).ok_or_else(|| Error::UnknownVertex(src.into()))?;
        let d = self.graph.vertex(dst).ok_or_else(|| Error::UnknownVertex(dst.into()))?;
        self.graph.add_edge(name, s, d)?;
        Ok(self)
    }

    pub fn generator(mut self, start: &str, edges: &[&str], dwells: &[usize]) -> Self {
        self.generators.push((
            start.to_string(),
            edges.iter().map(|s| s.to_string()).collect(),
            dwells.to_vec(),
        ));
        self
    }

    pub fn cell(mut self, start: &str, left: &[&str], right: &[&str]) -> Self {
        self.cells.push((
            start.to_string(),
            left.iter().map(|s| s.to_string()).collect(),
            right.iter().map(|s| s.to_string()).collect(),
        ));
        self
    }

    pub fn build(self) -> Result<Complex> {
        let g = self.graph;
        let edge_ids = |names: &[String]| {
            names
                .iter()
                .map(|n| g.edge_named(n).ok_or_else(|| Error::UnknownEdge(n.clone())))
                .collect::<Result<Vec<_>>>()
        };
        let vertex_id = |n: &str| g.vertex(n).ok_or_else(|| Error::UnknownVertex(n.to_string()));
        let mut generators = Vec::new();
        for (start, edges, dwells) in &self.generators {
            generators.push(Route::new(&g, vertex_id(start)?, edge_ids(edges)?, dwells.iter().copied())?);
        }
        let mut cells = Vec::new();
        for (start, left, right) in &self.cells {
            cells.push(SquareCell::new(&g, vertex_id(start)?, edge_ids(left)?, edge_ids(right)?)?);
        }
        let c = Complex::generated(g, generators, cells)?;
        Ok(match self.name {
            Some(n) => c.with_name(n),
            None => c,
        })
    }
}
