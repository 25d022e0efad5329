//! Directed multigraphs underlying controlled complexes.
//!
//! Vertices and edges are addressed by dense indices. Names are kept only for
//! reporting and serialization; every algorithm works on the indices.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub u32);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId(pub u32);

impl VertexId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl EdgeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub name: String,
    pub src: VertexId,
    pub dst: VertexId,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Graph {
    vertex_names: Vec<String>,
    edges: Vec<Edge>,
    out_edges: Vec<Vec<EdgeId>>,
    in_edges: Vec<Vec<EdgeId>>,
    vertex_lookup: HashMap<String, VertexId>,
    edge_lookup: HashMap<String, EdgeId>,
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a vertex. Names must be unique within the graph.
    pub fn add_vertex(&mut self, name: impl Into<String>) -> Result<VertexId> {
        let name = name.into();
        if self.vertex_lookup.contains_key(&name) {
            return Err(Error::InvalidParameter(format!("duplicate vertex '{name}'")));
        }
        let id = VertexId(self.vertex_names.len() as u32);
        self.vertex_lookup.insert(name.clone(), id);
        self.vertex_names.push(name);
        self.out_edges.push(Vec::new());
        self.in_edges.push(Vec::new());
        Ok(id)
    }

    pub fn add_edge(&mut self, name: impl Into<String>, src: VertexId, dst: VertexId) -> Result<EdgeId> {
        let name = name.into();
        if self.edge_lookup.contains_key(&name) {
            return Err(Error::InvalidParameter(format!("duplicate edge '{name}'")));
        }
        for v in [src, dst] {
            if v.index() >= self.vertex_names.len() {
                return Err(Error::UnknownVertex(v.to_string()));
            }
        }
        let id = EdgeId(self.edges.len() as u32);
        self.edge_lookup.insert(name.clone(), id);
        self.edges.push(Edge { name, src, dst });
        self.out_edges[src.index()].push(id);
        self.in_edges[dst.index()].push(id);
        Ok(id)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.vertex_names.len() as u32).map(VertexId)
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> + '_ {
        (0..self.edges.len() as u32).map(EdgeId)
    }

    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e.index()]
    }

    pub fn src(&self, e: EdgeId) -> VertexId {
        self.edges[e.index()].src
    }

    pub fn dst(&self, e: EdgeId) -> VertexId {
        self.edges[e.index()].dst
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertex_names[v.index()]
    }

    pub fn edge_name(&self, e: EdgeId) -> &str {
        &self.edges[e.index()].name
    }

    pub fn vertex(&self, name: &str) -> Option<VertexId> {
        self.vertex_lookup.get(name).copied()
    }

    pub fn edge_named(&self, name: &str) -> Option<EdgeId> {
        self.edge_lookup.get(name).copied()
    }

    pub fn out_edges(&self, v: VertexId) -> &[EdgeId] {
        &self.out_edges[v.index()]
    }

    pub fn in_edges(&self, v: VertexId) -> &[EdgeId] {
        &self.in_edges[v.index()]
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        v.index() < self.vertex_names.len()
    }

    pub fn contains_edge(&self, e: EdgeId) -> bool {
        e.index() < self.edges.len()
    }

    /// Endpoint of the walk `edges` started at `start`, or an error if the
    /// edges do not chain.
    pub fn walk_end(&self, start: VertexId, edges: &[EdgeId]) -> Result<VertexId> {
        if !self.contains_vertex(start) {
            return Err(Error::UnknownVertex(start.to_string()));
        }
        let mut at = start;
        for &e in edges {
            if !self.contains_edge(e) {
                return Err(Error::UnknownEdge(e.to_string()));
            }
            let edge = &self.edges[e.index()];
            if edge.src != at {
                return Err(Error::Disconnected { edge: e, expected: at });
            }
            at = edge.dst;
        }
        Ok(at)
    }

    /// True when the subgraph spanned by `edges` has a directed cycle.
    pub fn has_cycle_in(&self, edges: &[EdgeId]) -> bool {
        self.longest_path_in(edges).is_none()
    }

    /// Length of the longest directed path using only `edges`, or `None` if
    /// those edges contain a cycle.
    pub fn longest_path_in(&self, edges: &[EdgeId]) -> Option<usize> {
        let n = self.vertex_count();
        let mut indegree = vec![0usize; n];
        let mut out: Vec<Vec<VertexId>> = vec![Vec::new(); n];
        for &e in edges {
            let edge = self.edge(e);
            out[edge.src.index()].push(edge.dst);
            indegree[edge.dst.index()] += 1;
        }
        let mut queue: Vec<usize> = (0..n).filter(|&v| indegree[v] == 0).collect();
        let mut depth = vec![0usize; n];
        let mut seen = 0;
        while let Some(v) = queue.pop() {
            seen += 1;
            for &w in &out[v] {
                depth[w.index()] = depth[w.index()].max(depth[v] + 1);
                indegree[w.index()] -= 1;
                if indegree[w.index()] == 0 {
                    queue.push(w.index());
                }
            }
        }
        (seen == n).then(|| depth.into_iter().max().unwrap_or(0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_duplicates_and_dangling_endpoints() {
        let mut g = Graph::new();
        let a = g.add_vertex("a").unwrap();
        assert!(g.add_vertex("a").is_err());
        g.add_edge("e", a, a).unwrap();
        assert!(g.add_edge("e", a, a).is_err());
        assert!(g.add_edge("f", a, VertexId(7)).is_err());
    }

    #[test]
    fn walk_end_checks_chaining() {
        let mut g = Graph::new();
        let a = g.add_vertex("a").unwrap();
        let b = g.add_vertex("b").unwrap();
        let e = g.add_edge("e", a, b).unwrap();
        assert_eq!(g.walk_end(a, &[e]).unwrap(), b);
        assert!(matches!(g.walk_end(a, &[e, e]), Err(Error::Disconnected { .. })));
    }

    #[test]
    fn longest_path_detects_loops() {
        let mut g = Graph::new();
        let a = g.add_vertex("a").unwrap();
        let b = g.add_vertex("b").unwrap();
        let c = g.add_vertex("c").unwrap();
        let e = g.add_edge("e", a, b).unwrap();
        let f = g.add_edge("f", b, c).unwrap();
        let l = g.add_edge("l", c, c).unwrap();
        assert_eq!(g.longest_path_in(&[e, f]), Some(2));
        assert!(g.has_cycle_in(&[e, f, l]));
    }
}
