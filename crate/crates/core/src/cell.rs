use std::fmt;

use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph, VertexId};

/// Two parallel edge words declared deformable into each other.
///
/// Both sides run from `start` to the same end vertex. A side may be empty
/// only when the cell is a loop, which is how cancellation of a reversible
/// pair (`e` then its reverse, against the trivial loop) is recorded.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SquareCell {
    start: VertexId,
    end: VertexId,
    left: Vec<EdgeId>,
    right: Vec<EdgeId>,
}

impl SquareCell {
    pub fn new(graph: &Graph, start: VertexId, left: Vec<EdgeId>, right: Vec<EdgeId>) -> Result<Self> {
        let end_l = graph.walk_end(start, &left)?;
        let end_r = graph.walk_end(start, &right)?;
        if end_l != end_r {
            return Err(Error::InvalidParameter(format!(
                "cell sides end at different vertices ({} and {})",
                graph.vertex_name(end_l),
                graph.vertex_name(end_r)
            )));
        }
        if (left.is_empty() || right.is_empty()) && start != end_l {
            return Err(Error::InvalidParameter(
                "a cell side may be empty only when the cell is a loop".into(),
            ));
        }
        Ok(SquareCell {
            start,
            end: end_l,
            left,
            right,
        })
    }

    pub(crate) fn from_parts(start: VertexId, end: VertexId, left: Vec<EdgeId>, right: Vec<EdgeId>) -> Self {
        SquareCell { start, end, left, right }
    }

    pub fn start(&self) -> VertexId {
        self.start
    }

    pub fn end(&self) -> VertexId {
        self.end
    }

    pub fn left(&self) -> &[EdgeId] {
        &self.left
    }

    pub fn right(&self) -> &[EdgeId] {
        &self.right
    }

    pub fn is_degenerate(&self) -> bool {
        self.left == self.right
    }

    /// The cell traversed backwards, in the opposite graph.
    pub fn reversed(&self) -> SquareCell {
        let mut left = self.left.clone();
        left.reverse();
        let mut right = self.right.clone();
        right.reverse();
        SquareCell {
            start: self.end,
            end: self.start,
            left,
            right,
        }
    }

    pub fn display<'a>(&'a self, graph: &'a Graph) -> CellDisplay<'a> {
        CellDisplay { cell: self, graph }
    }
}

pub struct CellDisplay<'a> {
    cell: &'a SquareCell,
    graph: &'a Graph,
}

impl fmt::Display for CellDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let word = |w: &[EdgeId]| w.iter().map(|&e| self.graph.edge_name(e)).collect::<Vec<_>>().join(",");
        write!(
            f,
            "{}: [{}] ~ [{}]",
            self.graph.vertex_name(self.cell.start),
            word(&self.cell.left),
            word(&self.cell.right)
        )
    }
}
