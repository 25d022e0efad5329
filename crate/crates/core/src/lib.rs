//! Controlled complexes: finite combinatorial models of spaces with a
//! distinguished class of controlled paths.
//!
//! A [`Complex`] is a directed multigraph with square cells and a decision
//! procedure for which [`Route`]s are controlled. On top of that the crate
//! provides the standard examples and combinators, the four reflections,
//! classification predicates, the fundamental category of a complex, and
//! covering maps with route lifting.

pub mod cell;
pub mod classify;
pub mod cli;
pub mod complex;
pub mod constructors;
pub mod covering;
pub mod enumerate;
pub mod error;
pub mod graph;
pub mod io;
mod membership;
pub mod pi1;
pub mod reflect;
pub mod route;

pub use cell::SquareCell;
pub use classify::Verdict;
pub use complex::{Complex, ComplexBuilder, OracleKind, Reflector};
pub use constructors::{QuotientSpec, StandardSpaceKind};
pub use covering::CoveringMap;
pub use error::{Error, Result};
pub use graph::{EdgeId, Graph, VertexId};
pub use pi1::{FundamentalCategory, Label};
pub use route::Route;
