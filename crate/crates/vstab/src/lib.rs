//! Divisor theory on finite multigraphs together with V-stability conditions,
//! their semistable sets, BD-sets and PT-assignments.
//!
//! Vertex subsets and spanning subgraphs are `u64` bitmasks. Everything is exact
//! integer or rational arithmetic; there is no floating point anywhere.

pub mod curve;
pub mod degeneracy;
pub mod divisor;
pub mod error;
pub mod graph;
pub mod io;
pub mod linalg;
pub mod models;
pub mod orbit;
pub mod ptbd;
pub mod semistable;
pub mod suite;
pub mod vstability;

pub use curve::CurveModel;
pub use degeneracy::DegeneracySubset;
pub use divisor::Divisor;
pub use error::{Error, Result};
pub use graph::{EdgeSet, Graph, GraphMorphism, VertexSet};
pub use orbit::{OrbitElement, OrderedPartition, PartialOrientation, UpperSet};
pub use ptbd::{ForestFunction, PtReport};
pub use vstability::{Polarization, VStability};

/// Integer scalar used for divisors and stability values.
pub type Int = i64;
/// Wider integer used inside eliminations, where intermediate products grow.
pub type Wide = i128;
/// Exact rational used by polarizations.
pub type Rational = num_rational::Ratio<Int>;

/// Largest vertex count accepted by the exhaustive subset enumerations.
pub const MAX_ENUM_VERTICES: usize = 20;
