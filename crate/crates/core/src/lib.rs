//! Weighted graphs, tropical curves and their Jacobians.
//!
//! Graphs are multigraphs with loops and nonnegative vertex weights; every
//! id-based tie-break follows declaration order. Lengths are exact
//! rationals or infinity.

pub mod cli;
pub mod cycles;
pub mod divisors;
pub mod error;
pub mod graph;
pub mod homology;
pub mod io;
pub mod iso;
pub mod length;
mod linalg;
pub mod metric;
pub mod moduli;
pub mod strata;
pub mod torelli;

pub use divisors::{Divisor, FiniteAbelianGroup, GraphFunction};
pub use error::{Error, Result};
pub use graph::{Edge, EdgeContractionRecord, Vertex, WeightedGraph};
pub use homology::{CycleBasis, Orientation, PeriodMatrix, TropicalPAV};
pub use iso::{canonical_code, find_isomorphism, Isomorphism};
pub use length::Length;
pub use metric::{DegenerationDescriptor, ExtendedTropicalCurve, MetricGraph, TropicalCurve};
pub use moduli::{enumerate_stable_graphs, SpecializationPoset, StratumCatalog};
pub use strata::SupportPoset;
pub use torelli::{CyclicEquivalenceWitness, TorelliVerdict};
