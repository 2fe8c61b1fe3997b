//! Decision procedures and constructions for the MMS property.
//!
//! A `k`-uniform hypergraph `H` has the MMS property when every real
//! weighting of its vertices with nonnegative sum leaves at least `delta(H)`
//! edges with nonnegative weight sum, where `delta(H)` is the minimum degree.

pub mod budget;
pub mod circulant;
pub mod combinatorics;
pub mod construct;
pub mod error;
pub mod hypergraph;
pub mod lp;
pub mod matchings;
pub mod partitions;
pub mod random;
pub mod verify;

pub use budget::Budget;
pub use error::{Error, Result};
pub use hypergraph::{EdgeSet, Graph, Hypergraph, Weighting};
pub use verify::{FailureWitness, MmsVerdict};
