//! Exact enumeration, explicit constructions and closed-form bounds for
//! `(L,k)`-free `r`-uniform hypergraphs.
//!
//! A hypergraph on `[n]` is `(L,k)`-free when no `k`-subset of its vertices
//! induces a number of edges that belongs to the list `L`. The crate counts
//! these exactly for small `n`, builds the standard lower-bound families,
//! checks the binary CSP counting bound that drives the upper bound, and
//! evaluates every bound in log space.
//!
//! Vertices are 0-based throughout the library. The text formats in
//! [`hypergraph`] and [`csp`] are 1-based.

pub mod bounds;
pub mod constructions;
pub mod csp;
pub mod enumerator;
mod error;
pub mod freeness;
pub mod graph;
pub mod hypergraph;
pub mod subset;
pub mod table;

pub use error::{Error, Result};
pub use freeness::{ForbiddenList, FreenessReport};
pub use hypergraph::{Hypergraph, LinkGraph};
pub use subset::SubsetRank;
