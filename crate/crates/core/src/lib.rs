//! Expansion toolkit for weighted undirected graphs.
//!
//! The crate works with unit-regular graphs (every weighted degree equals 1)
//! and several objects built on top of them: combinatorial gap measures with
//! reproducible witnesses, concave mass curves and their drop/dominance
//! inequalities, random-walk mixing, evolving-set processes, and a family of
//! Hamming-cube models large enough that everything must go through a
//! weight-class chain instead of explicit vertices.
//!
//! All randomness is injected: stochastic routines take either an `RngCore`
//! or an explicit `u64` seed and are deterministic given one.

pub mod battery;
pub mod curve;
pub mod error;
pub mod esp;
pub mod gaps;
pub mod graph;
pub mod hypercube;
pub mod verify;
pub mod walks;

pub use error::{Error, Result};
pub use graph::{VertexSet, WeightedGraph};
