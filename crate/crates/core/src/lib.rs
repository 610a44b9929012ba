//! A desk-scale laboratory for hypergraph thresholds.
//!
//! The crate certifies q-smallness with exact minimum-weight undercovers,
//! computes κ-spread, estimates critical probabilities exactly and by Monte
//! Carlo, and runs the randomized fragmentation processes behind the
//! `p_c(H) <= 8 q(H) log2(2 ℓ(H))` and `48 q log2(ℓ/ε)` threshold bounds,
//! recording every intermediate quantity so that each inequality can be
//! checked empirically.
//!
//! All logarithms are base 2.

pub mod certify;
pub mod error;
pub mod estimate;
pub mod exec;
pub mod families;
pub mod format;
pub mod hypergraph;
pub mod oracle;
pub mod process;
pub mod rng;
pub mod suite;
pub mod vertex_set;

pub use error::{Error, Result};
pub use hypergraph::Hypergraph;
pub use vertex_set::VertexSet;
