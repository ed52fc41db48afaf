//! Shared test support: fixture files, a hand-built graph, a seeded random
//! graph generator and brute-force oracles.
//!
//! The oracles deliberately avoid the routing code they check: weights are
//! recomputed from a literal factor table and paths are enumerated
//! exhaustively.

pub mod fixtures;
pub mod oracle;
pub mod random;
