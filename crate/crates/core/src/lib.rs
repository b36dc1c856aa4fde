//! MAX-SAT stochastic local search with evolved preambles.
//!
//! A preamble is a short program of single-variable assignment steps that
//! picks the starting assignment for a local-search heuristic. The [`ga`]
//! module evolves preambles for a fixed instance and heuristic; [`harness`]
//! runs the GA against repeated restarts of the heuristic alone under the
//! same wall-clock budget and scores the comparison.

pub mod cnf;
pub mod preamble;
pub mod sls;
pub mod ga;
pub mod harness;

/// Seedable generator used wherever runs must be reproducible.
pub type SolverRng = rand_chacha::ChaCha8Rng;
