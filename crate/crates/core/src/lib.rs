//! Generic ranks of random quantum k-SAT formulas.
//!
//! The crate is organised around five pieces:
//!
//! * [`hypergraph`]: the random hypergraph model, multigraph components and
//!   the plain-text hypergraph format.
//! * [`rank_oracle`]: exact generic rank of the satisfying subspace, through a
//!   floating-point SVD backend and an exact prime-field backend.
//! * [`gadgets`]: closed-form generic ranks of sunflowers, nosegays and
//!   two-qubit multigraphs, with combinatorial cross-checks.
//! * [`peeling`]: the randomized sunflower and nosegay partition processes.
//! * [`analysis`]: the analytic per-qubit log-rank bounds and their zero
//!   crossings in the clause density.
//!
//! Batch work (independent trials, parameter sweeps, grid points) goes through
//! [`Execution`], which uses rayon when the `parallel` feature is enabled and
//! a plain loop otherwise. Results never depend on which one runs.

pub mod analysis;
mod error;
mod exec;
pub mod gadgets;
pub mod hypergraph;
pub mod peeling;
pub mod rank_oracle;
pub mod rng;
pub mod union_find;

pub use error::{Error, Result};
pub use exec::Execution;
pub use gadgets::{GadgetRank, GadgetSpec, LogWeight};
pub use hypergraph::{ComponentSummary, Edge, Hypergraph};
pub use rank_oracle::{ClauseVector, Formula, RankResult};
