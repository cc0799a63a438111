//! Decide whether a multipartite mixed quantum state is uniquely determined
//! among all states (UDA) by its k-body reduced density matrices.
//!
//! The crate provides:
//!
//! - dense Hermitian linear algebra over subsystem-structured states
//!   ([`linalg`], [`state`]);
//! - local-unitary canonical forms for two-qubit factors ([`canonical`]);
//! - the zero-marginal nullspace and a numerical feasibility oracle that
//!   searches for a distinct compatible state ([`compat`]);
//! - the analytic decision engine with one rule per characterization result
//!   ([`decide`]);
//! - constructive counterexample witnesses and a universal validator
//!   ([`witness`]);
//! - observable-count formulas for four tomography protocols ([`cost`]);
//! - JSON state documents and named state families ([`io`]).
//!
//! The `uda` binary exposes all of it on the command line.

pub mod canonical;
pub mod compat;
pub mod cost;
pub mod decide;
pub mod error;
pub mod io;
pub mod linalg;
pub mod sample;
pub mod state;
pub mod tol;
pub mod witness;

pub use error::{Result, UdaError};
pub use state::{MarginalCollection, MultipartiteState, SubsystemSet};
pub use tol::ToleranceConfig;
