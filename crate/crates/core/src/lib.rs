//! Detection of k-partite entanglement and k-nonseparability in multipartite
//! density operators.
//!
//! The crate evaluates two-copy permutation inequalities built from single-copy
//! matrix elements against product fiducials, compares them with
//! Fisher-information, collective-variance and density-element baselines, and
//! sweeps two-parameter state families to extract detection thresholds.
//!
//! Module map:
//!
//! - [`qstate`]: dimensions, product labels and vectors, sparse pure states,
//!   dense and structured mixed states, the GHZ and W-qutrit families.
//! - [`twocopy`]: swap and partial-swap expectation values and their dense
//!   two-copy oracle.
//! - [`criteria`]: the swap-type and element-type inequalities with verdicts.
//! - [`baselines`]: quantum Fisher information, SU(d) variance and density
//!   element comparison criteria.
//! - [`ensembles`]: random k-producible and k-separable states.
//! - [`sweep`]: margin grids, radial threshold bisection, CSV/SVG export.
//! - [`observables`]: local-observable decompositions of the measured
//!   quantities.

pub mod baselines;
pub mod config;
pub mod criteria;
pub mod ensembles;
mod error;
pub mod observables;
pub mod qstate;
pub mod sweep;
pub mod twocopy;

pub use error::{Error, Result};

/// Double-precision complex scalar used throughout.
pub type C64 = num_complex::Complex64;
