//! Fixed numerical constants and default caps.

/// Amplitudes with magnitude below this are dropped from sparse states.
pub const AMPLITUDE_PRUNE: f64 = 1e-15;

/// Allowed deviation of a pure state's norm (and mixture weights) from 1.
pub const NORM_TOL: f64 = 1e-12;

/// Input norm deviation above which a pure state is flagged as renormalized.
pub const RENORMALIZE_FLAG: f64 = 1e-9;

/// Hermiticity, trace and positivity tolerance for dense density matrices.
pub const DENSE_TOL: f64 = 1e-10;

/// Default cap on the total Hilbert-space dimension of dense matrices.
pub const DENSE_CAP: usize = 4096;

/// Default cap on the two-copy dimension `D^2` used by the dense oracle.
pub const TWO_COPY_CAP: usize = 1024;

/// Largest site count for which the full proper-subset sum is evaluated.
pub const SUBSET_SUM_MAX_SITES: usize = 24;

/// Largest site count accepted by the subset enumerator.
pub const SUBSET_ENUM_MAX_SITES: usize = 30;

/// Eigenvalue pairs whose sum is at or below this are skipped in the QFI sum.
pub const QFI_PAIR_SKIP: f64 = 1e-12;

/// Default bisection tolerance in parameter distance.
pub const BISECT_TOL: f64 = 1e-6;

/// Default sweep grid resolution.
pub const GRID_RESOLUTION: usize = 201;

/// Relative violation tolerance: a criterion is violated when
/// `lhs - rhs > VIOLATION_REL_TOL * (1 + |lhs| + |rhs|)`.
pub const VIOLATION_REL_TOL: f64 = 1e-9;
