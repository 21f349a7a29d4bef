//! Numerical floors and tolerances shared across the crate.
//!
//! All values are absolute unless a doc comment says otherwise.

/// Default smallest admissible eigenvalue of a reference state.
pub const INVERTIBILITY_FLOOR: f64 = 1e-6;

/// Smallest eigenvalue of `φ(B)` for `φ` to count as strict at `B`.
pub const STRICTNESS_FLOOR: f64 = 1e-8;

/// Entry asymmetry accepted for Hermitian inputs, relative to `max(1, max |x_ij|)`.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Negative eigenvalues down to this (relative to `max(1, spectral radius)`)
/// are treated as rounding and clamped to zero.
pub const EIGEN_CLAMP: f64 = 1e-12;

/// Admissible deviation of `τ(A)` from 1 for a state.
pub const STATE_TRACE_TOL: f64 = 1e-10;

/// Normalization tolerance for `Σ w_i n_i = 1`.
pub const WEIGHT_SUM_TOL: f64 = 1e-12;

/// Off-block residual accepted when projecting a channel output.
pub const BLOCK_LEAK_TOL: f64 = 1e-11;

/// Choi eigenvalue floor for complete positivity.
pub const CHOI_FLOOR: f64 = -1e-10;

/// Weighted trace-preservation residual.
pub const TRACE_PRESERVATION_TOL: f64 = 1e-10;

/// Choi eigenvalues below this abort Kraus extraction instead of clamping.
pub const CHOI_BREAKDOWN: f64 = -1e-8;

/// Slack granted to operator-norm contraction preconditions.
pub const CONTRACTION_TOL: f64 = 1e-10;
