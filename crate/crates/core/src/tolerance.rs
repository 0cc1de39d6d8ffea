//! Numerical tolerances shared across the crate.

/// Norm deviation allowed for a state after construction or propagation.
pub const STATE_NORM: f64 = 1e-10;

/// Tolerance used by state-level equality checks in tests and validators.
pub const STATE_CHECK: f64 = 1e-8;

/// Unitarity tolerance for propagators and rotations.
pub const UNITARITY: f64 = 1e-10;

/// Reality, positivity and symmetry tolerance of true MQC intensities.
pub const SPECTRUM_INVARIANT: f64 = 1e-9;

/// Normalization tolerance of an MQC spectrum against `F(0)`.
pub const SPECTRUM_SUM: f64 = 1e-8;

/// Slack allowed on FOTOC values outside `[0, 1]`.
pub const FOTOC_RANGE: f64 = 1e-12;

/// Default Lanczos residual target.
pub const LANCZOS_RESIDUAL: f64 = 1e-10;

/// Tighter Lanczos residual used for finite-difference scans.
pub const LANCZOS_SCAN_RESIDUAL: f64 = 1e-12;

/// Local error target of one Krylov exponential sub-step.
pub const KRYLOV_LOCAL_ERROR: f64 = 1e-10;

/// Default finite-difference step in `Omega/chi`.
pub const FD_STEP: f64 = 1e-4;

/// Default cap on the number of spins for bitstring models.
pub const DEFAULT_BITSTRING_CAP: usize = 24;
