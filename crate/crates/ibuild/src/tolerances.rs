//! Precision margins used by checks across modules, in p-adic digits.

/// Default relative precision `N`.
pub const DEFAULT_PRECISION: u32 = 32;

/// Decomposition round trips must agree to `N - RECOMPOSE_SLACK` digits
/// relative to the scale of the input.
pub const RECOMPOSE_SLACK: i64 = 2;

/// Limits (boundary dynamics and Chabauty) must agree to `N - LIMIT_SLACK`.
pub const LIMIT_SLACK: i64 = 4;

/// Minimum number of trailing trace terms that must agree before a
/// sequence is accepted as convergent.
pub const CAUCHY_TAIL: usize = 6;

/// Default iteration budget for boundary dynamics.
pub const DEFAULT_MAX_N: usize = 64;

/// Conjugation window used by the boundedness test.
pub const LEVI_WINDOW: i64 = 20;
