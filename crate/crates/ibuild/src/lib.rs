//! Strongly regular hyperbolic elements of Euclidean buildings, computed in
//! the Bruhat-Tits building of `SL_n(Q_p)` at finite precision.
//!
//! Layers, bottom up: [`coxeter`] (exact Weyl group combinatorics),
//! [`padic`] (capped relative precision scalars), [`building`] (matrix
//! decompositions and ideal simplices), [`dynamics`] (classification and
//! boundary limits) and [`chabauty`] (limits of conjugated subgroups).

pub mod building;
pub mod chabauty;
pub mod coxeter;
pub mod dynamics;
pub mod matrix;
pub mod padic;
pub mod tolerances;
