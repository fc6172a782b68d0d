//! Exact series machinery for planar piecewise-smooth vector fields split
//! along the line `y = 0`: classification of the tangency at the origin,
//! half-return maps on each side, the period function of the surrounding
//! annulus of closed orbits, and a floating-point integrator used to
//! cross-check the exact output.

pub mod bell;
pub mod error;
pub mod field;
pub mod fixtures;
pub mod half_return;
pub mod mixed;
pub mod oracle;
pub mod period;
pub mod scalar;
pub mod series1;
pub mod series2;

pub use error::{Error, Result};
pub use scalar::ExactScalar;
pub use series1::Series1;
pub use series2::Series2;
