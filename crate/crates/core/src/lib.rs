//! Nonstochastic information over finite uncertain variables, zero-error
//! codes for multiple access channels, and distributed state estimation over
//! such channels.

pub mod estimator;
pub mod geometry;
pub mod mac;
pub mod uv;
pub mod zec;
