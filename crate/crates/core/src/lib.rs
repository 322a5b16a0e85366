//! Exact classification of special isogenous symplectic tori and their
//! rigid-analytic mirrors, plus strictification of coherent actions of finite
//! groups.
//!
//! All arithmetic is exact: big integers and rationals throughout, no floats.

pub mod analytic;
pub mod congruence;
pub mod equivalence;
pub mod error;
pub mod exactint;
pub mod strictify;
pub mod symptorus;
pub mod wire;

pub use error::{Error, Result};
