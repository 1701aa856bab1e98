//! Exact lots for the card game Le Her, the problem of the pool, and the
//! parity game Les Étrennes.
//!
//! Every probability, lot, and game value is computed as an exact
//! [`Rational`]. Floating point only appears in Monte Carlo estimates and in
//! decimal annotations meant for humans.

pub mod cli;
pub mod error;
pub mod etrennes;
pub mod leher;
pub mod linalg;
pub mod montecarlo;
pub mod pool;
pub mod rational;
pub mod report;
pub mod solver;

pub use error::{Error, Result};
pub use rational::Rational;
