//! Speed limits for quantum gates under realistic control constraints.
//!
//! The crate combines analytic pulse constructions for standard one-, two-
//! and three-qubit gates with gradient-ascent pulse optimization over
//! piecewise-constant controls, extracts minimum gate times from
//! fidelity-vs-time data, and bounds quantum state transfer across qubit
//! chains with spin-wave analytics plus a single-excitation simulator.

pub mod exec;
pub mod linalg;
pub mod model;

pub use linalg::{CMatrix, C64};
