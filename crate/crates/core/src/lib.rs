//! Simulation and synchronization analysis for the time-delayed Kuramoto
//! model on directed graphs.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod certificates;
pub mod cli;
pub mod diagnostics;
pub mod error;
pub mod graph;
pub mod integrator;
pub mod model;
pub mod scenario;

pub use error::{Error, Result};
