//! Mittag-Leffler functions, linearized stability and the Lyapunov–Perron
//! contraction for Caputo systems `D^α x = A x + f(x)` of order 1 < α < 2.

// NaN-rejecting checks are written as `!(x > 0.0)` on purpose
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
mod dd;
pub mod error;
pub mod fde_solver;
pub mod flaw_audit;
pub mod gamma;
pub mod io;
pub mod ml_matrix;
pub mod ml_scalar;
pub mod perron;
pub mod polynomial;
pub mod spectral_stability;

pub use error::{Error, Result};
