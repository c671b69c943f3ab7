//! Explicit integer witnesses for linear matroids with a prescribed number of
//! bases.
//!
//! A linear matroid of rank `r` on `n = r + k` elements is represented by
//! `A = (I_r | M)` with `M` an `r x k` integer matrix; its bases correspond to
//! the invertible square submatrices of `M`. [`solver::solve`] builds `M` for a
//! requested count and recounts it exactly before returning.

pub mod binomial;
pub mod combinations;
pub mod corank2;
pub mod corank3;
pub mod counting;
pub mod data;
pub mod decomposition;
pub mod error;
pub mod io;
pub mod linalg;
pub mod par;
pub mod regular;
pub mod solver;

pub use counting::{count_bases_direct, count_square_invertible, BasisCount};
pub use error::{Error, Result};
pub use linalg::IntMatrix;
pub use solver::{solve, SolveOutcome, Witness};
