//! Spectral toolkit for the Bloch-Torrey operator `-Δ + i g x` on planar
//! domains perforated by a periodic lattice of convex holes.
//!
//! The operator is never discretized with its unbounded potential on a
//! periodic cell. Instead, the potential is gauged away into a drifting
//! x-quasimomentum `p(t) = p0 - g t`; integrating the resulting Hermitian,
//! time-dependent cell problem over one period `t_g = 2π/g` and realigning
//! the gauge yields a monodromy operator whose eigenvalues `μ` give the
//! spectrum through `λ = -Log(μ)/t_g + i g Z`.
//!
//! Modules, bottom-up:
//! - [`geometry`]: hole shapes and masked grids (torus cell, truncated strip)
//! - [`numcore`]: sparse matrices, Krylov solvers, Arnoldi, random streams
//! - [`operators`]: Bloch cell operator and strip Bloch-Torrey operator
//! - [`propagator`]: Crank-Nicolson monodromy and strip semigroup
//! - [`spectra`]: branch unfolding, sweeps, oracles, cross-checks,
//!   eigenfunction reconstruction, pseudospectra, Airy asymptotics
//! - [`cli`]: run configuration, orchestration and output files

// `!(a <= b)` is used on purpose so that NaN fails the comparison
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod geometry;
pub mod numcore;
pub mod operators;
pub mod propagator;
pub mod spectra;

pub use error::{Error, Result};
pub use numcore::C64;

/// Version string embedded in every output file.
pub const TOOL_VERSION: &str = concat!(env!("CARGO_PKG_NAME"), " ", env!("CARGO_PKG_VERSION"));
