//! Complex sparse linear algebra: CSR matrices, Krylov solvers, Arnoldi
//! and reproducible random streams. No global state; everything here is
//! reentrant.

pub mod arnoldi;
pub mod rng;
pub mod solver;
pub mod sparse;
pub mod vecops;

pub use arnoldi::{arnoldi, arnoldi_with, hessenberg_eigen, ArnoldiOptions, RitzPair, RitzSet};
pub use rng::{rng_stream, RngStream};
pub use solver::{solve, solve_from, solve_hermitian, Solution, SolverOptions};
pub use sparse::SparseMatrix;

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;

/// `y = A x` for a compressed sparse row matrix.
pub fn spmv(a: &SparseMatrix, x: &[C64]) -> crate::Result<Vec<C64>> {
    a.spmv(x)
}
