//! Dense real and complex kernels: Cholesky, Hermitian solves, symmetric
//! eigenpairs.

mod cholesky;
mod eigen;
mod matrix;

pub use cholesky::{cholesky_upper, cholesky_upper_hermitian, hermitian_solve, hermitian_solve_vec, PIVOT_RTOL};
pub use eigen::{
    canonicalize_phase, canonicalize_sign, hermitian_max_eigenpair, jacobi_eigen, max_eigenpair, SymmetricEigen,
    POWER_MAX_ITER, POWER_TOL, RESIDUAL_TOL,
};
pub use matrix::{cnorm2, dot, norm2, ComplexMatrix, RealMatrix};
