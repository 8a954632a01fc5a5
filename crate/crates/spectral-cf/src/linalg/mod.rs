//! Dense Hermitian linear algebra: spectral decomposition, `e^{itH}`, resolvent solves.

mod decomposition;
mod operator;
mod resolvent;

pub use decomposition::{
    charfun_exact, decompose, decompose_with_tol, matrix_exp_it, spectral_measure, SpectralDecomposition,
    MERGE_RTOL,
};
pub use operator::{max_abs, CMatrix, CVector, HermitianOperator, StateVector, C64, HERMITIAN_TOL, NORM_TOL};
pub use resolvent::{shifted_solve, ComplexLu, Lanczos, SOLVE_RTOL};

pub(crate) use operator::{real, I};
