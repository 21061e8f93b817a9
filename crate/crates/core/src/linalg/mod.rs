//! Small dense complex linear algebra.

mod eig;
mod expm;
mod kron;
mod matrix;
mod partial_trace;
mod state;

pub use eig::{hermitian_eig, hermitian_eig_with, singular_values, EigenDecomposition};
pub use expm::{expm_multiply_series, matrix_exp_series};
pub use kron::{site_operator, tensor_product, tensor_product_capped};
pub use matrix::{pauli, ComplexMatrix};
pub use partial_trace::partial_trace;
pub use state::{DensityMatrix, StateVector};
