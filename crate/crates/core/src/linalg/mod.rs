//! Exact linear algebra over Z and F_p.

mod fp;
mod integer;
mod sparse;

pub use fp::{inverse_mod, pow_mod, FpMatrix, KernelBasis};
pub use integer::{lattice_cokernel, smith_diagonal, smith_normal_form, IntegerMatrix, SmithDecomposition};
pub use sparse::{fp_column, sparse_axpy, sparse_kernel, sparse_rank, FpColumnReducer, SparseMatrix, SparseVec};
