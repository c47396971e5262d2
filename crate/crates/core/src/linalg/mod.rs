//! Exact linear algebra over Q (sparse echelon forms, kernels, intersections) and over Z
//! (Hermite normal form, integer kernels, saturation).

mod integer;
pub(crate) mod matrix;

pub use integer::{hermite_normal_form, integer_left_kernel, saturate, to_bigint_rows};
pub use matrix::{
    axpy, dense_to_sparse, int_to_rational, sparse_dot, sparse_entry, sparse_scale,
    sparse_to_dense, SparseRationalMatrix, SparseVec, SubspaceBasis,
};

#[cfg(test)]
mod tests;
