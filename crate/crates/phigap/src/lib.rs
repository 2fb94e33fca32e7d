//! Exact homological invariants of radical square zero algebras.
//!
//! A finite quiver `Q` presents the algebra `A = kQ/J²`, whose projective
//! radicals are semisimple. This crate computes, with exact integer
//! arithmetic throughout: the Igusa-Todorov functions φ and ψ of explicit
//! module classes, the φ-dimension and its partial variants, global and
//! finitistic dimension, self-injectivity via the socle rule, the kernel
//! filtration of the transfer matrix, and admissible-value/gap profiles of
//! the φ function.
//!
//! The scalar type of the linear algebra core is generic (see
//! [`scalar::Scalar`]); the aliases below fix it to arbitrary-precision
//! integers, which the public API uses everywhere.

#![forbid(unsafe_code)]

pub mod algebra;
pub mod explore;
pub mod gaps;
pub mod igusa_todorov;
pub mod linalg;
pub mod quiver;
pub mod regress;
pub mod report;
pub mod scalar;

pub use scalar::Scalar;

/// Arbitrary-precision integer, the default scalar.
pub type Int = num_bigint::BigInt;
/// Integer matrix with arbitrary-precision entries.
pub type IntMatrix = linalg::Matrix<Int>;
/// Canonical integer basis of a rational subspace.
pub type IntSubspace = linalg::SubspaceBasis<Int>;
/// Kernel filtration over the default scalar.
pub type IntKernelFiltration = linalg::KernelFiltration<Int>;
