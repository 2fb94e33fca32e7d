//! Exact linear algebra over the integers.
//!
//! Everything here computes over the rationals but stores integers only:
//! subspaces are held in an integer-scaled reduced echelon form with
//! primitive rows and positive leading entries, which is a unique
//! representative of the subspace and therefore gives decidable subspace
//! equality.

mod echelon;
mod filtration;
mod matrix;
mod subspace;

pub(crate) use echelon::Echelon;
pub use echelon::Overflow;
pub use filtration::{iterated_image_ranks, kernel_filtration, KernelFiltration};
pub use matrix::{exact_rank, kernel_basis, Matrix, NonSquare};
pub use subspace::SubspaceBasis;
