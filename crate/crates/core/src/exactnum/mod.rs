//! Exact arithmetic and integer-lattice linear algebra.

mod lattice;
pub mod lp;
mod matrix;

pub use lattice::{
    hermite_normal_form, lattice_basis, lattice_index, lattice_rank_and_index, smith_normal_form,
    IntMatrix, LatticeIndex, SmithForm,
};
pub use matrix::{dot, solve_rational_system, Matrix, Solution};
