//! Bit-packed dense linear algebra over F2.

mod echelon;
mod matrix;
mod vector;

pub use matrix::{BitMatrix, Permutation};
pub(crate) use vector::low_mask;
pub use vector::BitVector;

pub(crate) use echelon::canonical_basis;
pub(crate) use matrix::parse_bit_row;
