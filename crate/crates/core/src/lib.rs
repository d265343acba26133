//! Practical hidden sums over `V = (F2)^N`.
//!
//! A hidden sum is an alternative vector-space addition `∘` on `V` whose
//! translation group is an elementary abelian regular group. The practical
//! ones are exactly the operations whose translations are affine for the
//! ordinary XOR, and in canonical form they are described by `n` binary
//! `n × d` blocks (`N = n + d`).
//!
//! The crate covers:
//!
//! * [`gf2`]: packed F2 vectors and matrices (row-vector convention `v·A`).
//! * [`hiddensum`]: the canonical representation, `∘` arithmetic, validation,
//!   and coordinates with respect to the canonical `∘`-basis.
//! * [`census`]: exact and closed-form counts, bounds, Gaussian binomials.
//! * [`linearize`]: every practical hidden sum that makes a given block-form
//!   linear map `∘`-linear, as the kernel of one binary linear system.
//! * [`tbcipher`]: the PRESENT mixing layer, wall checks, and a toy
//!   translation-based cipher.
//! * [`attack`]: recovery of a `∘`-affine black box from `N + 1` queries.
//! * [`cli`]: the `hsum` command-line front end.

pub mod attack;
pub mod census;
pub mod cli;
mod error;
pub mod gf2;
pub mod hiddensum;
pub mod linearize;
pub mod tbcipher;

pub use error::{Error, Result};
pub use gf2::{BitMatrix, BitVector, Permutation};
pub use hiddensum::HiddenSum;
