//! Translation-based cipher components.
//!
//! Coordinates `1..=N` are split into `b` bricks of `m` consecutive
//! coordinates each. A wall is the span of a proper nonempty set of bricks,
//! and a mixing layer is proper when it leaves no wall invariant.

mod cipher;
mod oracle;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, Permutation};

pub use cipher::{Round, SBox, TbCipherSpec};
pub use oracle::CircAffineOracle;

/// Images `i λ_P` of the PRESENT bit permutation, 1-indexed.
pub const PRESENT_PERMUTATION: [usize; 64] = [
    1, 17, 33, 49, 2, 18, 34, 50, 3, 19, 35, 51, 4, 20, 36, 52, //
    5, 21, 37, 53, 6, 22, 38, 54, 7, 23, 39, 55, 8, 24, 40, 56, //
    9, 25, 41, 57, 10, 26, 42, 58, 11, 27, 43, 59, 12, 28, 44, 60, //
    13, 29, 45, 61, 14, 30, 46, 62, 15, 31, 47, 63, 16, 32, 48, 64,
];

/// Transpositions that move the fixed points 1, 22, 43 of `λ_P` next to 64.
pub const PRESENT_PI_CYCLES: [[usize; 2]; 3] = [[1, 61], [22, 62], [43, 63]];

pub fn present_permutation() -> Permutation {
    Permutation::from_images(PRESENT_PERMUTATION.to_vec()).expect("table is a bijection")
}

/// The 64 × 64 PRESENT mixing layer.
pub fn present_mixing_layer() -> BitMatrix {
    present_permutation().to_matrix()
}

pub fn present_pi_permutation() -> Permutation {
    let cycles: Vec<&[usize]> = PRESENT_PI_CYCLES.iter().map(|c| &c[..]).collect();
    Permutation::from_cycles(64, &cycles).expect("disjoint transpositions")
}

/// The conjugator bringing the PRESENT layer into block form with `d = 4`.
pub fn present_pi() -> BitMatrix {
    present_pi_permutation().to_matrix()
}

/// Largest brick count for exhaustive wall enumeration.
pub const MAX_BRICKS: usize = 24;

/// Verdict of the wall check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Properness {
    pub proper: bool,
    /// Walls examined before stopping (all `2^b − 2` when proper).
    pub walls_checked: u64,
    /// Bricks (1-indexed) of the first invariant wall found.
    pub witness: Option<Vec<usize>>,
}

/// Checks every wall of the `b`-brick decomposition for `λ`-invariance.
///
/// Walls are visited in increasing order of their brick bitmask (brick 1 is
/// the least significant bit), so the witness is deterministic.
pub fn is_proper_mixing_layer(lam: &BitMatrix, b: usize, m: usize) -> Result<Properness> {
    if b == 0 || m == 0 {
        return Err(Error::InvalidParameter("brick count and size must be positive".into()));
    }
    if b > MAX_BRICKS {
        return Err(Error::InvalidParameter(format!(
            "wall enumeration is limited to {MAX_BRICKS} bricks, got {b}"
        )));
    }
    let big_n = b * m;
    if !lam.is_square() || lam.rows() != big_n {
        return Err(Error::DimensionMismatch {
            context: "mixing layer size (bricks * brick size)",
            expected: big_n,
            found: lam.rows(),
        });
    }
    if lam.rank() < big_n {
        return Err(Error::Singular);
    }
    // reach[i]: bricks hit by the images of brick i's basis vectors.
    let reach: Vec<u32> = (0..b)
        .map(|i| {
            let mut mask = 0u32;
            for r in i * m..(i + 1) * m {
                for c in lam.row(r).ones() {
                    mask |= 1 << (c / m);
                }
            }
            mask
        })
        .collect();
    let full: u32 = if b == 32 { u32::MAX } else { (1 << b) - 1 };
    let invariant = |wall: u32| {
        let mut bits = wall;
        while bits != 0 {
            let i = bits.trailing_zeros() as usize;
            if reach[i] & !wall != 0 {
                return false;
            }
            bits &= bits - 1;
        }
        true
    };
    let found = (1..full).into_par_iter().find_first(|&w| invariant(w));
    Ok(match found {
        Some(w) => Properness {
            proper: false,
            walls_checked: w as u64,
            witness: Some((0..b).filter(|i| (w >> i) & 1 == 1).map(|i| i + 1).collect()),
        },
        None => Properness {
            proper: true,
            walls_checked: full as u64 - 1,
            witness: None,
        },
    })
}
