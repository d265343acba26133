//! Moving an arbitrary `U` onto the last `d` coordinates.

use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector};

/// Returns an invertible `g` with `u_k · g = e_{n+k}` for each basis vector.
///
/// The basis is completed greedily with `e_1, e_2, …` (the first standard
/// vectors outside the current span), so canonical input gives `g = I`.
pub fn canonicalizing_map(u_basis: &[BitVector], big_n: usize) -> Result<BitMatrix> {
    let d = u_basis.len();
    if d == 0 || d >= big_n {
        return Err(Error::InvalidParameter(format!(
            "need 1 <= d <= N-1 basis vectors, got {d} for N={big_n}"
        )));
    }
    for u in u_basis {
        if u.len() != big_n {
            return Err(Error::DimensionMismatch {
                context: "canonicalizing_map basis vector",
                expected: big_n,
                found: u.len(),
            });
        }
    }

    // Echelon rows keyed by their lowest set coordinate.
    let mut span: Vec<Option<BitVector>> = vec![None; big_n];
    let mut insert = |v: &BitVector| -> bool {
        let mut x = v.clone();
        while let Some(p) = x.leading_one() {
            match &span[p] {
                Some(row) => x ^= row,
                None => {
                    span[p] = Some(x);
                    return true;
                }
            }
        }
        false
    };
    for u in u_basis {
        if !insert(u) {
            return Err(Error::DependentVectors);
        }
    }
    let mut rows: Vec<BitVector> = Vec::with_capacity(big_n);
    for k in 0..big_n {
        if rows.len() == big_n - d {
            break;
        }
        let e = BitVector::unit(big_n, k);
        if insert(&e) {
            rows.push(e);
        }
    }
    rows.extend(u_basis.iter().cloned());
    // Row k of M is mapped to e_k by M⁻¹.
    BitMatrix::from_rows(&rows)?.invert()
}
