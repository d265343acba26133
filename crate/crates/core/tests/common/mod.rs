//! Naive reference implementations used as test oracles. Apart from
//! `linear_on_all_pairs_packed`, nothing here calls the library's packed
//! arithmetic or elimination routines.
#![allow(dead_code)]

use hidden_sums::{BitMatrix, BitVector, HiddenSum};

/// Dense 0/1 matrix, one `Vec<u8>` per row.
pub type Dense = Vec<Vec<u8>>;

pub fn dense(m: &BitMatrix) -> Dense {
    (0..m.rows())
        .map(|r| (0..m.cols()).map(|c| m.get(r, c) as u8).collect())
        .collect()
}

pub fn bits(v: &BitVector) -> Vec<u8> {
    (0..v.len()).map(|i| v.get(i) as u8).collect()
}

pub fn from_bits(b: &[u8]) -> BitVector {
    BitVector::from_fn(b.len(), |i| b[i] == 1)
}

/// Schoolbook Gaussian elimination over F2 on byte rows.
pub fn naive_rank(m: &Dense) -> usize {
    let mut m = m.clone();
    let cols = m.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| m[i][c] == 1) else {
            continue;
        };
        m.swap(r, p);
        let pivot = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && row[c] == 1 {
                for (x, p) in row.iter_mut().zip(&pivot) {
                    *x ^= p;
                }
            }
        }
        r += 1;
    }
    r
}

/// `x · M` by the definition.
pub fn naive_vec_mul(x: &[u8], m: &Dense) -> Vec<u8> {
    let cols = m.first().map_or(0, |r| r.len());
    (0..cols)
        .map(|c| (0..x.len()).fold(0, |acc, k| acc ^ (x[k] & m[k][c])))
        .collect()
}

pub fn naive_mat_mul(a: &Dense, b: &Dense) -> Dense {
    a.iter().map(|row| naive_vec_mul(row, b)).collect()
}

/// `x ∘ a = x + a + (0, x̄ · B_a)` read straight off the blocks.
pub fn naive_circ(hs: &HiddenSum, x: &[u8], a: &[u8]) -> Vec<u8> {
    let (n, d) = (hs.n(), hs.d());
    let mut out: Vec<u8> = x.iter().zip(a).map(|(p, q)| p ^ q).collect();
    for c in 0..d {
        let mut bit = 0;
        for (i, _) in a[..n].iter().enumerate().filter(|(_, &ai)| ai == 1) {
            for (j, &xj) in x[..n].iter().enumerate() {
                bit ^= xj & hs.block(i).get(j, c) as u8;
            }
        }
        out[n + c] ^= bit;
    }
    out
}

pub fn to_u64(b: &[u8]) -> u64 {
    b.iter().enumerate().fold(0, |acc, (i, &x)| acc | ((x as u64) << i))
}

pub fn from_u64(len: usize, v: u64) -> Vec<u8> {
    (0..len).map(|i| ((v >> i) & 1) as u8).collect()
}

/// Packed rows of a square matrix with at most 64 columns.
pub fn packed_rows(m: &BitMatrix) -> Vec<u64> {
    (0..m.rows())
        .map(|r| (0..m.cols()).fold(0u64, |acc, c| acc | ((m.get(r, c) as u64) << c)))
        .collect()
}

pub fn packed_mul(rows: &[u64], x: u64) -> u64 {
    let mut acc = 0;
    let mut x = x;
    while x != 0 {
        let i = x.trailing_zeros() as usize;
        acc ^= rows[i];
        x &= x - 1;
    }
    acc
}

/// Checks `(x ∘ y) λ = xλ ∘ yλ` for every pair; returns the first failure.
pub fn linear_on_all_pairs(hs: &HiddenSum, lam: &BitMatrix) -> Option<(u64, u64)> {
    let big_n = hs.dim();
    let rows = packed_rows(lam);
    for x in 0..1u64 << big_n {
        let xl = packed_mul(&rows, x);
        for y in 0..1u64 << big_n {
            let lhs = packed_mul(&rows, to_u64(&naive_circ(hs, &from_u64(big_n, x), &from_u64(big_n, y))));
            let rhs = to_u64(&naive_circ(
                hs,
                &from_u64(big_n, xl),
                &from_u64(big_n, packed_mul(&rows, y)),
            ));
            if lhs != rhs {
                return Some((x, y));
            }
        }
    }
    None
}

/// Brute-force group-axiom verdict for `x ∘ a` defined by arbitrary blocks:
/// commutative, every element self-inverse, and not plain XOR.
pub struct AxiomCheck {
    pub commutative: bool,
    pub associative: bool,
    pub self_inverse: bool,
    pub differs_from_xor: bool,
}

pub fn check_axioms(hs: &HiddenSum) -> AxiomCheck {
    let big_n = hs.dim();
    let all: Vec<Vec<u8>> = (0..1u64 << big_n).map(|v| from_u64(big_n, v)).collect();
    let op = |x: &[u8], y: &[u8]| naive_circ(hs, x, y);
    let mut res = AxiomCheck {
        commutative: true,
        associative: true,
        self_inverse: true,
        differs_from_xor: false,
    };
    let zero = vec![0u8; big_n];
    for x in &all {
        if op(x, x) != zero {
            res.self_inverse = false;
        }
        for y in &all {
            let xy = op(x, y);
            if xy != op(y, x) {
                res.commutative = false;
            }
            let xor: Vec<u8> = x.iter().zip(y).map(|(p, q)| p ^ q).collect();
            if xy != xor {
                res.differs_from_xor = true;
            }
            if big_n <= 6 {
                for z in &all {
                    if op(&xy, z) != op(x, &op(y, z)) {
                        res.associative = false;
                    }
                }
            }
        }
    }
    res
}

/// `u` such that `x ∘ u = x + u` for every `x`, by exhaustion.
pub fn brute_force_u(hs: &HiddenSum) -> Vec<u64> {
    let big_n = hs.dim();
    (0..1u64 << big_n)
        .filter(|&u| {
            (0..1u64 << big_n).all(|x| to_u64(&naive_circ(hs, &from_u64(big_n, x), &from_u64(big_n, u))) == x ^ u)
        })
        .collect()
}

/// Blocks from a grid of per-cell `d`-bit words (bit `c` is column `c`).
pub fn blocks_from_grid(n: usize, d: usize, grid: &[u64]) -> Vec<BitMatrix> {
    (0..n)
        .map(|i| BitMatrix::from_fn(n, d, |j, c| (grid[i * n + j] >> c) & 1 == 1))
        .collect()
}

/// All symmetric zero-diagonal grids for `(n, d)`, in no particular order.
pub fn all_alternating_grids(n: usize, d: usize) -> Vec<Vec<u64>> {
    let cells: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let total_bits = cells.len() * d;
    assert!(total_bits <= 24, "too many grids to list");
    (0..1u64 << total_bits)
        .map(|code| {
            let mut g = vec![0u64; n * n];
            for (k, &(i, j)) in cells.iter().enumerate() {
                let w = (code >> (k * d)) & ((1u64 << d) - 1);
                g[i * n + j] = w;
                g[j * n + i] = w;
            }
            g
        })
        .collect()
}

/// Rank over F2 of the `n × nd` binary expansion of a grid.
pub fn grid_f2_rank(n: usize, d: usize, grid: &[u64]) -> usize {
    let m: Dense = (0..n)
        .map(|i| {
            (0..n)
                .flat_map(|j| (0..d).map(move |c| ((grid[i * n + j] >> c) & 1) as u8))
                .collect()
        })
        .collect();
    naive_rank(&m)
}

pub fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Same check as [`linear_on_all_pairs`] through the packed operation, for
/// larger sweeps; the packed path is itself checked against [`naive_circ`].
/// Only unordered pairs are visited, so `∘` must be commutative.
pub fn linear_on_all_pairs_packed(hs: &HiddenSum, lam: &BitMatrix) -> Option<(u64, u64)> {
    let big_n = hs.dim();
    let rows = packed_rows(lam);
    let images: Vec<u64> = (0..1u64 << big_n).map(|x| packed_mul(&rows, x)).collect();
    for x in 0..1u64 << big_n {
        for y in x..1u64 << big_n {
            let lhs = images[hs.circ_add_packed(x, y) as usize];
            if lhs != hs.circ_add_packed(images[x as usize], images[y as usize]) {
                return Some((x, y));
            }
        }
    }
    None
}
