//! Reduced row echelon form over F2, method-of-four-Russians style.
//!
//! Columns are processed one 64-bit word at a time. For each word the pivot
//! rows are picked by a cheap scan over that word alone, reduced against each
//! other, and then eliminated from every other row through lookup tables of
//! all XOR combinations of up to eight pivot rows. Each pass over the matrix
//! therefore clears up to 64 pivot columns instead of one.

use rayon::prelude::*;

use super::matrix::BitMatrix;
use super::vector::{BitVector, WORD_BITS};

const GROUP: usize = 8;

/// Brings `m` to reduced row echelon form in place and returns the pivot
/// columns in ascending order. Pivot row `k` ends up at row index `k`.
pub(crate) fn rref(m: &mut BitMatrix) -> Vec<usize> {
    let rows = m.rows();
    let cols = m.cols();
    let stride = m.stride();
    let mut pivots = Vec::new();
    let mut r = 0;

    for w in 0..stride {
        if r == rows {
            break;
        }
        let width = (cols - w * WORD_BITS).min(WORD_BITS);

        // Pick rows whose word `w` spans the word-`w` row space of rows r.. .
        let mut basis = [0u64; WORD_BITS];
        let mut have = 0u64;
        let mut chosen = Vec::with_capacity(width);
        for i in r..rows {
            let mut x = m.row_words(i)[w];
            while x != 0 {
                let b = x.trailing_zeros() as usize;
                if (have >> b) & 1 == 1 {
                    x ^= basis[b];
                } else {
                    break;
                }
            }
            if x != 0 {
                let b = x.trailing_zeros() as usize;
                basis[b] = x;
                have |= 1 << b;
                chosen.push(i);
                if chosen.len() == width {
                    break;
                }
            }
        }
        if chosen.is_empty() {
            continue;
        }
        let p = chosen.len();
        for (k, &i) in chosen.iter().enumerate() {
            m.swap_rows(r + k, i);
        }

        // Gauss-Jordan among the selected rows; they are zero before word `w`.
        let pivot_bits: Vec<usize> = (0..WORD_BITS).filter(|b| (have >> b) & 1 == 1).collect();
        for (t, &b) in pivot_bits.iter().enumerate() {
            let src = (r + t..r + p)
                .find(|&i| (m.row_words(i)[w] >> b) & 1 == 1)
                .expect("selected rows span every pivot column");
            m.swap_rows(r + t, src);
            for i in r..r + p {
                if i != r + t && (m.row_words(i)[w] >> b) & 1 == 1 {
                    m.xor_row_into(r + t, i);
                }
            }
        }

        // Combination tables, one per group of up to eight pivot rows.
        let tail = stride - w;
        let groups: Vec<(Vec<usize>, Vec<u64>)> = pivot_bits
            .chunks(GROUP)
            .enumerate()
            .map(|(g, bits)| {
                let base = r + g * GROUP;
                let size = 1usize << bits.len();
                let mut table = vec![0u64; size * tail];
                for mask in 1..size {
                    let low = mask.trailing_zeros() as usize;
                    let prev = mask & (mask - 1);
                    let src = &m.row_words(base + low)[w..];
                    for k in 0..tail {
                        table[mask * tail + k] = table[prev * tail + k] ^ src[k];
                    }
                }
                (bits.to_vec(), table)
            })
            .collect();

        let (lo, hi) = (r, r + p);
        m.data_mut().par_chunks_mut(stride).enumerate().for_each(|(i, row)| {
            if i >= lo && i < hi {
                return;
            }
            let x = row[w];
            if x & have == 0 {
                return;
            }
            for (bits, table) in &groups {
                let mut idx = 0usize;
                for (k, &b) in bits.iter().enumerate() {
                    idx |= (((x >> b) & 1) as usize) << k;
                }
                if idx != 0 {
                    let t = &table[idx * tail..(idx + 1) * tail];
                    for (d, s) in row[w..].iter_mut().zip(t) {
                        *d ^= s;
                    }
                }
            }
        });

        pivots.extend(pivot_bits.iter().map(|b| w * WORD_BITS + b));
        r += p;
    }
    pivots
}

/// Reduced echelon basis of the vectors orthogonal to every row of `a`.
pub(crate) fn kernel_basis(a: &BitMatrix) -> Vec<BitVector> {
    let cols = a.cols();
    let (reduced, pivots) = a.rref();
    let mut is_pivot = vec![false; cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    // Transposing once makes "which pivot rows have a one in column f" a row read.
    let pivot_part = reduced.submatrix(0, 0, pivots.len(), cols).transpose();
    let mut basis = Vec::with_capacity(cols - pivots.len());
    for f in (0..cols).filter(|&c| !is_pivot[c]) {
        let mut x = BitVector::unit(cols, f);
        if !pivots.is_empty() {
            for k in pivot_part.row(f).ones() {
                x.set(pivots[k], true);
            }
        }
        basis.push(x);
    }
    canonical_basis(&basis)
}

/// Reduced row echelon form of the span of `vectors`, as a list of rows.
pub(crate) fn canonical_basis(vectors: &[BitVector]) -> Vec<BitVector> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let m = BitMatrix::from_rows(vectors).expect("vectors share a length");
    let (reduced, pivots) = m.rref();
    (0..pivots.len()).map(|i| reduced.row(i)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Textbook one-column-at-a-time Gauss-Jordan, used as a reference.
    fn naive_rref(m: &BitMatrix) -> (BitMatrix, Vec<usize>) {
        let mut m = m.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols() {
            let Some(src) = (r..m.rows()).find(|&i| m.get(i, c)) else {
                continue;
            };
            m.swap_rows(r, src);
            for i in 0..m.rows() {
                if i != r && m.get(i, c) {
                    m.xor_row_into(r, i);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    #[test]
    fn matches_naive_elimination() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for &(rows, cols) in &[(1, 1), (5, 3), (3, 5), (70, 70), (130, 200), (200, 130)] {
            for density in [1u32, 2, 8] {
                let m = BitMatrix::from_fn(rows, cols, |_, _| rand::Rng::gen_ratio(&mut rng, 1, density));
                let (fast, fp) = m.rref();
                let (slow, sp) = naive_rref(&m);
                assert_eq!(fp, sp);
                assert_eq!(fast, slow, "rref differs for {rows}x{cols}");
            }
        }
    }

    #[test]
    fn low_rank_products() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let a = BitMatrix::random(150, 37, &mut rng);
        let b = BitMatrix::random(37, 190, &mut rng);
        let p = a.mul(&b).unwrap();
        assert!(p.rank() <= 37);
        assert_eq!(p.rref().0, naive_rref(&p).0);
    }

    #[test]
    fn kernel_examples() {
        assert!(BitMatrix::identity(3).solve_homogeneous().is_empty());
        let k = BitMatrix::zeros(2, 4).solve_homogeneous();
        assert_eq!(k.len(), 4);
        for (i, v) in k.iter().enumerate() {
            assert_eq!(*v, BitVector::unit(4, i));
        }
        let a = BitMatrix::from_rows(&["110".parse().unwrap(), "000".parse().unwrap()]).unwrap();
        let k: Vec<String> = a.solve_homogeneous().iter().map(|v| v.to_string()).collect();
        assert_eq!(k, vec!["110", "001"]);
    }
}
