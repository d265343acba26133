//! Practical hidden sums that make a given linear map `∘`-linear.
//!
//! For `λ = [[Λ₁, Λ₂], [0, Λ₃]]` with `Λ₁`, `Λ₃` invertible, a canonical
//! hidden sum linearizes `λ` exactly when `B_{e_i} Λ₃ = Λ₁ B_{e_i λ}` for every
//! `i ≤ n`. Together with the symmetry and zero-diagonal conditions this is a
//! homogeneous binary system in the `n²d` block entries, so the whole solution
//! set is one kernel. Unknown `(i, r, c)` (entry `(r, c)` of `B_{e_i}`) is
//! column `(i·n + r)·d + c`.

mod basis;

use std::time::{Duration, Instant};

use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector, Permutation};
use crate::hiddensum::HiddenSum;

pub use basis::{FullRankEstimate, SolutionBasis, MAX_ENUMERATION_DIM};

/// A linear map in the block shape `[[Λ₁, Λ₂], [0, Λ₃]]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockLinearMap {
    n: usize,
    d: usize,
    lambda1: BitMatrix,
    lambda2: BitMatrix,
    lambda3: BitMatrix,
}

impl BlockLinearMap {
    pub fn new(lambda1: BitMatrix, lambda2: BitMatrix, lambda3: BitMatrix) -> Result<Self> {
        let n = lambda1.rows();
        let d = lambda3.rows();
        if !lambda1.is_square() || !lambda3.is_square() {
            return Err(Error::InvalidParameter("diagonal blocks must be square".into()));
        }
        if lambda2.rows() != n || lambda2.cols() != d {
            return Err(Error::DimensionMismatch {
                context: "Λ₂ shape (rows * cols)",
                expected: n * d,
                found: lambda2.rows() * lambda2.cols(),
            });
        }
        if n < 2 {
            return Err(Error::InvalidParameter(format!("n must be at least 2, got {n}")));
        }
        if lambda1.rank() < n {
            return Err(Error::SingularBlock("Λ₁"));
        }
        if lambda3.rank() < d {
            return Err(Error::SingularBlock("Λ₃"));
        }
        Ok(Self {
            n,
            d,
            lambda1,
            lambda2,
            lambda3,
        })
    }

    /// Splits an `(n+d) × (n+d)` matrix, requiring a zero lower-left block.
    pub fn from_matrix(m: &BitMatrix, n: usize, d: usize) -> Result<Self> {
        let big_n = n + d;
        if m.rows() != big_n || m.cols() != big_n {
            return Err(Error::DimensionMismatch {
                context: "linear map size",
                expected: big_n,
                found: m.rows().max(m.cols()),
            });
        }
        for r in n..big_n {
            if (0..n).any(|c| m.get(r, c)) {
                return Err(Error::NotBlockTriangular { row: r + 1, n });
            }
        }
        Self::new(
            m.submatrix(0, 0, n, n),
            m.submatrix(0, n, n, d),
            m.submatrix(n, n, d, d),
        )
    }

    /// Dense random blocks: `Λ₁ ∈ GL(n)`, `Λ₃ ∈ GL(d)`, arbitrary `Λ₂`.
    pub fn random<R: Rng + ?Sized>(n: usize, d: usize, rng: &mut R) -> Result<Self> {
        let l1 = BitMatrix::random_invertible(n, rng);
        let l2 = BitMatrix::random(n, d, rng);
        let l3 = BitMatrix::random_invertible(d, rng);
        Self::new(l1, l2, l3)
    }

    pub fn to_matrix(&self) -> BitMatrix {
        let mut m = BitMatrix::zeros(self.n + self.d, self.n + self.d);
        m.set_block(0, 0, &self.lambda1);
        m.set_block(0, self.n, &self.lambda2);
        m.set_block(self.n, self.n, &self.lambda3);
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn lambda1(&self) -> &BitMatrix {
        &self.lambda1
    }

    pub fn lambda2(&self) -> &BitMatrix {
        &self.lambda2
    }

    pub fn lambda3(&self) -> &BitMatrix {
        &self.lambda3
    }
}

/// The homogeneous constraint system for one block-form map.
///
/// Rows, in order: `n²d` linearity rows indexed like the unknowns, then `nd`
/// zero-diagonal rows, then `C(n,2)·d` symmetry rows for `i < j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearSystem {
    n: usize,
    d: usize,
    matrix: BitMatrix,
}

impl LinearSystem {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn matrix(&self) -> &BitMatrix {
        &self.matrix
    }

    pub fn rows(&self) -> usize {
        self.matrix.rows()
    }

    pub fn cols(&self) -> usize {
        self.matrix.cols()
    }
}

#[inline]
fn var(n: usize, d: usize, i: usize, r: usize, c: usize) -> usize {
    (i * n + r) * d + c
}

/// Position of the pair `i < j` among all pairs in row-major order.
#[inline]
fn pair_index(n: usize, i: usize, j: usize) -> usize {
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

fn ones_of_rows(m: &BitMatrix) -> Vec<Vec<usize>> {
    (0..m.rows()).map(|r| m.row(r).ones().collect()).collect()
}

pub fn build_system(lam: &BlockLinearMap) -> LinearSystem {
    let (n, d) = (lam.n, lam.d);
    let vars = n * n * d;
    let pairs = n * (n - 1) / 2;
    let rows = vars + n * d + pairs * d;
    let mut m = BitMatrix::zeros(rows, vars);
    let stride = m.stride();

    let l1_rows = ones_of_rows(&lam.lambda1);
    let l3_cols = ones_of_rows(&lam.lambda3.transpose());

    let toggle = |row: &mut [u64], v: usize| row[v / 64] ^= 1u64 << (v % 64);

    // (B_{e_i} Λ₃)(r, c) + Σ_k Λ₁(r, k) Σ_j Λ₁(i, j) B_{e_j}(k, c) = 0.
    m.data_mut()[..vars * stride]
        .par_chunks_mut(stride)
        .enumerate()
        .for_each(|(row_idx, row)| {
            let c = row_idx % d;
            let r = (row_idx / d) % n;
            let i = row_idx / (n * d);
            for &cp in &l3_cols[c] {
                toggle(row, var(n, d, i, r, cp));
            }
            for &k in &l1_rows[r] {
                for &j in &l1_rows[i] {
                    toggle(row, var(n, d, j, k, c));
                }
            }
        });

    let mut row = vars;
    for i in 0..n {
        for c in 0..d {
            m.set(row, var(n, d, i, i, c), true);
            row += 1;
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            for c in 0..d {
                m.set(row, var(n, d, j, i, c), true);
                m.set(row, var(n, d, i, j, c), true);
                row += 1;
            }
        }
    }
    LinearSystem { n, d, matrix: m }
}

/// Kernel of the system as a reduced echelon basis.
///
/// The symmetry and zero-diagonal rows are solved by hand: every solution is
/// determined by the `C(n,2)·d` entries `(i, j, c)` with `i < j`. The
/// linearity rows are rewritten in those unknowns, deduplicated, and only that
/// smaller system goes through elimination. The result equals the kernel of
/// the full system.
pub fn solve(sys: &LinearSystem) -> SolutionBasis {
    let (n, d) = (sys.n, sys.d);
    let vars = n * n * d;
    let pairs = n * (n - 1) / 2;
    let free = pairs * d;

    let reduced_rows: Vec<Vec<u64>> = (0..vars)
        .into_par_iter()
        .map(|row_idx| {
            let mut out = BitVector::zeros(free);
            for v in sys.matrix.row(row_idx).ones() {
                let (i, r, c) = (v / (n * d), (v / d) % n, v % d);
                if i != r {
                    let (a, b) = if i < r { (i, r) } else { (r, i) };
                    out.toggle(pair_index(n, a, b) * d + c);
                }
            }
            out.words().to_vec()
        })
        .collect();
    let mut seen = std::collections::HashSet::new();
    let unique: Vec<Vec<u64>> = reduced_rows
        .into_iter()
        .filter(|w| w.iter().any(|&x| x != 0) && seen.insert(w.clone()))
        .collect();

    let kernel: Vec<BitVector> = if unique.is_empty() {
        (0..free).map(|s| BitVector::unit(free, s)).collect()
    } else {
        let mut r = BitMatrix::zeros(unique.len(), free);
        for (k, w) in unique.iter().enumerate() {
            r.row_words_mut(k).copy_from_slice(w);
        }
        r.solve_homogeneous()
    };

    let pair_list: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    // The lift is monotone on the leading coordinates, so a reduced echelon
    // basis stays reduced echelon.
    let vectors = kernel
        .iter()
        .map(|z| {
            let mut v = BitVector::zeros(vars);
            for s in z.ones() {
                let (i, j) = pair_list[s / d];
                let c = s % d;
                v.set(var(n, d, i, j, c), true);
                v.set(var(n, d, j, i, c), true);
            }
            v
        })
        .collect();
    SolutionBasis::from_canonical(n, d, vectors)
}

/// The blocks of `hs` laid out in the system's unknown order.
pub fn vectorize(hs: &HiddenSum) -> BitVector {
    let (n, d) = (hs.n(), hs.d());
    let mut v = BitVector::zeros(n * n * d);
    for (i, b) in hs.blocks().iter().enumerate() {
        for r in 0..n {
            for c in 0..d {
                if b.get(r, c) {
                    v.set(var(n, d, i, r, c), true);
                }
            }
        }
    }
    v
}

/// The coordinates a permutation leaves in place, 1-indexed and ascending.
pub fn fixed_coordinates(perm: &Permutation) -> Vec<usize> {
    (1..=perm.size()).filter(|&i| perm.image(i) == i).collect()
}

/// Conjugates `lam` by `pi` (`π λ π⁻¹`) and splits the result into blocks.
pub fn block_form(lam: &BitMatrix, pi: &BitMatrix, n: usize, d: usize) -> Result<BlockLinearMap> {
    let big_n = n + d;
    for (m, what) in [(lam, "λ size"), (pi, "π size")] {
        if m.rows() != big_n || m.cols() != big_n {
            return Err(Error::DimensionMismatch {
                context: what,
                expected: big_n,
                found: m.rows().max(m.cols()),
            });
        }
    }
    let conj = lam.conjugate(pi)?;
    BlockLinearMap::from_matrix(&conj, n, d)
}

/// Result of the end-to-end pipeline.
#[derive(Clone, Debug)]
pub struct Linearization {
    pub basis: SolutionBasis,
    pub block: BlockLinearMap,
    /// The conjugator; decoded solutions live in the frame of `π λ π⁻¹`.
    pub pi: BitMatrix,
    pub system_rows: usize,
    pub system_cols: usize,
    pub build_time: Duration,
    pub solve_time: Duration,
}

impl Linearization {
    /// A solution carried back to the frame of the original `λ`.
    pub fn transport(&self, hs: HiddenSum) -> Result<TransportedSum> {
        TransportedSum::new(hs, self.pi.clone())
    }
}

/// `block_form`, then `build_system`, then `solve`.
pub fn linearize(lam: &BitMatrix, pi: &BitMatrix, n: usize, d: usize) -> Result<Linearization> {
    let block = block_form(lam, pi, n, d)?;
    let t0 = Instant::now();
    let sys = build_system(&block);
    let build_time = t0.elapsed();
    let t1 = Instant::now();
    let basis = solve(&sys);
    let solve_time = t1.elapsed();
    Ok(Linearization {
        basis,
        block,
        pi: pi.clone(),
        system_rows: sys.rows(),
        system_cols: sys.cols(),
        build_time,
        solve_time,
    })
}

/// A canonical hidden sum moved by a change of basis:
/// `x ∘' y = ((x π⁻¹) ∘ (y π⁻¹)) π`.
///
/// If `∘` linearizes `π λ π⁻¹` then `∘'` linearizes `λ`.
#[derive(Clone, Debug)]
pub struct TransportedSum {
    hs: HiddenSum,
    pi: BitMatrix,
    pi_inv: BitMatrix,
}

impl TransportedSum {
    pub fn new(hs: HiddenSum, pi: BitMatrix) -> Result<Self> {
        if pi.rows() != hs.dim() || !pi.is_square() {
            return Err(Error::DimensionMismatch {
                context: "conjugator size",
                expected: hs.dim(),
                found: pi.rows(),
            });
        }
        let pi_inv = pi.invert()?;
        Ok(Self { hs, pi, pi_inv })
    }

    pub fn hidden_sum(&self) -> &HiddenSum {
        &self.hs
    }

    pub fn circ_add(&self, x: &BitVector, y: &BitVector) -> Result<BitVector> {
        let s = self.hs.circ_add(&self.pi_inv.left_mul(x)?, &self.pi_inv.left_mul(y)?)?;
        self.pi.left_mul(&s)
    }
}
