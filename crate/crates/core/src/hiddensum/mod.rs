//! Practical hidden sums in canonical form.
//!
//! With `N = n + d` and `U(T∘) ⊇ Span{e_{n+1}, …, e_N}`, the translation
//! `τ_a : x ↦ x ∘ a` is `x ↦ x·κ_a + a` with
//!
//! ```text
//! κ_a = [ I_n  B_a ]      B_a = Σ_{i ≤ n} a_i · B_{e_i}
//!       [ 0    I_d ]
//! ```
//!
//! so the whole operation is fixed by the `n` blocks `B_{e_i}` (each `n × d`).
//! The abelian and elementary conditions say that row `j` of `B_{e_i}` equals
//! row `i` of `B_{e_j}` and that row `i` of `B_{e_i}` is zero.

mod canonical;
mod text;

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector};

pub use canonical::canonicalizing_map;

/// Largest supported `d`; rows of the blocks are handled as machine words.
pub const MAX_D: usize = 64;

/// A practical hidden sum in canonical form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct HiddenSum {
    n: usize,
    d: usize,
    blocks: Vec<BitMatrix>,
    /// `slices[c]` is `n × n` with entry `(j, i)` = entry `(j, c)` of `B_{e_i}`.
    slices: Vec<BitMatrix>,
    /// Row words of `slices`, `packed[c * n + j]`, present when `N <= 64`.
    packed: Vec<u64>,
}

impl HiddenSum {
    /// Builds a hidden sum from its `n` defining blocks, each `n × d`.
    ///
    /// Only shapes are checked here; [`HiddenSum::validate`] reports whether
    /// the blocks satisfy the abelian and elementary conditions.
    pub fn new(n: usize, d: usize, blocks: Vec<BitMatrix>) -> Result<Self> {
        check_params(n, d)?;
        if blocks.len() != n {
            return Err(Error::DimensionMismatch {
                context: "number of blocks",
                expected: n,
                found: blocks.len(),
            });
        }
        for b in &blocks {
            if b.rows() != n || b.cols() != d {
                return Err(Error::DimensionMismatch {
                    context: "block shape (rows * cols)",
                    expected: n * d,
                    found: b.rows() * b.cols(),
                });
            }
        }
        let slices: Vec<BitMatrix> = (0..d)
            .map(|c| BitMatrix::from_fn(n, n, |j, i| blocks[i].get(j, c)))
            .collect();
        let packed = if n + d <= 64 {
            slices
                .iter()
                .flat_map(|s| (0..n).map(move |j| s.row_words(j)[0]))
                .collect()
        } else {
            Vec::new()
        };
        Ok(Self {
            n,
            d,
            blocks,
            slices,
            packed,
        })
    }

    /// The ordinary XOR written in canonical form (all blocks zero).
    pub fn zero(n: usize, d: usize) -> Result<Self> {
        Self::new(n, d, vec![BitMatrix::zeros(n, d); n])
    }

    pub fn from_bfrak(grid: &BFrak) -> Result<Self> {
        let (n, d) = (grid.n, grid.d);
        let blocks = (0..n)
            .map(|i| BitMatrix::from_fn(n, d, |j, c| (grid.get(i, j) >> c) & 1 == 1))
            .collect();
        Self::new(n, d, blocks)
    }

    /// Reads the blocks of an operation already known to be in canonical
    /// form: row `j` of `B_{e_i}` is the tail of `e_j ∘ e_i`.
    pub fn from_operation(n: usize, d: usize, mut op: impl FnMut(&BitVector, &BitVector) -> BitVector) -> Result<Self> {
        check_params(n, d)?;
        let big_n = n + d;
        let blocks = (0..n)
            .map(|i| {
                let ei = BitVector::unit(big_n, i);
                let mut b = BitMatrix::zeros(n, d);
                for j in 0..n {
                    let s = op(&BitVector::unit(big_n, j), &ei);
                    for c in 0..d {
                        b.set(j, c, s.get(n + c));
                    }
                }
                b
            })
            .collect();
        Self::new(n, d, blocks)
    }

    /// A random hidden sum with `dim U(T∘) = d` exactly.
    ///
    /// Samples symmetric zero-diagonal grids until the grid has full F2 rank.
    /// Deterministic in `seed`.
    pub fn random(n: usize, d: usize, seed: u64) -> Result<Self> {
        check_params(n, d)?;
        if d == 1 && n % 2 == 1 {
            return Err(Error::EmptyFamily { n, d });
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mask = crate::gf2::low_mask(d);
        loop {
            let mut grid = vec![0u64; n * n];
            for i in 0..n {
                for j in i + 1..n {
                    let v = rng.gen::<u64>() & mask;
                    grid[i * n + j] = v;
                    grid[j * n + i] = v;
                }
            }
            let b = BFrak { n, d, grid };
            if b.f2_rank() == n {
                return Self::from_bfrak(&b);
            }
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn d(&self) -> usize {
        self.d
    }

    /// Ambient dimension `N = n + d`.
    #[inline]
    pub fn dim(&self) -> usize {
        self.n + self.d
    }

    pub fn blocks(&self) -> &[BitMatrix] {
        &self.blocks
    }

    pub fn block(&self, i: usize) -> &BitMatrix {
        &self.blocks[i]
    }

    fn check_vec(&self, v: &BitVector, context: &'static str) -> Result<()> {
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                context,
                expected: self.dim(),
                found: v.len(),
            });
        }
        Ok(())
    }

    /// `B_y = Σ_{i ≤ n} y_i B_{e_i}`; the last `d` coordinates of `y` play no role.
    pub fn b_of(&self, y: &BitVector) -> Result<BitMatrix> {
        self.check_vec(y, "B_y")?;
        let mut acc = BitMatrix::zeros(self.n, self.d);
        for i in y.ones().take_while(|&i| i < self.n) {
            acc = acc.add(&self.blocks[i])?;
        }
        Ok(acc)
    }

    /// The linear part `κ_y` of the translation `τ_y`.
    pub fn kappa(&self, y: &BitVector) -> Result<BitMatrix> {
        let b = self.b_of(y)?;
        let mut k = BitMatrix::identity(self.dim());
        k.set_block(0, self.n, &b);
        Ok(k)
    }

    /// `x ∘ a = x·κ_a + a`.
    pub fn circ_add(&self, x: &BitVector, a: &BitVector) -> Result<BitVector> {
        self.check_vec(x, "circ_add (left operand)")?;
        self.check_vec(a, "circ_add (right operand)")?;
        let n = self.n;
        let mut out = x ^ a;
        let xbar: Vec<usize> = x.ones().take_while(|&i| i < n).collect();
        if xbar.is_empty() {
            return Ok(out);
        }
        let a_words = a.words();
        let nw = n.div_ceil(64);
        let mut y = vec![0u64; nw];
        for (c, slice) in self.slices.iter().enumerate() {
            y.iter_mut().for_each(|w| *w = 0);
            for &j in &xbar {
                for (acc, w) in y.iter_mut().zip(slice.row_words(j)) {
                    *acc ^= w;
                }
            }
            // The slice has exactly n columns, so y carries nothing past bit n.
            let parity = y.iter().zip(a_words).fold(0u32, |p, (u, v)| p ^ (u & v).count_ones());
            if parity & 1 == 1 {
                out.toggle(n + c);
            }
        }
        Ok(out)
    }

    /// `x ∘ a` on vectors packed into words (bit `i` = coordinate `i + 1`).
    ///
    /// Only available for `N <= 64`.
    pub fn circ_add_packed(&self, x: u64, a: u64) -> u64 {
        assert!(self.dim() <= 64, "packed arithmetic needs N <= 64");
        let n = self.n;
        let low = crate::gf2::low_mask(n);
        let (xb, ab) = (x & low, a & low);
        let mut out = x ^ a;
        if xb == 0 || ab == 0 {
            return out;
        }
        for c in 0..self.d {
            let rows = &self.packed[c * n..(c + 1) * n];
            let mut y = 0u64;
            let mut bits = xb;
            while bits != 0 {
                y ^= rows[bits.trailing_zeros() as usize];
                bits &= bits - 1;
            }
            if (y & ab).count_ones() & 1 == 1 {
                out ^= 1 << (n + c);
            }
        }
        out
    }

    /// Grid of the blocks over `F_{2^d}`: entry `(i, j)` is row `j` of `B_{e_i}`.
    pub fn bfrak(&self) -> BFrak {
        let n = self.n;
        let mut grid = vec![0u64; n * n];
        for (i, b) in self.blocks.iter().enumerate() {
            for j in 0..n {
                grid[i * n + j] = b.row_words(j)[0];
            }
        }
        BFrak { n, d: self.d, grid }
    }

    /// F2 rank of the grid seen as an `n × nd` binary matrix.
    pub fn rank(&self) -> usize {
        self.bfrak().f2_rank()
    }

    /// `dim U(T∘) = d + (n − rank)`.
    pub fn dim_u(&self) -> usize {
        self.d + self.n - self.rank()
    }

    /// A basis of `U(T∘) = {u : x ∘ u = x + u for all x}`.
    pub fn u_basis(&self) -> Vec<BitVector> {
        let big_n = self.dim();
        let grid = self.bfrak().as_f2_matrix();
        // ū with ū·grid = 0, i.e. ū orthogonal to the columns of the grid.
        let mut basis: Vec<BitVector> = grid
            .transpose()
            .solve_homogeneous()
            .into_iter()
            .map(|u| {
                let mut v = BitVector::zeros(big_n);
                v.splice(0, &u);
                v
            })
            .collect();
        basis.extend((self.n..big_n).map(|i| BitVector::unit(big_n, i)));
        basis
    }

    pub fn validate(&self) -> ValidationReport {
        let grid = self.bfrak();
        let symmetric = grid.is_symmetric();
        let zero_diagonal = grid.is_zero_diagonal();
        let nonzero = grid.grid.iter().any(|&w| w != 0);
        let rank = grid.f2_rank();
        ValidationReport {
            symmetric,
            zero_diagonal,
            nonzero,
            rank,
            dim_u: self.d + self.n - rank,
            is_practical_hidden_sum: symmetric && zero_diagonal && nonzero,
            exact_dim_u: rank == self.n,
        }
    }

    /// Coordinates of `v` in the canonical `∘`-basis `e_1, …, e_N`.
    ///
    /// Clears the first `n` coordinates with `τ_{e_1}, …, τ_{e_n}` (the linear
    /// parts never touch them), then reads the remaining coordinates off
    /// directly since `τ_{e_j} = σ_{e_j}` for `j > n`.
    pub fn decompose(&self, v: &BitVector) -> Result<CoeffVector> {
        self.check_vec(v, "decompose")?;
        let big_n = self.dim();
        let mut alpha = BitVector::zeros(big_n);
        let mut cur = v.clone();
        for i in v.ones().take_while(|&i| i < self.n) {
            alpha.set(i, true);
            cur = self.circ_add(&cur, &BitVector::unit(big_n, i))?;
        }
        debug_assert!(cur.ones().all(|i| i >= self.n));
        for i in self.n..big_n {
            alpha.set(i, cur.get(i));
        }
        Ok(CoeffVector(alpha))
    }

    /// `α_1 e_1 ∘ … ∘ α_N e_N`, folded in ascending index order.
    pub fn recompose(&self, c: &CoeffVector) -> Result<BitVector> {
        self.check_vec(&c.0, "recompose")?;
        let big_n = self.dim();
        let mut acc = BitVector::zeros(big_n);
        for i in c.0.ones() {
            acc = self.circ_add(&acc, &BitVector::unit(big_n, i))?;
        }
        Ok(acc)
    }
}

fn check_params(n: usize, d: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("n must be at least 2, got {n}")));
    }
    if d == 0 || d > MAX_D {
        return Err(Error::InvalidParameter(format!("d must lie in 1..={MAX_D}, got {d}")));
    }
    Ok(())
}

impl fmt::Debug for HiddenSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "HiddenSum(n={}, d={}, grid={})",
            self.n,
            self.d,
            self.bfrak().compact()
        )
    }
}

/// Verdicts of [`HiddenSum::validate`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    /// Row `j` of `B_{e_i}` equals row `i` of `B_{e_j}` (the group is abelian).
    pub symmetric: bool,
    /// Row `i` of `B_{e_i}` is zero (the group is elementary).
    pub zero_diagonal: bool,
    /// Some block is nonzero, i.e. the operation differs from XOR.
    pub nonzero: bool,
    pub rank: usize,
    pub dim_u: usize,
    pub is_practical_hidden_sum: bool,
    /// The grid has full F2 rank, so `dim U(T∘) = d` exactly.
    pub exact_dim_u: bool,
}

/// Coefficients `α_1, …, α_N` with `α_1 e_1 ∘ … ∘ α_N e_N = v`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CoeffVector(pub BitVector);

impl CoeffVector {
    pub fn bits(&self) -> &BitVector {
        &self.0
    }

    pub fn into_inner(self) -> BitVector {
        self.0
    }
}

impl fmt::Display for CoeffVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl fmt::Debug for CoeffVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CoeffVector({})", self.0)
    }
}

/// The `n × n` grid over `F_{2^d}` assembled from the blocks.
///
/// Entry `(i, j)` is row `j` of `B_{e_i}` read as a `d`-bit word: column `c`
/// of the block row is bit `c - 1`, the coefficient of `α^{c-1}`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct BFrak {
    n: usize,
    d: usize,
    grid: Vec<u64>,
}

impl BFrak {
    /// Builds a grid from row-major words; each word must fit in `d` bits.
    pub fn new(n: usize, d: usize, grid: Vec<u64>) -> Result<Self> {
        check_params(n, d)?;
        if grid.len() != n * n {
            return Err(Error::DimensionMismatch {
                context: "grid entries",
                expected: n * n,
                found: grid.len(),
            });
        }
        let mask = crate::gf2::low_mask(d);
        if let Some(bad) = grid.iter().find(|&&w| w & !mask != 0) {
            return Err(Error::InvalidParameter(format!(
                "grid entry {bad} does not fit in {d} bits"
            )));
        }
        Ok(Self { n, d, grid })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.grid[i * self.n + j]
    }

    pub fn entries(&self) -> &[u64] {
        &self.grid
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (i + 1..self.n).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn is_zero_diagonal(&self) -> bool {
        (0..self.n).all(|i| self.get(i, i) == 0)
    }

    /// The grid as an `n × nd` binary matrix; row `i` concatenates the entries
    /// of grid row `i`.
    pub fn as_f2_matrix(&self) -> BitMatrix {
        let d = self.d;
        BitMatrix::from_fn(self.n, self.n * d, |i, col| {
            (self.get(i, col / d) >> (col % d)) & 1 == 1
        })
    }

    pub fn f2_rank(&self) -> usize {
        self.as_f2_matrix().rank()
    }

    /// One line per grid row, entries as integers in `[0, 2^d − 1]`.
    pub fn compact(&self) -> String {
        let rows: Vec<String> = (0..self.n)
            .map(|i| {
                (0..self.n)
                    .map(|j| self.get(i, j).to_string())
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect();
        rows.join("; ")
    }
}

/// Writes a field element as a polynomial in `α`, highest degree first.
pub fn format_field_element(w: u64) -> String {
    if w == 0 {
        return "0".into();
    }
    let mut terms = Vec::new();
    for k in (0..64).rev() {
        if (w >> k) & 1 == 1 {
            terms.push(match k {
                0 => "1".to_string(),
                1 => "α".to_string(),
                _ => format!("α^{k}"),
            });
        }
    }
    terms.join(" + ")
}

impl fmt::Display for BFrak {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            let row: Vec<String> = (0..self.n).map(|j| format_field_element(self.get(i, j))).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}
