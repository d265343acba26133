use std::fmt;
use std::str::FromStr;

use rand::Rng;

use super::echelon;
use super::vector::{low_mask, words_for, BitVector, WORD_BITS};
use crate::error::{Error, Result};

/// A dense matrix over F2, stored row-major with each row packed into words.
///
/// Vectors act on the left (`v ↦ v·A`), so row `i` of `A` is the image of the
/// `i`-th unit vector.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols);
        Self {
            rows,
            cols,
            stride,
            data: vec![0; rows * stride],
        }
    }

    pub fn identity(size: usize) -> Self {
        let mut m = Self::zeros(size, size);
        for i in 0..size {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut m = Self::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                if f(r, c) {
                    m.set(r, c, true);
                }
            }
        }
        m
    }

    /// Stacks the given vectors as rows. All vectors must share a length.
    pub fn from_rows(rows: &[BitVector]) -> Result<Self> {
        let cols = rows.first().map_or(0, BitVector::len);
        let mut m = Self::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::DimensionMismatch {
                    context: "matrix rows",
                    expected: cols,
                    found: row.len(),
                });
            }
            m.row_words_mut(i).copy_from_slice(row.words());
        }
        Ok(m)
    }

    pub fn random<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> Self {
        let mut m = Self::zeros(rows, cols);
        let tail = low_mask(cols % WORD_BITS);
        for r in 0..rows {
            let row = m.row_words_mut(r);
            for w in row.iter_mut() {
                *w = rng.gen();
            }
            if !cols.is_multiple_of(WORD_BITS) {
                if let Some(last) = row.last_mut() {
                    *last &= tail;
                }
            }
        }
        m
    }

    /// A uniformly random invertible matrix (rejection sampling).
    pub fn random_invertible<R: Rng + ?Sized>(size: usize, rng: &mut R) -> Self {
        loop {
            let m = Self::random(size, size, rng);
            if m.rank() == size {
                return m;
            }
        }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub(crate) fn stride(&self) -> usize {
        self.stride
    }

    #[inline]
    pub(crate) fn data_mut(&mut self) -> &mut [u64] {
        &mut self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        assert!(r < self.rows && c < self.cols, "entry ({r}, {c}) out of range");
        (self.data[r * self.stride + c / WORD_BITS] >> (c % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, bit: bool) {
        assert!(r < self.rows && c < self.cols, "entry ({r}, {c}) out of range");
        let w = &mut self.data[r * self.stride + c / WORD_BITS];
        let mask = 1u64 << (c % WORD_BITS);
        if bit {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    #[inline]
    pub fn toggle(&mut self, r: usize, c: usize) {
        assert!(r < self.rows && c < self.cols, "entry ({r}, {c}) out of range");
        self.data[r * self.stride + c / WORD_BITS] ^= 1u64 << (c % WORD_BITS);
    }

    #[inline]
    pub fn row_words(&self, r: usize) -> &[u64] {
        &self.data[r * self.stride..(r + 1) * self.stride]
    }

    #[inline]
    pub(crate) fn row_words_mut(&mut self, r: usize) -> &mut [u64] {
        &mut self.data[r * self.stride..(r + 1) * self.stride]
    }

    pub fn row(&self, r: usize) -> BitVector {
        BitVector::from_words(self.cols, self.row_words(r).to_vec())
    }

    pub fn row_vectors(&self) -> Vec<BitVector> {
        (0..self.rows).map(|r| self.row(r)).collect()
    }

    /// XORs row `src` into row `dst`.
    pub(crate) fn xor_row_into(&mut self, src: usize, dst: usize) {
        debug_assert_ne!(src, dst);
        let s = self.stride;
        let (a, b) = if src < dst {
            let (lo, hi) = self.data.split_at_mut(dst * s);
            (&lo[src * s..(src + 1) * s], &mut hi[..s])
        } else {
            let (lo, hi) = self.data.split_at_mut(src * s);
            (&hi[..s] as &[u64], &mut lo[dst * s..(dst + 1) * s])
        };
        for (d, v) in b.iter_mut().zip(a) {
            *d ^= v;
        }
    }

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let s = self.stride;
        let (lo, hi) = self.data.split_at_mut(a.max(b) * s);
        lo[a.min(b) * s..(a.min(b) + 1) * s].swap_with_slice(&mut hi[..s]);
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in self.row(r).ones() {
                t.set(c, r, true);
            }
        }
        t
    }

    /// Copies the `rows × cols` block whose top-left entry is `(r0, c0)`.
    pub fn submatrix(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        assert!(r0 + rows <= self.rows && c0 + cols <= self.cols, "block out of range");
        Self::from_fn(rows, cols, |r, c| self.get(r0 + r, c0 + c))
    }

    /// Writes `block` with its top-left entry at `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &BitMatrix) {
        assert!(
            r0 + block.rows <= self.rows && c0 + block.cols <= self.cols,
            "block out of range"
        );
        for r in 0..block.rows {
            for c in 0..block.cols {
                self.set(r0 + r, c0 + c, block.get(r, c));
            }
        }
    }

    /// Row-vector product `v·A`.
    pub fn left_mul(&self, v: &BitVector) -> Result<BitVector> {
        if v.len() != self.rows {
            return Err(Error::DimensionMismatch {
                context: "vector-matrix product",
                expected: self.rows,
                found: v.len(),
            });
        }
        let mut out = vec![0u64; self.stride];
        for r in v.ones() {
            for (o, w) in out.iter_mut().zip(self.row_words(r)) {
                *o ^= w;
            }
        }
        Ok(BitVector::from_words(self.cols, out))
    }

    /// Matrix product `A·B`.
    pub fn mul(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                context: "matrix product",
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = BitMatrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            let dst = r * out.stride;
            for k in self.row(r).ones() {
                for (o, w) in out.data[dst..dst + out.stride].iter_mut().zip(other.row_words(k)) {
                    *o ^= w;
                }
            }
        }
        Ok(out)
    }

    /// Entrywise sum.
    pub fn add(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                context: "matrix sum",
                expected: self.rows * self.cols,
                found: other.rows * other.cols,
            });
        }
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a ^= b;
        }
        Ok(out)
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        echelon::rref(&mut m).len()
    }

    /// Reduced row echelon form and its pivot columns (ascending).
    pub fn rref(&self) -> (BitMatrix, Vec<usize>) {
        let mut m = self.clone();
        let pivots = echelon::rref(&mut m);
        (m, pivots)
    }

    /// Basis of `{x : x·Aᵀ = 0}`, the vectors orthogonal to every row of `A`.
    ///
    /// The basis is in reduced row echelon form with ascending pivots, so equal
    /// solution spaces give identical output.
    pub fn solve_homogeneous(&self) -> Vec<BitVector> {
        echelon::kernel_basis(self)
    }

    pub fn invert(&self) -> Result<BitMatrix> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch {
                context: "matrix inverse (needs a square matrix)",
                expected: self.rows,
                found: self.cols,
            });
        }
        let n = self.rows;
        let mut aug = BitMatrix::zeros(n, 2 * n);
        for r in 0..n {
            for c in self.row(r).ones() {
                aug.set(r, c, true);
            }
            aug.set(r, n + r, true);
        }
        let pivots = echelon::rref(&mut aug);
        if pivots.len() < n || pivots[n - 1] >= n {
            return Err(Error::Singular);
        }
        Ok(aug.submatrix(0, n, n, n))
    }

    /// `P·A·P⁻¹`.
    pub fn conjugate(&self, p: &BitMatrix) -> Result<BitMatrix> {
        if !self.is_square() || !p.is_square() || self.rows != p.rows {
            return Err(Error::DimensionMismatch {
                context: "conjugation",
                expected: self.rows,
                found: p.rows,
            });
        }
        let p_inv = p.invert()?;
        p.mul(self)?.mul(&p_inv)
    }

    /// Permutation matrix of a 1-indexed image list: row `i` has its one in
    /// column `perm[i]`, so coordinate `i` of `v` lands at `perm[i]` in `v·P`.
    pub fn from_permutation(images: &[usize]) -> Result<BitMatrix> {
        let perm = Permutation::from_images(images.to_vec())?;
        Ok(perm.to_matrix())
    }

    /// Parses the `.gf2m` text format.
    pub fn parse_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        let (_, header) = lines.next().ok_or_else(|| Error::parse(1, "missing header"))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 3 || fields[0] != "gf2matrix" {
            return Err(Error::parse(1, "expected `gf2matrix <rows> <cols>`"));
        }
        let rows: usize = fields[1].parse().map_err(|_| Error::parse(1, "bad row count"))?;
        let cols: usize = fields[2].parse().map_err(|_| Error::parse(1, "bad column count"))?;
        if rows == 0 || cols == 0 {
            return Err(Error::parse(1, "matrix dimensions must be positive"));
        }
        let mut m = Self::zeros(rows, cols);
        for r in 0..rows {
            let (idx, line) = lines.next().ok_or_else(|| Error::parse(r + 2, "missing matrix row"))?;
            parse_bit_row(line, cols, idx + 1, |c| m.set(r, c, true))?;
        }
        for (idx, line) in lines {
            if !line.trim().is_empty() {
                return Err(Error::parse(idx + 1, "trailing content after matrix rows"));
            }
        }
        Ok(m)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("gf2matrix {} {}\n", self.rows, self.cols);
        for r in 0..self.rows {
            s.push_str(&self.row(r).to_bit_string());
            s.push('\n');
        }
        s
    }
}

/// Parses one line of exactly `width` characters from `{0,1}`, calling `set`
/// for every `1`.
pub(crate) fn parse_bit_row(line: &str, width: usize, line_no: usize, mut set: impl FnMut(usize)) -> Result<()> {
    let line = line.trim_end();
    if line.chars().count() != width {
        return Err(Error::parse(
            line_no,
            format!("expected {width} characters, found {}", line.chars().count()),
        ));
    }
    for (c, ch) in line.chars().enumerate() {
        match ch {
            '0' => {}
            '1' => set(c),
            other => return Err(Error::parse(line_no, format!("unexpected character {other:?}"))),
        }
    }
    Ok(())
}

impl FromStr for BitMatrix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse_text(s)
    }
}

impl fmt::Display for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows.min(16) {
            writeln!(f, "  {}", self.row(r))?;
        }
        if self.rows > 16 {
            writeln!(f, "  ...")?;
        }
        write!(f, "]")
    }
}

/// A bijection on `{1..N}` given by its images, 1-indexed.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let size = images.len();
        if size == 0 {
            return Err(Error::NotBijective {
                size,
                detail: "empty permutation".into(),
            });
        }
        let mut seen = vec![false; size];
        for (i, &img) in images.iter().enumerate() {
            if img == 0 || img > size {
                return Err(Error::NotBijective {
                    size,
                    detail: format!("image of {} is {img}, outside 1..={size}", i + 1),
                });
            }
            if std::mem::replace(&mut seen[img - 1], true) {
                return Err(Error::NotBijective {
                    size,
                    detail: format!("{img} is hit twice"),
                });
            }
        }
        Ok(Self { images })
    }

    /// Product of disjoint cycles, each given as 1-indexed points.
    pub fn from_cycles(size: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut images: Vec<usize> = (1..=size).collect();
        let mut touched = vec![false; size + 1];
        for cycle in cycles {
            for (k, &p) in cycle.iter().enumerate() {
                if p == 0 || p > size || std::mem::replace(&mut touched[p], true) {
                    return Err(Error::NotBijective {
                        size,
                        detail: format!("cycle point {p} is out of range or repeated"),
                    });
                }
                images[p - 1] = cycle[(k + 1) % cycle.len()];
            }
        }
        Self::from_images(images)
    }

    pub fn identity(size: usize) -> Self {
        Self {
            images: (1..=size).collect(),
        }
    }

    pub fn size(&self) -> usize {
        self.images.len()
    }

    /// Image of the 1-indexed point `i`.
    pub fn image(&self, i: usize) -> usize {
        self.images[i - 1]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.images.len()];
        for (i, &img) in self.images.iter().enumerate() {
            inv[img - 1] = i + 1;
        }
        Self { images: inv }
    }

    pub fn to_matrix(&self) -> BitMatrix {
        let n = self.images.len();
        let mut m = BitMatrix::zeros(n, n);
        for (i, &img) in self.images.iter().enumerate() {
            m.set(i, img - 1, true);
        }
        m
    }

    /// Recovers the permutation from a permutation matrix.
    pub fn from_matrix(m: &BitMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::DimensionMismatch {
                context: "permutation matrix",
                expected: m.rows(),
                found: m.cols(),
            });
        }
        let mut images = Vec::with_capacity(m.rows());
        for r in 0..m.rows() {
            let row = m.row(r);
            if row.weight() != 1 {
                return Err(Error::NotBijective {
                    size: m.rows(),
                    detail: format!("row {} has {} ones", r + 1, row.weight()),
                });
            }
            images.push(row.leading_one().unwrap() + 1);
        }
        Self::from_images(images)
    }
}
