//! The solution space of the linearization system.

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::gf2::{canonical_basis, parse_bit_row, BitMatrix, BitVector};
use crate::hiddensum::HiddenSum;

/// Largest kernel dimension for which the solution set is walked point by point.
pub const MAX_ENUMERATION_DIM: usize = 24;

const WILSON_Z: f64 = 1.959963984540054;

/// Reduced echelon basis of the kernel; each kernel point is one operation.
#[derive(Clone, PartialEq, Eq)]
pub struct SolutionBasis {
    n: usize,
    d: usize,
    vectors: Vec<BitVector>,
    pivots: Vec<usize>,
}

impl SolutionBasis {
    /// `vectors` must already be reduced echelon with ascending pivots.
    pub(crate) fn from_canonical(n: usize, d: usize, vectors: Vec<BitVector>) -> Self {
        let pivots: Vec<usize> = vectors
            .iter()
            .map(|v| v.leading_one().expect("basis vectors are nonzero"))
            .collect();
        debug_assert!(pivots.windows(2).all(|w| w[0] < w[1]));
        Self { n, d, vectors, pivots }
    }

    /// Any spanning set of independent kernel vectors, brought to reduced
    /// echelon form.
    pub fn new(n: usize, d: usize, vectors: &[BitVector]) -> Result<Self> {
        let len = n * n * d;
        if let Some(v) = vectors.iter().find(|v| v.len() != len) {
            return Err(Error::DimensionMismatch {
                context: "kernel vector length",
                expected: len,
                found: v.len(),
            });
        }
        let canon = canonical_basis(vectors);
        if canon.len() != vectors.len() {
            return Err(Error::DependentVectors);
        }
        Ok(Self::from_canonical(n, d, canon))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// Kernel dimension `l`.
    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[BitVector] {
        &self.vectors
    }

    fn point_len(&self) -> usize {
        self.n * self.n * self.d
    }

    pub fn contains(&self, point: &BitVector) -> bool {
        if point.len() != self.point_len() {
            return false;
        }
        let mut x = point.clone();
        for (v, &p) in self.vectors.iter().zip(&self.pivots) {
            if x.get(p) {
                x ^= v;
            }
        }
        x.is_zero()
    }

    /// `Σ_k coeffs_k · basis_k`.
    pub fn combine(&self, coeffs: &BitVector) -> Result<BitVector> {
        if coeffs.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                context: "coefficient vector",
                expected: self.dim(),
                found: coeffs.len(),
            });
        }
        let mut acc = BitVector::zeros(self.point_len());
        for k in coeffs.ones() {
            acc ^= &self.vectors[k];
        }
        Ok(acc)
    }

    fn decode_unchecked(&self, point: &BitVector) -> HiddenSum {
        let (n, d) = (self.n, self.d);
        let blocks = (0..n)
            .map(|i| BitMatrix::from_fn(n, d, |r, c| point.get((i * n + r) * d + c)))
            .collect();
        HiddenSum::new(n, d, blocks).expect("shapes follow from the basis")
    }

    /// The operation whose blocks are read from a kernel point.
    pub fn decode(&self, point: &BitVector) -> Result<HiddenSum> {
        if point.len() != self.point_len() {
            return Err(Error::DimensionMismatch {
                context: "kernel point length",
                expected: self.point_len(),
                found: point.len(),
            });
        }
        if !self.contains(point) {
            return Err(Error::NotInKernel);
        }
        Ok(self.decode_unchecked(point))
    }

    /// Whether the grid of a point has full F2 rank. Grid row `i` is the slice
    /// of the point holding `B_{e_i}`.
    fn point_has_full_rank(&self, point: &BitVector) -> bool {
        let nd = self.n * self.d;
        let rows: Vec<BitVector> = (0..self.n).map(|i| point.slice(i * nd, nd)).collect();
        BitMatrix::from_rows(&rows).expect("equal lengths").rank() == self.n
    }

    fn check_enumerable(&self) -> Result<()> {
        if self.dim() > MAX_ENUMERATION_DIM {
            return Err(Error::InvalidParameter(format!(
                "kernel dimension {} exceeds the enumeration limit {MAX_ENUMERATION_DIM}",
                self.dim()
            )));
        }
        Ok(())
    }

    /// All `2^l` kernel points in Gray-code order, starting from zero.
    pub fn points(&self) -> Result<impl Iterator<Item = BitVector> + '_> {
        self.check_enumerable()?;
        let total = 1u64 << self.dim();
        let mut cur = BitVector::zeros(self.point_len());
        Ok((0..total).map(move |k| {
            if k > 0 {
                cur ^= &self.vectors[k.trailing_zeros() as usize];
            }
            cur.clone()
        }))
    }

    /// All `2^l` solutions, including the zero point (plain XOR).
    pub fn enumerate(&self) -> Result<Vec<HiddenSum>> {
        Ok(self.points()?.map(|p| self.decode_unchecked(&p)).collect())
    }

    /// Number of kernel points with `dim U = d` exactly.
    pub fn count_full_rank(&self) -> Result<u64> {
        Ok(self.points()?.filter(|p| self.point_has_full_rank(p)).count() as u64)
    }

    /// `count` uniform kernel points, optionally keeping only full-rank ones.
    ///
    /// Rejection sampling stops after `1000 · count` draws.
    pub fn sample_solutions(&self, count: usize, seed: u64, full_rank_only: bool) -> Result<Vec<HiddenSum>> {
        if count == 0 {
            return Err(Error::InvalidParameter("count must be at least 1".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cap = 1000 * count;
        let mut out = Vec::with_capacity(count);
        let mut attempts = 0;
        while out.len() < count {
            if attempts == cap {
                return Err(Error::RetryCapExhausted {
                    attempts,
                    accepted: out.len(),
                    rate: out.len() as f64 / attempts as f64,
                });
            }
            attempts += 1;
            let coeffs = BitVector::random(self.dim(), &mut rng);
            let point = self.combine(&coeffs)?;
            if full_rank_only && !self.point_has_full_rank(&point) {
                continue;
            }
            out.push(self.decode_unchecked(&point));
        }
        Ok(out)
    }

    /// Fraction of full-rank kernel points from `samples` uniform draws, with
    /// a 95% Wilson interval.
    pub fn estimate_full_rank(&self, samples: usize, seed: u64) -> Result<FullRankEstimate> {
        if samples == 0 {
            return Err(Error::InvalidParameter("samples must be at least 1".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut hits = 0;
        for _ in 0..samples {
            let point = self.combine(&BitVector::random(self.dim(), &mut rng))?;
            if self.point_has_full_rank(&point) {
                hits += 1;
            }
        }
        Ok(FullRankEstimate::wilson(hits, samples))
    }

    /// `kernel <l> <n> <d>`, then one line of `n²d` bits per basis vector.
    pub fn to_text(&self) -> String {
        let mut s = format!("kernel {} {} {}\n", self.dim(), self.n, self.d);
        for v in &self.vectors {
            s.push_str(&v.to_bit_string());
            s.push('\n');
        }
        s
    }

    pub fn parse_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        let (_, header) = lines.next().ok_or_else(|| Error::parse(1, "missing header"))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 4 || fields[0] != "kernel" {
            return Err(Error::parse(1, "expected `kernel <l> <n> <d>`"));
        }
        let num = |k: usize| -> Result<usize> {
            fields[k]
                .parse()
                .map_err(|_| Error::parse(1, format!("bad number {:?}", fields[k])))
        };
        let (l, n, d) = (num(1)?, num(2)?, num(3)?);
        let len = n * n * d;
        if len == 0 {
            return Err(Error::parse(1, "n and d must be positive"));
        }
        let mut vectors = Vec::with_capacity(l);
        for k in 0..l {
            let (idx, line) = lines
                .next()
                .ok_or_else(|| Error::parse(k + 2, "missing basis vector"))?;
            let mut v = BitVector::zeros(len);
            parse_bit_row(line, len, idx + 1, |c| v.set(c, true))?;
            vectors.push(v);
        }
        for (idx, line) in lines {
            if !line.trim().is_empty() {
                return Err(Error::parse(idx + 1, "trailing content after basis"));
            }
        }
        Self::new(n, d, &vectors)
    }
}

impl fmt::Debug for SolutionBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SolutionBasis(n={}, d={}, l={})", self.n, self.d, self.dim())
    }
}

/// Sampled full-rank fraction with its 95% Wilson score interval.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FullRankEstimate {
    pub samples: usize,
    pub hits: usize,
    pub fraction: f64,
    pub lower: f64,
    pub upper: f64,
}

impl FullRankEstimate {
    pub fn wilson(hits: usize, samples: usize) -> Self {
        let n = samples as f64;
        let p = hits as f64 / n;
        let z2 = WILSON_Z * WILSON_Z;
        let denom = 1.0 + z2 / n;
        let center = (p + z2 / (2.0 * n)) / denom;
        let half = WILSON_Z / denom * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
        Self {
            samples,
            hits,
            fraction: p,
            lower: (center - half).max(0.0),
            upper: (center + half).min(1.0),
        }
    }
}
