//! Black-box `∘`-affine maps with retained ground truth.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector};
use crate::hiddensum::{CoeffVector, HiddenSum};

/// `φ(x) = L(x) ∘ c` with `L` linear for `∘`.
///
/// `L` is stored as a matrix acting on `∘`-coordinates: the coefficients of
/// `L(x)` in the canonical `∘`-basis are `coeffs(x) · M`.
#[derive(Clone, Debug)]
pub struct CircAffineOracle {
    hs: HiddenSum,
    matrix: BitMatrix,
    translation: BitVector,
}

impl CircAffineOracle {
    pub fn from_parts(hs: HiddenSum, matrix: BitMatrix, translation: BitVector) -> Result<Self> {
        let big_n = hs.dim();
        if matrix.rows() != big_n || !matrix.is_square() {
            return Err(Error::DimensionMismatch {
                context: "oracle matrix size",
                expected: big_n,
                found: matrix.rows(),
            });
        }
        if matrix.rank() < big_n {
            return Err(Error::Singular);
        }
        if translation.len() != big_n {
            return Err(Error::DimensionMismatch {
                context: "oracle translation length",
                expected: big_n,
                found: translation.len(),
            });
        }
        Ok(Self {
            hs,
            matrix,
            translation,
        })
    }

    /// Uniformly random invertible `M` and translation `c`, fixed by `seed`.
    pub fn random(hs: &HiddenSum, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let matrix = BitMatrix::random_invertible(hs.dim(), &mut rng);
        let translation = BitVector::random(hs.dim(), &mut rng);
        Self {
            hs: hs.clone(),
            matrix,
            translation,
        }
    }

    pub fn identity(hs: &HiddenSum) -> Self {
        Self {
            hs: hs.clone(),
            matrix: BitMatrix::identity(hs.dim()),
            translation: BitVector::zeros(hs.dim()),
        }
    }

    pub fn hidden_sum(&self) -> &HiddenSum {
        &self.hs
    }

    pub fn matrix(&self) -> &BitMatrix {
        &self.matrix
    }

    /// `φ(0)`.
    pub fn translation(&self) -> &BitVector {
        &self.translation
    }

    /// `L(e_i)` for `i = 1..=N`.
    pub fn basis_images(&self) -> Vec<BitVector> {
        (0..self.hs.dim())
            .map(|i| {
                self.hs
                    .recompose(&CoeffVector(self.matrix.row(i)))
                    .expect("sizes match")
            })
            .collect()
    }

    pub fn eval(&self, x: &BitVector) -> Result<BitVector> {
        let coeffs = self.hs.decompose(x)?;
        let image = self.matrix.left_mul(coeffs.bits())?;
        let lx = self.hs.recompose(&CoeffVector(image))?;
        self.hs.circ_add(&lx, &self.translation)
    }
}
