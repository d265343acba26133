//! Recovering a `∘`-affine black box from `N + 1` queries.
//!
//! A map `φ(x) = L(x) ∘ c` with `L` linear for `∘` is fixed by `c = φ(0)` and
//! the images `L(e_i) = φ(e_i) ∘ c` (every element is its own `∘`-inverse).
//! Any other input is then predicted by writing it in the canonical
//! `∘`-basis and folding the matching images.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gf2::BitVector;
use crate::hiddensum::HiddenSum;

/// Largest `N` accepted by exhaustive verification.
pub const MAX_EXHAUSTIVE_DIM: usize = 20;

/// A reconstructed `∘`-affine map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CircAffineMap {
    hs: HiddenSum,
    basis_images: Vec<BitVector>,
    translation: BitVector,
    queries: usize,
}

impl CircAffineMap {
    pub fn hidden_sum(&self) -> &HiddenSum {
        &self.hs
    }

    /// `L(e_1), …, L(e_N)`.
    pub fn basis_images(&self) -> &[BitVector] {
        &self.basis_images
    }

    /// `c = φ(0)`.
    pub fn translation(&self) -> &BitVector {
        &self.translation
    }

    /// Oracle calls spent on the reconstruction.
    pub fn queries(&self) -> usize {
        self.queries
    }
}

/// Queries `φ(0)`, then `φ(e_1), …, φ(e_N)`.
pub fn reconstruct(oracle: impl FnMut(&BitVector) -> BitVector, hs: &HiddenSum) -> CircAffineMap {
    let order: Vec<usize> = (0..hs.dim()).collect();
    reconstruct_in_order(oracle, hs, &order).expect("ascending order is a permutation")
}

/// Like [`reconstruct`] but asks for the basis images in the given order
/// (0-based coordinate indices, a permutation of `0..N`).
pub fn reconstruct_in_order(
    mut oracle: impl FnMut(&BitVector) -> BitVector,
    hs: &HiddenSum,
    order: &[usize],
) -> Result<CircAffineMap> {
    let big_n = hs.dim();
    let mut sorted = order.to_vec();
    sorted.sort_unstable();
    if sorted != (0..big_n).collect::<Vec<_>>() {
        return Err(Error::NotBijective {
            size: big_n,
            detail: "query order must list every coordinate once".into(),
        });
    }
    let mut queries = 0;
    let mut ask = |x: &BitVector| {
        queries += 1;
        oracle(x)
    };
    let translation = ask(&BitVector::zeros(big_n));
    let mut basis_images = vec![BitVector::zeros(big_n); big_n];
    for &i in order {
        let y = ask(&BitVector::unit(big_n, i));
        basis_images[i] = hs.circ_add(&y, &translation)?;
    }
    Ok(CircAffineMap {
        hs: hs.clone(),
        basis_images,
        translation,
        queries,
    })
}

/// `(⊙_{α_i = 1} L(e_i)) ∘ c` where `α` are the `∘`-coordinates of `x`.
pub fn predict(m: &CircAffineMap, x: &BitVector) -> Result<BitVector> {
    let alpha = m.hs.decompose(x)?;
    let mut acc = BitVector::zeros(m.hs.dim());
    for i in alpha.bits().ones() {
        acc = m.hs.circ_add(&acc, &m.basis_images[i])?;
    }
    m.hs.circ_add(&acc, &m.translation)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerifyMode {
    /// Every point of `(F2)^N`; needs `N ≤ 20`.
    Exhaustive,
    /// This many uniform random points.
    Sampled(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub input: BitVector,
    pub oracle: BitVector,
    pub predicted: BitVector,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub checked: u64,
    pub agreed: u64,
    /// The first disagreement in checking order (ascending integer value of
    /// the input in exhaustive mode).
    pub counterexample: Option<Counterexample>,
}

impl VerificationReport {
    pub fn agreement(&self) -> f64 {
        if self.checked == 0 {
            1.0
        } else {
            self.agreed as f64 / self.checked as f64
        }
    }

    pub fn is_exact(&self) -> bool {
        self.agreed == self.checked
    }
}

/// Compares the oracle with the reconstruction.
pub fn verify_reconstruction(
    oracle: impl Fn(&BitVector) -> BitVector + Sync,
    m: &CircAffineMap,
    mode: VerifyMode,
    seed: u64,
) -> Result<VerificationReport> {
    let big_n = m.hs.dim();
    let inputs: Vec<BitVector> = match mode {
        VerifyMode::Exhaustive => {
            if big_n > MAX_EXHAUSTIVE_DIM {
                return Err(Error::InvalidParameter(format!(
                    "exhaustive verification needs N <= {MAX_EXHAUSTIVE_DIM}, got {big_n}"
                )));
            }
            (0..1u64 << big_n)
                .map(|x| BitVector::from_fn(big_n, |i| (x >> (big_n - 1 - i)) & 1 == 1))
                .collect()
        }
        VerifyMode::Sampled(count) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..count).map(|_| BitVector::random(big_n, &mut rng)).collect()
        }
    };
    let outcomes: Vec<Option<usize>> = inputs
        .par_iter()
        .enumerate()
        .map(|(k, x)| {
            let predicted = predict(m, x).expect("sizes match");
            (oracle(x) != predicted).then_some(k)
        })
        .collect();
    let misses: Vec<usize> = outcomes.into_iter().flatten().collect();
    let counterexample = misses.first().map(|&k| {
        let x = &inputs[k];
        Counterexample {
            input: x.clone(),
            oracle: oracle(x),
            predicted: predict(m, x).expect("sizes match"),
        }
    });
    Ok(VerificationReport {
        checked: inputs.len() as u64,
        agreed: (inputs.len() - misses.len()) as u64,
        counterexample,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tbcipher::CircAffineOracle;

    fn example() -> HiddenSum {
        HiddenSum::parse_text(include_str!("../data/paper_example.hsum")).unwrap()
    }

    #[test]
    fn identity_oracle() {
        let hs = example();
        let m = reconstruct(|x| x.clone(), &hs);
        assert_eq!(m.queries(), 6);
        assert!(m.translation().is_zero());
        for (i, img) in m.basis_images().iter().enumerate() {
            assert_eq!(*img, BitVector::unit(5, i));
        }
    }

    #[test]
    fn translation_oracle() {
        let hs = example();
        let a: BitVector = "10110".parse().unwrap();
        let m = reconstruct(|x| hs.circ_add(x, &a).unwrap(), &hs);
        assert_eq!(*m.translation(), a);
        for (i, img) in m.basis_images().iter().enumerate() {
            assert_eq!(*img, BitVector::unit(5, i));
        }
    }

    #[test]
    fn random_oracle_on_example() {
        let hs = example();
        let oracle = CircAffineOracle::random(&hs, 4);
        let m = reconstruct(|x| oracle.eval(x).unwrap(), &hs);
        assert_eq!(m.basis_images(), &oracle.basis_images()[..]);
        assert_eq!(m.translation(), oracle.translation());
        let report = verify_reconstruction(|x| oracle.eval(x).unwrap(), &m, VerifyMode::Exhaustive, 0).unwrap();
        assert_eq!((report.checked, report.agreed), (32, 32));
        assert!(report.counterexample.is_none());
    }

    #[test]
    fn planted_defect_is_reported() {
        let hs = example();
        let oracle = CircAffineOracle::random(&hs, 5);
        let m = reconstruct(|x| oracle.eval(x).unwrap(), &hs);
        let bad: BitVector = "11001".parse().unwrap();
        let flip = BitVector::unit(5, 2);
        let perturbed = |x: &BitVector| {
            let y = oracle.eval(x).unwrap();
            if *x == bad {
                &y ^ &flip
            } else {
                y
            }
        };
        let r = verify_reconstruction(perturbed, &m, VerifyMode::Exhaustive, 0).unwrap();
        assert_eq!(r.agreed, 31);
        assert_eq!(r.counterexample.unwrap().input, bad);
    }

    #[test]
    fn query_order_does_not_matter() {
        let hs = example();
        let oracle = CircAffineOracle::random(&hs, 6);
        let a = reconstruct(|x| oracle.eval(x).unwrap(), &hs);
        let b = reconstruct_in_order(|x| oracle.eval(x).unwrap(), &hs, &[4, 2, 0, 3, 1]).unwrap();
        assert_eq!(a, b);
        assert!(reconstruct_in_order(|x| x.clone(), &hs, &[0, 0, 1, 2, 3]).is_err());
    }
}
