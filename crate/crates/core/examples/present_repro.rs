//! Every practical hidden sum that linearizes the PRESENT mixing layer,
//! after moving its fixed coordinates 1, 22, 43 next to 64.

use hidden_sums::linearize::{fixed_coordinates, linearize};
use hidden_sums::tbcipher::{present_mixing_layer, present_permutation, present_pi};
use hidden_sums::{BitMatrix, BitVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> hidden_sums::Result<()> {
    let lam = present_mixing_layer();
    let pi = present_pi();
    println!("fixed coordinates: {:?}", fixed_coordinates(&present_permutation()));

    let lin = linearize(&lam, &pi, 60, 4)?;
    println!(
        "system: {} rows x {} unknowns, built in {:.2?}, solved in {:.2?}",
        lin.system_rows, lin.system_cols, lin.build_time, lin.solve_time
    );
    println!("Λ₃ = I₄: {}", *lin.block.lambda3() == BitMatrix::identity(4));
    println!("kernel dimension: {}", lin.basis.dim());

    let seed = 2024;
    let hs = &lin.basis.sample_solutions(1, seed, true)?[0];
    let report = hs.validate();
    println!("sample (seed {seed}): F2 rank {}, dim U {}", report.rank, report.dim_u);

    // Check the linearity of the conjugated layer on random pairs.
    let hat = lin.block.to_matrix();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..1000 {
        let x = BitVector::random(64, &mut rng);
        let y = BitVector::random(64, &mut rng);
        let lhs = hat.left_mul(&hs.circ_add(&x, &y)?)?;
        let rhs = hs.circ_add(&hat.left_mul(&x)?, &hat.left_mul(&y)?)?;
        assert_eq!(lhs, rhs);
    }
    println!("(x∘y)λ̂ = xλ̂ ∘ yλ̂ on 1000 random pairs");
    Ok(())
}
