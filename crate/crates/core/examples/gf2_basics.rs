//! Packed F2 vectors and matrices: products, rank, inverse, kernel.

use hidden_sums::{BitMatrix, BitVector, Permutation};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> hidden_sums::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);

    let a = BitMatrix::random(6, 10, &mut rng);
    println!("A (6 x 10), rank {}:\n{}", a.rank(), a.to_text());

    // Solutions of x·Aᵀ = 0, i.e. the null space of A.
    let ker = a.solve_homogeneous();
    println!("null space dimension {}:", ker.len());
    for v in &ker {
        println!("  {v}");
    }

    let m = BitMatrix::random_invertible(8, &mut rng);
    let inv = m.invert()?;
    println!("M·M⁻¹ = I: {}", m.mul(&inv)? == BitMatrix::identity(8));

    let v: BitVector = "10110010".parse()?;
    println!("v = {v}, v·M = {}", m.left_mul(&v)?);

    let p = Permutation::from_cycles(8, &[&[1, 2, 3], &[5, 8]])?;
    let pm = p.to_matrix();
    println!("e1·P = {}", pm.left_mul(&BitVector::unit(8, 0))?);
    println!("P M P⁻¹ has rank {}", m.conjugate(&pm)?.rank());
    Ok(())
}
