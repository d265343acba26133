//! Solutions for a small block map, checked against the definition, and the
//! identity-map kernel at n = 3, d = 2.

use hidden_sums::linearize::{build_system, linearize, solve, BlockLinearMap};
use hidden_sums::{BitMatrix, BitVector};

fn main() -> hidden_sums::Result<()> {
    let id = BitMatrix::identity(5);
    let lin = linearize(&id, &id, 3, 2)?;
    println!("identity map, n = 3, d = 2: kernel dimension {}", lin.basis.dim());
    println!("full-rank points: {}", lin.basis.count_full_rank()?);

    // Λ₁ swaps the first two coordinates.
    let mut l1 = BitMatrix::zeros(3, 3);
    l1.set(0, 1, true);
    l1.set(1, 0, true);
    l1.set(2, 2, true);
    let lam = BlockLinearMap::new(l1, BitMatrix::zeros(3, 2), BitMatrix::identity(2))?;
    let sys = build_system(&lam);
    let basis = solve(&sys);
    println!(
        "swap map: {} x {} system, kernel dimension {}",
        sys.rows(),
        sys.cols(),
        basis.dim()
    );

    let m = lam.to_matrix();
    for hs in basis.enumerate()? {
        let ok = (0..32u64).all(|x| {
            (0..32u64).all(|y| {
                let (x, y) = (BitVector::from_u64(5, x), BitVector::from_u64(5, y));
                let lhs = m.left_mul(&hs.circ_add(&x, &y).unwrap()).unwrap();
                let rhs = hs.circ_add(&m.left_mul(&x).unwrap(), &m.left_mul(&y).unwrap()).unwrap();
                lhs == rhs
            })
        });
        println!("  grid {:<14} rank {} linear {ok}", hs.bfrak().compact(), hs.rank());
    }
    Ok(())
}
