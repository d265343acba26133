//! Wall invariance: PRESENT's layer against a layer that keeps a wall.

use hidden_sums::tbcipher::{is_proper_mixing_layer, present_mixing_layer};
use hidden_sums::BitMatrix;

fn main() -> hidden_sums::Result<()> {
    let p = is_proper_mixing_layer(&present_mixing_layer(), 16, 4)?;
    println!("PRESENT: proper {}, {} walls checked", p.proper, p.walls_checked);

    // Mixes bricks 2 and 3 but never leaves brick 1.
    let mut lam = BitMatrix::identity(6);
    lam.set(2, 4, true);
    lam.set(4, 3, true);
    let p = is_proper_mixing_layer(&lam, 3, 2)?;
    println!("toy layer: proper {}, witness bricks {:?}", p.proper, p.witness);
    Ok(())
}
