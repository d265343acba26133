//! Time of the full pipeline (system construction and solving) for random
//! block-form maps with d = 2 and growing N.
//!
//! Usage: `table1_scaling [N ...]` (default 64 80 96 112 128).

use std::time::{Duration, Instant};

use hidden_sums::linearize::{build_system, solve, BlockLinearMap};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> hidden_sums::Result<()> {
    let sizes: Vec<usize> = std::env::args()
        .skip(1)
        .map(|a| a.parse().expect("sizes are integers"))
        .collect();
    let sizes = if sizes.is_empty() {
        vec![64, 80, 96, 112, 128]
    } else {
        sizes
    };
    let d = 2;
    println!("{:>5} {:>4} {:>8} {:>8} {:>10}", "N", "d", "rows", "l", "seconds");
    for big_n in sizes {
        let mut rng = ChaCha8Rng::seed_from_u64(big_n as u64);
        let lam = BlockLinearMap::random(big_n - d, d, &mut rng)?;
        let start = Instant::now();
        let sys = build_system(&lam);
        let basis = solve(&sys);
        let elapsed: Duration = start.elapsed();
        println!(
            "{:>5} {:>4} {:>8} {:>8} {:>10.3}",
            big_n,
            d,
            sys.rows(),
            basis.dim(),
            elapsed.as_secs_f64()
        );
    }
    Ok(())
}
