//! Exact counts next to the bounds, the N = 6 total, and the μ/ν ratio check.

use hidden_sums::census::{count, ratio_bound_check, total_count, DEFAULT_BUDGET};
use num_traits::ToPrimitive;

fn main() -> hidden_sums::Result<()> {
    println!(
        "{:>3} {:>3} {:>16} {:>16} {:>16}  method",
        "n", "d", "exact", "nu", "mu"
    );
    for (n, d) in [
        (2, 1),
        (2, 4),
        (3, 2),
        (3, 3),
        (4, 1),
        (4, 2),
        (4, 3),
        (5, 2),
        (6, 1),
        (7, 2),
    ] {
        let r = count(n, d, DEFAULT_BUDGET, true)?;
        let exact = r.exact.map_or("-".into(), |e| e.to_string());
        println!("{n:>3} {d:>3} {exact:>16} {:>16} {:>16}  {}", r.nu, r.mu, r.method);
    }

    let t = total_count(6, DEFAULT_BUDGET)?;
    println!(
        "\nN = 6: {} practical hidden sums (log2 {:.2})",
        t.total,
        t.log2_total()
    );

    println!("\n{:>3} {:>3} {:>10} {:>10}", "n", "d", "mu/nu", "bound");
    for d in 2..=4 {
        for n in [2, 3, 6, 7] {
            let r = ratio_bound_check(n, d)?;
            println!(
                "{n:>3} {d:>3} {:>10.6} {:>10.6}",
                r.ratio.to_f64().unwrap_or(f64::NAN),
                r.bound_lower.to_f64().unwrap_or(f64::NAN)
            );
        }
    }
    Ok(())
}
