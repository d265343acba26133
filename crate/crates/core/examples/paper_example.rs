//! The n = 3, d = 2 hidden sum shipped in `data/paper_example.hsum`:
//! validation, the grid over F4, sums, coordinates and the subspace U.

use hidden_sums::hiddensum::canonicalizing_map;
use hidden_sums::{BitVector, HiddenSum};

fn main() -> hidden_sums::Result<()> {
    let hs = HiddenSum::parse_text(include_str!("../data/paper_example.hsum"))?;
    let r = hs.validate();
    println!(
        "practical hidden sum: {}, dim U = {}",
        r.is_practical_hidden_sum, r.dim_u
    );
    println!("grid over F4:\n{}", hs.bfrak());

    let x: BitVector = "11010".parse()?;
    let y: BitVector = "01101".parse()?;
    println!("{x} ∘ {y} = {}", hs.circ_add(&x, &y)?);
    println!("{x} + {y} = {}", &x ^ &y);

    let c = hs.decompose(&x)?;
    println!("∘-coordinates of {x}: {}", c.bits());
    println!("recomposed: {}", hs.recompose(&c)?);

    let u = hs.u_basis();
    println!("U basis:");
    for v in &u {
        println!("  {v}");
    }
    // U is already spanned by e4, e5, so the canonicalizing map is I.
    let g = canonicalizing_map(&u, hs.dim())?;
    println!("canonicalizing map:\n{}", g.to_text());
    Ok(())
}
