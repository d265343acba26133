//! Recovers a ∘-affine black box from N + 1 queries and compares it with the
//! box everywhere.

use hidden_sums::attack::{predict, reconstruct, verify_reconstruction, VerifyMode};
use hidden_sums::tbcipher::CircAffineOracle;
use hidden_sums::{BitVector, HiddenSum};

fn main() -> hidden_sums::Result<()> {
    let (n, d, seed) = (8, 4, 3);
    let hs = HiddenSum::random(n, d, seed)?;
    let oracle = CircAffineOracle::random(&hs, seed + 1);

    let m = reconstruct(|x| oracle.eval(x).unwrap(), &hs);
    println!("N = {}, queries = {}", hs.dim(), m.queries());

    let x: BitVector = "101100111000".parse()?;
    println!("φ({x}) = {}, predicted {}", oracle.eval(&x)?, predict(&m, &x)?);

    let r = verify_reconstruction(|x| oracle.eval(x).unwrap(), &m, VerifyMode::Exhaustive, seed)?;
    println!("agreement {}/{}", r.agreed, r.checked);

    // The same attack against plain XOR-affine maps fails.
    let xor = HiddenSum::zero(n, d)?;
    let m = reconstruct(|x| oracle.eval(x).unwrap(), &xor);
    let r = verify_reconstruction(|x| oracle.eval(x).unwrap(), &m, VerifyMode::Exhaustive, seed)?;
    println!("treating φ as XOR-affine: agreement {:.4}", r.agreement());
    Ok(())
}
