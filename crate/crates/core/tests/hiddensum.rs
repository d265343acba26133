mod common;

use std::collections::HashSet;

use common::{
    all_alternating_grids, bits, blocks_from_grid, brute_force_u, check_axioms, from_bits, from_u64, grid_f2_rank,
    naive_circ, to_u64,
};
use hidden_sums::hiddensum::{canonicalizing_map, BFrak, CoeffVector};
use hidden_sums::{BitMatrix, BitVector, HiddenSum};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Small shapes with a nonempty family.
fn small_shapes(max_big_n: usize) -> Vec<(usize, usize)> {
    let mut v = Vec::new();
    for n in 2..max_big_n {
        for d in 1..=max_big_n - n {
            if !(d == 1 && n % 2 == 1) {
                v.push((n, d));
            }
        }
    }
    v
}

#[test]
fn group_axioms_hold_exhaustively_for_small_sums() {
    for (n, d) in small_shapes(8) {
        for seed in 0..3 {
            let hs = HiddenSum::random(n, d, seed).unwrap();
            let ax = check_axioms(&hs);
            assert!(
                ax.commutative && ax.associative && ax.self_inverse && ax.differs_from_xor,
                "n={n} d={d}"
            );
        }
    }
}

#[test]
fn circ_add_agrees_with_block_definition() {
    for (n, d) in small_shapes(11) {
        let hs = HiddenSum::random(n, d, 7).unwrap();
        let big_n = n + d;
        for x in 0..1u64 << big_n {
            for a in (0..1u64 << big_n).step_by(1 + (1 << big_n) / 64) {
                let expect = to_u64(&naive_circ(&hs, &from_u64(big_n, x), &from_u64(big_n, a)));
                assert_eq!(hs.circ_add_packed(x, a), expect);
                let xv = BitVector::from_u64(big_n, x);
                let av = BitVector::from_u64(big_n, a);
                assert_eq!(hs.circ_add(&xv, &av).unwrap().to_u64(), expect);
            }
        }
    }
}

#[test]
fn translations_form_a_regular_group() {
    // x ↦ x ∘ a is a bijection for each a, and 0 ∘ a = a, so the translations
    // act regularly
    for (n, d) in small_shapes(11) {
        let hs = HiddenSum::random(n, d, 11).unwrap();
        let big_n = n + d;
        for a in 0..1u64 << big_n {
            assert_eq!(hs.circ_add_packed(0, a), a);
            let img: HashSet<u64> = (0..1u64 << big_n).map(|x| hs.circ_add_packed(x, a)).collect();
            assert_eq!(img.len(), 1 << big_n);
        }
    }
}

#[test]
fn kappa_is_an_involution_with_unitriangular_shape() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for (n, d) in [(2, 1), (3, 2), (6, 3), (30, 34), (60, 4)] {
        let hs = HiddenSum::random(n, d, 2).unwrap();
        for _ in 0..20 {
            let y = BitVector::random(n + d, &mut rng);
            let k = hs.kappa(&y).unwrap();
            assert_eq!(k.mul(&k).unwrap(), BitMatrix::identity(n + d));
            assert_eq!(k.submatrix(0, 0, n, n), BitMatrix::identity(n));
            assert!(k.submatrix(n, 0, d, n).is_zero());
            assert_eq!(k.submatrix(n, n, d, d), BitMatrix::identity(d));
            // τ_y(x) = x κ_y + y
            let x = BitVector::random(n + d, &mut rng);
            let mut expect = k.left_mul(&x).unwrap();
            for i in y.ones() {
                expect.toggle(i);
            }
            assert_eq!(hs.circ_add(&x, &y).unwrap(), expect);
        }
    }
}

#[test]
fn decompose_then_recompose_is_identity_exhaustively() {
    for seed in 0..20u64 {
        let (n, d) = small_shapes(11)[seed as usize % small_shapes(11).len()];
        let hs = HiddenSum::random(n, d, seed).unwrap();
        let big_n = n + d;
        for v in 0..1u64 << big_n {
            let v = BitVector::from_u64(big_n, v);
            let c = hs.decompose(&v).unwrap();
            assert_eq!(hs.recompose(&c).unwrap(), v);
        }
    }
}

#[test]
fn decomposition_matches_a_folded_circ_sum() {
    // independent check of the coefficients: fold α_i e_i with the naive ∘
    let hs = HiddenSum::random(5, 3, 4).unwrap();
    let big_n = 8;
    for v in 0..1u64 << big_n {
        let c = hs.decompose(&BitVector::from_u64(big_n, v)).unwrap();
        let mut acc = vec![0u8; big_n];
        for i in c.bits().ones() {
            acc = naive_circ(&hs, &acc, &bits(&BitVector::unit(big_n, i)));
        }
        assert_eq!(to_u64(&acc), v);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn decompose_round_trips_at_full_width(seed in any::<u64>(), n in 2usize..62) {
        let d = 64 - n;
        let hs = HiddenSum::random(n, d, seed).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..50 {
            let v = BitVector::random(64, &mut rng);
            prop_assert_eq!(hs.recompose(&hs.decompose(&v).unwrap()).unwrap(), v);
        }
    }

    #[test]
    fn packed_and_vector_paths_agree(seed in any::<u64>(), n in 2usize..40, d in 2usize..24) {
        let hs = HiddenSum::random(n, d, seed).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 1);
        let mask = if n + d == 64 { u64::MAX } else { (1u64 << (n + d)) - 1 };
        for _ in 0..20 {
            let x = rng.gen::<u64>() & mask;
            let a = rng.gen::<u64>() & mask;
            let v = hs.circ_add(&BitVector::from_u64(n + d, x), &BitVector::from_u64(n + d, a)).unwrap();
            prop_assert_eq!(hs.circ_add_packed(x, a), v.to_u64());
        }
    }

    #[test]
    fn text_round_trip(seed in any::<u64>(), n in 2usize..9, d in 2usize..6) {
        let hs = HiddenSum::random(n, d, seed).unwrap();
        prop_assert_eq!(HiddenSum::parse_text(&hs.to_text()).unwrap(), hs);
    }
}

#[test]
fn validate_agrees_with_brute_force_axioms() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for (n, d) in small_shapes(9) {
        for trial in 0..12 {
            // a mix of alternating grids and arbitrary blocks
            let blocks: Vec<BitMatrix> = if trial % 3 == 0 {
                (0..n).map(|_| BitMatrix::random(n, d, &mut rng)).collect()
            } else {
                let mut g = vec![0u64; n * n];
                for i in 0..n {
                    for j in i + 1..n {
                        let w = rng.gen::<u64>() & ((1 << d) - 1);
                        g[i * n + j] = w;
                        g[j * n + i] = w;
                    }
                }
                if trial % 3 == 1 {
                    g[rng.gen_range(0..n) * (n + 1)] = 1;
                }
                blocks_from_grid(n, d, &g)
            };
            let hs = HiddenSum::new(n, d, blocks).unwrap();
            let r = hs.validate();
            let ax = check_axioms(&hs);
            assert_eq!(r.symmetric, ax.commutative, "n={n} d={d}");
            assert_eq!(r.symmetric && r.zero_diagonal, ax.commutative && ax.self_inverse);
            assert_eq!(r.nonzero, ax.differs_from_xor);
            assert_eq!(
                r.is_practical_hidden_sum,
                ax.commutative && ax.self_inverse && ax.differs_from_xor
            );
        }
    }
}

#[test]
fn dim_u_matches_brute_force_and_grid_rank() {
    for (n, d) in [(2, 1), (2, 2), (3, 2), (4, 1), (3, 3), (4, 2), (5, 1)] {
        for grid in all_alternating_grids(n, d).into_iter().step_by(7) {
            let hs = HiddenSum::new(n, d, blocks_from_grid(n, d, &grid)).unwrap();
            let u = brute_force_u(&hs);
            assert_eq!(u.len(), 1 << hs.dim_u(), "n={n} d={d} grid={grid:?}");
            assert_eq!(hs.dim_u(), n + d - grid_f2_rank(n, d, &grid));
            assert_eq!(hs.validate().exact_dim_u, grid_f2_rank(n, d, &grid) == n);
            let basis_codes: HashSet<u64> = hs.u_basis().iter().map(|v| v.to_u64()).collect();
            assert!(basis_codes.iter().all(|c| u.contains(c)));
        }
    }
}

#[test]
fn bfrak_round_trip() {
    for (n, d) in [(3, 2), (8, 5), (20, 64)] {
        let hs = HiddenSum::random(n, d, 1).unwrap();
        let g = hs.bfrak();
        assert!(g.is_symmetric() && g.is_zero_diagonal());
        assert_eq!(g.f2_rank(), n);
        assert_eq!(HiddenSum::from_bfrak(&g).unwrap(), hs);
        let again = BFrak::new(n, d, g.entries().to_vec()).unwrap();
        assert_eq!(again, g);
    }
}

#[test]
fn coeff_vector_exposes_its_bits() {
    let hs = HiddenSum::random(4, 2, 0).unwrap();
    let v = BitVector::from_u64(6, 0b101101);
    let c = hs.decompose(&v).unwrap();
    assert_eq!(hs.recompose(&CoeffVector(c.bits().clone())).unwrap(), v);
}

#[test]
fn conjugated_operation_returns_to_canonical_form() {
    // x ∘_g y = ((x g) ∘ (y g)) g⁻¹ has U = U(∘) g⁻¹; the canonicalizing map
    // h must bring it back to a block-form operation readable by
    // from_operation
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for (n, d) in [(2, 1), (3, 2), (4, 2), (5, 3), (4, 4), (6, 2)] {
        let big_n = n + d;
        let hs = HiddenSum::random(n, d, rng.gen()).unwrap();
        let g = BitMatrix::random_invertible(big_n, &mut rng);
        let g_inv = g.invert().unwrap();
        let op_g = |x: &BitVector, y: &BitVector| {
            let s = naive_circ(&hs, &bits(&g.left_mul(x).unwrap()), &bits(&g.left_mul(y).unwrap()));
            g_inv.left_mul(&from_bits(&s)).unwrap()
        };
        let u_g: Vec<u64> = (0..1u64 << big_n)
            .filter(|&u| {
                let uv = BitVector::from_u64(big_n, u);
                (0..1u64 << big_n).all(|x| op_g(&BitVector::from_u64(big_n, x), &uv).to_u64() == x ^ u)
            })
            .collect();
        assert_eq!(u_g.len(), 1 << d);
        let basis = independent_subset(&u_g, big_n);
        let h = canonicalizing_map(&basis, big_n).unwrap();
        let h_inv = h.invert().unwrap();
        for (k, u) in basis.iter().enumerate() {
            assert_eq!(h.left_mul(u).unwrap(), BitVector::unit(big_n, n + k));
        }
        let op_c = |x: &BitVector, y: &BitVector| {
            h.left_mul(&op_g(&h_inv.left_mul(x).unwrap(), &h_inv.left_mul(y).unwrap()))
                .unwrap()
        };
        let canon = HiddenSum::from_operation(n, d, op_c).unwrap();
        assert!(canon.validate().is_practical_hidden_sum);
        assert_eq!(canon.dim_u(), d);
        for x in 0..1u64 << big_n {
            for y in 0..1u64 << big_n {
                let xv = BitVector::from_u64(big_n, x);
                let yv = BitVector::from_u64(big_n, y);
                assert_eq!(canon.circ_add(&xv, &yv).unwrap(), op_c(&xv, &yv));
            }
        }
    }
}

fn independent_subset(codes: &[u64], big_n: usize) -> Vec<BitVector> {
    let mut chosen: Vec<BitVector> = Vec::new();
    for &c in codes {
        let v = BitVector::from_u64(big_n, c);
        let mut rows = chosen.clone();
        rows.push(v.clone());
        if BitMatrix::from_rows(&rows).unwrap().rank() == rows.len() {
            chosen.push(v);
        }
    }
    chosen
}

#[test]
fn canonicalizing_map_rejects_dependent_input() {
    let u = BitVector::from_u64(5, 0b11000);
    assert!(canonicalizing_map(&[u.clone(), u], 5).is_err());
}

#[test]
fn empty_family_and_bad_shapes_are_errors() {
    assert!(HiddenSum::random(3, 1, 0).is_err());
    assert!(HiddenSum::random(1, 2, 0).is_err());
    assert!(HiddenSum::new(3, 2, vec![BitMatrix::zeros(3, 2); 2]).is_err());
}
