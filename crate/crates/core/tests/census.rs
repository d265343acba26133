mod common;

use std::collections::HashSet;

use common::{all_alternating_grids, grid_f2_rank};
use hidden_sums::census::{
    brute_force_count, brute_force_invertible_count, closed_form_count, count, gaussian_binomial,
    invertible_alternating_count, mu, nu, ratio, ratio_bound_check, total_count, CountMethod, DEFAULT_BUDGET,
};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

fn naive_count(n: usize, d: usize) -> u64 {
    all_alternating_grids(n, d)
        .iter()
        .filter(|g| grid_f2_rank(n, d, g) == n)
        .count() as u64
}

#[test]
fn brute_force_matches_naive_enumeration() {
    for (n, d) in [
        (2, 1),
        (2, 3),
        (2, 7),
        (3, 1),
        (3, 2),
        (3, 4),
        (4, 1),
        (4, 2),
        (5, 1),
        (6, 1),
    ] {
        let r = brute_force_count(n, d, DEFAULT_BUDGET).unwrap();
        assert_eq!(r.exact.unwrap(), BigUint::from(naive_count(n, d)), "n={n} d={d}");
        assert_eq!(r.method, CountMethod::BruteForce);
    }
}

#[test]
fn closed_forms_match_enumeration_where_they_apply() {
    for (n, d) in [
        (2, 1),
        (2, 2),
        (2, 5),
        (3, 1),
        (3, 2),
        (3, 3),
        (3, 5),
        (4, 1),
        (5, 1),
        (6, 1),
    ] {
        let closed = closed_form_count(n, d).unwrap().exact.unwrap();
        let brute = brute_force_count(n, d, DEFAULT_BUDGET).unwrap().exact.unwrap();
        assert_eq!(closed, brute, "n={n} d={d}");
    }
    assert!(closed_form_count(4, 2).is_err());
}

#[test]
fn count_falls_back_to_bounds() {
    let r = count(9, 4, 1 << 10, true).unwrap();
    assert_eq!(r.method, CountMethod::BoundsOnly);
    assert!(r.exact.is_none());
    assert!(r.within_bounds());
    let r = count(3, 6, 1 << 10, true).unwrap();
    assert_eq!(r.method, CountMethod::ClosedForm);
    assert!(brute_force_count(5, 5, 1 << 10).is_err());
}

/// `F_{2^d}` multiplication by shift-and-add, reducing by `poly`.
fn gf_mul(a: u64, b: u64, d: usize, poly: u64) -> u64 {
    let mut r = 0;
    for k in 0..d {
        if (b >> k) & 1 == 1 {
            r ^= a << k;
        }
    }
    for k in (d..2 * d).rev() {
        if (r >> k) & 1 == 1 {
            r ^= poly << (k - d);
        }
    }
    r
}

#[test]
fn invertible_alternating_counts_agree_with_pfaffians() {
    // a 4 × 4 alternating matrix is invertible iff its Pfaffian
    // a12 a34 + a13 a24 + a14 a23 is nonzero; 2 × 2 iff a12 ≠ 0
    for (d, poly) in [(1usize, 0b11u64), (2, 0b111), (3, 0b1011)] {
        let q = 1u64 << d;
        let pf2 = (q - 1) as u32;
        assert_eq!(invertible_alternating_count(2, d).unwrap(), BigUint::from(pf2));
        assert_eq!(
            brute_force_invertible_count(2, d, DEFAULT_BUDGET).unwrap(),
            BigUint::from(pf2)
        );
        let mut pf4 = 0u64;
        for code in 0..q.pow(6) {
            let a: Vec<u64> = (0..6).map(|k| (code / q.pow(k)) % q).collect();
            let (a12, a13, a14, a23, a24, a34) = (a[0], a[1], a[2], a[3], a[4], a[5]);
            let pf = gf_mul(a12, a34, d, poly) ^ gf_mul(a13, a24, d, poly) ^ gf_mul(a14, a23, d, poly);
            pf4 += (pf != 0) as u64;
        }
        assert_eq!(invertible_alternating_count(4, d).unwrap(), BigUint::from(pf4), "d={d}");
        assert_eq!(
            brute_force_invertible_count(4, d, DEFAULT_BUDGET).unwrap(),
            BigUint::from(pf4)
        );
    }
}

/// Lower bound written out term by term from its defining product.
fn nu_reference(n: usize, d: usize) -> BigRational {
    let q = BigRational::from_integer(BigInt::one() << d);
    let c2 = |k: usize| k * k.saturating_sub(1) / 2;
    let prod = |upto: usize| {
        (1..=upto).fold(BigRational::one(), |acc, j| {
            acc * (BigRational::one() - BigRational::one() / num_traits::pow(q.clone(), 2 * j - 1))
        })
    };
    if n.is_multiple_of(2) {
        num_traits::pow(q.clone(), c2(n)) * prod(n / 2)
    } else {
        let two = BigRational::from_integer(BigInt::from(2));
        (num_traits::pow(q.clone(), n - 1) - num_traits::pow(two, n - 1))
            * num_traits::pow(q.clone(), c2(n - 1))
            * prod((n - 1) / 2)
    }
}

#[test]
fn lower_bound_matches_its_product_formula() {
    for n in 2..=9 {
        for d in 1..=5 {
            let r = nu_reference(n, d);
            assert!(r.is_integer());
            assert_eq!(BigInt::from(nu(n, d)), r.to_integer(), "n={n} d={d}");
        }
    }
    assert_eq!(nu(3, 2), BigUint::from(36u32));
}

#[test]
fn bounds_sandwich_enumerable_counts() {
    for n in 2..=6 {
        for d in 1..=8 {
            if d * n * (n - 1) / 2 > 16 {
                continue;
            }
            let r = brute_force_count(n, d, DEFAULT_BUDGET).unwrap();
            assert!(r.within_bounds(), "n={n} d={d}: {:?}", r);
            assert!(!r.nu_exceeds_exact());
        }
    }
}

#[test]
fn upper_bound_is_below_the_candidate_count() {
    for n in 2..=8 {
        for d in 1..=4 {
            assert!(mu(n, d) < BigUint::one() << (d * n * (n - 1) / 2));
        }
    }
}

/// Distinct `d`-dimensional subspaces of `(F2)^N`, each stored as the bitmap
/// of its members.
fn naive_subspace_count(big_n: usize, d: usize) -> u64 {
    fn rec(big_n: usize, left: usize, span: &[u64], seen: &mut HashSet<Vec<u64>>) {
        if left == 0 {
            let mut s = span.to_vec();
            s.sort_unstable();
            seen.insert(s);
            return;
        }
        for v in 1..1u64 << big_n {
            if span.contains(&v) {
                continue;
            }
            let mut next = span.to_vec();
            next.extend(span.iter().map(|s| s ^ v));
            rec(big_n, left - 1, &next, seen);
        }
    }
    let mut seen = HashSet::new();
    rec(big_n, d, &[0], &mut seen);
    seen.len() as u64
}

#[test]
fn gaussian_binomials_count_subspaces() {
    for big_n in 1..=5 {
        for d in 0..=big_n.min(3) {
            assert_eq!(
                gaussian_binomial(big_n, d),
                BigUint::from(naive_subspace_count(big_n, d)),
                "N={big_n} d={d}"
            );
            assert_eq!(gaussian_binomial(big_n, d), gaussian_binomial(big_n, big_n - d));
        }
    }
}

#[test]
fn total_for_n6_matches_naive_sum() {
    let report = total_count(6, DEFAULT_BUDGET).unwrap();
    let mut expect = 0u64;
    for d in 1..=4 {
        let n = 6 - d;
        expect += gaussian_binomial(6, d).to_u64().unwrap() * naive_count(n, d);
    }
    assert_eq!(report.total, BigUint::from(expect));
    assert_eq!(report.terms.len(), 4);
    let lg = report.log2_total();
    assert!((lg - (expect as f64).log2()).abs() < 1e-9);
}

#[test]
fn ratio_bound_enclosure_brackets_the_float_value() {
    for d in 2..=4 {
        let q = (1u64 << d) as f64;
        let e = ((q + 1.0) / (q * (q - 1.0))).exp();
        for n in 2..=8 {
            let r = ratio_bound_check(n, d).unwrap();
            let c = if n % 2 == 0 { 1.0 } else { 2.0 };
            let lo = r.bound_lower.to_f64().unwrap();
            let hi = r.bound_upper.to_f64().unwrap();
            assert!(lo <= c * e * (1.0 + 1e-12) && c * e <= hi * (1.0 + 1e-12));
            assert!(hi - lo < 1e-6);
            assert_eq!(r.ratio, ratio(n, d));
            let rf = r.ratio.to_f64().unwrap();
            assert_eq!(r.holds, rf <= c * e, "n={n} d={d} ratio={rf}");
        }
    }
    assert!(ratio_bound_check(4, 1).is_err());
}

#[test]
fn zero_lower_bound_only_for_empty_families() {
    assert!(nu(3, 1).is_zero());
    assert!(!nu(3, 2).is_zero());
}
