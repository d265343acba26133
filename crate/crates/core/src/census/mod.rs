//! Counting practical hidden sums.
//!
//! `|𝓜_{n,d}|` is the number of symmetric zero-diagonal `n × n` grids over
//! `F_{2^d}` whose F2 rank (as `n × nd` binary matrices) is `n`. Each such
//! grid is one canonical hidden sum with `dim U = d`; counting all hidden sums
//! on `(F2)^N` also chooses the subspace `U`, which is where the Gaussian
//! binomial comes in.

mod field;

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};

pub use field::SmallField;

/// Default cap on the number of candidate grids an enumeration may visit.
pub const DEFAULT_BUDGET: u64 = 1 << 28;

/// Environment variable that overrides [`DEFAULT_BUDGET`].
pub const BUDGET_ENV: &str = "HIDDENSUM_BUDGET";

/// The enumeration budget from `HIDDENSUM_BUDGET`, or the default.
pub fn budget_from_env() -> Result<u64> {
    match std::env::var(BUDGET_ENV) {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| Error::InvalidParameter(format!("{BUDGET_ENV} must be a non-negative integer, got {s:?}"))),
        Err(_) => Ok(DEFAULT_BUDGET),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CountMethod {
    BruteForce,
    ClosedForm,
    BoundsOnly,
}

impl fmt::Display for CountMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CountMethod::BruteForce => "brute-force",
            CountMethod::ClosedForm => "closed-form",
            CountMethod::BoundsOnly => "bounds-only",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountReport {
    pub n: usize,
    pub d: usize,
    pub q: BigUint,
    pub exact: Option<BigUint>,
    pub mu: BigUint,
    pub nu: BigUint,
    pub method: CountMethod,
}

impl CountReport {
    fn with(n: usize, d: usize, exact: Option<BigUint>, method: CountMethod) -> Self {
        Self {
            n,
            d,
            q: BigUint::one() << d,
            exact,
            mu: mu(n, d),
            nu: nu(n, d),
            method,
        }
    }

    /// Set when the lower bound exceeds the exact count, which would mean the
    /// bound formula is wrong at this point.
    pub fn nu_exceeds_exact(&self) -> bool {
        self.exact.as_ref().is_some_and(|e| &self.nu > e)
    }

    pub fn within_bounds(&self) -> bool {
        self.exact.as_ref().is_none_or(|e| &self.nu <= e && e <= &self.mu)
    }
}

fn check_nd(n: usize, d: usize) -> Result<()> {
    if n < 2 || d == 0 {
        return Err(Error::InvalidParameter(format!(
            "need n >= 2 and d >= 1, got n={n}, d={d}"
        )));
    }
    Ok(())
}

fn binom2(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

fn candidates(n: usize, d: usize) -> BigUint {
    BigUint::one() << (d * binom2(n))
}

fn check_budget(n: usize, d: usize, budget: u64) -> Result<u64> {
    let total = candidates(n, d);
    match total.to_u64() {
        Some(t) if t <= budget => Ok(t),
        _ => Err(Error::BudgetExceeded {
            candidates: total,
            budget,
        }),
    }
}

/// Grid rows for candidate `idx`, packed as `n·d`-bit words (entry `(i, j)` in
/// bits `j·d .. j·d + d` of row `i`).
///
/// Candidates number the above-diagonal cells in row-major order with the
/// last cell as the least significant digit.
fn candidate_rows(n: usize, d: usize, idx: u64, rows: &mut [u128]) {
    let cells = binom2(n);
    let mask = (1u64 << d) - 1;
    rows.iter_mut().for_each(|r| *r = 0);
    let mut t = 0;
    for i in 0..n {
        for j in i + 1..n {
            let v = ((idx >> ((cells - 1 - t) * d)) & mask) as u128;
            rows[i] |= v << (j * d);
            rows[j] |= v << (i * d);
            t += 1;
        }
    }
}

fn full_f2_rank(rows: &[u128]) -> bool {
    let mut basis = [0u128; 128];
    for &r in rows {
        let mut x = r;
        loop {
            if x == 0 {
                return false;
            }
            let b = x.trailing_zeros() as usize;
            if basis[b] == 0 {
                basis[b] = x;
                break;
            }
            x ^= basis[b];
        }
    }
    true
}

/// Counts candidates satisfying `keep`, in parallel over odometer ranges.
fn enumerate(n: usize, d: usize, budget: u64, keep: impl Fn(&[u128]) -> bool + Sync) -> Result<BigUint> {
    check_nd(n, d)?;
    if n * d > 128 {
        return Err(Error::InvalidParameter(format!(
            "grid rows of {} bits exceed the enumerator's word size",
            n * d
        )));
    }
    let total = check_budget(n, d, budget)?;
    const CHUNK: u64 = 1 << 12;
    let chunks = total.div_ceil(CHUNK);
    let count: u64 = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rows = vec![0u128; n];
            let mut hits = 0u64;
            for idx in c * CHUNK..((c + 1) * CHUNK).min(total) {
                candidate_rows(n, d, idx, &mut rows);
                if keep(&rows) {
                    hits += 1;
                }
            }
            hits
        })
        .sum();
    Ok(BigUint::from(count))
}

/// Exact `|𝓜_{n,d}|` by enumerating all `q^{C(n,2)}` symmetric zero-diagonal
/// grids.
pub fn brute_force_count(n: usize, d: usize, budget: u64) -> Result<CountReport> {
    let exact = enumerate(n, d, budget, full_f2_rank)?;
    Ok(CountReport::with(n, d, Some(exact), CountMethod::BruteForce))
}

/// Number of symmetric zero-diagonal grids that are invertible over
/// `F_{2^d}` (as opposed to having full F2 rank). Needs `d ≤ 8`.
pub fn brute_force_invertible_count(n: usize, d: usize, budget: u64) -> Result<BigUint> {
    let field = SmallField::new(d)?;
    let mask = (1u128 << d) - 1;
    enumerate(n, d, budget, |rows| {
        let entries: Vec<u32> = rows
            .iter()
            .flat_map(|&r| (0..n).map(move |j| ((r >> (j * d)) & mask) as u32))
            .collect();
        field.rank(n, &entries) == n
    })
}

/// `q^{C(n,2)} · ∏_{j=1}^{n/2} (1 − q^{1−2j})` for even `n`: the number of
/// symmetric zero-diagonal invertible `n × n` matrices over `F_q`.
pub fn invertible_alternating_count(n: usize, d: usize) -> Result<BigUint> {
    check_nd(n, d)?;
    if n % 2 == 1 {
        return Err(Error::InvalidParameter(format!(
            "n must be even (odd zero-diagonal symmetric matrices are singular), got {n}"
        )));
    }
    Ok(to_integer(&q_product(d, binom2(n), n / 2)))
}

/// Exact count from the closed forms, which cover `n = 2`, `n = 3` and `d = 1`.
pub fn closed_form_count(n: usize, d: usize) -> Result<CountReport> {
    check_nd(n, d)?;
    let q = BigUint::one() << d;
    let one = BigUint::one();
    let exact = if n == 2 {
        &q - &one
    } else if n == 3 {
        if d == 1 {
            BigUint::zero()
        } else {
            (&q + 3u32) * (&q - &one) * (&q - 2u32)
        }
    } else if d == 1 {
        if n % 2 == 1 {
            BigUint::zero()
        } else {
            to_integer(&q_product(1, binom2(n), n / 2))
        }
    } else {
        return Err(Error::NoClosedForm { n, d });
    };
    Ok(CountReport::with(n, d, Some(exact), CountMethod::ClosedForm))
}

/// The best available report: enumeration when `prefer_exact` and within
/// budget, then a closed form, then bounds alone.
pub fn count(n: usize, d: usize, budget: u64, prefer_exact: bool) -> Result<CountReport> {
    check_nd(n, d)?;
    if prefer_exact {
        match brute_force_count(n, d, budget) {
            Ok(r) => return Ok(r),
            Err(Error::BudgetExceeded { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    match closed_form_count(n, d) {
        Ok(r) => Ok(r),
        Err(Error::NoClosedForm { .. }) => Ok(CountReport::with(n, d, None, CountMethod::BoundsOnly)),
        Err(e) => Err(e),
    }
}

fn binomial(n: usize, k: usize) -> BigUint {
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Upper bound `2^{d·C(n,2)} − 1 − Σ_{r=1}^{n−2} C(n,r)·(2^d − 1)^{C(n−r,2)}`.
pub fn mu(n: usize, d: usize) -> BigUint {
    let mut acc: BigInt = BigInt::from(candidates(n, d)) - 1;
    let qm1 = (BigUint::one() << d) - 1u32;
    for r in 1..n.saturating_sub(1) {
        acc -= BigInt::from(binomial(n, r) * qm1.pow(binom2(n - r) as u32));
    }
    acc.to_biguint().expect("the upper bound is non-negative")
}

/// `q^{e} · ∏_{j=1}^{m} (1 − q^{1−2j})` as an exact rational, `q = 2^d`.
fn q_product(d: usize, e: usize, m: usize) -> BigRational {
    let q = BigInt::one() << d;
    let mut acc = BigRational::from_integer(q.pow(e as u32));
    for j in 1..=m {
        let den = q.pow((2 * j - 1) as u32);
        acc *= Ratio::new(&den - 1, den);
    }
    acc
}

fn to_integer(r: &BigRational) -> BigUint {
    r.floor().to_integer().to_biguint().expect("counts are non-negative")
}

/// Lower bound as an exact rational.
///
/// Even `n`: `q^{C(n,2)} ∏_{j=1}^{⌈(n−1)/2⌉}(1 − q^{1−2j})`.
/// Odd `n`: `(q^{n−1} − 2^{n−1}) · q^{C(n−1,2)} ∏_{j=1}^{⌈(n−2)/2⌉}(1 − q^{1−2j})`.
pub fn nu_rational(n: usize, d: usize) -> BigRational {
    if n.is_multiple_of(2) {
        q_product(d, binom2(n), n / 2)
    } else {
        let q = BigInt::one() << d;
        let pre = q.pow((n - 1) as u32) - (BigInt::one() << (n - 1));
        q_product(d, binom2(n - 1), (n - 1) / 2) * BigRational::from_integer(pre)
    }
}

/// Lower bound, floored to an integer if the rational is not integral.
pub fn nu(n: usize, d: usize) -> BigUint {
    to_integer(&nu_rational(n, d))
}

/// Gaussian binomial `[N d]₂`, the number of `d`-dimensional subspaces of
/// `(F2)^N`; zero when `d > N`.
pub fn gaussian_binomial(big_n: usize, d: usize) -> BigUint {
    if d > big_n {
        return BigUint::zero();
    }
    let one = BigUint::one();
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..d {
        num *= (&one << (big_n - i)) - &one;
        den *= (&one << (d - i)) - &one;
    }
    let (quot, rem) = num.div_rem(&den);
    debug_assert!(rem.is_zero());
    quot
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TotalTerm {
    pub d: usize,
    pub n: usize,
    pub subspaces: BigUint,
    pub count: BigUint,
    pub product: BigUint,
}

/// Number of practical hidden sums on `(F2)^N`, summed over `dim U`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TotalReport {
    pub big_n: usize,
    pub terms: Vec<TotalTerm>,
    pub total: BigUint,
}

impl TotalReport {
    pub fn log2_total(&self) -> f64 {
        if self.total.is_zero() {
            return f64::NEG_INFINITY;
        }
        let bits = self.total.bits();
        let shift = bits.saturating_sub(53);
        (&self.total >> shift).to_f64().unwrap().log2() + shift as f64
    }
}

/// `Σ_{d=1}^{N−2} [N d]₂ · |𝓜_{N−d,d}|`, every term by enumeration.
pub fn total_count(big_n: usize, budget: u64) -> Result<TotalReport> {
    if big_n < 3 {
        return Err(Error::InvalidParameter(format!("N must be at least 3, got {big_n}")));
    }
    let mut terms = Vec::new();
    let mut total = BigUint::zero();
    for d in 1..=big_n - 2 {
        let n = big_n - d;
        let subspaces = gaussian_binomial(big_n, d);
        let count = brute_force_count(n, d, budget)?.exact.expect("enumeration is exact");
        let product = &subspaces * &count;
        total += &product;
        terms.push(TotalTerm {
            d,
            n,
            subspaces,
            count,
            product,
        });
    }
    Ok(TotalReport { big_n, terms, total })
}

/// Outcome of comparing `μ/ν` with `c·e^{(q+1)/(q(q−1))}` (`c = 1` for even
/// `n`, `c = 2` for odd `n`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatioReport {
    pub n: usize,
    pub d: usize,
    pub ratio: BigRational,
    /// Certified rational enclosure of the bound.
    pub bound_lower: BigRational,
    pub bound_upper: BigRational,
    pub holds: bool,
}

/// `μ(n,d) / ν(n,d)` exactly.
pub fn ratio(n: usize, d: usize) -> BigRational {
    BigRational::new(BigInt::from(mu(n, d)), BigInt::from(nu(n, d)))
}

/// Enclosure `[lo, hi]` of `e^x` for rational `0 ≤ x ≤ 1` from the first
/// `terms` Taylor terms and the geometric tail bound.
fn exp_enclosure(x: &BigRational, terms: u32) -> (BigRational, BigRational) {
    let mut sum = BigRational::zero();
    let mut term = BigRational::one();
    for k in 0..terms {
        sum += &term;
        term = term * x / BigInt::from(k + 1);
    }
    // Remaining tail ≤ term · Σ (x/(terms+1))^i = term · (terms+1)/(terms+1−x).
    let k1 = BigRational::from_integer(BigInt::from(terms + 1));
    let tail = &term * &k1 / (&k1 - x);
    let hi = &sum + tail;
    (sum, hi)
}

pub fn ratio_bound_check(n: usize, d: usize) -> Result<RatioReport> {
    check_nd(n, d)?;
    if d < 2 {
        return Err(Error::InvalidParameter(format!(
            "the ratio bound needs d >= 2, got {d}"
        )));
    }
    let q = BigInt::one() << d;
    let x = BigRational::new(&q + 1, &q * (&q - 1));
    let factor = BigRational::from_integer(BigInt::from(if n.is_multiple_of(2) { 1 } else { 2 }));
    let r = ratio(n, d);
    let mut terms = 8;
    loop {
        let (lo, hi) = exp_enclosure(&x, terms);
        let (lo, hi) = (&lo * &factor, &hi * &factor);
        if r <= lo || r > hi || terms >= 256 {
            return Ok(RatioReport {
                n,
                d,
                holds: r <= lo,
                ratio: r,
                bound_lower: lo,
                bound_upper: hi,
            });
        }
        terms *= 2;
    }
}
