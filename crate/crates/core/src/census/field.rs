//! Arithmetic in `F_{2^d}` for `d ≤ 8`, enough to decide invertibility of
//! small grids.

use crate::error::{Error, Result};

/// `F_{2^d}` in the polynomial basis, elements as bit masks (bit `k` is the
/// coefficient of `α^k`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SmallField {
    d: u32,
    modulus: u32,
}

impl SmallField {
    pub fn new(d: usize) -> Result<Self> {
        let modulus = match d {
            1 => 0b11,
            2 => 0b111,
            3 => 0b1011,
            4 => 0b10011,
            5 => 0b100101,
            6 => 0b1000011,
            7 => 0b10000011,
            8 => 0x11B,
            _ => {
                return Err(Error::InvalidParameter(format!(
                    "small field arithmetic supports 1 <= d <= 8, got {d}"
                )))
            }
        };
        Ok(Self { d: d as u32, modulus })
    }

    pub fn order(&self) -> u32 {
        1 << self.d
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        let mut acc = 0u32;
        let mut a = a;
        let mut b = b;
        while b != 0 {
            if b & 1 == 1 {
                acc ^= a;
            }
            b >>= 1;
            a <<= 1;
            if a & (1 << self.d) != 0 {
                a ^= self.modulus;
            }
        }
        acc
    }

    /// Multiplicative inverse via `a^(q-2)`; `inv(0)` is 0.
    pub fn inv(&self, a: u32) -> u32 {
        let mut result = 1;
        let mut base = a;
        let mut e = self.order() - 2;
        while e != 0 {
            if e & 1 == 1 {
                result = self.mul(result, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        if a == 0 {
            0
        } else {
            result
        }
    }

    /// Rank of a row-major `n × n` matrix over the field.
    pub fn rank(&self, n: usize, entries: &[u32]) -> usize {
        let mut m = entries.to_vec();
        let mut r = 0;
        for c in 0..n {
            let Some(p) = (r..n).find(|&i| m[i * n + c] != 0) else {
                continue;
            };
            for k in 0..n {
                m.swap(r * n + k, p * n + k);
            }
            let inv = self.inv(m[r * n + c]);
            for k in 0..n {
                m[r * n + k] = self.mul(m[r * n + k], inv);
            }
            for i in 0..n {
                let f = m[i * n + c];
                if i != r && f != 0 {
                    for k in 0..n {
                        m[i * n + k] ^= self.mul(f, m[r * n + k]);
                    }
                }
            }
            r += 1;
        }
        r
    }
}
