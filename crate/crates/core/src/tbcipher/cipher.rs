//! A key-alternating toy cipher: bricklayer, mixing layer, round key.

use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector};

/// A permutation of `m`-bit values.
///
/// A brick is read as an integer with its first coordinate as the most
/// significant bit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SBox {
    m: usize,
    table: Vec<u32>,
}

impl SBox {
    pub fn new(m: usize, table: Vec<u32>) -> Result<Self> {
        if m == 0 || m > 16 {
            return Err(Error::InvalidParameter(format!(
                "S-box width must lie in 1..=16, got {m}"
            )));
        }
        let size = 1usize << m;
        if table.len() != size {
            return Err(Error::DimensionMismatch {
                context: "S-box table length",
                expected: size,
                found: table.len(),
            });
        }
        let mut seen = vec![false; size];
        for &v in &table {
            let v = v as usize;
            if v >= size || seen[v] {
                return Err(Error::NotBijective {
                    size,
                    detail: format!("S-box value {v} repeated or out of range"),
                });
            }
            seen[v] = true;
        }
        Ok(Self { m, table })
    }

    pub fn identity(m: usize) -> Self {
        Self::new(m, (0..1u32 << m).collect()).expect("identity is a bijection")
    }

    pub fn width(&self) -> usize {
        self.m
    }

    pub fn table(&self) -> &[u32] {
        &self.table
    }

    pub fn apply(&self, x: u32) -> u32 {
        self.table[x as usize]
    }

    /// One line of `2^m` space-separated integers.
    pub fn parse_text(m: usize, text: &str) -> Result<Self> {
        let line = text
            .lines()
            .find(|l| !l.trim().is_empty())
            .ok_or_else(|| Error::parse(1, "empty S-box file"))?;
        let table = line
            .split_whitespace()
            .map(|t| {
                t.parse::<u32>()
                    .map_err(|_| Error::parse(1, format!("bad entry {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(m, table)
    }

    pub fn to_text(&self) -> String {
        let parts: Vec<String> = self.table.iter().map(u32::to_string).collect();
        format!("{}\n", parts.join(" "))
    }
}

/// One round `x ↦ ((x γ) λ) + k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Round {
    pub sboxes: Vec<SBox>,
    pub lambda: BitMatrix,
    pub key: BitVector,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TbCipherSpec {
    b: usize,
    m: usize,
    rounds: Vec<Round>,
}

impl TbCipherSpec {
    pub fn new(b: usize, m: usize, rounds: Vec<Round>) -> Result<Self> {
        if b == 0 || m == 0 {
            return Err(Error::InvalidParameter("brick count and size must be positive".into()));
        }
        let big_n = b * m;
        for round in &rounds {
            if round.sboxes.len() != b {
                return Err(Error::DimensionMismatch {
                    context: "S-boxes per round",
                    expected: b,
                    found: round.sboxes.len(),
                });
            }
            if let Some(s) = round.sboxes.iter().find(|s| s.width() != m) {
                return Err(Error::DimensionMismatch {
                    context: "S-box width",
                    expected: m,
                    found: s.width(),
                });
            }
            if round.lambda.rows() != big_n || !round.lambda.is_square() {
                return Err(Error::DimensionMismatch {
                    context: "mixing layer size",
                    expected: big_n,
                    found: round.lambda.rows(),
                });
            }
            if round.lambda.rank() < big_n {
                return Err(Error::Singular);
            }
            if round.key.len() != big_n {
                return Err(Error::DimensionMismatch {
                    context: "round key length",
                    expected: big_n,
                    found: round.key.len(),
                });
            }
        }
        Ok(Self { b, m, rounds })
    }

    pub fn block_size(&self) -> usize {
        self.b * self.m
    }

    pub fn rounds(&self) -> &[Round] {
        &self.rounds
    }

    fn bricklayer(&self, sboxes: &[SBox], x: &BitVector) -> BitVector {
        let m = self.m;
        let mut out = BitVector::zeros(x.len());
        for (i, s) in sboxes.iter().enumerate() {
            let v = (0..m).fold(0u32, |acc, k| (acc << 1) | x.get(i * m + k) as u32);
            let y = s.apply(v);
            for k in 0..m {
                out.set(i * m + k, (y >> (m - 1 - k)) & 1 == 1);
            }
        }
        out
    }

    pub fn encrypt(&self, x: &BitVector) -> Result<BitVector> {
        if x.len() != self.block_size() {
            return Err(Error::DimensionMismatch {
                context: "plaintext length",
                expected: self.block_size(),
                found: x.len(),
            });
        }
        let mut state = x.clone();
        for round in &self.rounds {
            state = self.bricklayer(&round.sboxes, &state);
            state = round.lambda.left_mul(&state)?;
            state ^= &round.key;
        }
        Ok(state)
    }
}
