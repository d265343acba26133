//! The `.hsum` text format and the compact integer display.

use std::fmt;
use std::str::FromStr;

use super::HiddenSum;
use crate::error::{Error, Result};
use crate::gf2::{parse_bit_row, BitMatrix};

impl HiddenSum {
    /// Parses `hiddensum <n> <d>` followed by `n` blocks of `n` rows of `d`
    /// bits, blocks separated by blank lines.
    pub fn parse_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        let (_, header) = lines.next().ok_or_else(|| Error::parse(1, "missing header"))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 3 || fields[0] != "hiddensum" {
            return Err(Error::parse(1, "expected `hiddensum <n> <d>`"));
        }
        let n: usize = fields[1].parse().map_err(|_| Error::parse(1, "bad n"))?;
        let d: usize = fields[2].parse().map_err(|_| Error::parse(1, "bad d"))?;
        if n < 2 || d == 0 || d > super::MAX_D {
            return Err(Error::parse(1, format!("unsupported sizes n={n}, d={d}")));
        }

        let mut groups: Vec<Vec<(usize, &str)>> = vec![Vec::new()];
        for (idx, line) in lines {
            if line.trim().is_empty() {
                if !groups.last().unwrap().is_empty() {
                    groups.push(Vec::new());
                }
            } else {
                groups.last_mut().unwrap().push((idx + 1, line));
            }
        }
        if groups.last().is_some_and(|g| g.is_empty()) {
            groups.pop();
        }
        if groups.len() != n {
            return Err(Error::parse(
                text.lines().count(),
                format!("expected {n} blocks, found {}", groups.len()),
            ));
        }
        let mut blocks = Vec::with_capacity(n);
        for group in groups {
            if group.len() != n {
                return Err(Error::parse(
                    group[0].0,
                    format!("block starting here has {} rows, expected {n}", group.len()),
                ));
            }
            let mut b = BitMatrix::zeros(n, d);
            for (r, &(line_no, line)) in group.iter().enumerate() {
                parse_bit_row(line, d, line_no, |c| b.set(r, c, true))?;
            }
            blocks.push(b);
        }
        Self::new(n, d, blocks)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("hiddensum {} {}\n", self.n, self.d);
        for (i, b) in self.blocks.iter().enumerate() {
            if i > 0 {
                s.push('\n');
            }
            for r in 0..self.n {
                s.push_str(&b.row(r).to_bit_string());
                s.push('\n');
            }
        }
        s
    }

    /// Each block on one line, its rows written as integers in `[0, 2^d − 1]`.
    pub fn compact(&self) -> String {
        let g = self.bfrak();
        (0..self.n)
            .map(|i| {
                let row: Vec<String> = (0..self.n).map(|j| g.get(i, j).to_string()).collect();
                format!("B_e{}: {}", i + 1, row.join(" "))
            })
            .collect::<Vec<_>>()
            .join("\n")
    }
}

impl FromStr for HiddenSum {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse_text(s)
    }
}

impl fmt::Display for HiddenSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}
