//! Fixed-width bit words and dense truth tables.
//!
//! Bits are addressed by *line*: line 0 is the most significant bit of a
//! word, so the string `10` has line 0 set and line 1 clear. Every module
//! and file format in the crate uses this order.
//!
//! A [`TruthTable`] is reversible when it is a bijection (same input and
//! output width, no output repeated) and conservative when it is reversible
//! and every row preserves Hamming weight.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};

/// Largest supported word width; tables are stored densely.
pub const MAX_WIDTH: usize = 16;

/// An unsigned word of `width` bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct BitWord {
    width: u8,
    value: u32,
}

impl BitWord {
    pub fn new(width: usize, value: u32) -> Result<Self> {
        if width > MAX_WIDTH {
            return Err(Error::TooWide {
                width,
                max: MAX_WIDTH,
            });
        }
        if value >= 1u32 << width {
            return Err(Error::ValueOutOfRange { value, width });
        }
        Ok(BitWord {
            width: width as u8,
            value,
        })
    }

    pub fn zero(width: usize) -> Result<Self> {
        Self::new(width, 0)
    }

    pub fn width(&self) -> usize {
        self.width as usize
    }

    pub fn value(&self) -> u32 {
        self.value
    }

    /// Number of set bits.
    pub fn weight(&self) -> u32 {
        self.value.count_ones()
    }

    /// Value of `line` (line 0 is the most significant bit).
    pub fn bit(&self, line: usize) -> Result<bool> {
        let mask = line_mask(self.width(), line)?;
        Ok(self.value & mask != 0)
    }

    pub fn with_bit(self, line: usize, set: bool) -> Result<Self> {
        let mask = line_mask(self.width(), line)?;
        let value = if set {
            self.value | mask
        } else {
            self.value & !mask
        };
        Ok(BitWord { value, ..self })
    }

    /// Bitwise complement within the word width.
    pub fn complement(&self) -> Self {
        BitWord {
            width: self.width,
            value: !self.value & width_mask(self.width()),
        }
    }

    /// `self` on the high lines followed by `low`.
    pub fn concat(&self, low: BitWord) -> Result<Self> {
        let width = self.width() + low.width();
        Self::new(width, (self.value << low.width) | low.value)
    }

    /// Splits into the first `high_width` lines and the rest.
    pub fn split(&self, high_width: usize) -> Result<(BitWord, BitWord)> {
        if high_width > self.width() {
            return Err(Error::WidthMismatch {
                expected: self.width(),
                actual: high_width,
            });
        }
        let low_width = self.width() - high_width;
        let high = BitWord::new(high_width, self.value >> low_width)?;
        let low = BitWord::new(low_width, self.value & width_mask(low_width))?;
        Ok((high, low))
    }
}

impl fmt::Display for BitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for line in 0..self.width() {
            let bit = (self.value >> (self.width() - 1 - line)) & 1;
            f.write_str(if bit == 1 { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for BitWord {
    type Err = Error;

    /// Parses a binary string, most significant line first. The empty
    /// string is the zero-width word.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.len() > MAX_WIDTH {
            return Err(Error::TooWide {
                width: s.len(),
                max: MAX_WIDTH,
            });
        }
        let mut value = 0u32;
        for c in s.chars() {
            value <<= 1;
            match c {
                '0' => {}
                '1' => value |= 1,
                other => {
                    return Err(Error::parse(0, format!("invalid bit '{other}' in \"{s}\"")));
                }
            }
        }
        BitWord::new(s.len(), value)
    }
}

pub(crate) fn width_mask(width: usize) -> u32 {
    if width >= 32 {
        u32::MAX
    } else {
        (1u32 << width) - 1
    }
}

fn line_mask(width: usize, line: usize) -> Result<u32> {
    if line >= width {
        return Err(Error::LineOutOfRange { line, width });
    }
    Ok(1u32 << (width - 1 - line))
}

/// Total mapping from every `in_width`-bit word to an `out_width`-bit word.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TruthTable {
    in_width: usize,
    out_width: usize,
    outputs: Vec<u32>,
}

/// Result of dropping output lines from a table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Projection {
    pub table: TruthTable,
    /// Set when two inputs that were distinguishable before the projection
    /// collide after it.
    pub information_lost: bool,
}

impl TruthTable {
    /// Builds a table from the output column, indexed by input word.
    pub fn new(in_width: usize, out_width: usize, outputs: Vec<u32>) -> Result<Self> {
        check_width(in_width)?;
        check_width(out_width)?;
        if outputs.len() != 1usize << in_width {
            return Err(Error::WidthMismatch {
                expected: 1usize << in_width,
                actual: outputs.len(),
            });
        }
        if let Some(&value) = outputs.iter().find(|&&v| v >= 1u32 << out_width) {
            return Err(Error::ValueOutOfRange {
                value,
                width: out_width,
            });
        }
        Ok(TruthTable {
            in_width,
            out_width,
            outputs,
        })
    }

    /// Builds a table from explicit `(input, output)` rows. Every input word
    /// must appear exactly once.
    pub fn from_rows<I>(in_width: usize, out_width: usize, rows: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u32, u32)>,
    {
        check_width(in_width)?;
        let mut outputs: Vec<Option<u32>> = vec![None; 1usize << in_width];
        for (input, output) in rows {
            let slot = outputs
                .get_mut(input as usize)
                .ok_or(Error::ValueOutOfRange {
                    value: input,
                    width: in_width,
                })?;
            if slot.replace(output).is_some() {
                return Err(Error::DuplicateRow(input));
            }
        }
        let outputs = outputs
            .into_iter()
            .enumerate()
            .map(|(x, out)| out.ok_or(Error::MissingRow(x as u32)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(in_width, out_width, outputs)
    }

    pub fn from_fn(in_width: usize, out_width: usize, f: impl Fn(u32) -> u32) -> Result<Self> {
        check_width(in_width)?;
        let outputs = (0..1u32 << in_width).map(f).collect();
        Self::new(in_width, out_width, outputs)
    }

    pub fn identity(width: usize) -> Result<Self> {
        Self::from_fn(width, width, |x| x)
    }

    pub fn in_width(&self) -> usize {
        self.in_width
    }

    pub fn out_width(&self) -> usize {
        self.out_width
    }

    /// Output for the input word with value `input`.
    ///
    /// # Panics
    ///
    /// Panics if `input` does not fit in `in_width` bits.
    pub fn get(&self, input: u32) -> u32 {
        self.outputs[input as usize]
    }

    pub fn eval(&self, input: BitWord) -> Result<BitWord> {
        if input.width() != self.in_width {
            return Err(Error::WidthMismatch {
                expected: self.in_width,
                actual: input.width(),
            });
        }
        BitWord::new(self.out_width, self.get(input.value()))
    }

    pub fn outputs(&self) -> &[u32] {
        &self.outputs
    }

    /// Iterates `(input, output)` pairs in input order.
    pub fn rows(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.outputs.iter().enumerate().map(|(x, &y)| (x as u32, y))
    }

    /// True iff the table is a bijection on `in_width`-bit words.
    pub fn is_reversible(&self) -> bool {
        if self.in_width != self.out_width {
            return false;
        }
        let mut seen = vec![false; self.outputs.len()];
        for &y in &self.outputs {
            if std::mem::replace(&mut seen[y as usize], true) {
                return false;
            }
        }
        true
    }

    /// True iff the table is reversible and every row preserves weight.
    pub fn is_conservative(&self) -> bool {
        self.is_reversible() && self.rows().all(|(x, y)| x.count_ones() == y.count_ones())
    }

    pub fn invert(&self) -> Result<TruthTable> {
        if !self.is_reversible() {
            return Err(Error::NotReversible);
        }
        let mut outputs = vec![0u32; self.outputs.len()];
        for (x, y) in self.rows() {
            outputs[y as usize] = x;
        }
        Ok(TruthTable {
            in_width: self.out_width,
            out_width: self.in_width,
            outputs,
        })
    }

    /// Returns `g ∘ f`: each input `x` maps to `g(f(x))`.
    pub fn compose(f: &TruthTable, g: &TruthTable) -> Result<TruthTable> {
        if f.out_width != g.in_width {
            return Err(Error::WidthMismatch {
                expected: g.in_width,
                actual: f.out_width,
            });
        }
        Ok(TruthTable {
            in_width: f.in_width,
            out_width: g.out_width,
            outputs: f.outputs.iter().map(|&y| g.get(y)).collect(),
        })
    }

    /// Keeps only the listed output lines, in the given order.
    pub fn project_outputs(&self, keep: &[usize]) -> Result<Projection> {
        for &line in keep {
            line_mask(self.out_width, line)?;
        }
        let project = |y: u32| {
            keep.iter().fold(0u32, |acc, &line| {
                (acc << 1) | ((y >> (self.out_width - 1 - line)) & 1)
            })
        };
        let outputs: Vec<u32> = self.outputs.iter().map(|&y| project(y)).collect();

        let distinct_before = count_distinct(&self.outputs, self.out_width);
        let distinct_after = count_distinct(&outputs, keep.len());
        Ok(Projection {
            table: TruthTable::new(self.in_width, keep.len(), outputs)?,
            information_lost: distinct_after < distinct_before,
        })
    }
}

fn count_distinct(values: &[u32], width: usize) -> usize {
    let mut seen = vec![false; 1usize << width];
    values
        .iter()
        .filter(|&&v| !std::mem::replace(&mut seen[v as usize], true))
        .count()
}

fn check_width(width: usize) -> Result<()> {
    if width > MAX_WIDTH {
        Err(Error::TooWide {
            width,
            max: MAX_WIDTH,
        })
    } else {
        Ok(())
    }
}

/// Writes the table in the text format accepted by [`FromStr`].
impl fmt::Display for TruthTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "table {} {}", self.in_width, self.out_width)?;
        for (x, y) in self.rows() {
            let x = BitWord {
                width: self.in_width as u8,
                value: x,
            };
            let y = BitWord {
                width: self.out_width as u8,
                value: y,
            };
            writeln!(f, "{x} -> {y}")?;
        }
        Ok(())
    }
}

impl FromStr for TruthTable {
    type Err = Error;

    /// Parses
    ///
    /// ```text
    /// table 2 2
    /// 00 -> 00
    /// 01 -> 01
    /// ...
    /// ```
    ///
    /// `#` starts a comment. Every input word must be listed.
    fn from_str(text: &str) -> Result<Self> {
        let mut header: Option<(usize, usize)> = None;
        let mut rows = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let lineno = idx + 1;
            let line = strip_comment(raw);
            if line.is_empty() {
                continue;
            }
            let Some((in_width, out_width)) = header else {
                let mut parts = line.split_whitespace();
                if parts.next() != Some("table") {
                    return Err(Error::parse(
                        lineno,
                        "expected `table <in_width> <out_width>`",
                    ));
                }
                let mut width = || -> Result<usize> {
                    parts
                        .next()
                        .and_then(|w| w.parse().ok())
                        .ok_or_else(|| Error::parse(lineno, "invalid table width"))
                };
                let (i, o) = (width()?, width()?);
                if parts.next().is_some() {
                    return Err(Error::parse(lineno, "trailing tokens after table header"));
                }
                check_width(i)
                    .and(check_width(o))
                    .map_err(|e| Error::parse(lineno, e.to_string()))?;
                header = Some((i, o));
                continue;
            };
            let (lhs, rhs) = line
                .split_once("->")
                .ok_or_else(|| Error::parse(lineno, "expected `bits -> bits`"))?;
            let word = |s: &str, width: usize| -> Result<u32> {
                let w: BitWord = s
                    .trim()
                    .parse()
                    .map_err(|e: Error| Error::parse(lineno, e.to_string()))?;
                if w.width() != width {
                    return Err(Error::parse(
                        lineno,
                        format!("expected {width} bits, got \"{}\"", s.trim()),
                    ));
                }
                Ok(w.value())
            };
            rows.push((lineno, word(lhs, in_width)?, word(rhs, out_width)?));
        }
        let (in_width, out_width) =
            header.ok_or_else(|| Error::parse(1, "missing table header"))?;
        let mut seen = vec![false; 1usize << in_width];
        for &(lineno, x, _) in &rows {
            if std::mem::replace(&mut seen[x as usize], true) {
                return Err(Error::parse(
                    lineno,
                    format!("duplicate row for input {x:0in_width$b}"),
                ));
            }
        }
        TruthTable::from_rows(
            in_width,
            out_width,
            rows.into_iter().map(|(_, x, y)| (x, y)),
        )
    }
}

pub(crate) fn strip_comment(line: &str) -> &str {
    line.split('#').next().unwrap_or("").trim()
}
