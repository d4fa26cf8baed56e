//! Fixed-width bit words and the normalized Hamming incoherence measure.

use std::fmt;

use crate::error::{Error, Result};

/// Widest word supported.
pub const MAX_WIDTH: u32 = 64;

/// An `m`-bit word. Bit 0 is the least significant bit.
///
/// The width travels with the value, so comparing words of different
/// widths is caught at every operation boundary instead of silently
/// zero-extending.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Word {
    bits: u64,
    width: u32,
}

impl Word {
    pub fn new(bits: u64, width: u32) -> Result<Self> {
        if width == 0 || width > MAX_WIDTH {
            return Err(Error::InvalidWidth {
                width,
                max: MAX_WIDTH,
            });
        }
        if bits & !mask(width) != 0 {
            return Err(Error::ValueTooWide { value: bits, width });
        }
        Ok(Self { bits, width })
    }

    /// Builds a word by keeping only the low `width` bits of `bits`.
    pub fn truncating(bits: u64, width: u32) -> Result<Self> {
        Self::new(bits & mask(width.clamp(1, MAX_WIDTH)), width)
    }

    pub fn zero(width: u32) -> Result<Self> {
        Self::new(0, width)
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn bit(&self, position: u32) -> Result<bool> {
        self.check_position(position)?;
        Ok(self.bits >> position & 1 == 1)
    }

    pub fn with_bit(self, position: u32, value: bool) -> Result<Self> {
        self.check_position(position)?;
        let bits = if value {
            self.bits | 1 << position
        } else {
            self.bits & !(1 << position)
        };
        Ok(Self { bits, ..self })
    }

    pub fn flip(self, position: u32) -> Result<Self> {
        self.check_position(position)?;
        Ok(Self {
            bits: self.bits ^ 1 << position,
            ..self
        })
    }

    /// Bitwise complement within the word's width.
    pub fn complement(self) -> Self {
        Self {
            bits: !self.bits & mask(self.width),
            ..self
        }
    }

    pub fn ensure_same_width(&self, other: &Word) -> Result<()> {
        if self.width == other.width {
            Ok(())
        } else {
            Err(Error::WidthMismatch {
                left: self.width,
                right: other.width,
            })
        }
    }

    fn check_position(&self, position: u32) -> Result<()> {
        if position < self.width {
            Ok(())
        } else {
            Err(Error::BitOutOfRange {
                position,
                width: self.width,
            })
        }
    }
}

/// Lowercase hex, most significant digit first, padded to the width.
impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = self.width.div_ceil(4) as usize;
        write!(f, "{:0digits$x}", self.bits)
    }
}

pub(crate) fn mask(width: u32) -> u64 {
    if width >= 64 {
        u64::MAX
    } else {
        (1u64 << width) - 1
    }
}

/// Normalized Hamming distance between two words, always in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default)]
pub struct Incoherence(f64);

impl Incoherence {
    pub fn value(self) -> f64 {
        self.0
    }
}

impl From<Incoherence> for f64 {
    fn from(inc: Incoherence) -> f64 {
        inc.0
    }
}

/// Number of bit positions where `a` and `b` differ.
pub fn hamming_distance(a: &Word, b: &Word) -> Result<u32> {
    a.ensure_same_width(b)?;
    Ok((a.bits ^ b.bits).count_ones())
}

/// Hamming distance divided by the word width.
pub fn incoherence(a: &Word, b: &Word) -> Result<Incoherence> {
    let distance = hamming_distance(a, b)?;
    Ok(Incoherence(f64::from(distance) / f64::from(a.width)))
}

/// Checks that `words` is non-empty and uniform in width, returning the width.
pub(crate) fn common_width(words: &[Word]) -> Result<u32> {
    let first = words.first().ok_or(Error::TooFewModules(0))?;
    for w in &words[1..] {
        first.ensure_same_width(w)?;
    }
    Ok(first.width)
}
