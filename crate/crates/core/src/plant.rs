//! Simulated replicas and fault processes: a 16-bit full adder, stuck-at
//! output faults, and a bit-flipping channel carrying 8-bit sine samples.

use std::collections::BTreeMap;

use rand::seq::index;
use rand::Rng;

use crate::error::{Error, Result};
use crate::word::Word;

/// Adder output width: 16 sum bits plus the carry-out in bit 16.
pub const ADDER_WIDTH: u32 = 17;
/// Width of a quantized sine sample.
pub const SAMPLE_WIDTH: u32 = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AdderInput {
    pub a: u16,
    pub b: u16,
    pub carry_in: bool,
}

impl AdderInput {
    pub fn new(a: u16, b: u16, carry_in: bool) -> Self {
        Self { a, b, carry_in }
    }

    /// Uniform over all `2^33` operand combinations.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Self {
            a: rng.random(),
            b: rng.random(),
            carry_in: rng.random(),
        }
    }
}

pub fn full_adder_16(input: AdderInput) -> Word {
    let total = u64::from(input.a) + u64::from(input.b) + u64::from(input.carry_in);
    Word::new(total, ADDER_WIDTH).expect("17-bit sum fits its width")
}

/// Permanent stuck-at faults on output bits, at most one per position.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FaultSpec {
    stuck: BTreeMap<u32, bool>,
}

impl FaultSpec {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (u32, bool)>) -> Result<Self> {
        let mut spec = Self::new();
        for (position, value) in pairs {
            spec.stick(position, value)?;
        }
        Ok(spec)
    }

    /// Adds a stuck-at entry; a second entry for the same bit is an error.
    pub fn stick(&mut self, position: u32, value: bool) -> Result<()> {
        if self.stuck.insert(position, value).is_some() {
            return Err(Error::DuplicateBit(position));
        }
        Ok(())
    }

    pub fn is_empty(&self) -> bool {
        self.stuck.is_empty()
    }

    pub fn len(&self) -> usize {
        self.stuck.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, bool)> + '_ {
        self.stuck.iter().map(|(&p, &v)| (p, v))
    }
}

pub fn apply_stuck_faults(word: Word, spec: &FaultSpec) -> Result<Word> {
    spec.iter()
        .try_fold(word, |w, (position, value)| w.with_bit(position, value))
}

/// `n_stuck` distinct positions drawn uniformly from `0..width`, each stuck
/// at an independent fair-coin value.
pub fn make_faulty_module_spec<R: Rng + ?Sized>(
    rng: &mut R,
    width: u32,
    n_stuck: u32,
) -> Result<FaultSpec> {
    if n_stuck > width {
        return Err(Error::TooManyBits {
            requested: n_stuck,
            width,
        });
    }
    let positions = index::sample(rng, width as usize, n_stuck as usize);
    let mut spec = FaultSpec::new();
    for p in positions.iter() {
        spec.stick(p as u32, rng.random())?;
    }
    Ok(spec)
}

/// `round(127.5 * (1 + sin(2*pi*index/period)))` with halves rounded up.
pub fn sine_sample(index: u64, period: u64) -> Result<Word> {
    if period == 0 {
        return Err(Error::ParameterOutOfRange {
            name: "period",
            value: 0.0,
            range: "[1, inf)",
        });
    }
    let phase = (index % period) as f64 / period as f64;
    let level = 127.5 * (1.0 + (std::f64::consts::TAU * phase).sin());
    let quantized = (level + 0.5).floor().clamp(0.0, 255.0) as u64;
    Word::new(quantized, SAMPLE_WIDTH)
}

/// Number of distinct bits flipped per sample by a noisy channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChannelNoise {
    pub error_bits: u32,
}

/// Flips exactly `noise.error_bits` distinct, uniformly chosen bits.
pub fn inject_channel_errors<R: Rng + ?Sized>(
    word: Word,
    noise: ChannelNoise,
    rng: &mut R,
) -> Result<Word> {
    if noise.error_bits > word.width() {
        return Err(Error::TooManyBits {
            requested: noise.error_bits,
            width: word.width(),
        });
    }
    index::sample(rng, word.width() as usize, noise.error_bits as usize)
        .iter()
        .try_fold(word, |w, p| w.flip(p as u32))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::hamming_distance;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn w(bits: u64, width: u32) -> Word {
        Word::new(bits, width).unwrap()
    }

    #[test]
    fn adder_examples() {
        assert_eq!(full_adder_16(AdderInput::new(0, 0, false)).bits(), 0);
        let out = full_adder_16(AdderInput::new(0xffff, 0x0001, false));
        assert!(out.bit(16).unwrap());
        assert_eq!(out.bits() & 0xffff, 0);
        let out = full_adder_16(AdderInput::new(1, 2, true));
        assert_eq!(out.bits(), 4);
        assert_eq!(out.width(), ADDER_WIDTH);
    }

    #[test]
    fn adder_matches_wide_arithmetic_low_bytes() {
        // low 8 bits of each operand exhaustively, high bytes fixed patterns
        for hi in [0x0000u16, 0xff00, 0xa500] {
            for a in 0..256u16 {
                for b in 0..256u16 {
                    for c in [false, true] {
                        let (a, b) = (hi | a, hi.rotate_left(4) & 0xff00 | b);
                        let expect = a as u64 + b as u64 + c as u64;
                        assert_eq!(full_adder_16(AdderInput::new(a, b, c)).bits(), expect);
                    }
                }
            }
        }
    }

    #[test]
    fn stuck_fault_examples() {
        let spec = FaultSpec::new();
        assert_eq!(apply_stuck_faults(w(0b101, 3), &spec).unwrap(), w(0b101, 3));
        let one = FaultSpec::from_pairs([(0, true)]).unwrap();
        assert_eq!(apply_stuck_faults(w(0b000, 3), &one).unwrap(), w(0b001, 3));
        let zero = FaultSpec::from_pairs([(2, false)]).unwrap();
        assert_eq!(apply_stuck_faults(w(0b100, 3), &zero).unwrap(), w(0b000, 3));
        let out_of_range = FaultSpec::from_pairs([(3, true)]).unwrap();
        assert!(matches!(
            apply_stuck_faults(w(0, 3), &out_of_range),
            Err(Error::BitOutOfRange { .. })
        ));
        assert_eq!(
            FaultSpec::from_pairs([(1, true), (1, false)]),
            Err(Error::DuplicateBit(1))
        );
    }

    #[test]
    fn faulty_spec_sizes() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        assert!(make_faulty_module_spec(&mut rng, 17, 0).unwrap().is_empty());
        let all = make_faulty_module_spec(&mut rng, 17, 17).unwrap();
        assert_eq!(
            all.iter().map(|(p, _)| p).collect::<Vec<_>>(),
            (0..17).collect::<Vec<_>>()
        );
        assert_eq!(make_faulty_module_spec(&mut rng, 17, 3).unwrap().len(), 3);
        assert!(make_faulty_module_spec(&mut rng, 17, 18).is_err());
    }

    #[test]
    fn faulty_spec_is_seeded() {
        let a = make_faulty_module_spec(&mut ChaCha8Rng::seed_from_u64(11), 17, 3).unwrap();
        let b = make_faulty_module_spec(&mut ChaCha8Rng::seed_from_u64(11), 17, 3).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn sine_examples() {
        assert_eq!(sine_sample(0, 64).unwrap().bits(), 128);
        assert_eq!(sine_sample(16, 64).unwrap().bits(), 255);
        assert_eq!(sine_sample(48, 64).unwrap().bits(), 0);
        assert_eq!(sine_sample(64, 64).unwrap().bits(), 128);
        assert_eq!(sine_sample(25, 100).unwrap().bits(), 255);
        assert_eq!(sine_sample(75, 100).unwrap().bits(), 0);
        assert!(sine_sample(0, 0).is_err());
    }

    #[test]
    fn channel_error_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let x = w(0x5c, 8);
        let none = ChannelNoise { error_bits: 0 };
        assert_eq!(inject_channel_errors(x, none, &mut rng).unwrap(), x);
        let all = ChannelNoise { error_bits: 8 };
        assert_eq!(
            inject_channel_errors(x, all, &mut rng).unwrap(),
            x.complement()
        );
        for _ in 0..100 {
            let y = inject_channel_errors(x, ChannelNoise { error_bits: 2 }, &mut rng).unwrap();
            assert_eq!(hamming_distance(&x, &y).unwrap(), 2);
        }
        assert!(inject_channel_errors(x, ChannelNoise { error_bits: 9 }, &mut rng).is_err());
    }
}
