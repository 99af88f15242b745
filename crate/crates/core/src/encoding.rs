//! Bit-string genotypes and their decoding to real coefficients.
//!
//! A genotype is `n` groups of `l` bits. Bit 0 of each group is its most
//! significant bit. A group's integer code `c` maps linearly onto `[L, U]`
//! as `L + c (U - L) / (2^l - 1)`, optionally after Gray decoding.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::objectives::Objective;
use crate::rng::RngStream;

/// Largest supported bits-per-coefficient; codes are held in a `u64`.
pub const MAX_BITS_PER_COEFFICIENT: usize = 52;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Coding {
    #[default]
    Binary,
    Gray,
}

impl std::str::FromStr for Coding {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "binary" => Ok(Coding::Binary),
            "gray" => Ok(Coding::Gray),
            other => Err(Error::InvalidParam(format!("unknown coding `{other}`"))),
        }
    }
}

/// Reflected binary Gray code of `code`.
#[inline]
pub fn binary_to_gray(code: u64) -> u64 {
    code ^ (code >> 1)
}

/// Inverse of [`binary_to_gray`].
#[inline]
pub fn gray_to_binary(mut gray: u64) -> u64 {
    let mut shift = 1;
    while shift < 64 {
        gray ^= gray >> shift;
        shift <<= 1;
    }
    gray
}

/// Shape of a genotype: coefficient count, bits per coefficient, bounds and coding.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EncodingSpec {
    n: usize,
    l: usize,
    lower: f64,
    upper: f64,
    coding: Coding,
}

impl EncodingSpec {
    pub fn new(n: usize, l: usize, lower: f64, upper: f64, coding: Coding) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidEncoding(
                "coefficient count must be >= 1".into(),
            ));
        }
        if l == 0 || l > MAX_BITS_PER_COEFFICIENT {
            return Err(Error::InvalidEncoding(format!(
                "bits per coefficient must be in 1..={MAX_BITS_PER_COEFFICIENT}, got {l}"
            )));
        }
        if !(lower.is_finite() && upper.is_finite() && lower < upper) {
            return Err(Error::InvalidEncoding(format!(
                "bounds must satisfy lower < upper, got [{lower}, {upper}]"
            )));
        }
        Ok(Self {
            n,
            l,
            lower,
            upper,
            coding,
        })
    }

    /// The encoding an objective prescribes, with the given coding.
    pub fn for_objective<O: Objective + ?Sized>(objective: &O, coding: Coding) -> Result<Self> {
        let (lower, upper) = objective.bounds();
        Self::new(
            objective.arity(),
            objective.bits_per_coefficient(),
            lower,
            upper,
            coding,
        )
    }

    /// Same bounds and coding, different coefficient count.
    pub fn with_coefficients(&self, n: usize) -> Result<Self> {
        Self::new(n, self.l, self.lower, self.upper, self.coding)
    }

    pub fn with_coding(&self, coding: Coding) -> Self {
        Self { coding, ..*self }
    }

    pub fn coefficients(&self) -> usize {
        self.n
    }

    pub fn bits_per_coefficient(&self) -> usize {
        self.l
    }

    pub fn lower(&self) -> f64 {
        self.lower
    }

    pub fn upper(&self) -> f64 {
        self.upper
    }

    pub fn coding(&self) -> Coding {
        self.coding
    }

    /// `n * l`, which is also the size of the bit-flip neighborhood.
    pub fn total_bits(&self) -> usize {
        self.n * self.l
    }

    /// `2^l - 1`.
    pub fn max_code(&self) -> u64 {
        (1u64 << self.l) - 1
    }

    /// Linear map from an `l`-bit code onto `[lower, upper]`.
    ///
    /// Endpoints are exact; codes above `max_code` are clamped.
    pub fn decode_coefficient(&self, code: u64) -> f64 {
        let max = self.max_code();
        if code == 0 {
            self.lower
        } else if code >= max {
            self.upper
        } else {
            self.lower + code as f64 * (self.upper - self.lower) / max as f64
        }
    }

    /// Raw MSB-first integer value of group `group`, before any Gray decoding.
    pub fn raw_group(&self, bits: &BitVector, group: usize) -> u64 {
        let start = group * self.l;
        bits.0[start..start + self.l]
            .iter()
            .fold(0u64, |acc, &b| (acc << 1) | b as u64)
    }

    /// Integer code of group `group` after Gray decoding when applicable.
    pub fn group_code(&self, bits: &BitVector, group: usize) -> u64 {
        let raw = self.raw_group(bits, group);
        match self.coding {
            Coding::Binary => raw,
            Coding::Gray => gray_to_binary(raw),
        }
    }

    pub fn decode_group(&self, bits: &BitVector, group: usize) -> f64 {
        self.decode_coefficient(self.group_code(bits, group))
    }

    /// Decodes every coefficient of `bits`.
    pub fn decode_solution(&self, bits: &BitVector) -> Result<Vec<f64>> {
        self.check_len(bits)?;
        Ok((0..self.n).map(|g| self.decode_group(bits, g)).collect())
    }

    /// Writes `code` into group `group`, Gray-encoding it first when applicable.
    pub fn set_group_code(&self, bits: &mut BitVector, group: usize, code: u64) {
        let code = code & self.max_code();
        let raw = match self.coding {
            Coding::Binary => code,
            Coding::Gray => binary_to_gray(code),
        };
        let start = group * self.l;
        for k in 0..self.l {
            bits.0[start + k] = (raw >> (self.l - 1 - k)) & 1 == 1;
        }
    }

    /// Genotype whose groups carry the given codes.
    pub fn encode_codes(&self, codes: &[u64]) -> Result<BitVector> {
        if codes.len() != self.n {
            return Err(Error::ArityMismatch {
                expected: self.n,
                got: codes.len(),
            });
        }
        let mut bits = BitVector::zeros(self.total_bits());
        for (g, &c) in codes.iter().enumerate() {
            self.set_group_code(&mut bits, g, c);
        }
        Ok(bits)
    }

    /// Uniformly random genotype: each bit is a fair coin.
    pub fn random(&self, rng: &mut RngStream) -> BitVector {
        BitVector((0..self.total_bits()).map(|_| rng.uniform_bit()).collect())
    }

    pub fn check_len(&self, bits: &BitVector) -> Result<()> {
        if bits.len() != self.total_bits() {
            return Err(Error::LengthMismatch {
                expected: self.total_bits(),
                got: bits.len(),
            });
        }
        Ok(())
    }
}

/// An ordered bit string; bit `j` is `S(j)`.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct BitVector(Vec<bool>);

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        Self(vec![false; len])
    }

    pub fn ones(len: usize) -> Self {
        Self(vec![true; len])
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        Self(bits)
    }

    /// Parses a string of `0`/`1` characters; anything else is ignored.
    pub fn from_bit_str(s: &str) -> Self {
        Self(
            s.chars()
                .filter_map(|c| match c {
                    '0' => Some(false),
                    '1' => Some(true),
                    _ => None,
                })
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, j: usize) -> bool {
        self.0[j]
    }

    pub fn set(&mut self, j: usize, value: bool) {
        self.0[j] = value;
    }

    /// Flips bit `j` in place.
    pub fn flip(&mut self, j: usize) {
        self.0[j] = !self.0[j];
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.0
    }

    pub fn count_ones(&self) -> usize {
        self.0.iter().filter(|&&b| b).count()
    }

    pub fn hamming(&self, other: &BitVector) -> usize {
        self.0.iter().zip(&other.0).filter(|(a, b)| a != b).count()
            + self.len().abs_diff(other.len())
    }

    /// Hex rendering of the bit string read as a big-endian integer (bit 0
    /// is the most significant bit). Left-padded with zero bits to a
    /// whole number of nibbles.
    pub fn to_hex(&self) -> String {
        let pad = (4 - self.len() % 4) % 4;
        let padded: Vec<bool> = std::iter::repeat_n(false, pad)
            .chain(self.0.iter().copied())
            .collect();
        padded
            .chunks(4)
            .map(|nib| {
                let v = nib.iter().fold(0u32, |a, &b| (a << 1) | b as u32);
                char::from_digit(v, 16).unwrap()
            })
            .collect()
    }

    /// Inverse of [`BitVector::to_hex`] for a genotype of `len` bits.
    pub fn from_hex(hex: &str, len: usize) -> Result<Self> {
        let mut bits = Vec::with_capacity(hex.len() * 4);
        for c in hex.chars() {
            let v = c
                .to_digit(16)
                .ok_or_else(|| Error::InvalidHex(hex.to_string()))?;
            bits.extend((0..4).rev().map(|k| (v >> k) & 1 == 1));
        }
        if bits.len() < len {
            return Err(Error::InvalidHex(format!(
                "{hex}: too short for {len} bits"
            )));
        }
        let pad = bits.len() - len;
        if bits[..pad].iter().any(|&b| b) {
            return Err(Error::InvalidHex(format!("{hex}: more than {len} bits")));
        }
        Ok(Self(bits[pad..].to_vec()))
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector(")?;
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        write!(f, ")")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Step {
    Down,
    Up,
}

impl Step {
    pub fn delta(self) -> i64 {
        match self {
            Step::Down => -1,
            Step::Up => 1,
        }
    }
}

/// A single perturbation of a solution.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Move {
    /// Flip bit `j` of a bit-string genotype.
    BitFlip(usize),
    /// Move integer coefficient `coefficient` one unit in `step` direction.
    IntStep { coefficient: usize, step: Step },
}

impl Move {
    /// The lockable slot this move occupies: the bit for flips, the
    /// coefficient for integer steps.
    pub fn slot(&self) -> usize {
        match *self {
            Move::BitFlip(j) => j,
            Move::IntStep { coefficient, .. } => coefficient,
        }
    }
}

/// Returns a copy of `bits` with `mv` applied.
pub fn apply_move(bits: &BitVector, mv: Move) -> Result<BitVector> {
    match mv {
        Move::BitFlip(j) if j < bits.len() => {
            let mut out = bits.clone();
            out.flip(j);
            Ok(out)
        }
        Move::BitFlip(j) => Err(Error::MoveOutOfRange {
            index: j,
            size: bits.len(),
        }),
        Move::IntStep { .. } => Err(Error::UnsupportedMove(
            "integer steps apply to integer-vector states".into(),
        )),
    }
}

/// `f(decode(S)) - f(decode(S'))`: positive for downhill moves.
///
/// Each side is a separate objective evaluation, so stochastic objectives
/// draw fresh noise for both.
pub fn gain<O: Objective + ?Sized>(
    bits: &BitVector,
    mv: Move,
    objective: &O,
    spec: &EncodingSpec,
    rng: &mut RngStream,
) -> Result<f64> {
    spec.check_len(bits)?;
    let moved = apply_move(bits, mv)?;
    let before = objective.evaluate(&spec.decode_solution(bits)?, rng)?;
    let after = objective.evaluate(&spec.decode_solution(&moved)?, rng)?;
    Ok(before - after)
}
