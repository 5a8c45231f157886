//! Bit strings and the unary/binary building blocks of the integer codes.
//!
//! Bits are stored most-significant-first: the leftmost character of the
//! textual form is bit 0.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{invalid, Error, Result};

/// A finite, immutable sequence of bits.
///
/// Equality is exact: two strings are equal iff they have the same length and
/// the same bits. The empty string is the null string of length 0.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitString {
    bits: Vec<bool>,
}

impl BitString {
    /// The null string.
    pub fn new() -> Self {
        Self { bits: Vec::new() }
    }

    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        Self {
            bits: bits.into_iter().collect(),
        }
    }

    /// The low `width` bits of `value`, most significant first.
    pub fn from_uint(value: u64, width: usize) -> Self {
        debug_assert!(width <= 64);
        Self::from_bits((0..width).rev().map(|i| (value >> i) & 1 == 1))
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn get(&self, index: usize) -> Option<bool> {
        self.bits.get(index).copied()
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.bits
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        self.bits.iter().copied()
    }

    /// `self ∥ other`.
    pub fn concat(&self, other: &BitString) -> BitString {
        let mut bits = Vec::with_capacity(self.len() + other.len());
        bits.extend_from_slice(&self.bits);
        bits.extend_from_slice(&other.bits);
        Self { bits }
    }

    /// `self ∥ bit`.
    pub fn with_bit(&self, bit: bool) -> BitString {
        let mut bits = Vec::with_capacity(self.len() + 1);
        bits.extend_from_slice(&self.bits);
        bits.push(bit);
        Self { bits }
    }

    /// `bit ∥ self`.
    pub fn prepend(&self, bit: bool) -> BitString {
        let mut bits = Vec::with_capacity(self.len() + 1);
        bits.push(bit);
        bits.extend_from_slice(&self.bits);
        Self { bits }
    }

    /// The first `len` bits. Panics if `len` exceeds the string length.
    pub fn prefix(&self, len: usize) -> BitString {
        Self {
            bits: self.bits[..len].to_vec(),
        }
    }

    pub(crate) fn push(&mut self, bit: bool) {
        self.bits.push(bit);
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString(\"{self}\")")
    }
}

impl FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::Parse(alloc::format!(
                    "bit strings contain only '0' and '1', found {other:?}"
                ))),
            })
            .collect::<Result<Vec<_>>>()
            .map(|bits| Self { bits })
    }
}

impl From<BitString> for String {
    fn from(b: BitString) -> String {
        alloc::format!("{b}")
    }
}

/// Unary code `α(m)`: `m` zeros followed by a single one.
pub fn unary_alpha(m: usize) -> BitString {
    let mut bits = alloc::vec![false; m + 1];
    bits[m] = true;
    BitString { bits }
}

/// Standard binary representation `β(m)`; `β(0)` is the null string.
pub fn binary_beta(m: u64) -> BitString {
    BitString::from_uint(m, bit_length(m))
}

/// `[b]`: `b` with its leading one removed.
pub fn strip_msb(b: &BitString) -> Result<BitString> {
    match b.get(0) {
        Some(true) => Ok(BitString {
            bits: b.bits[1..].to_vec(),
        }),
        Some(false) => Err(invalid("strip_msb needs a leading 1 bit")),
        None => Err(invalid("strip_msb of the null string")),
    }
}

/// Bitwise exclusive-or of two equal-length strings.
pub fn xor(a: &BitString, b: &BitString) -> Result<BitString> {
    if a.len() != b.len() {
        return Err(invalid(alloc::format!(
            "xor of strings with lengths {} and {}",
            a.len(),
            b.len()
        )));
    }
    Ok(BitString::from_bits(
        a.iter().zip(b.iter()).map(|(x, y)| x ^ y),
    ))
}

/// True iff `a` is a prefix of `b`. The null string is a prefix of everything.
pub fn is_prefix(a: &BitString, b: &BitString) -> bool {
    b.bits.starts_with(&a.bits)
}

/// Number of bits in `β(m)`: `⌊log₂ m⌋ + 1`, or 0 for `m = 0`.
pub(crate) fn bit_length(m: u64) -> usize {
    (u64::BITS - m.leading_zeros()) as usize
}
