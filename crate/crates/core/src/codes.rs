//! Prefix codes of the positive integers.
//!
//! The base codes are `ι` and `η` (both built from a unary length header and
//! a binary body) and the balanced finite codes. Two transforms derive new
//! codes: panning (`σ+`, which frees up a length-2 codeword for index 2) and
//! splitting (`σ[a]`, which replaces a codeword `a` by `a0`, `a1`). The `λ`
//! code is `η+` split at its 5th, 8th, 9th and 14th..17th codewords.

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::bits::{binary_beta, bit_length, strip_msb, unary_alpha, BitString};
use crate::error::{invalid, DecodeFailure, Error, Result};

/// Original `η+` indices split to form `λ`.
pub const LAMBDA_SPLITS: [u64; 7] = [5, 8, 9, 14, 15, 16, 17];

/// The first 24 codewords of `λ`.
const LAMBDA_HEAD: [&str; 24] = [
    "1",
    "01",
    "0010",
    "00110",
    "001110",
    "001111",
    "0001000",
    "0001001",
    "00010100",
    "00010101",
    "00010110",
    "00010111",
    "00011000",
    "00011001",
    "00011010",
    "00011011",
    "000111000",
    "000111001",
    "000111010",
    "000111011",
    "000111100",
    "000111101",
    "000111110",
    "000111111",
];

/// Identifiers of the named infinite codes.
pub const KNOWN_IDS: [&str; 5] = ["iota", "eta", "iota+", "eta+", "lambda"];

/// Strictly increasing list of codeword indices to split.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SplitSpec {
    indices: Vec<u64>,
}

impl SplitSpec {
    pub fn new(indices: Vec<u64>) -> Result<Self> {
        if indices.first() == Some(&0) {
            return Err(invalid("split indices start at 1"));
        }
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(invalid(
                "split indices must be distinct and strictly increasing",
            ));
        }
        Ok(Self { indices })
    }

    pub fn indices(&self) -> &[u64] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Kind {
    Iota,
    Eta,
    Lambda,
    Balanced(u64),
    Pan(Box<IntegerCode>),
    Split(Box<IntegerCode>, SplitSpec),
}

/// A prefix code mapping indices `t ≥ 1` to codewords.
///
/// Values are immutable; `encode`, `length` and decoding are pure.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntegerCode {
    kind: Kind,
}

impl IntegerCode {
    pub fn iota() -> Self {
        Self { kind: Kind::Iota }
    }

    pub fn eta() -> Self {
        Self { kind: Kind::Eta }
    }

    pub fn iota_plus() -> Self {
        pan(&Self::iota())
    }

    pub fn eta_plus() -> Self {
        pan(&Self::eta())
    }

    /// `λ` with its direct encoder.
    pub fn lambda() -> Self {
        Self { kind: Kind::Lambda }
    }

    /// The balanced complete code for `n ≥ 2` parties: `2^m − l` words of
    /// length `m` followed by `2l` words of length `m+1`, canonical order.
    pub fn balanced(n: u64) -> Result<Self> {
        if n < 2 {
            return Err(invalid("balanced codes need at least 2 codewords"));
        }
        Ok(Self {
            kind: Kind::Balanced(n),
        })
    }

    /// The named infinite codes: `ι`, `η`, `ι+`, `η+`, `λ`.
    pub fn registry() -> Vec<IntegerCode> {
        KNOWN_IDS.iter().map(|id| id.parse().unwrap()).collect()
    }

    /// Textual identifier, e.g. `eta+` or `split(eta+,5,8)`.
    pub fn id(&self) -> String {
        alloc::format!("{self}")
    }

    /// Number of codewords, or `None` for an infinite code.
    pub fn capacity(&self) -> Option<u64> {
        match &self.kind {
            Kind::Iota | Kind::Eta | Kind::Lambda => None,
            Kind::Balanced(n) => Some(*n),
            Kind::Pan(base) => base.capacity().map(|c| c + 1),
            Kind::Split(base, spec) => base.capacity().map(|c| c + spec.len() as u64),
        }
    }

    fn check_index(&self, t: u64) -> Result<()> {
        if t == 0 {
            return Err(invalid("codeword indices start at 1"));
        }
        match self.capacity() {
            Some(capacity) if t > capacity => Err(Error::IndexOutOfRange { index: t, capacity }),
            _ => Ok(()),
        }
    }

    pub fn encode(&self, t: u64) -> Result<BitString> {
        self.check_index(t)?;
        Ok(self.encode_unchecked(t))
    }

    fn encode_unchecked(&self, t: u64) -> BitString {
        match &self.kind {
            Kind::Iota => iota_word(t),
            Kind::Eta => eta_word(t),
            Kind::Lambda => lambda_word(t),
            Kind::Balanced(n) => {
                let (value, width) = balanced_word(*n, t);
                BitString::from_uint(value, width)
            }
            Kind::Pan(base) => match t {
                1 => BitString::from_bits([true]),
                _ => base.encode_unchecked(t - 1).prepend(false),
            },
            Kind::Split(base, spec) => {
                let (original, suffix) = split_to_base(spec.indices(), t);
                let word = base.encode_unchecked(original);
                match suffix {
                    Some(bit) => word.with_bit(bit),
                    None => word,
                }
            }
        }
    }

    /// `L(t) = |encode(t)|`, evaluated without materializing the codeword.
    pub fn length(&self, t: u64) -> Result<usize> {
        self.check_index(t)?;
        Ok(self.length_unchecked(t))
    }

    fn length_unchecked(&self, t: u64) -> usize {
        match &self.kind {
            Kind::Iota => iota_length(t),
            Kind::Eta => eta_length(t),
            Kind::Lambda => match t {
                1..=24 => LAMBDA_HEAD[t as usize - 1].len(),
                _ => 1 + eta_length(t - 8),
            },
            Kind::Balanced(n) => balanced_word(*n, t).1,
            Kind::Pan(base) => match t {
                1 => 1,
                _ => 1 + base.length_unchecked(t - 1),
            },
            Kind::Split(base, spec) => {
                let (original, suffix) = split_to_base(spec.indices(), t);
                base.length_unchecked(original) + usize::from(suffix.is_some())
            }
        }
    }

    /// Decodes one codeword starting at `pos`, returning the index and the
    /// number of bits consumed.
    pub fn decode_at(
        &self,
        bits: &[bool],
        pos: usize,
    ) -> core::result::Result<(u64, usize), DecodeFailure> {
        let mut reader = Reader { bits, pos };
        let index = self.decode_from(&mut reader)?;
        Ok((index, reader.pos - pos))
    }

    fn decode_from(&self, r: &mut Reader<'_>) -> core::result::Result<u64, DecodeFailure> {
        match &self.kind {
            Kind::Iota => decode_iota(r),
            Kind::Eta => decode_eta(r),
            Kind::Lambda => {
                let index = decode_pan(r, decode_eta)?;
                decode_split_suffix(r, &LAMBDA_SPLITS, index)
            }
            Kind::Balanced(n) => decode_balanced(r, *n),
            Kind::Pan(base) => decode_pan(r, |r| base.decode_from(r)),
            Kind::Split(base, spec) => {
                let index = base.decode_from(r)?;
                decode_split_suffix(r, spec.indices(), index)
            }
        }
    }
}

impl fmt::Display for IntegerCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            Kind::Iota => f.write_str("iota"),
            Kind::Eta => f.write_str("eta"),
            Kind::Lambda => f.write_str("lambda"),
            Kind::Balanced(n) => write!(f, "balanced({n})"),
            Kind::Pan(base) => write!(f, "{base}+"),
            Kind::Split(base, spec) => {
                write!(f, "split({base}")?;
                for i in spec.indices() {
                    write!(f, ",{i}")?;
                }
                f.write_str(")")
            }
        }
    }
}

impl FromStr for IntegerCode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let core = s.trim_end_matches('+');
        let pans = s.len() - core.len();
        let mut code = match core {
            "iota" => Self::iota(),
            "eta" => Self::eta(),
            "lambda" => Self::lambda(),
            _ => parse_call(core)?,
        };
        for _ in 0..pans {
            code = pan(&code);
        }
        Ok(code)
    }
}

fn unknown_code(s: &str) -> Error {
    Error::Parse(alloc::format!(
        "unknown code id {s:?}; known ids: {}, balanced(<n>), split(<code>,<i1,i2,...>), <code>+",
        KNOWN_IDS.join(", ")
    ))
}

fn parse_call(s: &str) -> Result<IntegerCode> {
    let (name, rest) = s.split_once('(').ok_or_else(|| unknown_code(s))?;
    let body = rest.strip_suffix(')').ok_or_else(|| unknown_code(s))?;
    let parse_index = |p: &str| {
        p.trim()
            .parse::<u64>()
            .map_err(|_| Error::Parse(alloc::format!("bad integer {p:?} in {s:?}")))
    };
    match name {
        "balanced" => IntegerCode::balanced(parse_index(body)?),
        "split" => {
            let parts = split_top_level(body);
            let (base, indices) = parts.split_first().ok_or_else(|| unknown_code(s))?;
            let base: IntegerCode = base.parse()?;
            let indices = indices
                .iter()
                .map(|p| parse_index(p))
                .collect::<Result<Vec<_>>>()?;
            split(&base, &SplitSpec::new(indices)?)
        }
        _ => Err(unknown_code(s)),
    }
}

fn split_top_level(s: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0usize;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth = depth.saturating_sub(1),
            ',' if depth == 0 => {
                parts.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(&s[start..]);
    parts
}

/// The panned code `σ+`: `1 ↦ "1"`, `m ↦ "0" ∥ σ(m−1)`.
pub fn pan(base: &IntegerCode) -> IntegerCode {
    IntegerCode {
        kind: Kind::Pan(Box::new(base.clone())),
    }
}

/// `σ[a₁, …, a_k]`: each listed codeword `a` is replaced in place by `a0`, `a1`.
pub fn split(base: &IntegerCode, spec: &SplitSpec) -> Result<IntegerCode> {
    if spec.is_empty() {
        return Ok(base.clone());
    }
    if let (Some(capacity), Some(&last)) = (base.capacity(), spec.indices().last()) {
        if last > capacity {
            return Err(Error::IndexOutOfRange {
                index: last,
                capacity,
            });
        }
    }
    Ok(IntegerCode {
        kind: Kind::Split(Box::new(base.clone()), spec.clone()),
    })
}

/// Maps an index of the split code to the base index it derives from, plus
/// the appended bit when that base codeword was split.
fn split_to_base(splits: &[u64], t: u64) -> (u64, Option<bool>) {
    // The i-th split (0-based) contributes its extra slot at index s + i + 1,
    // which is strictly increasing in i.
    let (mut lo, mut hi) = (0, splits.len());
    while lo < hi {
        let mid = (lo + hi) / 2;
        if splits[mid] + (mid as u64) < t {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    let original = t - lo as u64;
    match splits.binary_search(&original) {
        Ok(i) => (original, Some(t == original + i as u64 + 1)),
        Err(_) => (original, None),
    }
}

fn iota_word(m: u64) -> BitString {
    if m == 1 {
        return BitString::from_bits([true]);
    }
    let beta = binary_beta(m);
    let k = beta.len();
    if k.is_multiple_of(2) {
        unary_alpha(k / 2)
            .with_bit(false)
            .concat(&strip_msb(&beta).expect("β(m) has a leading 1"))
    } else {
        unary_alpha((k - 1) / 2).concat(&beta)
    }
}

fn eta_word(m: u64) -> BitString {
    let beta = binary_beta(m - 1);
    let k = beta.len();
    if k.is_multiple_of(2) {
        unary_alpha(k / 2).concat(&beta)
    } else {
        unary_alpha(k.div_ceil(2))
            .with_bit(false)
            .concat(&strip_msb(&beta).expect("β(m-1) has a leading 1"))
    }
}

fn lambda_word(m: u64) -> BitString {
    match m {
        1..=24 => LAMBDA_HEAD[m as usize - 1].parse().unwrap(),
        _ => eta_word(m - 8).prepend(false),
    }
}

fn iota_length(m: u64) -> usize {
    if m == 1 {
        return 1;
    }
    let k = bit_length(m);
    1 + k / 2 + k
}

fn eta_length(m: u64) -> usize {
    let k = bit_length(m - 1);
    1 + k.div_ceil(2) + k
}

/// Codeword `t` of the balanced code on `n` words as `(value, width)`.
fn balanced_word(n: u64, t: u64) -> (u64, usize) {
    let m = n.ilog2() as usize;
    let short = (1u128 << m) - u128::from(n - (1u64 << m));
    let t = u128::from(t);
    if t <= short {
        ((t - 1) as u64, m)
    } else {
        ((2 * short + (t - short - 1)) as u64, m + 1)
    }
}

struct Reader<'a> {
    bits: &'a [bool],
    pos: usize,
}

impl Reader<'_> {
    fn bit(&mut self) -> core::result::Result<bool, DecodeFailure> {
        let b = *self.bits.get(self.pos).ok_or(DecodeFailure::Truncated)?;
        self.pos += 1;
        Ok(b)
    }

    /// Reads `width ≤ 64` bits as an unsigned integer.
    fn uint(&mut self, width: usize) -> core::result::Result<u64, DecodeFailure> {
        if width > 64 {
            return Err(DecodeFailure::Overflow);
        }
        let mut v = 0u64;
        for _ in 0..width {
            v = (v << 1) | u64::from(self.bit()?);
        }
        Ok(v)
    }

    /// Consumes `α(k)` and returns `k`.
    fn unary(&mut self) -> core::result::Result<usize, DecodeFailure> {
        let mut k = 0;
        while !self.bit()? {
            k += 1;
        }
        Ok(k)
    }
}

/// `2^width + rest`, where `rest` is the next `width` bits.
fn read_with_leading_one(
    r: &mut Reader<'_>,
    width: usize,
) -> core::result::Result<u64, DecodeFailure> {
    if width >= 64 {
        return Err(DecodeFailure::Overflow);
    }
    Ok((1u64 << width) | r.uint(width)?)
}

fn decode_iota(r: &mut Reader<'_>) -> core::result::Result<u64, DecodeFailure> {
    let k = r.unary()?;
    if k == 0 {
        return Ok(1);
    }
    if r.bit()? {
        // |β(m)| = 2k+1; its leading 1 was just consumed.
        read_with_leading_one(r, 2 * k)
    } else {
        read_with_leading_one(r, 2 * k - 1)
    }
}

fn decode_eta(r: &mut Reader<'_>) -> core::result::Result<u64, DecodeFailure> {
    let k = r.unary()?;
    if k == 0 {
        return Ok(1);
    }
    let v = if r.bit()? {
        read_with_leading_one(r, 2 * k - 1)?
    } else {
        read_with_leading_one(r, 2 * k - 2)?
    };
    v.checked_add(1).ok_or(DecodeFailure::Overflow)
}

fn decode_pan<F>(r: &mut Reader<'_>, base: F) -> core::result::Result<u64, DecodeFailure>
where
    F: FnOnce(&mut Reader<'_>) -> core::result::Result<u64, DecodeFailure>,
{
    if r.bit()? {
        Ok(1)
    } else {
        base(r)?.checked_add(1).ok_or(DecodeFailure::Overflow)
    }
}

fn decode_split_suffix(
    r: &mut Reader<'_>,
    splits: &[u64],
    original: u64,
) -> core::result::Result<u64, DecodeFailure> {
    let before = splits.partition_point(|&s| s < original) as u64;
    let shifted = original
        .checked_add(before)
        .ok_or(DecodeFailure::Overflow)?;
    if splits.binary_search(&original).is_ok() {
        Ok(shifted + u64::from(r.bit()?))
    } else {
        Ok(shifted)
    }
}

fn decode_balanced(r: &mut Reader<'_>, n: u64) -> core::result::Result<u64, DecodeFailure> {
    let m = n.ilog2() as usize;
    let short = (1u128 << m) - u128::from(n - (1u64 << m));
    let v = u128::from(r.uint(m)?);
    if v < short {
        return Ok((v + 1) as u64);
    }
    let w = 2 * v + u128::from(r.bit()?);
    Ok((short + (w - 2 * short) + 1) as u64)
}

/// `ι(m)` for `m ≥ 1`.
pub fn iota_encode(m: u64) -> Result<BitString> {
    IntegerCode::iota().encode(m)
}

/// `η(m)` for `m ≥ 1`.
pub fn eta_encode(m: u64) -> Result<BitString> {
    IntegerCode::eta().encode(m)
}

/// `λ(m)` for `m ≥ 1`, via the direct encoder.
pub fn lambda_encode(m: u64) -> Result<BitString> {
    IntegerCode::lambda().encode(m)
}

/// `L(t)` for `code`.
pub fn codeword_length(code: &IntegerCode, t: u64) -> Result<usize> {
    code.length(t)
}

/// Splits a concatenation of codewords back into indices.
///
/// Fails with the bit offset of the first codeword that cannot be read, or of
/// the first leftover bit once `count_limit` indices have been decoded.
pub fn decode_stream(code: &IntegerCode, bits: &BitString, count_limit: usize) -> Result<Vec<u64>> {
    let bits = bits.as_slice();
    let mut out = Vec::new();
    let mut pos = 0;
    while pos < bits.len() {
        if out.len() == count_limit {
            return Err(Error::Decode {
                offset: pos,
                reason: DecodeFailure::LimitReached,
            });
        }
        let (index, used) = code.decode_at(bits, pos).map_err(|reason| Error::Decode {
            offset: pos,
            reason,
        })?;
        if code.capacity().is_some_and(|c| index > c) {
            return Err(Error::Decode {
                offset: pos,
                reason: DecodeFailure::NoMatch,
            });
        }
        out.push(index);
        pos += used;
    }
    Ok(out)
}
