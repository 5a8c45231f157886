//! The evolving (2,∞)-threshold scheme for a one-bit secret, and the optimal
//! finite (2,n) scheme.
//!
//! The dealer holds a random pad `Q`. Party `t` receives `Q|_t`, the first
//! `L(t)` pad bits, when the secret is 1, and `σ(t) ⊕ Q|_t` when it is 0.
//! Two parties recover the secret by testing whether the shorter share is a
//! prefix of the longer one: pad prefixes always nest, while XOR-ing with a
//! prefix-free code never does.
//!
//! An infinite code has no maximum codeword length, so the pad is grown on
//! demand from a seeded ChaCha20 stream. Growth only appends, so earlier shares
//! stay valid and each `Q|_t` is still uniform.

use alloc::boxed::Box;
use alloc::vec::Vec;
use core::fmt;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::analysis::min_sum;
use crate::bits::{is_prefix, xor, BitString};
use crate::codes::IntegerCode;
use crate::error::{invalid, Error, Result};

/// The share issued to one party.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Share {
    pub party_index: u64,
    pub payload: BitString,
}

impl Share {
    pub fn new(party_index: u64, payload: BitString) -> Self {
        Self {
            party_index,
            payload,
        }
    }
}

#[derive(Clone)]
enum PadSource {
    Seeded {
        seed: u64,
        rng: Box<ChaCha20Rng>,
        word: u64,
        bits_left: u32,
    },
    Zero,
    Fixed(BitString),
}

/// Dealer for one secret bit. Issuing shares mutates the pad cache, so a
/// state must not be shared between concurrent issuers.
#[derive(Clone)]
pub struct DealerState {
    secret: bool,
    code: IntegerCode,
    pad: BitString,
    source: PadSource,
    next_party: u64,
}

fn secret_bit(secret: u8) -> Result<bool> {
    match secret {
        0 => Ok(false),
        1 => Ok(true),
        other => Err(invalid(alloc::format!(
            "secret must be 0 or 1, got {other}"
        ))),
    }
}

/// Starts a dealer whose pad is the ChaCha20 stream seeded by `rng_seed`.
pub fn deal_init(secret: u8, code: IntegerCode, rng_seed: u64) -> Result<DealerState> {
    Ok(DealerState {
        secret: secret_bit(secret)?,
        code,
        pad: BitString::new(),
        source: PadSource::Seeded {
            seed: rng_seed,
            rng: Box::new(ChaCha20Rng::seed_from_u64(rng_seed)),
            word: 0,
            bits_left: 0,
        },
        next_party: 1,
    })
}

impl DealerState {
    /// A dealer whose pad is all zeros. Shares reveal the secret; for tests
    /// and golden outputs only.
    pub fn insecure_zero_pad(secret: u8, code: IntegerCode) -> Result<Self> {
        Ok(Self {
            secret: secret_bit(secret)?,
            code,
            pad: BitString::new(),
            source: PadSource::Zero,
            next_party: 1,
        })
    }

    /// A dealer with a caller-chosen finite pad. Shares longer than the pad
    /// fail with [`Error::PadExhausted`].
    pub fn insecure_fixed_pad(secret: u8, code: IntegerCode, pad: BitString) -> Result<Self> {
        Ok(Self {
            secret: secret_bit(secret)?,
            code,
            pad: BitString::new(),
            source: PadSource::Fixed(pad),
            next_party: 1,
        })
    }

    /// Rebuilds a seeded dealer from persisted parameters, regenerating the
    /// first `pad_len` pad bits.
    pub fn resume(
        secret: u8,
        code: IntegerCode,
        rng_seed: u64,
        next_party: u64,
        pad_len: usize,
    ) -> Result<Self> {
        let mut state = deal_init(secret, code, rng_seed)?;
        state.fast_forward(next_party, pad_len)?;
        Ok(state)
    }

    /// Advances a fresh dealer to a persisted position: the pad is extended
    /// to `pad_len` bits and the next party counter set to `next_party`.
    pub fn fast_forward(&mut self, next_party: u64, pad_len: usize) -> Result<()> {
        if next_party == 0 {
            return Err(invalid("next_party starts at 1"));
        }
        self.grow_pad(pad_len)?;
        self.next_party = self.next_party.max(next_party);
        Ok(())
    }

    pub fn secret(&self) -> u8 {
        u8::from(self.secret)
    }

    pub fn code(&self) -> &IntegerCode {
        &self.code
    }

    pub fn pad(&self) -> &BitString {
        &self.pad
    }

    pub fn next_party(&self) -> u64 {
        self.next_party
    }

    /// The seed, or `None` for an insecure fixed or zero pad.
    pub fn seed(&self) -> Option<u64> {
        match self.source {
            PadSource::Seeded { seed, .. } => Some(seed),
            _ => None,
        }
    }

    pub fn is_zero_pad(&self) -> bool {
        matches!(self.source, PadSource::Zero)
    }

    fn grow_pad(&mut self, len: usize) -> Result<()> {
        while self.pad.len() < len {
            let bit = match &mut self.source {
                PadSource::Seeded {
                    rng,
                    word,
                    bits_left,
                    ..
                } => {
                    if *bits_left == 0 {
                        *word = rng.next_u64();
                        *bits_left = 64;
                    }
                    *bits_left -= 1;
                    (*word >> *bits_left) & 1 == 1
                }
                PadSource::Zero => false,
                PadSource::Fixed(fixed) => {
                    fixed.get(self.pad.len()).ok_or(Error::PadExhausted {
                        needed: len,
                        available: fixed.len(),
                    })?
                }
            };
            self.pad.push(bit);
        }
        Ok(())
    }

    /// Issues the share of party `t`, extending the pad as needed.
    pub fn share_for(&mut self, t: u64) -> Result<Share> {
        let word = self.code.encode(t)?;
        self.grow_pad(word.len())?;
        let pad_prefix = self.pad.prefix(word.len());
        let payload = if self.secret {
            pad_prefix
        } else {
            xor(&word, &pad_prefix)?
        };
        self.next_party = self.next_party.max(t + 1);
        Ok(Share::new(t, payload))
    }
}

impl fmt::Debug for DealerState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DealerState")
            .field("code", &self.code.id())
            .field("pad_len", &self.pad.len())
            .field("next_party", &self.next_party)
            .finish_non_exhaustive()
    }
}

/// Recovers the secret from two shares of distinct parties.
pub fn recover(a: &Share, b: &Share) -> Result<u8> {
    if a.party_index == b.party_index {
        return Err(invalid(alloc::format!(
            "two distinct parties are needed, both shares are for party {}",
            a.party_index
        )));
    }
    let (short, long) = if a.payload.len() <= b.payload.len() {
        (a, b)
    } else {
        (b, a)
    };
    Ok(u8::from(is_prefix(&short.payload, &long.payload)))
}

/// The optimal (2,n) scheme: a balanced complete prefix code whose lengths
/// sum to `nm + 2l`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteScheme {
    n: u64,
    lengths: Vec<usize>,
    codebook: Vec<BitString>,
}

impl FiniteScheme {
    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn lengths(&self) -> &[usize] {
        &self.lengths
    }

    pub fn codebook(&self) -> &[BitString] {
        &self.codebook
    }

    pub fn total_length(&self) -> u64 {
        self.lengths.iter().map(|&l| l as u64).sum()
    }

    /// The codebook as an [`IntegerCode`] usable by a dealer.
    pub fn code(&self) -> IntegerCode {
        IntegerCode::balanced(self.n).expect("n ≥ 2 checked at construction")
    }
}

/// Builds the canonical balanced code for `n ≥ 2` parties: the `2^m − l`
/// length-`m` words come first, then the `2l` length-`(m+1)` words, each
/// group in lexicographic order.
pub fn finite_scheme(n: u64) -> Result<FiniteScheme> {
    let code = IntegerCode::balanced(n)?;
    let codebook: Vec<BitString> = (1..=n).map(|t| code.encode(t)).collect::<Result<_>>()?;
    let lengths = codebook.iter().map(BitString::len).collect();
    let scheme = FiniteScheme {
        n,
        lengths,
        codebook,
    };
    debug_assert_eq!(scheme.total_length(), min_sum(n)?);
    Ok(scheme)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::kraft_sum;
    use crate::rational::ExactRational;
    use alloc::vec;

    fn bs(s: &str) -> BitString {
        s.parse().unwrap()
    }

    #[test]
    fn deal_init_examples() {
        let state = deal_init(0, IntegerCode::lambda(), 7).unwrap();
        assert_eq!(state.next_party(), 1);
        assert_eq!(state.pad().len(), 0);
        assert!(matches!(
            deal_init(2, IntegerCode::lambda(), 7),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn seed_42_pad_is_frozen() {
        // Golden: ChaCha20 seeded with seed_from_u64(42), first word MSB-first.
        let mut state = deal_init(1, IntegerCode::eta_plus(), 42).unwrap();
        let share = state.share_for(1).unwrap();
        assert_eq!(share.payload, bs("1"));
        let share = state.share_for(40).unwrap();
        assert_eq!(share.payload, bs("10000011100"));
        assert_eq!(state.pad(), &bs("10000011100"));
    }

    #[test]
    fn pad_bits_do_not_depend_on_growth_order() {
        let mut a = deal_init(1, IntegerCode::lambda(), 9).unwrap();
        let mut b = deal_init(1, IntegerCode::lambda(), 9).unwrap();
        for t in 1..=300 {
            a.share_for(t).unwrap();
        }
        b.share_for(300).unwrap();
        assert_eq!(a.pad(), b.pad());
        let long = deal_init(1, IntegerCode::lambda(), 9)
            .and_then(|mut s| {
                s.share_for(1 << 40)?;
                Ok(s)
            })
            .unwrap();
        assert!(is_prefix(a.pad(), long.pad()));
    }

    #[test]
    fn share_for_examples() {
        let mut one = DealerState::insecure_zero_pad(1, IntegerCode::lambda()).unwrap();
        assert_eq!(one.share_for(7).unwrap().payload, bs("0000000"));

        let mut zero = DealerState::insecure_zero_pad(0, IntegerCode::lambda()).unwrap();
        assert_eq!(zero.share_for(5).unwrap().payload, bs("001110"));

        let mut ones =
            DealerState::insecure_fixed_pad(0, IntegerCode::eta_plus(), bs("11")).unwrap();
        assert_eq!(ones.share_for(2).unwrap().payload, bs("10"));
        assert_eq!(
            ones.share_for(3),
            Err(Error::PadExhausted {
                needed: 4,
                available: 2
            })
        );
    }

    #[test]
    fn recover_examples() {
        let mut dealer = deal_init(1, IntegerCode::lambda(), 3).unwrap();
        let (a, b) = (dealer.share_for(4).unwrap(), dealer.share_for(11).unwrap());
        assert_eq!(recover(&a, &b).unwrap(), 1);

        let mut zero = DealerState::insecure_zero_pad(0, IntegerCode::lambda()).unwrap();
        let (a, b) = (zero.share_for(1).unwrap(), zero.share_for(2).unwrap());
        assert_eq!((a.payload.clone(), b.payload.clone()), (bs("1"), bs("01")));
        assert_eq!(recover(&a, &b).unwrap(), 0);
        assert_eq!(recover(&b, &a).unwrap(), 0);

        assert!(matches!(recover(&a, &a), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn recover_exhaustive_over_six_bit_pads() {
        for pad in 0u64..64 {
            let pad = BitString::from_uint(pad, 6);
            for secret in [0, 1] {
                let mut dealer =
                    DealerState::insecure_fixed_pad(secret, IntegerCode::lambda(), pad.clone())
                        .unwrap();
                let a = dealer.share_for(2).unwrap();
                let b = dealer.share_for(5).unwrap();
                assert_eq!(recover(&a, &b).unwrap(), secret, "pad {pad}");
            }
        }
    }

    #[test]
    fn earlier_shares_never_change() {
        let mut dealer = deal_init(0, IntegerCode::eta_plus(), 11).unwrap();
        let first: Vec<_> = (1..=20).map(|t| dealer.share_for(t).unwrap()).collect();
        dealer.share_for(5000).unwrap();
        for share in &first {
            assert_eq!(&dealer.share_for(share.party_index).unwrap(), share);
        }
    }

    #[test]
    fn resume_regenerates_the_pad() {
        let mut live = deal_init(0, IntegerCode::iota_plus(), 5).unwrap();
        for t in 1..=9 {
            live.share_for(t).unwrap();
        }
        let mut resumed =
            DealerState::resume(0, IntegerCode::iota_plus(), 5, 10, live.pad().len()).unwrap();
        assert_eq!(resumed.pad(), live.pad());
        assert_eq!(resumed.share_for(10).unwrap(), live.share_for(10).unwrap());
    }

    #[test]
    fn finite_scheme_examples() {
        let two = finite_scheme(2).unwrap();
        assert_eq!(two.lengths(), [1, 1]);
        assert_eq!(two.total_length(), 2);
        let six = finite_scheme(6).unwrap();
        assert_eq!(six.lengths(), [2, 2, 3, 3, 3, 3]);
        assert_eq!(six.total_length(), 16);
        let four = finite_scheme(4).unwrap();
        assert_eq!(four.lengths(), [2, 2, 2, 2]);
        assert_eq!(four.total_length(), 8);
        assert!(matches!(finite_scheme(1), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn finite_schemes_are_complete_and_optimal() {
        for n in 2..=4096 {
            let scheme = finite_scheme(n).unwrap();
            assert_eq!(scheme.total_length(), min_sum(n).unwrap());
            if n <= 300 {
                assert_eq!(
                    kraft_sum(&scheme.code(), n).unwrap(),
                    ExactRational::from_integer(1)
                );
            }
        }
    }

    #[test]
    fn finite_scheme_shares_recover() {
        let scheme = finite_scheme(5).unwrap();
        for secret in [0, 1] {
            let mut dealer = deal_init(secret, scheme.code(), 99).unwrap();
            let shares: Vec<_> = (1..=5).map(|t| dealer.share_for(t).unwrap()).collect();
            for i in 0..5 {
                for j in i + 1..5 {
                    assert_eq!(recover(&shares[i], &shares[j]).unwrap(), secret);
                }
            }
            assert!(dealer.share_for(6).is_err());
        }
        assert_eq!(scheme.codebook()[0], bs("00"));
        assert_eq!(
            scheme.codebook().to_vec(),
            vec![bs("00"), bs("01"), bs("10"), bs("110"), bs("111")]
        );
    }
}
