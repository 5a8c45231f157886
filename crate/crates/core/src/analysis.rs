//! Share-size metrics.
//!
//! `min_sum(n) = nm + 2l` (with `m = ⌊log₂ n⌋`, `l = n − 2^m`) is the least
//! total share size of any (2,n) scheme for a one-bit secret. For an evolving
//! scheme built on a code `σ`, `ratio(n, σ)` compares the first `n` shares
//! against that optimum, and the global metric is its supremum over `n ≥ 2`.
//!
//! The supremum is established in two parts: [`metric_scan`] evaluates the
//! ratio exactly up to some `n_max`, and a [`TailCertificate`] proves that the
//! ratio stays below the claimed constant for every `n ≥ 2^m0`.

use alloc::collections::BinaryHeap;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Reverse;

use num_bigint::{BigInt, BigUint};
use num_traits::One;

use crate::codes::IntegerCode;
use crate::error::{invalid, Result};
use crate::rational::ExactRational;

fn check_n(n: u64) -> Result<()> {
    if n < 2 {
        return Err(invalid(alloc::format!("n must be at least 2, got {n}")));
    }
    Ok(())
}

/// `Σ_{t=1}^{n} 2^{−L(t)}`, exactly.
pub fn kraft_sum(code: &IntegerCode, n: u64) -> Result<ExactRational> {
    if n == 0 {
        return Err(invalid("kraft_sum needs n ≥ 1"));
    }
    let lengths = (1..=n)
        .map(|t| code.length(t))
        .collect::<Result<Vec<_>>>()?;
    let max = *lengths.iter().max().expect("n ≥ 1");
    let numer: BigUint = lengths.iter().map(|&l| BigUint::one() << (max - l)).sum();
    ExactRational::new(BigInt::from(numer), BigInt::from(BigUint::one() << max))
}

/// `nm + 2l`, the minimum total share size of a (2,n) scheme.
pub fn min_sum(n: u64) -> Result<u64> {
    check_n(n)?;
    let m = u64::from(n.ilog2());
    let l = n - (1 << m);
    Ok(n * m + 2 * l)
}

/// Total codeword length of a Huffman code for `n` equiprobable symbols.
pub fn min_sum_oracle(n: u64) -> Result<u64> {
    check_n(n)?;
    // Each merge pushes every leaf below it one level deeper, so the total
    // depth is the sum of the merged weights.
    let mut heap: BinaryHeap<Reverse<u64>> = (0..n).map(|_| Reverse(1)).collect();
    let mut total = 0;
    while heap.len() > 1 {
        let Reverse(a) = heap.pop().unwrap();
        let Reverse(b) = heap.pop().unwrap();
        total += a + b;
        heap.push(Reverse(a + b));
    }
    Ok(total)
}

/// Outcome of comparing `nm + 2l` with `n·log₂ n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LowerBound {
    pub holds: bool,
    pub equality: bool,
}

/// Largest `n` accepted by [`lower_bound_check`]; `n^n` is materialized.
pub const LOWER_BOUND_MAX_N: u64 = 1 << 20;

/// Decides `nm + 2l ≥ n·log₂ n` exactly, as `2^(nm+2l) ≥ n^n`.
pub fn lower_bound_check(n: u64) -> Result<LowerBound> {
    let exponent = min_sum(n)?;
    if n > LOWER_BOUND_MAX_N {
        return Err(invalid(alloc::format!(
            "exact comparison supports n ≤ {LOWER_BOUND_MAX_N}"
        )));
    }
    let lhs = BigUint::one() << exponent;
    let rhs = BigUint::from(n).pow(n as u32);
    Ok(LowerBound {
        holds: lhs >= rhs,
        equality: lhs == rhs,
    })
}

/// One row of the `nm + 2l` versus `n·log₂ n` comparison.
#[derive(Clone, Debug, PartialEq)]
pub struct Table1Row {
    pub n: u64,
    pub min_sum: u64,
    pub n_log2_n: f64,
    pub difference: f64,
}

impl Table1Row {
    /// `n·log₂ n` as printed: an integer for powers of two, otherwise two
    /// decimals rounded half away from zero.
    pub fn n_log2_n_text(&self) -> String {
        if self.n.is_power_of_two() {
            alloc::format!("{}", self.n * u64::from(self.n.ilog2()))
        } else {
            two_decimals(self.n_log2_n)
        }
    }

    pub fn difference_text(&self) -> String {
        if self.n.is_power_of_two() {
            String::from("0")
        } else {
            two_decimals(self.difference)
        }
    }
}

fn two_decimals(x: f64) -> String {
    let cents = libm::round(x * 100.0) as i64;
    let sign = if cents < 0 { "-" } else { "" };
    let cents = cents.unsigned_abs();
    alloc::format!("{sign}{}.{:02}", cents / 100, cents % 100)
}

/// The 32 values of `n` compared in the reference table: `2^m` and
/// `2^m + 2^(m−1)` for `m = 1..=16`, ascending.
pub fn table1_rows() -> Vec<u64> {
    (1..=16u32)
        .flat_map(|m| [1u64 << m, (1u64 << m) + (1u64 << (m - 1))])
        .collect()
}

pub fn d_table(rows: &[u64]) -> Result<Vec<Table1Row>> {
    rows.iter()
        .map(|&n| {
            let min_sum = min_sum(n)?;
            let n_log2_n = n as f64 * libm::log2(n as f64);
            Ok(Table1Row {
                n,
                min_sum,
                n_log2_n,
                difference: min_sum as f64 - n_log2_n,
            })
        })
        .collect()
}

/// `Σ_{t=1}^{n} L(t) / (nm + 2l)`.
pub fn ratio(n: u64, code: &IntegerCode) -> Result<ExactRational> {
    let denom = min_sum(n)?;
    let total = (1..=n)
        .map(|t| code.length(t).map(|l| l as u64))
        .sum::<Result<u64>>()?;
    ExactRational::new(total, denom)
}

/// Maximum of [`ratio`] over `2 ≤ n ≤ n_max`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MetricReport {
    pub code_id: String,
    pub n_max: u64,
    pub sup_ratio: ExactRational,
    /// Smallest `n` attaining `sup_ratio`.
    pub argmax_n: u64,
    pub tail: Option<TailOutcome>,
}

impl MetricReport {
    /// Attaches the verdict of `certificate` for `code`.
    pub fn with_tail(mut self, code: &IntegerCode, certificate: TailCertificate) -> Result<Self> {
        let holds = certificate.verify(code)?;
        self.tail = Some(TailOutcome { certificate, holds });
        Ok(self)
    }

    /// True when the scan and a passing tail together establish that
    /// `sup_ratio` is the global metric: the scan must reach `2^m0 − 1` and
    /// the claimed constant must equal the scanned maximum.
    pub fn certifies_global_metric(&self) -> bool {
        match &self.tail {
            Some(TailOutcome { certificate, holds }) => {
                *holds
                    && certificate.claimed_k == self.sup_ratio
                    && self.n_max >= (1u64 << certificate.m0) - 1
            }
            None => false,
        }
    }
}

pub fn metric_scan(code: &IntegerCode, n_max: u64) -> Result<MetricReport> {
    check_n(n_max)?;
    let mut total = code.length(1)? as u64;
    let (mut best_num, mut best_den, mut argmax) = (0u64, 1u64, 0u64);
    for n in 2..=n_max {
        total += code.length(n)? as u64;
        let denom = min_sum(n)?;
        if u128::from(total) * u128::from(best_den) > u128::from(best_num) * u128::from(denom) {
            (best_num, best_den, argmax) = (total, denom, n);
        }
    }
    Ok(MetricReport {
        code_id: code.id(),
        n_max,
        sup_ratio: ExactRational::new(best_num, best_den)?,
        argmax_n: argmax,
        tail: None,
    })
}

/// Parameters of a tail bound: `L(t) ≤ a + b·⌊log₂(t − c)⌋` for `t ≥ t0`,
/// used to show `ratio(n) < claimed_k` for every `n ≥ 2^m0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TailCertificate {
    pub a: ExactRational,
    pub b: ExactRational,
    pub c: u64,
    pub t0: u64,
    pub m0: u32,
    pub claimed_k: ExactRational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TailOutcome {
    pub certificate: TailCertificate,
    pub holds: bool,
}

/// Upper end of the direct length-bound check.
const LENGTH_CHECK_CAP: u64 = 1 << 20;
/// Extra exponents past `m0` at which the closed-form bound is re-evaluated.
const SWEEP: u32 = 20;

impl TailCertificate {
    /// The certificates for `ι+`, `η+` and `λ`.
    pub fn known(code: &IntegerCode) -> Option<Self> {
        let q = ExactRational::ratio;
        let (a, b, c, t0, m0, k) = match code.id().as_str() {
            "iota+" => (q(7, 2), q(3, 2), 1, 3, 4, q(13, 8)),
            "eta+" => (q(4, 1), q(3, 2), 2, 3, 9, q(259, 160)),
            "lambda" | "split(eta+,5,8,9,14,15,16,17)" => (q(4, 1), q(3, 2), 9, 25, 11, q(51, 32)),
            _ => return None,
        };
        Some(Self {
            a,
            b,
            c,
            t0,
            m0,
            claimed_k: k,
        })
    }

    fn validate(&self) -> Result<()> {
        if self.c < 1 {
            return Err(invalid("tail shift c must be at least 1"));
        }
        if self.t0 < self.c + 1 {
            return Err(invalid("t0 must be at least c + 1"));
        }
        if self.m0 == 0 || self.m0 > 40 {
            return Err(invalid("m0 must lie in 1..=40"));
        }
        if (1u64 << self.m0) + 1 < self.t0 {
            return Err(invalid("2^m0 must be at least t0 − 1"));
        }
        if self.b <= ExactRational::zero() {
            return Err(invalid("b must be positive"));
        }
        Ok(())
    }

    /// Checks the length bound directly on `[t0, min(2^(m0+4), 2^20)]`, then
    /// shows `ratio(n) < claimed_k` for all `n ≥ 2^m0` in closed form.
    ///
    /// With `D(n) = nm + 2l` and `S(N) = Σ_{t≤N} ⌊log₂ t⌋ = D(N+1) − 2(N+1) + 2`,
    /// the length bound gives, for `n ≥ t0 − 1`,
    ///
    /// `Σ_{t≤n} L(t) ≤ P + a(n − t0 + 1) + b(S(n − 1) − S(t0 − c − 1)) = b·D(n) + (a − 2b)n + E`
    ///
    /// where `P` is the exact sum of the first `t0 − 1` lengths. Since
    /// `D(n) ≥ nm`, the ratio is below `K` once `(K − b)m − (a − 2b) ≥ 0` and
    /// `((K − b)m − (a − 2b))·2^m > E`; both sides only improve as `m` grows,
    /// so holding at `m0` covers every larger `n`.
    pub fn verify(&self, code: &IntegerCode) -> Result<bool> {
        self.validate()?;
        let q = |v: u64| ExactRational::from_integer(v);
        let (a, b, k) = (&self.a, &self.b, &self.claimed_k);

        // Direct check of the length bound; it only depends on ⌊log₂(t − c)⌋.
        let end = (1u64 << (self.m0 + 4)).min(LENGTH_CHECK_CAP).max(self.t0);
        let limit: Vec<BigInt> = (0..64u64).map(|j| (a + &(b * &q(j))).floor()).collect();
        let mut prefix_sums = Vec::with_capacity(end as usize + 1);
        prefix_sums.push(0u64);
        let mut length_bound_holds = true;
        for t in 1..=end {
            let len = code.length(t)?;
            prefix_sums.push(prefix_sums[t as usize - 1] + len as u64);
            if t >= self.t0 {
                let j = (t - self.c).ilog2() as usize;
                length_bound_holds &= BigInt::from(len) <= limit[j];
            }
        }

        let head = prefix_sums[self.t0 as usize - 1];
        let e = &(&(&q(head) - &(a * &q(self.t0 - 1))) + &(b * &q(2)))
            - &(b * &q(floor_log_prefix(self.t0 - self.c - 1)));
        let bound = |n: u64| -> ExactRational {
            let d = ExactRational::from_integer(min_sum_wide(n));
            &(&(b * &d) + &(&(a - &(b * &q(2))) * &q(n))) + &e
        };

        // Closed-form bound against the real prefix sums it must dominate.
        let bound_dominates = (self.t0.saturating_sub(1).max(2)..=end)
            .all(|n| q(prefix_sums[n as usize]) <= bound(n));

        let slack = |m: u32| &(&(k - b) * &q(u64::from(m))) - &(a - &(b * &q(2)));
        let coef = slack(self.m0);
        let closes = *k >= *b && coef >= ExactRational::zero() && &coef * &q(1u64 << self.m0) > e;

        // Within a block 2^m ≤ n < 2^(m+1) the bound is linear in n, so the
        // endpoints decide the whole block.
        let sweep_holds = (self.m0..=self.m0 + SWEEP).all(|m| {
            [1u64 << m, (1u64 << (m + 1)) - 1]
                .into_iter()
                .all(|n| bound(n) < k * &ExactRational::from_integer(min_sum_wide(n)))
        });

        Ok(length_bound_holds && bound_dominates && closes && sweep_holds)
    }
}

/// `min_sum` without the `n ≥ 2` check, for large sweep points.
fn min_sum_wide(n: u64) -> u128 {
    let m = u128::from(n.ilog2());
    let n = u128::from(n);
    let l = n - (1 << m);
    n * m + 2 * l
}

/// Checks a tail bound for `code`; see [`TailCertificate::verify`].
pub fn tail_certificate(
    code: &IntegerCode,
    a: ExactRational,
    b: ExactRational,
    c: u64,
    t0: u64,
    m0: u32,
    claimed_k: ExactRational,
) -> Result<bool> {
    TailCertificate {
        a,
        b,
        c,
        t0,
        m0,
        claimed_k,
    }
    .verify(code)
}

/// `Σ_{t=1}^{N} ⌊log₂ t⌋` in closed form: with `N = 2^k + j`, `0 ≤ j < 2^k`,
/// the full blocks give `Σ_{d<k} d·2^d = (k − 2)2^k + 2` and the last block
/// adds `k(j + 1)`.
fn floor_log_prefix(n: u64) -> u64 {
    if n == 0 {
        return 0;
    }
    let k = u128::from(n.ilog2());
    let j = u128::from(n) - (1 << k);
    let full = (k << k) + 2 - (2 << k);
    (full + k * (j + 1)) as u64
}

/// `Σ_{t=lo}^{hi} ⌊log₂ t⌋` for `2 ≤ lo ≤ hi`.
pub fn floor_log_sum(lo: u64, hi: u64) -> Result<u64> {
    if lo < 2 || lo > hi {
        return Err(invalid(alloc::format!(
            "floor_log_sum needs 2 ≤ lo ≤ hi, got lo={lo} hi={hi}"
        )));
    }
    Ok(floor_log_prefix(hi) - floor_log_prefix(lo - 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(s: &str) -> ExactRational {
        s.parse().unwrap()
    }

    fn brute_floor_log_sum(lo: u64, hi: u64) -> u64 {
        (lo..=hi).map(|t| u64::from(t.ilog2())).sum()
    }

    #[test]
    fn kraft_examples() {
        assert_eq!(kraft_sum(&IntegerCode::lambda(), 1).unwrap(), q("1/2"));
        let four = IntegerCode::balanced(4).unwrap();
        assert_eq!(kraft_sum(&four, 4).unwrap(), q("1"));
        // Oracle: 1/2 + 1/4 + 1/16 + 1/32 + 2/64 + 2/128 + 8/256 + 8/512.
        let direct = [1u32, 2, 4, 5, 6, 6, 7, 7]
            .iter()
            .chain(&[8; 8])
            .chain(&[9; 8])
            .fold(ExactRational::zero(), |acc, &l| {
                acc + ExactRational::new(1, BigInt::one() << l).unwrap()
            });
        assert_eq!(kraft_sum(&IntegerCode::lambda(), 24).unwrap(), direct);
        assert_eq!(direct, q("15/16"));
        assert!(kraft_sum(&IntegerCode::lambda(), 0).is_err());
    }

    #[test]
    fn min_sum_examples() {
        assert_eq!(min_sum(3).unwrap(), 5);
        assert_eq!(min_sum(12).unwrap(), 44);
        assert_eq!(min_sum(1 << 10).unwrap(), 10240);
        assert!(min_sum(1).is_err());
    }

    #[test]
    fn oracle_examples() {
        assert_eq!(min_sum_oracle(2).unwrap(), 2);
        assert_eq!(min_sum_oracle(6).unwrap(), 16);
        assert_eq!(min_sum_oracle(96).unwrap(), 640);
        assert!(min_sum_oracle(0).is_err());
    }

    #[test]
    fn lower_bound_examples() {
        let lb = |n| lower_bound_check(n).unwrap();
        assert_eq!(
            lb(8),
            LowerBound {
                holds: true,
                equality: true
            }
        );
        assert_eq!(
            lb(12),
            LowerBound {
                holds: true,
                equality: false
            }
        );
        assert_eq!(
            lb(3),
            LowerBound {
                holds: true,
                equality: false
            }
        );
        assert!(lower_bound_check(1).is_err());
        assert!(lower_bound_check(LOWER_BOUND_MAX_N + 1).is_err());
    }

    #[test]
    fn d_table_examples() {
        let rows = d_table(&[48, 1 << 16, (1 << 10) + (1 << 9)]).unwrap();
        let text: Vec<_> = rows
            .iter()
            .map(|r| (r.n, r.min_sum, r.n_log2_n_text(), r.difference_text()))
            .collect();
        assert_eq!(text[0], (48, 272, "268.08".into(), "3.92".into()));
        assert_eq!(text[1], (65536, 1048576, "1048576".into(), "0".into()));
        assert_eq!(text[2], (1536, 16384, "16258.50".into(), "125.50".into()));
        assert_eq!(table1_rows().len(), 32);
    }

    #[test]
    fn two_decimals_rounds_half_away() {
        assert_eq!(two_decimals(4.75), "4.75");
        assert_eq!(two_decimals(0.125), "0.13");
        assert_eq!(two_decimals(35588.99999), "35589.00");
        assert_eq!(two_decimals(-0.125), "-0.13");
    }

    #[test]
    fn ratio_examples() {
        assert_eq!(ratio(4, &IntegerCode::iota_plus()).unwrap(), q("13/8"));
        assert_eq!(ratio(32, &IntegerCode::eta_plus()).unwrap(), q("1.61875"));
        assert_eq!(ratio(16, &IntegerCode::lambda()).unwrap(), q("51/32"));
    }

    #[test]
    fn metric_scan_examples() {
        let r = metric_scan(&IntegerCode::lambda(), 2047).unwrap();
        assert_eq!((r.sup_ratio.clone(), r.argmax_n), (q("51/32"), 16));
        let r = metric_scan(&IntegerCode::eta_plus(), 511).unwrap();
        assert_eq!((r.sup_ratio.clone(), r.argmax_n), (q("259/160"), 32));
        let r = metric_scan(&IntegerCode::iota_plus(), 15).unwrap();
        assert_eq!((r.sup_ratio.clone(), r.argmax_n), (q("13/8"), 4));
        assert_eq!(r.code_id, "iota+");
        assert!(metric_scan(&IntegerCode::lambda(), 1).is_err());
    }

    #[test]
    fn metric_scan_ties_report_smallest_n() {
        // η+ lengths 1, 2, 4, 5: ratio(2) = 3/2 = 12/8 = ratio(4).
        let r = metric_scan(&IntegerCode::eta_plus(), 4).unwrap();
        assert_eq!(ratio(4, &IntegerCode::eta_plus()).unwrap(), q("3/2"));
        assert_eq!((r.sup_ratio, r.argmax_n), (q("3/2"), 2));
    }

    #[test]
    fn tail_certificate_examples() {
        let cert = |code: IntegerCode, a, b, c, t0, m0, k| {
            tail_certificate(&code, q(a), q(b), c, t0, m0, q(k))
        };
        assert!(cert(IntegerCode::iota_plus(), "7/2", "3/2", 1, 3, 4, "13/8").unwrap());
        assert!(cert(IntegerCode::eta_plus(), "4", "3/2", 2, 3, 9, "1.61875").unwrap());
        assert!(cert(IntegerCode::lambda(), "4", "3/2", 9, 25, 11, "51/32").unwrap());
    }

    #[test]
    fn tail_certificate_rejects_loose_parameters() {
        let cert = |code: IntegerCode, a, b, c, t0, m0, k| {
            tail_certificate(&code, q(a), q(b), c, t0, m0, q(k)).unwrap()
        };
        // One exponent too early fails to close for each code.
        assert!(!cert(
            IntegerCode::iota_plus(),
            "7/2",
            "3/2",
            1,
            3,
            3,
            "13/8"
        ));
        assert!(!cert(
            IntegerCode::eta_plus(),
            "4",
            "3/2",
            2,
            3,
            8,
            "1.61875"
        ));
        assert!(!cert(IntegerCode::lambda(), "4", "3/2", 9, 25, 10, "51/32"));
        // Claimed constant below the asymptotic slope.
        assert!(!cert(IntegerCode::lambda(), "4", "3/2", 9, 25, 11, "1.49"));
        // Length bound violated: λ(25..) is not below 3 + ⌊log₂(t−9)⌋.
        assert!(!cert(IntegerCode::lambda(), "3", "1", 9, 25, 11, "51/32"));
        // λ does not satisfy the η+ shape from t = 3.
        assert!(!cert(IntegerCode::lambda(), "4", "3/2", 2, 3, 11, "51/32"));
    }

    #[test]
    fn tail_certificate_parameter_errors() {
        let lambda = IntegerCode::lambda();
        assert!(tail_certificate(&lambda, q("4"), q("3/2"), 9, 9, 11, q("51/32")).is_err());
        assert!(tail_certificate(&lambda, q("4"), q("3/2"), 0, 3, 11, q("51/32")).is_err());
        assert!(tail_certificate(&lambda, q("4"), q("0"), 9, 25, 11, q("51/32")).is_err());
        assert!(tail_certificate(&lambda, q("4"), q("3/2"), 9, 25, 2, q("51/32")).is_err());
    }

    #[test]
    fn known_certificates_certify_reports() {
        for (id, n_max) in [("iota+", 15), ("eta+", 511), ("lambda", 2047)] {
            let code: IntegerCode = id.parse().unwrap();
            let cert = TailCertificate::known(&code).unwrap();
            let report = metric_scan(&code, n_max)
                .unwrap()
                .with_tail(&code, cert)
                .unwrap();
            assert!(report.certifies_global_metric(), "{id}");
        }
        assert!(TailCertificate::known(&IntegerCode::iota()).is_none());
    }

    #[test]
    fn floor_log_sum_examples() {
        assert_eq!(floor_log_sum(2, 3).unwrap(), 2);
        for m in 2..=30u64 {
            let n = 1u64 << m;
            assert_eq!(floor_log_sum(2, n - 1).unwrap(), (m - 2) * n + 2);
        }
        assert_eq!(brute_floor_log_sum(16, 100), 446);
        assert_eq!(floor_log_sum(16, 100).unwrap(), 446);
        assert!(floor_log_sum(1, 4).is_err());
        assert!(floor_log_sum(5, 4).is_err());
    }

    #[test]
    fn prefix_sum_identity_matches_min_sum() {
        // Σ_{t=2}^{n−1} ⌊log₂ t⌋ = lm + (m−2)2^m + 2 = nm + 2l − 2n + 2.
        for n in 3..=5000u64 {
            let m = u64::from(n.ilog2());
            let l = n - (1 << m);
            let expected = l * m + (m << m) + 2 - (2 << m);
            assert_eq!(floor_log_prefix(n - 1), expected, "n={n}");
            assert_eq!(expected + 2 * n, min_sum(n).unwrap() + 2);
        }
    }

    #[test]
    fn ratio_at_two_is_at_least_three_halves() {
        for code in IntegerCode::registry() {
            assert!(ratio(2, &code).unwrap() >= q("3/2"));
        }
    }

    proptest! {
        #[test]
        fn floor_log_sum_matches_brute_force(lo in 2u64..1_000_000, span in 0u64..5000) {
            let hi = (lo + span).min(1_000_000);
            prop_assert_eq!(floor_log_sum(lo, hi).unwrap(), brute_floor_log_sum(lo, hi));
        }
    }
}
