//! Evolving (2,∞)-threshold secret sharing built on prefix codes of integers.
//!
//! Every prefix code `σ` of the positive integers yields a scheme in which the
//! `t`-th party receives a share of exactly `|σ(t)|` bits. This crate provides
//! the codes (`ι`, `η`, the panning and splitting transforms, and the `λ`
//! code), the dealer and recovery procedure, the optimal finite `(2,n)`
//! construction, and exact metric machinery comparing total share size
//! against the optimum `nm + 2l`.
//!
//! The crate is `no_std` and only needs `alloc`.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod analysis;
pub mod bits;
pub mod codes;
mod error;
pub mod rational;
pub mod scheme;

pub use analysis::{
    d_table, floor_log_sum, kraft_sum, lower_bound_check, metric_scan, min_sum, min_sum_oracle,
    ratio, tail_certificate, LowerBound, MetricReport, Table1Row, TailCertificate, TailOutcome,
};
pub use bits::{binary_beta, is_prefix, strip_msb, unary_alpha, xor, BitString};
pub use codes::{
    decode_stream, eta_encode, iota_encode, lambda_encode, pan, split, IntegerCode, SplitSpec,
};
pub use error::{DecodeFailure, Error, Result};
pub use rational::ExactRational;
pub use scheme::{deal_init, finite_scheme, recover, DealerState, FiniteScheme, Share};
