//! Line-oriented text formats: share lines, dealer state files, metric
//! report lines, and the two reference tables.

use std::fmt::Write as _;

use evoshare_core::analysis::{d_table, table1_rows};
use evoshare_core::{BitString, DealerState, IntegerCode, MetricReport, Share};

use crate::error::CliError;

/// A share together with the id of the code it was dealt under.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShareLine {
    pub code_id: String,
    pub share: Share,
}

impl ShareLine {
    /// `t=<decimal> code=<code-id> bits=<0/1 string>`
    pub fn render(&self) -> String {
        format!(
            "t={} code={} bits={}",
            self.share.party_index, self.code_id, self.share.payload
        )
    }

    pub fn parse(line: &str) -> Result<Self, CliError> {
        let bad = |why: &str| CliError::Data(format!("malformed share line {line:?}: {why}"));
        let mut fields = line.split_whitespace();
        let mut field = |key: &str| {
            fields
                .next()
                .and_then(|f| f.strip_prefix(key))
                .and_then(|f| f.strip_prefix('='))
                .ok_or_else(|| bad(&format!("expected {key}=")))
        };
        let t = field("t")?;
        let code_id = field("code")?.to_string();
        let bits = field("bits")?;
        if fields.next().is_some() {
            return Err(bad("trailing fields"));
        }
        let party_index = t
            .parse::<u64>()
            .ok()
            .filter(|&t| t >= 1)
            .ok_or_else(|| bad("party index must be a positive integer"))?;
        let payload: BitString = bits.parse().map_err(|e| bad(&format!("{e}")))?;
        Ok(Self {
            code_id,
            share: Share::new(party_index, payload),
        })
    }
}

/// Persisted dealer parameters. The pad itself is regenerated from the seed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StateFile {
    pub secret: u8,
    pub code_id: String,
    /// `None` marks an insecure all-zero pad.
    pub seed: Option<u64>,
    pub next_party: u64,
    pub pad_len: usize,
}

impl StateFile {
    pub fn from_state(state: &DealerState) -> Self {
        Self {
            secret: state.secret(),
            code_id: state.code().id(),
            seed: state.seed(),
            next_party: state.next_party(),
            pad_len: state.pad().len(),
        }
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        writeln!(s, "secret={}", self.secret).unwrap();
        writeln!(s, "code={}", self.code_id).unwrap();
        match self.seed {
            Some(seed) => {
                writeln!(s, "pad=seeded").unwrap();
                writeln!(s, "seed={seed}").unwrap();
            }
            None => writeln!(s, "pad=zero").unwrap(),
        }
        writeln!(s, "next_party={}", self.next_party).unwrap();
        writeln!(s, "pad_len={}", self.pad_len).unwrap();
        s
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let bad = |why: String| CliError::Data(format!("bad state file: {why}"));
        let mut secret = None;
        let mut code_id = None;
        let mut pad = None;
        let mut seed = None;
        let mut next_party = None;
        let mut pad_len = None;
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| bad(format!("line {line:?} is not key=value")))?;
            let num = |v: &str| {
                v.parse::<u64>()
                    .map_err(|_| bad(format!("{key} is not an integer: {v:?}")))
            };
            match key {
                "secret" => secret = Some(num(value)?),
                "code" => code_id = Some(value.to_string()),
                "pad" => pad = Some(value.to_string()),
                "seed" => seed = Some(num(value)?),
                "next_party" => next_party = Some(num(value)?),
                "pad_len" => pad_len = Some(num(value)?),
                other => return Err(bad(format!("unknown key {other:?}"))),
            }
        }
        let missing = |k: &str| bad(format!("missing {k}"));
        let secret = secret.ok_or_else(|| missing("secret"))?;
        if secret > 1 {
            return Err(bad(format!("secret must be 0 or 1, got {secret}")));
        }
        let seed = match pad.as_deref() {
            Some("seeded") => Some(seed.ok_or_else(|| missing("seed"))?),
            Some("zero") if seed.is_none() => None,
            Some("zero") => return Err(bad("zero pad with a seed".into())),
            Some(other) => return Err(bad(format!("unknown pad kind {other:?}"))),
            None => return Err(missing("pad")),
        };
        Ok(Self {
            secret: secret as u8,
            code_id: code_id.ok_or_else(|| missing("code"))?,
            seed,
            next_party: next_party.ok_or_else(|| missing("next_party"))?,
            pad_len: pad_len.ok_or_else(|| missing("pad_len"))? as usize,
        })
    }

    /// Rebuilds the dealer, rejecting files whose pad length disagrees with
    /// the issued range.
    pub fn restore(&self) -> Result<DealerState, CliError> {
        let code: IntegerCode = self
            .code_id
            .parse()
            .map_err(|e| CliError::Data(format!("bad state file: {e}")))?;
        if self.next_party == 0 {
            return Err(CliError::Data("bad state file: next_party is 0".into()));
        }
        let required = match self.next_party {
            1 => 0,
            n => code
                .length(n - 1)
                .map_err(|e| CliError::Data(format!("bad state file: {e}")))?,
        };
        if (self.next_party == 1) != (self.pad_len == 0) || self.pad_len < required {
            return Err(CliError::Data(format!(
                "state file pad length {} does not match next_party {}",
                self.pad_len, self.next_party
            )));
        }
        let state = match self.seed {
            Some(seed) => {
                DealerState::resume(self.secret, code, seed, self.next_party, self.pad_len)
            }
            None => DealerState::insecure_zero_pad(self.secret, code).and_then(|mut s| {
                s.fast_forward(self.next_party, self.pad_len)?;
                Ok(s)
            }),
        };
        state.map_err(|e| CliError::Data(format!("bad state file: {e}")))
    }
}

/// `code=<id> n_max=<int> K=<num>/<den> argmax=<int> tail=<ok|none|fail>`
pub fn report_line(report: &MetricReport) -> String {
    let tail = match &report.tail {
        None => "none",
        Some(t) if t.holds => "ok",
        Some(_) => "fail",
    };
    format!(
        "code={} n_max={} K={} argmax={} tail={}",
        report.code_id, report.n_max, report.sup_ratio, report.argmax_n, tail
    )
}

/// The `nm + 2l` versus `n·log₂ n` table as CSV, ascending in `n`.
pub fn table1_csv() -> String {
    let mut s = String::from("n,nm+2l,n*log2(n),difference\n");
    for row in d_table(&table1_rows()).expect("all rows have n ≥ 2") {
        writeln!(
            s,
            "{},{},{},{}",
            row.n,
            row.min_sum,
            row.n_log2_n_text(),
            row.difference_text()
        )
        .unwrap();
    }
    s
}

/// The first 24 codewords of `η+` and `λ` as CSV.
pub fn table2_csv() -> String {
    let (eta_plus, lambda) = (IntegerCode::eta_plus(), IntegerCode::lambda());
    let mut s = String::from("n,eta+,lambda\n");
    for n in 1..=24 {
        writeln!(
            s,
            "{n},{},{}",
            eta_plus.encode(n).unwrap(),
            lambda.encode(n).unwrap()
        )
        .unwrap();
    }
    s
}
