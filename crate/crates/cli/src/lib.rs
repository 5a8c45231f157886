//! Command-line surface for the evolving 2-threshold sharing library.
//!
//! Every verb validates its flags before touching any file. Exit status is 0
//! on success, 1 on a usage error, and 2 on a data error.

use std::ffi::OsString;
use std::fs::{self, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use evoshare_core::{
    deal_init, decode_stream, kraft_sum, metric_scan, min_sum, recover, BitString, DealerState,
    ExactRational, IntegerCode, TailCertificate,
};

mod error;
pub mod format;

pub use error::CliError;
use format::{report_line, table1_csv, table2_csv, ShareLine, StateFile};

#[derive(Parser, Debug)]
#[command(
    name = "evoshare",
    version,
    about = "Evolving 2-threshold secret sharing from prefix codes of integers"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct CodeArg {
    /// Code id: iota, eta, iota+, eta+, lambda, balanced(<n>), split(<code>,<i1,...>)
    #[arg(long)]
    code: String,
}

impl CodeArg {
    fn parse(&self) -> Result<IntegerCode, CliError> {
        Ok(self.code.parse()?)
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the codeword of index n.
    Encode {
        #[command(flatten)]
        code: CodeArg,
        #[arg(long)]
        n: u64,
    },
    /// Split a concatenation of codewords into indices.
    Decode {
        #[command(flatten)]
        code: CodeArg,
        #[arg(long)]
        bits: String,
        /// Maximum number of indices to decode.
        #[arg(long, default_value_t = usize::MAX)]
        limit: usize,
    },
    /// Print the codeword lengths L(1..=upto).
    Lengths {
        #[command(flatten)]
        code: CodeArg,
        #[arg(long)]
        upto: u64,
    },
    /// Print the Kraft sum of the first n codewords.
    Kraft {
        #[command(flatten)]
        code: CodeArg,
        #[arg(long)]
        n: u64,
    },
    /// Deal shares for parties 1..=parties to a file.
    Deal {
        #[arg(long)]
        secret: u8,
        #[command(flatten)]
        code: CodeArg,
        /// Pad seed; drawn from the OS entropy source when omitted.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        parties: u64,
        #[arg(long)]
        out: PathBuf,
        /// Also write a dealer state file for later `share` calls.
        #[arg(long)]
        state: Option<PathBuf>,
        /// Use an all-zero pad (shares reveal the secret). Requires --insecure.
        #[arg(long)]
        pad_zero: bool,
        #[arg(long)]
        insecure: bool,
    },
    /// Issue one more share from a dealer state file.
    Share {
        #[arg(long)]
        state: PathBuf,
        #[arg(long)]
        t: u64,
        /// Append the share line to this file as well as printing it.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        insecure: bool,
    },
    /// Recover the secret from the first two share lines of a file.
    Recover {
        #[arg(long)]
        shares: PathBuf,
    },
    /// Print nm + 2l, the least total share size of a (2,n) scheme.
    Minsum {
        #[arg(long)]
        n: u64,
    },
    /// Print the nm + 2l versus n·log2(n) comparison table.
    Table1,
    /// Print the first 24 codewords of eta+ and lambda.
    Table2,
    /// Scan ratio(n) for 2 ≤ n ≤ nmax and report the maximum.
    Metric {
        #[command(flatten)]
        code: CodeArg,
        #[arg(long)]
        nmax: u64,
    },
    /// Check a tail bound L(t) ≤ a + b⌊log2(t−c)⌋ and its closure at m0.
    Certify {
        #[command(flatten)]
        code: CodeArg,
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
        #[arg(long)]
        c: u64,
        #[arg(long)]
        t0: u64,
        #[arg(long)]
        m0: u32,
        #[arg(long = "K")]
        k: String,
    },
}

/// Runs one command line, writing results to `out` and diagnostics to `err`.
/// Returns the process exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = write!(out, "{e}");
            return 0;
        }
        Err(e) => {
            let msg = e.to_string();
            let first = msg.lines().next().unwrap_or("usage error");
            let _ = writeln!(err, "{first}");
            return 1;
        }
    };
    match execute(cli.command, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn rational(flag: &str, value: &str) -> Result<ExactRational, CliError> {
    value
        .parse()
        .map_err(|e| CliError::Usage(format!("--{flag}: {e}")))
}

fn io_err(path: &Path, e: std::io::Error) -> CliError {
    CliError::Data(format!("{}: {e}", path.display()))
}

fn write_state(path: &Path, state: &DealerState) -> Result<(), CliError> {
    fs::write(path, StateFile::from_state(state).render()).map_err(|e| io_err(path, e))
}

fn execute(command: Command, out: &mut dyn Write) -> Result<(), CliError> {
    match command {
        Command::Encode { code, n } => {
            let code = code.parse()?;
            writeln!(out, "{}", code.encode(n)?)?;
        }
        Command::Decode { code, bits, limit } => {
            let code = code.parse()?;
            let bits: BitString = bits
                .parse()
                .map_err(|e| CliError::Usage(format!("--bits: {e}")))?;
            let indices = decode_stream(&code, &bits, limit)?;
            let text: Vec<String> = indices.iter().map(u64::to_string).collect();
            writeln!(out, "{}", text.join(" "))?;
        }
        Command::Lengths { code, upto } => {
            let code = code.parse()?;
            let lengths = (1..=upto)
                .map(|t| code.length(t).map(|l| l.to_string()))
                .collect::<Result<Vec<_>, _>>()?;
            writeln!(out, "{}", lengths.join(" "))?;
        }
        Command::Kraft { code, n } => {
            let code = code.parse()?;
            writeln!(out, "kraft={}", kraft_sum(&code, n)?.display_with_decimal())?;
        }
        Command::Deal {
            secret,
            code,
            seed,
            parties,
            out: path,
            state,
            pad_zero,
            insecure,
        } => {
            let code = code.parse()?;
            if pad_zero && !insecure {
                return Err(CliError::Usage(
                    "--pad-zero makes shares reveal the secret; pass --insecure to allow it".into(),
                ));
            }
            if let Some(capacity) = code.capacity() {
                if parties > capacity {
                    return Err(CliError::Usage(format!(
                        "code {} has only {capacity} codewords",
                        code.id()
                    )));
                }
            }
            let mut dealer = if pad_zero {
                DealerState::insecure_zero_pad(secret, code)?
            } else {
                deal_init(secret, code, seed.unwrap_or_else(rand::random))?
            };
            let mut text = String::new();
            for t in 1..=parties {
                let share = dealer.share_for(t)?;
                let line = ShareLine {
                    code_id: dealer.code().id(),
                    share,
                };
                text.push_str(&line.render());
                text.push('\n');
            }
            fs::write(&path, text).map_err(|e| io_err(&path, e))?;
            if let Some(state) = state {
                write_state(&state, &dealer)?;
            }
        }
        Command::Share {
            state: path,
            t,
            out: share_out,
            insecure,
        } => {
            if t == 0 {
                return Err(CliError::Usage("--t: party indices start at 1".into()));
            }
            let text = fs::read_to_string(&path).map_err(|e| io_err(&path, e))?;
            let file = StateFile::parse(&text)?;
            if file.seed.is_none() && !insecure {
                return Err(CliError::Usage(
                    "state uses an all-zero pad; pass --insecure to continue".into(),
                ));
            }
            let mut dealer = file.restore()?;
            let share = dealer.share_for(t)?;
            let line = ShareLine {
                code_id: dealer.code().id(),
                share,
            }
            .render();
            if let Some(share_out) = share_out {
                let mut f = OpenOptions::new()
                    .create(true)
                    .append(true)
                    .open(&share_out)
                    .map_err(|e| io_err(&share_out, e))?;
                writeln!(f, "{line}").map_err(|e| io_err(&share_out, e))?;
            }
            write_state(&path, &dealer)?;
            writeln!(out, "{line}")?;
        }
        Command::Recover { shares } => {
            let text = fs::read_to_string(&shares).map_err(|e| io_err(&shares, e))?;
            let lines: Vec<ShareLine> = text
                .lines()
                .filter(|l| !l.trim().is_empty())
                .take(2)
                .map(ShareLine::parse)
                .collect::<Result<_, _>>()?;
            let [a, b] = lines.as_slice() else {
                return Err(CliError::Data(format!(
                    "{}: need two share lines",
                    shares.display()
                )));
            };
            if a.code_id != b.code_id {
                return Err(CliError::Data(format!(
                    "shares come from different codes: {} and {}",
                    a.code_id, b.code_id
                )));
            }
            let code: IntegerCode = a
                .code_id
                .parse()
                .map_err(|e| CliError::Data(format!("{e}")))?;
            for line in [a, b] {
                let expected = code
                    .length(line.share.party_index)
                    .map_err(|e| CliError::Data(e.to_string()))?;
                if line.share.payload.len() != expected {
                    return Err(CliError::Data(format!(
                        "share for party {} has {} bits, code {} requires {expected}",
                        line.share.party_index,
                        line.share.payload.len(),
                        a.code_id
                    )));
                }
            }
            let secret = recover(&a.share, &b.share).map_err(|e| CliError::Data(e.to_string()))?;
            writeln!(out, "secret={secret}")?;
        }
        Command::Minsum { n } => {
            writeln!(out, "{}", min_sum(n)?)?;
        }
        Command::Table1 => write!(out, "{}", table1_csv())?,
        Command::Table2 => write!(out, "{}", table2_csv())?,
        Command::Metric { code, nmax } => {
            let code = code.parse()?;
            let mut report = metric_scan(&code, nmax)?;
            if let Some(cert) = TailCertificate::known(&code) {
                report = report.with_tail(&code, cert)?;
            }
            writeln!(out, "{}", report_line(&report))?;
        }
        Command::Certify {
            code,
            a,
            b,
            c,
            t0,
            m0,
            k,
        } => {
            let code = code.parse()?;
            let cert = TailCertificate {
                a: rational("a", &a)?,
                b: rational("b", &b)?,
                c,
                t0,
                m0,
                claimed_k: rational("K", &k)?,
            };
            let verdict = if cert.verify(&code)? { "ok" } else { "fail" };
            writeln!(out, "{verdict}")?;
        }
    }
    Ok(())
}
