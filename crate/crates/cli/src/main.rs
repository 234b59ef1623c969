//! `loidreau`: key lifecycle, distinguisher, key-recovery attack and
//! benchmark campaigns over JSON files.
//!
//! Exit codes: 0 on success, 1 on usage or input errors, 2 when an attack
//! or a decoding step fails.

mod bench;
mod commands;

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use loidreau_core::field::{FieldError, FieldSpec};
use loidreau_core::io::IoError;

#[derive(Parser)]
#[command(name = "loidreau", version, about = "Loidreau rank-metric scheme: keys, distinguisher and key recovery")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a key pair, written to PREFIX.pub.json and PREFIX.sec.json
    Keygen {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        scheme: SchemeArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output prefix
        #[arg(long, default_value = "key")]
        out: PathBuf,
    },
    /// Encrypt a plaintext file (or a random message) under a public key
    Encrypt {
        /// Public-key file
        #[arg(long = "in")]
        input: PathBuf,
        /// Plaintext file; a random message is drawn when absent
        #[arg(long)]
        msg: Option<PathBuf>,
        /// Where to store the drawn random message
        #[arg(long)]
        msg_out: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Ciphertext file (stdout when absent)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decrypt a ciphertext with the secret key
    Decrypt {
        /// Secret-key file
        #[arg(long)]
        key: PathBuf,
        /// Ciphertext file
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Frobenius-sum distinguisher on a public key or code file
    Distinguish {
        #[arg(long = "in")]
        input: PathBuf,
        /// Number of Frobenius shifts (the masking dimension)
        #[arg(long, default_value_t = 2)]
        lambda: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Recover a decryption-equivalent key from a public key or code file
    Attack {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Recovered-key file
        #[arg(long)]
        out: Option<PathBuf>,
        /// Run report (stdout when absent)
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Decrypt a ciphertext with a recovered key
    AttackDecrypt {
        /// Recovered-key file
        #[arg(long)]
        key: PathBuf,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Keygen + attack campaigns with per-stage timings
    Bench {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        scheme: SchemeArgs,
        /// Extra parameter rows as m,n,k (repeatable)
        #[arg(long = "row", value_parser = parse_row)]
        rows: Vec<(usize, usize, usize)>,
        #[arg(long, default_value_t = 10)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Quick end-to-end sanity checks
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Write a uniformly random code, useful as a non-Loidreau control
    RandomCode {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Clone, Debug)]
struct FieldArgs {
    /// Characteristic of the base field
    #[arg(long)]
    p: Option<u32>,
    /// Base field F_q has q = p^e elements
    #[arg(long)]
    e: Option<u32>,
    /// Base field order, an alternative to --p/--e
    #[arg(long)]
    q: Option<u64>,
    /// Extension degree
    #[arg(long)]
    m: Option<usize>,
    /// Monic top modulus over F_q, constant term first, comma-separated
    #[arg(long, value_delimiter = ',')]
    modulus: Option<Vec<u32>>,
}

#[derive(Args, Clone, Debug)]
struct SchemeArgs {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, default_value_t = 2)]
    lambda: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

fn parse_row(s: &str) -> Result<(usize, usize, usize), String> {
    let parts: Vec<usize> = s
        .split(',')
        .map(|x| x.trim().parse::<usize>().map_err(|e| format!("`{x}`: {e}")))
        .collect::<Result<_, _>>()?;
    match parts[..] {
        [m, n, k] => Ok((m, n, k)),
        _ => Err(format!("expected m,n,k, got `{s}`")),
    }
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Failure(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) | CliError::Failure(msg) => f.write_str(msg),
        }
    }
}

impl From<IoError> for CliError {
    fn from(e: IoError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<FieldError> for CliError {
    fn from(e: FieldError) -> Self {
        CliError::Usage(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub fn usage(msg: impl fmt::Display) -> CliError {
    CliError::Usage(msg.to_string())
}

impl FieldArgs {
    /// `(p, e)` from `--p/--e` or `--q`, defaulting to `q = 2`.
    fn base(&self) -> CliResult<(u32, u32)> {
        let explicit = (self.p.unwrap_or(2), self.e.unwrap_or(1));
        let Some(q) = self.q else { return Ok(explicit) };
        let (p, e) = prime_power(q).ok_or_else(|| usage(format!("--q {q} is not a prime power")))?;
        if self.p.is_some_and(|x| x != p) || self.e.is_some_and(|x| x != e) {
            return Err(usage(format!("--q {q} contradicts --p/--e")));
        }
        Ok((p, e))
    }

    fn spec_with_degree(&self, m: usize) -> CliResult<FieldSpec> {
        let (p, e) = self.base()?;
        Ok(FieldSpec::new(p, e, m, None, self.modulus.clone())?)
    }

    fn spec(&self) -> CliResult<FieldSpec> {
        let m = self.m.ok_or_else(|| usage("--m is required"))?;
        self.spec_with_degree(m)
    }
}

fn prime_power(q: u64) -> Option<(u32, u32)> {
    let p = (2..=q).find(|d| q % d == 0)?;
    let (mut rest, mut e) = (q, 0);
    while rest % p == 0 {
        rest /= p;
        e += 1;
    }
    (rest == 1 && p <= u32::MAX as u64).then_some((p as u32, e))
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Keygen { field, scheme, seed, out } => commands::keygen(&field, &scheme, seed, &out),
        Command::Encrypt { input, msg, msg_out, seed, out } => {
            commands::encrypt(&input, msg.as_deref(), msg_out.as_deref(), seed, out.as_deref())
        }
        Command::Decrypt { key, input, out } => commands::decrypt(&key, &input, out.as_deref()),
        Command::Distinguish { input, lambda, out } => commands::distinguish(&input, lambda, out.as_deref()),
        Command::Attack { input, seed, out, report } => {
            commands::attack(&input, seed, out.as_deref(), report.as_deref())
        }
        Command::AttackDecrypt { key, input, out } => commands::attack_decrypt(&key, &input, out.as_deref()),
        Command::Bench { field, scheme, rows, trials, seed, format, out } => {
            bench::run(&field, &scheme, &rows, trials, seed, format, out.as_deref())
        }
        Command::Selftest { seed } => commands::selftest(seed),
        Command::RandomCode { field, n, k, seed, out } => commands::random_code(&field, n, k, seed, out.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Failure(msg)) => {
            eprintln!("failure: {msg}");
            ExitCode::from(2)
        }
    }
}
