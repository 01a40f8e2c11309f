use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "prime-avoid", version, about = "Construct and verify prime-avoiding numbers")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a construction and emit its certificate.
    Construct(ConstructArgs),
    /// Re-check a certificate.
    Verify(VerifyArgs),
    /// Compare the Brun upper bound with sifted counts over a parameter grid.
    BenchSieve(BenchArgs),
    /// Count prime rows and prime-avoiding rows of the k-th power matrix.
    MatrixScan(MatrixArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Squarefree,
    Kpower,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OnOff {
    On,
    Off,
}

#[derive(Debug, Clone, Args)]
pub struct ConstructArgs {
    #[arg(long, value_enum)]
    pub mode: ModeArg,
    #[arg(long)]
    pub x: f64,
    /// Power k (kpower mode only; defaults to 2).
    #[arg(long)]
    pub k: Option<u32>,
    #[arg(long, default_value = "practical", value_parser = ["literal", "practical", "explicit"])]
    pub profile: String,
    #[arg(long)]
    pub z: Option<f64>,
    #[arg(long)]
    pub y: Option<u64>,
    #[arg(long)]
    pub c1: Option<f64>,
    #[arg(long)]
    pub c2: Option<f64>,
    #[arg(long)]
    pub delta: Option<f64>,
    /// Drop the congruences on primes up to x that no offset needs (kpower).
    #[arg(long, value_enum)]
    pub reduced_modulus: Option<OnOff>,
    /// Keep y fixed instead of halving it when primes run short.
    #[arg(long)]
    pub no_autoshrink: bool,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub max_steps: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    pub path: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct BenchArgs {
    /// Size X of the sifted range [1, X].
    #[arg(long, default_value_t = 100_000)]
    pub range: u64,
    /// Sieving level: primes below z are sifted.
    #[arg(long, default_value_t = 50.0)]
    pub z: f64,
    /// Schedule x used to split primes into classes.
    #[arg(long, default_value_t = 10_000.0)]
    pub x: f64,
    #[arg(long, default_value_t = 2)]
    pub k: u32,
    #[arg(long, value_delimiter = ',', default_value = "0.1,0.15,0.2,0.25")]
    pub lambdas: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "1,2")]
    pub bs: Vec<u32>,
    #[arg(long, value_delimiter = ',', default_value = "2,3")]
    pub kappas: Vec<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub sieve_c: f64,
    #[arg(long, default_value_t = 1.0)]
    pub error_constant: f64,
    /// Sift nothing: every residue class is allowed.
    #[arg(long)]
    pub omega_zero: bool,
}

#[derive(Debug, Clone, Args)]
pub struct MatrixArgs {
    #[arg(long)]
    pub certificate: PathBuf,
    #[arg(long)]
    pub rows: u64,
    /// Overrides the certificate's seed for primality tests.
    #[arg(long)]
    pub seed: Option<u64>,
}
