use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "sievecalc", version, about = "Verification toolkit for a sieve lower bound on ‖αp²+βp+γ‖ < p^(−ρ)")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Global {
    /// σ = ρ − 1/6 as an exact rational such as 1/105 (default 1/105).
    #[arg(long, global = true, conflicts_with = "rho")]
    pub sigma: Option<String>,
    /// ρ as an exact rational such as 37/210.
    #[arg(long, global = true)]
    pub rho: Option<String>,
    /// Accuracy target: quadrature tolerance for integrals (default 1e-7),
    /// absolute ω accuracy for buchstab (default 1e-9).
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Range of the large prime in the linear-sieve correction.
    #[arg(long, global = true, value_enum, default_value_t = J9Arg::I6)]
    pub j9: J9Arg,
    /// Transcription of the integration regions.
    #[arg(long, global = true, value_enum, default_value_t = ReadingArg::Reconstructed)]
    pub reading: ReadingArg,
    /// Endpoints of the two-prime sieve-range integral.
    #[arg(long, global = true, value_enum, default_value_t = J8Arg::Repaired)]
    pub j8: J8Arg,
    /// Emit JSON: to stdout when given bare, to PATH when given a value (text
    /// then still goes to stdout). Place it after the subcommand when bare.
    #[arg(long, global = true, value_name = "PATH", num_args = 0..=1)]
    pub json: Option<Option<PathBuf>>,
    /// Cap on worker threads.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Enumeration cap (overrides SIEVECALC_BUDGET).
    #[arg(long, global = true)]
    pub budget: Option<String>,
    /// Write the report to this file instead of stdout.
    #[arg(long, short = 'o', global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum J9Arg {
    I6,
    I7,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReadingArg {
    Printed,
    Reconstructed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum J8Arg {
    Repaired,
    Printed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SearchModeArg {
    /// ‖αp²+βp+γ‖ < p^(−ρ) over primes p ≤ nmax.
    Power,
    /// The sieved set 𝒜 in (N/2, N] with the convergent a/q and δ = 1/L1.
    SetA,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Derived exponents and the interval system.
    Params,
    /// Every exponent inequality of the verification chains.
    Ledger {
        /// Only constraints whose id starts with this prefix.
        #[arg(long)]
        filter: Option<String>,
    },
    /// Buchstab's ω on a list or a grid of points.
    Buchstab {
        /// Points to evaluate (repeatable).
        #[arg(long = "t")]
        t: Vec<f64>,
        /// Grid start.
        #[arg(long)]
        from: Option<f64>,
        /// Grid end.
        #[arg(long)]
        to: Option<f64>,
        /// Grid step.
        #[arg(long, default_value_t = 0.5)]
        step: f64,
        /// Write every table node `(t, ω(t))` as CSV.
        #[arg(long, value_name = "PATH")]
        dump: Option<PathBuf>,
    },
    /// The sieve integrals, their printed bounds and the final sum.
    Integrals {
        /// Evaluate a single integral (J1_4D, J1 … J8, J9_I6, J9_I7).
        #[arg(long)]
        id: Option<String>,
    },
    /// Ledger, ω checks, integrals and the final sum in one report.
    VerifyAll,
    /// Primes with ‖αp²+βp+γ‖ below a threshold.
    Search {
        /// sqrt<k>, golden, a decimal literal, or a path to a file of digits.
        #[arg(long, default_value = "sqrt2")]
        alpha: String,
        /// Decimal digits for named constants (default: enough for nmax).
        #[arg(long)]
        alpha_digits: Option<u32>,
        /// Exact decimal β.
        #[arg(long, default_value = "0")]
        beta: String,
        /// Exact decimal γ.
        #[arg(long, default_value = "0")]
        gamma: String,
        /// Search limit (accepts 1e6).
        #[arg(long, default_value = "1e6")]
        nmax: String,
        /// ε of the sieved-set parameters.
        #[arg(long, default_value = "1/1000")]
        epsilon: String,
        #[arg(long, value_enum, default_value_t = SearchModeArg::Power)]
        mode: SearchModeArg,
        /// Write hits as CSV `p,value,threshold`.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Exact Buchstab and decomposition identities on test sets.
    Identity {
        /// N of the default test set (N/2, N].
        #[arg(long, default_value_t = 1000)]
        n: u64,
        /// Random subsets of [1, N] to check in addition.
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Representation counts R(n) of ℓ1y1² − ℓ2y2² = n.
    Spectrum {
        #[arg(long = "L", default_value_t = 16)]
        l: u64,
        #[arg(long = "Y", default_value_t = 16)]
        y: u64,
        /// Include every R(n) in the output.
        #[arg(long)]
        full: bool,
    },
    /// Type I or Type II exponential sums.
    Typesum {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2), default_value_t = 1)]
        kind: u8,
        #[arg(long, default_value = "1e5")]
        n: String,
        /// Dyadic base V (default N^0.2).
        #[arg(long = "V")]
        v: Option<f64>,
        /// Dyadic base W (default N^0.2).
        #[arg(long = "W")]
        w: Option<f64>,
        /// Dyadic base Y (default N^0.4).
        #[arg(long = "Y")]
        y: Option<f64>,
        /// Coefficient range L (default ⌊N^(ρ−ε/3)⌋).
        #[arg(long = "L")]
        l: Option<u64>,
        #[arg(long, default_value = "sqrt2")]
        alpha: String,
        /// Largest convergent denominator (default L1^(1/2) N).
        #[arg(long)]
        q_max: Option<u64>,
        #[arg(long, default_value_t = 0.0)]
        beta: f64,
        #[arg(long, default_value_t = 0.0)]
        gamma: f64,
        #[arg(long, default_value = "1/1000")]
        epsilon: String,
        /// Seed of the ±1 coefficients (Type II).
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Subproduct selection: a subset of the exponents summing into [g, f].
    Subproduct {
        /// Comma-separated exponents in descending order, e.g. 0.2,0.15,0.1.
        #[arg(long)]
        rhos: String,
        #[arg(long)]
        g: String,
    },
}
