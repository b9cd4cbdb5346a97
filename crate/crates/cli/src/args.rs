use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "progvc",
    version,
    about = "Shattering and VC-dimension checks for generalized progressions in the Heisenberg group and free groups"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug)]
pub struct GlobalOpts {
    /// Report format. CSV is only offered for flat tables.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    /// Worker threads for parallel library calls.
    #[arg(long, global = true, env = "PROGVC_THREADS")]
    pub threads: Option<usize>,

    /// JSON object of flag values; flags given on the command line win.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Seed for randomized commands; echoed in every report.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Progressions P(N1, N2) in the Heisenberg group.
    #[command(subcommand)]
    Heisenberg(HeisenbergCmd),
    /// Bound functions and the Heisenberg threshold inequalities.
    #[command(subcommand)]
    Bounds(BoundsCmd),
    /// Translated progressions in the free group F_k.
    #[command(subcommand)]
    Free(FreeCmd),
    /// Explicit finite set systems read from JSON.
    #[command(subcommand)]
    Setsystem(SetSystemCmd),
}

#[derive(Subcommand, Debug)]
pub enum HeisenbergCmd {
    /// Compare the closed-form membership test with BFS enumeration for all
    /// N1, N2 ≤ nmax.
    Verify {
        #[arg(long)]
        nmax: u32,
        /// Negative control: flip one membership answer.
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
    /// Membership of a point `a,b,c` in gP(N1, N2).
    Member {
        #[arg(long)]
        n1: String,
        #[arg(long)]
        n2: String,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        #[arg(long, allow_hyphen_values = true)]
        translate: Option<String>,
    },
    /// All points of P(N1, N2).
    Enumerate {
        #[arg(long)]
        n1: u32,
        #[arg(long)]
        n2: u32,
    },
    /// A word with at most N1 A-letters and N2 B-letters evaluating to a point.
    Witness {
        #[arg(long)]
        n1: u64,
        #[arg(long)]
        n2: u64,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    /// Heuristic shattering search over a bounded window of translates.
    Shatter {
        #[arg(long)]
        experimental: bool,
        #[arg(long)]
        translate_window: Option<u32>,
        #[arg(long)]
        n1: u64,
        #[arg(long)]
        n2: u64,
        /// Points `a,b,c` separated by `;`.
        #[arg(long, allow_hyphen_values = true)]
        points: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum BoundsCmd {
    /// Σ_{i≤d} C(n, i).
    Cd {
        #[arg(long)]
        d: u64,
        #[arg(long)]
        n: u64,
    },
    /// Least n with 𝔠_d(n)^k < 2^n.
    F {
        #[arg(long)]
        d: u64,
        #[arg(long)]
        k: u64,
    },
    /// k·(least n with k·𝔠_d(n) < 2^n, minus 1).
    G {
        #[arg(long)]
        d: u64,
        #[arg(long)]
        k: u64,
    },
    /// d(2d−1)^{l−1}·Σ_{i≤l} 2^i C(s·n, i).
    Km {
        #[arg(long)]
        d: u64,
        #[arg(long)]
        l: u64,
        #[arg(long)]
        s: u64,
        #[arg(long)]
        n: u64,
    },
    /// Reproduce both Heisenberg threshold inequalities.
    VerifyHeisenberg,
}

#[derive(Subcommand, Debug)]
pub enum FreeCmd {
    /// Decide whether translated progressions shatter a point set.
    Shatter {
        #[arg(long)]
        k: u32,
        /// Words such as `2^5*1^3`, separated by commas.
        #[arg(long, allow_hyphen_values = true)]
        points: String,
        #[arg(long, default_value_t = progvc_core::freegroup::DEFAULT_FREE_SHATTER_CAP)]
        cap: usize,
    },
    /// Check the shipped rank-2 four-point example.
    ExampleF2 {
        /// Alternative fixture file with the same layout.
        #[arg(long)]
        fixture: Option<PathBuf>,
    },
    /// Sample random point sets and report any that are shattered.
    Search {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        size: usize,
        #[arg(long)]
        samples: u64,
        #[arg(long, default_value_t = 12)]
        max_len: usize,
    },
    /// The translate cutting a chosen subset out of the generators.
    Witness {
        #[arg(long)]
        k: u32,
        /// One bound per generator, comma separated.
        #[arg(long)]
        bounds: String,
        /// Generator indices, comma separated; empty for the empty subset.
        #[arg(long, default_value = "")]
        subset: String,
    },
    /// Look for a vertex splitting the set into three equal branches.
    Tripod {
        #[arg(long)]
        k: u32,
        #[arg(long, allow_hyphen_values = true)]
        points: String,
        /// Points per branch; defaults to k.
        #[arg(long)]
        arm: Option<usize>,
    },
}

#[derive(Subcommand, Debug)]
pub enum SetSystemCmd {
    /// Exact VC dimension.
    Vc {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = progvc_core::setsystem::DEFAULT_SHATTER_CAP)]
        cap: usize,
    },
    /// Whether the family shatters a set of ground labels.
    Shatter {
        #[arg(long)]
        input: PathBuf,
        /// Ground labels, comma separated.
        #[arg(long)]
        target: String,
    },
    /// Shatter function values.
    Pi {
        #[arg(long)]
        input: PathBuf,
        /// A single n; all n up to the ground size when omitted.
        #[arg(long)]
        n: Option<usize>,
    },
}
