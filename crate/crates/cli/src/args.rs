use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "robustfair", version, about = "Fault-tolerant reachability preservers and fair clustering")]
pub struct Cli {
    /// Worker threads; defaults to $ROBUSTFAIR_THREADS, then all cores.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Add wall-clock timings to the report.
    #[arg(long, global = true)]
    pub timings: bool,

    #[command(subcommand)]
    pub command: Group,
}

#[derive(Subcommand, Debug)]
pub enum Group {
    /// Dual fault-tolerant reachability preservers.
    #[command(subcommand)]
    Ftrs(FtrsCmd),
    /// Closest fair clustering and its applications.
    #[command(subcommand)]
    Fair(FairCmd),
    /// Instance generators.
    #[command(subcommand)]
    Gen(GenCmd),
    /// Brute-force reference answers for small instances.
    #[command(subcommand)]
    Oracle(OracleCmd),
}

#[derive(Args, Debug)]
pub struct Output {
    /// Write the JSON report here instead of standard output.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum FtrsCmd {
    Build {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        pairs: PathBuf,
        /// Preserver JSON destination; embedded in the report when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Run a single slack round instead of the full construction.
        #[arg(long)]
        slack: bool,
        #[command(flatten)]
        output: Output,
    },
    Verify {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        preserver: PathBuf,
        #[arg(long, conflicts_with = "samples")]
        exhaustive: bool,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Auto,
    TwoColor,
    Equal,
    General,
}

#[derive(Subcommand, Debug)]
pub enum FairCmd {
    /// Move a colored clustering to a nearby fair clustering.
    Closest {
        /// Lines `vertex cluster color`.
        #[arg(long)]
        input: PathBuf,
        /// Color ratio such as `5:3:2`; inferred from the counts when absent.
        #[arg(long)]
        ratio: Option<String>,
        #[arg(long, value_enum, default_value_t = Method::Auto)]
        method: Method,
        /// Compare against the brute-force closest fair clustering.
        #[arg(long)]
        oracle: bool,
        /// Fair clustering destination.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        output: Output,
    },
    /// Fair consensus of several clusterings.
    Consensus {
        /// Comma-separated clustering files; colors come from the first
        /// file carrying them.
        #[arg(long, value_delimiter = ',', required = true)]
        inputs: Vec<PathBuf>,
        #[arg(long)]
        ratio: Option<String>,
        #[arg(long, default_value_t = 1)]
        ell: u32,
        #[arg(long)]
        oracle: bool,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        output: Output,
    },
    /// Single-pass fair consensus over a pairwise stream.
    Stream {
        /// Lines `u v j b`.
        #[arg(long)]
        stream: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        ratio: Option<String>,
        /// Lines `vertex color`; without it vertices are colored in
        /// consecutive blocks following the ratio.
        #[arg(long)]
        colors: Option<PathBuf>,
        #[arg(long, default_value_t = 8.0)]
        g: f64,
        #[arg(long, default_value_t = 0.2)]
        eps: f64,
        #[arg(long, default_value_t = 1)]
        ell: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        output: Output,
    },
    /// Fair correlation clustering: pivot, then closest fair.
    FairfyCc {
        /// Lines `u v w_plus`.
        #[arg(long)]
        weights: PathBuf,
        #[arg(long)]
        colors: PathBuf,
        #[arg(long)]
        ratio: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        oracle: bool,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Digraph,
    Clustering,
    Stream,
    CcInstance,
}

#[derive(Subcommand, Debug)]
pub enum GenCmd {
    /// Closest fair instance built from a 3-partition instance.
    Threepartition {
        #[arg(long, value_delimiter = ',', required = true)]
        items: Vec<u64>,
        #[arg(long)]
        p: u64,
        /// Clustering destination.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        output: Output,
    },
    Random {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        n: usize,
        /// Edge probability for digraphs.
        #[arg(long, default_value_t = 0.3)]
        p: f64,
        /// Number of clusterings in a stream.
        #[arg(long, default_value_t = 3)]
        m: usize,
        /// Color ratio for clusterings; `n` must be a multiple of its total.
        #[arg(long)]
        ratio: Option<String>,
        /// Weight denominator for correlation clustering instances.
        #[arg(long, default_value_t = 4)]
        denom: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Instance destination; embedded in the report when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Subcommand, Debug)]
pub enum OracleCmd {
    ClosestFair {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        ratio: Option<String>,
        #[command(flatten)]
        output: Output,
    },
    FairConsensus {
        #[arg(long, value_delimiter = ',', required = true)]
        inputs: Vec<PathBuf>,
        #[arg(long)]
        ratio: Option<String>,
        #[arg(long, default_value_t = 1)]
        ell: u32,
        #[command(flatten)]
        output: Output,
    },
    CcOpt {
        #[arg(long)]
        weights: PathBuf,
        /// Restrict to fair clusterings of this coloring.
        #[arg(long)]
        colors: Option<PathBuf>,
        #[arg(long)]
        ratio: Option<String>,
        #[command(flatten)]
        output: Output,
    },
}
