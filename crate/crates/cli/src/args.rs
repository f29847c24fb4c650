use std::path::PathBuf;

use adicscope::eigen::LadderOrder;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser, Serialize)]
#[command(name = "adicscope", version, about = "Exact analyses of ordered Bratteli-Vershik diagrams of Toeplitz type")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Build the numbered example (1..=6) instead of reading a file.
    #[arg(long, global = true, value_name = "ID")]
    pub example: Option<u8>,

    /// Depth of the built example, or truncation depth of a file.
    #[arg(long, global = true, value_name = "N")]
    pub depth: Option<usize>,

    /// Diagram file in the adic-diagram v1 format.
    #[arg(long, global = true, value_name = "PATH")]
    pub file: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    /// Write the report here instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,

    #[command(flatten)]
    pub thresholds: ThresholdArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Order {
    Sequential,
    StartLevel,
}

impl From<Order> for LadderOrder {
    fn from(o: Order) -> Self {
        match o {
            Order::Sequential => LadderOrder::Sequential,
            Order::StartLevel => LadderOrder::StartLevel,
        }
    }
}

#[derive(Debug, Args, Serialize)]
pub struct ThresholdArgs {
    /// Largest deficiency accepted on the trailing windows.
    #[arg(long, global = true, default_value_t = 0.05)]
    pub tau: f64,

    /// Number of trailing ladder windows that must stay below tau.
    #[arg(long, global = true, default_value_t = 3)]
    pub last_windows: usize,

    /// Window pairs compared by the non-increase requirement.
    #[arg(long, global = true, value_enum, default_value_t = Order::StartLevel)]
    pub ladder_order: Order,

    /// Lower bound on tower masses of a cleanliness set.
    #[arg(long, global = true, default_value_t = adicscope::measures::DEFAULT_DELTA)]
    pub delta: f64,

    /// L1 distance under which deep seed columns are merged.
    #[arg(long, global = true, default_value_t = adicscope::measures::DEFAULT_CLUSTER_TOL)]
    pub cluster_tol: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct Candidate {
    /// Denominator of the eigenvalue exp(2πi a/b).
    #[arg(long)]
    pub b: u64,
    #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
    pub a: i64,
}

#[derive(Debug, Args, Serialize)]
pub struct Window {
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub n: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum KMapSource {
    /// Dominant classes on the window given by --m/--n (default: the last two levels above depth-2).
    Extract,
    /// The class-difference map of the seven-vertex model scheme.
    Model,
    /// k ≡ 0.
    Zero,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    /// Properness checks.
    Validate,
    /// Incidence matrices per level, or the product over --m..--n.
    Matrices(#[command(flatten)] Window),
    /// Level words, or the composed words of the window --m..--n.
    Words(#[command(flatten)] Window),
    /// Tower-mass ranges over deep point-mass seeds.
    Measures {
        /// Seed uniformly on these top vertices instead of all.
        #[arg(long = "I", value_parser = parse_set)]
        set: Option<VertexSet>,
        /// Print exact rationals instead of floats.
        #[arg(long)]
        exact: bool,
    },
    /// Cleanliness sets of the detected ergodic measures.
    Clean,
    /// Candidate classification, deficiency ladder and acceptance.
    Eigen {
        #[command(flatten)]
        candidate: Candidate,
        #[arg(long = "I", value_parser = parse_set)]
        set: Option<VertexSet>,
        #[arg(long, value_parser = parse_windows)]
        windows: Option<Ladder>,
    },
    /// Dominant residue classes k(t1,t2) on one window.
    Kmap {
        #[command(flatten)]
        candidate: Candidate,
        #[command(flatten)]
        window: Window,
        #[arg(long = "I", value_parser = parse_set)]
        set: Option<VertexSet>,
    },
    /// Additive cocycle identities of p·k mod b.
    Cocycle {
        #[command(flatten)]
        candidate: Candidate,
        #[command(flatten)]
        window: Window,
        #[arg(long = "I", value_parser = parse_set)]
        set: Option<VertexSet>,
        #[arg(long, value_enum, default_value_t = KMapSource::Extract)]
        kmap: KMapSource,
    },
    /// Partition of sources by dominant class for one target.
    Psi {
        #[command(flatten)]
        candidate: Candidate,
        #[command(flatten)]
        window: Window,
        #[arg(long)]
        t2: u32,
        #[arg(long = "I", value_parser = parse_set)]
        set: Option<VertexSet>,
    },
    /// All denominators up to --b-max against each hypothesized set.
    Survey {
        #[arg(long, default_value_t = 12)]
        b_max: u64,
        /// Hypothesized cleanliness set; repeat for several measures. Defaults to the detected sets.
        #[arg(long = "I", value_parser = parse_set)]
        sets: Vec<VertexSet>,
        #[arg(long, value_parser = parse_windows)]
        windows: Option<Ladder>,
    },
    /// Successive Vershik images of a path with entrance times.
    Orbit {
        /// Top vertex of the starting minimal path.
        #[arg(long)]
        top: Option<u32>,
        /// Starting edge ranks j_2,...,j_N instead of the minimal path.
        #[arg(long, value_delimiter = ',')]
        ranks: Option<Vec<String>>,
        #[arg(long, default_value_t = 20)]
        steps: usize,
        /// Continue from the minimal path after the maximal one.
        #[arg(long)]
        wrap: bool,
    },
    /// Stabilization of sampled phase sequences.
    Converge {
        #[command(flatten)]
        candidate: Candidate,
        #[command(flatten)]
        window: Window,
        #[arg(long, default_value_t = 1)]
        t0: u32,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        stable_levels: usize,
        #[arg(long, value_enum, default_value_t = KMapSource::Extract)]
        kmap: KMapSource,
        /// Top-level tower masses are uniform on this set (default: all vertices).
        #[arg(long = "I", value_parser = parse_set)]
        set: Option<VertexSet>,
    },
    /// The built example as a diagram file, with its claims as comments.
    Example,
    /// Exceptions of each word to the class-cyclic model pattern.
    Conformance {
        #[arg(long, default_value_t = 12)]
        l_bound: u64,
    },
}

/// Comma-separated vertex labels, sorted and deduplicated.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct VertexSet(pub Vec<u32>);

/// Comma-separated `m:n` windows.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct Ladder(pub Vec<(usize, usize)>);

pub fn parse_set(s: &str) -> Result<VertexSet, String> {
    let mut out = Vec::new();
    for tok in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let v: u32 = tok.parse().map_err(|_| format!("invalid vertex '{tok}'"))?;
        if v == 0 {
            return Err("vertex labels start at 1".into());
        }
        if !out.contains(&v) {
            out.push(v);
        }
    }
    if out.is_empty() {
        return Err("empty vertex set".into());
    }
    out.sort_unstable();
    Ok(VertexSet(out))
}

pub fn parse_windows(s: &str) -> Result<Ladder, String> {
    s.split(',')
        .map(|w| {
            let (m, n) = w.trim().split_once(':').ok_or_else(|| format!("window '{w}' is not m:n"))?;
            let m: usize = m.parse().map_err(|_| format!("invalid level '{m}'"))?;
            let n: usize = n.parse().map_err(|_| format!("invalid level '{n}'"))?;
            if m >= n {
                return Err(format!("window {m}:{n} needs m < n"));
            }
            Ok((m, n))
        })
        .collect::<Result<_, _>>()
        .map(Ladder)
}
