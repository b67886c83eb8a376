use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "impnet",
    version,
    about = "Two-point impedance and LC resonances of R/L/C networks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Impedance between two nodes at one frequency.
    Impedance {
        #[command(flatten)]
        input: NetlistInput,
        #[command(flatten)]
        freq: Frequency,
        #[command(flatten)]
        pair: Pair,
        #[command(flatten)]
        out: Output,
        #[command(flatten)]
        tol: Tolerances,
    },
    /// Impedance and smallest nontrivial σ over a frequency grid (CSV by default).
    Sweep {
        #[command(flatten)]
        input: NetlistInput,
        #[command(flatten)]
        pair: Pair,
        #[command(flatten)]
        range: Range,
        /// Evenly spaced grid instead of logarithmic.
        #[arg(long)]
        linear: bool,
        /// Output format.
        #[arg(long, value_enum, default_value_t = SweepFormat::Csv)]
        format: SweepFormat,
        #[command(flatten)]
        tol: Tolerances,
    },
    /// Resonance frequencies: numerical scan of a netlist, or the closed form for an LC grid.
    Resonances {
        /// Netlist to scan ('-' reads standard input).
        #[arg(required_unless_present = "grid", conflicts_with = "grid")]
        netlist: Option<PathBuf>,
        /// Closed-form spectrum of a free MxN LC grid instead of a scan.
        #[arg(long, value_name = "MxN", value_parser = parse_dims)]
        grid: Option<(usize, usize)>,
        #[arg(long, default_value_t = 1.0, requires = "grid")]
        inductance: f64,
        #[arg(long, default_value_t = 1.0, requires = "grid")]
        capacitance: f64,
        #[command(flatten)]
        range: Range,
        /// Report coarse grid minima without golden-section refinement.
        #[arg(long)]
        no_refine: bool,
        #[command(flatten)]
        out: Output,
        #[command(flatten)]
        tol: Tolerances,
    },
    /// Print the netlist of a ring, grid or seeded random network.
    Generate {
        #[command(flatten)]
        shape: Shape,
        /// Ring element impedance as "re,im".
        #[arg(long, value_parser = parse_complex, default_value = "1,0")]
        z: (f64, f64),
        /// Inductance of the grid branches along the second dimension.
        #[arg(long, default_value_t = 1.0)]
        inductance: f64,
        /// Capacitance of the grid branches along the first dimension.
        #[arg(long, default_value_t = 1.0)]
        capacitance: f64,
        /// Wrap the grid into a torus.
        #[arg(long, requires = "grid")]
        toroidal: bool,
        /// Seed for --random.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Branches added to the random spanning tree (default: node count).
        #[arg(long, requires = "random")]
        extra: Option<usize>,
    },
    /// Compare the spectral impedances with a direct grounded LU solve.
    Check {
        #[command(flatten)]
        input: NetlistInput,
        #[command(flatten)]
        freq: Frequency,
        /// Restrict the comparison to one pair (default: all pairs).
        #[arg(long, num_args = 2, value_names = ["P", "Q"])]
        pair: Option<Vec<usize>>,
        #[command(flatten)]
        out: Output,
        #[command(flatten)]
        tol: Tolerances,
    },
}

#[derive(Debug, Args)]
pub struct NetlistInput {
    /// Netlist file ('-' reads standard input).
    pub netlist: PathBuf,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct Frequency {
    /// Angular frequency in rad/s.
    #[arg(long)]
    pub omega: Option<f64>,
    /// Frequency in Hz (converted as ω = 2πf).
    #[arg(long)]
    pub freq: Option<f64>,
}

#[derive(Debug, Args)]
pub struct Pair {
    /// Node pair, 1-based.
    #[arg(long, num_args = 2, value_names = ["P", "Q"], required = true)]
    pub pair: Vec<usize>,
}

#[derive(Debug, Args)]
pub struct Range {
    /// Lower end of the angular frequency range.
    #[arg(long, default_value_t = 0.1)]
    pub omega_min: f64,
    /// Upper end of the angular frequency range.
    #[arg(long, default_value_t = 10.0)]
    pub omega_max: f64,
    /// Number of grid points.
    #[arg(long, default_value_t = 400)]
    pub points: usize,
}

#[derive(Debug, Args)]
pub struct Output {
    #[arg(long, value_enum, default_value_t = Format::Human)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepFormat {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct Tolerances {
    /// Modes with σ ≤ tol·σ_max count as zero modes.
    #[arg(long)]
    pub zero_rel_tol: Option<f64>,
    /// Relative σ gap below which modes are treated as degenerate.
    #[arg(long)]
    pub degeneracy_rel_tol: Option<f64>,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct Shape {
    /// Ring of N identical impedances.
    #[arg(long, value_name = "N")]
    pub ring: Option<usize>,
    /// MxN LC grid.
    #[arg(long, value_name = "MxN", value_parser = parse_dims)]
    pub grid: Option<(usize, usize)>,
    /// Connected random R/L/C network with N nodes.
    #[arg(long, value_name = "N")]
    pub random: Option<usize>,
}

fn parse_dims(s: &str) -> Result<(usize, usize), String> {
    let (m, n) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("expected MxN, got '{s}'"))?;
    let parse = |t: &str| {
        t.trim()
            .parse::<usize>()
            .map_err(|e| format!("bad dimension '{t}': {e}"))
    };
    Ok((parse(m)?, parse(n)?))
}

fn parse_complex(s: &str) -> Result<(f64, f64), String> {
    let (re, im) = s.split_once(',').unwrap_or((s, "0"));
    let parse = |t: &str| {
        t.trim()
            .parse::<f64>()
            .map_err(|e| format!("bad number '{t}': {e}"))
    };
    Ok((parse(re)?, parse(im)?))
}
