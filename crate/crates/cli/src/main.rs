//! `zonekit`: command-line front end for sequence generation, pattern
//! checks, configuration search and zone transcription.

mod commands;
mod manifest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use zonekit::hs::HsError;
use zonekit::patterns::PatternError;

#[derive(Parser)]
#[command(name = "zonekit", version, about)]
struct Cli {
    /// Write the run manifest here instead of next to the first output file.
    #[arg(long, global = true)]
    manifest: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Hart–Sharir sequences.
    #[command(subcommand)]
    Hs(HsCmd),
    /// Sequence checks and conversions.
    #[command(subcommand)]
    Seq(SeqCmd),
    /// Extremal lengths by exhaustive search.
    #[command(subcommand)]
    Ex(ExCmd),
    /// Segment configurations.
    #[command(subcommand)]
    Config(ConfigCmd),
    /// Searches for coordinates realizing a configuration.
    #[command(subcommand)]
    Realize(RealizeCmd),
    /// Exact checks of the parabola lemmas.
    #[command(subcommand)]
    Geom(GeomCmd),
    /// Zone transcription of a chord arrangement.
    #[command(subcommand)]
    Zone(ZoneCmd),
    /// Coordinate maps.
    #[command(subcommand)]
    Map(MapCmd),
}

#[derive(Subcommand)]
pub enum HsCmd {
    /// Generates S_k(m).
    Gen(HsGen),
}

#[derive(Args)]
pub struct HsGen {
    #[arg(long)]
    pub k: u32,
    #[arg(long)]
    pub m: u64,
    /// Refuse to materialize more tokens than this.
    #[arg(long, default_value_t = zonekit::hs::DEFAULT_BUDGET)]
    pub budget: u128,
    #[arg(long, conflicts_with = "text")]
    pub json: bool,
    /// Compact text with blocks in parentheses (the default).
    #[arg(long)]
    pub text: bool,
    /// Run the invariant suite on the result.
    #[arg(long)]
    pub verify: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand)]
pub enum SeqCmd {
    /// Looks for a forbidden pattern.
    Check(SeqCheck),
    /// Prints the endpoint sequence E(u).
    Endpoints(SeqEndpoints),
}

#[derive(Args)]
pub struct SeqCheck {
    /// Sequence in text or JSON form.
    #[arg(long)]
    pub input: PathBuf,
    /// `ababa`, `abcaccbc` or `file:PATH`.
    #[arg(long)]
    pub pattern: String,
    /// Require blocks of the pattern to map into blocks of the input.
    #[arg(long)]
    pub structural: bool,
    #[arg(long, default_value_t = zonekit::patterns::DEFAULT_STEP_BUDGET)]
    pub steps: u64,
}

#[derive(Args)]
pub struct SeqEndpoints {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub json: bool,
}

#[derive(Subcommand)]
pub enum ExCmd {
    /// Longest sequence on n symbols avoiding every forbidden pattern.
    Brute(ExBrute),
}

#[derive(Args)]
pub struct ExBrute {
    #[arg(long)]
    pub n: usize,
    /// Pattern files, comma separated or repeated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub forbidden: Vec<PathBuf>,
}

#[derive(Subcommand)]
pub enum ConfigCmd {
    /// Builds a named configuration and writes it as JSON.
    Build(ConfigBuild),
}

#[derive(Clone, Copy, ValueEnum)]
pub enum KindArg {
    #[value(name = "X")]
    X,
    #[value(name = "T")]
    T,
    #[value(name = "Tj")]
    Tj,
    #[value(name = "Z")]
    Z,
    #[value(name = "Zj")]
    Zj,
    #[value(name = "Y")]
    Y,
    #[value(name = "YF")]
    Yf,
    #[value(name = "F")]
    F,
    #[value(name = "thm31")]
    Thm31,
}

#[derive(Args)]
pub struct ConfigBuild {
    #[arg(long, value_enum)]
    pub kind: KindArg,
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long)]
    pub j: Option<usize>,
    #[arg(long)]
    pub m: Option<usize>,
    /// For F: also require the numeric group to be wide.
    #[arg(long)]
    pub wide: bool,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Subcommand)]
pub enum RealizeCmd {
    /// Seeded randomized search with exact verification.
    Search(RealizeSearch),
}

#[derive(Args)]
pub struct RealizeSearch {
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long)]
    pub budget: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Restrict to these strategies (default: all three).
    #[arg(long, value_delimiter = ',')]
    pub strategy: Vec<String>,
    /// Spend the whole budget even after a realization is found.
    #[arg(long)]
    pub exhaust: bool,
    /// Worker threads; the report does not depend on this.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Subcommand)]
pub enum GeomCmd {
    /// Checks one lemma on the given coordinates.
    Check(GeomCheck),
}

#[derive(Clone, Copy, ValueEnum)]
pub enum Lemma {
    ParabolaRatio,
    Ratios,
    WideFan,
}

#[derive(Args)]
pub struct GeomCheck {
    #[arg(long, value_enum)]
    pub lemma: Lemma,
    /// JSON: four x-coordinates for `parabola-ratio`, chords otherwise.
    #[arg(long)]
    pub coords: PathBuf,
}

#[derive(Subcommand)]
pub enum ZoneCmd {
    /// Builds the arrangement and walks the zone.
    Run(ZoneRun),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Emit {
    Sprime,
    S,
    Envelope,
    Complexity,
    Svg,
}

#[derive(Args)]
pub struct ZoneRun {
    /// JSON list of `[p, q]` pairs, or CSV with one `p,q` per line.
    #[arg(long)]
    pub chords: PathBuf,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "s")]
    pub emit: Vec<Emit>,
    #[arg(long)]
    pub json: bool,
    /// Where to write the SVG; printed to stdout if omitted.
    #[arg(long)]
    pub svg_out: Option<PathBuf>,
}

#[derive(Subcommand)]
pub enum MapCmd {
    /// Sends unit-circle points to the parabola.
    CircleToParabola(MapCircle),
}

#[derive(Args)]
pub struct MapCircle {
    /// JSON list of `[x, y]` points on the unit circle.
    #[arg(long, required_unless_present = "t")]
    pub points: Option<PathBuf>,
    /// Circle parameters `t`, mapped through the rational parametrization.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub t: Vec<String>,
}

/// Exit status for a failed run: 3 when a budget or size limit stopped
/// it, 1 for every other domain error.
fn exit_code(err: &anyhow::Error) -> u8 {
    let budget = err.chain().any(|e| {
        matches!(e.downcast_ref::<HsError>(), Some(HsError::BudgetExceeded(_)))
            || matches!(
                e.downcast_ref::<PatternError>(),
                Some(PatternError::StepBudget(_) | PatternError::TooLarge { .. })
            )
            || e.downcast_ref::<commands::BudgetExceeded>().is_some()
    });
    if budget {
        3
    } else {
        1
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli.command, cli.manifest.as_deref()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
