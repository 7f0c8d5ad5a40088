mod commands;
mod input;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gbcodes::{OsdMode, StopRule};

#[derive(Parser)]
#[command(name = "gbx", version, about = "Generalized-bicycle quantum codes: search, construction, decoding and LER sweeps")]
pub struct Cli {
    /// Seed for every random choice (trial streams, LER screens).
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads (default: one per core).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Write the primary output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand)]
pub enum Command {
    /// Exhaustive search over generator pairs at one ring size.
    Search(SearchArgs),
    /// Build one code from its generators.
    Build(BuildArgs),
    /// Build selected members of an extension family.
    Extend(FamilyArgs),
    /// Block-tripling family with embedding certificates.
    Scale3(ScaleArgs),
    /// Zero-insertion family.
    Scale4(Scale4Args),
    /// Minimum distance with a witness logical operator.
    Distance(DistanceArgs),
    /// Decode one syndrome pair.
    Decode(DecodeArgs),
    /// LER sweep over family members and a grid of error rates.
    Sweep(SweepArgs),
    /// Merge sweep CSVs and annotate breakeven points and crossings.
    Report(ReportArgs),
    /// The bundled base codes.
    Catalog,
}

#[derive(Args)]
pub struct SearchArgs {
    #[arg(long)]
    pub ell: usize,
    /// Cap on wt a + wt b.
    #[arg(long, default_value_t = 8)]
    pub max_weight: usize,
    /// Keep zero-dimensional codes.
    #[arg(long)]
    pub allow_zero_dim: bool,
    #[arg(long)]
    pub min_distance: Option<usize>,
    /// Error rate of the LER screen.
    #[arg(long, requires = "ler_max")]
    pub ler_p: Option<f64>,
    /// Largest LER passing the screen.
    #[arg(long, requires = "ler_p")]
    pub ler_max: Option<f64>,
    #[arg(long, default_value_t = 10_000)]
    pub ler_trials: u64,
}

#[derive(Args)]
pub struct BuildArgs {
    #[arg(long)]
    pub a: String,
    #[arg(long)]
    pub b: String,
    #[arg(long)]
    pub ell: usize,
    /// Also compute the exact distance.
    #[arg(long)]
    pub distance: bool,
    /// Include hx and hz as row bit strings.
    #[arg(long)]
    pub matrices: bool,
}

#[derive(Args)]
pub struct BaseArgs {
    /// Code or plan file providing the base code.
    #[arg(long)]
    pub base: Option<PathBuf>,
    #[arg(long)]
    pub a: Option<String>,
    #[arg(long)]
    pub b: Option<String>,
    #[arg(long)]
    pub ell: Option<usize>,
}

#[derive(Args)]
pub struct FamilyArgs {
    /// Plan file, or one of `identity`, `thm3`, `thm4:r=R,j=J`.
    #[arg(long)]
    pub plan: String,
    #[command(flatten)]
    pub base: BaseArgs,
    /// `1..5` or `1,2,3`.
    #[arg(long, default_value = "1..3")]
    pub members: String,
}

#[derive(Args)]
pub struct ScaleArgs {
    #[arg(long)]
    pub base: PathBuf,
    #[arg(long)]
    pub levels: usize,
    /// Certificate file (default: next to --out).
    #[arg(long)]
    pub certificates: Option<PathBuf>,
}

#[derive(Args)]
pub struct Scale4Args {
    #[command(flatten)]
    pub scale: ScaleArgs,
    #[arg(long)]
    pub j: usize,
    #[arg(long)]
    pub r: usize,
}

#[derive(Args)]
pub struct DistanceArgs {
    #[arg(long)]
    pub code: PathBuf,
    /// Only look below this weight.
    #[arg(long)]
    pub cap: Option<usize>,
    /// Vectors examined per sector before giving up.
    #[arg(long)]
    pub budget: Option<u64>,
}

#[derive(Args, Clone)]
pub struct DecoderArgs {
    #[arg(long, default_value_t = 40)]
    pub max_iter: usize,
    #[arg(long, default_value_t = 0.625)]
    pub ms_scale: f64,
    /// Default: the ring size of the (base) code.
    #[arg(long)]
    pub osd_order: Option<usize>,
    #[arg(long, default_value = "sweep")]
    pub osd_mode: OsdMode,
    /// Run OSD even when BP converges.
    #[arg(long)]
    pub osd_always: bool,
}

#[derive(Args)]
pub struct DecodeArgs {
    #[arg(long)]
    pub code: PathBuf,
    /// Two lines: the X-check syndrome, then the Z-check syndrome.
    #[arg(long)]
    pub syndrome: PathBuf,
    #[arg(long)]
    pub p: f64,
    #[command(flatten)]
    pub decoder: DecoderArgs,
}

#[derive(Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    #[arg(long)]
    pub p_min: f64,
    #[arg(long)]
    pub p_max: f64,
    #[arg(long)]
    pub p_step: f64,
    #[arg(long, default_value_t = 50_000)]
    pub trials: u64,
    #[arg(long, default_value_t = 1e-3)]
    pub precision: f64,
    #[arg(long, default_value = "half-width")]
    pub stop: StopRule,
    /// Pauli split `px,py,pz` of the total rate (default uniform).
    #[arg(long)]
    pub split: Option<String>,
    #[command(flatten)]
    pub decoder: DecoderArgs,
}

#[derive(Args)]
pub struct ReportArgs {
    /// Sweep CSV files.
    #[arg(required = true)]
    pub inputs: Vec<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("gbx: {e:#}");
            ExitCode::from(commands::exit_code(&e))
        }
    }
}
