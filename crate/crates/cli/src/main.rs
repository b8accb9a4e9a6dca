use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use commchar_cli::{import_gml, run, CliError, OutputFormat, RunConfig, Stage};
use commchar_core::{DetectParams, EstimatorParams, SweepRule};

#[derive(Parser)]
#[command(
    name = "commchar",
    version,
    about = "Characterize network communities with dominating sets"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Find communities by personalized PageRank sweeps.
    Detect(RunArgs),
    /// Greedy internal and external dominating sets.
    Domsets(RunArgs),
    /// Internal and external slopes.
    Slopes(RunArgs),
    /// Per-community APL, diameter and clustering, plus network clustering.
    Metrics(RunArgs),
    /// Keyword lists and predictions for papers without keywords.
    Keywords(RunArgs),
    /// Full characterization of a given community list.
    Report(RunArgs),
    /// Detection (unless --communities is given) followed by the full report.
    All(RunArgs),
    /// Convert a GML network to an edge list and community file.
    ImportGml {
        /// GML input.
        gml: PathBuf,
        /// Node attribute that holds the community, e.g. `value`.
        #[arg(long)]
        attribute: Option<String>,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SweepArg {
    /// Least conductance prefix within the size bounds.
    Global,
    /// First local conductance minimum within the size bounds.
    FirstLocal,
}

#[derive(Args)]
struct RunArgs {
    /// Edge list: one `u v` pair per line, `#` comments.
    #[arg(long)]
    graph: PathBuf,
    /// Community file: `id: label label ...` per line.
    #[arg(long)]
    communities: Option<PathBuf>,
    /// Tab-separated label, title, abstract, `;`-joined keywords.
    #[arg(long)]
    metadata: Option<PathBuf>,
    #[arg(long, default_value_t = 5)]
    k: usize,
    #[arg(long, default_value_t = 0.8)]
    p: f64,
    #[arg(long, default_value_t = DetectParams::default().alpha)]
    alpha: f64,
    #[arg(long, default_value_t = DetectParams::default().epsilon)]
    epsilon: f64,
    #[arg(long, default_value_t = DetectParams::default().min_size)]
    min_size: usize,
    #[arg(long, default_value_t = DetectParams::default().max_size)]
    max_size: usize,
    #[arg(long, value_enum, default_value_t = SweepArg::Global)]
    sweep_rule: SweepArg,
    /// Largest Jaccard overlap allowed between detected communities.
    #[arg(long, default_value_t = DetectParams::default().overlap_jaccard_max)]
    overlap: f64,
    /// Monte Carlo samples when enumeration is too large.
    #[arg(long, default_value_t = EstimatorParams::default().samples)]
    samples: usize,
    /// Largest number of subsets enumerated exactly.
    #[arg(long, default_value_t = EstimatorParams::default().enumeration_cap)]
    enum_cap: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = commchar_core::distribution::DEFAULT_BINS)]
    bins: usize,
    #[arg(long, default_value = "out")]
    out: PathBuf,
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    format: OutputFormat,
    #[arg(long, default_value_t = 1)]
    workers: usize,
}

impl RunArgs {
    fn into_config(self) -> RunConfig {
        let mut c = RunConfig::new(self.graph, self.out).with_seed(self.seed);
        c.communities = self.communities;
        c.metadata = self.metadata;
        c.k = self.k;
        c.p = self.p;
        c.detect.alpha = self.alpha;
        c.detect.epsilon = self.epsilon;
        c.detect.min_size = self.min_size;
        c.detect.max_size = self.max_size;
        c.detect.sweep_rule = match self.sweep_rule {
            SweepArg::Global => SweepRule::GlobalMinimum,
            SweepArg::FirstLocal => SweepRule::FirstLocalMinimum,
        };
        c.detect.overlap_jaccard_max = self.overlap;
        c.estimator.samples = self.samples;
        c.estimator.enumeration_cap = self.enum_cap;
        c.bins = self.bins;
        c.format = self.format;
        c.workers = self.workers;
        c
    }
}

fn dispatch(command: Command) -> Result<usize, CliError> {
    let (stage, args) = match command {
        Command::ImportGml {
            gml,
            attribute,
            out,
        } => {
            return import_gml(&gml, attribute.as_deref(), &out).map(|w| w.len());
        }
        Command::Detect(a) => (Stage::Detect, a),
        Command::Domsets(a) => (Stage::Domsets, a),
        Command::Slopes(a) => (Stage::Slopes, a),
        Command::Metrics(a) => (Stage::Metrics, a),
        Command::Keywords(a) => (Stage::Keywords, a),
        Command::Report(a) => (Stage::Report, a),
        Command::All(a) => (Stage::All, a),
    };
    run(stage, &args.into_config()).map(|w| w.len())
}

fn main() -> ExitCode {
    env_logger::Builder::new()
        .filter_level(log::LevelFilter::Info)
        .format_timestamp(None)
        .init();
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(files) => {
            log::info!("wrote {files} file(s)");
            ExitCode::SUCCESS
        }
        Err(e) => {
            log::error!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
