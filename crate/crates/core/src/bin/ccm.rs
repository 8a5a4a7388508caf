use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use ccm::cli::{self, ClassifyOutputs, ConstructKind, SearchMode, SearchRequest};
use ccm::search::{Progress, SearchConfig};
use ccm::symmetry::set_orbit_guard_override;
use ccm::CcmError;

#[derive(Parser)]
#[command(name = "ccm", version, about = "Complementary code matrices: verify, search, classify, construct")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check every matrix in an archive.
    Verify { archive: PathBuf },
    /// Write the composite autocorrelation of a matrix or code as CSV.
    Acf {
        /// Archive path, `[[1,i],...]`, `+-+` or `p:digits`.
        input: String,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Exhaustive search; `P N K`, or `N K` with --ternary.
    Search(SearchArgs),
    /// Equivalence classes and their construction flags.
    Classify {
        archive: PathBuf,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        witnesses: Option<PathBuf>,
        #[arg(long)]
        summary: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        jobs: usize,
    },
    /// Combine two single-matrix archives.
    Construct {
        kind: Kind,
        a: PathBuf,
        b: PathBuf,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Print canonical form and orbit size.
    Canonical { input: String },
}

#[derive(Args)]
struct SearchArgs {
    #[arg(num_args = 2..=3, required = true)]
    dims: Vec<usize>,
    #[arg(long, conflicts_with = "brute")]
    ternary: bool,
    #[arg(long)]
    brute: bool,
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    #[arg(long)]
    checkpoint: Option<PathBuf>,
    #[arg(long)]
    no_prune_reversal: bool,
    #[arg(long)]
    no_prune_sorted: bool,
    /// Leave the middle row of odd-height matrices unsorted.
    #[arg(long)]
    no_sort_middle: bool,
    /// Print one JSON progress record per million nodes to stderr.
    #[arg(long)]
    progress: bool,
    #[arg(short, long)]
    out: PathBuf,
    #[arg(long)]
    summary: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Kron,
    Concat,
    Dual,
}

fn search_request(a: SearchArgs, guard: bool) -> Result<SearchRequest, String> {
    let (p, n, k) = match (a.ternary, a.dims.as_slice()) {
        (true, &[n, k]) => (3, n, k),
        (false, &[p, n, k]) => (p as u32, n, k),
        (true, _) => return Err("--ternary takes N K".into()),
        (false, _) => return Err("search takes P N K".into()),
    };
    let mut config = SearchConfig::new(p, n, k);
    config.prune_reversal = !a.no_prune_reversal;
    config.prune_sorted_rows = !a.no_prune_sorted;
    config.sort_middle_row = !a.no_sort_middle;
    config.emit_raw = true;
    config.guard_override = guard;
    config.jobs = a.jobs;
    let mode = if a.ternary {
        SearchMode::Ternary
    } else if a.brute {
        SearchMode::Brute
    } else {
        SearchMode::Pruned
    };
    Ok(SearchRequest {
        mode,
        config,
        out: a.out,
        summary: a.summary,
        checkpoint: a.checkpoint,
    })
}

fn print_progress(p: &Progress) {
    eprintln!("{}", serde_json::to_string(p).unwrap_or_default());
}

fn run(cmd: Cmd, guard: bool) -> Result<ExitCode, CcmError> {
    match cmd {
        Cmd::Verify { archive } => {
            let report = cli::cmd_verify(&archive)?;
            print!("{}", report.render());
            return Ok(if report.all_pass() { ExitCode::SUCCESS } else { ExitCode::from(1) });
        }
        Cmd::Acf { input, out } => {
            let rows = cli::cmd_acf(&input, &out)?;
            println!("{rows} lags -> {}", out.display());
        }
        Cmd::Search(args) => {
            let show = args.progress;
            let req = search_request(args, guard).map_err(CcmError::Usage)?;
            let hook: &(dyn Fn(&Progress) + Sync) = &print_progress;
            let s = cli::cmd_search(&req, show.then_some(hook))?;
            println!("{} raw matrices, {} nodes, {:.2}s", s.raw, s.nodes, s.wall_seconds);
        }
        Cmd::Classify { archive, csv, witnesses, summary, jobs } => {
            let outs = ClassifyOutputs { csv, witnesses, summary };
            let s = cli::cmd_classify(&archive, &outs, jobs)?;
            let dual = s.dual_pair.map_or("-".to_string(), |d| d.to_string());
            println!(
                "{} matrices, {} classes, hadamard {}, dual_pair {}, kronecker {} (inclusive {}), concatenation {}",
                s.inputs, s.classes, s.hadamard, dual, s.kronecker, s.kronecker_inclusive, s.concatenation
            );
        }
        Cmd::Construct { kind, a, b, out } => {
            let kind = match kind {
                Kind::Kron => ConstructKind::Kron,
                Kind::Concat => ConstructKind::Concat,
                Kind::Dual => ConstructKind::Dual,
            };
            println!("{}", cli::cmd_construct(kind, &a, &b, &out)?);
        }
        Cmd::Canonical { input } => {
            for (c, size) in cli::cmd_canonical(&input)? {
                println!("{c} {size}");
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let args = Cli::parse();
    let guard = cli::guard_override_from_env();
    set_orbit_guard_override(guard);
    match run(args.cmd, guard) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
