//! Command line for the decomposition library: experiment grids, preference
//! region maps, the numerical routing verifier, standalone hypervolume, and
//! combinatorial instance generation.

use clap::{Parser, Subcommand, ValueEnum};
use moead_glp::analysis::{format_region_tsv, region_map, run_theorem_suite, sample_shell};
use moead_glp::decomposition::{build_subproblems, simplex_lattice_weights};
use moead_glp::harness::{load_config, run_experiment, write_instance_files};
use moead_glp::metrics::{hypervolume, normalized_hypervolume};
use moead_glp::problems::{Family, InstanceData, ProblemSpec};
use moead_glp::scalarization::{Exponent, Scalarizer};
use moead_glp::{Error, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::fs;
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "moead-glp",
    version,
    about = "Decomposition-based multi-objective optimization benchmarks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment grid described by a TOML config file.
    Run(RunArgs),
    /// Sample a radial shell and map each point to its matched subproblem.
    Regions(RegionsArgs),
    /// Check the preference-region routing properties numerically.
    Verify(VerifyArgs),
    /// Compute the hypervolume of a front file.
    Hv(HvArgs),
    /// Generate a knapsack or tour instance file.
    Gen(GenArgs),
}

#[derive(clap::Args)]
struct RunArgs {
    /// Experiment description (TOML).
    config: PathBuf,
    /// Override the number of runs per cell.
    #[arg(long)]
    runs: Option<usize>,
    /// Override the base seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Override the population size.
    #[arg(long)]
    population: Option<usize>,
    /// Override the evaluation budget.
    #[arg(long)]
    budget: Option<usize>,
    /// Override the mating neighborhood size.
    #[arg(long)]
    tm: Option<usize>,
    /// Override the replacement neighborhood size.
    #[arg(long)]
    tr: Option<usize>,
    /// Override the output directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ScalarizerKind {
    /// Weighted p-norm of the distance to the reference point.
    Lp,
    /// The same norm with the product-normalizing weight factor.
    Glp,
}

#[derive(clap::Args)]
struct RegionsArgs {
    /// Scalarization family.
    #[arg(long, value_enum, default_value_t = ScalarizerKind::Lp)]
    scalarizer: ScalarizerKind,
    /// Norm exponent: a number >= 1 or "inf".
    #[arg(long, default_value = "1", value_parser = parse_exponent)]
    p: Exponent,
    /// Objective count.
    #[arg(long, default_value_t = 2)]
    m: usize,
    /// Lattice divisions per objective.
    #[arg(long, default_value_t = 6)]
    divisions: usize,
    /// Number of shell samples.
    #[arg(long, default_value_t = 10_000)]
    samples: usize,
    /// Sample radii are drawn uniformly from [r-min, r-max].
    #[arg(long, default_value_t = 0.5)]
    r_min: f64,
    #[arg(long, default_value_t = 2.0)]
    r_max: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output TSV path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(clap::Args)]
struct VerifyArgs {
    /// Objective counts to check.
    #[arg(long, value_delimiter = ',', default_values_t = vec![2, 3])]
    m: Vec<usize>,
    /// Lattice divisions per objective.
    #[arg(long, default_value_t = 6)]
    divisions: usize,
    /// Shell samples per check.
    #[arg(long, default_value_t = 3000)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(clap::Args)]
struct HvArgs {
    /// Front file: one objective vector per line, comma or whitespace
    /// separated; lines starting with # are skipped.
    front: PathBuf,
    /// Normalize by this problem's known front bounds.
    #[arg(long, value_parser = parse_family)]
    problem: Option<Family>,
    /// Objective count for --problem (defaults to 2).
    #[arg(long)]
    m: Option<usize>,
    /// Explicit normalization bounds.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    lo: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    hi: Option<Vec<f64>>,
    /// Reference point for a raw, unnormalized hypervolume.
    #[arg(long = "ref", value_delimiter = ',', allow_hyphen_values = true)]
    reference: Option<Vec<f64>>,
}

#[derive(clap::Args)]
struct GenArgs {
    /// Instance family: mokp or motsp.
    #[arg(long, value_parser = parse_family)]
    family: Family,
    /// Objective count.
    #[arg(long, default_value_t = 2)]
    m: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file; defaults to <family>_m<m>_seed<seed>.txt.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_exponent(s: &str) -> std::result::Result<Exponent, String> {
    s.parse::<Exponent>().map_err(|e| e.to_string())
}

fn parse_family(s: &str) -> std::result::Result<Family, String> {
    s.parse::<Family>().map_err(|e| e.to_string())
}

fn main() {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Regions(args) => cmd_regions(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Hv(args) => cmd_hv(args),
        Command::Gen(args) => cmd_gen(args),
    };
    if let Err(e) = outcome {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}

fn cmd_run(args: RunArgs) -> Result<()> {
    let mut config = load_config(&args.config)?;
    if let Some(v) = args.runs {
        config.runs = v;
    }
    if let Some(v) = args.seed {
        config.base_seed = v;
    }
    if let Some(v) = args.population {
        config.population = Some(v);
    }
    if let Some(v) = args.budget {
        config.budget = Some(v);
    }
    if let Some(v) = args.tm {
        config.mating_size = Some(v);
    }
    if let Some(v) = args.tr {
        config.replacement_size = Some(v);
    }
    if let Some(v) = args.out {
        config.output_dir = v;
    }

    let result = run_experiment(&config)?;
    if result.records.is_empty() {
        let first = result.failures.first().map(|f| f.message.clone()).unwrap_or_default();
        return Err(Error::Config(format!("every run failed; first failure: {first}")));
    }

    fs::create_dir_all(&config.output_dir)?;
    let instances = write_instance_files(&config, &config.output_dir)?;
    let results_path = config.output_dir.join("results.csv");
    let summary_path = config.output_dir.join("summary.csv");
    fs::write(&results_path, &result.results_csv)?;
    fs::write(&summary_path, &result.summary_csv)?;

    print!("{}", result.summary_csv);
    println!("wrote {} result rows to {}", result.records.len(), results_path.display());
    println!("wrote summary to {}", summary_path.display());
    for path in instances {
        println!("wrote instance file {}", path.display());
    }
    for failure in &result.failures {
        eprintln!(
            "run failed: {} m={} {} p={} seed={}: {}",
            failure.family, failure.m, failure.strategy, failure.p, failure.seed, failure.message
        );
    }
    Ok(())
}

fn cmd_regions(args: RegionsArgs) -> Result<()> {
    let weights = simplex_lattice_weights(args.m, args.divisions)?;
    let subproblems = build_subproblems(weights, 1, 1)?;
    let scalarizer = match args.scalarizer {
        ScalarizerKind::Lp => Scalarizer::lp(args.p),
        ScalarizerKind::Glp => Scalarizer::glp(args.p),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let samples = sample_shell(args.m, args.r_min, args.r_max, args.samples, &mut rng)?;
    let labels = region_map(&samples, &subproblems, &scalarizer)?;
    let tsv = format_region_tsv(&samples, &labels)?;
    match args.out {
        Some(path) => {
            fs::write(&path, tsv)?;
            println!("wrote {} labeled samples to {}", args.samples, path.display());
        }
        None => print!("{tsv}"),
    }
    Ok(())
}

fn cmd_verify(args: VerifyArgs) -> Result<()> {
    let mut failed = 0usize;
    let mut total = 0usize;
    for &m in &args.m {
        println!("m={} divisions={} samples={}", m, args.divisions, args.samples);
        let report = run_theorem_suite(m, args.divisions, args.samples, args.seed)?;
        for check in &report.checks {
            total += 1;
            if !check.pass {
                failed += 1;
            }
            let word = if check.pass { "pass" } else { "FAIL" };
            println!("  {word}  {}: {}", check.name, check.detail);
        }
    }
    if failed > 0 {
        println!("{failed} of {total} checks failed");
        std::process::exit(1);
    }
    println!("all {total} checks passed");
    Ok(())
}

fn cmd_hv(args: HvArgs) -> Result<()> {
    let text = fs::read_to_string(&args.front)?;
    let front = parse_front(&text)?;
    let value = match (args.problem, args.lo, args.hi, args.reference) {
        (Some(family), None, None, None) => {
            let spec = ProblemSpec::new(family, args.m.unwrap_or(2), 0)?;
            let problem = spec.build()?;
            let (lo, hi) = problem.pf_bounds().ok_or_else(|| {
                Error::Parameter(format!(
                    "{family} has no closed-form front bounds; pass --lo and --hi"
                ))
            })?;
            normalized_hypervolume(&front, &lo, &hi)?
        }
        (None, Some(lo), Some(hi), None) => normalized_hypervolume(&front, &lo, &hi)?,
        (None, None, None, Some(zh)) => hypervolume(&front, &zh)?,
        _ => {
            return Err(Error::Parameter(
                "pass exactly one of --problem, --lo with --hi, or --ref".into(),
            ))
        }
    };
    println!("{value}");
    Ok(())
}

fn cmd_gen(args: GenArgs) -> Result<()> {
    let instance = InstanceData::generate(args.family, args.m, args.seed)?;
    let path = args.out.unwrap_or_else(|| {
        PathBuf::from(format!("{}_m{}_seed{}.txt", args.family, args.m, args.seed))
    });
    instance.save(&path)?;
    println!("wrote {}", path.display());
    Ok(())
}

/// One objective vector per non-empty, non-comment line.
fn parse_front(text: &str) -> Result<Vec<Vec<f64>>> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut row = Vec::new();
        for token in trimmed.split(|c: char| c == ',' || c.is_whitespace()) {
            if token.is_empty() {
                continue;
            }
            row.push(token.parse::<f64>().map_err(|_| {
                Error::Parameter(format!("line {}: bad objective value {token:?}", lineno + 1))
            })?);
        }
        if let Some(first) = rows.first() {
            if row.len() != first.len() {
                return Err(Error::Dimension { expected: first.len(), got: row.len() });
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::Parameter("front file has no data rows".into()));
    }
    Ok(rows)
}
