//! Experiment orchestration: TOML configuration, seeded batch runs over a
//! (problem x algorithm) grid, hypervolume scoring, and CSV reporting.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Deserialize;

use crate::algorithm::{run, AlgorithmVariant, RunConfig, Strategy};
use crate::decomposition::derive_divisions;
use crate::error::{Error, Result};
use crate::metrics::{
    normalized_hypervolume, pooled_pf_bounds, wilcoxon_rank_sum, Comparison,
};
use crate::problems::{Family, InstanceData, ProblemSpec};
use crate::scalarization::Exponent;
use crate::types::{nondominated_filter, ObjectiveVector};

/// Built-in population size for a given objective count.
pub fn default_population(m: usize) -> Result<usize> {
    match m {
        2 => Ok(100),
        3 => Ok(190),
        _ => Err(Error::Config(format!(
            "no default population for m={m}; set population explicitly"
        ))),
    }
}

/// Built-in evaluation budget for a family at a given objective count.
pub fn default_budget(family: Family, m: usize) -> usize {
    match family {
        Family::Zdt1 | Family::Zdt2 | Family::Zdt3 | Family::Zdt4 => 25_000,
        Family::Dtlz1 | Family::Dtlz3 | Family::Dtlz5 => 100_000,
        Family::Mokp | Family::Motsp => {
            if m == 2 {
                200_000
            } else {
                400_000
            }
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProblem {
    family: String,
    m: usize,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAlgorithm {
    strategy: Strategy,
    p: Exponent,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    problems: Vec<RawProblem>,
    algorithms: Vec<RawAlgorithm>,
    population: Option<usize>,
    budget: Option<usize>,
    runs: Option<usize>,
    base_seed: Option<u64>,
    instance_seed: Option<u64>,
    mating_size: Option<usize>,
    replacement_size: Option<usize>,
    output_dir: Option<String>,
}

/// A resolved experiment: every field has a value or a per-problem default.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub problems: Vec<ProblemSpec>,
    pub algorithms: Vec<(Strategy, Exponent)>,
    pub population: Option<usize>,
    pub budget: Option<usize>,
    pub runs: usize,
    pub base_seed: u64,
    pub mating_size: Option<usize>,
    pub replacement_size: Option<usize>,
    pub output_dir: PathBuf,
}

impl ExperimentConfig {
    /// Population used for a problem with this many objectives.
    pub fn population_for(&self, m: usize) -> Result<usize> {
        match self.population {
            Some(n) => Ok(n),
            None => default_population(m),
        }
    }

    /// Budget used for this family and objective count.
    pub fn budget_for(&self, family: Family, m: usize) -> usize {
        self.budget.unwrap_or_else(|| default_budget(family, m))
    }

    fn validate(&self) -> Result<()> {
        if self.problems.is_empty() {
            return Err(Error::Config("no problems configured".into()));
        }
        if self.algorithms.is_empty() {
            return Err(Error::Config("no algorithms configured".into()));
        }
        if self.runs == 0 {
            return Err(Error::Config("runs must be at least 1".into()));
        }
        for spec in &self.problems {
            let population = self.population_for(spec.m)?;
            derive_divisions(spec.m, population)?;
            let budget = self.budget_for(spec.family, spec.m);
            if budget < population {
                return Err(Error::Config(format!(
                    "budget {budget} cannot cover the initial population of {population}"
                )));
            }
            if let Some(t) = self.mating_size {
                if t < 1 || t > population {
                    return Err(Error::Config(format!(
                        "mating_size {t} outside 1..={population}"
                    )));
                }
            }
            if let Some(t) = self.replacement_size {
                if t < 1 || t > population {
                    return Err(Error::Config(format!(
                        "replacement_size {t} outside 1..={population}"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Parse and validate a TOML experiment description.
pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
    let instance_seed = raw.instance_seed.unwrap_or(0);
    let mut problems = Vec::with_capacity(raw.problems.len());
    for rp in &raw.problems {
        let family: Family = rp.family.parse()?;
        problems.push(ProblemSpec::new(family, rp.m, instance_seed)?);
    }
    let config = ExperimentConfig {
        problems,
        algorithms: raw.algorithms.iter().map(|ra| (ra.strategy, ra.p)).collect(),
        population: raw.population,
        budget: raw.budget,
        runs: raw.runs.unwrap_or(30),
        base_seed: raw.base_seed.unwrap_or(0),
        mating_size: raw.mating_size,
        replacement_size: raw.replacement_size,
        output_dir: PathBuf::from(raw.output_dir.as_deref().unwrap_or("results")),
    };
    config.validate()?;
    Ok(config)
}

/// Read and parse a config file.
pub fn load_config(path: &Path) -> Result<ExperimentConfig> {
    parse_config(&std::fs::read_to_string(path)?)
}

/// One scored run.
#[derive(Debug, Clone)]
pub struct RunRecord {
    pub family: Family,
    pub m: usize,
    pub strategy: Strategy,
    pub p: Exponent,
    pub seed: u64,
    pub evaluations: usize,
    pub truncated: bool,
    pub hv: f64,
    pub checkpoint_hv: Vec<f64>,
}

/// A run that could not be completed or scored.
#[derive(Debug, Clone)]
pub struct RunFailure {
    pub family: Family,
    pub m: usize,
    pub strategy: Strategy,
    pub p: Exponent,
    pub seed: u64,
    pub message: String,
}

/// Completed experiment with both CSV reports rendered.
#[derive(Debug, Clone)]
pub struct ExperimentResult {
    pub records: Vec<RunRecord>,
    pub failures: Vec<RunFailure>,
    pub results_csv: String,
    pub summary_csv: String,
}

struct RawRun {
    problem_idx: usize,
    algorithm_idx: usize,
    seed: u64,
    outcome: std::result::Result<RawOutcome, String>,
}

struct RawOutcome {
    evaluations: usize,
    truncated: bool,
    front: Vec<ObjectiveVector>,
    checkpoints: Vec<Vec<ObjectiveVector>>,
}

/// Execute every (problem, algorithm, seed) cell of the grid in parallel,
/// score fronts with the normalized hypervolume, and render the reports.
/// Individual run failures are collected, not fatal.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentResult> {
    config.validate()?;
    let problems: Vec<Box<dyn crate::problems::Problem>> = config
        .problems
        .iter()
        .map(|spec| spec.build())
        .collect::<Result<_>>()?;

    let mut jobs = Vec::new();
    for pi in 0..config.problems.len() {
        for ai in 0..config.algorithms.len() {
            for run_idx in 0..config.runs {
                jobs.push((pi, ai, config.base_seed + run_idx as u64));
            }
        }
    }

    let raw_runs: Vec<RawRun> = jobs
        .par_iter()
        .map(|&(pi, ai, seed)| {
            let spec = &config.problems[pi];
            let (strategy, p) = config.algorithms[ai];
            let outcome = (|| {
                let population = config.population_for(spec.m)?;
                let variant = AlgorithmVariant::standard(strategy, p);
                let mut run_config = RunConfig::new(
                    variant,
                    population,
                    config.budget_for(spec.family, spec.m),
                    seed,
                );
                if let Some(t) = config.mating_size {
                    run_config.mating_size = t;
                }
                if let Some(t) = config.replacement_size {
                    run_config.replacement_size = t;
                }
                let result = run(problems[pi].as_ref(), &run_config)?;
                Ok(RawOutcome {
                    evaluations: result.evaluations,
                    truncated: result.truncated,
                    front: result.front,
                    checkpoints: result.checkpoint_objectives,
                })
            })();
            RawRun {
                problem_idx: pi,
                algorithm_idx: ai,
                seed,
                outcome: outcome.map_err(|e: Error| e.to_string()),
            }
        })
        .collect();

    // Normalization bounds per problem: analytic when the family publishes
    // front bounds, otherwise pooled from every successful final front.
    let mut bounds: Vec<std::result::Result<(Vec<f64>, Vec<f64>), String>> = Vec::new();
    for (pi, problem) in problems.iter().enumerate() {
        if let Some(b) = problem.pf_bounds() {
            bounds.push(Ok(b));
            continue;
        }
        let fronts: Vec<Vec<ObjectiveVector>> = raw_runs
            .iter()
            .filter(|r| r.problem_idx == pi)
            .filter_map(|r| r.outcome.as_ref().ok().map(|o| o.front.clone()))
            .collect();
        bounds.push(pooled_pf_bounds(&fronts).map_err(|e| e.to_string()));
    }

    let mut records = Vec::new();
    let mut failures = Vec::new();
    let scored: Vec<std::result::Result<RunRecord, RunFailure>> = raw_runs
        .par_iter()
        .map(|raw| {
            let spec = &config.problems[raw.problem_idx];
            let (strategy, p) = config.algorithms[raw.algorithm_idx];
            let fail = |message: String| RunFailure {
                family: spec.family,
                m: spec.m,
                strategy,
                p,
                seed: raw.seed,
                message,
            };
            let outcome = raw.outcome.as_ref().map_err(|e| fail(e.clone()))?;
            let (lo, hi) = bounds[raw.problem_idx].as_ref().map_err(|e| fail(e.clone()))?;
            let score = |front: &[ObjectiveVector]| -> Result<f64> {
                let nd = nondominated_filter(front)?;
                normalized_hypervolume(&nd, lo, hi)
            };
            let hv = score(&outcome.front).map_err(|e| fail(e.to_string()))?;
            let mut checkpoint_hv = Vec::with_capacity(outcome.checkpoints.len());
            for snapshot in &outcome.checkpoints {
                checkpoint_hv.push(score(snapshot).map_err(|e| fail(e.to_string()))?);
            }
            Ok(RunRecord {
                family: spec.family,
                m: spec.m,
                strategy,
                p,
                seed: raw.seed,
                evaluations: outcome.evaluations,
                truncated: outcome.truncated,
                hv,
                checkpoint_hv,
            })
        })
        .collect();
    for item in scored {
        match item {
            Ok(r) => records.push(r),
            Err(f) => failures.push(f),
        }
    }

    let results_csv = results_csv(&records);
    let summary_csv = summary_csv(config, &records);
    Ok(ExperimentResult { records, failures, results_csv, summary_csv })
}

/// One row per run: identity, outcome, final and checkpointed hypervolume.
/// Deterministic bytes for a given configuration.
pub fn results_csv(records: &[RunRecord]) -> String {
    let mut out = String::from("problem,m,algorithm,p,seed,evaluations,truncated,hv");
    for k in 1..=20 {
        let _ = write!(out, ",hv_cp_{:02}", 5 * k);
    }
    out.push('\n');
    for r in records {
        let _ = write!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.family, r.m, r.strategy, r.p, r.seed, r.evaluations, r.truncated, r.hv
        );
        for hv in &r.checkpoint_hv {
            let _ = write!(out, ",{hv}");
        }
        out.push('\n');
    }
    out
}

fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

fn sample_std(values: &[f64]) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    let mu = mean(values);
    (values.iter().map(|v| (v - mu) * (v - mu)).sum::<f64>() / (values.len() - 1) as f64).sqrt()
}

fn median_of(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Aggregate rows per (problem, m, algorithm, p): moments, rank by mean
/// within the (problem, m, p) group, and a rank-sum verdict against the
/// Ggr baseline at the same p. Comparison marks are suppressed when a cell
/// has fewer than five runs.
pub fn summary_csv(config: &ExperimentConfig, records: &[RunRecord]) -> String {
    let mut out = String::from(
        "problem,m,algorithm,p,runs,mean_hv,std_hv,median_hv,rank,vs_baseline\n",
    );
    for spec in &config.problems {
        // cells in configured algorithm order
        let cells: Vec<(Strategy, Exponent, Vec<f64>)> = config
            .algorithms
            .iter()
            .map(|&(strategy, p)| {
                let hvs: Vec<f64> = records
                    .iter()
                    .filter(|r| {
                        r.family == spec.family
                            && r.m == spec.m
                            && r.strategy == strategy
                            && r.p == p
                    })
                    .map(|r| r.hv)
                    .collect();
                (strategy, p, hvs)
            })
            .collect();
        for (ci, (strategy, p, hvs)) in cells.iter().enumerate() {
            if hvs.is_empty() {
                continue;
            }
            // rank among same-p cells of this problem, highest mean first,
            // ties by configured order
            let my_mean = mean(hvs);
            let rank = 1 + cells
                .iter()
                .enumerate()
                .filter(|(gi, (_, q, h))| q == p && !h.is_empty() && *gi != ci)
                .filter(|(gi, (_, _, h))| {
                    let other = mean(h);
                    other > my_mean || (other == my_mean && *gi < ci)
                })
                .count();
            let baseline = cells
                .iter()
                .find(|(s, q, h)| *s == Strategy::Ggr && q == p && !h.is_empty());
            let mark = if *strategy == Strategy::Ggr {
                String::new()
            } else {
                match baseline {
                    Some((_, _, base)) if hvs.len() >= 5 && base.len() >= 5 => {
                        match wilcoxon_rank_sum(hvs, base, 0.05) {
                            Ok(Comparison::Better) => "+".into(),
                            Ok(Comparison::Worse) => "-".into(),
                            Ok(Comparison::Similar) => "~".into(),
                            Err(_) => "na".into(),
                        }
                    }
                    _ => "na".into(),
                }
            };
            let _ = writeln!(
                out,
                "{},{},{},{},{},{:.6},{:.6},{:.6},{},{}",
                spec.family,
                spec.m,
                strategy,
                p,
                hvs.len(),
                my_mean,
                sample_std(hvs),
                median_of(hvs),
                rank,
                mark
            );
        }
    }
    out
}

/// Write the generated instance of every combinatorial problem in the
/// config to `dir`, named by family, objective count, and instance seed.
pub fn write_instance_files(config: &ExperimentConfig, dir: &Path) -> Result<Vec<PathBuf>> {
    let mut written = Vec::new();
    for spec in &config.problems {
        if !matches!(spec.family, Family::Mokp | Family::Motsp) {
            continue;
        }
        let data = InstanceData::generate(spec.family, spec.m, spec.instance_seed)?;
        let path = dir.join(format!(
            "{}_m{}_seed{}.txt",
            spec.family, spec.m, spec.instance_seed
        ));
        data.save(&path)?;
        written.push(path);
    }
    Ok(written)
}
