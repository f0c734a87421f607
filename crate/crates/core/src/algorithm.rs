//! Decomposition-based evolutionary loop with selectable replacement
//! strategy: classic per-subproblem replacement, global replacement into the
//! best-matching neighborhood, and global replacement with the normalized
//! scalarization and widened boundary neighborhoods.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::decomposition::{
    augment_boundary_neighborhoods, build_subproblems, derive_divisions, simplex_lattice_weights,
    Subproblem,
};
use crate::error::{Error, Result};
use crate::problems::Problem;
use crate::scalarization::{Exponent, Scalarizer};
use crate::types::{nondominated_filter, Individual, ObjectiveVector, Population, ReferencePoint};
use crate::variation::{reproduce, OperatorParams};

/// Replacement strategy selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Strategy {
    /// Replace only inside the neighborhood of the generating subproblem.
    Vanilla,
    /// Replace inside the neighborhood of the best-matching subproblem.
    Gr,
    /// Like Gr, plus boundary subproblems grafted onto the replacement
    /// neighborhood of their nearest interior subproblem.
    Ggr,
}

impl Strategy {
    pub const ALL: [Strategy; 3] = [Strategy::Vanilla, Strategy::Gr, Strategy::Ggr];
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Strategy::Vanilla => "moead",
            Strategy::Gr => "moead-gr",
            Strategy::Ggr => "moead-ggr",
        };
        f.write_str(s)
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "moead" | "vanilla" => Ok(Strategy::Vanilla),
            "gr" | "moead-gr" => Ok(Strategy::Gr),
            "ggr" | "moead-ggr" => Ok(Strategy::Ggr),
            other => Err(Error::Config(format!("unknown strategy '{other}'"))),
        }
    }
}

impl serde::Serialize for Strategy {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for Strategy {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let text = <String as serde::Deserialize>::deserialize(deserializer)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// A strategy paired with the scalarization driving its matching and
/// replacement comparisons.
#[derive(Debug, Clone)]
pub struct AlgorithmVariant {
    pub strategy: Strategy,
    pub scalarizer: Scalarizer,
}

impl AlgorithmVariant {
    /// Default pairing: the normalized family for Ggr, plain Lp otherwise.
    pub fn standard(strategy: Strategy, p: Exponent) -> Self {
        let scalarizer = match strategy {
            Strategy::Ggr => Scalarizer::glp(p),
            Strategy::Vanilla | Strategy::Gr => Scalarizer::lp(p),
        };
        AlgorithmVariant { strategy, scalarizer }
    }
}

/// Mating neighborhood size: 10% of the population, rounded half up.
pub fn default_mating_size(population: usize) -> usize {
    ((population + 5) / 10).max(1)
}

/// Replacement neighborhood size: 5% of the population, rounded up.
pub fn default_replacement_size(population: usize) -> usize {
    ((population + 19) / 20).max(1)
}

/// One optimization run's settings. The weight lattice is derived from the
/// population size, which must match a lattice count exactly.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub variant: AlgorithmVariant,
    pub population: usize,
    pub mating_size: usize,
    pub replacement_size: usize,
    pub budget: usize,
    pub seed: u64,
    pub checkpoints: usize,
}

impl RunConfig {
    pub fn new(variant: AlgorithmVariant, population: usize, budget: usize, seed: u64) -> Self {
        RunConfig {
            variant,
            population,
            mating_size: default_mating_size(population),
            replacement_size: default_replacement_size(population),
            budget,
            seed,
            checkpoints: 20,
        }
    }
}

/// What happened to one offspring.
#[derive(Debug, Clone)]
pub struct OffspringTrace {
    /// Subproblem whose mating neighborhood produced the offspring.
    pub subproblem: usize,
    pub objectives: ObjectiveVector,
    /// Replacement target: the generating subproblem under Vanilla, the
    /// best-matching subproblem otherwise.
    pub matched: usize,
    /// Population slots the offspring actually displaced.
    pub replaced: Vec<usize>,
}

/// Completed run summary.
#[derive(Debug, Clone)]
pub struct RunResult {
    pub population: Population,
    /// Nondominated objective vectors of the final population, duplicates
    /// collapsed.
    pub front: Vec<ObjectiveVector>,
    pub evaluations: usize,
    pub generations: usize,
    /// True when the budget ran out part-way through a generation.
    pub truncated: bool,
    /// Per-subproblem count of offspring routed there for replacement.
    pub match_counts: Vec<usize>,
    pub checkpoint_evals: Vec<usize>,
    /// Population objective snapshots taken as the evaluation count crosses
    /// each budget fraction.
    pub checkpoint_objectives: Vec<Vec<ObjectiveVector>>,
    pub wall_time: Duration,
}

/// Index of the subproblem whose scalarization ranks the solution best.
/// Ties resolve to the lowest index.
pub fn match_subproblem(
    objectives: &[f64],
    subproblems: &[Subproblem],
    scalarizer: &Scalarizer,
    z: &[f64],
) -> Result<usize> {
    if subproblems.is_empty() {
        return Err(Error::Parameter("cannot match against an empty subproblem set".into()));
    }
    let mut best = 0;
    let mut best_value = f64::INFINITY;
    for sub in subproblems {
        let value = scalarizer.value(objectives, &sub.weight_eff, sub.h, z);
        if !value.is_finite() {
            return Err(Error::Numeric(format!(
                "non-finite scalarization while matching against subproblem {}",
                sub.index
            )));
        }
        if value < best_value {
            best_value = value;
            best = sub.index;
        }
    }
    Ok(best)
}

/// Walk a replacement set in stored order, overwriting every slot the
/// candidate strictly improves. Returns the displaced indices. No cap: one
/// offspring may take the whole set.
pub fn replace_in_neighborhood(
    candidate: &Individual,
    replacement_set: &[usize],
    population: &mut [Individual],
    subproblems: &[Subproblem],
    scalarizer: &Scalarizer,
    z: &[f64],
) -> Vec<usize> {
    let mut replaced = Vec::new();
    for &k in replacement_set {
        let sub = &subproblems[k];
        let new_value = scalarizer.value(&candidate.objectives, &sub.weight_eff, sub.h, z);
        let old_value = scalarizer.value(&population[k].objectives, &sub.weight_eff, sub.h, z);
        if new_value < old_value {
            population[k] = candidate.clone();
            replaced.push(k);
        }
    }
    replaced
}

/// Stepable run state. `new` evaluates the initial population; each `step`
/// advances one generation (possibly cut short by the budget).
pub struct Runner<'a> {
    problem: &'a dyn Problem,
    strategy: Strategy,
    scalarizer: Scalarizer,
    subproblems: Vec<Subproblem>,
    params: OperatorParams,
    bounds: Option<(Vec<f64>, Vec<f64>)>,
    budget: usize,
    marks: Vec<usize>,
    rng: ChaCha8Rng,
    population: Population,
    reference: ReferencePoint,
    evaluations: usize,
    generations: usize,
    truncated: bool,
    match_counts: Vec<usize>,
    checkpoint_evals: Vec<usize>,
    checkpoint_objectives: Vec<Vec<ObjectiveVector>>,
}

impl<'a> Runner<'a> {
    pub fn new(problem: &'a dyn Problem, config: &RunConfig) -> Result<Self> {
        let n_pop = config.population;
        if n_pop < 2 {
            return Err(Error::Parameter(format!("population must be at least 2, got {n_pop}")));
        }
        if config.budget < n_pop {
            return Err(Error::Config(format!(
                "budget {} cannot cover the initial population of {n_pop}",
                config.budget
            )));
        }
        if config.checkpoints == 0 {
            return Err(Error::Parameter("checkpoint count must be positive".into()));
        }
        let divisions = derive_divisions(problem.m(), n_pop)?;
        let weights = simplex_lattice_weights(problem.m(), divisions)?;
        let mut subproblems =
            build_subproblems(weights, config.mating_size, config.replacement_size)?;
        if config.variant.strategy == Strategy::Ggr {
            augment_boundary_neighborhoods(&mut subproblems)?;
        }

        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        let mut population = Vec::with_capacity(n_pop);
        for _ in 0..n_pop {
            let encoding = problem.repair(problem.random_encoding(&mut rng));
            let objectives = problem.evaluate(&encoding)?;
            population.push(Individual { encoding, objectives });
        }
        let reference = ReferencePoint::from_objectives(
            population.iter().map(|ind| ind.objectives.as_slice()),
            config.variant.scalarizer.reference,
        )?;

        let marks = (1..=config.checkpoints)
            .map(|k| config.budget * k / config.checkpoints)
            .collect();

        let mut runner = Runner {
            problem,
            strategy: config.variant.strategy,
            scalarizer: config.variant.scalarizer.clone(),
            subproblems,
            params: OperatorParams::for_dimension(problem.n()),
            bounds: problem.bounds(),
            budget: config.budget,
            marks,
            rng,
            population,
            reference,
            evaluations: n_pop,
            generations: 0,
            truncated: false,
            match_counts: vec![0; n_pop],
            checkpoint_evals: Vec::new(),
            checkpoint_objectives: Vec::new(),
        };
        runner.take_due_snapshots();
        Ok(runner)
    }

    pub fn population(&self) -> &Population {
        &self.population
    }

    pub fn subproblems(&self) -> &[Subproblem] {
        &self.subproblems
    }

    pub fn scalarizer(&self) -> &Scalarizer {
        &self.scalarizer
    }

    pub fn reference_values(&self) -> Vec<f64> {
        self.reference.values()
    }

    pub fn evaluations(&self) -> usize {
        self.evaluations
    }

    pub fn match_counts(&self) -> &[usize] {
        &self.match_counts
    }

    pub fn done(&self) -> bool {
        self.evaluations >= self.budget
    }

    fn take_due_snapshots(&mut self) {
        while self.checkpoint_objectives.len() < self.marks.len()
            && self.evaluations >= self.marks[self.checkpoint_objectives.len()]
        {
            let objectives =
                self.population.iter().map(|ind| ind.objectives.clone()).collect();
            self.checkpoint_objectives.push(objectives);
            self.checkpoint_evals.push(self.evaluations);
        }
    }

    fn pick_distinct_pair(&mut self, set: &[usize]) -> (usize, usize) {
        if set.len() < 2 {
            return (set[0], set[0]);
        }
        let first = self.rng.random_range(0..set.len());
        let mut second = self.rng.random_range(0..set.len());
        while second == first {
            second = self.rng.random_range(0..set.len());
        }
        (set[first], set[second])
    }

    fn produce_offspring(&mut self, j: usize) -> Result<OffspringTrace> {
        let (a, b) = self.pick_distinct_pair(&self.subproblems[j].mating.clone());
        let child = reproduce(
            &self.population[a].encoding,
            &self.population[b].encoding,
            self.bounds.as_ref(),
            &self.params,
            &mut self.rng,
        )?;
        let child = self.problem.repair(child);
        let objectives = self.problem.evaluate(&child)?;
        self.evaluations += 1;
        self.reference.update(&objectives)?;
        let z = self.reference.values();

        let matched = match self.strategy {
            Strategy::Vanilla => j,
            Strategy::Gr | Strategy::Ggr => {
                match_subproblem(&objectives, &self.subproblems, &self.scalarizer, &z)?
            }
        };
        self.match_counts[matched] += 1;

        let candidate = Individual { encoding: child, objectives: objectives.clone() };
        let replaced = replace_in_neighborhood(
            &candidate,
            &self.subproblems[matched].replacement,
            &mut self.population,
            &self.subproblems,
            &self.scalarizer,
            &z,
        );
        self.take_due_snapshots();
        Ok(OffspringTrace { subproblem: j, objectives, matched, replaced })
    }

    /// One generation: subproblems in index order, one offspring each.
    /// Stops mid-generation if the budget runs out and flags the run
    /// truncated. Returns the traces of the offspring actually produced.
    pub fn step(&mut self) -> Result<Vec<OffspringTrace>> {
        if self.done() {
            return Ok(Vec::new());
        }
        let n = self.subproblems.len();
        let mut traces = Vec::with_capacity(n);
        for j in 0..n {
            if self.evaluations >= self.budget {
                self.truncated = true;
                break;
            }
            traces.push(self.produce_offspring(j)?);
        }
        self.generations += 1;
        Ok(traces)
    }

    pub fn finish(self) -> Result<RunResult> {
        let objectives: Vec<ObjectiveVector> =
            self.population.iter().map(|ind| ind.objectives.clone()).collect();
        let front = nondominated_filter(&objectives)?;
        Ok(RunResult {
            population: self.population,
            front,
            evaluations: self.evaluations,
            generations: self.generations,
            truncated: self.truncated,
            match_counts: self.match_counts,
            checkpoint_evals: self.checkpoint_evals,
            checkpoint_objectives: self.checkpoint_objectives,
            wall_time: Duration::ZERO,
        })
    }
}

/// Run to budget exhaustion.
pub fn run(problem: &dyn Problem, config: &RunConfig) -> Result<RunResult> {
    let start = Instant::now();
    let mut runner = Runner::new(problem, config)?;
    while !runner.done() {
        runner.step()?;
    }
    let mut result = runner.finish()?;
    result.wall_time = start.elapsed();
    Ok(result)
}
