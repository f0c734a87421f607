//! End-to-end acceptance checks. Each test prints one verdict line of the
//! form `criterion NN: PASS ...` directly to stdout so the lines survive
//! the harness capture, then asserts the same condition.

use moead_glp::algorithm::{run, AlgorithmVariant, RunConfig, Strategy};
use moead_glp::analysis::{
    nearest_uniform_interior, passthrough_fraction, passthrough_set, region_map, sample_shell,
};
use moead_glp::decomposition::{build_subproblems, simplex_lattice_weights, BoundaryClass};
use moead_glp::harness::{parse_config, run_experiment};
use moead_glp::metrics::{
    hypervolume, max_consecutive_gap, normalize, normalized_hypervolume, reference_point,
};
use moead_glp::problems::{Family, ProblemSpec};
use moead_glp::scalarization::{scalarize_lp, scalarize_tch, Exponent, Scalarizer};
use moead_glp::types::nondominated_filter;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::io::Write;
use std::time::Instant;

fn verdict(id: usize, pass: bool, detail: &str) {
    let word = if pass { "PASS" } else { "FAIL" };
    let line = format!("criterion {id:02}: {word}  {detail}");
    let _ = writeln!(std::io::stdout(), "{line}");
    assert!(pass, "{line}");
}

fn fin(p: f64) -> Exponent {
    Exponent::finite(p).unwrap()
}

/// Seed window shared by the benchmark-reproduction criteria (11 seeds).
const DESK_SEEDS: std::ops::Range<u64> = 4..15;

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    v[v.len() / 2]
}

/// Median normalized hypervolume of the final front over the desk seeds.
fn median_final_hv(family: Family, strategy: Strategy, p: Exponent, budget: usize) -> f64 {
    let problem = ProblemSpec::new(family, 2, 0).unwrap().build().unwrap();
    let (lo, hi) = problem.pf_bounds().unwrap();
    let hvs: Vec<f64> = DESK_SEEDS
        .into_par_iter()
        .map(|seed| {
            let variant = AlgorithmVariant::standard(strategy, p);
            let config = RunConfig::new(variant, 100, budget, seed);
            let result = run(problem.as_ref(), &config).unwrap();
            normalized_hypervolume(&result.front, &lo, &hi).unwrap()
        })
        .collect();
    median(hvs)
}

#[test]
fn criterion_01_weighted_sum_routes_to_extremes() {
    let start = Instant::now();
    let count = 100_000;
    let mut hits = Vec::new();
    for m in [2, 3] {
        let weights = simplex_lattice_weights(m, 6).unwrap();
        let subs = build_subproblems(weights, 1, 1).unwrap();
        let scal = Scalarizer::lp(fin(1.0));
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let samples = sample_shell(m, 0.5, 2.0, count, &mut rng).unwrap();
        let labels = region_map(&samples, &subs, &scal).unwrap();
        let extreme = labels
            .iter()
            .filter(|&&j| subs[j].boundary == BoundaryClass::ExtremeBoundary)
            .count();
        hits.push(extreme);
    }
    let secs = start.elapsed().as_secs_f64();
    let pass = hits.iter().all(|&h| h == count) && secs < 10.0;
    verdict(
        1,
        pass,
        &format!(
            "p=1 routes {}/{count} (m=2) and {}/{count} (m=3) shell samples to extreme \
             subproblems in {secs:.1}s",
            hits[0], hits[1]
        ),
    );
}

#[test]
fn criterion_02_normalized_family_passes_through_everywhere() {
    let start = Instant::now();
    let ps = [fin(1.0), fin(1.5), fin(2.0), fin(3.0), fin(10.0), Exponent::Infinity];
    let mut worst = 1.0f64;
    for (m, h) in [(2usize, 99usize), (3, 18)] {
        let weights = simplex_lattice_weights(m, h).unwrap();
        let subs = build_subproblems(weights, 1, 1).unwrap();
        for p in ps {
            let frac = passthrough_fraction(&subs, &Scalarizer::glp(p)).unwrap();
            worst = worst.min(frac);
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let pass = worst == 1.0 && secs < 10.0;
    verdict(
        2,
        pass,
        &format!(
            "product-normalized scalarization passes through every interior subproblem \
             for p in {{1, 1.5, 2, 3, 10, inf}} on both lattices (worst fraction {worst}, \
             {secs:.1}s)"
        ),
    );
}

#[test]
fn criterion_03_plain_l2_passthrough_is_rare_linf_full() {
    let weights = simplex_lattice_weights(2, 99).unwrap();
    let subs = build_subproblems(weights, 1, 1).unwrap();
    let l2 = Scalarizer::lp(fin(2.0));
    let set = passthrough_set(&subs, &l2).unwrap();
    let frac = passthrough_fraction(&subs, &l2).unwrap();
    let central = nearest_uniform_interior(&subs);
    let central_pass = !central.is_empty() && central.iter().all(|i| set.contains(i));
    let linf = passthrough_fraction(&subs, &Scalarizer::lp(Exponent::Infinity)).unwrap();
    let pass = frac < 0.2 && central_pass && linf == 1.0;
    verdict(
        3,
        pass,
        &format!(
            "plain L2 passthrough fraction {frac:.4} < 0.2 with the near-uniform weights \
             {central:?} passing; Chebyshev fraction {linf}"
        ),
    );
}

/// Inclusion-exclusion over all point subsets: an independent oracle for
/// the volume dominated by a front below the reference point.
fn union_volume(points: &[Vec<f64>], zh: &[f64]) -> f64 {
    let mut total = 0.0;
    for mask in 1u32..(1u32 << points.len()) {
        let mut corner = vec![f64::NEG_INFINITY; zh.len()];
        for (i, p) in points.iter().enumerate() {
            if mask & (1 << i) != 0 {
                for (c, v) in corner.iter_mut().zip(p) {
                    *c = c.max(*v);
                }
            }
        }
        let vol: f64 = corner.iter().zip(zh).map(|(c, z)| (z - c).max(0.0)).product();
        if mask.count_ones() % 2 == 1 {
            total += vol;
        } else {
            total -= vol;
        }
    }
    total
}

#[test]
fn criterion_04_hypervolume_matches_independent_oracles() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(44);

    let mut max_err = 0.0f64;
    for case in 0..200 {
        let m = if case % 2 == 0 { 2 } else { 3 };
        let count = rng.random_range(1..=10);
        let points: Vec<Vec<f64>> =
            (0..count).map(|_| (0..m).map(|_| rng.random()).collect()).collect();
        let zh = reference_point(m);
        let fast = hypervolume(&points, &zh).unwrap();
        max_err = max_err.max((fast - union_volume(&points, &zh)).abs());
    }

    let mut mc_sigmas = 0.0f64;
    for m in [2usize, 3] {
        let points: Vec<Vec<f64>> =
            (0..50).map(|_| (0..m).map(|_| rng.random()).collect()).collect();
        let zh = reference_point(m);
        let exact = hypervolume(&points, &zh).unwrap();
        let total = 10_000_000usize;
        let mut dominated = 0usize;
        for _ in 0..total {
            let s: Vec<f64> = (0..m).map(|_| rng.random::<f64>() * 1.1).collect();
            if points.iter().any(|p| p.iter().zip(&s).all(|(a, b)| a <= b)) {
                dominated += 1;
            }
        }
        let vol = 1.1f64.powi(m as i32);
        let p_hat = dominated as f64 / total as f64;
        let se = vol * (p_hat * (1.0 - p_hat) / total as f64).sqrt();
        mc_sigmas = mc_sigmas.max((exact - p_hat * vol).abs() / se);
    }

    let secs = start.elapsed().as_secs_f64();
    let pass = max_err <= 1e-9 && mc_sigmas <= 3.0 && secs < 120.0;
    verdict(
        4,
        pass,
        &format!(
            "exact hypervolume within {max_err:.2e} of inclusion-exclusion on 200 fronts \
             and within {mc_sigmas:.2} standard errors of a 10^7-sample Monte Carlo \
             estimate at |P|=50 ({secs:.1}s)"
        ),
    );
}

#[test]
fn criterion_05_dtlz3_strategy_ordering() {
    let p = fin(1.0);
    let ggr = median_final_hv(Family::Dtlz3, Strategy::Ggr, p, 100_000);
    let plain = median_final_hv(Family::Dtlz3, Strategy::Vanilla, p, 100_000);
    let gr = median_final_hv(Family::Dtlz3, Strategy::Gr, p, 100_000);
    let pass = ggr >= 0.38
        && (0.15..=0.27).contains(&plain)
        && gr <= 0.10
        && ggr > plain
        && plain > gr;
    verdict(
        5,
        pass,
        &format!(
            "dtlz3 p=1 median hypervolume over 11 seeds: ggr {ggr:.4} >= 0.38, \
             plain {plain:.4} in [0.15, 0.27], gr {gr:.4} <= 0.10, order preserved"
        ),
    );
}

#[test]
fn criterion_06_zdt2_weighted_sum_contrast() {
    let p = fin(1.0);
    let gr = median_final_hv(Family::Zdt2, Strategy::Gr, p, 25_000);
    let ggr = median_final_hv(Family::Zdt2, Strategy::Ggr, p, 25_000);
    let pass = gr <= 0.05 && ggr >= 0.35;
    verdict(
        6,
        pass,
        &format!(
            "zdt2 p=1 median hypervolume over 11 seeds: gr {gr:.4} <= 0.05, \
             ggr {ggr:.4} >= 0.35"
        ),
    );
}

#[test]
fn criterion_07_chebyshev_limit_strategies_agree() {
    let p = Exponent::Infinity;
    let ggr = median_final_hv(Family::Zdt1, Strategy::Ggr, p, 25_000);
    let gr = median_final_hv(Family::Zdt1, Strategy::Gr, p, 25_000);
    let diff = (ggr - gr).abs();
    let pass = diff <= 0.02;
    verdict(
        7,
        pass,
        &format!(
            "zdt1 p=inf median hypervolume over 11 seeds: ggr {ggr:.4} vs gr {gr:.4}, \
             |difference| {diff:.4} <= 0.02"
        ),
    );
}

#[test]
fn criterion_08_large_p_approaches_chebyshev() {
    let mut rng = ChaCha8Rng::seed_from_u64(88);
    let p = (1u64 << 14) as f64;
    let mut worst = 0.0f64;
    for i in 0..10_000 {
        let m = [2, 3, 5][i % 3];
        let z: Vec<f64> = (0..m).map(|_| rng.random_range(-1.0..1.0)).collect();
        let f: Vec<f64> = z.iter().map(|&zi| zi + rng.random_range(0.1..2.0)).collect();
        let mut w: Vec<f64> = (0..m).map(|_| rng.random_range(0.05..1.0)).collect();
        let sum: f64 = w.iter().sum();
        for wi in &mut w {
            *wi /= sum;
        }
        let lp = scalarize_lp(&f, &w, &z, p).unwrap();
        let tch = scalarize_tch(&f, &w, &z).unwrap();
        worst = worst.max((lp - tch).abs() / tch);
    }
    let pass = worst <= 1e-3;
    verdict(
        8,
        pass,
        &format!(
            "worst relative deviation between p=2^14 and Chebyshev over 10^4 random \
             triples: {worst:.2e} <= 1e-3"
        ),
    );
}

const RERUN_CONFIG: &str = r#"
runs = 2
base_seed = 3
population = 12
budget = 240
instance_seed = 7

[[problems]]
family = "zdt1"
m = 2

[[problems]]
family = "mokp"
m = 2

[[algorithms]]
strategy = "moead"
p = "inf"

[[algorithms]]
strategy = "gr"
p = 1

[[algorithms]]
strategy = "ggr"
p = 1
"#;

#[test]
fn criterion_09_experiment_reruns_are_byte_identical() {
    let first = run_experiment(&parse_config(RERUN_CONFIG).unwrap()).unwrap();
    let second = run_experiment(&parse_config(RERUN_CONFIG).unwrap()).unwrap();
    let pass = first.results_csv == second.results_csv
        && first.summary_csv == second.summary_csv
        && first.failures.is_empty()
        && first.records.len() == 12;
    verdict(
        9,
        pass,
        &format!(
            "rerunning a 12-run experiment reproduces {} bytes of results and {} bytes \
             of summary exactly",
            first.results_csv.len(),
            first.summary_csv.len()
        ),
    );
}

#[test]
fn criterion_10_small_replacement_trades_convergence_for_spread() {
    let problem = ProblemSpec::new(Family::Dtlz3, 2, 0).unwrap().build().unwrap();
    let (lo, hi) = problem.pf_bounds().unwrap();
    // median (final-front gap, hypervolume at 20% budget, at 50% budget)
    let stats = |tr: usize| -> (f64, f64, f64) {
        let per_seed: Vec<(f64, f64, f64)> = DESK_SEEDS
            .into_par_iter()
            .map(|seed| {
                let variant = AlgorithmVariant::standard(Strategy::Ggr, fin(1.0));
                let mut config = RunConfig::new(variant, 100, 100_000, seed);
                config.replacement_size = tr;
                let result = run(problem.as_ref(), &config).unwrap();
                let gap = max_consecutive_gap(&normalize(&result.front, &lo, &hi).unwrap())
                    .unwrap();
                let hv_at = |k: usize| {
                    let front =
                        nondominated_filter(&result.checkpoint_objectives[k]).unwrap();
                    normalized_hypervolume(&front, &lo, &hi).unwrap()
                };
                (gap, hv_at(3), hv_at(9))
            })
            .collect();
        (
            median(per_seed.iter().map(|s| s.0).collect()),
            median(per_seed.iter().map(|s| s.1).collect()),
            median(per_seed.iter().map(|s| s.2).collect()),
        )
    };
    let (gap1, early1, mid1) = stats(1);
    let (gap5, early5, mid5) = stats(5);
    // the slower convergence of t_r=1 shows as a non-strict deficit at 20%
    // of the budget (both medians can still be zero there) and a strict one
    // at 50%, while its final front is the more evenly spread
    let pass = gap1 < gap5 && early1 <= early5 && mid1 < mid5;
    verdict(
        10,
        pass,
        &format!(
            "dtlz3 ggr p=1 medians over 11 seeds: final-front gap {gap1:.4} < {gap5:.4}, \
             hypervolume at 20% budget {early1:.4} <= {early5:.4}, at 50% budget \
             {mid1:.4} < {mid5:.4} (t_r=1 vs t_r=5)"
        ),
    );
}
