//! Preference-region analysis: which subproblem a solution is routed to,
//! sampled over objective-space shells, plus numerical checks of the
//! routing behavior of each scalarization family.

use std::f64::consts::TAU;
use std::fmt::Write as _;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algorithm::match_subproblem;
use crate::decomposition::{build_subproblems, simplex_lattice_weights, BoundaryClass, Subproblem};
use crate::error::{Error, Result};
use crate::scalarization::{scalarize_glp, scalarize_lp, Exponent, Scalarizer};
use crate::types::ObjectiveVector;

fn standard_normal(rng: &mut dyn RngCore) -> f64 {
    let u1 = 1.0 - rng.random::<f64>();
    let u2 = rng.random::<f64>();
    (-2.0 * u1.ln()).sqrt() * (TAU * u2).cos()
}

/// Uniformly distributed directions in the positive orthant, at radii
/// uniform in [r_min, r_max].
pub fn sample_shell(
    m: usize,
    r_min: f64,
    r_max: f64,
    count: usize,
    rng: &mut dyn RngCore,
) -> Result<Vec<ObjectiveVector>> {
    if m < 2 {
        return Err(Error::Parameter(format!("need at least 2 objectives, got {m}")));
    }
    if !(r_min > 0.0 && r_max >= r_min) {
        return Err(Error::Parameter(format!(
            "shell radii must satisfy 0 < r_min <= r_max, got [{r_min}, {r_max}]"
        )));
    }
    let mut samples = Vec::with_capacity(count);
    while samples.len() < count {
        let dir: Vec<f64> = (0..m).map(|_| standard_normal(rng).abs()).collect();
        let norm = dir.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let radius = r_min + (r_max - r_min) * rng.random::<f64>();
        samples.push(dir.iter().map(|v| v * radius / norm).collect());
    }
    Ok(samples)
}

/// Matched subproblem index for each sample, with the reference point at
/// the origin so the samples play the role of offset objective vectors.
pub fn region_map(
    samples: &[ObjectiveVector],
    subproblems: &[Subproblem],
    scalarizer: &Scalarizer,
) -> Result<Vec<usize>> {
    if subproblems.is_empty() {
        return Err(Error::Parameter("region map needs at least one subproblem".into()));
    }
    let m = subproblems[0].weight_raw.len();
    let z = vec![0.0; m];
    samples
        .iter()
        .map(|f| {
            if f.len() != m {
                return Err(Error::Dimension { expected: m, got: f.len() });
            }
            match_subproblem(f, subproblems, scalarizer, &z)
        })
        .collect()
}

/// Weight minimizing the Lp scalarization of a fixed positive objective
/// vector over the simplex: w_i proportional to (1/f_i)^(p/(p-1)), with the
/// limit 1/f_i at p = infinity. At p = 1 the minimizer degenerates onto the
/// simplex boundary and no interior form exists.
pub fn continuous_minimizer_lp(f: &[f64], p: Exponent) -> Result<Vec<f64>> {
    if f.len() < 2 {
        return Err(Error::Parameter(format!("need at least 2 objectives, got {}", f.len())));
    }
    if f.iter().any(|&v| !(v > 0.0) || !v.is_finite()) {
        return Err(Error::Domain("continuous minimizer needs strictly positive objectives".into()));
    }
    let raw: Vec<f64> = match p {
        Exponent::Finite(p) if p == 1.0 => {
            return Err(Error::Parameter(
                "no interior minimizer exists at p = 1; the optimum sits on the simplex boundary"
                    .into(),
            ));
        }
        Exponent::Finite(p) => {
            let e = p / (p - 1.0);
            f.iter().map(|&v| v.recip().powf(e)).collect()
        }
        Exponent::Infinity => f.iter().map(|&v| v.recip()).collect(),
    };
    let sum: f64 = raw.iter().sum();
    Ok(raw.iter().map(|v| v / sum).collect())
}

const PASSTHROUGH_SCALES: [f64; 3] = [1.0, 1.5, 2.0];

/// Interior subproblems that recapture their own direction vector: j passes
/// when points along its normalized direction match back to j at several
/// radii.
pub fn passthrough_set(
    subproblems: &[Subproblem],
    scalarizer: &Scalarizer,
) -> Result<Vec<usize>> {
    if subproblems.is_empty() {
        return Err(Error::Parameter("passthrough needs at least one subproblem".into()));
    }
    let m = subproblems[0].weight_raw.len();
    let z = vec![0.0; m];
    let mut passes = Vec::new();
    for sub in subproblems {
        if sub.boundary != BoundaryClass::Interior {
            continue;
        }
        let norm = sub.lambda.iter().map(|v| v * v).sum::<f64>().sqrt();
        let mut ok = true;
        for c in PASSTHROUGH_SCALES {
            let f: Vec<f64> = sub.lambda.iter().map(|v| c * v / norm).collect();
            if match_subproblem(&f, subproblems, scalarizer, &z)? != sub.index {
                ok = false;
                break;
            }
        }
        if ok {
            passes.push(sub.index);
        }
    }
    Ok(passes)
}

/// Fraction of interior subproblems whose own direction routes back to
/// them. Errors when the lattice has no interior.
pub fn passthrough_fraction(
    subproblems: &[Subproblem],
    scalarizer: &Scalarizer,
) -> Result<f64> {
    let interior = subproblems
        .iter()
        .filter(|s| s.boundary == BoundaryClass::Interior)
        .count();
    if interior == 0 {
        return Err(Error::Parameter("lattice has no interior subproblems".into()));
    }
    let passes = passthrough_set(subproblems, scalarizer)?;
    Ok(passes.len() as f64 / interior as f64)
}

/// Interior subproblems whose raw weight is nearest to uniform (ties kept).
pub fn nearest_uniform_interior(subproblems: &[Subproblem]) -> Vec<usize> {
    let interior: Vec<&Subproblem> = subproblems
        .iter()
        .filter(|s| s.boundary == BoundaryClass::Interior)
        .collect();
    if interior.is_empty() {
        return Vec::new();
    }
    let m = interior[0].weight_raw.len();
    let uniform = 1.0 / m as f64;
    let dist = |s: &Subproblem| -> f64 {
        s.weight_raw.iter().map(|w| (w - uniform) * (w - uniform)).sum::<f64>().sqrt()
    };
    let best = interior.iter().map(|s| dist(s)).fold(f64::INFINITY, f64::min);
    interior.iter().filter(|s| dist(s) <= best + 1e-12).map(|s| s.index).collect()
}

/// One named check inside a verification report.
#[derive(Debug, Clone)]
pub struct CheckLine {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

/// Outcome of the routing verification suite.
#[derive(Debug, Clone)]
pub struct TheoremReport {
    pub checks: Vec<CheckLine>,
}

impl TheoremReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Numerically exercise the routing claims on one lattice: L1 confines
/// matches to extreme subproblems, small finite p admits only the most
/// central interior direction, the Chebyshev limit admits every interior
/// direction, the normalized family admits every interior direction at any
/// p, and the closed-form continuous minimizer is locally optimal.
pub fn run_theorem_suite(
    m: usize,
    divisions: usize,
    samples: usize,
    seed: u64,
) -> Result<TheoremReport> {
    let weights = simplex_lattice_weights(m, divisions)?;
    let subproblems = build_subproblems(weights, 1, 1)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks = Vec::new();

    let shell = sample_shell(m, 0.5, 2.0, samples, &mut rng)?;
    let labels = region_map(&shell, &subproblems, &Scalarizer::lp(Exponent::Finite(1.0)))?;
    let strays = labels
        .iter()
        .filter(|&&j| subproblems[j].boundary != BoundaryClass::ExtremeBoundary)
        .count();
    checks.push(CheckLine {
        name: "p=1 routes every sample to an extreme subproblem".into(),
        pass: strays == 0,
        detail: format!("{strays} of {} samples strayed", labels.len()),
    });

    let central = nearest_uniform_interior(&subproblems);
    for p in [1.5, 2.0] {
        let set = passthrough_set(&subproblems, &Scalarizer::lp(Exponent::finite(p)?))?;
        checks.push(CheckLine {
            name: format!("p={p} admits only the most central interior direction"),
            pass: set == central,
            detail: format!("pass set {set:?}, nearest-uniform {central:?}"),
        });
    }

    let frac = passthrough_fraction(&subproblems, &Scalarizer::lp(Exponent::Infinity))?;
    checks.push(CheckLine {
        name: "p=inf admits every interior direction".into(),
        pass: frac == 1.0,
        detail: format!("passthrough fraction {frac}"),
    });

    for p in [
        Exponent::Finite(1.0),
        Exponent::Finite(1.5),
        Exponent::Finite(2.0),
        Exponent::Finite(3.0),
        Exponent::Finite(10.0),
        Exponent::Infinity,
    ] {
        let frac = passthrough_fraction(&subproblems, &Scalarizer::glp(p))?;
        checks.push(CheckLine {
            name: format!("normalized family admits every interior direction at p={p}"),
            pass: frac == 1.0,
            detail: format!("passthrough fraction {frac}"),
        });
    }

    let z = vec![0.0; m];
    let trials = 50;
    fn perturb(w_star: &[f64], rng: &mut ChaCha8Rng) -> Vec<f64> {
        let mut w: Vec<f64> = w_star
            .iter()
            .map(|v| (v + 0.01 * (rng.random::<f64>() - 0.5)).max(1e-9))
            .collect();
        let sum: f64 = w.iter().sum();
        w.iter_mut().for_each(|v| *v /= sum);
        w
    }

    let mut violations = 0;
    for _ in 0..trials {
        let f: Vec<f64> = (0..m).map(|_| 0.2 + 2.8 * rng.random::<f64>()).collect();
        let w_star = continuous_minimizer_lp(&f, Exponent::Finite(2.0))?;
        let base = scalarize_lp(&f, &w_star, &z, 2.0)?;
        for _ in 0..20 {
            let w = perturb(&w_star, &mut rng);
            if scalarize_lp(&f, &w, &z, 2.0)? < base - 1e-12 {
                violations += 1;
            }
        }
    }
    checks.push(CheckLine {
        name: "closed-form p=2 minimizer is locally optimal".into(),
        pass: violations == 0,
        detail: format!("{violations} of {} perturbations improved on it", trials * 20),
    });

    // The normalized family's minimizing weight is inverse to the
    // objectives regardless of p.
    let mut violations = 0;
    for _ in 0..trials {
        let f: Vec<f64> = (0..m).map(|_| 0.2 + 2.8 * rng.random::<f64>()).collect();
        let w_star = continuous_minimizer_lp(&f, Exponent::Infinity)?;
        for p in [Exponent::Finite(1.0), Exponent::Finite(2.0)] {
            let base = scalarize_glp(&f, &w_star, &z, p)?;
            for _ in 0..10 {
                let w = perturb(&w_star, &mut rng);
                if scalarize_glp(&f, &w, &z, p)? < base - 1e-12 {
                    violations += 1;
                }
            }
        }
    }
    checks.push(CheckLine {
        name: "inverse-objective weight is locally optimal for the normalized family".into(),
        pass: violations == 0,
        detail: format!("{violations} of {} perturbations improved on it", trials * 20),
    });

    Ok(TheoremReport { checks })
}

/// Tab-separated region map: one row per sample, objective coordinates then
/// the matched subproblem index.
pub fn format_region_tsv(samples: &[ObjectiveVector], labels: &[usize]) -> Result<String> {
    if samples.len() != labels.len() {
        return Err(Error::Dimension { expected: samples.len(), got: labels.len() });
    }
    if samples.is_empty() {
        return Err(Error::Parameter("region map is empty".into()));
    }
    let m = samples[0].len();
    let mut out = String::new();
    for i in 1..=m {
        let _ = write!(out, "f_{i}\t");
    }
    out.push_str("label\n");
    for (f, label) in samples.iter().zip(labels) {
        if f.len() != m {
            return Err(Error::Dimension { expected: m, got: f.len() });
        }
        for v in f {
            let _ = write!(out, "{v}\t");
        }
        let _ = writeln!(out, "{label}");
    }
    Ok(out)
}
