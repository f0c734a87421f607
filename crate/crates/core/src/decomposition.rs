//! Weight-lattice generation, neighborhood tables, boundary classification,
//! and the replacement-neighborhood augmentation used by GGR.
//!
//! Subproblem indices are 0-based everywhere, including file outputs.

use crate::error::{Error, Result};
use crate::scalarization::{clamp_weights, direction_vector, h_weight};
use std::path::Path;

/// Weight class by minimal entries: a weight is boundary when at least one
/// entry equals the minimal entry value of the whole weight set (0 on a
/// standard lattice), and extreme boundary when exactly m-1 entries do.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryClass {
    Interior,
    Boundary,
    ExtremeBoundary,
}

/// One decomposition subproblem: raw lattice weight, clamped weight with its
/// derived direction vector and h value, neighborhood index lists, and
/// boundary class.
#[derive(Debug, Clone)]
pub struct Subproblem {
    pub index: usize,
    pub weight_raw: Vec<f64>,
    pub weight_eff: Vec<f64>,
    pub lambda: Vec<f64>,
    pub h: f64,
    pub mating: Vec<usize>,
    pub replacement: Vec<usize>,
    pub boundary: BoundaryClass,
}

fn binomial(n: u64, k: u64) -> Option<u64> {
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = acc.checked_mul(n - i)?;
        acc /= i + 1;
    }
    Some(acc)
}

/// Number of simplex-lattice weights for m objectives and H divisions:
/// C(H+m-1, m-1). None when the count overflows u64.
pub fn lattice_size(m: usize, h_divisions: usize) -> Option<u64> {
    binomial((h_divisions + m - 1) as u64, (m - 1) as u64)
}

/// Division count H whose lattice has exactly `n_pop` weights. Population
/// sizes that match no lattice are rejected, naming the nearest sizes that
/// would.
pub fn derive_divisions(m: usize, n_pop: usize) -> Result<usize> {
    if m < 2 {
        return Err(Error::Parameter(format!("need at least 2 objectives, got {m}")));
    }
    let mut h = 1usize;
    loop {
        let size = lattice_size(m, h).ok_or_else(|| {
            Error::Config(format!("no weight lattice of size {n_pop} is representable for m={m}"))
        })?;
        if size == n_pop as u64 {
            return Ok(h);
        }
        if size > n_pop as u64 {
            let above = size;
            return Err(match h {
                1 => Error::Config(format!(
                    "population {n_pop} does not match a weight lattice for m={m}; the smallest feasible size is {above}"
                )),
                _ => {
                    let below = lattice_size(m, h - 1).unwrap();
                    Error::Config(format!(
                        "population {n_pop} does not match a weight lattice for m={m}; nearest feasible sizes are {below} and {above}"
                    ))
                }
            });
        }
        h += 1;
    }
}

/// All weights (k_1/H, ..., k_m/H) with non-negative integer k summing to H,
/// in lexicographic order.
pub fn simplex_lattice_weights(m: usize, h_divisions: usize) -> Result<Vec<Vec<f64>>> {
    if m < 2 {
        return Err(Error::Parameter(format!("need at least 2 objectives, got {m}")));
    }
    if h_divisions < 1 {
        return Err(Error::Parameter("lattice needs at least 1 division".into()));
    }
    let count = lattice_size(m, h_divisions)
        .filter(|&c| c <= 50_000_000)
        .ok_or_else(|| {
            Error::Parameter(format!("lattice size for m={m}, H={h_divisions} is too large"))
        })?;
    let mut weights = Vec::with_capacity(count as usize);
    let mut partial = vec![0usize; m];
    fill_lattice(m, h_divisions, 0, h_divisions, &mut partial, &mut weights);
    debug_assert_eq!(weights.len() as u64, count);
    Ok(weights)
}

fn fill_lattice(
    m: usize,
    h_divisions: usize,
    pos: usize,
    remaining: usize,
    partial: &mut Vec<usize>,
    out: &mut Vec<Vec<f64>>,
) {
    if pos == m - 1 {
        partial[pos] = remaining;
        out.push(partial.iter().map(|&k| k as f64 / h_divisions as f64).collect());
        return;
    }
    for k in 0..=remaining {
        partial[pos] = k;
        fill_lattice(m, h_divisions, pos + 1, remaining - k, partial, out);
    }
}

fn euclid(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Indices of the t nearest weights to each weight (self included), sorted
/// by ascending Euclidean distance, ties broken toward the lower index.
pub fn nearest_neighbors(weights: &[Vec<f64>], t: usize) -> Result<Vec<Vec<usize>>> {
    let n = weights.len();
    if t < 1 {
        return Err(Error::Parameter("neighborhood size must be at least 1".into()));
    }
    if t > n {
        return Err(Error::Parameter(format!("neighborhood size {t} exceeds population {n}")));
    }
    let mut tables = Vec::with_capacity(n);
    for j in 0..n {
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| {
            let da = euclid(&weights[j], &weights[a]);
            let db = euclid(&weights[j], &weights[b]);
            da.partial_cmp(&db).unwrap().then(a.cmp(&b))
        });
        order.truncate(t);
        tables.push(order);
    }
    Ok(tables)
}

/// Mating and replacement tables in one pass.
pub fn build_neighborhoods(
    weights: &[Vec<f64>],
    t_m: usize,
    t_r: usize,
) -> Result<(Vec<Vec<usize>>, Vec<Vec<usize>>)> {
    Ok((nearest_neighbors(weights, t_m)?, nearest_neighbors(weights, t_r)?))
}

/// Classify a raw weight against the minimal entry value of its weight set.
pub fn classify_boundary(w: &[f64], min_entry: f64) -> BoundaryClass {
    let minimal = w.iter().filter(|&&wi| (wi - min_entry).abs() <= 1e-12).count();
    if minimal == 0 {
        BoundaryClass::Interior
    } else if minimal == w.len() - 1 {
        BoundaryClass::ExtremeBoundary
    } else {
        BoundaryClass::Boundary
    }
}

/// Classify every weight; the minimal entry value is taken over the whole
/// set, which makes the rule meaningful for non-lattice weight files too.
pub fn classify_all(weights: &[Vec<f64>]) -> Vec<BoundaryClass> {
    let min_entry = weights
        .iter()
        .flat_map(|w| w.iter().copied())
        .fold(f64::INFINITY, f64::min);
    weights.iter().map(|w| classify_boundary(w, min_entry)).collect()
}

/// Assemble subproblems from raw weights: clamped weights, direction
/// vectors, h values, neighborhood tables, boundary classes.
pub fn build_subproblems(
    weights_raw: Vec<Vec<f64>>,
    t_m: usize,
    t_r: usize,
) -> Result<Vec<Subproblem>> {
    if weights_raw.is_empty() {
        return Err(Error::Parameter("no weights supplied".into()));
    }
    let (mating, replacement) = build_neighborhoods(&weights_raw, t_m, t_r)?;
    let classes = classify_all(&weights_raw);
    let mut subproblems = Vec::with_capacity(weights_raw.len());
    for (index, (w, (b_m, (b_r, class)))) in weights_raw
        .into_iter()
        .zip(mating.into_iter().zip(replacement.into_iter().zip(classes)))
        .enumerate()
    {
        let weight_eff = clamp_weights(&w);
        let lambda = direction_vector(&weight_eff)?;
        let h = h_weight(&weight_eff)?;
        subproblems.push(Subproblem {
            index,
            weight_raw: w,
            weight_eff,
            lambda,
            h,
            mating: b_m,
            replacement: b_r,
            boundary: class,
        });
    }
    Ok(subproblems)
}

/// Append every boundary subproblem's index to the replacement neighborhood
/// of its nearest interior subproblem (raw-weight distance, ties toward the
/// lower index). Boundary incumbents then get extra chances to be replaced
/// by solutions matched to that interior subproblem.
pub fn augment_boundary_neighborhoods(subproblems: &mut [Subproblem]) -> Result<()> {
    let interior: Vec<usize> = subproblems
        .iter()
        .filter(|s| s.boundary == BoundaryClass::Interior)
        .map(|s| s.index)
        .collect();
    if interior.is_empty() {
        return Err(Error::Config(
            "boundary augmentation needs at least one interior subproblem".into(),
        ));
    }
    let boundary: Vec<usize> = subproblems
        .iter()
        .filter(|s| s.boundary != BoundaryClass::Interior)
        .map(|s| s.index)
        .collect();
    for b in boundary {
        let mut best = interior[0];
        let mut best_d = f64::INFINITY;
        for &q in &interior {
            let d = euclid(&subproblems[b].weight_raw, &subproblems[q].weight_raw);
            if d < best_d {
                best_d = d;
                best = q;
            }
        }
        if !subproblems[best].replacement.contains(&b) {
            subproblems[best].replacement.push(b);
        }
    }
    Ok(())
}

/// Read one weight vector per line, whitespace separated. Blank lines are
/// skipped; entries must be non-negative and sum to 1 within 1e-9.
pub fn load_weights(path: &Path) -> Result<Vec<Vec<f64>>> {
    let text = std::fs::read_to_string(path)?;
    parse_weights(&text)
}

pub fn parse_weights(text: &str) -> Result<Vec<Vec<f64>>> {
    let mut weights: Vec<Vec<f64>> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let mut w = Vec::new();
        for token in line.split_whitespace() {
            let v: f64 = token.parse().map_err(|_| {
                Error::Parameter(format!("line {}: bad weight entry {token:?}", lineno + 1))
            })?;
            if !(v >= 0.0) {
                return Err(Error::Parameter(format!(
                    "line {}: weight entries must be non-negative",
                    lineno + 1
                )));
            }
            w.push(v);
        }
        if let Some(first) = weights.first() {
            if w.len() != first.len() {
                return Err(Error::Dimension { expected: first.len(), got: w.len() });
            }
        } else if w.len() < 2 {
            return Err(Error::Parameter("weights need at least 2 entries".into()));
        }
        let sum: f64 = w.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::Parameter(format!(
                "line {}: weight sums to {sum}, expected 1",
                lineno + 1
            )));
        }
        weights.push(w);
    }
    if weights.is_empty() {
        return Err(Error::Parameter("weight file contains no vectors".into()));
    }
    Ok(weights)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lattice_m2_h4() {
        let w = simplex_lattice_weights(2, 4).unwrap();
        let expected = [
            vec![0.0, 1.0],
            vec![0.25, 0.75],
            vec![0.5, 0.5],
            vec![0.75, 0.25],
            vec![1.0, 0.0],
        ];
        assert_eq!(w, expected);
    }

    #[test]
    fn lattice_counts() {
        assert_eq!(simplex_lattice_weights(2, 99).unwrap().len(), 100);
        assert_eq!(simplex_lattice_weights(3, 18).unwrap().len(), 190);
        assert_eq!(lattice_size(3, 18), Some(190));
        assert_eq!(lattice_size(2, 99), Some(100));
    }

    #[test]
    fn divisions_recovered_from_population_size() {
        assert_eq!(derive_divisions(2, 100).unwrap(), 99);
        assert_eq!(derive_divisions(3, 190).unwrap(), 18);
        assert_eq!(derive_divisions(3, 136).unwrap(), 15);
        assert_eq!(derive_divisions(3, 153).unwrap(), 16);
    }

    #[test]
    fn infeasible_population_size_names_neighbours() {
        let err = derive_divisions(3, 150).unwrap_err().to_string();
        assert!(err.contains("136"), "{err}");
        assert!(err.contains("153"), "{err}");
        let err = derive_divisions(3, 1).unwrap_err().to_string();
        assert!(err.contains('3'), "{err}");
    }

    #[test]
    fn lattice_sums_and_count_formula() {
        for (m, h) in [(2, 7), (3, 6), (4, 5), (5, 4)] {
            let w = simplex_lattice_weights(m, h).unwrap();
            assert_eq!(w.len() as u64, lattice_size(m, h).unwrap());
            for v in &w {
                assert!((v.iter().sum::<f64>() - 1.0).abs() <= 1e-12);
                assert_eq!(v.len(), m);
            }
            // lexicographic order
            for pair in w.windows(2) {
                assert!(pair[0] < pair[1]);
            }
        }
    }

    #[test]
    fn lattice_rejects_bad_params() {
        assert!(simplex_lattice_weights(1, 4).is_err());
        assert!(simplex_lattice_weights(2, 0).is_err());
        assert!(simplex_lattice_weights(12, 60).is_err());
    }

    #[test]
    fn neighborhood_shapes() {
        let w = simplex_lattice_weights(2, 99).unwrap();
        let (b_m, b_r) = build_neighborhoods(&w, 10, 5).unwrap();
        for j in 0..w.len() {
            assert_eq!(b_m[j].len(), 10);
            assert_eq!(b_r[j].len(), 5);
            assert!(b_m[j].contains(&j));
            assert!(b_r[j].contains(&j));
            assert_eq!(b_m[j][0], j, "self is nearest");
        }
    }

    #[test]
    fn neighborhood_middle_indices_are_adjacent() {
        let w = simplex_lattice_weights(2, 10).unwrap();
        let t = nearest_neighbors(&w, 3).unwrap();
        for j in 1..w.len() - 1 {
            let mut got = t[j].clone();
            got.sort_unstable();
            assert_eq!(got, vec![j - 1, j, j + 1]);
        }
    }

    #[test]
    fn neighborhood_t1_is_self() {
        let w = simplex_lattice_weights(3, 4).unwrap();
        let t = nearest_neighbors(&w, 1).unwrap();
        for (j, row) in t.iter().enumerate() {
            assert_eq!(row, &vec![j]);
        }
        assert!(nearest_neighbors(&w, 0).is_err());
        assert!(nearest_neighbors(&w, w.len() + 1).is_err());
    }

    #[test]
    fn boundary_classification() {
        assert_eq!(classify_boundary(&[0.0, 1.0], 0.0), BoundaryClass::ExtremeBoundary);
        assert_eq!(classify_boundary(&[0.5, 0.5], 0.0), BoundaryClass::Interior);
        assert_eq!(classify_boundary(&[0.0, 0.5, 0.5], 0.0), BoundaryClass::Boundary);
        assert_eq!(classify_boundary(&[0.0, 0.0, 1.0], 0.0), BoundaryClass::ExtremeBoundary);

        let lattice = simplex_lattice_weights(3, 6).unwrap();
        let classes = classify_all(&lattice);
        let extremes: Vec<usize> = classes
            .iter()
            .enumerate()
            .filter(|(_, c)| **c == BoundaryClass::ExtremeBoundary)
            .map(|(i, _)| i)
            .collect();
        assert_eq!(extremes, vec![0, 6, 27]);
    }

    #[test]
    fn subproblem_assembly() {
        let w = simplex_lattice_weights(2, 6).unwrap();
        let subs = build_subproblems(w, 3, 2).unwrap();
        assert_eq!(subs.len(), 7);
        for s in &subs {
            assert!((s.weight_eff.iter().sum::<f64>() - 1.0).abs() <= 1e-12);
            assert!(s.h >= 2.0 - 1e-12);
            assert_eq!(s.lambda.len(), 2);
            assert!(s.lambda.iter().all(|&l| l.is_finite() && l > 0.0));
        }
        assert_eq!(subs[0].boundary, BoundaryClass::ExtremeBoundary);
        assert_eq!(subs[3].boundary, BoundaryClass::Interior);
    }

    #[test]
    fn augmentation_m2_h4() {
        let w = simplex_lattice_weights(2, 4).unwrap();
        let mut subs = build_subproblems(w, 2, 1).unwrap();
        augment_boundary_neighborhoods(&mut subs).unwrap();
        assert_eq!(subs[1].replacement, vec![1, 0]);
        assert_eq!(subs[3].replacement, vec![3, 4]);
        assert_eq!(subs[2].replacement, vec![2]);
        assert_eq!(subs[0].replacement, vec![0]);
        assert_eq!(subs[4].replacement, vec![4]);
    }

    #[test]
    fn augmentation_attaches_each_boundary_once_to_nearest_interior() {
        for (m, h) in [(2, 9), (3, 4), (3, 6)] {
            let w = simplex_lattice_weights(m, h).unwrap();
            let t_r = 2.min(w.len());
            let mut subs = build_subproblems(w.clone(), 3, t_r).unwrap();
            let before: Vec<Vec<usize>> = subs.iter().map(|s| s.replacement.clone()).collect();
            augment_boundary_neighborhoods(&mut subs).unwrap();

            let interior: Vec<usize> = subs
                .iter()
                .filter(|s| s.boundary == BoundaryClass::Interior)
                .map(|s| s.index)
                .collect();
            let mut appended = 0;
            for s in &subs {
                if interior.contains(&s.index) {
                    assert_eq!(&s.replacement[..before[s.index].len()], &before[s.index][..]);
                    appended += s.replacement.len() - before[s.index].len();
                } else {
                    assert_eq!(s.replacement, before[s.index]);
                }
            }
            // each boundary appended exactly once, to its distance-minimal interior
            let boundary: Vec<usize> = subs
                .iter()
                .filter(|s| s.boundary != BoundaryClass::Interior)
                .map(|s| s.index)
                .collect();
            let already: usize = boundary
                .iter()
                .filter(|&&b| {
                    let q = nearest_interior(&subs, &interior, b);
                    before[q].contains(&b)
                })
                .count();
            assert_eq!(appended + already, boundary.len());
            for &b in &boundary {
                let q = nearest_interior(&subs, &interior, b);
                assert!(subs[q].replacement.contains(&b));
            }
        }
    }

    fn nearest_interior(subs: &[Subproblem], interior: &[usize], b: usize) -> usize {
        let mut best = interior[0];
        let mut best_d = f64::INFINITY;
        for &q in interior {
            let d = euclid(&subs[b].weight_raw, &subs[q].weight_raw);
            if d < best_d {
                best_d = d;
                best = q;
            }
        }
        best
    }

    #[test]
    fn augmentation_without_interior_errors() {
        let w = simplex_lattice_weights(2, 1).unwrap();
        let mut subs = build_subproblems(w, 1, 1).unwrap();
        assert!(matches!(augment_boundary_neighborhoods(&mut subs), Err(Error::Config(_))));
    }

    #[test]
    fn weight_parsing_round_trip() {
        let text = "0.0 1.0\n0.25 0.75\n\n0.5 0.5\n";
        let w = parse_weights(text).unwrap();
        assert_eq!(w.len(), 3);
        assert_eq!(w[1], vec![0.25, 0.75]);
        assert!(parse_weights("0.2 0.2\n").is_err());
        assert!(parse_weights("0.5 x\n").is_err());
        assert!(parse_weights("0.5 0.25 0.25\n0.5 0.5\n").is_err());
        assert!(parse_weights("").is_err());
    }
}
