//! Front quality metrics: normalized hypervolume and a rank-sum test for
//! comparing metric samples across runs.

use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};
use crate::types::{nondominated_filter, ObjectiveVector};

/// Reference point coordinate used after normalization to [0, 1] ranges.
pub const REFERENCE_MARGIN: f64 = 1.1;

/// The reference point (1.1, ..., 1.1).
pub fn reference_point(m: usize) -> Vec<f64> {
    vec![REFERENCE_MARGIN; m]
}

/// Map points into [0, 1]^m given per-coordinate front bounds, dropping any
/// point that lands at or beyond the reference margin in some coordinate.
pub fn normalize(points: &[ObjectiveVector], lo: &[f64], hi: &[f64]) -> Result<Vec<ObjectiveVector>> {
    if lo.len() != hi.len() {
        return Err(Error::Dimension { expected: lo.len(), got: hi.len() });
    }
    for (l, h) in lo.iter().zip(hi) {
        if !(h > l) {
            return Err(Error::Config(format!(
                "degenerate normalization bounds [{l}, {h}]"
            )));
        }
    }
    let mut out = Vec::with_capacity(points.len());
    for f in points {
        if f.len() != lo.len() {
            return Err(Error::Dimension { expected: lo.len(), got: f.len() });
        }
        let scaled: Vec<f64> = f
            .iter()
            .zip(lo.iter().zip(hi))
            .map(|(v, (l, h))| (v - l) / (h - l))
            .collect();
        if scaled.iter().all(|&v| v < REFERENCE_MARGIN) {
            out.push(scaled);
        }
    }
    Ok(out)
}

/// Min/max per coordinate over the nondominated members of all fronts
/// pooled together.
pub fn pooled_pf_bounds(fronts: &[Vec<ObjectiveVector>]) -> Result<(Vec<f64>, Vec<f64>)> {
    let pool: Vec<ObjectiveVector> = fronts.iter().flatten().cloned().collect();
    let nd = nondominated_filter(&pool)?;
    if nd.is_empty() {
        return Err(Error::Parameter("cannot derive bounds from an empty pool".into()));
    }
    let m = nd[0].len();
    let mut lo = vec![f64::INFINITY; m];
    let mut hi = vec![f64::NEG_INFINITY; m];
    for f in &nd {
        for i in 0..m {
            lo[i] = lo[i].min(f[i]);
            hi[i] = hi[i].max(f[i]);
        }
    }
    Ok((lo, hi))
}

/// Area covered between a 2-d front and the reference point. Input may be
/// unsorted and contain dominated points.
fn sweep_2d(points: &[ObjectiveVector], zh: &[f64]) -> f64 {
    let mut pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|f| f[0] < zh[0] && f[1] < zh[1])
        .map(|f| (f[0], f[1]))
        .collect();
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut kept: Vec<(f64, f64)> = Vec::with_capacity(pts.len());
    for (x, y) in pts {
        match kept.last() {
            Some(&(_, last_y)) if y >= last_y => {}
            _ => kept.push((x, y)),
        }
    }
    let mut hv = 0.0;
    for (k, &(x, y)) in kept.iter().enumerate() {
        let next_x = if k + 1 < kept.len() { kept[k + 1].0 } else { zh[0] };
        hv += (next_x - x) * (zh[1] - y);
    }
    hv
}

/// Recursive slicing on the last objective; two-dimensional base case.
fn slice_hv(points: &[ObjectiveVector], zh: &[f64]) -> f64 {
    let m = zh.len();
    if m == 2 {
        return sweep_2d(points, zh);
    }
    let mut pts: Vec<&ObjectiveVector> =
        points.iter().filter(|f| f.iter().zip(zh).all(|(v, r)| v < r)).collect();
    pts.sort_by(|a, b| a[m - 1].partial_cmp(&b[m - 1]).unwrap());
    let mut hv = 0.0;
    let mut prefix: Vec<ObjectiveVector> = Vec::with_capacity(pts.len());
    for (k, f) in pts.iter().enumerate() {
        prefix.push(f[..m - 1].to_vec());
        let slice_end = if k + 1 < pts.len() { pts[k + 1][m - 1] } else { zh[m - 1] };
        let depth = slice_end - f[m - 1];
        if depth > 0.0 {
            hv += depth * slice_hv(&prefix, &zh[..m - 1]);
        }
    }
    hv
}

/// Hypervolume dominated by `points` up to the reference point `zh`
/// (minimization). Dominated and duplicate points contribute nothing; an
/// empty set has volume zero.
pub fn hypervolume(points: &[ObjectiveVector], zh: &[f64]) -> Result<f64> {
    let m = zh.len();
    if m < 2 {
        return Err(Error::Parameter(format!("hypervolume needs at least 2 objectives, got {m}")));
    }
    for f in points {
        if f.len() != m {
            return Err(Error::Dimension { expected: m, got: f.len() });
        }
        if f.iter().any(|v| !v.is_finite()) {
            return Err(Error::Numeric("non-finite objective value in hypervolume input".into()));
        }
    }
    if points.is_empty() {
        return Ok(0.0);
    }
    let front = nondominated_filter(points)?;
    Ok(slice_hv(&front, zh))
}

/// Normalize a front by the given bounds and measure hypervolume against
/// the (1.1, ..., 1.1) reference point.
pub fn normalized_hypervolume(
    front: &[ObjectiveVector],
    lo: &[f64],
    hi: &[f64],
) -> Result<f64> {
    let scaled = normalize(front, lo, hi)?;
    hypervolume(&scaled, &reference_point(lo.len()))
}

/// Outcome of a two-sample comparison. `Better` means the first sample's
/// median is higher; flip the reading for metrics where lower is better.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Comparison {
    Better,
    Worse,
    Similar,
}

fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Two-sided Wilcoxon rank-sum test via the tie-corrected normal
/// approximation. Requires at least 5 observations per side.
pub fn wilcoxon_rank_sum(a: &[f64], b: &[f64], alpha: f64) -> Result<Comparison> {
    if a.len() < 5 || b.len() < 5 {
        return Err(Error::Parameter(format!(
            "rank-sum test needs at least 5 samples per side, got {} and {}",
            a.len(),
            b.len()
        )));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Parameter(format!("significance level must lie in (0, 1), got {alpha}")));
    }
    if a.iter().chain(b).any(|v| !v.is_finite()) {
        return Err(Error::Numeric("non-finite sample in rank-sum test".into()));
    }

    let mut all: Vec<(f64, bool)> = a
        .iter()
        .map(|&v| (v, true))
        .chain(b.iter().map(|&v| (v, false)))
        .collect();
    all.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
    if all.first().unwrap().0 == all.last().unwrap().0 {
        return Ok(Comparison::Similar);
    }

    let mut ranks = vec![0.0; all.len()];
    let mut tie_term = 0.0;
    let mut i = 0;
    while i < all.len() {
        let mut j = i;
        while j + 1 < all.len() && all[j + 1].0 == all[i].0 {
            j += 1;
        }
        let avg_rank = (i + j + 2) as f64 / 2.0;
        for r in ranks.iter_mut().take(j + 1).skip(i) {
            *r = avg_rank;
        }
        let t = (j - i + 1) as f64;
        tie_term += t * t * t - t;
        i = j + 1;
    }

    let n = a.len() as f64;
    let m = b.len() as f64;
    let total = n + m;
    let rank_sum: f64 =
        ranks.iter().zip(&all).filter(|(_, (_, from_a))| *from_a).map(|(r, _)| r).sum();
    let mean = n * (total + 1.0) / 2.0;
    let variance = n * m / 12.0 * ((total + 1.0) - tie_term / (total * (total - 1.0)));
    if variance <= 0.0 {
        return Ok(Comparison::Similar);
    }
    let z = (rank_sum - mean) / variance.sqrt();
    let normal = Normal::new(0.0, 1.0).expect("standard normal");
    let p = 2.0 * (1.0 - normal.cdf(z.abs()));
    if p >= alpha {
        return Ok(Comparison::Similar);
    }
    let (med_a, med_b) = (median(a), median(b));
    if med_a > med_b {
        Ok(Comparison::Better)
    } else if med_a < med_b {
        Ok(Comparison::Worse)
    } else {
        Ok(Comparison::Similar)
    }
}

/// Largest Euclidean distance between consecutive front points after
/// sorting by the first objective. Zero for fewer than two points.
pub fn max_consecutive_gap(front: &[ObjectiveVector]) -> Result<f64> {
    if front.len() < 2 {
        return Ok(0.0);
    }
    let m = front[0].len();
    let mut pts = front.to_vec();
    for f in &pts {
        if f.len() != m {
            return Err(Error::Dimension { expected: m, got: f.len() });
        }
    }
    pts.sort_by(|a, b| a[0].partial_cmp(&b[0]).unwrap());
    let gap = pts
        .windows(2)
        .map(|w| {
            w[0].iter()
                .zip(&w[1])
                .map(|(u, v)| (u - v) * (u - v))
                .sum::<f64>()
                .sqrt()
        })
        .fold(0.0, f64::max);
    Ok(gap)
}
