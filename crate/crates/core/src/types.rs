//! Objective-space vocabulary: objective vectors, Pareto dominance,
//! reference points, individuals, and populations.

use crate::error::{Error, Result};

/// Point in m-dimensional objective space (minimization throughout).
pub type ObjectiveVector = Vec<f64>;

/// Default per-objective offset for the utopian reference mode.
pub const DEFAULT_UTOPIAN_EPSILON: f64 = 1e-4;

/// Solution encoding. Real vectors live in per-variable box bounds, bit
/// strings are fixed length, permutations cover 0..n-1 exactly once.
#[derive(Debug, Clone, PartialEq)]
pub enum Encoding {
    Real(Vec<f64>),
    Binary(Vec<bool>),
    Permutation(Vec<usize>),
}

impl Encoding {
    pub fn len(&self) -> usize {
        match self {
            Encoding::Real(v) => v.len(),
            Encoding::Binary(v) => v.len(),
            Encoding::Permutation(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Encoded solution paired with its objective vector.
#[derive(Debug, Clone)]
pub struct Individual {
    pub encoding: Encoding,
    pub objectives: ObjectiveVector,
}

/// Fixed-size population; index j holds the incumbent of subproblem j.
pub type Population = Vec<Individual>;

/// Reference point mode: the raw running minimum, or that minimum shifted
/// down by a small epsilon per objective.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ReferenceMode {
    Ideal,
    Utopian { epsilon: f64 },
}

/// Running per-objective minimum over every evaluation seen so far.
///
/// The stored minima update monotonically; in utopian mode the epsilon
/// offset is applied when the values are read, so updates behave the same
/// in both modes.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferencePoint {
    ideal: Vec<f64>,
    pub mode: ReferenceMode,
}

impl ReferencePoint {
    /// Starts at +inf per objective; the first observation sets the minima.
    pub fn unbounded(m: usize, mode: ReferenceMode) -> Self {
        ReferencePoint { ideal: vec![f64::INFINITY; m], mode }
    }

    /// Entry-wise minimum over a non-empty set of objective vectors.
    pub fn from_objectives<'a, I>(points: I, mode: ReferenceMode) -> Result<Self>
    where
        I: IntoIterator<Item = &'a [f64]>,
    {
        let mut iter = points.into_iter();
        let first = iter
            .next()
            .ok_or_else(|| Error::Parameter("reference point needs at least one vector".into()))?;
        let mut z = ReferencePoint { ideal: first.to_vec(), mode };
        for f in iter {
            z.update(f)?;
        }
        Ok(z)
    }

    pub fn dim(&self) -> usize {
        self.ideal.len()
    }

    /// Lower the stored minima by a newly evaluated vector.
    pub fn update(&mut self, f: &[f64]) -> Result<()> {
        if f.len() != self.ideal.len() {
            return Err(Error::Dimension { expected: self.ideal.len(), got: f.len() });
        }
        for (zi, fi) in self.ideal.iter_mut().zip(f) {
            if *fi < *zi {
                *zi = *fi;
            }
        }
        Ok(())
    }

    /// Pure form of [`update`](Self::update).
    pub fn updated(&self, f: &[f64]) -> Result<Self> {
        let mut z = self.clone();
        z.update(f)?;
        Ok(z)
    }

    /// Values used by scalarization: the minima, shifted by -epsilon in
    /// utopian mode.
    pub fn values(&self) -> Vec<f64> {
        match self.mode {
            ReferenceMode::Ideal => self.ideal.clone(),
            ReferenceMode::Utopian { epsilon } => {
                self.ideal.iter().map(|z| z - epsilon).collect()
            }
        }
    }

    /// The raw running minima regardless of mode.
    pub fn ideal(&self) -> &[f64] {
        &self.ideal
    }
}

/// Pareto dominance: u is nowhere worse than v and strictly better somewhere.
pub fn dominates(u: &[f64], v: &[f64]) -> Result<bool> {
    if u.len() != v.len() {
        return Err(Error::Dimension { expected: u.len(), got: v.len() });
    }
    Ok(dominates_raw(u, v))
}

/// Equal-length fast path for hot loops.
pub(crate) fn dominates_raw(u: &[f64], v: &[f64]) -> bool {
    let mut strict = false;
    for (a, b) in u.iter().zip(v) {
        if a > b {
            return false;
        }
        if a < b {
            strict = true;
        }
    }
    strict
}

/// Members not dominated by any other member, duplicates collapsed to one
/// copy, first-seen order preserved. Empty input yields an empty output.
pub fn nondominated_filter(points: &[ObjectiveVector]) -> Result<Vec<ObjectiveVector>> {
    let Some(first) = points.first() else {
        return Ok(Vec::new());
    };
    let m = first.len();
    if let Some(bad) = points.iter().find(|p| p.len() != m) {
        return Err(Error::Dimension { expected: m, got: bad.len() });
    }
    let mut kept: Vec<ObjectiveVector> = Vec::new();
    'outer: for (i, p) in points.iter().enumerate() {
        for (j, q) in points.iter().enumerate() {
            if i != j && dominates_raw(q, p) {
                continue 'outer;
            }
        }
        if kept.iter().any(|k| k == p) {
            continue;
        }
        kept.push(p.clone());
    }
    Ok(kept)
}
