//! Subproblem objective functions: the weighted Lp family (weighted sum at
//! p=1, Tchebycheff at p=infinity) and the generalized GLp family, which
//! rescales Lp by a weight-only factor h(w) so that every subproblem carves
//! out a preference region of comparable size.

use crate::error::{Error, Result};
use crate::types::ReferenceMode;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::str::FromStr;

/// Weight entries below this are raised to it, then the vector is
/// renormalized. Keeps 1/w and h(w) finite on lattice boundary weights.
pub const WEIGHT_FLOOR: f64 = 1e-6;

/// Exponent of the Lp / GLp family: a finite p >= 1 or infinity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Exponent {
    Finite(f64),
    Infinity,
}

impl Exponent {
    pub fn finite(p: f64) -> Result<Self> {
        if !(p >= 1.0) || !p.is_finite() {
            return Err(Error::Parameter(format!("exponent must satisfy p >= 1, got {p}")));
        }
        Ok(Exponent::Finite(p))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Exponent::Infinity)
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(p) => write!(f, "{p}"),
            Exponent::Infinity => write!(f, "inf"),
        }
    }
}

impl FromStr for Exponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "inf" | "infinity" | "∞" => Ok(Exponent::Infinity),
            t => {
                let p: f64 = t
                    .parse()
                    .map_err(|_| Error::Parameter(format!("unparseable exponent {s:?}")))?;
                if p.is_infinite() && p > 0.0 {
                    return Ok(Exponent::Infinity);
                }
                Exponent::finite(p)
            }
        }
    }
}

impl Serialize for Exponent {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Exponent::Finite(p) => ser.serialize_f64(*p),
            Exponent::Infinity => ser.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Exponent {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        let raw = Raw::deserialize(de)?;
        let parsed = match raw {
            Raw::Num(p) if p.is_infinite() && p > 0.0 => Ok(Exponent::Infinity),
            Raw::Num(p) => Exponent::finite(p),
            Raw::Text(s) => s.parse(),
        };
        parsed.map_err(serde::de::Error::custom)
    }
}

/// Scalarization family selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Lp,
    GLp,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Lp => write!(f, "lp"),
            Family::GLp => write!(f, "glp"),
        }
    }
}

/// A configured scalarizer: family, exponent, and reference-point mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scalarizer {
    pub family: Family,
    pub p: Exponent,
    pub reference: ReferenceMode,
}

impl Scalarizer {
    pub fn lp(p: Exponent) -> Self {
        Scalarizer { family: Family::Lp, p, reference: ReferenceMode::Ideal }
    }

    pub fn glp(p: Exponent) -> Self {
        Scalarizer { family: Family::GLp, p, reference: ReferenceMode::Ideal }
    }

    /// Scalarization value given a clamped weight and its precomputed h(w).
    /// The h argument is ignored by the Lp family.
    pub fn value(&self, f: &[f64], w: &[f64], h: f64, z: &[f64]) -> f64 {
        let base = match self.p {
            Exponent::Finite(p) => lp_raw(f, w, z, p),
            Exponent::Infinity => tch_raw(f, w, z),
        };
        match self.family {
            Family::Lp => base,
            Family::GLp => base * h,
        }
    }
}

fn check_dims(f: &[f64], w: &[f64], z: &[f64]) -> Result<()> {
    if w.len() != f.len() {
        return Err(Error::Dimension { expected: f.len(), got: w.len() });
    }
    if z.len() != f.len() {
        return Err(Error::Dimension { expected: f.len(), got: z.len() });
    }
    Ok(())
}

/// Weighted p-norm of f - z: ( sum_i (w_i |f_i - z_i|)^p )^(1/p), 1 <= p < inf.
///
/// The largest term is factored out before exponentiation, so extreme
/// exponents (p in the thousands) neither overflow nor underflow to zero.
pub fn scalarize_lp(f: &[f64], w: &[f64], z: &[f64], p: f64) -> Result<f64> {
    if !(p >= 1.0) || !p.is_finite() {
        return Err(Error::Parameter(format!("lp exponent must satisfy 1 <= p < inf, got {p}")));
    }
    check_dims(f, w, z)?;
    Ok(lp_raw(f, w, z, p))
}

fn lp_raw(f: &[f64], w: &[f64], z: &[f64], p: f64) -> f64 {
    if p == 1.0 {
        return f.iter().zip(w).zip(z).map(|((fi, wi), zi)| wi * (fi - zi).abs()).sum();
    }
    let mut max = 0.0f64;
    for ((fi, wi), zi) in f.iter().zip(w).zip(z) {
        let a = wi * (fi - zi).abs();
        if a > max {
            max = a;
        }
    }
    if max == 0.0 || !max.is_finite() {
        return max;
    }
    let mut sum = 0.0;
    for ((fi, wi), zi) in f.iter().zip(w).zip(z) {
        let t = wi * (fi - zi).abs() / max;
        sum += if p == 2.0 { t * t } else { t.powf(p) };
    }
    max * sum.powf(1.0 / p)
}

/// Tchebycheff value: max_i w_i (f_i - z_i).
pub fn scalarize_tch(f: &[f64], w: &[f64], z: &[f64]) -> Result<f64> {
    check_dims(f, w, z)?;
    Ok(tch_raw(f, w, z))
}

fn tch_raw(f: &[f64], w: &[f64], z: &[f64]) -> f64 {
    f.iter()
        .zip(w)
        .zip(z)
        .map(|((fi, wi), zi)| wi * (fi - zi))
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Preference-region equalizer h(w) = (prod_i w_i)^(-1/m).
///
/// Minimized at the uniform weight, where it equals m.
pub fn h_weight(w: &[f64]) -> Result<f64> {
    if let Some(bad) = w.iter().find(|&&wi| wi <= 0.0) {
        return Err(Error::Domain(format!("h(w) needs strictly positive weights, got {bad}")));
    }
    let prod: f64 = w.iter().product();
    Ok(prod.powf(-1.0 / w.len() as f64))
}

/// GLp value: the Lp value (Tchebycheff inner form when p = infinity)
/// multiplied by h(w).
pub fn scalarize_glp(f: &[f64], w: &[f64], z: &[f64], p: Exponent) -> Result<f64> {
    let base = match p {
        Exponent::Finite(p) => scalarize_lp(f, w, z, p)?,
        Exponent::Infinity => scalarize_tch(f, w, z)?,
    };
    Ok(base * h_weight(w)?)
}

/// Direction vector lambda_i = 1/w_i of a strictly positive weight.
pub fn direction_vector(w: &[f64]) -> Result<Vec<f64>> {
    if let Some(bad) = w.iter().find(|&&wi| wi <= 0.0) {
        return Err(Error::Domain(format!(
            "direction vector needs strictly positive weights, got {bad}"
        )));
    }
    Ok(w.iter().map(|wi| 1.0 / wi).collect())
}

/// Raise entries below [`WEIGHT_FLOOR`] to the floor and renormalize to
/// sum 1. Raw weights stay in use for geometry; every scalarization sees
/// the clamped vector.
pub fn clamp_weights(w: &[f64]) -> Vec<f64> {
    let mut out: Vec<f64> = w.iter().map(|wi| wi.max(WEIGHT_FLOOR)).collect();
    let sum: f64 = out.iter().sum();
    for wi in &mut out {
        *wi /= sum;
    }
    out
}
