//! Benchmark problems: the ZDT and DTLZ real-coded families plus randomly
//! generated multi-objective knapsack (binary) and TSP (permutation)
//! instances, with known Pareto-front bounds where they exist.

mod dtlz;
mod knapsack;
mod tsp;
mod zdt;

pub use dtlz::{Dtlz1, Dtlz3, Dtlz5};
pub use knapsack::{repair_knapsack, MokpInstance};
pub use tsp::MotspInstance;
pub use zdt::{Zdt1, Zdt2, Zdt3, Zdt4, ZDT3_F1_INTERVALS};

use crate::error::{Error, Result};
use crate::types::Encoding;
use rand::RngCore;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

/// Problem family tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Zdt1,
    Zdt2,
    Zdt3,
    Zdt4,
    Dtlz1,
    Dtlz3,
    Dtlz5,
    Mokp,
    Motsp,
}

impl Family {
    pub const ALL: [Family; 9] = [
        Family::Zdt1,
        Family::Zdt2,
        Family::Zdt3,
        Family::Zdt4,
        Family::Dtlz1,
        Family::Dtlz3,
        Family::Dtlz5,
        Family::Mokp,
        Family::Motsp,
    ];

    pub fn encoding_kind(&self) -> EncodingKind {
        match self {
            Family::Mokp => EncodingKind::Binary,
            Family::Motsp => EncodingKind::Permutation,
            _ => EncodingKind::Real,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::Zdt1 => "zdt1",
            Family::Zdt2 => "zdt2",
            Family::Zdt3 => "zdt3",
            Family::Zdt4 => "zdt4",
            Family::Dtlz1 => "dtlz1",
            Family::Dtlz3 => "dtlz3",
            Family::Dtlz5 => "dtlz5",
            Family::Mokp => "mokp",
            Family::Motsp => "motsp",
        };
        write!(f, "{s}")
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "zdt1" => Ok(Family::Zdt1),
            "zdt2" => Ok(Family::Zdt2),
            "zdt3" => Ok(Family::Zdt3),
            "zdt4" => Ok(Family::Zdt4),
            "dtlz1" => Ok(Family::Dtlz1),
            "dtlz3" => Ok(Family::Dtlz3),
            "dtlz5" => Ok(Family::Dtlz5),
            "mokp" => Ok(Family::Mokp),
            "motsp" => Ok(Family::Motsp),
            other => Err(Error::Config(format!("unknown problem {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EncodingKind {
    Real,
    Binary,
    Permutation,
}

/// A fully specified problem: family, objective count, and the instance
/// seed for the randomly generated combinatorial families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProblemSpec {
    pub family: Family,
    pub m: usize,
    pub instance_seed: u64,
}

impl ProblemSpec {
    pub fn new(family: Family, m: usize, instance_seed: u64) -> Result<Self> {
        match family {
            Family::Zdt1 | Family::Zdt2 | Family::Zdt3 | Family::Zdt4 => {
                if m != 2 {
                    return Err(Error::Config(format!("{family} is 2-objective, got m={m}")));
                }
            }
            Family::Dtlz1 | Family::Dtlz3 | Family::Dtlz5 => {
                if m < 2 {
                    return Err(Error::Config(format!("{family} needs m >= 2, got m={m}")));
                }
            }
            Family::Mokp | Family::Motsp => {
                if !(2..=3).contains(&m) {
                    return Err(Error::Config(format!("{family} supports m in {{2,3}}, got m={m}")));
                }
            }
        }
        Ok(ProblemSpec { family, m, instance_seed })
    }

    /// Decision-space dimension for this family and m.
    pub fn n(&self) -> usize {
        match self.family {
            Family::Zdt1 | Family::Zdt2 | Family::Zdt3 => 30,
            Family::Zdt4 => 10,
            Family::Dtlz1 | Family::Dtlz3 | Family::Dtlz5 => self.m + 4,
            Family::Mokp => 250,
            Family::Motsp => 60,
        }
    }

    /// Instantiate the problem (generating the instance for MOKP/MOTSP).
    pub fn build(&self) -> Result<Box<dyn Problem>> {
        Ok(match self.family {
            Family::Zdt1 => Box::new(Zdt1),
            Family::Zdt2 => Box::new(Zdt2),
            Family::Zdt3 => Box::new(Zdt3),
            Family::Zdt4 => Box::new(Zdt4),
            Family::Dtlz1 => Box::new(Dtlz1::new(self.m)),
            Family::Dtlz3 => Box::new(Dtlz3::new(self.m)),
            Family::Dtlz5 => Box::new(Dtlz5::new(self.m)),
            Family::Mokp => Box::new(MokpInstance::generate(self.m, self.instance_seed)),
            Family::Motsp => Box::new(MotspInstance::generate(self.m, self.instance_seed)),
        })
    }
}

/// A benchmark problem under minimization.
pub trait Problem: Send + Sync {
    fn family(&self) -> Family;
    fn m(&self) -> usize;
    fn n(&self) -> usize;

    fn encoding_kind(&self) -> EncodingKind {
        self.family().encoding_kind()
    }

    /// Box bounds for real encodings, None otherwise.
    fn bounds(&self) -> Option<(Vec<f64>, Vec<f64>)> {
        None
    }

    fn evaluate(&self, x: &Encoding) -> Result<Vec<f64>>;

    /// Restore feasibility where the encoding alone does not guarantee it.
    /// Identity for every family except the knapsack.
    fn repair(&self, x: Encoding) -> Encoding {
        x
    }

    /// Analytic per-objective Pareto-front (min, max); None when the front
    /// is unknown and must be approximated from pooled run data.
    fn pf_bounds(&self) -> Option<(Vec<f64>, Vec<f64>)>;

    /// Uniform random encoding of the right shape for this problem.
    fn random_encoding(&self, rng: &mut dyn RngCore) -> Encoding {
        random_encoding_for(self, rng)
    }
}

fn random_encoding_for(problem: &(impl Problem + ?Sized), rng: &mut dyn RngCore) -> Encoding {
    use rand::seq::SliceRandom;
    use rand::Rng;
    match problem.encoding_kind() {
        EncodingKind::Real => {
            let (lo, hi) = problem
                .bounds()
                .expect("real-coded problems declare box bounds");
            Encoding::Real(
                lo.iter().zip(&hi).map(|(&l, &u)| rng.random_range(l..=u)).collect(),
            )
        }
        EncodingKind::Binary => {
            Encoding::Binary((0..problem.n()).map(|_| rng.random_bool(0.5)).collect())
        }
        EncodingKind::Permutation => {
            let mut perm: Vec<usize> = (0..problem.n()).collect();
            perm.shuffle(rng);
            Encoding::Permutation(perm)
        }
    }
}

pub(crate) fn expect_real<'a>(x: &'a Encoding, n: usize) -> Result<&'a [f64]> {
    match x {
        Encoding::Real(v) if v.len() == n => Ok(v),
        Encoding::Real(v) => Err(Error::Encoding(format!(
            "expected {n} real variables, got {}",
            v.len()
        ))),
        _ => Err(Error::Encoding("expected a real-coded solution".into())),
    }
}

/// Generated instance data that can be persisted and reloaded bit-exactly.
#[derive(Debug, Clone, PartialEq)]
pub enum InstanceData {
    Mokp(MokpInstance),
    Motsp(MotspInstance),
}

impl InstanceData {
    pub fn generate(family: Family, m: usize, seed: u64) -> Result<Self> {
        match family {
            Family::Mokp => Ok(InstanceData::Mokp(MokpInstance::generate(m, seed))),
            Family::Motsp => Ok(InstanceData::Motsp(MotspInstance::generate(m, seed))),
            other => Err(Error::Config(format!("{other} has no generated instance"))),
        }
    }

    pub fn to_text(&self) -> String {
        match self {
            InstanceData::Mokp(inst) => inst.to_text(),
            InstanceData::Motsp(inst) => inst.to_text(),
        }
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let family = text
            .lines()
            .find_map(|l| l.strip_prefix("family "))
            .ok_or_else(|| Error::Parameter("instance text is missing the family line".into()))?;
        match family.trim() {
            "mokp" => Ok(InstanceData::Mokp(MokpInstance::from_text(text)?)),
            "motsp" => Ok(InstanceData::Motsp(MotspInstance::from_text(text)?)),
            other => Err(Error::Parameter(format!("unknown instance family {other:?}"))),
        }
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_text(&std::fs::read_to_string(path)?)
    }
}

pub(crate) struct HeaderFields {
    pub m: usize,
    pub n: usize,
    pub seed: u64,
}

pub(crate) fn parse_header(text: &str, family: &str) -> Result<HeaderFields> {
    let mut m = None;
    let mut n = None;
    let mut seed = None;
    for line in text.lines() {
        if let Some(v) = line.strip_prefix("family ") {
            if v.trim() != family {
                return Err(Error::Parameter(format!("expected a {family} instance")));
            }
        } else if let Some(v) = line.strip_prefix("m ") {
            m = v.trim().parse().ok();
        } else if let Some(v) = line.strip_prefix("n ") {
            n = v.trim().parse().ok();
        } else if let Some(v) = line.strip_prefix("seed ") {
            seed = v.trim().parse().ok();
        }
    }
    match (m, n, seed) {
        (Some(m), Some(n), Some(seed)) => Ok(HeaderFields { m, n, seed }),
        _ => Err(Error::Parameter("instance header needs m, n, and seed lines".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn spec_validation() {
        assert!(ProblemSpec::new(Family::Zdt1, 3, 0).is_err());
        assert!(ProblemSpec::new(Family::Mokp, 4, 0).is_err());
        assert!(ProblemSpec::new(Family::Dtlz5, 3, 0).is_ok());
        let spec = ProblemSpec::new(Family::Dtlz3, 3, 0).unwrap();
        assert_eq!(spec.n(), 7);
        assert_eq!(ProblemSpec::new(Family::Zdt4, 2, 0).unwrap().n(), 10);
    }

    #[test]
    fn family_parsing_round_trips() {
        for f in Family::ALL {
            assert_eq!(f.to_string().parse::<Family>().unwrap(), f);
        }
        assert!("zdt9".parse::<Family>().is_err());
    }

    #[test]
    fn random_encodings_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for family in Family::ALL {
            let spec = ProblemSpec::new(family, 2, 1).unwrap();
            let problem = spec.build().unwrap();
            let x = problem.random_encoding(&mut rng);
            assert_eq!(x.len(), problem.n());
            match x {
                Encoding::Real(v) => {
                    let (lo, hi) = problem.bounds().unwrap();
                    for i in 0..v.len() {
                        assert!(v[i] >= lo[i] && v[i] <= hi[i]);
                    }
                }
                Encoding::Permutation(p) => {
                    let mut seen = vec![false; p.len()];
                    for &i in &p {
                        assert!(!seen[i]);
                        seen[i] = true;
                    }
                }
                Encoding::Binary(_) => {}
            }
            let f = problem.evaluate(&problem.repair(problem.random_encoding(&mut rng))).unwrap();
            assert_eq!(f.len(), 2);
            assert!(f.iter().all(|v| v.is_finite()));
        }
    }

    #[test]
    fn instance_text_round_trips() {
        for family in [Family::Mokp, Family::Motsp] {
            for m in [2, 3] {
                let inst = InstanceData::generate(family, m, 99).unwrap();
                let text = inst.to_text();
                let back = InstanceData::from_text(&text).unwrap();
                assert_eq!(back, inst);
                assert_eq!(back.to_text(), text);
            }
        }
    }

    #[test]
    fn evaluate_rejects_wrong_encoding() {
        let p = ProblemSpec::new(Family::Zdt1, 2, 0).unwrap().build().unwrap();
        assert!(p.evaluate(&Encoding::Binary(vec![true; 30])).is_err());
        assert!(p.evaluate(&Encoding::Real(vec![0.5; 7])).is_err());
    }
}
