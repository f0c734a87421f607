//! Multi-objective 0/1 knapsack: 250 items, integer profits and weights
//! drawn uniformly from [10, 100], one capacity per objective set to half
//! that objective's total weight. Profits are negated so the framework
//! minimizes.

use super::{parse_header, Family, Problem};
use crate::error::{Error, Result};
use crate::types::Encoding;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::fmt::Write as _;

pub const MOKP_ITEMS: usize = 250;

#[derive(Debug, Clone, PartialEq)]
pub struct MokpInstance {
    pub m: usize,
    pub n: usize,
    pub seed: u64,
    /// profits[i][j]: profit of item j under objective i
    pub profits: Vec<Vec<u32>>,
    /// weights[i][j]: weight of item j under objective i
    pub weights: Vec<Vec<u32>>,
    pub capacities: Vec<u64>,
}

impl MokpInstance {
    pub fn generate(m: usize, seed: u64) -> Self {
        let n = MOKP_ITEMS;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut draw = |_| (0..n).map(|_| rng.random_range(10..=100u32)).collect::<Vec<u32>>();
        let profits: Vec<Vec<u32>> = (0..m).map(&mut draw).collect();
        let weights: Vec<Vec<u32>> = (0..m).map(&mut draw).collect();
        let capacities = weights
            .iter()
            .map(|row| row.iter().map(|&w| w as u64).sum::<u64>() / 2)
            .collect();
        MokpInstance { m, n, seed, profits, weights, capacities }
    }

    fn expect_bits<'a>(&self, x: &'a Encoding) -> Result<&'a [bool]> {
        match x {
            Encoding::Binary(b) if b.len() == self.n => Ok(b),
            Encoding::Binary(b) => {
                Err(Error::Encoding(format!("expected {} bits, got {}", self.n, b.len())))
            }
            _ => Err(Error::Encoding("expected a bit-string solution".into())),
        }
    }

    /// Worst (largest) profit/weight ratio over objectives, per item.
    fn removal_ratio(&self, item: usize) -> f64 {
        (0..self.m)
            .map(|i| self.profits[i][item] as f64 / self.weights[i][item] as f64)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "family mokp").unwrap();
        writeln!(out, "m {}", self.m).unwrap();
        writeln!(out, "n {}", self.n).unwrap();
        writeln!(out, "seed {}", self.seed).unwrap();
        for (i, row) in self.profits.iter().enumerate() {
            writeln!(out, "profits {i} {}", join_ints(row)).unwrap();
        }
        for (i, row) in self.weights.iter().enumerate() {
            writeln!(out, "weights {i} {}", join_ints(row)).unwrap();
        }
        let caps: Vec<String> = self.capacities.iter().map(|c| c.to_string()).collect();
        writeln!(out, "capacities {}", caps.join(" ")).unwrap();
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let header = parse_header(text, "mokp")?;
        let mut profits = vec![Vec::new(); header.m];
        let mut weights = vec![Vec::new(); header.m];
        let mut capacities = Vec::new();
        for line in text.lines() {
            if let Some(rest) = line.strip_prefix("profits ") {
                let (i, row) = split_indexed_ints(rest)?;
                profits[i] = row;
            } else if let Some(rest) = line.strip_prefix("weights ") {
                let (i, row) = split_indexed_ints(rest)?;
                weights[i] = row;
            } else if let Some(rest) = line.strip_prefix("capacities ") {
                capacities = rest
                    .split_whitespace()
                    .map(|t| t.parse().map_err(|_| Error::Parameter("bad capacity".into())))
                    .collect::<Result<_>>()?;
            }
        }
        if profits.iter().any(|r| r.len() != header.n)
            || weights.iter().any(|r| r.len() != header.n)
            || capacities.len() != header.m
        {
            return Err(Error::Parameter("incomplete knapsack instance".into()));
        }
        Ok(MokpInstance {
            m: header.m,
            n: header.n,
            seed: header.seed,
            profits,
            weights,
            capacities,
        })
    }
}

fn join_ints(row: &[u32]) -> String {
    row.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
}

fn split_indexed_ints(rest: &str) -> Result<(usize, Vec<u32>)> {
    let mut it = rest.split_whitespace();
    let idx: usize = it
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| Error::Parameter("missing objective index".into()))?;
    let row = it
        .map(|t| t.parse().map_err(|_| Error::Parameter(format!("bad integer {t:?}"))))
        .collect::<Result<Vec<u32>>>()?;
    Ok((idx, row))
}

/// Drop included items, worst max-ratio first, until every capacity holds.
pub fn repair_knapsack(instance: &MokpInstance, mut bits: Vec<bool>) -> Vec<bool> {
    let mut loads: Vec<u64> = (0..instance.m)
        .map(|i| {
            bits.iter()
                .zip(&instance.weights[i])
                .filter(|(&b, _)| b)
                .map(|(_, &w)| w as u64)
                .sum()
        })
        .collect();
    while loads.iter().zip(&instance.capacities).any(|(l, c)| l > c) {
        let mut victim = None;
        let mut worst = f64::INFINITY;
        for (j, &b) in bits.iter().enumerate() {
            if b {
                let r = instance.removal_ratio(j);
                if r < worst {
                    worst = r;
                    victim = Some(j);
                }
            }
        }
        let Some(j) = victim else { break };
        bits[j] = false;
        for (i, load) in loads.iter_mut().enumerate() {
            *load -= instance.weights[i][j] as u64;
        }
    }
    bits
}

impl Problem for MokpInstance {
    fn family(&self) -> Family {
        Family::Mokp
    }

    fn m(&self) -> usize {
        self.m
    }

    fn n(&self) -> usize {
        self.n
    }

    fn evaluate(&self, x: &Encoding) -> Result<Vec<f64>> {
        let bits = self.expect_bits(x)?;
        Ok((0..self.m)
            .map(|i| {
                let total: u64 = bits
                    .iter()
                    .zip(&self.profits[i])
                    .filter(|(&b, _)| b)
                    .map(|(_, &p)| p as u64)
                    .sum();
                -(total as f64)
            })
            .collect())
    }

    fn repair(&self, x: Encoding) -> Encoding {
        match x {
            Encoding::Binary(bits) => Encoding::Binary(repair_knapsack(self, bits)),
            other => other,
        }
    }

    fn pf_bounds(&self) -> Option<(Vec<f64>, Vec<f64>)> {
        None
    }
}
