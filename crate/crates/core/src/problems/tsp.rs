//! Multi-objective symmetric TSP on 60 vertices: one random cost matrix per
//! objective, uniform costs on [0, 1), closed (cyclic) tours.

use super::{parse_header, Family, Problem};
use crate::error::{Error, Result};
use crate::types::Encoding;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::fmt::Write as _;

pub const MOTSP_VERTICES: usize = 60;

#[derive(Debug, Clone, PartialEq)]
pub struct MotspInstance {
    pub m: usize,
    pub n: usize,
    pub seed: u64,
    /// costs[i] is the n x n matrix of objective i, row-major.
    pub costs: Vec<Vec<f64>>,
}

impl MotspInstance {
    pub fn generate(m: usize, seed: u64) -> Self {
        let n = MOTSP_VERTICES;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut costs = Vec::with_capacity(m);
        for _ in 0..m {
            let mut c = vec![0.0; n * n];
            for a in 0..n {
                for b in a + 1..n {
                    let v: f64 = rng.random();
                    c[a * n + b] = v;
                    c[b * n + a] = v;
                }
            }
            costs.push(c);
        }
        MotspInstance { m, n, seed, costs }
    }

    pub fn cost(&self, objective: usize, a: usize, b: usize) -> f64 {
        self.costs[objective][a * self.n + b]
    }

    fn expect_tour<'a>(&self, x: &'a Encoding) -> Result<&'a [usize]> {
        let Encoding::Permutation(tour) = x else {
            return Err(Error::Encoding("expected a permutation solution".into()));
        };
        if tour.len() != self.n {
            return Err(Error::Encoding(format!(
                "expected a tour of {} vertices, got {}",
                self.n,
                tour.len()
            )));
        }
        let mut seen = vec![false; self.n];
        for &v in tour {
            if v >= self.n || seen[v] {
                return Err(Error::Encoding("tour is not a permutation".into()));
            }
            seen[v] = true;
        }
        Ok(tour)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "family motsp").unwrap();
        writeln!(out, "m {}", self.m).unwrap();
        writeln!(out, "n {}", self.n).unwrap();
        writeln!(out, "seed {}", self.seed).unwrap();
        for (i, c) in self.costs.iter().enumerate() {
            writeln!(out, "matrix {i}").unwrap();
            for row in c.chunks(self.n) {
                let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
                writeln!(out, "{}", cells.join(" ")).unwrap();
            }
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let header = parse_header(text, "motsp")?;
        let mut costs: Vec<Vec<f64>> = Vec::new();
        let mut current: Option<Vec<f64>> = None;
        for line in text.lines() {
            if line.starts_with("matrix ") {
                if let Some(done) = current.take() {
                    costs.push(done);
                }
                current = Some(Vec::with_capacity(header.n * header.n));
            } else if let Some(buf) = current.as_mut() {
                for token in line.split_whitespace() {
                    let v: f64 = token
                        .parse()
                        .map_err(|_| Error::Parameter(format!("bad cost entry {token:?}")))?;
                    buf.push(v);
                }
            }
        }
        if let Some(done) = current.take() {
            costs.push(done);
        }
        if costs.len() != header.m || costs.iter().any(|c| c.len() != header.n * header.n) {
            return Err(Error::Parameter("incomplete tsp instance".into()));
        }
        Ok(MotspInstance { m: header.m, n: header.n, seed: header.seed, costs })
    }
}

impl Problem for MotspInstance {
    fn family(&self) -> Family {
        Family::Motsp
    }

    fn m(&self) -> usize {
        self.m
    }

    fn n(&self) -> usize {
        self.n
    }

    fn evaluate(&self, x: &Encoding) -> Result<Vec<f64>> {
        let tour = self.expect_tour(x)?;
        Ok((0..self.m)
            .map(|i| {
                tour.iter()
                    .zip(tour.iter().cycle().skip(1))
                    .map(|(&a, &b)| self.cost(i, a, b))
                    .take(self.n)
                    .sum()
            })
            .collect())
    }

    fn pf_bounds(&self) -> Option<(Vec<f64>, Vec<f64>)> {
        None
    }
}
