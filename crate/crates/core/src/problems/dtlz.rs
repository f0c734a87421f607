//! DTLZ1, DTLZ3, and DTLZ5 with n = m + 4 variables (distance block k = 5).

use super::{expect_real, Family, Problem};
use crate::error::Result;
use crate::types::Encoding;
use std::f64::consts::{FRAC_1_SQRT_2, PI};

fn rastrigin_g(tail: &[f64]) -> f64 {
    100.0
        * (tail.len() as f64
            + tail
                .iter()
                .map(|&v| (v - 0.5) * (v - 0.5) - (20.0 * PI * (v - 0.5)).cos())
                .sum::<f64>())
}

fn sphere_g(tail: &[f64]) -> f64 {
    tail.iter().map(|&v| (v - 0.5) * (v - 0.5)).sum()
}

/// f_j as products of cosines with one trailing sine over the angles.
fn angular_objectives(theta: &[f64], scale: f64) -> Vec<f64> {
    let m = theta.len() + 1;
    (0..m)
        .map(|j| {
            let mut f = scale;
            for t in &theta[..m - 1 - j] {
                f *= t.cos();
            }
            if j > 0 {
                f *= theta[m - 1 - j].sin();
            }
            f
        })
        .collect()
}

macro_rules! dtlz_struct {
    ($name:ident, $family:expr) => {
        #[derive(Debug, Clone, Copy)]
        pub struct $name {
            m: usize,
        }

        impl $name {
            pub fn new(m: usize) -> Self {
                assert!(m >= 2);
                $name { m }
            }
        }
    };
}

dtlz_struct!(Dtlz1, Family::Dtlz1);
dtlz_struct!(Dtlz3, Family::Dtlz3);
dtlz_struct!(Dtlz5, Family::Dtlz5);

impl Problem for Dtlz1 {
    fn family(&self) -> Family {
        Family::Dtlz1
    }

    fn m(&self) -> usize {
        self.m
    }

    fn n(&self) -> usize {
        self.m + 4
    }

    fn bounds(&self) -> Option<(Vec<f64>, Vec<f64>)> {
        Some((vec![0.0; self.n()], vec![1.0; self.n()]))
    }

    fn evaluate(&self, x: &Encoding) -> Result<Vec<f64>> {
        let x = expect_real(x, self.n())?;
        let m = self.m;
        let g = rastrigin_g(&x[m - 1..]);
        let f = (0..m)
            .map(|j| {
                let mut v = 0.5 * (1.0 + g);
                for &xi in &x[..m - 1 - j] {
                    v *= xi;
                }
                if j > 0 {
                    v *= 1.0 - x[m - 1 - j];
                }
                v
            })
            .collect();
        Ok(f)
    }

    fn pf_bounds(&self) -> Option<(Vec<f64>, Vec<f64>)> {
        Some((vec![0.0; self.m], vec![0.5; self.m]))
    }
}

impl Problem for Dtlz3 {
    fn family(&self) -> Family {
        Family::Dtlz3
    }

    fn m(&self) -> usize {
        self.m
    }

    fn n(&self) -> usize {
        self.m + 4
    }

    fn bounds(&self) -> Option<(Vec<f64>, Vec<f64>)> {
        Some((vec![0.0; self.n()], vec![1.0; self.n()]))
    }

    fn evaluate(&self, x: &Encoding) -> Result<Vec<f64>> {
        let x = expect_real(x, self.n())?;
        let m = self.m;
        let g = rastrigin_g(&x[m - 1..]);
        let theta: Vec<f64> = x[..m - 1].iter().map(|&v| v * PI / 2.0).collect();
        Ok(angular_objectives(&theta, 1.0 + g))
    }

    fn pf_bounds(&self) -> Option<(Vec<f64>, Vec<f64>)> {
        Some((vec![0.0; self.m], vec![1.0; self.m]))
    }
}

impl Problem for Dtlz5 {
    fn family(&self) -> Family {
        Family::Dtlz5
    }

    fn m(&self) -> usize {
        self.m
    }

    fn n(&self) -> usize {
        self.m + 4
    }

    fn bounds(&self) -> Option<(Vec<f64>, Vec<f64>)> {
        Some((vec![0.0; self.n()], vec![1.0; self.n()]))
    }

    fn evaluate(&self, x: &Encoding) -> Result<Vec<f64>> {
        let x = expect_real(x, self.n())?;
        let m = self.m;
        let g = sphere_g(&x[m - 1..]);
        let mut theta = Vec::with_capacity(m - 1);
        theta.push(x[0] * PI / 2.0);
        for &xi in &x[1..m - 1] {
            theta.push(PI / (4.0 * (1.0 + g)) * (1.0 + 2.0 * g * xi));
        }
        Ok(angular_objectives(&theta, 1.0 + g))
    }

    fn pf_bounds(&self) -> Option<(Vec<f64>, Vec<f64>)> {
        // on the degenerate optimal curve every angle but the first is
        // pinned at pi/4, so each objective's maximum is a power of 1/sqrt(2)
        let m = self.m;
        let max = (0..m)
            .map(|j| match j {
                0 | 1 => FRAC_1_SQRT_2.powi(m as i32 - 2),
                _ => FRAC_1_SQRT_2.powi(m as i32 - 1 - j as i32),
            })
            .collect();
        Some((vec![0.0; m], max))
    }
}
