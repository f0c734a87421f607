//! The four ZDT problems used here: 30 variables (10 for ZDT4), two
//! objectives, box-bounded reals.

use super::{expect_real, Family, Problem};
use crate::error::Result;
use crate::types::Encoding;
use std::f64::consts::PI;

/// f1 intervals of the discontinuous ZDT3 front, in ascending order.
pub const ZDT3_F1_INTERVALS: [(f64, f64); 5] = [
    (0.0, 0.0830015349),
    (0.1822287280, 0.2577623634),
    (0.4093136748, 0.4538821041),
    (0.6183967944, 0.6525117038),
    (0.8233317983, 0.8518328654),
];

// Objective extremes of the ZDT3 front: f2 is minimized at the right edge
// of the last f1 interval.
const ZDT3_F1_MAX: f64 = 0.8518328654;
const ZDT3_F2_MIN: f64 = -0.7733690123266405;

fn zdt_g(tail: &[f64]) -> f64 {
    1.0 + 9.0 * tail.iter().sum::<f64>() / tail.len() as f64
}

macro_rules! zdt_problem {
    ($name:ident, $family:expr, $n:expr, $f2:expr, $bounds:expr, $pf:expr) => {
        #[derive(Debug, Clone, Copy)]
        pub struct $name;

        impl Problem for $name {
            fn family(&self) -> Family {
                $family
            }

            fn m(&self) -> usize {
                2
            }

            fn n(&self) -> usize {
                $n
            }

            fn bounds(&self) -> Option<(Vec<f64>, Vec<f64>)> {
                Some($bounds($n))
            }

            fn evaluate(&self, x: &Encoding) -> Result<Vec<f64>> {
                let x = expect_real(x, $n)?;
                let f2: fn(&[f64]) -> Vec<f64> = $f2;
                Ok(f2(x))
            }

            fn pf_bounds(&self) -> Option<(Vec<f64>, Vec<f64>)> {
                Some($pf)
            }
        }
    };
}

zdt_problem!(
    Zdt1,
    Family::Zdt1,
    30,
    |x| {
        let f1 = x[0];
        let g = zdt_g(&x[1..]);
        vec![f1, g * (1.0 - (f1 / g).sqrt())]
    },
    |n| (vec![0.0; n], vec![1.0; n]),
    (vec![0.0, 0.0], vec![1.0, 1.0])
);

zdt_problem!(
    Zdt2,
    Family::Zdt2,
    30,
    |x| {
        let f1 = x[0];
        let g = zdt_g(&x[1..]);
        vec![f1, g * (1.0 - (f1 / g) * (f1 / g))]
    },
    |n| (vec![0.0; n], vec![1.0; n]),
    (vec![0.0, 0.0], vec![1.0, 1.0])
);

zdt_problem!(
    Zdt3,
    Family::Zdt3,
    30,
    |x| {
        let f1 = x[0];
        let g = zdt_g(&x[1..]);
        let r = f1 / g;
        vec![f1, g * (1.0 - r.sqrt() - r * (10.0 * PI * f1).sin())]
    },
    |n| (vec![0.0; n], vec![1.0; n]),
    (vec![0.0, ZDT3_F2_MIN], vec![ZDT3_F1_MAX, 1.0])
);

zdt_problem!(
    Zdt4,
    Family::Zdt4,
    10,
    |x| {
        let f1 = x[0];
        let tail = &x[1..];
        let g = 1.0
            + 10.0 * tail.len() as f64
            + tail.iter().map(|&v| v * v - 10.0 * (4.0 * PI * v).cos()).sum::<f64>();
        vec![f1, g * (1.0 - (f1 / g).sqrt())]
    },
    |n: usize| {
        let mut lo = vec![-5.0; n];
        let mut hi = vec![5.0; n];
        lo[0] = 0.0;
        hi[0] = 1.0;
        (lo, hi)
    },
    (vec![0.0, 0.0], vec![1.0, 1.0])
);
