//! Streaming throughput measurement and the growth fit used to judge it.

use std::hint::black_box;
use std::time::Instant;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::generator::BitStream;
use crate::rules::Rule;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BenchPoint {
    pub n: usize,
    pub bits: u64,
    pub ns_per_bit: f64,
}

/// Median over `repeats` runs of the time to stream `bits` bits from `0^n`.
pub fn measure(rule: &Rule, bits: u64, repeats: usize) -> BenchPoint {
    let mut samples: Vec<f64> = (0..repeats.max(1))
        .map(|_| {
            let mut stream = BitStream::new(rule);
            let t0 = Instant::now();
            let mut acc = 0u64;
            for _ in 0..bits {
                acc = acc.wrapping_add(u64::from(stream.next_bit()));
            }
            black_box(acc);
            t0.elapsed().as_nanos() as f64 / bits.max(1) as f64
        })
        .collect();
    samples.sort_by(f64::total_cmp);
    BenchPoint {
        n: rule.order(),
        bits,
        ns_per_bit: samples[samples.len() / 2],
    }
}

/// Least-squares fit `t(n) = a + b n + c n^2` of per-bit time.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GrowthFit {
    pub intercept: f64,
    pub slope: f64,
    pub curvature: f64,
    /// `max(c, 0) (n_max - n_min)^2` over the fitted time at `n_max`. Concave growth scores zero.
    pub superlinear_share: f64,
}

impl GrowthFit {
    pub fn is_at_most_linear(&self, tolerance: f64) -> bool {
        self.superlinear_share < tolerance
    }
}

pub fn fit_growth(points: &[BenchPoint]) -> Result<GrowthFit> {
    if points.len() < 3 {
        return Err(Error::Precondition(
            "need at least three points to fit growth".into(),
        ));
    }
    // Centre n for conditioning.
    let mean_n = points.iter().map(|p| p.n as f64).sum::<f64>() / points.len() as f64;
    let mut ata = [[0f64; 3]; 3];
    let mut aty = [0f64; 3];
    for p in points {
        let x = p.n as f64 - mean_n;
        let row = [1.0, x, x * x];
        for i in 0..3 {
            for j in 0..3 {
                ata[i][j] += row[i] * row[j];
            }
            aty[i] += row[i] * p.ns_per_bit;
        }
    }
    let [a0, b0, c] = solve3(ata, aty)?;
    // Back to uncentred coefficients.
    let intercept = a0 - b0 * mean_n + c * mean_n * mean_n;
    let slope = b0 - 2.0 * c * mean_n;
    let lo = points.iter().map(|p| p.n).min().unwrap_or(0) as f64;
    let hi = points.iter().map(|p| p.n).max().unwrap_or(0) as f64;
    let top = intercept + slope * hi + c * hi * hi;
    let superlinear_share = if top > 0.0 {
        c.max(0.0) * (hi - lo).powi(2) / top
    } else {
        f64::INFINITY
    };
    Ok(GrowthFit {
        intercept,
        slope,
        curvature: c,
        superlinear_share,
    })
}

fn solve3(mut m: [[f64; 3]; 3], mut y: [f64; 3]) -> Result<[f64; 3]> {
    for col in 0..3 {
        let pivot = (col..3)
            .max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))
            .unwrap_or(col);
        if m[pivot][col].abs() < 1e-12 {
            return Err(Error::Precondition(
                "degenerate fit: need three distinct n".into(),
            ));
        }
        m.swap(col, pivot);
        y.swap(col, pivot);
        for r in 0..3 {
            if r != col {
                let f = m[r][col] / m[col][col];
                let pivot_row = m[col];
                for (x, p) in m[r].iter_mut().zip(pivot_row).skip(col) {
                    *x -= f * p;
                }
                y[r] -= f * y[col];
            }
        }
    }
    Ok([y[0] / m[0][0], y[1] / m[1][1], y[2] / m[2][2]])
}
