use std::fmt::Write as _;
use std::hint::black_box;
use std::time::Instant;

use spinpoly::series::coefficient_table;
use spinpoly::spin_algebra::{rotation_from_polynomial_f64, rotation_oracle, rotation_with_table, Axis};
use spinpoly::Spin;

use crate::Failure;

const ANGLES: [f64; 8] = [-5.9, -3.7, -1.6, -0.2, 0.5, 1.9, 3.3, 6.0];

/// Nanoseconds per rotation across repetitions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Timing {
    pub median: f64,
    pub min: f64,
    pub max: f64,
}

impl Timing {
    fn from_samples(mut samples: Vec<f64>) -> Self {
        samples.sort_by(f64::total_cmp);
        let n = samples.len();
        let median = if n % 2 == 1 {
            samples[n / 2]
        } else {
            (samples[n / 2 - 1] + samples[n / 2]) / 2.0
        };
        Timing {
            median,
            min: samples[0],
            max: samples[n - 1],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub twice_j: u32,
    pub poly: Timing,
    pub poly_f64: Timing,
    pub oracle: Timing,
}

fn time_per_rotation(reps: usize, mut f: impl FnMut(f64)) -> Timing {
    let samples = (0..reps)
        .map(|_| {
            let start = Instant::now();
            for &theta in &ANGLES {
                f(theta);
            }
            start.elapsed().as_nanos() as f64 / ANGLES.len() as f64
        })
        .collect();
    Timing::from_samples(samples)
}

pub fn bench(twice_js: &[u32], reps: usize) -> Result<Vec<BenchRow>, Failure> {
    if twice_js.is_empty() {
        return Err(Failure::Usage("bench needs at least one --twice-j value".into()));
    }
    if reps < 3 {
        return Err(Failure::Usage(format!("--reps must be at least 3, got {reps}")));
    }
    let axis = Axis::new(0.3, -0.5, 0.8).expect("nonzero");
    Ok(twice_js
        .iter()
        .map(|&twice_j| {
            let spin = Spin::from_twice(twice_j);
            let table = coefficient_table(spin);
            BenchRow {
                twice_j,
                poly: time_per_rotation(reps, |t| {
                    black_box(rotation_with_table(&table, t, &axis));
                }),
                poly_f64: time_per_rotation(reps, |t| {
                    black_box(rotation_from_polynomial_f64(&table, t, &axis));
                }),
                oracle: time_per_rotation(reps, |t| {
                    black_box(rotation_oracle(spin, t, &axis));
                }),
            }
        })
        .collect())
}

pub fn render(rows: &[BenchRow]) -> String {
    let mut out = format!(
        "{:>6} {:>14} {:>14} {:>14}   (median ns per rotation, [min-max])\n",
        "2j", "poly", "poly-f64", "oracle"
    );
    for r in rows {
        writeln!(
            out,
            "{:>6} {:>14.0} {:>14.0} {:>14.0}   [{:.0}-{:.0}] [{:.0}-{:.0}] [{:.0}-{:.0}]",
            r.twice_j,
            r.poly.median,
            r.poly_f64.median,
            r.oracle.median,
            r.poly.min,
            r.poly.max,
            r.poly_f64.min,
            r.poly_f64.max,
            r.oracle.min,
            r.oracle.max
        )
        .unwrap();
    }
    let faster = |pick: fn(&BenchRow) -> f64| {
        let wins: Vec<String> = rows
            .iter()
            .filter(|r| pick(r) < r.oracle.median)
            .map(|r| r.twice_j.to_string())
            .collect();
        if wins.is_empty() {
            "none".to_string()
        } else {
            wins.join(", ")
        }
    };
    writeln!(out, "poly faster than oracle at 2j: {}", faster(|r| r.poly.median)).unwrap();
    writeln!(
        out,
        "poly-f64 faster than oracle at 2j: {}",
        faster(|r| r.poly_f64.median)
    )
    .unwrap();
    out
}
