//! The cross-check battery behind `spinpoly verify`.

use std::f64::consts::PI;
use std::fmt;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use spinpoly::asymptotics::characteristic_identity_check;
use spinpoly::cayley_hamilton::{
    central_factorial_triangles, resolution_polynomial, verify_dc_relation, verify_hierarchy,
    verify_mixed_spin_relations, verify_pj_recursion,
};
use spinpoly::series::{
    coefficient_table, derivative_pairing_residual, half_integer_closure_residual, top_down_coefficient,
    CoefficientTable, RationalPoly,
};
use spinpoly::spin_algebra::{character, rotation_oracle, rotation_with_table, verify_spin_reduction, Axis};
use spinpoly::vandermonde::{
    solve_coefficients, solve_exact, vandermonde_det, vandermonde_matrix, VANDERMONDE_CEILING,
};
use spinpoly::{Complex64, Spin};

use crate::commands::uniform_grid;
use crate::Failure;

pub const FD_STEP: f64 = 1e-5;
pub const ODE_TOLERANCE: f64 = 1e-6;
const ODE_ANGLES: [f64; 3] = [-2.3, 0.9, 2.6];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SuiteConfig {
    pub max_twice_j: u32,
    pub seed: u64,
    pub corrupt_coefficient: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub worst: f64,
    pub tolerance: f64,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.worst <= self.tolerance
    }
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {:<28} worst={:.3e} tol={:.1e}",
            if self.passed() { "PASS" } else { "FAIL" },
            self.name,
            self.worst,
            self.tolerance
        )
    }
}

fn spins(lo: u32, hi: u32) -> Vec<Spin> {
    (lo..=hi).map(Spin::from_twice).collect()
}

fn worst_over<F>(spins: &[Spin], f: F) -> f64
where
    F: Fn(Spin) -> f64 + Sync,
{
    spins.par_iter().map(|&s| f(s)).reduce(
        || 0.0,
        |a, b| if a.is_nan() || b.is_nan() { f64::NAN } else { a.max(b) },
    )
}

fn random_axis(rng: &mut ChaCha8Rng) -> Axis {
    loop {
        let v: [f64; 3] = [
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        ];
        if v.iter().map(|x| x * x).sum::<f64>() > 1e-2 {
            return Axis::new(v[0], v[1], v[2]).expect("nonzero");
        }
    }
}

/// `n` pseudo-random `(θ, axis)` pairs, `θ ∈ [-2π, 2π]`, fixed by seed and spin.
pub fn random_cases(seed: u64, spin: Spin, n: usize) -> Vec<(f64, Axis)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(1_000_003).wrapping_add(spin.twice_j() as u64));
    (0..n)
        .map(|_| (rng.gen_range(-2.0 * PI..=2.0 * PI), random_axis(&mut rng)))
        .collect()
}

/// The table for `spin` with `c_0` shifted by `1/1000`.
fn corrupted_table(spin: Spin) -> CoefficientTable {
    let original = coefficient_table(spin);
    let mut polys = original.polys().to_vec();
    let mut coeffs = polys[0].coeffs().to_vec();
    coeffs[0] += num_rational::BigRational::new(1.into(), 1000.into());
    polys[0] = RationalPoly::new(coeffs, polys[0].parity());
    CoefficientTable::new(spin, polys).expect("same shape")
}

pub fn oracle_equivalence(config: &SuiteConfig, max_twice_j: u32, cases: usize) -> f64 {
    worst_over(&spins(0, max_twice_j), |spin| {
        let table = if config.corrupt_coefficient {
            std::sync::Arc::new(corrupted_table(spin))
        } else {
            coefficient_table(spin)
        };
        random_cases(config.seed, spin, cases)
            .iter()
            .map(|(theta, axis)| {
                rotation_with_table(&table, *theta, axis).max_abs_diff(&rotation_oracle(spin, *theta, axis))
            })
            .fold(0.0, f64::max)
    })
}

pub fn path_equivalence(max_twice_j: u32, n_angles: usize) -> f64 {
    let grid = uniform_grid(-2.0 * PI, 2.0 * PI, n_angles);
    worst_over(&spins(0, max_twice_j), |spin| {
        let mut worst = 0.0f64;
        for &theta in &grid {
            let solved = solve_coefficients(spin, theta).expect("below ceiling");
            for m in 0..=spin.twice_j() {
                let series = top_down_coefficient(spin, spin.twice_j() - m, theta).expect("in range");
                worst = worst.max((solved.get(m as usize) - series).norm());
            }
        }
        worst
    })
}

/// Every first-order relation, maximum residual over [`ODE_ANGLES`].
pub fn ode_residuals(twice_js: &[u32]) -> Vec<(&'static str, f64)> {
    let list: Vec<Spin> = twice_js
        .iter()
        .copied()
        .filter(|&t| t >= 1)
        .map(Spin::from_twice)
        .collect();
    let over_angles = |f: &(dyn Fn(f64) -> f64 + Sync)| ODE_ANGLES.iter().map(|&t| f(t)).fold(0.0, f64::max);
    vec![
        (
            "dC/dalpha relation",
            worst_over(&list, |s| over_angles(&|t| verify_dc_relation(s, t, FD_STEP).unwrap())),
        ),
        (
            "hierarchy equations",
            worst_over(&list, |s| over_angles(&|t| verify_hierarchy(s, t, FD_STEP).unwrap())),
        ),
        (
            "derivative pairing",
            worst_over(&list, |s| {
                (0..=(s.twice_j() - 1) / 2)
                    .map(|n| over_angles(&|t| derivative_pairing_residual(s, n, t, FD_STEP).unwrap()))
                    .fold(0.0, f64::max)
            }),
        ),
        (
            "half-integer closure",
            worst_over(&list, |s| {
                if s.is_integer() {
                    0.0
                } else {
                    over_angles(&|t| half_integer_closure_residual(s, t, FD_STEP).unwrap())
                }
            }),
        ),
        (
            "mixed-spin relations",
            worst_over(&list, |s| {
                // j - n >= 1 for integer spin, j - n >= 3/2 for half-integer spin
                let last_n = if s.is_integer() {
                    (s.twice_j() / 2).checked_sub(1)
                } else {
                    s.twice_j().checked_sub(3).map(|v| v / 2)
                };
                last_n
                    .into_iter()
                    .flat_map(|last| 0..=last)
                    .map(|n| over_angles(&|t| verify_mixed_spin_relations(s, n, t, FD_STEP).unwrap()))
                    .fold(0.0, f64::max)
            }),
        ),
    ]
}

/// Number of failed exact identities for the resolution polynomials:
/// parity vanishing, the eigenvalue identity and the spin recursion.
pub fn resolution_failures(max_twice_j: u32) -> u32 {
    let mut failures = 0;
    for twice_j in 1..=max_twice_j {
        let spin = Spin::from_twice(twice_j);
        let p = resolution_polynomial(spin).expect("2j >= 1");
        for (m, a) in p.coeffs().iter().enumerate() {
            if (m as u32 + twice_j).is_multiple_of(2) && !a.is_zero() {
                failures += 1;
            }
        }
        for &lambda in vandermonde_matrix(spin).eigenvalues() {
            let x = num_bigint::BigInt::from(lambda);
            if x.pow(twice_j + 1) != p.eval(&x) {
                failures += 1;
            }
        }
        if !verify_pj_recursion(spin).expect("2j >= 1").is_empty() {
            failures += 1;
        }
    }
    failures
}

/// Triangle rows that differ from interpolating `λ^{2j+1}` on the eigenvalues.
pub fn triangle_failures(max_twice_j: u32) -> Result<u32, Failure> {
    let t = central_factorial_triangles(max_twice_j)?;
    let mut failures = 0;
    for twice_j in 1..=max_twice_j {
        let spin = Spin::from_twice(twice_j);
        let rhs: Vec<num_rational::BigRational> = vandermonde_matrix(spin)
            .eigenvalues()
            .iter()
            .map(|&l| num_rational::BigRational::from_integer(num_bigint::BigInt::from(l).pow(twice_j + 1)))
            .collect();
        let solved: Vec<_> = solve_exact(spin, &rhs)?.into_iter().filter(|v| !v.is_zero()).collect();
        let row = if twice_j % 2 == 1 {
            &t.fermionic[(twice_j as usize - 1) / 2]
        } else {
            &t.bosonic[twice_j as usize / 2 - 1]
        };
        let matches = solved.len() == row.len()
            && solved
                .iter()
                .zip(row)
                .all(|(s, r)| s.is_integer() && &s.to_integer() == r);
        if !matches {
            failures += 1;
        }
    }
    Ok(failures)
}

/// Spins whose determinant has the wrong sign or disagrees with the
/// floor-sum multiplicities.
pub fn determinant_failures(max_twice_j: u32) -> u32 {
    (0..=max_twice_j)
        .filter(|&twice_j| {
            let d = vandermonde_det(Spin::from_twice(twice_j));
            let negative = twice_j.div_ceil(2) % 2 == 1;
            let sign_ok = if negative {
                d.value < Zero::zero()
            } else {
                d.value > Zero::zero()
            };
            !(sign_ok && d.consistent() && (twice_j > 0 || d.value.is_one()))
        })
        .count() as u32
}

pub fn periodicity(config: &SuiteConfig, max_twice_j: u32) -> f64 {
    worst_over(&spins(0, max_twice_j), |spin| {
        let sign = if spin.is_integer() { 1.0 } else { -1.0 };
        let table = coefficient_table(spin);
        random_cases(config.seed ^ 0x5eed, spin, 5)
            .iter()
            .map(|(theta, axis)| {
                let u = rotation_with_table(&table, *theta, axis);
                let shifted = rotation_with_table(&table, theta + 2.0 * PI, axis);
                shifted.max_abs_diff(&u.scale(Complex64::new(sign, 0.0)))
            })
            .fold(0.0, f64::max)
    })
}

pub fn character_check(config: &SuiteConfig, max_twice_j: u32) -> f64 {
    worst_over(&spins(0, max_twice_j), |spin| {
        let table = coefficient_table(spin);
        let mut cases = random_cases(config.seed ^ 0xc4a7, spin, 5);
        cases.extend([0.0, 2.0 * PI, -2.0 * PI, 4.0 * PI].map(|t| (t, Axis::z())));
        cases
            .iter()
            .map(|(theta, axis)| {
                let trace = rotation_with_table(&table, *theta, axis).trace();
                (trace - Complex64::new(character(spin, *theta), 0.0)).norm()
            })
            .fold(0.0, f64::max)
    })
}

pub fn spin_reduction(config: &SuiteConfig, max_twice_j: u32) -> f64 {
    if max_twice_j < 2 {
        return 0.0;
    }
    worst_over(&spins(2, max_twice_j), |spin| {
        random_cases(config.seed ^ 0x4ed, spin, 3)
            .iter()
            .map(|(theta, axis)| verify_spin_reduction(spin, *theta, axis).expect("2j >= 2"))
            .fold(0.0, f64::max)
    })
}

pub const GAMMA_LAMBDAS: [f64; 3] = [0.3, 0.5, 1.1];

pub fn gamma_identity(twice_js: &[u32]) -> f64 {
    twice_js
        .iter()
        .flat_map(|&t| GAMMA_LAMBDAS.map(|l| characteristic_identity_check(Spin::from_twice(t), l)))
        .map(|r| r.unwrap_or(f64::NAN))
        .fold(0.0, |a, b| if b.is_nan() { f64::NAN } else { a.max(b) })
}

pub fn run_suite(config: &SuiteConfig) -> Result<Vec<CheckOutcome>, Failure> {
    let n = config.max_twice_j;
    if n == 0 {
        return Err(Failure::Usage("--max-twice-j must be at least 1".into()));
    }
    if n > VANDERMONDE_CEILING {
        return Err(Failure::Ceiling(format!(
            "verification uses the exact Vandermonde inverse, available for 2j <= {VANDERMONDE_CEILING}"
        )));
    }
    let all: Vec<u32> = (1..=n).collect();
    let mut outcomes = vec![
        CheckOutcome {
            name: "oracle equivalence",
            worst: oracle_equivalence(config, n, 20),
            tolerance: 1e-10,
        },
        CheckOutcome {
            name: "path equivalence",
            worst: path_equivalence(n, 25),
            tolerance: 1e-10,
        },
    ];
    for (name, worst) in ode_residuals(&all) {
        outcomes.push(CheckOutcome {
            name,
            worst,
            tolerance: ODE_TOLERANCE,
        });
    }
    outcomes.extend([
        CheckOutcome {
            name: "resolution identities",
            worst: resolution_failures(n) as f64,
            tolerance: 0.0,
        },
        CheckOutcome {
            name: "central factorial triangles",
            worst: triangle_failures(n)? as f64,
            tolerance: 0.0,
        },
        CheckOutcome {
            name: "determinant structure",
            worst: determinant_failures(n) as f64,
            tolerance: 0.0,
        },
        CheckOutcome {
            name: "periodicity",
            worst: periodicity(config, n),
            tolerance: 1e-10,
        },
        CheckOutcome {
            name: "character",
            worst: character_check(config, n),
            tolerance: 1e-9,
        },
        CheckOutcome {
            name: "spin reduction",
            worst: spin_reduction(config, n),
            tolerance: 1e-10,
        },
        CheckOutcome {
            name: "gamma identity",
            worst: gamma_identity(&all),
            tolerance: 1e-8,
        },
    ]);
    Ok(outcomes)
}
