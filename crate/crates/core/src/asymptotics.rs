//! Large-spin behavior of the coefficients, the generating functions that
//! tie all spins together, and the characteristic polynomial of `2n̂·J` as a
//! product of Gamma functions.

use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;
use statrs::function::gamma::ln_gamma;

use crate::series::{coefficient_by_power, coefficient_table};
use crate::{Error, Result, Spin};

/// Half-width of the window around `θ ≡ π (mod 2π)` left out of
/// convergence measurements.
pub const DISCONTINUITY_WINDOW: f64 = 0.3;

/// Which limit curve: power `k` and spin type (`0` integer, `1` half-integer).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LimitSpec {
    pub k: u32,
    pub parity: u32,
}

impl LimitSpec {
    pub fn new(k: u32, parity: u32) -> Self {
        assert!(parity <= 1, "parity is 0 or 1");
        LimitSpec { k, parity }
    }

    pub fn for_spin(spin: Spin, k: u32) -> Self {
        LimitSpec::new(k, spin.bose_fermi_index())
    }
}

/// `(-1)^{(1+f)ε} ((θ - 2π - 2πf)/2)^k` with `f = ⌊θ/2π - 1/2⌋`: the
/// monomial `(θ/2)^k` continued periodically from `(-π, π)`, with a sign flip
/// every other period for half-integer spin.
pub fn periodicized_monomial(spec: LimitSpec, theta: f64) -> f64 {
    let f = (theta / (2.0 * PI) - 0.5).floor();
    let base = ((theta - 2.0 * PI - 2.0 * PI * f) / 2.0).powi(spec.k as i32);
    let flips = (1.0 + f) as i64 * spec.parity as i64;
    if flips.rem_euclid(2) == 1 {
        -base
    } else {
        base
    }
}

/// `c_k(θ) sin^k(θ/2)`, the real quantity that approaches the limit curve.
pub fn scaled_coefficient(spin: Spin, k: u32, theta: f64) -> Result<f64> {
    if k > spin.twice_j() {
        return Err(Error::IndexOutOfRange {
            twice_j: spin.twice_j(),
            k,
        });
    }
    let table = coefficient_table(spin);
    Ok(table.eval(k, theta) * (theta / 2.0).sin().powi(k as i32))
}

/// Whether `θ` lies within [`DISCONTINUITY_WINDOW`] of an odd multiple of `π`.
pub fn near_discontinuity(theta: f64) -> bool {
    let offset = (theta - PI).rem_euclid(2.0 * PI);
    offset.min(2.0 * PI - offset) < DISCONTINUITY_WINDOW
}

/// `n_points` evenly spaced angles on `[-2π + δ, 2π - δ]`, windows removed.
pub fn interior_grid(n_points: usize) -> Vec<f64> {
    let lo = -2.0 * PI + DISCONTINUITY_WINDOW;
    let hi = 2.0 * PI - DISCONTINUITY_WINDOW;
    let step = (hi - lo) / (n_points.max(2) - 1) as f64;
    (0..n_points.max(2))
        .map(|i| lo + step * i as f64)
        .filter(|&t| !near_discontinuity(t))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRow {
    pub twice_j: u32,
    pub k: u32,
    pub sup_error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub spec: LimitSpec,
    pub rows: Vec<ConvergenceRow>,
}

impl ConvergenceReport {
    /// Each sup-error is strictly below the previous one, except that an
    /// error already at zero may stay there.
    pub fn decreases_monotonically(&self) -> bool {
        self.rows.windows(2).all(|w| {
            let (a, b) = (w[0].sup_error, w[1].sup_error);
            b < a || (a == 0.0 && b == 0.0)
        })
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("twice_j,k,sup_error\n");
        for row in &self.rows {
            writeln!(out, "{},{},{:.12e}", row.twice_j, row.k, row.sup_error).unwrap();
        }
        out
    }
}

/// Sup-distance of `c_k sin^k(θ/2)` from its limit over the grid points that
/// are not near a discontinuity, for each spin in turn.
pub fn convergence_report(k: u32, parity: u32, theta_grid: &[f64], spins: &[Spin]) -> Result<ConvergenceReport> {
    if let Some(bad) = spins.iter().find(|s| s.bose_fermi_index() != parity) {
        return Err(Error::Domain(format!(
            "spin 2j = {} does not have parity {parity}",
            bad.twice_j()
        )));
    }
    if spins.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Domain("spins must be strictly ascending".into()));
    }
    let spec = LimitSpec::new(k, parity);
    let mut rows = Vec::with_capacity(spins.len());
    for &spin in spins {
        let mut sup = 0.0f64;
        for &theta in theta_grid.iter().filter(|&&t| !near_discontinuity(t)) {
            let diff = scaled_coefficient(spin, k, theta)? - periodicized_monomial(spec, theta);
            sup = sup.max(diff.abs());
        }
        rows.push(ConvergenceRow {
            twice_j: spin.twice_j(),
            k,
            sup_error: sup,
        });
    }
    Ok(ConvergenceReport { spec, rows })
}

/// Smallest `|sin(θ/2)|` at which the order-2 closed form is evaluated.
pub const GENERATING_SINGULARITY: f64 = 1e-8;

/// Kummer's `M(a, b, z) = Σ (a)_n zⁿ / ((b)_n n!)`, summed until the terms
/// stop contributing.
pub fn kummer_m(a: f64, b: f64, z: Complex64) -> Complex64 {
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    for n in 0..10_000 {
        let n = n as f64;
        term = term * z * ((a + n) / ((b + n) * (n + 1.0)));
        sum += term;
        if term.norm() <= f64::EPSILON * 1e-3 * sum.norm() {
            break;
        }
    }
    sum
}

/// Partial sum `Σ_{m=0}^{M} t^m C_{m-order}[m/2]` and the closed form of the
/// generating function it approximates.
pub fn generating_function_check(order: u32, t: f64, theta: f64, max_m: u32) -> Result<(Complex64, Complex64)> {
    if order > 2 {
        return Err(Error::Domain(format!("order must be 0, 1 or 2, got {order}")));
    }
    if max_m < order {
        return Err(Error::Domain(format!(
            "partial sum order {max_m} below generating order {order}"
        )));
    }
    let (s, c) = (theta / 2.0).sin_cos();
    let its = Complex64::new(0.0, t * s);
    let closed = match order {
        0 => its.exp(),
        1 => c * t * its.exp(),
        _ => {
            if s.abs() < GENERATING_SINGULARITY {
                return Err(Error::Domain(format!(
                    "order-2 closed form is degenerate at sin(θ/2) = {s:e}"
                )));
            }
            let x = s * s;
            t * t * kummer_m((x + 6.0) / x, 6.0 / x, its)
        }
    };
    let mut partial = Complex64::new(0.0, 0.0);
    let mut t_power = 1.0;
    for m in 0..=max_m {
        if m >= order {
            let coefficient = coefficient_by_power(Spin::from_twice(m), (m - order) as i64, theta);
            partial += t_power * coefficient;
        }
        t_power *= t;
    }
    Ok((partial, closed))
}

/// `(ln|Γ(x)|, sign Γ(x))`, reflecting arguments below `1/2`.
fn ln_abs_gamma(x: f64) -> (f64, f64) {
    if x >= 0.5 {
        return (ln_gamma(x), 1.0);
    }
    // Γ(x) Γ(1-x) = π / sin(πx)
    let sine = (PI * x).sin();
    (PI.ln() - sine.abs().ln() - ln_gamma(1.0 - x), sine.signum())
}

/// Relative difference between `det(λ - 2n̂·J) = Π_n (λ - 2(j-n))` and
/// `(2^{2j+1}/π) Γ(1+j+λ/2) Γ(1+j-λ/2) sin π(λ/2 - j)`, both in log space.
pub fn characteristic_identity_check(spin: Spin, lambda: f64) -> Result<f64> {
    let twice_j = spin.twice_j() as f64;
    let j = spin.j();
    let too_close = |target: f64| (lambda - target).abs() < 1e-6;
    if let Some(n) = (0..=spin.twice_j()).find(|&n| too_close(twice_j - 2.0 * n as f64)) {
        return Err(Error::Domain(format!(
            "λ = {lambda} is within 1e-6 of the eigenvalue {}",
            twice_j - 2.0 * n as f64
        )));
    }
    for argument in [1.0 + j + lambda / 2.0, 1.0 + j - lambda / 2.0] {
        if argument <= 0.0 && (argument - argument.round()).abs() < 1e-6 {
            return Err(Error::Domain(format!("λ = {lambda} sits on a Gamma pole")));
        }
    }
    let (mut ln_lhs, mut sign_lhs) = (0.0, 1.0);
    for n in 0..=spin.twice_j() {
        let factor = lambda - (twice_j - 2.0 * n as f64);
        ln_lhs += factor.abs().ln();
        sign_lhs *= factor.signum();
    }
    let (g1, s1) = ln_abs_gamma(1.0 + j + lambda / 2.0);
    let (g2, s2) = ln_abs_gamma(1.0 + j - lambda / 2.0);
    let sine = (PI * (lambda / 2.0 - j)).sin();
    let ln_rhs = (twice_j + 1.0) * 2f64.ln() - PI.ln() + g1 + g2 + sine.abs().ln();
    let sign_rhs = s1 * s2 * sine.signum();
    let ratio = sign_rhs * sign_lhs * (ln_rhs - ln_lhs).exp();
    Ok((ratio - 1.0).abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(k: u32, parity: u32) -> LimitSpec {
        LimitSpec::new(k, parity)
    }

    #[test]
    fn monomial_examples() {
        for theta in [-7.0, -1.0, 0.0, 2.5, 9.0] {
            assert_eq!(periodicized_monomial(spec(0, 0), theta), 1.0);
        }
        for theta in [-3.0, -0.5, 0.0, 1.2, 3.1] {
            for parity in [0, 1] {
                assert!((periodicized_monomial(spec(1, parity), theta) - theta / 2.0).abs() < 1e-15);
            }
        }
        for theta in [3.2, 4.71, 6.0, 9.3] {
            assert_eq!(periodicized_monomial(spec(0, 1), theta), -1.0);
        }
    }

    #[test]
    fn periodicity_by_parity() {
        for k in 0..4 {
            for theta in [-2.0, 0.3, 2.9] {
                let p0 = |t: f64| periodicized_monomial(spec(k, 0), t);
                let p1 = |t: f64| periodicized_monomial(spec(k, 1), t);
                assert!((p0(theta) - p0(theta + 2.0 * PI)).abs() < 1e-12);
                assert!((p1(theta) + p1(theta + 2.0 * PI)).abs() < 1e-12);
                assert!((p1(theta) - p1(theta + 4.0 * PI)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn fermionic_sign_flip_window() {
        for k in 0..4 {
            for theta in [-6.0, -4.0, -3.3, 3.3, 4.5, 6.1] {
                let p0 = periodicized_monomial(spec(k, 0), theta);
                let p1 = periodicized_monomial(spec(k, 1), theta);
                assert_eq!(p1, -p0);
            }
        }
    }

    #[test]
    fn window_detection() {
        assert!(near_discontinuity(PI));
        assert!(near_discontinuity(-PI + 0.29));
        assert!(near_discontinuity(3.0 * PI - 0.1));
        assert!(!near_discontinuity(PI - 0.31));
        assert!(!near_discontinuity(0.0));
        assert!(interior_grid(101).iter().all(|t| !near_discontinuity(*t)));
    }

    #[test]
    fn bosonic_constant_has_zero_error() {
        let spins: Vec<Spin> = [2, 8, 20].map(Spin::from_twice).to_vec();
        let report = convergence_report(0, 0, &interior_grid(201), &spins).unwrap();
        assert!(report.rows.iter().all(|r| r.sup_error == 0.0));
        assert!(report.decreases_monotonically());
    }

    #[test]
    fn sawtooth_convergence() {
        let spins: Vec<Spin> = [8, 16, 32].map(Spin::from_twice).to_vec();
        let report = convergence_report(1, 0, &interior_grid(401), &spins).unwrap();
        assert!(report.decreases_monotonically(), "{report:?}");
        assert!(report.to_csv().starts_with("twice_j,k,sup_error\n8,1,"));
    }

    #[test]
    fn report_rejects_bad_spin_lists() {
        let grid = interior_grid(11);
        let mixed = [Spin::from_twice(8), Spin::from_twice(9)];
        assert!(convergence_report(1, 0, &grid, &mixed).is_err());
        let unsorted = [Spin::from_twice(16), Spin::from_twice(8)];
        assert!(convergence_report(1, 0, &grid, &unsorted).is_err());
    }

    #[test]
    fn kummer_reduces_to_exponential() {
        // M(b+1, b, z) = e^z (1 + z/b)
        let z = Complex64::new(0.3, -0.8);
        let b = 4.5;
        let expected = z.exp() * (1.0 + z / b);
        assert!((kummer_m(b + 1.0, b, z) - expected).norm() < 1e-14);
        assert_eq!(kummer_m(2.0, 3.0, Complex64::new(0.0, 0.0)), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn generating_functions() {
        let (partial, closed) = generating_function_check(0, 0.5, 1.2, 30).unwrap();
        assert!((partial - closed).norm() < 1e-10);
        let (partial, closed) = generating_function_check(1, 0.0, 0.7, 30).unwrap();
        assert_eq!(partial.norm(), 0.0);
        assert_eq!(closed.norm(), 0.0);
        let (partial, closed) = generating_function_check(0, 1.5, 0.0, 10).unwrap();
        assert!((partial - 1.0).norm() < 1e-15 && (closed - 1.0).norm() < 1e-15);
        let (partial, closed) = generating_function_check(2, 1.0, 2.0, 60).unwrap();
        assert!((partial - closed).norm() < 1e-8);
        assert!(generating_function_check(2, 1.0, 0.0, 60).is_err());
        assert!(generating_function_check(3, 1.0, 1.0, 60).is_err());
    }

    #[test]
    fn gamma_identity() {
        assert!(characteristic_identity_check(Spin::from_twice(2), 1.0).unwrap() < 1e-10);
        assert!(characteristic_identity_check(Spin::from_twice(1), 0.0).unwrap() < 1e-10);
        assert!(characteristic_identity_check(Spin::from_twice(8), 0.5).unwrap() < 1e-8);
        for twice_j in [3, 5, 12] {
            for lambda in [-7.3, -0.2, 2.9] {
                let r = characteristic_identity_check(Spin::from_twice(twice_j), lambda).unwrap();
                assert!(r < 1e-8, "2j = {twice_j}, λ = {lambda}: {r}");
            }
        }
        assert!(characteristic_identity_check(Spin::from_twice(2), 2.0).is_err());
        assert!(characteristic_identity_check(Spin::from_twice(2), -1e-7).is_err());
    }

    #[test]
    fn reflected_log_gamma() {
        // Γ(-1/2) = -2√π
        let (ln, sign) = ln_abs_gamma(-0.5);
        assert_eq!(sign, -1.0);
        assert!((ln - (2.0 * PI.sqrt()).ln()).abs() < 1e-13);
        let (ln, sign) = ln_abs_gamma(5.0);
        assert_eq!(sign, 1.0);
        assert!((ln - 24f64.ln()).abs() < 1e-13);
    }
}
