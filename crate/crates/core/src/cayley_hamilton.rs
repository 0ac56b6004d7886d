//! Resolution of `(2n̂·J)^{2j+1}` into lower powers, and the first-order
//! differential relations it implies for the coefficients `C_m[j]`.
//!
//! Throughout, `C_m[j]` is the coefficient of `(2n̂·J)^m` and
//! `α = iθ/2`, so `d/dα = -2i d/dθ`. Derivatives are central differences
//! in `θ`.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, ToPrimitive, Zero};

use crate::series::coefficient_by_power;
use crate::vandermonde::solve_coefficients;
use crate::{Error, Result, Spin};

/// `p_j(x) = Σ A_m[j] x^m`, with `(2n̂·J)^{2j+1} = Σ A_m[j] (2n̂·J)^m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResolutionPoly {
    spin: Spin,
    a: Vec<BigInt>,
}

impl ResolutionPoly {
    pub fn spin(&self) -> Spin {
        self.spin
    }

    /// `A_0 … A_{2j}`.
    pub fn coeffs(&self) -> &[BigInt] {
        &self.a
    }

    pub fn coefficient(&self, m: usize) -> &BigInt {
        &self.a[m]
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.a.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn coeffs_f64(&self) -> Vec<f64> {
        self.a.iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect()
    }
}

fn poly_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (l, y) in b.iter().enumerate() {
            out[i + l] += x * y;
        }
    }
    out
}

fn poly_sub(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_default();
            let y = b.get(i).cloned().unwrap_or_default();
            x - y
        })
        .collect()
}

fn trimmed(mut p: Vec<BigInt>) -> Vec<BigInt> {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn monomial(coefficient: BigInt, degree: usize) -> Vec<BigInt> {
    let mut p = vec![BigInt::zero(); degree + 1];
    p[degree] = coefficient;
    p
}

/// `x^{2j+1} - x^{-(2j+1)} Π_{m=0}^{2j} (x² - [m + 2j even]·m²)`.
pub fn resolution_polynomial(spin: Spin) -> Result<ResolutionPoly> {
    let twice_j = spin.twice_j();
    if twice_j == 0 {
        return Err(Error::SpinTooSmall { twice_j, min: 1 });
    }
    let mut product = vec![BigInt::one()];
    for m in 0..=twice_j {
        let shift = if (m + twice_j).is_multiple_of(2) {
            BigInt::from(m) * BigInt::from(m)
        } else {
            BigInt::zero()
        };
        product = poly_mul(&product, &[-shift, BigInt::zero(), BigInt::one()]);
    }
    let order = spin.dim();
    assert!(
        product[..order].iter().all(Zero::is_zero),
        "product is divisible by x^(2j+1)"
    );
    let quotient = &product[order..];
    let mut a = poly_sub(&monomial(BigInt::one(), order), quotient);
    assert!(a[order].is_zero());
    a.truncate(order);
    Ok(ResolutionPoly { spin, a })
}

/// `p_{j+1}` computed directly minus `(2j+2)² x^{2j+1} + (x² - (2j+2)²) p_j`.
/// Trailing zeros are stripped, so an empty vector means the identity holds.
pub fn verify_pj_recursion(spin: Spin) -> Result<Vec<BigInt>> {
    let p = resolution_polynomial(spin)?;
    let next = resolution_polynomial(spin.raised())?;
    let square = BigInt::from(spin.twice_j() + 2).pow(2);
    let mut shifted = vec![-square.clone(), BigInt::zero(), BigInt::one()];
    shifted = poly_mul(&shifted, p.coeffs());
    let rhs = poly_add(&monomial(square, spin.twice_j() as usize + 1), &shifted);
    Ok(trimmed(poly_sub(next.coeffs(), &rhs)))
}

fn poly_add(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let negated: Vec<BigInt> = b.iter().map(|v| -v).collect();
    poly_sub(a, &negated)
}

/// Nonzero `A_m[j]` in increasing `m`, half-integer spins in `fermionic`
/// (rows `j = 1/2, 3/2, …`) and integer spins in `bosonic` (`j = 1, 2, …`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CentralFactorialTriangles {
    pub fermionic: Vec<Vec<BigInt>>,
    pub bosonic: Vec<Vec<BigInt>>,
}

impl CentralFactorialTriangles {
    /// One row per line, entries separated by single spaces.
    pub fn render(rows: &[Vec<BigInt>]) -> String {
        rows.iter()
            .map(|row| row.iter().map(ToString::to_string).collect::<Vec<_>>().join(" "))
            .map(|line| line + "\n")
            .collect()
    }
}

pub fn central_factorial_triangles(max_twice_j: u32) -> Result<CentralFactorialTriangles> {
    if max_twice_j == 0 {
        return Err(Error::SpinTooSmall { twice_j: 0, min: 1 });
    }
    let mut triangles = CentralFactorialTriangles {
        fermionic: Vec::new(),
        bosonic: Vec::new(),
    };
    for twice_j in 1..=max_twice_j {
        let p = resolution_polynomial(Spin::from_twice(twice_j))?;
        let row = p.coeffs().iter().filter(|a| !a.is_zero()).cloned().collect();
        if twice_j % 2 == 1 {
            triangles.fermionic.push(row);
        } else {
            triangles.bosonic.push(row);
        }
    }
    Ok(triangles)
}

fn check_step(h: f64) -> Result<()> {
    if h > 0.0 && h.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("step must be positive, got {h}")))
    }
}

/// `d/dα` of every `C_m` by central differences of the Vandermonde solve.
fn alpha_derivatives(spin: Spin, theta: f64, h: f64) -> Result<Vec<Complex64>> {
    let plus = solve_coefficients(spin, theta + h)?;
    let minus = solve_coefficients(spin, theta - h)?;
    Ok(plus
        .values()
        .iter()
        .zip(minus.values())
        .map(|(p, m)| -2.0 * Complex64::i() * (p - m) / (2.0 * h))
        .collect())
}

/// `max_m |dC_m/dα - C_{m-1} - C_{2j} A_m|`.
pub fn verify_dc_relation(spin: Spin, theta: f64, h: f64) -> Result<f64> {
    check_step(h)?;
    let a = resolution_polynomial(spin)?.coeffs_f64();
    let c = solve_coefficients(spin, theta)?;
    let top = c.get(spin.twice_j() as usize);
    let derivatives = alpha_derivatives(spin, theta, h)?;
    Ok(derivatives
        .iter()
        .enumerate()
        .map(|(m, d)| {
            let lower = if m == 0 { Complex64::zero() } else { c.get(m - 1) };
            (d - lower - top * a[m]).norm()
        })
        .fold(0.0, f64::max))
}

/// `(sinh α)^{2j} / (2j)!` at `α = iθ/2`.
fn sinh_power(spin: Spin, theta: f64) -> Complex64 {
    let s = (theta / 2.0).sin();
    let twice_j = spin.twice_j();
    let magnitude = (1..=twice_j).fold(1.0, |acc, l| acc * s / l as f64);
    Complex64::i().powu(twice_j) * magnitude
}

/// Residual of the hierarchy equations with `C_{2j}` replaced by its closed
/// form: `dC_m/dα = C_{m-1} + (sinh α)^{2j} A_m / (2j)!` for odd `m` (integer
/// `j`) or even `m` (half-integer `j`). Maximum over all such `m`.
pub fn verify_hierarchy(spin: Spin, theta: f64, h: f64) -> Result<f64> {
    check_step(h)?;
    let a = resolution_polynomial(spin)?.coeffs_f64();
    let c = solve_coefficients(spin, theta)?;
    let closed = sinh_power(spin, theta);
    let derivatives = alpha_derivatives(spin, theta, h)?;
    let first = if spin.is_integer() { 1 } else { 0 };
    Ok((first..=spin.twice_j() as usize)
        .step_by(2)
        .map(|m| {
            let lower = if m == 0 { Complex64::zero() } else { c.get(m - 1) };
            (derivatives[m] - lower - closed * a[m]).norm()
        })
        .fold(0.0, f64::max))
}

/// `C_p[j']` for a possibly invalid lower spin `2j' = twice_j`, zero when
/// `twice_j < 0`.
fn lower_coefficient(twice_j: i64, power: i64, theta: f64) -> Complex64 {
    if twice_j < 0 {
        return Complex64::zero();
    }
    coefficient_by_power(Spin::from_twice(twice_j as u32), power, theta)
}

/// Residual of the relation expressing `(2 d/dθ + tan(θ/2)) C_q[j]` through
/// coefficients of lower spins `j - m - 1`, with `q = 2n + 1` for integer `j`
/// and `q = 2n` for half-integer `j`.
///
/// The sum runs over `m = 0 … j - n - 1` for integer `j` and
/// `m = 0 … j - n - 1/2` for half-integer `j`.
pub fn verify_mixed_spin_relations(spin: Spin, n: u32, theta: f64, h: f64) -> Result<f64> {
    check_step(h)?;
    let twice_j = spin.twice_j() as i64;
    let twice_gap = twice_j - 2 * n as i64;
    let (q, last_m) = if spin.is_integer() {
        if twice_gap < 2 {
            return Err(Error::Domain(format!(
                "integer spin needs j - n >= 1, got 2j = {twice_j}, n = {n}"
            )));
        }
        (2 * n as i64 + 1, twice_gap / 2 - 1)
    } else {
        if twice_gap < 3 {
            return Err(Error::Domain(format!(
                "half-integer spin needs j - n >= 3/2, got 2j = {twice_j}, n = {n}"
            )));
        }
        (2 * n as i64, (twice_gap - 1) / 2)
    };
    let value = |t: f64| coefficient_by_power(spin, q, t);
    let derivative = (value(theta + h) - value(theta - h)) / (2.0 * h);
    let (s, c) = (theta / 2.0).sin_cos();
    let lhs = 2.0 * derivative + (s / c) * value(theta);
    let rhs: Complex64 = (0..=last_m)
        .map(|m| {
            let lower = twice_j - 2 * m - 2;
            let even_term = Complex64::i() * c * c * s.powi(2 * m as i32) * lower_coefficient(lower, q - 1, theta);
            let odd_term = c * s.powi(2 * m as i32 + 1) * lower_coefficient(lower, q, theta);
            even_term + odd_term
        })
        .sum();
    Ok((lhs - rhs).norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::ComplexMatrix;
    use crate::spin_algebra::{axis_dot_j, Axis};
    use crate::vandermonde::{solve_exact, vandermonde_matrix};
    use num_rational::BigRational;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn a_of(twice_j: u32) -> Vec<BigInt> {
        resolution_polynomial(Spin::from_twice(twice_j))
            .unwrap()
            .coeffs()
            .to_vec()
    }

    #[test]
    fn small_resolution_polynomials() {
        assert_eq!(a_of(1), ints(&[1, 0]));
        assert_eq!(a_of(2), ints(&[0, 4, 0]));
        assert_eq!(a_of(3), ints(&[-9, 0, 10, 0]));
        assert_eq!(a_of(4), ints(&[0, -64, 0, 20, 0]));
        assert!(resolution_polynomial(Spin::from_twice(0)).is_err());
    }

    #[test]
    fn parity_vanishing() {
        for twice_j in 1..=24u32 {
            let a = a_of(twice_j);
            // nonzero entries sit at m ≡ 2j + 1 (mod 2)
            for (m, v) in a.iter().enumerate() {
                if (m as u32 + twice_j).is_multiple_of(2) {
                    assert!(v.is_zero(), "2j = {twice_j}, m = {m}");
                }
            }
        }
    }

    #[test]
    fn eigenvalue_identity() {
        for twice_j in 1..=24u32 {
            let p = resolution_polynomial(Spin::from_twice(twice_j)).unwrap();
            for lambda in vandermonde_matrix(Spin::from_twice(twice_j)).eigenvalues() {
                let x = BigInt::from(*lambda);
                assert_eq!(x.pow(twice_j + 1), p.eval(&x), "2j = {twice_j}, λ = {lambda}");
            }
        }
    }

    #[test]
    fn recursion_holds() {
        let p1 = resolution_polynomial(Spin::from_twice(2)).unwrap();
        // 16x³ + (x² - 16)·4x = 20x³ - 64x
        assert_eq!(p1.coeffs(), &ints(&[0, 4, 0])[..]);
        for twice_j in 1..=24u32 {
            assert!(verify_pj_recursion(Spin::from_twice(twice_j)).unwrap().is_empty());
        }
    }

    #[test]
    fn lowest_coefficients_closed_forms() {
        for twice_j in 1..=20u32 {
            let a = a_of(twice_j);
            let double_factorial: BigInt = (1..=twice_j).rev().step_by(2).fold(BigInt::one(), |acc, v| acc * v);
            let square = &double_factorial * &double_factorial;
            if twice_j % 2 == 0 {
                let j = twice_j / 2;
                let expected = if (j - 1) % 2 == 0 { square } else { -square };
                assert_eq!(a[1], expected, "2j = {twice_j}");
            } else {
                let floor_j = twice_j / 2;
                let expected = if floor_j % 2 == 0 { square } else { -square };
                assert_eq!(a[0], expected, "2j = {twice_j}");
            }
        }
    }

    #[test]
    fn triangles_match_brute_force_interpolation() {
        let t = central_factorial_triangles(12).unwrap();
        assert_eq!(t.fermionic[0], ints(&[1]));
        assert_eq!(t.fermionic[1], ints(&[-9, 10]));
        assert_eq!(t.bosonic[0], ints(&[4]));
        assert_eq!(t.bosonic[1], ints(&[-64, 20]));
        for twice_j in 1..=12u32 {
            let spin = Spin::from_twice(twice_j);
            let rhs: Vec<BigRational> = vandermonde_matrix(spin)
                .eigenvalues()
                .iter()
                .map(|&l| BigRational::from_integer(BigInt::from(l).pow(twice_j + 1)))
                .collect();
            let solved: Vec<BigInt> = solve_exact(spin, &rhs)
                .unwrap()
                .into_iter()
                .filter(|v| !v.is_zero())
                .map(|v| {
                    assert!(v.is_integer());
                    v.to_integer()
                })
                .collect();
            let row = if twice_j % 2 == 1 {
                &t.fermionic[(twice_j as usize - 1) / 2]
            } else {
                &t.bosonic[twice_j as usize / 2 - 1]
            };
            assert_eq!(&solved, row, "2j = {twice_j}");
        }
        assert_eq!(CentralFactorialTriangles::render(&t.bosonic[..2]), "4\n-64 20\n");
        assert!(central_factorial_triangles(0).is_err());
    }

    #[test]
    fn matrix_level_resolution() {
        let axis = Axis::new(0.4, -1.1, 0.7).unwrap();
        for twice_j in 1..=10u32 {
            let spin = Spin::from_twice(twice_j);
            let m = axis_dot_j(&axis, spin).scale(Complex64::new(2.0, 0.0));
            let a = resolution_polynomial(spin).unwrap().coeffs_f64();
            let mut power = ComplexMatrix::identity(spin.dim());
            let mut sum = ComplexMatrix::zeros(spin.dim());
            for coefficient in &a {
                sum = &sum + &power.scale(Complex64::new(*coefficient, 0.0));
                power = &power * &m;
            }
            let scale = (twice_j as f64).powi(twice_j as i32 + 1);
            assert!(power.max_abs_diff(&sum) <= 1e-8 * scale, "2j = {twice_j}");
        }
    }

    #[test]
    fn dc_relation_residuals() {
        for twice_j in [1u32, 2, 3, 4, 5, 8] {
            let r = verify_dc_relation(Spin::from_twice(twice_j), 0.9, 1e-5).unwrap();
            assert!(r < 1e-6, "2j = {twice_j}: {r}");
        }
        assert!(verify_dc_relation(Spin::from_twice(2), 0.9, 0.0).is_err());
    }

    #[test]
    fn hierarchy_residuals() {
        for twice_j in [2u32, 3, 4, 5, 8] {
            for theta in [-2.5, 0.9, 4.0] {
                let r = verify_hierarchy(Spin::from_twice(twice_j), theta, 1e-5).unwrap();
                assert!(r < 1e-6, "2j = {twice_j}: {r}");
            }
        }
    }

    #[test]
    fn first_coefficient_derivative_for_integer_spin() {
        // dC_1/dα = 1 + (-1)^{j-1} [(2j)!!]² C_{2j}
        let spin = Spin::from_twice(4);
        let theta = 1.3;
        let h = 1e-5;
        let c = |t: f64| solve_coefficients(spin, t).unwrap();
        let derivative = -2.0 * Complex64::i() * (c(theta + h).get(1) - c(theta - h).get(1)) / (2.0 * h);
        let expected = 1.0 - 64.0 * c(theta).get(4);
        assert!((derivative - expected).norm() < 1e-6);
    }

    #[test]
    fn mixed_spin_residuals() {
        for (twice_j, n) in [(2u32, 0u32), (4, 0), (4, 1), (8, 2), (3, 0), (5, 0), (5, 1), (9, 3)] {
            for theta in [-1.9, 0.4, 1.1] {
                let r = verify_mixed_spin_relations(Spin::from_twice(twice_j), n, theta, 1e-5).unwrap();
                assert!(r < 1e-6, "2j = {twice_j}, n = {n}, θ = {theta}: {r}");
            }
        }
        assert!(verify_mixed_spin_relations(Spin::from_twice(2), 1, 0.3, 1e-5).is_err());
        assert!(verify_mixed_spin_relations(Spin::from_twice(3), 1, 0.3, 1e-5).is_err());
        assert!(verify_mixed_spin_relations(Spin::from_twice(1), 0, 0.3, 1e-5).is_err());
    }
}
