//! Spin matrices and the three matrix-level operations built on them: the
//! rotation polynomial, the dense exponential oracle, and the spin-reduction
//! identity.

use std::f64::consts::PI;

use num_traits::Zero;

use crate::extended::{self, cdd, dd, sin_cos_half, times_i_power, CDd, Dd, DdMatrix};
use crate::series::{self, CoefficientTable};
use crate::{Complex64, ComplexMatrix, Error, Result, Spin};

/// Rotation axis. Stores the vector as given; [`Axis::unit`] is the
/// normalized direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    raw: [f64; 3],
    unit: [f64; 3],
}

impl Axis {
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let raw = [x, y, z];
        let norm = (x * x + y * y + z * z).sqrt();
        if !norm.is_finite() || norm == 0.0 {
            return Err(Error::InvalidAxis);
        }
        Ok(Axis {
            raw,
            unit: raw.map(|v| v / norm),
        })
    }

    pub fn x() -> Self {
        Axis::new(1.0, 0.0, 0.0).unwrap()
    }

    pub fn y() -> Self {
        Axis::new(0.0, 1.0, 0.0).unwrap()
    }

    pub fn z() -> Self {
        Axis::new(0.0, 0.0, 1.0).unwrap()
    }

    pub fn unit(&self) -> [f64; 3] {
        self.unit
    }

    pub fn raw(&self) -> [f64; 3] {
        self.raw
    }

    pub fn reversed(&self) -> Self {
        Axis {
            raw: self.raw.map(|v| -v),
            unit: self.unit.map(|v| -v),
        }
    }
}

/// The generators `(J_x, J_y, J_z)` of one spin representation.
#[derive(Debug, Clone)]
pub struct SpinTriple {
    pub jx: ComplexMatrix,
    pub jy: ComplexMatrix,
    pub jz: ComplexMatrix,
}

/// Spin matrices in the Condon–Shortley convention, with
/// `J_z = diag(j, j-1, …, -j)`.
pub fn spin_matrices(spin: Spin) -> SpinTriple {
    let dim = spin.dim();
    let twice_j = spin.twice_j() as i64;
    let twice_m = |r: usize| twice_j - 2 * r as i64;
    // <m+1| J+ |m> on the superdiagonal
    let ladder = |r: usize| {
        let m2 = twice_m(r);
        (((twice_j * (twice_j + 2) - m2 * (m2 + 2)) as f64) / 4.0).sqrt()
    };
    let jz = ComplexMatrix::from_fn(dim, |r, c| {
        if r == c {
            Complex64::new(twice_m(r) as f64 / 2.0, 0.0)
        } else {
            Complex64::zero()
        }
    });
    let jx = ComplexMatrix::from_fn(dim, |r, c| {
        if c == r + 1 {
            Complex64::new(ladder(c) / 2.0, 0.0)
        } else if r == c + 1 {
            Complex64::new(ladder(r) / 2.0, 0.0)
        } else {
            Complex64::zero()
        }
    });
    let jy = ComplexMatrix::from_fn(dim, |r, c| {
        if c == r + 1 {
            Complex64::new(0.0, -ladder(c) / 2.0)
        } else if r == c + 1 {
            Complex64::new(0.0, ladder(r) / 2.0)
        } else {
            Complex64::zero()
        }
    });
    SpinTriple { jx, jy, jz }
}

/// `n̂·J` for a spin, in double precision.
pub fn axis_dot_j(axis: &Axis, spin: Spin) -> ComplexMatrix {
    let SpinTriple { jx, jy, jz } = spin_matrices(spin);
    let [nx, ny, nz] = axis.unit().map(|v| Complex64::new(v, 0.0));
    &(&jx.scale(nx) + &jy.scale(ny)) + &jz.scale(nz)
}

/// Coefficients `a_k` of `(n̂·J)^k` in `Σ c_k/k! (2i sin(θ/2) n̂·J)^k`.
fn ascending_coefficients(table: &CoefficientTable, sin_half: Dd, cos_half: Dd) -> Vec<CDd> {
    let mut magnitude = dd(1.0);
    (0..=table.spin().twice_j())
        .map(|k| {
            if k > 0 {
                magnitude = magnitude * (dd(2.0) * sin_half) / dd(k as f64);
            }
            times_i_power(k, table.eval_extended(k, sin_half, cos_half) * magnitude)
        })
        .collect()
}

/// The rotation `exp(iθ n̂·J)` from the finite spin polynomial
/// `Σ_{k=0}^{2j} c_k(θ)/k! (2i sin(θ/2) n̂·J)^k`.
///
/// Evaluated in double-double (see the `extended` module) and rounded once.
pub fn rotation_from_polynomial(spin: Spin, theta: f64, axis: &Axis) -> ComplexMatrix {
    let table = series::coefficient_table(spin);
    rotation_with_table(&table, theta, axis)
}

/// Same as [`rotation_from_polynomial`] with a caller-held coefficient table.
pub fn rotation_with_table(table: &CoefficientTable, theta: f64, axis: &Axis) -> ComplexMatrix {
    let (s, c) = sin_cos_half(theta);
    let coeffs = ascending_coefficients(table, s, c);
    let base = extended::axis_dot_j(axis.raw(), table.spin());
    extended::matrix_polynomial(&base, &coeffs).to_f64()
}

/// The rotation polynomial summed in plain `f64`. Loses roughly
/// `log10((πj)^{2j}/(2j)!)` digits to cancellation; kept for benchmarking
/// and for comparison with the extended path.
pub fn rotation_from_polynomial_f64(table: &CoefficientTable, theta: f64, axis: &Axis) -> ComplexMatrix {
    let spin = table.spin();
    let base = axis_dot_j(axis, spin).scale(Complex64::new(0.0, 2.0 * (theta / 2.0).sin()));
    let mut acc = ComplexMatrix::zeros(spin.dim());
    let mut power = ComplexMatrix::identity(spin.dim());
    let mut factorial = 1.0;
    for k in 0..=spin.twice_j() {
        if k > 0 {
            power = &power * &base;
            factorial *= k as f64;
        }
        let weight = table.eval(k, theta) / factorial;
        acc = &acc + &power.scale(Complex64::new(weight, 0.0));
    }
    acc
}

/// Dense `exp(iθ n̂·J)` by scaling and squaring with a Taylor kernel.
///
/// Shares nothing with the coefficient machinery, so it serves as the
/// reference the polynomial paths are checked against.
pub fn rotation_oracle(spin: Spin, theta: f64, axis: &Axis) -> ComplexMatrix {
    let generator = axis_dot_j(axis, spin).scale(Complex64::new(0.0, theta));
    matrix_exponential(&generator)
}

/// `exp(A)` for a dense complex matrix.
pub fn matrix_exponential(a: &ComplexMatrix) -> ComplexMatrix {
    const KERNEL_NORM: f64 = 0.25;
    let norm = a.norm_one();
    let squarings = if norm > KERNEL_NORM {
        (norm / KERNEL_NORM).log2().ceil() as u32
    } else {
        0
    };
    let scaled = a.scale(Complex64::new(0.5f64.powi(squarings as i32), 0.0));

    // Taylor series of the scaled matrix until the terms drop below rounding.
    let dim = a.dim();
    let mut result = ComplexMatrix::identity(dim);
    let mut term = ComplexMatrix::identity(dim);
    for n in 1..=40 {
        term = (&term * &scaled).scale(Complex64::new(1.0 / n as f64, 0.0));
        result = &result + &term;
        if term.max_abs() < 1e-18 * result.max_abs() {
            break;
        }
    }
    for _ in 0..squarings {
        result = &result * &result;
    }
    result
}

/// The character `sin((2j+1)θ/2) / sin(θ/2)`.
pub fn character(spin: Spin, theta: f64) -> f64 {
    let dim = spin.dim() as f64;
    let s = (theta / 2.0).sin();
    if s.abs() < 1e-8 {
        // θ ≡ 0 (mod 4π) gives 2j+1; θ ≡ 2π (mod 4π) gives (2j+1)(-1)^{2j}
        let turns = (theta / (2.0 * PI)).round() as i64;
        let sign = if turns.rem_euclid(2) == 1 && !spin.is_integer() {
            -1.0
        } else {
            1.0
        };
        return sign * dim;
    }
    (dim * theta / 2.0).sin() / s
}

/// Checks the reduction from spin `j-1` to spin `j`:
///
/// ```text
/// U_j = P_{j-1}(n̂·J[j]) + [ (2i s)^{2j}/(2j)! n̂·J + cos(θ/2) (2i s)^{2j-1}/(2j-1)! ] · χ_{j-1}(n̂·J[j])
/// ```
///
/// where `P_{j-1}` is the spin `j-1` rotation polynomial evaluated on the
/// spin-`j` matrices, `s = sin(θ/2)`, and `χ_{j-1}` is the characteristic
/// polynomial of `n̂·J[j-1]`. Returns the max-entry deviation of the right
/// side from [`rotation_from_polynomial`].
pub fn verify_spin_reduction(spin: Spin, theta: f64, axis: &Axis) -> Result<f64> {
    let lower = spin.lowered().ok_or(Error::SpinTooSmall {
        twice_j: spin.twice_j(),
        min: 2,
    })?;
    let twice_j = spin.twice_j();
    let (s, c) = sin_cos_half(theta);
    let x = extended::axis_dot_j(axis.raw(), spin);
    let dim = spin.dim();

    let lower_table = series::coefficient_table(lower);
    let mut rhs = extended::matrix_polynomial(&x, &ascending_coefficients(&lower_table, s, c));

    // characteristic polynomial of J[j-1]: Π over its eigenvalues m of (X - m)
    let x_squared = x.mul(&x);
    let mut charpoly = if lower.is_integer() {
        x.clone()
    } else {
        DdMatrix::identity(dim)
    };
    let lower_twice = lower.twice_j();
    for twice_m in (1..=lower_twice).filter(|m| m % 2 == lower_twice % 2) {
        let m = dd(twice_m as f64 / 2.0);
        charpoly = charpoly.mul(&x_squared.shifted(m * m));
    }

    // (2is)^n / n! for the top two orders
    let mut top = dd(1.0);
    for l in 1..twice_j {
        top = top * dd(2.0) * s / dd(l as f64);
    }
    let penultimate = times_i_power(twice_j - 1, top * c);
    let last = times_i_power(twice_j, top * dd(2.0) * s / dd(twice_j as f64));
    let mut prefactor = DdMatrix::zeros(dim);
    prefactor.add_scaled(&x, last);
    prefactor.add_scaled(&DdMatrix::identity(dim), penultimate);
    rhs.add_scaled(&prefactor.mul(&charpoly), cdd(dd(1.0), Dd::zero()));

    let direct = rotation_from_polynomial(spin, theta, axis);
    Ok(rhs.to_f64().max_abs_diff(&direct))
}
