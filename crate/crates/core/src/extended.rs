//! Double-double evaluation of spin-matrix polynomials.
//!
//! A degree-`2j` polynomial in `n̂·J` that sums to a unitary matrix has
//! terms of size up to ~`(πj)^k / k!`, so in plain `f64` the result loses
//! about `log10` of that many digits. Powers, coefficients and the final sum
//! are carried in double-double here and only the result is rounded.

use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use twofloat::TwoFloat;

use crate::{Complex64, ComplexMatrix, Spin};

pub(crate) type Dd = TwoFloat;
pub(crate) type CDd = Complex<TwoFloat>;

pub(crate) fn dd(v: f64) -> Dd {
    TwoFloat::from(v)
}

pub(crate) fn cdd(re: Dd, im: Dd) -> CDd {
    Complex::new(re, im)
}

pub(crate) fn rational_to_dd(r: &BigRational) -> Dd {
    let hi = r.to_f64().unwrap_or(f64::NAN);
    let exact_hi = BigRational::from_float(hi).expect("finite");
    let lo = (r - exact_hi).to_f64().unwrap_or(0.0);
    TwoFloat::new_add(hi, lo)
}

/// `(sin(θ/2), cos(θ/2))` in double-double; `θ/2` is exact in binary.
pub(crate) fn sin_cos_half(theta: f64) -> (Dd, Dd) {
    dd(theta / 2.0).sin_cos()
}

/// `i^k · magnitude`.
pub(crate) fn times_i_power(k: u32, magnitude: Dd) -> CDd {
    let zero = Dd::zero();
    match k % 4 {
        0 => cdd(magnitude, zero),
        1 => cdd(zero, magnitude),
        2 => cdd(-magnitude, zero),
        _ => cdd(zero, -magnitude),
    }
}

#[derive(Debug, Clone)]
pub(crate) struct DdMatrix {
    dim: usize,
    data: Vec<CDd>,
}

impl DdMatrix {
    pub fn zeros(dim: usize) -> Self {
        DdMatrix {
            dim,
            data: vec![CDd::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = cdd(dd(1.0), Dd::zero());
        }
        m
    }

    pub fn get(&self, r: usize, c: usize) -> CDd {
        self.data[r * self.dim + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: CDd) {
        self.data[r * self.dim + c] = v;
    }

    pub fn mul(&self, rhs: &DdMatrix) -> DdMatrix {
        let n = self.dim;
        let spans: Vec<(usize, usize)> = (0..n)
            .map(|k| {
                let row = &rhs.data[k * n..(k + 1) * n];
                match row.iter().position(|b| !b.is_zero()) {
                    Some(first) => (first, n - row.iter().rev().position(|b| !b.is_zero()).unwrap()),
                    None => (0, 0),
                }
            })
            .collect();
        let mut out = DdMatrix::zeros(n);
        for r in 0..n {
            for (k, &(first, end)) in spans.iter().enumerate() {
                let a = self.data[r * n + k];
                if a.is_zero() {
                    continue;
                }
                for c in first..end {
                    out.data[r * n + c] += a * rhs.data[k * n + c];
                }
            }
        }
        out
    }

    /// `self += factor · other`.
    pub fn add_scaled(&mut self, other: &DdMatrix, factor: CDd) {
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            if !b.is_zero() {
                *a += *b * factor;
            }
        }
    }

    /// `self - shift · I`.
    pub fn shifted(&self, shift: Dd) -> DdMatrix {
        let mut out = self.clone();
        for i in 0..self.dim {
            let v = out.get(i, i);
            out.set(i, i, cdd(v.re - shift, v.im));
        }
        out
    }

    pub fn to_f64(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.dim, |r, c| {
            let z = self.get(r, c);
            Complex64::new(f64::from(z.re), f64::from(z.im))
        })
    }
}

/// `n̂·J` for the axis `raw / |raw|`, built in double-double with the
/// Condon–Shortley ladder elements.
pub(crate) fn axis_dot_j(raw: [f64; 3], spin: Spin) -> DdMatrix {
    let [x, y, z] = raw.map(dd);
    let norm = (x * x + y * y + z * z).sqrt();
    let (nx, ny, nz) = (x / norm, y / norm, z / norm);
    let twice_j = spin.twice_j() as i64;
    let dim = spin.dim();
    let mut m = DdMatrix::zeros(dim);
    for r in 0..dim {
        // twice the magnetic quantum number of row r
        let twice_m = twice_j - 2 * r as i64;
        m.set(r, r, cdd(nz * dd(twice_m as f64 / 2.0), Dd::zero()));
        if r > 0 {
            // <m+1| J+ |m> = sqrt(j(j+1) - m(m+1)); the radicand is an exact quarter-integer
            let radicand = (twice_j * (twice_j + 2) - twice_m * (twice_m + 2)) as f64 / 4.0;
            let half_ladder = dd(radicand).sqrt() / dd(2.0);
            m.set(r - 1, r, cdd(nx * half_ladder, -(ny * half_ladder)));
            m.set(r, r - 1, cdd(nx * half_ladder, ny * half_ladder));
        }
    }
    m
}

/// `Σ coeffs[p] · base^p` with the running power reused across `p`.
pub(crate) fn matrix_polynomial(base: &DdMatrix, coeffs: &[CDd]) -> DdMatrix {
    let dim = base.dim;
    let mut acc = DdMatrix::zeros(dim);
    let mut power = DdMatrix::identity(dim);
    for (p, &a) in coeffs.iter().enumerate() {
        if p > 0 {
            power = power.mul(base);
        }
        acc.add_scaled(&power, a);
    }
    acc
}
