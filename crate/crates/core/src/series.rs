//! Exact-rational Taylor machinery for the coefficient polynomials `c_k(θ)`.
//!
//! Everything here works in the variable `x = sin²(θ/2)`. The coefficient of
//! `(2i n̂·J sin(θ/2))^k / k!` in the rotation polynomial for spin `j` is
//!
//! ```text
//! c_k(θ) = cos(θ/2)^ε · Trunc_{⌊j - k/2⌋} [ (arcsin√x / √x)^k / (√(1-x))^ε ]
//! ```
//!
//! with `ε = (2j - k) mod 2`. The truncated series are computed exactly with
//! arbitrary-precision rationals; rounding to `f64` happens only when a
//! polynomial is evaluated.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::extended::{rational_to_dd, Dd};
use crate::{Error, Result, Spin};

/// A polynomial in `x = sin²(θ/2)` with exact coefficients, together with the
/// parity flag that selects the `cos(θ/2)` prefactor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalPoly {
    coeffs: Vec<BigRational>,
    parity: u32,
}

impl RationalPoly {
    /// Trailing zero coefficients are dropped.
    pub fn new(mut coeffs: Vec<BigRational>, parity: u32) -> Self {
        debug_assert!(parity <= 1);
        while coeffs.len() > 1 && coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        RationalPoly { coeffs, parity }
    }

    /// Coefficients of `x^0 … x^n`.
    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn parity(&self) -> u32 {
        self.parity
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// Coefficients rounded to the nearest double.
    pub fn coeffs_f64(&self) -> Vec<f64> {
        self.coeffs.iter().map(rational_to_f64).collect()
    }

    /// Horner evaluation of the polynomial part only, at a given `x`.
    pub fn eval_x(&self, x: f64) -> f64 {
        horner(&self.coeffs_f64(), x)
    }
}

pub(crate) fn horner(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

pub(crate) fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

fn central_binomial(n: usize) -> BigInt {
    // C(2n, n) by the multiplicative recurrence C(2n,n) = C(2n-2,n-1)·2(2n-1)/n
    let mut c = BigInt::one();
    for i in 1..=n {
        c = c * BigInt::from(2 * (2 * i - 1)) / BigInt::from(i);
    }
    c
}

fn inv_sqrt_coefficient(n: usize) -> BigRational {
    BigRational::new(central_binomial(n), BigInt::one() << (2 * n))
}

/// `n`-th Taylor coefficient of `arcsin√x/√x`, i.e. `C(2n,n) / (4ⁿ (2n+1))`.
fn arcsin_coefficient(n: usize) -> BigRational {
    BigRational::new(
        central_binomial(n),
        (BigInt::one() << (2 * n)) * BigInt::from(2 * n + 1),
    )
}

/// Coefficients `lo..hi` of the product of two series; `a` and `b` must have
/// at least `hi` entries.
fn product_range(a: &[BigRational], b: &[BigRational], lo: usize, hi: usize) -> Vec<BigRational> {
    (lo..hi)
        .map(|i| {
            (0..=i).fold(BigRational::zero(), |acc, l| {
                if a[l].is_zero() || b[i - l].is_zero() {
                    acc
                } else {
                    acc + &a[l] * &b[i - l]
                }
            })
        })
        .collect()
}

fn truncated_product(a: &[BigRational], b: &[BigRational], n_terms: usize) -> Vec<BigRational> {
    product_range(a, b, 0, n_terms)
}

/// Memoized exact series.
///
/// Entries only ever grow: a request for more terms than are cached extends
/// the stored prefix, and the prefix itself never changes.
#[derive(Debug, Default)]
pub struct SeriesCache {
    // k -> coefficients of (arcsin√x/√x)^k, longest prefix computed so far
    powers: RwLock<HashMap<u32, Arc<Vec<BigRational>>>>,
    inv_sqrt: RwLock<Arc<Vec<BigRational>>>,
    tables: RwLock<HashMap<Spin, Arc<CoefficientTable>>>,
}

impl SeriesCache {
    pub fn new() -> Self {
        Self::default()
    }

    /// Process-wide cache used by the free functions of this module.
    pub fn global() -> &'static SeriesCache {
        static CACHE: OnceLock<SeriesCache> = OnceLock::new();
        CACHE.get_or_init(SeriesCache::new)
    }

    /// First `n_terms` Taylor coefficients of `1/√(1-x)`.
    pub fn inv_sqrt(&self, n_terms: usize) -> Vec<BigRational> {
        {
            let cached = self.inv_sqrt.read().unwrap();
            if cached.len() >= n_terms {
                return cached[..n_terms].to_vec();
            }
        }
        let mut guard = self.inv_sqrt.write().unwrap();
        if guard.len() < n_terms {
            let mut extended = guard.as_ref().clone();
            extended.extend((extended.len()..n_terms).map(inv_sqrt_coefficient));
            *guard = Arc::new(extended);
        }
        guard[..n_terms].to_vec()
    }

    /// Taylor coefficients of `(arcsin√x/√x)^k` through `x^{n_terms-1}`.
    pub fn arcsin_power(&self, k: u32, n_terms: usize) -> Vec<BigRational> {
        self.arcsin_power_shared(k, n_terms)[..n_terms].to_vec()
    }

    fn cached_power(&self, k: u32, n_terms: usize) -> Option<Arc<Vec<BigRational>>> {
        let powers = self.powers.read().unwrap();
        powers.get(&k).filter(|v| v.len() >= n_terms).cloned()
    }

    fn arcsin_power_shared(&self, k: u32, n_terms: usize) -> Arc<Vec<BigRational>> {
        if let Some(hit) = self.cached_power(k, n_terms) {
            return hit;
        }
        if k == 0 {
            let mut one = vec![BigRational::zero(); n_terms];
            if n_terms > 0 {
                one[0] = BigRational::one();
            }
            return Arc::new(one);
        }

        // Walk down to the highest power already long enough, then multiply
        // back up one factor at a time.
        let mut start = k;
        while start > 1 && self.cached_power(start - 1, n_terms).is_none() {
            start -= 1;
        }
        let base: Vec<BigRational> = (0..n_terms).map(arcsin_coefficient).collect();
        let mut prev = if start > 1 {
            self.cached_power(start - 1, n_terms)
        } else {
            None
        };
        for power in start..=k {
            let existing = self.powers.read().unwrap().get(&power).cloned();
            let next = match (&prev, existing) {
                (None, _) => base.clone(),
                // reuse the stored prefix and only compute the new tail
                (Some(lower), Some(old)) => {
                    let mut v = old.as_ref().clone();
                    v.extend(product_range(lower, &base, v.len(), n_terms));
                    v
                }
                (Some(lower), None) => truncated_product(lower, &base, n_terms),
            };
            let mut powers = self.powers.write().unwrap();
            let slot = powers.entry(power).or_insert_with(|| Arc::new(Vec::new()));
            if slot.len() < next.len() {
                *slot = Arc::new(next);
            }
            prev = Some(slot.clone());
        }
        prev.expect("k >= 1 runs the loop at least once")
    }

    /// The truncated coefficient polynomial `c_k` for `spin`.
    pub fn coefficient_polynomial(&self, spin: Spin, k: u32) -> Result<RationalPoly> {
        let twice_j = spin.twice_j();
        if k > twice_j {
            return Err(Error::IndexOutOfRange { twice_j, k });
        }
        let order = twice_j - k;
        let parity = order % 2;
        let n_terms = (order / 2) as usize + 1;
        let mut coeffs = self.arcsin_power(k, n_terms);
        if parity == 1 {
            coeffs = truncated_product(&coeffs, &self.inv_sqrt(n_terms), n_terms);
        }
        Ok(RationalPoly::new(coeffs, parity))
    }

    /// All `c_k` for one spin, built once and shared.
    pub fn coefficient_table(&self, spin: Spin) -> Arc<CoefficientTable> {
        if let Some(t) = self.tables.read().unwrap().get(&spin) {
            return t.clone();
        }
        let polys = (0..=spin.twice_j())
            .map(|k| self.coefficient_polynomial(spin, k).expect("k within range"))
            .collect();
        let table = Arc::new(CoefficientTable::from_polys(spin, polys));
        self.tables.write().unwrap().entry(spin).or_insert(table).clone()
    }
}

/// The `2j + 1` coefficient polynomials of one spin, with their `f64`
/// roundings precomputed for repeated evaluation.
#[derive(Debug, Clone)]
pub struct CoefficientTable {
    spin: Spin,
    polys: Vec<RationalPoly>,
    rounded: Vec<Vec<f64>>,
    extended: Vec<Vec<Dd>>,
}

impl CoefficientTable {
    fn from_polys(spin: Spin, polys: Vec<RationalPoly>) -> Self {
        let rounded = polys.iter().map(RationalPoly::coeffs_f64).collect();
        let extended = polys
            .iter()
            .map(|p| p.coeffs().iter().map(rational_to_dd).collect())
            .collect();
        CoefficientTable {
            spin,
            polys,
            rounded,
            extended,
        }
    }

    /// A table from caller-supplied polynomials, one per `k = 0 … 2j`.
    pub fn new(spin: Spin, polys: Vec<RationalPoly>) -> Result<Self> {
        if polys.len() != spin.dim() {
            return Err(Error::Domain(format!(
                "expected {} coefficient polynomials for 2j = {}, got {}",
                spin.dim(),
                spin.twice_j(),
                polys.len()
            )));
        }
        Ok(Self::from_polys(spin, polys))
    }

    /// `c_k(θ)` in double-double, from precomputed `sin(θ/2)`, `cos(θ/2)`.
    pub(crate) fn eval_extended(&self, k: u32, sin_half: Dd, cos_half: Dd) -> Dd {
        let x = sin_half * sin_half;
        let value = self.extended[k as usize]
            .iter()
            .rev()
            .fold(Dd::zero(), |acc, &c| acc * x + c);
        if self.polys[k as usize].parity == 1 {
            cos_half * value
        } else {
            value
        }
    }

    pub fn spin(&self) -> Spin {
        self.spin
    }

    pub fn polys(&self) -> &[RationalPoly] {
        &self.polys
    }

    pub fn poly(&self, k: u32) -> &RationalPoly {
        &self.polys[k as usize]
    }

    /// `c_k(θ)` in double precision.
    pub fn eval(&self, k: u32, theta: f64) -> f64 {
        let (s, c) = (theta / 2.0).sin_cos();
        let poly = &self.polys[k as usize];
        let value = horner(&self.rounded[k as usize], s * s);
        if poly.parity == 1 {
            c * value
        } else {
            value
        }
    }
}

/// First `n_terms` Taylor coefficients of `1/√(1-x)`, each `C(2n,n)/4ⁿ`.
pub fn series_inv_sqrt(n_terms: usize) -> Vec<BigRational> {
    SeriesCache::global().inv_sqrt(n_terms)
}

/// Taylor coefficients of `(arcsin√x/√x)^k` to order `x^{n_terms-1}`.
pub fn series_arcsin_power(k: u32, n_terms: usize) -> Vec<BigRational> {
    SeriesCache::global().arcsin_power(k, n_terms)
}

pub fn coefficient_polynomial(spin: Spin, k: u32) -> Result<RationalPoly> {
    SeriesCache::global().coefficient_polynomial(spin, k)
}

pub fn coefficient_table(spin: Spin) -> Arc<CoefficientTable> {
    SeriesCache::global().coefficient_table(spin)
}

/// `cos(θ/2)^ε · Σ coeffs[m] x^m` at `x = sin²(θ/2)`, by Horner's scheme in
/// double precision.
pub fn eval_coefficient(poly: &RationalPoly, theta: f64) -> f64 {
    let (s, c) = (theta / 2.0).sin_cos();
    let value = poly.eval_x(s * s);
    if poly.parity == 1 {
        c * value
    } else {
        value
    }
}

/// `(i sin(θ/2))^k / k!`, accumulated as a product so large `k` neither
/// overflows nor loses the factorial.
pub(crate) fn scaled_power(k: u32, theta: f64) -> Complex64 {
    let s = (theta / 2.0).sin();
    let magnitude = (1..=k).fold(1.0, |acc, l| acc * s / l as f64);
    match k % 4 {
        0 => Complex64::new(magnitude, 0.0),
        1 => Complex64::new(0.0, magnitude),
        2 => Complex64::new(-magnitude, 0.0),
        _ => Complex64::new(0.0, -magnitude),
    }
}

/// Top-down coefficient `C_{2j-m}[j](θ)`, the coefficient of
/// `(2n̂·J)^{2j-m}` in the rotation.
pub fn top_down_coefficient(spin: Spin, m: u32, theta: f64) -> Result<Complex64> {
    let twice_j = spin.twice_j();
    if m > twice_j {
        return Err(Error::IndexOutOfRange { twice_j, k: m });
    }
    let k = twice_j - m;
    let table = coefficient_table(spin);
    Ok(scaled_power(k, theta) * table.eval(k, theta))
}

/// `C_p[j](θ)` indexed by the power `p` of `2n̂·J`, zero outside `0..=2j`.
///
/// The zero extension matches the conventions `C_{-1}[j] = 0` and
/// `C_1[0] = 0` used by the differential relations.
pub fn coefficient_by_power(spin: Spin, power: i64, theta: f64) -> Complex64 {
    if power < 0 || power > spin.twice_j() as i64 {
        return Complex64::zero();
    }
    let twice_j = spin.twice_j();
    top_down_coefficient(spin, twice_j - power as u32, theta).expect("index checked")
}

/// Closed form of `C_0` for half-integer spin:
/// `cos(θ/2) · Trunc_{j-1/2}(1/√(1-x))`.
pub fn c0_half_integer(spin: Spin, theta: f64) -> Result<f64> {
    if spin.is_integer() {
        return Err(Error::WrongSpinParity {
            twice_j: spin.twice_j(),
            expected: "half-integer",
        });
    }
    let n_terms = (spin.twice_j() as usize - 1) / 2 + 1;
    let coeffs: Vec<f64> = series_inv_sqrt(n_terms).iter().map(rational_to_f64).collect();
    let (s, c) = (theta / 2.0).sin_cos();
    Ok(c * horner(&coeffs, s * s))
}

fn central_difference<F: Fn(f64) -> Complex64>(f: F, theta: f64, h: f64) -> Complex64 {
    (f(theta + h) - f(theta - h)) / (2.0 * h)
}

/// Residual of `i·C_{2(j-n)-1}[j] = 2 d/dθ C_{2(j-n)}[j]`, derivative by
/// central differences with step `h`.
pub fn derivative_pairing_residual(spin: Spin, n: u32, theta: f64, h: f64) -> Result<f64> {
    let twice_j = spin.twice_j();
    if 2 * n + 1 > twice_j {
        return Err(Error::Domain(format!(
            "pairing needs 2(j-n)-1 >= 0, got 2j = {twice_j}, n = {n}"
        )));
    }
    let even = (twice_j - 2 * n) as i64;
    let lhs = Complex64::i() * coefficient_by_power(spin, even - 1, theta);
    let rhs = 2.0 * central_difference(|t| coefficient_by_power(spin, even, t), theta, h);
    Ok((lhs - rhs).norm())
}

/// Residual of the half-integer closure linking `C_0` to `C_{2j}`:
/// `2i d/dθ C_0[j] = -(-1)^{j-1/2} [(2j)!!]² C_{2j}[j]`, with `(2j)!!` the
/// odd double factorial.
pub fn half_integer_closure_residual(spin: Spin, theta: f64, h: f64) -> Result<f64> {
    if spin.is_integer() {
        return Err(Error::WrongSpinParity {
            twice_j: spin.twice_j(),
            expected: "half-integer",
        });
    }
    let twice_j = spin.twice_j();
    let double_factorial = (1..=twice_j).step_by(2).fold(1.0, |acc, v| acc * v as f64);
    let sign = if ((twice_j - 1) / 2).is_multiple_of(2) {
        -1.0
    } else {
        1.0
    };
    let lhs = 2.0 * Complex64::i() * central_difference(|t| coefficient_by_power(spin, 0, t), theta, h);
    let rhs = coefficient_by_power(spin, twice_j as i64, theta) * (sign * double_factorial * double_factorial);
    Ok((lhs - rhs).norm())
}
