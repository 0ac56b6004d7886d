//! Expansion coefficients from eigenvalue data.
//!
//! With `M = 2n̂·J` and eigenvalues `λ = 2j, 2j-2, …, -2j`, the coefficients
//! of `exp(αM) = Σ C_m M^m` solve `V·C = (e^{αλ_1}, …, e^{αλ_N})` for the
//! Vandermonde matrix `V` of the eigenvalues. Rotations have `α = iθ/2`.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::{BigInt, Sign};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::extended::{self, cdd, dd, rational_to_dd, CDd, Dd};
use crate::spin_algebra::Axis;
use crate::{ComplexMatrix, Error, Result, Spin};

/// Largest `2j` for which the exact inverse is built.
pub const VANDERMONDE_CEILING: u32 = 60;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VandermondeSystem {
    spin: Spin,
    eigenvalues: Vec<i64>,
    rows: Vec<Vec<BigInt>>,
}

impl VandermondeSystem {
    pub fn spin(&self) -> Spin {
        self.spin
    }

    /// `2j, 2j-2, …, -2j`.
    pub fn eigenvalues(&self) -> &[i64] {
        &self.eigenvalues
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    pub fn entry(&self, row: usize, col: usize) -> &BigInt {
        &self.rows[row][col]
    }
}

pub fn vandermonde_matrix(spin: Spin) -> VandermondeSystem {
    let twice_j = spin.twice_j() as i64;
    let eigenvalues: Vec<i64> = (0..=twice_j).map(|i| twice_j - 2 * i).collect();
    let rows = eigenvalues
        .iter()
        .map(|&lambda| {
            let mut row = Vec::with_capacity(spin.dim());
            let mut power = BigInt::one();
            for _ in 0..spin.dim() {
                row.push(power.clone());
                power *= lambda;
            }
            row
        })
        .collect();
    VandermondeSystem {
        spin,
        eigenvalues,
        rows,
    }
}

#[derive(Debug)]
struct ExactInverse {
    rational: Vec<Vec<BigRational>>,
    extended: Vec<Vec<Dd>>,
}

fn inverse_cache() -> &'static RwLock<HashMap<Spin, Arc<ExactInverse>>> {
    static CACHE: OnceLock<RwLock<HashMap<Spin, Arc<ExactInverse>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

fn check_ceiling(spin: Spin) -> Result<()> {
    if spin.twice_j() > VANDERMONDE_CEILING {
        return Err(Error::SpinCeiling {
            twice_j: spin.twice_j(),
            ceiling: VANDERMONDE_CEILING,
        });
    }
    Ok(())
}

/// Gauss–Jordan elimination on `[V | I]` over the rationals.
fn invert_exact(system: &VandermondeSystem) -> Vec<Vec<BigRational>> {
    let n = system.rows.len();
    let mut a: Vec<Vec<BigRational>> = system
        .rows
        .iter()
        .enumerate()
        .map(|(r, row)| {
            let mut out: Vec<BigRational> = row.iter().cloned().map(BigRational::from_integer).collect();
            out.extend((0..n).map(|c| {
                if c == r {
                    BigRational::one()
                } else {
                    BigRational::zero()
                }
            }));
            out
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !a[r][col].is_zero())
            .expect("distinct eigenvalues give a nonsingular matrix");
        a.swap(col, pivot);
        let inv = a[col][col].recip();
        for v in a[col].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = a[col].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r == col || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (v, p) in row.iter_mut().zip(&pivot_row).skip(col) {
                if !p.is_zero() {
                    *v -= &factor * p;
                }
            }
        }
    }
    a.into_iter().map(|row| row[n..].to_vec()).collect()
}

fn exact_inverse(spin: Spin) -> Result<Arc<ExactInverse>> {
    check_ceiling(spin)?;
    if let Some(found) = inverse_cache().read().unwrap().get(&spin) {
        return Ok(found.clone());
    }
    let rational = invert_exact(&vandermonde_matrix(spin));
    let extended = rational
        .iter()
        .map(|row| row.iter().map(rational_to_dd).collect())
        .collect();
    let built = Arc::new(ExactInverse { rational, extended });
    Ok(inverse_cache().write().unwrap().entry(spin).or_insert(built).clone())
}

/// The exact `V⁻¹`, rows indexed by the power `m`.
pub fn inverse(spin: Spin) -> Result<Vec<Vec<BigRational>>> {
    Ok(exact_inverse(spin)?.rational.clone())
}

/// Exact solution of `V·c = rhs`.
pub fn solve_exact(spin: Spin, rhs: &[BigRational]) -> Result<Vec<BigRational>> {
    if rhs.len() != spin.dim() {
        return Err(Error::Domain(format!(
            "right-hand side has {} entries, expected {}",
            rhs.len(),
            spin.dim()
        )));
    }
    let inv = exact_inverse(spin)?;
    Ok(inv
        .rational
        .iter()
        .map(|row| row.iter().zip(rhs).fold(BigRational::zero(), |acc, (a, b)| acc + a * b))
        .collect())
}

/// `C_0 … C_{2j}` at one angle; `values()[m]` multiplies `(2n̂·J)^m`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientVector {
    spin: Spin,
    theta: f64,
    values: Vec<Complex64>,
}

impl CoefficientVector {
    pub fn spin(&self) -> Spin {
        self.spin
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn get(&self, m: usize) -> Complex64 {
        self.values[m]
    }
}

fn solve_extended(spin: Spin, theta: f64) -> Result<Vec<CDd>> {
    let inv = exact_inverse(spin)?;
    let half = dd(theta / 2.0);
    let twice_j = spin.twice_j() as i64;
    let exponentials: Vec<CDd> = (0..=twice_j)
        .map(|i| {
            let (s, c) = (half * dd((twice_j - 2 * i) as f64)).sin_cos();
            cdd(c, s)
        })
        .collect();
    Ok(inv
        .extended
        .iter()
        .map(|row| {
            row.iter()
                .zip(&exponentials)
                .fold(CDd::zero(), |acc, (&a, &e)| acc + e * cdd(a, Dd::zero()))
        })
        .collect())
}

/// `V⁻¹ (e^{iλ_1θ/2}, …, e^{iλ_Nθ/2})`, errors above [`VANDERMONDE_CEILING`].
pub fn solve_coefficients(spin: Spin, theta: f64) -> Result<CoefficientVector> {
    let values = solve_extended(spin, theta)?
        .into_iter()
        .map(|z| Complex64::new(f64::from(z.re), f64::from(z.im)))
        .collect();
    Ok(CoefficientVector { spin, theta, values })
}

/// `exp(iθ n̂·J)` assembled from the solved coefficients.
pub fn rotation_from_vandermonde(spin: Spin, theta: f64, axis: &Axis) -> Result<ComplexMatrix> {
    let coeffs = solve_extended(spin, theta)?;
    // C_m (2X)^m = (2^m C_m) X^m; scaling by a power of two is exact
    let scaled: Vec<CDd> = coeffs
        .iter()
        .enumerate()
        .map(|(m, &c)| c * cdd(dd(2f64.powi(m as i32)), Dd::zero()))
        .collect();
    let base = extended::axis_dot_j(axis.raw(), spin);
    Ok(extended::matrix_polynomial(&base, &scaled).to_f64())
}

/// Determinant of `V[j]` with its prime factorization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VandermondeDeterminant {
    pub value: BigInt,
    /// Multiplicities from the closed floor-sum formulas.
    pub multiplicities: BTreeMap<u32, u64>,
    /// Multiplicities found by trial division of `value`.
    pub factored: BTreeMap<u32, u64>,
    /// What remains of `|value|` after dividing out all primes `<= 2j`.
    pub cofactor: BigInt,
}

impl VandermondeDeterminant {
    /// Whether formula and factorization agree and no larger prime occurs.
    pub fn consistent(&self) -> bool {
        self.multiplicities == self.factored && self.cofactor.is_one()
    }

    pub fn sign(&self) -> Sign {
        self.value.sign()
    }
}

/// Determinant by Bareiss fraction-free elimination.
fn bareiss_determinant(rows: &[Vec<BigInt>]) -> BigInt {
    let n = rows.len();
    let mut a = rows.to_vec();
    let mut sign = BigInt::one();
    let mut previous = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for c in k + 1..n {
                let v = (&a[i][c] * &a[k][k] - &a[i][k] * &a[k][c]) / &previous;
                a[i][c] = v;
            }
            a[i][k] = BigInt::zero();
        }
        previous = a[k][k].clone();
    }
    sign * previous
}

fn primes_up_to(n: u32) -> Vec<u32> {
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for p in 2..=n {
        if !composite[p] {
            primes.push(p as u32);
            for q in (p * p..=n).step_by(p) {
                composite[q] = true;
            }
        }
    }
    primes
}

/// `Σ_{k=1}^{2j} Σ_{m=0}^{⌊log_p k⌋} ⌊k / p^m⌋`.
fn floor_sum(twice_j: u32, p: u32) -> u64 {
    let mut total = 0u64;
    for k in 1..=twice_j as u64 {
        let mut power = 1u64;
        while power <= k {
            total += k / power;
            power *= p as u64;
        }
    }
    total
}

/// Multiplicity of `p` in `det V[j]` per the closed formulas.
pub fn prime_multiplicity(spin: Spin, p: u32) -> u64 {
    let sum = floor_sum(spin.twice_j(), p);
    if p == 2 {
        sum
    } else {
        let twice_j = spin.twice_j() as u64;
        // j(2j+1) = 2j(2j+1)/2
        sum - twice_j * (twice_j + 1) / 2
    }
}

pub fn vandermonde_det(spin: Spin) -> VandermondeDeterminant {
    let system = vandermonde_matrix(spin);
    let value = bareiss_determinant(&system.rows);
    let mut multiplicities = BTreeMap::new();
    let mut factored = BTreeMap::new();
    let mut cofactor = value.abs();
    // the factor 2 from the spacing of the eigenvalues is present even at 2j = 1
    let bound = if spin.twice_j() == 0 { 0 } else { spin.twice_j().max(2) };
    for p in primes_up_to(bound) {
        let expected = prime_multiplicity(spin, p);
        if expected > 0 {
            multiplicities.insert(p, expected);
        }
        let big_p = BigInt::from(p);
        let mut count = 0u64;
        while !cofactor.is_zero() && (&cofactor % &big_p).is_zero() {
            cofactor /= &big_p;
            count += 1;
        }
        if count > 0 {
            factored.insert(p, count);
        }
    }
    VandermondeDeterminant {
        value,
        multiplicities,
        factored,
        cofactor,
    }
}
