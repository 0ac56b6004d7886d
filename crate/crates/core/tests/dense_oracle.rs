//! The dense exponential against nalgebra's Padé implementation.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spinpoly::spin_algebra::{axis_dot_j, matrix_exponential, rotation_oracle, spin_matrices, Axis};
use spinpoly::{Complex64, ComplexMatrix, Spin};

fn to_nalgebra(m: &ComplexMatrix) -> DMatrix<Complex64> {
    DMatrix::from_row_slice(m.dim(), m.dim(), m.as_slice())
}

fn from_nalgebra(m: &DMatrix<Complex64>) -> ComplexMatrix {
    ComplexMatrix::from_fn(m.nrows(), |r, c| m[(r, c)])
}

#[test]
fn rotation_oracle_matches_nalgebra_exp() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for twice_j in 0..=16u32 {
        let spin = Spin::from_twice(twice_j);
        for _ in 0..3 {
            let axis = Axis::new(
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
            )
            .unwrap();
            let theta = rng.gen_range(-6.0..6.0);
            let generator = axis_dot_j(&axis, spin).scale(Complex64::new(0.0, theta));
            let reference = from_nalgebra(&to_nalgebra(&generator).exp());
            let ours = rotation_oracle(spin, theta, &axis);
            assert!(ours.max_abs_diff(&reference) < 1e-11, "2j = {twice_j}");
        }
    }
}

#[test]
fn exponential_of_non_normal_matrix() {
    let m = ComplexMatrix::from_fn(4, |r, c| {
        Complex64::new((r * 3 + c) as f64 * 0.1, (r as f64 - c as f64) * 0.3)
    });
    let reference = from_nalgebra(&to_nalgebra(&m).exp());
    assert!(matrix_exponential(&m).max_abs_diff(&reference) < 1e-12 * reference.max_abs().max(1.0));
}

/// Eigenvalues of `n̂·J` are `j, j-1, …, -j` for any axis, checked through
/// nalgebra's Hermitian eigensolver.
#[test]
fn axis_projection_spectrum() {
    let axis = Axis::new(-0.3, 0.8, 0.5).unwrap();
    for twice_j in 1..=12u32 {
        let spin = Spin::from_twice(twice_j);
        let nj = to_nalgebra(&axis_dot_j(&axis, spin));
        let mut eigen: Vec<f64> = nj.symmetric_eigenvalues().iter().copied().collect();
        eigen.sort_by(|a, b| b.total_cmp(a));
        for (i, value) in eigen.iter().enumerate() {
            assert!((value - (spin.j() - i as f64)).abs() < 1e-12);
        }
    }
}

#[test]
fn casimir() {
    for twice_j in 0..=10u32 {
        let spin = Spin::from_twice(twice_j);
        let s = spin_matrices(spin);
        let casimir = &(&(&s.jx * &s.jx) + &(&s.jy * &s.jy)) + &(&s.jz * &s.jz);
        let j = spin.j();
        let expected = ComplexMatrix::identity(spin.dim()).scale(Complex64::new(j * (j + 1.0), 0.0));
        assert!(casimir.max_abs_diff(&expected) < 1e-12);
    }
}
