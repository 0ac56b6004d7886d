use std::fmt::Write as _;

use rayon::prelude::*;
use spinpoly::asymptotics::{convergence_report, interior_grid, ConvergenceReport};
use spinpoly::cayley_hamilton::{central_factorial_triangles, CentralFactorialTriangles};
use spinpoly::series::{coefficient_polynomial, coefficient_table};
use spinpoly::spin_algebra::{rotation_from_polynomial, rotation_oracle, Axis};
use spinpoly::vandermonde::rotation_from_vandermonde;
use spinpoly::{ComplexMatrix, Spin};

use crate::args::{CoeffFormat, MatrixFormat, Method};
use crate::format::c_exp;
use crate::Failure;

/// Parses `x,y,z`.
pub fn parse_axis(text: &str) -> Result<Axis, Failure> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let values: Vec<f64> = parts
        .iter()
        .map(|p| p.parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| Failure::Usage(format!("axis must be three numbers x,y,z, got '{text}'")))?;
    if values.len() != 3 {
        return Err(Failure::Usage(format!(
            "axis must be three numbers x,y,z, got '{text}'"
        )));
    }
    Axis::new(values[0], values[1], values[2]).map_err(|e| Failure::Usage(e.to_string()))
}

pub fn rotate(spin: Spin, theta: f64, axis: &Axis, method: Method) -> Result<ComplexMatrix, Failure> {
    match method {
        Method::Poly => Ok(rotation_from_polynomial(spin, theta, axis)),
        Method::Oracle => Ok(rotation_oracle(spin, theta, axis)),
        Method::Vandermonde => rotation_from_vandermonde(spin, theta, axis).map_err(Failure::from),
    }
}

pub fn render_matrix(m: &ComplexMatrix, format: MatrixFormat) -> String {
    match format {
        MatrixFormat::Json => m.to_json() + "\n",
        MatrixFormat::Text => m.to_string(),
    }
}

/// One line per `k`: `k=0 parity=1 [1, 1/2]`.
pub fn coefficient_listing(spin: Spin, format: CoeffFormat) -> String {
    let table = coefficient_table(spin);
    let mut out = String::new();
    for (k, poly) in table.polys().iter().enumerate() {
        let entries: Vec<String> = match format {
            CoeffFormat::Rational => poly.coeffs().iter().map(ToString::to_string).collect(),
            CoeffFormat::Decimal => poly.coeffs_f64().iter().map(ToString::to_string).collect(),
        };
        writeln!(out, "k={k} parity={} [{}]", poly.parity(), entries.join(", ")).unwrap();
    }
    out
}

/// `c_k(θ) sin^k(θ/2)` sampled on a uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub twice_j: u32,
    pub k: u32,
    pub rows: Vec<(f64, f64)>,
}

impl SweepTable {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("theta,value\n");
        for (theta, value) in &self.rows {
            writeln!(out, "{},{}", c_exp(*theta), c_exp(*value)).unwrap();
        }
        out
    }
}

pub fn uniform_grid(lo: f64, hi: f64, n_points: usize) -> Vec<f64> {
    let step = (hi - lo) / (n_points - 1) as f64;
    (0..n_points)
        .map(|i| if i + 1 == n_points { hi } else { lo + step * i as f64 })
        .collect()
}

pub fn sweep(spin: Spin, k: u32, theta_min: f64, theta_max: f64, n_points: usize) -> Result<SweepTable, Failure> {
    if n_points < 2 {
        return Err(Failure::Usage(format!("--n-points must be at least 2, got {n_points}")));
    }
    if theta_min.partial_cmp(&theta_max) != Some(std::cmp::Ordering::Less) {
        return Err(Failure::Usage(format!(
            "--theta-min ({theta_min}) must be below --theta-max ({theta_max})"
        )));
    }
    if k > spin.twice_j() {
        return Err(Failure::Usage(format!("k = {k} exceeds 2j = {}", spin.twice_j())));
    }
    let poly = coefficient_polynomial(spin, k)?;
    let coeffs = poly.coeffs_f64();
    let rows = uniform_grid(theta_min, theta_max, n_points)
        .into_par_iter()
        .map(|theta| {
            let (s, c) = (theta / 2.0).sin_cos();
            let x = s * s;
            let mut value = coeffs.iter().rev().fold(0.0, |acc, &a| acc * x + a);
            if poly.parity() == 1 {
                value *= c;
            }
            (theta, value * s.powi(k as i32))
        })
        .collect();
    Ok(SweepTable {
        twice_j: spin.twice_j(),
        k,
        rows,
    })
}

pub fn triangles(max_twice_j: u32) -> Result<String, Failure> {
    let t = central_factorial_triangles(max_twice_j)?;
    let mut out = String::from("# fermionic (j = 1/2, 3/2, ...)\n");
    out += &CentralFactorialTriangles::render(&t.fermionic);
    out += "# bosonic (j = 1, 2, ...)\n";
    out += &CentralFactorialTriangles::render(&t.bosonic);
    Ok(out)
}

pub fn convergence(k: u32, parity: u32, twice_js: &[u32], n_points: usize) -> Result<ConvergenceReport, Failure> {
    if n_points < 2 {
        return Err(Failure::Usage(format!("--n-points must be at least 2, got {n_points}")));
    }
    let spins: Vec<Spin> = twice_js.iter().copied().map(Spin::from_twice).collect();
    if let Some(s) = spins.iter().find(|s| k > s.twice_j()) {
        return Err(Failure::Usage(format!("k = {k} exceeds 2j = {}", s.twice_j())));
    }
    spins.par_iter().for_each(|&s| {
        coefficient_table(s);
    });
    convergence_report(k, parity, &interior_grid(n_points), &spins).map_err(|e| Failure::Usage(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_matches_scaled_coefficient() {
        let spin = Spin::from_twice(11);
        for k in [0, 3, 11] {
            let table = sweep(spin, k, -6.0, 6.0, 41).unwrap();
            for (theta, value) in table.rows {
                let expected = spinpoly::asymptotics::scaled_coefficient(spin, k, theta).unwrap();
                assert_eq!(value, expected, "k = {k}, θ = {theta}");
            }
        }
    }

    #[test]
    fn axis_parsing() {
        assert!(parse_axis("0, 0,1").is_ok());
        assert!(matches!(parse_axis("0,0,0"), Err(Failure::Usage(_))));
        assert!(matches!(parse_axis("1,2"), Err(Failure::Usage(_))));
        assert!(matches!(parse_axis("a,b,c"), Err(Failure::Usage(_))));
    }

    #[test]
    fn quartet_listing() {
        let text = coefficient_listing(Spin::from_twice(3), CoeffFormat::Rational);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "k=0 parity=1 [1, 1/2]");
        assert_eq!(lines[1], "k=1 parity=0 [1, 1/6]");
        assert_eq!(lines.len(), 4);
        let decimal = coefficient_listing(Spin::from_twice(3), CoeffFormat::Decimal);
        assert!(decimal.starts_with("k=0 parity=1 [1, 0.5]"));
        assert_eq!(
            coefficient_listing(Spin::from_twice(0), CoeffFormat::Rational),
            "k=0 parity=0 [1]\n"
        );
    }

    #[test]
    fn grid_endpoints_are_exact() {
        let g = uniform_grid(-1.0, 3.0, 5);
        assert_eq!(g, vec![-1.0, 0.0, 1.0, 2.0, 3.0]);
    }

    #[test]
    fn sweep_rejects_bad_input() {
        assert!(sweep(Spin::from_twice(4), 0, 0.0, 1.0, 1).is_err());
        assert!(sweep(Spin::from_twice(4), 5, 0.0, 1.0, 3).is_err());
        assert!(sweep(Spin::from_twice(4), 0, 1.0, 1.0, 3).is_err());
    }

    #[test]
    fn sweep_csv_layout() {
        let table = sweep(Spin::from_twice(2), 0, -1.0, 1.0, 3).unwrap();
        assert_eq!(
            table.to_csv(),
            "theta,value\n-1.000000000000e+00,1.000000000000e+00\n0.000000000000e+00,1.000000000000e+00\n1.000000000000e+00,1.000000000000e+00\n"
        );
    }
}
