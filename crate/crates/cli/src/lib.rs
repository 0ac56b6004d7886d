//! Library side of the `spinpoly` command: argument definitions, the
//! individual commands, the verification battery and the benchmark.
//!
//! Exit codes: `0` success, `1` a verification check failed, `2` usage
//! error, `3` a request beyond a supported ceiling.

use std::fs;
use std::io::{self, Write};

pub mod args;
pub mod bench;
pub mod commands;
pub mod format;
pub mod suite;

use args::{Cli, Command};
use spinpoly::Spin;

#[derive(Debug, thiserror::Error)]
pub enum Failure {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Ceiling(String),
    #[error("{0} verification check(s) failed")]
    Verification(usize),
    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Verification(_) | Failure::Io(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Ceiling(_) => 3,
        }
    }
}

impl From<spinpoly::Error> for Failure {
    fn from(e: spinpoly::Error) -> Self {
        match e {
            spinpoly::Error::SpinCeiling { .. } => Failure::Ceiling(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

/// Caps the global thread pool at `SPINPOLY_THREADS` when set.
pub fn configure_threads() -> Result<(), Failure> {
    let Ok(value) = std::env::var("SPINPOLY_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Failure::Usage(format!("SPINPOLY_THREADS must be a positive integer, got '{value}'")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Failure::Usage(e.to_string()))
}

fn emit(text: &str, path: Option<&std::path::Path>) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text)?,
        None => io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

pub fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Rotate(a) => {
            let axis = commands::parse_axis(&a.axis)?;
            let theta = if a.degrees { a.theta.to_radians() } else { a.theta };
            let u = commands::rotate(Spin::from_twice(a.twice_j), theta, &axis, a.method)?;
            emit(&commands::render_matrix(&u, a.out), None)
        }
        Command::Coeffs(a) => emit(
            &commands::coefficient_listing(Spin::from_twice(a.twice_j), a.format),
            None,
        ),
        Command::Sweep(a) => {
            let table = commands::sweep(Spin::from_twice(a.twice_j), a.k, a.theta_min, a.theta_max, a.n_points)?;
            emit(&table.to_csv(), a.out.as_deref())
        }
        Command::Verify(a) => {
            let config = suite::SuiteConfig {
                max_twice_j: a.max_twice_j,
                seed: a.seed,
                #[cfg(debug_assertions)]
                corrupt_coefficient: a.corrupt_coefficient,
                #[cfg(not(debug_assertions))]
                corrupt_coefficient: false,
            };
            let outcomes = suite::run_suite(&config)?;
            let mut out = String::new();
            for o in &outcomes {
                out += &format!("{o}\n");
            }
            emit(&out, None)?;
            match outcomes.iter().filter(|o| !o.passed()).count() {
                0 => Ok(()),
                n => Err(Failure::Verification(n)),
            }
        }
        Command::Bench(a) => emit(&bench::render(&bench::bench(&a.twice_j, a.reps)?), None),
        Command::Triangles(a) => emit(&commands::triangles(a.max_twice_j)?, None),
        Command::Convergence(a) => {
            let report = commands::convergence(a.k, a.parity, &a.twice_j, a.n_points)?;
            emit(&report.to_csv(), a.out.as_deref())
        }
    }
}
