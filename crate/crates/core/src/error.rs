use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("power index {k} out of range for 2j = {twice_j}")]
    IndexOutOfRange { twice_j: u32, k: u32 },

    #[error("operation requires {expected} spin, got 2j = {twice_j}")]
    WrongSpinParity { twice_j: u32, expected: &'static str },

    #[error("spin 2j = {twice_j} below the minimum {min} for this operation")]
    SpinTooSmall { twice_j: u32, min: u32 },

    #[error("spin 2j = {twice_j} exceeds the supported ceiling 2j <= {ceiling}")]
    SpinCeiling { twice_j: u32, ceiling: u32 },

    #[error("axis must be a finite non-zero vector")]
    InvalidAxis,

    #[error("{0}")]
    Domain(String),
}
