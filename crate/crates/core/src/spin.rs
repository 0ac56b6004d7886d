use std::fmt;

use serde::{Deserialize, Serialize};

/// A spin label stored as the integer `2j`, so half-integers are exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Spin {
    twice_j: u32,
}

impl Spin {
    pub const fn from_twice(twice_j: u32) -> Self {
        Spin { twice_j }
    }

    pub const fn twice_j(self) -> u32 {
        self.twice_j
    }

    /// Dimension `2j + 1` of the representation.
    pub const fn dim(self) -> usize {
        self.twice_j as usize + 1
    }

    /// Bose/Fermi index ε(j): 0 for integer spin, 1 for half-integer spin.
    pub const fn bose_fermi_index(self) -> u32 {
        self.twice_j % 2
    }

    pub const fn is_integer(self) -> bool {
        self.twice_j.is_multiple_of(2)
    }

    pub fn j(self) -> f64 {
        self.twice_j as f64 / 2.0
    }

    /// The spin one unit lower, `j - 1`, if it exists.
    pub fn lowered(self) -> Option<Spin> {
        self.twice_j.checked_sub(2).map(Spin::from_twice)
    }

    pub fn raised(self) -> Spin {
        Spin::from_twice(self.twice_j + 2)
    }
}

impl fmt::Display for Spin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.twice_j / 2)
        } else {
            write!(f, "{}/2", self.twice_j)
        }
    }
}
