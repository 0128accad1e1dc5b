//! The discretised mutation-rate grid and points on it.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParamError {
    #[error("discretisation factor and bound must be positive (d={d}, phi={phi})")]
    EmptySpace { d: u32, phi: u32 },
    #[error("grid index {z} outside 1..={max}")]
    IndexOutOfRange { z: u32, max: u32 },
}

/// The grid `{z/d : 1 <= z <= phi*d}`. The value 0 is never representable;
/// the largest value is `phi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParameterSpace {
    d: u32,
    phi: u32,
}

impl ParameterSpace {
    pub fn new(d: u32, phi: u32) -> Result<Self, ParamError> {
        if d == 0 || phi == 0 {
            return Err(ParamError::EmptySpace { d, phi });
        }
        Ok(Self { d, phi })
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn phi(&self) -> u32 {
        self.phi
    }

    /// Number of grid points, `phi * d`.
    pub fn size(&self) -> u32 {
        self.phi * self.d
    }

    pub fn config(&self, z: u32) -> Result<Configuration, ParamError> {
        if z == 0 || z > self.size() {
            return Err(ParamError::IndexOutOfRange {
                z,
                max: self.size(),
            });
        }
        Ok(Configuration { z, d: self.d })
    }

    pub fn grid(&self) -> impl Iterator<Item = Configuration> + '_ {
        (1..=self.size()).map(|z| Configuration { z, d: self.d })
    }

    pub fn chi_values(&self) -> Vec<f64> {
        self.grid().map(|c| c.chi()).collect()
    }
}

/// One point on the grid: the mutation-rate numerator `chi = z/d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Configuration {
    z: u32,
    d: u32,
}

impl Configuration {
    pub fn z(&self) -> u32 {
        self.z
    }

    pub fn chi(&self) -> f64 {
        f64::from(self.z) / f64::from(self.d)
    }
}

impl std::fmt::Display for Configuration {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.chi())
    }
}
