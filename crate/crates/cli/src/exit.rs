//! Process exit codes.

use std::fmt;

pub const GENERIC: u8 = 1;
pub const USAGE: u8 = 2;
pub const NOT_CONVERGED: u8 = 3;
pub const IO: u8 = 4;
pub const INVALID_INPUT: u8 = 5;
pub const ENERGY_VIOLATION: u8 = 6;

#[derive(Debug)]
pub enum Failure {
    NotConverged(String),
    Io(String),
    Invalid(String),
    EnergyViolation(String),
    Other(String),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::NotConverged(_) => NOT_CONVERGED,
            Failure::Io(_) => IO,
            Failure::Invalid(_) => INVALID_INPUT,
            Failure::EnergyViolation(_) => ENERGY_VIOLATION,
            Failure::Other(_) => GENERIC,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::NotConverged(m)
            | Failure::Io(m)
            | Failure::Invalid(m)
            | Failure::EnergyViolation(m)
            | Failure::Other(m) => f.write_str(m),
        }
    }
}

impl From<autoconv::Error> for Failure {
    fn from(e: autoconv::Error) -> Self {
        use autoconv::Error as E;
        let msg = e.to_string();
        match e {
            E::Io(_) => Failure::Io(msg),
            E::InvalidParameter { .. }
            | E::NonFiniteCoefficient { .. }
            | E::TruncationTooSmall { .. }
            | E::WarmStartShrink { .. }
            | E::DegenerateWeights(_)
            | E::Parse { .. }
            | E::UnsupportedVersion(_) => Failure::Invalid(msg),
            _ => Failure::Other(msg),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}
