use std::fmt;

use thiserror::Error;

/// Which of the two update equations lost its denominator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Equation {
    /// `a_n + b_n x_{n-2} y_{n-1}` vanished.
    X,
    /// `c_n + d_n y_{n-2} x_{n-1}` vanished.
    Y,
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Equation::X => f.write_str("x"),
            Equation::Y => f.write_str("y"),
        }
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum Error {
    #[error("zero denominator")]
    ZeroDenominator,

    #[error("division by zero")]
    DivisionByZero,

    #[error("cannot parse rational {0:?}")]
    Parse(String),

    #[error("coefficient index {index} out of range (table length {len})")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("invalid coefficients: {0}")]
    InvalidCoefficients(String),

    #[error("initial values must be nonzero ({0} is zero)")]
    ZeroInitialValue(&'static str),

    #[error("orbit reached the forbidden set at step {step} ({equation} denominator vanished)")]
    ForbiddenSet { step: usize, equation: Equation },

    #[error("closed form {branch}: a denominator factor vanished at block s = {block}")]
    DenominatorVanished { branch: String, block: usize },

    #[error("group parameter must be nonzero")]
    InvalidGroupParameter,

    #[error("periodicity condition undefined (b = 0)")]
    ConditionUndefined,

    #[error("orbit window of {have} indices is too short for max period {max_period} (need {need})")]
    InsufficientWindow {
        have: usize,
        need: usize,
        max_period: usize,
    },

    #[error("{0}")]
    InvalidQuery(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
