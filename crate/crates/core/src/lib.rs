//! Exact arithmetic toolkit for the coupled third-order rational system
//!
//! ```text
//! x_{n+1} = x_{n-2} y_{n-1} / (y_n (a_n + b_n x_{n-2} y_{n-1}))
//! y_{n+1} = y_{n-2} x_{n-1} / (x_n (c_n + d_n y_{n-2} x_{n-1}))
//! ```
//!
//! Everything is computed over exact rationals: orbits, the invariants
//! `U_m = 1/(x_{m-2} y_{m-1})`, `V_m = 1/(x_{m-1} y_{m-2})` and their affine
//! recurrences, the explicit solutions, the scaling symmetry, and the
//! period-2 / period-4 conditions.
//!
//! ```
//! use tridiff::{iterate, CoefficientSpec, InitialState, Rational};
//!
//! let one = Rational::one();
//! let spec = CoefficientSpec::constant(one.clone(), one.clone(), one.clone(), one.clone()).unwrap();
//! let init = InitialState::new([(); 3].map(|_| one.clone()), [(); 3].map(|_| one.clone())).unwrap();
//! let orbit = iterate(&spec, &init, 3).unwrap();
//! assert_eq!(orbit.x(3).unwrap().to_string(), "1/3");
//! ```

pub mod closedform;
pub mod coeffs;
pub mod error;
pub mod exact;
pub mod orbit;
pub mod periodicity;
pub mod reduction;
pub mod sample;
pub mod symmetry;
pub mod verify;

pub use closedform::{
    closed, closed_constant, closed_general, closed_period4, closed_unit, Branch, ClosedFormQuery, Component,
};
pub use coeffs::{Coeff, CoefficientSpec, Kind, Sequence};
pub use error::{Equation, Error, Result};
pub use exact::Rational;
pub use orbit::{iterate, step, ForbiddenHit, InitialState, Orbit, Status};
pub use periodicity::{detect_period, period_report, Conditions, PeriodReport};
pub use reduction::{uv_closed, uv_from_orbit, uv_iterate, uv_step, InvariantTrack};
pub use symmetry::{apply_scaling, verify_symmetry, ScalingAction};
