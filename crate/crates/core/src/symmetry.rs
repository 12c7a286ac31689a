//! The scaling symmetry `x_n ↦ t^{(-1)^n} x_n`, `y_n ↦ t^{(-1)^n} y_n`.
//!
//! Both components scale with the *same* alternating exponent. Giving `y`
//! the opposite exponent does not map solutions to solutions; that variant
//! is kept as [`Convention::OppositeSign`] so the failure can be demonstrated.

use crate::closedform::Component;
use crate::coeffs::CoefficientSpec;
use crate::error::{Error, Result};
use crate::exact::Rational;
use crate::orbit::{iterate, InitialState, Orbit, Status};
use crate::reduction::uv_from_orbit;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Convention {
    /// `x̂_n = t^{σ(n)} x_n`, `ŷ_n = t^{σ(n)} y_n`. The actual symmetry.
    SameSign,
    /// `x̂_n = t^{σ(n)} x_n`, `ŷ_n = t^{-σ(n)} y_n`. Not a symmetry.
    OppositeSign,
}

/// `σ(n) = (-1)^n`.
pub fn sigma(n: i64) -> i64 {
    if n.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScalingAction {
    t: Rational,
    convention: Convention,
}

impl ScalingAction {
    pub fn new(t: Rational) -> Result<Self> {
        Self::with_convention(t, Convention::SameSign)
    }

    /// The action with the opposite exponent on `y`.
    pub fn opposite_sign(t: Rational) -> Result<Self> {
        Self::with_convention(t, Convention::OppositeSign)
    }

    pub fn with_convention(t: Rational, convention: Convention) -> Result<Self> {
        if t.is_zero() {
            return Err(Error::InvalidGroupParameter);
        }
        Ok(ScalingAction { t, convention })
    }

    pub fn t(&self) -> &Rational {
        &self.t
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    pub fn exponent(&self, component: Component, n: i64) -> i64 {
        match (component, self.convention) {
            (Component::Y, Convention::OppositeSign) => -sigma(n),
            _ => sigma(n),
        }
    }

    /// Image of the value `v` sitting at index `n` of `component`.
    pub fn scale(&self, component: Component, n: i64, v: &Rational) -> Rational {
        // t != 0, so every power exists.
        v * self.t.pow(self.exponent(component, n)).expect("t is nonzero")
    }

    pub fn apply(&self, init: &InitialState) -> InitialState {
        let xs = [-2i64, -1, 0].map(|n| self.scale(Component::X, n, &init.xs()[(n + 2) as usize]));
        let ys = [-2i64, -1, 0].map(|n| self.scale(Component::Y, n, &init.ys()[(n + 2) as usize]));
        InitialState::new(xs, ys).expect("scaling keeps values nonzero")
    }

    /// `self ∘ other`; only defined for equal conventions.
    pub fn compose(&self, other: &ScalingAction) -> Result<ScalingAction> {
        if self.convention != other.convention {
            return Err(Error::InvalidGroupParameter);
        }
        Self::with_convention(&self.t * &other.t, self.convention)
    }
}

/// Scales the seeds with the symmetry. `t = 0` is rejected.
pub fn apply_scaling(init: &InitialState, t: &Rational) -> Result<InitialState> {
    Ok(ScalingAction::new(t.clone())?.apply(init))
}

/// Scales the seeds with the opposite-sign action (not a symmetry).
pub fn apply_scaling_opposite(init: &InitialState, t: &Rational) -> Result<InitialState> {
    Ok(ScalingAction::opposite_sign(t.clone())?.apply(init))
}

/// First place where the two sides disagree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SymmetryMismatch {
    /// The scaled seeds ran into the forbidden set while the original did not.
    ScaledForbidden { step: usize },
    Value {
        component: Component,
        index: i64,
        expected: Rational,
        actual: Rational,
    },
    Invariant {
        family: char,
        index: usize,
        original: Rational,
        scaled: Rational,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetryReport {
    pub steps: usize,
    /// Number of orbit values compared (both components).
    pub values_checked: usize,
    pub invariants_checked: usize,
    pub mismatch: Option<SymmetryMismatch>,
}

impl SymmetryReport {
    pub fn passed(&self) -> bool {
        self.mismatch.is_none()
    }
}

/// Iterates `init` and its image under `t` for `steps` steps and compares
/// them pointwise, together with the invariants `U`, `V`.
///
/// The original orbit must be complete; otherwise this returns
/// [`Error::ForbiddenSet`].
pub fn verify_symmetry(spec: &CoefficientSpec, init: &InitialState, t: &Rational, steps: usize) -> Result<SymmetryReport> {
    verify_action(spec, init, &ScalingAction::new(t.clone())?, steps)
}

/// [`verify_symmetry`] for an arbitrary convention.
pub fn verify_action(spec: &CoefficientSpec, init: &InitialState, action: &ScalingAction, steps: usize) -> Result<SymmetryReport> {
    let original = iterate(spec, init, steps)?.into_complete()?;
    let scaled = iterate(spec, &action.apply(init), steps)?;
    let mut report = SymmetryReport {
        steps,
        values_checked: 0,
        invariants_checked: 0,
        mismatch: None,
    };
    if let Status::Forbidden(hit) = scaled.status() {
        report.mismatch = Some(SymmetryMismatch::ScaledForbidden { step: hit.step });
        return Ok(report);
    }
    report.mismatch = compare_values(&original, &scaled, action, &mut report.values_checked)
        .or_else(|| compare_invariants(&original, &scaled, &mut report.invariants_checked));
    Ok(report)
}

fn compare_values(original: &Orbit, scaled: &Orbit, action: &ScalingAction, count: &mut usize) -> Option<SymmetryMismatch> {
    for n in -2..=original.last_index() {
        for (component, orig, got) in [
            (Component::X, original.x(n), scaled.x(n)),
            (Component::Y, original.y(n), scaled.y(n)),
        ] {
            let (orig, got) = (orig?, got?);
            let expected = action.scale(component, n, orig);
            *count += 1;
            if &expected != got {
                return Some(SymmetryMismatch::Value {
                    component,
                    index: n,
                    expected,
                    actual: got.clone(),
                });
            }
        }
    }
    None
}

fn compare_invariants(original: &Orbit, scaled: &Orbit, count: &mut usize) -> Option<SymmetryMismatch> {
    let (a, b) = (uv_from_orbit(original), uv_from_orbit(scaled));
    for (family, xs, ys) in [('U', &a.us, &b.us), ('V', &a.vs, &b.vs)] {
        for (index, (o, s)) in xs.iter().zip(ys).enumerate() {
            *count += 1;
            if o != s {
                return Some(SymmetryMismatch::Invariant {
                    family,
                    index,
                    original: o.clone(),
                    scaled: s.clone(),
                });
            }
        }
    }
    None
}
