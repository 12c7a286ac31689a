//! Sufficient conditions for period-2 and period-4 orbits (constant
//! coefficients), and exact period detection on computed orbits.

use std::fmt;

use rand::Rng;

use crate::coeffs::CoefficientSpec;
use crate::error::{Error, Result};
use crate::exact::Rational;
use crate::orbit::{InitialState, Orbit};
use crate::sample::small_nonzero;

/// `a = c`, `b = d`, `x_{-2} = x_0`, `y_{-2} = y_0` and
/// `x_{-1} y_{-2} = x_{-2} y_{-1} = (1 - a)/b`.
pub fn check_period2_conditions(a: &Rational, b: &Rational, c: &Rational, d: &Rational, init: &InitialState) -> Result<bool> {
    if b.is_zero() {
        return Err(Error::ConditionUndefined);
    }
    let k = (Rational::one() - a).checked_div(b)?;
    Ok(a == c
        && b == d
        && init.x_m2() == init.x0()
        && init.y_m2() == init.y0()
        && init.x_m1() * init.y_m2() == k
        && init.x_m2() * init.y_m1() == k)
}

/// `a = c`, `b = -d`, `x_0 = -x_{-2}`, `y_0 = -y_{-2}` and
/// `x_{-1} y_{-2} = -x_{-2} y_{-1} = (1 + a)/b`.
pub fn check_period4_conditions(a: &Rational, b: &Rational, c: &Rational, d: &Rational, init: &InitialState) -> Result<bool> {
    if b.is_zero() {
        return Err(Error::ConditionUndefined);
    }
    let k = (Rational::one() + a).checked_div(b)?;
    Ok(a == c
        && b == &-d
        && init.x0() == &-init.x_m2()
        && init.y0() == &-init.y_m2()
        && init.x_m1() * init.y_m2() == k
        && -(init.x_m2() * init.y_m1()) == k)
}

/// `a = c = b = 1`, `d = -1`, `x_0 = -x_{-2}`, `y_0 = -y_{-2}`; no condition
/// on `x_{-1}`, `y_{-1}`.
pub fn check_period4_remark(a: &Rational, b: &Rational, c: &Rational, d: &Rational, init: &InitialState) -> bool {
    a.is_one()
        && c.is_one()
        && b.is_one()
        && (-d).is_one()
        && init.x0() == &-init.x_m2()
        && init.y0() == &-init.y_m2()
}

/// Which sufficient conditions hold. Non-constant coefficients and `b = 0`
/// count as not satisfied.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Conditions {
    pub period2: bool,
    pub period4: bool,
    pub remark: bool,
}

impl Conditions {
    pub fn evaluate(spec: &CoefficientSpec, init: &InitialState) -> Self {
        let Some([a, b, c, d]) = spec.as_constant() else {
            return Conditions::default();
        };
        Conditions {
            period2: check_period2_conditions(a, b, c, d, init).unwrap_or(false),
            period4: check_period4_conditions(a, b, c, d, init).unwrap_or(false),
            remark: check_period4_remark(a, b, c, d, init),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodReport {
    /// Minimal period found, if any up to the bound.
    pub detected: Option<usize>,
    pub max_period: usize,
    /// Number of orbit indices examined per component.
    pub window: usize,
    pub conditions: Conditions,
}

impl PeriodReport {
    /// `period=<p|none> thm2=<bool> thm4=<bool> remark=<bool>`
    pub fn line(&self) -> String {
        let p = self.detected.map_or_else(|| "none".to_owned(), |p| p.to_string());
        let c = &self.conditions;
        format!("period={p} thm2={} thm4={} remark={}", c.period2, c.period4, c.remark)
    }
}

impl fmt::Display for PeriodReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.detected.map_or_else(|| format!("none (<= {})", self.max_period), |p| p.to_string());
        writeln!(f, "detected period   {p}")?;
        writeln!(f, "window            {}", self.window)?;
        writeln!(f, "period-2 theorem  {}", self.conditions.period2)?;
        writeln!(f, "period-4 theorem  {}", self.conditions.period4)?;
        write!(f, "period-4 remark   {}", self.conditions.remark)
    }
}

fn has_period(orbit: &Orbit, p: usize) -> bool {
    let (xs, ys) = (orbit.xs(), orbit.ys());
    (0..xs.len() - p).all(|i| xs[i + p] == xs[i] && ys[i + p] == ys[i])
}

/// Smallest `p <= max_period` with `x_{n+p} = x_n`, `y_{n+p} = y_n` over the
/// whole orbit. The orbit must be complete and hold at least
/// `3 * max_period` indices.
pub fn detect_period(orbit: &Orbit, max_period: usize) -> Result<Option<usize>> {
    if !orbit.is_complete() {
        return orbit.clone().into_complete().map(|_| None);
    }
    let need = 3 * max_period;
    if orbit.len() < need || max_period == 0 {
        return Err(Error::InsufficientWindow {
            have: orbit.len(),
            need: need.max(1),
            max_period,
        });
    }
    Ok((1..=max_period).find(|&p| has_period(orbit, p)))
}

/// [`detect_period`] plus the condition checks.
pub fn period_report(spec: &CoefficientSpec, orbit: &Orbit, max_period: usize) -> Result<PeriodReport> {
    Ok(PeriodReport {
        detected: detect_period(orbit, max_period)?,
        max_period,
        window: orbit.len(),
        conditions: Conditions::evaluate(spec, &orbit.initial_state()),
    })
}

/// Random instance satisfying the period-2 hypotheses.
///
/// Picks `a != 1`, `b`, `x_{-2}`, `y_{-2}` and solves for `x_{-1}`, `y_{-1}`.
pub fn sample_period2<R: Rng + ?Sized>(rng: &mut R) -> (CoefficientSpec, InitialState) {
    let a = loop {
        let a = small_nonzero(rng);
        if !a.is_one() {
            break a;
        }
    };
    let b = small_nonzero(rng);
    let (x2, y2) = (small_nonzero(rng), small_nonzero(rng));
    let k = (Rational::one() - &a).checked_div(&b).expect("b != 0");
    let x1 = k.checked_div(&y2).expect("nonzero");
    let y1 = k.checked_div(&x2).expect("nonzero");
    let spec = CoefficientSpec::constant(a.clone(), b.clone(), a, b).expect("a != 0");
    let init = InitialState::new([x2.clone(), x1, x2], [y2.clone(), y1, y2]).expect("nonzero seeds");
    (spec, init)
}

/// Random instance satisfying the period-4 hypotheses (`a != -1`).
pub fn sample_period4<R: Rng + ?Sized>(rng: &mut R) -> (CoefficientSpec, InitialState) {
    let a = loop {
        let a = small_nonzero(rng);
        if !(-&a).is_one() {
            break a;
        }
    };
    let b = small_nonzero(rng);
    let (x2, y2) = (small_nonzero(rng), small_nonzero(rng));
    let k = (Rational::one() + &a).checked_div(&b).expect("b != 0");
    let x1 = k.checked_div(&y2).expect("nonzero");
    let y1 = -k.checked_div(&x2).expect("nonzero");
    let spec = CoefficientSpec::constant(a.clone(), b.clone(), a, -b).expect("a != 0");
    let init = InitialState::new([x2.clone(), x1, -x2], [y2.clone(), y1, -y2]).expect("nonzero seeds");
    (spec, init)
}

/// Random instance of the remark: `a = b = c = 1`, `d = -1`,
/// `x_0 = -x_{-2}`, `y_0 = -y_{-2}`, free `x_{-1}`, `y_{-1}`.
pub fn sample_remark<R: Rng + ?Sized>(rng: &mut R) -> (CoefficientSpec, InitialState) {
    let one = Rational::one();
    let spec = CoefficientSpec::constant(one.clone(), one.clone(), one.clone(), -one).expect("constants");
    let [x2, x1, y2, y1] = [(); 4].map(|_| small_nonzero(rng));
    let init = InitialState::new([x2.clone(), x1, -x2], [y2.clone(), y1, -y2]).expect("nonzero seeds");
    (spec, init)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::q;
    use crate::orbit::iterate;
    use crate::sample::trial_rng;

    fn init(x: [Rational; 3], y: [Rational; 3]) -> InitialState {
        InitialState::new(x, y).unwrap()
    }

    #[test]
    fn period2_checker_examples() {
        let (a, b) = (q(1, 2), q(1, 1));
        let good = init([q(1, 1), q(1, 2), q(1, 1)], [q(1, 1), q(1, 2), q(1, 1)]);
        assert_eq!(check_period2_conditions(&a, &b, &a, &b, &good), Ok(true));
        let bad = init([q(1, 1), q(1, 2), q(1, 1)], [q(1, 1), q(1, 1), q(1, 1)]);
        assert_eq!(check_period2_conditions(&a, &b, &a, &b, &bad), Ok(false));
        let one = q(1, 1);
        assert_eq!(check_period2_conditions(&one, &one, &one, &one, &good), Ok(false));
        let zero = q(0, 1);
        assert_eq!(check_period2_conditions(&a, &zero, &a, &zero, &good), Err(Error::ConditionUndefined));
    }

    #[test]
    fn period4_checker_examples() {
        let (one, m1) = (q(1, 1), q(-1, 1));
        let w = init([q(1, 1), q(2, 1), q(-1, 1)], [q(1, 1), q(-2, 1), q(-1, 1)]);
        assert_eq!(check_period4_conditions(&one, &one, &one, &m1, &w), Ok(true));
        assert_eq!(check_period4_conditions(&one, &one, &one, &one, &w), Ok(false));
        let not_negated = init([q(1, 1), q(2, 1), q(1, 1)], [q(1, 1), q(-2, 1), q(-1, 1)]);
        assert_eq!(check_period4_conditions(&one, &one, &one, &m1, &not_negated), Ok(false));
        assert_eq!(check_period4_conditions(&one, &q(0, 1), &one, &m1, &w), Err(Error::ConditionUndefined));
    }

    #[test]
    fn remark_checker_examples() {
        let (one, m1) = (q(1, 1), q(-1, 1));
        let w = init([q(3, 1), q(7, 3), q(-3, 1)], [q(2, 1), q(-5, 1), q(-2, 1)]);
        assert!(check_period4_remark(&one, &one, &one, &m1, &w));
        assert!(!check_period4_remark(&q(1, 2), &one, &q(1, 2), &m1, &w));
        assert!(!check_period4_remark(&one, &one, &one, &one, &w));
    }

    #[test]
    fn detection_examples() {
        let half = q(1, 2);
        let one = q(1, 1);
        let spec = CoefficientSpec::constant(half.clone(), one.clone(), half.clone(), one.clone()).unwrap();
        let w2 = init([q(1, 1), q(1, 2), q(1, 1)], [q(1, 1), q(1, 2), q(1, 1)]);
        let rep = period_report(&spec, &iterate(&spec, &w2, 40).unwrap(), 8).unwrap();
        assert_eq!(rep.detected, Some(2));
        assert_eq!(rep.line(), "period=2 thm2=true thm4=false remark=false");

        let spec4 = CoefficientSpec::constant(one.clone(), one.clone(), one.clone(), q(-1, 1)).unwrap();
        let w4 = init([q(1, 1), q(2, 1), q(-1, 1)], [q(1, 1), q(-2, 1), q(-1, 1)]);
        let o4 = iterate(&spec4, &w4, 40).unwrap();
        assert_eq!(detect_period(&o4, 8), Ok(Some(4)));
        assert_eq!(&o4.xs()[..4], &[q(1, 1), q(2, 1), q(-1, 1), q(-2, 1)]);

        let unit = CoefficientSpec::constant(one.clone(), one.clone(), one.clone(), one.clone()).unwrap();
        let ones = init([q(1, 1), q(1, 1), q(1, 1)], [q(1, 1), q(1, 1), q(1, 1)]);
        let rep = period_report(&unit, &iterate(&unit, &ones, 40).unwrap(), 8).unwrap();
        assert_eq!(rep.detected, None);
        assert!(rep.line().starts_with("period=none "));
    }

    #[test]
    fn fixed_point_reports_one() {
        // x y (a + b) = 1 with x = y = 1, a = 1/2, b = 1/2 is fixed.
        let h = q(1, 2);
        let spec = CoefficientSpec::constant(h.clone(), h.clone(), h.clone(), h).unwrap();
        let ones = init([q(1, 1), q(1, 1), q(1, 1)], [q(1, 1), q(1, 1), q(1, 1)]);
        assert_eq!(detect_period(&iterate(&spec, &ones, 12).unwrap(), 4), Ok(Some(1)));
    }

    #[test]
    fn window_too_short() {
        let one = q(1, 1);
        let unit = CoefficientSpec::constant(one.clone(), one.clone(), one.clone(), one).unwrap();
        let ones = init([q(1, 1), q(1, 1), q(1, 1)], [q(1, 1), q(1, 1), q(1, 1)]);
        let o = iterate(&unit, &ones, 10).unwrap();
        assert!(matches!(detect_period(&o, 8), Err(Error::InsufficientWindow { .. })));
    }

    #[test]
    fn samplers_satisfy_their_checkers() {
        let mut rng = trial_rng(11, 0);
        for _ in 0..50 {
            let (spec, i) = sample_period2(&mut rng);
            assert!(Conditions::evaluate(&spec, &i).period2);
            let (spec, i) = sample_period4(&mut rng);
            assert!(Conditions::evaluate(&spec, &i).period4);
            let (spec, i) = sample_remark(&mut rng);
            assert!(Conditions::evaluate(&spec, &i).remark);
        }
    }
}
