//! Forward iteration of the system
//!
//! ```text
//! x_{n+1} = x_{n-2} y_{n-1} / (y_n (a_n + b_n x_{n-2} y_{n-1}))
//! y_{n+1} = y_{n-2} x_{n-1} / (x_n (c_n + d_n y_{n-2} x_{n-1}))
//! ```
//!
//! from the six seeds `x_{-2}, x_{-1}, x_0, y_{-2}, y_{-1}, y_0`. Iteration is
//! exact, so hitting the forbidden set is detected by comparing a denominator
//! factor with zero. Everything else in the crate is checked against this.

use std::io::{self, Write};

use crate::coeffs::CoefficientSpec;
use crate::error::{Equation, Error, Result};
use crate::exact::Rational;

/// The six seeds, all nonzero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InitialState {
    xs: [Rational; 3],
    ys: [Rational; 3],
}

const SEED_NAMES: [&str; 6] = ["x_-2", "x_-1", "x_0", "y_-2", "y_-1", "y_0"];

impl InitialState {
    /// `xs = [x_{-2}, x_{-1}, x_0]`, `ys = [y_{-2}, y_{-1}, y_0]`.
    pub fn new(xs: [Rational; 3], ys: [Rational; 3]) -> Result<Self> {
        for (v, name) in xs.iter().chain(&ys).zip(SEED_NAMES) {
            if v.is_zero() {
                return Err(Error::ZeroInitialValue(name));
            }
        }
        Ok(InitialState { xs, ys })
    }

    /// Order `x_{-2}, x_{-1}, x_0, y_{-2}, y_{-1}, y_0`, as on the command line.
    pub fn from_slice(v: &[Rational]) -> Result<Self> {
        match v {
            [a, b, c, d, e, f] => Self::new([a.clone(), b.clone(), c.clone()], [d.clone(), e.clone(), f.clone()]),
            _ => Err(Error::InvalidQuery(format!("expected 6 initial values, got {}", v.len()))),
        }
    }

    pub fn xs(&self) -> &[Rational; 3] {
        &self.xs
    }

    pub fn ys(&self) -> &[Rational; 3] {
        &self.ys
    }

    pub fn x_m2(&self) -> &Rational {
        &self.xs[0]
    }
    pub fn x_m1(&self) -> &Rational {
        &self.xs[1]
    }
    pub fn x0(&self) -> &Rational {
        &self.xs[2]
    }
    pub fn y_m2(&self) -> &Rational {
        &self.ys[0]
    }
    pub fn y_m1(&self) -> &Rational {
        &self.ys[1]
    }
    pub fn y0(&self) -> &Rational {
        &self.ys[2]
    }

    pub fn to_vec(&self) -> Vec<Rational> {
        self.xs.iter().chain(&self.ys).cloned().collect()
    }
}

impl std::fmt::Display for InitialState {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.to_vec().iter().map(ToString::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

/// Where an orbit stopped when a denominator vanished.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ForbiddenHit {
    /// Step index `k`: the pair `(x_{k+1}, y_{k+1})` could not be formed.
    pub step: usize,
    pub equation: Equation,
    /// `a_k` (or `c_k`).
    pub linear: Rational,
    /// `b_k` (or `d_k`).
    pub quadratic: Rational,
    /// `x_{k-2} y_{k-1}` (or `y_{k-2} x_{k-1}`).
    pub product: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Status {
    /// All values through index `N` computed.
    Complete(usize),
    Forbidden(ForbiddenHit),
}

/// A trajectory `x_n, y_n` for `n = -2 ..`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orbit {
    xs: Vec<Rational>,
    ys: Vec<Rational>,
    status: Status,
}

impl Orbit {
    /// `x_n` for `n >= -2`, if computed.
    pub fn x(&self, n: i64) -> Option<&Rational> {
        usize::try_from(n + 2).ok().and_then(|i| self.xs.get(i))
    }

    pub fn y(&self, n: i64) -> Option<&Rational> {
        usize::try_from(n + 2).ok().and_then(|i| self.ys.get(i))
    }

    /// Values from index -2 upward.
    pub fn xs(&self) -> &[Rational] {
        &self.xs
    }

    pub fn ys(&self) -> &[Rational] {
        &self.ys
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    /// Largest stored index.
    pub fn last_index(&self) -> i64 {
        self.xs.len() as i64 - 3
    }

    pub fn status(&self) -> &Status {
        &self.status
    }

    pub fn is_complete(&self) -> bool {
        matches!(self.status, Status::Complete(_))
    }

    /// Turns a forbidden-set stop into an error.
    pub fn into_complete(self) -> Result<Orbit> {
        match &self.status {
            Status::Complete(_) => Ok(self),
            Status::Forbidden(hit) => Err(Error::ForbiddenSet {
                step: hit.step,
                equation: hit.equation,
            }),
        }
    }

    /// Seeds of the orbit.
    pub fn initial_state(&self) -> InitialState {
        InitialState::new(
            [self.xs[0].clone(), self.xs[1].clone(), self.xs[2].clone()],
            [self.ys[0].clone(), self.ys[1].clone(), self.ys[2].clone()],
        )
        .expect("stored values are nonzero")
    }

    /// `# status=complete` or `# status=forbidden step=<k> eq=<x|y>`.
    pub fn status_line(&self) -> String {
        match &self.status {
            Status::Complete(_) => "# status=complete".to_owned(),
            Status::Forbidden(hit) => format!("# status=forbidden step={} eq={}", hit.step, hit.equation),
        }
    }

    /// Writes `n,x,y` rows in exact form, plus lossy `x_float,y_float`
    /// columns when `float` is set.
    pub fn write_csv<W: Write>(&self, mut out: W, float: bool) -> io::Result<()> {
        if float {
            writeln!(out, "n,x,y,x_float,y_float")?;
        } else {
            writeln!(out, "n,x,y")?;
        }
        for (i, (x, y)) in self.xs.iter().zip(&self.ys).enumerate() {
            let n = i as i64 - 2;
            if float {
                writeln!(out, "{n},{x},{y},{:e},{:e}", x.to_f64(), y.to_f64())?;
            } else {
                writeln!(out, "{n},{x},{y}")?;
            }
        }
        Ok(())
    }
}

/// One application of the map. `window` is
/// `[x_{n-2}, x_{n-1}, x_n, y_{n-2}, y_{n-1}, y_n]`.
pub fn step(spec: &CoefficientSpec, window: &[Rational; 6], n: usize) -> Result<(Rational, Rational)> {
    step_detailed(spec, window, n).map_err(|e| match e {
        StepError::Forbidden(h) => Error::ForbiddenSet {
            step: h.step,
            equation: h.equation,
        },
        StepError::Other(e) => e,
    })
}

enum StepError {
    Forbidden(Box<ForbiddenHit>),
    Other(Error),
}

impl From<Error> for StepError {
    fn from(e: Error) -> Self {
        StepError::Other(e)
    }
}

fn step_detailed(
    spec: &CoefficientSpec,
    window: &[Rational; 6],
    n: usize,
) -> Result<(Rational, Rational), StepError> {
    let [x2, x1, x0, y2, y1, y0] = window;
    let (a, b, c, d) = (spec.a(n)?, spec.b(n)?, spec.c(n)?, spec.d(n)?);

    let px = x2 * y1;
    let den_x = a + b * &px;
    if den_x.is_zero() {
        return Err(StepError::Forbidden(Box::new(ForbiddenHit {
            step: n,
            equation: Equation::X,
            linear: a.clone(),
            quadratic: b.clone(),
            product: px,
        })));
    }
    let py = y2 * x1;
    let den_y = c + d * &py;
    if den_y.is_zero() {
        return Err(StepError::Forbidden(Box::new(ForbiddenHit {
            step: n,
            equation: Equation::Y,
            linear: c.clone(),
            quadratic: d.clone(),
            product: py,
        })));
    }
    // Window values are nonzero, so y0 * den_x and x0 * den_y are too.
    let x_next = px.checked_div(&(y0 * den_x))?;
    let y_next = py.checked_div(&(x0 * den_y))?;
    Ok((x_next, y_next))
}

/// Iterates `steps` times. A forbidden-set hit is not an error: the partial
/// orbit is returned with [`Status::Forbidden`]. Missing coefficients are.
pub fn iterate(spec: &CoefficientSpec, init: &InitialState, steps: usize) -> Result<Orbit> {
    let mut xs = Vec::with_capacity(steps + 3);
    let mut ys = Vec::with_capacity(steps + 3);
    xs.extend(init.xs().iter().cloned());
    ys.extend(init.ys().iter().cloned());

    for n in 0..steps {
        let window = [
            xs[n].clone(),
            xs[n + 1].clone(),
            xs[n + 2].clone(),
            ys[n].clone(),
            ys[n + 1].clone(),
            ys[n + 2].clone(),
        ];
        match step_detailed(spec, &window, n) {
            Ok((x, y)) => {
                xs.push(x);
                ys.push(y);
            }
            Err(StepError::Forbidden(h)) => {
                return Ok(Orbit {
                    xs,
                    ys,
                    status: Status::Forbidden(*h),
                })
            }
            Err(StepError::Other(e)) => return Err(e),
        }
    }
    Ok(Orbit {
        xs,
        ys,
        status: Status::Complete(steps),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::q;

    fn ones() -> InitialState {
        InitialState::new([q(1, 1), q(1, 1), q(1, 1)], [q(1, 1), q(1, 1), q(1, 1)]).unwrap()
    }

    fn unit_spec() -> CoefficientSpec {
        CoefficientSpec::constant(q(1, 1), q(1, 1), q(1, 1), q(1, 1)).unwrap()
    }

    fn window(v: [Rational; 6]) -> [Rational; 6] {
        v
    }

    #[test]
    fn step_examples() {
        let w = window([q(1, 1), q(1, 1), q(1, 1), q(1, 1), q(1, 1), q(1, 1)]);
        assert_eq!(step(&unit_spec(), &w, 0).unwrap(), (q(1, 2), q(1, 2)));

        let spec = CoefficientSpec::constant(q(1, 2), q(1, 1), q(1, 2), q(1, 1)).unwrap();
        let w = window([q(1, 1), q(1, 2), q(1, 1), q(1, 1), q(1, 2), q(1, 1)]);
        assert_eq!(step(&spec, &w, 0).unwrap(), (q(1, 2), q(1, 2)));

        let spec = CoefficientSpec::constant(q(1, 1), q(1, 1), q(3, 1), q(5, 1)).unwrap();
        let w = window([q(1, 1), q(1, 1), q(1, 1), q(1, 1), q(-1, 1), q(1, 1)]);
        assert_eq!(
            step(&spec, &w, 0),
            Err(Error::ForbiddenSet { step: 0, equation: Equation::X })
        );
    }

    #[test]
    fn y_denominator_detected() {
        // c + d y_{-2} x_{-1} = 1 - 1 = 0
        let spec = CoefficientSpec::constant(q(1, 1), q(1, 1), q(1, 1), q(-1, 1)).unwrap();
        let init = ones();
        let orbit = iterate(&spec, &init, 3).unwrap();
        match orbit.status() {
            Status::Forbidden(h) => {
                assert_eq!((h.step, h.equation), (0, Equation::Y));
                assert_eq!(h.product, q(1, 1));
                assert_eq!(&h.linear + &h.quadratic * &h.product, q(0, 1));
            }
            s => panic!("unexpected {s:?}"),
        }
    }

    #[test]
    fn zero_steps_returns_seeds() {
        let o = iterate(&unit_spec(), &ones(), 0).unwrap();
        assert_eq!(o.len(), 3);
        assert_eq!(o.status(), &Status::Complete(0));
        assert_eq!(o.last_index(), 0);
    }

    #[test]
    fn unit_orbit_by_hand() {
        let o = iterate(&unit_spec(), &ones(), 5).unwrap();
        let expect = [q(1, 1), q(1, 1), q(1, 1), q(1, 2), q(1, 1), q(1, 3), q(1, 1), q(1, 4)];
        assert_eq!(o.xs(), &expect);
        assert_eq!(o.ys(), &expect);
        assert_eq!(o.x(4), Some(&q(1, 1)));
        assert_eq!(o.y(5), Some(&q(1, 4)));
        assert_eq!(o.x(6), None);
        assert_eq!(o.x(-3), None);
    }

    #[test]
    fn forbidden_at_first_step_keeps_seeds() {
        let init = InitialState::new([q(1, 1), q(1, 1), q(1, 1)], [q(1, 1), q(-1, 1), q(1, 1)]).unwrap();
        let o = iterate(&unit_spec(), &init, 3).unwrap();
        assert_eq!(o.len(), 3);
        assert!(matches!(o.status(), Status::Forbidden(h) if h.step == 0 && h.equation == Equation::X));
        assert_eq!(o.status_line(), "# status=forbidden step=0 eq=x");
        assert!(o.into_complete().is_err());
    }

    #[test]
    fn rejects_zero_seed() {
        let r = InitialState::new([q(1, 1), q(0, 1), q(1, 1)], [q(1, 1), q(1, 1), q(1, 1)]);
        assert_eq!(r, Err(Error::ZeroInitialValue("x_-1")));
    }

    #[test]
    fn table_runs_out() {
        let t = CoefficientSpec::tabulated(vec![q(1, 1); 2], vec![q(1, 1); 2], vec![q(1, 1); 2], vec![q(1, 1); 2]).unwrap();
        assert!(iterate(&t, &ones(), 2).is_ok());
        assert_eq!(iterate(&t, &ones(), 3), Err(Error::IndexOutOfRange { index: 2, len: 2 }));
    }

    #[test]
    fn csv_rows() {
        let o = iterate(&unit_spec(), &ones(), 1).unwrap();
        let mut buf = Vec::new();
        o.write_csv(&mut buf, false).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, "n,x,y\n-2,1/1,1/1\n-1,1/1,1/1\n0,1/1,1/1\n1,1/2,1/2\n");

        let mut buf = Vec::new();
        o.write_csv(&mut buf, true).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("n,x,y,x_float,y_float\n"));
        assert!(text.ends_with("1,1/2,1/2,5e-1,5e-1\n"));
    }
}
