//! Test-side oracles, written straight from the recurrences and kept
//! independent of the library's iteration and invariant code.

#![allow(dead_code)]

use tridiff::{CoefficientSpec, Component, InitialState, Rational};

/// `xs[i]`, `ys[i]` hold `x_{i-2}`, `y_{i-2}`.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub xs: Vec<Rational>,
    pub ys: Vec<Rational>,
}

impl Trajectory {
    pub fn x(&self, n: i64) -> &Rational {
        &self.xs[(n + 2) as usize]
    }

    pub fn y(&self, n: i64) -> &Rational {
        &self.ys[(n + 2) as usize]
    }

    pub fn get(&self, c: Component, n: i64) -> &Rational {
        match c {
            Component::X => self.x(n),
            Component::Y => self.y(n),
        }
    }

    pub fn last(&self) -> i64 {
        self.xs.len() as i64 - 3
    }

    /// `U_m = 1/(x_{m-2} y_{m-1})`.
    pub fn u(&self, m: usize) -> Rational {
        (&self.xs[m] * &self.ys[m + 1]).recip().unwrap()
    }

    /// `V_m = 1/(x_{m-1} y_{m-2})`.
    pub fn v(&self, m: usize) -> Rational {
        (&self.xs[m + 1] * &self.ys[m]).recip().unwrap()
    }
}

/// Direct iteration; `None` when a denominator vanishes within `steps`.
pub fn trajectory(spec: &CoefficientSpec, init: &InitialState, steps: usize) -> Option<Trajectory> {
    let mut xs = init.xs().to_vec();
    let mut ys = init.ys().to_vec();
    for n in 0..steps {
        let i = n + 2;
        let (a, b, c, d) = (spec.a(n).ok()?, spec.b(n).ok()?, spec.c(n).ok()?, spec.d(n).ok()?);
        let px = &xs[i - 2] * &ys[i - 1];
        let py = &ys[i - 2] * &xs[i - 1];
        let den_x = &ys[i] * (a + b * &px);
        let den_y = &xs[i] * (c + d * &py);
        if den_x.is_zero() || den_y.is_zero() {
            return None;
        }
        let x = px.checked_div(&den_x).unwrap();
        let y = py.checked_div(&den_y).unwrap();
        xs.push(x);
        ys.push(y);
    }
    Some(Trajectory { xs, ys })
}

pub fn r(p: i64, q: i64) -> Rational {
    Rational::new(p, q).unwrap()
}

pub fn init_of(x: [Rational; 3], y: [Rational; 3]) -> InitialState {
    InitialState::new(x, y).unwrap()
}
