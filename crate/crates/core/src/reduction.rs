//! Invariants of the scaling symmetry and the linear recurrences they obey.
//!
//! Indexing: orbits are stored with seeds at `-2, -1, 0`. The invariants are
//! indexed from zero with
//!
//! ```text
//! U_m = 1 / (x_{m-2} y_{m-1}),    V_m = 1 / (x_{m-1} y_{m-2}),
//! ```
//!
//! i.e. shifted by two relative to the orbit. With that alignment the
//! nonlinear system becomes the interleaved affine pair
//!
//! ```text
//! V_{m+2} = a_m U_m + b_m,        U_{m+2} = c_m V_m + d_m,
//! ```
//!
//! which decouples into four-step recurrences per residue `j = m mod 4`:
//!
//! ```text
//! U_{4n+j} = U_j Π_{k<n} a_{4k+j} c_{4k+j+2}
//!          + Σ_{l<n} (b_{4l+j} c_{4l+j+2} + d_{4l+j+2}) Π_{l<k<n} a_{4k+j} c_{4k+j+2}
//! V_{4n+j} = V_j Π_{k<n} a_{4k+j+2} c_{4k+j}
//!          + Σ_{l<n} (a_{4l+j+2} d_{4l+j} + b_{4l+j+2}) Π_{l<k<n} a_{4k+j+2} c_{4k+j}
//! ```
//!
//! Reconstruction goes the other way: `x_{m+2} = (U_m / V_{m+1}) x_m` and
//! `y_{m+2} = (V_m / U_{m+1}) y_m` in the shifted indexing.

use std::io::{self, Write};

use crate::coeffs::CoefficientSpec;
use crate::error::{Error, Result};
use crate::exact::Rational;
use crate::orbit::Orbit;

/// Paired sequences `U_m`, `V_m` for `m = 0 ..`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantTrack {
    pub us: Vec<Rational>,
    pub vs: Vec<Rational>,
}

impl InvariantTrack {
    pub fn len(&self) -> usize {
        self.us.len().min(self.vs.len())
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn u(&self, m: usize) -> Option<&Rational> {
        self.us.get(m)
    }

    pub fn v(&self, m: usize) -> Option<&Rational> {
        self.vs.get(m)
    }

    /// `n,U,V` rows in exact form.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "n,U,V")?;
        for (m, (u, v)) in self.us.iter().zip(&self.vs).enumerate() {
            writeln!(out, "{m},{u},{v}")?;
        }
        Ok(())
    }
}

/// `U_m = 1/(x_{m-2} y_{m-1})`, `V_m = 1/(x_{m-1} y_{m-2})` for every `m`
/// the orbit covers (`m <= N + 1` for an orbit through index `N`).
pub fn uv_from_orbit(orbit: &Orbit) -> InvariantTrack {
    let (xs, ys) = (orbit.xs(), orbit.ys());
    let len = xs.len().saturating_sub(1);
    let mut us = Vec::with_capacity(len);
    let mut vs = Vec::with_capacity(len);
    for m in 0..len {
        // Orbit values are nonzero, so the products are too.
        us.push((&xs[m] * &ys[m + 1]).recip().expect("orbit values are nonzero"));
        vs.push((&xs[m + 1] * &ys[m]).recip().expect("orbit values are nonzero"));
    }
    InvariantTrack { us, vs }
}

/// One half-step of the affine pair: from `U_m, V_m` to `(V_{m+2}, U_{m+2})`.
pub fn uv_step(spec: &CoefficientSpec, u: &Rational, v: &Rational, m: usize) -> Result<(Rational, Rational)> {
    let v_next = spec.a(m)? * u + spec.b(m)?;
    let u_next = spec.c(m)? * v + spec.d(m)?;
    Ok((v_next, u_next))
}

/// Iterates the affine pair from `U_0, U_1, V_0, V_1` out to `len` terms.
pub fn uv_iterate(
    spec: &CoefficientSpec,
    u_seed: [Rational; 2],
    v_seed: [Rational; 2],
    len: usize,
) -> Result<InvariantTrack> {
    let mut us: Vec<Rational> = u_seed.into_iter().collect();
    let mut vs: Vec<Rational> = v_seed.into_iter().collect();
    let mut m = 0;
    while us.len() < len {
        let (v_next, u_next) = uv_step(spec, &us[m], &vs[m], m)?;
        vs.push(v_next);
        us.push(u_next);
        m += 1;
    }
    us.truncate(len);
    vs.truncate(len);
    Ok(InvariantTrack { us, vs })
}

/// Which invariant a four-step block belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    U,
    V,
}

/// `X_{4n+j} = X_j * product + sum` for one family and residue.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub product: Rational,
    pub sum: Rational,
}

impl Block {
    pub fn apply(&self, seed: &Rational) -> Rational {
        seed * &self.product + &self.sum
    }
}

/// Multiplier and forcing term of the four-step recurrence at offset `base`
/// (`base = 4k + j`).
fn four_step_terms(spec: &CoefficientSpec, family: Family, base: usize) -> Result<(Rational, Rational)> {
    match family {
        Family::U => {
            let c2 = spec.c(base + 2)?;
            let mult = spec.a(base)? * c2;
            let force = spec.b(base)? * c2 + spec.d(base + 2)?;
            Ok((mult, force))
        }
        Family::V => {
            let a2 = spec.a(base + 2)?;
            let mult = a2 * spec.c(base)?;
            let force = a2 * spec.d(base)? + spec.b(base + 2)?;
            Ok((mult, force))
        }
    }
}

/// Product and sum of the four-step closed form with `n` factors, written
/// out as a sum of suffix products (not by re-running the recurrence).
pub fn block(spec: &CoefficientSpec, family: Family, j: usize, n: usize) -> Result<Block> {
    let terms: Vec<(Rational, Rational)> = (0..n)
        .map(|k| four_step_terms(spec, family, 4 * k + j))
        .collect::<Result<_>>()?;
    // suffix = Π_{k=l+1}^{n-1} mult_k, walking l downward.
    let mut suffix = Rational::one();
    let mut sum = Rational::zero();
    for (mult, force) in terms.iter().rev() {
        sum += force * &suffix;
        suffix *= mult;
    }
    Ok(Block { product: suffix, sum })
}

/// `(U_{4n+j}, V_{4n+j})` from the four-step closed forms, `j < 4`.
pub fn uv_closed(
    spec: &CoefficientSpec,
    u_seed: &[Rational; 4],
    v_seed: &[Rational; 4],
    n: usize,
    j: usize,
) -> Result<(Rational, Rational)> {
    if j >= 4 {
        return Err(Error::InvalidQuery(format!("residue j = {j} must be < 4")));
    }
    let u = block(spec, Family::U, j, n)?.apply(&u_seed[j]);
    let v = block(spec, Family::V, j, n)?.apply(&v_seed[j]);
    Ok((u, v))
}

/// Seeds `x_{-2}, x_{-1}, y_{-2}, y_{-1}` used by [`reconstruct`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReconstructionSeeds {
    pub x: [Rational; 2],
    pub y: [Rational; 2],
}

impl ReconstructionSeeds {
    pub fn from_orbit(orbit: &Orbit) -> Self {
        let (xs, ys) = (orbit.xs(), orbit.ys());
        ReconstructionSeeds {
            x: [xs[0].clone(), xs[1].clone()],
            y: [ys[0].clone(), ys[1].clone()],
        }
    }
}

fn track_get(seq: &[Rational], m: usize) -> Result<&Rational> {
    seq.get(m).ok_or_else(|| {
        Error::InvalidQuery(format!("invariant track too short: need index {m}, have {}", seq.len()))
    })
}

fn shifted_target(target: i64) -> Result<usize> {
    usize::try_from(target + 2).map_err(|_| Error::InvalidQuery(format!("index {target} is below -2")))
}

/// `(x_target, y_target)` from two-step products:
/// `x_{2n+j} = x_j Π_{i<n} U_{2i+j} / V_{2i+j+1}` (shifted indexing).
pub fn reconstruct(seeds: &ReconstructionSeeds, track: &InvariantTrack, target: i64) -> Result<(Rational, Rational)> {
    let big_m = shifted_target(target)?;
    let (n, j) = (big_m / 2, big_m % 2);
    let mut x = seeds.x[j].clone();
    let mut y = seeds.y[j].clone();
    for i in 0..n {
        let (e, o) = (2 * i + j, 2 * i + j + 1);
        x = (x * track_get(&track.us, e)?).checked_div(track_get(&track.vs, o)?)?;
        y = (y * track_get(&track.vs, e)?).checked_div(track_get(&track.us, o)?)?;
    }
    Ok((x, y))
}

/// Same values as [`reconstruct`], grouped four steps at a time:
/// `x_{4n+j} = x_j Π_{i<n} U_{4i+j} U_{4i+j+2} / (V_{4i+j+1} V_{4i+j+3})`,
/// with `j = 0..3`. Seeds for `j = 2, 3` come from one two-step update.
pub fn reconstruct_regrouped(
    seeds: &ReconstructionSeeds,
    track: &InvariantTrack,
    target: i64,
) -> Result<(Rational, Rational)> {
    let big_m = shifted_target(target)?;
    let (n, j) = (big_m / 4, big_m % 4);
    let (us, vs) = (&track.us, &track.vs);
    let (mut x, mut y) = if j < 2 {
        (seeds.x[j].clone(), seeds.y[j].clone())
    } else {
        let i = j - 2;
        (
            (&seeds.x[i] * track_get(us, i)?).checked_div(track_get(vs, i + 1)?)?,
            (&seeds.y[i] * track_get(vs, i)?).checked_div(track_get(us, i + 1)?)?,
        )
    };
    for i in 0..n {
        let b = 4 * i + j;
        let xnum = track_get(us, b)? * track_get(us, b + 2)?;
        let xden = track_get(vs, b + 1)? * track_get(vs, b + 3)?;
        let ynum = track_get(vs, b)? * track_get(vs, b + 2)?;
        let yden = track_get(us, b + 1)? * track_get(us, b + 3)?;
        x = (x * xnum).checked_div(&xden)?;
        y = (y * ynum).checked_div(&yden)?;
    }
    Ok((x, y))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::q;
    use crate::orbit::{iterate, InitialState};

    fn unit_spec() -> CoefficientSpec {
        CoefficientSpec::constant(q(1, 1), q(1, 1), q(1, 1), q(1, 1)).unwrap()
    }

    fn ones() -> InitialState {
        InitialState::new([q(1, 1), q(1, 1), q(1, 1)], [q(1, 1), q(1, 1), q(1, 1)]).unwrap()
    }

    #[test]
    fn invariants_of_unit_orbit() {
        let orbit = iterate(&unit_spec(), &ones(), 5).unwrap();
        let track = uv_from_orbit(&orbit);
        assert_eq!(track.len(), 7);
        // U_2 = 1/(x_0 y_1), V_2 = 1/(x_1 y_0)
        assert_eq!(track.u(2), Some(&q(2, 1)));
        assert_eq!(track.v(2), Some(&q(2, 1)));
        assert_eq!(track.u(0), Some(&q(1, 1)));
        for m in 0..track.len() {
            let mi = m as i64;
            assert!((track.u(m).unwrap() * orbit.x(mi - 2).unwrap() * orbit.y(mi - 1).unwrap()).is_one());
            assert!((track.v(m).unwrap() * orbit.x(mi - 1).unwrap() * orbit.y(mi - 2).unwrap()).is_one());
        }
    }

    #[test]
    fn step_examples() {
        let (v2, _) = uv_step(&unit_spec(), &q(2, 1), &q(5, 1), 0).unwrap();
        assert_eq!(v2, q(3, 1));

        let id = CoefficientSpec::constant(q(1, 1), q(0, 1), q(1, 1), q(0, 1)).unwrap();
        let (v, u) = uv_step(&id, &q(7, 3), &q(-2, 5), 4).unwrap();
        assert_eq!((v, u), (q(7, 3), q(-2, 5)));
    }

    #[test]
    fn unit_orbit_track_matches_iteration_of_unit_values() {
        // U_2 = 2 in the unit case; the next U of residue 2 is U_6 = 2 + 2.
        let orbit = iterate(&unit_spec(), &ones(), 5).unwrap();
        let track = uv_from_orbit(&orbit);
        let iterated = uv_iterate(&unit_spec(), [q(1, 1), q(1, 1)], [q(1, 1), q(1, 1)], 7).unwrap();
        assert_eq!(iterated, track);
        let useed = [0, 1, 2, 3].map(|m| track.us[m].clone());
        let vseed = [0, 1, 2, 3].map(|m| track.vs[m].clone());
        // U_4 = U_0 + 2 with U_0 = 1
        assert_eq!(uv_closed(&unit_spec(), &useed, &vseed, 1, 0).unwrap().0, q(3, 1));
    }

    #[test]
    fn closed_base_case_and_unit_four_step() {
        let spec = unit_spec();
        let useed = [q(2, 1), q(3, 1), q(5, 1), q(7, 1)];
        let vseed = [q(-1, 1), q(1, 2), q(1, 3), q(1, 4)];
        for j in 0..4 {
            assert_eq!(uv_closed(&spec, &useed, &vseed, 0, j).unwrap(), (useed[j].clone(), vseed[j].clone()));
        }
        // U_4 = 2·1 + (1·1 + 1) = 4
        assert_eq!(uv_closed(&spec, &useed, &vseed, 1, 0).unwrap().0, q(4, 1));
        assert!(uv_closed(&spec, &useed, &vseed, 1, 4).is_err());
    }

    #[test]
    fn reconstruct_unit_orbit() {
        let orbit = iterate(&unit_spec(), &ones(), 6).unwrap();
        let track = uv_from_orbit(&orbit);
        let seeds = ReconstructionSeeds::from_orbit(&orbit);
        assert_eq!(reconstruct(&seeds, &track, -2).unwrap(), (q(1, 1), q(1, 1)));
        assert_eq!(reconstruct(&seeds, &track, 4).unwrap().0, q(1, 1));
        for m in -2..=6 {
            let want = (orbit.x(m).unwrap().clone(), orbit.y(m).unwrap().clone());
            assert_eq!(reconstruct(&seeds, &track, m).unwrap(), want, "m = {m}");
            assert_eq!(reconstruct_regrouped(&seeds, &track, m).unwrap(), want, "m = {m}");
        }
        assert!(reconstruct(&seeds, &track, 40).is_err());
        assert!(reconstruct(&seeds, &track, -3).is_err());
    }

    #[test]
    fn reconstruct_reports_zero_v() {
        let track = InvariantTrack {
            us: vec![q(1, 1), q(1, 1), q(1, 1)],
            vs: vec![q(1, 1), q(0, 1), q(1, 1)],
        };
        let seeds = ReconstructionSeeds { x: [q(1, 1), q(1, 1)], y: [q(1, 1), q(1, 1)] };
        assert_eq!(reconstruct(&seeds, &track, 0), Err(Error::DivisionByZero));
    }

    #[test]
    fn csv() {
        let track = InvariantTrack { us: vec![q(1, 2)], vs: vec![q(-3, 1)] };
        let mut buf = Vec::new();
        track.write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "n,U,V\n0,1/2,-3/1\n");
    }
}
