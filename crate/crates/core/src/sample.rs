//! Seeded random instances with small rationals.
//!
//! Values have numerators in `[-9, 9] \ {0}` and denominators in `[1, 9]`,
//! which keeps big-integer growth modest over a few dozen steps while still
//! exercising every term of the formulas.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::coeffs::CoefficientSpec;
use crate::exact::Rational;
use crate::orbit::{iterate, InitialState, Orbit};

/// Generator for trial `trial` of a run seeded with `seed`. Each trial gets
/// its own stream, so results do not depend on evaluation order.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// `p/q` with `p ∈ [-9, 9] \ {0}`, `q ∈ [1, 9]`.
pub fn small_nonzero<R: Rng + ?Sized>(rng: &mut R) -> Rational {
    let mut p = rng.gen_range(-9i64..=8);
    if p >= 0 {
        p += 1;
    }
    Rational::new(p, rng.gen_range(1i64..=9)).expect("positive denominator")
}

pub fn small_nonzero_vec<R: Rng + ?Sized>(rng: &mut R, len: usize) -> Vec<Rational> {
    (0..len).map(|_| small_nonzero(rng)).collect()
}

pub fn random_init<R: Rng + ?Sized>(rng: &mut R) -> InitialState {
    let v = small_nonzero_vec(rng, 6);
    InitialState::from_slice(&v).expect("six nonzero values")
}

pub fn random_constant_spec<R: Rng + ?Sized>(rng: &mut R) -> CoefficientSpec {
    let [a, b, c, d] = [(); 4].map(|_| small_nonzero(rng));
    CoefficientSpec::constant(a, b, c, d).expect("nonzero a, c")
}

pub fn random_periodic_spec<R: Rng + ?Sized>(rng: &mut R, period: usize) -> CoefficientSpec {
    let [a, b, c, d] = [(); 4].map(|_| small_nonzero_vec(rng, period));
    CoefficientSpec::periodic(a, b, c, d).expect("nonzero a, c")
}

pub fn random_tabulated_spec<R: Rng + ?Sized>(rng: &mut R, len: usize) -> CoefficientSpec {
    let [a, b, c, d] = [(); 4].map(|_| small_nonzero_vec(rng, len));
    CoefficientSpec::tabulated(a, b, c, d).expect("nonzero a, c")
}

/// Draws `(spec, init)` pairs from `draw` until the orbit survives `steps`
/// steps, giving up after `attempts` tries.
pub fn complete_instance<R, F>(rng: &mut R, steps: usize, attempts: usize, mut draw: F) -> Option<(CoefficientSpec, InitialState, Orbit)>
where
    R: Rng + ?Sized,
    F: FnMut(&mut R) -> (CoefficientSpec, InitialState),
{
    for _ in 0..attempts {
        let (spec, init) = draw(rng);
        if let Ok(orbit) = iterate(&spec, &init, steps) {
            if orbit.is_complete() {
                return Some((spec, init, orbit));
            }
        }
    }
    None
}
