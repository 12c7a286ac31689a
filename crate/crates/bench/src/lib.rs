//! Fixed instances shared by the benchmarks.

use tridiff::sample::{random_init, random_periodic_spec, random_tabulated_spec, trial_rng};
use tridiff::{iterate, CoefficientSpec, InitialState};

/// A random instance whose orbit survives `steps` steps, with coefficient
/// tables long enough for closed-form queries up to index `steps`.
pub fn tabulated(steps: usize) -> (CoefficientSpec, InitialState) {
    instance(steps, |rng| random_tabulated_spec(rng, steps + 8))
}

/// Same as [`tabulated`] with period-4 coefficients.
pub fn period4(steps: usize) -> (CoefficientSpec, InitialState) {
    instance(steps, |rng| random_periodic_spec(rng, 4))
}

fn instance(steps: usize, mut spec: impl FnMut(&mut rand_chacha::ChaCha8Rng) -> CoefficientSpec) -> (CoefficientSpec, InitialState) {
    let mut rng = trial_rng(2024, steps as u64);
    loop {
        let s = spec(&mut rng);
        let init = random_init(&mut rng);
        if iterate(&s, &init, steps).is_ok_and(|o| o.is_complete()) {
            return (s, init);
        }
    }
}
