//! Randomized exact cross-checks: closed forms and invariant formulas
//! against direct iteration, and the scaling symmetry.

use std::fmt;
use std::str::FromStr;

use crate::closedform::{self, ClosedFormQuery, Component};
use crate::coeffs::{CoefficientSpec, Kind};
use crate::error::{Error, Result};
use crate::exact::Rational;
use crate::orbit::{InitialState, Orbit};
use crate::reduction::{reconstruct, reconstruct_regrouped, uv_closed, uv_from_orbit, ReconstructionSeeds};
use crate::sample::{self, trial_rng};
use crate::symmetry::{verify_symmetry, SymmetryMismatch};

/// Draws per trial before a trial is given up as unsampleable.
const ATTEMPTS: usize = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    General,
    Constant,
    Unit16,
    Period4,
    Uv,
    Symmetry,
}

impl Mode {
    pub const ALL: [Mode; 6] = [Mode::General, Mode::Constant, Mode::Unit16, Mode::Period4, Mode::Uv, Mode::Symmetry];

    pub fn name(self) -> &'static str {
        match self {
            Mode::General => "general",
            Mode::Constant => "constant",
            Mode::Unit16 => "unit16",
            Mode::Period4 => "period4",
            Mode::Uv => "uv",
            Mode::Symmetry => "symmetry",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Mode::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::InvalidQuery(format!("unknown mode {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyConfig {
    pub mode: Mode,
    pub trials: usize,
    pub seed: u64,
    /// Deepest block index `n` checked (indices up to `4 n_max + 1`).
    pub nmax: usize,
    /// Group parameter for [`Mode::Symmetry`].
    pub t: Rational,
}

impl VerifyConfig {
    pub fn new(mode: Mode) -> Self {
        VerifyConfig {
            mode,
            trials: 50,
            seed: 0,
            nmax: 6,
            t: Rational::from(2),
        }
    }
}

/// A failed check with everything needed to replay it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub trial: usize,
    pub spec: CoefficientSpec,
    pub init: InitialState,
    pub check: String,
    pub expected: String,
    pub actual: String,
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "counterexample (trial {})", self.trial)?;
        writeln!(f, "  check:    {}", self.check)?;
        writeln!(f, "  expected: {}", self.expected)?;
        writeln!(f, "  actual:   {}", self.actual)?;
        writeln!(f, "  --init {}", self.init)?;
        if let Some([a, b, c, d]) = self.spec.as_constant() {
            write!(f, "  --const a={a},b={b},c={c},d={d}")
        } else {
            let flag = if self.spec.kind() == Kind::Periodic { "--periodic" } else { "--table" };
            writeln!(f, "  {flag} <file> with:")?;
            let text = self.spec.to_string();
            let mut lines = text.lines().peekable();
            while let Some(line) = lines.next() {
                write!(f, "    {line}")?;
                if lines.peek().is_some() {
                    writeln!(f)?;
                }
            }
            Ok(())
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    pub mode: Mode,
    pub trials: usize,
    pub passed: usize,
    /// Exact comparisons made across all trials.
    pub comparisons: usize,
    pub first_failure: Option<Counterexample>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.passed == self.trials
    }

    /// `T/T pass` or `k/T pass`.
    pub fn summary(&self) -> String {
        format!("{}/{} pass", self.passed, self.trials)
    }
}

struct Failure {
    check: String,
    expected: String,
    actual: String,
}

type Trial = std::result::Result<(), Failure>;

/// Accumulates comparisons within one trial.
struct Checker {
    count: usize,
}

impl Checker {
    fn eq(&mut self, check: impl FnOnce() -> String, expected: &Rational, actual: Result<Rational>) -> Trial {
        self.count += 1;
        match actual {
            Ok(v) if &v == expected => Ok(()),
            other => Err(Failure {
                check: check(),
                expected: expected.to_string(),
                actual: match other {
                    Ok(v) => v.to_string(),
                    Err(e) => format!("error: {e}"),
                },
            }),
        }
    }
}

fn queries(nmax: usize) -> impl Iterator<Item = ClosedFormQuery> {
    (0..=nmax).flat_map(|n| {
        (-2..=1).flat_map(move |j| [Component::X, Component::Y].map(move |c| ClosedFormQuery { j, n, component: c }))
    })
}

fn orbit_value(orbit: &Orbit, q: &ClosedFormQuery) -> Rational {
    match q.component {
        Component::X => orbit.x(q.index()),
        Component::Y => orbit.y(q.index()),
    }
    .expect("orbit is long enough")
    .clone()
}

fn describe(name: &str, q: &ClosedFormQuery) -> String {
    format!("{name} {}[{}] (n={}, j={}) vs iteration", q.component, q.index(), q.n, q.j)
}

/// Runs `cfg.trials` seeded trials.
pub fn run(cfg: &VerifyConfig) -> VerifyReport {
    let mut report = VerifyReport {
        mode: cfg.mode,
        trials: cfg.trials,
        passed: 0,
        comparisons: 0,
        first_failure: None,
    };
    for trial in 0..cfg.trials {
        let mut rng = trial_rng(cfg.seed, trial as u64);
        let steps = 4 * cfg.nmax + 1;
        let draw = |rng: &mut rand_chacha::ChaCha8Rng| -> (CoefficientSpec, InitialState) {
            let init = sample::random_init(rng);
            let spec = match cfg.mode {
                Mode::General | Mode::Uv => sample::random_tabulated_spec(rng, steps + 8),
                Mode::Constant | Mode::Symmetry => sample::random_constant_spec(rng),
                Mode::Period4 => sample::random_periodic_spec(rng, 4),
                Mode::Unit16 => {
                    let signs = closedform::unit_sign_patterns()[trial % 16];
                    let [a, b, c, d] = signs.map(|s| Rational::from(s as i64));
                    CoefficientSpec::constant(a, b, c, d).expect("unit constants")
                }
            };
            (spec, init)
        };
        let depth = if cfg.mode == Mode::Symmetry { steps.max(30) } else { steps };
        let Some((spec, init, orbit)) = sample::complete_instance(&mut rng, depth, ATTEMPTS, draw) else {
            // Nothing to replay; report the seed.
            report.first_failure.get_or_insert_with(|| Counterexample {
                trial,
                spec: CoefficientSpec::constant(Rational::one(), Rational::one(), Rational::one(), Rational::one())
                    .expect("unit"),
                init: InitialState::new([(); 3].map(|_| Rational::one()), [(); 3].map(|_| Rational::one())).expect("ones"),
                check: format!("sampling a complete orbit (seed {}, trial {trial})", cfg.seed),
                expected: format!("complete within {ATTEMPTS} draws"),
                actual: "every draw hit the forbidden set".into(),
            });
            continue;
        };
        let mut checker = Checker { count: 0 };
        let outcome = run_trial(cfg, trial, &spec, &init, &orbit, &mut checker);
        report.comparisons += checker.count;
        match outcome {
            Ok(()) => report.passed += 1,
            Err(f) => {
                report.first_failure.get_or_insert(Counterexample {
                    trial,
                    spec,
                    init,
                    check: f.check,
                    expected: f.expected,
                    actual: f.actual,
                });
            }
        }
    }
    report
}

fn run_trial(cfg: &VerifyConfig, trial: usize, spec: &CoefficientSpec, init: &InitialState, orbit: &Orbit, ck: &mut Checker) -> Trial {
    match cfg.mode {
        Mode::General => {
            for q in queries(cfg.nmax) {
                let want = orbit_value(orbit, &q);
                ck.eq(|| describe("closed_general", &q), &want, closedform::closed_general(spec, init, q))?;
            }
        }
        Mode::Constant => {
            let [a, b, c, d] = spec.as_constant().expect("constant spec");
            for q in queries(cfg.nmax) {
                let want = orbit_value(orbit, &q);
                ck.eq(|| describe("closed_constant", &q), &want, closedform::closed_constant(a, b, c, d, init, q))?;
                ck.eq(|| describe("closed_general", &q), &want, closedform::closed_general(spec, init, q))?;
            }
        }
        Mode::Unit16 => {
            let signs = closedform::unit_sign_patterns()[trial % 16];
            for q in queries(cfg.nmax) {
                let want = orbit_value(orbit, &q);
                ck.eq(|| format!("{} signs={signs:?}", describe("closed_unit", &q)), &want, closedform::closed_unit(signs, init, q))?;
            }
        }
        Mode::Period4 => {
            for q in queries(cfg.nmax) {
                let want = orbit_value(orbit, &q);
                ck.eq(|| describe("closed_period4", &q), &want, closedform::closed_period4(spec, init, q))?;
                ck.eq(|| describe("closed_general", &q), &want, closedform::closed_general(spec, init, q))?;
            }
        }
        Mode::Uv => uv_trial(spec, orbit, ck)?,
        Mode::Symmetry => {
            let depth = (4 * cfg.nmax + 1).max(30);
            ck.count += 1;
            let report = verify_symmetry(spec, init, &cfg.t, depth).map_err(|e| Failure {
                check: format!("symmetry t={}", cfg.t),
                expected: "complete orbit".into(),
                actual: format!("error: {e}"),
            })?;
            ck.count += report.values_checked + report.invariants_checked;
            if let Some(m) = report.mismatch {
                let check = format!("symmetry t={} through n={depth}", cfg.t);
                return Err(match m {
                    SymmetryMismatch::ScaledForbidden { step } => Failure {
                        check,
                        expected: "scaled orbit complete".into(),
                        actual: format!("scaled orbit forbidden at step {step}"),
                    },
                    SymmetryMismatch::Value { component, index, expected, actual } => Failure {
                        check: format!("{check}: scaled {component}[{index}]"),
                        expected: expected.to_string(),
                        actual: actual.to_string(),
                    },
                    SymmetryMismatch::Invariant { family, index, original, scaled } => Failure {
                        check: format!("{check}: invariant {family}[{index}]"),
                        expected: original.to_string(),
                        actual: scaled.to_string(),
                    },
                });
            }
        }
    }
    Ok(())
}

fn uv_trial(spec: &CoefficientSpec, orbit: &Orbit, ck: &mut Checker) -> Trial {
    let track = uv_from_orbit(orbit);
    let u4: [Rational; 4] = std::array::from_fn(|i| track.us[i].clone());
    let v4: [Rational; 4] = std::array::from_fn(|i| track.vs[i].clone());
    for m in 0..track.len() {
        let (n, j) = (m / 4, m % 4);
        let closed = uv_closed(spec, &u4, &v4, n, j);
        let (cu, cv) = match closed {
            Ok((u, v)) => (Ok(u), Ok(v)),
            Err(e) => (Err(e.clone()), Err(e)),
        };
        ck.eq(|| format!("uv_closed U[{m}] vs orbit invariants"), &track.us[m], cu)?;
        ck.eq(|| format!("uv_closed V[{m}] vs orbit invariants"), &track.vs[m], cv)?;
    }
    let seeds = ReconstructionSeeds::from_orbit(orbit);
    // The track stops one short of the orbit, so the last index is not
    // reconstructible.
    for target in -2..orbit.last_index() {
        let x = orbit.x(target).expect("in range");
        let y = orbit.y(target).expect("in range");
        for (name, got) in [
            ("reconstruct", reconstruct(&seeds, &track, target)),
            ("reconstruct_regrouped", reconstruct_regrouped(&seeds, &track, target)),
        ] {
            let (gx, gy) = match got {
                Ok((gx, gy)) => (Ok(gx), Ok(gy)),
                Err(e) => (Err(e.clone()), Err(e)),
            };
            ck.eq(|| format!("{name} x[{target}] vs iteration"), x, gx)?;
            ck.eq(|| format!("{name} y[{target}] vs iteration"), y, gy)?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_mode_passes_a_few_trials() {
        for mode in Mode::ALL {
            let mut cfg = VerifyConfig::new(mode);
            cfg.trials = 4;
            cfg.nmax = 3;
            cfg.seed = 5;
            let r = run(&cfg);
            assert!(r.all_passed(), "{mode}: {:?}", r.first_failure.map(|c| c.to_string()));
            assert!(r.comparisons > 0);
        }
    }

    #[test]
    fn deterministic_for_a_seed() {
        let mut cfg = VerifyConfig::new(Mode::General);
        cfg.trials = 3;
        cfg.nmax = 2;
        assert_eq!(run(&cfg), run(&cfg));
    }

    #[test]
    fn mode_names_round_trip() {
        for m in Mode::ALL {
            assert_eq!(m.name().parse::<Mode>().unwrap(), m);
        }
        assert!("bogus".parse::<Mode>().is_err());
    }
}
