//! Explicit solutions in terms of the six seeds.
//!
//! Every index `m >= -2` is written `m = 4n + j` with `j ∈ {-2, -1, 0, 1}`.
//! For each residue and component the solution has the shape
//!
//! ```text
//! value = monomial(seeds; n) × Π_{s<n} (F1(s) F2(s)) / (F3(s) F4(s))
//! ```
//!
//! where each factor `F` is one of eight seed-normalized invariant blocks
//! (`U_{4s+j}` or `V_{4s+j}` times the reciprocal of its seed). The four
//! evaluators differ in how the blocks are computed:
//!
//! * [`closed_general`]: nested products and sums with arbitrary coefficient
//!   sequences, evaluated with running suffix products (`O(n^2)`).
//! * [`closed_period4`]: coefficients of period four, where every product is
//!   a power and every sum a geometric sum.
//! * [`closed_constant`]: constant coefficients, powers of `ac`.
//! * [`closed_unit`]: `a, b, c, d ∈ {±1}`; the two patterns `(1,1,1,1)` and
//!   `(1,-1,1,-1)` have their own simplified products, the rest go through
//!   [`closed_constant`].
//!
//! Before evaluating, each evaluator confirms that the orbit actually exists
//! up to the requested index (no `U_i` or `V_i` with `2 <= i <= m + 1`
//! vanishes). When it does not, the query fails with
//! [`Error::DenominatorVanished`] carrying the block index `s = i / 4`, so a
//! closed form fails exactly when direct iteration hits the forbidden set.

use std::fmt;

use crate::coeffs::{CoefficientSpec, Kind};
use crate::error::{Error, Result};
use crate::exact::Rational;
use crate::orbit::InitialState;
use crate::reduction::{self, Block, Family};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Component {
    X,
    Y,
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Component::X => "x",
            Component::Y => "y",
        })
    }
}

/// Address of one solution value: index `4n + j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClosedFormQuery {
    /// Residue in `{-2, -1, 0, 1}`.
    pub j: i64,
    pub n: usize,
    pub component: Component,
}

impl ClosedFormQuery {
    pub fn new(n: usize, j: i64, component: Component) -> Result<Self> {
        if !(-2..=1).contains(&j) {
            return Err(Error::InvalidQuery(format!("residue j = {j} must be one of -2, -1, 0, 1")));
        }
        Ok(ClosedFormQuery { j, n, component })
    }

    /// Splits an absolute index `m >= -2` into `(n, j)`.
    pub fn from_index(m: i64, component: Component) -> Result<Self> {
        if m < -2 {
            return Err(Error::InvalidQuery(format!("index {m} is below -2")));
        }
        let n = (m + 2) / 4;
        Self::new(n as usize, m - 4 * n, component)
    }

    pub fn index(&self) -> i64 {
        4 * self.n as i64 + self.j
    }

    fn label(&self) -> String {
        let n = match self.j {
            -2 => "4n-2",
            -1 => "4n-1",
            0 => "4n",
            _ => "4n+1",
        };
        format!("{}[{n}] (n={})", self.component, self.n)
    }
}

/// Which evaluator to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    General,
    Constant,
    Unit,
    Period4,
}

/// Picks the most specific evaluator that applies to `spec`.
pub fn branch_for(spec: &CoefficientSpec) -> Branch {
    match spec.kind() {
        Kind::Constant => match spec.as_constant() {
            Some(vals) if vals.iter().all(|v| v.is_one() || (-*v).is_one()) => Branch::Unit,
            _ => Branch::Constant,
        },
        Kind::Periodic if spec.period().is_some_and(|p| 4 % p == 0) => Branch::Period4,
        _ => Branch::General,
    }
}

/// Dispatches to the evaluator for `branch`.
pub fn closed(branch: Branch, spec: &CoefficientSpec, init: &InitialState, q: ClosedFormQuery) -> Result<Rational> {
    let constants = || {
        spec.as_constant()
            .ok_or_else(|| Error::InvalidQuery("constant branch needs constant coefficients".into()))
    };
    match branch {
        Branch::General => closed_general(spec, init, q),
        Branch::Period4 => closed_period4(spec, init, q),
        Branch::Constant => {
            let [a, b, c, d] = constants()?;
            closed_constant(a, b, c, d, init, q)
        }
        Branch::Unit => {
            let [a, b, c, d] = constants()?;
            let sign = |v: &Rational| -> Result<i8> {
                if v.is_one() {
                    Ok(1)
                } else if (-v).is_one() {
                    Ok(-1)
                } else {
                    Err(Error::InvalidQuery(format!("unit branch needs ±1 coefficients, got {v}")))
                }
            };
            closed_unit([sign(a)?, sign(b)?, sign(c)?, sign(d)?], init, q)
        }
    }
}

// ---------------------------------------------------------------------------
// Shared layout

/// One factor: the `family` block of residue `j` with `s + shift` terms.
#[derive(Clone, Copy, Debug)]
struct Factor {
    family: Family,
    j: usize,
    shift: usize,
}

const fn uf(j: usize, shift: usize) -> Factor {
    Factor { family: Family::U, j, shift }
}

const fn vf(j: usize, shift: usize) -> Factor {
    Factor { family: Family::V, j, shift }
}

struct Layout {
    /// Exponents of `x_{-2}, x_{-1}, x_0, y_{-2}, y_{-1}, y_0`.
    exps: [i64; 6],
    num: [Factor; 2],
    den: [Factor; 2],
    /// The `4n+1` residues also divide by the first-step denominator
    /// (`a_0 + b_0 x_{-2} y_{-1}` for x, `c_0 + d_0 x_{-1} y_{-2}` for y),
    /// which is the `s = 0` block of `V_2` (resp. `U_2`).
    first_step: Option<Factor>,
}

fn layout(q: &ClosedFormQuery) -> Layout {
    let n = q.n as i64;
    match (q.component, q.j) {
        (Component::X, -2) => Layout {
            exps: [1 - n, 0, n, -n, 0, n],
            num: [uf(0, 0), uf(2, 0)],
            den: [vf(1, 0), vf(3, 0)],
            first_step: None,
        },
        (Component::Y, -2) => Layout {
            exps: [-n, 0, n, 1 - n, 0, n],
            num: [vf(0, 0), vf(2, 0)],
            den: [uf(1, 0), uf(3, 0)],
            first_step: None,
        },
        (Component::X, -1) => Layout {
            exps: [n, 1, -n, n, 0, -n],
            num: [uf(1, 0), uf(3, 0)],
            den: [vf(2, 0), vf(0, 1)],
            first_step: None,
        },
        (Component::Y, -1) => Layout {
            exps: [n, 0, -n, n, 1, -n],
            num: [vf(1, 0), vf(3, 0)],
            den: [uf(2, 0), uf(0, 1)],
            first_step: None,
        },
        (Component::X, 0) => Layout {
            exps: [-n, 0, n + 1, -n, 0, n],
            num: [uf(2, 0), uf(0, 1)],
            den: [vf(3, 0), vf(1, 1)],
            first_step: None,
        },
        (Component::Y, 0) => Layout {
            exps: [-n, 0, n, -n, 0, n + 1],
            num: [vf(2, 0), vf(0, 1)],
            den: [uf(3, 0), uf(1, 1)],
            first_step: None,
        },
        (Component::X, _) => Layout {
            exps: [n + 1, 0, -n, n, 1, -n - 1],
            num: [uf(3, 0), uf(1, 1)],
            den: [vf(0, 1), vf(2, 1)],
            first_step: Some(vf(2, 0)),
        },
        (Component::Y, _) => Layout {
            exps: [n, 1, -n - 1, n + 1, 0, -n],
            num: [vf(3, 0), vf(1, 1)],
            den: [uf(0, 1), uf(2, 1)],
            first_step: Some(uf(2, 0)),
        },
    }
}

fn monomial(init: &InitialState, exps: &[i64; 6]) -> Result<Rational> {
    init.to_vec()
        .iter()
        .zip(exps)
        .try_fold(Rational::one(), |acc, (v, &e)| Ok(acc * v.pow(e)?))
}

/// The seed products that turn `U_j` / `V_j` into a polynomial expression.
struct Seeds {
    /// `x_{-2} y_{-1} = 1/U_0`
    w_u0: Rational,
    /// `x_{-1} y_0 = 1/U_1`
    w_u1: Rational,
    /// `x_{-1} y_{-2} = 1/V_0`
    w_v0: Rational,
    /// `x_0 y_{-1} = 1/V_1`
    w_v1: Rational,
}

impl Seeds {
    fn new(init: &InitialState) -> Self {
        Seeds {
            w_u0: init.x_m2() * init.y_m1(),
            w_u1: init.x_m1() * init.y0(),
            w_v0: init.x_m1() * init.y_m2(),
            w_v1: init.x0() * init.y_m1(),
        }
    }
}

/// Source of the four-step blocks.
trait BlockSource {
    fn block(&self, family: Family, j: usize, count: usize) -> Result<Block>;
    fn spec(&self) -> &CoefficientSpec;
}

/// Seed-normalized block value, e.g. `c_0 P + (d_0 P + S) x_{-1} y_{-2}`
/// for `U_{4s+2}`.
fn factor_value<S: BlockSource>(src: &S, seeds: &Seeds, f: Factor, s: usize) -> Result<Rational> {
    let Block { product: p, sum } = src.block(f.family, f.j, s + f.shift)?;
    let spec = src.spec();
    Ok(match (f.family, f.j) {
        (Family::U, 0) => p + &seeds.w_u0 * sum,
        (Family::U, 1) => p + &seeds.w_u1 * sum,
        (Family::U, 2) => spec.c(0)? * &p + (spec.d(0)? * &p + sum) * &seeds.w_v0,
        (Family::U, _) => spec.c(1)? * &p + (spec.d(1)? * &p + sum) * &seeds.w_v1,
        (Family::V, 0) => p + &seeds.w_v0 * sum,
        (Family::V, 1) => p + &seeds.w_v1 * sum,
        (Family::V, 2) => spec.a(0)? * &p + (spec.b(0)? * &p + sum) * &seeds.w_u0,
        (Family::V, _) => spec.a(1)? * &p + (spec.b(1)? * &p + sum) * &seeds.w_u1,
    })
}

fn vanished(q: &ClosedFormQuery, block: usize) -> Error {
    Error::DenominatorVanished {
        branch: q.label(),
        block,
    }
}

/// Fails when the orbit does not reach index `4n + j`, i.e. some `U_i` or
/// `V_i` with `2 <= i <= 4n + j + 1` vanishes. Runs the affine pair, which
/// is cheap; the value itself is never taken from here.
fn check_domain(spec: &CoefficientSpec, seeds: &Seeds, q: &ClosedFormQuery) -> Result<()> {
    let target = q.index();
    if target < 1 {
        return Ok(());
    }
    let last = (target + 1) as usize;
    let mut us = vec![seeds.w_u0.recip()?, seeds.w_u1.recip()?];
    let mut vs = vec![seeds.w_v0.recip()?, seeds.w_v1.recip()?];
    for i in 2..=last {
        let (v, u) = reduction::uv_step(spec, &us[i - 2], &vs[i - 2], i - 2)?;
        if u.is_zero() || v.is_zero() {
            return Err(vanished(q, i / 4));
        }
        us.push(u);
        vs.push(v);
    }
    Ok(())
}

fn eval_layout<S: BlockSource>(src: &S, init: &InitialState, q: &ClosedFormQuery) -> Result<Rational> {
    let seeds = Seeds::new(init);
    check_domain(src.spec(), &seeds, q)?;

    let lay = layout(q);
    let mut value = monomial(init, &lay.exps)?;
    if let Some(f) = lay.first_step {
        let den = factor_value(src, &seeds, f, 0)?;
        value = value.checked_div(&den).map_err(|_| vanished(q, 0))?;
    }
    for s in 0..q.n {
        let mut num = Rational::one();
        for f in lay.num {
            num *= factor_value(src, &seeds, f, s)?;
        }
        let mut den = Rational::one();
        for f in lay.den {
            den *= factor_value(src, &seeds, f, s)?;
        }
        value = (value * num).checked_div(&den).map_err(|_| vanished(q, s))?;
    }
    Ok(value)
}

// ---------------------------------------------------------------------------
// General coefficients

struct NestedSums<'a>(&'a CoefficientSpec);

impl BlockSource for NestedSums<'_> {
    fn block(&self, family: Family, j: usize, count: usize) -> Result<Block> {
        reduction::block(self.0, family, j, count)
    }

    fn spec(&self) -> &CoefficientSpec {
        self.0
    }
}

/// Solution value for arbitrary coefficient sequences.
pub fn closed_general(spec: &CoefficientSpec, init: &InitialState, q: ClosedFormQuery) -> Result<Rational> {
    eval_layout(&NestedSums(spec), init, &q)
}

// ---------------------------------------------------------------------------
// Period-four coefficients

/// Blocks for coefficients of period dividing four: `a_{4k+j} = a_j`, so
/// `P = m^s` and `S = t Σ_{l<s} m^l` with `m = a_j c_{j+2}`,
/// `t = b_j c_{j+2} + d_{j+2}` for U (and `m = a_{j+2} c_j`,
/// `t = a_{j+2} d_j + b_{j+2}` for V), subscripts mod 4.
struct Geometric<'a>(&'a CoefficientSpec);

impl BlockSource for Geometric<'_> {
    fn block(&self, family: Family, j: usize, count: usize) -> Result<Block> {
        let spec = self.0;
        let (mult, force) = match family {
            Family::U => {
                let c2 = spec.c(j + 2)?;
                (spec.a(j)? * c2, spec.b(j)? * c2 + spec.d(j + 2)?)
            }
            Family::V => {
                let a2 = spec.a(j + 2)?;
                (a2 * spec.c(j)?, a2 * spec.d(j)? + spec.b(j + 2)?)
            }
        };
        Ok(Block {
            product: mult.pow(count as i64)?,
            sum: force * geometric_sum(&mult, count),
        })
    }

    fn spec(&self) -> &CoefficientSpec {
        self.0
    }
}

/// `Σ_{l<count} r^l`.
pub fn geometric_sum(r: &Rational, count: usize) -> Rational {
    if r.is_one() {
        return Rational::from(count as i64);
    }
    // (r^count - 1) / (r - 1); r != 1 here.
    let num = r.pow(count as i64).expect("nonnegative exponent") - Rational::one();
    num.checked_div(&(r - Rational::one())).expect("r != 1")
}

/// Solution value when every coefficient sequence has period dividing 4.
pub fn closed_period4(spec: &CoefficientSpec, init: &InitialState, q: ClosedFormQuery) -> Result<Rational> {
    match spec.period() {
        Some(p) if 4 % p == 0 => eval_layout(&Geometric(spec), init, &q),
        _ => Err(Error::InvalidQuery(
            "period-4 closed form needs coefficients with period dividing 4".into(),
        )),
    }
}

// ---------------------------------------------------------------------------
// Constant coefficients

struct ConstantForms<'a> {
    a: &'a Rational,
    b: &'a Rational,
    c: &'a Rational,
    d: &'a Rational,
    /// `ac`
    r: Rational,
    /// `bc + d`
    bcd: Rational,
    /// `ad + b`
    adb: Rational,
}

impl ConstantForms<'_> {
    fn pow(v: &Rational, k: usize) -> Rational {
        v.pow(k as i64).expect("nonnegative exponent")
    }

    fn g(&self, s: usize) -> Rational {
        // Written as the sum it is; s stays small relative to big-int cost.
        (0..s).map(|l| Self::pow(&self.r, l)).sum()
    }

    /// `(ac)^s + (bc + d) w Σ_{l<s} (ac)^l`
    fn ua(&self, s: usize, w: &Rational) -> Rational {
        Self::pow(&self.r, s) + &self.bcd * w * self.g(s)
    }

    /// `(ac)^s + (ad + b) w Σ_{l<s} (ac)^l`
    fn va(&self, s: usize, w: &Rational) -> Rational {
        Self::pow(&self.r, s) + &self.adb * w * self.g(s)
    }

    /// `a^s c^{s+1} + ((ac)^s d + (bc + d) Σ_{l<s} (ac)^l) w`
    fn ub(&self, s: usize, w: &Rational) -> Rational {
        Self::pow(self.a, s) * Self::pow(self.c, s + 1) + (Self::pow(&self.r, s) * self.d + &self.bcd * self.g(s)) * w
    }

    /// `a^{s+1} c^s + ((ac)^s b + (ad + b) Σ_{l<s} (ac)^l) w`
    fn vb(&self, s: usize, w: &Rational) -> Rational {
        Self::pow(self.a, s + 1) * Self::pow(self.c, s) + (Self::pow(&self.r, s) * self.b + &self.adb * self.g(s)) * w
    }
}

fn constant_spec(a: &Rational, b: &Rational, c: &Rational, d: &Rational) -> Result<CoefficientSpec> {
    CoefficientSpec::constant(a.clone(), b.clone(), c.clone(), d.clone())
}

/// Multiplies `value` by `Π_{s<n} num(s) / den(s)`.
fn product_over_blocks(
    q: &ClosedFormQuery,
    mut value: Rational,
    mut term: impl FnMut(usize) -> (Rational, Rational),
) -> Result<Rational> {
    for s in 0..q.n {
        let (num, den) = term(s);
        value = (value * num).checked_div(&den).map_err(|_| vanished(q, s))?;
    }
    Ok(value)
}

/// Solution value for constant coefficients `a, b, c, d` (`a, c != 0`).
pub fn closed_constant(
    a: &Rational,
    b: &Rational,
    c: &Rational,
    d: &Rational,
    init: &InitialState,
    q: ClosedFormQuery,
) -> Result<Rational> {
    let spec = constant_spec(a, b, c, d)?;
    let seeds = Seeds::new(init);
    check_domain(&spec, &seeds, &q)?;

    let k = ConstantForms {
        a,
        b,
        c,
        d,
        r: a * c,
        bcd: b * c + d,
        adb: a * d + b,
    };
    let (x2, x1, x0) = (init.x_m2(), init.x_m1(), init.x0());
    let (y2, y1, y0) = (init.y_m2(), init.y_m1(), init.y0());
    let (x2y1, x1y0, x1y2, x0y1) = (x2 * y1, x1 * y0, x1 * y2, x0 * y1);
    let pre = monomial(init, &layout(&q).exps)?;

    match (q.component, q.j) {
        (Component::X, -2) => product_over_blocks(&q, pre, |s| {
            (k.ua(s, &x2y1) * k.ub(s, &x1y2), k.va(s, &x0y1) * k.vb(s, &x1y0))
        }),
        (Component::X, -1) => product_over_blocks(&q, pre, |s| {
            (k.ua(s, &x1y0) * k.ub(s, &x0y1), k.vb(s, &x2y1) * k.va(s + 1, &x1y2))
        }),
        (Component::X, 0) => product_over_blocks(&q, pre, |s| {
            (k.ub(s, &x1y2) * k.ua(s + 1, &x2y1), k.vb(s, &x1y0) * k.va(s + 1, &x0y1))
        }),
        (Component::X, _) => {
            let pre = pre.checked_div(&(a + b * &x2y1)).map_err(|_| vanished(&q, 0))?;
            product_over_blocks(&q, pre, |s| {
                (k.ub(s, &x0y1) * k.ua(s + 1, &x1y0), k.va(s + 1, &x1y2) * k.vb(s + 1, &x2y1))
            })
        }
        (Component::Y, -2) => product_over_blocks(&q, pre, |s| {
            (k.va(s, &x1y2) * k.vb(s, &x2y1), k.ua(s, &x1y0) * k.ub(s, &x0y1))
        }),
        (Component::Y, -1) => product_over_blocks(&q, pre, |s| {
            (k.va(s, &x0y1) * k.vb(s, &x1y0), k.ub(s, &x1y2) * k.ua(s + 1, &x2y1))
        }),
        (Component::Y, 0) => product_over_blocks(&q, pre, |s| {
            (k.vb(s, &x2y1) * k.va(s + 1, &x1y2), k.ub(s, &x0y1) * k.ua(s + 1, &x1y0))
        }),
        (Component::Y, _) => {
            let pre = pre.checked_div(&(c + d * &x1y2)).map_err(|_| vanished(&q, 0))?;
            product_over_blocks(&q, pre, |s| {
                (k.vb(s, &x1y0) * k.va(s + 1, &x0y1), k.ua(s + 1, &x2y1) * k.ub(s + 1, &x1y2))
            })
        }
    }
}

// ---------------------------------------------------------------------------
// Unit coefficients

/// Solution value for `(a, b, c, d) = signs`, each `±1`.
pub fn closed_unit(signs: [i8; 4], init: &InitialState, q: ClosedFormQuery) -> Result<Rational> {
    if signs.iter().any(|s| s.abs() != 1) {
        return Err(Error::InvalidQuery(format!("unit case needs ±1 entries, got {signs:?}")));
    }
    let [a, b, c, d] = signs.map(|s| Rational::from(s as i64));
    let eps = match signs {
        [1, 1, 1, 1] => 1,
        [1, -1, 1, -1] => -1,
        _ => return closed_constant(&a, &b, &c, &d, init, q),
    };
    check_domain(&constant_spec(&a, &b, &c, &d)?, &Seeds::new(init), &q)?;

    let (x2, x1, x0) = (init.x_m2(), init.x_m1(), init.x0());
    let (y2, y1, y0) = (init.y_m2(), init.y_m1(), init.y0());
    let (x2y1, x1y0, x1y2, x0y1) = (x2 * y1, x1 * y0, x1 * y2, x0 * y1);
    // 1 + ε k w
    let e = |k: usize, w: &Rational| Rational::one() + Rational::from(eps * k as i64) * w;
    let pre = monomial(init, &layout(&q).exps)?;

    match (q.component, q.j) {
        (Component::X, -2) => product_over_blocks(&q, pre, |s| {
            (e(2 * s, &x2y1) * e(2 * s + 1, &x1y2), e(2 * s, &x0y1) * e(2 * s + 1, &x1y0))
        }),
        (Component::X, -1) => product_over_blocks(&q, pre, |s| {
            (e(2 * s, &x1y0) * e(2 * s + 1, &x0y1), e(2 * s + 1, &x2y1) * e(2 * s + 2, &x1y2))
        }),
        (Component::X, 0) => product_over_blocks(&q, pre, |s| {
            (e(2 * s + 1, &x1y2) * e(2 * s + 2, &x2y1), e(2 * s + 1, &x1y0) * e(2 * s + 2, &x0y1))
        }),
        (Component::X, _) => {
            let pre = pre.checked_div(&e(1, &x2y1)).map_err(|_| vanished(&q, 0))?;
            product_over_blocks(&q, pre, |s| {
                (e(2 * s + 1, &x0y1) * e(2 * s + 2, &x1y0), e(2 * s + 2, &x1y2) * e(2 * s + 3, &x2y1))
            })
        }
        (Component::Y, -2) => product_over_blocks(&q, pre, |s| {
            (e(2 * s, &x1y2) * e(2 * s + 1, &x2y1), e(2 * s, &x1y0) * e(2 * s + 1, &x0y1))
        }),
        (Component::Y, -1) => product_over_blocks(&q, pre, |s| {
            (e(2 * s, &x0y1) * e(2 * s + 1, &x1y0), e(2 * s + 1, &x1y2) * e(2 * s + 2, &x2y1))
        }),
        (Component::Y, 0) => product_over_blocks(&q, pre, |s| {
            (e(2 * s + 1, &x2y1) * e(2 * s + 2, &x1y2), e(2 * s + 1, &x0y1) * e(2 * s + 2, &x1y0))
        }),
        (Component::Y, _) => {
            let pre = pre.checked_div(&e(1, &x1y2)).map_err(|_| vanished(&q, 0))?;
            product_over_blocks(&q, pre, |s| {
                (e(2 * s + 1, &x1y0) * e(2 * s + 2, &x0y1), e(2 * s + 2, &x2y1) * e(2 * s + 3, &x1y2))
            })
        }
    }
}

/// All sixteen sign patterns, in binary order with `+1` first.
pub fn unit_sign_patterns() -> Vec<[i8; 4]> {
    (0..16u8)
        .map(|bits| [3, 2, 1, 0].map(|k| if bits >> k & 1 == 0 { 1 } else { -1 }))
        .collect()
}
