//! Coefficient sequences `a_n, b_n, c_n, d_n`.
//!
//! Each of the four sequences is constant, periodic, or a finite table. The
//! step that produces `(x_{n+1}, y_{n+1})` reads the coefficients at index
//! `n`, so the first computed pair uses `a_0, b_0, c_0, d_0`.
//!
//! `a_n` and `c_n` must be nonzero; `b_n` and `d_n` may vanish.
//!
//! Coefficient files are UTF-8, one line per sequence:
//!
//! ```text
//! # comment
//! a: 1/2
//! b: 1,2,3,4 @period
//! c: 1,2,3 @table
//! d: -1
//! ```

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::exact::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Coeff {
    A,
    B,
    C,
    D,
}

impl Coeff {
    pub const ALL: [Coeff; 4] = [Coeff::A, Coeff::B, Coeff::C, Coeff::D];

    fn slot(self) -> usize {
        self as usize
    }

    pub fn name(self) -> char {
        ['a', 'b', 'c', 'd'][self.slot()]
    }
}

/// One coefficient sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Sequence {
    Constant(Rational),
    /// Value at `n` is `values[n mod len]`.
    Periodic(Vec<Rational>),
    /// Value at `n` is `values[n]`; indices past the end are an error.
    Tabulated(Vec<Rational>),
}

impl Sequence {
    pub fn at(&self, n: usize) -> Result<&Rational> {
        match self {
            Sequence::Constant(v) => Ok(v),
            Sequence::Periodic(vs) => Ok(&vs[n % vs.len()]),
            Sequence::Tabulated(vs) => vs.get(n).ok_or(Error::IndexOutOfRange {
                index: n,
                len: vs.len(),
            }),
        }
    }

    fn values(&self) -> &[Rational] {
        match self {
            Sequence::Constant(v) => std::slice::from_ref(v),
            Sequence::Periodic(vs) | Sequence::Tabulated(vs) => vs,
        }
    }

    fn period(&self) -> Option<usize> {
        match self {
            Sequence::Constant(_) => Some(1),
            Sequence::Periodic(vs) => Some(vs.len()),
            Sequence::Tabulated(_) => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Constant,
    Periodic,
    Tabulated,
}

/// The four coefficient sequences of the system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoefficientSpec {
    seqs: [Sequence; 4],
}

impl CoefficientSpec {
    /// Builds a spec from four sequences, validating them.
    pub fn from_sequences(a: Sequence, b: Sequence, c: Sequence, d: Sequence) -> Result<Self> {
        let seqs = [a, b, c, d];
        for (which, seq) in Coeff::ALL.iter().zip(&seqs) {
            if seq.values().is_empty() {
                return Err(Error::InvalidCoefficients(format!(
                    "sequence {} is empty",
                    which.name()
                )));
            }
            if matches!(which, Coeff::A | Coeff::C) {
                if let Some(i) = seq.values().iter().position(Rational::is_zero) {
                    return Err(Error::InvalidCoefficients(format!(
                        "{} must be nonzero (entry {i} is 0)",
                        which.name()
                    )));
                }
            }
        }
        Ok(CoefficientSpec { seqs })
    }

    pub fn constant(a: Rational, b: Rational, c: Rational, d: Rational) -> Result<Self> {
        Self::from_sequences(
            Sequence::Constant(a),
            Sequence::Constant(b),
            Sequence::Constant(c),
            Sequence::Constant(d),
        )
    }

    /// Periodic spec; all four lists share the same period.
    pub fn periodic(
        a: Vec<Rational>,
        b: Vec<Rational>,
        c: Vec<Rational>,
        d: Vec<Rational>,
    ) -> Result<Self> {
        if a.len() != b.len() || a.len() != c.len() || a.len() != d.len() {
            return Err(Error::InvalidCoefficients(
                "periodic lists must have equal length".into(),
            ));
        }
        Self::from_sequences(
            Sequence::Periodic(a),
            Sequence::Periodic(b),
            Sequence::Periodic(c),
            Sequence::Periodic(d),
        )
    }

    /// Finite table of length `L`; indices `>= L` are rejected.
    pub fn tabulated(
        a: Vec<Rational>,
        b: Vec<Rational>,
        c: Vec<Rational>,
        d: Vec<Rational>,
    ) -> Result<Self> {
        if a.len() != b.len() || a.len() != c.len() || a.len() != d.len() {
            return Err(Error::InvalidCoefficients(
                "tabulated lists must have equal length".into(),
            ));
        }
        Self::from_sequences(
            Sequence::Tabulated(a),
            Sequence::Tabulated(b),
            Sequence::Tabulated(c),
            Sequence::Tabulated(d),
        )
    }

    pub fn coeff_at(&self, which: Coeff, n: usize) -> Result<&Rational> {
        self.seqs[which.slot()].at(n)
    }

    pub fn a(&self, n: usize) -> Result<&Rational> {
        self.coeff_at(Coeff::A, n)
    }

    pub fn b(&self, n: usize) -> Result<&Rational> {
        self.coeff_at(Coeff::B, n)
    }

    pub fn c(&self, n: usize) -> Result<&Rational> {
        self.coeff_at(Coeff::C, n)
    }

    pub fn d(&self, n: usize) -> Result<&Rational> {
        self.coeff_at(Coeff::D, n)
    }

    pub fn sequence(&self, which: Coeff) -> &Sequence {
        &self.seqs[which.slot()]
    }

    pub fn kind(&self) -> Kind {
        if self.seqs.iter().all(|s| matches!(s, Sequence::Constant(_))) {
            Kind::Constant
        } else if self.period().is_some() {
            Kind::Periodic
        } else {
            Kind::Tabulated
        }
    }

    /// Joint period (lcm of the four), or `None` if any sequence is a table.
    pub fn period(&self) -> Option<usize> {
        self.seqs
            .iter()
            .try_fold(1usize, |acc, s| s.period().map(|p| acc.lcm(&p)))
    }

    /// The four values when every sequence is constant.
    pub fn as_constant(&self) -> Option<[&Rational; 4]> {
        match &self.seqs {
            [Sequence::Constant(a), Sequence::Constant(b), Sequence::Constant(c), Sequence::Constant(d)] => {
                Some([a, b, c, d])
            }
            _ => None,
        }
    }

    /// Number of leading indices that can be served, `None` when unbounded.
    pub fn available(&self) -> Option<usize> {
        self.seqs
            .iter()
            .filter_map(|s| match s {
                Sequence::Tabulated(vs) => Some(vs.len()),
                _ => None,
            })
            .min()
    }
}

fn parse_list(s: &str) -> Result<Vec<Rational>> {
    s.split(',').map(|t| t.trim().parse()).collect()
}

impl FromStr for CoefficientSpec {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut seqs: [Option<Sequence>; 4] = Default::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |msg: &str| Error::InvalidCoefficients(format!("line {}: {msg}", lineno + 1));
            let (name, rest) = line.split_once(':').ok_or_else(|| bad("expected `<name>: <values>`"))?;
            let which = match name.trim() {
                "a" => Coeff::A,
                "b" => Coeff::B,
                "c" => Coeff::C,
                "d" => Coeff::D,
                other => return Err(bad(&format!("unknown sequence {other:?}"))),
            };
            let rest = rest.trim();
            let seq = if let Some(vals) = rest.strip_suffix("@period") {
                Sequence::Periodic(parse_list(vals.trim())?)
            } else if let Some(vals) = rest.strip_suffix("@table") {
                Sequence::Tabulated(parse_list(vals.trim())?)
            } else if rest.contains(',') {
                return Err(bad("a list needs `@period` or `@table`"));
            } else {
                Sequence::Constant(rest.parse()?)
            };
            if seqs[which.slot()].replace(seq).is_some() {
                return Err(bad(&format!("sequence {} given twice", which.name())));
            }
        }
        let [a, b, c, d] = seqs;
        let missing = |w: Coeff| Error::InvalidCoefficients(format!("sequence {} missing", w.name()));
        Self::from_sequences(
            a.ok_or_else(|| missing(Coeff::A))?,
            b.ok_or_else(|| missing(Coeff::B))?,
            c.ok_or_else(|| missing(Coeff::C))?,
            d.ok_or_else(|| missing(Coeff::D))?,
        )
    }
}

impl fmt::Display for CoefficientSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for which in Coeff::ALL {
            let join = |vs: &[Rational]| {
                vs.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
            };
            match self.sequence(which) {
                Sequence::Constant(v) => writeln!(f, "{}: {v}", which.name())?,
                Sequence::Periodic(vs) => writeln!(f, "{}: {} @period", which.name(), join(vs))?,
                Sequence::Tabulated(vs) => writeln!(f, "{}: {} @table", which.name(), join(vs))?,
            }
        }
        Ok(())
    }
}
