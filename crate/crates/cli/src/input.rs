//! Parsing of the coefficient and seed flags.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::Args;
use tridiff::{Coeff, CoefficientSpec, InitialState, Kind, Rational};

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
pub struct CoeffSource {
    /// Constant coefficients, e.g. `a=1,b=1/2,c=1,d=-1`.
    #[arg(long = "const", value_name = "a=..,b=..,c=..,d=..", allow_hyphen_values = true)]
    pub constants: Option<String>,

    /// Coefficient file whose lists are periodic.
    #[arg(long, value_name = "FILE")]
    pub periodic: Option<PathBuf>,

    /// Coefficient file whose lists are finite tables.
    #[arg(long, value_name = "FILE")]
    pub table: Option<PathBuf>,
}

impl CoeffSource {
    pub fn load(&self) -> Result<CoefficientSpec> {
        if let Some(text) = &self.constants {
            return parse_constants(text);
        }
        if let Some(path) = &self.periodic {
            return load_file(path, Kind::Periodic);
        }
        if let Some(path) = &self.table {
            return load_file(path, Kind::Tabulated);
        }
        unreachable!("clap requires one coefficient source")
    }
}

pub fn parse_constants(text: &str) -> Result<CoefficientSpec> {
    let mut vals: [Option<Rational>; 4] = Default::default();
    for part in text.split(',') {
        let (name, value) = part
            .split_once('=')
            .with_context(|| format!("expected name=value in --const, got {part:?}"))?;
        let slot = Coeff::ALL
            .iter()
            .position(|c| c.name().to_string() == name.trim())
            .with_context(|| format!("unknown coefficient {name:?}"))?;
        let v: Rational = value.trim().parse()?;
        if vals[slot].replace(v).is_some() {
            bail!("coefficient {name} given twice");
        }
    }
    let [a, b, c, d] = vals;
    let get = |v: Option<Rational>, n: char| v.with_context(|| format!("--const is missing {n}"));
    Ok(CoefficientSpec::constant(get(a, 'a')?, get(b, 'b')?, get(c, 'c')?, get(d, 'd')?)?)
}

/// Reads a coefficient file. Every list in a `--periodic` file must be
/// periodic or constant; a `--table` file must contain at least one table.
fn load_file(path: &Path, want: Kind) -> Result<CoefficientSpec> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let spec: CoefficientSpec = text.parse().with_context(|| format!("parsing {}", path.display()))?;
    match (want, spec.kind()) {
        (Kind::Periodic, Kind::Tabulated) => bail!("{} contains @table lists; use --table", path.display()),
        (Kind::Tabulated, k) if k != Kind::Tabulated => bail!("{} has no @table list; use --periodic", path.display()),
        _ => Ok(spec),
    }
}

pub fn parse_init(text: &str) -> Result<InitialState> {
    let vals = text
        .split(',')
        .map(|t| t.trim().parse::<Rational>())
        .collect::<Result<Vec<_>, _>>()?;
    if vals.len() != 6 {
        bail!("--init needs six values x-2,x-1,x0,y-2,y-1,y0; got {}", vals.len());
    }
    Ok(InitialState::from_slice(&vals)?)
}

/// `p/q` or `t=p/q`.
pub fn parse_t(text: &str) -> Result<Rational> {
    let v = text.strip_prefix("t=").unwrap_or(text);
    Ok(v.parse()?)
}
