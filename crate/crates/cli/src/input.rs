//! Arrangement and multiplicity arguments.

use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use coxma::arrangement::{
    arrangement_from_json, build_coxeter_with, Arrangement, CoxeterType, Multiplicity, Realization,
};
use serde_json::Value;

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum RealizationArg {
    Standard,
    SimpleRoots,
}

impl From<RealizationArg> for Realization {
    fn from(r: RealizationArg) -> Self {
        match r {
            RealizationArg::Standard => Realization::Standard,
            RealizationArg::SimpleRoots => Realization::SimpleRoots,
        }
    }
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
pub struct ArrangementSource {
    /// Coxeter type, e.g. A3, B2, D4.
    #[arg(long = "type", value_name = "TYPE")]
    pub coxeter_type: Option<String>,
    /// Arrangement JSON file.
    #[arg(long, value_name = "FILE")]
    pub arr: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ArrangementInput {
    #[command(flatten)]
    pub source: ArrangementSource,
    /// Coordinates for type A.
    #[arg(long, value_enum, default_value = "standard")]
    pub realization: RealizationArg,
}

pub struct Loaded {
    pub arrangement: Arrangement,
    /// Multiplicity carried by an arrangement file.
    pub multiplicity: Option<Multiplicity>,
}

impl ArrangementInput {
    pub fn load(&self) -> Result<Loaded> {
        if let Some(t) = &self.source.coxeter_type {
            let t: CoxeterType = t.parse()?;
            let arrangement = build_coxeter_with(t.family, t.rank, self.realization.into())?;
            return Ok(Loaded { arrangement, multiplicity: None });
        }
        let path = self.source.arr.as_ref().expect("clap enforces one source");
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let (arrangement, multiplicity) = arrangement_from_json(&text)?;
        Ok(Loaded { arrangement, multiplicity })
    }
}

fn values_from_json(v: &Value) -> Result<Vec<u32>> {
    let entries = match v {
        Value::Array(a) => a,
        Value::Object(o) => match (o.get("multiplicity"), o.get("hyperplanes")) {
            (Some(m), _) => return values_from_json(m),
            (None, Some(Value::Array(hs))) => {
                return hs
                    .iter()
                    .map(|h| match h.get("multiplicity") {
                        None => Ok(1),
                        Some(m) => json_u32(m),
                    })
                    .collect()
            }
            _ => bail!("multiplicity JSON needs an array, a `multiplicity` key or `hyperplanes`"),
        },
        _ => bail!("multiplicity JSON must be an array of nonnegative integers"),
    };
    entries.iter().map(json_u32).collect()
}

fn json_u32(v: &Value) -> Result<u32> {
    v.as_u64()
        .and_then(|x| u32::try_from(x).ok())
        .with_context(|| format!("`{v}` is not a nonnegative multiplicity"))
}

/// `const:K`, an inline JSON array, or a file holding either a JSON array
/// or an arrangement with multiplicities.
pub fn parse_multiplicity(spec: &str, arr: &Arrangement) -> Result<Multiplicity> {
    let spec = spec.trim();
    let m = if let Some(k) = spec.strip_prefix("const:") {
        let k: u32 = k.trim().parse().with_context(|| format!("bad constant in `{spec}`"))?;
        Multiplicity::constant(arr.len(), k)
    } else if spec.starts_with('[') || spec.starts_with('{') {
        Multiplicity::new(values_from_json(&serde_json::from_str(spec).context("inline multiplicity")?)?)
    } else {
        let text = std::fs::read_to_string(spec).with_context(|| format!("reading multiplicity file {spec}"))?;
        Multiplicity::new(values_from_json(&serde_json::from_str(&text).context("multiplicity file")?)?)
    };
    m.check_aligned(arr)?;
    Ok(m)
}

/// `--mult` if given, else the file's multiplicity, else `fallback`.
pub fn multiplicity_or(loaded: &Loaded, spec: Option<&str>, fallback: Option<u32>) -> Result<Multiplicity> {
    match (spec, &loaded.multiplicity, fallback) {
        (Some(s), _, _) => parse_multiplicity(s, &loaded.arrangement),
        (None, Some(m), _) => Ok(m.clone()),
        (None, None, Some(k)) => Ok(Multiplicity::constant(loaded.arrangement.len(), k)),
        (None, None, None) => bail!(coxma::Error::Input("--mult is required".into())),
    }
}
