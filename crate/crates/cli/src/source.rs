//! Parsing of the command-line mini-languages: source specifications,
//! arithmetic-progression grids, and the reconstruction-distribution mode.

use std::path::PathBuf;
use std::str::FromStr;

use focal_rd::{parse_ratio, Pmf, Source};

use crate::CliError;

/// Which reconstruction distribution the bounds and code are built from.
#[derive(Debug, Clone, PartialEq)]
pub enum FxMode {
    /// F equals the (reweighted) source distribution.
    Source,
    /// F is uniform over the alphabet.
    Uniform,
    /// F is read from a PMF file.
    File(PathBuf),
    /// F = source for the bound columns, plus a search for a better F.
    Optimize,
}

impl FromStr for FxMode {
    type Err = CliError;

    fn from_str(text: &str) -> Result<Self, CliError> {
        match text {
            "source" => Ok(FxMode::Source),
            "uniform" => Ok(FxMode::Uniform),
            "optimize" => Ok(FxMode::Optimize),
            other => match other.strip_prefix("file:") {
                Some(path) if !path.is_empty() => Ok(FxMode::File(PathBuf::from(path))),
                _ => Err(CliError::Validation(format!(
                    "unknown fx mode '{other}' (expected source, uniform, optimize, or file:PATH)"
                ))),
            },
        }
    }
}

impl FxMode {
    /// Materializes the reconstruction distribution for a given source. In
    /// `Optimize` mode this is the source itself — the search result is
    /// reported separately.
    pub fn resolve(&self, r: &Pmf) -> Result<Pmf, CliError> {
        match self {
            FxMode::Source | FxMode::Optimize => Ok(r.clone()),
            FxMode::Uniform => Ok(Pmf::uniform(r.len())?),
            FxMode::File(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| {
                    CliError::Validation(format!("cannot read fx file {}: {e}", path.display()))
                })?;
                let f = Pmf::parse_text(&text, true)?;
                if f.len() != r.len() {
                    return Err(CliError::Validation(format!(
                        "fx file has {} entries but the source alphabet has {}",
                        f.len(),
                        r.len()
                    )));
                }
                Ok(f)
            }
        }
    }
}

/// An arithmetic progression `start:stop:count`; a bare number is a
/// one-point grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl GridSpec {
    pub fn single(value: f64) -> Self {
        Self {
            start: value,
            stop: value,
            count: 1,
        }
    }

    /// The grid points, evenly spaced with both endpoints included.
    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        (0..self.count)
            .map(|j| {
                self.start + (self.stop - self.start) * j as f64 / (self.count - 1) as f64
            })
            .collect()
    }
}

impl FromStr for GridSpec {
    type Err = CliError;

    fn from_str(text: &str) -> Result<Self, CliError> {
        let bad = |()| CliError::Validation(format!("invalid grid '{text}' (expected start:stop:count or a single number)"));
        if !text.contains(':') {
            let value: f64 = text.parse().map_err(|_| bad(()))?;
            if !value.is_finite() {
                return Err(bad(()));
            }
            return Ok(GridSpec::single(value));
        }
        let parts: Vec<&str> = text.split(':').collect();
        if parts.len() != 3 {
            return Err(bad(()));
        }
        let start: f64 = parts[0].parse().map_err(|_| bad(()))?;
        let stop: f64 = parts[1].parse().map_err(|_| bad(()))?;
        let count: usize = parts[2].parse().map_err(|_| bad(()))?;
        if !start.is_finite() || !stop.is_finite() || count == 0 {
            return Err(bad(()));
        }
        Ok(GridSpec { start, stop, count })
    }
}

/// Parses a comma-separated list of positive integers.
pub fn parse_int_list(text: &str) -> Result<Vec<usize>, CliError> {
    text.split(',')
        .map(|token| {
            let token = token.trim();
            let value: usize = token.parse().map_err(|_| {
                CliError::Validation(format!("invalid integer '{token}' in list '{text}'"))
            })?;
            if value == 0 {
                return Err(CliError::Validation(format!(
                    "zero is not a valid entry in list '{text}'"
                )));
            }
            Ok(value)
        })
        .collect()
}

fn parse_base_source(spec: &str) -> Result<Pmf, CliError> {
    let (kind, rest) = spec.split_once(':').unwrap_or((spec, ""));
    match kind {
        "uniform" => {
            let k: usize = rest.parse().map_err(|_| {
                CliError::Validation(format!("uniform source needs an integer size, got '{rest}'"))
            })?;
            Ok(Pmf::uniform(k)?)
        }
        "binomial" => {
            let (trials, p) = rest.split_once(':').ok_or_else(|| {
                CliError::Validation(format!(
                    "binomial source needs trials and probability, got '{rest}'"
                ))
            })?;
            let trials: usize = trials.parse().map_err(|_| {
                CliError::Validation(format!("invalid trial count '{trials}'"))
            })?;
            let p = parse_ratio(p)?;
            Ok(Pmf::binomial(trials, p)?)
        }
        "bernoulli" => {
            let p = parse_ratio(rest)?;
            Ok(Pmf::from_values(&[1.0 - p, p], false)?)
        }
        "pmf" => {
            let values: Vec<f64> = rest
                .split(',')
                .map(|token| parse_ratio(token.trim()))
                .collect::<Result<_, _>>()?;
            Ok(Pmf::from_values(&values, true)?)
        }
        "pmf-file" => {
            let text = std::fs::read_to_string(rest).map_err(|e| {
                CliError::Validation(format!("cannot read pmf file {rest}: {e}"))
            })?;
            Ok(Pmf::parse_text(&text, true)?)
        }
        other => Err(CliError::Validation(format!(
            "unknown source kind '{other}' (expected uniform, binomial, bernoulli, pmf, or pmf-file)"
        ))),
    }
}

/// Parses a source specification: `uniform:k`, `binomial:k:p`,
/// `bernoulli:p`, `pmf:v1,v2,…`, or `pmf-file:path`, with an optional
/// `:q=<spec>` suffix attaching a per-symbol weight distribution that is
/// absorbed into the source.
pub fn parse_source(spec: &str) -> Result<Source, CliError> {
    match spec.split_once(":q=") {
        None => Ok(Source::unweighted(parse_base_source(spec)?)),
        Some((base, weight)) => {
            if weight.contains(":q=") {
                return Err(CliError::Validation(
                    "a weight distribution cannot itself carry a :q= suffix".to_string(),
                ));
            }
            let px = parse_base_source(base)?;
            let q = parse_base_source(weight)?;
            Ok(Source::weighted(px, q)?)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_every_source_kind() {
        assert_eq!(parse_source("uniform:4").unwrap().px().len(), 4);
        let b = parse_source("bernoulli:0.2").unwrap();
        assert!((b.px().get(1) - 0.2).abs() < 1e-15);
        let p = parse_source("pmf:2/3,1/4,1/12").unwrap();
        assert!((p.px().get(0) - 2.0 / 3.0).abs() < 1e-12);
        let binom = parse_source("binomial:100:0.1").unwrap();
        assert_eq!(binom.px().len(), 101);
    }

    #[test]
    fn weight_suffix_reweights_the_source() {
        let s = parse_source("uniform:4:q=pmf:1/2,1/4,1/8,1/8").unwrap();
        // Uniform reweighted by q is q itself.
        assert!((s.reweighted().get(0) - 0.5).abs() < 1e-12);
        assert!(s.weight().is_some());
        assert!(parse_source("uniform:2:q=uniform:2:q=uniform:2").is_err());
    }

    #[test]
    fn rejects_malformed_specs() {
        assert!(parse_source("gaussian:3").is_err());
        assert!(parse_source("uniform:zero").is_err());
        assert!(parse_source("pmf:a,b").is_err());
        assert!(parse_source("binomial:100").is_err());
        assert!(parse_source("pmf-file:/definitely/not/here.txt").is_err());
    }

    #[test]
    fn grid_specs_round_trip() {
        let g: GridSpec = "0:10:40".parse().unwrap();
        let values = g.values();
        assert_eq!(values.len(), 40);
        assert_eq!(values[0], 0.0);
        assert_eq!(values[39], 10.0);
        assert!((values[4] - 10.0 * 4.0 / 39.0).abs() < 1e-15);

        let single: GridSpec = "2.5".parse().unwrap();
        assert_eq!(single.values(), vec![2.5]);

        assert!("0:10:0".parse::<GridSpec>().is_err());
        assert!("0:10".parse::<GridSpec>().is_err());
        assert!("a:b:c".parse::<GridSpec>().is_err());
    }

    #[test]
    fn fx_modes_parse() {
        assert_eq!(FxMode::from_str("source").unwrap(), FxMode::Source);
        assert_eq!(FxMode::from_str("optimize").unwrap(), FxMode::Optimize);
        assert!(matches!(FxMode::from_str("file:/tmp/f.txt").unwrap(), FxMode::File(_)));
        assert!(FxMode::from_str("file:").is_err());
        assert!(FxMode::from_str("random").is_err());
    }

    #[test]
    fn int_lists_parse() {
        assert_eq!(parse_int_list("25,50,100").unwrap(), vec![25, 50, 100]);
        assert!(parse_int_list("25,0").is_err());
        assert!(parse_int_list("25,x").is_err());
    }
}
