//! Run configuration: global flags, an optional JSON config file, and the
//! parsing helpers shared by the commands.

use mihopf::combo::{parse_q, Q};
use mihopf::index::{Mode, Params};
use serde::{Deserialize, Serialize};
use std::path::Path;
use thiserror::Error;

/// Errors that map to the usage exit code.
#[derive(Debug, Error)]
pub enum UsageError {
    #[error("invalid rational {0:?}")]
    Rational(String),
    #[error("invalid weights {0:?}: expected two positive integers such as 1,2")]
    Weights(String),
    #[error("invalid mode {0:?}: expected full, rp, rp2 or gpam")]
    Mode(String),
    #[error("invalid homogeneity bound {0:?}: expected a sum of rationals and multiples of a, such as 3a+2")]
    Hom(String),
    #[error("invalid driver {0:?}: expected cos, const:<c> or poly:<c0>,<c1>,…")]
    Driver(String),
    #[error("{0}")]
    Input(String),
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("invalid config file: {0}")]
    Config(#[from] serde_json::Error),
}

/// Contents of the optional `--config` file; every field is optional.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub alpha: Option<String>,
    pub weights: Option<(u32, u32)>,
    pub mode: Option<String>,
}

/// The resolved global configuration, echoed into every report.
#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub alpha: String,
    pub weights: (u32, u32),
    pub mode: String,
}

impl RunConfig {
    /// Flags take precedence over the config file, which takes precedence over the defaults.
    pub fn resolve(
        alpha: Option<&str>,
        weights: Option<&str>,
        mode: Option<&str>,
        file: Option<&Path>,
    ) -> Result<RunConfig, UsageError> {
        let cf = match file {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|source| UsageError::Io { path: path.display().to_string(), source })?;
                serde_json::from_str(&text)?
            }
            None => ConfigFile::default(),
        };
        let alpha = alpha.map(str::to_string).or(cf.alpha).unwrap_or_else(|| "1/4".into());
        let weights = match weights {
            Some(w) => parse_weights(w)?,
            None => cf.weights.unwrap_or((1, 2)),
        };
        let mode = mode.map(str::to_string).or(cf.mode).unwrap_or_else(|| "full".into());
        let cfg = RunConfig { alpha: mihopf::combo::q_to_string(&parse_rational(&alpha)?), weights, mode };
        cfg.params()?;
        cfg.mode()?;
        Ok(cfg)
    }

    pub fn params(&self) -> Result<Params, UsageError> {
        Params::new(parse_rational(&self.alpha)?, self.weights).map_err(|_| UsageError::Weights(format!("{:?}", self.weights)))
    }

    pub fn mode(&self) -> Result<Mode, UsageError> {
        match self.mode.as_str() {
            "full" => Ok(Mode::Full),
            "rp" => Ok(Mode::Rp),
            "rp2" => Ok(Mode::Rp2),
            "gpam" => Ok(Mode::Gpam),
            other => Err(UsageError::Mode(other.into())),
        }
    }
}

pub fn parse_rational(s: &str) -> Result<Q, UsageError> {
    parse_q(s.trim()).ok_or_else(|| UsageError::Rational(s.into()))
}

pub fn parse_weights(s: &str) -> Result<(u32, u32), UsageError> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    match parts.as_slice() {
        [a, b] => match (a.parse::<u32>(), b.parse::<u32>()) {
            (Ok(a), Ok(b)) if a > 0 && b > 0 => Ok((a, b)),
            _ => Err(UsageError::Weights(s.into())),
        },
        _ => Err(UsageError::Weights(s.into())),
    }
}

/// Parses a homogeneity bound such as `3a+2`, `a`, `5/4` or `2a+1/2`, where `a` stands for α.
pub fn parse_hom(s: &str, alpha: &Q) -> Result<Q, UsageError> {
    let err = || UsageError::Hom(s.into());
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(err());
    }
    let mut total = Q::from_i64(0);
    for term in compact.split('+') {
        let value = match term.strip_suffix('a') {
            Some("") => alpha.clone(),
            Some(c) => parse_q(c).ok_or_else(err)? * alpha,
            None => parse_q(term).ok_or_else(err)?,
        };
        total += &value;
    }
    Ok(total)
}

/// Parses a driver specification.
pub fn parse_driver(s: &str) -> Result<mihopf::dynamics::Driver, UsageError> {
    use mihopf::dynamics::Driver;
    let err = || UsageError::Driver(s.into());
    if s == "cos" {
        return Ok(Driver::Cos);
    }
    if let Some(c) = s.strip_prefix("const:") {
        return c.parse::<f64>().map(Driver::Const).map_err(|_| err());
    }
    if let Some(cs) = s.strip_prefix("poly:") {
        let coeffs: Result<Vec<f64>, _> = cs.split(',').map(|c| c.trim().parse::<f64>()).collect();
        return coeffs.map(Driver::Poly).map_err(|_| err());
    }
    Err(err())
}

#[cfg(test)]
mod tests {
    use super::*;
    use mihopf::combo::{q, qr};

    #[test]
    fn hom_bounds() {
        let a = qr(1, 4);
        assert_eq!(parse_hom("3a+2", &a).unwrap(), qr(11, 4));
        assert_eq!(parse_hom("a", &a).unwrap(), a);
        assert_eq!(parse_hom("1/2 + 2a", &a).unwrap(), q(1));
        assert!(parse_hom("3b", &a).is_err());
        assert!(parse_hom("", &a).is_err());
    }

    #[test]
    fn weights_and_drivers() {
        assert_eq!(parse_weights("1,2").unwrap(), (1, 2));
        assert!(parse_weights("0,2").is_err());
        assert!(parse_weights("1").is_err());
        assert!(parse_driver("cos").is_ok());
        assert!(parse_driver("const:1.5").is_ok());
        assert!(parse_driver("poly:0,1").is_ok());
        assert!(parse_driver("sin").is_err());
    }

    #[test]
    fn flags_override_defaults() {
        let cfg = RunConfig::resolve(Some("1/2"), None, None, None).unwrap();
        assert_eq!(cfg.alpha, "1/2");
        assert_eq!(cfg.weights, (1, 2));
        assert_eq!(cfg.mode, "full");
        assert!(RunConfig::resolve(Some("-1"), None, None, None).is_err());
        assert!(RunConfig::resolve(None, None, Some("tree"), None).is_err());
    }
}
