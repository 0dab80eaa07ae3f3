use std::path::{Path, PathBuf};

use frw_core::model::reference_constant;
use frw_core::CosmoParams;
use serde::Deserialize;

use crate::args::{Format, MethodArg, ParamFlags, TableName};
use crate::error::CliError;

/// Keys accepted in a config file; same names as the long flags with `_`.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub gamma_bar: Option<f64>,
    pub kappa: Option<i64>,
    pub lambda: Option<f64>,
    pub c: Option<f64>,
    pub a0: Option<f64>,
    pub t0: Option<f64>,
    pub t_start: Option<f64>,
    pub t_end: Option<f64>,
    pub n: Option<usize>,
    pub method: Option<MethodArg>,
    pub branch: Option<String>,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
    pub jobs: Option<usize>,
    pub subset: Option<Vec<String>>,
    pub tol: Option<f64>,
    pub seed: Option<u64>,
    pub table: Option<TableName>,
}

impl RunConfig {
    /// Reads `path` as JSON when it ends in `.json`, TOML otherwise.
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let bad = |e: String| CliError::usage(format!("{}: {e}", path.display()));
        if path.extension().is_some_and(|x| x == "json") {
            serde_json::from_str(&text).map_err(|e| bad(e.to_string()))
        } else {
            toml::from_str(&text).map_err(|e| bad(e.to_string()))
        }
    }

    pub fn load_opt(path: Option<&PathBuf>) -> Result<Self, CliError> {
        path.map_or_else(|| Ok(Self::default()), |p| Self::load(p))
    }
}

/// Flags win over the file; `γ̄` and `κ` are required, the rest default.
pub fn build_params(flags: &ParamFlags, file: &RunConfig) -> Result<CosmoParams, CliError> {
    let gamma_bar = flags
        .gamma_bar
        .or(file.gamma_bar)
        .ok_or_else(|| CliError::usage("missing --gamma-bar"))?;
    let kappa = flags
        .kappa
        .or(file.kappa)
        .ok_or_else(|| CliError::usage("missing --kappa"))?;
    let a0 = flags.a0.or(file.a0).unwrap_or(1.0);
    let t0 = flags.t0.or(file.t0).unwrap_or(0.0);
    let lambda = flags.lambda.or(file.lambda).unwrap_or(0.0);
    let c = flags
        .c
        .or(file.c)
        .unwrap_or_else(|| reference_constant(gamma_bar, a0));
    Ok(CosmoParams::new(gamma_bar, kappa, lambda, c, a0, t0)?)
}

/// `FRW_DEFAULT_TOL`, if set, must be a positive finite real.
pub fn env_tolerance() -> Result<Option<f64>, CliError> {
    match std::env::var("FRW_DEFAULT_TOL") {
        Err(std::env::VarError::NotPresent) => Ok(None),
        Err(e) => Err(CliError::usage(format!("FRW_DEFAULT_TOL: {e}"))),
        Ok(s) => match s.trim().parse::<f64>() {
            Ok(v) if v.is_finite() && v > 0.0 => Ok(Some(v)),
            _ => Err(CliError::usage(format!(
                "FRW_DEFAULT_TOL must be a positive real, got '{s}'"
            ))),
        },
    }
}
