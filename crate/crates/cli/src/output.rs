use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use frw_core::model::{derived_state, z_of_a};
use frw_core::numeric::Sample;
use frw_core::CosmoParams;
use serde::Serialize;

use crate::error::CliError;

pub const HEADER: &str = "t,a,adot,hubble,rho,p,friedmann_residual";

/// One output row. Density and pressure are `NaN` off the physical domain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Row {
    pub t: f64,
    pub a: f64,
    pub adot: f64,
    pub hubble: f64,
    pub rho: f64,
    pub p: f64,
    pub friedmann_residual: f64,
}

impl Row {
    pub fn new(params: &CosmoParams, s: &Sample<f64>) -> Self {
        let z = z_of_a(params, s.a);
        let (rho, p) = derived_state(params, s.a, s.adot)
            .map(|d| (d.energy_density, d.pressure))
            .unwrap_or((f64::NAN, f64::NAN));
        Row {
            t: s.t,
            a: s.a,
            adot: s.adot,
            hubble: s.adot / s.a,
            rho,
            p,
            friedmann_residual: (s.adot * s.adot - z).abs() / z.abs().max(1.0),
        }
    }

    pub fn values(&self) -> [f64; 7] {
        [self.t, self.a, self.adot, self.hubble, self.rho, self.p, self.friedmann_residual]
    }
}

/// 17 significant digits, `.` separator, independent of locale.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn csv_fields(values: &[f64]) -> String {
    values.iter().map(|&v| num(v)).collect::<Vec<_>>().join(",")
}

/// A row with its distance to the other methods at the same time.
#[derive(Debug, Clone, Serialize)]
pub struct DevRow {
    #[serde(flatten)]
    pub row: Row,
    pub deviation: BTreeMap<&'static str, f64>,
}

pub fn rows_csv(rows: &[Row]) -> String {
    let mut s = String::with_capacity(rows.len() * 180);
    s.push_str(HEADER);
    s.push('\n');
    for r in rows {
        s.push_str(&csv_fields(&r.values()));
        s.push('\n');
    }
    s
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::usage(format!("serialisation: {e}")))?;
    s.push('\n');
    Ok(s)
}

/// Writes to `out`, or stdout when `None`.
pub fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::io(path, e)),
        None => {
            let mut lock = std::io::stdout().lock();
            lock.write_all(text.as_bytes())
                .and_then(|_| lock.flush())
                .map_err(|e| CliError::io("<stdout>", e))
        }
    }
}
