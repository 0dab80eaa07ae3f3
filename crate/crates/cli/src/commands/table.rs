use std::path::{Path, PathBuf};

use frw_core::closedform::ClosedFormError;
use frw_core::model::{classify, reference_constant, Family, RawParams};
use frw_core::numeric::Sample;
use frw_core::validate::physical_pieces;
use frw_core::CosmoParams;
use rayon::prelude::*;
use serde::Serialize;

use super::solve::branch_label;
use super::thread_pool;
use crate::args::{Format, TableArgs, TableName};
use crate::config::RunConfig;
use crate::error::CliError;
use crate::output::{self, Row};
use crate::plot;

const DEFAULT_N: usize = 201;
const DEFAULT_DIR: &str = "frw-tables";

/// One sampled solution: a row of one of the solution tables.
#[derive(Debug, Clone, PartialEq)]
pub struct TableRow {
    /// Files of the same group share a plot.
    pub group: String,
    pub label: &'static str,
    pub gamma_bar: f64,
    pub kappa: i64,
    pub lambda: f64,
    /// `None`: the `Λ = 0` normalisation `a₀^(2γ̄)`.
    pub c: Option<f64>,
}

impl TableRow {
    pub fn stem(&self) -> String {
        format!("{}_{}", self.group, self.label)
    }

    fn params(&self) -> Result<CosmoParams, CliError> {
        let c = self.c.unwrap_or_else(|| reference_constant(self.gamma_bar, 1.0));
        Ok(CosmoParams::new(self.gamma_bar, self.kappa, self.lambda, c, 1.0, 0.0)?)
    }
}

fn curvature_name(k: i64) -> &'static str {
    match k {
        1 => "closed",
        -1 => "open",
        _ => "flat",
    }
}

fn row(group: String, label: &'static str, gamma_bar: f64, kappa: i64, lambda: f64, c: Option<f64>) -> TableRow {
    TableRow { group, label, gamma_bar, kappa, lambda, c }
}

/// Canonical parameter choices for each table.
pub fn table_rows(name: TableName, kappa: Option<i64>) -> Result<Vec<TableRow>, CliError> {
    let zero_lambda = |k: i64, table: &str| {
        let g = table.to_string();
        vec![
            row(g.clone(), "radiation", 1.0, k, 0.0, None),
            row(g.clone(), "dust", 0.5, k, 0.0, None),
            row(g, "vacuum", -1.0, k, 0.0, None),
        ]
    };
    Ok(match name {
        TableName::RadiationCurved => {
            let ks = match kappa {
                None => vec![1, -1],
                Some(k @ (1 | -1)) => vec![k],
                Some(k) => {
                    return Err(CliError::usage(format!(
                        "--kappa for radiation-curved must be 1 or -1, got {k}"
                    )))
                }
            };
            ks.into_iter()
                .flat_map(|k| {
                    let g = format!("radiation-curved_{}", curvature_name(k));
                    [
                        (1.5, "large-sinh"),
                        (0.75, "critical"),
                        (0.3, "small-cosh"),
                        (-0.6, "negative-trig"),
                    ]
                    .into_iter()
                    .map(move |(l, label)| row(g.clone(), label, 1.0, k, l, Some(1.0)))
                })
                .collect()
        }
        TableName::FlatRadiation => {
            let g = "flat-radiation".to_string();
            vec![
                row(g.clone(), "lambda-positive", 1.0, 0, 1.2, Some(1.0)),
                row(g, "lambda-negative", 1.0, 0, -1.2, Some(1.0)),
            ]
        }
        TableName::ZeroLambdaFlat => {
            let g = "zero-lambda-flat".to_string();
            vec![
                row(g.clone(), "radiation", 1.0, 0, 0.0, None),
                row(g.clone(), "dust", 0.5, 0, 0.0, None),
                row(g, "de-sitter", -1.0, 0, 0.0, None),
            ]
        }
        TableName::ZeroLambdaClosed => zero_lambda(1, "zero-lambda-closed"),
        TableName::ZeroLambdaOpen => zero_lambda(-1, "zero-lambda-open"),
        TableName::All => {
            let mut v = table_rows(TableName::RadiationCurved, kappa)?;
            for t in [
                TableName::FlatRadiation,
                TableName::ZeroLambdaFlat,
                TableName::ZeroLambdaClosed,
                TableName::ZeroLambdaOpen,
            ] {
                v.extend(table_rows(t, None)?);
            }
            v
        }
    })
}

#[derive(Serialize)]
struct TableMeta<'a> {
    tool: &'static str,
    version: &'static str,
    file: &'a str,
    params: RawParams<f64>,
    family: Family,
    branch: Option<String>,
    t_start: f64,
    t_end: f64,
}

#[derive(Serialize)]
struct TableFile<'a> {
    metadata: TableMeta<'a>,
    records: &'a [Row],
}

/// Samples one row on its expanding piece (first piece if none expands).
pub fn render(r: &TableRow, n: usize, format: Format) -> Result<String, CliError> {
    let params = r.params()?;
    let family = classify(&params).family;
    let pieces = physical_pieces(&params);
    let expanding = |p: &frw_core::validate::PhysicalPiece| {
        let mid = 0.5 * (p.window.t_min + p.window.t_max);
        p.form.state(mid).is_ok_and(|s| s.adot > 0.0)
    };
    let piece = pieces
        .iter()
        .find(|p| expanding(p))
        .or(pieces.first())
        .ok_or(ClosedFormError::NoValidBranch)?;
    let mut rows = Vec::with_capacity(n);
    for t in piece.window.grid(n) {
        let st = piece.form.state(t)?;
        rows.push(Row::new(&params, &Sample { t, a: st.a, adot: st.adot }));
    }
    Ok(match format {
        Format::Csv => output::rows_csv(&rows),
        Format::Json => {
            let stem = r.stem();
            output::to_json(&TableFile {
                metadata: TableMeta {
                    tool: "frw",
                    version: env!("CARGO_PKG_VERSION"),
                    file: &stem,
                    params: params.raw(),
                    family,
                    branch: family
                        .is_curved_radiation()
                        .then(|| branch_label(piece.form.branch())),
                    t_start: piece.window.t_min,
                    t_end: piece.window.t_max,
                },
                records: &rows,
            })?
        }
    })
}

pub fn run(args: &TableArgs) -> Result<(), CliError> {
    let file = RunConfig::load_opt(args.config.as_ref())?;
    let name = args.table.or(file.table).unwrap_or(TableName::All);
    let n = args.n.or(file.n).unwrap_or(DEFAULT_N);
    if n < 2 {
        return Err(CliError::usage("--n must be at least 2"));
    }
    let format = args.output.format.or(file.format).unwrap_or_default();
    let dir: PathBuf = args
        .output
        .out
        .clone()
        .or(file.out)
        .unwrap_or_else(|| PathBuf::from(DEFAULT_DIR));
    let rows = table_rows(name, args.kappa.or(file.kappa))?;
    let pool = thread_pool(args.jobs.or(file.jobs))?;
    // rendered in parallel, written in input order
    let texts: Vec<Result<String, CliError>> =
        pool.install(|| rows.par_iter().map(|r| render(r, n, format)).collect());
    std::fs::create_dir_all(&dir).map_err(|e| CliError::io(&dir, e))?;
    let ext = match format {
        Format::Csv => "csv",
        Format::Json => "json",
    };
    let mut written = Vec::new();
    for (r, text) in rows.iter().zip(texts) {
        let name = format!("{}.{ext}", r.stem());
        write(&dir.join(&name), &text?)?;
        written.push((r, name));
    }
    if format == Format::Csv {
        let script = plot::gnuplot_script(&written);
        write(&dir.join(plot::SCRIPT_NAME), &script)?;
        println!("{}", dir.join(plot::SCRIPT_NAME).display());
    } else {
        eprintln!("note: no plot script for JSON output");
    }
    for (_, name) in &written {
        println!("{}", dir.join(name).display());
    }
    Ok(())
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::io(path, e))
}
