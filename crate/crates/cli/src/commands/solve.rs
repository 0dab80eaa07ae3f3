use std::collections::BTreeMap;

use frw_core::closedform::{resolve_branch, ClosedFormError, Sign};
use frw_core::model::{classify, rhs_second_order, z_of_a, Family, RawParams};
use frw_core::numeric::{integrate_ode_from, quadrature_trajectory, Method, NumericError, Sample};
use frw_core::specfun::SpecFunError;
use frw_core::validate::{hypergeometric_sample, physical_pieces, PairDeviation};
use frw_core::{BranchChoice, ClosedForm, CosmoParams, OdeConfig, QuadConfig, TimeWindow};
use rayon::prelude::*;
use serde::Serialize;

use super::{thread_pool, Context};
use crate::args::{Format, MethodArg, SolveArgs};
use crate::config::{build_params, RunConfig};
use crate::error::CliError;
use crate::output::{self, csv_fields, DevRow, Row, HEADER};

const DEFAULT_N: usize = 101;

pub fn run(args: &SolveArgs, ctx: &Context) -> Result<(), CliError> {
    let file = RunConfig::load_opt(args.config.as_ref())?;
    let params = build_params(&args.params, &file)?;
    let regime = classify(&params);
    let family = regime.family;
    let method = args.method.or(file.method).unwrap_or(default_method(family));
    let methods = methods_for(method, family)?;
    let branch = args
        .branch
        .as_deref()
        .or(file.branch.as_deref())
        .map(parse_branch)
        .transpose()?;
    let window = grid_window(args, &file, &params)?;
    let n = args.grid.n.or(file.n).unwrap_or(DEFAULT_N);
    if n < 2 {
        return Err(CliError::usage("--n must be at least 2"));
    }
    let grid = window.grid(n);
    let form = if family.has_closed_form() {
        Some(select_form(&params, family, &window, branch)?)
    } else {
        None
    };

    let mut notes = Vec::new();
    let mut blocks: Vec<(Method, Vec<Sample<f64>>)> = Vec::new();
    // analytic methods first; they provide the anchor for the numerical ones
    for &m in &methods {
        let samples = match m {
            Method::ClosedForm => analytic(&grid, |t| closed_sample(form.as_ref(), t))?,
            Method::Hypergeometric => analytic(&grid, |t| hyp_sample(&params, t))?,
            _ => continue,
        };
        if samples.len() < grid.len() {
            notes.push(format!(
                "{m}: {} of {} grid points lie outside the solution's domain and were omitted",
                grid.len() - samples.len(),
                grid.len()
            ));
        }
        blocks.push((m, samples));
    }
    let numeric: Vec<Method> = methods
        .iter()
        .copied()
        .filter(|m| matches!(m, Method::Ode | Method::Quadrature))
        .collect();
    if !numeric.is_empty() {
        let (anchor, num_grid) = match blocks.first() {
            Some((_, s)) if methods.len() > 1 => {
                let first = *s.first().ok_or_else(no_points)?;
                (first, s.iter().map(|x| x.t).collect::<Vec<_>>())
            }
            _ => (anchor(&params, family, form.as_ref(), &grid)?, grid.clone()),
        };
        let pool = thread_pool(args.jobs.or(file.jobs))?;
        let runs: Vec<Result<Vec<Sample<f64>>, NumericError>> = pool.install(|| {
            numeric
                .par_iter()
                .map(|&m| numeric_samples(&params, m, anchor, &num_grid))
                .collect()
        });
        for (m, r) in numeric.into_iter().zip(runs) {
            blocks.push((m, r?));
        }
        blocks.sort_by_key(|(m, _)| methods.iter().position(|x| x == m));
    }

    let row_blocks: Vec<(Method, Vec<Row>)> = blocks
        .iter()
        .map(|(m, s)| (*m, s.iter().map(|x| Row::new(&params, x)).collect()))
        .collect();
    let max_residual = row_blocks
        .iter()
        .flat_map(|(_, rows)| rows.iter().map(|r| r.friedmann_residual))
        .fold(0.0, f64::max);
    let deviations = pair_deviations(&row_blocks);
    let max_dev = deviations.iter().map(|d| d.value).fold(0.0, f64::max);

    let meta = Metadata {
        tool: "frw",
        version: env!("CARGO_PKG_VERSION"),
        params: params.raw(),
        family,
        discriminant: regime.discriminant,
        lambda_scale: regime.lambda_scale,
        method: method_label(method),
        branch: form
            .filter(|_| family.is_curved_radiation())
            .map(|f| branch_label(f.branch())),
        t_start: window.t_min,
        t_end: window.t_max,
        n,
        tol: ctx.default_tol,
        max_friedmann_residual: max_residual,
        max_deviation: (row_blocks.len() > 1).then_some(max_dev),
        notes: notes.clone(),
    };
    let format = args.output.format.or(file.format).unwrap_or_default();
    let text = if row_blocks.len() == 1 {
        let rows = &row_blocks[0].1;
        match format {
            Format::Csv => output::rows_csv(rows),
            Format::Json => output::to_json(&Single { metadata: &meta, records: rows })?,
        }
    } else {
        render_all(&meta, &row_blocks, &deviations, format)?
    };
    let out = args.output.out.clone().or(file.out);
    output::emit(out.as_deref(), &text)?;
    for note in &notes {
        eprintln!("note: {note}");
    }

    let tol = ctx.default_tol;
    if !(max_residual <= tol) {
        return Err(CliError::Failed(format!(
            "friedmann residual {max_residual:e} exceeds tolerance {tol:e}"
        )));
    }
    if !(max_dev <= tol) {
        return Err(CliError::Failed(format!(
            "cross-method deviation {max_dev:e} exceeds tolerance {tol:e}"
        )));
    }
    Ok(())
}

fn no_points() -> CliError {
    CliError::usage("no grid point lies inside the solution's domain")
}

fn default_method(family: Family) -> MethodArg {
    if family.has_closed_form() {
        MethodArg::Closed
    } else if family == Family::HypergeometricGeneral {
        MethodArg::Hypergeometric
    } else {
        MethodArg::Ode
    }
}

fn methods_for(arg: MethodArg, family: Family) -> Result<Vec<Method>, CliError> {
    let mut available = Vec::new();
    if family.has_closed_form() {
        available.push(Method::ClosedForm);
    }
    if family == Family::HypergeometricGeneral {
        available.push(Method::Hypergeometric);
    }
    available.extend([Method::Ode, Method::Quadrature]);
    let wanted = match arg {
        MethodArg::All => return Ok(available),
        MethodArg::Closed => Method::ClosedForm,
        MethodArg::Hypergeometric => Method::Hypergeometric,
        MethodArg::Ode => Method::Ode,
        MethodArg::Quadrature => Method::Quadrature,
    };
    if available.contains(&wanted) {
        Ok(vec![wanted])
    } else {
        Err(CliError::usage(format!(
            "method '{wanted}' is not available for {family}"
        )))
    }
}

fn method_label(m: MethodArg) -> &'static str {
    match m {
        MethodArg::Closed => "closed",
        MethodArg::Ode => "ode",
        MethodArg::Quadrature => "quadrature",
        MethodArg::Hypergeometric => "hypergeometric",
        MethodArg::All => "all",
    }
}

/// `++-` style: offset, term and growth signs; commas and spaces ignored.
pub fn parse_branch(s: &str) -> Result<BranchChoice, CliError> {
    let signs: Vec<Sign> = s
        .chars()
        .filter(|c| !matches!(c, ',' | ' '))
        .map(|c| match c {
            '+' => Ok(Sign::Plus),
            '-' => Ok(Sign::Minus),
            _ => Err(()),
        })
        .collect::<Result<_, _>>()
        .map_err(|_| CliError::usage(format!("--branch: expected three of '+'/'-', got '{s}'")))?;
    match signs[..] {
        [o, t, g] => Ok(BranchChoice::new(o, t, g)),
        _ => Err(CliError::usage(format!(
            "--branch: expected three of '+'/'-', got '{s}'"
        ))),
    }
}

pub fn branch_label(b: BranchChoice) -> String {
    format!("{}{}{}", b.offset_sign, b.term_sign, b.growth_sign)
}

fn grid_window(args: &SolveArgs, file: &RunConfig, params: &CosmoParams) -> Result<TimeWindow, CliError> {
    let t_start = args.grid.t_start.or(file.t_start);
    let t_end = args.grid.t_end.or(file.t_end);
    let (lo, hi) = match (t_start, t_end) {
        (Some(a), Some(b)) => (a, b),
        (None, Some(b)) => (params.t0(), b),
        (Some(_), None) => return Err(CliError::usage("missing --t-end")),
        (None, None) => {
            // default to the first physical piece of the closed form
            let piece = physical_pieces(params)
                .into_iter()
                .next()
                .ok_or_else(|| CliError::usage("missing --t-start/--t-end"))?;
            (piece.window.t_min, piece.window.t_max)
        }
    };
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(CliError::usage(format!(
            "grid [{lo}, {hi}] must be finite with t-start < t-end"
        )));
    }
    Ok(TimeWindow::new(lo, hi)?)
}

fn select_form(
    params: &CosmoParams,
    family: Family,
    window: &TimeWindow,
    branch: Option<BranchChoice>,
) -> Result<ClosedForm, CliError> {
    if let Some(b) = branch {
        return Ok(ClosedForm::new(params, b)?);
    }
    if !family.is_curved_radiation() {
        return Ok(ClosedForm::new(params, BranchChoice::TRIVIAL)?);
    }
    let ambiguous = |list: &[BranchChoice]| {
        let names: Vec<String> = list.iter().map(|&b| branch_label(b)).collect();
        CliError::usage(format!(
            "several sign selections solve the constraint here ({}); choose one with --branch",
            names.join(", ")
        ))
    };
    match resolve_branch(params, window) {
        Ok(b) => Ok(ClosedForm::new(params, b)?),
        Err(ClosedFormError::AmbiguousBranch(list)) => Err(ambiguous(&list)),
        Err(_) => {
            // the grid reaches past the solution: use pieces that overlap it
            let mut found: Vec<BranchChoice> = physical_pieces(params)
                .into_iter()
                .filter(|p| p.window.t_min < window.t_max && p.window.t_max > window.t_min)
                .map(|p| p.form.branch())
                .collect();
            found.dedup();
            match found[..] {
                [b] => Ok(ClosedForm::new(params, b)?),
                [] => Err(ClosedFormError::NoValidBranch.into()),
                _ => Err(ambiguous(&found)),
            }
        }
    }
}

/// Evaluates an analytic method pointwise; `Ok(None)` drops the point.
fn analytic(
    grid: &[f64],
    f: impl Fn(f64) -> Result<Option<Sample<f64>>, CliError>,
) -> Result<Vec<Sample<f64>>, CliError> {
    let mut out = Vec::with_capacity(grid.len());
    for &t in grid {
        if let Some(s) = f(t)? {
            out.push(s);
        }
    }
    Ok(out)
}

fn closed_sample(form: Option<&ClosedForm>, t: f64) -> Result<Option<Sample<f64>>, CliError> {
    let form = form.ok_or(ClosedFormError::NoValidBranch)?;
    match form.state(t) {
        Ok(st) => Ok(Some(Sample { t, a: st.a, adot: st.adot })),
        Err(ClosedFormError::OutsideWindow { .. }) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

fn hyp_sample(params: &CosmoParams, t: f64) -> Result<Option<Sample<f64>>, CliError> {
    match hypergeometric_sample(params, t) {
        Ok(s) => Ok(Some(s)),
        Err(SpecFunError::UOutOfRange { .. }) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

/// Initial data for a numerical method run on its own: the analytic state
/// at the first valid grid point, else `(t₀, a₀)` on the expanding branch.
fn anchor(
    params: &CosmoParams,
    family: Family,
    form: Option<&ClosedForm>,
    grid: &[f64],
) -> Result<Sample<f64>, CliError> {
    for &t in grid {
        let s = if form.is_some() {
            closed_sample(form, t)?
        } else if family == Family::HypergeometricGeneral {
            hyp_sample(params, t)?
        } else {
            break;
        };
        if let Some(s) = s {
            return Ok(s);
        }
    }
    if form.is_some() || family == Family::HypergeometricGeneral {
        return Err(no_points());
    }
    let a0 = params.a0();
    let z = z_of_a(params, a0);
    if z < 0.0 {
        return Err(NumericError::NonPositiveIntegrand { a: a0 }.into());
    }
    Ok(Sample { t: params.t0(), a: a0, adot: z.sqrt() })
}

fn numeric_samples(
    params: &CosmoParams,
    m: Method,
    anchor: Sample<f64>,
    grid: &[f64],
) -> Result<Vec<Sample<f64>>, NumericError> {
    let tr = match m {
        Method::Ode => integrate_ode_from(params, anchor.t, anchor.a, anchor.adot, grid, &OdeConfig::default())?,
        _ => {
            let expanding = if anchor.adot != 0.0 {
                anchor.adot > 0.0
            } else {
                rhs_second_order(params, anchor.a) > 0.0
            };
            quadrature_trajectory(params, anchor.t, anchor.a, expanding, grid, &QuadConfig::default())?
        }
    };
    Ok(tr.samples)
}

/// Largest `|a_i − a_j|` over times present in both blocks.
fn pair_deviations(blocks: &[(Method, Vec<Row>)]) -> Vec<PairDeviation> {
    let mut out = Vec::new();
    for i in 0..blocks.len() {
        for j in i + 1..blocks.len() {
            let value = common(&blocks[i].1, &blocks[j].1)
                .map(|(x, y)| (x.a - y.a).abs())
                .fold(0.0, f64::max);
            out.push(PairDeviation {
                first: blocks[i].0,
                second: blocks[j].0,
                value,
            });
        }
    }
    out
}

fn common<'a>(x: &'a [Row], y: &'a [Row]) -> impl Iterator<Item = (&'a Row, &'a Row)> {
    x.iter().filter_map(move |r| {
        y.binary_search_by(|s| s.t.total_cmp(&r.t))
            .ok()
            .map(|k| (r, &y[k]))
    })
}

fn with_deviations(blocks: &[(Method, Vec<Row>)]) -> Vec<(Method, Vec<DevRow>)> {
    blocks
        .iter()
        .map(|(m, rows)| {
            let dev_rows = rows
                .iter()
                .map(|r| {
                    let deviation: BTreeMap<&'static str, f64> = blocks
                        .iter()
                        .filter(|(other, _)| other != m)
                        .filter_map(|(other, orows)| {
                            orows
                                .binary_search_by(|s| s.t.total_cmp(&r.t))
                                .ok()
                                .map(|k| (other.name(), (r.a - orows[k].a).abs()))
                        })
                        .collect();
                    DevRow { row: *r, deviation }
                })
                .collect();
            (*m, dev_rows)
        })
        .collect()
}

fn render_all(
    meta: &Metadata,
    blocks: &[(Method, Vec<Row>)],
    deviations: &[PairDeviation],
    format: Format,
) -> Result<String, CliError> {
    let rich = with_deviations(blocks);
    match format {
        Format::Csv => {
            let names: Vec<&str> = blocks.iter().map(|(m, _)| m.name()).collect();
            let mut s = format!("method,{HEADER}");
            for n in &names {
                s.push_str(&format!(",dev_{n}"));
            }
            s.push('\n');
            for (m, rows) in &rich {
                for r in rows {
                    s.push_str(m.name());
                    s.push(',');
                    s.push_str(&csv_fields(&r.row.values()));
                    for n in &names {
                        s.push(',');
                        if let Some(v) = r.deviation.get(n) {
                            s.push_str(&output::num(*v));
                        } else if *n == m.name() {
                            s.push_str(&output::num(0.0));
                        }
                    }
                    s.push('\n');
                }
            }
            Ok(s)
        }
        Format::Json => {
            let blocks: Vec<Block> = rich
                .iter()
                .map(|(m, rows)| Block { method: *m, records: rows })
                .collect();
            output::to_json(&All { metadata: meta, blocks, deviations })
        }
    }
}

#[derive(Serialize)]
struct Metadata {
    tool: &'static str,
    version: &'static str,
    params: RawParams<f64>,
    family: Family,
    discriminant: f64,
    lambda_scale: f64,
    method: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    branch: Option<String>,
    t_start: f64,
    t_end: f64,
    n: usize,
    tol: f64,
    max_friedmann_residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    max_deviation: Option<f64>,
    notes: Vec<String>,
}

#[derive(Serialize)]
struct Single<'a> {
    metadata: &'a Metadata,
    records: &'a [Row],
}

#[derive(Serialize)]
struct Block<'a> {
    method: Method,
    records: &'a [DevRow],
}

#[derive(Serialize)]
struct All<'a> {
    metadata: &'a Metadata,
    blocks: Vec<Block<'a>>,
    deviations: &'a [PairDeviation],
}
