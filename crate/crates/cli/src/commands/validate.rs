use frw_core::validate::{run_group, run_suite, SuiteCheck, SuiteOptions, SuiteReport, DEFAULT_SEED, GROUPS};
use frw_core::validate::ValidateError;
use rayon::prelude::*;

use super::{thread_pool, Context};
use crate::args::{Format, ValidateArgs};
use crate::config::RunConfig;
use crate::error::CliError;
use crate::output::{self, num};

pub fn run(args: &ValidateArgs, ctx: &Context) -> Result<(), CliError> {
    let file = RunConfig::load_opt(args.config.as_ref())?;
    let subset = if args.subset.is_empty() {
        file.subset.clone()
    } else {
        Some(args.subset.clone())
    };
    let tol_override = args.tol.or(file.tol).or(ctx.env_tol);
    if let Some(t) = tol_override {
        if !(t.is_finite() && t >= 0.0) {
            return Err(CliError::usage(format!("--tol must be a non-negative real, got {t}")));
        }
    }
    let opts = SuiteOptions {
        tol_override,
        subset,
        seed: args.seed.or(file.seed).unwrap_or(DEFAULT_SEED),
    };
    let jobs = args.jobs.or(file.jobs);
    let report = match jobs {
        Some(j) if j > 1 => parallel_suite(&opts, j)?,
        _ => run_suite(&opts)?,
    };

    for c in &report.checks {
        let o = &c.outcome;
        println!(
            "{} [{}] {} value={} tol={}",
            if o.passed { "PASS" } else { "FAIL" },
            c.group,
            o.name,
            num(o.value),
            num(o.tol)
        );
    }
    if let Some(out) = args.output.out.clone().or(file.out) {
        let text = match args.output.format.or(file.format).unwrap_or(Format::Json) {
            Format::Json => output::to_json(&report)?,
            Format::Csv => report_csv(&report),
        };
        output::emit(Some(&out), &text)?;
    }
    let failed: Vec<String> = report
        .failures()
        .map(|c| c.outcome.name.clone())
        .collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Failed(format!(
            "{} check(s) failed: {}",
            failed.len(),
            failed.join(", ")
        )))
    }
}

/// Same report as [`run_suite`], groups spread over a pool.
fn parallel_suite(opts: &SuiteOptions, jobs: usize) -> Result<SuiteReport, CliError> {
    let groups: Vec<&'static str> = match &opts.subset {
        None => GROUPS.to_vec(),
        Some(names) => names
            .iter()
            .map(|n| {
                GROUPS
                    .iter()
                    .copied()
                    .find(|g| g == n)
                    .ok_or_else(|| ValidateError::UnknownGroup(n.clone()))
            })
            .collect::<Result<_, _>>()?,
    };
    let pool = thread_pool(Some(jobs))?;
    let results: Vec<_> = pool.install(|| groups.par_iter().map(|g| run_group(g, opts)).collect());
    let mut checks = Vec::new();
    for (g, r) in groups.iter().zip(results) {
        checks.extend(r?.into_iter().map(|outcome| SuiteCheck { group: g, outcome }));
    }
    Ok(SuiteReport {
        seed: opts.seed,
        groups,
        checks,
    })
}

fn report_csv(report: &SuiteReport) -> String {
    let mut s = String::from("group,name,value,tol,passed\n");
    for c in &report.checks {
        s.push_str(&format!(
            "{},{},{},{},{}\n",
            c.group,
            c.outcome.name,
            num(c.outcome.value),
            num(c.outcome.tol),
            c.outcome.passed
        ));
    }
    s
}
