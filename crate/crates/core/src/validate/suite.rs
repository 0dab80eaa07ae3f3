//! The acceptance suite: named groups of checks over seeded random draws and
//! fixed reference cases. Component failures inside a group become failed
//! checks rather than aborting the run.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::closedform::{
    dust_relation_residual, dust_solve, resolve_branch, BranchChoice, ClosedForm, ClosedFormError,
    Sign,
    TimeWindow,
};
use crate::model::{
    classify, lambda_scale, CosmoParams, Curvature, Family,
};
use crate::numeric::{integrate_ode_from, t_of_a_quadrature, Method, OdeConfig, QuadConfig};
use crate::specfun::{dt_du, hyp2f1, t_of_u, HypSolutionCoeffs};

use super::oracle::hyp2f1_series_oracle;
use super::{
    closed_form_trajectory, cross_check, ermakov_drift, ermakov_value, fd_first,
    fd_friedmann_residual, fd_ode_residual, hypergeometric_vs_tables, CheckOutcome,
    ValidateError,
};

/// Group names, in criterion order.
pub const GROUPS: [&str; 9] = [
    "friedmann",
    "ode_residual",
    "ermakov",
    "cross",
    "hypergeometric",
    "hyp2f1",
    "classify",
    "dust",
    "limits",
];

pub const DEFAULT_SEED: u64 = 0x5eed_f12e;

const DRAWS: usize = 10;
const RESIDUAL_SAMPLES: usize = 64;

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteOptions {
    /// Replaces every declared tolerance.
    pub tol_override: Option<f64>,
    /// Run only these groups.
    pub subset: Option<Vec<String>>,
    pub seed: u64,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        Self {
            tol_override: None,
            subset: None,
            seed: DEFAULT_SEED,
        }
    }
}

impl SuiteOptions {
    fn tol(&self, declared: f64) -> f64 {
        self.tol_override.unwrap_or(declared)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteCheck {
    pub group: &'static str,
    #[serde(flatten)]
    pub outcome: CheckOutcome,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub seed: u64,
    pub groups: Vec<&'static str>,
    pub checks: Vec<SuiteCheck>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.outcome.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &SuiteCheck> {
        self.checks.iter().filter(|c| !c.outcome.passed)
    }

    /// `None` if the group did not run.
    pub fn group_passed(&self, group: &str) -> Option<bool> {
        self.groups.contains(&group).then(|| {
            self.checks
                .iter()
                .filter(|c| c.group == group)
                .all(|c| c.outcome.passed)
        })
    }
}

/// Runs the selected groups (all of them by default).
pub fn run_suite(opts: &SuiteOptions) -> Result<SuiteReport, ValidateError> {
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
    let mut checks = Vec::new();
    for &g in &groups {
        for outcome in run_group(g, opts)? {
            checks.push(SuiteCheck { group: g, outcome });
        }
    }
    Ok(SuiteReport {
        seed: opts.seed,
        groups,
        checks,
    })
}

/// Checks of a single group.
pub fn run_group(name: &str, opts: &SuiteOptions) -> Result<Vec<CheckOutcome>, ValidateError> {
    Ok(match name {
        "friedmann" => residual_group(opts, Residual::Friedmann),
        "ode_residual" => residual_group(opts, Residual::Ode),
        "ermakov" => ermakov_group(opts),
        "cross" => cross_group(opts),
        "hypergeometric" => hypergeometric_group(opts),
        "hyp2f1" => hyp2f1_group(opts),
        "classify" => classify_group(opts),
        "dust" => dust_group(opts),
        "limits" => limits_group(opts),
        other => return Err(ValidateError::UnknownGroup(other.to_string())),
    })
}

fn outcome(name: String, tol: f64, r: Result<f64, ValidateError>) -> CheckOutcome {
    match r {
        Ok(v) => CheckOutcome::new(name, v, tol),
        Err(e) => CheckOutcome::failed(name, tol, e.to_string()),
    }
}

// ---------------------------------------------------------------- draws

/// The closed-form families of the residual sweeps.
pub const CLOSED_FORM_FAMILIES: [Family; 11] = [
    Family::RadiationLambdaLargeSinh,
    Family::RadiationLambdaCritical,
    Family::RadiationLambdaSmallCosh,
    Family::RadiationLambdaNegativeTrig,
    Family::FlatRadiationSinh,
    Family::FlatRadiationTrig,
    Family::ZeroLambdaFlatPowerLaw,
    Family::ZeroLambdaDeSitterFlat,
    Family::ZeroLambdaCurvedRadiation,
    Family::ZeroLambdaCurvedDust,
    Family::ZeroLambdaCurvedVacuum,
];

/// A sign selection together with a finite window on which it is a real
/// solution of the constraint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalPiece {
    pub form: ClosedForm<f64>,
    pub window: TimeWindow<f64>,
}

fn family_rng(seed: u64, tag: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ tag.wrapping_add(1).wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

fn random_kappa(rng: &mut ChaCha8Rng) -> i64 {
    if rng.random_bool(0.5) {
        1
    } else {
        -1
    }
}

/// Parameters for one random member of `family`.
fn draw_params(family: Family, rng: &mut ChaCha8Rng) -> Result<CosmoParams<f64>, ValidateError> {
    let t0 = rng.random_range(-1.0..1.0);
    let c = rng.random_range(0.5..2.0);
    let a0 = rng.random_range(0.5..2.0);
    let zero_lambda = |g: f64, k: i64| CosmoParams::zero_lambda(g, k, a0, t0);
    let p = match family {
        Family::RadiationLambdaLargeSinh => {
            let k = random_kappa(rng);
            CosmoParams::new(1.0, k, 0.75 / c * rng.random_range(1.5..4.0), c, 1.0, t0)
        }
        Family::RadiationLambdaCritical => {
            let k = random_kappa(rng);
            CosmoParams::new(1.0, k, 0.75 / c, c, 1.0, t0)
        }
        Family::RadiationLambdaSmallCosh => {
            let k = random_kappa(rng);
            CosmoParams::new(1.0, k, 0.75 / c * rng.random_range(0.2..0.8), c, 1.0, t0)
        }
        Family::RadiationLambdaNegativeTrig => {
            let k = random_kappa(rng);
            CosmoParams::new(1.0, k, -rng.random_range(0.5..3.0), c, 1.0, t0)
        }
        Family::FlatRadiationSinh => CosmoParams::new(1.0, 0, rng.random_range(0.5..5.0), c, 1.0, t0),
        Family::FlatRadiationTrig => CosmoParams::new(1.0, 0, -rng.random_range(0.5..5.0), c, 1.0, t0),
        Family::ZeroLambdaFlatPowerLaw => zero_lambda(rng.random_range(0.1..2.0), 0),
        Family::ZeroLambdaDeSitterFlat => zero_lambda(-1.0, 0),
        Family::ZeroLambdaCurvedRadiation => zero_lambda(1.0, random_kappa(rng)),
        Family::ZeroLambdaCurvedDust => zero_lambda(0.5, random_kappa(rng)),
        Family::ZeroLambdaCurvedVacuum => zero_lambda(-1.0, random_kappa(rng)),
        _ => unreachable!("no closed form"),
    }?;
    Ok(p)
}

/// Every (branch, window) whose closed form obeys the constraint on a finite
/// interior window: unbounded pieces are cut to a few characteristic times
/// and 10% is dropped at each end.
/// Every admissible branch and validity piece of a closed-form family.
/// Unbounded pieces are cut to `3/λ` (or `3a₀` when `Λ = 0`) and the result
/// shrunk by 10% at each end.
pub fn physical_pieces(params: &CosmoParams<f64>) -> Vec<PhysicalPiece> {
    let family = classify(params).family;
    let span = if params.lambda_cc() != 0.0 {
        3.0 / lambda_scale(params)
    } else {
        3.0 * params.a0()
    };
    let mut out = Vec::new();
    for b in BranchChoice::candidates(family) {
        let Ok(form) = ClosedForm::new(params, b) else {
            continue;
        };
        for piece in form.validity_windows() {
            let w = piece.clip(params.t0(), span).shrink(0.1);
            if w.is_finite() && w.t_min < w.t_max && branch_admissible(params, &w, b) {
                out.push(PhysicalPiece { form, window: w });
            }
        }
    }
    out
}

/// `b` obeys the constraint on `w`. Expanding and contracting solutions can
/// both be valid on the same window (the critical family), so an ambiguous
/// resolution still admits each of its members.
fn branch_admissible(params: &CosmoParams<f64>, w: &TimeWindow<f64>, b: BranchChoice) -> bool {
    match resolve_branch(params, w) {
        Ok(found) => found == b,
        Err(ClosedFormError::AmbiguousBranch(list)) => list.contains(&b),
        Err(_) => false,
    }
}

fn draws(family: Family, seed: u64) -> Result<Vec<PhysicalPiece>, ValidateError> {
    let tag = CLOSED_FORM_FAMILIES.iter().position(|&f| f == family).unwrap_or(99) as u64;
    let mut rng = family_rng(seed, tag);
    let mut out = Vec::with_capacity(DRAWS);
    let mut attempts = 0;
    while out.len() < DRAWS {
        attempts += 1;
        if attempts > 20 * DRAWS {
            return Err(ValidateError::ClosedForm(
                crate::closedform::ClosedFormError::NoValidBranch,
            ));
        }
        let p = draw_params(family, &mut rng)?;
        if classify(&p).family != family {
            continue;
        }
        let opts = physical_pieces(&p);
        if opts.is_empty() {
            continue;
        }
        out.push(opts[rng.random_range(0..opts.len())]);
    }
    Ok(out)
}

// ------------------------------------------------------------ criteria 1, 2

#[derive(Clone, Copy, PartialEq)]
enum Residual {
    Friedmann,
    Ode,
}

fn residual_group(opts: &SuiteOptions, kind: Residual) -> Vec<CheckOutcome> {
    let tol = opts.tol(1e-6);
    let prefix = match kind {
        Residual::Friedmann => "friedmann",
        Residual::Ode => "ode_residual",
    };
    CLOSED_FORM_FAMILIES
        .iter()
        .map(|&family| {
            let r = draws(family, opts.seed).and_then(|ds| {
                let mut worst = 0.0f64;
                for d in &ds {
                    let v = match kind {
                        Residual::Friedmann => {
                            fd_friedmann_residual(&d.form, &d.window, RESIDUAL_SAMPLES)?
                        }
                        Residual::Ode => fd_ode_residual(&d.form, &d.window, RESIDUAL_SAMPLES)?,
                    };
                    worst = worst.max(v);
                }
                Ok(worst)
            });
            outcome(format!("{prefix}/{family}"), tol, r)
        })
        .collect()
}

// ---------------------------------------------------------------- criterion 3

const RADIATION_FAMILIES: [Family; 7] = [
    Family::RadiationLambdaLargeSinh,
    Family::RadiationLambdaCritical,
    Family::RadiationLambdaSmallCosh,
    Family::RadiationLambdaNegativeTrig,
    Family::FlatRadiationSinh,
    Family::FlatRadiationTrig,
    Family::ZeroLambdaCurvedRadiation,
];

/// `|E + κ/2|` relative to the size of the terms of `E`.
fn ermakov_error(p: &CosmoParams<f64>, a: f64, adot: f64) -> f64 {
    let kappa = p.kappa().value::<f64>();
    let scale = 1f64.max(p.lambda_cc().abs() / 6.0 * a * a + 0.5 * p.c_int() / (a * a));
    (ermakov_value(p, a, adot) + 0.5 * kappa).abs() / scale
}

fn ermakov_group(opts: &SuiteOptions) -> Vec<CheckOutcome> {
    let tol = opts.tol(1e-8);
    let mut out: Vec<CheckOutcome> = RADIATION_FAMILIES
        .iter()
        .map(|&family| {
            let r = draws(family, opts.seed).and_then(|ds| {
                let mut worst = 0.0f64;
                for d in &ds {
                    let tr = closed_form_trajectory(&d.form, &d.window.grid(RESIDUAL_SAMPLES))?;
                    for s in &tr.samples {
                        worst = worst.max(ermakov_error(d.form.params(), s.a, s.adot));
                    }
                }
                Ok(worst)
            });
            outcome(format!("ermakov/closed/{family}"), tol, r)
        })
        .collect();

    // flat Λ = 0 radiation is the power law with γ̄ = 1
    let mut rng = family_rng(opts.seed, 200);
    let r = (0..DRAWS).try_fold(0.0f64, |worst, _| {
        let a0 = rng.random_range(0.5..2.0);
        let p = CosmoParams::zero_lambda(1.0, 0, a0, rng.random_range(-1.0..1.0))?;
        let d = physical_pieces(&p)[0];
        let tr = closed_form_trajectory(&d.form, &d.window.grid(RESIDUAL_SAMPLES))?;
        Ok::<_, ValidateError>(
            tr.samples
                .iter()
                .map(|s| ermakov_error(&p, s.a, s.adot))
                .fold(worst, f64::max),
        )
    });
    out.push(outcome("ermakov/closed/FlatRadiationPowerLaw".into(), tol, r));

    // ODE drift over ten dynamical times 1/(2λ) on solutions regular for all t
    let bounce = BranchChoice::new(Sign::Plus, Sign::Plus, Sign::Plus);
    for (family, tag) in [
        (Family::RadiationLambdaSmallCosh, 201u64),
        (Family::RadiationLambdaCritical, 202),
    ] {
        let mut rng = family_rng(opts.seed, tag);
        let r = (0..5).try_fold(0.0f64, |worst, _| {
            let c = rng.random_range(0.5..2.0);
            let lambda = match family {
                Family::RadiationLambdaSmallCosh => 0.75 / c * rng.random_range(0.2..0.8),
                _ => 0.75 / c,
            };
            let p = CosmoParams::new(1.0, 1, lambda, c, 1.0, rng.random_range(-1.0..1.0))?;
            let form = ClosedForm::new(&p, bounce)?;
            let half = 5.0 / (2.0 * lambda_scale(&p));
            let w = TimeWindow::new(p.t0() - half, p.t0() + half)?;
            let grid = w.grid(201);
            let st = form.state(w.t_min)?;
            let tr = integrate_ode_from(&p, w.t_min, st.a, st.adot, &grid, &OdeConfig::default())
                .map_err(ValidateError::Ode)?;
            Ok::<_, ValidateError>(worst.max(ermakov_drift(&p, &tr)?))
        });
        out.push(outcome(format!("ermakov/ode_drift/{family}"), tol, r));
    }
    out
}

// ---------------------------------------------------------------- criterion 4

fn cross_cases() -> Vec<(String, CosmoParams<f64>)> {
    let mut v = Vec::new();
    let zl = |g: f64, k: i64| CosmoParams::zero_lambda(g, k, 1.0, 0.0);
    let push = |v: &mut Vec<_>, name: &str, p: Result<CosmoParams<f64>, _>| {
        if let Ok(p) = p {
            v.push((name.to_string(), p));
        }
    };
    push(&mut v, "flat_dust", zl(0.5, 0));
    push(&mut v, "flat_radiation", zl(1.0, 0));
    push(&mut v, "flat_radiation_lambda+3", CosmoParams::new(1.0, 0, 3.0, 1.0, 1.0, 0.0));
    push(&mut v, "flat_radiation_lambda-3", CosmoParams::new(1.0, 0, -3.0, 1.0, 1.0, 0.0));
    push(&mut v, "closed_radiation", zl(1.0, 1));
    push(&mut v, "open_radiation", zl(1.0, -1));
    for k in [1, -1] {
        for (tag, lambda) in [("large_sinh", 1.5), ("critical", 0.75), ("small_cosh", 0.3), ("trig", -1.0)] {
            push(
                &mut v,
                &format!("radiation_{tag}_k{k:+}"),
                CosmoParams::new(1.0, k, lambda, 1.0, 1.0, 0.0),
            );
        }
    }
    push(&mut v, "de_sitter", zl(-1.0, 0));
    push(&mut v, "vacuum_k+1", zl(-1.0, 1));
    push(&mut v, "vacuum_k-1", zl(-1.0, -1));
    v
}

fn cross_group(opts: &SuiteOptions) -> Vec<CheckOutcome> {
    let tol = opts.tol(1e-6);
    let mut out = Vec::new();
    for (name, p) in cross_cases() {
        let draws = physical_pieces(&p);
        if draws.is_empty() {
            out.push(CheckOutcome::failed(format!("cross/{name}"), tol, "no valid branch"));
        }
        for (i, d) in draws.iter().enumerate() {
            let same = draws.iter().filter(|e| e.form.branch() == d.form.branch()).count();
            let mut label = if d.form.family().is_curved_radiation() {
                format!("cross/{name}/{}", d.form.branch())
            } else {
                format!("cross/{name}")
            };
            if same > 1 {
                label = format!("{label}/piece{i}");
            }
            let cross_opts = super::CrossOptions {
                branch: Some(d.form.branch()),
                tol,
                ..Default::default()
            };
            let r = super::cross_check_with(&p, &d.window, RESIDUAL_SAMPLES, &cross_opts)
                .and_then(|rep| {
                    if rep.methods.len() < 3 {
                        Err(ValidateError::InsufficientMethods { family: rep.family })
                    } else {
                        Ok(rep.max_cross_method_deviation)
                    }
                });
            out.push(outcome(label, tol, r));
        }
    }
    // a general γ̄ without a table row: hypergeometric, ODE and quadrature
    let r = CosmoParams::zero_lambda(1.5, 1, 1.0, 0.0)
        .map_err(ValidateError::from)
        .and_then(|p| {
            let c = HypSolutionCoeffs::matched(&p).map_err(ValidateError::Hypergeometric)?;
            let w = TimeWindow::new(c.alpha, 2.0 * p.t0() - c.alpha)?.shrink(0.05);
            let rep = cross_check(&p, &w, RESIDUAL_SAMPLES)?;
            if rep.methods.contains(&Method::Hypergeometric) && rep.methods.len() == 3 {
                Ok(rep.max_cross_method_deviation)
            } else {
                Err(ValidateError::InsufficientMethods { family: rep.family })
            }
        });
    out.push(outcome("cross/hypergeometric_gamma1.5_k+1".into(), tol, r));
    out
}

// ---------------------------------------------------------------- criterion 5

fn hypergeometric_group(opts: &SuiteOptions) -> Vec<CheckOutcome> {
    let mut out = Vec::new();
    let us: Vec<f64> = (0..=18).map(|i| 0.05 + 0.05 * i as f64).collect();
    for g in [0.5, 1.0, 1.5] {
        let r = (|| -> Result<f64, ValidateError> {
            let p = CosmoParams::zero_lambda(g, 1, 1.0, 0.0)?;
            let c = HypSolutionCoeffs::matched(&p).map_err(ValidateError::Hypergeometric)?;
            let mut worst = 0.0f64;
            for &u in &us {
                let fd = fd_first(|v| t_of_u(&c, &p, v), u, 1e-3).map_err(ValidateError::Hypergeometric)?;
                let exact = dt_du(&c, u).map_err(ValidateError::Hypergeometric)?;
                worst = worst.max((fd - exact).abs() / exact.abs());
            }
            Ok(worst)
        })();
        out.push(outcome(format!("hypergeometric/derivative/gamma={g}"), opts.tol(1e-5), r));

        let mu = (g + 1.0) / (2.0 * g);
        let r = us.iter().try_fold(0.0f64, |worst, &u| {
            let lhs = hyp2f1(mu, 0.5, 0.5, 1.0 - u).map_err(ValidateError::Hypergeometric)?;
            let rhs = u.powf(-mu);
            Ok(worst.max((lhs - rhs).abs() / rhs))
        });
        out.push(outcome(format!("hypergeometric/collapse/gamma={g}"), opts.tol(1e-9), r));
    }
    for (g, k) in [(1.0, 1), (0.5, 1), (1.0, -1), (0.5, -1)] {
        let r = hypergeometric_vs_tables(g, k).map(|rep| rep.max_cross_method_deviation);
        out.push(outcome(format!("hypergeometric/table_fit/gamma={g}/k={k:+}"), opts.tol(1e-7), r));
    }
    let degenerate = matches!(
        hypergeometric_vs_tables(-1.0, 1),
        Err(ValidateError::DegenerateGamma { .. })
    );
    out.push(CheckOutcome::new(
        "hypergeometric/degenerate_rejected",
        if degenerate { 0.0 } else { 1.0 },
        0.0,
    ));
    out
}

// ---------------------------------------------------------------- criterion 6

fn hyp2f1_group(opts: &SuiteOptions) -> Vec<CheckOutcome> {
    let mut out = Vec::new();
    let mut rng = family_rng(opts.seed, 300);
    let mut worst = 0.0f64;
    let mut failure = None;
    for _ in 0..1000 {
        let a = rng.random_range(-5.0..5.0);
        let b = rng.random_range(-5.0..5.0);
        let mut c: f64 = rng.random_range(-3.5..6.0);
        if c < 0.5 && (c - c.round()).abs() < 0.1 {
            c += 0.25;
        }
        let x = rng.random_range(-0.5..=0.5);
        let Some(o) = hyp2f1_series_oracle(a, b, c, x) else {
            continue;
        };
        match hyp2f1(a, b, c, x) {
            Ok(v) => worst = worst.max((v - o).abs() / o.abs().max(1.0)),
            Err(e) => failure = Some(format!("({a}, {b}, {c}, {x}): {e}")),
        }
    }
    let mut check = CheckOutcome::new("hyp2f1/series_oracle", worst, opts.tol(1e-10));
    if let Some(f) = failure {
        check = CheckOutcome::failed("hyp2f1/series_oracle", opts.tol(1e-10), f);
    }
    out.push(check);

    let mut worst = 0.0f64;
    let mut failure = None;
    for _ in 0..1000 {
        let a = rng.random_range(-3.0..3.0);
        let b = rng.random_range(-3.0..3.0);
        let c = rng.random_range(0.5..4.0);
        let x = rng.random_range(-0.9..0.9);
        let pair = hyp2f1(a, b, c, x).and_then(|l| {
            Ok((l, (1.0f64 - x).powf(c - a - b) * hyp2f1(c - a, c - b, c, x)?))
        });
        match pair {
            Ok((l, r)) => worst = worst.max((l - r).abs() / l.abs().max(1.0)),
            Err(e) => failure = Some(format!("({a}, {b}, {c}, {x}): {e}")),
        }
    }
    out.push(match failure {
        None => CheckOutcome::new("hyp2f1/euler_transformation", worst, opts.tol(1e-9)),
        Some(f) => CheckOutcome::failed("hyp2f1/euler_transformation", opts.tol(1e-9), f),
    });

    let r = (1..=990).try_fold(0.0f64, |worst, i| {
        let x = i as f64 * 1e-3;
        let v = hyp2f1(1.0, 1.0, 1.5, x).map_err(ValidateError::Hypergeometric)?;
        let s = x.sqrt();
        let exact = s.asin() / (s * (1.0 - x).sqrt());
        Ok(worst.max((v - exact).abs() / exact))
    });
    out.push(outcome("hyp2f1/arcsin_identity".into(), opts.tol(1e-10), r));
    out
}

// ---------------------------------------------------------------- criterion 7

/// Expected family for a classification case, worked out case by case.
fn expected_family(gamma_bar: f64, kappa: i64, lambda: f64, lambda_crit: f64) -> Family {
    let degenerate = [1.0 / 3.0, 1.0 / 5.0].contains(&gamma_bar);
    if lambda == 0.0 {
        return match (kappa, gamma_bar) {
            (0, -1.0) => Family::ZeroLambdaDeSitterFlat,
            (0, _) => Family::ZeroLambdaFlatPowerLaw,
            (_, 1.0) => Family::ZeroLambdaCurvedRadiation,
            (_, 0.5) => Family::ZeroLambdaCurvedDust,
            (_, -1.0) => Family::ZeroLambdaCurvedVacuum,
            _ if degenerate => Family::LogarithmicDegenerate,
            _ => Family::HypergeometricGeneral,
        };
    }
    if gamma_bar == 1.0 {
        return match (kappa, lambda > 0.0) {
            (0, true) => Family::FlatRadiationSinh,
            (0, false) => Family::FlatRadiationTrig,
            (_, false) => Family::RadiationLambdaNegativeTrig,
            _ if lambda == lambda_crit => Family::RadiationLambdaCritical,
            _ if lambda > lambda_crit => Family::RadiationLambdaLargeSinh,
            _ => Family::RadiationLambdaSmallCosh,
        };
    }
    if degenerate || gamma_bar == -1.0 {
        Family::LogarithmicDegenerate
    } else {
        Family::NumericalOnly
    }
}

fn classify_group(_opts: &SuiteOptions) -> Vec<CheckOutcome> {
    let mut total = 0;
    let mut wrong = Vec::new();
    for c in [0.5, 1.0, 2.0, 3.0] {
        let crit = 0.75 / c;
        let lambdas = [0.0, crit, crit * (1.0 + 1e-6), crit * (1.0 - 1e-6), -crit, 5.0, -5.0];
        for kappa in [-1, 0, 1] {
            for g in [1.0, 0.5, -1.0, 1.0 / 3.0, 1.0 / 5.0, 1.5, 0.7] {
                for &l in &lambdas {
                    total += 1;
                    let p = match CosmoParams::new(g, kappa, l, c, 1.0, 0.0) {
                        Ok(p) => p,
                        Err(e) => {
                            wrong.push(format!("({g}, {kappa}, {l}, {c}): {e}"));
                            continue;
                        }
                    };
                    let want = expected_family(g, kappa, l, crit);
                    let got = classify(&p).family;
                    if got != want {
                        wrong.push(format!("({g}, {kappa}, {l}, {c}): {got} != {want}"));
                    }
                }
            }
        }
    }
    // the reference boundary case has Δ = 0 exactly
    let p = CosmoParams::new(1.0, 1, 0.75, 1.0, 1.0, 0.0).expect("valid");
    let reg = classify(&p);
    if reg.family != Family::RadiationLambdaCritical || reg.discriminant != 0.0 {
        wrong.push("(1, 1, 0.75, 1): not critical with zero discriminant".into());
    }
    let mut check = CheckOutcome::new("classify/boundaries", wrong.len() as f64, 0.0)
        .with_detail(format!("{total} cases"));
    if !wrong.is_empty() {
        check = check.with_detail(wrong.join("; "));
    }
    vec![check]
}

// ---------------------------------------------------------------- criterion 8

fn dust_group(opts: &SuiteOptions) -> Vec<CheckOutcome> {
    let mut out = Vec::new();
    let half = std::f64::consts::FRAC_PI_2;
    let start = -(2f64.sqrt() - 1f64.asinh());
    for (kappa, lo, hi) in [
        (Curvature::Closed, -half, half),
        (Curvature::Open, start, start + 50.0),
    ] {
        let n = 4000;
        let r = (0..=n).try_fold(0.0f64, |worst, i| {
            let s = lo + (hi - lo) * i as f64 / n as f64;
            let a = dust_solve(kappa, s)?;
            Ok::<_, ValidateError>(worst.max(dust_relation_residual(kappa, a, s).abs()))
        });
        out.push(outcome(
            format!("dust/round_trip/k={:+}", kappa.index()),
            opts.tol(1e-12),
            r,
        ));
    }
    // lifetime: the relation at A → 0 and an independent quadrature of dt = da/√z
    let r = (|| -> Result<f64, ValidateError> {
        let mut worst = 0.0f64;
        for a in [1e-12, 1e-15, 0.0] {
            worst = worst.max((dust_relation_residual(Curvature::Closed, a, 0.0) - half).abs());
        }
        let p = CosmoParams::zero_lambda(0.5, 1, 1.0, 0.0)?;
        let t = t_of_a_quadrature(&p, 1e-14, 1.0, &QuadConfig::default())
            .map_err(ValidateError::Quadrature)?;
        Ok(worst.max((t - half).abs()))
    })();
    out.push(outcome("dust/lifetime".into(), opts.tol(1e-9), r));
    out
}

// ---------------------------------------------------------------- criterion 9

fn limits_group(opts: &SuiteOptions) -> Vec<CheckOutcome> {
    let mut out = Vec::new();
    let tiny = 1e-10;
    for (kappa, lam_sign) in [(1i64, 1.0), (-1, 1.0), (1, -1.0), (-1, -1.0)] {
        let r = (|| -> Result<f64, ValidateError> {
            let base = ClosedForm::new(
                &CosmoParams::zero_lambda(1.0, kappa, 1.0, 0.0)?,
                BranchChoice::TRIVIAL,
            )?;
            let lam = lam_sign * tiny;
            let probe = CosmoParams::new(1.0, kappa, lam, 1.0, 1.0, 0.0)?;
            let quarter = std::f64::consts::FRAC_PI_4 / lambda_scale(&probe);
            let (s, shift) = match (kappa, lam_sign > 0.0) {
                (1, true) => (Sign::Plus, 1.0),
                (_, true) => (Sign::Minus, -1.0),
                (1, false) => (Sign::Minus, 1.0 - quarter),
                (_, false) => (Sign::Plus, -1.0 + quarter),
            };
            let sigma = if kappa == 1 && lam_sign > 0.0 { Sign::Minus } else { Sign::Plus };
            let p = probe.with_t0(shift)?;
            let form = ClosedForm::new(&p, BranchChoice::new(s, sigma, Sign::Plus))?;
            let hi = if kappa == 1 { 1.9 } else { 3.0 };
            let mut worst = 0.0f64;
            for t in TimeWindow::new(0.1, hi)?.grid(200) {
                worst = worst.max((form.scale_factor(t)? - base.scale_factor(t)?).abs());
            }
            Ok(worst)
        })();
        out.push(outcome(
            format!("limits/lambda_to_zero/k={kappa:+}/lambda{}", if lam_sign > 0.0 { "+" } else { "-" }),
            opts.tol(1e-4),
            r,
        ));
    }

    // Δ → 0: solutions through the same expanding point on either side
    let t_ref = 0.0;
    let a_ref = 3f64.sqrt();
    for kappa in [1i64, -1] {
        let r = (|| -> Result<f64, ValidateError> {
            let through = |lambda: f64| -> Result<Vec<ClosedForm<f64>>, ValidateError> {
                let p = CosmoParams::new(1.0, kappa, lambda, 1.0, 1.0, 0.0)?;
                let fam = classify(&p).family;
                let mut v = Vec::new();
                for b in BranchChoice::candidates(fam) {
                    let f = ClosedForm::new(&p, b)?;
                    if let Ok(phase) = f.phase_at(a_ref, true) {
                        let shifted = ClosedForm::new(&p.with_t0(t_ref - phase)?, b)?;
                        let w = TimeWindow::new(0.0, 2.0)?;
                        if branch_admissible(shifted.params(), &w, b) {
                            v.push(shifted);
                        }
                    }
                }
                Ok(v)
            };
            let crit = through(0.75)?;
            let grid = TimeWindow::new(0.0, 2.0)?.grid(200);
            let mut worst = 0.0f64;
            for eps in [1e-6, -1e-6] {
                let near = through(0.75 + eps)?;
                let mut best = f64::INFINITY;
                for f in &near {
                    for g in &crit {
                        let mut d = 0.0f64;
                        for &t in &grid {
                            d = d.max((f.scale_factor(t)? - g.scale_factor(t)?).abs());
                        }
                        best = best.min(d);
                    }
                }
                worst = worst.max(best);
            }
            Ok(worst)
        })();
        out.push(outcome(
            format!("limits/critical_continuity/k={kappa:+}"),
            opts.tol(1e-3),
            r,
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_family_has_draws() {
        for f in CLOSED_FORM_FAMILIES {
            assert_eq!(draws(f, DEFAULT_SEED).unwrap().len(), DRAWS, "{f}");
        }
    }

    #[test]
    fn draws_are_deterministic() {
        let a = draws(Family::RadiationLambdaSmallCosh, 7).unwrap();
        let b = draws(Family::RadiationLambdaSmallCosh, 7).unwrap();
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.form, y.form);
            assert_eq!(x.window, y.window);
        }
    }

    #[test]
    fn unknown_group_is_rejected() {
        let opts = SuiteOptions {
            subset: Some(vec!["nope".into()]),
            ..Default::default()
        };
        assert!(matches!(run_suite(&opts), Err(ValidateError::UnknownGroup(_))));
    }

    #[test]
    fn forced_tolerance_fails() {
        let opts = SuiteOptions {
            tol_override: Some(1e-20),
            subset: Some(vec!["dust".into()]),
            ..Default::default()
        };
        let r = run_suite(&opts).unwrap();
        assert!(!r.passed());
        assert!(r.failures().count() > 0);
    }

    #[test]
    fn classification_table() {
        let c = classify_group(&SuiteOptions::default());
        assert!(c[0].passed, "{:?}", c[0].detail);
    }
}
