//! Cross-method verification: constraint and equation-of-motion residuals,
//! the Ermakov invariant of the radiation case, three-way comparison of
//! closed form, ODE and quadrature, and the acceptance suite built on them.
//!
//! Everything here works in `f64`.

mod cross;
pub mod oracle;
mod report;
mod suite;

use thiserror::Error;

use crate::closedform::{ClosedForm, ClosedFormError, TimeWindow};
use crate::model::{is_radiation, rhs_second_order, z_of_a, CosmoParams, Family, ModelError};
use crate::numeric::{Method, NumericError, Sample, Trajectory};
use crate::specfun::SpecFunError;

pub use cross::{
    cross_check, cross_check_with, hypergeometric_sample, hypergeometric_vs_tables, CrossOptions,
};
pub use report::{CheckOutcome, PairDeviation, ValidationReport};
pub use suite::{
    physical_pieces, run_group, run_suite, PhysicalPiece, SuiteCheck, SuiteOptions, SuiteReport,
    CLOSED_FORM_FAMILIES, DEFAULT_SEED, GROUPS,
};

/// Default tolerance of the residual and agreement checks.
pub const DEFAULT_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ValidateError {
    #[error("parameters classify as {got}, expected {expected}")]
    WrongRegime { expected: &'static str, got: Family },
    #[error("{family} has fewer than two methods available")]
    InsufficientMethods { family: Family },
    #[error("gamma_bar = {gamma_bar} is degenerate (n = {n})")]
    DegenerateGamma { gamma_bar: f64, n: i32 },
    #[error("closed form: {0}")]
    ClosedForm(#[from] ClosedFormError),
    #[error("ode: {0}")]
    Ode(NumericError),
    #[error("quadrature: {0}")]
    Quadrature(NumericError),
    #[error("hypergeometric: {0}")]
    Hypergeometric(SpecFunError),
    #[error("parameters: {0}")]
    Model(#[from] ModelError),
    #[error("unknown check group '{0}'")]
    UnknownGroup(String),
}

/// `max |ȧ² − z(a)| / max(1, |z(a)|)` over the samples.
pub fn friedmann_residual(params: &CosmoParams<f64>, traj: &Trajectory<f64>) -> f64 {
    traj.samples
        .iter()
        .filter(|s| s.a > 0.0 && s.adot.is_finite())
        .map(|s| {
            let z = z_of_a(params, s.a);
            (s.adot * s.adot - z).abs() / z.abs().max(1.0)
        })
        .fold(0.0, f64::max)
}

/// `E = ȧ²/2 − (Λ/6)a² − (C/2)a⁻²`, conserved by the radiation equation of
/// motion and equal to `−κ/2` on the constraint.
pub fn ermakov_value(params: &CosmoParams<f64>, a: f64, adot: f64) -> f64 {
    0.5 * adot * adot - params.lambda_cc() / 6.0 * a * a - 0.5 * params.c_int() / (a * a)
}

/// Per-sample Ermakov invariant; radiation (`γ̄ = 1`) only.
pub fn ermakov_invariant(
    params: &CosmoParams<f64>,
    traj: &Trajectory<f64>,
) -> Result<Vec<f64>, ValidateError> {
    if !is_radiation(params.gamma_bar()) {
        return Err(ValidateError::WrongRegime {
            expected: "radiation (gamma_bar = 1)",
            got: crate::model::classify(params).family,
        });
    }
    Ok(traj
        .samples
        .iter()
        .map(|s| ermakov_value(params, s.a, s.adot))
        .collect())
}

/// Largest `|E(t) − E(t₀)| / max(1, |E(t₀)|)` along a trajectory.
pub fn ermakov_drift(params: &CosmoParams<f64>, traj: &Trajectory<f64>) -> Result<f64, ValidateError> {
    let e = ermakov_invariant(params, traj)?;
    let Some(&e0) = e.first() else {
        return Ok(0.0);
    };
    Ok(e.iter()
        .map(|v| (v - e0).abs() / e0.abs().max(1.0))
        .fold(0.0, f64::max))
}

/// Five-point central first derivative.
pub fn fd_first<E>(mut f: impl FnMut(f64) -> Result<f64, E>, t: f64, h: f64) -> Result<f64, E> {
    let (m2, m1, p1, p2) = (f(t - 2.0 * h)?, f(t - h)?, f(t + h)?, f(t + 2.0 * h)?);
    Ok((m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * h))
}

/// Five-point central second derivative.
pub fn fd_second<E>(mut f: impl FnMut(f64) -> Result<f64, E>, t: f64, h: f64) -> Result<f64, E> {
    let (m2, m1, c) = (f(t - 2.0 * h)?, f(t - h)?, f(t)?);
    let (p1, p2) = (f(t + h)?, f(t + 2.0 * h)?);
    Ok((-m2 + 16.0 * m1 - 30.0 * c + 16.0 * p1 - p2) / (12.0 * h * h))
}

/// Step for the difference stencils at `t`: `10⁻³` of the window, reduced
/// near the edges so the stencil stays well inside.
pub fn fd_step(window: &TimeWindow<f64>, t: f64) -> f64 {
    let edge = (t - window.t_min).min(window.t_max - t);
    (1e-3 * window.length()).min(0.02 * edge)
}

/// Closed form sampled with its analytic derivative.
pub fn closed_form_trajectory(
    form: &ClosedForm<f64>,
    grid: &[f64],
) -> Result<Trajectory<f64>, ClosedFormError> {
    let samples = grid
        .iter()
        .map(|&t| {
            let st = form.state(t)?;
            Ok(Sample {
                t,
                a: st.a,
                adot: st.adot,
            })
        })
        .collect::<Result<Vec<_>, ClosedFormError>>()?;
    Ok(Trajectory::new(*form.params(), Method::ClosedForm, samples))
}

/// `max |ȧ_fd² − z(a)| / max(1, |z|)` at `n` interior midpoints, with a
/// five-point derivative of the closed form.
pub fn fd_friedmann_residual(
    form: &ClosedForm<f64>,
    window: &TimeWindow<f64>,
    n: usize,
) -> Result<f64, ClosedFormError> {
    let p = form.params();
    let mut worst = 0.0f64;
    for t in window.midpoints(n) {
        let a = form.scale_factor(t)?;
        let adot = fd_first(|s| form.scale_factor(s), t, fd_step(window, t))?;
        let z = z_of_a(p, a);
        worst = worst.max((adot * adot - z).abs() / z.abs().max(1.0));
    }
    Ok(worst)
}

/// `max |ä_fd − f(a)| / max(1, |f(a)|)` at `n` interior midpoints with a
/// centred five-point second difference.
pub fn fd_ode_residual(
    form: &ClosedForm<f64>,
    window: &TimeWindow<f64>,
    n: usize,
) -> Result<f64, ClosedFormError> {
    let p = form.params();
    let mut worst = 0.0f64;
    for t in window.midpoints(n) {
        let a = form.scale_factor(t)?;
        let acc = fd_second(|s| form.scale_factor(s), t, fd_step(window, t))?;
        let rhs = rhs_second_order(p, a);
        worst = worst.max((acc - rhs).abs() / rhs.abs().max(1.0));
    }
    Ok(worst)
}
