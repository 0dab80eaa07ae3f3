use crate::closedform::{dust_solve, BranchChoice, ClosedForm, TimeWindow};
use crate::model::{
    classify, degenerate_index, is_dust, is_radiation, rhs_second_order, z_of_a, CosmoParams,
    Curvature, Family,
};
use crate::numeric::{
    integrate_ode_from, quadrature_trajectory, Method, NumericError, OdeConfig, QuadConfig,
    Sample, Trajectory,
};
use crate::specfun::{dt_du, t_of_u, t_of_u_series, HypSolutionCoeffs, SpecFunError};

use super::{
    closed_form_trajectory, ermakov_drift, fd_ode_residual, friedmann_residual, CheckOutcome,
    PairDeviation, ValidateError, ValidationReport, DEFAULT_TOL,
};

/// Knobs for [`cross_check_with`].
#[derive(Debug, Clone, PartialEq)]
pub struct CrossOptions {
    /// Sign selection for curved radiation; resolved on the window if `None`.
    pub branch: Option<BranchChoice>,
    /// Restrict to these methods (at least two must be available).
    pub methods: Option<Vec<Method>>,
    pub ode: OdeConfig<f64>,
    pub quad: QuadConfig<f64>,
    pub tol: f64,
}

impl Default for CrossOptions {
    fn default() -> Self {
        Self {
            branch: None,
            methods: None,
            ode: OdeConfig::default(),
            quad: QuadConfig::default(),
            tol: DEFAULT_TOL,
        }
    }
}

/// Three-way comparison on `n_samples` grid points of `window` with default
/// options.
pub fn cross_check(
    params: &CosmoParams<f64>,
    window: &TimeWindow<f64>,
    n_samples: usize,
) -> Result<ValidationReport, ValidateError> {
    cross_check_with(params, window, n_samples, &CrossOptions::default())
}

/// Runs every available method on a shared grid, starting the numerical ones
/// from the analytic state at the window start, and compares them pairwise.
pub fn cross_check_with(
    params: &CosmoParams<f64>,
    window: &TimeWindow<f64>,
    n_samples: usize,
    opts: &CrossOptions,
) -> Result<ValidationReport, ValidateError> {
    if !window.is_finite() {
        return Err(crate::closedform::ClosedFormError::InvalidWindow {
            t_min: window.t_min,
            t_max: window.t_max,
        }
        .into());
    }
    let family = classify(params).family;
    let wanted = |m: Method| opts.methods.as_ref().is_none_or(|ms| ms.contains(&m));
    let mut available = vec![Method::Ode, Method::Quadrature];
    if family.has_closed_form() {
        available.insert(0, Method::ClosedForm);
    }
    if family == Family::HypergeometricGeneral {
        available.insert(0, Method::Hypergeometric);
    }
    let methods: Vec<Method> = available.into_iter().filter(|&m| wanted(m)).collect();
    if methods.len() < 2 {
        return Err(ValidateError::InsufficientMethods { family });
    }

    let grid = window.grid(n_samples);
    let t_start = window.t_min;
    let mut trajectories: Vec<Trajectory<f64>> = Vec::new();
    let mut branch = None;
    let mut max_ode_residual = None;

    // analytic anchor
    let form = if family.has_closed_form() {
        let f = match opts.branch {
            Some(b) => ClosedForm::new(params, b)?,
            None => ClosedForm::resolved(params, window)?,
        };
        if family.is_curved_radiation() {
            branch = Some(f.branch());
        }
        Some(f)
    } else {
        None
    };
    let (a_init, adot_init) = if let Some(f) = &form {
        let st = f.state(t_start)?;
        (st.a, st.adot)
    } else if family == Family::HypergeometricGeneral {
        let s = hypergeometric_sample(params, t_start).map_err(ValidateError::Hypergeometric)?;
        (s.a, s.adot)
    } else {
        // no analytic data: integrate from the reference point on the window
        anchor_without_closed_form(params, t_start)?
    };

    if let Some(f) = &form {
        if methods.contains(&Method::ClosedForm) {
            trajectories.push(closed_form_trajectory(f, &grid)?);
            max_ode_residual = Some(fd_ode_residual(f, window, n_samples)?);
        }
    }
    if methods.contains(&Method::Hypergeometric) {
        let samples = grid
            .iter()
            .map(|&t| hypergeometric_sample(params, t))
            .collect::<Result<Vec<_>, _>>()
            .map_err(ValidateError::Hypergeometric)?;
        trajectories.push(Trajectory::new(*params, Method::Hypergeometric, samples));
    }
    if methods.contains(&Method::Ode) {
        let tr = integrate_ode_from(params, t_start, a_init, adot_init, &grid, &opts.ode)
            .map_err(ValidateError::Ode)?;
        trajectories.push(tr);
    }
    if methods.contains(&Method::Quadrature) {
        let expanding = if adot_init != 0.0 {
            adot_init > 0.0
        } else {
            rhs_second_order(params, a_init) > 0.0
        };
        let tr = quadrature_trajectory(params, t_start, a_init, expanding, &grid, &opts.quad)
            .map_err(ValidateError::Quadrature)?;
        trajectories.push(tr);
    }

    let mut deviations = Vec::new();
    for i in 0..trajectories.len() {
        for j in i + 1..trajectories.len() {
            deviations.push(PairDeviation {
                first: trajectories[i].method,
                second: trajectories[j].method,
                value: trajectories[i].max_deviation(&trajectories[j]),
            });
        }
    }
    let max_cross = deviations.iter().map(|d| d.value).fold(0.0, f64::max);
    let max_friedmann = trajectories
        .iter()
        .map(|tr| friedmann_residual(params, tr))
        .fold(0.0, f64::max);
    let drift = if is_radiation(params.gamma_bar()) {
        trajectories
            .iter()
            .find(|tr| tr.method == Method::Ode)
            .map(|tr| ermakov_drift(params, tr))
            .transpose()?
    } else {
        None
    };

    let mut checks = vec![
        CheckOutcome::new("friedmann_residual", max_friedmann, opts.tol),
        CheckOutcome::new("cross_method_deviation", max_cross, opts.tol),
    ];
    if let Some(r) = max_ode_residual {
        checks.push(CheckOutcome::new("ode_residual", r, opts.tol));
    }
    if let Some(d) = drift {
        checks.push(CheckOutcome::new("ermakov_drift", d, opts.tol));
    }

    Ok(ValidationReport {
        family,
        params: params.raw(),
        branch,
        window: Some([window.t_min, window.t_max]),
        n_samples: grid.len(),
        methods,
        max_friedmann_residual: max_friedmann,
        max_ode_residual,
        max_cross_method_deviation: max_cross,
        deviations,
        ermakov_drift: drift,
        checks,
    })
}

/// `(a, ȧ)` at `t_start` for families without any analytic solution: the
/// ODE is run from `(t₀, a₀)` on the expanding branch.
fn anchor_without_closed_form(
    params: &CosmoParams<f64>,
    t_start: f64,
) -> Result<(f64, f64), ValidateError> {
    let a0 = params.a0();
    let z0 = z_of_a(params, a0);
    if z0 < 0.0 {
        return Err(ValidateError::Ode(NumericError::NonPositiveIntegrand { a: a0 }));
    }
    if t_start == params.t0() {
        return Ok((a0, z0.sqrt()));
    }
    let tr = integrate_ode_from(
        params,
        params.t0(),
        a0,
        z0.sqrt(),
        &[t_start],
        &OdeConfig::default(),
    )
    .map_err(ValidateError::Ode)?;
    let s = tr.samples[0];
    Ok((s.a, s.adot))
}

/// `(a, ȧ)` at `t` from the hypergeometric `t(u)` with matched constants,
/// inverted by bisection on `u`. Closed universes use the connection form
/// and reflect about the maximum for the contracting half.
pub fn hypergeometric_sample(params: &CosmoParams<f64>, t: f64) -> Result<Sample<f64>, SpecFunError> {
    let coeffs = HypSolutionCoeffs::matched(params)?;
    let g = params.gamma_bar();
    let a0 = params.a0();
    let out = || SpecFunError::UOutOfRange { u: f64::NAN };
    let (u, sign) = match params.kappa() {
        Curvature::Closed => {
            let t_max = coeffs.t0_origin();
            let (target, sign) = if t <= t_max {
                (t, 1.0)
            } else {
                (2.0 * t_max - t, -1.0)
            };
            if target <= coeffs.alpha {
                return Err(out());
            }
            let f = |u: f64| t_of_u(&coeffs, params, u);
            (bisect_increasing(f, 0.0, 1.0, target)?, sign)
        }
        _ => {
            if t <= coeffs.alpha {
                return Err(out());
            }
            // t grows with |u|; bracket on v = −u
            let f = |v: f64| t_of_u_series(&coeffs, params, -v);
            let mut hi = 1.0;
            let mut k = 0;
            while f(hi)? < t {
                hi *= 2.0;
                k += 1;
                if k > 200 {
                    return Err(out());
                }
            }
            (-bisect_increasing(f, 0.0, hi, t)?, 1.0)
        }
    };
    let a = a0 * u.abs().powf(1.0 / (2.0 * g));
    let adot = if u >= 1.0 {
        0.0
    } else {
        let da_du = a / (2.0 * g * u);
        sign * da_du / dt_du(&coeffs, u)?
    };
    Ok(Sample { t, a, adot })
}

/// Root of `f(x) = target` for increasing `f` on `(lo, hi]`; `f(lo)` is
/// never evaluated.
fn bisect_increasing(
    f: impl Fn(f64) -> Result<f64, SpecFunError>,
    mut lo: f64,
    mut hi: f64,
    target: f64,
) -> Result<f64, SpecFunError> {
    if f(hi)? <= target {
        return Ok(hi);
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid)? < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Table time `τ(u)` measured so that `a = 0` at `τ = 0` on the expanding
/// half (dust `κ = 1` keeps the maximum at `τ = 0`), for `a₀ = 1`.
fn table_time(gamma_bar: f64, kappa: Curvature, u: f64) -> Result<f64, ValidateError> {
    let one = 1.0f64;
    if is_radiation(gamma_bar) {
        // a² = 2τ − κτ²
        Ok(match kappa {
            Curvature::Closed => one - (one - u).sqrt(),
            _ => -one + (one - u).sqrt(),
        })
    } else {
        // the implicit relation, solved for s at A = |u|
        let big_a = u.abs();
        let r = big_a.sqrt();
        Ok(match kappa {
            Curvature::Closed => {
                let q = (one - big_a).max(0.0).sqrt();
                -(r * q + q.atan2(r))
            }
            _ => r * (one + big_a).sqrt() - r.asinh() - 2f64.sqrt() + one.asinh(),
        })
    }
}

/// Fits `(α, β)` of `t(u) = α + β g(u)` through two interior points of the
/// table solution for `(γ̄, κ)` and reports the largest deviation over
/// `|u| ∈ [0.05, 1]`.
pub fn hypergeometric_vs_tables(gamma_bar: f64, kappa: i64) -> Result<ValidationReport, ValidateError> {
    if let Some(n) = degenerate_index(gamma_bar) {
        return Err(ValidateError::DegenerateGamma { gamma_bar, n });
    }
    let params = CosmoParams::zero_lambda(gamma_bar, kappa, 1.0, 0.0)?;
    let family = classify(&params).family;
    if !(is_radiation(gamma_bar) || is_dust(gamma_bar)) || params.kappa().is_flat() {
        return Err(ValidateError::WrongRegime {
            expected: "curved radiation or dust with Lambda = 0",
            got: family,
        });
    }
    let k = params.kappa();
    let sign = if k == Curvature::Closed { 1.0 } else { -1.0 };
    let unit = HypSolutionCoeffs::with_constants(&params, 0.0, 1.0).map_err(ValidateError::Hypergeometric)?;
    let shape = |u: f64| -> Result<f64, ValidateError> {
        match k {
            Curvature::Closed => t_of_u(&unit, &params, u),
            _ => t_of_u_series(&unit, &params, u),
        }
        .map_err(ValidateError::Hypergeometric)
    };
    let (u1, u2) = (0.25 * sign, 0.75 * sign);
    let (g1, g2) = (shape(u1)?, shape(u2)?);
    let (t1, t2) = (table_time(gamma_bar, k, u1)?, table_time(gamma_bar, k, u2)?);
    let beta = (t2 - t1) / (g2 - g1);
    let alpha = t1 - beta * g1;

    let n = 200;
    let mut worst = 0.0f64;
    let mut samples_h = Vec::with_capacity(n + 1);
    let mut samples_t = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let m = 0.05 + 0.95 * i as f64 / n as f64;
        let u = sign * m;
        let th = alpha + beta * shape(u)?;
        let tt = table_time(gamma_bar, k, u)?;
        worst = worst.max((th - tt).abs());
        let a = u.abs().powf(1.0 / (2.0 * gamma_bar));
        samples_h.push(Sample { t: th, a, adot: f64::NAN });
        samples_t.push(Sample { t: tt, a, adot: f64::NAN });
    }
    // dust check: the table time inverts back to the same a
    if is_dust(gamma_bar) {
        for s in &samples_t {
            let tau = if k == Curvature::Closed { -s.t } else { s.t };
            let back = dust_solve(k, tau)?;
            worst = worst.max((back - s.a).abs());
        }
    }
    let matched = 1.0 / (gamma_bar + 1.0);
    let check = CheckOutcome::new("table_fit", worst, 1e-7).with_detail(format!(
        "alpha = {alpha:.12e}, beta = {beta:.12e} (matched beta = {matched:.12e})"
    ));
    Ok(ValidationReport {
        family,
        params: params.raw(),
        branch: None,
        window: None,
        n_samples: n + 1,
        methods: vec![Method::Hypergeometric, Method::ClosedForm],
        max_friedmann_residual: 0.0,
        max_ode_residual: None,
        max_cross_method_deviation: worst,
        deviations: vec![PairDeviation {
            first: Method::Hypergeometric,
            second: Method::ClosedForm,
            value: worst,
        }],
        ermakov_drift: None,
        checks: vec![check],
    })
}
