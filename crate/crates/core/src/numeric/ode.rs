use serde::{Deserialize, Serialize};

use super::trajectory::{Method, Sample, Trajectory};
use super::NumericError;
use crate::model::{rhs_second_order, CosmoParams};
use crate::scalar::{lit, to_f64, Scalar};

/// Integration stops once the scale factor drops below this value.
pub const A_FLOOR: f64 = 1e-12;

const MAX_STEPS: usize = 2_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OdeConfig<T> {
    pub rel_tol: T,
    pub abs_tol: T,
    pub max_step: T,
    /// Interpolate outputs instead of stepping onto each grid point.
    pub dense_output: bool,
}

impl<T: Scalar> Default for OdeConfig<T> {
    fn default() -> Self {
        Self {
            rel_tol: lit(1e-10),
            abs_tol: lit(1e-12),
            max_step: T::infinity(),
            dense_output: true,
        }
    }
}

impl<T: Scalar> OdeConfig<T> {
    pub fn with_tolerances(rel_tol: T, abs_tol: T) -> Self {
        Self {
            rel_tol,
            abs_tol,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<(), NumericError> {
        if !(self.rel_tol > T::zero() && self.abs_tol > T::zero()) {
            return Err(NumericError::InvalidConfig("tolerances must be positive"));
        }
        if !(self.max_step > T::zero()) {
            return Err(NumericError::InvalidConfig("max_step must be positive"));
        }
        Ok(())
    }
}

type State<T> = [T; 2];

struct Tableau<T> {
    c: [T; 5],
    a2: T,
    a3: [T; 2],
    a4: [T; 3],
    a5: [T; 4],
    a6: [T; 5],
    b: [T; 6],
    e: [T; 7],
    d: [T; 7],
}

impl<T: Scalar> Tableau<T> {
    fn new() -> Self {
        let r = |n: f64, d: f64| lit::<T>(n / d);
        Self {
            c: [r(1., 5.), r(3., 10.), r(4., 5.), r(8., 9.), T::one()],
            a2: r(1., 5.),
            a3: [r(3., 40.), r(9., 40.)],
            a4: [r(44., 45.), r(-56., 15.), r(32., 9.)],
            a5: [
                r(19372., 6561.),
                r(-25360., 2187.),
                r(64448., 6561.),
                r(-212., 729.),
            ],
            a6: [
                r(9017., 3168.),
                r(-355., 33.),
                r(46732., 5247.),
                r(49., 176.),
                r(-5103., 18656.),
            ],
            // b2 = 0 is skipped
            b: [
                r(35., 384.),
                r(500., 1113.),
                r(125., 192.),
                r(-2187., 6784.),
                r(11., 84.),
                T::zero(),
            ],
            e: [
                r(71., 57600.),
                T::zero(),
                r(-71., 16695.),
                r(71., 1920.),
                r(-17253., 339200.),
                r(22., 525.),
                r(-1., 40.),
            ],
            d: [
                r(-12715105075., 11282082432.),
                T::zero(),
                r(87487479700., 32700410799.),
                r(-10690763975., 1880347072.),
                r(701980252875., 199316789632.),
                r(-1453857185., 822651844.),
                r(69997945., 29380423.),
            ],
        }
    }
}

/// Quartic Hermite-type interpolant over one accepted step.
#[derive(Debug, Clone, Copy)]
struct Segment<T> {
    t_old: T,
    h: T,
    r: [State<T>; 5],
}

impl<T: Scalar> Segment<T> {
    fn eval(&self, t: T) -> State<T> {
        let th = (t - self.t_old) / self.h;
        let th1 = T::one() - th;
        let r = &self.r;
        let mut out = [T::zero(); 2];
        for i in 0..2 {
            out[i] = r[0][i] + th * (r[1][i] + th1 * (r[2][i] + th * (r[3][i] + th1 * r[4][i])));
        }
        out
    }

    fn t_new(&self) -> T {
        self.t_old + self.h
    }
}

struct Stepper<T, F> {
    f: F,
    cfg: OdeConfig<T>,
    tab: Tableau<T>,
    t: T,
    y: State<T>,
    k1: State<T>,
    h: T,
    dir: T,
    steps: usize,
}

fn axpy<T: Scalar>(y: &State<T>, h: T, terms: &[(T, &State<T>)]) -> State<T> {
    let mut out = *y;
    for i in 0..2 {
        let mut s = T::zero();
        for (c, k) in terms {
            s = s + *c * k[i];
        }
        out[i] = out[i] + h * s;
    }
    out
}

fn finite<T: Scalar>(y: &State<T>) -> bool {
    y[0].is_finite() && y[1].is_finite()
}

impl<T: Scalar, F: FnMut(T, &State<T>) -> State<T>> Stepper<T, F> {
    fn new(mut f: F, t0: T, y0: State<T>, dir: T, cfg: OdeConfig<T>) -> Self {
        let k1 = f(t0, &y0);
        let mut s = Self {
            f,
            cfg,
            tab: Tableau::new(),
            t: t0,
            y: y0,
            k1,
            h: T::zero(),
            dir,
        steps: 0,
        };
        s.h = s.initial_step();
        s
    }

    fn norm(&self, v: &State<T>, y: &State<T>) -> T {
        let mut acc = T::zero();
        for i in 0..2 {
            let sk = self.cfg.abs_tol + self.cfg.rel_tol * y[i].abs();
            acc = acc + (v[i] / sk).powi(2);
        }
        (acc / lit(2.0)).sqrt()
    }

    fn initial_step(&mut self) -> T {
        let d0 = self.norm(&self.y, &self.y);
        let d1 = self.norm(&self.k1, &self.y);
        let small = lit::<T>(1e-5);
        let mut h0 = if d0 < small || d1 < small {
            lit(1e-6)
        } else {
            lit::<T>(0.01) * d0 / d1
        };
        h0 = h0.min(self.cfg.max_step);
        let y1 = axpy(&self.y, self.dir * h0, &[(T::one(), &self.k1)]);
        let f1 = (self.f)(self.t + self.dir * h0, &y1);
        if !finite(&f1) {
            return h0 * lit(0.01);
        }
        let diff = [f1[0] - self.k1[0], f1[1] - self.k1[1]];
        let d2 = self.norm(&diff, &self.y) / h0;
        let m = d1.max(d2);
        let h1 = if m <= lit(1e-15) {
            (h0 * lit(1e-3)).max(lit(1e-6))
        } else {
            (lit::<T>(0.01) / m).powf(lit(0.2))
        };
        (h0 * lit(100.0)).min(h1).min(self.cfg.max_step)
    }

    /// One accepted step, never passing `t_limit`.
    fn step(&mut self, t_limit: T) -> Result<Segment<T>, NumericError> {
        let tab = &self.tab;
        let mut rejected = false;
        loop {
            self.steps += 1;
            if self.steps > MAX_STEPS {
                return Err(NumericError::TooManySteps { t: to_f64(self.t) });
            }
            let remaining = (t_limit - self.t).abs();
            let mut habs = self.h.min(self.cfg.max_step);
            let last = habs >= remaining;
            if last {
                habs = remaining;
            }
            let floor = lit::<T>(16.0) * T::epsilon() * self.t.abs();
            if habs <= floor || habs == T::zero() {
                return Err(NumericError::StepSizeUnderflow { t: to_f64(self.t) });
            }
            let h = self.dir * habs;
            let t = self.t;
            let y = self.y;
            let k1 = self.k1;
            let k2 = (self.f)(t + tab.c[0] * h, &axpy(&y, h, &[(tab.a2, &k1)]));
            let k3 = (self.f)(
                t + tab.c[1] * h,
                &axpy(&y, h, &[(tab.a3[0], &k1), (tab.a3[1], &k2)]),
            );
            let k4 = (self.f)(
                t + tab.c[2] * h,
                &axpy(&y, h, &[(tab.a4[0], &k1), (tab.a4[1], &k2), (tab.a4[2], &k3)]),
            );
            let k5 = (self.f)(
                t + tab.c[3] * h,
                &axpy(
                    &y,
                    h,
                    &[
                        (tab.a5[0], &k1),
                        (tab.a5[1], &k2),
                        (tab.a5[2], &k3),
                        (tab.a5[3], &k4),
                    ],
                ),
            );
            let k6 = (self.f)(
                t + h,
                &axpy(
                    &y,
                    h,
                    &[
                        (tab.a6[0], &k1),
                        (tab.a6[1], &k2),
                        (tab.a6[2], &k3),
                        (tab.a6[3], &k4),
                        (tab.a6[4], &k5),
                    ],
                ),
            );
            let y_new = axpy(
                &y,
                h,
                &[
                    (tab.b[0], &k1),
                    (tab.b[1], &k3),
                    (tab.b[2], &k4),
                    (tab.b[3], &k5),
                    (tab.b[4], &k6),
                ],
            );
            let t_new = if last { t_limit } else { t + h };
            let k7 = (self.f)(t_new, &y_new);
            if !finite(&y_new) || !finite(&k7) || !finite(&k6) {
                self.h = habs * lit(0.25);
                rejected = true;
                continue;
            }
            let ks = [&k1, &k2, &k3, &k4, &k5, &k6, &k7];
            let mut err_vec = [T::zero(); 2];
            for i in 0..2 {
                let mut s = T::zero();
                for (j, k) in ks.iter().enumerate() {
                    s = s + tab.e[j] * k[i];
                }
                err_vec[i] = h * s;
            }
            let mut acc = T::zero();
            for i in 0..2 {
                let sk = self.cfg.abs_tol + self.cfg.rel_tol * y[i].abs().max(y_new[i].abs());
                acc = acc + (err_vec[i] / sk).powi(2);
            }
            let err = (acc / lit(2.0)).sqrt();
            if !(err <= T::one()) {
                let fac = if err.is_finite() {
                    (lit::<T>(0.9) * err.powf(lit(-0.2))).max(lit(0.2))
                } else {
                    lit(0.25)
                };
                self.h = habs * fac;
                rejected = true;
                continue;
            }
            // dense output coefficients
            let mut r = [[T::zero(); 2]; 5];
            for i in 0..2 {
                let ydiff = y_new[i] - y[i];
                let bspl = h * k1[i] - ydiff;
                let mut dsum = T::zero();
                for (j, k) in ks.iter().enumerate() {
                    dsum = dsum + tab.d[j] * k[i];
                }
                r[0][i] = y[i];
                r[1][i] = ydiff;
                r[2][i] = bspl;
                r[3][i] = ydiff - h * k7[i] - bspl;
                r[4][i] = h * dsum;
            }
            let mut fac = if err == T::zero() {
                lit(10.0)
            } else {
                (lit::<T>(0.9) * err.powf(lit(-0.2))).min(lit(10.0)).max(lit(0.2))
            };
            if rejected {
                fac = fac.min(T::one());
            }
            self.h = habs * fac;
            self.t = t_new;
            self.y = y_new;
            self.k1 = k7;
            return Ok(Segment {
                t_old: t,
                h: t_new - t,
                r,
            });
        }
    }
}

/// Dormand–Prince 5(4) for a two-component system `y' = f(t, y)`.
///
/// `t_out` must be monotone and lie on one side of `t0`; the direction of
/// integration is taken from it. Returns the state at each output time.
pub fn dopri5<T, F>(
    f: F,
    t0: T,
    y0: [T; 2],
    t_out: &[T],
    cfg: &OdeConfig<T>,
) -> Result<Vec<[T; 2]>, NumericError>
where
    T: Scalar,
    F: FnMut(T, &[T; 2]) -> [T; 2],
{
    cfg.validate()?;
    run(f, t0, y0, t_out, cfg, |_, _| None, |t, _| NumericError::StepSizeUnderflow {
        t: to_f64(t),
    })
    .map(|r| r.values)
}

struct Run<T> {
    values: Vec<State<T>>,
    /// Time at which the watcher stopped the run.
    stopped: Option<T>,
}

enum Stop<T> {
    Event(T),
    Fail(NumericError),
}

fn run<T, F, W, U>(
    f: F,
    t0: T,
    y0: State<T>,
    t_out: &[T],
    cfg: &OdeConfig<T>,
    mut watch: W,
    underflow: U,
) -> Result<Run<T>, NumericError>
where
    T: Scalar,
    F: FnMut(T, &State<T>) -> State<T>,
    W: FnMut(&Segment<T>, &State<T>) -> Option<Stop<T>>,
    U: Fn(T, &State<T>) -> NumericError,
{
    let mut values = Vec::with_capacity(t_out.len());
    let Some(&t_end) = t_out.last() else {
        return Ok(Run {
            values,
            stopped: None,
        });
    };
    let dir = if t_end < t0 { -T::one() } else { T::one() };
    let mut idx = 0;
    while idx < t_out.len() && t_out[idx] == t0 {
        values.push(y0);
        idx += 1;
    }
    if idx == t_out.len() {
        return Ok(Run {
            values,
            stopped: None,
        });
    }
    let mut stepper = Stepper::new(f, t0, y0, dir, *cfg);
    while idx < t_out.len() {
        let limit = if cfg.dense_output { t_end } else { t_out[idx] };
        let seg = match stepper.step(limit) {
            Ok(seg) => seg,
            Err(NumericError::StepSizeUnderflow { .. }) => {
                return Err(underflow(stepper.t, &stepper.y))
            }
            Err(e) => return Err(e),
        };
        let y_new = stepper.y;
        let stop = watch(&seg, &y_new);
        let reach = match &stop {
            Some(Stop::Event(te)) => *te,
            _ => seg.t_new(),
        };
        while idx < t_out.len() && (t_out[idx] - reach) * dir <= T::zero() {
            let t = t_out[idx];
            values.push(if t == seg.t_new() { y_new } else { seg.eval(t) });
            idx += 1;
        }
        match stop {
            Some(Stop::Event(te)) => {
                return Ok(Run {
                    values,
                    stopped: Some(te),
                })
            }
            Some(Stop::Fail(e)) => return Err(e),
            None => {}
        }
    }
    Ok(Run {
        values,
        stopped: None,
    })
}

/// Bisection on the dense output for `g(y(t)) = 0` inside one step, assuming
/// a sign change between its ends.
fn locate<T: Scalar>(seg: &Segment<T>, g: impl Fn(&State<T>) -> T) -> T {
    let mut lo = seg.t_old;
    let mut hi = seg.t_new();
    let g_lo = g(&seg.eval(lo));
    for _ in 0..200 {
        let mid = lo + (hi - lo) * lit(0.5);
        if mid == lo || mid == hi {
            break;
        }
        if (g(&seg.eval(mid)) > T::zero()) == (g_lo > T::zero()) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo + (hi - lo) * lit(0.5)
}

fn scale_rhs<T: Scalar>(p: CosmoParams<T>) -> impl FnMut(T, &State<T>) -> State<T> {
    move |_t, y| [y[1], rhs_second_order(&p, y[0])]
}

/// Crossing time of the floor estimated from a near-singular state.
fn collapse_time<T: Scalar>(p: &CosmoParams<T>, t: T, y: &State<T>) -> T {
    let g1 = p.gamma_bar() + T::one();
    if g1 > T::zero() && y[1] != T::zero() && y[1].is_finite() {
        // a ∝ |t_c − t|^(1/(γ̄+1)) near the singularity
        t - y[0] / (g1 * y[1])
    } else {
        t
    }
}

fn integrate_one_side<T: Scalar>(
    p: &CosmoParams<T>,
    t_init: T,
    y0: State<T>,
    outs: &[T],
    cfg: &OdeConfig<T>,
) -> Result<Vec<State<T>>, NumericError> {
    let floor = lit::<T>(A_FLOOR);
    let a_scale = y0[0];
    let watch = |seg: &Segment<T>, y_new: &State<T>| {
        if y_new[0] <= floor {
            let tc = locate(seg, |y| y[0] - floor);
            return Some(Stop::Fail(NumericError::ScaleFactorCollapse { t: to_f64(tc) }));
        }
        None
    };
    run(scale_rhs(*p), t_init, y0, outs, cfg, watch, |t, y| {
        collapse_or_underflow(p, t, y, a_scale)
    })
    .map(|r| r.values)
}

/// A step-size collapse right next to `a = 0` is the singularity itself.
fn collapse_or_underflow<T: Scalar>(p: &CosmoParams<T>, t: T, y: &State<T>, a_scale: T) -> NumericError {
    let near_zero = y[0] < lit::<T>(1e-6) * a_scale.max(T::one());
    if near_zero && (y[0] / y[1]).abs() < lit::<T>(1e-8) * t.abs().max(T::one()) {
        NumericError::ScaleFactorCollapse {
            t: to_f64(collapse_time(p, t, y)),
        }
    } else {
        NumericError::StepSizeUnderflow { t: to_f64(t) }
    }
}

fn check_inputs<T: Scalar>(a_init: T, adot_init: T, grid: &[T]) -> Result<(), NumericError> {
    if !(a_init > T::zero()) || !a_init.is_finite() {
        return Err(NumericError::NonPositiveScaleFactor { a: to_f64(a_init) });
    }
    if !adot_init.is_finite() {
        return Err(NumericError::InvalidConfig("initial velocity must be finite"));
    }
    if grid.is_empty() || grid.windows(2).any(|w| !(w[0] < w[1])) || !grid[0].is_finite() {
        return Err(NumericError::InvalidGrid);
    }
    Ok(())
}

/// Integrates `ä = (Λ/3)a − C γ̄ a^(−(2γ̄+1))` from `(a_init, ȧ_init)` at
/// `t_grid[0]` and samples on `t_grid`.
pub fn integrate_ode<T: Scalar>(
    params: &CosmoParams<T>,
    a_init: T,
    adot_init: T,
    t_grid: &[T],
    cfg: &OdeConfig<T>,
) -> Result<Trajectory<T>, NumericError> {
    check_inputs(a_init, adot_init, t_grid)?;
    integrate_ode_from(params, t_grid[0], a_init, adot_init, t_grid, cfg)
}

/// Like [`integrate_ode`] with the initial data given at `t_init`, which may
/// lie anywhere relative to the grid; both directions are integrated.
pub fn integrate_ode_from<T: Scalar>(
    params: &CosmoParams<T>,
    t_init: T,
    a_init: T,
    adot_init: T,
    t_grid: &[T],
    cfg: &OdeConfig<T>,
) -> Result<Trajectory<T>, NumericError> {
    cfg.validate()?;
    check_inputs(a_init, adot_init, t_grid)?;
    let y0 = [a_init, adot_init];
    let split = t_grid.partition_point(|&t| t < t_init);
    let mut backward: Vec<T> = t_grid[..split].to_vec();
    backward.reverse();
    let mut back_vals = integrate_one_side(params, t_init, y0, &backward, cfg)?;
    back_vals.reverse();
    let fwd_vals = integrate_one_side(params, t_init, y0, &t_grid[split..], cfg)?;
    let samples = t_grid
        .iter()
        .zip(back_vals.into_iter().chain(fwd_vals))
        .map(|(&t, y)| Sample { t, a: y[0], adot: y[1] })
        .collect();
    Ok(Trajectory::new(*params, Method::Ode, samples))
}

/// Time needed to move from `a_from` to `a_to`, starting on the expanding
/// (`expanding = true`) or contracting branch with `ȧ = ±√z(a_from)`.
/// Gives up after `|t| > horizon`.
pub fn ode_transit_time<T: Scalar>(
    params: &CosmoParams<T>,
    a_from: T,
    a_to: T,
    expanding: bool,
    horizon: T,
    cfg: &OdeConfig<T>,
) -> Result<T, NumericError> {
    cfg.validate()?;
    let z = crate::model::z_of_a(params, a_from);
    if !(a_from > T::zero()) {
        return Err(NumericError::NonPositiveScaleFactor { a: to_f64(a_from) });
    }
    if z < T::zero() {
        return Err(NumericError::NonPositiveIntegrand { a: to_f64(a_from) });
    }
    let v = z.sqrt();
    let y0 = [a_from, if expanding { v } else { -v }];
    let floor = lit::<T>(A_FLOOR);
    let watch = |seg: &Segment<T>, y_new: &State<T>| {
        let a_old = seg.eval(seg.t_old)[0];
        if (a_old - a_to) * (y_new[0] - a_to) <= T::zero() && y_new[0] != a_old {
            return Some(Stop::Event(locate(seg, |y| y[0] - a_to)));
        }
        if y_new[0] <= floor {
            let tc = locate(seg, |y| y[0] - floor);
            return Some(Stop::Fail(NumericError::ScaleFactorCollapse { t: to_f64(tc) }));
        }
        None
    };
    let r = run(scale_rhs(*params), T::zero(), y0, &[horizon], cfg, watch, |t, y| {
        collapse_or_underflow(params, t, y, a_from)
    })?;
    r.stopped
        .ok_or(NumericError::TargetNotReached { a: to_f64(a_to) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::z_of_a;

    #[test]
    fn harmonic_oscillator_period() {
        let cfg = OdeConfig::default();
        let tau = 2.0 * std::f64::consts::PI;
        let out = dopri5(|_, y| [y[1], -y[0]], 0.0, [1.0, 0.0], &[tau / 4.0, tau], &cfg).unwrap();
        assert!(out[0][0].abs() < 1e-9);
        assert!((out[1][0] - 1.0).abs() < 1e-9);
        assert!(out[1][1].abs() < 1e-9);
    }

    #[test]
    fn dense_and_stepped_agree() {
        let grid: Vec<f64> = (0..=20).map(|i| i as f64 * 0.25).collect();
        let dense = dopri5(|_, y| [y[1], -y[0]], 0.0, [0.0, 1.0], &grid, &OdeConfig::default())
            .unwrap();
        let cfg = OdeConfig {
            dense_output: false,
            ..OdeConfig::default()
        };
        let stepped = dopri5(|_, y| [y[1], -y[0]], 0.0, [0.0, 1.0], &grid, &cfg).unwrap();
        for ((t, d), s) in grid.iter().zip(&dense).zip(&stepped) {
            assert!((d[0] - t.sin()).abs() < 1e-9);
            assert!((s[0] - t.sin()).abs() < 1e-9);
        }
    }

    #[test]
    fn backward_integration() {
        let out = dopri5(|_, y| [y[1], y[0]], 0.0, [1.0, 1.0], &[-1.0, -2.0], &OdeConfig::default())
            .unwrap();
        assert!((out[1][0] - (-2f64).exp()).abs() < 1e-10);
    }

    #[test]
    fn flat_dust_matches_power_law() {
        let p = CosmoParams::<f64>::zero_lambda(0.5, 0, 1.0, 0.0).unwrap();
        let grid: Vec<f64> = (0..=50).map(|i| i as f64 * 0.1).collect();
        let tr = integrate_ode(&p, 1.0, 1.0, &grid, &OdeConfig::default()).unwrap();
        for s in &tr.samples {
            let exact = (1.0 + 1.5 * s.t).powf(2.0 / 3.0);
            assert!((s.a - exact).abs() < 1e-8);
        }
    }

    #[test]
    fn de_sitter_exponential() {
        let p = CosmoParams::<f64>::zero_lambda(-1.0, 0, 1.0, 0.0).unwrap();
        let grid: Vec<f64> = (0..=10).map(|i| i as f64 * 0.5).collect();
        let tr = integrate_ode(&p, 1.0, 1.0, &grid, &OdeConfig::default()).unwrap();
        for s in &tr.samples {
            assert!((s.a - s.t.exp()).abs() < 1e-8 * s.t.exp());
        }
    }

    #[test]
    fn closed_radiation_recollapses() {
        // a² = 2τ − τ² from the bang; started at the maximum a = 1, τ = 1
        let p = CosmoParams::<f64>::zero_lambda(1.0, 1, 1.0, 0.0).unwrap();
        let grid = [0.0, 0.5, 0.999, 1.5];
        let err = integrate_ode(&p, 1.0, 0.0, &grid, &OdeConfig::default()).unwrap_err();
        match err {
            NumericError::ScaleFactorCollapse { t } => assert!((t - 1.0).abs() < 1e-6, "{t}"),
            other => panic!("{other:?}"),
        }
        let tr = integrate_ode(&p, 1.0, 0.0, &grid[..3], &OdeConfig::default()).unwrap();
        let a = tr.samples[1].a;
        assert!((a * a - 0.75).abs() < 1e-9);
    }

    #[test]
    fn two_sided_integration() {
        let p = CosmoParams::<f64>::zero_lambda(1.0, 1, 1.0, 0.0).unwrap();
        let grid = [-0.5, 0.0, 0.5];
        let tr = integrate_ode_from(&p, 0.0, 1.0, 0.0, &grid, &OdeConfig::default()).unwrap();
        assert!((tr.samples[0].a - tr.samples[2].a).abs() < 1e-10);
        assert!((tr.samples[0].adot + tr.samples[2].adot).abs() < 1e-9);
        assert!(tr.residual_friedmann.iter().all(|r| r.abs() < 1e-9));
    }

    #[test]
    fn transit_time_matches_closed_form() {
        let p = CosmoParams::<f64>::zero_lambda(1.0, 0, 1.0, 0.0).unwrap();
        // flat radiation: t = (a² − 1)/2
        let t = ode_transit_time(&p, 1.0, 3.0, true, 10.0, &OdeConfig::default()).unwrap();
        assert!((t - 4.0).abs() < 1e-9);
        assert!(matches!(
            ode_transit_time(&p, 1.0, 3.0, true, 1.0, &OdeConfig::default()),
            Err(NumericError::TargetNotReached { .. })
        ));
        assert!(z_of_a(&p, 1.0) > 0.0);
    }

    #[test]
    fn rejects_bad_input() {
        let p = CosmoParams::<f64>::zero_lambda(1.0, 0, 1.0, 0.0).unwrap();
        let cfg = OdeConfig::default();
        assert!(integrate_ode(&p, 0.0, 1.0, &[0.0, 1.0], &cfg).is_err());
        assert_eq!(
            integrate_ode(&p, 1.0, 1.0, &[1.0, 0.0], &cfg),
            Err(NumericError::InvalidGrid)
        );
        let bad = OdeConfig {
            rel_tol: 0.0,
            ..cfg
        };
        assert!(bad.validate().is_err());
    }
}
