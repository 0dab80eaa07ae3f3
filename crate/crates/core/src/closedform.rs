//! Closed-form scale factors.
//!
//! Radiation with `Λ ≠ 0` is written for `X = a²`, `θ = 2λ(t − t₀)`,
//! `λ = √(|Λ|/3)`, `Ψ = √|Δ|`:
//!
//! ```text
//! Δ < 0          : 2λ²X = s + σ Ψ sinh θ
//! Δ = 0          :    X = s/(2λ²) + σ exp(εθ)
//! Δ > 0, Λ > 0   : 2λ²X = s + σ Ψ cosh θ
//! Λ < 0          : 2λ²X = s + σ Ψ sin θ
//! ```
//!
//! The signs `(s, σ, ε)` are not fixed by the family; [`resolve_branch`] keeps
//! the ones for which `ȧ² = z(a)` holds on a window. Only `s = κ` (`Λ > 0`)
//! and `s = −κ` (`Λ < 0`) survive.
//!
//! The `Λ = 0` families require `C₁ = a₀^(2γ̄)` (`C₂ = a₀^(−2)`).

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{
    classify, is_vacuum, lambda_scale, reference_constant, z_of_a, CosmoParams, Curvature,
    Family,
};
use crate::scalar::{lit, to_f64, Scalar};

/// Samples used by [`resolve_branch`].
pub const BRANCH_SAMPLES: usize = 32;
/// Friedmann tolerance used by [`resolve_branch`].
pub const BRANCH_TOL: f64 = 1e-8;
/// Residual reached by the implicit dust inversion.
pub const DUST_RESIDUAL_TOL: f64 = 1e-12;

const NORMALIZATION_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ClosedFormError {
    #[error("t = {t} is outside the validity window of the closed form")]
    OutsideWindow { t: f64 },
    #[error("parameters classify as {got}, not {expected}")]
    WrongRegime { expected: &'static str, got: Family },
    #[error("no bracket for the implicit relation at t = {t}")]
    NoBracket { t: f64 },
    #[error("no sign selection satisfies the Friedmann constraint on the window")]
    NoValidBranch,
    #[error("{} sign selections satisfy the Friedmann constraint on the window", .0.len())]
    AmbiguousBranch(Vec<BranchChoice>),
    #[error("c_int = {got} but the Lambda = 0 forms need a0^(2 gamma_bar) = {expected}")]
    NormalizationMismatch { expected: f64, got: f64 },
    #[error("invalid time window [{t_min}, {t_max}]")]
    InvalidWindow { t_min: f64, t_max: f64 },
    #[error("scale factor {a} is not reached on this branch")]
    Unreachable { a: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value<T: Scalar>(self) -> T {
        match self {
            Sign::Plus => T::one(),
            Sign::Minus => -T::one(),
        }
    }

    fn of<T: Scalar>(x: T) -> Sign {
        if x < T::zero() {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

/// Resolved sign selection for the radiation families.
///
/// `offset_sign` is `s`, `term_sign` is `σ`, `growth_sign` is `ε` (only used
/// at `Δ = 0`). The outer sign on `a` is always `+`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BranchChoice {
    pub outer_sign: Sign,
    pub offset_sign: Sign,
    pub term_sign: Sign,
    pub growth_sign: Sign,
}

impl BranchChoice {
    pub const TRIVIAL: BranchChoice = BranchChoice {
        outer_sign: Sign::Plus,
        offset_sign: Sign::Plus,
        term_sign: Sign::Plus,
        growth_sign: Sign::Plus,
    };

    pub fn new(offset_sign: Sign, term_sign: Sign, growth_sign: Sign) -> Self {
        Self {
            outer_sign: Sign::Plus,
            offset_sign,
            term_sign,
            growth_sign,
        }
    }

    /// Every selection considered for a family.
    pub fn candidates(family: Family) -> Vec<BranchChoice> {
        if !family.is_curved_radiation() {
            return vec![Self::TRIVIAL];
        }
        let growth: &[Sign] = if family == Family::RadiationLambdaCritical {
            &[Sign::Plus, Sign::Minus]
        } else {
            &[Sign::Plus]
        };
        let mut out = Vec::new();
        for &s in &[Sign::Plus, Sign::Minus] {
            for &sigma in &[Sign::Plus, Sign::Minus] {
                for &eps in growth {
                    out.push(Self::new(s, sigma, eps));
                }
            }
        }
        out
    }
}

impl fmt::Display for BranchChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "s={} sigma={} eps={}",
            self.offset_sign, self.term_sign, self.growth_sign
        )
    }
}

/// Interval of comoving time. Bounds may be infinite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TimeWindow<T> {
    pub t_min: T,
    pub t_max: T,
    /// `a → 0` (or a domain boundary) at `t_min`.
    pub singular_start: bool,
    /// `a → 0` (or a domain boundary) at `t_max`.
    pub singular_end: bool,
}

impl<T: Scalar> TimeWindow<T> {
    pub fn new(t_min: T, t_max: T) -> Result<Self, ClosedFormError> {
        if !(t_min < t_max) {
            return Err(ClosedFormError::InvalidWindow {
                t_min: to_f64(t_min),
                t_max: to_f64(t_max),
            });
        }
        Ok(Self {
            t_min,
            t_max,
            singular_start: false,
            singular_end: false,
        })
    }

    pub fn length(&self) -> T {
        self.t_max - self.t_min
    }

    pub fn is_finite(&self) -> bool {
        self.t_min.is_finite() && self.t_max.is_finite()
    }

    pub fn contains(&self, t: T) -> bool {
        t >= self.t_min && t <= self.t_max
    }

    /// Drops `fraction` of the length at each end.
    pub fn shrink(&self, fraction: T) -> Self {
        let d = self.length() * fraction;
        Self {
            t_min: self.t_min + d,
            t_max: self.t_max - d,
            singular_start: false,
            singular_end: false,
        }
    }

    /// Finite sub-window: unbounded ends are cut `span` away from the finite
    /// one, or placed symmetrically around `center` when both are unbounded.
    pub fn clip(&self, center: T, span: T) -> Self {
        let half = span * lit(0.5);
        match (self.t_min.is_finite(), self.t_max.is_finite()) {
            (true, true) => *self,
            (true, false) => Self {
                t_max: self.t_min + span,
                singular_end: false,
                ..*self
            },
            (false, true) => Self {
                t_min: self.t_max - span,
                singular_start: false,
                ..*self
            },
            (false, false) => Self {
                t_min: center - half,
                t_max: center + half,
                singular_start: false,
                singular_end: false,
            },
        }
    }

    /// `n` midpoint samples `t_min + (i + 1/2) L / n`.
    pub fn midpoints(&self, n: usize) -> Vec<T> {
        let nf = lit::<T>(n as f64);
        (0..n)
            .map(|i| self.t_min + (lit::<T>(i as f64) + lit(0.5)) * self.length() / nf)
            .collect()
    }

    /// `n ≥ 2` samples including both ends.
    pub fn grid(&self, n: usize) -> Vec<T> {
        let last = lit::<T>((n.max(2) - 1) as f64);
        (0..n.max(2))
            .map(|i| self.t_min + lit::<T>(i as f64) * self.length() / last)
            .collect()
    }
}

/// Scale factor and its time derivative.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct State<T> {
    pub a: T,
    pub adot: T,
}

/// A closed-form family bound to its parameters and sign selection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedForm<T> {
    params: CosmoParams<T>,
    family: Family,
    branch: BranchChoice,
    lambda: T,
}

impl<T: Scalar> ClosedForm<T> {
    pub fn new(params: &CosmoParams<T>, branch: BranchChoice) -> Result<Self, ClosedFormError> {
        let family = classify(params).family;
        if !family.has_closed_form() {
            return Err(ClosedFormError::WrongRegime {
                expected: "a family with a closed form",
                got: family,
            });
        }
        if params.lambda_cc() == T::zero() {
            check_normalization(params)?;
        }
        let branch = if family.is_curved_radiation() {
            branch
        } else {
            BranchChoice::TRIVIAL
        };
        Ok(Self {
            params: *params,
            family,
            branch,
            lambda: lambda_scale(params),
        })
    }

    /// Binds the unique branch valid on `window`.
    pub fn resolved(
        params: &CosmoParams<T>,
        window: &TimeWindow<T>,
    ) -> Result<Self, ClosedFormError> {
        let branch = resolve_branch(params, window)?;
        Self::new(params, branch)
    }

    pub fn params(&self) -> &CosmoParams<T> {
        &self.params
    }
    pub fn family(&self) -> Family {
        self.family
    }
    pub fn branch(&self) -> BranchChoice {
        self.branch
    }

    pub fn scale_factor(&self, t: T) -> Result<T, ClosedFormError> {
        Ok(self.state(t)?.a)
    }

    /// `(a, ȧ)` at time `t`, with analytic `ȧ` (implicit differentiation for dust).
    pub fn state(&self, t: T) -> Result<State<T>, ClosedFormError> {
        let p = &self.params;
        let tau = t - p.t0();
        let a0 = p.a0();
        let one = T::one();
        let two = lit::<T>(2.0);
        let outside = || ClosedFormError::OutsideWindow { t: to_f64(t) };
        match self.family {
            f if f.is_curved_radiation() => {
                let (x, xdot) = self.curved_radiation_square(tau);
                from_square(x, xdot).ok_or_else(outside)
            }
            Family::FlatRadiationSinh | Family::FlatRadiationTrig => {
                let theta = two * self.lambda * tau;
                let (s, ds) = if self.family == Family::FlatRadiationSinh {
                    if theta < T::zero() {
                        return Err(outside());
                    }
                    (theta.sinh(), theta.cosh())
                } else {
                    if theta < T::zero() || theta > T::PI() {
                        return Err(outside());
                    }
                    (theta.sin(), theta.cos())
                };
                let k = p.c_int().sqrt() / self.lambda;
                from_square(k * s.max(T::zero()), k * two * self.lambda * ds).ok_or_else(outside)
            }
            Family::ZeroLambdaFlatPowerLaw => {
                let g1 = p.gamma_bar() + one;
                let base = one + g1 * tau / a0;
                if base < T::zero() || (base == T::zero() && g1 < T::zero()) {
                    return Err(outside());
                }
                let a = a0 * base.powf(g1.recip());
                let adot = base.powf(-p.gamma_bar() / g1);
                Ok(State { a, adot })
            }
            Family::ZeroLambdaDeSitterFlat => {
                let a = a0 * (tau / a0).exp();
                Ok(State { a, adot: a / a0 })
            }
            Family::ZeroLambdaCurvedRadiation => {
                let (x, xdot) = match p.kappa() {
                    Curvature::Closed => (tau * (two * a0 - tau), two * (a0 - tau)),
                    _ => (tau * (two * a0 + tau), two * (a0 + tau)),
                };
                if tau < T::zero() {
                    return Err(outside());
                }
                from_square(x, xdot).ok_or_else(outside)
            }
            Family::ZeroLambdaCurvedVacuum => {
                let s = tau / a0;
                Ok(match p.kappa() {
                    Curvature::Closed => State {
                        a: a0 * s.cosh(),
                        adot: s.sinh(),
                    },
                    _ => {
                        let arg = s + one.asinh();
                        if arg < T::zero() {
                            return Err(outside());
                        }
                        State {
                            a: a0 * arg.sinh(),
                            adot: arg.cosh(),
                        }
                    }
                })
            }
            Family::ZeroLambdaCurvedDust => {
                let big_a = dust_solve(p.kappa(), tau / a0).map_err(|e| match e {
                    ClosedFormError::NoBracket { .. } => ClosedFormError::NoBracket { t: to_f64(t) },
                    other => other,
                })?;
                let a = a0 * big_a;
                let adot = match p.kappa() {
                    Curvature::Closed if tau == T::zero() => T::zero(),
                    Curvature::Closed => {
                        -Sign::of(tau).value::<T>() * ((one - big_a) / big_a).sqrt()
                    }
                    _ => ((one + big_a) / big_a).sqrt(),
                };
                Ok(State { a, adot })
            }
            other => Err(ClosedFormError::WrongRegime {
                expected: "a family with a closed form",
                got: other,
            }),
        }
    }

    fn psi(&self) -> T {
        let p = &self.params;
        let disc = crate::model::discriminant(p);
        disc.abs().sqrt()
    }

    /// `1 − Ψ`, computed without cancellation from `Ψ² − 1 = −(4/3)C Λ`.
    fn one_minus_psi(&self) -> T {
        let p = &self.params;
        let psi = self.psi();
        lit::<T>(4.0) * p.c_int() * p.lambda_cc() / lit(3.0) / (T::one() + psi)
    }

    /// `(X, dX/dt)` for the curved radiation families, `X = a²`.
    fn curved_radiation_square(&self, tau: T) -> (T, T) {
        let one = T::one();
        let two = lit::<T>(2.0);
        let lam = self.lambda;
        let omega = two * lam;
        let theta = omega * tau;
        let norm = two * lam * lam;
        let s = self.branch.offset_sign.value::<T>();
        let sigma = self.branch.term_sign.value::<T>();
        let eps = self.branch.growth_sign.value::<T>();
        let psi = self.psi();
        let half = lit::<T>(0.5);
        match self.family {
            Family::RadiationLambdaLargeSinh => {
                let num = s + sigma * psi * theta.sinh();
                (num / norm, sigma * psi * omega * theta.cosh() / norm)
            }
            Family::RadiationLambdaCritical => {
                let e = (eps * theta).exp();
                (s / norm + sigma * e, sigma * eps * omega * e)
            }
            Family::RadiationLambdaSmallCosh => {
                let num = if s * sigma < T::zero() {
                    let sh = (theta * half).sinh();
                    s * (self.one_minus_psi() - two * psi * sh * sh)
                } else {
                    s + sigma * psi * theta.cosh()
                };
                (num / norm, sigma * psi * omega * theta.sinh() / norm)
            }
            Family::RadiationLambdaNegativeTrig => {
                let quarter = T::FRAC_PI_4();
                let e = s * sigma;
                let sn = if e > T::zero() {
                    (theta * half + quarter).sin()
                } else {
                    (theta * half - quarter).sin()
                };
                let num = s * (self.one_minus_psi() + two * psi * sn * sn);
                let _ = one;
                (num / norm, sigma * psi * omega * theta.cos() / norm)
            }
            _ => unreachable!("not a curved radiation family"),
        }
    }

    /// Time since the family origin `θ/(2λ)` at which the bound branch passes
    /// through `a` while expanding (`expanding = true`) or contracting.
    pub fn phase_at(&self, a: T, expanding: bool) -> Result<T, ClosedFormError> {
        if !self.family.is_curved_radiation() {
            return Err(ClosedFormError::WrongRegime {
                expected: "curved radiation with Lambda != 0",
                got: self.family,
            });
        }
        let two = lit::<T>(2.0);
        let lam = self.lambda;
        let omega = two * lam;
        let norm = two * lam * lam;
        let s = self.branch.offset_sign.value::<T>();
        let sigma = self.branch.term_sign.value::<T>();
        let eps = self.branch.growth_sign.value::<T>();
        let dir = if expanding { T::one() } else { -T::one() };
        let psi = self.psi();
        let unreachable = || ClosedFormError::Unreachable { a: to_f64(a) };
        let v = (norm * a * a - s) / (sigma * psi);
        let theta = match self.family {
            Family::RadiationLambdaLargeSinh => {
                if sigma != dir {
                    return Err(unreachable());
                }
                v.asinh()
            }
            Family::RadiationLambdaCritical => {
                let e = (a * a - s / norm) / sigma;
                if e <= T::zero() || sigma * eps != dir {
                    return Err(unreachable());
                }
                eps * e.ln()
            }
            Family::RadiationLambdaSmallCosh => {
                if v < T::one() {
                    return Err(unreachable());
                }
                sigma * dir * v.acosh()
            }
            Family::RadiationLambdaNegativeTrig => {
                if v.abs() > T::one() {
                    return Err(unreachable());
                }
                let base = v.asin();
                if sigma * dir > T::zero() {
                    base
                } else {
                    T::PI() - base
                }
            }
            _ => unreachable!(),
        };
        Ok(theta / omega)
    }

    /// Intervals where the formula yields a real scale factor (principal
    /// pieces only for the periodic family).
    pub fn validity_windows(&self) -> Vec<TimeWindow<T>> {
        let p = &self.params;
        let t0 = p.t0();
        let a0 = p.a0();
        let inf = T::infinity();
        let one = T::one();
        let two = lit::<T>(2.0);
        let piece = |lo: T, hi: T, s: bool, e: bool| TimeWindow {
            t_min: t0 + lo,
            t_max: t0 + hi,
            singular_start: s,
            singular_end: e,
        };
        match self.family {
            Family::ZeroLambdaFlatPowerLaw => {
                let g1 = p.gamma_bar() + one;
                let edge = -a0 / g1;
                if g1 > T::zero() {
                    vec![piece(edge, inf, true, false)]
                } else {
                    vec![piece(-inf, edge, false, true)]
                }
            }
            Family::ZeroLambdaDeSitterFlat => vec![piece(-inf, inf, false, false)],
            Family::FlatRadiationSinh => vec![piece(T::zero(), inf, true, false)],
            Family::FlatRadiationTrig => {
                vec![piece(T::zero(), T::PI() / (two * self.lambda), true, true)]
            }
            Family::ZeroLambdaCurvedRadiation => match p.kappa() {
                Curvature::Closed => vec![piece(T::zero(), two * a0, true, true)],
                _ => vec![piece(T::zero(), inf, true, false)],
            },
            Family::ZeroLambdaCurvedDust => match p.kappa() {
                Curvature::Closed => {
                    let h = a0 * T::FRAC_PI_2();
                    vec![piece(-h, h, true, true)]
                }
                _ => {
                    let start = -a0 * (two.sqrt() - one.asinh());
                    vec![piece(start, inf, true, false)]
                }
            },
            Family::ZeroLambdaCurvedVacuum => match p.kappa() {
                Curvature::Closed => vec![piece(-inf, inf, false, false)],
                _ => vec![piece(-a0 * one.asinh(), inf, true, false)],
            },
            f if f.is_curved_radiation() => self.curved_radiation_windows(),
            _ => Vec::new(),
        }
    }

    fn curved_radiation_windows(&self) -> Vec<TimeWindow<T>> {
        let t0 = self.params.t0();
        let inf = T::infinity();
        let one = T::one();
        let two = lit::<T>(2.0);
        let omega = two * self.lambda;
        let norm = two * self.lambda * self.lambda;
        let s = self.branch.offset_sign.value::<T>();
        let sigma = self.branch.term_sign.value::<T>();
        let eps = self.branch.growth_sign.value::<T>();
        let psi = self.psi();
        // windows in θ, mapped to t afterwards
        let w = |lo: T, hi: T, a: bool, b: bool| TimeWindow {
            t_min: t0 + lo / omega,
            t_max: t0 + hi / omega,
            singular_start: a,
            singular_end: b,
        };
        let plus = sigma > T::zero();
        match self.family {
            Family::RadiationLambdaLargeSinh => {
                let edge = (-s * sigma / psi).asinh();
                if plus {
                    vec![w(edge, inf, true, false)]
                } else {
                    vec![w(-inf, edge, false, true)]
                }
            }
            Family::RadiationLambdaCritical => {
                let pos_s = s > T::zero();
                match (plus, pos_s) {
                    (true, true) => vec![w(-inf, inf, false, false)],
                    (false, false) => Vec::new(),
                    _ => {
                        // e^{εθ} ≥ 1/(2λ²) when σ = +, ≤ when σ = −
                        let edge = eps * (-norm.ln());
                        let lower = (eps > T::zero()) == plus;
                        if lower {
                            vec![w(edge, inf, true, false)]
                        } else {
                            vec![w(-inf, edge, false, true)]
                        }
                    }
                }
            }
            Family::RadiationLambdaSmallCosh => {
                let pos_s = s > T::zero();
                match (plus, pos_s) {
                    (true, true) => vec![w(-inf, inf, false, false)],
                    (false, false) => Vec::new(),
                    (true, false) => {
                        if psi >= one {
                            vec![w(-inf, inf, false, false)]
                        } else {
                            let edge = psi.recip().acosh();
                            vec![w(-inf, -edge, false, true), w(edge, inf, true, false)]
                        }
                    }
                    (false, true) => {
                        if psi >= one {
                            Vec::new()
                        } else {
                            let edge = psi.recip().acosh();
                            vec![w(-edge, edge, true, true)]
                        }
                    }
                }
            }
            Family::RadiationLambdaNegativeTrig => {
                let r = (-s / psi).asin();
                if plus {
                    vec![w(r, T::PI() - r, true, true)]
                } else {
                    vec![w(-T::PI() + r, -r, true, true)]
                }
            }
            _ => Vec::new(),
        }
    }
}

fn from_square<T: Scalar>(x: T, xdot: T) -> Option<State<T>> {
    if !(x >= T::zero()) {
        return None;
    }
    let a = x.sqrt();
    let adot = if a == T::zero() {
        Sign::of(xdot).value::<T>() * T::infinity()
    } else {
        xdot / (lit::<T>(2.0) * a)
    };
    Some(State { a, adot })
}

fn check_normalization<T: Scalar>(p: &CosmoParams<T>) -> Result<(), ClosedFormError> {
    let expected = reference_constant(p.gamma_bar(), p.a0());
    if (p.c_int() - expected).abs() > lit::<T>(NORMALIZATION_TOL) * T::one().max(expected) {
        return Err(ClosedFormError::NormalizationMismatch {
            expected: to_f64(expected),
            got: to_f64(p.c_int()),
        });
    }
    Ok(())
}

fn require(
    family: Family,
    expected: &'static str,
    ok: impl Fn(Family) -> bool,
) -> Result<(), ClosedFormError> {
    if ok(family) {
        Ok(())
    } else {
        Err(ClosedFormError::WrongRegime {
            expected,
            got: family,
        })
    }
}

/// Curved (`κ = ±1`) radiation universe with `Λ ≠ 0`.
pub fn radiation_curved<T: Scalar>(
    params: &CosmoParams<T>,
    branch: BranchChoice,
    t: T,
) -> Result<T, ClosedFormError> {
    require(classify(params).family, "curved radiation with Lambda != 0", |f| {
        f.is_curved_radiation()
    })?;
    ClosedForm::new(params, branch)?.scale_factor(t)
}

/// Flat radiation universe with `Λ ≠ 0`:
/// `a = C^(1/4)/√λ · √sinh(2λ(t−t₀))` or `√sin(2λ(t−t₀))`.
pub fn radiation_flat<T: Scalar>(params: &CosmoParams<T>, t: T) -> Result<T, ClosedFormError> {
    require(classify(params).family, "flat radiation with Lambda != 0", |f| {
        matches!(f, Family::FlatRadiationSinh | Family::FlatRadiationTrig)
    })?;
    ClosedForm::new(params, BranchChoice::TRIVIAL)?.scale_factor(t)
}

/// Flat `Λ = 0`: power law `a₀[1 + (γ̄+1)(t−t₀)/a₀]^(1/(γ̄+1))`, or
/// `a₀ exp((t−t₀)/a₀)` on the vacuum line.
pub fn zero_lambda_flat<T: Scalar>(params: &CosmoParams<T>, t: T) -> Result<T, ClosedFormError> {
    require(classify(params).family, "flat with Lambda = 0", |f| {
        matches!(
            f,
            Family::ZeroLambdaFlatPowerLaw | Family::ZeroLambdaDeSitterFlat
        )
    })?;
    ClosedForm::new(params, BranchChoice::TRIVIAL)?.scale_factor(t)
}

/// Curved `Λ = 0` radiation (`γ̄ = 1`) and vacuum (`γ̄ = −1`) rows.
pub fn zero_lambda_curved_explicit<T: Scalar>(
    params: &CosmoParams<T>,
    t: T,
) -> Result<T, ClosedFormError> {
    require(classify(params).family, "curved radiation or vacuum with Lambda = 0", |f| {
        matches!(
            f,
            Family::ZeroLambdaCurvedRadiation | Family::ZeroLambdaCurvedVacuum
        )
    })?;
    ClosedForm::new(params, BranchChoice::TRIVIAL)?.scale_factor(t)
}

/// Curved `Λ = 0` dust (`γ̄ = 1/2`), inverting the implicit relation.
pub fn zero_lambda_dust_implicit<T: Scalar>(
    params: &CosmoParams<T>,
    t: T,
) -> Result<T, ClosedFormError> {
    require(classify(params).family, "curved dust with Lambda = 0", |f| {
        f == Family::ZeroLambdaCurvedDust
    })?;
    ClosedForm::new(params, BranchChoice::TRIVIAL)?.scale_factor(t)
}

/// Epoch of the restricted power law: `t₀ = a₀/(γ̄+1)`.
pub fn restricted_power_law_epoch<T: Scalar>(gamma_bar: T, a0: T) -> T {
    a0 / (gamma_bar + T::one())
}

/// `a(t) = a₀ (t/t₀)^(1/(γ̄+1))` with `t₀ = a₀/(γ̄+1)`.
pub fn restricted_power_law<T: Scalar>(gamma_bar: T, a0: T, t: T) -> T {
    let t0 = restricted_power_law_epoch(gamma_bar, a0);
    a0 * (t / t0).powf((gamma_bar + T::one()).recip())
}

/// Epoch of the restricted de Sitter form: `t₀ = a₀ ln a₀`.
pub fn restricted_de_sitter_epoch<T: Scalar>(a0: T) -> T {
    a0 * a0.ln()
}

/// The flat vacuum solution with `t₀ = a₀ ln a₀` reduces to `a(t) = e^(t/a₀)`.
pub fn restricted_de_sitter<T: Scalar>(a0: T, t: T) -> T {
    (t / a0).exp()
}

/// Left side minus right side of the implicit dust relation for `A = a/a₀`
/// and `s = (t − t₀)/a₀`.
///
/// `κ = 1`: `√A√(1−A) + arcsin√(1−A) − |s|`;
/// `κ = −1`: `√A√(1+A) − arccosh√(1+A) − (s + √2 − arccosh√2)`.
pub fn dust_relation_residual<T: Scalar>(kappa: Curvature, big_a: T, s: T) -> T {
    dust_lhs(kappa, big_a) - dust_target(kappa, s)
}

fn dust_lhs<T: Scalar>(kappa: Curvature, big_a: T) -> T {
    let one = T::one();
    let r = big_a.sqrt();
    match kappa {
        // arcsin√(1−A) = atan2(√(1−A), √A)
        Curvature::Closed => {
            let q = (one - big_a).sqrt();
            r * q + q.atan2(r)
        }
        // arccosh√(1+A) = arcsinh√A
        _ => r * (one + big_a).sqrt() - r.asinh(),
    }
}

fn dust_target<T: Scalar>(kappa: Curvature, s: T) -> T {
    let one = T::one();
    match kappa {
        Curvature::Closed => s.abs(),
        _ => s + lit::<T>(2.0).sqrt() - one.asinh(),
    }
}

/// Solves the dust relation for `A` by bisection.
pub fn dust_solve<T: Scalar>(kappa: Curvature, s: T) -> Result<T, ClosedFormError> {
    let target = dust_target(kappa, s);
    let zero = T::zero();
    let one = T::one();
    let no_bracket = || ClosedFormError::NoBracket { t: to_f64(s) };
    let (mut lo, mut hi, increasing) = match kappa {
        Curvature::Closed => {
            if target > T::FRAC_PI_2() {
                return Err(no_bracket());
            }
            (zero, one, false)
        }
        Curvature::Open => {
            if target < zero {
                return Err(no_bracket());
            }
            let mut hi = one;
            let mut k = 0;
            while dust_lhs(kappa, hi) < target {
                hi = hi * lit(2.0);
                k += 1;
                if k > 200 || !hi.is_finite() {
                    return Err(no_bracket());
                }
            }
            (zero, hi, true)
        }
        Curvature::Flat => {
            return Err(ClosedFormError::WrongRegime {
                expected: "curved dust",
                got: Family::ZeroLambdaFlatPowerLaw,
            })
        }
    };
    for _ in 0..400 {
        let mid = lo + (hi - lo) * lit(0.5);
        if mid <= lo || mid >= hi {
            break;
        }
        let above = dust_lhs(kappa, mid) > target;
        if above == increasing {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let r_lo = (dust_lhs(kappa, lo) - target).abs();
    let r_hi = (dust_lhs(kappa, hi) - target).abs();
    Ok(if r_lo <= r_hi { lo } else { hi })
}

/// Finds the unique sign selection that gives a real scale factor obeying
/// `ȧ² = z(a)` (to `1e−8`) at [`BRANCH_SAMPLES`] points of `window`.
pub fn resolve_branch<T: Scalar>(
    params: &CosmoParams<T>,
    window: &TimeWindow<T>,
) -> Result<BranchChoice, ClosedFormError> {
    let family = classify(params).family;
    if !family.has_closed_form() {
        return Err(ClosedFormError::WrongRegime {
            expected: "a family with a closed form",
            got: family,
        });
    }
    if !family.is_curved_radiation() {
        return Ok(BranchChoice::TRIVIAL);
    }
    if !window.is_finite() || !(window.t_min < window.t_max) {
        return Err(ClosedFormError::InvalidWindow {
            t_min: to_f64(window.t_min),
            t_max: to_f64(window.t_max),
        });
    }
    let samples = window.midpoints(BRANCH_SAMPLES);
    let tol = lit::<T>(BRANCH_TOL);
    let passing: Vec<BranchChoice> = BranchChoice::candidates(family)
        .into_iter()
        .filter(|&branch| {
            let form = match ClosedForm::new(params, branch) {
                Ok(f) => f,
                Err(_) => return false,
            };
            samples.iter().all(|&t| match form.state(t) {
                Ok(st) if st.a > T::zero() && st.adot.is_finite() => {
                    let z = z_of_a(params, st.a);
                    (st.adot * st.adot - z).abs() <= tol * T::one().max(z.abs())
                }
                _ => false,
            })
        })
        .collect();
    match passing.len() {
        0 => Err(ClosedFormError::NoValidBranch),
        1 => Ok(passing[0]),
        _ => Err(ClosedFormError::AmbiguousBranch(passing)),
    }
}

/// True when `γ̄ = −1`, where `c_int` plays the role of `C₂`.
pub fn uses_c2<T: Scalar>(params: &CosmoParams<T>) -> bool {
    is_vacuum(params.gamma_bar())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{E, FRAC_PI_2, PI};

    fn rad(k: i64, l: f64, c: f64) -> CosmoParams<f64> {
        CosmoParams::<f64>::new(1.0, k, l, c, 1.0, 0.0).unwrap()
    }

    fn friedmann_ok(form: &ClosedForm<f64>, t: f64) -> f64 {
        let st = form.state(t).unwrap();
        let z = z_of_a(form.params(), st.a);
        (st.adot * st.adot - z).abs() / z.abs().max(1.0)
    }

    #[test]
    fn trig_row_peak_is_turning_point() {
        // κ=1, C=1, Λ=−3: λ=1, Δ=5; z(a) = 1/a² − 1 − a² vanishes at a² = (√5−1)/2
        let p = rad(1, -3.0, 1.0);
        let win = TimeWindow::new(0.3, 1.2).unwrap();
        let form = ClosedForm::resolved(&p, &win).unwrap();
        assert_eq!(form.branch().offset_sign, Sign::Minus);
        // maximise on a fine grid over the principal piece
        let piece = form.validity_windows()[0];
        let amax = piece
            .grid(20001)
            .into_iter()
            .filter_map(|t| form.scale_factor(t).ok())
            .fold(0.0, f64::max);
        let root_sq = (5f64.sqrt() - 1.0) / 2.0;
        assert!((amax * amax - root_sq).abs() < 1e-8, "{amax}");
        for t in piece.shrink(0.05).grid(40) {
            assert!(friedmann_ok(&form, t) < 1e-12);
        }
    }

    #[test]
    fn open_sinh_row_bang_and_constraint() {
        // κ=−1, C=1, Λ=3: Δ = 1 − 4 = −3, λ = 1
        let p = rad(-1, 3.0, 1.0);
        let form = ClosedForm::new(&p, BranchChoice::new(Sign::Minus, Sign::Plus, Sign::Plus))
            .unwrap();
        let piece = form.validity_windows()[0];
        // big bang: radicand −1 + √3 sinh θ = 0
        let bang = (1.0 / 3f64.sqrt()).asinh() / 2.0;
        assert!((piece.t_min - bang).abs() < 1e-15);
        assert!(form.scale_factor(bang).unwrap() < 1e-7);
        assert!(form.scale_factor(bang - 0.01).is_err());
        for t in [bang + 0.01, 0.5, 1.0, 2.0] {
            assert!(friedmann_ok(&form, t) < 1e-12);
        }
    }

    #[test]
    fn critical_row_solves_ermakov_equation() {
        let p = rad(1, 0.75, 1.0);
        let win = TimeWindow::new(0.0, 2.0).unwrap();
        let form = ClosedForm::new(&p, BranchChoice::new(Sign::Plus, Sign::Plus, Sign::Plus))
            .unwrap();
        let h = 1e-4;
        for t in win.midpoints(16) {
            let am = form.scale_factor(t - h).unwrap();
            let a = form.scale_factor(t).unwrap();
            let ap = form.scale_factor(t + h).unwrap();
            let acc = (ap - 2.0 * a + am) / (h * h);
            let rhs = crate::model::rhs_second_order(&p, a);
            assert!((acc - rhs).abs() < 1e-6 * acc.abs().max(1.0));
        }
        // four growth/offset choices valid for s=+ on this window
        assert!(matches!(
            resolve_branch(&p, &win),
            Err(ClosedFormError::AmbiguousBranch(_))
        ));
    }

    #[test]
    fn branch_resolution_examples() {
        let flat = rad(0, 3.0, 1.0);
        let win = TimeWindow::new(0.1, 1.0).unwrap();
        assert_eq!(resolve_branch(&flat, &win).unwrap(), BranchChoice::TRIVIAL);

        // κ=−1, cosh regime: only s=−, σ=+ and only where √Δ cosh θ ≥ 1
        let p = rad(-1, 0.5, 1.0);
        let psi = (1.0 - 4.0 * 0.5 / 3.0f64).sqrt();
        let lam = (0.5f64 / 3.0).sqrt();
        let edge = (1.0 / psi).acosh() / (2.0 * lam);
        let win = TimeWindow::new(edge + 0.1, edge + 3.0).unwrap();
        let b = resolve_branch(&p, &win).unwrap();
        assert_eq!((b.offset_sign, b.term_sign), (Sign::Minus, Sign::Plus));
        let win = TimeWindow::new(-0.5, 0.5).unwrap();
        assert_eq!(resolve_branch(&p, &win), Err(ClosedFormError::NoValidBranch));

        // κ=1 trig: bounded oscillation
        let p = rad(1, -1.0, 1.0);
        let lam = (1.0f64 / 3.0).sqrt();
        let mid = PI / (4.0 * lam);
        let win = TimeWindow::new(mid - 0.3, mid + 0.3).unwrap();
        let b = resolve_branch(&p, &win).unwrap();
        assert_eq!((b.offset_sign, b.term_sign), (Sign::Minus, Sign::Plus));
    }

    #[test]
    fn flat_radiation_examples() {
        let p = rad(0, 3.0, 1.0);
        assert_eq!(radiation_flat(&p, 0.0).unwrap(), 0.0);
        let t = (1.0f64).asinh() / 2.0;
        assert!((radiation_flat(&p, t).unwrap() - 1.0).abs() < 1e-15);
        assert!((radiation_flat(&p, 0.4407).unwrap() - 1.0).abs() < 1e-4);
        assert!(radiation_flat(&p, -0.1).is_err());
        let p = rad(0, -3.0, 16.0);
        let a = radiation_flat(&p, PI / 4.0).unwrap();
        assert!((a - 2.0).abs() < 1e-15);
        assert!(radiation_flat(&p, 2.0).is_err());
        assert!(matches!(
            radiation_flat(&rad(1, 3.0, 1.0), 0.5),
            Err(ClosedFormError::WrongRegime { .. })
        ));
    }

    #[test]
    fn zero_lambda_flat_examples() {
        let dust = CosmoParams::<f64>::zero_lambda(0.5, 0, 1.0, 0.0).unwrap();
        assert!((zero_lambda_flat(&dust, 2.0).unwrap() - 4f64.powf(2.0 / 3.0)).abs() < 1e-14);
        let vac = CosmoParams::<f64>::zero_lambda(-1.0, 0, 1.0, 0.0).unwrap();
        assert!((zero_lambda_flat(&vac, 1.0).unwrap() - E).abs() < 1e-15);
        for g in [-1.0, -0.5, 0.5, 1.0, 2.0] {
            let p = CosmoParams::<f64>::zero_lambda(g, 0, 1.7, 0.3).unwrap();
            assert!((zero_lambda_flat(&p, 0.3).unwrap() - 1.7).abs() < 1e-15);
        }
        let bad = CosmoParams::<f64>::new(0.5, 0, 0.0, 2.0, 1.0, 0.0).unwrap();
        assert!(matches!(
            zero_lambda_flat(&bad, 1.0),
            Err(ClosedFormError::NormalizationMismatch { .. })
        ));
    }

    #[test]
    fn restricted_forms_match_general() {
        for g in [0.5, 1.0, 2.0] {
            let a0 = 1.3;
            let t0 = restricted_power_law_epoch(g, a0);
            let p = CosmoParams::<f64>::zero_lambda(g, 0, a0, t0).unwrap();
            for t in [0.5, 1.0, 3.0] {
                let a = zero_lambda_flat(&p, t).unwrap();
                assert!((a - restricted_power_law(g, a0, t)).abs() < 1e-13);
            }
        }
        let a0 = 2.5;
        let p = CosmoParams::<f64>::zero_lambda(-1.0, 0, a0, restricted_de_sitter_epoch(a0)).unwrap();
        for t in [-1.0, 0.0, 2.0] {
            let a = zero_lambda_flat(&p, t).unwrap();
            assert!((a - restricted_de_sitter(a0, t)).abs() < 1e-13 * a);
        }
    }

    #[test]
    fn curved_explicit_examples() {
        let p = CosmoParams::<f64>::zero_lambda(1.0, 1, 2.0, 1.0).unwrap();
        assert!((zero_lambda_curved_explicit(&p, 3.0).unwrap() - 2.0).abs() < 1e-15);
        assert_eq!(zero_lambda_curved_explicit(&p, 5.0).unwrap(), 0.0);
        assert!(zero_lambda_curved_explicit(&p, 5.5).is_err());
        let v = CosmoParams::<f64>::zero_lambda(-1.0, 1, 2.0, 1.0).unwrap();
        assert_eq!(zero_lambda_curved_explicit(&v, 1.0).unwrap(), 2.0);
        let v = CosmoParams::<f64>::zero_lambda(-1.0, -1, 2.0, 1.0).unwrap();
        assert!((zero_lambda_curved_explicit(&v, 1.0).unwrap() - 2.0).abs() < 1e-15);
        let d = CosmoParams::<f64>::zero_lambda(0.5, 1, 2.0, 1.0).unwrap();
        assert!(zero_lambda_curved_explicit(&d, 1.0).is_err());
    }

    #[test]
    fn dust_examples() {
        let p = CosmoParams::<f64>::zero_lambda(0.5, 1, 1.0, 0.0).unwrap();
        assert!((zero_lambda_dust_implicit(&p, 0.0).unwrap() - 1.0).abs() < 1e-12);
        assert!(zero_lambda_dust_implicit(&p, FRAC_PI_2).unwrap() < 1e-6);
        assert!(matches!(
            zero_lambda_dust_implicit(&p, 2.0),
            Err(ClosedFormError::NoBracket { .. })
        ));
        let q = CosmoParams::<f64>::zero_lambda(0.5, -1, 1.0, 0.0).unwrap();
        assert!((zero_lambda_dust_implicit(&q, 0.0).unwrap() - 1.0).abs() < 1e-12);
        for s in [-0.5f64, 0.0, 0.3, 5.0, 50.0] {
            let a = dust_solve(Curvature::Open, s).unwrap();
            assert!(dust_relation_residual(Curvature::Open, a, s).abs() < DUST_RESIDUAL_TOL);
        }
        for s in [-1.5f64, -0.2, 0.0, 0.7, 1.5] {
            let a = dust_solve(Curvature::Closed, s).unwrap();
            assert!(dust_relation_residual(Curvature::Closed, a, s).abs() < DUST_RESIDUAL_TOL);
        }
    }

    #[test]
    fn dust_state_obeys_constraint() {
        for k in [1, -1] {
            let p = CosmoParams::<f64>::zero_lambda(0.5, k, 1.5, 0.2).unwrap();
            let form = ClosedForm::new(&p, BranchChoice::TRIVIAL).unwrap();
            for t in [-0.5, 0.1, 0.9, 1.8] {
                let st = form.state(t).unwrap();
                let z = z_of_a(&p, st.a);
                assert!((st.adot * st.adot - z).abs() < 1e-9 * z.max(1.0), "k={k} t={t}");
            }
        }
    }

    #[test]
    fn phase_round_trip() {
        let cases = [
            (rad(1, 1.0, 1.0), BranchChoice::new(Sign::Plus, Sign::Plus, Sign::Plus)),
            (rad(1, 0.75, 1.0), BranchChoice::new(Sign::Plus, Sign::Plus, Sign::Plus)),
            (rad(1, 0.5, 1.0), BranchChoice::new(Sign::Plus, Sign::Plus, Sign::Plus)),
            (rad(-1, -2.0, 1.0), BranchChoice::new(Sign::Plus, Sign::Plus, Sign::Plus)),
        ];
        for (p, b) in cases {
            let form = ClosedForm::new(&p, b).unwrap();
            let t = 0.35;
            let st = form.state(t).unwrap();
            let tau = form.phase_at(st.a, st.adot > 0.0).unwrap();
            assert!((tau - t).abs() < 1e-10, "{:?}: {tau}", form.family());
        }
    }

    #[test]
    fn closed_forms_in_single_precision() {
        let p = CosmoParams::<f32>::new(1.0, 0, 3.0, 1.0, 1.0, 0.0).unwrap();
        let a = radiation_flat(&p, 0.440_686_8).unwrap();
        assert!((a - 1.0).abs() < 1e-3);
    }
}
