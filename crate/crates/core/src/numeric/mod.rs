//! Numerical machinery independent of the closed forms: an adaptive
//! Dormand–Prince integrator for `ä = f(a)`, Gauss–Kronrod quadrature of
//! `dt = da/√z(a)` and the monotone inversion `t ↦ a`.

mod inverse;
mod ode;
mod quad;
mod trajectory;

use thiserror::Error;

pub use inverse::{
    a_of_t_inverse, monotone_pieces, quadrature_trajectory, roots_of_z, MonotonePiece,
};
pub use ode::{
    dopri5, integrate_ode, integrate_ode_from, ode_transit_time, OdeConfig, A_FLOOR,
};
pub use quad::{quad_general, t_of_a_quadrature, QuadConfig, SingularEndpoints, MAX_INTERVALS};
pub use trajectory::{Method, Sample, Trajectory};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumericError {
    #[error("step size underflow at t = {t}")]
    StepSizeUnderflow { t: f64 },
    #[error("scale factor collapsed to the floor at t = {t}")]
    ScaleFactorCollapse { t: f64 },
    #[error("step budget exhausted at t = {t}")]
    TooManySteps { t: f64 },
    #[error("invalid configuration: {0}")]
    InvalidConfig(&'static str),
    #[error("time grid must be non-empty and strictly increasing")]
    InvalidGrid,
    #[error("initial scale factor must be positive, got {a}")]
    NonPositiveScaleFactor { a: f64 },
    #[error("z(a) <= 0 inside the interval (at a = {a})")]
    NonPositiveIntegrand { a: f64 },
    #[error("z has a multiple root at the singular endpoint a = {a}; the time diverges")]
    EndpointNotSimpleRoot { a: f64 },
    #[error("quadrature did not converge within {intervals} subintervals")]
    NoConvergence { intervals: usize },
    #[error("t = {t} is not attained on the monotone piece")]
    NoBracket { t: f64 },
    #[error("inversion diverged")]
    Divergence,
    #[error("target a = {a} was not reached")]
    TargetNotReached { a: f64 },
}
