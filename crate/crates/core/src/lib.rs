//! Scale-factor solutions of barotropic FRW cosmologies with a cosmological
//! constant.
//!
//! The crate evaluates every analytic family (radiation with `Λ ≠ 0`, the
//! `Λ = 0` textbook forms and the hypergeometric general solution) and checks
//! them against an independent adaptive ODE integrator and quadrature of the
//! first integral.
//!
//! Core math is generic over [`Scalar`] (`f32`/`f64`); the aliases below fix
//! `f64`, which is what the validation harness and the CLI use.

// `!(x > 0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod closedform;
pub mod model;
pub mod numeric;
pub mod scalar;
pub mod specfun;
pub mod validate;

pub use scalar::{lit, Scalar};

pub type CosmoParams = model::CosmoParams<f64>;
pub type RawParams = model::RawParams<f64>;
pub type Regime = model::Regime<f64>;
pub type DerivedState = model::DerivedState<f64>;
pub type Trajectory = numeric::Trajectory<f64>;
pub type BranchChoice = closedform::BranchChoice;
pub type TimeWindow = closedform::TimeWindow<f64>;
pub type ClosedForm = closedform::ClosedForm<f64>;
pub type HypSolutionCoeffs = specfun::HypSolutionCoeffs<f64>;
pub type OdeConfig = numeric::OdeConfig<f64>;
pub type QuadConfig = numeric::QuadConfig<f64>;

pub use model::{Curvature, Family};
