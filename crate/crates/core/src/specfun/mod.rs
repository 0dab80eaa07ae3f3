//! Special functions: Γ/ψ, the Gauss hypergeometric function and the
//! hypergeometric form of `t(u)` for curved `Λ = 0` universes.

mod gamma;
mod hyp2f1;
mod solution;

use thiserror::Error;

pub use gamma::{digamma, gamma, ln_gamma, rgamma};
pub use hyp2f1::{hyp2f1, Hyp2F1Args, MAX_TERMS};
pub use solution::{a_of_u, dt_du, mu_of, t_of_u, t_of_u_series, u_of_a, HypSolutionCoeffs};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecFunError {
    #[error("c = {c} is a nonpositive integer")]
    CNonPositiveInteger { c: f64 },
    #[error("argument x = {x} outside the real evaluation domain")]
    ArgumentOutOfDomain { x: f64 },
    #[error("series did not converge within {terms} terms")]
    NoConvergence { terms: usize },
    #[error("non-finite hypergeometric parameter")]
    NonFiniteParameter,
    #[error("gamma_bar = {gamma_bar} = 1/(2n+1) with n = {n}: logarithmic case, not covered")]
    DegenerateGamma { gamma_bar: f64, n: i32 },
    #[error("u = {u} outside the admissible range")]
    UOutOfRange { u: f64 },
    #[error("the curvature substitution is degenerate for a flat universe")]
    FlatUniverse,
}
