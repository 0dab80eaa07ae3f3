//! Time as a function of the curvature variable `u = κ (a/a₀)^(2γ̄)` for
//! `Λ = 0`, `κ ≠ 0`.
//!
//! In `u` the time obeys `dt/du = D u^(μ−1) (1−u)^(−1/2)` with
//! `μ = (γ̄+1)/(2γ̄)` and `D = a₀/(2γ̄)`, a hypergeometric equation with
//! parameters `(0, 1/2 − μ; 1 − μ)`. Its general solution is
//!
//! ```text
//! t(u) = α + β u^μ ₂F₁(1/2, μ; μ+1; u)
//! ```
//!
//! and, after the connection formula toward `1 − u`,
//!
//! ```text
//! t(u) = t₀ − 2βμ (1−u)^(1/2) u^μ ₂F₁(μ+1/2, 1; 3/2; 1−u),
//! t₀   = α + β √π Γ(μ+1)/Γ(μ+1/2).
//! ```
//!
//! Matching `dt/du` fixes `β = D/μ = a₀/(γ̄+1)`; `α` then sets the epoch.
//! For open universes `u < 0`; `D` carries the sign of `κ` and `u^μ` is read
//! as `(−u)^μ`.

use serde::Serialize;

use super::gamma::{gamma, rgamma};
use super::hyp2f1::hyp2f1;
use super::SpecFunError;
use crate::model::{degenerate_index, CosmoParams, Curvature};
use crate::scalar::{lit, to_f64, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HypSolutionCoeffs<T> {
    pub alpha: T,
    pub beta: T,
    pub mu: T,
    pub d_coeff: T,
}

/// `μ = (γ̄+1)/(2γ̄)`
pub fn mu_of<T: Scalar>(gamma_bar: T) -> T {
    (gamma_bar + T::one()) / (lit::<T>(2.0) * gamma_bar)
}

fn check_family<T: Scalar>(p: &CosmoParams<T>) -> Result<(), SpecFunError> {
    if p.kappa().is_flat() {
        return Err(SpecFunError::FlatUniverse);
    }
    if let Some(n) = degenerate_index(p.gamma_bar()) {
        return Err(SpecFunError::DegenerateGamma {
            gamma_bar: to_f64(p.gamma_bar()),
            n,
        });
    }
    Ok(())
}

/// `√π Γ(μ+1)/Γ(μ+1/2)`, the value of `u^μ ₂F₁(1/2, μ; μ+1; u)` at `u = 1`.
fn endpoint_factor<T: Scalar>(mu: T) -> T {
    T::PI().sqrt() * gamma(mu + T::one()) * rgamma(mu + lit(0.5))
}

impl<T: Scalar> HypSolutionCoeffs<T> {
    /// Coefficients with explicit integration constants.
    pub fn with_constants(p: &CosmoParams<T>, alpha: T, beta: T) -> Result<Self, SpecFunError> {
        check_family(p)?;
        let g = p.gamma_bar();
        let kappa: T = p.kappa().value();
        Ok(Self {
            alpha,
            beta,
            mu: mu_of(g),
            d_coeff: kappa * p.a0() / (lit::<T>(2.0) * g),
        })
    }

    /// Constants matched to the first-order equation with `a(t₀) = a₀`.
    ///
    /// `β = D/μ` reproduces `dt/du`. At `a = a₀` the variable is `u = κ`; for
    /// `κ = 1` that is the endpoint `t(1) = t₀ = α + β√πΓ(μ+1)/Γ(μ+½)`, for
    /// `κ = −1` it is `u = −1`.
    pub fn matched(p: &CosmoParams<T>) -> Result<Self, SpecFunError> {
        let base = Self::with_constants(p, T::zero(), T::zero())?;
        let beta = p.kappa().value::<T>() * base.d_coeff / base.mu;
        let partial = Self { beta, ..base };
        let alpha = match p.kappa() {
            Curvature::Closed => p.t0() - beta * endpoint_factor(partial.mu),
            _ => p.t0() - beta * series_shape(partial.mu, -T::one())?,
        };
        Ok(Self { alpha, ..partial })
    }

    /// `t₀ = α + β √π Γ(μ+1)/Γ(μ+1/2)`: the time at `u = 1`.
    pub fn t0_origin(&self) -> T {
        self.alpha + self.beta * endpoint_factor(self.mu)
    }
}

/// `|u|^μ ₂F₁(1/2, μ; μ+1; u)`, defined for `u < 1`, and at `u = 1`.
fn series_shape<T: Scalar>(mu: T, u: T) -> Result<T, SpecFunError> {
    let half = lit::<T>(0.5);
    Ok(u.abs().powf(mu) * hyp2f1(half, mu, mu + T::one(), u)?)
}

/// `u = κ (a/a₀)^(2γ̄)`
pub fn u_of_a<T: Scalar>(p: &CosmoParams<T>, a: T) -> Result<T, SpecFunError> {
    if p.kappa().is_flat() {
        return Err(SpecFunError::FlatUniverse);
    }
    let kappa: T = p.kappa().value();
    Ok(kappa * (a / p.a0()).powf(lit::<T>(2.0) * p.gamma_bar()))
}

/// Inverse of [`u_of_a`].
pub fn a_of_u<T: Scalar>(p: &CosmoParams<T>, u: T) -> Result<T, SpecFunError> {
    if p.kappa().is_flat() {
        return Err(SpecFunError::FlatUniverse);
    }
    let kappa: T = p.kappa().value();
    let s = kappa * u;
    if s <= T::zero() {
        return Err(SpecFunError::UOutOfRange { u: to_f64(u) });
    }
    Ok(p.a0() * s.powf((lit::<T>(2.0) * p.gamma_bar()).recip()))
}

/// Closed-form `t(u)` after the connection to `1 − u`; closed universes,
/// `0 < u ≤ 1`.
pub fn t_of_u<T: Scalar>(
    coeffs: &HypSolutionCoeffs<T>,
    p: &CosmoParams<T>,
    u: T,
) -> Result<T, SpecFunError> {
    check_family(p)?;
    if p.kappa() != Curvature::Closed || !(u > T::zero() && u <= T::one()) {
        return Err(SpecFunError::UOutOfRange { u: to_f64(u) });
    }
    let one = T::one();
    let half = lit::<T>(0.5);
    let mu = coeffs.mu;
    let w = one - u;
    if w == T::zero() {
        return Ok(coeffs.t0_origin());
    }
    let f = hyp2f1(mu + half, one, lit(1.5), w)?;
    Ok(coeffs.t0_origin() - lit::<T>(2.0) * coeffs.beta * mu * w.sqrt() * u.powf(mu) * f)
}

/// `t(u) = α + β |u|^μ ₂F₁(1/2, μ; μ+1; u)`, the form before the connection
/// step. Covers both signs of `κ` (`u ∈ (0, 1]` closed, `u < 0` open).
pub fn t_of_u_series<T: Scalar>(
    coeffs: &HypSolutionCoeffs<T>,
    p: &CosmoParams<T>,
    u: T,
) -> Result<T, SpecFunError> {
    check_family(p)?;
    let valid = match p.kappa() {
        Curvature::Closed => u > T::zero() && u <= T::one(),
        _ => u < T::zero(),
    };
    if !valid {
        return Err(SpecFunError::UOutOfRange { u: to_f64(u) });
    }
    Ok(coeffs.alpha + coeffs.beta * series_shape(coeffs.mu, u)?)
}

/// `dt/du = D |u|^(μ−1) (1−u)^(−1/2)`
pub fn dt_du<T: Scalar>(coeffs: &HypSolutionCoeffs<T>, u: T) -> Result<T, SpecFunError> {
    let one = T::one();
    if u == T::zero() || u >= one || u.is_nan() {
        return Err(SpecFunError::UOutOfRange { u: to_f64(u) });
    }
    Ok(coeffs.d_coeff * u.abs().powf(coeffs.mu - one) / (one - u).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn closed(g: f64) -> CosmoParams<f64> {
        CosmoParams::<f64>::zero_lambda(g, 1, 1.0, 0.0).unwrap()
    }

    #[test]
    fn u_examples() {
        assert_eq!(u_of_a(&closed(1.0), 1.0).unwrap(), 1.0);
        let open = CosmoParams::<f64>::zero_lambda(1.0, -1, 1.0, 0.0).unwrap();
        assert_eq!(u_of_a(&open, 2.0).unwrap(), -4.0);
        assert_eq!(u_of_a(&closed(0.5), 4.0).unwrap(), 4.0);
        let flat = CosmoParams::<f64>::zero_lambda(1.0, 0, 1.0, 0.0).unwrap();
        assert_eq!(u_of_a(&flat, 1.0), Err(SpecFunError::FlatUniverse));
        let back = a_of_u(&open, -4.0).unwrap();
        assert!((back - 2.0).abs() < 1e-15);
    }

    #[test]
    fn dt_du_examples() {
        let c = HypSolutionCoeffs::matched(&closed(1.0)).unwrap();
        assert_eq!(c.mu, 1.0);
        assert_eq!(c.d_coeff, 0.5);
        assert!((dt_du(&c, 0.75).unwrap() - 1.0).abs() < 1e-15);
        let c = HypSolutionCoeffs::matched(&closed(0.5)).unwrap();
        assert_eq!(c.mu, 1.5);
        let v = dt_du(&c, 0.25).unwrap();
        assert!((v - c.d_coeff / 3f64.sqrt()).abs() < 1e-15);
        assert!(dt_du(&c, 1.0).is_err());
        assert!(dt_du(&c, 1.0 - 1e-12).unwrap() > 1e5);
    }

    #[test]
    fn endpoint_is_t0() {
        for g in [0.5, 1.0, 1.5] {
            let p = closed(g).with_t0(0.7).unwrap();
            let c = HypSolutionCoeffs::matched(&p).unwrap();
            assert_eq!(t_of_u(&c, &p, 1.0).unwrap(), c.t0_origin());
            assert!((c.t0_origin() - 0.7).abs() < 1e-14);
        }
    }

    #[test]
    fn degenerate_gamma_rejected() {
        let p = closed(1.0 / 3.0);
        assert!(matches!(
            HypSolutionCoeffs::matched(&p),
            Err(SpecFunError::DegenerateGamma { n: 1, .. })
        ));
        let ok = HypSolutionCoeffs::matched(&closed(1.0)).unwrap();
        assert!(matches!(
            t_of_u(&ok, &p, 0.5),
            Err(SpecFunError::DegenerateGamma { .. })
        ));
        assert!(t_of_u(&ok, &closed(1.0), 0.0).is_err());
        assert!(t_of_u(&ok, &closed(1.0), 1.5).is_err());
    }

    #[test]
    fn both_forms_agree() {
        for g in [0.5, 1.0, 1.5, 2.5] {
            let p = closed(g);
            let c = HypSolutionCoeffs::matched(&p).unwrap();
            for i in 1..=20 {
                let u = i as f64 / 20.0;
                let a = t_of_u(&c, &p, u).unwrap();
                let b = t_of_u_series(&c, &p, u).unwrap();
                assert!((a - b).abs() < 1e-12, "g={g} u={u}: {a} vs {b}");
            }
        }
    }
}
