//! Parameter set, the first integral `z(a) = ȧ²`, regime classification and
//! reconstruction of the physical fluid state.
//!
//! Units: `8πG/3 = 1`, so the Friedmann constraint reads
//! `H² = ρ − κ/a² + Λ/3`. The integration constant `c_int` is a raw real whose
//! units depend on `γ̄` (it multiplies `a^(−2γ̄)`).

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::{lit, to_f64, Scalar};

/// Tolerance used to recognise the special values of `γ̄` (1, 1/2, −1 and the
/// degenerate set `1/(2n+1)`).
pub const GAMMA_MATCH_TOL: f64 = 1e-12;

/// Largest `n` scanned when testing `γ̄ = 1/(2n+1)`.
pub const DEGENERATE_SCAN_MAX: i32 = 50;

const CRITICAL_DISCRIMINANT_TOL: f64 = 1e-12;
const DENSITY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("gamma_bar = 0 is not supported (the decoupled equation requires gamma_bar != 0)")]
    GammaBarZero,
    #[error("{name} must be positive, got {value}")]
    NonPositiveConstant { name: &'static str, value: f64 },
    #[error("curvature index must be -1, 0 or 1, got {0}")]
    BadCurvature(i64),
    #[error("{name} must be finite, got {value}")]
    NonFinite { name: &'static str, value: f64 },
    #[error("negative energy density {rho}: (a, adot) is off the constraint surface")]
    NegativeDensity { rho: f64 },
}

/// Spatial curvature index κ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Curvature {
    Open,
    Flat,
    Closed,
}

impl Curvature {
    pub fn from_index(k: i64) -> Result<Self, ModelError> {
        match k {
            -1 => Ok(Curvature::Open),
            0 => Ok(Curvature::Flat),
            1 => Ok(Curvature::Closed),
            other => Err(ModelError::BadCurvature(other)),
        }
    }

    pub fn index(self) -> i64 {
        match self {
            Curvature::Open => -1,
            Curvature::Flat => 0,
            Curvature::Closed => 1,
        }
    }

    pub fn value<T: Scalar>(self) -> T {
        lit(self.index() as f64)
    }

    pub fn is_flat(self) -> bool {
        self == Curvature::Flat
    }
}

/// Unvalidated parameter record, e.g. as read from a config file.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RawParams<T> {
    pub gamma_bar: T,
    pub kappa: i64,
    pub lambda_cc: T,
    pub c_int: T,
    pub a0: T,
    pub t0: T,
}

/// Validated cosmological parameters.
///
/// `c_int` is `C₁` when `γ̄ ≠ −1` and `C₂` when `γ̄ = −1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CosmoParams<T> {
    gamma_bar: T,
    kappa: Curvature,
    lambda_cc: T,
    c_int: T,
    a0: T,
    t0: T,
}

impl<T: Scalar> CosmoParams<T> {
    pub fn new(
        gamma_bar: T,
        kappa: i64,
        lambda_cc: T,
        c_int: T,
        a0: T,
        t0: T,
    ) -> Result<Self, ModelError> {
        validate_params(&RawParams {
            gamma_bar,
            kappa,
            lambda_cc,
            c_int,
            a0,
            t0,
        })
    }

    /// Parameters for the `Λ = 0` families, where the integration constant is
    /// fixed by the reference point: `C₁ = a₀^(2γ̄)`, `C₂ = a₀^(−2)`.
    pub fn zero_lambda(gamma_bar: T, kappa: i64, a0: T, t0: T) -> Result<Self, ModelError> {
        let c = reference_constant(gamma_bar, a0);
        Self::new(gamma_bar, kappa, T::zero(), c, a0, t0)
    }

    pub fn gamma_bar(&self) -> T {
        self.gamma_bar
    }
    pub fn kappa(&self) -> Curvature {
        self.kappa
    }
    pub fn lambda_cc(&self) -> T {
        self.lambda_cc
    }
    pub fn c_int(&self) -> T {
        self.c_int
    }
    pub fn a0(&self) -> T {
        self.a0
    }
    pub fn t0(&self) -> T {
        self.t0
    }

    /// Barotropic index γ, with `p = (γ − 1)ρ`.
    pub fn gamma(&self) -> T {
        lit::<T>(2.0 / 3.0) * (self.gamma_bar + T::one())
    }

    pub fn with_t0(mut self, t0: T) -> Result<Self, ModelError> {
        check_finite("t0", t0)?;
        self.t0 = t0;
        Ok(self)
    }

    pub fn with_lambda(mut self, lambda_cc: T) -> Result<Self, ModelError> {
        check_finite("lambda_cc", lambda_cc)?;
        self.lambda_cc = lambda_cc;
        Ok(self)
    }

    pub fn with_c_int(mut self, c_int: T) -> Result<Self, ModelError> {
        check_finite("c_int", c_int)?;
        if c_int <= T::zero() {
            return Err(ModelError::NonPositiveConstant {
                name: "c_int",
                value: to_f64(c_int),
            });
        }
        self.c_int = c_int;
        Ok(self)
    }

    pub fn raw(&self) -> RawParams<T> {
        RawParams {
            gamma_bar: self.gamma_bar,
            kappa: self.kappa.index(),
            lambda_cc: self.lambda_cc,
            c_int: self.c_int,
            a0: self.a0,
            t0: self.t0,
        }
    }
}

/// `a₀^(2γ̄)`, or `a₀^(−2)` on the vacuum line.
pub fn reference_constant<T: Scalar>(gamma_bar: T, a0: T) -> T {
    if is_vacuum(gamma_bar) {
        a0.powi(-2)
    } else {
        a0.powf(lit::<T>(2.0) * gamma_bar)
    }
}

fn check_finite<T: Scalar>(name: &'static str, v: T) -> Result<(), ModelError> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(ModelError::NonFinite {
            name,
            value: to_f64(v),
        })
    }
}

pub fn validate_params<T: Scalar>(raw: &RawParams<T>) -> Result<CosmoParams<T>, ModelError> {
    for (name, v) in [
        ("gamma_bar", raw.gamma_bar),
        ("lambda_cc", raw.lambda_cc),
        ("c_int", raw.c_int),
        ("a0", raw.a0),
        ("t0", raw.t0),
    ] {
        check_finite(name, v)?;
    }
    if raw.gamma_bar == T::zero() {
        return Err(ModelError::GammaBarZero);
    }
    let kappa = Curvature::from_index(raw.kappa)?;
    for (name, v) in [("c_int", raw.c_int), ("a0", raw.a0)] {
        if v <= T::zero() {
            return Err(ModelError::NonPositiveConstant {
                name,
                value: to_f64(v),
            });
        }
    }
    Ok(CosmoParams {
        gamma_bar: raw.gamma_bar,
        kappa,
        lambda_cc: raw.lambda_cc,
        c_int: raw.c_int,
        a0: raw.a0,
        t0: raw.t0,
    })
}

fn gamma_is<T: Scalar>(gamma_bar: T, target: f64) -> bool {
    (gamma_bar - lit(target)).abs() <= lit(GAMMA_MATCH_TOL)
}

/// `γ̄ = 1`
pub fn is_radiation<T: Scalar>(gamma_bar: T) -> bool {
    gamma_is(gamma_bar, 1.0)
}

/// `γ̄ = 1/2`
pub fn is_dust<T: Scalar>(gamma_bar: T) -> bool {
    gamma_is(gamma_bar, 0.5)
}

/// `γ̄ = −1`
pub fn is_vacuum<T: Scalar>(gamma_bar: T) -> bool {
    gamma_is(gamma_bar, -1.0)
}

/// Returns `n` when `γ̄ = 1/(2n+1)` for `n ∈ {−1, 1, 2, …, 50}`.
///
/// These are the values where `c = 1/2 − 1/(2γ̄)` of the hypergeometric
/// equation is 1 or a negative integer.
pub fn degenerate_index<T: Scalar>(gamma_bar: T) -> Option<i32> {
    std::iter::once(-1)
        .chain(1..=DEGENERATE_SCAN_MAX)
        .find(|&n| gamma_is(gamma_bar, 1.0 / (2 * n + 1) as f64))
}

/// `z(a) = ȧ²` from the first integral.
pub fn z_of_a<T: Scalar>(p: &CosmoParams<T>, a: T) -> T {
    let kappa: T = p.kappa.value();
    if is_vacuum(p.gamma_bar) {
        p.c_int * a * a - kappa
    } else {
        p.c_int * a.powf(-lit::<T>(2.0) * p.gamma_bar) - kappa + p.lambda_cc / lit(3.0) * a * a
    }
}

/// `dz/da`, equal to `2ä` on solutions.
pub fn dz_da<T: Scalar>(p: &CosmoParams<T>, a: T) -> T {
    lit::<T>(2.0) * rhs_second_order(p, a)
}

/// Curvature-free equation of motion: `ä` as a function of `a`.
pub fn rhs_second_order<T: Scalar>(p: &CosmoParams<T>, a: T) -> T {
    if is_vacuum(p.gamma_bar) {
        p.c_int * a
    } else {
        let two = lit::<T>(2.0);
        p.lambda_cc / lit(3.0) * a
            - p.c_int * p.gamma_bar * a.powf(-(two * p.gamma_bar + T::one()))
    }
}

/// `Δ = κ² − (4/3)·C₁·Λ`
pub fn discriminant<T: Scalar>(p: &CosmoParams<T>) -> T {
    let kappa: T = p.kappa.value();
    kappa * kappa - lit::<T>(4.0) * p.c_int * p.lambda_cc / lit(3.0)
}

/// `λ = √(|Λ|/3)`
pub fn lambda_scale<T: Scalar>(p: &CosmoParams<T>) -> T {
    (p.lambda_cc.abs() / lit(3.0)).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    RadiationLambdaLargeSinh,
    RadiationLambdaCritical,
    RadiationLambdaSmallCosh,
    RadiationLambdaNegativeTrig,
    FlatRadiationSinh,
    FlatRadiationTrig,
    ZeroLambdaFlatPowerLaw,
    ZeroLambdaDeSitterFlat,
    ZeroLambdaCurvedRadiation,
    ZeroLambdaCurvedDust,
    ZeroLambdaCurvedVacuum,
    HypergeometricGeneral,
    LogarithmicDegenerate,
    /// `Λ ≠ 0` away from radiation: no analytic family, ODE and quadrature only.
    NumericalOnly,
}

impl Family {
    pub const ALL: [Family; 14] = [
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
        Family::HypergeometricGeneral,
        Family::LogarithmicDegenerate,
        Family::NumericalOnly,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::RadiationLambdaLargeSinh => "RadiationLambdaLargeSinh",
            Family::RadiationLambdaCritical => "RadiationLambdaCritical",
            Family::RadiationLambdaSmallCosh => "RadiationLambdaSmallCosh",
            Family::RadiationLambdaNegativeTrig => "RadiationLambdaNegativeTrig",
            Family::FlatRadiationSinh => "FlatRadiationSinh",
            Family::FlatRadiationTrig => "FlatRadiationTrig",
            Family::ZeroLambdaFlatPowerLaw => "ZeroLambdaFlatPowerLaw",
            Family::ZeroLambdaDeSitterFlat => "ZeroLambdaDeSitterFlat",
            Family::ZeroLambdaCurvedRadiation => "ZeroLambdaCurvedRadiation",
            Family::ZeroLambdaCurvedDust => "ZeroLambdaCurvedDust",
            Family::ZeroLambdaCurvedVacuum => "ZeroLambdaCurvedVacuum",
            Family::HypergeometricGeneral => "HypergeometricGeneral",
            Family::LogarithmicDegenerate => "LogarithmicDegenerate",
            Family::NumericalOnly => "NumericalOnly",
        }
    }

    /// Curved (`κ = ±1`) radiation families with `Λ ≠ 0`.
    pub fn is_curved_radiation(self) -> bool {
        matches!(
            self,
            Family::RadiationLambdaLargeSinh
                | Family::RadiationLambdaCritical
                | Family::RadiationLambdaSmallCosh
                | Family::RadiationLambdaNegativeTrig
        )
    }

    /// Families with an explicit or implicit closed form.
    pub fn has_closed_form(self) -> bool {
        !matches!(
            self,
            Family::HypergeometricGeneral | Family::LogarithmicDegenerate | Family::NumericalOnly
        )
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Regime<T> {
    pub family: Family,
    pub discriminant: T,
    pub lambda_scale: T,
}

/// Selects the solution family for a parameter set.
pub fn classify<T: Scalar>(p: &CosmoParams<T>) -> Regime<T> {
    let disc = discriminant(p);
    let g = p.gamma_bar;
    let zero = T::zero();
    let degenerate = degenerate_index(g).is_some();

    let family = if p.lambda_cc == zero {
        match p.kappa {
            Curvature::Flat if is_vacuum(g) => Family::ZeroLambdaDeSitterFlat,
            Curvature::Flat => Family::ZeroLambdaFlatPowerLaw,
            _ if is_radiation(g) => Family::ZeroLambdaCurvedRadiation,
            _ if is_dust(g) => Family::ZeroLambdaCurvedDust,
            _ if is_vacuum(g) => Family::ZeroLambdaCurvedVacuum,
            _ if degenerate => Family::LogarithmicDegenerate,
            _ => Family::HypergeometricGeneral,
        }
    } else if is_radiation(g) {
        if p.kappa.is_flat() {
            if p.lambda_cc > zero {
                Family::FlatRadiationSinh
            } else {
                Family::FlatRadiationTrig
            }
        } else if p.lambda_cc < zero {
            Family::RadiationLambdaNegativeTrig
        } else {
            let scale = lit::<T>(4.0) * p.c_int * p.lambda_cc.abs() / lit(3.0);
            if disc.abs() <= lit::<T>(CRITICAL_DISCRIMINANT_TOL) * T::one().max(scale) {
                Family::RadiationLambdaCritical
            } else if disc < zero {
                Family::RadiationLambdaLargeSinh
            } else {
                Family::RadiationLambdaSmallCosh
            }
        }
    } else if degenerate {
        Family::LogarithmicDegenerate
    } else {
        Family::NumericalOnly
    };

    Regime {
        family,
        discriminant: disc,
        lambda_scale: lambda_scale(p),
    }
}

/// Hubble rate, energy density and pressure in units `8πG/3 = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DerivedState<T> {
    pub hubble: T,
    pub energy_density: T,
    pub pressure: T,
}

pub fn derived_state<T: Scalar>(
    p: &CosmoParams<T>,
    a: T,
    adot: T,
) -> Result<DerivedState<T>, ModelError> {
    let kappa: T = p.kappa.value();
    let hubble = adot / a;
    let curv = kappa / (a * a);
    let vac = p.lambda_cc / lit(3.0);
    let rho = hubble * hubble + curv - vac;
    let scale = T::one()
        .max(hubble * hubble)
        .max(curv.abs())
        .max(vac.abs());
    if rho < -lit::<T>(DENSITY_TOL) * scale {
        return Err(ModelError::NegativeDensity { rho: to_f64(rho) });
    }
    Ok(DerivedState {
        hubble,
        energy_density: rho,
        pressure: (p.gamma() - T::one()) * rho,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn params(g: f64, k: i64, l: f64, c: f64) -> CosmoParams<f64> {
        CosmoParams::<f64>::new(g, k, l, c, 1.0, 0.0).unwrap()
    }

    #[test]
    fn validation_accepts_radiation() {
        let p = CosmoParams::<f64>::new(1.0, 0, 0.0, 1.0, 1.0, 0.0).unwrap();
        assert_eq!(p.kappa(), Curvature::Flat);
    }

    #[test]
    fn validation_errors() {
        assert_eq!(
            CosmoParams::<f64>::new(0.0, 0, 0.0, 1.0, 1.0, 0.0),
            Err(ModelError::GammaBarZero)
        );
        assert_eq!(
            CosmoParams::<f64>::new(1.0, 2, 0.0, 1.0, 1.0, 0.0),
            Err(ModelError::BadCurvature(2))
        );
        assert!(matches!(
            CosmoParams::<f64>::new(1.0, 0, 0.0, 0.0, 1.0, 0.0),
            Err(ModelError::NonPositiveConstant { name: "c_int", .. })
        ));
        assert!(matches!(
            CosmoParams::<f64>::new(1.0, 0, 0.0, 1.0, -1.0, 0.0),
            Err(ModelError::NonPositiveConstant { name: "a0", .. })
        ));
        assert!(matches!(
            CosmoParams::<f64>::new(1.0, 0, f64::NAN, 1.0, 1.0, 0.0),
            Err(ModelError::NonFinite { .. })
        ));
    }

    #[test]
    fn z_examples() {
        assert_eq!(z_of_a(&params(1.0, 0, 0.0, 1.0), 2.0), 0.25);
        assert_eq!(z_of_a(&params(-1.0, -1, 0.0, 1.0), 1.0), 2.0);
        assert_eq!(z_of_a(&params(1.0, 1, 3.0, 1.0), 1.0), 1.0);
    }

    #[test]
    fn discriminant_examples() {
        assert_eq!(discriminant(&params(1.0, 1, 0.75, 1.0)), 0.0);
        assert_eq!(discriminant(&params(1.0, 1, 0.0, 1.0)), 1.0);
        assert_eq!(discriminant(&params(1.0, -1, 3.0, 1.0)), -3.0);
    }

    #[test]
    fn classify_examples() {
        let f = |g, k, l, c| classify(&params(g, k, l, c)).family;
        assert_eq!(f(1.0, 1, -1.0, 1.0), Family::RadiationLambdaNegativeTrig);
        assert_eq!(f(1.0, 0, 3.0, 1.0), Family::FlatRadiationSinh);
        assert_eq!(f(-1.0, 0, 0.0, 1.0), Family::ZeroLambdaDeSitterFlat);
        assert_eq!(f(1.0, 1, 0.75, 1.0), Family::RadiationLambdaCritical);
        assert_eq!(f(1.0, 1, 1.0, 1.0), Family::RadiationLambdaLargeSinh);
        assert_eq!(f(1.0, -1, 0.5, 1.0), Family::RadiationLambdaSmallCosh);
        assert_eq!(f(1.0 / 3.0, 1, 0.0, 1.0), Family::LogarithmicDegenerate);
        assert_eq!(f(1.0 / 3.0, 0, 0.0, 1.0), Family::ZeroLambdaFlatPowerLaw);
        assert_eq!(f(1.5, 1, 0.0, 1.0), Family::HypergeometricGeneral);
        assert_eq!(f(0.5, 1, 2.0, 1.0), Family::NumericalOnly);
        assert_eq!(f(-1.0, 1, 2.0, 1.0), Family::LogarithmicDegenerate);
    }

    #[test]
    fn degenerate_scan() {
        assert_eq!(degenerate_index(-1.0), Some(-1));
        assert_eq!(degenerate_index(1.0 / 3.0), Some(1));
        assert_eq!(degenerate_index(0.2), Some(2));
        assert_eq!(degenerate_index(1.0 / 101.0), Some(50));
        assert_eq!(degenerate_index(1.0 / 103.0), None);
        assert_eq!(degenerate_index(1.0), None);
        assert_eq!(degenerate_index(0.2 + 1e-9), None);
    }

    #[test]
    fn rhs_examples() {
        assert_eq!(rhs_second_order(&params(1.0, 0, 0.0, 1.0), 1.0), -1.0);
        assert_eq!(rhs_second_order(&params(-1.0, 0, 0.0, 4.0), 2.0), 8.0);
        assert_eq!(rhs_second_order(&params(1.0, 0, 3.0, 1.0), 1.0), 0.0);
    }

    #[test]
    fn derived_state_examples() {
        let s = derived_state(&params(1.0, 0, 0.0, 1.0), 1.0, 1.0).unwrap();
        assert_eq!((s.hubble, s.energy_density), (1.0, 1.0));
        assert!((s.pressure - 1.0 / 3.0).abs() < 1e-15);
        let s = derived_state(&params(-1.0, 0, 0.0, 1.0), 1.0, 1.0).unwrap();
        assert_eq!((s.hubble, s.energy_density, s.pressure), (1.0, 1.0, -1.0));
        assert!(matches!(
            derived_state(&params(1.0, 0, 3.0, 1.0), 1.0, 0.0),
            Err(ModelError::NegativeDensity { .. })
        ));
    }

    #[test]
    fn derived_state_at_turning_point() {
        // closed radiation with Λ<0: turning point where z(a) = 0, found by bisection
        let p = params(1.0, 1, -3.0, 1.0);
        let (mut lo, mut hi) = (0.1, 5.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if z_of_a(&p, mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let a = 0.5 * (lo + hi);
        let s = derived_state(&p, a, 0.0).unwrap();
        assert_eq!(s.hubble, 0.0);
        assert!((s.energy_density - (1.0 / (a * a) + 1.0)).abs() < 1e-14);
        // ρ = C/a⁴ on the constraint surface
        assert!((s.energy_density - 1.0 / a.powi(4)).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn z_solves_linear_first_order_equation(
            g in prop_oneof![-2.0..-0.1f64, 0.1..2.5f64],
            k in -1i64..=1,
            l in -3.0..3.0f64,
            c in 0.1..3.0f64,
            a in 0.3..5.0f64,
        ) {
            let p = CosmoParams::<f64>::new(g, k, l, c, 1.0, 0.0).unwrap();
            prop_assume!(!is_vacuum(g));
            let h = 1e-5 * a;
            let dz = (z_of_a(&p, a + h) - z_of_a(&p, a - h)) / (2.0 * h);
            let lhs = dz + 2.0 * g / a * z_of_a(&p, a);
            let rhs = 2.0 * l / 3.0 * (g + 1.0) * a - 2.0 * g * k as f64 / a;
            let scale = 1.0f64.max(rhs.abs()).max((2.0 * g / a * z_of_a(&p, a)).abs());
            prop_assert!((lhs - rhs).abs() <= 1e-8 * scale, "lhs {lhs} rhs {rhs}");
        }

        #[test]
        fn rhs_is_half_dz_da(
            g in prop_oneof![-2.0..-0.1f64, 0.1..2.5f64, Just(-1.0)],
            k in -1i64..=1,
            l in -3.0..3.0f64,
            c in 0.1..3.0f64,
            a in 0.1..10.0f64,
        ) {
            let p = CosmoParams::<f64>::new(g, k, l, c, 1.0, 0.0).unwrap();
            let h = 1e-5 * a;
            let dz = (z_of_a(&p, a + h) - z_of_a(&p, a - h)) / (2.0 * h);
            let r = rhs_second_order(&p, a);
            prop_assert!((0.5 * dz - r).abs() <= 1e-8 * 1.0f64.max(r.abs()).max(z_of_a(&p, a).abs() / a));
        }

        #[test]
        fn classify_is_pure(
            g in -2.0..2.0f64,
            k in -1i64..=1,
            l in prop_oneof![Just(0.0), -3.0..3.0f64],
            c in 0.1..3.0f64,
        ) {
            prop_assume!(g != 0.0);
            let p = CosmoParams::<f64>::new(g, k, l, c, 1.0, 0.0).unwrap();
            prop_assert_eq!(classify(&p), classify(&p));
        }

        #[test]
        fn barotropic_relation_is_exact(
            g in prop_oneof![-1.5..-0.1f64, 0.1..2.0f64],
            k in -1i64..=1,
            c in 0.1..3.0f64,
            a in 0.2..5.0f64,
        ) {
            let p = CosmoParams::<f64>::new(g, k, 0.0, c, 1.0, 0.0).unwrap();
            let z = z_of_a(&p, a);
            prop_assume!(z >= 0.0);
            let s = derived_state(&p, a, z.sqrt()).unwrap();
            prop_assert_eq!(s.pressure - (p.gamma() - 1.0) * s.energy_density, 0.0);
        }
    }
}
