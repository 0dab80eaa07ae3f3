use std::cell::Cell;
use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use super::NumericError;
use crate::model::{dz_da, z_of_a, CosmoParams};
use crate::scalar::{lit, to_f64, Scalar};

/// Subinterval budget of the adaptive integrator.
pub const MAX_INTERVALS: usize = 4000;

/// Endpoints carrying an inverse-square-root singularity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SingularEndpoints {
    #[default]
    None,
    SqrtLower,
    SqrtUpper,
    SqrtBoth,
}

impl SingularEndpoints {
    fn from_flags(lower: bool, upper: bool) -> Self {
        match (lower, upper) {
            (false, false) => Self::None,
            (true, false) => Self::SqrtLower,
            (false, true) => Self::SqrtUpper,
            (true, true) => Self::SqrtBoth,
        }
    }

    fn lower(self) -> bool {
        matches!(self, Self::SqrtLower | Self::SqrtBoth)
    }

    fn upper(self) -> bool {
        matches!(self, Self::SqrtUpper | Self::SqrtBoth)
    }

    fn swapped(self) -> Self {
        Self::from_flags(self.upper(), self.lower())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadConfig<T> {
    pub target_tol: T,
    pub singular_endpoint_map: SingularEndpoints,
}

impl<T: Scalar> Default for QuadConfig<T> {
    fn default() -> Self {
        Self {
            target_tol: lit(1e-10),
            singular_endpoint_map: SingularEndpoints::None,
        }
    }
}

impl<T: Scalar> QuadConfig<T> {
    pub fn with_map(mut self, map: SingularEndpoints) -> Self {
        self.singular_endpoint_map = map;
        self
    }
}

#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// 15-point Kronrod estimate and QUADPACK error estimate on `[a, b]`.
fn qk15<T: Scalar>(f: &mut impl FnMut(T) -> T, a: T, b: T) -> (T, T) {
    let half = lit::<T>(0.5);
    let centr = half * (a + b);
    let hlgth = half * (b - a);
    let fc = f(centr);
    let mut resg = fc * lit(WG[3]);
    let mut resk = fc * lit(WGK[7]);
    let mut resabs = resk.abs();
    let mut fv1 = [T::zero(); 7];
    let mut fv2 = [T::zero(); 7];
    for (j, &wg) in WG.iter().take(3).enumerate() {
        let jtw = 2 * j + 1;
        let absc = hlgth * lit(XGK[jtw]);
        let f1 = f(centr - absc);
        let f2 = f(centr + absc);
        fv1[jtw] = f1;
        fv2[jtw] = f2;
        resg = resg + lit::<T>(wg) * (f1 + f2);
        resk = resk + lit::<T>(WGK[jtw]) * (f1 + f2);
        resabs = resabs + lit::<T>(WGK[jtw]) * (f1.abs() + f2.abs());
    }
    for j in 0..4 {
        let jtwm1 = 2 * j;
        let absc = hlgth * lit(XGK[jtwm1]);
        let f1 = f(centr - absc);
        let f2 = f(centr + absc);
        fv1[jtwm1] = f1;
        fv2[jtwm1] = f2;
        resk = resk + lit::<T>(WGK[jtwm1]) * (f1 + f2);
        resabs = resabs + lit::<T>(WGK[jtwm1]) * (f1.abs() + f2.abs());
    }
    let reskh = resk * half;
    let mut resasc = lit::<T>(WGK[7]) * (fc - reskh).abs();
    for j in 0..7 {
        resasc = resasc + lit::<T>(WGK[j]) * ((fv1[j] - reskh).abs() + (fv2[j] - reskh).abs());
    }
    let result = resk * hlgth;
    resabs = resabs * hlgth.abs();
    resasc = resasc * hlgth.abs();
    let mut abserr = ((resk - resg) * hlgth).abs();
    if resasc != T::zero() && abserr != T::zero() {
        abserr = resasc * T::one().min((lit::<T>(200.0) * abserr / resasc).powf(lit(1.5)));
    }
    let eps = T::epsilon();
    if resabs > T::min_positive_value() / (lit::<T>(50.0) * eps) {
        abserr = abserr.max(lit::<T>(50.0) * eps * resabs);
    }
    (result, abserr)
}

struct Piece<T> {
    a: T,
    b: T,
    value: T,
    err: T,
}

impl<T: PartialOrd> PartialEq for Piece<T> {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl<T: PartialOrd> Eq for Piece<T> {}
impl<T: PartialOrd> PartialOrd for Piece<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<T: PartialOrd> Ord for Piece<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.partial_cmp(&other.err).unwrap_or(Ordering::Equal)
    }
}

/// Globally adaptive G7/K15 on a finite interval.
fn adaptive<T: Scalar>(mut f: impl FnMut(T) -> T, a: T, b: T, tol: T) -> Result<T, NumericError> {
    if a == b {
        return Ok(T::zero());
    }
    let (v, e) = qk15(&mut f, a, b);
    let mut heap = BinaryHeap::new();
    heap.push(Piece { a, b, value: v, err: e });
    let mut total = v;
    let mut total_err = e;
    let mut count = 1;
    loop {
        if !total.is_finite() {
            return Err(NumericError::NoConvergence { intervals: count });
        }
        if total_err <= tol * T::one().max(total.abs()) {
            return Ok(total);
        }
        if count >= MAX_INTERVALS {
            return Err(NumericError::NoConvergence { intervals: count });
        }
        let worst = heap.pop().expect("heap never empty");
        let mid = worst.a + (worst.b - worst.a) * lit(0.5);
        if mid == worst.a || mid == worst.b {
            // interval cannot be split further; accept what we have
            heap.push(Piece { err: T::zero(), ..worst });
            total_err = total_err - worst.err;
            continue;
        }
        let (v1, e1) = qk15(&mut f, worst.a, mid);
        let (v2, e2) = qk15(&mut f, mid, worst.b);
        total = total - worst.value + v1 + v2;
        total_err = total_err - worst.err + e1 + e2;
        heap.push(Piece { a: worst.a, b: mid, value: v1, err: e1 });
        heap.push(Piece { a: mid, b: worst.b, value: v2, err: e2 });
        count += 1;
        if count % 64 == 0 {
            // refresh the running sums against drift
            total = heap.iter().fold(T::zero(), |s, p| s + p.value);
            total_err = heap.iter().fold(T::zero(), |s, p| s + p.err);
        }
    }
}

/// `∫_from^to f(x) dx`, with `x = end ± s²` applied at flagged endpoints.
pub fn quad_general<T, F>(mut f: F, from: T, to: T, cfg: &QuadConfig<T>) -> Result<T, NumericError>
where
    T: Scalar,
    F: FnMut(T) -> T,
{
    if !(cfg.target_tol > T::zero()) {
        return Err(NumericError::InvalidConfig("target_tol must be positive"));
    }
    if from == to {
        return Ok(T::zero());
    }
    if to < from {
        let swapped = QuadConfig {
            singular_endpoint_map: cfg.singular_endpoint_map.swapped(),
            ..*cfg
        };
        return quad_general(f, to, from, &swapped).map(|v| -v);
    }
    let tol = cfg.target_tol;
    let two = lit::<T>(2.0);
    let map = cfg.singular_endpoint_map;
    match map {
        SingularEndpoints::None => adaptive(f, from, to, tol),
        SingularEndpoints::SqrtLower => {
            let w = (to - from).sqrt();
            adaptive(|s: T| two * s * f(from + s * s), T::zero(), w, tol)
        }
        SingularEndpoints::SqrtUpper => {
            let w = (to - from).sqrt();
            adaptive(|s: T| two * s * f(to - s * s), T::zero(), w, tol)
        }
        SingularEndpoints::SqrtBoth => {
            let mid = from + (to - from) * lit(0.5);
            let w = (mid - from).sqrt();
            let lower = adaptive(|s: T| two * s * f(from + s * s), T::zero(), w, tol)?;
            let upper = adaptive(|s: T| two * s * f(to - s * s), T::zero(), w, tol)?;
            Ok(lower + upper)
        }
    }
}

/// Scale of the terms of `z(a)` at `a`, used for relative zero tests.
fn z_scale<T: Scalar>(p: &CosmoParams<T>, a: T) -> T {
    let k = p.kappa().value::<T>().abs();
    let matter = (z_of_a(p, a) + p.kappa().value::<T>()
        - p.lambda_cc() / lit(3.0) * a * a)
        .abs();
    T::one().max(k).max(matter).max((p.lambda_cc() / lit::<T>(3.0) * a * a).abs())
}

fn is_root<T: Scalar>(p: &CosmoParams<T>, a: T) -> bool {
    z_of_a(p, a).abs() <= lit::<T>(1e-10) * z_scale(p, a)
}

/// Signed time `∫_{a_from}^{a_to} da/√z(a)` along one monotone piece.
///
/// Endpoints that are roots of `z` (turning points) are detected and handled
/// by the square-root substitution, as are endpoints flagged in `cfg`.
pub fn t_of_a_quadrature<T: Scalar>(
    params: &CosmoParams<T>,
    a_from: T,
    a_to: T,
    cfg: &QuadConfig<T>,
) -> Result<T, NumericError> {
    for a in [a_from, a_to] {
        if !(a > T::zero()) || !a.is_finite() {
            return Err(NumericError::NonPositiveScaleFactor { a: to_f64(a) });
        }
    }
    if a_from == a_to {
        return Ok(T::zero());
    }
    let (lo, hi, sign) = if a_from < a_to {
        (a_from, a_to, T::one())
    } else {
        (a_to, a_from, -T::one())
    };
    let mut flags = if sign > T::zero() {
        cfg.singular_endpoint_map
    } else {
        cfg.singular_endpoint_map.swapped()
    };
    flags = SingularEndpoints::from_flags(
        flags.lower() || is_root(params, lo),
        flags.upper() || is_root(params, hi),
    );
    for (flag, end) in [(flags.lower(), lo), (flags.upper(), hi)] {
        if flag {
            let slope = dz_da(params, end).abs();
            if slope <= lit::<T>(1e-8) * z_scale(params, end) / end {
                return Err(NumericError::EndpointNotSimpleRoot { a: to_f64(end) });
            }
        }
    }
    // interior sign scan
    let n = 64;
    for i in 1..n {
        let a = lo + (hi - lo) * lit::<T>(i as f64) / lit::<T>(n as f64);
        let near_end = (flags.lower() || flags.upper()) && is_root(params, a);
        if !(z_of_a(params, a) > T::zero()) && !near_end {
            return Err(NumericError::NonPositiveIntegrand { a: to_f64(a) });
        }
    }
    let bad = Cell::new(None::<T>);
    let two = lit::<T>(2.0);
    let plain = QuadConfig {
        singular_endpoint_map: SingularEndpoints::None,
        ..*cfg
    };
    // mapped side a = end ± s²: the integrand is evaluated in s so the
    // distance to the root never suffers from rounding; very close to the
    // root z is replaced by its tangent, which is exact to rounding there
    let side = |end: T, outward: T, s_max: T| -> Result<T, NumericError> {
        let slope = dz_da(params, end).abs();
        let scale = z_scale(params, end);
        let d_lin = lit::<T>(1e-8) * end * T::one().min(slope * end / scale);
        let f = |s: T| {
            let d = s * s;
            if d <= d_lin {
                return two / slope.sqrt();
            }
            let a = end + outward * d;
            let z = z_of_a(params, a);
            if z > T::zero() {
                two * s / z.sqrt()
            } else if is_root(params, a) {
                two / slope.sqrt()
            } else {
                bad.set(Some(a));
                T::zero()
            }
        };
        quad_general(f, T::zero(), s_max, &plain)
    };
    let direct = |from: T, to: T| -> Result<T, NumericError> {
        let f = |a: T| {
            let z = z_of_a(params, a);
            if z > T::zero() {
                z.sqrt().recip()
            } else {
                bad.set(Some(a));
                T::zero()
            }
        };
        quad_general(f, from, to, &plain)
    };
    let v = match (flags.lower(), flags.upper()) {
        (false, false) => direct(lo, hi)?,
        (true, false) => side(lo, T::one(), (hi - lo).sqrt())?,
        (false, true) => side(hi, -T::one(), (hi - lo).sqrt())?,
        (true, true) => {
            let mid = lo + (hi - lo) * lit(0.5);
            side(lo, T::one(), (mid - lo).sqrt())? + side(hi, -T::one(), (hi - mid).sqrt())?
        }
    };
    if let Some(a) = bad.get() {
        return Err(NumericError::NonPositiveIntegrand { a: to_f64(a) });
    }
    Ok(sign * v)
}
