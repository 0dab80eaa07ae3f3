//! Gauss hypergeometric function ₂F₁(a, b; c; x) on the real axis, x ≤ 1.
//!
//! Evaluation ladder:
//! - `|x| ≤ 1/2`: Gauss series.
//! - `x < −1/2`: Pfaff transformation to `x/(x − 1)`.
//! - `1/2 < x < 1`: connection formula toward `1 − x`, with the logarithmic
//!   limit formulas when `c − a − b` is an integer.
//! - `x = 1`: Gauss summation when `c − a − b > 0`.

use super::gamma::{digamma, gamma, is_nonpositive_integer, rgamma};
use super::SpecFunError;
use crate::scalar::{lit, to_f64, Scalar};

/// Maximum number of series terms before giving up.
pub const MAX_TERMS: usize = 100_000;

/// `c − a − b` within this distance of an integer takes the logarithmic branch.
const INTEGER_SNAP: f64 = 1e-9;

const DIRECT_SERIES_RADIUS: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hyp2F1Args<T> {
    pub a: T,
    pub b: T,
    pub c: T,
    pub x: T,
}

impl<T: Scalar> Hyp2F1Args<T> {
    pub fn new(a: T, b: T, c: T, x: T) -> Self {
        Self { a, b, c, x }
    }

    pub fn eval(&self) -> Result<T, SpecFunError> {
        hyp2f1(self.a, self.b, self.c, self.x)
    }
}

/// Degree of the polynomial when `v` is a nonpositive integer.
fn terminating_degree<T: Scalar>(v: T) -> Option<usize> {
    if is_nonpositive_integer(v) {
        (-v).to_usize()
    } else {
        None
    }
}

/// ₂F₁(a, b; c; x)
pub fn hyp2f1<T: Scalar>(a: T, b: T, c: T, x: T) -> Result<T, SpecFunError> {
    if !(a.is_finite() && b.is_finite() && c.is_finite()) {
        return Err(SpecFunError::NonFiniteParameter);
    }
    if x.is_nan() {
        return Err(SpecFunError::ArgumentOutOfDomain { x: f64::NAN });
    }
    if a == T::zero() || b == T::zero() || x == T::zero() {
        return Ok(T::one());
    }

    let degree = match (terminating_degree(a), terminating_degree(b)) {
        (Some(m), Some(n)) => Some(m.min(n)),
        (m, n) => m.or(n),
    };
    if let Some(kc) = terminating_degree(c) {
        match degree {
            Some(m) if m <= kc => {}
            _ => return Err(SpecFunError::CNonPositiveInteger { c: to_f64(c) }),
        }
    }
    if let Some(m) = degree {
        return Ok(polynomial(a, b, c, x, m));
    }

    let one = T::one();
    if x > one {
        return Err(SpecFunError::ArgumentOutOfDomain { x: to_f64(x) });
    }
    if x == one {
        let s = c - a - b;
        if s <= T::zero() {
            return Err(SpecFunError::ArgumentOutOfDomain { x: 1.0 });
        }
        return Ok(gamma(c) * gamma(s) * rgamma(c - a) * rgamma(c - b));
    }
    if a == c {
        return Ok((one - x).powf(-b));
    }
    if b == c {
        return Ok((one - x).powf(-a));
    }

    let radius = lit::<T>(DIRECT_SERIES_RADIUS);
    if x.abs() <= radius {
        series(a, b, c, x)
    } else if x < -radius {
        // Pfaff: (1−x)^(−a) ₂F₁(a, c−b; c; x/(x−1))
        let y = x / (x - one);
        Ok((one - x).powf(-a) * hyp2f1(a, c - b, c, y)?)
    } else {
        near_one(a, b, c, x)
    }
}

fn polynomial<T: Scalar>(a: T, b: T, c: T, x: T, degree: usize) -> T {
    let mut term = T::one();
    let mut sum = T::one();
    for n in 0..degree {
        let nf = lit::<T>(n as f64);
        term = term * (a + nf) * (b + nf) / ((c + nf) * (nf + T::one())) * x;
        sum = sum + term;
    }
    sum
}

/// Direct Gauss series, |x| < 1, with Neumaier-compensated summation.
pub(crate) fn series<T: Scalar>(a: T, b: T, c: T, x: T) -> Result<T, SpecFunError> {
    let eps = T::epsilon();
    let mut term = T::one();
    let mut sum = T::one();
    let mut comp = T::zero();
    let mut small = 0;
    for n in 0..MAX_TERMS {
        let nf = lit::<T>(n as f64);
        term = term * (a + nf) * (b + nf) / ((c + nf) * (nf + T::one())) * x;
        let prev = sum;
        let t = sum + term;
        comp = comp
            + if sum.abs() >= term.abs() {
                (sum - t) + term
            } else {
                (term - t) + sum
            };
        sum = t;
        if term.abs() <= eps * sum.abs() || sum == prev {
            small += 1;
            if small >= 3 {
                return Ok(sum + comp);
            }
        } else {
            small = 0;
        }
        if !sum.is_finite() {
            break;
        }
    }
    Err(SpecFunError::NoConvergence { terms: MAX_TERMS })
}

fn near_one<T: Scalar>(a: T, b: T, c: T, x: T) -> Result<T, SpecFunError> {
    let one = T::one();
    let w = one - x;
    let s = c - a - b;
    let m = s.round();
    if (s - m).abs() <= lit(INTEGER_SNAP) {
        let m = m.to_i64().expect("finite integer");
        return integer_gap(a, b, c, w, m);
    }
    // A&S 15.3.6
    let first = gamma(c) * gamma(s) * rgamma(c - a) * rgamma(c - b);
    let second = gamma(c) * gamma(-s) * rgamma(a) * rgamma(b);
    let mut out = T::zero();
    if first != T::zero() {
        out = out + first * hyp2f1(a, b, one - s, w)?;
    }
    if second != T::zero() {
        out = out + second * w.powf(s) * hyp2f1(c - a, c - b, one + s, w)?;
    }
    Ok(out)
}

/// Sum of `Σ coef_n · w^n · bracket_n` for the logarithmic formulas, where
/// `coef_{n+1}/coef_n = (p+n)(q+n)/((n+1)(n+1+m))` and
/// `bracket_n = ln w − ψ(n+1) − ψ(n+m+1) + ψ(p+n) + ψ(q+n)`.
fn log_series<T: Scalar>(p: T, q: T, m: usize, w: T) -> Result<T, SpecFunError> {
    let one = T::one();
    let mf = lit::<T>(m as f64);
    // 1/m!
    let mut coef = rgamma(mf + one);
    let ln_w = w.ln();
    let mut psi_n1 = digamma(one);
    let mut psi_nm1 = digamma(mf + one);
    let mut psi_p = digamma(p);
    let mut psi_q = digamma(q);
    let mut sum = T::zero();
    let mut wn = one;
    let eps = T::epsilon();
    let mut small = 0;
    for n in 0..MAX_TERMS {
        let nf = lit::<T>(n as f64);
        let term = coef * wn * (ln_w - psi_n1 - psi_nm1 + psi_p + psi_q);
        let prev = sum;
        sum = sum + term;
        if term.abs() <= eps * sum.abs() || sum == prev {
            small += 1;
            if small >= 3 {
                return Ok(sum);
            }
        } else {
            small = 0;
        }
        coef = coef * (p + nf) * (q + nf) / ((nf + one) * (nf + one + mf));
        wn = wn * w;
        psi_n1 = psi_n1 + (nf + one).recip();
        psi_nm1 = psi_nm1 + (nf + one + mf).recip();
        psi_p = psi_p + (p + nf).recip();
        psi_q = psi_q + (q + nf).recip();
    }
    Err(SpecFunError::NoConvergence { terms: MAX_TERMS })
}

/// `c = a + b + m` with integer `m`, A&S 15.3.10–15.3.12. `w = 1 − x`.
fn integer_gap<T: Scalar>(a: T, b: T, c: T, w: T, m: i64) -> Result<T, SpecFunError> {
    let one = T::one();
    if m == 0 {
        let pref = gamma(c) * rgamma(a) * rgamma(b);
        // 15.3.10 has bracket 2ψ(n+1) − ψ(a+n) − ψ(b+n) − ln w = −(log_series bracket)
        return Ok(-pref * log_series(a, b, 0, w)?);
    }
    let k = m.unsigned_abs() as usize;
    let kf = lit::<T>(k as f64);
    let sign_k = if k.is_multiple_of(2) { one } else { -one };
    if m > 0 {
        // 15.3.11
        let mut finite = T::zero();
        let mut term = one;
        for n in 0..k {
            finite = finite + term;
            let nf = lit::<T>(n as f64);
            term = term * (a + nf) * (b + nf) / ((nf + one) * (one - kf + nf)) * w;
        }
        let first = gamma(kf) * gamma(c) * rgamma(a + kf) * rgamma(b + kf) * finite;
        let pref = gamma(c) * rgamma(a) * rgamma(b);
        let tail = if pref == T::zero() {
            T::zero()
        } else {
            // (x − 1)^m = (−1)^m w^m
            sign_k * w.powi(k as i32) * pref * log_series(a + kf, b + kf, k, w)?
        };
        Ok(first - tail)
    } else {
        // 15.3.12
        let mut finite = T::zero();
        let mut term = one;
        for n in 0..k {
            finite = finite + term;
            let nf = lit::<T>(n as f64);
            term = term * (a - kf + nf) * (b - kf + nf) / ((nf + one) * (one - kf + nf)) * w;
        }
        let first = gamma(kf) * gamma(c) * rgamma(a) * rgamma(b) * w.powi(-(k as i32)) * finite;
        let pref = gamma(c) * rgamma(a - kf) * rgamma(b - kf);
        let tail = if pref == T::zero() {
            T::zero()
        } else {
            sign_k * pref * log_series(a, b, k, w)?
        };
        Ok(first - tail)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn trivial_values() {
        assert_eq!(hyp2f1(1.3, 0.7, 2.1, 0.0).unwrap(), 1.0);
        assert_eq!(hyp2f1(0.0, -0.5, 0.0, 0.3).unwrap(), 1.0);
        assert_eq!(hyp2f1(0.0, -0.5, 0.25, 0.3).unwrap(), 1.0);
    }

    #[test]
    fn arcsin_identity_at_half() {
        let v = hyp2f1(1.0, 1.0, 1.5, 0.5).unwrap();
        assert!(rel(v, FRAC_PI_2) < 1e-14, "{v}");
    }

    #[test]
    fn c_pole_is_rejected() {
        assert_eq!(
            hyp2f1(1.0, 2.0, 0.0, 0.1),
            Err(SpecFunError::CNonPositiveInteger { c: 0.0 })
        );
        assert!(hyp2f1(1.0, 2.0, -3.0, 0.1).is_err());
        // terminates before reaching the pole
        let v = hyp2f1(-2.0, 1.0, -3.0, 0.5).unwrap();
        assert!(rel(v, 1.0 + (-2.0 / -3.0) * 0.5 + (-2.0 * -1.0 * 1.0 * 2.0) / (-3.0 * -2.0 * 2.0) * 0.25) < 1e-15);
    }

    #[test]
    fn domain() {
        assert!(matches!(
            hyp2f1(0.5, 0.5, 1.5, 1.2),
            Err(SpecFunError::ArgumentOutOfDomain { .. })
        ));
        assert!(matches!(
            hyp2f1(1.0, 1.0, 1.5, 1.0),
            Err(SpecFunError::ArgumentOutOfDomain { .. })
        ));
        // Gauss sum: ₂F₁(1/2, 1/2; 3/2; 1) = π/2
        let v = hyp2f1(0.5, 0.5, 1.5, 1.0).unwrap();
        assert!(rel(v, FRAC_PI_2) < 1e-14);
    }

    #[test]
    fn elementary_closed_forms() {
        for &x in &[-5.0, -0.9, -0.3, 0.2, 0.6, 0.8, 0.95, 0.999] {
            // ₂F₁(1,1;2;x) = −ln(1−x)/x
            let v = hyp2f1(1.0, 1.0, 2.0, x).unwrap();
            let e = -(1.0f64 - x).ln() / x;
            assert!(rel(v, e) < 1e-13, "ln x={x} {v} {e}");
            // ₂F₁(1/2,1;3/2;−x²)… use x>0 branch: ₂F₁(1/2,1/2;3/2;x) = arcsin(√x)/√x for 0<x<1
            if x > 0.0 {
                let v = hyp2f1(0.5, 0.5, 1.5, x).unwrap();
                let e = x.sqrt().asin() / x.sqrt();
                assert!(rel(v, e) < 1e-13, "asin x={x}");
            } else {
                // ₂F₁(1/2,1;3/2;−y) = arctan(√y)/√y
                let y = -x;
                let v = hyp2f1(0.5, 1.0, 1.5, x).unwrap();
                let e = y.sqrt().atan() / y.sqrt();
                assert!(rel(v, e) < 1e-13, "atan x={x}");
            }
        }
    }

    #[test]
    fn integer_gap_formulas_match_series() {
        // c − a − b ∈ {−2, −1, 0, 1, 2}; direct series still converges at these x
        let cases = [
            (0.3, 0.9, 1.2),
            (0.3, 0.9, 2.2),
            (0.3, 0.9, 3.2),
            (0.3, 0.9, 0.2),
            (1.7, 0.9, 0.6),
            (2.5, -1.5, 3.0),
            (1.25, 0.75, 2.0),
        ];
        for &(a, b, c) in &cases {
            for &x in &[0.55, 0.7, 0.85] {
                let direct = series(a, b, c, x).unwrap();
                let v = hyp2f1(a, b, c, x).unwrap();
                assert!(rel(v, direct) < 1e-12, "a={a} b={b} c={c} x={x}: {v} vs {direct}");
            }
        }
    }

    #[test]
    fn connection_matches_series() {
        for &(a, b, c) in &[(0.3, 0.4, 1.9), (1.5, 0.25, 0.8), (-0.7, 1.3, 2.45)] {
            for &x in &[0.51, 0.7, 0.9] {
                let direct = series(a, b, c, x).unwrap();
                let v = hyp2f1(a, b, c, x).unwrap();
                assert!(rel(v, direct) < 1e-12, "a={a} b={b} c={c} x={x}");
            }
        }
    }

    #[test]
    fn single_precision_works() {
        let v = hyp2f1(1.0f32, 1.0, 1.5, 0.5).unwrap();
        assert!((v as f64 - PI / 2.0).abs() < 1e-5);
    }
}
