//! Real Γ, ln|Γ|, 1/Γ and ψ for generic scalars.

use crate::scalar::{lit, Scalar};

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

pub(crate) fn is_nonpositive_integer<T: Scalar>(x: T) -> bool {
    x <= T::zero() && x == x.round()
}

fn lanczos_sum<T: Scalar>(z: T) -> T {
    // z is the argument minus one
    let mut x = lit::<T>(LANCZOS[0]);
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        x = x + lit::<T>(c) / (z + lit(i as f64));
    }
    x
}

/// Γ(x). Infinite at the poles.
pub fn gamma<T: Scalar>(x: T) -> T {
    if is_nonpositive_integer(x) {
        return T::infinity();
    }
    if x < lit(0.5) {
        let pi = T::PI();
        return pi / ((pi * x).sin() * gamma(T::one() - x));
    }
    if x == x.round() && x <= lit(30.0) {
        // exact factorials keep integer arguments exact
        let mut acc = T::one();
        let mut k = lit::<T>(2.0);
        while k < x {
            acc = acc * k;
            k = k + T::one();
        }
        return acc;
    }
    let z = x - T::one();
    let t = z + lit(LANCZOS_G + 0.5);
    let half = lit::<T>(0.5);
    // split the power to delay overflow
    let p = t.powf((z + half) * half);
    (T::TAU()).sqrt() * p * (-t).exp() * p * lanczos_sum(z)
}

/// ln|Γ(x)|
pub fn ln_gamma<T: Scalar>(x: T) -> T {
    if is_nonpositive_integer(x) {
        return T::infinity();
    }
    if x < lit(0.5) {
        let pi = T::PI();
        return (pi / (pi * x).sin().abs()).ln() - ln_gamma(T::one() - x);
    }
    let z = x - T::one();
    let t = z + lit(LANCZOS_G + 0.5);
    lit::<T>(0.5) * T::TAU().ln() + (z + lit(0.5)) * t.ln() - t + lanczos_sum(z).ln()
}

/// 1/Γ(x), zero at the poles of Γ.
pub fn rgamma<T: Scalar>(x: T) -> T {
    if is_nonpositive_integer(x) {
        T::zero()
    } else {
        T::one() / gamma(x)
    }
}

/// Digamma ψ(x) = Γ'(x)/Γ(x).
pub fn digamma<T: Scalar>(x: T) -> T {
    if is_nonpositive_integer(x) {
        return T::nan();
    }
    if x < T::zero() {
        let pi = T::PI();
        return digamma(T::one() - x) - pi / (pi * x).tan();
    }
    if x == T::one() {
        return -lit::<T>(EULER_GAMMA);
    }
    let mut x = x;
    let mut acc = T::zero();
    while x < lit(10.0) {
        acc = acc - x.recip();
        x = x + T::one();
    }
    let inv2 = (x * x).recip();
    // Bernoulli tail: B_2k / (2k x^2k)
    let series = inv2
        * (lit::<T>(1.0 / 12.0)
            - inv2
                * (lit::<T>(1.0 / 120.0)
                    - inv2
                        * (lit::<T>(1.0 / 252.0)
                            - inv2
                                * (lit::<T>(1.0 / 240.0)
                                    - inv2
                                        * (lit::<T>(1.0 / 132.0)
                                            - inv2
                                                * (lit::<T>(691.0 / 32760.0)
                                                    - inv2 * lit::<T>(1.0 / 12.0)))))));
    acc + x.ln() - lit::<T>(0.5) / x - series
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn gamma_against_statrs() {
        for i in 0..400 {
            let x = -7.95 + i as f64 * 0.05;
            if (x - x.round()).abs() < 1e-9 && x <= 0.0 {
                continue;
            }
            let ours = gamma(x);
            let theirs = statrs::function::gamma::gamma(x);
            assert!(rel(ours, theirs) < 1e-13, "x={x} ours={ours} statrs={theirs}");
            let lg = ln_gamma(x);
            assert!((lg - theirs.abs().ln()).abs() < 1e-12 * lg.abs().max(1.0), "lnΓ({x})");
        }
    }

    #[test]
    fn gamma_known_values() {
        assert_eq!(gamma(5.0), 24.0);
        assert!(rel(gamma(0.5), std::f64::consts::PI.sqrt()) < 1e-15);
        assert!(rel(gamma(-0.5), -2.0 * std::f64::consts::PI.sqrt()) < 1e-14);
        assert!(gamma(-2.0f64).is_infinite());
        assert_eq!(rgamma(-3.0), 0.0);
        assert!(rel(gamma(1.5f32) as f64, 0.886_226_925_452_758) < 1e-6);
    }

    #[test]
    fn digamma_against_statrs() {
        for i in 0..300 {
            let x = -4.93 + i as f64 * 0.05;
            if (x - x.round()).abs() < 1e-9 && x <= 0.0 {
                continue;
            }
            let ours = digamma(x);
            let theirs = statrs::function::gamma::digamma(x);
            assert!(
                (ours - theirs).abs() < 1e-12 * theirs.abs().max(1.0),
                "x={x} ours={ours} statrs={theirs}"
            );
        }
        assert!((digamma(1.0) + EULER_GAMMA).abs() < 1e-16);
        // ψ(1/2) = −γ − 2 ln 2
        assert!((digamma(0.5) + EULER_GAMMA + 2.0 * 2f64.ln()).abs() < 1e-14);
    }
}
