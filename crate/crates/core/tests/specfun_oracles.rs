use frw_core::specfun::{digamma, dt_du, gamma, hyp2f1, ln_gamma, t_of_u, t_of_u_series};
use frw_core::{CosmoParams, HypSolutionCoeffs};
use proptest::prelude::*;
use statrs::function::gamma as sg;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

#[test]
fn gamma_family_against_statrs() {
    for i in 1..400 {
        let x = -7.95 + i as f64 * 0.0499;
        if (x - x.round()).abs() < 1e-3 && x <= 0.0 {
            continue;
        }
        assert!(rel(gamma(x), sg::gamma(x)) < 1e-12, "gamma({x})");
        if x > 0.0 {
            assert!((ln_gamma(x) - sg::ln_gamma(x)).abs() < 1e-12 * sg::ln_gamma(x).abs().max(1.0));
            assert!((digamma(x) - sg::digamma(x)).abs() < 1e-10 * sg::digamma(x).abs().max(1.0));
        }
    }
}

#[test]
fn hyp2f1_elementary_closed_forms() {
    for x in [-20.0, -3.0, -0.9, -0.3, 0.1, 0.5, 0.8, 0.95, 0.999] {
        let v = hyp2f1(1.0, 1.0, 2.0, x).unwrap();
        assert!(rel(v, -(1.0f64 - x).ln() / x) < 1e-12, "log at {x}");
        let v = hyp2f1(0.7, 2.3, 2.3, x).unwrap();
        assert!(rel(v, (1.0f64 - x).powf(-0.7)) < 1e-12, "binomial at {x}");
    }
    for y in [0.1, 0.4, 0.7, 0.9, 0.99] {
        let v = hyp2f1(0.5, 0.5, 1.5, y * y).unwrap();
        assert!(rel(v, y.asin() / y) < 1e-12, "arcsin at {y}");
        let v = hyp2f1(0.5, 1.0, 1.5, -y * y).unwrap();
        assert!(rel(v, y.atan() / y) < 1e-12, "arctan at {y}");
    }
}

#[test]
fn gauss_sum_at_unit_argument() {
    for (a, b, c) in [(0.3, 0.4, 1.9), (-0.5, 1.2, 2.5), (1.1, 0.2, 3.7)] {
        let expect = sg::gamma(c) * sg::gamma(c - a - b) / (sg::gamma(c - a) * sg::gamma(c - b));
        assert!(rel(hyp2f1(a, b, c, 1.0).unwrap(), expect) < 1e-10);
    }
}

// plain compensated sum of the defining series
fn series(a: f64, b: f64, c: f64, x: f64) -> f64 {
    let (mut sum, mut comp, mut term) = (1.0f64, 0.0f64, 1.0f64);
    for n in 0..5000 {
        let n = n as f64;
        term *= (a + n) * (b + n) / ((c + n) * (n + 1.0)) * x;
        let y = term - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        if term.abs() < 1e-17 * sum.abs() && n > a.abs() + b.abs() {
            break;
        }
    }
    sum
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 1000, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn hyp2f1_matches_direct_series(a in -3.0f64..3.0, b in -3.0f64..3.0, c in 0.5f64..5.0, x in -0.5f64..0.5) {
        let s = series(a, b, c, x);
        let v = hyp2f1(a, b, c, x).unwrap();
        prop_assert!((v - s).abs() <= 1e-10 * s.abs().max(1e-3), "{v} vs {s}");
    }

    #[test]
    fn euler_transformation(a in -3.0f64..3.0, b in -3.0f64..3.0, c in 0.5f64..5.0, x in -0.9f64..0.9) {
        let direct = hyp2f1(a, b, c, x).unwrap();
        let euler = (1.0 - x).powf(c - a - b) * hyp2f1(c - a, c - b, c, x).unwrap();
        prop_assert!((direct - euler).abs() <= 1e-9 * direct.abs().max(1.0));
    }
}

fn closed(gb: f64) -> CosmoParams {
    CosmoParams::zero_lambda(gb, 1, 1.0, 0.0).unwrap()
}

// composite Simpson of dt/du as an independent antiderivative
fn simpson(f: impl Fn(f64) -> f64, lo: f64, hi: f64, n: usize) -> f64 {
    let h = (hi - lo) / n as f64;
    let mut s = f(lo) + f(hi);
    for i in 1..n {
        s += f(lo + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0
}

#[test]
fn t_of_u_increments_match_integrated_derivative() {
    for gb in [0.5, 1.5, 2.0, 3.0] {
        let p = closed(gb);
        let co = HypSolutionCoeffs::matched(&p).unwrap();
        for (u1, u2) in [(0.1, 0.5), (0.3, 0.9), (0.05, 0.95)] {
            let dt = t_of_u(&co, &p, u2).unwrap() - t_of_u(&co, &p, u1).unwrap();
            let q = simpson(|u| dt_du(&co, u).unwrap(), u1, u2, 4000);
            assert!(rel(dt, q) < 1e-9, "gb {gb} [{u1},{u2}] {dt} vs {q}");
        }
    }
}

#[test]
fn t_of_u_derivative_matches_dt_du() {
    for gb in [0.5, 1.5, 2.0, -0.5] {
        let p = closed(gb);
        let co = HypSolutionCoeffs::matched(&p).unwrap();
        for i in 0..=18 {
            let u = 0.05 + 0.05 * i as f64;
            let h = 1e-6;
            let fd = (t_of_u(&co, &p, u + h).unwrap() - t_of_u(&co, &p, u - h).unwrap()) / (2.0 * h);
            let d = dt_du(&co, u).unwrap();
            assert!(rel(fd, d) < 1e-5, "gb {gb} u {u}");
        }
    }
}

#[test]
fn connection_form_agrees_with_series_form() {
    for gb in [0.5, 1.5, 2.0] {
        let p = closed(gb);
        let co = HypSolutionCoeffs::matched(&p).unwrap();
        for u in [0.1, 0.4, 0.8, 0.99, 1.0] {
            let a = t_of_u(&co, &p, u).unwrap();
            let b = t_of_u_series(&co, &p, u).unwrap();
            assert!((a - b).abs() < 1e-9 * a.abs().max(1.0), "gb {gb} u {u}");
        }
    }
}

#[test]
fn reduction_identity() {
    for gb in [0.5f64, 1.0, 1.5] {
        let e = 0.5 + 0.5 / gb;
        for i in 0..=9 {
            let u = 0.1 + 0.1 * i as f64;
            let v = hyp2f1(e, 0.5, 0.5, 1.0 - u).unwrap() * u.powf(e);
            assert!((v - 1.0).abs() < 1e-9, "gb {gb} u {u}");
        }
    }
}
