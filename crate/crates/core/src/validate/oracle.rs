//! Brute-force reference for ₂F₁: the defining power series summed in
//! double-double arithmetic (about 32 significant digits), with no
//! transformations. Only meaningful for `|x|` comfortably below 1.

#[derive(Debug, Clone, Copy, PartialEq)]
struct Dd {
    hi: f64,
    lo: f64,
}

fn two_sum(a: f64, b: f64) -> Dd {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    Dd { hi: s, lo: err }
}

fn quick_two_sum(a: f64, b: f64) -> Dd {
    let s = a + b;
    Dd { hi: s, lo: b - (s - a) }
}

impl Dd {
    fn from(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    fn add(self, o: Dd) -> Dd {
        let s = two_sum(self.hi, o.hi);
        let t = two_sum(self.lo, o.lo);
        let v = quick_two_sum(s.hi, s.lo + t.hi);
        quick_two_sum(v.hi, v.lo + t.lo)
    }

    fn mul(self, o: Dd) -> Dd {
        let p = self.hi * o.hi;
        let e = self.hi.mul_add(o.hi, -p);
        quick_two_sum(p, e + (self.hi * o.lo + self.lo * o.hi))
    }

    fn div(self, o: Dd) -> Dd {
        let q1 = self.hi / o.hi;
        let r = self.add(o.mul(Dd::from(-q1)));
        let q2 = r.hi / o.hi;
        let r = r.add(o.mul(Dd::from(-q2)));
        let q3 = r.hi / o.hi;
        quick_two_sum(q1, q2).add(Dd::from(q3))
    }

    fn abs_hi(self) -> f64 {
        self.hi.abs()
    }
}

/// Term limit of the brute-force series.
pub const ORACLE_MAX_TERMS: usize = 20_000;

/// `Σ (a)ₙ(b)ₙ/((c)ₙ n!) xⁿ` in double-double. `None` when the series does
/// not settle within [`ORACLE_MAX_TERMS`] or `c` hits a pole.
pub fn hyp2f1_series_oracle(a: f64, b: f64, c: f64, x: f64) -> Option<f64> {
    let xd = Dd::from(x);
    let mut term = Dd::from(1.0);
    let mut sum = Dd::from(1.0);
    for n in 0..ORACLE_MAX_TERMS {
        let nf = n as f64;
        let num = two_sum(a, nf).mul(two_sum(b, nf));
        let den = two_sum(c, nf).mul(Dd::from(nf + 1.0));
        if den.hi == 0.0 {
            return None;
        }
        term = term.mul(num).div(den).mul(xd);
        sum = sum.add(term);
        if term.hi == 0.0 {
            return Some(sum.hi + sum.lo);
        }
        if term.abs_hi() < 1e-33 * sum.abs_hi() && nf > (a.abs() + b.abs() + c.abs()) {
            return Some(sum.hi + sum.lo);
        }
    }
    None
}
