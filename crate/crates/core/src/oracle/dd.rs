//! Double-double arithmetic (about 32 significant digits).
//!
//! Second differences at small steps lose roughly `2·log10(1/h)` digits to
//! cancellation, so metric components are evaluated and differenced in this
//! type and only rounded to `f64` afterwards.

use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::expr::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

const LN2: Dd = Dd {
    hi: std::f64::consts::LN_2,
    lo: 2.319_046_813_846_299_6e-17,
};
const FRAC_PI_2: Dd = Dd {
    hi: std::f64::consts::FRAC_PI_2,
    lo: 6.123_233_995_736_766e-17,
};
const EPS: f64 = 1e-33;

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    pub const fn new(hi: f64) -> Self {
        Dd { hi, lo: 0.0 }
    }

    fn renorm(hi: f64, lo: f64) -> Self {
        let (h, l) = quick_two_sum(hi, lo);
        Dd { hi: h, lo: l }
    }

    fn scale2(self, k: i32) -> Self {
        let mut out = self;
        let mut k = k;
        while k != 0 {
            let step = k.clamp(-1000, 1000);
            let s = 2f64.powi(step);
            out = Dd {
                hi: out.hi * s,
                lo: out.lo * s,
            };
            k -= step;
        }
        out
    }

    pub fn abs(self) -> Self {
        if self.hi < 0.0 {
            -self
        } else {
            self
        }
    }

    pub fn mul_f64(self, b: f64) -> Self {
        let (p, e) = two_prod(self.hi, b);
        Self::renorm(p, e + self.lo * b)
    }

    fn square(self) -> Self {
        self * self
    }

    fn expm1_small(r: Dd) -> Dd {
        let mut sum = r;
        let mut term = r;
        for k in 2..60 {
            term = (term * r) / Dd::new(k as f64);
            sum = sum + term;
            if !(term.hi.abs() > EPS * sum.hi.abs()) {
                break;
            }
        }
        sum
    }

    fn exp_dd(self) -> Dd {
        if self.hi > 709.7 {
            return Dd::new(f64::INFINITY);
        }
        if self.hi < -745.0 {
            return Dd::ZERO;
        }
        if self.hi.is_nan() {
            return Dd::new(f64::NAN);
        }
        let k = (self.hi / LN2.hi).round();
        let r = (self - LN2.mul_f64(k)).scale2(-10);
        let mut s = Self::expm1_small(r);
        for _ in 0..10 {
            s = s.mul_f64(2.0) + s.square();
        }
        (s + Dd::ONE).scale2(k as i32)
    }

    fn ln_dd(self) -> Dd {
        if !(self.hi > 0.0) {
            return Dd::new(f64::NAN);
        }
        let mut y = Dd::new(self.hi.ln());
        for _ in 0..2 {
            y = y + self * (-y).exp_dd() - Dd::ONE;
        }
        y
    }

    fn sin_cos_small(r: Dd) -> (Dd, Dd) {
        let r2 = r.square();
        let mut s = r;
        let mut term = r;
        let mut k = 1.0;
        while term.hi.abs() > EPS && k < 80.0 {
            term = -(term * r2) / Dd::new((k + 1.0) * (k + 2.0));
            s = s + term;
            k += 2.0;
        }
        let mut c = Dd::ONE;
        let mut term = Dd::ONE;
        let mut k = 0.0;
        while term.hi.abs() > EPS && k < 80.0 {
            term = -(term * r2) / Dd::new((k + 1.0) * (k + 2.0));
            c = c + term;
            k += 2.0;
        }
        (s, c)
    }

    fn sin_cos(self) -> (Dd, Dd) {
        if !self.hi.is_finite() {
            return (Dd::new(f64::NAN), Dd::new(f64::NAN));
        }
        let k = (self.hi / FRAC_PI_2.hi).round();
        let r = self - FRAC_PI_2.mul_f64(k);
        let (s, c) = Self::sin_cos_small(r);
        match (k as i64).rem_euclid(4) {
            0 => (s, c),
            1 => (c, -s),
            2 => (-s, -c),
            _ => (-c, s),
        }
    }

    fn sqrt_dd(self) -> Dd {
        if self.hi == 0.0 {
            return Dd::ZERO;
        }
        if self.hi < 0.0 {
            return Dd::new(f64::NAN);
        }
        let x = 1.0 / self.hi.sqrt();
        let ax = self.hi * x;
        let ax_dd = Dd::new(ax);
        ax_dd + Dd::new((self - ax_dd.square()).hi * x * 0.5)
    }
}

impl From<f64> for Dd {
    fn from(v: f64) -> Self {
        Dd::new(v)
    }
}

impl Add for Dd {
    type Output = Dd;
    fn add(self, o: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, o.hi);
        let (t, f) = two_sum(self.lo, o.lo);
        let (s, e) = quick_two_sum(s, e + t);
        Dd::renorm(s, e + f)
    }
}

impl Sub for Dd {
    type Output = Dd;
    fn sub(self, o: Dd) -> Dd {
        self + (-o)
    }
}

impl Neg for Dd {
    type Output = Dd;
    fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Mul for Dd {
    type Output = Dd;
    fn mul(self, o: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, o.hi);
        Dd::renorm(p, e + (self.hi * o.lo + self.lo * o.hi))
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, o: Dd) -> Dd {
        let q1 = self.hi / o.hi;
        let r = self - o.mul_f64(q1);
        let q2 = r.hi / o.hi;
        let r = r - o.mul_f64(q2);
        let q3 = r.hi / o.hi;
        Dd::renorm(q1, q2) + Dd::new(q3)
    }
}

impl Scalar for Dd {
    fn from_f64(v: f64) -> Self {
        Dd::new(v)
    }
    fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
    fn exp(self) -> Self {
        self.exp_dd()
    }
    fn ln(self) -> Self {
        self.ln_dd()
    }
    fn sin(self) -> Self {
        self.sin_cos().0
    }
    fn cos(self) -> Self {
        self.sin_cos().1
    }
    fn sinh(self) -> Self {
        if self.hi.abs() < 0.5 {
            let r = self.scale2(-10);
            let mut s = Self::expm1_small(r);
            for _ in 0..10 {
                s = s.mul_f64(2.0) + s.square();
            }
            // sinh = (e^x - 1)(e^x + 1) / (2 e^x)
            let e = s + Dd::ONE;
            return (s * (e + Dd::ONE)) / e.mul_f64(2.0);
        }
        let e = self.exp_dd();
        (e - Dd::ONE / e).mul_f64(0.5)
    }
    fn cosh(self) -> Self {
        let e = self.exp_dd();
        (e + Dd::ONE / e).mul_f64(0.5)
    }
    fn sqrt(self) -> Self {
        self.sqrt_dd()
    }
    fn powi(self, k: i32) -> Self {
        let mut base = self;
        let mut e = k.unsigned_abs();
        let mut acc = Dd::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base.square();
            e >>= 1;
        }
        if k < 0 {
            Dd::ONE / acc
        } else {
            acc
        }
    }
    fn powf(self, e: Self) -> Self {
        if self.hi == 0.0 && e.hi > 0.0 {
            return Dd::ZERO;
        }
        (e * self.ln_dd()).exp_dd()
    }
}
