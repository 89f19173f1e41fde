//! Double-double arithmetic: an unevaluated sum of two `f64`s giving ~31
//! significant decimal digits.
//!
//! The kernel logs reach magnitudes of ~1e6 on the sampling domains used by
//! the certification sweeps, where plain `f64` evaluation carries absolute
//! rounding noise far above the 1e-11 agreement tolerances. Every kernel
//! exponent is therefore accumulated in this representation and rounded once
//! at the end.

/// Two-float value `hi + lo`, with `|lo| <= ulp(hi)/2`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    // requires |a| >= |b|
    let s = a + b;
    let err = b - (s - a);
    (s, err)
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let err = a.mul_add(b, -p);
    (p, err)
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };
    /// ln 2 to double-double precision.
    pub const LN2: Dd = Dd {
        hi: 0.693_147_180_559_945_3,
        lo: 2.319_046_813_846_299_6e-17,
    };
    /// pi to double-double precision.
    pub const PI: Dd = Dd {
        hi: 3.141_592_653_589_793,
        lo: 1.224_646_799_147_353_2e-16,
    };

    #[inline]
    pub fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    /// Exact sum of two `f64`s.
    #[inline]
    pub fn from_sum(a: f64, b: f64) -> Dd {
        let (hi, lo) = two_sum(a, b);
        Dd { hi, lo }
    }

    /// Exact difference of two `f64`s.
    #[inline]
    pub fn from_diff(a: f64, b: f64) -> Dd {
        Dd::from_sum(a, -b)
    }

    /// Exact product of two `f64`s.
    #[inline]
    pub fn from_prod(a: f64, b: f64) -> Dd {
        let (hi, lo) = two_prod(a, b);
        Dd { hi, lo }
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    pub fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }

    #[inline]
    pub fn abs(self) -> Dd {
        if self.hi < 0.0 { self.neg() } else { self }
    }

    #[inline]
    pub fn add(self, other: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, other.hi);
        let e = e + self.lo + other.lo;
        let (hi, lo) = quick_two_sum(s, e);
        Dd { hi, lo }
    }

    #[inline]
    pub fn add_f64(self, other: f64) -> Dd {
        let (s, e) = two_sum(self.hi, other);
        let e = e + self.lo;
        let (hi, lo) = quick_two_sum(s, e);
        Dd { hi, lo }
    }

    #[inline]
    pub fn sub(self, other: Dd) -> Dd {
        self.add(other.neg())
    }

    #[inline]
    pub fn sub_f64(self, other: f64) -> Dd {
        self.add_f64(-other)
    }

    #[inline]
    pub fn mul(self, other: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, other.hi);
        let e = e + self.hi * other.lo + self.lo * other.hi;
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }

    #[inline]
    pub fn mul_f64(self, other: f64) -> Dd {
        let (p, e) = two_prod(self.hi, other);
        let e = e + self.lo * other;
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }

    pub fn div(self, other: Dd) -> Dd {
        let q1 = self.hi / other.hi;
        let r = self.sub(other.mul_f64(q1));
        let q2 = r.hi / other.hi;
        let r = r.sub(other.mul_f64(q2));
        let q3 = r.hi / other.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo }.add_f64(q3)
    }

    #[inline]
    pub fn recip(self) -> Dd {
        Dd::ONE.div(self)
    }

    #[inline]
    pub fn sqr(self) -> Dd {
        self.mul(self)
    }

    /// Multiply by 2^k exactly.
    #[inline]
    pub fn ldexp(self, k: i32) -> Dd {
        Dd {
            hi: libm_ldexp(self.hi, k),
            lo: libm_ldexp(self.lo, k),
        }
    }

    /// e^self. Valid over the finite f64 exponent range.
    pub fn exp(self) -> Dd {
        if self.hi > 709.0 {
            return Dd::from_f64(f64::INFINITY);
        }
        if self.hi < -745.0 {
            return Dd::ZERO;
        }
        let k = (self.hi / Dd::LN2.hi).round();
        let r = self.sub(Dd::LN2.mul_f64(k));
        // r in [-ln2/2, ln2/2]; reduce further by 2^9 and Taylor-expand.
        let r9 = r.ldexp(-9);
        let p = exp_taylor_m1(r9);
        // undo the reduction: (1+p) -> (1+p)^(2^9), tracked as p' = p^2 + 2p
        let mut q = p;
        for _ in 0..9 {
            q = q.sqr().add(q.ldexp(1));
        }
        q.add_f64(1.0).ldexp(k as i32)
    }

    /// e^self - 1, accurate for small |self|.
    pub fn expm1(self) -> Dd {
        if self.hi.abs() >= 0.5 {
            return self.exp().sub_f64(1.0);
        }
        let r9 = self.ldexp(-9);
        let p = exp_taylor_m1(r9);
        let mut q = p;
        for _ in 0..9 {
            q = q.sqr().add(q.ldexp(1));
        }
        q
    }

    /// Natural log; one dd-Newton step on the f64 seed.
    pub fn ln(self) -> Dd {
        debug_assert!(self.hi > 0.0);
        let y = Dd::from_f64(self.to_f64().ln());
        // y1 = y + x*exp(-y) - 1
        let d = self.mul(y.neg().exp()).sub_f64(1.0);
        y.add(d)
    }

    /// tanh for a nonnegative argument.
    pub fn tanh(self) -> Dd {
        debug_assert!(self.hi >= 0.0);
        if self.hi > 360.0 {
            // e^{-2x} below dd resolution of 1
            return Dd::ONE;
        }
        let q = self.ldexp(1).expm1(); // e^{2x} - 1
        q.div(q.add_f64(2.0))
    }

    /// sinh, stable near zero.
    pub fn sinh(self) -> Dd {
        if self.hi.abs() < 1.0 {
            let a = self.expm1();
            let b = self.neg().expm1();
            a.sub(b).ldexp(-1)
        } else {
            let e = self.exp();
            e.sub(e.recip()).ldexp(-1)
        }
    }

    pub fn cosh(self) -> Dd {
        let e = self.exp();
        e.add(e.recip()).ldexp(-1)
    }
}

#[inline]
fn libm_ldexp(x: f64, k: i32) -> f64 {
    // exact scaling by powers of two; k stays small here (|k| < 1100)
    x * f64::powi(2.0, k)
}

/// Taylor series for e^r - 1, |r| <= ~7e-4.
fn exp_taylor_m1(r: Dd) -> Dd {
    // r + r^2/2! + ... + r^10/10!  (r^10/10! ~ 1e-38 at the reduction bound)
    let mut term = r;
    let mut sum = r;
    for j in 2..=10 {
        term = term.mul(r).mul_f64(1.0 / j as f64);
        sum = sum.add(term);
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_dd_close(got: Dd, hi: f64, lo: f64, rel: f64) {
        let want = Dd { hi, lo };
        let scale = want.hi.abs().max(1e-300);
        let diff = got.sub(want).to_f64().abs();
        assert!(
            diff <= rel * scale,
            "got {:?}, want {:?}, rel diff {:e}",
            got,
            want,
            diff / scale
        );
    }

    // expected hi/lo pairs computed with mpmath at 50 digits

    #[test]
    fn exp_values() {
        assert_dd_close(Dd::from_f64(0.3).exp(), 1.3498588075760032, -9.601625568667199e-17, 1e-30);
        assert_dd_close(Dd::from_f64(-5.7).exp(), 0.003345965457471273, -2.342675639793934e-19, 1e-30);
        assert_dd_close(Dd::from_f64(37.2).exp(), 1.4313792817412826e16, 0.7296864500928013, 1e-30);
    }

    #[test]
    fn ln_values() {
        assert_dd_close(Dd::from_f64(2.5).ln(), 0.9162907318741551, -3.4816472788231987e-17, 1e-30);
        assert_dd_close(Dd::from_f64(1e-8).ln(), -18.420680743952367, 1.527856068362525e-15, 1e-30);
    }

    #[test]
    fn ln_exp_roundtrip() {
        for &x in &[1e-6, 0.037, 1.0, 12.5, 301.7] {
            let d = Dd::from_f64(x);
            let r = d.ln().exp();
            assert_dd_close(r, x, 0.0, 1e-29);
        }
    }

    #[test]
    fn tanh_values() {
        assert_dd_close(Dd::from_f64(0.001).tanh(), 0.0009999996666668, -5.39682320987743e-23, 1e-29);
        assert_dd_close(Dd::from_f64(2.5).tanh(), 0.9866142981514303, -1.111872396076265e-17, 1e-29);
        assert_dd_close(Dd::from_f64(1.0).tanh(), 0.7615941559557649, -1.1880541717395206e-17, 1e-29);
    }

    #[test]
    fn sinh_values() {
        assert_dd_close(Dd::from_f64(0.002).sinh(), 0.0020000013333336, 2.5396826807760192e-23, 1e-29);
        assert_dd_close(Dd::from_f64(40.0).sinh(), 1.1769263341851e17, -7.296050044625483, 1e-29);
    }

    #[test]
    fn expm1_small() {
        assert_dd_close(Dd::from_f64(0.25).expm1(), 0.2840254166877415, -1.5926579431937565e-17, 1e-29);
    }

    #[test]
    fn exact_sum_and_prod() {
        let a = Dd::from_sum(1.0, 1e-20);
        assert_eq!(a.hi, 1.0);
        assert_eq!(a.lo, 1e-20);
        let p = Dd::from_prod(1.0 + 2f64.powi(-30), 1.0 + 2f64.powi(-30));
        // (1+u)^2 = 1 + 2u + u^2 held exactly
        let back = p.sub_f64(1.0).sub_f64(2f64.powi(-29));
        assert_eq!(back.to_f64(), 2f64.powi(-60));
    }

    #[test]
    fn division() {
        let q = Dd::from_f64(1.0).div(Dd::from_f64(3.0));
        let r = q.mul_f64(3.0).sub_f64(1.0).to_f64().abs();
        assert!(r < 1e-31);
    }
}
