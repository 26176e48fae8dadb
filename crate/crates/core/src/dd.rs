//! Compensated double-word ("double-double") arithmetic.
//!
//! A value is stored as an unevaluated sum `hi + lo` with `|lo| <= ulp(hi)/2`,
//! giving roughly 32 significant digits. Root polishing needs this because a
//! physically meaningful real part can sit ~15 orders of magnitude below the
//! root magnitude, beyond what one double can represent relatively.

use num_complex::Complex64;

/// Double-word real number `hi + lo`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
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
    // Requires |a| >= |b|.
    let s = a + b;
    let err = b - (s - a);
    (s, err)
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let err = f64::mul_add(a, b, -p);
    (p, err)
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };

    #[inline]
    pub fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    pub fn add(self, rhs: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, rhs.hi);
        let e = e + self.lo + rhs.lo;
        let (hi, lo) = quick_two_sum(s, e);
        Dd { hi, lo }
    }

    #[inline]
    pub fn sub(self, rhs: Dd) -> Dd {
        self.add(rhs.neg())
    }

    #[inline]
    pub fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }

    #[inline]
    pub fn mul(self, rhs: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, rhs.hi);
        let e = e + self.hi * rhs.lo + self.lo * rhs.hi;
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }

    #[inline]
    pub fn div(self, rhs: Dd) -> Dd {
        let q1 = self.hi / rhs.hi;
        let r = self.sub(rhs.mul(Dd::from_f64(q1)));
        let q2 = r.hi / rhs.hi;
        let r2 = r.sub(rhs.mul(Dd::from_f64(q2)));
        let q3 = r2.hi / rhs.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo }.add(Dd::from_f64(q3))
    }

    #[inline]
    pub fn abs(self) -> Dd {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            self.neg()
        } else {
            self
        }
    }
}

/// Complex number with double-word components.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct DdComplex {
    pub re: Dd,
    pub im: Dd,
}

impl DdComplex {
    pub const ZERO: DdComplex = DdComplex { re: Dd::ZERO, im: Dd::ZERO };

    #[inline]
    pub fn from_c64(z: Complex64) -> DdComplex {
        DdComplex { re: Dd::from_f64(z.re), im: Dd::from_f64(z.im) }
    }

    #[inline]
    pub fn from_f64(x: f64) -> DdComplex {
        DdComplex { re: Dd::from_f64(x), im: Dd::ZERO }
    }

    #[inline]
    pub fn to_c64(self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    #[inline]
    pub fn add(self, rhs: DdComplex) -> DdComplex {
        DdComplex { re: self.re.add(rhs.re), im: self.im.add(rhs.im) }
    }

    #[inline]
    pub fn sub(self, rhs: DdComplex) -> DdComplex {
        DdComplex { re: self.re.sub(rhs.re), im: self.im.sub(rhs.im) }
    }

    #[inline]
    pub fn mul(self, rhs: DdComplex) -> DdComplex {
        DdComplex {
            re: self.re.mul(rhs.re).sub(self.im.mul(rhs.im)),
            im: self.re.mul(rhs.im).add(self.im.mul(rhs.re)),
        }
    }

    #[inline]
    pub fn div(self, rhs: DdComplex) -> DdComplex {
        let den = rhs.re.mul(rhs.re).add(rhs.im.mul(rhs.im));
        let num = self.mul(DdComplex { re: rhs.re, im: rhs.im.neg() });
        DdComplex { re: num.re.div(den), im: num.im.div(den) }
    }

    /// Complex conjugate.
    #[inline]
    pub fn conj(self) -> DdComplex {
        DdComplex { re: self.re, im: self.im.neg() }
    }

    /// |z|^2 rounded to one double (magnitudes only, no precision claim).
    #[inline]
    pub fn norm_sqr_f64(self) -> f64 {
        self.re.mul(self.re).add(self.im.mul(self.im)).to_f64()
    }

    /// |z| rounded to one double.
    #[inline]
    pub fn abs_f64(self) -> f64 {
        self.norm_sqr_f64().sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn addition_keeps_cancelled_tail() {
        // (1 + 2^-70) - 1 vanishes in f64 but survives in Dd.
        let tiny = (2.0f64).powi(-70);
        let one_plus = Dd::from_f64(1.0).add(Dd::from_f64(tiny));
        let diff = one_plus.sub(Dd::from_f64(1.0));
        assert_eq!(diff.to_f64(), tiny);
    }

    #[test]
    fn product_error_term_is_captured() {
        let a = Dd::from_f64(1.0 + 2.0f64.powi(-30));
        let sq = a.mul(a);
        // (1+e)^2 = 1 + 2e + e^2; the e^2 = 2^-60 term is below one ulp of 1.
        let expected_lo = 2.0f64.powi(-60);
        let residual = sq.sub(Dd::from_f64(1.0)).sub(Dd::from_f64(2.0f64.powi(-29)));
        assert!((residual.to_f64() - expected_lo).abs() < 1e-25);
    }

    #[test]
    fn division_round_trip() {
        let a = Dd::from_f64(std::f64::consts::PI);
        let b = Dd::from_f64(std::f64::consts::E);
        let q = a.div(b);
        let back = q.mul(b);
        let err = back.sub(a).abs().to_f64();
        assert!(err < 1e-30, "round-trip error {err}");
    }

    #[test]
    fn complex_division_round_trip() {
        let z = DdComplex::from_c64(Complex64::new(3.5, -1.25));
        let w = DdComplex::from_c64(Complex64::new(-0.7, 2.0));
        let back = z.div(w).mul(w).sub(z);
        assert!(back.abs_f64() < 1e-29);
    }
}
