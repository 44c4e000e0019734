use std::fmt;

use num_bigint::BigInt;

use super::real::{exp, ln, pi, BigFloat};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq)]
pub struct BigComplex {
    pub re: BigFloat,
    pub im: BigFloat,
}

impl BigComplex {
    pub fn new(re: BigFloat, im: BigFloat) -> Self {
        BigComplex { re, im }
    }

    pub fn from_real(re: BigFloat) -> Self {
        let p = re.prec();
        BigComplex {
            re,
            im: BigFloat::zero(p),
        }
    }

    pub fn zero(prec: u32) -> Self {
        Self::new(BigFloat::zero(prec), BigFloat::zero(prec))
    }

    pub fn one(prec: u32) -> Self {
        Self::new(BigFloat::one(prec), BigFloat::zero(prec))
    }

    pub fn i(prec: u32) -> Self {
        Self::new(BigFloat::zero(prec), BigFloat::one(prec))
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        Self::new(self.re.with_prec(prec), self.im.with_prec(prec))
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::new(self.re.add(&o.re), self.im.add(&o.im))
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self::new(self.re.sub(&o.re), self.im.sub(&o.im))
    }

    pub fn neg(&self) -> Self {
        Self::new(self.re.neg(), self.im.neg())
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), self.im.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::new(
            self.re.mul(&o.re).sub(&self.im.mul(&o.im)),
            self.re.mul(&o.im).add(&self.im.mul(&o.re)),
        )
    }

    pub fn scale(&self, k: &BigFloat) -> Self {
        Self::new(self.re.mul(k), self.im.mul(k))
    }

    pub fn mul_int(&self, k: &BigInt) -> Self {
        Self::new(self.re.mul_int(k), self.im.mul_int(k))
    }

    pub fn norm_sqr(&self) -> BigFloat {
        self.re.mul(&self.re).add(&self.im.mul(&self.im))
    }

    pub fn abs(&self) -> BigFloat {
        self.norm_sqr().sqrt().expect("non-negative")
    }

    pub fn recip(&self) -> Self {
        let n = self.norm_sqr();
        Self::new(self.re.div(&n), self.im.neg().div(&n))
    }

    pub fn div(&self, o: &Self) -> Self {
        self.mul(&o.recip())
    }

    /// Largest binary magnitude of the two components.
    pub fn magnitude(&self) -> i64 {
        self.re.magnitude().max(self.im.magnitude())
    }

    /// Principal square root (branch cut on the negative real axis).
    pub fn sqrt(&self) -> Self {
        let p = self.prec();
        if self.re.is_zero() && self.im.is_zero() {
            return self.clone();
        }
        let r = self.abs();
        // sqrt((r + re)/2) and sign(im) sqrt((r - re)/2)
        let a = r.add(&self.re).mul_pow2(-1).sqrt().unwrap_or(BigFloat::zero(p));
        let b = r.sub(&self.re).mul_pow2(-1).sqrt().unwrap_or(BigFloat::zero(p));
        let b = if self.im.is_negative() { b.neg() } else { b };
        Self::new(a, b)
    }

    /// Principal logarithm.
    pub fn ln(&self) -> Result<Self> {
        if self.re.is_zero() && self.im.is_zero() {
            return Err(Error::LogOfZero);
        }
        Ok(Self::new(ln(&self.abs())?, atan2(&self.im, &self.re)))
    }

    pub fn exp(&self) -> Self {
        let m = exp(&self.re);
        cis(&self.im).scale(&m)
    }
}

/// `e^{i y}` for real `y`.
pub fn cis(y: &BigFloat) -> BigComplex {
    let prec = y.prec();
    let mag = y.magnitude().max(0) as u32;
    let wp = prec + 32 + mag;
    let y = y.with_prec(wp);
    let two_pi = pi(wp).mul_pow2(1);
    let k = y.div(&two_pi).round();
    let r = y.sub(&two_pi.mul_int(&k));
    let s = ((wp as f64).sqrt() as u32 / 2).max(4);
    let r = r.mul_pow2(-(s as i64));
    let ir = BigComplex::new(BigFloat::zero(wp), r);
    let mut sum = BigComplex::one(wp);
    let mut term = BigComplex::one(wp);
    let mut n = 1i64;
    loop {
        term = term.mul(&ir);
        term = BigComplex::new(
            term.re.div_int(&BigInt::from(n)),
            term.im.div_int(&BigInt::from(n)),
        );
        if term.magnitude() < -(wp as i64) - 4 {
            break;
        }
        sum = sum.add(&term);
        n += 1;
    }
    for _ in 0..s {
        sum = sum.mul(&sum);
    }
    sum.with_prec(prec)
}

/// Angle of `(x, y)` in `(-π, π]`.
pub fn atan2(y: &BigFloat, x: &BigFloat) -> BigFloat {
    let prec = y.prec().max(x.prec());
    let wp = prec + 32;
    // Newton on cis: t <- t + Im(conj(cis t) * (x + i y)) / |x + i y|
    let z = BigComplex::new(x.with_prec(wp), y.with_prec(wp));
    let r = z.abs();
    let u = BigComplex::new(z.re.div(&r), z.im.div(&r));
    let mut t = BigFloat::from_f64(y.to_f64().atan2(x.to_f64()), wp);
    let mut bits = 40u32;
    loop {
        let c = cis(&t);
        let d = c.conj().mul(&u);
        // d = e^{i(θ - t)}, so θ - t ≈ Im(d) to first order
        t = t.add(&d.im);
        if bits >= wp {
            break;
        }
        bits *= 3;
    }
    t.with_prec(prec)
}

impl fmt::Debug for BigComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?} + {:?}i)", self.re, self.im)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn euler_identity() {
        let z = BigComplex::new(BigFloat::zero(256), pi(256));
        let e = z.exp();
        assert!(e.add(&BigComplex::one(256)).magnitude() < -240);
        assert!(BigComplex::zero(128).exp().sub(&BigComplex::one(128)).magnitude() < -120);
    }

    #[test]
    fn sqrt_and_log() {
        let m1 = BigComplex::from_real(BigFloat::from_i64(-4, 128));
        let s = m1.sqrt();
        assert!(s.sub(&BigComplex::i(128).mul_int(&BigInt::from(2))).magnitude() < -120);
        let z = BigComplex::new(BigFloat::from_i64(3, 128), BigFloat::from_i64(-4, 128));
        let l = z.ln().unwrap();
        assert!(l.exp().sub(&z).magnitude() < -115);
        assert!(BigComplex::zero(64).ln().is_err());
        let w = z.div(&z);
        assert!(w.sub(&BigComplex::one(128)).magnitude() < -120);
        assert!(BigInt::one() == BigFloat::one(64).round());
    }
}
