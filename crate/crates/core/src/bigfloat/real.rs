use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub const MIN_PREC: u32 = 64;

/// Binary floating-point number `mant * 2^exp` with `prec` significant bits.
#[derive(Clone, PartialEq, Eq)]
pub struct BigFloat {
    mant: BigInt,
    exp: i64,
    prec: u32,
}

fn bit_len(m: &BigInt) -> i64 {
    m.bits() as i64
}

/// Round `m * 2^-shift` to nearest (ties away from zero), shift >= 0.
fn shr_round(m: &BigInt, shift: u64) -> BigInt {
    if shift == 0 {
        return m.clone();
    }
    let neg = m.is_negative();
    let a = m.abs();
    let half = BigInt::one() << (shift - 1);
    let r = (a + half) >> shift;
    if neg {
        -r
    } else {
        r
    }
}

impl BigFloat {
    fn make(mant: BigInt, exp: i64, prec: u32) -> Self {
        let prec = prec.max(MIN_PREC);
        if mant.is_zero() {
            return BigFloat { mant, exp: 0, prec };
        }
        let bl = bit_len(&mant);
        let (mut mant, mut exp) = if bl > prec as i64 {
            let s = (bl - prec as i64) as u64;
            (shr_round(&mant, s), exp + s as i64)
        } else {
            (mant, exp)
        };
        // Rounding may carry into an extra bit.
        if bit_len(&mant) > prec as i64 {
            mant >>= 1u32;
            exp += 1;
        }
        BigFloat { mant, exp, prec }
    }

    pub fn zero(prec: u32) -> Self {
        Self::make(BigInt::zero(), 0, prec)
    }

    pub fn one(prec: u32) -> Self {
        Self::from_int(&BigInt::one(), prec)
    }

    pub fn from_int(n: &BigInt, prec: u32) -> Self {
        Self::make(n.clone(), 0, prec)
    }

    pub fn from_i64(n: i64, prec: u32) -> Self {
        Self::from_int(&BigInt::from(n), prec)
    }

    pub fn from_ratio(num: &BigInt, den: &BigInt, prec: u32) -> Self {
        Self::from_int(num, prec + 2).div(&Self::from_int(den, prec + 2)).with_prec(prec)
    }

    pub fn from_rational(q: &BigRational, prec: u32) -> Self {
        Self::from_ratio(q.numer(), q.denom(), prec)
    }

    pub fn from_f64(x: f64, prec: u32) -> Self {
        if x == 0.0 {
            return Self::zero(prec);
        }
        let bits = x.to_bits();
        let sign = if bits >> 63 == 1 { -1i64 } else { 1 };
        let e = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (m, e) = if e == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), e - 1075)
        };
        Self::make(BigInt::from(m) * sign, e, prec)
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        Self::make(self.mant.clone(), self.exp, prec)
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    /// Exponent of the leading bit: `2^(e-1) <= |x| < 2^e`.
    pub fn magnitude(&self) -> i64 {
        if self.is_zero() {
            i64::MIN / 4
        } else {
            self.exp + bit_len(&self.mant)
        }
    }

    pub fn neg(&self) -> Self {
        BigFloat {
            mant: -&self.mant,
            exp: self.exp,
            prec: self.prec,
        }
    }

    pub fn abs(&self) -> Self {
        BigFloat {
            mant: self.mant.abs(),
            exp: self.exp,
            prec: self.prec,
        }
    }

    pub fn mul_pow2(&self, k: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        BigFloat {
            mant: self.mant.clone(),
            exp: self.exp + k,
            prec: self.prec,
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let prec = self.prec.max(o.prec);
        if self.is_zero() {
            return o.with_prec(prec);
        }
        if o.is_zero() {
            return self.with_prec(prec);
        }
        // Drop an operand that is entirely below the rounding position.
        let (hi, lo) = if self.magnitude() >= o.magnitude() {
            (self, o)
        } else {
            (o, self)
        };
        if hi.magnitude() - lo.magnitude() > prec as i64 + 4 {
            return hi.with_prec(prec);
        }
        let e = hi.exp.min(lo.exp);
        let a = &hi.mant << (hi.exp - e) as u64;
        let b = &lo.mant << (lo.exp - e) as u64;
        Self::make(a + b, e, prec)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::make(&self.mant * &o.mant, self.exp + o.exp, self.prec.max(o.prec))
    }

    pub fn mul_int(&self, k: &BigInt) -> Self {
        Self::make(&self.mant * k, self.exp, self.prec)
    }

    pub fn div(&self, o: &Self) -> Self {
        assert!(!o.is_zero(), "division by zero");
        let prec = self.prec.max(o.prec);
        if self.is_zero() {
            return Self::zero(prec);
        }
        let shift = (prec as i64 + 2 + bit_len(&o.mant) - bit_len(&self.mant)).max(0);
        let num = &self.mant << shift as u64;
        Self::make(num / &o.mant, self.exp - o.exp - shift, prec)
    }

    pub fn div_int(&self, k: &BigInt) -> Self {
        self.div(&Self::from_int(k, self.prec))
    }

    pub fn recip(&self) -> Self {
        Self::one(self.prec).div(self)
    }

    pub fn sqrt(&self) -> Result<Self> {
        if self.is_negative() {
            return Err(Error::InvalidInput("square root of a negative real".into()));
        }
        if self.is_zero() {
            return Ok(self.clone());
        }
        // Make the exponent even and the mantissa about 2*prec bits.
        let want = 2 * self.prec as i64 + 4;
        let mut shift = (want - bit_len(&self.mant)).max(0);
        if (self.exp - shift).rem_euclid(2) != 0 {
            shift += 1;
        }
        let m = &self.mant << shift as u64;
        Ok(Self::make(m.sqrt(), (self.exp - shift) / 2, self.prec))
    }

    pub fn cmp_value(&self, o: &Self) -> Ordering {
        let d = self.sub(o);
        if d.is_zero() {
            Ordering::Equal
        } else if d.is_negative() {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    }

    /// Nearest integer (ties away from zero).
    pub fn round(&self) -> BigInt {
        if self.exp >= 0 {
            &self.mant << self.exp as u64
        } else {
            shr_round(&self.mant, (-self.exp) as u64)
        }
    }

    pub fn floor(&self) -> BigInt {
        if self.exp >= 0 {
            &self.mant << self.exp as u64
        } else {
            let d = BigInt::one() << (-self.exp) as u64;
            self.mant.div_floor(&d)
        }
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bl = bit_len(&self.mant);
        let shift = (bl - 60).max(0);
        let m = (&self.mant >> shift as u64).to_f64().unwrap_or(f64::NAN);
        m * 2f64.powi((self.exp + shift).clamp(-2000, 2000) as i32)
    }

    /// Exact rational value.
    pub fn to_rational(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(&self.mant << self.exp as u64)
        } else {
            BigRational::new(self.mant.clone(), BigInt::one() << (-self.exp) as u64)
        }
    }

    /// Decimal rendering with `digits` digits after the point (truncated).
    pub fn to_decimal(&self, digits: usize) -> String {
        let scale = num_traits::pow(BigInt::from(10), digits);
        let r = self.to_rational() * BigRational::from_integer(scale.clone());
        let n = r.to_integer();
        let (sign, n) = if n.sign() == Sign::Minus || (n.is_zero() && self.is_negative()) {
            ("-", n.abs())
        } else {
            ("", n)
        };
        let (ip, fp) = n.div_rem(&scale);
        if digits == 0 {
            return format!("{sign}{ip}");
        }
        format!("{sign}{ip}.{:0>width$}", fp.to_string(), width = digits)
    }
}

impl fmt::Debug for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal(((self.prec as f64) * std::f64::consts::LOG10_2) as usize))
    }
}

impl fmt::Display for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

// ---------------------------------------------------------------------------
// Constants and elementary functions. Each works with guard bits and rounds
// back to the requested precision at the end.

const GUARD: u32 = 32;

/// Fixed-point `atan(1/k) * 2^bits` by the alternating Taylor series.
fn atan_inv_fixed(k: u64, bits: u64) -> BigInt {
    let one = BigInt::one() << bits;
    let k = BigInt::from(k);
    let k2 = &k * &k;
    let mut term = &one / &k;
    let mut sum = term.clone();
    let mut n = 1u64;
    while !term.is_zero() {
        term = &term / &k2;
        let t = &term / BigInt::from(2 * n + 1);
        if n % 2 == 1 {
            sum -= &t;
        } else {
            sum += &t;
        }
        n += 1;
    }
    sum
}

/// π by Machin's formula.
pub fn pi(prec: u32) -> BigFloat {
    let bits = prec as u64 + GUARD as u64;
    let v = atan_inv_fixed(5, bits) * 16 - atan_inv_fixed(239, bits) * 4;
    BigFloat::make(v, -(bits as i64), prec)
}

/// ln 2 = 2 atanh(1/3).
pub fn ln2(prec: u32) -> BigFloat {
    let bits = prec as u64 + GUARD as u64;
    let one = BigInt::one() << bits;
    let mut term = &one / BigInt::from(3);
    let mut sum = BigInt::zero();
    let mut n = 0u64;
    while !term.is_zero() {
        sum += &term / BigInt::from(2 * n + 1);
        term = &term / BigInt::from(9);
        n += 1;
    }
    BigFloat::make(sum * 2, -(bits as i64), prec)
}

/// Number of halvings used in argument reduction for Taylor series.
fn halvings(prec: u32) -> u32 {
    ((prec as f64).sqrt() as u32 / 2).max(4)
}

/// e^x for real x.
pub fn exp(x: &BigFloat) -> BigFloat {
    let prec = x.prec;
    let mag = x.magnitude().max(0) as u32;
    let wp = prec + GUARD + mag;
    let x = x.with_prec(wp);
    let l2 = ln2(wp);
    // x = n ln2 + r
    let n = x.div(&l2).round();
    let r = x.sub(&l2.mul_int(&n));
    let s = halvings(wp);
    let r = r.mul_pow2(-(s as i64));
    // Taylor
    let mut sum = BigFloat::one(wp);
    let mut term = BigFloat::one(wp);
    let mut k = 1i64;
    loop {
        term = term.mul(&r).div_int(&BigInt::from(k));
        if term.is_zero() || term.magnitude() < -(wp as i64) - 4 {
            break;
        }
        sum = sum.add(&term);
        k += 1;
    }
    for _ in 0..s {
        sum = sum.mul(&sum);
    }
    let n = n.to_i64().expect("exponent in range");
    sum.mul_pow2(n).with_prec(prec)
}

/// Natural logarithm by Newton iteration on `exp`.
pub fn ln(x: &BigFloat) -> Result<BigFloat> {
    if x.is_zero() {
        return Err(Error::LogOfZero);
    }
    if x.is_negative() {
        return Err(Error::InvalidInput("logarithm of a negative real".into()));
    }
    let prec = x.prec;
    let wp = prec + GUARD;
    let x = x.with_prec(wp);
    // Pull out the binary exponent: x = m 2^e with m in [1/2, 1).
    let e = x.magnitude();
    let m = x.mul_pow2(-e);
    let mut y = BigFloat::from_f64(m.to_f64().ln(), wp);
    let mut correct_bits = 40u32;
    loop {
        let ey = exp(&y);
        // y <- y + 2 (m - e^y) / (m + e^y)
        let delta = m.sub(&ey).mul_pow2(1).div(&m.add(&ey));
        y = y.add(&delta);
        if correct_bits >= wp {
            break;
        }
        correct_bits *= 3;
    }
    Ok(y.add(&ln2(wp).mul_int(&BigInt::from(e))).with_prec(prec))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pi_digits() {
        let p = pi(64);
        assert!(p.to_decimal(18).starts_with("3.14159265358979323"));
        let p512 = pi(512);
        assert!(p512
            .to_decimal(60)
            .starts_with("3.14159265358979323846264338327950288419716939937510582097494"));
        let p256 = pi(256);
        let diff = p512.sub(&p256.with_prec(512)).abs();
        assert!(diff.magnitude() <= -250);
    }

    #[test]
    fn arithmetic_roundtrip() {
        let a = BigFloat::from_ratio(&BigInt::from(1), &BigInt::from(3), 128);
        let b = a.mul_int(&BigInt::from(3));
        assert!(b.sub(&BigFloat::one(128)).abs().magnitude() < -120);
        let two = BigFloat::from_i64(2, 200);
        let r = two.sqrt().unwrap();
        assert!(r.mul(&r).sub(&two).abs().magnitude() < -190);
        assert!(r.to_decimal(30).starts_with("1.414213562373095048801688724209"));
        assert_eq!(BigFloat::from_f64(-2.5, 64).round(), BigInt::from(-3));
        assert_eq!(BigFloat::from_f64(-2.5, 64).floor(), BigInt::from(-3));
        assert_eq!(BigFloat::from_f64(7.75, 64).floor(), BigInt::from(7));
    }

    #[test]
    fn exp_and_log() {
        let z = exp(&BigFloat::zero(128));
        assert_eq!(z.round(), BigInt::one());
        assert!(z.sub(&BigFloat::one(128)).abs().magnitude() < -120);
        let e128 = exp(&BigFloat::one(128));
        let e256 = exp(&BigFloat::one(256));
        assert!(e256.sub(&e128).abs().magnitude() <= -124);
        assert!(e256.to_decimal(40).starts_with("2.7182818284590452353602874713526624977572"));
        let l = ln(&e256).unwrap();
        assert!(l.sub(&BigFloat::one(256)).abs().magnitude() < -245);
        let l10 = ln(&BigFloat::from_i64(10, 128)).unwrap();
        assert!(l10.to_decimal(30).starts_with("2.302585092994045684017991454684"));
        assert!(ln(&BigFloat::zero(64)).is_err());
        let big = exp(&BigFloat::from_i64(200, 128));
        assert!(ln(&big).unwrap().sub(&BigFloat::from_i64(200, 128)).abs().magnitude() < -110);
    }
}
