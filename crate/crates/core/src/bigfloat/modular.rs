use num_bigint::BigInt;

use super::complex::{cis, BigComplex};
use super::real::{exp, pi, BigFloat};
use crate::error::{Error, Result};

/// Move `tau` into the standard fundamental domain `|tau| >= 1`, `|Re tau| <= 1/2`.
pub fn reduce_to_fundamental_domain(tau: &BigComplex) -> Result<BigComplex> {
    if tau.im.is_negative() || tau.im.is_zero() {
        return Err(Error::NotUpperHalfPlane);
    }
    let mut t = tau.clone();
    for _ in 0..10_000 {
        let n = t.re.round();
        t = BigComplex::new(t.re.sub(&BigFloat::from_int(&n, t.prec())), t.im.clone());
        let one = BigFloat::one(t.prec());
        if t.norm_sqr().cmp_value(&one).is_lt() {
            t = t.recip().neg();
        } else {
            return Ok(t);
        }
    }
    Err(Error::NotUpperHalfPlane)
}

/// Number of q-expansion terms so that the tail is below `2^-(prec+8)`.
pub fn truncation_order(im_tau: f64, prec: u32) -> usize {
    let per_term = 2.0 * std::f64::consts::PI * im_tau;
    let target = (prec as f64 + 8.0) * std::f64::consts::LN_2;
    let mut n = (target / per_term).ceil().max(1.0) as usize;
    // Coefficients grow like n^5; extend until that is absorbed as well.
    while (n as f64) * per_term - 5.0 * (n as f64).ln() - (1000.0f64).ln() < target {
        n += 1;
    }
    n
}

fn sigma(n: u64, k: u32) -> u128 {
    let mut s = 0u128;
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            s += (d as u128).pow(k);
            let e = n / d;
            if e != d {
                s += (e as u128).pow(k);
            }
        }
        d += 1;
    }
    s
}

/// Klein's j-invariant via `j = 1728 E4^3 / (E4^3 - E6^2)`.
pub fn j_invariant(tau: &BigComplex, prec: u32) -> Result<BigComplex> {
    let wp = prec + 40;
    let t = reduce_to_fundamental_domain(&tau.with_prec(wp))?;
    let n = truncation_order(t.im.to_f64(), wp);
    // q = exp(2 pi i tau) = exp(-2 pi Im tau) * cis(2 pi Re tau)
    let two_pi = pi(wp).mul_pow2(1);
    let modulus = exp(&two_pi.mul(&t.im).neg());
    let q = cis(&two_pi.mul(&t.re)).scale(&modulus);
    let mut e4 = BigComplex::zero(wp);
    let mut e6 = BigComplex::zero(wp);
    let mut qn = BigComplex::one(wp);
    for k in 1..=n as u64 {
        qn = qn.mul(&q);
        e4 = e4.add(&qn.mul_int(&BigInt::from(sigma(k, 3))));
        e6 = e6.add(&qn.mul_int(&BigInt::from(sigma(k, 5))));
    }
    let one = BigComplex::one(wp);
    let e4 = one.add(&e4.mul_int(&BigInt::from(240)));
    let e6 = one.sub(&e6.mul_int(&BigInt::from(504)));
    let e4c = e4.mul(&e4).mul(&e4);
    let den = e4c.sub(&e6.mul(&e6));
    Ok(e4c.mul_int(&BigInt::from(1728)).div(&den).with_prec(prec))
}

/// The CM point `(-b + sqrt(disc)) / (2a)` of a positive definite form.
pub fn cm_point(a: i64, b: i64, disc: i64, prec: u32) -> BigComplex {
    let wp = prec + 16;
    let two_a = BigFloat::from_i64(2 * a, wp);
    let re = BigFloat::from_i64(-b, wp).div(&two_a);
    let im = BigFloat::from_i64(-disc, wp)
        .sqrt()
        .expect("negative discriminant")
        .div(&two_a);
    BigComplex::new(re, im).with_prec(prec)
}
