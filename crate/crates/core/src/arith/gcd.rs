//! Lehmer's gcd for large integers.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

fn top_bits(a: &BigUint, shift: u64) -> i128 {
    (a >> shift).to_u64().expect("63 bits") as i128
}

fn gcd_uint(mut a: BigUint, mut b: BigUint) -> BigUint {
    if a < b {
        std::mem::swap(&mut a, &mut b);
    }
    loop {
        if b.is_zero() {
            return a;
        }
        if a.bits() <= 64 {
            let (x, y) = (a.to_u64().unwrap(), b.to_u64().unwrap());
            return BigUint::from(x.gcd(&y));
        }
        if a.bits() - b.bits() > 16 {
            let r = &a % &b;
            a = b;
            b = r;
            continue;
        }
        let shift = a.bits() - 63;
        let (mut x, mut y) = (top_bits(&a, shift), top_bits(&b, shift));
        let (mut ca, mut cb, mut cc, mut cd) = (1i128, 0i128, 0i128, 1i128);
        loop {
            if y + cc == 0 || y + cd == 0 {
                break;
            }
            let q = (x + ca) / (y + cc);
            if q != (x + cb) / (y + cd) {
                break;
            }
            (ca, cc) = (cc, ca - q * cc);
            (cb, cd) = (cd, cb - q * cd);
            (x, y) = (y, x - q * y);
        }
        if cb == 0 {
            let r = &a % &b;
            a = b;
            b = r;
        } else {
            let (sa, sb) = (BigInt::from(a), BigInt::from(b));
            let na = &sa * ca + &sb * cb;
            let nb = &sa * cc + &sb * cd;
            a = na.magnitude().clone();
            b = nb.magnitude().clone();
            if a < b {
                std::mem::swap(&mut a, &mut b);
            }
        }
    }
}

/// Nonnegative gcd.
pub fn gcd(a: &BigInt, b: &BigInt) -> BigInt {
    BigInt::from_biguint(Sign::Plus, gcd_uint(a.magnitude().clone(), b.magnitude().clone()))
}

/// Nonnegative lcm.
pub fn lcm(a: &BigInt, b: &BigInt) -> BigInt {
    if a.is_zero() || b.is_zero() {
        return BigInt::zero();
    }
    (a / gcd(a, b) * b).abs_value()
}

trait AbsValue {
    fn abs_value(self) -> Self;
}

impl AbsValue for BigInt {
    fn abs_value(self) -> Self {
        BigInt::from_biguint(Sign::Plus, self.magnitude().clone())
    }
}
