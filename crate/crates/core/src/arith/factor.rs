//! Integer factorization: trial division, then Pollard–Brent rho on the
//! cofactor with a Miller–Rabin primality test.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

const TRIAL_LIMIT: u64 = 1 << 16;
/// Cofactors above this size after trial division are not attempted.
const RHO_LIMIT_BITS: u64 = 126;

fn mul_mod(a: u128, b: u128, m: u128) -> u128 {
    if m < 1 << 64 {
        return a * b % m;
    }
    // double-and-add keeps intermediates below 2m
    let (mut a, mut b, mut r) = (a % m, b % m, 0u128);
    while b > 0 {
        if b & 1 == 1 {
            r = (r + a) % m;
        }
        a = (a << 1) % m;
        b >>= 1;
    }
    r
}

fn pow_mod(mut a: u128, mut e: u128, m: u128) -> u128 {
    let mut r = 1u128 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, m);
        }
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    r
}

/// Deterministic for `n < 3.3e24`; a strong probable-prime test beyond.
pub fn is_prime_u128(n: u128) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u128; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];
    for p in BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'outer: for a in BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

fn gcd(a: u128, b: u128) -> u128 {
    a.gcd(&b)
}

/// A nontrivial factor of the odd composite `n` (Brent's cycle finding).
fn rho(n: u128) -> u128 {
    for c in 1u128.. {
        let f = |x: u128| (mul_mod(x, x, n) + c) % n;
        let (mut y, mut r, mut q) = (2u128, 1u64, 1u128);
        let (mut x, mut ys);
        let m = 128u64;
        let mut g;
        loop {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            loop {
                ys = y;
                for _ in 0..m.min(r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = gcd(q, n);
                k += m;
                if k >= r || g > 1 {
                    break;
                }
            }
            r *= 2;
            if g > 1 {
                break;
            }
        }
        if g == n {
            loop {
                ys = f(ys);
                g = gcd(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
    }
    unreachable!()
}

fn factor_u128(n: u128, out: &mut Vec<u128>) {
    if n == 1 {
        return;
    }
    if is_prime_u128(n) {
        out.push(n);
        return;
    }
    let d = rho(n);
    factor_u128(d, out);
    factor_u128(n / d, out);
}

/// Prime factorization of `|n|` as sorted `(p, e)` pairs.
pub fn factor_integer(n: &BigInt) -> Result<Vec<(BigInt, u32)>> {
    if n.is_zero() {
        return Err(Error::InvalidInput("cannot factor zero".into()));
    }
    let mut n = n.abs();
    let mut out: Vec<(BigInt, u32)> = Vec::new();
    let push = |p: BigInt, out: &mut Vec<(BigInt, u32)>| match out.iter_mut().find(|(q, _)| *q == p) {
        Some((_, e)) => *e += 1,
        None => out.push((p, 1)),
    };
    let mut p = 2u64;
    while p < TRIAL_LIMIT && !n.is_one() {
        let pb = BigInt::from(p);
        while (&n % &pb).is_zero() {
            n /= &pb;
            push(pb.clone(), &mut out);
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if !n.is_one() {
        if n.bits() > RHO_LIMIT_BITS {
            return Err(Error::InvalidInput(format!(
                "cofactor of {} bits is too large to factor",
                n.bits()
            )));
        }
        let mut ps = Vec::new();
        factor_u128(n.to_u128().expect("fits"), &mut ps);
        for q in ps {
            push(BigInt::from(q), &mut out);
        }
    }
    out.sort();
    Ok(out)
}

/// Distinct prime divisors.
pub fn prime_divisors(n: &BigInt) -> Result<Vec<BigInt>> {
    Ok(factor_integer(n)?.into_iter().map(|(p, _)| p).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    fn is_prime_naive(n: u64) -> bool {
        n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
    }

    #[test]
    fn small_primality_matches_trial_division() {
        for n in 0..20_000u64 {
            assert_eq!(is_prime_u128(n as u128), is_prime_naive(n), "{n}");
        }
    }

    #[test]
    fn semiprimes_of_large_primes() {
        let p = 4_294_967_311u128; // 2^32 + 15
        let q = 1_000_000_000_000_000_003u128;
        let f = factor_integer(&BigInt::from(p * q)).unwrap();
        assert_eq!(f, vec![(BigInt::from(p), 1), (BigInt::from(q), 1)]);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn factorization_reconstructs(a in 1u64..u64::MAX, b in 1u32..100_000, neg: bool) {
            let mut n = BigInt::from(a) * BigInt::from(b);
            if neg { n = -n; }
            let f = factor_integer(&n).unwrap();
            let prod: BigInt = f.iter().map(|(p, e)| p.pow(*e)).product();
            prop_assert_eq!(prod, n.abs());
            for (p, _) in &f {
                prop_assert!(is_prime_u128(p.to_u128().unwrap()));
            }
        }
    }
}
