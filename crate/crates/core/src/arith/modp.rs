//! Finite fields `F_q`, `q = p^k`, and factorization of polynomials over them.
//!
//! Factorization follows the usual three stages: square-free decomposition,
//! distinct-degree factorization and randomized equal-degree splitting
//! (Cantor–Zassenhaus). The random source is supplied by the caller so runs
//! are reproducible from a seed.

use std::fmt::Debug;
use std::hash::Hash;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;

use crate::arith::poly::IntPoly;
use crate::error::{Error, Result};

/// Deterministic Miller–Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
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

/// Primes in `[lo, hi)` by trial division; only used for small ranges.
pub fn primes_in(lo: u64, hi: u64) -> impl Iterator<Item = u64> {
    (lo.max(2)..hi).filter(|&n| is_prime_u64(n))
}

/// Reduce an integer modulo `p` into `[0, p)`.
pub fn reduce_int(a: &BigInt, p: u64) -> u64 {
    let m = BigInt::from(p);
    a.mod_floor(&m).to_u64().expect("residue fits")
}

/// Arithmetic interface shared by prime fields and their extensions.
pub trait FiniteField: Clone + Debug + Send + Sync {
    type Elem: Clone + PartialEq + Eq + Hash + Debug + Send + Sync;

    fn characteristic(&self) -> u64;
    /// Degree over the prime field.
    fn ext_degree(&self) -> usize;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn elem_u64(&self, v: u64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem;

    fn order(&self) -> BigUint {
        num_traits::pow(BigUint::from(self.characteristic()), self.ext_degree())
    }

    fn pow(&self, a: &Self::Elem, e: &BigUint) -> Self::Elem {
        let mut r = self.one();
        for i in (0..e.bits()).rev() {
            r = self.mul(&r, &r);
            if e.bit(i) {
                r = self.mul(&r, a);
            }
        }
        r
    }

    /// The unique `p`-th root, `a^(p^(k-1))`.
    fn pth_root(&self, a: &Self::Elem) -> Self::Elem {
        let mut r = a.clone();
        let p = BigUint::from(self.characteristic());
        for _ in 1..self.ext_degree() {
            r = self.pow(&r, &p);
        }
        r
    }
}

/// `F_p` for a prime `p < 2^63`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if !is_prime_u64(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(PrimeField { p })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn reduce(&self, a: &BigInt) -> u64 {
        reduce_int(a, self.p)
    }

    /// Square root by Tonelli–Shanks, `None` for non-residues.
    pub fn sqrt(&self, a: u64) -> Option<u64> {
        let p = self.p;
        let a = a % p;
        if a == 0 || p == 2 {
            return Some(a);
        }
        if pow_mod(a, (p - 1) / 2, p) != 1 {
            return None;
        }
        let mut q = p - 1;
        let mut s = 0;
        while q.is_multiple_of(2) {
            q /= 2;
            s += 1;
        }
        let mut z = 2;
        while pow_mod(z, (p - 1) / 2, p) != p - 1 {
            z += 1;
        }
        let mut m = s;
        let mut c = pow_mod(z, q, p);
        let mut t = pow_mod(a, q, p);
        let mut r = pow_mod(a, q.div_ceil(2), p);
        while t != 1 {
            let mut i = 0;
            let mut tt = t;
            while tt != 1 {
                tt = mul_mod(tt, tt, p);
                i += 1;
            }
            let b = pow_mod(c, 1 << (m - i - 1), p);
            m = i;
            c = mul_mod(b, b, p);
            t = mul_mod(t, c, p);
            r = mul_mod(r, b, p);
        }
        Some(r)
    }
}

impl FiniteField for PrimeField {
    type Elem = u64;

    fn characteristic(&self) -> u64 {
        self.p
    }
    fn ext_degree(&self) -> usize {
        1
    }
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn elem_u64(&self, v: u64) -> u64 {
        v % self.p
    }
    #[inline]
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = *a as u128 + *b as u128;
        (s % self.p as u128) as u64
    }
    #[inline]
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            self.p - (b - a)
        }
    }
    #[inline]
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        mul_mod(*a, *b, self.p)
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            return None;
        }
        let (mut r0, mut r1) = (self.p as i128, *a as i128);
        let (mut s0, mut s1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (s0, s1) = (s1, s0 - q * s1);
        }
        Some(s0.rem_euclid(self.p as i128) as u64)
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        rng.gen_range(0..self.p)
    }
    fn pow(&self, a: &u64, e: &BigUint) -> u64 {
        let reduced = e % BigUint::from(self.p - 1);
        if *a == 0 {
            return if e.is_zero() { 1 } else { 0 };
        }
        pow_mod(*a, reduced.to_u64().unwrap(), self.p)
    }
    fn pth_root(&self, a: &u64) -> u64 {
        *a
    }
}

/// `F_p[t]/(m(t))` for a monic irreducible `m` of degree `k`.
/// Elements are dense coefficient vectors of length `k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExtField {
    base: PrimeField,
    modulus: Vec<u64>,
}

impl ExtField {
    /// `modulus` is monic, ascending coefficients, already reduced mod `p`.
    pub fn new(p: u64, modulus: Vec<u64>) -> Result<Self> {
        let base = PrimeField::new(p)?;
        let modulus = poly_monic(&base, &poly_trim(&base, modulus));
        if modulus.len() < 2 {
            return Err(Error::ReducibleModulus);
        }
        if !is_irreducible(&base, &modulus) {
            return Err(Error::ReducibleModulus);
        }
        Ok(ExtField { base, modulus })
    }

    pub(crate) fn new_unchecked(base: PrimeField, modulus: Vec<u64>) -> Self {
        ExtField { base, modulus }
    }

    pub fn base(&self) -> &PrimeField {
        &self.base
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn k(&self) -> usize {
        self.modulus.len() - 1
    }

    /// Element from an arbitrary-length polynomial in `t`.
    pub fn from_poly(&self, a: &[u64]) -> Vec<u64> {
        let mut v: Vec<u64> = a.iter().map(|c| c % self.base.p).collect();
        let k = self.k();
        let p = &self.base;
        if v.len() > k {
            for i in (k..v.len()).rev() {
                let c = v[i];
                if c == 0 {
                    continue;
                }
                for j in 0..k {
                    let t = p.mul(&c, &self.modulus[j]);
                    v[i - k + j] = p.sub(&v[i - k + j], &t);
                }
                v[i] = 0;
            }
        }
        v.resize(k, 0);
        v
    }

    pub fn generator(&self) -> Vec<u64> {
        self.from_poly(&[0, 1])
    }
}

impl FiniteField for ExtField {
    type Elem = Vec<u64>;

    fn characteristic(&self) -> u64 {
        self.base.p
    }
    fn ext_degree(&self) -> usize {
        self.k()
    }
    fn zero(&self) -> Vec<u64> {
        vec![0; self.k()]
    }
    fn one(&self) -> Vec<u64> {
        let mut v = vec![0; self.k()];
        v[0] = 1;
        v
    }
    fn elem_u64(&self, x: u64) -> Vec<u64> {
        let mut v = vec![0; self.k()];
        v[0] = x % self.base.p;
        v
    }
    fn add(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        a.iter().zip(b).map(|(x, y)| self.base.add(x, y)).collect()
    }
    fn sub(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        a.iter().zip(b).map(|(x, y)| self.base.sub(x, y)).collect()
    }
    fn mul(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        let k = self.k();
        let p = self.base.p as u128;
        let mut acc = vec![0u128; 2 * k - 1];
        for (i, x) in a.iter().enumerate() {
            if *x == 0 {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                acc[i + j] = (acc[i + j] + *x as u128 * *y as u128) % p;
            }
        }
        let mut v: Vec<u64> = acc.into_iter().map(|c| c as u64).collect();
        for i in (k..v.len()).rev() {
            let c = v[i];
            if c == 0 {
                continue;
            }
            for j in 0..k {
                let t = self.base.mul(&c, &self.modulus[j]);
                v[i - k + j] = self.base.sub(&v[i - k + j], &t);
            }
        }
        v.truncate(k);
        v
    }
    fn neg(&self, a: &Vec<u64>) -> Vec<u64> {
        a.iter().map(|x| self.base.neg(x)).collect()
    }
    fn inv(&self, a: &Vec<u64>) -> Option<Vec<u64>> {
        if self.is_zero(a) {
            return None;
        }
        // Extended Euclid in F_p[t] against the modulus.
        let f = &self.base;
        let mut r0 = self.modulus.clone();
        let mut r1 = poly_trim(f, a.clone());
        let mut s0: Vec<u64> = Vec::new();
        let mut s1: Vec<u64> = vec![1];
        while !r1.is_empty() {
            let (q, r) = poly_divrem(f, &r0, &r1);
            let s2 = poly_sub(f, &s0, &poly_mul(f, &q, &s1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s2;
        }
        // r0 is a nonzero constant.
        let c = f.inv(&r0[0])?;
        Some(self.from_poly(&poly_scale(f, &s0, &c)))
    }
    fn is_zero(&self, a: &Vec<u64>) -> bool {
        a.iter().all(|x| *x == 0)
    }
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<u64> {
        (0..self.k()).map(|_| rng.gen_range(0..self.base.p)).collect()
    }
}

// ---------------------------------------------------------------------------
// Polynomials over a finite field: plain vectors, ascending, no trailing zeros.

pub fn poly_trim<F: FiniteField>(f: &F, mut a: Vec<F::Elem>) -> Vec<F::Elem> {
    while a.last().is_some_and(|c| f.is_zero(c)) {
        a.pop();
    }
    a
}

pub fn poly_add<F: FiniteField>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    let n = a.len().max(b.len());
    let z = f.zero();
    let v = (0..n)
        .map(|i| f.add(a.get(i).unwrap_or(&z), b.get(i).unwrap_or(&z)))
        .collect();
    poly_trim(f, v)
}

pub fn poly_sub<F: FiniteField>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    let n = a.len().max(b.len());
    let z = f.zero();
    let v = (0..n)
        .map(|i| f.sub(a.get(i).unwrap_or(&z), b.get(i).unwrap_or(&z)))
        .collect();
    poly_trim(f, v)
}

pub fn poly_scale<F: FiniteField>(f: &F, a: &[F::Elem], c: &F::Elem) -> Vec<F::Elem> {
    poly_trim(f, a.iter().map(|x| f.mul(x, c)).collect())
}

pub fn poly_mul<F: FiniteField>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut v = vec![f.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if f.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            v[i + j] = f.add(&v[i + j], &f.mul(x, y));
        }
    }
    poly_trim(f, v)
}

pub fn poly_monic<F: FiniteField>(f: &F, a: &[F::Elem]) -> Vec<F::Elem> {
    match a.last() {
        None => Vec::new(),
        Some(l) => {
            let inv = f.inv(l).expect("nonzero leading coefficient");
            poly_scale(f, a, &inv)
        }
    }
}

pub fn poly_divrem<F: FiniteField>(
    f: &F,
    a: &[F::Elem],
    b: &[F::Elem],
) -> (Vec<F::Elem>, Vec<F::Elem>) {
    assert!(!b.is_empty(), "division by zero polynomial");
    if a.len() < b.len() {
        return (Vec::new(), a.to_vec());
    }
    let db = b.len() - 1;
    let inv = f.inv(b.last().unwrap()).expect("nonzero leading coefficient");
    let mut r = a.to_vec();
    let mut q = vec![f.zero(); a.len() - db];
    for k in (0..q.len()).rev() {
        let t = f.mul(&r[k + db], &inv);
        if f.is_zero(&t) {
            continue;
        }
        for (i, bc) in b.iter().enumerate() {
            r[k + i] = f.sub(&r[k + i], &f.mul(&t, bc));
        }
        q[k] = t;
    }
    r.truncate(db);
    (poly_trim(f, q), poly_trim(f, r))
}

pub fn poly_rem<F: FiniteField>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    poly_divrem(f, a, b).1
}

/// Monic gcd.
pub fn poly_gcd<F: FiniteField>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    let mut a = poly_trim(f, a.to_vec());
    let mut b = poly_trim(f, b.to_vec());
    while !b.is_empty() {
        let r = poly_rem(f, &a, &b);
        a = b;
        b = r;
    }
    poly_monic(f, &a)
}

pub fn poly_derivative<F: FiniteField>(f: &F, a: &[F::Elem]) -> Vec<F::Elem> {
    let p = f.characteristic();
    let v = a
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| f.mul(c, &f.elem_u64((i as u64) % p)))
        .collect();
    poly_trim(f, v)
}

pub fn poly_mulmod<F: FiniteField>(
    f: &F,
    a: &[F::Elem],
    b: &[F::Elem],
    m: &[F::Elem],
) -> Vec<F::Elem> {
    poly_rem(f, &poly_mul(f, a, b), m)
}

pub fn poly_powmod<F: FiniteField>(
    f: &F,
    a: &[F::Elem],
    e: &BigUint,
    m: &[F::Elem],
) -> Vec<F::Elem> {
    let mut r = poly_rem(f, &[f.one()], m);
    let base = poly_rem(f, a, m);
    for i in (0..e.bits()).rev() {
        r = poly_mulmod(f, &r, &r, m);
        if e.bit(i) {
            r = poly_mulmod(f, &r, &base, m);
        }
    }
    r
}

pub fn poly_eval<F: FiniteField>(f: &F, a: &[F::Elem], x: &F::Elem) -> F::Elem {
    let mut acc = f.zero();
    for c in a.iter().rev() {
        acc = f.add(&f.mul(&acc, x), c);
    }
    acc
}

fn is_one<F: FiniteField>(f: &F, a: &[F::Elem]) -> bool {
    a.len() == 1 && a[0] == f.one()
}

/// Rabin's irreducibility test.
pub fn is_irreducible<F: FiniteField>(f: &F, a: &[F::Elem]) -> bool {
    let a = poly_monic(f, &poly_trim(f, a.to_vec()));
    let n = match a.len() {
        0 | 1 => return false,
        l => l - 1,
    };
    if n == 1 {
        return true;
    }
    let q = f.order();
    let x = vec![f.zero(), f.one()];
    let mut h = x.clone();
    let mut powers = Vec::with_capacity(n);
    for _ in 0..n {
        h = poly_powmod(f, &h, &q, &a);
        powers.push(h.clone());
    }
    if !poly_sub(f, &powers[n - 1], &x).is_empty() {
        return false;
    }
    let mut m = n;
    let mut prime_divs = Vec::new();
    let mut d = 2;
    while d * d <= m {
        if m % d == 0 {
            prime_divs.push(d);
            while m % d == 0 {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        prime_divs.push(m);
    }
    for r in prime_divs {
        let hk = &powers[n / r - 1];
        let g = poly_gcd(f, &a, &poly_sub(f, hk, &x));
        if !is_one(f, &g) {
            return false;
        }
    }
    true
}

/// Square-free factorization of a monic polynomial: `(g, m)` with `a = prod g^m`.
pub fn squarefree_factorization<F: FiniteField>(
    f: &F,
    a: &[F::Elem],
) -> Vec<(Vec<F::Elem>, usize)> {
    let a = poly_monic(f, a);
    let mut out = Vec::new();
    if a.len() <= 1 {
        return out;
    }
    let p = f.characteristic() as usize;
    let da = poly_derivative(f, &a);
    if da.is_empty() {
        let root = pth_root_poly(f, &a);
        for (g, m) in squarefree_factorization(f, &root) {
            out.push((g, m * p));
        }
        return out;
    }
    let mut c = poly_gcd(f, &a, &da);
    let mut w = poly_divrem(f, &a, &c).0;
    let mut i = 1;
    while !is_one(f, &w) {
        let y = poly_gcd(f, &w, &c);
        let fac = poly_divrem(f, &w, &y).0;
        if fac.len() > 1 {
            out.push((fac, i));
        }
        w = y.clone();
        c = poly_divrem(f, &c, &y).0;
        i += 1;
    }
    if c.len() > 1 {
        let root = pth_root_poly(f, &c);
        for (g, m) in squarefree_factorization(f, &root) {
            out.push((g, m * p));
        }
    }
    out
}

fn pth_root_poly<F: FiniteField>(f: &F, a: &[F::Elem]) -> Vec<F::Elem> {
    let p = f.characteristic() as usize;
    let v = a.iter().step_by(p).map(|c| f.pth_root(c)).collect();
    poly_trim(f, v)
}

/// Distinct-degree factorization of a monic square-free polynomial.
/// Returns `(product of all irreducible factors of degree d, d)`.
pub fn distinct_degree_factorization<F: FiniteField>(
    f: &F,
    a: &[F::Elem],
) -> Vec<(Vec<F::Elem>, usize)> {
    let q = f.order();
    let x = vec![f.zero(), f.one()];
    let mut rest = poly_monic(f, a);
    let mut out = Vec::new();
    let mut h = poly_rem(f, &x, &rest);
    let mut d = 1;
    while rest.len() > 2 * d {
        h = poly_powmod(f, &h, &q, &rest);
        let g = poly_gcd(f, &rest, &poly_sub(f, &h, &x));
        if g.len() > 1 {
            rest = poly_divrem(f, &rest, &g).0;
            h = poly_rem(f, &h, &rest);
            out.push((g, d));
        }
        d += 1;
    }
    if rest.len() > 1 {
        let deg = rest.len() - 1;
        out.push((rest, deg));
    }
    out
}

/// Split a monic square-free product of irreducibles of common degree `d`.
pub fn equal_degree_split<F: FiniteField, R: Rng + ?Sized>(
    f: &F,
    a: &[F::Elem],
    d: usize,
    rng: &mut R,
) -> Vec<Vec<F::Elem>> {
    let n = a.len() - 1;
    if n == d {
        return vec![a.to_vec()];
    }
    let q = f.order();
    let p = f.characteristic();
    loop {
        let r: Vec<F::Elem> = poly_trim(f, (0..n).map(|_| f.random(rng)).collect());
        if r.len() < 2 {
            continue;
        }
        let g0 = poly_gcd(f, &r, a);
        let g = if g0.len() > 1 {
            g0
        } else if p == 2 {
            // Absolute trace to F_2: sum of r^(2^i) for i < k*d.
            let steps = f.ext_degree() * d;
            let mut t = r.clone();
            let mut acc = r.clone();
            for _ in 1..steps {
                t = poly_mulmod(f, &t, &t, a);
                acc = poly_add(f, &acc, &t);
            }
            poly_gcd(f, &acc, a)
        } else {
            let e = (num_traits::pow(q.clone(), d) - BigUint::one()) >> 1;
            let b = poly_powmod(f, &r, &e, a);
            poly_gcd(f, &poly_sub(f, &b, &[f.one()]), a)
        };
        if g.len() > 1 && g.len() < a.len() {
            let h = poly_divrem(f, a, &g).0;
            let mut out = equal_degree_split(f, &g, d, rng);
            out.extend(equal_degree_split(f, &h, d, rng));
            return out;
        }
    }
}

/// Full factorization into monic irreducibles with multiplicities.
pub fn factor_mod_q<F: FiniteField, R: Rng + ?Sized>(
    f: &F,
    a: &[F::Elem],
    rng: &mut R,
) -> Result<Vec<(Vec<F::Elem>, usize)>> {
    let a = poly_trim(f, a.to_vec());
    if a.is_empty() {
        return Err(Error::ZeroPolynomial);
    }
    let mut out = Vec::new();
    for (g, m) in squarefree_factorization(f, &a) {
        for (h, d) in distinct_degree_factorization(f, &g) {
            for irr in equal_degree_split(f, &h, d, rng) {
                out.push((irr, m));
            }
        }
    }
    out.sort_by_key(|x| (x.0.len(), x.1));
    Ok(out)
}

/// Multiset of irreducible factor degrees (repeated by multiplicity),
/// sorted ascending, without equal-degree splitting.
pub fn factor_degrees_mod_q<F: FiniteField>(f: &F, a: &[F::Elem]) -> Result<Vec<usize>> {
    let a = poly_trim(f, a.to_vec());
    if a.is_empty() {
        return Err(Error::ZeroPolynomial);
    }
    let mut out = Vec::new();
    for (g, m) in squarefree_factorization(f, &a) {
        for (h, d) in distinct_degree_factorization(f, &g) {
            let count = (h.len() - 1) / d;
            for _ in 0..count * m {
                out.push(d);
            }
        }
    }
    out.sort_unstable();
    Ok(out)
}

/// Reduce an integer polynomial modulo `p`.
pub fn reduce_poly(f: &IntPoly, p: &PrimeField) -> Vec<u64> {
    poly_trim(p, f.coeffs().iter().map(|c| p.reduce(c)).collect())
}

pub fn is_squarefree_mod<F: FiniteField>(f: &F, a: &[F::Elem]) -> bool {
    if a.len() <= 2 {
        return true;
    }
    let g = poly_gcd(f, a, &poly_derivative(f, a));
    is_one(f, &g)
}

/// Cheap certificate of square-freeness over ℚ: some prime not dividing
/// the leading coefficient keeps the reduction square-free.
pub fn is_squarefree_mod_some_prime(f: &IntPoly) -> bool {
    if f.deg() <= 1 {
        return true;
    }
    let mut tried = 0;
    for p in primes_in(1_000_003, 1_100_000) {
        let field = PrimeField { p };
        if field.reduce(&f.lc()) == 0 {
            continue;
        }
        let fp = reduce_poly(f, &field);
        if is_squarefree_mod(&field, &fp) {
            return true;
        }
        tried += 1;
        if tried >= 8 {
            return false;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng() -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(7)
    }

    #[test]
    fn primes() {
        assert!(is_prime_u64(2));
        assert!(is_prime_u64(1_000_000_007));
        assert!(!is_prime_u64(1));
        assert!(!is_prime_u64(3_215_031_751));
        assert!(PrimeField::new(15).is_err());
    }

    #[test]
    fn sqrt_mod_p() {
        let f = PrimeField::new(10007).unwrap();
        for a in 1..200u64 {
            if let Some(r) = f.sqrt(a) {
                assert_eq!(f.mul(&r, &r), a);
            }
        }
        assert_eq!(PrimeField::new(3).unwrap().sqrt(2), None);
    }

    #[test]
    fn x2_plus_1_mod_5_splits() {
        let f = PrimeField::new(5).unwrap();
        let fac = factor_mod_q(&f, &[1, 0, 1], &mut rng()).unwrap();
        let mut roots: Vec<u64> = fac.iter().map(|(g, _)| f.neg(&g[0])).collect();
        roots.sort();
        assert_eq!(roots, vec![2, 3]);
    }

    #[test]
    fn x2_plus_1_mod_3_irreducible() {
        let f = PrimeField::new(3).unwrap();
        let fac = factor_mod_q(&f, &[1, 0, 1], &mut rng()).unwrap();
        assert_eq!(fac, vec![(vec![1, 0, 1], 1)]);
    }

    #[test]
    fn x4_plus_1_mod_7_quadratics() {
        let f = PrimeField::new(7).unwrap();
        let a = [1, 0, 0, 0, 1];
        // Oracle: exhaustive search over monic quadratics dividing x^4 + 1.
        let mut divisors = 0;
        for c0 in 0..7 {
            for c1 in 0..7 {
                let g = vec![c0, c1, 1];
                if poly_rem(&f, &a, &g).is_empty() {
                    divisors += 1;
                }
            }
        }
        let fac = factor_mod_q(&f, &a, &mut rng()).unwrap();
        assert_eq!(fac.len(), 2);
        assert!(fac.iter().all(|(g, m)| g.len() == 3 && *m == 1));
        // x^4+1 has no roots mod 7, so the quadratic divisors are exactly the two factors.
        assert_eq!(divisors, 2);
        assert_eq!(factor_degrees_mod_q(&f, &a).unwrap(), vec![2, 2]);
    }

    #[test]
    fn repeated_factors_and_char_p_derivative() {
        let f = PrimeField::new(3).unwrap();
        // (x^3 + 2)^1 * (x+1)^2 over F_3; x^3+2 = (x+2)^3.
        let a = poly_mul(&f, &[2, 0, 0, 1], &poly_mul(&f, &[1, 1], &[1, 1]));
        let fac = factor_mod_q(&f, &a, &mut rng()).unwrap();
        let mut got: Vec<(Vec<u64>, usize)> = fac;
        got.sort();
        assert_eq!(got, vec![(vec![1, 1], 2), (vec![2, 1], 3)]);
    }

    #[test]
    fn extension_field_arithmetic() {
        // F_9 = F_3[t]/(t^2+1)
        let k = ExtField::new(3, vec![1, 0, 1]).unwrap();
        let t = k.generator();
        let t2 = k.mul(&t, &t);
        assert_eq!(t2, vec![2, 0]);
        for a0 in 0..3 {
            for a1 in 0..3 {
                let a = vec![a0, a1];
                if k.is_zero(&a) {
                    continue;
                }
                let ai = k.inv(&a).unwrap();
                assert_eq!(k.mul(&a, &ai), k.one());
            }
        }
        assert!(ExtField::new(5, vec![1, 0, 1]).is_err());
        // x^2 + 1 splits over F_9 = F_3(t), t^2 = -1.
        let poly = vec![k.one(), k.zero(), k.one()];
        let fac = factor_mod_q(&k, &poly, &mut rng()).unwrap();
        assert_eq!(fac.len(), 2);
    }

    #[test]
    fn characteristic_two() {
        let f = PrimeField::new(2).unwrap();
        // x^6 + x^5 + x^4 + x^3 + x^2 + x + 1 = product of two cubics over F_2.
        let a = vec![1, 1, 1, 1, 1, 1, 1];
        let fac = factor_mod_q(&f, &a, &mut rng()).unwrap();
        assert_eq!(fac.len(), 2);
        let prod = poly_mul(&f, &fac[0].0, &fac[1].0);
        assert_eq!(prod, a);
        let k = ExtField::new(2, vec![1, 1, 1]).unwrap();
        let poly = vec![k.one(), k.one(), k.one()];
        let fac = factor_mod_q(&k, &poly, &mut rng()).unwrap();
        assert_eq!(fac.len(), 2);
    }
}
