//! Factorization in ℚ[x]: square-free split, factorization modulo a good
//! prime, multifactor Hensel lifting and exhaustive recombination.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::arith::modp::{
    factor_degrees_mod_q, factor_mod_q, is_squarefree_mod, poly_divrem, poly_mul, poly_sub,
    primes_in, reduce_poly, FiniteField, PrimeField,
};
use crate::arith::poly::{squarefree_decomposition, IntPoly, RatPoly};
use crate::error::{Error, Result};

/// How many good primes to inspect before picking the one with fewest factors.
const PRIME_TRIALS: usize = 7;

/// Factorization of an integer polynomial: `f = content * prod g^m`,
/// every `g` primitive, irreducible, with positive leading coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub content: BigInt,
    pub factors: Vec<(IntPoly, usize)>,
}

impl Factorization {
    pub fn expand(&self) -> IntPoly {
        let mut acc = IntPoly::constant(self.content.clone());
        for (g, m) in &self.factors {
            acc = &acc * &g.pow(*m as u32);
        }
        acc
    }

    pub fn is_irreducible(&self) -> bool {
        self.factors.len() == 1 && self.factors[0].1 == 1
    }
}

/// Factor a nonzero integer polynomial over ℚ.
pub fn factor_over_q(f: &IntPoly) -> Result<Factorization> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let content = f.content();
    let mut factors = Vec::new();
    if f.deg() == 0 {
        return Ok(Factorization { content, factors });
    }
    let mut seed = 0x5eed_u64;
    for (g, m) in squarefree_decomposition(f)? {
        for h in factor_squarefree(&g, &mut seed)? {
            factors.push((h, m));
        }
    }
    factors.sort_by(|a, b| (a.0.deg(), &a.0.coeffs().to_vec()).cmp(&(b.0.deg(), &b.0.coeffs().to_vec())));
    Ok(Factorization { content, factors })
}

/// Factor over ℚ returning monic factors and the leading coefficient.
pub fn factor_rat_poly(f: &RatPoly) -> Result<(BigRational, Vec<(RatPoly, usize)>)> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let (_, g) = f.to_primitive_int();
    let fac = factor_over_q(&g)?;
    let factors = fac.factors.iter().map(|(h, m)| (h.to_rat().monic(), *m)).collect();
    Ok((f.lc(), factors))
}

/// Whether `f` is irreducible over ℚ.
pub fn is_irreducible_over_q(f: &IntPoly) -> Result<bool> {
    Ok(factor_over_q(f)?.is_irreducible())
}

/// Primitive square-free input with positive leading coefficient.
fn factor_squarefree(f: &IntPoly, seed: &mut u64) -> Result<Vec<IntPoly>> {
    let f = f.primitive_part();
    let n = f.deg();
    if n <= 1 {
        return Ok(vec![f]);
    }
    let lc = f.lc();
    // Pick a prime with few modular factors; also intersect possible factor degrees.
    let mut best: Option<(u64, usize)> = None;
    let mut possible = vec![true; n + 1];
    let mut found = 0;
    for p in primes_in(3, u64::MAX) {
        if (lc.clone() % p).is_zero() {
            continue;
        }
        let field = PrimeField::new(p)?;
        let fp = reduce_poly(&f, &field);
        if !is_squarefree_mod(&field, &fp) {
            continue;
        }
        let degs = factor_degrees_mod_q(&field, &fp)?;
        let sums = subset_sums(&degs, n);
        for (d, ok) in possible.iter_mut().enumerate() {
            *ok &= sums[d];
        }
        if best.is_none_or(|(_, c)| degs.len() < c) {
            best = Some((p, degs.len()));
        }
        found += 1;
        if found >= PRIME_TRIALS || degs.len() == 1 {
            break;
        }
    }
    if (1..n).all(|d| !possible[d]) {
        return Ok(vec![f]);
    }
    let (p, _) = best.expect("some prime is good for a square-free polynomial");
    let field = PrimeField::new(p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(*seed ^ p);
    *seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1);
    let modular: Vec<Vec<u64>> = factor_mod_q(&field, &reduce_poly(&f, &field), &mut rng)?
        .into_iter()
        .map(|(g, _)| g)
        .collect();
    if modular.len() == 1 {
        return Ok(vec![f]);
    }
    // Lift to p^k > 2 * 2 * |lc| * 2^n * ||f||_2.
    let norm2 = f.coeffs().iter().map(|c| c * c).sum::<BigInt>().sqrt() + 1;
    let bound = BigInt::from(4) * lc.abs() * (BigInt::one() << n) * norm2;
    let pb = BigInt::from(p);
    let mut k = 1u32;
    while pb.pow(k) <= bound {
        k *= 2;
    }
    let modulus = pb.pow(k);
    let lifted = hensel_lift(&f, &modular, p, k);
    Ok(recombine(f, lifted, &modulus))
}

/// Boolean table of subset sums of `degs` up to `n`.
fn subset_sums(degs: &[usize], n: usize) -> Vec<bool> {
    let mut s = vec![false; n + 1];
    s[0] = true;
    for &d in degs {
        for t in (d..=n).rev() {
            if s[t - d] {
                s[t] = true;
            }
        }
    }
    s
}

// ---------------------------------------------------------------------------
// Arithmetic in (ℤ/m)[x], coefficients in [0, m).

fn zm(a: &BigInt, m: &BigInt) -> BigInt {
    a.mod_floor(m)
}

fn zm_trim(mut a: Vec<BigInt>) -> Vec<BigInt> {
    while a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
    a
}

fn zm_mul(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    zm_trim(out.into_iter().map(|c| zm(&c, m)).collect())
}

fn zm_add(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let n = a.len().max(b.len());
    let z = BigInt::zero();
    zm_trim(
        (0..n)
            .map(|i| zm(&(a.get(i).unwrap_or(&z) + b.get(i).unwrap_or(&z)), m))
            .collect(),
    )
}

fn zm_sub(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let n = a.len().max(b.len());
    let z = BigInt::zero();
    zm_trim(
        (0..n)
            .map(|i| zm(&(a.get(i).unwrap_or(&z) - b.get(i).unwrap_or(&z)), m))
            .collect(),
    )
}

/// Division by a monic polynomial.
fn zm_divrem(a: &[BigInt], b: &[BigInt], m: &BigInt) -> (Vec<BigInt>, Vec<BigInt>) {
    if a.len() < b.len() {
        return (Vec::new(), a.to_vec());
    }
    let db = b.len() - 1;
    let mut r = a.to_vec();
    let mut q = vec![BigInt::zero(); a.len() - db];
    for k in (0..q.len()).rev() {
        let t = zm(&r[k + db], m);
        if t.is_zero() {
            continue;
        }
        for (i, bc) in b.iter().enumerate() {
            r[k + i] = zm(&(&r[k + i] - &t * bc), m);
        }
        q[k] = t;
    }
    r.truncate(db);
    (zm_trim(q), zm_trim(r.into_iter().map(|c| zm(&c, m)).collect()))
}

fn lift_u64(a: &[u64]) -> Vec<BigInt> {
    a.iter().map(|&c| BigInt::from(c)).collect()
}

/// Bezout coefficients `s g + t h = 1` over F_p for coprime monic `g`, `h`.
fn bezout_mod_p(field: &PrimeField, g: &[u64], h: &[u64]) -> (Vec<u64>, Vec<u64>) {
    let (mut r0, mut r1) = (g.to_vec(), h.to_vec());
    let (mut s0, mut s1) = (vec![1u64], Vec::new());
    let (mut t0, mut t1) = (Vec::new(), vec![1u64]);
    while !r1.is_empty() {
        let (q, r) = poly_divrem(field, &r0, &r1);
        let s2 = poly_sub(field, &s0, &poly_mul(field, &q, &s1));
        let t2 = poly_sub(field, &t0, &poly_mul(field, &q, &t1));
        (r0, r1) = (r1, r);
        (s0, s1) = (s1, s2);
        (t0, t1) = (t1, t2);
    }
    let inv = field.inv(&r0[0]).expect("coprime factors");
    let scale = |v: Vec<u64>| v.iter().map(|c| field.mul(c, &inv)).collect::<Vec<_>>();
    (scale(s0), scale(t0))
}

/// Lift `F ≡ g h (mod p)` with monic `F` to modulus `p^(2^j) >= p^k`.
pub(crate) fn lift_pair(
    f: &[BigInt],
    g: &[u64],
    h: &[u64],
    field: &PrimeField,
    k: u32,
) -> (Vec<BigInt>, Vec<BigInt>) {
    let p = BigInt::from(field.p());
    let (s, t) = bezout_mod_p(field, g, h);
    let (mut g, mut h) = (lift_u64(g), lift_u64(h));
    let (mut s, mut t) = (lift_u64(&s), lift_u64(&t));
    let mut e = 1u32;
    while e < k {
        e *= 2;
        let m2 = p.pow(e);
        let fm: Vec<BigInt> = f.iter().map(|c| zm(c, &m2)).collect();
        let err = zm_sub(&fm, &zm_mul(&g, &h, &m2), &m2);
        let (q, r) = zm_divrem(&zm_mul(&s, &err, &m2), &h, &m2);
        let g2 = zm_add(&zm_add(&g, &zm_mul(&t, &err, &m2), &m2), &zm_mul(&q, &g, &m2), &m2);
        let h2 = zm_add(&h, &r, &m2);
        let b = zm_sub(
            &zm_add(&zm_mul(&s, &g2, &m2), &zm_mul(&t, &h2, &m2), &m2),
            &[BigInt::one()],
            &m2,
        );
        let (c, d) = zm_divrem(&zm_mul(&s, &b, &m2), &h2, &m2);
        s = zm_sub(&s, &d, &m2);
        t = zm_sub(&zm_sub(&t, &zm_mul(&t, &b, &m2), &m2), &zm_mul(&c, &g2, &m2), &m2);
        g = g2;
        h = h2;
    }
    (g, h)
}

/// Lift the monic modular factors of `f` to modulus `p^k` (k a power of two).
fn hensel_lift(f: &IntPoly, factors: &[Vec<u64>], p: u64, k: u32) -> Vec<Vec<BigInt>> {
    let field = PrimeField::new(p).expect("prime");
    let modulus = BigInt::from(p).pow(k);
    // Monic associate of f modulo p^k.
    let lc_inv = mod_inverse(&f.lc(), &modulus);
    let monic: Vec<BigInt> = f.coeffs().iter().map(|c| zm(&(c * &lc_inv), &modulus)).collect();
    lift_tree(&monic, factors, &field, k, &modulus)
}

fn lift_tree(
    f: &[BigInt],
    factors: &[Vec<u64>],
    field: &PrimeField,
    k: u32,
    modulus: &BigInt,
) -> Vec<Vec<BigInt>> {
    if factors.len() == 1 {
        return vec![f.iter().map(|c| zm(c, modulus)).collect()];
    }
    let mid = factors.len() / 2;
    let prod = |fs: &[Vec<u64>]| {
        fs.iter()
            .fold(vec![1u64], |acc, g| poly_mul(field, &acc, g))
    };
    let (g, h) = (prod(&factors[..mid]), prod(&factors[mid..]));
    let (gl, hl) = lift_pair(f, &g, &h, field, k);
    let gl: Vec<BigInt> = gl.iter().map(|c| zm(c, modulus)).collect();
    let hl: Vec<BigInt> = hl.iter().map(|c| zm(c, modulus)).collect();
    let mut out = lift_tree(&gl, &factors[..mid], field, k, modulus);
    out.extend(lift_tree(&hl, &factors[mid..], field, k, modulus));
    out
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> BigInt {
    let e = a.extended_gcd(m);
    assert!(e.gcd.is_one(), "leading coefficient not invertible");
    e.x.mod_floor(m)
}

fn symmetric(c: &BigInt, m: &BigInt, half: &BigInt) -> BigInt {
    let r = c.mod_floor(m);
    if &r > half {
        r - m
    } else {
        r
    }
}

/// Exhaustive subset recombination of lifted factors.
fn recombine(f: IntPoly, mut lifted: Vec<Vec<BigInt>>, m: &BigInt) -> Vec<IntPoly> {
    let half: BigInt = m >> 1;
    let mut f = f;
    let mut out = Vec::new();
    let mut s = 1;
    while 2 * s <= lifted.len() {
        let mut found = false;
        let r = lifted.len();
        let mut idx: Vec<usize> = (0..s).collect();
        loop {
            let lc = f.lc();
            let f0 = f.coeff(0);
            // Constant-term screen.
            let mut c0 = lc.clone();
            for &i in &idx {
                c0 = (c0 * lifted[i].first().cloned().unwrap_or_default()).mod_floor(m);
            }
            let c0 = symmetric(&c0, m, &half);
            let plausible = if f0.is_zero() {
                true
            } else {
                !c0.is_zero() && (&lc * &f0).is_multiple_of(&c0)
            };
            if plausible {
                let mut g = vec![lc.clone()];
                for &i in &idx {
                    g = zm_mul(&g, &lifted[i], m);
                }
                let g = IntPoly::new(g.iter().map(|c| symmetric(c, m, &half)).collect()).primitive_part();
                if let Some(q) = f.div_exact(&g) {
                    out.push(g);
                    f = q;
                    for &i in idx.iter().rev() {
                        lifted.remove(i);
                    }
                    found = true;
                }
            }
            if found || !next_combination(&mut idx, r) {
                break;
            }
        }
        if !found {
            s += 1;
        }
    }
    if f.deg() > 0 {
        out.push(f.primitive_part());
    }
    out
}

fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    for i in (0..k).rev() {
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Factor-degree pattern of `f` modulo a prime not dividing its discriminant.
pub fn degree_pattern(f: &IntPoly, p: u64) -> Result<Vec<usize>> {
    let field = PrimeField::new(p)?;
    factor_degrees_mod_q(&field, &reduce_poly(f, &field))
}

/// Integer square root test, used as an irreducibility oracle for quadratics.
pub fn is_perfect_square(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    let r = n.sqrt();
    &(&r * &r) == n
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64(c)
    }

    #[test]
    fn x4_minus_1() {
        let fac = factor_over_q(&p(&[-1, 0, 0, 0, 1])).unwrap();
        assert_eq!(
            fac.factors,
            vec![(p(&[-1, 1]), 1), (p(&[1, 1]), 1), (p(&[1, 0, 1]), 1)]
        );
        assert_eq!(fac.expand(), p(&[-1, 0, 0, 0, 1]));
    }

    #[test]
    fn class_polynomial_minus_15_irreducible() {
        let f = p(&[-121287375, 191025, 1]);
        let disc = BigInt::from(191025i64 * 191025 + 4 * 121287375);
        assert!(!is_perfect_square(&disc));
        assert!(factor_over_q(&f).unwrap().is_irreducible());
    }

    #[test]
    fn repeated_factor() {
        let f = p(&[1, 0, 1]).pow(2);
        let fac = factor_over_q(&f).unwrap();
        assert_eq!(fac.factors, vec![(p(&[1, 0, 1]), 2)]);
    }

    #[test]
    fn content_and_sign() {
        let f = p(&[6, -12, -6]);
        let fac = factor_over_q(&f).unwrap();
        assert_eq!(fac.expand(), f);
        assert!(fac.factors.iter().all(|(g, _)| g.lc() > BigInt::zero()));
    }

    #[test]
    fn swinnerton_dyer_like() {
        // (x^2-2)(x^2-3)(x^4 - 10 x^2 + 1): many modular factors, three true factors.
        let a = p(&[-2, 0, 1]);
        let b = p(&[-3, 0, 1]);
        let c = p(&[1, 0, -10, 0, 1]);
        let f = &(&a * &b) * &c;
        let fac = factor_over_q(&f).unwrap();
        assert_eq!(fac.factors.len(), 3);
        assert_eq!(fac.expand(), f);
        assert!(factor_over_q(&c).unwrap().is_irreducible());
    }

    #[test]
    fn non_monic_factors() {
        let a = p(&[3, 0, 5]);
        let b = p(&[-7, 2]);
        let c = p(&[1, 1, 0, 3]);
        let f = &(&a * &b) * &c;
        let fac = factor_over_q(&f).unwrap();
        assert_eq!(fac.factors.len(), 3);
        assert_eq!(fac.expand(), f);
    }

    #[test]
    fn rat_poly_interface() {
        let f = RatPoly::from_i64(&[-1, 0, 1]);
        let (lc, fs) = factor_rat_poly(&f).unwrap();
        assert!(lc.is_one());
        assert_eq!(fs.len(), 2);
    }
}
