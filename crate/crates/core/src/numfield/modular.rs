//! Recovering a factor of a polynomial over a tower from its images at a
//! completely split prime: Hensel lifting at every embedding, then
//! rational reconstruction of the coordinates.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::elem::AlgElem;
use super::field::NumberField;
use super::poly::FPoly;
use crate::arith::modp::{self, primes_in, reduce_int};
use crate::arith::zassenhaus::lift_pair;
use crate::arith::{FiniteField, IntPoly, PrimeField};

/// Images of the stored generators at each embedding into `ℤ_p`, mod `p`.
fn split_embeddings(field: &NumberField, p: u64) -> Option<Vec<Vec<u64>>> {
    let pf = PrimeField::new(p).ok()?;
    let mut rng = ChaCha8Rng::seed_from_u64(p);
    let mut embs: Vec<Vec<u64>> = vec![Vec::new()];
    for k in 0..field.depth() {
        let lv = &field.levels[k];
        let mut next = Vec::new();
        for e in &embs {
            let monos = monomials_mod(field, k, e, p);
            let poly: Vec<u64> = lv
                .poly
                .iter()
                .map(|c| dot_mod(c, &monos, p))
                .collect();
            let fac = modp::factor_mod_q(&pf, &poly, &mut rng).ok()?;
            if fac.len() != lv.deg || fac.iter().any(|(g, m)| *m != 1 || g.len() != 2) {
                return None;
            }
            for (g, _) in fac {
                let mut img = e.clone();
                img.push(pf.neg(&g[0]));
                next.push(img);
            }
        }
        embs = next;
    }
    Some(embs)
}

fn dot_mod(c: &[BigInt], monos: &[u64], p: u64) -> u64 {
    let pb = BigInt::from(p);
    let s: BigInt = c
        .iter()
        .zip(monos)
        .map(|(a, m)| a * BigInt::from(*m))
        .sum();
    s.mod_floor(&pb).try_into().expect("reduced")
}

fn monomials_mod(field: &NumberField, depth: usize, imgs: &[u64], p: u64) -> Vec<u64> {
    let m = BigInt::from(p);
    let big: Vec<BigInt> = imgs.iter().map(|&x| BigInt::from(x)).collect();
    monomials_big(field, depth, &big, &m)
        .into_iter()
        .map(|x| x.try_into().expect("reduced"))
        .collect()
}

fn monomials_big(field: &NumberField, depth: usize, imgs: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let mut monos = vec![BigInt::one()];
    for (k, t) in imgs.iter().enumerate().take(depth) {
        let d = field.levels[k].deg;
        let mut next = Vec::with_capacity(monos.len() * d);
        let mut pw = BigInt::one();
        for _ in 0..d {
            next.extend(monos.iter().map(|x| (x * &pw).mod_floor(m)));
            pw = (pw * t).mod_floor(m);
        }
        monos = next;
    }
    monos
}

/// Newton-lift the generator images from mod `p` to mod `m = p^k`.
fn lift_embedding(field: &NumberField, e: &[u64], m: &BigInt) -> Vec<BigInt> {
    let mut out: Vec<BigInt> = Vec::with_capacity(e.len());
    for (k, r) in e.iter().enumerate() {
        let monos = monomials_big(field, k, &out, m);
        let poly: Vec<BigInt> = field.levels[k]
            .poly
            .iter()
            .map(|c| c.iter().zip(&monos).map(|(a, b)| a * b).sum::<BigInt>().mod_floor(m))
            .collect();
        let mut x = BigInt::from(*r);
        for _ in 0..64 {
            let (mut v, mut dv) = (BigInt::zero(), BigInt::zero());
            for c in poly.iter().rev() {
                dv = (dv * &x + &v).mod_floor(m);
                v = (v * &x + c).mod_floor(m);
            }
            if v.is_zero() {
                break;
            }
            let inv = inverse_mod(&dv, m).expect("simple root");
            x = (x - v * inv).mod_floor(m);
        }
        out.push(x);
    }
    out
}

pub(crate) fn inverse_mod(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(m).extended_gcd(m);
    e.gcd.is_one().then(|| e.x.mod_floor(m))
}

/// Inverse of a square matrix modulo `m = p^k`, pivoting on units.
fn mat_inv(a: &[Vec<BigInt>], m: &BigInt) -> Option<Vec<Vec<BigInt>>> {
    let n = a.len();
    let mut a: Vec<Vec<BigInt>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| BigInt::from(u8::from(i == j))));
            r
        })
        .collect();
    for col in 0..n {
        let (piv, inv) = (col..n).find_map(|r| inverse_mod(&a[r][col], m).map(|i| (r, i)))?;
        a.swap(col, piv);
        for x in a[col].iter_mut() {
            *x = (&*x * &inv).mod_floor(m);
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let c = a[r][col].clone();
                #[allow(clippy::needless_range_loop)]
                for j in 0..2 * n {
                    let t = &c * &a[col][j];
                    a[r][j] = (&a[r][j] - t).mod_floor(m);
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// `a/b ≡ x (mod m)` with `|a|, b <= sqrt(m/2)`.
fn rational_reconstruct(x: &BigInt, m: &BigInt) -> Option<BigRational> {
    let bound = (m / 2u32).sqrt();
    let (mut r0, mut r1) = (m.clone(), x.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        (r0, r1) = (r1.clone(), r0 - &q * r1);
        (t0, t1) = (t1.clone(), t0 - q * t1);
    }
    if t1.is_zero() || t1.abs() > bound || !r1.gcd(&t1).is_one() {
        return None;
    }
    Some(BigRational::new(r1, t1))
}

impl NumberField {
    fn eval_at(&self, a: &AlgElem, monos: &[BigInt], m: &BigInt) -> Option<BigInt> {
        let dinv = inverse_mod(&a.den, m)?;
        let s: BigInt = a.num.iter().zip(monos).map(|(x, y)| x * y).sum();
        Some((s * dinv).mod_floor(m))
    }

    /// The monic factor `h` of the monic square-free `g` with `N(h) = q`,
    /// if one is found by lifting at a completely split prime.
    pub(crate) fn modular_pullback(&self, g: &FPoly, q: &IntPoly, deg: usize) -> Option<FPoly> {
        if self.depth() == 0 || !g.last()?.is_one() {
            return None;
        }
        let n = self.degree();
        let coef_bits = g
            .iter()
            .flat_map(|c| c.num.iter().chain(std::iter::once(&c.den)))
            .map(|x| x.bits())
            .max()
            .unwrap_or(1);
        let mut tried = 0;
        for p in primes_in(1000, u64::MAX) {
            tried += 1;
            if tried > 3000 {
                return None;
            }
            let pb = BigInt::from(p);
            if g.iter().any(|c| c.den.is_multiple_of(&pb)) || q.lc().is_multiple_of(&pb) {
                continue;
            }
            let Some(embs) = split_embeddings(self, p) else {
                continue;
            };
            let pf = PrimeField::new(p).ok()?;
            let qp: Vec<u64> = q.coeffs().iter().map(|c| reduce_int(c, p)).collect();
            // factor images mod p at each embedding
            let mut mods = Vec::with_capacity(n);
            let mut ok = true;
            for e in &embs {
                let monos: Vec<BigInt> = monomials_mod(self, self.depth(), e, p)
                    .into_iter()
                    .map(BigInt::from)
                    .collect();
                let gp: Vec<u64> = g
                    .iter()
                    .map(|c| self.eval_at(c, &monos, &pb).map(|v| v.try_into().unwrap()))
                    .collect::<Option<Vec<u64>>>()?;
                let h = modp::poly_gcd(&pf, &gp, &qp);
                if h.len() != deg + 1 {
                    ok = false;
                    break;
                }
                let (c, r) = modp::poly_divrem(&pf, &gp, &h);
                debug_assert!(r.is_empty());
                if modp::poly_gcd(&pf, &h, &c).len() != 1 {
                    ok = false;
                    break;
                }
                mods.push((h, c));
            }
            if !ok {
                continue;
            }
            let mut k = 1u32;
            while (p as f64).log2() * f64::from(k) < (2 * coef_bits + 64) as f64 {
                k *= 2;
            }
            while k <= 1 << 16 {
                let m = pb.pow(k);
                if let Some(h) = self.lift_and_reconstruct(g, &embs, &mods, &pf, k, &m) {
                    if self.poly_rem(g, &h).is_empty() {
                        return Some(h);
                    }
                }
                k *= 2;
            }
            return None;
        }
        None
    }

    fn lift_and_reconstruct(
        &self,
        g: &FPoly,
        embs: &[Vec<u64>],
        mods: &[(Vec<u64>, Vec<u64>)],
        pf: &PrimeField,
        k: u32,
        m: &BigInt,
    ) -> Option<FPoly> {
        let n = self.degree();
        let deg = mods[0].0.len() - 1;
        let mut matrix = Vec::with_capacity(n);
        let mut images: Vec<Vec<BigInt>> = Vec::with_capacity(n);
        for (e, (h, c)) in embs.iter().zip(mods) {
            let lifted = lift_embedding(self, e, m);
            let monos = monomials_big(self, self.depth(), &lifted, m);
            let gm: Vec<BigInt> = g
                .iter()
                .map(|c| self.eval_at(c, &monos, m))
                .collect::<Option<_>>()?;
            let (hl, _) = lift_pair(&gm, h, c, pf, k);
            let mut hl: Vec<BigInt> = hl.iter().map(|x| x.mod_floor(m)).collect();
            hl.resize(deg + 1, BigInt::zero());
            images.push(hl);
            matrix.push(monos);
        }
        let inv = mat_inv(&matrix, m)?;
        let mut out = Vec::with_capacity(deg + 1);
        #[allow(clippy::needless_range_loop)]
        for j in 0..deg {
            let coords = (0..n)
                .map(|b| {
                    let s: BigInt = (0..n).map(|s| &inv[b][s] * &images[s][j]).sum();
                    rational_reconstruct(&s.mod_floor(m), m)
                })
                .collect::<Option<Vec<_>>>()?;
            out.push(AlgElem::from_rationals(&coords));
        }
        out.push(self.one());
        Some(out)
    }
}
