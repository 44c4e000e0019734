//! Which prime of `K` above `ℓ` kills the torsion points with a given `x`.
//!
//! At a prime `𝔓` of degree one above a principal prime `(π)` of `K`, the
//! Frobenius of the reduced curve is `[ε π]` with `ε = ±1` read off from the
//! trace `a_p = 2 ε u` (`π = u + v √d`). On a point `P` of `E[𝔩]`, `π` acts as
//! the scalar `π mod 𝔩`, while Frobenius sends `(x, y)` to `(x, χ(y^2) y)`.

use num_integer::Roots;

use super::CurveModel;
use crate::arith::modp::{is_prime_u64, pow_mod};
use crate::arith::FiniteField;
use crate::error::{Error, Result};
use crate::numfield::AlgElem;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelEvidence {
    /// Rational primes whose degree-one primes gave a distinguishing test.
    pub primes: Vec<u64>,
    /// Whether every test matched `P ∈ E[(ℓ, √d - c)]`.
    pub consistent: bool,
}

fn legendre(a: u64, p: u64) -> i64 {
    match pow_mod(a % p, (p - 1) / 2, p) {
        0 => 0,
        1 => 1,
        _ => -1,
    }
}

/// Tests whether the points with `x`-coordinate `x` on the short model of `e`
/// lie in `E[𝔩]` for `𝔩 = (ℓ, √d - c)`. Level 1 of the curve's field must be
/// `ℚ(√d)` with generator `√d`.
pub fn kernel_test(
    e: &CurveModel,
    x: &AlgElem,
    ell: u64,
    c: i64,
    samples: usize,
) -> Result<KernelEvidence> {
    let field = e.field();
    if field.depth() == 0 {
        return Err(Error::InvalidInput("curve is not defined over an extension of K".into()));
    }
    let d = field
        .level1_radicand()
        .ok_or_else(|| Error::InvalidInput("level 1 is not of the form x^2 - d".into()))?;
    let (a, b) = e.short_coeffs();
    let alpha = e.short_rhs(x);
    let mut primes = Vec::new();
    let mut verdicts = Vec::new();
    let mut p = 5u64;
    while verdicts.len() < samples {
        p += 1;
        if p > 100_000 {
            return Err(Error::Invariant("kernel test ran out of primes".into()));
        }
        if !is_prime_u64(p) || (d.unsigned_abs() % p == 0) || p == ell {
            continue;
        }
        let dm = d.rem_euclid(p as i64) as u64;
        let roots: Vec<u64> = (0..p).filter(|r| (r * r) % p == dm).collect();
        for r in roots {
            // π = u + v √d with π ≡ 0 mod (p, √d - r) and u^2 - d v^2 = p.
            let mut found = None;
            let mut v = 1i64;
            while -d * v * v <= p as i64 {
                let rest = p as i64 + d * v * v;
                let u = rest.sqrt();
                if u * u == rest {
                    for (uu, vv) in [(u, v), (-u, v)] {
                        if (uu + vv * r as i64).rem_euclid(p as i64) == 0 {
                            found = Some((uu, vv));
                        }
                    }
                }
                v += 1;
            }
            let Some((u, v)) = found else { continue };
            if u == 0 || v.rem_euclid(ell as i64) == 0 {
                continue;
            }
            let Ok(branches) = field.primes_above(p, r) else {
                continue;
            };
            for br in branches.iter().filter(|b| b.field.k() == 1) {
                let red = |t: &AlgElem| field.reduce_at(t, br).map(|v| v[0]);
                let (Ok(ar), Ok(brr), Ok(al)) = (red(&a), red(&b), red(&alpha)) else {
                    continue;
                };
                let f = br.field.base();
                let disc = f.add(
                    &f.mul(&f.elem_u64(4), &f.mul(&ar, &f.mul(&ar, &ar))),
                    &f.mul(&f.elem_u64(27), &f.mul(&brr, &brr)),
                );
                if disc == 0 || al == 0 {
                    continue;
                }
                let mut ap = 0i64;
                for t in 0..p {
                    let rhs = f.add(&f.mul(&t, &f.mul(&t, &t)), &f.add(&f.mul(&ar, &t), &brr));
                    ap -= legendre(rhs, p);
                }
                if ap * ap != 4 * u * u {
                    continue;
                }
                let eps = ap / (2 * u);
                let predicted = (eps * (u + v * c)).rem_euclid(ell as i64);
                let observed = legendre(al, p).rem_euclid(ell as i64);
                verdicts.push(predicted == observed);
                if primes.last() != Some(&p) {
                    primes.push(p);
                }
            }
        }
    }
    let consistent = verdicts.iter().all(|&v| v);
    if !consistent && verdicts.iter().any(|&v| v) {
        return Err(Error::Invariant(
            "Frobenius tests disagree on the kernel".into(),
        ));
    }
    Ok(KernelEvidence { primes, consistent })
}
