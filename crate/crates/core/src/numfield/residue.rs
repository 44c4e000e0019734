//! Splitting of a prime in a tower: reduce level by level, branching over
//! the irreducible factors of each relative polynomial.

use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::elem::AlgElem;
use super::field::NumberField;
use crate::arith::modp::{self, poly_mul, poly_rem, reduce_int};
use crate::arith::{ExtField, FiniteField, PrimeField};
use crate::error::{Error, Result};

/// A residue field together with the images of the stored generators.
#[derive(Clone, Debug)]
pub struct Branch {
    pub field: ExtField,
    pub images: Vec<Vec<u64>>,
}

/// `F_p` as a degree-one extension.
pub fn prime_field_as_ext(p: u64) -> Result<ExtField> {
    ExtField::new(p, vec![0, 1])
}

/// Image of an element with `p`-integral coordinates.
fn reduce_elem(f: &ExtField, monos: &[Vec<u64>], a: &AlgElem) -> Result<Vec<u64>> {
    let p = f.characteristic();
    let dinv = f
        .base()
        .inv(&reduce_int(&a.den, p))
        .ok_or(Error::BadPrime(p))?;
    let mut acc = f.zero();
    for (c, m) in a.num.iter().zip(monos) {
        let c = reduce_int(c, p);
        if c != 0 {
            acc = f.add(&acc, &f.mul(&f.elem_u64(c), m));
        }
    }
    Ok(f.mul(&acc, &f.elem_u64(dinv)))
}

/// Images of the monomial basis of the first `depth` levels.
fn monomials(field: &NumberField, depth: usize, br: &Branch) -> Vec<Vec<u64>> {
    let f = &br.field;
    let mut monos = vec![f.one()];
    for k in 0..depth {
        let d = field.levels[k].deg;
        let mut next = Vec::with_capacity(monos.len() * d);
        let mut pw = f.one();
        for _ in 0..d {
            next.extend(monos.iter().map(|m| f.mul(m, &pw)));
            pw = f.mul(&pw, &br.images[k]);
        }
        monos = next;
    }
    monos
}

fn mat_inv_mod(p: u64, m: &[Vec<u64>]) -> Option<Vec<Vec<u64>>> {
    let pf = PrimeField::new(p).ok()?;
    let n = m.len();
    let mut a: Vec<Vec<u64>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| u64::from(i == j)));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| a[r][col] != 0)?;
        a.swap(col, piv);
        let inv = pf.inv(&a[col][col])?;
        for x in a[col].iter_mut() {
            *x = pf.mul(x, &inv);
        }
        for r in 0..n {
            if r != col && a[r][col] != 0 {
                let c = a[r][col];
                #[allow(clippy::needless_range_loop)]
                for j in 0..2 * n {
                    let t = pf.mul(&c, &a[col][j]);
                    a[r][j] = pf.sub(&a[r][j], &t);
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// `F[y]/(g)` for an irreducible `g` over `F`, rewritten as a single
/// extension of the prime field. Returns the field and the images of
/// `t` (generator of `F`) and `y`.
fn extend(
    f: &ExtField,
    g: &[Vec<u64>],
    rng: &mut ChaCha8Rng,
) -> Result<(ExtField, Vec<u64>, Vec<u64>)> {
    let p = f.characteristic();
    let a = f.k();
    let e = g.len() - 1;
    let n = a * e;
    let flat = |x: &[Vec<u64>]| -> Vec<u64> {
        let mut v = vec![0u64; n];
        for (j, c) in x.iter().enumerate() {
            for (i, ci) in c.iter().enumerate() {
                v[i + a * j] = *ci;
            }
        }
        v
    };
    let emul = |x: &[Vec<u64>], y: &[Vec<u64>]| -> Vec<Vec<u64>> {
        let mut r = poly_rem(f, &poly_mul(f, x, y), g);
        r.resize(e, f.zero());
        r
    };
    let mut t_el = vec![f.zero(); e];
    t_el[0] = f.generator();
    let mut y_el = vec![f.zero(); e];
    if e > 1 {
        y_el[1] = f.one();
    } else {
        // g = y + g0
        y_el[0] = f.neg(&g[0]);
    }
    for attempt in 0..(p as usize + 64) {
        let z: Vec<Vec<u64>> = if attempt < p as usize {
            let c = f.elem_u64(attempt as u64);
            (0..e)
                .map(|j| f.add(&y_el[j], &f.mul(&c, &t_el[j])))
                .collect()
        } else {
            (0..e).map(|_| f.random(rng)).collect()
        };
        let mut rows = Vec::with_capacity(n + 1);
        let mut pw = vec![f.zero(); e];
        pw[0] = f.one();
        for _ in 0..=n {
            rows.push(flat(&pw));
            pw = emul(&pw, &z);
        }
        let Some(inv) = mat_inv_mod(p, &rows[..n]) else {
            continue;
        };
        // coordinates of w in the basis z^0..z^{n-1}: w · inv
        let pf = f.base();
        let coords = |w: &[u64]| -> Vec<u64> {
            (0..n)
                .map(|j| {
                    let mut s = 0u64;
                    for (i, wi) in w.iter().enumerate() {
                        if *wi != 0 {
                            s = pf.add(&s, &pf.mul(wi, &inv[i][j]));
                        }
                    }
                    s
                })
                .collect()
        };
        let zn = coords(&rows[n]);
        let mut modulus: Vec<u64> = zn.iter().map(|c| pf.neg(c)).collect();
        modulus.push(1);
        let ef = ExtField::new_unchecked(*pf, modulus);
        let t_img = coords(&flat(&t_el));
        let y_img = coords(&flat(&y_el));
        return Ok((ef, t_img, y_img));
    }
    Err(Error::Invariant("no primitive element for residue field".into()))
}

/// Evaluate an element of `F = F_p[t]/(m)` at `t = timg` in a larger field.
fn embed(big: &ExtField, x: &[u64], timg: &Vec<u64>) -> Vec<u64> {
    let mut acc = big.zero();
    for c in x.iter().rev() {
        acc = big.add(&big.mul(&acc, timg), &big.elem_u64(*c));
    }
    acc
}

impl NumberField {
    /// Residue degrees over a prime of level `start` of all primes of the top
    /// field above it. The prime below is given by its residue field and
    /// the images of the first `start` generators. Errors with `BadPrime`
    /// when some relative polynomial is not square-free modulo the prime.
    pub fn residue_degrees_from(&self, start: usize, base: Branch) -> Result<Vec<usize>> {
        self.residue_degrees_seeded(start, base, 0)
    }

    /// As [`Self::residue_degrees_from`], with the seed of the randomized
    /// equal-degree splitting mixed into the per-prime PRNG.
    pub fn residue_degrees_seeded(&self, start: usize, base: Branch, seed: u64) -> Result<Vec<usize>> {
        let base_deg = base.field.k();
        let branches = self.branch_from(start, base, seed)?;
        let mut out: Vec<usize> = branches.iter().map(|b| b.field.k() / base_deg).collect();
        out.sort_unstable();
        Ok(out)
    }

    fn branch_from(&self, start: usize, base: Branch, seed: u64) -> Result<Vec<Branch>> {
        let p = base.field.characteristic();
        let mut rng = ChaCha8Rng::seed_from_u64(p ^ seed.rotate_left(32));
        let mut branches = vec![base];
        for k in start..self.depth() {
            let lv = &self.levels[k];
            let mut next = Vec::new();
            for br in branches {
                let monos = monomials(self, k, &br);
                let f = &br.field;
                let red = lv
                    .poly
                    .iter()
                    .map(|c| reduce_elem(f, &monos, &AlgElem::from_parts(c.clone(), 1.into())))
                    .collect::<Result<Vec<_>>>()?;
                for (g, m) in modp::factor_mod_q(f, &red, &mut rng)? {
                    if m > 1 {
                        return Err(Error::BadPrime(p));
                    }
                    if g.len() == 2 {
                        let mut images = br.images.clone();
                        images.push(f.neg(&g[0]));
                        next.push(Branch {
                            field: f.clone(),
                            images,
                        });
                    } else {
                        let (ef, timg, yimg) = extend(f, &g, &mut rng)?;
                        let mut images: Vec<Vec<u64>> =
                            br.images.iter().map(|x| embed(&ef, x, &timg)).collect();
                        images.push(yimg);
                        next.push(Branch { field: ef, images });
                    }
                }
            }
            branches = next;
        }
        Ok(branches)
    }

    /// Residue degrees over the degree-one prime `(p, θ_1 - r)` of level 1.
    pub fn residue_degrees(&self, p: u64, r: u64) -> Result<Vec<usize>> {
        self.residue_degrees_with_seed(p, r, 0)
    }

    pub fn residue_degrees_with_seed(&self, p: u64, r: u64, seed: u64) -> Result<Vec<usize>> {
        if self.depth() == 0 {
            return Err(Error::InvalidInput("tower has no first level".into()));
        }
        let f = prime_field_as_ext(p)?;
        let base = Branch {
            images: vec![f.elem_u64(r)],
            field: f,
        };
        // θ_1 - r must divide the first relative polynomial mod p.
        let monos = monomials(self, 0, &base);
        let pol: Vec<u64> = self.levels[0]
            .poly
            .iter()
            .map(|c| reduce_elem(&base.field, &monos, &AlgElem::from_parts(c.clone(), 1.into())))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .map(|v| v[0])
            .collect();
        let pf = PrimeField::new(p)?;
        if modp::poly_eval(&pf, &pol, &r) != 0 {
            return Err(Error::InvalidInput(format!("{r} is not a root mod {p}")));
        }
        self.residue_degrees_seeded(1, base, seed)
    }

    /// Matrix of multiplication by `a` over level `j`, in the monomial basis
    /// of the top field over `L_j`.
    pub fn mult_matrix_over(&self, a: &AlgElem, j: usize) -> Vec<Vec<AlgElem>> {
        let s = if j == 0 { 1 } else { self.levels[j - 1].dim };
        let n = self.degree() / s;
        let mut cols = Vec::with_capacity(n);
        for m in 0..n {
            let mut num = vec![BigInt::from(0); self.degree()];
            num[m * s] = BigInt::from(1);
            let b = AlgElem::from_parts(num, BigInt::from(1));
            let ab = self.mul(a, &b);
            cols.push(
                ab.num
                    .chunks(s)
                    .map(|c| AlgElem::from_parts(c.to_vec(), ab.den.clone()))
                    .collect::<Vec<_>>(),
            );
        }
        (0..n)
            .map(|r| (0..n).map(|c| cols[c][r].clone()).collect())
            .collect()
    }

    /// Characteristic polynomial of `a` over level `j`.
    pub fn charpoly_over(&self, a: &AlgElem, j: usize) -> Vec<AlgElem> {
        let m = self.mult_matrix_over(a, j);
        super::field::leverrier(&self.truncate(j), &m)
    }

    /// Sum of the stored generators, a candidate primitive element.
    pub fn generator_sum(&self) -> AlgElem {
        (1..=self.depth()).fold(self.zero(), |acc, k| acc.add(&self.stored_gen(k)))
    }
}

impl NumberField {
    /// Image of `a` in the residue field of a branch.
    pub fn reduce_at(&self, a: &AlgElem, br: &Branch) -> Result<Vec<u64>> {
        let monos = monomials(self, self.depth(), br);
        reduce_elem(&br.field, &monos, a)
    }

    /// Branches (residue fields with generator images) of all primes above `p`
    /// whose restriction to level 1 is `(p, θ_1 - r)`.
    pub fn primes_above(&self, p: u64, r: u64) -> Result<Vec<Branch>> {
        let f = prime_field_as_ext(p)?;
        let base = Branch {
            images: vec![f.elem_u64(r)],
            field: f,
        };
        self.branch_from(1, base, 0)
    }
}
