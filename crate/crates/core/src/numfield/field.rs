use crate::arith::gcd::lcm;
use std::fmt::Write as _;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::elem::AlgElem;
use crate::error::{Error, Result};

/// One relative extension `L_k = L_{k-1}[θ_k]/(p_k)`.
#[derive(Debug)]
pub(crate) struct Level {
    /// Monic, coefficients in `L_{k-1}` with integer coordinates.
    pub(crate) poly: Vec<Vec<BigInt>>,
    pub(crate) deg: usize,
    pub(crate) dim: usize,
    pub(crate) name: String,
    /// The stored generator is `scale` times a root of the polynomial handed to `adjoin`.
    pub(crate) scale: BigInt,
}

/// A tower `ℚ = L_0 ⊂ L_1 ⊂ ... ⊂ L_n`; the value is the top field `L_n`.
///
/// Elements are coordinate vectors over the monomials
/// `θ_1^{e_1} ⋯ θ_n^{e_n}`, with `e_1` varying fastest.
#[derive(Clone, Debug)]
pub struct NumberField {
    pub(crate) levels: Vec<Arc<Level>>,
}

impl NumberField {
    pub fn rationals() -> Self {
        NumberField { levels: Vec::new() }
    }

    /// `ℚ(√d)` for a non-square integer `d`.
    pub fn quadratic(d: i64, name: &str) -> Result<Self> {
        let q = Self::rationals();
        if d >= 0 && crate::arith::zassenhaus::is_perfect_square(&BigInt::from(d)) {
            return Err(Error::Reducible);
        }
        Ok(q.adjoin_unchecked(&[q.int(-d), q.zero(), q.one()], name))
    }

    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    /// Absolute degree `[L:ℚ]`.
    pub fn degree(&self) -> usize {
        self.levels.last().map_or(1, |l| l.dim)
    }

    /// Degree over the level below.
    pub fn rel_degree(&self) -> usize {
        self.levels.last().map_or(1, |l| l.deg)
    }

    pub fn base(&self) -> NumberField {
        self.truncate(self.depth().saturating_sub(1))
    }

    pub fn truncate(&self, depth: usize) -> NumberField {
        NumberField {
            levels: self.levels[..depth].to_vec(),
        }
    }

    pub fn name(&self) -> &str {
        self.levels.last().map_or("", |l| l.name.as_str())
    }

    /// Whether `other` is one of the levels of this tower (same stored data).
    pub fn contains_field(&self, other: &NumberField) -> bool {
        other.depth() <= self.depth()
            && other
                .levels
                .iter()
                .zip(&self.levels)
                .all(|(a, b)| Arc::ptr_eq(a, b))
    }

    pub fn same_field(&self, other: &NumberField) -> bool {
        self.depth() == other.depth() && self.contains_field(other)
    }

    /// Defining polynomial of the top level, coefficients in the base,
    /// as normalized for the stored generator.
    pub fn rel_poly(&self) -> Vec<AlgElem> {
        let base = self.base();
        match self.levels.last() {
            None => vec![self.zero(), self.one()],
            Some(l) => l
                .poly
                .iter()
                .map(|c| AlgElem::from_parts(c.clone(), BigInt::one()))
                .inspect(|c| {
                    debug_assert_eq!(c.dim(), base.degree());
                })
                .collect(),
        }
    }

    /// `d` when level 1 is `ℚ(√d)` presented by `x^2 - d`.
    pub fn level1_radicand(&self) -> Option<i64> {
        if self.depth() == 0 {
            return None;
        }
        let kp = self.truncate(1).rel_poly();
        if kp.len() != 3 || !kp[1].is_zero() {
            return None;
        }
        kp[0]
            .as_rational()
            .filter(|q| q.is_integer())
            .and_then(|q| i64::try_from(q.to_integer()).ok())
            .map(|x| -x)
    }

    pub fn zero(&self) -> AlgElem {
        AlgElem::zero(self.degree())
    }

    pub fn one(&self) -> AlgElem {
        AlgElem::from_int(&BigInt::one(), self.degree())
    }

    pub fn int(&self, n: i64) -> AlgElem {
        AlgElem::from_int(&BigInt::from(n), self.degree())
    }

    pub fn bigint(&self, n: &BigInt) -> AlgElem {
        AlgElem::from_int(n, self.degree())
    }

    pub fn rat(&self, q: &BigRational) -> AlgElem {
        AlgElem::from_rational(q, self.degree())
    }

    pub fn from_coords(&self, c: &[BigRational]) -> Result<AlgElem> {
        if c.len() != self.degree() {
            return Err(Error::InvalidInput(format!(
                "expected {} coordinates, got {}",
                self.degree(),
                c.len()
            )));
        }
        Ok(AlgElem::from_rationals(c))
    }

    /// Image of an element of a lower level.
    pub fn lift(&self, a: &AlgElem) -> AlgElem {
        a.lift_to(self.degree())
    }

    /// The stored generator `θ_k` of level `k >= 1`, as an element of the top field.
    pub fn stored_gen(&self, k: usize) -> AlgElem {
        let below = if k == 1 { 1 } else { self.levels[k - 2].dim };
        let mut num = vec![BigInt::zero(); self.degree()];
        num[below] = BigInt::one();
        AlgElem::from_parts(num, BigInt::one())
    }

    /// Root of the polynomial used to build level `k`.
    pub fn gen_at(&self, k: usize) -> AlgElem {
        self.stored_gen(k).div_int(&self.levels[k - 1].scale)
    }

    pub fn gen(&self) -> AlgElem {
        self.gen_at(self.depth())
    }

    // -----------------------------------------------------------------------
    // Arithmetic

    fn mul_raw(&self, k: usize, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        if k == 0 {
            return vec![&a[0] * &b[0]];
        }
        let lv = &self.levels[k - 1];
        let d = lv.deg;
        let s = a.len() / d;
        let nz = |v: &[BigInt]| v.iter().any(|x| !x.is_zero());
        let mut c: Vec<Vec<BigInt>> = vec![vec![BigInt::zero(); s]; 2 * d - 1];
        let ablk: Vec<&[BigInt]> = a.chunks(s).collect();
        let bblk: Vec<&[BigInt]> = b.chunks(s).collect();
        let bnz: Vec<bool> = bblk.iter().map(|x| nz(x)).collect();
        for (i, ai) in ablk.iter().enumerate() {
            if !nz(ai) {
                continue;
            }
            for (j, bj) in bblk.iter().enumerate() {
                if !bnz[j] {
                    continue;
                }
                let p = self.mul_raw(k - 1, ai, bj);
                for (x, y) in c[i + j].iter_mut().zip(p) {
                    *x += y;
                }
            }
        }
        for t in (d..2 * d - 1).rev() {
            if !nz(&c[t]) {
                continue;
            }
            let ct = std::mem::take(&mut c[t]);
            for (m, pm) in lv.poly[..d].iter().enumerate() {
                if !nz(pm) {
                    continue;
                }
                let p = self.mul_raw(k - 1, &ct, pm);
                for (x, y) in c[t - d + m].iter_mut().zip(p) {
                    *x -= y;
                }
            }
        }
        c.truncate(d);
        c.into_iter().flatten().collect()
    }

    pub fn mul(&self, a: &AlgElem, b: &AlgElem) -> AlgElem {
        debug_assert_eq!(a.dim(), self.degree());
        debug_assert_eq!(b.dim(), self.degree());
        if a.is_zero() || b.is_zero() {
            return self.zero();
        }
        let num = self.mul_raw(self.depth(), &a.num, &b.num);
        AlgElem::from_parts(num, &a.den * &b.den)
    }

    pub fn pow(&self, a: &AlgElem, mut e: u64) -> AlgElem {
        let mut acc = self.one();
        let mut b = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &b);
            }
            e >>= 1;
            if e > 0 {
                b = self.mul(&b, &b);
            }
        }
        acc
    }

    /// Multiply by the stored top generator.
    fn mul_by_gen(&self, a: &AlgElem) -> AlgElem {
        let lv = self.levels.last().expect("not ℚ");
        let base = self.base();
        let s = base.degree();
        let d = lv.deg;
        let blocks: Vec<AlgElem> = (0..d)
            .map(|i| AlgElem::from_parts(a.num[i * s..(i + 1) * s].to_vec(), a.den.clone()))
            .collect();
        let top = &blocks[d - 1];
        let mut out = Vec::with_capacity(d);
        for i in 0..d {
            let mut v = if i == 0 {
                base.zero()
            } else {
                blocks[i - 1].clone()
            };
            if !top.is_zero() {
                let pc = AlgElem::from_parts(lv.poly[i].clone(), BigInt::one());
                v = v.sub(&base.mul(top, &pc));
            }
            out.push(v);
        }
        self.from_blocks(&out)
    }

    /// Assemble `Σ b_i θ^i` from base-field blocks.
    pub fn from_blocks(&self, blocks: &[AlgElem]) -> AlgElem {
        let den = blocks.iter().fold(BigInt::one(), |l, b| lcm(&l, &b.den));
        let mut num = Vec::with_capacity(self.degree());
        for b in blocks {
            let f = &den / &b.den;
            num.extend(b.num.iter().map(|x| x * &f));
        }
        AlgElem::from_parts(num, den)
    }

    /// Coefficients over the base field.
    pub fn blocks(&self, a: &AlgElem) -> Vec<AlgElem> {
        let s = self.base().degree();
        a.num
            .chunks(s)
            .map(|c| AlgElem::from_parts(c.to_vec(), a.den.clone()))
            .collect()
    }

    /// Characteristic polynomial of `a` over the base field, ascending, monic.
    pub fn rel_charpoly(&self, a: &AlgElem) -> Vec<AlgElem> {
        let base = self.base();
        let Some(lv) = self.levels.last() else {
            return vec![a.neg(), self.one()];
        };
        let d = lv.deg;
        if d == 1 {
            return vec![self.blocks(a)[0].neg(), base.one()];
        }
        if d == 2 {
            let b = self.blocks(a);
            let p0 = AlgElem::from_parts(lv.poly[0].clone(), BigInt::one());
            let p1 = AlgElem::from_parts(lv.poly[1].clone(), BigInt::one());
            let a1p1 = base.mul(&b[1], &p1);
            let tr = b[0].add(&b[0]).sub(&a1p1);
            let nm = base
                .mul(&b[0], &b[0].sub(&a1p1))
                .add(&base.mul(&base.mul(&b[1], &b[1]), &p0));
            return vec![nm, tr.neg(), base.one()];
        }
        // Matrix of multiplication by `a`: column j holds a θ^j.
        let mut cols = Vec::with_capacity(d);
        let mut v = a.clone();
        for j in 0..d {
            cols.push(self.blocks(&v));
            if j + 1 < d {
                v = self.mul_by_gen(&v);
            }
        }
        let m: Vec<Vec<AlgElem>> = (0..d)
            .map(|i| (0..d).map(|j| cols[j][i].clone()).collect())
            .collect();
        leverrier(&base, &m)
    }

    /// `N_{L_n/L_{n-1}}(a)`.
    pub fn rel_norm(&self, a: &AlgElem) -> AlgElem {
        let cp = self.rel_charpoly(a);
        let c0 = cp[0].clone();
        if self.rel_degree() % 2 == 1 {
            c0.neg()
        } else {
            c0
        }
    }

    /// `N_{L/ℚ}(a)`.
    pub fn norm(&self, a: &AlgElem) -> BigRational {
        let mut f = self.clone();
        let mut x = a.clone();
        while f.depth() > 0 {
            x = f.rel_norm(&x);
            f = f.base();
        }
        x.coord(0)
    }

    pub fn trace(&self, a: &AlgElem) -> BigRational {
        let mut f = self.clone();
        let mut x = a.clone();
        while f.depth() > 0 {
            let cp = f.rel_charpoly(&x);
            x = cp[cp.len() - 2].neg();
            f = f.base();
        }
        x.coord(0)
    }

    pub fn inv(&self, a: &AlgElem) -> Option<AlgElem> {
        if a.is_zero() {
            return None;
        }
        if self.depth() == 0 {
            let q = a.coord(0).recip();
            return Some(self.rat(&q));
        }
        let base = self.base();
        if self.rel_degree() == 2 {
            // (a0 + a1 t)(a0 - a1 c1 - a1 t) = a0^2 - c1 a0 a1 + c0 a1^2
            let m = self.rel_poly();
            let (c0, c1) = (&m[0], &m[1]);
            let b = self.blocks(a);
            let (a0, a1) = (&b[0], &b[1]);
            let n = base
                .mul(a0, &a0.sub(&base.mul(c1, a1)))
                .add(&base.mul(c0, &base.mul(a1, a1)));
            let ninv = base.inv(&n)?;
            let b0 = base.mul(&a0.sub(&base.mul(a1, c1)), &ninv);
            let b1 = base.mul(&a1.neg(), &ninv);
            return Some(self.from_blocks(&[b0, b1]));
        }
        // Cayley-Hamilton: a (a^{d-1} + c_{d-1} a^{d-2} + ... + c_1) = -c_0
        let cp = self.rel_charpoly(a);
        let d = cp.len() - 1;
        let mut acc = self.one();
        for i in (1..d).rev() {
            acc = self.mul(&acc, a).add(&self.lift(&cp[i]));
        }
        let c0inv = base.inv(&cp[0])?;
        Some(self.mul(&acc, &self.lift(&c0inv.neg())))
    }

    pub fn div(&self, a: &AlgElem, b: &AlgElem) -> Option<AlgElem> {
        Some(self.mul(a, &self.inv(b)?))
    }

    // -----------------------------------------------------------------------
    // Construction

    /// Adjoin a root of `f` (ascending coefficients in this field) without
    /// checking irreducibility. The generator is rescaled so the stored
    /// defining polynomial has integral coordinates.
    pub fn adjoin_unchecked(&self, f: &[AlgElem], name: &str) -> NumberField {
        assert!(f.len() >= 2, "adjoining a root of a constant");
        let lc = f.last().unwrap();
        let lcinv = self.inv(lc).expect("nonzero leading coefficient");
        let monic: Vec<AlgElem> = f.iter().map(|c| self.mul(c, &lcinv)).collect();
        let d = monic.len() - 1;
        let scale = monic
            .iter()
            .fold(BigInt::one(), |l, c| lcm(&l, &c.den));
        // y = scale x: coefficient of y^i picks up scale^{d-i}.
        let mut poly = Vec::with_capacity(d + 1);
        let mut sp = BigInt::one();
        let mut scaled = vec![Vec::new(); d + 1];
        for i in (0..=d).rev() {
            let c = monic[i].scale_int(&sp);
            debug_assert!(c.den.is_one());
            scaled[i] = c.num;
            sp *= &scale;
        }
        poly.extend(scaled);
        let mut levels = self.levels.clone();
        levels.push(Arc::new(Level {
            poly,
            deg: d,
            dim: self.degree() * d,
            name: name.to_string(),
            scale,
        }));
        NumberField { levels }
    }

    /// Adjoin a root of an irreducible polynomial.
    pub fn adjoin(&self, f: &[AlgElem], name: &str) -> Result<NumberField> {
        let f = self.poly_trim(f.to_vec());
        if f.len() < 2 {
            return Err(Error::ZeroPolynomial);
        }
        if f.len() > 2 && !self.is_irreducible(&f)? {
            return Err(Error::Reducible);
        }
        Ok(self.adjoin_unchecked(&f, name))
    }

    // -----------------------------------------------------------------------
    // Display

    fn monomial(&self, mut i: usize) -> String {
        let mut parts = Vec::new();
        for lv in &self.levels {
            let e = i % lv.deg;
            i /= lv.deg;
            match e {
                0 => {}
                1 => parts.push(lv.name.clone()),
                _ => parts.push(format!("{}^{}", lv.name, e)),
            }
        }
        parts.join("*")
    }

    pub fn format(&self, a: &AlgElem) -> String {
        let mut out = String::new();
        for (i, c) in a.coords().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let m = self.monomial(i);
            let neg = c.is_negative();
            let abs = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if m.is_empty() {
                let _ = write!(out, "{abs}");
            } else if abs.is_one() {
                out.push_str(&m);
            } else {
                let _ = write!(out, "{abs}*{m}");
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

/// Characteristic polynomial by Faddeev–LeVerrier (the field has characteristic 0).
pub(crate) fn leverrier(f: &NumberField, m: &[Vec<AlgElem>]) -> Vec<AlgElem> {
    let n = m.len();
    let matmul = |a: &[Vec<AlgElem>], b: &[Vec<AlgElem>]| -> Vec<Vec<AlgElem>> {
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let mut s = f.zero();
                        for k in 0..n {
                            if !a[i][k].is_zero() && !b[k][j].is_zero() {
                                s = s.add(&f.mul(&a[i][k], &b[k][j]));
                            }
                        }
                        s
                    })
                    .collect()
            })
            .collect()
    };
    let mut c = vec![f.zero(); n + 1];
    c[n] = f.one();
    // M_1 = I, c_{n-1} = -tr(A)
    let mut mk: Vec<Vec<AlgElem>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { f.one() } else { f.zero() }).collect())
        .collect();
    for k in 1..=n {
        let am = matmul(m, &mk);
        let mut tr = f.zero();
        for (i, row) in am.iter().enumerate() {
            tr = tr.add(&row[i]);
        }
        c[n - k] = tr.div_int(&BigInt::from(k)).neg();
        if k < n {
            mk = am;
            for (i, row) in mk.iter_mut().enumerate() {
                row[i] = row[i].add(&c[n - k]);
            }
        }
    }
    c
}
