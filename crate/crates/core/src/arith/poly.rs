//! Dense univariate polynomials over ℤ and ℚ.
//!
//! Coefficients are stored in ascending degree order and the vector never
//! carries trailing zeros, so the zero polynomial is the empty vector.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct RatPoly {
    coeffs: Vec<BigRational>,
}

fn trim<T: Zero>(v: &mut Vec<T>) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        trim(&mut coeffs);
        IntPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    /// `x - a`
    pub fn linear_root(a: BigInt) -> Self {
        Self::new(vec![-a, BigInt::one()])
    }

    pub fn monomial(c: BigInt, deg: usize) -> Self {
        let mut v = vec![BigInt::zero(); deg + 1];
        v[deg] = c;
        Self::new(v)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn lc(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(|c| c.is_one())
    }

    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = super::gcd::gcd(&g, c);
            if g.is_one() {
                break;
            }
        }
        if self.lc().is_negative() {
            -g
        } else {
            g
        }
    }

    /// Primitive part with positive leading coefficient.
    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let c = self.content();
        Self::new(self.coeffs.iter().map(|x| x / &c).collect())
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn div_scalar_exact(&self, k: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|c| c / k).collect())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_rat(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + BigRational::from_integer(c.clone());
        }
        acc
    }

    /// `f(-x)`
    pub fn negate_variable(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() })
                .collect(),
        )
    }

    /// `f(x + a)` by Horner's rule over polynomials.
    pub fn shift(&self, a: &BigInt) -> Self {
        let mut out = IntPoly::zero();
        let lin = IntPoly::new(vec![a.clone(), BigInt::one()]);
        for c in self.coeffs.iter().rev() {
            out = &(&out * &lin) + &IntPoly::constant(c.clone());
        }
        out
    }

    /// Pseudo-remainder `lc(g)^(deg f - deg g + 1) f mod g`.
    pub fn pseudo_rem(&self, g: &IntPoly) -> IntPoly {
        assert!(!g.is_zero(), "pseudo_rem by zero polynomial");
        let dg = g.deg();
        if self.is_zero() || self.deg() < dg {
            return self.clone();
        }
        let lc = g.lc();
        let mut r = self.coeffs.clone();
        let mut e = self.deg() - dg + 1;
        while r.len() > dg && !r.is_empty() {
            let dr = r.len() - 1;
            let lr = r[dr].clone();
            for c in r.iter_mut() {
                *c *= &lc;
            }
            for (i, gc) in g.coeffs.iter().enumerate() {
                r[dr - dg + i] -= &lr * gc;
            }
            trim(&mut r);
            e -= 1;
        }
        let f = num_traits::pow(lc, e);
        IntPoly::new(r.into_iter().map(|c| c * &f).collect())
    }

    /// Exact division; `None` if `g` does not divide `self` in ℤ[x].
    pub fn div_exact(&self, g: &IntPoly) -> Option<IntPoly> {
        assert!(!g.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Some(IntPoly::zero());
        }
        if self.deg() < g.deg() {
            return None;
        }
        let dg = g.deg();
        let lc = g.lc();
        let mut r = self.coeffs.clone();
        let mut q = vec![BigInt::zero(); self.deg() - dg + 1];
        for k in (0..q.len()).rev() {
            let top = r[k + dg].clone();
            if top.is_zero() {
                continue;
            }
            let (qk, rem) = top.div_rem(&lc);
            if !rem.is_zero() {
                return None;
            }
            for (i, gc) in g.coeffs.iter().enumerate() {
                r[k + i] -= &qk * gc;
            }
            q[k] = qk;
        }
        if r.iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(IntPoly::new(q))
    }

    pub fn to_rat(&self) -> RatPoly {
        RatPoly::new(
            self.coeffs
                .iter()
                .map(|c| BigRational::from_integer(c.clone()))
                .collect(),
        )
    }

    /// Largest absolute value of a coefficient.
    pub fn max_norm(&self) -> BigInt {
        self.coeffs.iter().map(|c| c.abs()).max().unwrap_or_default()
    }

    pub fn pow(&self, e: u32) -> IntPoly {
        let mut acc = IntPoly::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }
}

impl RatPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        trim(&mut coeffs);
        RatPoly { coeffs }
    }

    pub fn zero() -> Self {
        RatPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::new(vec![BigRational::one()])
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(
            coeffs
                .iter()
                .map(|&c| BigRational::from_integer(c.into()))
                .collect(),
        )
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn lc(&self) -> BigRational {
        self.coeffs.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn monic(&self) -> RatPoly {
        if self.is_zero() {
            return self.clone();
        }
        let l = self.lc();
        RatPoly::new(self.coeffs.iter().map(|c| c / &l).collect())
    }

    /// Split into `(denominator scale, primitive integer polynomial)` with
    /// `self = c * p` for a rational `c`.
    pub fn to_primitive_int(&self) -> (BigRational, IntPoly) {
        if self.is_zero() {
            return (BigRational::one(), IntPoly::zero());
        }
        let mut den = BigInt::one();
        for c in &self.coeffs {
            den = den.lcm(c.denom());
        }
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * BigRational::from_integer(den.clone())).to_integer())
            .collect();
        let p = IntPoly::new(ints);
        let cont = p.content();
        let prim = p.div_scalar_exact(&cont);
        (BigRational::new(cont, den), prim)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from_integer(i.into()))
                .collect(),
        )
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn div_rem(&self, g: &RatPoly) -> (RatPoly, RatPoly) {
        assert!(!g.is_zero(), "division by zero polynomial");
        if self.deg() < g.deg() || self.is_zero() {
            return (RatPoly::zero(), self.clone());
        }
        let dg = g.deg();
        let inv = g.lc().recip();
        let mut r = self.coeffs.clone();
        let mut q = vec![BigRational::zero(); self.deg() - dg + 1];
        for k in (0..q.len()).rev() {
            let t = &r[k + dg] * &inv;
            if t.is_zero() {
                continue;
            }
            for (i, gc) in g.coeffs.iter().enumerate() {
                r[k + i] -= &t * gc;
            }
            q[k] = t;
        }
        (RatPoly::new(q), RatPoly::new(r))
    }

    /// Monic gcd over ℚ, computed through primitive integer remainders.
    pub fn gcd(&self, g: &RatPoly) -> RatPoly {
        let (_, a) = self.to_primitive_int();
        let (_, b) = g.to_primitive_int();
        int_gcd(&a, &b).to_rat().monic()
    }
}

/// Primitive gcd in ℤ[x] via the primitive pseudo-remainder sequence.
pub fn int_gcd(a: &IntPoly, b: &IntPoly) -> IntPoly {
    let mut a = a.primitive_part();
    let mut b = b.primitive_part();
    if a.is_zero() {
        return b;
    }
    if b.is_zero() {
        return a;
    }
    if a.deg() < b.deg() {
        std::mem::swap(&mut a, &mut b);
    }
    while !b.is_zero() {
        let r = a.pseudo_rem(&b);
        a = b;
        b = r.primitive_part();
    }
    a.primitive_part()
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, self.coeffs.iter().map(|c| c.to_string()).collect())
    }
}

impl fmt::Debug for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, self.coeffs.iter().map(|c| c.to_string()).collect())
    }
}

fn write_terms(f: &mut fmt::Formatter<'_>, coeffs: Vec<String>) -> fmt::Result {
    if coeffs.is_empty() {
        return write!(f, "0");
    }
    let mut first = true;
    for (i, c) in coeffs.iter().enumerate().rev() {
        if c == "0" {
            continue;
        }
        let (neg, mag) = match c.strip_prefix('-') {
            Some(m) => (true, m),
            None => (false, c.as_str()),
        };
        if first {
            if neg {
                write!(f, "-")?;
            }
        } else {
            write!(f, " {} ", if neg { '-' } else { '+' })?;
        }
        first = false;
        let show_coeff = i == 0 || mag != "1";
        if show_coeff {
            if mag.contains('/') && i > 0 {
                write!(f, "({mag})")?;
            } else {
                write!(f, "{mag}")?;
            }
        }
        match i {
            0 => {}
            1 => write!(f, "{}x", if show_coeff { "*" } else { "" })?,
            _ => write!(f, "{}x^{i}", if show_coeff { "*" } else { "" })?,
        }
    }
    Ok(())
}

macro_rules! ring_ops {
    ($t:ident, $c:ty) => {
        impl Add for &$t {
            type Output = $t;
            fn add(self, o: &$t) -> $t {
                let n = self.coeffs.len().max(o.coeffs.len());
                let mut v: Vec<$c> = Vec::with_capacity(n);
                for i in 0..n {
                    let a = self.coeffs.get(i);
                    let b = o.coeffs.get(i);
                    v.push(match (a, b) {
                        (Some(a), Some(b)) => a + b,
                        (Some(a), None) => a.clone(),
                        (None, Some(b)) => b.clone(),
                        (None, None) => unreachable!(),
                    });
                }
                $t::new(v)
            }
        }
        impl Sub for &$t {
            type Output = $t;
            fn sub(self, o: &$t) -> $t {
                self + &(-o)
            }
        }
        impl Neg for &$t {
            type Output = $t;
            fn neg(self) -> $t {
                $t::new(self.coeffs.iter().map(|c| -c).collect())
            }
        }
        impl Mul for &$t {
            type Output = $t;
            fn mul(self, o: &$t) -> $t {
                if self.is_zero() || o.is_zero() {
                    return $t::zero();
                }
                let mut v: Vec<$c> = vec![<$c>::zero(); self.coeffs.len() + o.coeffs.len() - 1];
                for (i, a) in self.coeffs.iter().enumerate() {
                    if a.is_zero() {
                        continue;
                    }
                    for (j, b) in o.coeffs.iter().enumerate() {
                        v[i + j] += a * b;
                    }
                }
                $t::new(v)
            }
        }
        impl Add for $t {
            type Output = $t;
            fn add(self, o: $t) -> $t {
                &self + &o
            }
        }
        impl Sub for $t {
            type Output = $t;
            fn sub(self, o: $t) -> $t {
                &self - &o
            }
        }
        impl Mul for $t {
            type Output = $t;
            fn mul(self, o: $t) -> $t {
                &self * &o
            }
        }
        impl Neg for $t {
            type Output = $t;
            fn neg(self) -> $t {
                -&self
            }
        }
    };
}

ring_ops!(IntPoly, BigInt);
ring_ops!(RatPoly, BigRational);

/// Square-free decomposition over ℚ (Yun). Returns `(g_i, i)` with
/// `f = c * prod g_i^i`, each `g_i` primitive, square-free and pairwise coprime.
pub fn squarefree_decomposition(f: &IntPoly) -> Result<Vec<(IntPoly, usize)>> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let f = f.primitive_part();
    if f.deg() == 0 {
        return Ok(Vec::new());
    }
    if crate::arith::modp::is_squarefree_mod_some_prime(&f) {
        return Ok(vec![(f, 1)]);
    }
    let mut out = Vec::new();
    let fq = f.to_rat();
    let g = fq.gcd(&fq.derivative());
    let mut bq = fq.div_rem(&g).0.monic();
    let mut cq = fq.derivative().div_rem(&g).0;
    let mut dq = &cq - &bq.derivative();
    let mut i = 1;
    while bq.deg() > 0 {
        let a = bq.gcd(&dq);
        if a.deg() > 0 {
            let (_, ai) = a.to_primitive_int();
            out.push((ai, i));
        }
        bq = bq.div_rem(&a).0;
        cq = dq.div_rem(&a).0;
        dq = &cq - &bq.derivative();
        i += 1;
    }
    Ok(out)
}
