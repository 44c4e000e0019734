//! Norms of polynomials and Trager factorization over tower fields.

use crate::arith::gcd::lcm;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::elem::AlgElem;
use super::field::NumberField;
use super::poly::FPoly;
use crate::arith::modp::is_squarefree_mod_some_prime;
use crate::arith::{factor_over_q, IntPoly, RatPoly};
use crate::error::{Error, Result};

/// Interpolate through `(x0 + t, ys[t])`, `t = 0..ys.len()`.
fn interpolate_equispaced(x0: i64, ys: &[BigRational]) -> RatPoly {
    let m = ys.len();
    // Forward differences.
    let mut diffs = Vec::with_capacity(m);
    let mut row = ys.to_vec();
    for _ in 0..m {
        diffs.push(row[0].clone());
        row = row.windows(2).map(|w| &w[1] - &w[0]).collect();
    }
    // Σ Δ^k y_0 · (x - x0)(x - x0 - 1)⋯(x - x0 - k + 1) / k!
    let mut out = vec![BigRational::zero(); m];
    let mut basis = vec![BigRational::one()];
    for (k, d) in diffs.iter().enumerate() {
        if !d.is_zero() {
            for (o, b) in out.iter_mut().zip(&basis) {
                *o += d * b;
            }
        }
        if k + 1 == m {
            break;
        }
        // basis *= (x - x0 - k) / (k + 1)
        let c = BigRational::from_integer(BigInt::from(-(x0 + k as i64)));
        let kk = BigRational::from_integer(BigInt::from(k + 1));
        let mut next = vec![BigRational::zero(); basis.len() + 1];
        for (i, b) in basis.iter().enumerate() {
            next[i + 1] += b / &kk;
            next[i] += b * &c / &kk;
        }
        basis = next;
    }
    RatPoly::new(out)
}

impl NumberField {
    /// `N_{L/ℚ}(g) = ∏_σ σ(g)`, by evaluation at integers and interpolation.
    pub fn norm_poly(&self, g: &[AlgElem]) -> RatPoly {
        let g = self.poly_trim(g.to_vec());
        if g.is_empty() {
            return RatPoly::zero();
        }
        if self.depth() == 0 {
            return RatPoly::new(g.iter().map(|c| c.coord(0)).collect());
        }
        let den = g.iter().fold(BigInt::one(), |l, c| lcm(&l, &c.den));
        let gi: Vec<AlgElem> = g.iter().map(|c| c.scale_int(&den)).collect();
        let m = (g.len() - 1) * self.degree();
        let x0 = -((m / 2) as i64);
        let ys: Vec<BigRational> = (0..=m)
            .map(|t| {
                let x = self.int(x0 + t as i64);
                self.norm(&self.poly_eval(&gi, &x))
            })
            .collect();
        let n = interpolate_equispaced(x0, &ys);
        let scale = BigRational::from_integer(num_traits::pow(den, self.degree())).recip();
        RatPoly::new(n.coeffs().iter().map(|c| c * &scale).collect())
    }

    /// Square-free decomposition over this field (Yun); monic parts.
    pub fn poly_squarefree(&self, f: &[AlgElem]) -> Vec<(FPoly, usize)> {
        let f = self.poly_monic(f);
        if f.len() <= 2 {
            return if f.len() == 2 { vec![(f, 1)] } else { Vec::new() };
        }
        let df = self.poly_derivative(&f);
        let a0 = self.poly_gcd(&f, &df);
        if a0.len() == 1 {
            return vec![(f, 1)];
        }
        let mut b = self.poly_divrem(&f, &a0).0;
        let mut c = self.poly_divrem(&df, &a0).0;
        let mut d = self.poly_sub(&c, &self.poly_derivative(&b));
        let mut out = Vec::new();
        let mut i = 1;
        while b.len() > 1 {
            let a = self.poly_gcd(&b, &d);
            if a.len() > 1 {
                out.push((a.clone(), i));
            }
            b = self.poly_divrem(&b, &a).0;
            c = self.poly_divrem(&d, &a).0;
            d = self.poly_sub(&c, &self.poly_derivative(&b));
            i += 1;
        }
        out
    }

    /// Shift elements tried in order: 0, then k·α for integer combinations α
    /// of the stored generators.
    fn trager_shifts(&self) -> Vec<AlgElem> {
        let mut out = vec![self.zero()];
        let n = self.depth();
        for c in 1..=4i64 {
            let mut alpha = self.zero();
            let mut w = BigInt::one();
            for k in (1..=n).rev() {
                alpha = alpha.add(&self.stored_gen(k).scale_int(&w));
                w *= c;
            }
            for k in 1..=6i64 {
                let s = alpha.scale_int(&BigInt::from(k));
                if !out.contains(&s) {
                    out.push(s);
                }
            }
        }
        out
    }

    /// Factor a square-free monic polynomial into monic irreducibles.
    fn factor_squarefree(&self, f: &[AlgElem]) -> Result<Vec<FPoly>> {
        if f.len() <= 2 {
            return Ok(vec![f.to_vec()]);
        }
        if self.depth() == 0 {
            let rp = RatPoly::new(f.iter().map(|c| c.coord(0)).collect());
            let (_, facs) = crate::arith::factor_rat_poly(&rp)?;
            return Ok(facs.iter().map(|(g, _)| self.poly_from_rat(g)).collect());
        }
        for s in self.trager_shifts() {
            // g(x) = f(x - s)
            let g = self.poly_shift(f, &s.neg());
            let n = self.norm_poly(&g);
            let (_, ni) = n.to_primitive_int();
            if !is_squarefree_mod_some_prime(&ni) {
                continue;
            }
            let fac = factor_over_q(&ni)?;
            if fac.factors.len() == 1 {
                return Ok(vec![f.to_vec()]);
            }
            let mut out = Vec::with_capacity(fac.factors.len());
            let mut total = 0;
            for (q, _) in &fac.factors {
                let h = match self.modular_pullback(&g, q, q.deg() / self.degree()) {
                    Some(h) => h,
                    None => self.poly_gcd(&g, &self.poly_from_int(q)),
                };
                let deg = h.len() - 1;
                if deg * self.degree() != q.deg() {
                    return Err(Error::Invariant(format!(
                        "norm factor of degree {} pulled back to degree {deg}",
                        q.deg()
                    )));
                }
                // Independent check: the norm of the pulled-back factor is `q`.
                let (_, hn) = self.norm_poly(&h).to_primitive_int();
                if !same_up_to_sign(&hn, q) {
                    return Err(Error::Invariant("factor norm mismatch".into()));
                }
                total += deg;
                out.push(self.poly_monic(&self.poly_shift(&h, &s)));
            }
            if total != f.len() - 1 {
                return Err(Error::Invariant("factor degrees do not add up".into()));
            }
            out.sort_by_key(|h| h.len());
            return Ok(out);
        }
        Err(Error::Invariant(
            "no shift with square-free norm was found".into(),
        ))
    }

    /// Factorization into monic irreducibles with multiplicities,
    /// sorted by degree.
    pub fn factor(&self, f: &[AlgElem]) -> Result<Vec<(FPoly, usize)>> {
        let f = self.poly_trim(f.to_vec());
        if f.is_empty() {
            return Err(Error::ZeroPolynomial);
        }
        let mut out = Vec::new();
        for (part, m) in self.poly_squarefree(&f) {
            for h in self.factor_squarefree(&part)? {
                out.push((h, m));
            }
        }
        out.sort_by_key(|(h, m)| (h.len(), *m));
        Ok(out)
    }

    pub fn is_irreducible(&self, f: &[AlgElem]) -> Result<bool> {
        let f = self.poly_trim(f.to_vec());
        let fac = self.factor(&f)?;
        Ok(fac.len() == 1 && fac[0].1 == 1)
    }

    /// Roots in this field.
    pub fn roots(&self, f: &[AlgElem]) -> Result<Vec<AlgElem>> {
        Ok(self
            .factor(f)?
            .into_iter()
            .filter(|(h, _)| h.len() == 2)
            .map(|(h, _)| h[0].neg())
            .collect())
    }

    /// A square root in this field, if one exists.
    pub fn sqrt(&self, a: &AlgElem) -> Result<Option<AlgElem>> {
        if a.is_zero() {
            return Ok(Some(self.zero()));
        }
        // N(b^2) = N(b)^2 must be a rational square.
        let n = self.norm(a);
        let sq = |x: &BigInt| crate::arith::zassenhaus::is_perfect_square(x);
        if n < BigRational::zero() || !(sq(n.numer()) && sq(n.denom())) {
            return Ok(None);
        }
        let f = vec![a.neg(), self.zero(), self.one()];
        Ok(self.roots(&f)?.into_iter().next())
    }
}

fn same_up_to_sign(a: &IntPoly, b: &IntPoly) -> bool {
    a == b || *a == b.scale(&BigInt::from(-1))
}
