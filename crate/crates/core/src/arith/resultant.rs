//! Resultants of integer polynomials by the subresultant PRS.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::arith::poly::IntPoly;
use crate::error::{Error, Result};

/// `Res(f, g)` with the convention `Res(f, g) = lc(f)^deg(g) * prod g(roots of f)`.
/// Swapping the arguments multiplies the value by `(-1)^(deg f * deg g)`.
pub fn resultant(f: &IntPoly, g: &IntPoly) -> Result<BigInt> {
    if f.is_zero() || g.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let (mut a, mut b) = (f.clone(), g.clone());
    let mut sign = BigInt::one();
    if a.deg() < b.deg() {
        std::mem::swap(&mut a, &mut b);
        if a.deg() % 2 == 1 && b.deg() % 2 == 1 {
            sign = -sign;
        }
    }
    if b.deg() == 0 {
        return Ok(sign * b.lc().pow(a.deg() as u32));
    }
    let ca = a.content();
    let cb = b.content();
    let (da0, db0) = (a.deg() as u32, b.deg() as u32);
    let t = ca.pow(db0) * cb.pow(da0);
    a = a.primitive_part();
    b = b.primitive_part();
    let mut g_ = BigInt::one();
    let mut h = BigInt::one();
    loop {
        let delta = a.deg() - b.deg();
        if a.deg() % 2 == 1 && b.deg() % 2 == 1 {
            sign = -sign;
        }
        let r = a.pseudo_rem(&b);
        if r.is_zero() {
            return Ok(BigInt::zero());
        }
        a = b;
        let denom = &g_ * h.pow(delta as u32);
        b = r.div_scalar_exact(&denom);
        g_ = a.lc();
        h = if delta == 0 {
            h
        } else {
            let num = g_.pow(delta as u32);
            let den = h.pow(delta as u32 - 1);
            num.div_floor(&den)
        };
        if b.deg() == 0 {
            let da = a.deg() as u32;
            let lb = b.lc();
            let hh = if da == 0 {
                h
            } else {
                lb.pow(da) / h.pow(da - 1)
            };
            return Ok(sign * t * hh);
        }
    }
}

/// `disc(f) = (-1)^(n(n-1)/2) Res(f, f') / lc(f)`.
pub fn discriminant(f: &IntPoly) -> Result<BigInt> {
    let n = f.deg();
    if n == 0 {
        return Err(Error::ZeroPolynomial);
    }
    if n == 1 {
        return Ok(BigInt::one());
    }
    let r = resultant(f, &f.derivative())?;
    let d = r / f.lc();
    Ok(if (n * (n - 1) / 2) % 2 == 1 { -d } else { d })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::snf::bareiss_det;

    fn sylvester(f: &IntPoly, g: &IntPoly) -> Vec<Vec<BigInt>> {
        let (m, n) = (f.deg(), g.deg());
        let size = m + n;
        let mut rows = Vec::with_capacity(size);
        for i in 0..n {
            let mut row = vec![BigInt::zero(); size];
            for (k, c) in f.coeffs().iter().rev().enumerate() {
                row[i + k] = c.clone();
            }
            rows.push(row);
        }
        for i in 0..m {
            let mut row = vec![BigInt::zero(); size];
            for (k, c) in g.coeffs().iter().rev().enumerate() {
                row[i + k] = c.clone();
            }
            rows.push(row);
        }
        rows
    }

    #[test]
    fn linear_factor_evaluates() {
        let f = IntPoly::from_i64(&[1, 0, 1]);
        let g = IntPoly::from_i64(&[-2, 1]);
        assert_eq!(resultant(&f, &g).unwrap(), BigInt::from(5));
        for a in -6i64..6 {
            let g = IntPoly::from_i64(&[-a, 1]);
            let f = IntPoly::from_i64(&[3, -1, 4, 1, -5, 2]);
            // Res(x - a, f) = f(a)
            assert_eq!(resultant(&g, &f).unwrap(), f.eval(&BigInt::from(a)));
        }
    }

    #[test]
    fn common_root_gives_zero() {
        let f = IntPoly::from_i64(&[-1, 1]);
        assert!(resultant(&f, &f).unwrap().is_zero());
        let g = IntPoly::from_i64(&[2, -3, 1]);
        let h = IntPoly::from_i64(&[-2, 1, 1]);
        assert!(resultant(&g, &h).unwrap().is_zero());
        assert!(resultant(&IntPoly::zero(), &h).is_err());
    }

    #[test]
    fn class_polynomial_discriminant_matches_sylvester() {
        let f = IntPoly::from_i64(&[-121287375, 191025, 1]);
        let df = f.derivative();
        let r = resultant(&f, &df).unwrap();
        assert_eq!(r, bareiss_det(&sylvester(&f, &df)));
        // For a monic quadratic, Res(f, f') = -(b^2 - 4c).
        let b = BigInt::from(191025);
        let c = BigInt::from(-121287375);
        assert_eq!(r, -(&b * &b - BigInt::from(4) * c));
    }

    #[test]
    fn agrees_with_sylvester_on_mixed_degrees() {
        let cases = [
            (vec![3, 0, -2, 5], vec![-1, 4, 0, 0, 2]),
            (vec![-6, 2, 7, 1], vec![1, 1]),
            (vec![2, -4, 0, 6, 0, -8], vec![-3, 0, 9]),
            (vec![5, 3, -1], vec![7, -2, 4, 1, 3]),
        ];
        for (a, b) in cases {
            let f = IntPoly::from_i64(&a);
            let g = IntPoly::from_i64(&b);
            assert_eq!(resultant(&f, &g).unwrap(), bareiss_det(&sylvester(&f, &g)));
            let sign = if f.deg() * g.deg() % 2 == 1 { -1 } else { 1 };
            assert_eq!(
                resultant(&g, &f).unwrap(),
                resultant(&f, &g).unwrap() * sign
            );
        }
    }

    #[test]
    fn discriminant_of_cubic() {
        // x^3 + a x + b has discriminant -4a^3 - 27b^2
        let f = IntPoly::from_i64(&[22, -15, 0, 1]);
        assert_eq!(discriminant(&f).unwrap(), BigInt::from(-4 * -3375 - 27 * 484));
    }
}
