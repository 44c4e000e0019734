//! Dense polynomials with coefficients in a tower field, ascending order.

use num_bigint::BigInt;
use num_rational::BigRational;

use super::elem::AlgElem;
use super::field::NumberField;
use crate::arith::{IntPoly, RatPoly};

pub type FPoly = Vec<AlgElem>;

impl NumberField {
    pub fn poly_trim(&self, mut a: FPoly) -> FPoly {
        while a.last().is_some_and(|c| c.is_zero()) {
            a.pop();
        }
        a
    }

    pub fn poly_from_int(&self, f: &IntPoly) -> FPoly {
        f.coeffs().iter().map(|c| self.bigint(c)).collect()
    }

    pub fn poly_from_rat(&self, f: &RatPoly) -> FPoly {
        f.coeffs().iter().map(|c| self.rat(c)).collect()
    }

    /// Coefficients lifted from a lower level of the tower.
    pub fn poly_lift(&self, f: &[AlgElem]) -> FPoly {
        f.iter().map(|c| self.lift(c)).collect()
    }

    pub fn poly_add(&self, a: &[AlgElem], b: &[AlgElem]) -> FPoly {
        let n = a.len().max(b.len());
        let z = self.zero();
        let out = (0..n)
            .map(|i| a.get(i).unwrap_or(&z).add(b.get(i).unwrap_or(&z)))
            .collect();
        self.poly_trim(out)
    }

    pub fn poly_sub(&self, a: &[AlgElem], b: &[AlgElem]) -> FPoly {
        let n = a.len().max(b.len());
        let z = self.zero();
        let out = (0..n)
            .map(|i| a.get(i).unwrap_or(&z).sub(b.get(i).unwrap_or(&z)))
            .collect();
        self.poly_trim(out)
    }

    pub fn poly_scale(&self, a: &[AlgElem], c: &AlgElem) -> FPoly {
        self.poly_trim(a.iter().map(|x| self.mul(x, c)).collect())
    }

    pub fn poly_mul(&self, a: &[AlgElem], b: &[AlgElem]) -> FPoly {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![self.zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    out[i + j] = out[i + j].add(&self.mul(x, y));
                }
            }
        }
        self.poly_trim(out)
    }

    pub fn poly_monic(&self, a: &[AlgElem]) -> FPoly {
        let a = self.poly_trim(a.to_vec());
        match a.last() {
            None => a,
            Some(lc) if lc.is_one() => a,
            Some(lc) => {
                let inv = self.inv(lc).expect("nonzero");
                self.poly_scale(&a, &inv)
            }
        }
    }

    /// Quotient and remainder; `b` must be nonzero.
    pub fn poly_divrem(&self, a: &[AlgElem], b: &[AlgElem]) -> (FPoly, FPoly) {
        let b = self.poly_trim(b.to_vec());
        assert!(!b.is_empty(), "division by zero polynomial");
        let mut r = self.poly_trim(a.to_vec());
        if r.len() < b.len() {
            return (Vec::new(), r);
        }
        let lc = b.last().unwrap();
        let lcinv = if lc.is_one() {
            None
        } else {
            Some(self.inv(lc).expect("nonzero"))
        };
        let mut q = vec![self.zero(); r.len() - b.len() + 1];
        while r.len() >= b.len() {
            let shift = r.len() - b.len();
            let top = r.last().unwrap().clone();
            let c = match &lcinv {
                None => top,
                Some(i) => self.mul(&top, i),
            };
            for (i, bi) in b.iter().enumerate() {
                if !bi.is_zero() {
                    r[shift + i] = r[shift + i].sub(&self.mul(&c, bi));
                }
            }
            q[shift] = c;
            r.pop();
            r = self.poly_trim(r);
        }
        (self.poly_trim(q), r)
    }

    pub fn poly_rem(&self, a: &[AlgElem], b: &[AlgElem]) -> FPoly {
        self.poly_divrem(a, b).1
    }

    /// Monic greatest common divisor.
    pub fn poly_gcd(&self, a: &[AlgElem], b: &[AlgElem]) -> FPoly {
        let mut x = self.poly_monic(a);
        let mut y = self.poly_monic(b);
        while !y.is_empty() {
            let r = self.poly_rem(&x, &y);
            x = y;
            y = self.poly_monic(&r);
        }
        x
    }

    pub fn poly_derivative(&self, a: &[AlgElem]) -> FPoly {
        let out = a
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.scale_int(&BigInt::from(i)))
            .collect();
        self.poly_trim(out)
    }

    pub fn poly_eval(&self, a: &[AlgElem], x: &AlgElem) -> AlgElem {
        let mut acc = self.zero();
        for c in a.iter().rev() {
            acc = self.mul(&acc, x).add(c);
        }
        acc
    }

    /// `a(x + s)`.
    pub fn poly_shift(&self, a: &[AlgElem], s: &AlgElem) -> FPoly {
        // Horner with the linear polynomial x + s.
        let lin = vec![s.clone(), self.one()];
        let mut acc: FPoly = Vec::new();
        for c in a.iter().rev() {
            acc = self.poly_add(&self.poly_mul(&acc, &lin), std::slice::from_ref(c));
        }
        acc
    }

    /// `a(k x)` for a rational `k`.
    pub fn poly_scale_var(&self, a: &[AlgElem], k: &BigRational) -> FPoly {
        let mut pk = BigRational::from_integer(1.into());
        let mut out = Vec::with_capacity(a.len());
        for c in a {
            out.push(c.scale(&pk));
            pk *= k;
        }
        self.poly_trim(out)
    }

    pub fn poly_format(&self, a: &[AlgElem]) -> String {
        let mut terms = Vec::new();
        for (i, c) in a.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let cs = self.format(c);
            let cs = if cs.contains(' ') { format!("({cs})") } else { cs };
            let t = match i {
                0 => cs,
                1 if c.is_one() => "x".to_string(),
                1 => format!("{cs}*x"),
                _ if c.is_one() => format!("x^{i}"),
                _ => format!("{cs}*x^{i}"),
            };
            terms.push(t);
        }
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }
}
