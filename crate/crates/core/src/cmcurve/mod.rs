//! Weierstrass models over tower fields, the reference families, division
//! polynomials and fields, and quadratic twists.

mod division;
mod kernel;

pub use division::{division_field, division_polynomial, torsion_x_polynomial, DivisionField};
pub use kernel::{kernel_test, KernelEvidence};

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::numfield::{AlgElem, NumberField};

/// `y^2 + a1 x y + a3 y = x^3 + a2 x^2 + a4 x + a6` over a tower field.
#[derive(Clone, Debug)]
pub struct CurveModel {
    field: NumberField,
    a: [AlgElem; 5],
}

impl CurveModel {
    /// Coefficients in the order `a1, a2, a3, a4, a6`.
    pub fn new(field: &NumberField, a: [AlgElem; 5]) -> Result<Self> {
        for c in &a {
            if c.dim() != field.degree() {
                return Err(Error::InvalidInput("coefficient outside the field".into()));
            }
        }
        let e = CurveModel {
            field: field.clone(),
            a,
        };
        if e.discriminant().is_zero() {
            return Err(Error::SingularCurve(e.to_string()));
        }
        Ok(e)
    }

    /// `y^2 = x^3 + A x + B`.
    pub fn short(field: &NumberField, a: AlgElem, b: AlgElem) -> Result<Self> {
        let z = field.zero();
        Self::new(field, [z.clone(), z.clone(), z, a, b])
    }

    pub fn field(&self) -> &NumberField {
        &self.field
    }

    pub fn coeffs(&self) -> &[AlgElem; 5] {
        &self.a
    }

    pub fn is_short(&self) -> bool {
        self.a[0].is_zero() && self.a[1].is_zero() && self.a[2].is_zero()
    }

    pub fn b_invariants(&self) -> [AlgElem; 4] {
        let f = &self.field;
        let [a1, a2, a3, a4, a6] = &self.a;
        let m = |x: &AlgElem, y: &AlgElem| f.mul(x, y);
        let k = |n: i64, x: &AlgElem| x.scale_int(&BigInt::from(n));
        let b2 = m(a1, a1).add(&k(4, a2));
        let b4 = k(2, a4).add(&m(a1, a3));
        let b6 = m(a3, a3).add(&k(4, a6));
        let b8 = m(&m(a1, a1), a6)
            .add(&k(4, &m(a2, a6)))
            .sub(&m(&m(a1, a3), a4))
            .add(&m(a2, &m(a3, a3)))
            .sub(&m(a4, a4));
        [b2, b4, b6, b8]
    }

    pub fn c4(&self) -> AlgElem {
        let [b2, b4, _, _] = self.b_invariants();
        self.field.mul(&b2, &b2).sub(&b4.scale_int(&24.into()))
    }

    pub fn c6(&self) -> AlgElem {
        let f = &self.field;
        let [b2, b4, b6, _] = self.b_invariants();
        let b2sq = f.mul(&b2, &b2);
        f.mul(&b2sq, &b2)
            .neg()
            .add(&f.mul(&b2, &b4).scale_int(&36.into()))
            .sub(&b6.scale_int(&216.into()))
    }

    pub fn discriminant(&self) -> AlgElem {
        let f = &self.field;
        let [b2, b4, b6, b8] = self.b_invariants();
        let b2sq = f.mul(&b2, &b2);
        f.mul(&b2sq, &b8)
            .neg()
            .sub(&f.pow(&b4, 3).scale_int(&8.into()))
            .sub(&f.mul(&b6, &b6).scale_int(&27.into()))
            .add(&f.mul(&f.mul(&b2, &b4), &b6).scale_int(&9.into()))
    }

    pub fn j_invariant(&self) -> AlgElem {
        let f = &self.field;
        f.div(&f.pow(&self.c4(), 3), &self.discriminant())
            .expect("nonsingular")
    }

    /// `(A, B)` of an isomorphic short model; `(a4, a6)` if already short,
    /// otherwise `(-27 c4, -54 c6)`.
    pub fn short_coeffs(&self) -> (AlgElem, AlgElem) {
        if self.is_short() {
            (self.a[3].clone(), self.a[4].clone())
        } else {
            (
                self.c4().scale_int(&BigInt::from(-27)),
                self.c6().scale_int(&BigInt::from(-54)),
            )
        }
    }

    pub fn short_model(&self) -> CurveModel {
        let (a, b) = self.short_coeffs();
        CurveModel::short(&self.field, a, b).expect("isomorphic model is nonsingular")
    }

    /// The same equation over a larger tower containing this field.
    pub fn base_change(&self, ext: &NumberField) -> Result<CurveModel> {
        if !ext.contains_field(&self.field) {
            return Err(Error::InvalidInput("not an extension of the curve's field".into()));
        }
        let a = self.a.clone().map(|c| ext.lift(&c));
        CurveModel::new(ext, a)
    }

    /// Right-hand side `x^3 + A x + B` of a short model at `x`.
    pub fn short_rhs(&self, x: &AlgElem) -> AlgElem {
        let f = &self.field;
        let (a, b) = self.short_coeffs();
        f.mul(&f.mul(x, x), x).add(&f.mul(&a, x)).add(&b)
    }
}

impl fmt::Display for CurveModel {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let f = &self.field;
        let term = |c: &AlgElem, m: &str| -> Option<String> {
            if c.is_zero() {
                return None;
            }
            let s = f.format(c);
            Some(match (m, c.is_one()) {
                ("", _) => s,
                (_, true) => m.to_string(),
                _ if s.contains(' ') => format!("({s})*{m}"),
                _ => format!("{s}*{m}"),
            })
        };
        let [a1, a2, a3, a4, a6] = &self.a;
        let mut lhs = vec!["y^2".to_string()];
        lhs.extend(term(a1, "x*y"));
        lhs.extend(term(a3, "y"));
        let mut rhs = vec!["x^3".to_string()];
        rhs.extend(term(a2, "x^2"));
        rhs.extend(term(a4, "x"));
        rhs.extend(term(a6, ""));
        write!(out, "{} = {}", lhs.join(" + "), rhs.join(" + "))
    }
}

/// Reference models with a prescribed `j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    /// `y^2 = x^3 - 3j(j-1728) x - 2j(j-1728)^2`
    A,
    /// Family A twisted by -1.
    B,
    /// `y^2 + xy = x^3 - 36/(j-1728) x - 1/(j-1728)`
    C,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::A, Family::B, Family::C];
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::A => "a",
            Family::B => "b",
            Family::C => "c",
        })
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "a" => Ok(Family::A),
            "b" => Ok(Family::B),
            "c" => Ok(Family::C),
            _ => Err(Error::InvalidInput(format!("unknown family '{s}'"))),
        }
    }
}

pub fn curve_from_family(family: Family, field: &NumberField, j0: &AlgElem) -> Result<CurveModel> {
    let f = field;
    let jm = j0.sub(&f.int(1728));
    if j0.is_zero() || jm.is_zero() {
        return Err(Error::SingularCurve(format!(
            "family {family} at j = {}",
            f.format(j0)
        )));
    }
    let z = f.zero();
    match family {
        Family::A | Family::B => {
            let a = f.mul(j0, &jm).scale_int(&BigInt::from(-3));
            let mut b = f.mul(j0, &f.mul(&jm, &jm)).scale_int(&BigInt::from(-2));
            if family == Family::B {
                b = b.neg();
            }
            CurveModel::short(f, a, b)
        }
        Family::C => {
            let inv = f.inv(&jm).expect("nonzero");
            let a4 = inv.scale_int(&BigInt::from(-36));
            let a6 = inv.neg();
            CurveModel::new(f, [f.one(), z.clone(), z.clone(), a4, a6])
        }
    }
}

/// Twist by `α^{1/d}`: `d = 2` for any `j`, `d = 4` needs `j = 1728`, `d = 6` needs `j = 0`.
/// The result is a short model.
pub fn twist(e: &CurveModel, alpha: &AlgElem, d: u32) -> Result<CurveModel> {
    let f = e.field();
    if alpha.is_zero() {
        return Err(Error::InvalidInput("twist by zero".into()));
    }
    let (a, b) = e.short_coeffs();
    let (na, nb) = match d {
        2 => {
            let a2 = f.mul(alpha, alpha);
            (f.mul(&a2, &a), f.mul(&f.mul(&a2, alpha), &b))
        }
        4 if b.is_zero() => (f.mul(alpha, &a), b),
        6 if a.is_zero() => (a, f.mul(alpha, &b)),
        _ => return Err(Error::IncompatibleTwist(d)),
    };
    CurveModel::short(f, na, nb)
}
