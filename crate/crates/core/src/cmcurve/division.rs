use num_bigint::BigInt;

use super::CurveModel;
use crate::error::{Error, Result};
use crate::numfield::{AlgElem, FPoly, NumberField};

/// `f_0, ..., f_n` for the short model: `f_m = ψ_m` for odd `m` and
/// `ψ_m / (2y)` for even `m`, so every `f_m` is a polynomial in `x`.
fn division_sequence(e: &CurveModel, n: usize) -> Vec<FPoly> {
    let f = e.field();
    let (a, b) = e.short_coeffs();
    let k = |c: i64, x: &AlgElem| x.scale_int(&BigInt::from(c));
    let a2 = f.mul(&a, &a);
    let mut seq: Vec<FPoly> = vec![Vec::new(), vec![f.one()], vec![f.one()]];
    // 3x^4 + 6Ax^2 + 12Bx - A^2
    seq.push(vec![a2.neg(), k(12, &b), k(6, &a), f.zero(), f.int(3)]);
    // 2(x^6 + 5Ax^4 + 20Bx^3 - 5A^2x^2 - 4ABx - 8B^2 - A^3)
    let c0 = f.mul(&b, &b).scale_int(&BigInt::from(-8)).sub(&f.mul(&a2, &a));
    seq.push(
        [
            c0,
            k(-4, &f.mul(&a, &b)),
            k(-5, &a2),
            k(20, &b),
            k(5, &a),
            f.zero(),
            f.one(),
        ]
        .iter()
        .map(|c| k(2, c))
        .collect(),
    );
    // (2y)^4 = 16 (x^3 + Ax + B)^2
    let cubic = vec![b.clone(), a.clone(), f.zero(), f.one()];
    let y4: FPoly = f.poly_scale(&f.poly_mul(&cubic, &cubic), &f.int(16));
    let mul = |x: &FPoly, y: &FPoly| f.poly_mul(x, y);
    let cube = |x: &FPoly| mul(&mul(x, x), x);
    let sq = |x: &FPoly| mul(x, x);
    for idx in 5..=n {
        let m = idx / 2;
        let next = if idx % 2 == 1 {
            let (t1, t2) = (
                mul(&seq[m + 2], &cube(&seq[m])),
                mul(&seq[m - 1], &cube(&seq[m + 1])),
            );
            if m % 2 == 0 {
                f.poly_sub(&mul(&y4, &t1), &t2)
            } else {
                f.poly_sub(&t1, &mul(&y4, &t2))
            }
        } else {
            let inner = f.poly_sub(
                &mul(&seq[m + 2], &sq(&seq[m - 1])),
                &mul(&seq[m - 2], &sq(&seq[m + 1])),
            );
            mul(&seq[m], &inner)
        };
        seq.push(next);
    }
    seq.truncate(n + 1);
    seq
}

/// The `n`-th division polynomial of the short model, with the factor `2y`
/// removed for even `n`.
pub fn division_polynomial(e: &CurveModel, n: usize) -> FPoly {
    division_sequence(e, n.max(1)).pop().expect("nonempty")
}

/// Polynomial whose roots are the `x`-coordinates of the nonzero `n`-torsion
/// points of the short model.
pub fn torsion_x_polynomial(e: &CurveModel, n: usize) -> FPoly {
    let f = e.field();
    let fnp = division_polynomial(e, n);
    if n % 2 == 1 {
        fnp
    } else {
        let (a, b) = e.short_coeffs();
        f.poly_mul(&fnp, &[b, a, f.zero(), f.one()])
    }
}

/// `L = F(E[n])` as a tower over the curve's field.
#[derive(Clone, Debug)]
pub struct DivisionField {
    pub base: NumberField,
    pub field: NumberField,
    pub n: usize,
    /// `[L : F]`
    pub degree: usize,
    /// `[F(x(E[n])) : F]`
    pub x_degree: usize,
    /// A point of exact order `n` on the short model, over `L`.
    pub point: (AlgElem, AlgElem),
}

/// Adjoin `x`-coordinates of all nonzero `n`-torsion points one irreducible
/// factor at a time, then the `y`-coordinate of one point of order `n`.
/// Automorphisms fixing every `x(P)` act as a global sign, so one `y`
/// suffices once `n >= 3`.
pub fn division_field(e: &CurveModel, n: usize) -> Result<DivisionField> {
    if n < 3 {
        return Err(Error::InvalidInput("division level must be at least 3".into()));
    }
    let e = e.short_model();
    let base = e.field().clone();
    let mut field = base.clone();
    // Each pending polynomial is tagged with whether it divides f_n.
    let mut pending: Vec<(FPoly, bool)> = vec![(division_polynomial(&e, n), true)];
    if n.is_multiple_of(2) {
        let (a, b) = e.short_coeffs();
        pending.push((vec![b, a, base.zero(), base.one()], false));
    }
    let mut root: Option<AlgElem> = None;
    let mut level = 0;
    loop {
        let mut nonlinear = Vec::new();
        for (g, from_fn) in &pending {
            for (h, _) in field.factor(g)? {
                if h.len() > 2 {
                    nonlinear.push((h, *from_fn));
                } else if *from_fn && root.is_none() {
                    root = Some(h[0].neg());
                }
            }
        }
        if nonlinear.is_empty() {
            break;
        }
        nonlinear.sort_by_key(|(h, _)| h.len());
        level += 1;
        let next = field.adjoin_unchecked(&nonlinear[0].0, &format!("x{level}"));
        pending = nonlinear
            .iter()
            .map(|(h, t)| (next.poly_lift(h), *t))
            .collect();
        root = root.map(|r| next.lift(&r));
        field = next;
    }
    let x_degree = field.degree() / base.degree();
    let en = e.base_change(&field)?;
    // Roots of f_n have exact order n (for even n the 2-torsion sits in the cubic).
    let x = root.ok_or_else(|| Error::Invariant("x-coordinate field does not split f_n".into()))?;
    let v = en.short_rhs(&x);
    let (field, y) = match field.sqrt(&v)? {
        Some(y) => (field, y),
        None => {
            let ext = field.adjoin_unchecked(&[v.neg(), field.zero(), field.one()], "y");
            let y = ext.gen();
            (ext, y)
        }
    };
    let x = field.lift(&x);
    let degree = field.degree() / base.degree();
    Ok(DivisionField {
        base,
        field,
        n,
        degree,
        x_degree,
        point: (x, y),
    })
}
