//! Ring class polynomials `H_Δ(x) = ∏ (x - j(τ_f))` over reduced forms `f`,
//! evaluated in floating point and rounded to integers.

use std::fs;
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use sha2::{Digest, Sha256};

use crate::arith::IntPoly;
use crate::bigfloat::{cm_point, j_invariant, truncation_order, BigComplex, BigFloat};
use crate::error::{Error, Result};
use crate::quadorder::{Form, QuadOrder};

/// Maximum number of precision doublings after the first attempt.
pub const MAX_ESCALATIONS: u32 = 3;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassPolynomial {
    pub disc: i64,
    pub poly: IntPoly,
    /// Working precision in bits of the accepted evaluation.
    pub precision: u32,
    /// q-expansion length used for the principal CM point.
    pub truncation: usize,
}

impl ClassPolynomial {
    pub fn degree(&self) -> usize {
        self.poly.deg()
    }
}

/// Bit-size estimate `π √|Δ| Σ 1/a / ln 2 + 33` of the coefficients.
pub fn starting_precision(disc: i64) -> u32 {
    let s: f64 = crate::quadorder::reduced_forms(disc)
        .iter()
        .map(|f| 1.0 / f.a as f64)
        .sum();
    let bits = std::f64::consts::PI * ((-disc) as f64).sqrt() * s / std::f64::consts::LN_2;
    bits.ceil() as u32 + 33
}

/// `j` at the CM point of each reduced form, in form order.
pub fn cm_j_values(disc: i64, prec: u32) -> Result<Vec<(Form, BigComplex)>> {
    crate::quadorder::reduced_forms(disc)
        .into_iter()
        .map(|f| Ok((f, j_invariant(&cm_point(f.a, f.b, disc, prec), prec)?)))
        .collect()
}

fn expand_roots(roots: &[BigComplex], prec: u32) -> Vec<BigComplex> {
    // Coefficients ascending; start with the constant polynomial 1.
    let mut c = vec![BigComplex::one(prec)];
    for r in roots {
        let mut next = vec![BigComplex::zero(prec); c.len() + 1];
        for (i, ci) in c.iter().enumerate() {
            next[i + 1] = next[i + 1].add(ci);
            next[i] = next[i].sub(&ci.mul(r));
        }
        c = next;
    }
    c
}

/// Attempt at one precision; `None` if some coefficient is not within 1/4 of an integer.
fn attempt(disc: i64, prec: u32) -> Result<Option<IntPoly>> {
    let roots: Vec<BigComplex> = cm_j_values(disc, prec)?.into_iter().map(|(_, j)| j).collect();
    let coeffs = expand_roots(&roots, prec);
    let quarter = BigFloat::from_f64(0.25, prec);
    let mut out = Vec::with_capacity(coeffs.len());
    for c in &coeffs {
        let n = c.re.round();
        let resid_re = c.re.sub(&BigFloat::from_int(&n, prec)).abs();
        let resid_im = c.im.abs();
        if !resid_re.cmp_value(&quarter).is_lt() || !resid_im.cmp_value(&quarter).is_lt() {
            return Ok(None);
        }
        out.push(n);
    }
    Ok(Some(IntPoly::new(out)))
}

/// Class polynomial of the order, with precision escalation.
pub fn ring_class_polynomial(order: &QuadOrder) -> Result<ClassPolynomial> {
    ring_class_polynomial_from(order, starting_precision(order.disc()))
}

/// As [`ring_class_polynomial`] but starting from a caller-chosen precision.
pub fn ring_class_polynomial_from(order: &QuadOrder, start: u32) -> Result<ClassPolynomial> {
    let disc = order.disc();
    let mut prec = start.max(crate::bigfloat::MIN_PREC);
    for _ in 0..=MAX_ESCALATIONS {
        if let Some(poly) = attempt(disc, prec)? {
            let im = ((-disc) as f64).sqrt() / 2.0;
            return Ok(ClassPolynomial {
                disc,
                poly,
                precision: prec,
                truncation: truncation_order(im, prec + 40),
            });
        }
        prec *= 2;
    }
    Err(Error::PrecisionExhausted { disc, bits: prec / 2 })
}

/// Numerical value of `j` at the principal CM point `(-b + √Δ)/2`;
/// this is the real root of `H_Δ` singled out as `j_0`.
pub fn principal_j(disc: i64, prec: u32) -> Result<BigFloat> {
    let f = Form::principal(disc);
    Ok(j_invariant(&cm_point(f.a, f.b, disc, prec), prec)?.re)
}

// ---------------------------------------------------------------------------
// Disk cache: one text file per discriminant.

fn cache_path(dir: &Path, disc: i64) -> PathBuf {
    dir.join(format!("H{}.txt", -disc))
}

fn checksum(body: &str) -> String {
    let digest = Sha256::digest(body.as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

fn render(cp: &ClassPolynomial) -> String {
    let coeffs: Vec<String> = cp.poly.coeffs().iter().map(|c| c.to_string()).collect();
    format!(
        "disc = {}\nh = {}\nprecision = {}\ntruncation = {}\ncoeffs = {}\n",
        cp.disc,
        cp.poly.deg(),
        cp.precision,
        cp.truncation,
        coeffs.join(",")
    )
}

fn parse(text: &str) -> Option<ClassPolynomial> {
    let (body, sum_line) = text.rsplit_once("sha256 = ")?;
    if checksum(body) != sum_line.trim() {
        return None;
    }
    let mut disc = None;
    let mut h = None;
    let mut precision = None;
    let mut truncation = None;
    let mut coeffs = None;
    for line in body.lines() {
        let (k, v) = line.split_once(" = ")?;
        match k {
            "disc" => disc = v.parse::<i64>().ok(),
            "h" => h = v.parse::<usize>().ok(),
            "precision" => precision = v.parse::<u32>().ok(),
            "truncation" => truncation = v.parse::<usize>().ok(),
            "coeffs" => {
                coeffs = v
                    .split(',')
                    .map(|s| s.parse::<BigInt>().ok())
                    .collect::<Option<Vec<_>>>()
            }
            _ => return None,
        }
    }
    let poly = IntPoly::new(coeffs?);
    if poly.deg() != h? {
        return None;
    }
    Some(ClassPolynomial {
        disc: disc?,
        poly,
        precision: precision?,
        truncation: truncation?,
    })
}

/// Read-through cache. Corrupt or mismatching files are recomputed and rewritten.
pub fn cached_class_polynomial(order: &QuadOrder, dir: Option<&Path>) -> Result<ClassPolynomial> {
    let Some(dir) = dir else {
        return ring_class_polynomial(order);
    };
    let path = cache_path(dir, order.disc());
    if let Ok(text) = fs::read_to_string(&path) {
        if let Some(cp) = parse(&text) {
            if cp.disc == order.disc() && cp.poly.deg() as u64 == order.class_number() {
                return Ok(cp);
            }
        }
    }
    let cp = ring_class_polynomial(order)?;
    fs::create_dir_all(dir)?;
    let body = render(&cp);
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, format!("{body}sha256 = {}\n", checksum(&body)))?;
    fs::rename(&tmp, &path)?;
    Ok(cp)
}
