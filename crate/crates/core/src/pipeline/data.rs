use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Deserialize;

use crate::cmcurve::CurveModel;
use crate::error::{Error, Result};
use crate::numfield::{AlgElem, NumberField};

const REFERENCE: &str = include_str!("../../data/reference.toml");

#[derive(Clone, Debug, Deserialize)]
pub struct Exception {
    pub disc: i64,
    pub index: u64,
}

#[derive(Clone, Debug, Deserialize)]
pub struct ClassNumberTwo {
    pub discriminants: Vec<i64>,
    pub exceptions: Vec<Exception>,
}

/// Expected data for the `Δ = -20` twist, over the basis `1, s, i, s·i`.
#[derive(Clone, Debug, Deserialize)]
pub struct TwistReference {
    pub j0: Vec<String>,
    pub a: Vec<String>,
    pub b: Vec<String>,
    pub psi3_quadratic: Vec<Vec<String>>,
    pub x3: Vec<String>,
    pub alpha_scale: String,
    pub alpha: Vec<String>,
    pub index_e: u64,
    pub index_twist: u64,
}

#[derive(Clone, Debug, Deserialize)]
pub struct RationalCurve {
    pub label: String,
    pub disc: i64,
    pub a: Vec<String>,
}

#[derive(Clone, Debug, Deserialize)]
pub struct Reference {
    pub class_number_two: ClassNumberTwo,
    pub twist_minus_20: TwistReference,
    pub rational_curve: Vec<RationalCurve>,
}

pub fn reference() -> &'static Reference {
    static R: OnceLock<Reference> = OnceLock::new();
    R.get_or_init(|| toml::from_str(REFERENCE).expect("embedded reference data parses"))
}

impl Reference {
    pub fn expected_index(&self, disc: i64) -> u64 {
        self.class_number_two
            .exceptions
            .iter()
            .find(|e| e.disc == disc)
            .map_or(1, |e| e.index)
    }
}

pub(crate) fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::InvalidInput(format!("'{s}' is not a rational number"));
    match s.trim().split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d == BigInt::from(0) {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(s.trim().parse().map_err(|_| bad())?)),
    }
}

pub(crate) fn parse_elem(f: &NumberField, coords: &[String]) -> Result<AlgElem> {
    let c = coords
        .iter()
        .map(|s| parse_rational(s))
        .collect::<Result<Vec<_>>>()?;
    f.from_coords(&c)
}

impl RationalCurve {
    pub fn model(&self) -> Result<CurveModel> {
        let q = NumberField::rationals();
        let a: Vec<AlgElem> = self
            .a
            .iter()
            .map(|s| parse_elem(&q, std::slice::from_ref(s)))
            .collect::<Result<_>>()?;
        let a: [AlgElem; 5] = a
            .try_into()
            .map_err(|_| Error::InvalidInput("a rational curve needs five coefficients".into()))?;
        CurveModel::new(&q, a)
    }
}
