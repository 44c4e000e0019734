//! Curve input files (TOML):
//!
//! ```toml
//! label = "example"
//! cm_disc = -12
//! n = 3                      # optional
//! a = [["0", "0"], ["0", "0"], ["0", "0"], ["-15", "0"], ["22", "0"]]
//!
//! [[level]]                  # bottom level first; omit for curves over Q
//! name = "s"
//! poly = [["3"], ["0"], ["1"]]   # x^2 + 3, coefficients over the level below
//! ```
//!
//! `a` lists `a1, a2, a3, a4, a6` as coordinate vectors over the monomial
//! basis of the whole tower; entries are integers or fractions `p/q`.

use serde::Deserialize;

use super::data::parse_elem;
use crate::cmcurve::CurveModel;
use crate::error::{Error, Result};
use crate::numfield::{AlgElem, NumberField};

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Level {
    name: String,
    poly: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCurveFile {
    label: Option<String>,
    cm_disc: i64,
    n: Option<usize>,
    #[serde(default)]
    level: Vec<Level>,
    a: Vec<Vec<String>>,
}

#[derive(Clone, Debug)]
pub struct CurveFile {
    pub label: String,
    pub disc: i64,
    pub n: usize,
    pub curve: CurveModel,
}

pub fn parse_curve_file(text: &str) -> Result<CurveFile> {
    let raw: RawCurveFile =
        toml::from_str(text).map_err(|e| Error::InvalidInput(format!("curve file: {e}")))?;
    let mut field = NumberField::rationals();
    for lv in &raw.level {
        let poly: Vec<AlgElem> = lv
            .poly
            .iter()
            .map(|c| parse_elem(&field, c))
            .collect::<Result<_>>()?;
        if poly.len() < 2 || !poly.last().expect("nonempty").is_one() {
            return Err(Error::InvalidInput(format!(
                "level '{}' needs a monic polynomial of degree at least 1",
                lv.name
            )));
        }
        field = field.adjoin(&poly, &lv.name)?;
    }
    if raw.a.len() != 5 {
        return Err(Error::InvalidInput("a must list a1, a2, a3, a4, a6".into()));
    }
    let a: Vec<AlgElem> = raw
        .a
        .iter()
        .map(|c| parse_elem(&field, c))
        .collect::<Result<_>>()?;
    let curve = CurveModel::new(&field, a.try_into().expect("five coefficients"))?;
    Ok(CurveFile {
        label: raw.label.unwrap_or_else(|| "curve".into()),
        disc: raw.cm_disc,
        n: raw.n.unwrap_or(3),
        curve,
    })
}
