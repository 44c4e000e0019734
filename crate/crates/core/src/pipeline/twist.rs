//! The `Δ = -20` quadratic twist: `E` from family A over `H = ℚ(√-5, i)`,
//! the `𝔭_3`-torsion root `x_3`, `α = x_3^3 + A x_3 + B`, and the twist
//! `E' = E^{(α)}` whose 3-division field is abelian over `K`.

use std::time::Instant;

use num_bigint::BigInt;
use serde::Serialize;

use super::data::{parse_elem, reference};
use super::{abelian_degree, assemble, compute, IndexReport, Labels, RunConfig};
use crate::cmcurve::{curve_from_family, division_polynomial, kernel_test, twist, CurveModel, Family};
use crate::error::{Error, Result};
use crate::numfield::{AlgElem, NumberField};
use crate::quadorder::QuadOrder;

#[derive(Clone, Debug, Serialize)]
pub struct TwistDemo {
    pub field: String,
    pub j0: String,
    pub model: String,
    pub psi3_factors: Vec<String>,
    pub x3: String,
    /// Primes whose Frobenius singled out `x_3` among the roots of `ψ_3`.
    pub kernel_primes: Vec<u64>,
    pub alpha: String,
    pub alpha_is_square: bool,
    /// `[H(√α) : K]`
    pub sqrt_alpha_degree: u64,
    /// `[H(√α) ∩ K^ab : K]`
    pub sqrt_alpha_abelian_degree: u64,
    pub sqrt_alpha_abelian: bool,
    pub twist_model: String,
    /// `𝓘(E/H)` through the 3-division field of `E`.
    pub index_e: u64,
    /// `𝓘(E/H)` from `E = E'^{(α)}` with `L = H(√α)`.
    pub index_e_shortcut: u64,
    /// `𝓘(E'/H)` through the 3-division field of `E'`.
    pub index_twist: u64,
    /// `𝓘` at the conjugate `j_0`.
    pub index_conjugate: u64,
    pub routes_agree: bool,
    pub reports: Vec<IndexReport>,
}

fn expect_eq(what: &str, f: &NumberField, got: &AlgElem, want: &AlgElem) -> Result<()> {
    if got != want {
        return Err(Error::Invariant(format!(
            "{what} mismatch\n  expected {}\n  computed {}",
            f.format(want),
            f.format(got)
        )));
    }
    Ok(())
}

pub fn twist_demo(cfg: &RunConfig) -> Result<TwistDemo> {
    cfg.validate()?;
    let start = Instant::now();
    let r = &reference().twist_minus_20;
    let order = QuadOrder::new(-20)?;
    let k = NumberField::quadratic(-5, "s")?;
    let h = k.adjoin(&[k.one(), k.zero(), k.one()], "i")?;
    let j0 = parse_elem(&h, &r.j0)?;
    let cp = super::class_polynomial(&order, cfg)?;
    if !h.poly_eval(&h.poly_from_int(&cp.poly), &j0).is_zero() {
        return Err(Error::Invariant("j0 is not a root of the class polynomial".into()));
    }

    let e = curve_from_family(Family::A, &h, &j0)?;
    let (a, b) = e.short_coeffs();
    expect_eq("A", &h, &a, &parse_elem(&h, &r.a)?)?;
    expect_eq("B", &h, &b, &parse_elem(&h, &r.b)?)?;

    let psi3 = division_polynomial(&e, 3);
    let factors = h.factor(&psi3)?;
    let quadratic: Vec<AlgElem> = r
        .psi3_quadratic
        .iter()
        .map(|c| parse_elem(&h, c))
        .collect::<Result<_>>()?;
    if !factors.iter().any(|(g, _)| *g == quadratic) {
        return Err(Error::Invariant(format!(
            "psi_3 factorization mismatch: no factor {}",
            h.poly_format(&quadratic)
        )));
    }
    let roots: Vec<AlgElem> = factors
        .iter()
        .filter(|(g, _)| g.len() == 2)
        .map(|(g, _)| g[0].neg())
        .collect();
    // 𝔭_3 = (3, √-5 + 1)
    let mut x3 = None;
    let mut kernel_primes = Vec::new();
    for x in &roots {
        let ev = kernel_test(&e, x, 3, -1, 6)?;
        if ev.consistent {
            if x3.is_some() {
                return Err(Error::Invariant("two roots pass the kernel test".into()));
            }
            x3 = Some(x.clone());
            kernel_primes = ev.primes;
        }
    }
    let x3 = x3.ok_or_else(|| Error::Invariant("no root of psi_3 lies in E[p_3]".into()))?;
    expect_eq("x3", &h, &x3, &parse_elem(&h, &r.x3)?)?;

    let alpha = e.short_rhs(&x3);
    let scale: BigInt = r
        .alpha_scale
        .parse()
        .map_err(|_| Error::InvalidInput("bad alpha scale".into()))?;
    expect_eq("alpha", &h, &alpha, &parse_elem(&h, &r.alpha)?.scale_int(&scale))?;
    let alpha_is_square = h.sqrt(&alpha)?.is_some();
    if alpha_is_square {
        return Err(Error::Invariant("alpha is a square in H".into()));
    }

    // H(√α) over K
    let l1 = h.adjoin_unchecked(&[alpha.neg(), h.zero(), h.one()], "r");
    let mut support = super::support_primes(&order, &e, 3, &[&alpha])?;
    support.sort_unstable();
    let (ng, _, _) = abelian_degree(&l1, -20, &support, 1, cfg)?;
    let sqrt_alpha_degree = (l1.degree() / 2) as u64;
    let sqrt_alpha_abelian_degree = ng.index.try_into().expect("small");

    let full = |curve: &CurveModel, label: &str| -> Result<IndexReport> {
        let c = compute(&order, curve, 3, &[], cfg)?;
        let labels = Labels {
            curve: label.to_string(),
            base: "H".into(),
            computed_over: "H = Q(s, i)".into(),
        };
        assemble(&order, curve, 3, 1, labels, c, cfg, 0, start)
    };
    let report_e = full(&e, "family a at j0 over H")?;
    let e_twist = twist(&e, &alpha, 2)?;
    let report_twist = full(&e_twist, "E' = E twisted by alpha")?;
    let j0c = h.bigint(&-&cp.poly.coeffs()[1]).sub(&j0);
    let e_conj = curve_from_family(Family::A, &h, &j0c)?;
    let report_conj = full(&e_conj, "family a at conjugate j0 over H")?;

    // E = E'^{(α)} and E' has maximal image, so L = H(√α) in the index formula.
    let w = order.unit_order();
    let hh = order.class_number();
    let index_e_shortcut = super::index_from_degrees(w, hh, sqrt_alpha_abelian_degree, sqrt_alpha_degree / hh, 1)?;
    let routes_agree = index_e_shortcut == report_e.index && report_twist.index == w;

    let demo = TwistDemo {
        field: "H = Q(s, i), s^2 = -5, i^2 = -1".into(),
        j0: h.format(&j0),
        model: e.to_string(),
        psi3_factors: factors.iter().map(|(g, _)| h.poly_format(g)).collect(),
        x3: h.format(&x3),
        kernel_primes,
        alpha: h.format(&alpha),
        alpha_is_square,
        sqrt_alpha_degree,
        sqrt_alpha_abelian_degree,
        sqrt_alpha_abelian: sqrt_alpha_abelian_degree == sqrt_alpha_degree,
        twist_model: e_twist.to_string(),
        index_e: report_e.index,
        index_e_shortcut,
        index_twist: report_twist.index,
        index_conjugate: report_conj.index,
        routes_agree,
        reports: vec![report_e, report_twist, report_conj],
    };
    let mut diffs = Vec::new();
    if demo.index_e != r.index_e {
        diffs.push(format!("index of E: expected {}, computed {}", r.index_e, demo.index_e));
    }
    if demo.index_twist != r.index_twist {
        diffs.push(format!("index of E': expected {}, computed {}", r.index_twist, demo.index_twist));
    }
    if demo.sqrt_alpha_abelian {
        diffs.push("H(sqrt alpha)/K came out abelian".into());
    }
    if !demo.routes_agree {
        diffs.push(format!(
            "shortcut index {} differs from division-field index {}",
            demo.index_e_shortcut, demo.index_e
        ));
    }
    if demo.index_conjugate != demo.index_e {
        diffs.push("conjugate j0 gives a different index".into());
    }
    if !diffs.is_empty() {
        return Err(Error::Invariant(diffs.join("; ")));
    }
    Ok(demo)
}
