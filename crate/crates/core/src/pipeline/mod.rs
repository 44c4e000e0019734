//! From a discriminant or an explicit curve to the index
//! `𝓘 = w·[L∩K^ab : K] / (h·[L : F])` with `L = F(E[n])`.

mod curvefile;
mod data;
mod twist;

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Serialize;

pub use curvefile::{parse_curve_file, CurveFile};
pub use data::{reference, RationalCurve, Reference, TwistReference};
pub use twist::{twist_demo, TwistDemo};

use crate::arith::factor::prime_divisors;
use crate::classpoly::{cached_class_polynomial, ring_class_polynomial_from, ClassPolynomial};
use crate::cmcurve::{curve_from_family, division_field, CurveModel, Family};
use crate::error::{Error, Result};
use crate::numfield::{AlgElem, NumberField};
use crate::quadorder::{kronecker, QuadOrder};
use crate::rayclass::{norm_group_index, Modulus, NormGroupConfig, NormGroupResult, RayClassGroup};

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub prime_bound: u64,
    pub stab_window: usize,
    pub seed: u64,
    /// Starting precision (bits) for class polynomials; `None` uses the
    /// coefficient-size estimate.
    pub start_precision: Option<u32>,
    pub cache_dir: Option<PathBuf>,
    /// Wall-clock timings make reports run-dependent, so they are opt-in.
    pub record_timings: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            prime_bound: 10_000,
            stab_window: 50,
            seed: 0,
            start_precision: None,
            cache_dir: None,
            record_timings: false,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.prime_bound < 5 || self.stab_window == 0 {
            return Err(Error::InvalidInput(
                "prime bound and stabilization window must be positive".into(),
            ));
        }
        Ok(())
    }

    fn norm_group(&self, floor: u64) -> NormGroupConfig {
        NormGroupConfig {
            prime_bound: self.prime_bound,
            stab_window: self.stab_window,
            seed: self.seed,
            floor,
        }
    }
}

/// Where the curve is defined.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Base {
    /// `ℚ(j_0)`; the computation runs over `ℚ(j_0)K = H`.
    Moduli,
    /// The ring class field `H = K(j_0)`.
    RingClass,
}

impl std::str::FromStr for Base {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "moduli" => Ok(Base::Moduli),
            "ringclass" | "ring-class" => Ok(Base::RingClass),
            _ => Err(Error::InvalidInput(format!("unknown base '{s}'"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct IndexSpec {
    pub disc: i64,
    pub family: Family,
    pub base: Base,
    pub n: usize,
    /// Use the other root of `H_Δ` as `j_0` (class number 2).
    pub conjugate: bool,
}

impl IndexSpec {
    pub fn new(disc: i64) -> Self {
        IndexSpec {
            disc,
            family: Family::A,
            base: Base::Moduli,
            n: 3,
            conjugate: false,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Timings {
    pub class_polynomial_ms: u64,
    pub division_field_ms: u64,
    pub norm_group_ms: u64,
    pub total_ms: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IndexReport {
    pub disc: i64,
    pub fundamental_disc: i64,
    pub class_number: u64,
    pub units: u64,
    pub curve: String,
    pub model: String,
    pub base: String,
    /// Field over which the division field is built.
    pub computed_over: String,
    pub n: usize,
    /// `[L : F]`, with `F` the field in `computed_over`.
    pub division_degree: u64,
    /// `[F(x(E[n])) : F]`
    pub x_degree: u64,
    /// `[L : K]`
    pub degree_over_k: u64,
    /// `[L ∩ K^ab : K]`
    pub abelian_degree: u64,
    /// `[F ∩ K^ab : H]`
    pub base_abelian_degree: u64,
    pub index: u64,
    pub modulus: String,
    pub ray_class_invariants: Vec<String>,
    pub primes_used: usize,
    pub last_prime: u64,
    /// The index reached the lower bound `h·[L:F]/w`.
    pub reached_floor: bool,
    pub skipped_primes: Vec<u64>,
    /// `(p, index)` after each drop of the norm-group index.
    pub index_history: Vec<(u64, String)>,
    pub prime_bound: u64,
    pub stab_window: usize,
    pub grh_assumed: bool,
    pub seed: u64,
    pub timings: Option<Timings>,
}

/// `H = K(j_0)` as a tower over `K = ℚ(√d)`.
#[derive(Clone, Debug)]
pub struct RingClassField {
    pub order: QuadOrder,
    pub poly: ClassPolynomial,
    pub k: NumberField,
    pub field: NumberField,
    pub j0: AlgElem,
}

pub fn class_polynomial(order: &QuadOrder, cfg: &RunConfig) -> Result<ClassPolynomial> {
    let cp = match cfg.start_precision {
        Some(p) => ring_class_polynomial_from(order, p)?,
        None => cached_class_polynomial(order, cfg.cache_dir.as_deref())?,
    };
    if cp.degree() as u64 != order.class_number() {
        return Err(Error::Invariant(format!(
            "class polynomial of degree {} for class number {}",
            cp.degree(),
            order.class_number()
        )));
    }
    Ok(cp)
}

pub fn ring_class_field(order: &QuadOrder, cfg: &RunConfig) -> Result<RingClassField> {
    let poly = class_polynomial(order, cfg)?;
    let k = NumberField::quadratic(order.field_radicand(), "s")?;
    let (field, j0) = if poly.degree() == 1 {
        let c = &poly.poly.coeffs()[0];
        (k.clone(), k.bigint(&-c))
    } else {
        let f = k.adjoin(&k.poly_from_int(&poly.poly), "j")?;
        let j = f.gen();
        (f, j)
    };
    Ok(RingClassField {
        order: *order,
        poly,
        k,
        field,
        j0,
    })
}

/// `|(𝒪/n𝒪)^×|`
pub fn unit_group_order_mod(order: &QuadOrder, n: u64) -> Result<u64> {
    let mut total = n * n;
    for p in prime_divisors(&BigInt::from(n))? {
        let p = p.to_u64().expect("small");
        let chi = kronecker(order.disc(), p);
        total = total / p * (p - 1);
        total = total / p * (p as i64 - chi as i64) as u64;
    }
    Ok(total)
}

fn denominator_primes(a: &AlgElem, out: &mut BTreeSet<BigInt>) -> Result<()> {
    if !a.is_zero() {
        out.extend(prime_divisors(a.denominator())?);
    }
    Ok(())
}

/// Primes dividing `N(g'(θ))` for each level `θ` with relative polynomial `g`:
/// the primes where the tower can ramify.
pub fn tower_ramification_primes(f: &NumberField) -> Result<Vec<u64>> {
    let mut ps = BTreeSet::new();
    for k in 1..=f.depth() {
        let fk = f.truncate(k);
        let g: Vec<AlgElem> = fk.rel_poly().iter().map(|c| fk.lift(c)).collect();
        let d = fk.poly_eval(&fk.poly_derivative(&g), &fk.stored_gen(k));
        let nm = fk.norm(&d);
        ps.extend(prime_divisors(nm.numer())?);
        ps.extend(prime_divisors(nm.denom())?);
    }
    ps.into_iter()
        .map(|p: BigInt| {
            p.to_u64()
                .ok_or_else(|| Error::InvalidInput(format!("ramified prime {p} exceeds 64 bits")))
        })
        .collect()
}

/// Rational primes below every prime where `L = F(E[n])` can ramify over
/// `F`, plus 2, 3 and the primes of the discriminant of the order.
pub fn support_primes(order: &QuadOrder, e: &CurveModel, n: usize, extra: &[&AlgElem]) -> Result<Vec<u64>> {
    let f = e.field();
    let mut ps: BTreeSet<BigInt> = [2, 3].into_iter().map(BigInt::from).collect();
    ps.extend(prime_divisors(&BigInt::from(order.disc()))?);
    ps.extend(prime_divisors(&BigInt::from(n))?);
    let push_norm = |a: &AlgElem, ps: &mut BTreeSet<BigInt>| -> Result<()> {
        if a.is_zero() {
            return Ok(());
        }
        let nm = f.norm(a);
        ps.extend(prime_divisors(nm.numer())?);
        ps.extend(prime_divisors(nm.denom())?);
        denominator_primes(a, ps)
    };
    push_norm(&e.discriminant(), &mut ps)?;
    for c in e.coeffs() {
        push_norm(c, &mut ps)?;
    }
    for a in extra {
        push_norm(a, &mut ps)?;
    }
    for k in 1..=f.depth() {
        for c in f.truncate(k).rel_poly() {
            denominator_primes(&c, &mut ps)?;
        }
    }
    ps.into_iter()
        .map(|p| {
            p.to_u64()
                .ok_or_else(|| Error::InvalidInput(format!("support prime {p} exceeds 64 bits")))
        })
        .collect()
}

struct Computed {
    l_degree: u64,
    x_degree: u64,
    degree_over_k: u64,
    abelian: u64,
    modulus: Modulus,
    group: RayClassGroup,
    ng: NormGroupResult,
    division_ms: u64,
    norm_ms: u64,
}

/// `[L ∩ K^ab : K]` for a tower over `K` with the conservative modulus.
/// `floor` is a known lower bound for the answer.
pub fn abelian_degree(
    tower: &NumberField,
    disc_k: i64,
    support: &[u64],
    floor: u64,
    cfg: &RunConfig,
) -> Result<(NormGroupResult, Modulus, RayClassGroup)> {
    let deg = (tower.degree() / 2) as u64;
    let m = Modulus::for_extension(disc_k, support, deg);
    let g = RayClassGroup::new(disc_k, &m)?;
    let ng = norm_group_index(tower, &g, &cfg.norm_group(floor))?;
    let d = ng.index.to_u64().unwrap_or(0);
    if d == 0 || !deg.is_multiple_of(d) {
        return Err(Error::Invariant(format!(
            "abelian degree {} does not divide [L:K] = {deg}",
            ng.index
        )));
    }
    Ok((ng, m, g))
}

fn compute(
    order: &QuadOrder,
    e: &CurveModel,
    n: usize,
    extra_support: &[u64],
    cfg: &RunConfig,
) -> Result<Computed> {
    let t = Instant::now();
    let l = division_field(e, n)?;
    let division_ms = t.elapsed().as_millis() as u64;
    let bound = unit_group_order_mod(order, n as u64)?;
    if bound % l.degree as u64 != 0 {
        return Err(Error::Invariant(format!(
            "[L:F] = {} does not divide |(O/{n}O)^x| = {bound}",
            l.degree
        )));
    }
    let mut support = support_primes(order, e, n, &[])?;
    support.extend(extra_support);
    let t = Instant::now();
    // 𝓘 ≥ 1 gives d_ab ≥ h·[L:F]/w
    let floor = (order.class_number() * l.degree as u64).div_ceil(order.unit_order());
    let (ng, modulus, group) = abelian_degree(&l.field, order.fundamental_disc(), &support, floor, cfg)?;
    let norm_ms = t.elapsed().as_millis() as u64;
    Ok(Computed {
        l_degree: l.degree as u64,
        x_degree: l.x_degree as u64,
        degree_over_k: (l.field.degree() / 2) as u64,
        abelian: ng.index.to_u64().expect("checked"),
        modulus,
        group,
        ng,
        division_ms,
        norm_ms,
    })
}

struct Labels {
    curve: String,
    base: String,
    computed_over: String,
}

/// `𝓘 = w·d_ab/(h·[L:F])`, checking that it is a positive integer dividing
/// `[F∩K^ab:H]·w` and that `h·[F∩K^ab:H]` divides `d_ab`.
pub fn index_from_degrees(w: u64, h: u64, abelian: u64, l_degree: u64, base_abelian: u64) -> Result<u64> {
    if l_degree == 0 || h == 0 || !abelian.is_multiple_of(h * base_abelian) {
        return Err(Error::Invariant(format!(
            "[L∩K^ab:K] = {abelian} is not a multiple of [F∩K^ab:K] = {}",
            h * base_abelian
        )));
    }
    let num = w * abelian;
    let den = h * l_degree;
    if !num.is_multiple_of(den) || num < den {
        return Err(Error::Invariant(format!(
            "index w·d_ab/(h·[L:F]) = {num}/{den} is not a positive integer"
        )));
    }
    let index = num / den;
    if !(base_abelian * w).is_multiple_of(index) {
        return Err(Error::Invariant(format!(
            "index {index} does not divide [F∩K^ab:H]·w = {}",
            base_abelian * w
        )));
    }
    Ok(index)
}

#[allow(clippy::too_many_arguments)]
fn assemble(
    order: &QuadOrder,
    e: &CurveModel,
    n: usize,
    base_abelian: u64,
    labels: Labels,
    c: Computed,
    cfg: &RunConfig,
    class_ms: u64,
    start: Instant,
) -> Result<IndexReport> {
    let h = order.class_number();
    let w = order.unit_order();
    let index = index_from_degrees(w, h, c.abelian, c.l_degree, base_abelian)?;
    let timings = cfg.record_timings.then(|| Timings {
        class_polynomial_ms: class_ms,
        division_field_ms: c.division_ms,
        norm_group_ms: c.norm_ms,
        total_ms: start.elapsed().as_millis() as u64,
    });
    Ok(IndexReport {
        disc: order.disc(),
        fundamental_disc: order.fundamental_disc(),
        class_number: h,
        units: w,
        curve: labels.curve,
        model: e.to_string(),
        base: labels.base,
        computed_over: labels.computed_over,
        n,
        division_degree: c.l_degree,
        x_degree: c.x_degree,
        degree_over_k: c.degree_over_k,
        abelian_degree: c.abelian,
        base_abelian_degree: base_abelian,
        index,
        modulus: c.modulus.to_string(),
        ray_class_invariants: c.group.invariants().iter().map(|d| d.to_string()).collect(),
        primes_used: c.ng.primes_used,
        last_prime: c.ng.last_prime,
        reached_floor: c.ng.reached_floor,
        skipped_primes: c.ng.skipped,
        index_history: c.ng.history.iter().map(|(p, i)| (*p, i.to_string())).collect(),
        prime_bound: cfg.prime_bound,
        stab_window: cfg.stab_window,
        grh_assumed: true,
        seed: cfg.seed,
        timings,
    })
}

fn check_n(n: usize) -> Result<()> {
    if !(3..=12).contains(&n) {
        return Err(Error::InvalidInput(format!("division level {n} outside 3..=12")));
    }
    Ok(())
}

/// Index of the family curve with `j = j_0` for the order of discriminant `disc`.
pub fn compute_index(spec: &IndexSpec, cfg: &RunConfig) -> Result<IndexReport> {
    cfg.validate()?;
    check_n(spec.n)?;
    let start = Instant::now();
    let order = QuadOrder::new(spec.disc)?;
    let rcf = ring_class_field(&order, cfg)?;
    let class_ms = start.elapsed().as_millis() as u64;
    let h = order.class_number();
    let j0 = if spec.conjugate {
        if h != 2 {
            return Err(Error::InvalidInput("conjugate j0 needs class number 2".into()));
        }
        // other root: -c1 - j0
        let c1 = &rcf.poly.poly.coeffs()[1];
        rcf.field.bigint(&-c1).sub(&rcf.j0)
    } else {
        rcf.j0.clone()
    };
    let e = curve_from_family(spec.family, &rcf.field, &j0)?;
    let c = compute(&order, &e, spec.n, &[], cfg)?;
    let jname = if spec.conjugate { "j0'" } else { "j0" };
    let labels = Labels {
        curve: format!("family {} at {jname}", spec.family),
        base: match spec.base {
            Base::Moduli => format!("Q({jname})"),
            Base::RingClass => "H".to_string(),
        },
        computed_over: if h == 1 { "K".into() } else { "H = K(j0)".into() },
    };
    assemble(&order, &e, spec.n, 1, labels, c, cfg, class_ms, start)
}

/// Index of an explicit curve over `ℚ` (class number one) or over a tower
/// whose first level is `K`.
pub fn compute_index_curve(
    e: &CurveModel,
    disc: i64,
    label: &str,
    n: usize,
    cfg: &RunConfig,
) -> Result<IndexReport> {
    cfg.validate()?;
    check_n(n)?;
    let start = Instant::now();
    let order = QuadOrder::new(disc)?;
    let poly = class_polynomial(&order, cfg)?;
    let class_ms = start.elapsed().as_millis() as u64;
    let f = e.field();
    let j = e.j_invariant();
    if !f.poly_eval(&f.poly_from_int(&poly.poly), &j).is_zero() {
        return Err(Error::CmDeclaration(format!(
            "j = {} is not a root of the class polynomial of discriminant {disc}",
            f.format(&j)
        )));
    }
    let d = order.field_radicand();
    let h = order.class_number();
    let (e_fk, base, computed_over, base_abelian) = if f.depth() == 0 {
        let k = NumberField::quadratic(d, "s")?;
        (e.base_change(&k)?, "Q".to_string(), "K".to_string(), 1)
    } else {
        if f.level1_radicand() != Some(d) {
            return Err(Error::InvalidInput(format!(
                "the curve's tower must be Q or start with x^2 - ({d})"
            )));
        }
        let base_ab = if f.depth() == 1 {
            1
        } else {
            let mut support = support_primes(&order, e, n, &[])?;
            support.extend(tower_ramification_primes(f)?);
            let (ng, _, _) = abelian_degree(f, order.fundamental_disc(), &support, h, cfg)?;
            let dab = ng.index.to_u64().expect("checked");
            if dab % h != 0 {
                return Err(Error::Invariant(format!(
                    "[F∩K^ab:K] = {dab} is not a multiple of h = {h}"
                )));
            }
            dab / h
        };
        (e.clone(), format!("tower of degree {}", f.degree()), "F".to_string(), base_ab)
    };
    let extra = if f.depth() > 1 { tower_ramification_primes(f)? } else { Vec::new() };
    let c = compute(&order, &e_fk, n, &extra, cfg)?;
    let labels = Labels {
        curve: label.to_string(),
        base,
        computed_over,
    };
    assemble(&order, e, n, base_abelian, labels, c, cfg, class_ms, start)
}

/// `𝓘(E/ℚ)` for a curve over `ℚ` with CM by the order of discriminant `disc`.
pub fn compute_index_rational(e: &CurveModel, disc: i64, label: &str, cfg: &RunConfig) -> Result<IndexReport> {
    if e.field().depth() != 0 {
        return Err(Error::InvalidInput("curve is not defined over Q".into()));
    }
    let order = QuadOrder::new(disc)?;
    if order.class_number() != 1 {
        return Err(Error::InvalidInput(format!(
            "discriminant {disc} has class number {}",
            order.class_number()
        )));
    }
    compute_index_curve(e, disc, label, 3, cfg)
}

#[derive(Clone, Debug, Serialize)]
pub struct BatchRow {
    pub disc: i64,
    pub expected: u64,
    pub reports: Vec<IndexReport>,
    /// All families gave the same index.
    pub families_agree: bool,
    pub matches_expected: bool,
}

/// All class-number-two discriminants of the reference table, every family.
pub fn batch_class_number_2(
    families: &[Family],
    cfg: &RunConfig,
    mut progress: impl FnMut(&BatchRow),
) -> Result<Vec<BatchRow>> {
    let reference = reference();
    let mut rows = Vec::new();
    for &disc in &reference.class_number_two.discriminants {
        let expected = reference.expected_index(disc);
        let mut reports = Vec::new();
        for &family in families {
            let spec = IndexSpec {
                family,
                ..IndexSpec::new(disc)
            };
            reports.push(compute_index(&spec, cfg)?);
        }
        let families_agree = reports.windows(2).all(|w| w[0].index == w[1].index);
        let matches_expected = reports.iter().all(|r| r.index == expected);
        let row = BatchRow {
            disc,
            expected,
            reports,
            families_agree,
            matches_expected,
        };
        progress(&row);
        rows.push(row);
    }
    Ok(rows)
}
