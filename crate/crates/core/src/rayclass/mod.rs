//! Ray class groups of imaginary quadratic fields and the norm-group index
//! `[L ∩ K^ab : K]` of a tower `L ⊇ K`.

mod local;
mod norm;
#[cfg(test)]
mod tests;

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

pub use local::LocalUnits;
pub use norm::{norm_group_index, NormGroupAccumulator, NormGroupConfig, NormGroupResult};

use crate::arith::snf::AbelianGroup;
use crate::error::{Error, Result};
use crate::quadorder::{kronecker, Form, QuadElem, QuadIdeal, QuadOrder};

/// A prime power `𝔭^e` of `O_K` dividing the modulus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimePower {
    pub p: u64,
    pub prime: QuadIdeal,
    pub exp: u32,
}

/// Modulus `m = ∏ 𝔭^e`, sorted by `(p, 𝔭)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Modulus {
    pub parts: Vec<PrimePower>,
}

/// Primes of `O_K` above `p`, with ramification index `e(𝔭/p)`.
pub fn primes_above(disc: i64, p: u64) -> Vec<(QuadIdeal, u32)> {
    let ord = QuadOrder::new(disc).expect("fundamental discriminant");
    match kronecker(disc, p) {
        -1 => vec![(
            QuadIdeal::from_generators(disc, &[QuadElem::int(p as i128)]).expect("nonzero"),
            1,
        )],
        s => ord
            .omega_roots_mod(p)
            .into_iter()
            .map(|r| (QuadIdeal::prime_over(disc, p as i128, r as i128), if s == 0 { 2 } else { 1 }))
            .collect(),
    }
}

impl Modulus {
    pub fn unit() -> Self {
        Modulus::default()
    }

    /// `∏_{𝔭 | p} 𝔭^{e}` for each `(p, e)` listed.
    pub fn from_rational(disc: i64, primes: &[(u64, u32)]) -> Self {
        let mut parts = Vec::new();
        for &(p, e) in primes {
            for (prime, _) in primes_above(disc, p) {
                parts.push(PrimePower { p, prime, exp: e });
            }
        }
        let mut m = Modulus { parts };
        m.normalize();
        m
    }

    /// Conservative conductor bound for an extension of degree `degree`
    /// unramified outside `support`: exponent 1 at tame primes, and
    /// `⌊e/(p-1)⌋ + 1 + e·v_p(degree)` at primes dividing the degree.
    pub fn for_extension(disc: i64, support: &[u64], degree: u64) -> Self {
        let mut parts = Vec::new();
        let mut support = support.to_vec();
        support.sort_unstable();
        support.dedup();
        for &p in &support {
            for (prime, e) in primes_above(disc, p) {
                let exp = if !degree.is_multiple_of(p) {
                    1
                } else {
                    let mut v = 0;
                    let mut d = degree;
                    while d.is_multiple_of(p) {
                        d /= p;
                        v += 1;
                    }
                    e / (p as u32 - 1) + 1 + v * e
                };
                parts.push(PrimePower { p, prime, exp });
            }
        }
        let mut m = Modulus { parts };
        m.normalize();
        m
    }

    fn normalize(&mut self) {
        self.parts.sort_by_key(|pp| (pp.p, pp.prime.a, pp.prime.b, pp.prime.c));
        let mut out: Vec<PrimePower> = Vec::new();
        for pp in self.parts.drain(..) {
            match out.last_mut() {
                Some(last) if last.prime == pp.prime => last.exp = last.exp.max(pp.exp),
                _ => out.push(pp),
            }
        }
        self.parts = out;
    }

    /// Rational primes below the modulus.
    pub fn rational_primes(&self) -> Vec<u64> {
        let mut ps: Vec<u64> = self.parts.iter().map(|pp| pp.p).collect();
        ps.dedup();
        ps
    }

    pub fn norm(&self) -> BigInt {
        self.parts
            .iter()
            .map(|pp| BigInt::from(pp.prime.norm()).pow(pp.exp))
            .product()
    }

    pub fn is_coprime_to(&self, a: &QuadIdeal) -> bool {
        self.parts.iter().all(|pp| {
            let mut vs = a.basis().to_vec();
            vs.extend(pp.prime.basis());
            QuadIdeal::from_generators(a.disc, &vs).is_some_and(|s| s.norm() == 1)
        })
    }

    /// `m·𝔮` for an extra prime power.
    pub fn with(&self, p: u64, prime: QuadIdeal, exp: u32) -> Self {
        let mut m = self.clone();
        m.parts.push(PrimePower { p, prime, exp });
        m.normalize();
        m
    }
}

impl std::fmt::Display for Modulus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.parts.is_empty() {
            return write!(f, "(1)");
        }
        let s: Vec<String> = self
            .parts
            .iter()
            .map(|pp| format!("{:?}^{}", pp.prime, pp.exp))
            .collect();
        write!(f, "{}", s.join("·"))
    }
}

/// Generator of the cyclic class group together with its class table.
#[derive(Clone, Debug)]
struct ClassPart {
    q: QuadIdeal,
    h: u64,
    powers: HashMap<Form, u64>,
}

/// `Cl_m(K)` presented on a class-group generator `𝔮` (absent when `h = 1`)
/// and the local coordinates of `(O/m)^×`.
#[derive(Clone, Debug)]
pub struct RayClassGroup {
    pub disc: i64,
    pub modulus: Modulus,
    pub locals: Vec<LocalUnits>,
    class: Option<ClassPart>,
    offsets: Vec<usize>,
    ngens: usize,
    pub group: AbelianGroup,
    /// `|image of O_K^× in (O/m)^×|`
    pub unit_image: u64,
}

/// Generator of `O_K^×`.
fn unit_generator(disc: i64) -> (QuadElem, u64) {
    match disc {
        -4 => (QuadElem::new(2, 1), 4),
        -3 => (QuadElem::new(2, 1), 6),
        _ => (QuadElem::int(-1), 2),
    }
}

impl RayClassGroup {
    pub fn new(disc: i64, modulus: &Modulus) -> Result<Self> {
        let ord = QuadOrder::new(disc)?;
        if !ord.is_maximal() {
            return Err(Error::InvalidInput(format!("{disc} is not a fundamental discriminant")));
        }
        let locals = modulus
            .parts
            .iter()
            .map(|pp| LocalUnits::new(pp.prime, pp.p, pp.exp))
            .collect::<Result<Vec<_>>>()?;
        let h = ord.class_number();
        let class = if h > 1 {
            Some(Self::class_part(disc, h, modulus)?)
        } else {
            None
        };
        let mut offsets = Vec::new();
        let mut ngens = usize::from(class.is_some());
        for l in &locals {
            offsets.push(ngens);
            ngens += l.ngens();
        }
        let mut g = RayClassGroup {
            disc,
            modulus: modulus.clone(),
            locals,
            class,
            offsets,
            ngens,
            group: AbelianGroup::from_relations(0, &[]),
            unit_image: 1,
        };
        let mut rels: Vec<Vec<BigInt>> = Vec::new();
        for (l, &off) in g.locals.iter().zip(&g.offsets) {
            for r in l.relations() {
                let mut row = vec![BigInt::from(0); ngens];
                for (i, c) in r.iter().enumerate() {
                    row[off + i] = BigInt::from(*c);
                }
                rels.push(row);
            }
        }
        let (u, w) = unit_generator(disc);
        rels.push(g.elem_coords(&u)?);
        if let Some(cp) = &g.class {
            let gamma = cp.q.pow(cp.h).principal_generator().ok_or_else(|| {
                Error::Invariant("h-th power of the class generator is not principal".into())
            })?;
            let mut row = g.elem_coords(&gamma)?;
            for c in row.iter_mut() {
                *c = -&*c;
            }
            row[0] += BigInt::from(cp.h);
            rels.push(row);
        }
        g.group = AbelianGroup::from_relations(ngens, &rels);
        // units congruent to 1 mod m
        let mut fixed = 0u64;
        let mut x = QuadElem::int(1);
        for _ in 0..w {
            if g
                .modulus
                .parts
                .iter()
                .zip(&g.locals)
                .all(|(_, l)| l.power.contains(&x.sub(&QuadElem::int(1))))
            {
                fixed += 1;
            }
            x = x.mul(&u, disc);
        }
        g.unit_image = w / fixed;
        let local_order: BigInt = g.locals.iter().map(|l| BigInt::from(l.order())).product();
        let expected = BigInt::from(h) * local_order / BigInt::from(g.unit_image);
        if g.order() != expected {
            return Err(Error::Invariant(format!(
                "ray class group order {} does not match h·|(O/m)^×|/|units| = {expected}",
                g.order()
            )));
        }
        Ok(g)
    }

    fn class_part(disc: i64, h: u64, modulus: &Modulus) -> Result<ClassPart> {
        let ord = QuadOrder::new(disc)?;
        let bad = modulus.rational_primes();
        for q in 2u64.. {
            if q > 100_000 {
                break;
            }
            if !crate::arith::modp::is_prime_u64(q) || bad.contains(&q) || kronecker(disc, q) != 1 {
                continue;
            }
            let r = ord.omega_roots_mod(q)[0];
            let prime = QuadIdeal::prime_over(disc, q as i128, r as i128);
            if prime.to_form().reduce().order()? != h {
                continue;
            }
            let mut powers = HashMap::new();
            let mut cur = QuadIdeal::unit(disc);
            for k in 0..h {
                powers.insert(cur.to_form().reduce(), k);
                cur = cur.mul(&prime);
            }
            return Ok(ClassPart { q: prime, h, powers });
        }
        Err(Error::InvalidInput(format!(
            "class group of discriminant {disc} is not cyclic"
        )))
    }

    pub fn ngens(&self) -> usize {
        self.ngens
    }

    pub fn order(&self) -> BigInt {
        self.group.order().expect("finite")
    }

    pub fn invariants(&self) -> Vec<BigInt> {
        self.group.invariants()
    }

    pub fn class_number(&self) -> u64 {
        self.class.as_ref().map_or(1, |c| c.h)
    }

    /// Coordinates of the principal ideal `(β)`, `β` coprime to `m`.
    pub fn elem_coords(&self, beta: &QuadElem) -> Result<Vec<BigInt>> {
        let mut v = vec![BigInt::from(0); self.ngens];
        for (l, &off) in self.locals.iter().zip(&self.offsets) {
            for (i, c) in l.dlog(beta)?.into_iter().enumerate() {
                v[off + i] = BigInt::from(c);
            }
        }
        Ok(v)
    }

    /// Coordinates of the ray class of an ideal coprime to `m`.
    pub fn class_of(&self, a: &QuadIdeal) -> Result<Vec<BigInt>> {
        if !self.modulus.is_coprime_to(a) {
            return Err(Error::NotCoprime);
        }
        let Some(cp) = &self.class else {
            let beta = a
                .principal_generator()
                .ok_or_else(|| Error::Invariant("ideal of a class number one field not principal".into()))?;
            return self.elem_coords(&beta);
        };
        let x = *cp
            .powers
            .get(&a.to_form().reduce())
            .ok_or_else(|| Error::Invariant("ideal class missing from the class table".into()))?;
        let k = (cp.h - x) % cp.h;
        let b = a.mul(&cp.q.pow(k));
        let beta = b
            .principal_generator()
            .ok_or_else(|| Error::Invariant("adjusted ideal is not principal".into()))?;
        let mut v = self.elem_coords(&beta)?;
        v[0] -= BigInt::from(k);
        Ok(v)
    }

    /// Canonical form of a class (residues modulo the invariant factors).
    pub fn reduce(&self, v: &[BigInt]) -> Vec<BigInt> {
        self.group.reduce(v)
    }

    pub fn is_identity(&self, v: &[BigInt]) -> bool {
        self.group.is_identity(v)
    }

    /// Order of the group as a machine integer.
    pub fn order_u64(&self) -> Option<u64> {
        self.order().to_u64()
    }
}
