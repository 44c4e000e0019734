use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use super::RayClassGroup;
use crate::arith::modp::is_prime_u64;
use crate::arith::snf::hermite_rows;
use crate::error::{Error, Result};
use crate::numfield::NumberField;
use crate::quadorder::{kronecker, QuadIdeal};

#[derive(Clone, Debug)]
pub struct NormGroupConfig {
    /// Largest rational prime sampled.
    pub prime_bound: u64,
    /// Stop once the index is unchanged over this many primes of `K` with a
    /// degree-one prime of `L` above them.
    pub stab_window: usize,
    /// Mixed into the PRNG of the residue-field factorizations.
    pub seed: u64,
    /// Known lower bound for the index; reaching it ends the search.
    pub floor: u64,
}

impl Default for NormGroupConfig {
    fn default() -> Self {
        NormGroupConfig {
            prime_bound: 10_000,
            stab_window: 50,
            seed: 0,
            floor: 1,
        }
    }
}

/// Subgroup of `Cl_m(K)` generated by the classes added so far.
#[derive(Clone, Debug)]
pub struct NormGroupAccumulator<'a> {
    group: &'a RayClassGroup,
    /// Hermite basis of the subgroup plus the Smith relations, in
    /// Smith coordinates.
    rows: Vec<Vec<BigInt>>,
    index: BigInt,
    pub history: Vec<(u64, BigInt)>,
    pub accepted: usize,
}

impl<'a> NormGroupAccumulator<'a> {
    pub fn new(group: &'a RayClassGroup) -> Self {
        let n = group.ngens();
        let rows: Vec<Vec<BigInt>> = group
            .group
            .diagonal()
            .iter()
            .enumerate()
            .map(|(j, d)| {
                let mut r = vec![BigInt::zero(); n];
                r[j] = d.clone();
                r
            })
            .collect();
        let index = group.order();
        NormGroupAccumulator {
            group,
            rows,
            index: index.clone(),
            history: vec![(0, index)],
            accepted: 0,
        }
    }

    pub fn index(&self) -> &BigInt {
        &self.index
    }

    /// Add `f·class`; returns whether the index dropped.
    pub fn add(&mut self, p: u64, class: &[BigInt], f: u64) -> bool {
        self.accepted += 1;
        let scaled: Vec<BigInt> = class.iter().map(|c| c * f).collect();
        let v = self.group.reduce(&scaled);
        if v.iter().all(|c| c.is_zero()) {
            return false;
        }
        self.rows.push(v);
        self.rows = hermite_rows(&self.rows, self.group.ngens());
        let idx: BigInt = self.rows.iter().enumerate().map(|(i, r)| r[i].clone()).product();
        if idx != self.index {
            debug_assert!(self.index.is_multiple_of(&idx));
            self.index = idx.clone();
            self.history.push((p, idx));
            true
        } else {
            false
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormGroupResult {
    /// `[L ∩ K^ab : K]`
    pub index: BigInt,
    pub ray_class_order: BigInt,
    /// `(p, index)` after each drop, starting from `(0, |Cl_m|)`.
    pub history: Vec<(u64, BigInt)>,
    /// Degree-one primes of `K` whose classes were added.
    pub primes_used: usize,
    /// Largest rational prime examined.
    pub last_prime: u64,
    /// Rational primes skipped as ramified or dividing a denominator.
    pub skipped: Vec<u64>,
    /// Stopped at the lower bound rather than by the window.
    pub reached_floor: bool,
}

/// `ω mod (p, √d - s)` for the maximal order of `ℚ(√d)`.
fn omega_residue(disc: i64, d: i64, p: u64, s: u64) -> u64 {
    let p = p as i128;
    let v = if disc == d {
        // (d + √d)/2
        (d as i128 + s as i128) * ((p + 1) / 2)
    } else {
        // 2d + √d
        2 * d as i128 + s as i128
    };
    v.rem_euclid(p) as u64
}

/// `[L ∩ K^ab : K]` for a tower whose first level is `K = ℚ(√d)`, by
/// accumulating `class(𝔭)^f` over split primes `𝔭` of `K` coprime to the
/// modulus, `f` the gcd of the residue degrees above `𝔭`. The modulus of
/// `group` must be divisible by the conductor of `L ∩ K^ab`.
pub fn norm_group_index(
    tower: &NumberField,
    group: &RayClassGroup,
    cfg: &NormGroupConfig,
) -> Result<NormGroupResult> {
    let d = tower
        .level1_radicand()
        .ok_or_else(|| Error::InvalidInput("first level is not K = Q(sqrt d)".into()))?;
    let disc = group.disc;
    if (if d.rem_euclid(4) == 1 { d } else { 4 * d }) != disc {
        return Err(Error::InvalidInput(format!(
            "tower is over Q(sqrt {d}), group over discriminant {disc}"
        )));
    }
    let degree = (tower.degree() / 2) as u64;
    let bad = group.modulus.rational_primes();
    let mut acc = NormGroupAccumulator::new(group);
    let mut since_change = 0usize;
    let mut skipped = Vec::new();
    let mut last_prime;
    let mut p = 2u64;
    while p <= cfg.prime_bound {
        let this = p;
        p += 1;
        if !is_prime_u64(this) || bad.contains(&this) || kronecker(disc, this) != 1 {
            continue;
        }
        last_prime = this;
        let dm = d.rem_euclid(this as i64) as u64;
        let mut roots: Vec<(u64, u64)> = crate::arith::PrimeField::new(this)?
            .sqrt(dm)
            .map(|s| {
                [s, (this - s) % this]
                    .into_iter()
                    .map(|s| (omega_residue(disc, d, this, s), s))
                    .collect()
            })
            .unwrap_or_default();
        roots.sort_unstable();
        roots.dedup();
        let mut records = Vec::new();
        let mut bad_prime = false;
        for &(r, s) in &roots {
            match tower.residue_degrees_with_seed(this, s, cfg.seed) {
                Ok(fs) => records.push((r, fs)),
                Err(Error::BadPrime(_)) => {
                    bad_prime = true;
                    break;
                }
                Err(e) => return Err(e),
            }
        }
        if bad_prime {
            skipped.push(this);
            continue;
        }
        for (r, fs) in records {
            let total: usize = fs.iter().sum();
            if total as u64 != degree {
                return Err(Error::Invariant(format!(
                    "residue degrees above ({this}, w - {r}) sum to {total}, expected {degree}"
                )));
            }
            let f = fs.iter().fold(0usize, |g, &x| g.gcd(&x)) as u64;
            let prime = QuadIdeal::prime_over(disc, this as i128, r as i128);
            let class = group.class_of(&prime)?;
            if acc.add(this, &class, f) {
                since_change = 0;
            } else if f == 1 {
                // Norms of degree-one primes are equidistributed in the
                // norm group; the others only add multiples.
                since_change += 1;
            }
        }
        let divides = (BigInt::from(degree) % acc.index()).is_zero();
        let reached_floor = *acc.index() <= BigInt::from(cfg.floor.max(1));
        if (since_change >= cfg.stab_window && divides) || reached_floor {
            return Ok(NormGroupResult {
                index: acc.index().clone(),
                ray_class_order: group.order(),
                history: acc.history.clone(),
                primes_used: acc.accepted,
                last_prime,
                skipped,
                reached_floor,
            });
        }
    }
    Err(Error::NotStabilized {
        bound: cfg.prime_bound,
        index: acc.index().to_string(),
    })
}
