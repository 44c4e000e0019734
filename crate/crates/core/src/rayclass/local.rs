//! `(O/𝔭^e)^×` as cyclic `(O/𝔭)^×` times the pro-`p` part `1 + 𝔭`.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::quadorder::{QuadElem, QuadIdeal};

/// Largest `1 + 𝔭` part enumerated explicitly.
const MAX_PPART: u64 = 1 << 22;

fn distinct_prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut q = 2;
    while q * q <= n {
        if n.is_multiple_of(q) {
            out.push(q);
            while n.is_multiple_of(q) {
                n /= q;
            }
        }
        q += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

#[derive(Clone, Debug)]
pub struct LocalUnits {
    pub p: u64,
    pub prime: QuadIdeal,
    pub exp: u32,
    pub power: QuadIdeal,
    /// `N𝔭`
    pub residue_size: u64,
    baby: HashMap<QuadElem, u64>,
    giant: QuadElem,
    giant_steps: u64,
    /// `x ↦ x^ppart_exp` projects onto `1 + 𝔭`.
    ppart_exp: u128,
    ppart_table: HashMap<QuadElem, Vec<i64>>,
    ppart_gens: usize,
    ppart_relations: Vec<Vec<i64>>,
}

impl LocalUnits {
    pub fn new(prime: QuadIdeal, p: u64, exp: u32) -> Result<Self> {
        let disc = prime.disc;
        let power = prime.pow(exp as u64);
        let n = prime.norm() as u64;
        let m1 = n - 1;
        let m2 = n.checked_pow(exp - 1).filter(|&m| m <= MAX_PPART).ok_or_else(|| {
            Error::InvalidInput(format!("modulus component {n}^{exp} too large"))
        })?;
        let mulp = |a: &QuadElem, b: &QuadElem| prime.reduce_elem(&a.mul(b, disc));
        let powp = |a: &QuadElem, mut e: u64| {
            let (mut r, mut b) = (QuadElem::int(1), prime.reduce_elem(a));
            while e > 0 {
                if e & 1 == 1 {
                    r = mulp(&r, &b);
                }
                b = mulp(&b, &b);
                e >>= 1;
            }
            r
        };
        let one = prime.reduce_elem(&QuadElem::int(1));
        let factors = distinct_prime_factors(m1);
        let gen = (0..p as i128)
            .flat_map(|t| (0..p as i128).map(move |s| QuadElem::new(s, t)))
            .map(|x| prime.reduce_elem(&x))
            .find(|x| {
                prime.coprime_to(x) && factors.iter().all(|q| powp(x, m1 / q) != one)
            })
            .ok_or_else(|| Error::Invariant("no generator of the residue field".into()))?;
        let giant_steps = (m1 as f64).sqrt().ceil() as u64 + 1;
        let mut baby = HashMap::with_capacity(giant_steps as usize);
        let mut cur = one;
        for j in 0..giant_steps {
            baby.entry(cur).or_insert(j);
            cur = mulp(&cur, &gen);
        }
        // g^{-m}
        let giant = powp(&gen, (m1 - giant_steps % m1) % m1);

        // a·m1 ≡ 1 (mod m2); x^{a m1} is the 1 + 𝔭 component.
        let order = m1 as u128 * m2 as u128;
        let ppart_exp = if m2 == 1 {
            0
        } else {
            let a = crate::quadorder::inv_mod(m1 as i128 % m2 as i128, m2 as i128)
                .expect("coprime orders") as u128;
            (a * m1 as u128) % order
        };

        let mut local = LocalUnits {
            p,
            prime,
            exp,
            power,
            residue_size: n,
            baby,
            giant,
            giant_steps,
            ppart_exp,
            ppart_table: HashMap::new(),
            ppart_gens: 0,
            ppart_relations: Vec::new(),
        };
        local.build_ppart(m2)?;
        Ok(local)
    }

    fn uniformizer(&self) -> QuadElem {
        let sq = self.prime.mul(&self.prime);
        let b = self.prime.basis()[1];
        [QuadElem::int(self.p as i128), b, b.add(&QuadElem::int(self.p as i128))]
            .into_iter()
            .find(|x| !sq.contains(x))
            .expect("some generator of 𝔭 is not in 𝔭^2")
    }

    fn mul(&self, a: &QuadElem, b: &QuadElem) -> QuadElem {
        self.power.reduce_elem(&a.mul(b, self.prime.disc))
    }

    fn pow(&self, a: &QuadElem, mut e: u128) -> QuadElem {
        let (mut r, mut b) = (self.power.reduce_elem(&QuadElem::int(1)), self.power.reduce_elem(a));
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(&r, &b);
            }
            b = self.mul(&b, &b);
            e >>= 1;
        }
        r
    }

    /// Enumerate `1 + 𝔭 mod 𝔭^e` from the generators `1 + β π^i`.
    fn build_ppart(&mut self, size: u64) -> Result<()> {
        let one = self.power.reduce_elem(&QuadElem::int(1));
        let mut elems: Vec<(QuadElem, Vec<i64>)> = vec![(one, Vec::new())];
        self.ppart_table.insert(one, Vec::new());
        if size > 1 {
            let pi = self.uniformizer();
            let mut gens = Vec::new();
            let mut pik = pi;
            for _ in 1..self.exp {
                for beta in [QuadElem::int(1), QuadElem::omega()] {
                    gens.push(self.power.reduce_elem(&one.add(&beta.mul(&pik, self.prime.disc))));
                }
                pik = pik.mul(&pi, self.prime.disc);
            }
            for g in gens {
                if elems.len() as u64 == size {
                    break;
                }
                let k = self.ppart_gens;
                let (mut n, mut cur) = (1i64, g);
                while !self.ppart_table.contains_key(&cur) {
                    cur = self.mul(&cur, &g);
                    n += 1;
                }
                if n == 1 {
                    continue;
                }
                self.ppart_gens += 1;
                let mut rel: Vec<i64> = self.ppart_table[&cur].iter().map(|c| -c).collect();
                rel.resize(k + 1, 0);
                rel[k] += n;
                self.ppart_relations.push(rel);
                let base = elems.clone();
                let mut gt = one;
                for t in 1..n {
                    gt = self.mul(&gt, &g);
                    for (s, v) in &base {
                        let e = self.mul(s, &gt);
                        let mut v = v.clone();
                        v.resize(k + 1, 0);
                        v[k] = t;
                        self.ppart_table.insert(e, v.clone());
                        elems.push((e, v));
                    }
                }
            }
            if elems.len() as u64 != size {
                return Err(Error::Invariant(format!(
                    "1 + p enumeration reached {} of {size} elements",
                    elems.len()
                )));
            }
        }
        let k = self.ppart_gens;
        for v in self.ppart_table.values_mut() {
            v.resize(k, 0);
        }
        for r in self.ppart_relations.iter_mut() {
            r.resize(k, 0);
        }
        Ok(())
    }

    /// Number of coordinates: one cyclic plus the `1 + 𝔭` generators.
    pub fn ngens(&self) -> usize {
        1 + self.ppart_gens
    }

    pub fn order(&self) -> u64 {
        (self.residue_size - 1) * self.residue_size.pow(self.exp - 1)
    }

    /// Relations among the local coordinates.
    pub fn relations(&self) -> Vec<Vec<i64>> {
        let mut rels = Vec::new();
        let mut r = vec![0; self.ngens()];
        r[0] = (self.residue_size - 1) as i64;
        rels.push(r);
        for pr in &self.ppart_relations {
            let mut r = vec![0];
            r.extend(pr);
            rels.push(r);
        }
        rels
    }

    fn dlog_residue(&self, x: &QuadElem) -> Result<u64> {
        let m1 = self.residue_size - 1;
        let mut y = self.prime.reduce_elem(x);
        for i in 0..=self.giant_steps {
            if let Some(&j) = self.baby.get(&y) {
                return Ok((i * self.giant_steps + j) % m1);
            }
            y = self.prime.reduce_elem(&y.mul(&self.giant, self.prime.disc));
        }
        Err(Error::NotCoprime)
    }

    /// Coordinates of a unit modulo `𝔭^e`.
    pub fn dlog(&self, x: &QuadElem) -> Result<Vec<i64>> {
        if !self.prime.coprime_to(x) {
            return Err(Error::NotCoprime);
        }
        let mut v = vec![self.dlog_residue(x)? as i64];
        let pp = self.pow(x, self.ppart_exp);
        let c = self
            .ppart_table
            .get(&pp)
            .ok_or_else(|| Error::Invariant("element missing from 1 + p table".into()))?;
        v.extend(c);
        Ok(v)
    }
}
