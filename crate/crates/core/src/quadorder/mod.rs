//! Imaginary quadratic orders, reduced forms and ideal arithmetic.

mod form;
mod ideal;

pub use form::{reduced_forms, Form};
pub use ideal::{inv_mod, QuadElem, QuadIdeal};

use crate::error::{Error, Result};

/// Order of discriminant `disc = conductor^2 * fundamental`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct QuadOrder {
    disc: i64,
    fundamental: i64,
    conductor: i64,
}

fn is_squarefree(mut n: i64) -> bool {
    n = n.abs();
    let mut p = 2;
    while p * p <= n {
        if n % (p * p) == 0 {
            return false;
        }
        if n % p == 0 {
            n /= p;
        }
        p += 1;
    }
    true
}

pub fn is_fundamental(d: i64) -> bool {
    match d.rem_euclid(4) {
        1 => is_squarefree(d),
        0 => {
            let m = d / 4;
            matches!(m.rem_euclid(4), 2 | 3) && is_squarefree(m)
        }
        _ => false,
    }
}

impl QuadOrder {
    pub fn new(disc: i64) -> Result<Self> {
        if disc >= 0 || !matches!(disc.rem_euclid(4), 0 | 1) {
            return Err(Error::InvalidDiscriminant(disc));
        }
        let mut f = 1i64;
        while f * f <= -disc {
            f += 1;
        }
        while f >= 1 {
            if disc % (f * f) == 0 && is_fundamental(disc / (f * f)) {
                return Ok(QuadOrder {
                    disc,
                    fundamental: disc / (f * f),
                    conductor: f,
                });
            }
            f -= 1;
        }
        Err(Error::InvalidDiscriminant(disc))
    }

    pub fn disc(&self) -> i64 {
        self.disc
    }

    pub fn fundamental_disc(&self) -> i64 {
        self.fundamental
    }

    pub fn conductor(&self) -> i64 {
        self.conductor
    }

    pub fn is_maximal(&self) -> bool {
        self.conductor == 1
    }

    pub fn maximal(&self) -> QuadOrder {
        QuadOrder::new(self.fundamental).expect("fundamental discriminant")
    }

    /// Squarefree `d` with `K = ℚ(√d)`.
    pub fn field_radicand(&self) -> i64 {
        if self.fundamental % 4 == 0 {
            self.fundamental / 4
        } else {
            self.fundamental
        }
    }

    pub fn unit_order(&self) -> u64 {
        match self.disc {
            -3 => 6,
            -4 => 4,
            _ => 2,
        }
    }

    pub fn reduced_forms(&self) -> Vec<Form> {
        reduced_forms(self.disc)
    }

    pub fn class_number(&self) -> u64 {
        self.reduced_forms().len() as u64
    }

    pub fn principal_form(&self) -> Form {
        Form::principal(self.disc)
    }

    /// Kronecker symbol `(Δ_K / p)` for a prime `p`: 1 split, -1 inert, 0 ramified.
    pub fn splitting(&self, p: u64) -> i32 {
        kronecker(self.fundamental, p)
    }

    /// Roots of `x^2 - Δ x + (Δ^2 - Δ)/4` modulo `p` (the minimal polynomial of `ω`).
    pub fn omega_roots_mod(&self, p: u64) -> Vec<u64> {
        let d = self.disc as i128;
        let p128 = p as i128;
        let c = ((d * d - d) / 4).rem_euclid(p128);
        let b = (-d).rem_euclid(p128);
        if p < 50_000 {
            return (0..p)
                .filter(|&x| {
                    let x = x as i128;
                    (x * x + b * x + c).rem_euclid(p128) == 0
                })
                .collect();
        }
        let f = crate::arith::PrimeField::new(p).expect("prime");
        let disc = (b * b - 4 * c).rem_euclid(p128) as u64;
        let Some(s) = f.sqrt(disc) else {
            return Vec::new();
        };
        let inv2 = (p128 + 1) / 2;
        let mut roots: Vec<u64> = [s as i128, -(s as i128)]
            .iter()
            .map(|&s| (((-b + s) * inv2).rem_euclid(p128)) as u64)
            .collect();
        roots.sort_unstable();
        roots.dedup();
        roots
    }
}

/// Kronecker symbol `(d / p)` for a prime `p`.
pub fn kronecker(d: i64, p: u64) -> i32 {
    if p == 2 {
        return match d.rem_euclid(8) {
            1 | 7 => 1,
            3 | 5 => -1,
            _ => 0,
        };
    }
    let a = d.rem_euclid(p as i64) as u64;
    if a == 0 {
        return 0;
    }
    let r = crate::arith::modp::pow_mod(a, (p - 1) / 2, p);
    if r == 1 {
        1
    } else {
        -1
    }
}
