use std::fmt;

use num_integer::Integer;

use super::form::{xgcd, Form};

/// Element `x + y ω` of the order of discriminant `Δ`, `ω = (Δ + √Δ)/2`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct QuadElem {
    pub x: i128,
    pub y: i128,
}

impl QuadElem {
    pub fn new(x: i128, y: i128) -> Self {
        QuadElem { x, y }
    }

    pub fn int(x: i128) -> Self {
        QuadElem { x, y: 0 }
    }

    pub fn omega() -> Self {
        QuadElem { x: 0, y: 1 }
    }

    /// `ω^2 = Δ ω - (Δ^2 - Δ)/4`
    pub fn mul(&self, o: &Self, disc: i64) -> Self {
        let d = disc as i128;
        let n = (d * d - d) / 4;
        QuadElem {
            x: self.x * o.x - self.y * o.y * n,
            y: self.x * o.y + self.y * o.x + self.y * o.y * d,
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        QuadElem::new(self.x + o.x, self.y + o.y)
    }

    pub fn sub(&self, o: &Self) -> Self {
        QuadElem::new(self.x - o.x, self.y - o.y)
    }

    pub fn neg(&self) -> Self {
        QuadElem::new(-self.x, -self.y)
    }

    pub fn conj(&self, disc: i64) -> Self {
        QuadElem::new(self.x + self.y * disc as i128, -self.y)
    }

    pub fn norm(&self, disc: i64) -> i128 {
        let d = disc as i128;
        self.x * self.x + d * self.x * self.y + (d * d - d) / 4 * self.y * self.y
    }

    pub fn trace(&self, disc: i64) -> i128 {
        2 * self.x + self.y * disc as i128
    }

    pub fn pow(&self, mut e: u64, disc: i64) -> Self {
        let mut acc = QuadElem::int(1);
        let mut b = *self;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b, disc);
            }
            b = b.mul(&b, disc);
            e >>= 1;
        }
        acc
    }

    /// Coordinates `(u, v)` with `self = (u + v √Δ) / 2`.
    pub fn half_coords(&self, disc: i64) -> (i128, i128) {
        (2 * self.x + self.y * disc as i128, self.y)
    }
}

/// Nonzero ideal of the order, stored as the ℤ-basis
/// `A`, `B + C ω` in Hermite form (`A, C > 0`, `0 <= B < A`).
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct QuadIdeal {
    pub disc: i64,
    pub a: i128,
    pub b: i128,
    pub c: i128,
}

/// Hermite basis of the ℤ-span of the given lattice vectors.
fn hnf2(vs: &[QuadElem]) -> Option<(i128, i128, i128)> {
    let mut vs: Vec<QuadElem> = vs.iter().copied().filter(|v| v.x != 0 || v.y != 0).collect();
    // Euclid on the y-coordinates.
    let mut top: Option<QuadElem> = None;
    loop {
        let nz: Vec<usize> = (0..vs.len()).filter(|&i| vs[i].y != 0).collect();
        if nz.is_empty() {
            break;
        }
        let p = *nz.iter().min_by_key(|&&i| vs[i].y.abs()).unwrap();
        if nz.len() == 1 {
            let mut v = vs.swap_remove(p);
            if v.y < 0 {
                v = v.neg();
            }
            top = Some(v);
            break;
        }
        let pv = vs[p];
        for &i in &nz {
            if i != p {
                let q = Integer::div_floor(&vs[i].y, &pv.y);
                vs[i] = vs[i].sub(&QuadElem::new(q * pv.x, q * pv.y));
            }
        }
    }
    let top = top?;
    let a = vs.iter().fold(0i128, |g, v| g.gcd(&v.x));
    if a == 0 {
        return None;
    }
    Some((a, top.x.rem_euclid(a), top.y))
}

impl QuadIdeal {
    /// Ideal generated (as a module over the order) by `gens`.
    pub fn from_generators(disc: i64, gens: &[QuadElem]) -> Option<Self> {
        let w = QuadElem::omega();
        let mut vs = Vec::new();
        for g in gens {
            vs.push(*g);
            vs.push(g.mul(&w, disc));
        }
        let (a, b, c) = hnf2(&vs)?;
        Some(QuadIdeal { disc, a, b, c })
    }

    pub fn principal(disc: i64, g: QuadElem) -> Option<Self> {
        Self::from_generators(disc, &[g])
    }

    pub fn unit(disc: i64) -> Self {
        QuadIdeal {
            disc,
            a: 1,
            b: 0,
            c: 1,
        }
    }

    /// `(p, ω - r)` for a root `r` of `x^2 - Δ x + (Δ^2 - Δ)/4` modulo `p`.
    pub fn prime_over(disc: i64, p: i128, r: i128) -> Self {
        QuadIdeal {
            disc,
            a: p,
            b: (-r).rem_euclid(p),
            c: 1,
        }
    }

    pub fn basis(&self) -> [QuadElem; 2] {
        [QuadElem::int(self.a), QuadElem::new(self.b, self.c)]
    }

    pub fn norm(&self) -> i128 {
        self.a * self.c
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut vs = Vec::with_capacity(4);
        for u in self.basis() {
            for v in o.basis() {
                vs.push(u.mul(&v, self.disc));
            }
        }
        // The ℤ-span of the pairwise products is already an ideal.
        let (a, b, c) = hnf2(&vs).expect("nonzero product");
        QuadIdeal {
            disc: self.disc,
            a,
            b,
            c,
        }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut acc = Self::unit(self.disc);
        let mut b = *self;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b);
            }
            b = b.mul(&b);
            e >>= 1;
        }
        acc
    }

    pub fn conj(&self) -> Self {
        let [u, v] = self.basis();
        QuadIdeal::from_generators(self.disc, &[u.conj(self.disc), v.conj(self.disc)])
            .expect("nonzero")
    }

    pub fn contains(&self, g: &QuadElem) -> bool {
        // g = s A + t (B + C ω)
        if g.y % self.c != 0 {
            return false;
        }
        let t = g.y / self.c;
        (g.x - t * self.b) % self.a == 0
    }

    /// Largest integer `n` with `I ⊆ n O`.
    pub fn content(&self) -> i128 {
        self.a.gcd(&self.b).gcd(&self.c)
    }

    /// Reduced form of the class of this ideal.
    pub fn to_form(&self) -> Form {
        let n = self.content();
        let a = self.a / n;
        let t = self.b / n;
        let c_ = self.c / n;
        debug_assert_eq!(c_, 1, "primitive part of an ideal has C = 1");
        let d = self.disc as i128;
        let b = -(2 * t + d);
        let c = (b * b - d) / (4 * a);
        Form {
            a: a as i64,
            b: b as i64,
            c: c as i64,
        }
        .reduce()
    }

    /// `a ℤ + ((-b + √Δ)/2) ℤ`.
    pub fn from_form(f: &Form) -> Self {
        let d = f.discriminant();
        let a = f.a as i128;
        let b = (-(f.b as i128 + d as i128) / 2).rem_euclid(a);
        QuadIdeal { disc: d, a, b, c: 1 }
    }

    /// Generator of a principal ideal, found as a shortest lattice vector.
    pub fn principal_generator(&self) -> Option<QuadElem> {
        let d = self.disc;
        let tform = |u: &QuadElem, v: &QuadElem| -> i128 {
            u.add(v).norm(d) - u.norm(d) - v.norm(d)
        };
        let [mut v1, mut v2] = self.basis();
        loop {
            if v1.norm(d) > v2.norm(d) {
                std::mem::swap(&mut v1, &mut v2);
            }
            let n1 = v1.norm(d);
            let t = tform(&v1, &v2);
            // m = round(t / (2 n1))
            let m = Integer::div_floor(&(2 * t + 2 * n1), &(4 * n1));
            if m == 0 {
                break;
            }
            v2 = v2.sub(&QuadElem::new(m * v1.x, m * v1.y));
        }
        if v1.norm(d) == self.norm() {
            Some(v1)
        } else {
            None
        }
    }

    pub fn is_principal(&self) -> bool {
        self.principal_generator().is_some()
    }

    /// Canonical representative `s + t ω` of `g` modulo this ideal,
    /// `0 <= t < C`, `0 <= s < A`.
    pub fn reduce_elem(&self, g: &QuadElem) -> QuadElem {
        let t = Integer::div_floor(&g.y, &self.c);
        let r = g.sub(&QuadElem::new(t * self.b, t * self.c));
        QuadElem::new(r.x.rem_euclid(self.a), r.y)
    }

    /// Whether `g` and this ideal are coprime: `(g) + I = O`.
    pub fn coprime_to(&self, g: &QuadElem) -> bool {
        let mut vs = vec![*g];
        vs.extend(self.basis());
        QuadIdeal::from_generators(self.disc, &vs).is_some_and(|s| s.norm() == 1)
    }
}

impl fmt::Debug for QuadIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}, {} + {}w>", self.a, self.b, self.c)
    }
}

/// Solve `u * a ≡ 1 (mod m)`.
pub fn inv_mod(a: i128, m: i128) -> Option<i128> {
    let (g, u, _) = xgcd(a.rem_euclid(m), m);
    if g != 1 {
        return None;
    }
    Some(u.rem_euclid(m))
}
