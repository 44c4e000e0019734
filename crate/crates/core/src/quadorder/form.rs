use std::fmt;

use num_integer::Integer;

use crate::error::{Error, Result};

/// Positive definite binary quadratic form `a x^2 + b x y + c y^2`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Form {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

pub(crate) fn xgcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i128, 0i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

impl Form {
    pub fn new(a: i64, b: i64, c: i64) -> Result<Self> {
        if a <= 0 || c <= 0 || (b as i128).pow(2) >= 4 * a as i128 * c as i128 {
            return Err(Error::InvalidInput(format!(
                "form ({a},{b},{c}) is not positive definite"
            )));
        }
        let g = a.gcd(&b).gcd(&c);
        if g != 1 {
            return Err(Error::NonPrimitiveForm(a, b, c));
        }
        Ok(Form { a, b, c })
    }

    pub fn discriminant(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    /// `(1, b, c)` with `b = Δ mod 2`.
    pub fn principal(disc: i64) -> Self {
        let b = disc.rem_euclid(2);
        Form {
            a: 1,
            b,
            c: (b * b - disc) / 4,
        }
    }

    pub fn inverse(&self) -> Self {
        Form {
            a: self.a,
            b: -self.b,
            c: self.c,
        }
        .reduce()
    }

    pub fn is_reduced(&self) -> bool {
        let Form { a, b, c } = *self;
        b.abs() <= a && a <= c && (b >= 0 || (b.abs() != a && a != c))
    }

    pub fn reduce(&self) -> Self {
        let (mut a, mut b, mut c) = (self.a as i128, self.b as i128, self.c as i128);
        loop {
            if b.abs() > a || b == -a {
                // b <- b mod 2a into (-a, a]
                let two_a = 2 * a;
                let mut nb = b.rem_euclid(two_a);
                if nb > a {
                    nb -= two_a;
                }
                let k = (nb - b) / two_a;
                // x -> x + k y
                c += k * b + k * k * a;
                b = nb;
            }
            if a > c {
                std::mem::swap(&mut a, &mut c);
                b = -b;
                continue;
            }
            if a == c && b < 0 {
                b = -b;
            }
            break;
        }
        Form {
            a: a as i64,
            b: b as i64,
            c: c as i64,
        }
    }

    /// Dirichlet composition followed by reduction.
    pub fn compose(&self, other: &Form) -> Result<Self> {
        let d = self.discriminant();
        if d != other.discriminant() {
            return Err(Error::DiscriminantMismatch(d, other.discriminant()));
        }
        let (mut f1, mut f2) = (*self, *other);
        if f1.a > f2.a {
            std::mem::swap(&mut f1, &mut f2);
        }
        let (a1, b1) = (f1.a as i128, f1.b as i128);
        let (a2, b2, c2) = (f2.a as i128, f2.b as i128, f2.c as i128);
        let s = (b1 + b2) / 2;
        let n = b2 - s;
        let (y1, dd) = if a2 % a1 == 0 {
            (0, a1)
        } else {
            let (g, u, _) = xgcd(a2, a1);
            (u, g)
        };
        let (x2, y2, d1) = if s % dd == 0 {
            (0, -1, dd)
        } else {
            let (g, u, v) = xgcd(s, dd);
            (u, -v, g)
        };
        let v1 = a1 / d1;
        let v2 = a2 / d1;
        let r = (y1 * y2 * n - x2 * c2).rem_euclid(v1);
        let b3 = b2 + 2 * v2 * r;
        let a3 = v1 * v2;
        let c3 = (b3 * b3 - d as i128) / (4 * a3);
        Ok(Form {
            a: a3 as i64,
            b: b3 as i64,
            c: c3 as i64,
        }
        .reduce())
    }

    pub fn pow(&self, mut e: u64) -> Result<Self> {
        let mut acc = Form::principal(self.discriminant());
        let mut base = self.reduce();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.compose(&base)?;
            }
            base = base.compose(&base)?;
            e >>= 1;
        }
        Ok(acc)
    }

    pub fn is_principal(&self) -> bool {
        self.reduce() == Form::principal(self.discriminant())
    }

    /// Order in the class group.
    pub fn order(&self) -> Result<u64> {
        let id = Form::principal(self.discriminant());
        let f = self.reduce();
        let mut acc = f;
        let mut k = 1;
        while acc != id {
            acc = acc.compose(&f)?;
            k += 1;
        }
        Ok(k)
    }
}

impl fmt::Debug for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// All reduced primitive forms of discriminant `disc`, sorted by `(a, b)`.
pub fn reduced_forms(disc: i64) -> Vec<Form> {
    let mut out = Vec::new();
    let mut a = 1i64;
    while 3 * a * a <= -disc {
        for b in -a + 1..=a {
            if (b - disc).rem_euclid(2) != 0 {
                continue;
            }
            let num = b * b - disc;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c < a || (b < 0 && a == c) {
                continue;
            }
            if a.gcd(&b).gcd(&c) != 1 {
                continue;
            }
            out.push(Form { a, b, c });
        }
        a += 1;
    }
    out.sort_by_key(|f| (f.a, f.b.abs(), f.b < 0));
    out
}
