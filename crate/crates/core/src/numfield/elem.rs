use crate::arith::gcd::{gcd, lcm};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Element of a tower field: integer coordinates over the tower's monomial
/// basis and a common positive denominator, kept in lowest terms.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AlgElem {
    pub(crate) num: Vec<BigInt>,
    pub(crate) den: BigInt,
}

impl AlgElem {
    pub(crate) fn from_parts(num: Vec<BigInt>, den: BigInt) -> Self {
        let mut e = AlgElem { num, den };
        e.normalize();
        e
    }

    pub fn zero(dim: usize) -> Self {
        AlgElem {
            num: vec![BigInt::zero(); dim],
            den: BigInt::one(),
        }
    }

    pub fn from_int(n: &BigInt, dim: usize) -> Self {
        let mut num = vec![BigInt::zero(); dim];
        num[0] = n.clone();
        AlgElem {
            num,
            den: BigInt::one(),
        }
    }

    pub fn from_rational(q: &BigRational, dim: usize) -> Self {
        let mut num = vec![BigInt::zero(); dim];
        num[0] = q.numer().clone();
        Self::from_parts(num, q.denom().clone())
    }

    pub fn from_rationals(coords: &[BigRational]) -> Self {
        let den = coords
            .iter()
            .fold(BigInt::one(), |l, c| lcm(&l, c.denom()));
        let num = coords
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        Self::from_parts(num, den)
    }

    pub fn from_i64s(coords: &[i64]) -> Self {
        AlgElem {
            num: coords.iter().map(|&c| BigInt::from(c)).collect(),
            den: BigInt::one(),
        }
    }

    pub fn dim(&self) -> usize {
        self.num.len()
    }

    pub fn numerators(&self) -> &[BigInt] {
        &self.num
    }

    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    pub fn coords(&self) -> Vec<BigRational> {
        self.num
            .iter()
            .map(|n| BigRational::new(n.clone(), self.den.clone()))
            .collect()
    }

    pub fn coord(&self, i: usize) -> BigRational {
        BigRational::new(self.num[i].clone(), self.den.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num[0].is_one() && self.num[1..].iter().all(|c| c.is_zero())
    }

    /// Rational value if the element lies in ℚ.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.num[1..].iter().all(|c| c.is_zero()) {
            Some(self.coord(0))
        } else {
            None
        }
    }

    pub(crate) fn normalize(&mut self) {
        if self.den.is_negative() {
            self.den = -&self.den;
            for c in self.num.iter_mut() {
                *c = -&*c;
            }
        }
        if self.den.is_one() {
            return;
        }
        let mut g = self.den.clone();
        for c in &self.num {
            if g.is_one() {
                return;
            }
            if !c.is_zero() {
                // reduce first: the numerators are usually much larger than g
                g = gcd(&g, &(c % &g));
            }
        }
        if g.is_one() {
            return;
        }
        self.den = &self.den / &g;
        for c in self.num.iter_mut() {
            *c = &*c / &g;
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!(self.dim(), o.dim(), "elements of different fields");
        if self.den == o.den {
            let num = self.num.iter().zip(&o.num).map(|(a, b)| a + b).collect();
            return Self::from_parts(num, self.den.clone());
        }
        let num = self
            .num
            .iter()
            .zip(&o.num)
            .map(|(a, b)| a * &o.den + b * &self.den)
            .collect();
        Self::from_parts(num, &self.den * &o.den)
    }

    pub fn neg(&self) -> Self {
        AlgElem {
            num: self.num.iter().map(|c| -c).collect(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale_int(&self, k: &BigInt) -> Self {
        Self::from_parts(self.num.iter().map(|c| c * k).collect(), self.den.clone())
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        Self::from_parts(
            self.num.iter().map(|c| c * q.numer()).collect(),
            &self.den * q.denom(),
        )
    }

    pub fn div_int(&self, k: &BigInt) -> Self {
        assert!(!k.is_zero(), "division by zero");
        Self::from_parts(self.num.clone(), &self.den * k)
    }

    /// Pad with zeros: the image under the inclusion of a lower level.
    pub fn lift_to(&self, dim: usize) -> Self {
        assert!(dim >= self.dim() && dim.is_multiple_of(self.dim()), "not a subfield");
        let mut num = self.num.clone();
        num.resize(dim, BigInt::zero());
        AlgElem {
            num,
            den: self.den.clone(),
        }
    }
}

impl std::fmt::Debug for AlgElem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let c: Vec<String> = self.coords().iter().map(|c| c.to_string()).collect();
        write!(f, "[{}]", c.join(", "))
    }
}
