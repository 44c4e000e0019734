use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use super::*;
use crate::arith::modp::{factor_degrees_mod_q, is_squarefree_mod};
use crate::arith::{FiniteField, PrimeField};

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// ℚ(√-5)(i), basis 1, s, i, s·i.
fn h20() -> NumberField {
    let k = NumberField::quadratic(-5, "s").unwrap();
    k.adjoin(&[k.int(1), k.zero(), k.int(1)], "i").unwrap()
}

fn elem(f: &NumberField, c: &[i64]) -> AlgElem {
    f.from_coords(&c.iter().map(|&x| q(x)).collect::<Vec<_>>()).unwrap()
}

fn poly_of(f: &NumberField, c: &[i64]) -> FPoly {
    c.iter().map(|&x| f.int(x)).collect()
}

#[test]
fn generators_square_correctly() {
    let h = h20();
    let s = h.gen_at(1);
    let i = h.gen_at(2);
    assert_eq!(h.mul(&s, &s), h.int(-5));
    assert_eq!(h.mul(&i, &i), h.int(-1));
    assert_eq!(h.format(&h.mul(&s, &i)), "s*i");
    assert_eq!(h.degree(), 4);
}

#[test]
fn norms_and_inverses() {
    let k = NumberField::quadratic(-5, "s").unwrap();
    let a = elem(&k, &[1, 1]);
    assert_eq!(k.norm(&a), q(6));
    assert_eq!(k.trace(&a), q(2));
    let h = h20();
    let b = elem(&h, &[3, -1, 2, 5]);
    let bi = h.inv(&b).unwrap();
    assert_eq!(h.mul(&b, &bi), h.one());
    // norm over ℚ is the product of the relative norms, and equals the
    // determinant of multiplication, computed via the charpoly over ℚ
    let cp = h.charpoly_over(&b, 0);
    assert_eq!(cp[0].coord(0), h.norm(&b));
    assert!(h.inv(&h.zero()).is_none());
}

#[test]
fn cubic_level() {
    // ℚ(√-3)(∛2): a cubic relative extension exercises the general charpoly path.
    let k = NumberField::quadratic(-3, "r").unwrap();
    let l = k.adjoin(&[k.int(-2), k.zero(), k.zero(), k.int(1)], "c").unwrap();
    let c = l.gen();
    assert_eq!(l.pow(&c, 3), l.int(2));
    let x = l.add_all(&[l.int(1), c.clone(), l.mul(&c, &l.gen_at(1))]);
    let xi = l.inv(&x).unwrap();
    assert_eq!(l.mul(&x, &xi), l.one());
    assert_eq!(l.norm(&l.int(2)), q(64));
    // x^3 - 2 splits completely in ℚ(√-3, ∛2)
    let f = poly_of(&l, &[-2, 0, 0, 1]);
    let fac = l.factor(&f).unwrap();
    assert_eq!(fac.len(), 3);
    assert!(fac.iter().all(|(g, m)| g.len() == 2 && *m == 1));
    // but stays irreducible over ℚ(√-3)
    assert!(k.is_irreducible(&poly_of(&k, &[-2, 0, 0, 1])).unwrap());
}

impl NumberField {
    fn add_all(&self, xs: &[AlgElem]) -> AlgElem {
        xs.iter().fold(self.zero(), |a, b| a.add(b))
    }
}

#[test]
fn factorization_reconstructs() {
    let h = h20();
    // x^2 + 1 and x^2 - 5 split over ℚ(√-5, i); x^4 + 1 does not split completely.
    for c in [vec![1, 0, 1], vec![-5, 0, 1], vec![1, 0, 0, 0, 1], vec![-20, 0, 1, 0, 1]] {
        let f = poly_of(&h, &c);
        let fac = h.factor(&f).unwrap();
        let mut prod = vec![h.one()];
        for (g, m) in &fac {
            for _ in 0..*m {
                prod = h.poly_mul(&prod, g);
            }
        }
        assert_eq!(prod, f, "{c:?}");
    }
    let fac = h.factor(&poly_of(&h, &[1, 0, 1])).unwrap();
    assert_eq!(fac.len(), 2);
    let k = h.base();
    assert!(k.is_irreducible(&poly_of(&k, &[1, 0, 1])).unwrap());
    // repeated factors
    let f = h.poly_mul(&poly_of(&h, &[1, 0, 1]), &poly_of(&h, &[1, 0, 1]));
    let fac = h.factor(&f).unwrap();
    assert_eq!(fac.iter().map(|(_, m)| *m).collect::<Vec<_>>(), vec![2, 2]);
}

#[test]
fn square_roots() {
    let h = h20();
    let r = h.sqrt(&h.int(5)).unwrap().unwrap();
    assert_eq!(h.mul(&r, &r), h.int(5));
    assert!(h.sqrt(&h.int(2)).unwrap().is_none());
    let a = elem(&h, &[1, 2, -3, 1]);
    let a2 = h.mul(&a, &a);
    let r = h.sqrt(&a2).unwrap().unwrap();
    assert!(r == a || r == a.neg());
}

#[test]
fn adjoin_rejects_reducible() {
    let h = h20();
    assert!(h.adjoin(&poly_of(&h, &[5, 0, 1]), "t").is_err());
}

#[test]
fn residue_degrees_example() {
    // ℚ(√-5)(√-1), p = 29, √-5 ≡ 13: -1 is a square mod 29.
    let k = NumberField::quadratic(-5, "s").unwrap();
    let l = k.adjoin(&[k.int(1), k.zero(), k.int(1)], "i").unwrap();
    assert_eq!(l.residue_degrees(29, 13).unwrap(), vec![1, 1]);
    assert_eq!(l.residue_degrees(29, 16).unwrap(), vec![1, 1]);
    // p = 7: -5 ≡ 2 = 3^2, -1 not a square
    assert_eq!(l.residue_degrees(7, 3).unwrap(), vec![2]);
    assert!(l.residue_degrees(7, 2).is_err());
}

/// Independent oracle: factor degrees modulo 𝔭 of the characteristic
/// polynomial over K of a primitive element, when square-free.
fn oracle_degrees(l: &NumberField, p: u64, r: u64) -> Option<Vec<usize>> {
    let alpha = l.generator_sum();
    let cp = l.charpoly_over(&alpha, 1);
    let pf = PrimeField::new(p).unwrap();
    let mut red = Vec::new();
    for c in &cp {
        let a = c.coord(0);
        let b = c.coord(1);
        let red_q = |x: &BigRational| -> Option<u64> {
            let d = pf.reduce(x.denom());
            let di = pf.inv(&d)?;
            Some(pf.mul(&pf.reduce(x.numer()), &di))
        };
        let v = pf.add(&red_q(&a)?, &pf.mul(&red_q(&b)?, &r));
        red.push(v);
    }
    if !is_squarefree_mod(&pf, &red) {
        return None;
    }
    Some(factor_degrees_mod_q(&pf, &red).unwrap())
}

#[test]
fn residue_degrees_match_absolute_polynomial() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    let k = NumberField::quadratic(-5, "s").unwrap();
    let s = k.gen();
    // Towers of degree 4 and 8 over K.
    let l1 = k
        .adjoin(&[k.int(-3).add(&s), k.int(0), k.int(0), k.int(1)], "a")
        .unwrap();
    let l2 = l1
        .adjoin(&[l1.int(-2).sub(&l1.gen()), l1.zero(), l1.one()], "b")
        .unwrap();
    let mut checked = 0;
    let mut tried = 0;
    while checked < 100 && tried < 20_000 {
        tried += 1;
        let p: u64 = rng.gen_range(11..50_000);
        if !crate::arith::is_prime_u64(p) {
            continue;
        }
        let pf = PrimeField::new(p).unwrap();
        let Some(r) = pf.sqrt(p - 5) else { continue };
        for l in [&l1, &l2] {
            let Ok(ours) = l.residue_degrees(p, r) else {
                continue;
            };
            assert_eq!(ours.iter().sum::<usize>(), l.degree() / 2);
            if let Some(theirs) = oracle_degrees(l, p, r) {
                assert_eq!(ours, theirs, "p = {p}");
            }
        }
        checked += 1;
    }
    assert!(checked >= 100);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms(a in prop::collection::vec(-50i64..50, 4),
                    b in prop::collection::vec(-50i64..50, 4),
                    c in prop::collection::vec(-50i64..50, 4)) {
        let h = h20();
        let (a, b, c) = (elem(&h, &a), elem(&h, &b), elem(&h, &c));
        prop_assert_eq!(h.mul(&a, &b), h.mul(&b, &a));
        prop_assert_eq!(h.mul(&h.mul(&a, &b), &c), h.mul(&a, &h.mul(&b, &c)));
        prop_assert_eq!(h.mul(&a, &b.add(&c)), h.mul(&a, &b).add(&h.mul(&a, &c)));
        prop_assert_eq!(h.norm(&h.mul(&a, &b)), h.norm(&a) * h.norm(&b));
        if !a.is_zero() {
            prop_assert_eq!(h.mul(&a, &h.inv(&a).unwrap()), h.one());
        }
    }
}
