use num_bigint::BigInt;

use super::*;
use crate::numfield::NumberField;
use crate::quadorder::{QuadElem, QuadIdeal};

fn big(n: i64) -> BigInt {
    BigInt::from(n)
}

/// Every ideal of `O_K` of norm at most `bound`.
fn ideals_up_to(disc: i64, bound: i128) -> Vec<QuadIdeal> {
    let mut out = Vec::new();
    for n in 1..=bound {
        for c in (1..=n).filter(|c| n % c == 0) {
            let a = n / c;
            if a % c != 0 {
                continue;
            }
            for b in (0..a).filter(|b| b % c == 0) {
                let gens = [QuadElem::int(a), QuadElem::new(b, c)];
                if let Some(i) = QuadIdeal::from_generators(disc, &gens) {
                    if (i.a, i.b, i.c) == (a, b, c) {
                        out.push(i);
                    }
                }
            }
        }
    }
    out
}

/// The `idx`-th prime above a split or ramified `p`.
fn prime(disc: i64, p: u64, idx: usize) -> QuadIdeal {
    let r = crate::quadorder::QuadOrder::new(disc).unwrap().omega_roots_mod(p)[idx];
    QuadIdeal::prime_over(disc, p as i128, r as i128)
}

fn units(disc: i64) -> Vec<QuadElem> {
    let all = [
        QuadElem::int(1),
        QuadElem::int(-1),
        QuadElem::new(2, 1),
        QuadElem::new(-2, -1),
        QuadElem::new(1, 1),
        QuadElem::new(-1, -1),
        QuadElem::new(3, 1),
        QuadElem::new(-3, -1),
        QuadElem::new(1, 0),
    ];
    let mut us: Vec<QuadElem> = all.into_iter().filter(|u| u.norm(disc) == 1).collect();
    us.sort_by_key(|u| (u.x, u.y));
    us.dedup();
    us
}

fn v_p(mut n: i128, p: i128) -> u32 {
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

/// `a ~ b` in `Cl_m`: `a·b̄ = (β)` and some unit `u` has
/// `uβ/N(b) ≡ 1 mod* m`, i.e. `uβ - N(b) ∈ 𝔭^{e + v_𝔭(N b)}` for each `𝔭^e ∥ m`.
fn ray_equivalent(disc: i64, m: &Modulus, a: &QuadIdeal, b: &QuadIdeal) -> bool {
    let Some(beta) = a.mul(&b.conj()).principal_generator() else {
        return false;
    };
    let nb = b.norm();
    units(disc).iter().any(|u| {
        let x = u.mul(&beta, disc).sub(&QuadElem::int(nb));
        m.parts.iter().all(|pp| {
            let ram = if pp.prime.norm() == pp.p as i128 && (disc % pp.p as i64 == 0) { 2 } else { 1 };
            let shift = ram * v_p(nb, pp.p as i128);
            pp.prime.pow((pp.exp + shift) as u64).contains(&x)
        })
    })
}

fn check_against_enumeration(disc: i64, m: &Modulus, bound: i128) {
    let g = RayClassGroup::new(disc, m).unwrap();
    let ideals: Vec<QuadIdeal> = ideals_up_to(disc, bound)
        .into_iter()
        .filter(|i| m.is_coprime_to(i))
        .collect();
    let mut reps: Vec<(QuadIdeal, Vec<BigInt>)> = Vec::new();
    for i in &ideals {
        let c = g.reduce(&g.class_of(i).unwrap());
        match reps.iter().find(|(r, _)| ray_equivalent(disc, m, i, r)) {
            Some((r, rc)) => assert_eq!(&c, rc, "{i:?} ~ {r:?} mod {m} but classes differ"),
            None => {
                assert!(
                    reps.iter().all(|(_, rc)| *rc != c),
                    "{i:?} inequivalent to all reps mod {m} but class repeats"
                );
                reps.push((*i, c));
            }
        }
    }
    assert_eq!(
        BigInt::from(reps.len()),
        g.order(),
        "disc {disc}, modulus {m}: enumeration vs group order"
    );
}

#[test]
fn unit_modulus_orders() {
    assert_eq!(RayClassGroup::new(-20, &Modulus::unit()).unwrap().order(), big(2));
    assert_eq!(RayClassGroup::new(-4, &Modulus::unit()).unwrap().order(), big(1));
    assert_eq!(RayClassGroup::new(-23, &Modulus::unit()).unwrap().order(), big(3));
}

#[test]
fn three_over_minus_five() {
    let m = Modulus::from_rational(-20, &[(3, 1)]);
    let g = RayClassGroup::new(-20, &m).unwrap();
    assert_eq!(g.order(), big(4));
    assert_eq!(g.unit_image, 2);
}

#[test]
fn p3_is_nontrivial_in_class_group() {
    let g = RayClassGroup::new(-20, &Modulus::unit()).unwrap();
    let p3 = prime(-20, 3, 0);
    assert!(!g.is_identity(&g.class_of(&p3).unwrap()));
    let p3sq = p3.mul(&p3);
    assert!(g.is_identity(&g.class_of(&p3sq).unwrap()));
}

#[test]
fn principal_prime_with_unit_generator_is_trivial() {
    let m = Modulus::from_rational(-20, &[(3, 1)]);
    let g = RayClassGroup::new(-20, &m).unwrap();
    let gen = QuadElem::new(4, 3);
    let id = QuadIdeal::principal(-20, gen).unwrap();
    assert!(g.is_identity(&g.class_of(&id).unwrap()));
}

#[test]
fn conjugate_primes_multiply_to_principal() {
    let m = Modulus::from_rational(-20, &[(2, 2), (3, 1), (5, 1)]);
    let g = RayClassGroup::new(-20, &m).unwrap();
    let ord = crate::quadorder::QuadOrder::new(-20).unwrap();
    let mut seen = 0;
    for p in 7u64.. {
        if seen == 10 {
            break;
        }
        if !crate::arith::modp::is_prime_u64(p) || ord.splitting(p) != 1 {
            continue;
        }
        let rs = ord.omega_roots_mod(p);
        let a = QuadIdeal::prime_over(-20, p as i128, rs[0] as i128);
        let b = QuadIdeal::prime_over(-20, p as i128, rs[1] as i128);
        assert_eq!(a.conj(), b);
        let sum: Vec<BigInt> = g
            .class_of(&a)
            .unwrap()
            .iter()
            .zip(g.class_of(&b).unwrap())
            .map(|(x, y)| x + y)
            .collect();
        let pc = g.elem_coords(&QuadElem::int(p as i128)).unwrap();
        assert_eq!(g.reduce(&sum), g.reduce(&pc), "p = {p}");
        seen += 1;
    }
}

#[test]
fn orders_match_bounded_norm_enumeration() {
    let cases: Vec<(i64, Modulus)> = vec![
        (-4, Modulus::from_rational(-4, &[(2, 3)])),
        (-4, Modulus::from_rational(-4, &[(3, 1)])),
        (-4, Modulus::from_rational(-4, &[(5, 1)])),
        (-4, Modulus::unit().with(5, prime(-4, 5, 1), 2)),
        (-3, Modulus::from_rational(-3, &[(3, 3)])),
        (-3, Modulus::from_rational(-3, &[(2, 2)])),
        (-3, Modulus::from_rational(-3, &[(7, 1)])),
        (-3, Modulus::unit().with(7, prime(-3, 7, 1), 1)),
        (-20, Modulus::unit()),
        (-20, Modulus::from_rational(-20, &[(3, 1)])),
        (-20, Modulus::from_rational(-20, &[(2, 3)])),
        (-20, Modulus::from_rational(-20, &[(5, 2)])),
        (-15, Modulus::unit()),
        (-15, Modulus::from_rational(-15, &[(2, 1)])),
        (-15, Modulus::from_rational(-15, &[(3, 2)])),
        (-15, Modulus::unit().with(2, prime(-15, 2, 0), 3)),
        (-23, Modulus::unit()),
        (-23, Modulus::from_rational(-23, &[(2, 1)])),
        (-23, Modulus::from_rational(-23, &[(3, 1)])),
        (-23, Modulus::unit().with(3, prime(-23, 3, 1), 2)),
    ];
    assert_eq!(cases.len(), 20);
    for (disc, m) in &cases {
        assert!(m.norm() <= big(200), "{m}");
        check_against_enumeration(*disc, m, 600);
    }
}

fn k(d: i64) -> NumberField {
    NumberField::quadratic(d, "s").unwrap()
}

fn poly(f: &NumberField, c: &[i64]) -> Vec<crate::numfield::AlgElem> {
    c.iter().map(|&x| f.int(x)).collect()
}

fn index_of(tower: &NumberField, disc: i64, support: &[u64]) -> BigInt {
    let m = Modulus::for_extension(disc, support, (tower.degree() / 2) as u64);
    let g = RayClassGroup::new(disc, &m).unwrap();
    norm_group_index(tower, &g, &NormGroupConfig::default()).unwrap().index
}

#[test]
fn trivial_tower_has_index_one() {
    assert_eq!(index_of(&k(-5), -20, &[2, 3, 5]), big(1));
    assert_eq!(index_of(&k(-1), -4, &[2, 3]), big(1));
}

#[test]
fn hilbert_class_field_of_minus_five() {
    let kf = k(-5);
    let h = kf.adjoin(&poly(&kf, &[1, 0, 1]), "i").unwrap();
    assert_eq!(index_of(&h, -20, &[2, 3, 5]), big(2));
}

#[test]
fn abelian_and_non_abelian_cubics() {
    let kf = k(-5);
    // K(∛2)/K is not normal
    let l = kf.adjoin(&poly(&kf, &[-2, 0, 0, 1]), "c").unwrap();
    assert_eq!(index_of(&l, -20, &[2, 3, 5]), big(1));
    // K(ζ_7 + ζ_7^{-1}) is abelian of degree 3, ramified at 7
    let l = kf.adjoin(&poly(&kf, &[1, -2, -1, 1]), "c").unwrap();
    assert_eq!(index_of(&l, -20, &[2, 3, 5, 7]), big(3));
    // over ℚ(√-3) the cube root of 2 gives a Kummer extension
    let kf = k(-3);
    let l = kf.adjoin(&poly(&kf, &[-2, 0, 0, 1]), "c").unwrap();
    assert_eq!(index_of(&l, -3, &[2, 3]), big(3));
}

#[test]
fn enlarging_the_modulus_keeps_the_index() {
    let kf = k(-5);
    let towers = [
        (kf.adjoin(&poly(&kf, &[1, 0, 1]), "i").unwrap(), vec![2u64, 3, 5], 2),
        (kf.adjoin(&poly(&kf, &[3, 0, 1]), "t").unwrap(), vec![2, 3, 5], 2),
        (kf.adjoin(&poly(&kf, &[-2, 0, 0, 1]), "c").unwrap(), vec![2, 3, 5], 1),
        (kf.adjoin(&poly(&kf, &[1, -2, -1, 1]), "c").unwrap(), vec![2, 3, 5, 7], 3),
        (kf.adjoin(&poly(&kf, &[-2, 0, 1]), "r").unwrap(), vec![2, 3, 5], 2),
    ];
    for (l, support, expected) in towers {
        let deg = (l.degree() / 2) as u64;
        let m = Modulus::for_extension(-20, &support, deg);
        let cfg = NormGroupConfig::default();
        let base = norm_group_index(&l, &RayClassGroup::new(-20, &m).unwrap(), &cfg).unwrap();
        let bigger = m.with(23, prime(-20, 23, 1), 1);
        let grown = norm_group_index(&l, &RayClassGroup::new(-20, &bigger).unwrap(), &cfg).unwrap();
        assert_eq!(base.index, big(expected));
        assert_eq!(grown.index, base.index);
        assert!(base.history.windows(2).all(|w| w[0].1.clone() % &w[1].1 == big(0)));
    }
}
