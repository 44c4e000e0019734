use num_bigint::BigInt;

use cm_index_core::classpoly::{cached_class_polynomial, ring_class_polynomial, ring_class_polynomial_from};
use cm_index_core::pipeline::reference;
use cm_index_core::quadorder::QuadOrder;

const CLASS_NUMBER_ONE: [i64; 13] = [-3, -4, -7, -8, -11, -12, -16, -19, -27, -28, -43, -67, -163];

fn coeffs(d: i64) -> Vec<BigInt> {
    ring_class_polynomial(&QuadOrder::new(d).unwrap()).unwrap().poly.coeffs().to_vec()
}

#[test]
fn known_values() {
    let b = |v: &[i64]| v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
    assert_eq!(coeffs(-7), b(&[3375, 1]));
    assert_eq!(coeffs(-15), b(&[-121287375, 191025, 1]));
    assert_eq!(coeffs(-4), b(&[-1728, 1]));
    assert_eq!(coeffs(-3), b(&[0, 1]));
    assert_eq!(coeffs(-163), vec![BigInt::from(640320u64).pow(3), BigInt::from(1)]);
}

#[test]
fn degree_is_class_number() {
    let discs = reference().class_number_two.discriminants.iter().copied().chain(CLASS_NUMBER_ONE);
    for d in discs {
        let order = QuadOrder::new(d).unwrap();
        let cp = ring_class_polynomial(&order).unwrap();
        assert_eq!(cp.degree() as u64, order.class_number(), "{d}");
    }
}

#[test]
fn doubling_precision_gives_the_same_polynomial() {
    for d in [-15, -20, -23, -47, -71, -427] {
        let order = QuadOrder::new(d).unwrap();
        let base = ring_class_polynomial(&order).unwrap();
        let doubled = ring_class_polynomial_from(&order, 2 * base.precision).unwrap();
        assert_eq!(base.poly, doubled.poly, "{d}");
    }
}

#[test]
fn cache_survives_corruption() {
    let dir = std::env::temp_dir().join(format!("cm-index-cache-{}", std::process::id()));
    let order = QuadOrder::new(-20).unwrap();
    let a = cached_class_polynomial(&order, Some(&dir)).unwrap();
    let b = cached_class_polynomial(&order, Some(&dir)).unwrap();
    assert_eq!(a.poly, b.poly);
    for entry in std::fs::read_dir(&dir).unwrap() {
        std::fs::write(entry.unwrap().path(), "garbage").unwrap();
    }
    let c = cached_class_polynomial(&order, Some(&dir)).unwrap();
    assert_eq!(a.poly, c.poly);
    std::fs::remove_dir_all(&dir).unwrap();
}
