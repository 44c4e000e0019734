use cm_index_core::pipeline::{parse_curve_file, reference};
use cm_index_core::{
    compute_index, compute_index_curve, compute_index_rational, index_from_degrees, twist_demo, Error, Family,
    IndexSpec, RunConfig,
};

fn cfg() -> RunConfig {
    RunConfig::default()
}

fn index(disc: i64, family: Family) -> u64 {
    let spec = IndexSpec {
        family,
        ..IndexSpec::new(disc)
    };
    compute_index(&spec, &cfg()).unwrap().index
}

#[test]
fn minus_fifteen_is_the_exception() {
    let r = compute_index(&IndexSpec::new(-15), &cfg()).unwrap();
    assert_eq!(r.index, 2);
    assert_eq!(r.class_number, 2);
    assert_eq!(r.division_degree, 6);
    assert_eq!(r.abelian_degree, 12);
    assert!(r.grh_assumed);
    assert!(r.timings.is_none());
}

#[test]
fn minus_twenty_has_index_one() {
    let r = compute_index(&IndexSpec::new(-20), &cfg()).unwrap();
    assert_eq!((r.index, r.division_degree, r.abelian_degree), (1, 4, 4));
}

#[test]
fn families_agree_on_small_discriminants() {
    for d in [-15, -20, -24, -35, -51] {
        let a = index(d, Family::A);
        assert_eq!(a, index(d, Family::B), "{d}");
        assert_eq!(a, index(d, Family::C), "{d}");
    }
}

#[test]
fn conjugate_root_agrees() {
    for d in [-20, -15] {
        let spec = IndexSpec {
            conjugate: true,
            ..IndexSpec::new(d)
        };
        assert_eq!(compute_index(&spec, &cfg()).unwrap().index, index(d, Family::A));
    }
}

#[test]
fn level_four_agrees_with_level_three() {
    for d in [-20, -15] {
        let spec = IndexSpec {
            n: 4,
            ..IndexSpec::new(d)
        };
        assert_eq!(compute_index(&spec, &cfg()).unwrap().index, index(d, Family::A), "{d}");
    }
}

#[test]
fn reports_are_reproducible() {
    let a = compute_index(&IndexSpec::new(-24), &cfg()).unwrap();
    let b = compute_index(&IndexSpec::new(-24), &cfg()).unwrap();
    assert_eq!(a, b);
    let seeded = RunConfig { seed: 99, ..cfg() };
    assert_eq!(compute_index(&IndexSpec::new(-24), &seeded).unwrap().index, a.index);
    let wider = RunConfig {
        prime_bound: 20_000,
        ..cfg()
    };
    assert_eq!(compute_index(&IndexSpec::new(-15), &wider).unwrap().index, 2);
}

#[test]
fn small_prime_bound_does_not_stabilize() {
    let c = RunConfig {
        prime_bound: 100,
        ..cfg()
    };
    let err = compute_index(&IndexSpec::new(-15), &c).unwrap_err();
    assert!(matches!(err, Error::NotStabilized { .. }), "{err}");
    assert_eq!(err.exit_code(), 3);
}

#[test]
fn singular_and_invalid_inputs() {
    let e = compute_index(&IndexSpec::new(-4), &cfg()).unwrap_err();
    assert!(matches!(e, Error::SingularCurve(_)));
    assert_eq!(e.exit_code(), 2);
    assert_eq!(compute_index(&IndexSpec::new(-21), &cfg()).unwrap_err().exit_code(), 2);
    let spec = IndexSpec {
        conjugate: true,
        ..IndexSpec::new(-23)
    };
    assert_eq!(compute_index(&spec, &cfg()).unwrap_err().exit_code(), 2);
}

#[test]
fn index_checks_reject_bad_degrees() {
    assert_eq!(index_from_degrees(2, 2, 12, 6, 1).unwrap(), 2);
    assert_eq!(index_from_degrees(2, 2, 4, 4, 1).unwrap(), 1);
    // not an integer
    assert_eq!(index_from_degrees(2, 2, 6, 4, 1).unwrap_err().exit_code(), 4);
    // 4 does not divide w = 2
    assert_eq!(index_from_degrees(2, 1, 8, 4, 1).unwrap_err().exit_code(), 4);
    // d_ab not a multiple of h
    assert_eq!(index_from_degrees(2, 2, 3, 3, 1).unwrap_err().exit_code(), 4);
}

#[test]
fn rational_curves_have_index_two() {
    let curves = &reference().rational_curve;
    assert!(curves.len() >= 3);
    for c in curves.iter().filter(|c| c.disc > -30) {
        let e = c.model().unwrap();
        let r = compute_index_rational(&e, c.disc, &c.label, &cfg()).unwrap();
        assert_eq!(r.index, 2, "{}", c.label);
    }
}

#[test]
fn wrong_cm_declaration_is_rejected() {
    let c = &reference().rational_curve[0];
    let e = c.model().unwrap();
    let err = compute_index_rational(&e, -8, "mislabelled", &cfg()).unwrap_err();
    assert!(matches!(err, Error::CmDeclaration(_)), "{err}");
}

#[test]
fn twist_demo_reproduces_reference() {
    let d = twist_demo(&cfg()).unwrap();
    assert_eq!(d.index_e, 1);
    assert_eq!(d.index_e_shortcut, 1);
    assert_eq!(d.index_twist, 2);
    assert_eq!(d.index_conjugate, 1);
    assert_eq!((d.sqrt_alpha_degree, d.sqrt_alpha_abelian_degree), (4, 2));
    assert!(!d.sqrt_alpha_abelian && d.routes_agree && !d.alpha_is_square);
    assert_eq!(d.psi3_factors.len(), 3);
}

const TOWER_CURVE: &str = r#"
label = "family a over H"
cm_disc = -20
a = [
  ["0", "0", "0", "0"],
  ["0", "0", "0", "0"],
  ["0", "0", "0", "0"],
  ["-2395312128000", "0", "0", "-1071214510080"],
  ["-2016549312397312000", "0", "0", "-901828270977187840"],
]

[[level]]
name = "s"
poly = [["5"], ["0"], ["1"]]

[[level]]
name = "i"
poly = [["1", "0"], ["0", "0"], ["1", "0"]]
"#;

#[test]
fn curve_file_over_a_tower() {
    let cf = parse_curve_file(TOWER_CURVE).unwrap();
    assert_eq!((cf.disc, cf.n), (-20, 3));
    assert_eq!(cf.curve.field().degree(), 4);
    let r = compute_index_curve(&cf.curve, cf.disc, &cf.label, cf.n, &cfg()).unwrap();
    assert_eq!(r.index, 1);
    assert_eq!(r.base_abelian_degree, 1);
}

#[test]
fn curve_file_errors() {
    assert!(parse_curve_file("cm_disc = -7").is_err());
    let bad_level = TOWER_CURVE.replace(r#"poly = [["5"], ["0"], ["1"]]"#, r#"poly = [["5"], ["0"], ["2"]]"#);
    assert_eq!(parse_curve_file(&bad_level).unwrap_err().exit_code(), 2);
    // tower not starting with K = Q(sqrt -5)
    let other = TOWER_CURVE.replace("cm_disc = -20", "cm_disc = -4");
    let cf = parse_curve_file(&other).unwrap();
    assert!(compute_index_curve(&cf.curve, cf.disc, &cf.label, 3, &cfg()).is_err());
}
