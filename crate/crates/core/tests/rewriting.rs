use std::path::PathBuf;

use pointed_hopf::datum::{
    expected_dimension, load_datum, validate_datum, validate_gamma, Instance, RootParameterFamily,
};
use pointed_hopf::ncalg::{build_rules, enumerate_basis, parse_element, BasisError, Flavor, Strategy};

fn instance(name: &str) -> Instance {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name);
    load_datum(path).unwrap()
}

#[test]
fn data_files_validate() {
    for f in ["i1.toml", "i2.toml", "i3.toml", "a1a2_link12.toml", "a1a2_link13.toml"] {
        let inst = instance(f);
        let r = validate_datum(&inst.datum);
        assert!(r.is_valid(), "{f}: {:?}", r.violations);
        let r = validate_gamma(&inst.datum, &inst.gamma);
        assert!(r.is_valid(), "{f}: {:?}", r.violations);
    }
}

#[test]
fn dimensions_match_pbw_counts() {
    // |Γ| times N to the number of positive roots, computed by hand
    for (f, flavor, zero, dim) in [
        ("i1.toml", Flavor::Lifted, false, 25 * 5),
        ("i2.toml", Flavor::Small, false, 25 * 5 * 5),
        ("a1a2_link12.toml", Flavor::Small, false, 125 * 5 * 125),
        ("a1a2_link13.toml", Flavor::Small, false, 125 * 5 * 125),
        ("i3.toml", Flavor::Small, true, 625 * 125),
        ("i3.toml", Flavor::Lifted, false, 625 * 125),
    ] {
        let inst = instance(f);
        let gamma = if zero { RootParameterFamily::zero(inst.datum.field()) } else { inst.gamma.clone() };
        let rs = build_rules(&inst.datum, &gamma, &flavor, 24).unwrap();
        assert!(rs.is_confluent(), "{f} {flavor:?}: {}", rs.status());
        let b = enumerate_basis(&rs, 1_000_000).unwrap();
        assert_eq!(b.count(), dim, "{f} {flavor:?}");
        assert_eq!(b.count(), expected_dimension(&inst.datum), "{f} {flavor:?}");
    }
}

#[test]
fn a1_needs_no_new_rules() {
    let inst = instance("i1.toml");
    let rs = build_rules(&inst.datum, &inst.gamma, &Flavor::Lifted, 12).unwrap();
    assert_eq!(rs.rules().len(), 1);
    let ctx = rs.ctx();
    let x = parse_element(ctx, "a1^5").unwrap();
    assert_eq!(rs.reduce(&x), parse_element(ctx, "1 - g[5]").unwrap());
    let x = parse_element(ctx, "a1^7 g[3]").unwrap();
    assert_eq!(rs.reduce(&x), parse_element(ctx, "a1^2 g[3] - a1^2 g[8]").unwrap());
}

#[test]
fn enveloping_a1_is_infinite() {
    let inst = instance("i1.toml");
    let rs = build_rules(&inst.datum, &inst.gamma, &Flavor::Enveloping, 12).unwrap();
    assert!(matches!(enumerate_basis(&rs, 1_000_000), Err(BasisError::Infinite { .. })));
}

#[test]
fn strategies_agree_on_i3() {
    let inst = instance("i3.toml");
    let rs = build_rules(&inst.datum, &inst.gamma, &Flavor::Lifted, 24).unwrap();
    let ctx = rs.ctx();
    for src in ["a2 a1", "a2 a2 a1 a1 a2", "a2^5 a1^5", "a2 a1 g[3,4] a2 a1 a1", "a2^6 a1^3 + 2 a1 a2 a1"] {
        let x = parse_element(ctx, src).unwrap();
        assert_eq!(rs.reduce_with(&x, Strategy::Leftmost), rs.reduce_with(&x, Strategy::Rightmost), "{src}");
    }
}

#[test]
fn cap_is_enforced() {
    let inst = instance("i3.toml");
    let rs = build_rules(&inst.datum, &inst.gamma, &Flavor::Lifted, 24).unwrap();
    assert!(matches!(enumerate_basis(&rs, 1000), Err(BasisError::CapExceeded { cap: 1000 })));
}
