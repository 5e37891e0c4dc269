use std::path::PathBuf;

use splitnet_core::dynamics::{check_parametrization, parse_parametrization, translation_equivalent};
use splitnet_core::json::parse_translation_json;
use splitnet_core::translation::{prune_self_loops, verify_split_translation};
use splitnet_core::{analyze, analyze_network, parse_generalized, parse_network, ReactionNetwork};

fn fixture(name: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name);
    std::fs::read_to_string(&p).unwrap_or_else(|e| panic!("{}: {e}", p.display()))
}

fn network(name: &str) -> ReactionNetwork {
    parse_network(&fixture(name)).unwrap()
}

#[test]
fn network1_structure() {
    // Eight distinct complexes: X1, X2, X3, 2X2, 2X3, X4, X1+X2, X1+X3.
    let r = analyze_network(&network("network1.crn"));
    assert_eq!((r.n, r.l, r.dim_s, r.delta), (8, 2, 3, 3));
    assert!(!r.weakly_reversible);
}

#[test]
fn lotka_volterra_structure() {
    let r = analyze_network(&network("lv.crn"));
    assert_eq!((r.n, r.l, r.dim_s, r.delta), (6, 3, 2, 1));
    assert!(!r.weakly_reversible);
}

#[test]
fn generalized_network_deficiencies() {
    let g = parse_generalized(&fixture("gcrn6.gcrn")).unwrap();
    let r = analyze(&g);
    assert_eq!((r.delta, r.delta_prime), (0, 1));
    assert!(r.weakly_reversible);
}

#[test]
fn network3_is_a_valid_split_translation() {
    let net = network("network1.crn");
    let t = parse_translation_json(&net, &fixture("network3.gcrn.json")).unwrap();
    let v = verify_split_translation(&net, &t);
    assert!(v.ok, "{:?}", v.violations);
    assert!(translation_equivalent(&net, &t.network).unwrap().equivalent);
    let r = analyze(&t.network);
    assert!(r.weakly_reversible);
    assert_eq!((r.delta, r.delta_prime), (0, 0));
    // Display view: r3 and r4 each split into two visible arrows.
    let view = prune_self_loops(&t);
    assert_eq!(view.combined.len(), 8);
}

#[test]
fn lv_translation_is_equivalent() {
    let net = network("lv.crn");
    let t = parse_translation_json(&net, &fixture("lv-translation.gcrn.json")).unwrap();
    assert!(verify_split_translation(&net, &t).ok);
    assert!(translation_equivalent(&net, &t.network).unwrap().equivalent);
    let r = analyze(&t.network);
    assert!(r.weakly_reversible);
    assert_eq!(r.delta, 0);
}

#[test]
fn pfk_translation() {
    let net = network("pfk.crn");
    let t = parse_translation_json(&net, &fixture("pfk-translation.gcrn.json")).unwrap();
    let v = verify_split_translation(&net, &t);
    assert!(v.ok, "{:?}", v.violations);
    assert!(translation_equivalent(&net, &t.network).unwrap().equivalent);
    let r = analyze(&t.network);
    assert!(r.weakly_reversible);
    assert_eq!((r.delta, r.delta_prime), (1, 0));
}

#[test]
fn parametrizations() {
    let net = network("network1.crn");
    // As printed, the one-parameter family is not a steady state: its lines
    // for x2, x3, x4 are really x2^2, x4 and x3^2.
    let printed = check_parametrization(&net, &parse_parametrization(&fixture("param2.txt"), &net).unwrap()).unwrap();
    assert!(!printed.ok);
    let bad = check_parametrization(&net, &parse_parametrization(&fixture("param2-swapped.txt"), &net).unwrap()).unwrap();
    assert!(!bad.ok);
    assert!(!bad.residuals.is_empty());

    let pfk = network("pfk.crn");
    for f in ["pfk-full-param.txt", "pfk-param.txt"] {
        let rep = check_parametrization(&pfk, &parse_parametrization(&fixture(f), &pfk).unwrap()).unwrap();
        assert!(rep.ok, "{f}: {:?}", rep.residuals);
    }
}

#[test]
fn tampered_translation_fails_condition_d() {
    let net = network("network1.crn");
    let text = fixture("network3.gcrn.json").replacen("\"X4\": 1", "\"X4\": 2", 1);
    let t = parse_translation_json(&net, &text).unwrap();
    let v = verify_split_translation(&net, &t);
    assert!(!v.ok);
    assert!(!v.conditions.d);
}
