use std::path::PathBuf;

use splitnet_core::dynamics::translation_equivalent;
use splitnet_core::translation::{
    encode, find_wr_split_translation, verify_split_translation, EncodingParams, Engine, QStatus, SearchConfig,
};
use splitnet_core::{analyze, parse_network, ReactionNetwork};
use splitnet_milp::Rational;

fn fixture(name: &str) -> ReactionNetwork {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name);
    parse_network(&std::fs::read_to_string(p).unwrap()).unwrap()
}

fn run(net: &ReactionNetwork, qs: &[usize], engine: Engine, symmetry: bool) -> splitnet_core::translation::SearchOutcome {
    run_with(net, qs, engine, symmetry, net.num_vertices())
}

fn distinct_sources(net: &ReactionNetwork) -> usize {
    let mut s: Vec<usize> = net.graph.edges.iter().map(|e| e.0).collect();
    s.sort_unstable();
    s.dedup();
    s.len()
}

fn run_with(net: &ReactionNetwork, qs: &[usize], engine: Engine, symmetry: bool, n: usize) -> splitnet_core::translation::SearchOutcome {
    let mut p = EncodingParams::for_network(net, 1);
    p.symmetry_breaking = symmetry;
    p.n_vertices = n;
    let cfg = SearchConfig { engine, ..SearchConfig::default() };
    find_wr_split_translation(net, qs, &p, &cfg).unwrap()
}

fn assert_good(net: &ReactionNetwork, out: &splitnet_core::translation::SearchOutcome) {
    let f = out.found.as_ref().expect("translation found");
    let v = verify_split_translation(net, &f.translation);
    assert!(v.ok, "{:?}", v.violations);
    assert!(analyze(&f.translation.network).weakly_reversible);
    assert!(translation_equivalent(net, &f.translation.network).unwrap().equivalent);
}

#[test]
fn network1_needs_two_slices() {
    let net = fixture("network1.crn");
    let out = run(&net, &[1, 2], Engine::Structured, true);
    assert_eq!(out.records[0].status, QStatus::Infeasible);
    assert_eq!(out.records[1].status, QStatus::Found);
    assert_good(&net, &out);
    let f = out.found.unwrap();
    assert_eq!(f.q, 2);
    assert_eq!(f.objective, Rational::new(27, 2));
    let r = analyze(&f.translation.network);
    assert_eq!((r.delta, r.delta_prime), (0, 0));
}

#[test]
fn network19_needs_two_slices() {
    let net = fixture("network19-n2.crn");
    let out = run(&net, &[1, 2], Engine::Structured, true);
    assert_eq!(out.records[0].status, QStatus::Infeasible);
    assert_good(&net, &out);
    assert_eq!(out.found.unwrap().q, 2);
}

#[test]
fn lotka_volterra_single_slice() {
    let net = fixture("lv.crn");
    let out = run(&net, &[1], Engine::Structured, true);
    assert_good(&net, &out);
    let f = out.found.unwrap();
    assert_eq!(f.objective, Rational::from(5));
    assert_eq!(analyze(&f.translation.network).delta, 0);
}

#[test]
fn engines_agree_on_small_instances() {
    for (name, q) in [("lv.crn", 1), ("network19-n2.crn", 1), ("network19-n2.crn", 2)] {
        // The smallest vertex budget keeps the generic model small; unused
        // vertices never change the optimum.
        let net = fixture(name);
        let n = distinct_sources(&net);
        let a = run_with(&net, &[q], Engine::Structured, true, n);
        let b = run_with(&net, &[q], Engine::Generic, true, n);
        assert_eq!(a.found.as_ref().map(|f| &f.objective), run(&net, &[q], Engine::Structured, true).found.as_ref().map(|f| &f.objective));
        assert_eq!(a.records[0].status, b.records[0].status, "{name} q={q}");
        assert_eq!(a.found.as_ref().map(|f| &f.objective), b.found.as_ref().map(|f| &f.objective), "{name} q={q}");
        if b.found.is_some() {
            assert_good(&net, &b);
        }
    }
}

#[test]
fn symmetry_breaking_keeps_the_optimum() {
    for name in ["lv.crn", "network19-n2.crn", "network1.crn"] {
        let net = fixture(name);
        let a = run(&net, &[1, 2], Engine::Structured, true);
        let b = run(&net, &[1, 2], Engine::Structured, false);
        let fa = a.found.unwrap();
        let fb = b.found.unwrap();
        assert_eq!((fa.q, &fa.objective), (fb.q, &fb.objective), "{name}");
    }
}

#[test]
fn extra_slices_never_hurt() {
    let net = fixture("network19-n2.crn");
    let two = run(&net, &[2], Engine::Structured, true).found.unwrap();
    let three = run(&net, &[3], Engine::Structured, true).found.unwrap();
    assert!(three.objective <= two.objective);
}

#[test]
fn found_assignment_satisfies_the_encoded_program() {
    let net = fixture("network1.crn");
    let f = run(&net, &[2], Engine::Structured, true).found.unwrap();
    let enc = encode(&net, &f.params).unwrap();
    enc.model.check(&f.values).unwrap();
    assert_eq!(enc.model.objective_value(&f.values), f.objective);
}

#[test]
fn node_limit_is_reported() {
    let net = fixture("network1.crn");
    let p = EncodingParams::for_network(&net, 2);
    let cfg = SearchConfig { node_limit: Some(3), ..SearchConfig::default() };
    let out = find_wr_split_translation(&net, &[2], &p, &cfg).unwrap();
    assert!(out.found.is_none());
    assert_eq!(out.records[0].status, QStatus::NodeLimit);
}
