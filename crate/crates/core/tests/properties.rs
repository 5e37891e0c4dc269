use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use splitnet_core::dynamics::{
    eval_rhs, gmas_rhs, gmas_rhs_in, mas_rhs, rhs_difference, translation_equivalent, OdeSystem,
};
use splitnet_core::graph::{is_weakly_reversible, row_balanced, structurally_equivalent, wr_certificate};
use splitnet_core::json::{parse_translation_json, translation_to_json};
use splitnet_core::parse::{generalized_to_text, network_to_text};
use splitnet_core::translation::{
    find_wr_split_translation, verify_split_translation, EncodingParams, QStatus, SearchConfig, SplitTranslation,
};
use splitnet_core::{analyze, analyze_network, parse_generalized, parse_network, MultiGraph, ReactionNetwork};
use splitnet_milp::Rational;

/// Reachability by transitive closure; independent of the SCC code.
fn wr_oracle(n: usize, edges: &[(usize, usize)]) -> bool {
    let mut reach = vec![vec![false; n]; n];
    for (i, row) in reach.iter_mut().enumerate() {
        row[i] = true;
    }
    for &(a, b) in edges {
        reach[a][b] = true;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if reach[i][k] && reach[k][j] {
                    reach[i][j] = true;
                }
            }
        }
    }
    edges.iter().all(|&(a, b)| reach[b][a])
}

fn graph_strategy() -> impl Strategy<Value = MultiGraph> {
    (1usize..=6).prop_flat_map(|n| {
        prop::collection::vec((0..n, 0..n), 0..=10).prop_map(move |edges| MultiGraph::new(n, edges))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn weak_reversibility_methods_agree(g in graph_strategy()) {
        let scc = is_weakly_reversible(&g);
        prop_assert_eq!(scc, wr_oracle(g.vertex_count, &g.edges));
        let cert = wr_certificate(&g, &Rational::one(), &Rational::from(1000));
        prop_assert_eq!(scc, cert.is_some());
        if let Some(b) = cert {
            prop_assert!(structurally_equivalent(&g.incidence(), &b));
            prop_assert!(row_balanced(&b));
        }
    }
}

fn random_complex(rng: &mut StdRng, m: usize) -> String {
    let terms: Vec<String> = (0..m)
        .filter_map(|i| match rng.gen_range(0..4) {
            0 | 1 => None,
            2 => Some(format!("S{i}")),
            _ => Some(format!("2 S{i}")),
        })
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

/// Small random network text (at most 3 species, 4 reactions).
fn random_network(rng: &mut StdRng) -> ReactionNetwork {
    loop {
        let m = rng.gen_range(1..=3);
        let r = rng.gen_range(1..=4);
        let species: Vec<String> = (0..m).map(|i| format!("S{i}")).collect();
        let mut text = format!("species: {}\n", species.join(" "));
        let mut ok = true;
        for k in 0..r {
            let (a, b) = (random_complex(rng, m), random_complex(rng, m));
            if a == b {
                ok = false;
            }
            text.push_str(&format!("r{}: {a} -> {b}\n", k + 1));
        }
        if ok {
            if let Ok(net) = parse_network(&text) {
                return net;
            }
        }
    }
}

fn search(net: &ReactionNetwork, q: usize, symmetry: bool) -> Option<(Rational, SplitTranslation)> {
    let mut p = EncodingParams::for_network(net, q);
    p.symmetry_breaking = symmetry;
    let cfg = SearchConfig { node_limit: Some(20_000), ..SearchConfig::default() };
    let out = find_wr_split_translation(net, &[q], &p, &cfg).unwrap();
    out.found.map(|f| (f.objective, f.translation))
}

#[test]
fn theorem_suite_on_random_networks() {
    let mut rng = StdRng::seed_from_u64(7);
    let mut successes = 0;
    let mut attempts = 0;
    while successes < 60 && attempts < 2000 {
        attempts += 1;
        let net = random_network(&mut rng);
        let Some((q, (obj, t))) = (1..=3).find_map(|q| search(&net, q, true).map(|f| (q, f))) else {
            continue;
        };
        successes += 1;
        let v = verify_split_translation(&net, &t);
        assert!(v.ok, "{}\n{:?}", network_to_text(&net), v.violations);
        assert!(analyze(&t.network).weakly_reversible);
        let eq = translation_equivalent(&net, &t.network).unwrap();
        assert!(eq.equivalent, "{}\n{:?}", network_to_text(&net), eq.differences);

        // One more slice can always be filled with self-loops.
        if q < 3 {
            let (obj2, _) = search(&net, q + 1, true).expect("feasible with an extra slice");
            assert!(obj2 <= obj);
        }
        // The ordering rows remove symmetric copies only.
        if let Some((obj3, _)) = search(&net, q, false) {
            assert_eq!(obj3, obj);
        }
    }
    assert!(successes >= 50, "only {successes} translations in {attempts} attempts");
}

#[test]
fn infeasibility_is_monotone_downward() {
    let mut rng = StdRng::seed_from_u64(11);
    for _ in 0..40 {
        let net = random_network(&mut rng);
        let p = EncodingParams::for_network(&net, 1);
        let cfg = SearchConfig { node_limit: Some(20_000), ..SearchConfig::default() };
        let out = find_wr_split_translation(&net, &[1, 2, 3], &p, &cfg).unwrap();
        if let Some(f) = &out.found {
            assert!(out.records.iter().filter(|r| r.q < f.q).all(|r| r.status != QStatus::Found));
        }
    }
}

fn random_point(rng: &mut StdRng, n: usize) -> Vec<Rational> {
    (0..n).map(|_| Rational::new(rng.gen_range(1..20), rng.gen_range(1..7))).collect()
}

/// Direct evaluation of Σ κ_k (y(π(k)) − y(ρ(k))) x^{y(ρ(k))}.
fn mas_oracle(net: &ReactionNetwork, x: &[Rational], kappa: &[Rational]) -> Vec<Rational> {
    let m = net.num_species();
    let mut out = vec![Rational::zero(); m];
    for (k, &(s, t)) in net.graph.edges.iter().enumerate() {
        let mut rate = kappa[k].clone();
        for (i, e) in net.complexes[s].iter() {
            rate *= x[i].pow(e.to_i64().unwrap() as u32);
        }
        let src = net.complexes[s].to_dense(m);
        let tgt = net.complexes[t].to_dense(m);
        for i in 0..m {
            out[i] += &(&tgt[i] - &src[i]) * &rate;
        }
    }
    out
}

#[test]
fn numeric_and_symbolic_agree() {
    let mut rng = StdRng::seed_from_u64(3);
    let mut checked = 0;
    while checked < 30 {
        let net = random_network(&mut rng);
        let sys = mas_rhs(&net);
        assert!(sys.is_kappa_linear());
        for _ in 0..5 {
            let x = random_point(&mut rng, net.num_species());
            let kappa = random_point(&mut rng, net.num_reactions());
            assert_eq!(eval_rhs(&sys, &x, &kappa).unwrap(), mas_oracle(&net, &x, &kappa));
        }
        let Some((_, t)) = search(&net, 2, true) else { continue };
        checked += 1;
        // The found translation and a perturbed copy of it.
        let mut bad = t.network.clone();
        let v = bad.graph.edges[0].0;
        bad.kinetic[v] = bad.stoich[v].clone();
        for g in [&t.network, &bad] {
            let gm = gmas_rhs_in(g, &sys.table).unwrap();
            assert!(gm.is_kappa_linear());
            let symbolic = translation_equivalent(&net, g).unwrap().equivalent;
            let diff = rhs_difference(&sys, &gm).unwrap();
            let numeric_zero = (0..50).all(|_| {
                let point = random_point(&mut rng, sys.table.len());
                diff.iter().all(|p| p.eval(&point).is_zero())
            });
            assert_eq!(symbolic, numeric_zero);
        }
    }
}

#[test]
fn text_and_json_round_trips() {
    let mut rng = StdRng::seed_from_u64(5);
    let mut translated = 0;
    for _ in 0..60 {
        let net = random_network(&mut rng);
        assert_eq!(parse_network(&network_to_text(&net)).unwrap(), net);
        let g = net.to_generalized();
        let back = parse_generalized(&generalized_to_text(&g)).unwrap();
        assert_eq!((&back.species, &back.stoich, &back.kinetic, &back.graph, &back.labels), (&g.species, &g.stoich, &g.kinetic, &g.graph, &g.labels));
        let r = analyze_network(&net);
        assert!(r.delta >= 0, "negative deficiency for\n{}", network_to_text(&net));
        assert_eq!(r.delta, analyze(&g).delta);
        if let Some((_, t)) = search(&net, 2, true) {
            let json = serde_json::to_string(&translation_to_json(&t)).unwrap();
            let back = parse_translation_json(&net, &json).unwrap();
            assert_eq!(back, t);
            let gm: OdeSystem = gmas_rhs(&t.network).unwrap();
            assert!(gm.is_kappa_linear());
            translated += 1;
        }
    }
    assert!(translated > 0);
}
