use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use splitnet_milp::reference::{brute_force, rank, vertex_enumeration_lp};
use splitnet_milp::{
    lp_relax_solve, solve, solve_lp, BranchRule, LinExpr, Lp, LpStatus, MilpModel, Rational, Relation,
    SolveConfig, SolveStatus, TieBreak, VarKind,
};

fn small(rng: &mut StdRng, lo: i64, hi: i64) -> Rational {
    let n = rng.gen_range(lo..=hi);
    if rng.gen_bool(0.2) {
        Rational::new(n, 2)
    } else {
        Rational::from_integer(n)
    }
}

fn random_model(rng: &mut StdRng, max_bins: usize, max_conts: usize) -> MilpModel {
    let mut m = MilpModel::new();
    let nb = rng.gen_range(1..=max_bins);
    let nc = rng.gen_range(0..=max_conts);
    let mut vars = Vec::new();
    for i in 0..nb {
        vars.push(m.add_variable(format!("b{i}"), VarKind::Binary, None).unwrap());
    }
    for i in 0..nc {
        let u = Rational::from_integer(rng.gen_range(1..=4));
        vars.push(m.add_variable(format!("x{i}"), VarKind::Continuous, Some(u)).unwrap());
    }
    let nrows = rng.gen_range(1..=6);
    for r in 0..nrows {
        let mut e = LinExpr::new();
        for &v in &vars {
            if rng.gen_bool(0.6) {
                e.add_term(v, small(rng, -4, 4));
            }
        }
        let rel = match rng.gen_range(0..5) {
            0 => Relation::Eq,
            1 | 2 => Relation::Le,
            _ => Relation::Ge,
        };
        m.add_constraint(format!("r{r}"), e, rel, small(rng, -3, 6)).unwrap();
    }
    let obj = LinExpr::from_terms(vars.iter().map(|&v| (v, small(rng, -5, 5))));
    m.set_objective(obj).unwrap();
    m
}

fn binary_part(m: &MilpModel, x: &[Rational]) -> Vec<Rational> {
    (0..m.num_vars()).filter(|&j| m.variables()[j].kind == VarKind::Binary).map(|j| x[j].clone()).collect()
}

#[test]
fn branch_and_bound_matches_enumeration() {
    let mut rng = StdRng::seed_from_u64(7);
    for case in 0..150 {
        let m = random_model(&mut rng, 10, 3);
        let expected = brute_force(&m);
        for rule in [BranchRule::MostFractional, BranchRule::FirstFractional] {
            let cfg = SolveConfig { branch_rule: rule, ..SolveConfig::default() };
            let got = solve(&m, &cfg).unwrap();
            match &expected {
                None => assert_eq!(got.status, SolveStatus::Infeasible, "case {case}"),
                Some((z, x)) => {
                    assert_eq!(got.status, SolveStatus::Optimal, "case {case}");
                    assert_eq!(got.objective.as_ref(), Some(z), "case {case}");
                    m.check(&got.values).unwrap();
                    assert_eq!(binary_part(&m, &got.values), binary_part(&m, x), "lex tie-break, case {case}");
                }
            }
        }
        let plain = SolveConfig { tie_break: TieBreak::None, ..SolveConfig::default() };
        let got = solve(&m, &plain).unwrap();
        assert_eq!(got.objective, expected.map(|e| e.0), "case {case}");
    }
}

#[test]
fn relaxation_bounds_integer_optimum() {
    let mut rng = StdRng::seed_from_u64(11);
    for _ in 0..60 {
        let m = random_model(&mut rng, 8, 2);
        let relax = lp_relax_solve(&m);
        if let Some((z, _)) = brute_force(&m) {
            assert_eq!(relax.status, LpStatus::Optimal);
            assert!(relax.objective <= z);
        }
    }
}

#[test]
fn repeated_solves_are_identical() {
    let mut rng = StdRng::seed_from_u64(3);
    for _ in 0..20 {
        let m = random_model(&mut rng, 10, 3);
        let a = solve(&m, &SolveConfig::default()).unwrap();
        let b = solve(&m, &SolveConfig::default()).unwrap();
        assert_eq!(a, b);
    }
}

/// Free variables as differences of nonnegative pairs; feasibility must
/// match the rank test rank(A) = rank([A | b]).
#[test]
fn equality_feasibility_matches_rank_oracle() {
    let mut rng = StdRng::seed_from_u64(5);
    for _ in 0..200 {
        let (rows, cols) = (5, 8);
        let rank_target = rng.gen_range(1..=5);
        // Low-rank construction makes infeasible right-hand sides common.
        let basis: Vec<Vec<Rational>> =
            (0..rank_target).map(|_| (0..cols).map(|_| small(&mut rng, -3, 3)).collect()).collect();
        let a: Vec<Vec<Rational>> = (0..rows)
            .map(|_| {
                let w: Vec<Rational> = (0..rank_target).map(|_| small(&mut rng, -2, 2)).collect();
                (0..cols).map(|j| (0..rank_target).map(|k| &w[k] * &basis[k][j]).sum()).collect()
            })
            .collect();
        let b: Vec<Rational> = (0..rows).map(|_| small(&mut rng, -3, 3)).collect();
        let aug: Vec<Vec<Rational>> =
            a.iter().zip(&b).map(|(r, bi)| r.iter().cloned().chain([bi.clone()]).collect()).collect();
        let oracle = rank(a.clone()) == rank(aug);

        let mut lp = Lp::with_vars(2 * cols);
        for (r, bi) in a.iter().zip(&b) {
            let mut coeffs = Vec::new();
            for (j, v) in r.iter().enumerate() {
                coeffs.push((2 * j, v.clone()));
                coeffs.push((2 * j + 1, -v));
            }
            lp.add_row(coeffs, Relation::Eq, bi.clone());
        }
        let sol = solve_lp(&lp);
        assert_eq!(sol.status == LpStatus::Optimal, oracle);
        if oracle {
            for (r, bi) in a.iter().zip(&b) {
                let lhs: Rational =
                    r.iter().enumerate().map(|(j, v)| v * &(&sol.values[2 * j] - &sol.values[2 * j + 1])).sum();
                assert_eq!(&lhs, bi);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]
    #[test]
    fn simplex_matches_vertex_enumeration(
        seed in any::<u64>(),
    ) {
        let mut rng = StdRng::seed_from_u64(seed);
        let n = rng.gen_range(1..=3);
        let upper: Vec<Rational> = (0..n).map(|_| Rational::from_integer(rng.gen_range(0..=4))).collect();
        let cost: Vec<Rational> = (0..n).map(|_| small(&mut rng, -4, 4)).collect();
        let rows: Vec<(Vec<Rational>, Relation, Rational)> = (0..rng.gen_range(0..=4))
            .map(|_| {
                let c = (0..n).map(|_| small(&mut rng, -3, 3)).collect();
                let rel = [Relation::Le, Relation::Ge, Relation::Eq][rng.gen_range(0..3)];
                (c, rel, small(&mut rng, -2, 5))
            })
            .collect();
        let mut lp = Lp::with_vars(n);
        lp.cost = cost.clone();
        lp.upper = upper.iter().cloned().map(Some).collect();
        for (c, rel, b) in &rows {
            lp.add_row(c.iter().cloned().enumerate().collect(), *rel, b.clone());
        }
        let got = solve_lp(&lp);
        match vertex_enumeration_lp(&cost, &rows, &upper) {
            None => prop_assert_eq!(got.status, LpStatus::Infeasible),
            Some((z, _)) => {
                prop_assert_eq!(got.status, LpStatus::Optimal);
                prop_assert_eq!(got.objective, z);
            }
        }
    }
}
