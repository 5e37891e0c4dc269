//! Depth-first branch-and-bound on integral variables.

use std::cmp::Ordering;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::model::{MilpModel, VarKind, Violation};
use crate::simplex::{solve_lp, Lp, LpSolution, LpStatus};
use crate::{external, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TieBreak {
    /// Among optima, return the lexicographically smallest binary vector in
    /// declaration order.
    Lexicographic,
    /// Return the first optimum found.
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BranchRule {
    MostFractional,
    FirstFractional,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveConfig {
    pub node_limit: Option<u64>,
    pub tie_break: TieBreak,
    pub branch_rule: BranchRule,
    /// Executable invoked as `<exe> <model.lp> <solution.txt>`.
    pub external_solver: Option<PathBuf>,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig {
            node_limit: None,
            tie_break: TieBreak::Lexicographic,
            branch_rule: BranchRule::MostFractional,
            external_solver: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolveStatus {
    Optimal,
    Infeasible,
    BoundExceeded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MilpSolution {
    pub status: SolveStatus,
    /// Full assignment in declaration order; for `BoundExceeded` this is the
    /// best incumbent, if any, otherwise empty.
    pub values: Vec<Rational>,
    pub objective: Option<Rational>,
    pub node_count: u64,
}

impl MilpSolution {
    pub fn is_optimal(&self) -> bool {
        self.status == SolveStatus::Optimal
    }
}

#[derive(Debug, thiserror::Error)]
pub enum SolveError {
    #[error("objective is unbounded below")]
    Unbounded,
    #[error("solver produced an infeasible assignment: {0}")]
    Verification(#[from] Violation),
    #[error("external solver: {0}")]
    External(String),
}

/// The LP relaxation of a model (integrality dropped, binaries in `[0, 1]`).
pub fn relaxation(model: &MilpModel) -> Lp {
    let n = model.num_vars();
    let mut lp = Lp::with_vars(n);
    for (t, c) in model.objective().terms() {
        lp.cost[t.0] = c.clone();
    }
    for (j, v) in model.variables().iter().enumerate() {
        lp.upper[j] = v.effective_upper();
    }
    for c in model.constraints() {
        let coeffs = c.expr.terms().iter().map(|(v, a)| (v.0, a.clone())).collect();
        lp.add_row(coeffs, c.relation, c.rhs.clone());
    }
    lp
}

pub fn lp_relax_solve(model: &MilpModel) -> LpSolution {
    solve_lp(&relaxation(model))
}

struct Node {
    lower: Vec<Rational>,
    upper: Vec<Option<Rational>>,
}

struct Incumbent {
    objective: Rational,
    values: Vec<Rational>,
}

fn lex_cmp(a: &[Rational], b: &[Rational], idx: &[usize]) -> Ordering {
    for &j in idx {
        match a[j].cmp(&b[j]) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    Ordering::Equal
}

/// Solves `model` to proven optimality (or until the node limit).
pub fn solve(model: &MilpModel, config: &SolveConfig) -> Result<MilpSolution, SolveError> {
    if let Some(exe) = &config.external_solver {
        return external::solve_external(model, exe);
    }
    let base = relaxation(model);
    let integral: Vec<usize> = (0..model.num_vars())
        .filter(|&j| model.variables()[j].kind.is_integral())
        .collect();
    let binaries: Vec<usize> = (0..model.num_vars())
        .filter(|&j| model.variables()[j].kind == VarKind::Binary)
        .collect();
    let lex = config.tie_break == TieBreak::Lexicographic;

    let mut stack = vec![Node { lower: base.lower.clone(), upper: base.upper.clone() }];
    let mut incumbent: Option<Incumbent> = None;
    let mut nodes = 0u64;
    let mut lp = base;

    while let Some(node) = stack.pop() {
        if config.node_limit.is_some_and(|limit| nodes >= limit) {
            return Ok(MilpSolution {
                status: SolveStatus::BoundExceeded,
                objective: incumbent.as_ref().map(|i| i.objective.clone()),
                values: incumbent.map(|i| i.values).unwrap_or_default(),
                node_count: nodes,
            });
        }
        nodes += 1;
        lp.lower = node.lower;
        lp.upper = node.upper;
        let sol = solve_lp(&lp);
        match sol.status {
            LpStatus::Infeasible => continue,
            LpStatus::Unbounded => return Err(SolveError::Unbounded),
            LpStatus::Optimal => {}
        }
        let z = sol.objective;

        if let Some(inc) = &incumbent {
            match z.cmp(&inc.objective) {
                Ordering::Greater => continue,
                Ordering::Equal if !lex => continue,
                Ordering::Equal => {
                    // Smallest binary vector reachable below this node.
                    let floor: Vec<Rational> = lp.lower.clone();
                    if lex_cmp(&floor, &inc.values, &binaries) != Ordering::Less {
                        continue;
                    }
                }
                Ordering::Less => {}
            }
        }

        let fractional = integral.iter().copied().filter(|&j| !sol.values[j].is_integer());
        let branch_var = match config.branch_rule {
            BranchRule::FirstFractional => fractional.min(),
            BranchRule::MostFractional => {
                let mut best: Option<(Rational, usize)> = None;
                for j in fractional {
                    let f = sol.values[j].fractionality();
                    if best.as_ref().is_none_or(|(bf, _)| f > *bf) {
                        best = Some((f, j));
                    }
                }
                best.map(|(_, j)| j)
            }
        };

        let branch_var = match branch_var {
            Some(j) => Some(j),
            None => {
                let better = match &incumbent {
                    None => true,
                    Some(inc) => match z.cmp(&inc.objective) {
                        Ordering::Less => true,
                        Ordering::Equal => {
                            lex && lex_cmp(&sol.values, &inc.values, &binaries) == Ordering::Less
                        }
                        Ordering::Greater => false,
                    },
                };
                if better {
                    model.check(&sol.values)?;
                    incumbent = Some(Incumbent { objective: z.clone(), values: sol.values.clone() });
                }
                // A free binary at 1 may still hide an equally good, smaller vector.
                if lex {
                    binaries.iter().copied().find(|&j| {
                        sol.values[j].is_one() && lp.upper[j].as_ref() != Some(&lp.lower[j])
                    })
                } else {
                    None
                }
            }
        };

        if let Some(j) = branch_var {
            let v = &sol.values[j];
            let (down, up) = if v.is_integer() {
                (v - &Rational::one(), v.clone())
            } else {
                (v.floor(), v.ceil())
            };
            let mut up_node = Node { lower: lp.lower.clone(), upper: lp.upper.clone() };
            up_node.lower[j] = up;
            let mut down_node = Node { lower: lp.lower.clone(), upper: lp.upper.clone() };
            down_node.upper[j] = Some(down);
            stack.push(up_node);
            stack.push(down_node);
        }
    }

    Ok(match incumbent {
        Some(inc) => MilpSolution {
            status: SolveStatus::Optimal,
            objective: Some(inc.objective),
            values: inc.values,
            node_count: nodes,
        },
        None => MilpSolution {
            status: SolveStatus::Infeasible,
            values: Vec::new(),
            objective: None,
            node_count: nodes,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{LinExpr, Relation};

    fn q(n: i64) -> Rational {
        Rational::from_integer(n)
    }

    #[test]
    fn continuous_only() {
        let mut m = MilpModel::new();
        let x = m.add_variable("x", VarKind::Continuous, None).unwrap();
        m.add_constraint("c", LinExpr::new().with(x, 1), Relation::Le, 3).unwrap();
        m.set_objective(LinExpr::new().with(x, -1)).unwrap();
        let s = solve(&m, &SolveConfig::default()).unwrap();
        assert_eq!(s.status, SolveStatus::Optimal);
        assert_eq!(s.values, vec![q(3)]);
        assert_eq!(s.objective, Some(q(-3)));
    }

    #[test]
    fn infeasible_model() {
        let mut m = MilpModel::new();
        let x = m.add_variable("x", VarKind::Continuous, None).unwrap();
        m.add_constraint("a", LinExpr::new().with(x, 1), Relation::Ge, 1).unwrap();
        m.add_constraint("b", LinExpr::new().with(x, 1), Relation::Le, 0).unwrap();
        let s = solve(&m, &SolveConfig::default()).unwrap();
        assert_eq!(s.status, SolveStatus::Infeasible);
    }

    #[test]
    fn unbounded_is_an_error() {
        let mut m = MilpModel::new();
        let x = m.add_variable("x", VarKind::Integer, None).unwrap();
        m.set_objective(LinExpr::new().with(x, -1)).unwrap();
        assert!(matches!(solve(&m, &SolveConfig::default()), Err(SolveError::Unbounded)));
    }

    #[test]
    fn lexicographic_tie_break() {
        // Any one of three binaries may be chosen at equal cost.
        let mut m = MilpModel::new();
        let v: Vec<_> =
            (0..3).map(|i| m.add_variable(format!("b{i}"), VarKind::Binary, None).unwrap()).collect();
        let sum = LinExpr::from_terms(v.iter().map(|&x| (x, q(1))));
        m.add_constraint("pick", sum.clone(), Relation::Eq, 1).unwrap();
        m.set_objective(sum).unwrap();
        let s = solve(&m, &SolveConfig::default()).unwrap();
        assert_eq!(s.values, vec![q(0), q(0), q(1)]);
    }

    #[test]
    fn node_limit_reported() {
        let mut m = MilpModel::new();
        let v: Vec<_> =
            (0..4).map(|i| m.add_variable(format!("b{i}"), VarKind::Binary, None).unwrap()).collect();
        let e = LinExpr::from_terms(v.iter().map(|&x| (x, q(2))));
        m.add_constraint("odd", e, Relation::Eq, 3).unwrap();
        let cfg = SolveConfig { node_limit: Some(2), ..SolveConfig::default() };
        assert_eq!(solve(&m, &cfg).unwrap().status, SolveStatus::BoundExceeded);
    }
}
