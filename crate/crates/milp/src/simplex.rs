//! Dense-tableau primal simplex over exact rationals.
//!
//! Variables carry a finite lower bound and an optional upper bound, handled
//! directly by the ratio test (no extra rows). Pivoting follows Bland's rule,
//! so the method terminates without any tolerance or perturbation.

use serde::{Deserialize, Serialize};

use crate::{Rational, Relation};

#[derive(Debug, Clone, PartialEq)]
pub struct LpRow {
    pub coeffs: Vec<(usize, Rational)>,
    pub relation: Relation,
    pub rhs: Rational,
}

/// `min cost·x` subject to `rows` and `lower ≤ x ≤ upper`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Lp {
    pub cost: Vec<Rational>,
    pub lower: Vec<Rational>,
    pub upper: Vec<Option<Rational>>,
    pub rows: Vec<LpRow>,
}

impl Lp {
    /// `n` variables in `[0, ∞)` with zero cost and no rows.
    pub fn with_vars(n: usize) -> Self {
        Lp {
            cost: vec![Rational::zero(); n],
            lower: vec![Rational::zero(); n],
            upper: vec![None; n],
            rows: Vec::new(),
        }
    }

    pub fn add_row(&mut self, coeffs: Vec<(usize, Rational)>, relation: Relation, rhs: Rational) {
        self.rows.push(LpRow { coeffs, relation, rhs });
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Structural values; meaningful only when optimal.
    pub values: Vec<Rational>,
    pub objective: Rational,
    pub pivots: usize,
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    /// Current value of every column (basic ones included).
    x: Vec<Rational>,
    lo: Vec<Rational>,
    hi: Vec<Option<Rational>>,
    basic_row: Vec<Option<usize>>,
    pivots: usize,
}

enum Step {
    Optimal,
    Unbounded,
    Moved,
}

impl Tableau {
    fn reduced_costs(&self, cost: &[Rational]) -> Vec<Rational> {
        let mut d = cost.to_vec();
        for (r, &b) in self.basis.iter().enumerate() {
            let cb = &cost[b];
            if cb.is_zero() {
                continue;
            }
            for (j, a) in self.rows[r].iter().enumerate() {
                if !a.is_zero() {
                    d[j] -= cb * a;
                }
            }
        }
        d
    }

    fn can_increase(&self, j: usize) -> bool {
        self.hi[j].as_ref().map_or(true, |h| self.x[j] < *h)
    }

    fn can_decrease(&self, j: usize) -> bool {
        self.x[j] > self.lo[j]
    }

    /// One Bland iteration. `d` is updated in place on a basis change.
    fn step(&mut self, d: &mut [Rational]) -> Step {
        let ncols = self.x.len();
        let entering = (0..ncols).find(|&j| {
            self.basic_row[j].is_none()
                && ((d[j].is_negative() && self.can_increase(j))
                    || (d[j].is_positive() && self.can_decrease(j)))
        });
        let Some(q) = entering else { return Step::Optimal };
        let increasing = d[q].is_negative();

        // Candidate limits: (theta, leaving column, leaving goes to upper?)
        let mut best: Option<(Rational, usize, Option<usize>, bool)> = None;
        let mut consider = |theta: Rational, col: usize, row: Option<usize>, to_upper: bool| {
            let better = match &best {
                None => true,
                Some((t, c, _, _)) => theta < *t || (theta == *t && col < *c),
            };
            if better {
                best = Some((theta, col, row, to_upper));
            }
        };
        if let Some(h) = &self.hi[q] {
            consider(h - &self.lo[q], q, None, increasing);
        }
        for (r, row) in self.rows.iter().enumerate() {
            let a = &row[q];
            if a.is_zero() {
                continue;
            }
            let b = self.basis[r];
            // Basic variable moves at `rate` per unit step of the entering one.
            let falls = a.is_positive() == increasing;
            if falls {
                let theta = (&self.x[b] - &self.lo[b]) / a.abs();
                consider(theta, b, Some(r), false);
            } else if let Some(h) = &self.hi[b] {
                let theta = (h - &self.x[b]) / a.abs();
                consider(theta, b, Some(r), true);
            }
        }
        let Some((theta, leaving, row, to_upper)) = best else { return Step::Unbounded };

        if !theta.is_zero() {
            let signed = if increasing { theta.clone() } else { -&theta };
            for (r, rowv) in self.rows.iter().enumerate() {
                let a = &rowv[q];
                if !a.is_zero() {
                    let b = self.basis[r];
                    self.x[b] -= a * &signed;
                }
            }
            self.x[q] += &signed;
        }
        match row {
            None => {
                // Bound flip: snap exactly to the opposite bound.
                self.x[q] = if to_upper { self.hi[q].clone().unwrap() } else { self.lo[q].clone() };
            }
            Some(r) => {
                self.x[leaving] = if to_upper {
                    self.hi[leaving].clone().unwrap()
                } else {
                    self.lo[leaving].clone()
                };
                self.pivot(r, q, d);
            }
        }
        Step::Moved
    }

    fn pivot(&mut self, r: usize, q: usize, d: &mut [Rational]) {
        self.pivots += 1;
        let inv = self.rows[r][q].recip();
        if !inv.is_one() {
            for a in self.rows[r].iter_mut() {
                if !a.is_zero() {
                    *a *= &inv;
                }
            }
        }
        let pivot_row = std::mem::take(&mut self.rows[r]);
        let nz: Vec<usize> = (0..pivot_row.len()).filter(|&j| !pivot_row[j].is_zero()).collect();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[q].is_zero() {
                continue;
            }
            let f = row[q].clone();
            for &j in &nz {
                let delta = &f * &pivot_row[j];
                row[j] -= delta;
            }
        }
        if !d[q].is_zero() {
            let f = d[q].clone();
            for &j in &nz {
                let delta = &f * &pivot_row[j];
                d[j] -= delta;
            }
        }
        self.rows[r] = pivot_row;
        let old = self.basis[r];
        self.basic_row[old] = None;
        self.basic_row[q] = Some(r);
        self.basis[r] = q;
    }

    fn run(&mut self, cost: &[Rational]) -> Step {
        let mut d = self.reduced_costs(cost);
        loop {
            match self.step(&mut d) {
                Step::Moved => continue,
                s => return s,
            }
        }
    }
}

/// Solves an LP exactly. Lower bounds must not exceed upper bounds; an empty
/// box is reported as infeasible.
pub fn solve_lp(lp: &Lp) -> LpSolution {
    let n = lp.cost.len();
    let infeasible = |pivots| LpSolution {
        status: LpStatus::Infeasible,
        values: Vec::new(),
        objective: Rational::zero(),
        pivots,
    };
    if lp.lower.iter().zip(&lp.upper).any(|(l, u)| u.as_ref().is_some_and(|u| u < l)) {
        return infeasible(0);
    }

    // Column layout: structurals, one slack per inequality, artificials as needed.
    let m = lp.rows.len();
    let mut slack_of = vec![None; m];
    let mut ncols = n;
    for (i, row) in lp.rows.iter().enumerate() {
        if row.relation != Relation::Eq {
            slack_of[i] = Some(ncols);
            ncols += 1;
        }
    }
    let mut residual: Vec<Rational> = lp
        .rows
        .iter()
        .map(|row| {
            let mut r = row.rhs.clone();
            for (j, a) in &row.coeffs {
                if !lp.lower[*j].is_zero() {
                    r -= a * &lp.lower[*j];
                }
            }
            r
        })
        .collect();

    let mut basis = Vec::with_capacity(m);
    let mut art_sign = vec![None; m];
    for i in 0..m {
        let slack_ok = match (lp.rows[i].relation, residual[i].signum()) {
            (Relation::Le, s) => s >= 0,
            (Relation::Ge, s) => s <= 0,
            (Relation::Eq, _) => false,
        };
        if slack_ok {
            basis.push(slack_of[i].unwrap());
        } else {
            art_sign[i] = Some(if residual[i].is_negative() { -1 } else { 1 });
            basis.push(ncols);
            ncols += 1;
        }
    }
    let first_art = n + slack_of.iter().flatten().count();

    let mut rows = vec![vec![Rational::zero(); ncols]; m];
    for (i, row) in lp.rows.iter().enumerate() {
        let t = &mut rows[i];
        for (j, a) in &row.coeffs {
            t[*j] += a;
        }
        if let Some(s) = slack_of[i] {
            t[s] = match row.relation {
                Relation::Le => Rational::one(),
                _ => -Rational::one(),
            };
        }
        if art_sign[i].is_some() {
            t[basis[i]] = Rational::one() * Rational::from(art_sign[i].unwrap());
        }
        // Normalize so the basic column carries +1.
        if t[basis[i]].is_negative() {
            for a in t.iter_mut() {
                if !a.is_zero() {
                    *a = -&*a;
                }
            }
            residual[i] = -&residual[i];
        }
    }

    let mut lo = lp.lower.clone();
    lo.resize(ncols, Rational::zero());
    let mut hi = lp.upper.clone();
    hi.resize(ncols, None);
    let mut x = lp.lower.clone();
    x.resize(ncols, Rational::zero());
    let mut basic_row = vec![None; ncols];
    for (i, &b) in basis.iter().enumerate() {
        x[b] = residual[i].clone();
        basic_row[b] = Some(i);
    }
    let mut tab = Tableau { rows, basis, x, lo, hi, basic_row, pivots: 0 };

    if first_art < ncols {
        let mut c1 = vec![Rational::zero(); ncols];
        for c in c1.iter_mut().skip(first_art) {
            *c = Rational::one();
        }
        // Phase 1 is bounded below by zero, so it always stops at an optimum.
        tab.run(&c1);
        let infeas: Rational = tab.x[first_art..].iter().sum();
        if infeas.is_positive() {
            return infeasible(tab.pivots);
        }
        for j in first_art..ncols {
            tab.hi[j] = Some(Rational::zero());
        }
    }

    let mut c2 = lp.cost.clone();
    c2.resize(ncols, Rational::zero());
    let status = match tab.run(&c2) {
        Step::Unbounded => LpStatus::Unbounded,
        _ => LpStatus::Optimal,
    };
    let values: Vec<Rational> = tab.x[..n].to_vec();
    let objective = lp.cost.iter().zip(&values).map(|(c, v)| c * v).sum();
    LpSolution { status, values, objective, pivots: tab.pivots }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n)
    }

    #[test]
    fn maximize_single_var() {
        let mut lp = Lp::with_vars(1);
        lp.cost[0] = q(-1);
        lp.add_row(vec![(0, q(1))], Relation::Le, q(3));
        let s = solve_lp(&lp);
        assert_eq!(s.status, LpStatus::Optimal);
        assert_eq!(s.values, vec![q(3)]);
        assert_eq!(s.objective, q(-3));
    }

    #[test]
    fn contradictory_bounds() {
        let mut lp = Lp::with_vars(1);
        lp.add_row(vec![(0, q(1))], Relation::Ge, q(1));
        lp.add_row(vec![(0, q(1))], Relation::Le, q(0));
        assert_eq!(solve_lp(&lp).status, LpStatus::Infeasible);
    }

    #[test]
    fn unbounded_ray() {
        let mut lp = Lp::with_vars(2);
        lp.cost = vec![q(-1), q(0)];
        lp.add_row(vec![(0, q(1)), (1, q(-1))], Relation::Le, q(1));
        assert_eq!(solve_lp(&lp).status, LpStatus::Unbounded);
    }

    #[test]
    fn upper_bounds_and_flips() {
        // max x + y, x ≤ 2 (bound), y ≤ 5/2 (bound), x + y ≤ 4
        let mut lp = Lp::with_vars(2);
        lp.cost = vec![q(-1), q(-1)];
        lp.upper = vec![Some(q(2)), Some(Rational::new(5, 2))];
        lp.add_row(vec![(0, q(1)), (1, q(1))], Relation::Le, q(4));
        let s = solve_lp(&lp);
        assert_eq!(s.objective, q(-4));
    }

    #[test]
    fn nonzero_lower_bounds() {
        let mut lp = Lp::with_vars(2);
        lp.cost = vec![q(1), q(1)];
        lp.lower = vec![q(1), q(0)];
        lp.add_row(vec![(0, q(1)), (1, q(2))], Relation::Eq, q(4));
        let s = solve_lp(&lp);
        assert_eq!(s.status, LpStatus::Optimal);
        assert_eq!(s.objective, Rational::new(5, 2));
        assert_eq!(s.values, vec![q(1), Rational::new(3, 2)]);
    }

    #[test]
    fn redundant_equalities() {
        let mut lp = Lp::with_vars(2);
        lp.cost = vec![q(1), q(2)];
        lp.add_row(vec![(0, q(1)), (1, q(1))], Relation::Eq, q(2));
        lp.add_row(vec![(0, q(2)), (1, q(2))], Relation::Eq, q(4));
        let s = solve_lp(&lp);
        assert_eq!(s.values, vec![q(2), q(0)]);
    }
}
