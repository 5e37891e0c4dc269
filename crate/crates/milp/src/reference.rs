//! Slow, independent reference solvers used to cross-check the simplex and
//! branch-and-bound. Nothing here shares code with [`crate::simplex`].

use crate::model::{MilpModel, Relation, VarKind};
use crate::Rational;

/// Solves the square system `a x = b` by Gauss–Jordan elimination; `None`
/// when singular.
pub fn solve_square(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = b.len();
    for col in 0..n {
        let p = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, p);
        b.swap(col, p);
        let inv = a[col][col].recip();
        for j in col..n {
            a[col][j] = &a[col][j] * &inv;
        }
        b[col] = &b[col] * &inv;
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for j in col..n {
                    let d = &f * &a[col][j];
                    a[r][j] -= d;
                }
                let d = &f * &b[col];
                b[r] -= d;
            }
        }
    }
    Some(b)
}

/// Rank of a rational matrix by elimination.
pub fn rank(mut a: Vec<Vec<Rational>>) -> usize {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        for i in r + 1..rows {
            if !a[i][c].is_zero() {
                let f = &a[i][c] / &a[r][c];
                for j in c..cols {
                    let d = &f * &a[r][j];
                    a[i][j] -= d;
                }
            }
        }
        r += 1;
    }
    r
}

struct Half {
    coeffs: Vec<Rational>,
    relation: Relation,
    rhs: Rational,
}

/// Minimizes `cost · x` over a bounded polyhedron by enumerating every
/// candidate vertex. Exponential; meant for a handful of variables.
pub fn vertex_enumeration_lp(
    cost: &[Rational],
    rows: &[(Vec<Rational>, Relation, Rational)],
    upper: &[Rational],
) -> Option<(Rational, Vec<Rational>)> {
    let n = cost.len();
    let mut halves: Vec<Half> = rows
        .iter()
        .map(|(c, r, b)| Half { coeffs: c.clone(), relation: *r, rhs: b.clone() })
        .collect();
    for j in 0..n {
        let mut e = vec![Rational::zero(); n];
        e[j] = Rational::one();
        halves.push(Half { coeffs: e.clone(), relation: Relation::Ge, rhs: Rational::zero() });
        halves.push(Half { coeffs: e, relation: Relation::Le, rhs: upper[j].clone() });
    }
    let feasible = |x: &[Rational]| {
        halves.iter().all(|h| {
            let lhs: Rational = h.coeffs.iter().zip(x).map(|(a, v)| a * v).sum();
            h.relation.holds(&lhs, &h.rhs)
        })
    };
    let mut best: Option<(Rational, Vec<Rational>)> = None;
    let mut consider = |x: Vec<Rational>| {
        if feasible(&x) {
            let z: Rational = cost.iter().zip(&x).map(|(c, v)| c * v).sum();
            if best.as_ref().map_or(true, |(bz, _)| z < *bz) {
                best = Some((z, x));
            }
        }
    };
    if n == 0 {
        consider(Vec::new());
        return best;
    }
    let m = halves.len();
    let mut pick: Vec<usize> = (0..n).collect();
    loop {
        let a = pick.iter().map(|&i| halves[i].coeffs.clone()).collect();
        let b = pick.iter().map(|&i| halves[i].rhs.clone()).collect();
        if let Some(x) = solve_square(a, b) {
            consider(x);
        }
        // Next combination in lexicographic order.
        let mut i = n;
        loop {
            if i == 0 {
                return best;
            }
            i -= 1;
            if pick[i] < m - n + i {
                break;
            }
        }
        pick[i] += 1;
        for k in i + 1..n {
            pick[k] = pick[k - 1] + 1;
        }
    }
}

/// Exhaustive solve of a model whose integral variables are all binary and
/// whose continuous variables all have finite upper bounds. Returns the
/// optimum with the lexicographically smallest binary vector.
pub fn brute_force(model: &MilpModel) -> Option<(Rational, Vec<Rational>)> {
    let vars = model.variables();
    let bins: Vec<usize> = (0..vars.len()).filter(|&j| vars[j].kind == VarKind::Binary).collect();
    let conts: Vec<usize> = (0..vars.len()).filter(|&j| vars[j].kind == VarKind::Continuous).collect();
    assert!(vars.iter().all(|v| v.kind != VarKind::Integer), "general integers unsupported");
    let upper: Vec<Rational> = conts
        .iter()
        .map(|&j| vars[j].effective_upper().expect("continuous variables need upper bounds"))
        .collect();
    let mut cost_c = vec![Rational::zero(); conts.len()];
    let mut cost_b = vec![Rational::zero(); vars.len()];
    for (v, c) in model.objective().terms() {
        match conts.iter().position(|&j| j == v.0) {
            Some(p) => cost_c[p] = c.clone(),
            None => cost_b[v.0] = c.clone(),
        }
    }
    let mut best: Option<(Rational, Vec<Rational>)> = None;
    let nb = bins.len();
    for mask in 0u64..(1u64 << nb) {
        let mut x = vec![Rational::zero(); vars.len()];
        // First binary is the most significant bit: increasing masks are lexicographic.
        for (p, &j) in bins.iter().enumerate() {
            if mask >> (nb - 1 - p) & 1 == 1 {
                x[j] = Rational::one();
            }
        }
        if bins.iter().any(|&j| x[j] > vars[j].effective_upper().unwrap()) {
            continue;
        }
        let rows: Vec<_> = model
            .constraints()
            .iter()
            .map(|c| {
                let mut coeffs = vec![Rational::zero(); conts.len()];
                let mut rhs = c.rhs.clone();
                for (v, a) in c.expr.terms() {
                    match conts.iter().position(|&j| j == v.0) {
                        Some(p) => coeffs[p] = a.clone(),
                        None => rhs -= a * &x[v.0],
                    }
                }
                (coeffs, c.relation, rhs)
            })
            .collect();
        let Some((zc, xc)) = vertex_enumeration_lp(&cost_c, &rows, &upper) else { continue };
        let z: Rational = zc + bins.iter().map(|&j| &cost_b[j] * &x[j]).sum::<Rational>();
        if best.as_ref().map_or(true, |(bz, _)| z < *bz) {
            for (p, &j) in conts.iter().enumerate() {
                x[j] = xc[p].clone();
            }
            best = Some((z, x));
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::LinExpr;

    #[test]
    fn square_solve() {
        let q = |n| Rational::from_integer(n);
        let x = solve_square(vec![vec![q(2), q(1)], vec![q(1), q(3)]], vec![q(3), q(5)]).unwrap();
        assert_eq!(x, vec![Rational::new(4, 5), Rational::new(7, 5)]);
        assert!(solve_square(vec![vec![q(1), q(1)], vec![q(2), q(2)]], vec![q(1), q(2)]).is_none());
    }

    #[test]
    fn knapsack_cover() {
        let mut m = MilpModel::new();
        let w = [3, 4, 5];
        let v: Vec<_> =
            (0..3).map(|i| m.add_variable(format!("b{i}"), VarKind::Binary, None).unwrap()).collect();
        let e = LinExpr::from_terms(v.iter().zip(w).map(|(&x, c)| (x, Rational::from_integer(c))));
        m.add_constraint("cover", e.clone(), Relation::Ge, 7).unwrap();
        m.set_objective(e).unwrap();
        let (z, _) = brute_force(&m).unwrap();
        assert_eq!(z, Rational::from_integer(7));
    }
}
