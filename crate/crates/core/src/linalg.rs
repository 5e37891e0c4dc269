use splitnet_milp::Rational;

/// Exact rank by Gaussian elimination; rows may be any (equal) length.
pub fn rank(rows: &[Vec<Rational>]) -> usize {
    let mut a: Vec<Vec<Rational>> = rows.to_vec();
    let cols = a.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        let pivot = a[r][c].clone();
        for i in r + 1..a.len() {
            if a[i][c].is_zero() {
                continue;
            }
            let f = &a[i][c] / &pivot;
            for j in c..cols {
                if !a[r][j].is_zero() {
                    let d = &f * &a[r][j];
                    a[i][j] -= d;
                }
            }
        }
        r += 1;
        if r == a.len() {
            break;
        }
    }
    r
}

/// Dimension of the null space of `rows` (as a map from column space).
pub fn nullity(rows: &[Vec<Rational>]) -> usize {
    rows.first().map_or(0, Vec::len) - rank(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn small_ranks() {
        let q = |v: i64| Rational::from(v);
        assert_eq!(rank(&[vec![q(1), q(2)], vec![q(2), q(4)]]), 1);
        assert_eq!(rank(&[vec![q(0), q(0)]]), 0);
        assert_eq!(rank(&[]), 0);
    }

    proptest! {
        #[test]
        fn rank_plus_nullity(rows in 1usize..5, cols in 1usize..6, seed in proptest::collection::vec(-2i64..3, 30)) {
            let m: Vec<Vec<Rational>> = (0..rows)
                .map(|i| (0..cols).map(|j| Rational::from(seed[(i * cols + j) % seed.len()])).collect())
                .collect();
            let r = rank(&m);
            prop_assert!(r <= rows.min(cols));
            prop_assert_eq!(r + nullity(&m), cols);
            // Rank is invariant under transposition.
            let t: Vec<Vec<Rational>> = (0..cols).map(|j| (0..rows).map(|i| m[i][j].clone()).collect()).collect();
            prop_assert_eq!(rank(&t), r);
        }
    }
}
