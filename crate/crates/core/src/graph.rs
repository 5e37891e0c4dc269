//! Connectivity, weak reversibility and deficiencies.

use serde::{Deserialize, Serialize};
use splitnet_milp::{solve_lp, Lp, LpStatus, Rational, Relation};

use crate::linalg::rank;
use crate::network::{difference, GeneralizedNetwork, MultiGraph, ReactionNetwork};

/// Groups vertices by component id; classes sorted internally and by smallest member.
fn partition(ids: &[usize]) -> Vec<Vec<usize>> {
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut slot: Vec<Option<usize>> = vec![None; ids.len()];
    for (v, &c) in ids.iter().enumerate() {
        match slot[c] {
            Some(i) => classes[i].push(v),
            None => {
                slot[c] = Some(classes.len());
                classes.push(vec![v]);
            }
        }
    }
    classes
}

/// Connected components of the underlying undirected graph.
pub fn linkage_classes(g: &MultiGraph) -> Vec<Vec<usize>> {
    let mut parent: Vec<usize> = (0..g.vertex_count).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for &(s, t) in &g.edges {
        let (a, b) = (find(&mut parent, s), find(&mut parent, t));
        if a != b {
            parent[a.max(b)] = a.min(b);
        }
    }
    let ids: Vec<usize> = (0..g.vertex_count).map(|v| find(&mut parent, v)).collect();
    partition(&ids)
}

/// Strongly connected component id per vertex (Tarjan, iterative).
pub fn scc_ids(g: &MultiGraph) -> Vec<usize> {
    let n = g.vertex_count;
    let mut adj = vec![Vec::new(); n];
    for &(s, t) in &g.edges {
        if s != t {
            adj[s].push(t);
        }
    }
    const NONE: usize = usize::MAX;
    let mut index = vec![NONE; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut comp = vec![NONE; n];
    let mut stack = Vec::new();
    let mut next = 0;
    let mut ncomp = 0;
    for root in 0..n {
        if index[root] != NONE {
            continue;
        }
        let mut call: Vec<(usize, usize)> = vec![(root, 0)];
        index[root] = next;
        low[root] = next;
        next += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut i)) = call.last_mut() {
            if *i < adj[v].len() {
                let w = adj[v][*i];
                *i += 1;
                if index[w] == NONE {
                    index[w] = next;
                    low[w] = next;
                    next += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(u, _)) = call.last() {
                    low[u] = low[u].min(low[v]);
                }
                if low[v] == index[v] {
                    loop {
                        let w = stack.pop().unwrap();
                        on_stack[w] = false;
                        comp[w] = ncomp;
                        if w == v {
                            break;
                        }
                    }
                    ncomp += 1;
                }
            }
        }
    }
    comp
}

pub fn strong_linkage_classes(g: &MultiGraph) -> Vec<Vec<usize>> {
    // Relabel by smallest member so the partition is canonical.
    let ids = scc_ids(g);
    let mut first = vec![usize::MAX; g.vertex_count];
    for (v, &c) in ids.iter().enumerate() {
        first[c] = first[c].min(v);
    }
    let canon: Vec<usize> = ids.iter().map(|&c| first[c]).collect();
    partition(&canon)
}

/// Every edge's endpoints lie in one strong linkage class.
pub fn is_weakly_reversible(g: &MultiGraph) -> bool {
    let ids = scc_ids(g);
    g.edges.iter().all(|&(s, t)| ids[s] == ids[t])
}

/// Flow-matrix certificate of weak reversibility: `B = A·diag(v)` with
/// `ε ≤ v_k ≤ δ` on non-loop edges and `B·1 = 0`, found by an exact LP.
///
/// Since a sum of one cycle per edge is a feasible flow with entries at most
/// `r·ε`, `δ` is raised to at least that, making `None` a proof of non-weak
/// reversibility. If an entry sits at `δ`, `δ` is doubled and the LP re-solved.
pub fn wr_certificate(g: &MultiGraph, epsilon: &Rational, delta: &Rational) -> Option<Vec<Vec<Rational>>> {
    let r = g.edge_count();
    let floor = epsilon * &Rational::from(r.max(1));
    let mut delta = delta.clone().max(floor);
    let a = g.incidence();
    let live: Vec<usize> = (0..r).filter(|&k| g.edges[k].0 != g.edges[k].1).collect();
    loop {
        let mut lp = Lp::with_vars(live.len());
        for p in 0..live.len() {
            lp.cost[p] = Rational::one();
            lp.lower[p] = epsilon.clone();
            lp.upper[p] = Some(delta.clone());
        }
        for row in &a {
            let coeffs: Vec<(usize, Rational)> = live
                .iter()
                .enumerate()
                .filter(|(_, &k)| row[k] != 0)
                .map(|(p, &k)| (p, Rational::from(row[k])))
                .collect();
            if !coeffs.is_empty() {
                lp.add_row(coeffs, Relation::Eq, Rational::zero());
            }
        }
        let sol = solve_lp(&lp);
        if sol.status != LpStatus::Optimal {
            return None;
        }
        if sol.values.contains(&delta) {
            log::warn!("certificate entry at bound {delta}; doubling");
            delta = &delta * &Rational::from(2);
            continue;
        }
        let mut b = vec![vec![Rational::zero(); r]; g.vertex_count];
        for (p, &k) in live.iter().enumerate() {
            let (s, t) = g.edges[k];
            b[s][k] = -&sol.values[p];
            b[t][k] = sol.values[p].clone();
        }
        return Some(b);
    }
}

/// Entrywise sign patterns agree.
pub fn structurally_equivalent(a: &[Vec<i32>], b: &[Vec<Rational>]) -> bool {
    a.len() == b.len()
        && a.iter().zip(b).all(|(ra, rb)| {
            ra.len() == rb.len() && ra.iter().zip(rb).all(|(x, y)| x.signum() == y.signum())
        })
}

/// `B·1 = 0` exactly.
pub fn row_balanced(b: &[Vec<Rational>]) -> bool {
    b.iter().all(|row| row.iter().sum::<Rational>().is_zero())
}

/// `(dim S, dim S′)` of a generalized network.
pub fn subspace_dims(net: &GeneralizedNetwork) -> (usize, usize) {
    let m = net.num_species();
    let diffs = |cx: &[crate::network::Complex]| -> Vec<Vec<Rational>> {
        net.graph.edges.iter().map(|&(s, t)| difference(&cx[t], &cx[s], m)).collect()
    };
    (rank(&diffs(&net.stoich)), rank(&diffs(&net.kinetic)))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructuralReport {
    pub n: usize,
    pub r: usize,
    pub l: usize,
    #[serde(rename = "dimS")]
    pub dim_s: usize,
    #[serde(rename = "dimSprime")]
    pub dim_s_prime: usize,
    pub delta: i64,
    #[serde(rename = "deltaPrime")]
    pub delta_prime: i64,
    #[serde(rename = "weaklyReversible")]
    pub weakly_reversible: bool,
    /// 1-based vertex indices.
    #[serde(rename = "linkageClasses")]
    pub linkage_classes: Vec<Vec<usize>>,
    #[serde(rename = "strongLinkageClasses")]
    pub strong_linkage_classes: Vec<Vec<usize>>,
}

pub fn analyze(net: &GeneralizedNetwork) -> StructuralReport {
    let g = &net.graph;
    let lc = linkage_classes(g);
    let slc = strong_linkage_classes(g);
    let (ds, dk) = subspace_dims(net);
    let (n, l) = (g.vertex_count as i64, lc.len() as i64);
    let one_based = |p: Vec<Vec<usize>>| p.into_iter().map(|c| c.into_iter().map(|v| v + 1).collect()).collect();
    StructuralReport {
        n: g.vertex_count,
        r: g.edge_count(),
        l: lc.len(),
        dim_s: ds,
        dim_s_prime: dk,
        delta: n - l - ds as i64,
        delta_prime: n - l - dk as i64,
        weakly_reversible: is_weakly_reversible(g),
        linkage_classes: one_based(lc),
        strong_linkage_classes: one_based(slc),
    }
}

/// For a plain network the kinetic fields mirror the stoichiometric ones.
pub fn analyze_network(net: &ReactionNetwork) -> StructuralReport {
    analyze(&net.to_generalized())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_partitions() {
        let g = MultiGraph::new(3, vec![]);
        assert_eq!(linkage_classes(&g), vec![vec![0], vec![1], vec![2]]);
        assert!(is_weakly_reversible(&g));
        let g = MultiGraph::new(2, vec![(0, 1)]);
        assert_eq!(strong_linkage_classes(&g), vec![vec![0], vec![1]]);
        assert!(!is_weakly_reversible(&g));
        assert!(wr_certificate(&g, &Rational::one(), &Rational::from(1000)).is_none());
    }

    #[test]
    fn two_cycle_certificate_is_incidence() {
        let g = MultiGraph::new(2, vec![(0, 1), (1, 0)]);
        let b = wr_certificate(&g, &Rational::one(), &Rational::from(1000)).unwrap();
        let a = g.incidence();
        let expect: Vec<Vec<Rational>> = a.iter().map(|r| r.iter().map(|&x| Rational::from(x)).collect()).collect();
        assert_eq!(b, expect);
    }

    #[test]
    fn bridged_cycles_are_not_certified() {
        // Two 2-cycles joined by a one-way edge: rows can balance, columns cannot.
        let g = MultiGraph::new(4, vec![(0, 1), (1, 0), (2, 3), (3, 2), (1, 2)]);
        assert!(!is_weakly_reversible(&g));
        assert!(wr_certificate(&g, &Rational::one(), &Rational::from(1000)).is_none());
    }

    #[test]
    fn self_loops_ignored() {
        let g = MultiGraph::new(2, vec![(0, 0), (0, 1), (1, 0), (1, 1)]);
        assert!(is_weakly_reversible(&g));
        assert_eq!(linkage_classes(&MultiGraph::new(2, vec![(0, 0)])).len(), 2);
    }
}
