//! Complexes, multigraphs and (generalized) reaction networks.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use splitnet_milp::Rational;

/// Sparse nonnegative combination of species. Only positive entries are stored.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Complex {
    coeffs: BTreeMap<usize, Rational>,
}

impl Complex {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Builds a complex, summing repeated species and dropping zeros.
    /// Panics on negative coefficients.
    pub fn from_pairs<I: IntoIterator<Item = (usize, Rational)>>(pairs: I) -> Self {
        let mut c = Complex::empty();
        for (s, v) in pairs {
            c.add(s, &v);
        }
        c
    }

    /// Interprets a dense vector as a complex; entries must be nonnegative.
    pub fn from_dense(v: &[Rational]) -> Self {
        Self::from_pairs(v.iter().cloned().enumerate())
    }

    fn add(&mut self, species: usize, v: &Rational) {
        let e = self.coeffs.entry(species).or_insert_with(Rational::zero);
        *e += v;
        assert!(!e.is_negative(), "negative stoichiometric coefficient");
        if e.is_zero() {
            self.coeffs.remove(&species);
        }
    }

    pub fn get(&self, species: usize) -> Rational {
        self.coeffs.get(&species).cloned().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Rational)> {
        self.coeffs.iter().map(|(s, v)| (*s, v))
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn max_species(&self) -> Option<usize> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn to_dense(&self, m: usize) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); m];
        for (s, c) in &self.coeffs {
            v[*s] = c.clone();
        }
        v
    }

    /// Sum of all coefficients (molecularity).
    pub fn size(&self) -> Rational {
        self.coeffs.values().sum()
    }

    /// Renders like `2 X1 + X2`, or `0` for the empty complex.
    pub fn display(&self, species: &[String]) -> String {
        if self.is_empty() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (i, (sp, c)) in self.coeffs.iter().enumerate() {
            if i > 0 {
                s.push_str(" + ");
            }
            if !c.is_one() {
                let _ = write!(s, "{c} ");
            }
            s.push_str(&species[*sp]);
        }
        s
    }
}

/// `target − source` as a dense vector.
pub fn difference(target: &Complex, source: &Complex, m: usize) -> Vec<Rational> {
    let mut v = target.to_dense(m);
    for (s, c) in source.iter() {
        v[s] -= c;
    }
    v
}

/// Directed multigraph on `0..vertex_count`; self-loops and parallel edges allowed.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MultiGraph {
    pub vertex_count: usize,
    pub edges: Vec<(usize, usize)>,
}

impl MultiGraph {
    pub fn new(vertex_count: usize, edges: Vec<(usize, usize)>) -> Self {
        assert!(edges.iter().all(|&(s, t)| s < vertex_count && t < vertex_count), "edge endpoint out of range");
        MultiGraph { vertex_count, edges }
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Incidence matrix `A` (n×r): −1 at the source, +1 at the target; zero column for self-loops.
    pub fn incidence(&self) -> Vec<Vec<i32>> {
        let mut a = vec![vec![0; self.edges.len()]; self.vertex_count];
        for (k, &(s, t)) in self.edges.iter().enumerate() {
            a[s][k] -= 1;
            a[t][k] += 1;
        }
        a
    }
}

/// A chemical reaction network: injective complexes on the vertices of a multigraph.
#[derive(Debug, Clone, PartialEq)]
pub struct ReactionNetwork {
    pub species: Vec<String>,
    pub complexes: Vec<Complex>,
    pub graph: MultiGraph,
    pub labels: Vec<String>,
}

/// A generalized network: each vertex carries a stoichiometric and a kinetic-order complex.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneralizedNetwork {
    pub species: Vec<String>,
    pub vertex_names: Vec<String>,
    pub stoich: Vec<Complex>,
    pub kinetic: Vec<Complex>,
    pub graph: MultiGraph,
    /// Edge labels; edges sharing a label share a rate constant.
    pub labels: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("reaction index {index} out of range 1..={count}")]
pub struct IndexError {
    pub index: usize,
    pub count: usize,
}

impl ReactionNetwork {
    pub fn num_species(&self) -> usize {
        self.species.len()
    }

    pub fn num_vertices(&self) -> usize {
        self.graph.vertex_count
    }

    pub fn num_reactions(&self) -> usize {
        self.graph.edges.len()
    }

    pub fn source(&self, k: usize) -> &Complex {
        &self.complexes[self.graph.edges[k].0]
    }

    pub fn target(&self, k: usize) -> &Complex {
        &self.complexes[self.graph.edges[k].1]
    }

    /// `y(π(k)) − y(ρ(k))` for the 1-based reaction index `k`.
    pub fn reaction_vector(&self, k: usize) -> Result<Vec<Rational>, IndexError> {
        if k == 0 || k > self.num_reactions() {
            return Err(IndexError { index: k, count: self.num_reactions() });
        }
        Ok(self.reaction_vector0(k - 1))
    }

    pub(crate) fn reaction_vector0(&self, k: usize) -> Vec<Rational> {
        difference(self.target(k), self.source(k), self.num_species())
    }

    pub fn label_index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// The network as a generalized one with `ỹ = ỹ′ = y`.
    pub fn to_generalized(&self) -> GeneralizedNetwork {
        GeneralizedNetwork {
            species: self.species.clone(),
            vertex_names: self.complexes.iter().map(|c| c.display(&self.species)).collect(),
            stoich: self.complexes.clone(),
            kinetic: self.complexes.clone(),
            graph: self.graph.clone(),
            labels: self.labels.clone(),
        }
    }

    pub fn matrices(&self) -> StoichMatrices {
        build_matrices(self)
    }
}

impl GeneralizedNetwork {
    pub fn num_species(&self) -> usize {
        self.species.len()
    }

    pub fn num_vertices(&self) -> usize {
        self.graph.vertex_count
    }
}

/// Matrix decompositions `Γ = Γt − Γs = Y A`.
#[derive(Debug, Clone, PartialEq)]
pub struct StoichMatrices {
    pub gamma: Vec<Vec<Rational>>,
    pub gamma_t: Vec<Vec<Rational>>,
    pub gamma_s: Vec<Vec<Rational>>,
    pub complex_matrix: Vec<Vec<Rational>>,
    pub a_t: Vec<Vec<u8>>,
    pub a_s: Vec<Vec<u8>>,
}

pub fn build_matrices(net: &ReactionNetwork) -> StoichMatrices {
    let (m, n, r) = (net.num_species(), net.num_vertices(), net.num_reactions());
    let mut complex_matrix = vec![vec![Rational::zero(); n]; m];
    for (j, c) in net.complexes.iter().enumerate() {
        for (i, v) in c.iter() {
            complex_matrix[i][j] = v.clone();
        }
    }
    let mut a_t = vec![vec![0u8; r]; n];
    let mut a_s = vec![vec![0u8; r]; n];
    for (k, &(s, t)) in net.graph.edges.iter().enumerate() {
        a_s[s][k] = 1;
        a_t[t][k] = 1;
    }
    let column = |j: usize| (0..m).map(|i| complex_matrix[i][j].clone()).collect::<Vec<_>>();
    let mut gamma_t = vec![vec![Rational::zero(); r]; m];
    let mut gamma_s = vec![vec![Rational::zero(); r]; m];
    let mut gamma = vec![vec![Rational::zero(); r]; m];
    for (k, &(s, t)) in net.graph.edges.iter().enumerate() {
        let (cs, ct) = (column(s), column(t));
        for i in 0..m {
            gamma_t[i][k] = ct[i].clone();
            gamma_s[i][k] = cs[i].clone();
            gamma[i][k] = &ct[i] - &cs[i];
        }
    }
    StoichMatrices { gamma, gamma_t, gamma_s, complex_matrix, a_t, a_s }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_display_and_dense() {
        let c = Complex::from_pairs([(1, Rational::from(2)), (0, Rational::one())]);
        let names = vec!["A".to_string(), "B".to_string()];
        assert_eq!(c.display(&names), "A + 2 B");
        assert_eq!(Complex::empty().display(&names), "0");
        assert_eq!(Complex::from_dense(&c.to_dense(2)), c);
    }

    #[test]
    fn incidence_of_self_loop_is_zero() {
        let g = MultiGraph::new(2, vec![(0, 1), (1, 1)]);
        assert_eq!(g.incidence(), vec![vec![-1, 0], vec![1, 0]]);
    }
}
