//! Weakly reversible split network translations: MILP encoding, decoding,
//! an exact combinatorial search engine and an independent verifier.

mod decode;
mod encode;
mod prune;
mod search;
mod verify;

use serde::Serialize;
use splitnet_milp::Rational;

use crate::network::{GeneralizedNetwork, ReactionNetwork};

pub use decode::{decode, DecodeError};
pub use encode::{encode, Encoding, Layout};
pub use prune::{prune_self_loops, DisplayEdge, PrunedView};
pub use search::{find_wr_split_translation, Engine, Found, QRecord, QStatus, SearchConfig, SearchError, SearchOutcome};
pub use verify::{verify_split_translation, ConditionViolation, Conditions, VerifyReport};

#[derive(Debug, Clone, PartialEq)]
pub struct EncodingParams {
    pub q: usize,
    pub n_vertices: usize,
    pub epsilon: Rational,
    pub big_m: Rational,
    pub integral_complexes: bool,
    /// Keep the index-ordering rows (the "lowest available index" rule and
    /// the slice ordering of nontrivial copies).
    pub symmetry_breaking: bool,
}

impl EncodingParams {
    /// Defaults: vertex budget = original vertex count, `ε = 1`, big-M 1000.
    pub fn for_network(net: &ReactionNetwork, q: usize) -> Self {
        EncodingParams {
            q,
            n_vertices: net.num_vertices(),
            epsilon: Rational::one(),
            big_m: Rational::from(1000),
            integral_complexes: false,
            symmetry_breaking: true,
        }
    }

    pub fn validate(&self, net: &ReactionNetwork) -> Result<(), ParamError> {
        if self.q == 0 {
            return Err(ParamError::ZeroSlices);
        }
        if !self.epsilon.is_positive() {
            return Err(ParamError::Epsilon);
        }
        let sources = source_classes(net).1;
        if self.n_vertices < sources {
            return Err(ParamError::VertexBudget { budget: self.n_vertices, sources });
        }
        let need = &self.epsilon * &Rational::from(self.n_vertices * net.num_reactions() * self.q);
        if self.big_m < need {
            return Err(ParamError::BigM { big_m: self.big_m.clone(), need });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParamError {
    #[error("slice count must be at least 1")]
    ZeroSlices,
    #[error("epsilon must be positive")]
    Epsilon,
    #[error("vertex budget {budget} is below the {sources} distinct source complexes")]
    VertexBudget { budget: usize, sources: usize },
    #[error("big-M {big_m} is below epsilon * vertices * reactions * slices = {need}")]
    BigM { big_m: Rational, need: Rational },
}

/// Class index of every reaction's source (classes numbered by first
/// appearance) and the number of classes.
pub(crate) fn source_classes(net: &ReactionNetwork) -> (Vec<usize>, usize) {
    let mut seen: Vec<usize> = Vec::new();
    let cls = net
        .graph
        .edges
        .iter()
        .map(|&(s, _)| match seen.iter().position(|&v| v == s) {
            Some(c) => c,
            None => {
                seen.push(s);
                seen.len() - 1
            }
        })
        .collect();
    (cls, seen.len())
}

/// A generalized network together with its slice structure: `slices[l][k]`
/// is the edge `α⁽ˡ⁾(k)` carrying original reaction `k` on slice `l`.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitTranslation {
    pub network: GeneralizedNetwork,
    pub q: usize,
    pub slices: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ShapeError {
    #[error("edge {edge} has slice {slice}, outside 1..={q}")]
    SliceRange { edge: usize, slice: usize, q: usize },
    #[error("edge label `{0}` is not a reaction of the original network")]
    UnknownLabel(String),
    #[error("reaction `{label}` appears {count} times on slice {slice}")]
    NotBijective { label: String, slice: usize, count: usize },
    #[error("species `{0}` does not occur in the original network")]
    UnknownSpecies(String),
    #[error("no slices")]
    Empty,
}

impl SplitTranslation {
    /// Builds the slice maps from per-edge slice numbers (1-based), matching
    /// edges to original reactions by label.
    pub fn assemble(
        original: &ReactionNetwork,
        network: GeneralizedNetwork,
        edge_slice: &[usize],
    ) -> Result<Self, ShapeError> {
        let q = edge_slice.iter().copied().max().ok_or(ShapeError::Empty)?;
        let r = original.num_reactions();
        let mut slots: Vec<Vec<Vec<usize>>> = vec![vec![Vec::new(); r]; q];
        for (e, &l) in edge_slice.iter().enumerate() {
            if l == 0 || l > q {
                return Err(ShapeError::SliceRange { edge: e + 1, slice: l, q });
            }
            let label = &network.labels[e];
            let k = original.label_index(label).ok_or_else(|| ShapeError::UnknownLabel(label.clone()))?;
            slots[l - 1][k].push(e);
        }
        let mut slices = Vec::with_capacity(q);
        for (l, row) in slots.into_iter().enumerate() {
            let mut s = Vec::with_capacity(r);
            for (k, es) in row.into_iter().enumerate() {
                if es.len() != 1 {
                    return Err(ShapeError::NotBijective {
                        label: original.labels[k].clone(),
                        slice: l + 1,
                        count: es.len(),
                    });
                }
                s.push(es[0]);
            }
            slices.push(s);
        }
        Ok(SplitTranslation { network, q, slices })
    }

    /// Slice number (1-based) of every edge; 0 for edges in no slice.
    pub fn edge_slices(&self) -> Vec<usize> {
        let mut out = vec![0; self.network.graph.edge_count()];
        for (l, s) in self.slices.iter().enumerate() {
            for &e in s {
                out[e] = l + 1;
            }
        }
        out
    }

    /// Vertices that are the source of no edge (0-based).
    pub fn target_only(&self) -> Vec<usize> {
        let g = &self.network.graph;
        let mut is_source = vec![false; g.vertex_count];
        for &(s, _) in &g.edges {
            is_source[s] = true;
        }
        (0..g.vertex_count).filter(|&v| !is_source[v]).collect()
    }
}

/// Summary numbers reported alongside a translation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TranslationSummary {
    pub q: usize,
    pub vertices: usize,
    pub edges: usize,
    #[serde(rename = "nontrivialEdges")]
    pub nontrivial_edges: usize,
    #[serde(rename = "totalStoichiometry")]
    pub total_stoichiometry: String,
}

pub fn summarize(t: &SplitTranslation) -> TranslationSummary {
    let g = &t.network.graph;
    let total: Rational = t.network.stoich.iter().map(|c| c.size()).sum();
    TranslationSummary {
        q: t.q,
        vertices: g.vertex_count,
        edges: g.edge_count(),
        nontrivial_edges: g.edges.iter().filter(|(s, d)| s != d).count(),
        total_stoichiometry: total.to_string(),
    }
}
