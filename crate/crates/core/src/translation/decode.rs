use splitnet_milp::Rational;

use super::{EncodingParams, Layout, SplitTranslation};
use crate::network::{Complex, GeneralizedNetwork, MultiGraph, ReactionNetwork};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DecodeError {
    #[error("assignment has {got} values, model has {expected}")]
    Length { expected: usize, got: usize },
    #[error("reaction {k} has {count} source vertices")]
    Source { k: usize, count: usize },
    #[error("reaction {k} has {count} targets on slice {l}")]
    Target { k: usize, l: usize, count: usize },
    #[error("vertex {vertex} would carry two kinetic-order complexes")]
    KineticConflict { vertex: usize },
    #[error("negative stoichiometric coefficient at vertex {vertex}")]
    Negative { vertex: usize },
}

fn pick(ones: impl Iterator<Item = (usize, bool)>) -> Result<usize, usize> {
    let hits: Vec<usize> = ones.filter(|(_, b)| *b).map(|(j, _)| j).collect();
    match hits.as_slice() {
        [j] => Ok(*j),
        _ => Err(hits.len()),
    }
}

/// Reads a translation off a full assignment of the encoded program.
///
/// Vertices that are incident to no edge are dropped; the remaining ones are
/// renumbered by first use (scanning reactions in order: source, then the
/// target on each slice). Edges are listed slice by slice, reactions in
/// original order within a slice.
pub fn decode(
    net: &ReactionNetwork,
    p: &EncodingParams,
    lay: &Layout,
    values: &[Rational],
) -> Result<SplitTranslation, DecodeError> {
    if values.len() != lay.num_vars() {
        return Err(DecodeError::Length { expected: lay.num_vars(), got: values.len() });
    }
    let one = |v: splitnet_milp::VarId| values[v.0].is_one();
    let (m, n, r, q) = (lay.m, lay.n, lay.r, p.q);
    let mut beta = vec![0; r];
    let mut tgt = vec![vec![0; q]; r];
    for k in 0..r {
        beta[k] = pick((0..n).map(|j| (j, one(lay.as_(j, k))))).map_err(|c| DecodeError::Source { k: k + 1, count: c })?;
        for l in 0..q {
            tgt[k][l] = pick((0..n).map(|j| (j, one(lay.at(j, k, l)))))
                .map_err(|c| DecodeError::Target { k: k + 1, l: l + 1, count: c })?;
        }
    }
    let mut order: Vec<usize> = Vec::new();
    let mut renum = vec![usize::MAX; n];
    let mut visit = |j: usize| {
        if renum[j] == usize::MAX {
            renum[j] = order.len();
            order.push(j);
        }
    };
    for k in 0..r {
        visit(beta[k]);
        for &t in &tgt[k] {
            visit(t);
        }
    }
    let mut stoich = Vec::with_capacity(order.len());
    for &j in &order {
        let col: Vec<Rational> = (0..m).map(|i| values[lay.y(i, j).0].clone()).collect();
        if col.iter().any(Rational::is_negative) {
            return Err(DecodeError::Negative { vertex: j + 1 });
        }
        stoich.push(Complex::from_dense(&col));
    }
    let mut kinetic: Vec<Option<Complex>> = vec![None; order.len()];
    for k in 0..r {
        let v = renum[beta[k]];
        let y = net.source(k);
        match &kinetic[v] {
            Some(c) if c != y => return Err(DecodeError::KineticConflict { vertex: v + 1 }),
            _ => kinetic[v] = Some(y.clone()),
        }
    }
    // Target-only vertices get ỹ′ := ỹ; no rate is ever evaluated there.
    let kinetic: Vec<Complex> = kinetic.into_iter().enumerate().map(|(v, c)| c.unwrap_or_else(|| stoich[v].clone())).collect();

    let mut edges = Vec::with_capacity(q * r);
    let mut labels = Vec::with_capacity(q * r);
    let mut slices = vec![Vec::with_capacity(r); q];
    for (l, slice) in slices.iter_mut().enumerate() {
        for k in 0..r {
            slice.push(edges.len());
            edges.push((renum[beta[k]], renum[tgt[k][l]]));
            labels.push(net.labels[k].clone());
        }
    }
    let network = GeneralizedNetwork {
        species: net.species.clone(),
        vertex_names: (1..=order.len()).map(|v| format!("v{v}")).collect(),
        stoich,
        kinetic,
        graph: MultiGraph::new(order.len(), edges),
        labels,
    };
    Ok(SplitTranslation { network, q, slices })
}
