//! JSON form of generalized networks and split translations.
//!
//! ```json
//! {
//!   "species": ["X1", "X2"],
//!   "vertices": [{"name": "v1", "stoich": {"X1": 2}, "kinetic": {"X1": 1}}],
//!   "edges": [{"label": "r1", "source": "v1", "target": "v2", "slice": 1}]
//! }
//! ```
//!
//! Coefficients are integers or rational strings (`"1/2"`). Edge endpoints
//! may be vertex names or 1-based indices. A missing `slice` means slice 1.
//! The output of `translate --json` nests this object under
//! `"translation"`; readers accept either shape.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use splitnet_milp::Rational;

use crate::network::{Complex, GeneralizedNetwork, MultiGraph, ReactionNetwork};
use crate::translation::{ShapeError, SplitTranslation};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GcrnJson {
    pub species: Vec<String>,
    pub vertices: Vec<VertexJson>,
    pub edges: Vec<EdgeJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VertexJson {
    pub name: String,
    pub stoich: BTreeMap<String, Rational>,
    pub kinetic: BTreeMap<String, Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum VertexRef {
    Index(usize),
    Name(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeJson {
    pub label: String,
    pub source: VertexRef,
    pub target: VertexRef,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub slice: Option<usize>,
}

#[derive(Debug, thiserror::Error)]
pub enum JsonError {
    #[error("malformed JSON: {0}")]
    Syntax(#[from] serde_json::Error),
    #[error("no GCRN object found (expected `species`, `vertices`, `edges`)")]
    Shape,
    #[error("unknown species `{0}`")]
    UnknownSpecies(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(String),
    #[error("coefficient of `{species}` in vertex `{vertex}` must be positive")]
    Coefficient { vertex: String, species: String },
    #[error(transparent)]
    Slices(#[from] ShapeError),
}

fn complex_json(c: &Complex, species: &[String]) -> BTreeMap<String, Rational> {
    c.iter().map(|(s, x)| (species[s].clone(), x.clone())).collect()
}

/// JSON object for a generalized network; `edge_slice` (1-based per edge)
/// adds slice numbers.
pub fn gcrn_to_json(net: &GeneralizedNetwork, edge_slice: Option<&[usize]>) -> GcrnJson {
    let vertices = net
        .vertex_names
        .iter()
        .enumerate()
        .map(|(j, name)| VertexJson {
            name: name.clone(),
            stoich: complex_json(&net.stoich[j], &net.species),
            kinetic: complex_json(&net.kinetic[j], &net.species),
        })
        .collect();
    let edges = net
        .graph
        .edges
        .iter()
        .enumerate()
        .map(|(e, &(s, t))| EdgeJson {
            label: net.labels[e].clone(),
            source: VertexRef::Name(net.vertex_names[s].clone()),
            target: VertexRef::Name(net.vertex_names[t].clone()),
            slice: edge_slice.map(|sl| sl[e]),
        })
        .collect();
    GcrnJson { species: net.species.clone(), vertices, edges }
}

pub fn translation_to_json(t: &SplitTranslation) -> GcrnJson {
    gcrn_to_json(&t.network, Some(&t.edge_slices()))
}

fn extract(text: &str) -> Result<GcrnJson, JsonError> {
    let v: serde_json::Value = serde_json::from_str(text)?;
    let obj = if v.get("vertices").is_some() {
        v
    } else {
        ["translation", "network"]
            .iter()
            .find_map(|k| v.get(k).filter(|o| o.get("vertices").is_some()).cloned())
            .ok_or(JsonError::Shape)?
    };
    Ok(serde_json::from_value(obj)?)
}

/// Parses a GCRN; returns the network and per-edge slice numbers.
pub fn parse_gcrn_json(text: &str) -> Result<(GeneralizedNetwork, Vec<usize>), JsonError> {
    let g = extract(text)?;
    let mut species = g.species.clone();
    let mut complex = |vertex: &str, map: &BTreeMap<String, Rational>| -> Result<Complex, JsonError> {
        let mut pairs = Vec::new();
        for (s, x) in map {
            if x.is_zero() {
                continue;
            }
            if x.is_negative() {
                return Err(JsonError::Coefficient { vertex: vertex.to_string(), species: s.clone() });
            }
            let i = match species.iter().position(|n| n == s) {
                Some(i) => i,
                None => {
                    species.push(s.clone());
                    species.len() - 1
                }
            };
            pairs.push((i, x.clone()));
        }
        Ok(Complex::from_pairs(pairs))
    };
    let mut names = Vec::new();
    let mut stoich = Vec::new();
    let mut kinetic = Vec::new();
    for v in &g.vertices {
        if names.contains(&v.name) {
            return Err(JsonError::DuplicateVertex(v.name.clone()));
        }
        names.push(v.name.clone());
        stoich.push(complex(&v.name, &v.stoich)?);
        kinetic.push(complex(&v.name, &v.kinetic)?);
    }
    let resolve = |r: &VertexRef| -> Result<usize, JsonError> {
        match r {
            VertexRef::Index(i) if (1..=names.len()).contains(i) => Ok(i - 1),
            VertexRef::Index(i) => Err(JsonError::UnknownVertex(i.to_string())),
            VertexRef::Name(n) => names.iter().position(|x| x == n).ok_or_else(|| JsonError::UnknownVertex(n.clone())),
        }
    };
    let mut edges = Vec::new();
    let mut labels = Vec::new();
    let mut slices = Vec::new();
    for e in &g.edges {
        edges.push((resolve(&e.source)?, resolve(&e.target)?));
        labels.push(e.label.clone());
        slices.push(e.slice.unwrap_or(1));
    }
    let net = GeneralizedNetwork {
        species,
        vertex_names: names.clone(),
        stoich,
        kinetic,
        graph: MultiGraph::new(names.len(), edges),
        labels,
    };
    Ok((net, slices))
}

/// Reads a split translation of `original` from JSON.
pub fn parse_translation_json(original: &ReactionNetwork, text: &str) -> Result<SplitTranslation, JsonError> {
    let (net, slices) = parse_gcrn_json(text)?;
    if let Some(s) = net.species.iter().find(|s| !original.species.contains(s)) {
        return Err(JsonError::UnknownSpecies(s.clone()));
    }
    Ok(SplitTranslation::assemble(original, net, &slices)?)
}
