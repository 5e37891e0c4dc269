use serde::Serialize;

use super::SplitTranslation;

/// One displayed arrow: all non-loop edges between the same ordered pair of
/// vertices, labels listed once each in order of appearance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DisplayEdge {
    /// 1-based vertex indices.
    pub source: usize,
    pub target: usize,
    pub labels: Vec<String>,
    /// Number of underlying edges (a split reaction may contribute several).
    pub multiplicity: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrunedView {
    pub combined: Vec<DisplayEdge>,
    pub slices: Vec<Vec<DisplayEdge>>,
}

fn merge(edges: impl Iterator<Item = (usize, usize, String)>) -> Vec<DisplayEdge> {
    let mut out: Vec<DisplayEdge> = Vec::new();
    for (s, t, label) in edges {
        if s == t {
            continue;
        }
        match out.iter_mut().find(|d| d.source == s + 1 && d.target == t + 1) {
            Some(d) => {
                d.multiplicity += 1;
                if !d.labels.contains(&label) {
                    d.labels.push(label);
                }
            }
            None => out.push(DisplayEdge { source: s + 1, target: t + 1, labels: vec![label], multiplicity: 1 }),
        }
    }
    out
}

/// Display view without self-loops and with parallel edges merged; the
/// translation itself is untouched.
pub fn prune_self_loops(t: &SplitTranslation) -> PrunedView {
    let g = &t.network.graph;
    let lab = &t.network.labels;
    let combined = merge(g.edges.iter().zip(lab).map(|(&(s, d), l)| (s, d, l.clone())));
    let slices = t
        .slices
        .iter()
        .map(|sl| merge(sl.iter().map(|&e| (g.edges[e].0, g.edges[e].1, lab[e].clone()))))
        .collect();
    PrunedView { combined, slices }
}

impl DisplayEdge {
    pub fn label_text(&self) -> String {
        self.labels.join(" & ")
    }
}
