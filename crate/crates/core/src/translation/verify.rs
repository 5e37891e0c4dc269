use serde::Serialize;
use splitnet_milp::Rational;

use super::SplitTranslation;
use crate::network::{Complex, ReactionNetwork};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConditionViolation {
    pub condition: char,
    pub reaction: String,
    pub detail: String,
}

/// Whether each of conditions (a)–(d) holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Conditions {
    pub a: bool,
    pub b: bool,
    pub c: bool,
    pub d: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub ok: bool,
    pub conditions: Conditions,
    pub violations: Vec<ConditionViolation>,
    /// Problems preventing the conditions from being evaluated at all.
    pub shape: Vec<String>,
    /// 1-based vertices sourcing no edge; their kinetic-order complex is
    /// unconstrained.
    #[serde(rename = "targetOnly")]
    pub target_only: Vec<usize>,
}

fn fmt_vec(v: &[Rational]) -> String {
    let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(", "))
}

/// Checks conditions (a)–(d) of a split translation of `original`, matching
/// species by name and reactions via the slice maps.
pub fn verify_split_translation(original: &ReactionNetwork, t: &SplitTranslation) -> VerifyReport {
    let m = original.num_species();
    let r = original.num_reactions();
    let net = &t.network;
    let mut shape = Vec::new();
    let mut violations = Vec::new();

    let map: Vec<Option<usize>> = net.species.iter().map(|s| original.species.iter().position(|o| o == s)).collect();
    for (s, idx) in net.species.iter().zip(&map) {
        if idx.is_none() {
            shape.push(format!("species `{s}` does not occur in the original network"));
        }
    }
    if t.slices.len() != t.q || t.q == 0 {
        shape.push(format!("expected {} slices, found {}", t.q, t.slices.len()));
    }
    for (l, s) in t.slices.iter().enumerate() {
        if s.len() != r {
            shape.push(format!("slice {} maps {} reactions, original has {r}", l + 1, s.len()));
        }
        for (k, &e) in s.iter().enumerate() {
            if e >= net.graph.edge_count() {
                shape.push(format!("slice {} sends reaction {} to missing edge {}", l + 1, k + 1, e + 1));
            }
        }
        let mut seen = vec![false; net.graph.edge_count()];
        for &e in s {
            if e < seen.len() {
                if seen[e] {
                    shape.push(format!("slice {} uses edge {} twice", l + 1, e + 1));
                }
                seen[e] = true;
            }
        }
    }
    // Slices must be disjoint and cover the edge set.
    let mut owner = vec![0usize; net.graph.edge_count()];
    for s in &t.slices {
        for &e in s {
            if e < owner.len() {
                owner[e] += 1;
            }
        }
    }
    for (e, &c) in owner.iter().enumerate() {
        if c != 1 {
            shape.push(format!("edge {} belongs to {c} slices", e + 1));
        }
    }
    let target_only: Vec<usize> = t.target_only().into_iter().map(|v| v + 1).collect();
    if !shape.is_empty() {
        return VerifyReport {
            ok: false,
            conditions: Conditions { a: false, b: false, c: false, d: false },
            violations,
            shape,
            target_only,
        };
    }

    let dense = |c: &Complex| -> Vec<Rational> {
        let mut v = vec![Rational::zero(); m];
        for (s, x) in c.iter() {
            if let Some(i) = map[s] {
                v[i] += x;
            }
        }
        v
    };
    let edges = &net.graph.edges;
    let label = |k: usize| original.labels[k].clone();

    // (a) uniform source.
    let mut beta = vec![0; r];
    for k in 0..r {
        let srcs: Vec<usize> = t.slices.iter().map(|s| edges[s[k]].0).collect();
        beta[k] = srcs[0];
        if srcs.iter().any(|&v| v != srcs[0]) {
            let shown: Vec<String> = srcs.iter().map(|v| (v + 1).to_string()).collect();
            violations.push(ConditionViolation {
                condition: 'a',
                reaction: label(k),
                detail: format!("sources differ across slices: {}", shown.join(", ")),
            });
        }
    }
    // (b) equal original sources ⇒ equal β.
    for k2 in 0..r {
        for k1 in 0..k2 {
            if original.graph.edges[k1].0 == original.graph.edges[k2].0 && beta[k1] != beta[k2] {
                violations.push(ConditionViolation {
                    condition: 'b',
                    reaction: label(k2),
                    detail: format!("shares its source with {} but is translated from vertex {} instead of {}", label(k1), beta[k2] + 1, beta[k1] + 1),
                });
                break;
            }
        }
    }
    // (c) ỹ′(β(k)) = y(ρ(k)).
    for k in 0..r {
        let got = dense(&net.kinetic[beta[k]]);
        let want = original.source(k).to_dense(m);
        if got != want {
            violations.push(ConditionViolation {
                condition: 'c',
                reaction: label(k),
                detail: format!("kinetic-order complex {} differs from source {}", fmt_vec(&got), fmt_vec(&want)),
            });
        }
    }
    // (d) Σ_l (ỹ(target) − ỹ(β(k))) = y(π(k)) − y(ρ(k)).
    for k in 0..r {
        let mut sum = vec![Rational::zero(); m];
        let src = dense(&net.stoich[beta[k]]);
        for s in &t.slices {
            let tv = dense(&net.stoich[edges[s[k]].1]);
            for i in 0..m {
                sum[i] += &tv[i] - &src[i];
            }
        }
        let want = original.reaction_vector0(k);
        if sum != want {
            violations.push(ConditionViolation {
                condition: 'd',
                reaction: label(k),
                detail: format!("slice sum {} differs from reaction vector {}", fmt_vec(&sum), fmt_vec(&want)),
            });
        }
    }
    let holds = |c: char| !violations.iter().any(|v| v.condition == c);
    let conditions = Conditions { a: holds('a'), b: holds('b'), c: holds('c'), d: holds('d') };
    VerifyReport { ok: violations.is_empty(), conditions, violations, shape, target_only }
}
