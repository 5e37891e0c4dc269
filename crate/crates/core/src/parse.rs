//! Line-oriented text formats.
//!
//! ```text
//! # comment
//! species: X1 X2          (optional)
//! r1: 2 X1 -> X2
//! r2: X2 -> 0
//! ```
//!
//! The generalized format declares vertices as `v1: {X1 + X2 | 2 X3}`
//! (stoichiometric | kinetic-order) and edges as `r1: v1 -> v2`.

use std::collections::{HashMap, HashSet};

use splitnet_milp::Rational;

use crate::network::{Complex, GeneralizedNetwork, MultiGraph, ReactionNetwork};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseErrorKind {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("duplicate reaction label `{0}`")]
    DuplicateLabel(String),
    #[error("invalid coefficient `{0}` (must be a positive number)")]
    BadCoefficient(String),
    #[error("isolated vertex `{0}` (every complex must take part in a reaction)")]
    IsolatedVertex(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(String),
    #[error("no reactions")]
    Empty,
}

fn err(line: usize, kind: ParseErrorKind) -> ParseError {
    ParseError { line, kind }
}

fn is_ident_start(c: char) -> bool {
    c.is_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\'' || c == '.'
}

fn valid_ident(s: &str) -> bool {
    s.starts_with(is_ident_start) && s.chars().all(is_ident_char)
}

struct SpeciesTable {
    names: Vec<String>,
    index: HashMap<String, usize>,
}

impl SpeciesTable {
    fn new() -> Self {
        SpeciesTable { names: Vec::new(), index: HashMap::new() }
    }

    fn intern(&mut self, name: &str) -> usize {
        if let Some(&i) = self.index.get(name) {
            return i;
        }
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), self.names.len() - 1);
        self.names.len() - 1
    }
}

/// Parses `0` or `term (+ term)*`, term = optional positive rational then species.
fn parse_complex(text: &str, line: usize, species: &mut SpeciesTable) -> Result<Complex, ParseError> {
    let t = text.trim();
    if t == "0" || t == "∅" {
        return Ok(Complex::empty());
    }
    if t.is_empty() {
        return Err(err(line, ParseErrorKind::Syntax("empty complex (write `0`)".into())));
    }
    let mut pairs = Vec::new();
    for term in t.split('+') {
        let term = term.trim();
        if term.is_empty() {
            return Err(err(line, ParseErrorKind::Syntax(format!("dangling `+` in `{t}`"))));
        }
        let split = term.find(is_ident_start).ok_or_else(|| {
            err(line, ParseErrorKind::Syntax(format!("term `{term}` names no species")))
        })?;
        let (coef, name) = term.split_at(split);
        let name = name.trim();
        if !valid_ident(name) {
            return Err(err(line, ParseErrorKind::Syntax(format!("invalid species name `{name}`"))));
        }
        let coef = coef.trim().trim_end_matches('*').trim();
        let value = if coef.is_empty() {
            Rational::one()
        } else {
            match coef.parse::<Rational>() {
                Ok(v) if v.is_positive() => v,
                _ => return Err(err(line, ParseErrorKind::BadCoefficient(coef.to_string()))),
            }
        };
        pairs.push((species.intern(name), value));
    }
    Ok(Complex::from_pairs(pairs))
}

struct Line<'a> {
    no: usize,
    text: &'a str,
}

fn content_lines(text: &str) -> impl Iterator<Item = Line<'_>> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let t = raw.split('#').next().unwrap_or("").trim();
        (!t.is_empty()).then_some(Line { no: i + 1, text: t })
    })
}

fn split_label(line: &Line<'_>) -> Result<(Option<String>, String), ParseError> {
    match line.text.split_once(':') {
        Some((label, rest)) => {
            let label = label.trim();
            if !valid_ident(label) && !label.chars().all(|c| c.is_alphanumeric() || c == '_') {
                return Err(err(line.no, ParseErrorKind::Syntax(format!("invalid label `{label}`"))));
            }
            Ok((Some(label.to_string()), rest.trim().to_string()))
        }
        None => Ok((None, line.text.to_string())),
    }
}

fn parse_species_decl(rest: &str, line: usize, species: &mut SpeciesTable) -> Result<(), ParseError> {
    for name in rest.split(|c: char| c.is_whitespace() || c == ',').filter(|s| !s.is_empty()) {
        if !valid_ident(name) {
            return Err(err(line, ParseErrorKind::Syntax(format!("invalid species name `{name}`"))));
        }
        species.intern(name);
    }
    Ok(())
}

/// Parses the reaction-network text format. Species are indexed by first
/// appearance (declared ones first), vertices are deduplicated by complex,
/// reactions keep file order.
pub fn parse_network(text: &str) -> Result<ReactionNetwork, ParseError> {
    let mut species = SpeciesTable::new();
    let mut complexes: Vec<Complex> = Vec::new();
    let mut vertex_of: HashMap<Complex, usize> = HashMap::new();
    let mut edges = Vec::new();
    let mut labels: Vec<String> = Vec::new();
    let mut seen: HashSet<String> = HashSet::new();
    let mut last_line = 1;

    for line in content_lines(text) {
        last_line = line.no;
        let (label, rest) = split_label(&line)?;
        if label.as_deref() == Some("species") {
            parse_species_decl(&rest, line.no, &mut species)?;
            continue;
        }
        let Some((lhs, rhs)) = rest.split_once("->") else {
            let name = label.unwrap_or(rest);
            return Err(err(line.no, ParseErrorKind::IsolatedVertex(name)));
        };
        if rhs.contains("->") {
            return Err(err(line.no, ParseErrorKind::Syntax("more than one `->`".into())));
        }
        let src = parse_complex(lhs, line.no, &mut species)?;
        let tgt = parse_complex(rhs, line.no, &mut species)?;
        let mut vertex = |c: Complex| {
            *vertex_of.entry(c.clone()).or_insert_with(|| {
                complexes.push(c);
                complexes.len() - 1
            })
        };
        let (s, t) = (vertex(src), vertex(tgt));
        let label = label.unwrap_or_else(|| format!("r{}", edges.len() + 1));
        if !seen.insert(label.clone()) {
            return Err(err(line.no, ParseErrorKind::DuplicateLabel(label)));
        }
        labels.push(label);
        edges.push((s, t));
    }
    if edges.is_empty() {
        return Err(err(if text.trim().is_empty() { 1 } else { last_line }, ParseErrorKind::Empty));
    }
    Ok(ReactionNetwork {
        species: species.names,
        graph: MultiGraph::new(complexes.len(), edges),
        complexes,
        labels,
    })
}

/// Parses the generalized format. Edge labels may repeat; repeated labels
/// share one rate constant.
pub fn parse_generalized(text: &str) -> Result<GeneralizedNetwork, ParseError> {
    let mut species = SpeciesTable::new();
    let mut vertex_names: Vec<String> = Vec::new();
    let mut stoich = Vec::new();
    let mut kinetic = Vec::new();
    let mut vertex_index: HashMap<String, usize> = HashMap::new();
    let mut pending: Vec<(usize, String, String, String)> = Vec::new();
    let mut last_line = 1;

    for line in content_lines(text) {
        last_line = line.no;
        let (label, rest) = split_label(&line)?;
        if label.as_deref() == Some("species") {
            parse_species_decl(&rest, line.no, &mut species)?;
            continue;
        }
        let Some(label) = label else {
            return Err(err(line.no, ParseErrorKind::Syntax("expected `name: ...`".into())));
        };
        if let Some(body) = rest.strip_prefix('{') {
            let body = body
                .strip_suffix('}')
                .ok_or_else(|| err(line.no, ParseErrorKind::Syntax("missing `}`".into())))?;
            let (s, k) = body
                .split_once('|')
                .ok_or_else(|| err(line.no, ParseErrorKind::Syntax("expected `{stoich | kinetic}`".into())))?;
            if vertex_index.contains_key(&label) {
                return Err(err(line.no, ParseErrorKind::DuplicateVertex(label)));
            }
            stoich.push(parse_complex(s, line.no, &mut species)?);
            kinetic.push(parse_complex(k, line.no, &mut species)?);
            vertex_index.insert(label.clone(), vertex_names.len());
            vertex_names.push(label);
        } else if let Some((s, t)) = rest.split_once("->") {
            pending.push((line.no, label, s.trim().to_string(), t.trim().to_string()));
        } else {
            return Err(err(line.no, ParseErrorKind::Syntax(format!("cannot parse `{rest}`"))));
        }
    }
    if pending.is_empty() {
        return Err(err(last_line, ParseErrorKind::Empty));
    }
    let mut edges = Vec::new();
    let mut labels = Vec::new();
    for (no, label, s, t) in pending {
        let find = |v: &str| {
            vertex_index.get(v).copied().ok_or_else(|| err(no, ParseErrorKind::UnknownVertex(v.to_string())))
        };
        edges.push((find(&s)?, find(&t)?));
        labels.push(label);
    }
    let mut used = vec![false; vertex_names.len()];
    for &(s, t) in &edges {
        used[s] = true;
        used[t] = true;
    }
    if let Some(j) = used.iter().position(|u| !u) {
        return Err(err(last_line, ParseErrorKind::IsolatedVertex(vertex_names[j].clone())));
    }
    Ok(GeneralizedNetwork {
        species: species.names,
        graph: MultiGraph::new(vertex_names.len(), edges),
        vertex_names,
        stoich,
        kinetic,
        labels,
    })
}

pub fn network_to_text(net: &ReactionNetwork) -> String {
    let mut s = format!("species: {}\n", net.species.join(" "));
    for (k, &(a, b)) in net.graph.edges.iter().enumerate() {
        s.push_str(&format!(
            "{}: {} -> {}\n",
            net.labels[k],
            net.complexes[a].display(&net.species),
            net.complexes[b].display(&net.species)
        ));
    }
    s
}

/// Vertex names that are not identifiers (e.g. complexes) are written as `v<j>`.
pub fn generalized_to_text(net: &GeneralizedNetwork) -> String {
    let names: Vec<String> = net
        .vertex_names
        .iter()
        .enumerate()
        .map(|(j, n)| if valid_ident(n) { n.clone() } else { format!("v{}", j + 1) })
        .collect();
    let mut s = format!("species: {}\n", net.species.join(" "));
    for (j, name) in names.iter().enumerate() {
        s.push_str(&format!(
            "{name}: {{{} | {}}}\n",
            net.stoich[j].display(&net.species),
            net.kinetic[j].display(&net.species)
        ));
    }
    for (k, &(a, b)) in net.graph.edges.iter().enumerate() {
        s.push_str(&format!("{}: {} -> {}\n", net.labels[k], names[a], names[b]));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_reaction() {
        let n = parse_network("r1: 2 X1 -> X2").unwrap();
        assert_eq!(n.species, vec!["X1", "X2"]);
        assert_eq!(n.num_vertices(), 2);
        assert_eq!(n.num_reactions(), 1);
    }

    #[test]
    fn undeclared_species_appended() {
        let n = parse_network("species: X1\nr1: X1 -> X1 + Y").unwrap();
        assert_eq!(n.species, vec!["X1", "Y"]);
        let again = parse_network(&network_to_text(&n)).unwrap();
        assert_eq!(again, n);
    }

    #[test]
    fn errors_carry_lines() {
        assert_eq!(parse_network("").unwrap_err().line, 1);
        assert_eq!(parse_network("\n\nr1: X -> Y\nr1: Y -> X").unwrap_err().kind, ParseErrorKind::DuplicateLabel("r1".into()));
        assert!(matches!(parse_network("r1: -2 X -> Y").unwrap_err().kind, ParseErrorKind::BadCoefficient(_)));
        assert!(matches!(parse_network("r1: 0 X -> Y").unwrap_err().kind, ParseErrorKind::BadCoefficient(_)));
        assert!(matches!(parse_network("r1: X -> Y\nX + Z").unwrap_err().kind, ParseErrorKind::IsolatedVertex(_)));
        assert!(matches!(parse_network("r1: X -> ").unwrap_err().kind, ParseErrorKind::Syntax(_)));
    }

    #[test]
    fn rational_and_empty_complexes() {
        let n = parse_network("a: 1/2 X -> 0\nb: 0 -> 3/2 X").unwrap();
        assert_eq!(n.num_vertices(), 3);
        assert_eq!(n.complexes[0].get(0), Rational::new(1, 2));
        assert!(n.complexes[1].is_empty());
    }

    #[test]
    fn generalized_edges_need_known_vertices() {
        let e = parse_generalized("v1: {X | X}\nr1: v1 -> v2").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::UnknownVertex("v2".into()));
        let e = parse_generalized("v1: {X | X}").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::Empty);
    }
}
