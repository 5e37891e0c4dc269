//! Symbolic mass-action and generalized mass-action right-hand sides,
//! dynamical equivalence and steady-state parametrization checks.

mod expr;
mod poly;

use std::collections::HashMap;

use serde::Serialize;
use splitnet_milp::Rational;

pub use expr::{parse_expression, ExprError};
pub use poly::{Monomial, RationalFunction, SparsePolynomial, ZeroDenominator};

use crate::network::{Complex, GeneralizedNetwork, ReactionNetwork};

/// Symbol order: concentrations `x1..xm`, rate constants `k1..kr` (one per
/// reaction label), then free parameters `t1..tp`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolTable {
    pub species: Vec<String>,
    pub rates: Vec<String>,
    pub params: usize,
}

impl SymbolTable {
    pub fn new(species: Vec<String>, rates: Vec<String>, params: usize) -> Self {
        SymbolTable { species, rates, params }
    }

    pub fn for_network(net: &ReactionNetwork) -> Self {
        Self::new(net.species.clone(), net.labels.clone(), 0)
    }

    /// Distinct edge labels in first-appearance order.
    pub fn for_generalized(net: &GeneralizedNetwork) -> Self {
        let mut rates: Vec<String> = Vec::new();
        for l in &net.labels {
            if !rates.contains(l) {
                rates.push(l.clone());
            }
        }
        Self::new(net.species.clone(), rates, 0)
    }

    pub fn len(&self) -> usize {
        self.species.len() + self.rates.len() + self.params
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn x(&self, i: usize) -> usize {
        i
    }

    pub fn k(&self, j: usize) -> usize {
        self.species.len() + j
    }

    pub fn t(&self, j: usize) -> usize {
        self.species.len() + self.rates.len() + j
    }

    /// Display names: species names, `k1..`, `t1..`.
    pub fn names(&self) -> Vec<String> {
        let mut v = self.species.clone();
        v.extend((1..=self.rates.len()).map(|j| format!("k{j}")));
        v.extend((1..=self.params).map(|j| format!("t{j}")));
        v
    }

    fn is_rate(&self, v: usize) -> bool {
        v >= self.species.len() && v < self.species.len() + self.rates.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DynamicsError {
    #[error("species `{0}` is not in the symbol table")]
    UnknownSpecies(String),
    #[error("reaction label `{0}` is not in the symbol table")]
    UnknownRate(String),
    #[error("symbol tables differ")]
    SymbolMismatch,
    #[error("kinetic-order coefficient {0} is not a nonnegative integer")]
    NonIntegerExponent(Rational),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("denominator of coordinate {0} is identically zero")]
    ZeroDenominator(usize),
    #[error("line {line}: {msg}")]
    Param { line: usize, msg: String },
}

/// `dx/dt = rhs(x, κ)`; every monomial is linear in the rate constants.
#[derive(Debug, Clone, PartialEq)]
pub struct OdeSystem {
    pub table: SymbolTable,
    pub rhs: Vec<SparsePolynomial>,
}

impl OdeSystem {
    pub fn is_kappa_linear(&self) -> bool {
        self.rhs.iter().all(|p| {
            p.terms().all(|(m, _)| {
                m.0.iter().enumerate().filter(|(v, _)| self.table.is_rate(*v)).map(|(_, e)| e).sum::<u32>() == 1
            })
        })
    }

    pub fn display(&self) -> Vec<String> {
        let names = self.table.names();
        self.rhs.iter().map(|p| p.display(&names)).collect()
    }
}

fn exponent_vector(c: &Complex, species_map: &[usize], nvars: usize) -> Result<Vec<u32>, DynamicsError> {
    let mut e = vec![0u32; nvars];
    for (s, v) in c.iter() {
        let n = v.to_i64().filter(|n| *n >= 0 && *n <= u32::MAX as i64);
        let n = n.ok_or_else(|| DynamicsError::NonIntegerExponent(v.clone()))?;
        e[species_map[s]] += n as u32;
    }
    Ok(e)
}

fn build_rhs(
    table: &SymbolTable,
    species_map: &[usize],
    edges: impl Iterator<Item = (usize, Vec<Rational>, Complex)>,
) -> Result<OdeSystem, DynamicsError> {
    let nvars = table.len();
    let m = table.species.len();
    let mut rhs = vec![SparsePolynomial::zero(nvars); m];
    for (rate, change, kinetic) in edges {
        let mut exps = exponent_vector(&kinetic, species_map, nvars)?;
        exps[table.k(rate)] += 1;
        let mono = Monomial(exps);
        for (s, c) in change.iter().enumerate() {
            if !c.is_zero() {
                rhs[species_map[s]].add_term(mono.clone(), c.clone());
            }
        }
    }
    let sys = OdeSystem { table: table.clone(), rhs };
    debug_assert!(sys.is_kappa_linear());
    Ok(sys)
}

/// `Σ_k κ_k (y(π(k)) − y(ρ(k))) x^{y(ρ(k))}`.
pub fn mas_rhs(net: &ReactionNetwork) -> OdeSystem {
    let table = SymbolTable::for_network(net);
    let ident: Vec<usize> = (0..net.num_species()).collect();
    let edges = (0..net.num_reactions()).map(|k| (k, net.reaction_vector0(k), net.source(k).clone()));
    build_rhs(&table, &ident, edges).expect("mass-action complexes have integer exponents")
}

/// Generalized mass-action RHS with rate symbols looked up by edge label in
/// `table`; edges sharing a label share a rate constant.
pub fn gmas_rhs_in(net: &GeneralizedNetwork, table: &SymbolTable) -> Result<OdeSystem, DynamicsError> {
    let species_map: Vec<usize> = net
        .species
        .iter()
        .map(|s| table.species.iter().position(|t| t == s).ok_or_else(|| DynamicsError::UnknownSpecies(s.clone())))
        .collect::<Result<_, _>>()?;
    let rate_index: HashMap<&str, usize> = table.rates.iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect();
    let m = net.num_species();
    let mut edges = Vec::new();
    for (e, &(s, t)) in net.graph.edges.iter().enumerate() {
        let label = &net.labels[e];
        let rate = *rate_index.get(label.as_str()).ok_or_else(|| DynamicsError::UnknownRate(label.clone()))?;
        if s == t {
            continue;
        }
        let change = crate::network::difference(&net.stoich[t], &net.stoich[s], m);
        edges.push((rate, change, net.kinetic[s].clone()));
    }
    build_rhs(table, &species_map, edges.into_iter())
}

/// Generalized mass-action RHS with one rate constant per distinct label.
pub fn gmas_rhs(net: &GeneralizedNetwork) -> Result<OdeSystem, DynamicsError> {
    gmas_rhs_in(net, &SymbolTable::for_generalized(net))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoordinateDiff {
    /// 1-based species index.
    pub coordinate: usize,
    pub species: String,
    pub difference: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquivalenceReport {
    pub equivalent: bool,
    pub differences: Vec<CoordinateDiff>,
}

/// True iff the two right-hand sides are identical polynomials.
pub fn dynamically_equivalent(a: &OdeSystem, b: &OdeSystem) -> Result<EquivalenceReport, DynamicsError> {
    if a.table != b.table {
        return Err(DynamicsError::SymbolMismatch);
    }
    let names = a.table.names();
    let differences: Vec<CoordinateDiff> = a
        .rhs
        .iter()
        .zip(&b.rhs)
        .enumerate()
        .filter_map(|(i, (p, q))| {
            let d = p - q;
            (!d.is_zero()).then(|| CoordinateDiff {
                coordinate: i + 1,
                species: a.table.species[i].clone(),
                difference: d.display(&names),
            })
        })
        .collect();
    Ok(EquivalenceReport { equivalent: differences.is_empty(), differences })
}

/// Symbolic difference `a − b` per coordinate.
pub fn rhs_difference(a: &OdeSystem, b: &OdeSystem) -> Result<Vec<SparsePolynomial>, DynamicsError> {
    if a.table != b.table {
        return Err(DynamicsError::SymbolMismatch);
    }
    Ok(a.rhs.iter().zip(&b.rhs).map(|(p, q)| p - q).collect())
}

/// Checks a translation's dynamics against the original mass-action system.
pub fn translation_equivalent(
    original: &ReactionNetwork,
    translated: &GeneralizedNetwork,
) -> Result<EquivalenceReport, DynamicsError> {
    let mas = mas_rhs(original);
    let gmas = gmas_rhs_in(translated, &mas.table)?;
    dynamically_equivalent(&mas, &gmas)
}

/// Exact evaluation at concentrations `x` and rate constants `kappa`
/// (parameters, if any, are set to zero).
pub fn eval_rhs(sys: &OdeSystem, x: &[Rational], kappa: &[Rational]) -> Result<Vec<Rational>, DynamicsError> {
    let (m, r) = (sys.table.species.len(), sys.table.rates.len());
    if x.len() != m {
        return Err(DynamicsError::Dimension { expected: m, got: x.len() });
    }
    if kappa.len() != r {
        return Err(DynamicsError::Dimension { expected: r, got: kappa.len() });
    }
    let mut point: Vec<Rational> = x.iter().chain(kappa).cloned().collect();
    point.resize(sys.table.len(), Rational::zero());
    Ok(sys.rhs.iter().map(|p| p.eval(&point)).collect())
}

/// A claimed parametrization `x_i = param_i(κ, τ)` over `table`.
#[derive(Debug, Clone, PartialEq)]
pub struct Parametrization {
    pub table: SymbolTable,
    pub coords: Vec<RationalFunction>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParamReport {
    pub ok: bool,
    pub residuals: Vec<CoordinateDiff>,
}

/// Substitutes the parametrization into the mass-action RHS, clears
/// denominators and tests each numerator for being identically zero.
pub fn check_parametrization(net: &ReactionNetwork, param: &Parametrization) -> Result<ParamReport, DynamicsError> {
    let table = &param.table;
    let m = net.num_species();
    if table.species != net.species || table.rates != net.labels {
        return Err(DynamicsError::SymbolMismatch);
    }
    if param.coords.len() != m {
        return Err(DynamicsError::Dimension { expected: m, got: param.coords.len() });
    }
    if let Some(i) = param.coords.iter().position(|f| f.denominator.is_zero()) {
        return Err(DynamicsError::ZeroDenominator(i + 1));
    }
    let nvars = table.len();
    let ident: Vec<usize> = (0..m).collect();
    let sources: Vec<Vec<u32>> = (0..net.num_reactions())
        .map(|k| exponent_vector(net.source(k), &ident, m))
        .collect::<Result<_, _>>()?;
    // L = Π D_i^{e_i} with e_i the largest exponent of x_i over all sources.
    let e_max: Vec<u32> = (0..m).map(|i| sources.iter().map(|e| e[i]).max().unwrap_or(0)).collect();
    let mut num_pow: Vec<Vec<SparsePolynomial>> = Vec::with_capacity(m);
    let mut den_pow: Vec<Vec<SparsePolynomial>> = Vec::with_capacity(m);
    for (i, f) in param.coords.iter().enumerate() {
        let mut np = vec![SparsePolynomial::one(nvars)];
        let mut dp = vec![SparsePolynomial::one(nvars)];
        for p in 1..=e_max[i] as usize {
            np.push(&np[p - 1] * &f.numerator);
            dp.push(&dp[p - 1] * &f.denominator);
        }
        num_pow.push(np);
        den_pow.push(dp);
    }
    let mut residual = vec![SparsePolynomial::zero(nvars); m];
    for k in 0..net.num_reactions() {
        let change = net.reaction_vector0(k);
        if change.iter().all(Rational::is_zero) {
            continue;
        }
        let mut term = SparsePolynomial::var(nvars, table.k(k));
        for i in 0..m {
            let y = sources[k][i] as usize;
            term = &term * &num_pow[i][y];
            term = &term * &den_pow[i][e_max[i] as usize - y];
        }
        for (i, c) in change.iter().enumerate() {
            if !c.is_zero() {
                residual[i] = &residual[i] + &term.scale(c);
            }
        }
    }
    let names = table.names();
    let residuals: Vec<CoordinateDiff> = residual
        .iter()
        .enumerate()
        .filter(|(_, p)| !p.is_zero())
        .map(|(i, p)| CoordinateDiff { coordinate: i + 1, species: net.species[i].clone(), difference: p.display(&names) })
        .collect();
    Ok(ParamReport { ok: residuals.is_empty(), residuals })
}

/// Parses `x1 = expr` lines (or `<species name> = expr`); symbols `k#` are
/// rate constants by reaction index and `t#` free parameters. A left-hand
/// side matching a species name (ignoring case) refers to that species;
/// otherwise `x<i>` is the i-th species.
pub fn parse_parametrization(text: &str, net: &ReactionNetwork) -> Result<Parametrization, DynamicsError> {
    let m = net.num_species();
    let r = net.num_reactions();
    let lines: Vec<(usize, &str, &str)> = text
        .lines()
        .enumerate()
        .filter_map(|(i, raw)| {
            let t = raw.split('#').next().unwrap_or("").trim();
            (!t.is_empty()).then_some((i + 1, t))
        })
        .map(|(no, t)| match t.split_once('=') {
            Some((l, rh)) => Ok((no, l.trim(), rh.trim())),
            None => Err(DynamicsError::Param { line: no, msg: "expected `x<i> = expression`".into() }),
        })
        .collect::<Result<_, _>>()?;

    let indexed = |s: &str, prefix: char| -> Option<usize> {
        let rest = s.strip_prefix(prefix)?;
        rest.parse::<usize>().ok().filter(|&i| i >= 1)
    };
    let mut params = 0;
    for (_, _, rhs) in &lines {
        for word in rhs.split(|c: char| !c.is_alphanumeric() && c != '_') {
            if let Some(j) = indexed(word, 't') {
                params = params.max(j);
            }
        }
    }
    let table = SymbolTable::new(net.species.clone(), net.labels.clone(), params);
    let resolve = |s: &str| -> Option<usize> {
        if let Some(j) = indexed(s, 'k').filter(|&j| j <= r) {
            return Some(table.k(j - 1));
        }
        if let Some(j) = indexed(s, 't') {
            return Some(table.t(j - 1));
        }
        None
    };
    let mut coords: Vec<Option<RationalFunction>> = vec![None; m];
    for (no, lhs, rhs) in lines {
        // A species name wins over the positional reading, so `x5` means `X5`
        // even when species are not declared in numeric order.
        let i = net
            .species
            .iter()
            .position(|s| s == lhs)
            .or_else(|| net.species.iter().position(|s| s.eq_ignore_ascii_case(lhs)))
            .or_else(|| indexed(lhs, 'x').filter(|&i| i <= m).map(|i| i - 1))
            .ok_or_else(|| DynamicsError::Param { line: no, msg: format!("unknown species `{lhs}`") })?;
        if coords[i].is_some() {
            return Err(DynamicsError::Param { line: no, msg: format!("species `{lhs}` assigned twice") });
        }
        let f = parse_expression(rhs, table.len(), &resolve)
            .map_err(|e| DynamicsError::Param { line: no, msg: e.to_string() })?;
        coords[i] = Some(f);
    }
    let coords = coords
        .into_iter()
        .enumerate()
        .map(|(i, c)| c.ok_or_else(|| DynamicsError::Param { line: 0, msg: format!("no value for x{}", i + 1) }))
        .collect::<Result<_, _>>()?;
    Ok(Parametrization { table, coords })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_network;

    #[test]
    fn self_loop_network_has_zero_rhs() {
        let net = parse_network("r1: X -> X").unwrap();
        assert!(mas_rhs(&net).rhs.iter().all(SparsePolynomial::is_zero));
    }

    #[test]
    fn detailed_balance_of_two_cycle() {
        let net = parse_network("r1: X1 -> X2\nr2: X2 -> X1").unwrap();
        let p = parse_parametrization("x1 = t1\nx2 = k1/k2*t1", &net).unwrap();
        assert!(check_parametrization(&net, &p).unwrap().ok);
        let bad = parse_parametrization("x1 = t1\nx2 = k2/k1*t1", &net).unwrap();
        let rep = check_parametrization(&net, &bad).unwrap();
        assert!(!rep.ok);
        assert_eq!(rep.residuals.len(), 2);
    }

    #[test]
    fn param_errors() {
        let net = parse_network("r1: X1 -> X2\nr2: X2 -> X1").unwrap();
        assert!(parse_parametrization("x1 = t1", &net).is_err());
        assert!(parse_parametrization("x1 = t1\nx2 = k9", &net).is_err());
        assert!(parse_parametrization("x1 = t1\nx1 = t1\nx2 = t1", &net).is_err());
        let p = parse_parametrization("x1 = t1\nx2 = t1/(k1-k1)", &net);
        assert!(p.is_err());
    }
}
