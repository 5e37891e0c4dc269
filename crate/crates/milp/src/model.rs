use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct VarId(pub usize);

impl VarId {
    pub fn index(self) -> usize {
        self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VarKind {
    /// Nonnegative real.
    Continuous,
    /// `{0, 1}`.
    Binary,
    /// Nonnegative integer.
    Integer,
}

impl VarKind {
    pub fn is_integral(self) -> bool {
        !matches!(self, VarKind::Continuous)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Variable {
    pub name: String,
    pub kind: VarKind,
    /// Upper bound; binaries always behave as if this were 1.
    pub upper: Option<Rational>,
}

impl Variable {
    pub fn effective_upper(&self) -> Option<Rational> {
        match self.kind {
            VarKind::Binary => Some(match &self.upper {
                Some(u) if *u < Rational::one() => u.floor(),
                _ => Rational::one(),
            }),
            VarKind::Integer => self.upper.as_ref().map(Rational::floor),
            VarKind::Continuous => self.upper.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = "=")]
    Eq,
    #[serde(rename = ">=")]
    Ge,
}

impl Relation {
    pub fn holds(self, lhs: &Rational, rhs: &Rational) -> bool {
        match self {
            Relation::Le => lhs <= rhs,
            Relation::Eq => lhs == rhs,
            Relation::Ge => lhs >= rhs,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Le => "<=",
            Relation::Eq => "=",
            Relation::Ge => ">=",
        }
    }
}

/// Sparse linear expression. Terms are kept sorted by variable with no zeros.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct LinExpr {
    terms: Vec<(VarId, Rational)>,
}

impl LinExpr {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_terms<I: IntoIterator<Item = (VarId, Rational)>>(terms: I) -> Self {
        let mut e = LinExpr::new();
        for (v, c) in terms {
            e.add_term(v, c);
        }
        e
    }

    pub fn add_term(&mut self, v: VarId, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.binary_search_by_key(&v, |t| t.0) {
            Ok(i) => {
                self.terms[i].1 += &c;
                if self.terms[i].1.is_zero() {
                    self.terms.remove(i);
                }
            }
            Err(i) => self.terms.insert(i, (v, c)),
        }
    }

    pub fn with(mut self, v: VarId, c: impl Into<Rational>) -> Self {
        self.add_term(v, c.into());
        self
    }

    pub fn terms(&self) -> &[(VarId, Rational)] {
        &self.terms
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn eval(&self, values: &[Rational]) -> Rational {
        self.terms.iter().map(|(v, c)| c * &values[v.0]).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Constraint {
    pub name: String,
    pub expr: LinExpr,
    pub relation: Relation,
    pub rhs: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("duplicate variable name `{0}`")]
    DuplicateName(String),
    #[error("unknown variable index {0}")]
    UnknownVariable(usize),
    #[error("negative upper bound on `{0}`")]
    NegativeUpper(String),
}

/// A violated row or bound found by [`MilpModel::check`].
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Violation {
    #[error("assignment has {got} values, model has {expected} variables")]
    Length { expected: usize, got: usize },
    #[error("variable `{name}` = {value} violates its bounds")]
    Bound { name: String, value: Rational },
    #[error("variable `{name}` = {value} is not integral")]
    Integrality { name: String, value: Rational },
    #[error("constraint `{name}`: {lhs} {rel} {rhs} is false")]
    Row { name: String, lhs: Rational, rel: &'static str, rhs: Rational },
}

/// Minimization MILP over nonnegative variables.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct MilpModel {
    variables: Vec<Variable>,
    #[serde(skip)]
    by_name: HashMap<String, VarId>,
    constraints: Vec<Constraint>,
    objective: LinExpr,
}

impl MilpModel {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_variable(
        &mut self,
        name: impl Into<String>,
        kind: VarKind,
        upper: Option<Rational>,
    ) -> Result<VarId, ModelError> {
        let name = name.into();
        if self.by_name.contains_key(&name) {
            return Err(ModelError::DuplicateName(name));
        }
        if upper.as_ref().is_some_and(Rational::is_negative) {
            return Err(ModelError::NegativeUpper(name));
        }
        let id = VarId(self.variables.len());
        self.by_name.insert(name.clone(), id);
        self.variables.push(Variable { name, kind, upper });
        Ok(id)
    }

    pub fn add_constraint(
        &mut self,
        name: impl Into<String>,
        expr: LinExpr,
        relation: Relation,
        rhs: impl Into<Rational>,
    ) -> Result<usize, ModelError> {
        self.check_expr(&expr)?;
        self.constraints.push(Constraint { name: name.into(), expr, relation, rhs: rhs.into() });
        Ok(self.constraints.len() - 1)
    }

    pub fn set_objective(&mut self, expr: LinExpr) -> Result<(), ModelError> {
        self.check_expr(&expr)?;
        self.objective = expr;
        Ok(())
    }

    fn check_expr(&self, expr: &LinExpr) -> Result<(), ModelError> {
        match expr.terms().iter().find(|(v, _)| v.0 >= self.variables.len()) {
            Some((v, _)) => Err(ModelError::UnknownVariable(v.0)),
            None => Ok(()),
        }
    }

    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    pub fn variable(&self, v: VarId) -> &Variable {
        &self.variables[v.0]
    }

    pub fn var_by_name(&self, name: &str) -> Option<VarId> {
        if self.by_name.len() != self.variables.len() {
            // Deserialized models arrive without the index.
            return self.variables.iter().position(|v| v.name == name).map(VarId);
        }
        self.by_name.get(name).copied()
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn objective(&self) -> &LinExpr {
        &self.objective
    }

    pub fn num_vars(&self) -> usize {
        self.variables.len()
    }

    pub fn count_kind(&self, kind: VarKind) -> usize {
        self.variables.iter().filter(|v| v.kind == kind).count()
    }

    /// Exact feasibility check of a full assignment: bounds, integrality and every row.
    pub fn check(&self, values: &[Rational]) -> Result<(), Violation> {
        if values.len() != self.variables.len() {
            return Err(Violation::Length { expected: self.variables.len(), got: values.len() });
        }
        for (var, x) in self.variables.iter().zip(values) {
            let above = var.effective_upper().is_some_and(|u| *x > u);
            if x.is_negative() || above {
                return Err(Violation::Bound { name: var.name.clone(), value: x.clone() });
            }
            if var.kind.is_integral() && !x.is_integer() {
                return Err(Violation::Integrality { name: var.name.clone(), value: x.clone() });
            }
        }
        for c in &self.constraints {
            let lhs = c.expr.eval(values);
            if !c.relation.holds(&lhs, &c.rhs) {
                return Err(Violation::Row {
                    name: c.name.clone(),
                    lhs,
                    rel: c.relation.symbol(),
                    rhs: c.rhs.clone(),
                });
            }
        }
        Ok(())
    }

    pub fn objective_value(&self, values: &[Rational]) -> Rational {
        self.objective.eval(values)
    }
}

impl fmt::Display for MilpModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} variables ({} binary, {} integer), {} constraints",
            self.variables.len(),
            self.count_kind(VarKind::Binary),
            self.count_kind(VarKind::Integer),
            self.constraints.len()
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn duplicate_names_rejected() {
        let mut m = MilpModel::new();
        m.add_variable("Y_2_3", VarKind::Continuous, Some(1000.into())).unwrap();
        assert_eq!(
            m.add_variable("Y_2_3", VarKind::Binary, None),
            Err(ModelError::DuplicateName("Y_2_3".into()))
        );
    }

    #[test]
    fn expr_merges_terms() {
        let e = LinExpr::new().with(VarId(1), 2).with(VarId(0), 1).with(VarId(1), -2);
        assert_eq!(e.terms(), &[(VarId(0), Rational::one())]);
    }

    #[test]
    fn unknown_variable_rejected() {
        let mut m = MilpModel::new();
        let e = LinExpr::new().with(VarId(3), 1);
        assert!(m.add_constraint("c", e, Relation::Le, 1).is_err());
    }
}
