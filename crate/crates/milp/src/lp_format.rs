//! CPLEX-style LP text export and `name value` solution import.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::io;
use std::path::Path;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;

use crate::model::{LinExpr, MilpModel, Relation, VarKind};
use crate::Rational;

const TERMS_PER_LINE: usize = 8;

#[derive(Debug, thiserror::Error)]
pub enum LpFormatError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("unknown variable `{0}` in solution")]
    UnknownVariable(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Maps every variable to an LP-safe identifier, deterministically and injectively.
pub fn sanitized_names(model: &MilpModel) -> Vec<String> {
    let mut used: HashMap<String, usize> = HashMap::new();
    let mut out = Vec::with_capacity(model.num_vars());
    for (i, v) in model.variables().iter().enumerate() {
        let mut s: String = v
            .name
            .chars()
            .map(|c| if c.is_ascii_alphanumeric() || c == '_' { c } else { '_' })
            .collect();
        if s.is_empty() || s.starts_with(|c: char| c.is_ascii_digit()) {
            s.insert(0, 'v');
        }
        if used.contains_key(&s) {
            s = format!("{s}__{i}");
        }
        used.insert(s.clone(), i);
        out.push(s);
    }
    out
}

fn lcm_denominators<'a>(values: impl Iterator<Item = &'a Rational>) -> BigInt {
    values.fold(BigInt::one(), |acc, v| if v.is_decimal() { acc } else { acc.lcm(&v.denom()) })
}

fn number(v: &Rational) -> String {
    v.to_decimal_string().expect("scaled value is decimal")
}

fn write_expr(out: &mut String, expr: &LinExpr, scale: &Rational, names: &[String]) {
    if expr.is_empty() {
        let first = names.first().map(String::as_str).unwrap_or("x");
        out.push_str(&format!(" 0 {first}"));
        return;
    }
    for (i, (v, c)) in expr.terms().iter().enumerate() {
        if i > 0 && i % TERMS_PER_LINE == 0 {
            out.push_str("\n   ");
        }
        let c = c * scale;
        let sign = if c.is_negative() { '-' } else { '+' };
        if i == 0 && sign == '+' {
            out.push_str(&format!(" {} {}", number(&c.abs()), names[v.0]));
        } else {
            out.push_str(&format!(" {sign} {} {}", number(&c.abs()), names[v.0]));
        }
    }
}

/// Renders the model. Rows containing non-terminating decimals are multiplied
/// through by the lcm of those denominators so every literal is exact; such
/// upper bounds become rows, and the objective is scaled likewise (the
/// minimizer is unchanged).
pub fn export_lp_string(model: &MilpModel) -> String {
    let names = sanitized_names(model);
    let mut out = String::new();
    out.push_str("\\ exact rational model export\nMinimize\n obj:");
    let obj = model.objective();
    let scale = Rational::from(lcm_denominators(obj.terms().iter().map(|t| &t.1)));
    if !scale.is_one() {
        let _ = write!(out, "\n\\ objective scaled by {scale}\n     ");
    }
    write_expr(&mut out, obj, &scale, &names);
    out.push_str("\nSubject To\n");

    let mut row = 0usize;
    let mut emit = |out: &mut String, expr: &LinExpr, rel: Relation, rhs: &Rational| {
        row += 1;
        let dens = expr.terms().iter().map(|t| &t.1).chain(std::iter::once(rhs));
        let scale = Rational::from(lcm_denominators(dens));
        let _ = write!(out, " c{row}:");
        write_expr(out, expr, &scale, &names);
        let _ = writeln!(out, " {} {}", rel.symbol(), number(&(rhs * &scale)));
    };
    for c in model.constraints() {
        emit(&mut out, &c.expr, c.relation, &c.rhs);
    }
    let mut bounds = Vec::new();
    for (j, v) in model.variables().iter().enumerate() {
        if v.kind == VarKind::Binary {
            continue;
        }
        match v.effective_upper() {
            Some(u) if u.is_decimal() => bounds.push(format!(" 0 <= {} <= {}", names[j], number(&u))),
            Some(u) => {
                let e = LinExpr::new().with(crate::VarId(j), 1);
                emit(&mut out, &e, Relation::Le, &u);
            }
            None => {}
        }
    }
    out.push_str("Bounds\n");
    for b in bounds {
        out.push_str(&b);
        out.push('\n');
    }
    let section = |out: &mut String, title: &str, kind: VarKind| {
        let vars: Vec<&str> = model
            .variables()
            .iter()
            .zip(&names)
            .filter(|(v, _)| v.kind == kind)
            .map(|(_, n)| n.as_str())
            .collect();
        if vars.is_empty() && kind != VarKind::Binary {
            return;
        }
        out.push_str(title);
        out.push('\n');
        for chunk in vars.chunks(TERMS_PER_LINE) {
            let _ = writeln!(out, " {}", chunk.join(" "));
        }
    };
    section(&mut out, "Binary", VarKind::Binary);
    section(&mut out, "General", VarKind::Integer);
    out.push_str("End\n");
    out
}

pub fn export_lp(model: &MilpModel, path: &Path) -> Result<(), LpFormatError> {
    std::fs::write(path, export_lp_string(model))?;
    Ok(())
}

/// A parsed solution file. `None` values mean the variable was not listed.
#[derive(Debug, Clone, PartialEq)]
pub struct ImportedSolution {
    pub values: Vec<Option<Rational>>,
    pub objective: Option<Rational>,
    pub infeasible: bool,
}

/// Parses `name value` lines plus an optional `=obj= value` line. A line
/// `=infeas=` marks the model as reported infeasible. Names may be either the
/// sanitized export names or the model's own names.
pub fn import_solution(model: &MilpModel, text: &str) -> Result<ImportedSolution, LpFormatError> {
    let names = sanitized_names(model);
    let mut index: HashMap<&str, usize> = HashMap::new();
    for (j, n) in names.iter().enumerate() {
        index.insert(n.as_str(), j);
    }
    for (j, v) in model.variables().iter().enumerate() {
        index.entry(v.name.as_str()).or_insert(j);
    }
    let mut sol = ImportedSolution {
        values: vec![None; model.num_vars()],
        objective: None,
        infeasible: false,
    };
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if line == "=infeas=" {
            sol.infeasible = true;
            continue;
        }
        let mut parts = line.split_whitespace();
        let (Some(name), Some(value), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(LpFormatError::Syntax { line: i + 1, msg: format!("expected `name value`, got `{line}`") });
        };
        let value: Rational = value
            .parse()
            .map_err(|e| LpFormatError::Syntax { line: i + 1, msg: format!("{e}") })?;
        if name == "=obj=" {
            sol.objective = Some(value);
            continue;
        }
        let j = *index.get(name).ok_or_else(|| LpFormatError::UnknownVariable(name.to_string()))?;
        sol.values[j] = Some(value);
    }
    Ok(sol)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_variable_model_has_five_sections() {
        let mut m = MilpModel::new();
        let x = m.add_variable("x", VarKind::Binary, None).unwrap();
        m.set_objective(LinExpr::new().with(x, 1)).unwrap();
        let s = export_lp_string(&m);
        for sec in ["Minimize", "Subject To", "Bounds", "Binary", "End"] {
            assert!(s.lines().any(|l| l == sec), "missing {sec} in\n{s}");
        }
    }

    #[test]
    fn names_are_sanitized_deterministically() {
        let mut m = MilpModel::new();
        m.add_variable("a b", VarKind::Continuous, None).unwrap();
        m.add_variable("a_b", VarKind::Continuous, None).unwrap();
        m.add_variable("1x", VarKind::Continuous, None).unwrap();
        assert_eq!(sanitized_names(&m), vec!["a_b", "a_b__1", "v1x"]);
    }

    #[test]
    fn thirds_are_scaled() {
        let mut m = MilpModel::new();
        let x = m.add_variable("x", VarKind::Continuous, Some(Rational::new(1, 3))).unwrap();
        m.add_constraint("c", LinExpr::new().with(x, Rational::new(1, 3)), Relation::Ge, Rational::new(1, 6))
            .unwrap();
        let s = export_lp_string(&m);
        assert!(s.contains(" c1: 2 x >= 1"), "{s}");
        assert!(s.contains(" c2: 3 x <= 1"), "{s}");
    }

    #[test]
    fn import_round_trip() {
        let mut m = MilpModel::new();
        m.add_variable("a b", VarKind::Continuous, None).unwrap();
        m.add_variable("y", VarKind::Binary, None).unwrap();
        let sol = import_solution(&m, "=obj= 2.5\na_b 1/2\ny 1\n").unwrap();
        assert_eq!(sol.values, vec![Some(Rational::new(1, 2)), Some(Rational::one())]);
        assert_eq!(sol.objective, Some(Rational::new(5, 2)));
        assert!(import_solution(&m, "zz 1").is_err());
    }
}
