//! Escape hatch to an external LP-format solver. Its answer is never trusted
//! as-is: integral values are rounded, the continuous part is re-solved
//! exactly with those integers fixed, and every row is re-checked.

use std::path::Path;
use std::process::Command;
use std::sync::atomic::{AtomicU64, Ordering};

use crate::bnb::{relaxation, MilpSolution, SolveError, SolveStatus};
use crate::lp_format::{export_lp, import_solution};
use crate::simplex::{solve_lp, LpStatus};
use crate::Rational;

static RUN: AtomicU64 = AtomicU64::new(0);

pub(crate) fn solve_external(model: &crate::MilpModel, exe: &Path) -> Result<MilpSolution, SolveError> {
    let err = |m: String| SolveError::External(m);
    let dir = std::env::temp_dir().join(format!(
        "splitnet-lp-{}-{}",
        std::process::id(),
        RUN.fetch_add(1, Ordering::Relaxed)
    ));
    std::fs::create_dir_all(&dir).map_err(|e| err(e.to_string()))?;
    let lp_path = dir.join("model.lp");
    let sol_path = dir.join("solution.txt");
    let result = (|| {
        export_lp(model, &lp_path).map_err(|e| err(e.to_string()))?;
        log::info!("running external solver {}", exe.display());
        let status = Command::new(exe)
            .arg(&lp_path)
            .arg(&sol_path)
            .status()
            .map_err(|e| err(format!("cannot run {}: {e}", exe.display())))?;
        if !status.success() {
            return Err(err(format!("{} exited with {status}", exe.display())));
        }
        let text = std::fs::read_to_string(&sol_path).map_err(|e| err(e.to_string()))?;
        let imported = import_solution(model, &text).map_err(|e| err(e.to_string()))?;
        if imported.infeasible {
            return Ok(MilpSolution {
                status: SolveStatus::Infeasible,
                values: Vec::new(),
                objective: None,
                node_count: 0,
            });
        }
        polish(model, imported.values.into_iter().map(Option::unwrap_or_default).collect())
    })();
    let _ = std::fs::remove_dir_all(&dir);
    result
}

fn polish(model: &crate::MilpModel, values: Vec<Rational>) -> Result<MilpSolution, SolveError> {
    let mut lp = relaxation(model);
    let half = Rational::new(1, 2);
    for (j, var) in model.variables().iter().enumerate() {
        if var.kind.is_integral() {
            let v = (&values[j] + &half).floor();
            lp.lower[j] = v.clone();
            lp.upper[j] = Some(v);
        }
    }
    let sol = solve_lp(&lp);
    match sol.status {
        LpStatus::Optimal => {
            model.check(&sol.values)?;
            Ok(MilpSolution {
                status: SolveStatus::Optimal,
                objective: Some(model.objective_value(&sol.values)),
                values: sol.values,
                node_count: 0,
            })
        }
        LpStatus::Unbounded => Err(SolveError::Unbounded),
        LpStatus::Infeasible => {
            Err(SolveError::External("reported solution fails exact verification".into()))
        }
    }
}
