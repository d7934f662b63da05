//! Bridge to an external reference solver (HiGHS through its Python
//! bindings). The model travels as an MPS file only.

use std::path::Path;
use std::process::Command;

const SCRIPT: &str = r#"
import sys
import highspy
h = highspy.Highs()
h.setOptionValue("output_flag", False)
h.setOptionValue("presolve", "on")
status = h.readModel(sys.argv[1])
if status == highspy.HighsStatus.kError:
    print("read-error")
    sys.exit(0)
h.run()
print(h.modelStatusToString(h.getModelStatus()))
print(repr(h.getInfo().objective_function_value))
"#;

#[derive(Clone, Debug, PartialEq)]
pub struct ExternalResult {
    /// Solver's own status text, e.g. `Optimal` or `Infeasible`.
    pub status: String,
    pub objective: f64,
}

/// Why the reference solver could not be consulted.
#[derive(Clone, Debug, PartialEq)]
pub struct Unavailable(pub String);

/// Checks that `python3` with `highspy` can be launched.
pub fn reference_solver_available() -> Result<(), Unavailable> {
    let out = Command::new("python3")
        .args(["-c", "import highspy"])
        .output()
        .map_err(|e| Unavailable(format!("python3 not runnable: {e}")))?;
    if out.status.success() {
        Ok(())
    } else {
        Err(Unavailable(format!(
            "highspy not importable: {}",
            String::from_utf8_lossy(&out.stderr).trim()
        )))
    }
}

/// Solves the MPS file at `path` with the reference solver.
pub fn solve_mps(path: &Path) -> Result<ExternalResult, Unavailable> {
    let out = Command::new("python3")
        .arg("-c")
        .arg(SCRIPT)
        .arg(path)
        .output()
        .map_err(|e| Unavailable(format!("python3 not runnable: {e}")))?;
    if !out.status.success() {
        return Err(Unavailable(
            String::from_utf8_lossy(&out.stderr).trim().to_string(),
        ));
    }
    let text = String::from_utf8_lossy(&out.stdout);
    let mut lines = text.lines();
    let status = lines.next().unwrap_or("").trim().to_string();
    if status == "read-error" {
        return Err(Unavailable(format!("reference solver could not read {}", path.display())));
    }
    let objective = lines
        .next()
        .and_then(|l| l.trim().parse::<f64>().ok())
        .unwrap_or(f64::NAN);
    Ok(ExternalResult { status, objective })
}
