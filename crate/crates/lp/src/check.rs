//! Solution audits that only use the program data, never solver state.

use crate::program::{LinearProgram, RowSense};

#[derive(Clone, Debug, PartialEq)]
pub struct RowViolation {
    pub row: usize,
    pub name: String,
    pub activity: f64,
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundViolation {
    pub col: usize,
    pub name: String,
    pub value: f64,
    pub violation: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ResidualReport {
    /// Signed-free residual per row: how far the activity lies outside the
    /// feasible side of the row (0 when satisfied).
    pub row_residuals: Vec<f64>,
    pub max_row_residual: f64,
    pub max_bound_violation: f64,
    /// Rows whose residual exceeds the tolerance.
    pub violated_rows: Vec<RowViolation>,
    pub violated_bounds: Vec<BoundViolation>,
    pub objective: f64,
}

impl ResidualReport {
    pub fn is_clean(&self) -> bool {
        self.violated_rows.is_empty() && self.violated_bounds.is_empty()
    }
}

fn row_residual(sense: RowSense, activity: f64, rhs: f64) -> f64 {
    match sense {
        RowSense::Le => (activity - rhs).max(0.0),
        RowSense::Ge => (rhs - activity).max(0.0),
        RowSense::Eq => (activity - rhs).abs(),
    }
}

/// Per-row residuals, bound violations and the recomputed objective of `x`.
///
/// # Panics
/// If `x` does not have one entry per column.
pub fn check_solution(lp: &LinearProgram, x: &[f64], tol: f64) -> ResidualReport {
    assert_eq!(x.len(), lp.num_cols(), "solution dimension mismatch");
    let act = lp.row_activity(x);
    let mut row_residuals = Vec::with_capacity(lp.num_rows());
    let mut violated_rows = Vec::new();
    let mut max_row_residual = 0.0f64;
    for i in 0..lp.num_rows() {
        let r = row_residual(lp.row_sense()[i], act[i], lp.rhs()[i]);
        max_row_residual = max_row_residual.max(r);
        if r > tol {
            violated_rows.push(RowViolation {
                row: i,
                name: lp.row_names()[i].clone(),
                activity: act[i],
                residual: r,
            });
        }
        row_residuals.push(r);
    }
    let mut violated_bounds = Vec::new();
    let mut max_bound_violation = 0.0f64;
    for j in 0..lp.num_cols() {
        let v = (lp.col_lower()[j] - x[j]).max(x[j] - lp.col_upper()[j]).max(0.0);
        max_bound_violation = max_bound_violation.max(v);
        if v > tol {
            violated_bounds.push(BoundViolation {
                col: j,
                name: lp.col_names()[j].clone(),
                value: x[j],
                violation: v,
            });
        }
    }
    ResidualReport {
        row_residuals,
        max_row_residual,
        max_bound_violation,
        violated_rows,
        violated_bounds,
        objective: lp.objective_value(x),
    }
}

/// `d = c - A'y`
pub fn reduced_costs(lp: &LinearProgram, y: &[f64]) -> Vec<f64> {
    let aty = lp.matrix().tr_mul_vec(y);
    lp.objective().iter().zip(aty).map(|(c, v)| c - v).collect()
}

/// Lagrangian dual objective of the box-constrained program for multipliers
/// `y`, plus the largest dual infeasibility (a reduced cost or row multiplier
/// pushing toward an infinite bound). Infeasibilities below `tol` are ignored
/// in the objective.
pub fn dual_objective(lp: &LinearProgram, y: &[f64], tol: f64) -> (f64, f64) {
    let d = reduced_costs(lp, y);
    let mut obj = lp.objective_offset();
    let mut infeas = 0.0f64;
    for j in 0..lp.num_cols() {
        let (l, u) = (lp.col_lower()[j], lp.col_upper()[j]);
        obj += box_min(d[j], l, u, tol, &mut infeas);
    }
    for i in 0..lp.num_rows() {
        let rhs = lp.rhs()[i];
        let (l, u) = match lp.row_sense()[i] {
            RowSense::Le => (f64::NEG_INFINITY, rhs),
            RowSense::Ge => (rhs, f64::INFINITY),
            RowSense::Eq => (rhs, rhs),
        };
        obj += box_min(y[i], l, u, tol, &mut infeas);
    }
    (obj, infeas)
}

/// `min { g v : l <= v <= u }`, treating |g| <= tol toward an infinite bound as 0.
fn box_min(g: f64, l: f64, u: f64, tol: f64, infeas: &mut f64) -> f64 {
    if g > 0.0 {
        if l.is_finite() {
            g * l
        } else {
            *infeas = infeas.max(g);
            if g > tol {
                f64::NEG_INFINITY
            } else {
                0.0
            }
        }
    } else if g < 0.0 {
        if u.is_finite() {
            g * u
        } else {
            *infeas = infeas.max(-g);
            if -g > tol {
                f64::NEG_INFINITY
            } else {
                0.0
            }
        }
    } else {
        0.0
    }
}

/// True when `y` proves infeasibility: over the bound box, `y'(A x - r)`
/// (with `r` the row logicals) stays strictly on one side of zero.
pub fn verify_farkas(lp: &LinearProgram, y: &[f64], tol: f64) -> bool {
    let aty = lp.matrix().tr_mul_vec(y);
    let mut hi = 0.0f64;
    let mut lo = 0.0f64;
    let mut add = |g: f64, l: f64, u: f64| {
        if g.abs() <= tol {
            return;
        }
        let (a, b) = (g * l, g * u);
        let (mn, mx) = if g > 0.0 { (a, b) } else { (b, a) };
        hi += mx;
        lo += mn;
    };
    for j in 0..lp.num_cols() {
        add(aty[j], lp.col_lower()[j], lp.col_upper()[j]);
    }
    for i in 0..lp.num_rows() {
        let rhs = lp.rhs()[i];
        let (l, u) = match lp.row_sense()[i] {
            RowSense::Le => (f64::NEG_INFINITY, rhs),
            RowSense::Ge => (rhs, f64::INFINITY),
            RowSense::Eq => (rhs, rhs),
        };
        add(-y[i], l, u);
    }
    hi < -tol || lo > tol
}

/// True when `d` is a recession direction of the feasible set along which
/// the objective strictly decreases.
pub fn verify_ray(lp: &LinearProgram, d: &[f64], tol: f64) -> bool {
    if d.len() != lp.num_cols() {
        return false;
    }
    let ad = lp.row_activity(d);
    let rows_ok = (0..lp.num_rows()).all(|i| match lp.row_sense()[i] {
        RowSense::Le => ad[i] <= tol,
        RowSense::Ge => ad[i] >= -tol,
        RowSense::Eq => ad[i].abs() <= tol,
    });
    let bounds_ok = (0..lp.num_cols()).all(|j| {
        (d[j] >= -tol || lp.col_lower()[j] == f64::NEG_INFINITY)
            && (d[j] <= tol || lp.col_upper()[j] == f64::INFINITY)
    });
    let slope: f64 = lp.objective().iter().zip(d).map(|(c, v)| c * v).sum();
    rows_ok && bounds_ok && slope < -tol
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::program::LpBuilder;

    fn small() -> LinearProgram {
        let mut b = LpBuilder::new("c");
        let x = b.add_col("x", 0.0, 4.0, 1.0).unwrap();
        let y = b.add_col("y", 0.0, 4.0, 1.0).unwrap();
        b.add_row("sum", RowSense::Ge, 2.0, &[(x, 1.0), (y, 1.0)]).unwrap();
        b.add_row("diff", RowSense::Eq, 0.0, &[(x, 1.0), (y, -1.0)]).unwrap();
        b.build()
    }

    #[test]
    fn feasible_point_is_clean() {
        let r = check_solution(&small(), &[1.0, 1.0], 1e-9);
        assert!(r.is_clean());
        assert!(r.max_row_residual <= 1e-9);
        assert_eq!(r.objective, 2.0);
    }

    #[test]
    fn perturbed_point_names_violated_rows() {
        let r = check_solution(&small(), &[0.5, 1.0], 1e-9);
        let names: Vec<&str> = r.violated_rows.iter().map(|v| v.name.as_str()).collect();
        assert_eq!(names, vec!["sum", "diff"]);
        let r = check_solution(&small(), &[5.0, 5.0], 1e-9);
        assert_eq!(r.violated_bounds.len(), 2);
    }

    #[test]
    fn dual_objective_matches_optimum() {
        // optimum x = y = 1, objective 2; multiplier of `sum` is 1, of `diff` 0
        let (obj, inf) = dual_objective(&small(), &[1.0, 0.0], 1e-9);
        assert!((obj - 2.0).abs() < 1e-12);
        assert_eq!(inf, 0.0);
    }
}
