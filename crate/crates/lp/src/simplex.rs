//! Bounded-variable primal revised simplex.
//!
//! Every row `i` gets a logical variable `r_i` so the constraints read
//! `A x - r = 0` with `r_i` boxed by the row sense and right-hand side.
//! Upper bounds on structural columns are handled by bound flips rather than
//! extra rows. The starting basis is all-logical.
//!
//! Phase 1 minimizes the sum of basic bound violations (costs of -1/+1 on
//! the violating basics, re-derived every iteration); phase 2 minimizes the
//! true objective. Pricing is Dantzig's rule with a two-pass (Harris) ratio
//! test; when the objective stalls for too long Bland's rule takes over until
//! progress resumes. Ties are always broken by lowest index so identical
//! inputs produce identical pivot sequences.

use crate::check::{self, dual_objective};
use crate::lu::LuFactors;
use crate::program::{CscMatrix, LinearProgram, RowSense};
use crate::scaling::Scaling;

#[derive(Clone, Debug, PartialEq)]
pub struct SolverOptions {
    pub feasibility_tol: f64,
    pub optimality_tol: f64,
    /// `None` picks a limit proportional to the problem size.
    pub max_iterations: Option<usize>,
    pub scaling: bool,
    /// Basis updates applied before a fresh factorization.
    pub refactor_interval: usize,
    /// Non-improving iterations tolerated before switching to Bland's rule.
    pub stall_limit: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            feasibility_tol: 1e-7,
            optimality_tol: 1e-7,
            max_iterations: None,
            scaling: true,
            refactor_interval: 100,
            stall_limit: 300,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Status {
    Optimal,
    Infeasible,
    Unbounded,
    IterationLimit,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Optimal => "optimal",
            Status::Infeasible => "infeasible",
            Status::Unbounded => "unbounded",
            Status::IterationLimit => "iteration-limit",
        }
    }
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Proof attached to a non-optimal status.
#[derive(Clone, Debug, PartialEq)]
pub enum Certificate {
    /// Row multipliers `y` with `max { (A'y)'x - y'r : x, r within bounds } < 0`.
    Farkas(Vec<f64>),
    /// Column direction `d`, feasible from the last iterate, with `c'd < 0`.
    Ray(Vec<f64>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct LpSolution {
    pub status: Status,
    pub x: Vec<f64>,
    /// Row multipliers, sign convention `d = c - A'y`.
    pub duals: Vec<f64>,
    pub reduced_costs: Vec<f64>,
    pub objective: f64,
    pub dual_objective: f64,
    pub iterations: usize,
    pub max_primal_residual: f64,
    pub max_dual_residual: f64,
    pub certificate: Option<Certificate>,
}

impl LpSolution {
    pub fn is_optimal(&self) -> bool {
        self.status == Status::Optimal
    }

    /// `|primal - dual|` relative to `1 + |primal|`.
    pub fn duality_gap(&self) -> f64 {
        (self.objective - self.dual_objective).abs() / (1.0 + self.objective.abs())
    }
}

/// Solves `lp` and returns the solution in the original (unscaled) space.
pub fn solve(lp: &LinearProgram, opts: &SolverOptions) -> LpSolution {
    let scaling = if opts.scaling {
        Scaling::equilibrate(lp)
    } else {
        Scaling::identity(lp)
    };
    let scaled = scaling.apply(lp);
    let mut spx = Simplex::new(&scaled, opts);
    let status = spx.run();

    let x = scaling.unscale_primal(&spx.x[..spx.n]);
    let duals = scaling.unscale_duals(&spx.y);
    let certificate = match status {
        Status::Infeasible => Some(Certificate::Farkas(scaling.unscale_duals(&spx.y))),
        Status::Unbounded => spx
            .ray
            .as_ref()
            .map(|r| Certificate::Ray(scaling.unscale_primal(r))),
        _ => None,
    };

    let reduced_costs = check::reduced_costs(lp, &duals);
    let report = check::check_solution(lp, &x, opts.feasibility_tol);
    let (dual_obj, dual_inf) = dual_objective(lp, &duals, opts.optimality_tol);
    LpSolution {
        status,
        objective: lp.objective_value(&x),
        dual_objective: dual_obj,
        x,
        duals,
        reduced_costs,
        iterations: spx.iterations,
        max_primal_residual: report.max_row_residual.max(report.max_bound_violation),
        max_dual_residual: dual_inf,
        certificate,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum VarState {
    Basic(usize),
    AtLower,
    AtUpper,
    /// Nonbasic free variable resting at zero.
    Zero,
}

struct Eta {
    pos: usize,
    pivot: f64,
    idx: Vec<usize>,
    val: Vec<f64>,
}

struct Simplex<'a> {
    opts: &'a SolverOptions,
    a: &'a CscMatrix,
    m: usize,
    n: usize,
    lower: Vec<f64>,
    upper: Vec<f64>,
    cost: Vec<f64>,
    x: Vec<f64>,
    state: Vec<VarState>,
    basis: Vec<usize>,
    lu: Option<LuFactors>,
    etas: Vec<Eta>,
    y: Vec<f64>,
    ray: Option<Vec<f64>>,
    iterations: usize,
    max_iterations: usize,
}

const PIVOT_TOL: f64 = 1e-9;

impl<'a> Simplex<'a> {
    fn new(lp: &'a LinearProgram, opts: &'a SolverOptions) -> Self {
        let m = lp.num_rows();
        let n = lp.num_cols();
        let mut lower = lp.col_lower().to_vec();
        let mut upper = lp.col_upper().to_vec();
        let mut cost = lp.objective().to_vec();
        for (i, (&sense, &rhs)) in lp.row_sense().iter().zip(lp.rhs()).enumerate() {
            let _ = i;
            let (l, u) = match sense {
                RowSense::Le => (f64::NEG_INFINITY, rhs),
                RowSense::Ge => (rhs, f64::INFINITY),
                RowSense::Eq => (rhs, rhs),
            };
            lower.push(l);
            upper.push(u);
            cost.push(0.0);
        }
        let mut x = vec![0.0; n + m];
        let mut state = vec![VarState::AtLower; n + m];
        for j in 0..n {
            let (l, u) = (lower[j], upper[j]);
            if l.is_finite() {
                x[j] = l;
                state[j] = VarState::AtLower;
            } else if u.is_finite() {
                x[j] = u;
                state[j] = VarState::AtUpper;
            } else {
                x[j] = 0.0;
                state[j] = VarState::Zero;
            }
        }
        let basis: Vec<usize> = (n..n + m).collect();
        for (pos, &v) in basis.iter().enumerate() {
            state[v] = VarState::Basic(pos);
        }
        let max_iterations = opts
            .max_iterations
            .unwrap_or(50_000 + 20 * (n + m));
        Simplex {
            opts,
            a: lp.matrix(),
            m,
            n,
            lower,
            upper,
            cost,
            x,
            state,
            basis,
            lu: None,
            etas: Vec::new(),
            y: vec![0.0; m],
            ray: None,
            iterations: 0,
            max_iterations,
        }
    }

    fn column(&self, j: usize) -> Vec<(usize, f64)> {
        if j < self.n {
            self.a.column(j).collect()
        } else {
            vec![(j - self.n, -1.0)]
        }
    }

    fn refactor(&mut self) {
        for _attempt in 0..=self.m {
            let cols: Vec<Vec<(usize, f64)>> = self.basis.iter().map(|&v| self.column(v)).collect();
            match LuFactors::factorize(self.m, &cols) {
                Ok(lu) => {
                    self.lu = Some(lu);
                    self.etas.clear();
                    self.recompute_basics();
                    return;
                }
                Err(sing) => {
                    // swap the logicals of the uncovered rows into the basis
                    for (&pos, &row) in sing.cols.iter().zip(&sing.rows) {
                        let logical = self.n + row;
                        if matches!(self.state[logical], VarState::Basic(_)) {
                            continue;
                        }
                        let out = self.basis[pos];
                        self.make_nonbasic_at_nearest_bound(out);
                        self.basis[pos] = logical;
                        self.state[logical] = VarState::Basic(pos);
                    }
                }
            }
        }
        panic!("basis repair failed to produce a nonsingular basis");
    }

    fn make_nonbasic_at_nearest_bound(&mut self, j: usize) {
        let (l, u, v) = (self.lower[j], self.upper[j], self.x[j]);
        let (state, val) = match (l.is_finite(), u.is_finite()) {
            (true, true) => {
                if (v - l).abs() <= (u - v).abs() {
                    (VarState::AtLower, l)
                } else {
                    (VarState::AtUpper, u)
                }
            }
            (true, false) => (VarState::AtLower, l),
            (false, true) => (VarState::AtUpper, u),
            (false, false) => (VarState::Zero, 0.0),
        };
        self.state[j] = state;
        self.x[j] = val;
    }

    /// `x_B = B^-1 (-N x_N)`
    fn recompute_basics(&mut self) {
        let mut rhs = vec![0.0; self.m];
        for j in 0..self.n + self.m {
            if matches!(self.state[j], VarState::Basic(_)) {
                continue;
            }
            let xj = self.x[j];
            if xj == 0.0 {
                continue;
            }
            if j < self.n {
                for (i, v) in self.a.column(j) {
                    rhs[i] -= v * xj;
                }
            } else {
                rhs[j - self.n] += xj;
            }
        }
        let xb = self.ftran(rhs);
        for (pos, &v) in self.basis.iter().enumerate() {
            self.x[v] = xb[pos];
        }
    }

    fn ftran(&self, mut rhs: Vec<f64>) -> Vec<f64> {
        let lu = self.lu.as_ref().expect("factorized");
        let mut x = lu.ftran(&mut rhs);
        for eta in &self.etas {
            let xr = x[eta.pos] / eta.pivot;
            x[eta.pos] = xr;
            if xr != 0.0 {
                for (&i, &a) in eta.idx.iter().zip(&eta.val) {
                    x[i] -= a * xr;
                }
            }
        }
        x
    }

    fn btran(&self, mut c: Vec<f64>) -> Vec<f64> {
        for eta in self.etas.iter().rev() {
            let mut s = c[eta.pos];
            for (&i, &a) in eta.idx.iter().zip(&eta.val) {
                s -= a * c[i];
            }
            c[eta.pos] = s / eta.pivot;
        }
        self.lu.as_ref().expect("factorized").btran(&mut c)
    }

    fn dot_column(&self, j: usize, y: &[f64]) -> f64 {
        if j < self.n {
            let (idx, val) = self.a.column_slices(j);
            idx.iter().zip(val).map(|(&i, &v)| v * y[i]).sum()
        } else {
            -y[j - self.n]
        }
    }

    /// Basic infeasibility: +1 above upper, -1 below lower, 0 inside.
    fn infeasibility_costs(&self) -> (Vec<f64>, f64) {
        let tol = self.opts.feasibility_tol;
        let mut c = vec![0.0; self.m];
        let mut total = 0.0;
        for (pos, &v) in self.basis.iter().enumerate() {
            let xv = self.x[v];
            if xv < self.lower[v] - tol {
                c[pos] = -1.0;
                total += self.lower[v] - xv;
            } else if xv > self.upper[v] + tol {
                c[pos] = 1.0;
                total += xv - self.upper[v];
            }
        }
        (c, total)
    }

    fn phase2_objective(&self) -> f64 {
        self.cost.iter().zip(&self.x).map(|(c, x)| c * x).sum()
    }

    fn run(&mut self) -> Status {
        self.refactor();
        let mut best = f64::INFINITY;
        let mut best_phase1 = true;
        let mut stalled = 0usize;
        let mut bland = false;
        let mut final_checks = 0usize;

        loop {
            if self.etas.len() >= self.opts.refactor_interval {
                self.refactor();
            }

            let (c1, infeas) = self.infeasibility_costs();
            let phase1 = infeas > 0.0;
            let cb: Vec<f64> = if phase1 {
                c1
            } else {
                self.basis.iter().map(|&v| self.cost[v]).collect()
            };
            let obj = if phase1 { infeas } else { self.phase2_objective() };

            if phase1 != best_phase1 {
                best = f64::INFINITY;
                best_phase1 = phase1;
                stalled = 0;
                bland = false;
            }
            if obj < best - 1e-12 * (1.0 + best.abs().min(1e300)) {
                best = obj;
                stalled = 0;
                bland = false;
            } else {
                stalled += 1;
                if stalled > self.opts.stall_limit {
                    bland = true;
                }
            }

            self.y = self.btran(cb);

            let entering = self.price(phase1, bland);
            let Some((q, d_q)) = entering else {
                // confirm on a fresh factorization before declaring the result
                if !self.etas.is_empty() && final_checks < 3 {
                    final_checks += 1;
                    self.refactor();
                    continue;
                }
                return if phase1 {
                    Status::Infeasible
                } else {
                    Status::Optimal
                };
            };

            if self.iterations >= self.max_iterations {
                return Status::IterationLimit;
            }
            self.iterations += 1;

            let dir = match self.state[q] {
                VarState::AtLower => 1.0,
                VarState::AtUpper => -1.0,
                VarState::Zero => {
                    if d_q < 0.0 {
                        1.0
                    } else {
                        -1.0
                    }
                }
                VarState::Basic(_) => unreachable!("entering variable is nonbasic"),
            };

            let mut col = vec![0.0; self.m];
            for (i, v) in self.column(q) {
                col[i] = v;
            }
            let alpha = self.ftran(col);

            match self.ratio_test(q, dir, &alpha, phase1, bland) {
                Step::Unbounded => {
                    if phase1 {
                        // cannot happen in exact arithmetic; refactor and retry
                        self.refactor();
                        continue;
                    }
                    let mut ray = vec![0.0; self.n];
                    if q < self.n {
                        ray[q] = dir;
                    }
                    for (pos, &v) in self.basis.iter().enumerate() {
                        if v < self.n {
                            ray[v] = -dir * alpha[pos];
                        }
                    }
                    self.ray = Some(ray);
                    return Status::Unbounded;
                }
                Step::Flip(theta) => {
                    self.apply_step(q, dir, theta, &alpha);
                    self.state[q] = if dir > 0.0 {
                        VarState::AtUpper
                    } else {
                        VarState::AtLower
                    };
                    self.x[q] = if dir > 0.0 { self.upper[q] } else { self.lower[q] };
                }
                Step::Pivot { pos, theta, to_upper } => {
                    self.apply_step(q, dir, theta, &alpha);
                    let leaving = self.basis[pos];
                    if to_upper {
                        self.state[leaving] = VarState::AtUpper;
                        self.x[leaving] = self.upper[leaving];
                    } else {
                        self.state[leaving] = VarState::AtLower;
                        self.x[leaving] = self.lower[leaving];
                    }
                    self.basis[pos] = q;
                    self.state[q] = VarState::Basic(pos);
                    let (idx, val): (Vec<usize>, Vec<f64>) = alpha
                        .iter()
                        .enumerate()
                        .filter(|&(i, &a)| i != pos && a != 0.0)
                        .map(|(i, &a)| (i, a))
                        .unzip();
                    self.etas.push(Eta {
                        pos,
                        pivot: alpha[pos],
                        idx,
                        val,
                    });
                }
            }
        }
    }

    fn apply_step(&mut self, q: usize, dir: f64, theta: f64, alpha: &[f64]) {
        if theta == 0.0 {
            return;
        }
        self.x[q] += dir * theta;
        for (pos, &a) in alpha.iter().enumerate() {
            if a != 0.0 {
                let v = self.basis[pos];
                self.x[v] -= dir * a * theta;
            }
        }
    }

    /// Picks the entering variable and its reduced cost.
    fn price(&self, phase1: bool, bland: bool) -> Option<(usize, f64)> {
        let tol = self.opts.optimality_tol;
        let mut best: Option<(usize, f64)> = None;
        let mut best_score = 0.0;
        for j in 0..self.n + self.m {
            let st = self.state[j];
            if matches!(st, VarState::Basic(_)) || self.lower[j] == self.upper[j] {
                continue;
            }
            let cj = if phase1 { 0.0 } else { self.cost[j] };
            let d = cj - self.dot_column(j, &self.y);
            let score = match st {
                VarState::AtLower if d < -tol => -d,
                VarState::AtUpper if d > tol => d,
                VarState::Zero if d.abs() > tol => d.abs(),
                _ => continue,
            };
            if bland {
                return Some((j, d));
            }
            if score > best_score {
                best_score = score;
                best = Some((j, d));
            }
        }
        best
    }

    fn ratio_test(&self, q: usize, dir: f64, alpha: &[f64], phase1: bool, bland: bool) -> Step {
        let tol = self.opts.feasibility_tol;
        let flip = self.upper[q] - self.lower[q];

        // (pos, exact ratio, relaxed ratio, to_upper)
        let mut cands: Vec<(usize, f64, f64, bool)> = Vec::new();
        for (pos, &a) in alpha.iter().enumerate() {
            if a.abs() <= PIVOT_TOL {
                continue;
            }
            let v = self.basis[pos];
            let rate = -dir * a;
            let (xv, l, u) = (self.x[v], self.lower[v], self.upper[v]);
            let below = xv < l - tol;
            let above = xv > u + tol;
            if phase1 && below {
                if rate > 0.0 {
                    let r = (l - xv) / rate;
                    cands.push((pos, r, r, false));
                }
                continue;
            }
            if phase1 && above {
                if rate < 0.0 {
                    let r = (xv - u) / (-rate);
                    cands.push((pos, r, r, true));
                }
                continue;
            }
            if rate < 0.0 && l.is_finite() {
                let exact = ((xv - l) / -rate).max(0.0);
                let relaxed = (xv - l + tol) / -rate;
                cands.push((pos, exact, relaxed, false));
            } else if rate > 0.0 && u.is_finite() {
                let exact = ((u - xv) / rate).max(0.0);
                let relaxed = (u - xv + tol) / rate;
                cands.push((pos, exact, relaxed, true));
            }
        }

        if cands.is_empty() {
            return if flip.is_finite() {
                Step::Flip(flip)
            } else {
                Step::Unbounded
            };
        }

        let chosen = if bland {
            let min = cands.iter().map(|c| c.1).fold(f64::INFINITY, f64::min);
            cands
                .iter()
                .filter(|c| c.1 <= min)
                .min_by_key(|c| self.basis[c.0])
                .copied()
        } else {
            let bound = cands.iter().map(|c| c.2).fold(f64::INFINITY, f64::min);
            cands
                .iter()
                .filter(|c| c.1 <= bound)
                .max_by(|a, b| {
                    alpha[a.0]
                        .abs()
                        .total_cmp(&alpha[b.0].abs())
                        .then(b.0.cmp(&a.0))
                })
                .copied()
        };
        let (pos, theta, _, to_upper) = chosen.expect("nonempty candidate set");

        if flip.is_finite() && flip <= theta {
            return Step::Flip(flip);
        }
        Step::Pivot {
            pos,
            theta,
            to_upper,
        }
    }
}

enum Step {
    Unbounded,
    Flip(f64),
    Pivot {
        pos: usize,
        theta: f64,
        to_upper: bool,
    },
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::program::LpBuilder;

    fn opts() -> SolverOptions {
        SolverOptions::default()
    }

    #[test]
    fn maximizes_box_corner() {
        // max x + y s.t. x <= 1, y <= 1
        let mut b = LpBuilder::new("box");
        let x = b.add_col("x", 0.0, f64::INFINITY, -1.0).unwrap();
        let y = b.add_col("y", 0.0, f64::INFINITY, -1.0).unwrap();
        b.add_row("cx", RowSense::Le, 1.0, &[(x, 1.0)]).unwrap();
        b.add_row("cy", RowSense::Le, 1.0, &[(y, 1.0)]).unwrap();
        let sol = solve(&b.build(), &opts());
        assert_eq!(sol.status, Status::Optimal);
        assert!((sol.objective + 2.0).abs() < 1e-9);
        assert!((sol.x[0] - 1.0).abs() < 1e-9 && (sol.x[1] - 1.0).abs() < 1e-9);
        assert!(sol.duality_gap() < 1e-9);
    }

    #[test]
    fn bound_flips_only() {
        let mut b = LpBuilder::new("flip");
        b.add_col("x", -2.0, 3.0, -1.0).unwrap();
        b.add_col("y", -2.0, 3.0, 1.0).unwrap();
        let sol = solve(&b.build(), &opts());
        assert_eq!(sol.status, Status::Optimal);
        assert_eq!(sol.x, vec![3.0, -2.0]);
    }

    #[test]
    fn detects_infeasible_with_certificate() {
        let mut b = LpBuilder::new("inf");
        let x = b.add_col("x", 0.0, 10.0, 1.0).unwrap();
        let y = b.add_col("y", 0.0, 10.0, 1.0).unwrap();
        b.add_row("lo", RowSense::Ge, 5.0, &[(x, 1.0), (y, 1.0)]).unwrap();
        b.add_row("hi", RowSense::Le, 3.0, &[(x, 1.0), (y, 1.0)]).unwrap();
        let lp = b.build();
        let sol = solve(&lp, &opts());
        assert_eq!(sol.status, Status::Infeasible);
        let Some(Certificate::Farkas(y)) = &sol.certificate else {
            panic!("missing certificate");
        };
        assert!(check::verify_farkas(&lp, y, 1e-9));
    }

    #[test]
    fn detects_unbounded_with_ray() {
        let mut b = LpBuilder::new("unb");
        let x = b.add_col("x", 0.0, f64::INFINITY, -1.0).unwrap();
        let y = b.add_col("y", 0.0, f64::INFINITY, 0.0).unwrap();
        b.add_row("r", RowSense::Le, 1.0, &[(x, 1.0), (y, -1.0)]).unwrap();
        let lp = b.build();
        let sol = solve(&lp, &opts());
        assert_eq!(sol.status, Status::Unbounded);
        let Some(Certificate::Ray(d)) = &sol.certificate else {
            panic!("missing ray");
        };
        assert!(check::verify_ray(&lp, d, 1e-9));
    }

    #[test]
    fn free_variables_and_equalities() {
        // min |shifted| style: min x1 + 2 x2, x1 - x2 = 3, x free in [-inf, inf], x2 >= -1
        let mut b = LpBuilder::new("free");
        let x1 = b.add_col("x1", f64::NEG_INFINITY, f64::INFINITY, 1.0).unwrap();
        let x2 = b.add_col("x2", -1.0, f64::INFINITY, 2.0).unwrap();
        b.add_row("e", RowSense::Eq, 3.0, &[(x1, 1.0), (x2, -1.0)]).unwrap();
        let sol = solve(&b.build(), &opts());
        assert_eq!(sol.status, Status::Optimal);
        assert!((sol.x[1] + 1.0).abs() < 1e-9);
        assert!((sol.x[0] - 2.0).abs() < 1e-9);
        assert!((sol.objective - 0.0).abs() < 1e-9);
    }

    #[test]
    fn iteration_limit_is_reported() {
        let mut b = LpBuilder::new("lim");
        let x = b.add_col("x", 0.0, f64::INFINITY, -1.0).unwrap();
        let y = b.add_col("y", 0.0, f64::INFINITY, -1.0).unwrap();
        b.add_row("a", RowSense::Le, 4.0, &[(x, 1.0), (y, 2.0)]).unwrap();
        b.add_row("b", RowSense::Le, 4.0, &[(x, 2.0), (y, 1.0)]).unwrap();
        let o = SolverOptions {
            max_iterations: Some(1),
            ..opts()
        };
        assert_eq!(solve(&b.build(), &o).status, Status::IterationLimit);
    }

    #[test]
    fn empty_program() {
        let sol = solve(&LpBuilder::new("e").build(), &opts());
        assert_eq!(sol.status, Status::Optimal);
        assert_eq!(sol.objective, 0.0);
    }
}
