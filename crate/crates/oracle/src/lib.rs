//! Reference oracles used only by tests.
//!
//! Nothing here shares code with the production solver: the vertex
//! enumerator works on its own dense representation, and the external
//! bridge hands an MPS file to an independent solver.

pub mod external;

/// Constraint sense for the dense oracle model.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Le,
    Eq,
    Ge,
}

/// Dense LP `min c'x + offset, rows, lower <= x <= upper` with finite bounds.
#[derive(Clone, Debug)]
pub struct DenseLp {
    pub cost: Vec<f64>,
    pub offset: f64,
    pub rows: Vec<(Vec<f64>, Sense, f64)>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Vertex {
    pub x: Vec<f64>,
    pub objective: f64,
}

/// Minimizes by enumerating every basic solution of the constraint system.
///
/// Each candidate vertex is the unique solution of `n` linearly independent
/// active constraints (rows held at equality or bounds held tight). Returns
/// `None` when no candidate is feasible, which for a bounded box means the
/// program is infeasible.
///
/// # Panics
/// If a bound is infinite: the polytope must be bounded for vertices to exist.
pub fn brute_force_minimum(lp: &DenseLp, tol: f64) -> Option<Vertex> {
    let n = lp.cost.len();
    assert!(
        lp.lower.iter().chain(&lp.upper).all(|b| b.is_finite()),
        "vertex enumeration needs a bounded box"
    );
    // every constraint as (a, b) meaning a'x = b when active
    let mut equalities: Vec<(Vec<f64>, f64)> = Vec::new();
    let mut inequalities: Vec<(Vec<f64>, f64)> = Vec::new();
    for (a, sense, b) in &lp.rows {
        match sense {
            Sense::Eq => equalities.push((a.clone(), *b)),
            _ => inequalities.push((a.clone(), *b)),
        }
    }
    for j in 0..n {
        let mut e = vec![0.0; n];
        e[j] = 1.0;
        inequalities.push((e.clone(), lp.lower[j]));
        inequalities.push((e, lp.upper[j]));
    }

    let mut best: Option<Vertex> = None;
    let mut consider = |active: &[&(Vec<f64>, f64)]| {
        let Some(x) = solve_square(active) else {
            return;
        };
        if !is_feasible(lp, &x, tol) {
            return;
        }
        let obj = lp.offset + lp.cost.iter().zip(&x).map(|(c, v)| c * v).sum::<f64>();
        if best.as_ref().map_or(true, |b| obj < b.objective) {
            best = Some(Vertex { x, objective: obj });
        }
    };

    if n == 0 {
        consider(&[]);
        return best;
    }
    // equality rows are enforced by the feasibility check, so any n
    // independent constraints (equalities included) may define a vertex
    let all: Vec<(Vec<f64>, f64)> = equalities.into_iter().chain(inequalities).collect();
    for subset in combinations(all.len(), n) {
        let active: Vec<&(Vec<f64>, f64)> = subset.iter().map(|&i| &all[i]).collect();
        consider(&active);
    }
    best
}

fn is_feasible(lp: &DenseLp, x: &[f64], tol: f64) -> bool {
    let scale = |b: f64| tol * (1.0 + b.abs());
    for j in 0..x.len() {
        if x[j] < lp.lower[j] - scale(lp.lower[j]) || x[j] > lp.upper[j] + scale(lp.upper[j]) {
            return false;
        }
    }
    lp.rows.iter().all(|(a, sense, b)| {
        let ax: f64 = a.iter().zip(x).map(|(p, q)| p * q).sum();
        match sense {
            Sense::Le => ax <= b + scale(*b),
            Sense::Ge => ax >= b - scale(*b),
            Sense::Eq => (ax - b).abs() <= scale(*b),
        }
    })
}

/// Gaussian elimination with partial pivoting; `None` if (near) singular.
fn solve_square(active: &[&(Vec<f64>, f64)]) -> Option<Vec<f64>> {
    let n = active.len();
    let mut m: Vec<Vec<f64>> = active
        .iter()
        .map(|(a, b)| {
            let mut r = a.clone();
            r.push(*b);
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))?;
        if m[piv][col].abs() < 1e-10 {
            return None;
        }
        m.swap(col, piv);
        for r in 0..n {
            if r != col {
                let f = m[r][col] / m[col][col];
                if f != 0.0 {
                    for c in col..=n {
                        m[r][c] -= f * m[col][c];
                    }
                }
            }
        }
    }
    Some((0..n).map(|i| m[i][n] / m[i][i]).collect())
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    let mut idx: Option<Vec<usize>> = if k <= n { Some((0..k).collect()) } else { None };
    std::iter::from_fn(move || {
        let cur = idx.clone()?;
        let mut next = cur.clone();
        let mut i = k;
        loop {
            if i == 0 {
                idx = None;
                break;
            }
            i -= 1;
            if next[i] < n - k + i {
                next[i] += 1;
                for j in i + 1..k {
                    next[j] = next[j - 1] + 1;
                }
                idx = Some(next);
                break;
            }
        }
        Some(cur)
    })
}
