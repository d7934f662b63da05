//! Sparse LU factorization of simplex bases.
//!
//! Right-looking Gaussian elimination with Markowitz pivot selection and
//! threshold partial pivoting. Singleton columns and rows are taken first,
//! which covers the logical (slack) part of a typical basis without fill.
//!
//! Vectors passed to [`LuFactors::ftran`] are indexed by matrix row and the
//! result by matrix column (basis position). [`LuFactors::btran`] is the
//! transpose: input by column, output by row.

/// Relative pivot threshold: a pivot must be at least this fraction of the
/// largest active entry in its column.
const PIVOT_THRESHOLD: f64 = 0.01;
/// Entries smaller than this are treated as structural zeros.
const DROP_TOL: f64 = 1e-14;
/// Columns whose active part is below this magnitude are declared singular.
const SINGULAR_TOL: f64 = 1e-11;
/// Number of low-count columns examined per Markowitz search.
const SEARCH_COLS: usize = 4;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Singular {
    /// Columns (basis positions) that could not be pivoted.
    pub cols: Vec<usize>,
    /// Rows left without a pivot; same length as `cols`.
    pub rows: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct LuFactors {
    m: usize,
    // L: one eta column per elimination step.
    l_row: Vec<usize>,
    l_start: Vec<usize>,
    l_idx: Vec<usize>,
    l_val: Vec<f64>,
    // U: one row per elimination step.
    u_row: Vec<usize>,
    u_col: Vec<usize>,
    u_diag: Vec<f64>,
    u_start: Vec<usize>,
    u_idx: Vec<usize>,
    u_val: Vec<f64>,
}

impl LuFactors {
    /// Factorizes the square matrix whose columns are given as sparse
    /// `(row, value)` lists.
    pub fn factorize(m: usize, columns: &[Vec<(usize, f64)>]) -> Result<Self, Singular> {
        assert_eq!(columns.len(), m, "basis must be square");
        let mut col_entries: Vec<Vec<(usize, f64)>> = columns
            .iter()
            .map(|c| c.iter().copied().filter(|(_, v)| v.abs() > DROP_TOL).collect())
            .collect();
        let mut row_cols: Vec<Vec<usize>> = vec![Vec::new(); m];
        for (j, col) in col_entries.iter().enumerate() {
            for &(i, _) in col {
                row_cols[i].push(j);
            }
        }
        let mut row_done = vec![false; m];
        let mut col_done = vec![false; m];

        let mut f = LuFactors {
            m,
            l_row: Vec::with_capacity(m),
            l_start: vec![0],
            l_idx: Vec::new(),
            l_val: Vec::new(),
            u_row: Vec::with_capacity(m),
            u_col: Vec::with_capacity(m),
            u_diag: Vec::with_capacity(m),
            u_start: vec![0],
            u_idx: Vec::new(),
            u_val: Vec::new(),
        };

        // scratch: position of a row inside the column being updated
        let mut slot = vec![usize::MAX; m];
        let mut l_col: Vec<(usize, f64)> = Vec::new();
        let mut u_row: Vec<(usize, f64)> = Vec::new();

        for _step in 0..m {
            let Some((p, q)) = select_pivot(&col_entries, &row_cols, &col_done, &row_done) else {
                let cols: Vec<usize> = (0..m).filter(|&j| !col_done[j]).collect();
                let rows: Vec<usize> = (0..m).filter(|&i| !row_done[i]).collect();
                return Err(Singular { cols, rows });
            };

            // pivot value, L column (rows below the pivot in column q)
            let mut piv = 0.0;
            l_col.clear();
            for &(i, v) in &col_entries[q] {
                if i == p {
                    piv = v;
                } else {
                    l_col.push((i, v));
                }
            }
            for e in l_col.iter_mut() {
                e.1 /= piv;
            }
            col_entries[q].clear();

            // U row: remaining entries of row p, removed from their columns
            u_row.clear();
            for &j in &row_cols[p] {
                if j == q {
                    continue;
                }
                let col = &mut col_entries[j];
                if let Some(pos) = col.iter().position(|&(i, _)| i == p) {
                    let (_, v) = col.swap_remove(pos);
                    u_row.push((j, v));
                }
            }
            row_cols[p].clear();
            for &(i, _) in &l_col {
                if let Some(pos) = row_cols[i].iter().position(|&j| j == q) {
                    row_cols[i].swap_remove(pos);
                }
            }

            // Schur complement update
            if !l_col.is_empty() {
                for &(j, upj) in &u_row {
                    let col = &mut col_entries[j];
                    for (k, &(i, _)) in col.iter().enumerate() {
                        slot[i] = k;
                    }
                    for &(i, li) in &l_col {
                        let delta = -li * upj;
                        if slot[i] != usize::MAX {
                            col[slot[i]].1 += delta;
                        } else {
                            slot[i] = col.len();
                            col.push((i, delta));
                            row_cols[i].push(j);
                        }
                    }
                    for &(i, _) in col.iter() {
                        slot[i] = usize::MAX;
                    }
                    // drop cancellations; keep row patterns in sync
                    let mut k = 0;
                    while k < col.len() {
                        if col[k].1.abs() <= DROP_TOL {
                            let (i, _) = col.swap_remove(k);
                            if let Some(pos) = row_cols[i].iter().position(|&c| c == j) {
                                row_cols[i].swap_remove(pos);
                            }
                        } else {
                            k += 1;
                        }
                    }
                }
            }

            row_done[p] = true;
            col_done[q] = true;
            f.l_row.push(p);
            for &(i, l) in &l_col {
                f.l_idx.push(i);
                f.l_val.push(l);
            }
            f.l_start.push(f.l_idx.len());
            f.u_row.push(p);
            f.u_col.push(q);
            f.u_diag.push(piv);
            for &(j, v) in &u_row {
                f.u_idx.push(j);
                f.u_val.push(v);
            }
            f.u_start.push(f.u_idx.len());
        }
        Ok(f)
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    /// Nonzeros stored in L and U (diagonal included).
    pub fn nnz(&self) -> usize {
        self.l_val.len() + self.u_val.len() + self.m
    }

    /// Solves `B x = b` in place: `b` is indexed by row on input, and the
    /// returned vector by column.
    pub fn ftran(&self, b: &mut [f64]) -> Vec<f64> {
        for k in 0..self.m {
            let t = b[self.l_row[k]];
            if t != 0.0 {
                for e in self.l_start[k]..self.l_start[k + 1] {
                    b[self.l_idx[e]] -= self.l_val[e] * t;
                }
            }
        }
        let mut x = vec![0.0; self.m];
        for k in (0..self.m).rev() {
            let mut s = b[self.u_row[k]];
            for e in self.u_start[k]..self.u_start[k + 1] {
                s -= self.u_val[e] * x[self.u_idx[e]];
            }
            x[self.u_col[k]] = s / self.u_diag[k];
        }
        x
    }

    /// Solves `B' y = c` in place: `c` is indexed by column on input, and the
    /// returned vector by row.
    pub fn btran(&self, c: &mut [f64]) -> Vec<f64> {
        let mut z = vec![0.0; self.m];
        for k in 0..self.m {
            let zp = c[self.u_col[k]] / self.u_diag[k];
            z[self.u_row[k]] = zp;
            if zp != 0.0 {
                for e in self.u_start[k]..self.u_start[k + 1] {
                    c[self.u_idx[e]] -= self.u_val[e] * zp;
                }
            }
        }
        for k in (0..self.m).rev() {
            let mut s = 0.0;
            for e in self.l_start[k]..self.l_start[k + 1] {
                s += self.l_val[e] * z[self.l_idx[e]];
            }
            z[self.l_row[k]] -= s;
        }
        z
    }
}

fn select_pivot(
    col_entries: &[Vec<(usize, f64)>],
    row_cols: &[Vec<usize>],
    col_done: &[bool],
    row_done: &[bool],
) -> Option<(usize, usize)> {
    let m = col_entries.len();

    // column singletons
    for j in 0..m {
        if !col_done[j] && col_entries[j].len() == 1 {
            let (i, v) = col_entries[j][0];
            if v.abs() > SINGULAR_TOL {
                return Some((i, j));
            }
        }
    }

    // row singletons passing the threshold test
    for i in 0..m {
        if !row_done[i] && row_cols[i].len() == 1 {
            let j = row_cols[i][0];
            let col = &col_entries[j];
            let cmax = col.iter().fold(0.0f64, |a, &(_, v)| a.max(v.abs()));
            if let Some(&(_, v)) = col.iter().find(|&&(r, _)| r == i) {
                if v.abs() > SINGULAR_TOL && v.abs() >= PIVOT_THRESHOLD * cmax {
                    return Some((i, j));
                }
            }
        }
    }

    // Markowitz search over the sparsest columns
    let mut order: Vec<(usize, usize)> = (0..m)
        .filter(|&j| !col_done[j] && !col_entries[j].is_empty())
        .map(|j| (col_entries[j].len(), j))
        .collect();
    if order.is_empty() {
        return None;
    }
    let take = SEARCH_COLS.min(order.len());
    order.select_nth_unstable(take - 1);
    order.truncate(take);
    order.sort_unstable();

    let mut best: Option<(usize, usize, usize)> = None; // (cost, row, col)
    for &(cnt, j) in &order {
        let col = &col_entries[j];
        let cmax = col.iter().fold(0.0f64, |a, &(_, v)| a.max(v.abs()));
        if cmax <= SINGULAR_TOL {
            continue;
        }
        for &(i, v) in col {
            if v.abs() < PIVOT_THRESHOLD * cmax {
                continue;
            }
            let cost = (row_cols[i].len() - 1) * (cnt - 1);
            let cand = (cost, i, j);
            if best.map_or(true, |b| (cand.0, cand.2, cand.1) < (b.0, b.2, b.1)) {
                best = Some(cand);
            }
        }
    }
    if best.is_none() {
        // every searched column was numerically empty; try the rest
        for j in 0..m {
            if col_done[j] {
                continue;
            }
            let col = &col_entries[j];
            let Some(&(i, v)) = col
                .iter()
                .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()).then(b.0.cmp(&a.0)))
            else {
                continue;
            };
            if v.abs() > SINGULAR_TOL {
                return Some((i, j));
            }
        }
        return None;
    }
    best.map(|(_, i, j)| (i, j))
}
