//! Canonical sparse LP container.
//!
//! A [`LinearProgram`] is always a minimization:
//!
//! ```text
//! min  c'x + offset
//! s.t. a_i x (<=|=|>=) rhs_i        for every row i
//!      lower_j <= x_j <= upper_j    for every column j
//! ```
//!
//! Programs are assembled through [`LpBuilder`], which merges duplicate
//! `(row, col)` entries and stores the matrix column-major.

use std::collections::HashMap;
use std::fmt;

use crate::LpError;

/// Sense of a constraint row.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RowSense {
    Le,
    Eq,
    Ge,
}

impl RowSense {
    pub fn symbol(self) -> &'static str {
        match self {
            RowSense::Le => "<=",
            RowSense::Eq => "=",
            RowSense::Ge => ">=",
        }
    }
}

impl fmt::Display for RowSense {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ColId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RowId(pub usize);

/// Column-major sparse matrix, entries sorted by row within each column.
#[derive(Clone, Debug, PartialEq)]
pub struct CscMatrix {
    pub(crate) nrows: usize,
    pub(crate) col_start: Vec<usize>,
    pub(crate) row_idx: Vec<usize>,
    pub(crate) values: Vec<f64>,
}

impl CscMatrix {
    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.col_start.len() - 1
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// Entries of column `j` as `(row, value)` pairs.
    pub fn column(&self, j: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let range = self.col_start[j]..self.col_start[j + 1];
        self.row_idx[range.clone()]
            .iter()
            .copied()
            .zip(self.values[range].iter().copied())
    }

    pub fn column_slices(&self, j: usize) -> (&[usize], &[f64]) {
        let range = self.col_start[j]..self.col_start[j + 1];
        (&self.row_idx[range.clone()], &self.values[range])
    }

    /// All `(row, col, value)` triplets in column-major order.
    pub fn triplets(&self) -> Vec<(usize, usize, f64)> {
        let mut out = Vec::with_capacity(self.nnz());
        for j in 0..self.ncols() {
            for (i, v) in self.column(j) {
                out.push((i, j, v));
            }
        }
        out
    }

    /// `y = A x`
    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.nrows];
        for (j, &xj) in x.iter().enumerate() {
            if xj != 0.0 {
                for (i, v) in self.column(j) {
                    y[i] += v * xj;
                }
            }
        }
        y
    }

    /// `z = A' y`
    pub fn tr_mul_vec(&self, y: &[f64]) -> Vec<f64> {
        (0..self.ncols())
            .map(|j| self.column(j).map(|(i, v)| v * y[i]).sum())
            .collect()
    }

    fn from_triplets(nrows: usize, ncols: usize, mut entries: Vec<(usize, usize, f64)>) -> Self {
        entries.sort_by(|a, b| (a.1, a.0).cmp(&(b.1, b.0)));
        let mut col_start = vec![0usize; ncols + 1];
        let mut row_idx = Vec::with_capacity(entries.len());
        let mut values: Vec<f64> = Vec::with_capacity(entries.len());
        let mut last: Option<(usize, usize)> = None;
        for (i, j, v) in entries {
            if last == Some((i, j)) {
                *values.last_mut().unwrap() += v;
                continue;
            }
            row_idx.push(i);
            values.push(v);
            col_start[j + 1] += 1;
            last = Some((i, j));
        }
        for j in 0..ncols {
            col_start[j + 1] += col_start[j];
        }
        let mut m = CscMatrix {
            nrows,
            col_start,
            row_idx,
            values,
        };
        m.drop_zeros();
        m
    }

    fn drop_zeros(&mut self) {
        if self.values.iter().all(|&v| v != 0.0) {
            return;
        }
        let mut col_start = vec![0usize; self.ncols() + 1];
        let mut row_idx = Vec::with_capacity(self.nnz());
        let mut values = Vec::with_capacity(self.nnz());
        for j in 0..self.ncols() {
            for (i, v) in self.column(j) {
                if v != 0.0 {
                    row_idx.push(i);
                    values.push(v);
                }
            }
            col_start[j + 1] = values.len();
        }
        self.col_start = col_start;
        self.row_idx = row_idx;
        self.values = values;
    }
}

/// An assembled, immutable linear program.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearProgram {
    pub name: String,
    pub(crate) col_names: Vec<String>,
    pub(crate) col_lower: Vec<f64>,
    pub(crate) col_upper: Vec<f64>,
    pub(crate) objective: Vec<f64>,
    pub(crate) objective_offset: f64,
    pub(crate) row_names: Vec<String>,
    pub(crate) row_sense: Vec<RowSense>,
    pub(crate) rhs: Vec<f64>,
    pub(crate) matrix: CscMatrix,
}

impl LinearProgram {
    pub fn num_cols(&self) -> usize {
        self.col_names.len()
    }

    pub fn num_rows(&self) -> usize {
        self.row_names.len()
    }

    pub fn col_names(&self) -> &[String] {
        &self.col_names
    }

    pub fn row_names(&self) -> &[String] {
        &self.row_names
    }

    pub fn col_lower(&self) -> &[f64] {
        &self.col_lower
    }

    pub fn col_upper(&self) -> &[f64] {
        &self.col_upper
    }

    pub fn objective(&self) -> &[f64] {
        &self.objective
    }

    pub fn objective_offset(&self) -> f64 {
        self.objective_offset
    }

    pub fn row_sense(&self) -> &[RowSense] {
        &self.row_sense
    }

    pub fn rhs(&self) -> &[f64] {
        &self.rhs
    }

    pub fn matrix(&self) -> &CscMatrix {
        &self.matrix
    }

    /// `c'x + offset`
    pub fn objective_value(&self, x: &[f64]) -> f64 {
        self.objective_offset
            + self
                .objective
                .iter()
                .zip(x)
                .map(|(c, v)| c * v)
                .sum::<f64>()
    }

    /// Row activities `A x`.
    pub fn row_activity(&self, x: &[f64]) -> Vec<f64> {
        self.matrix.mul_vec(x)
    }

    pub fn col_by_name(&self, name: &str) -> Option<ColId> {
        self.col_names.iter().position(|n| n == name).map(ColId)
    }

    pub fn row_by_name(&self, name: &str) -> Option<RowId> {
        self.row_names.iter().position(|n| n == name).map(RowId)
    }

    /// Returns a copy with a different objective (same constraints).
    pub fn with_objective(&self, objective: Vec<f64>, offset: f64) -> Result<Self, LpError> {
        if objective.len() != self.num_cols() {
            return Err(LpError::Dimension {
                what: "objective",
                expected: self.num_cols(),
                got: objective.len(),
            });
        }
        let mut lp = self.clone();
        lp.objective = objective;
        lp.objective_offset = offset;
        Ok(lp)
    }

    /// Returns a copy with the bounds of column `col` replaced.
    pub fn with_col_bounds(&self, col: ColId, lower: f64, upper: f64) -> Result<Self, LpError> {
        check_bounds(&self.col_names[col.0], lower, upper)?;
        let mut lp = self.clone();
        lp.col_lower[col.0] = lower;
        lp.col_upper[col.0] = upper;
        Ok(lp)
    }

    /// Rebuilds this program into a builder so rows or columns can be appended.
    pub fn to_builder(&self) -> LpBuilder {
        let mut b = LpBuilder::new(self.name.clone());
        for j in 0..self.num_cols() {
            b.cols.push(ColSpec {
                name: self.col_names[j].clone(),
                lower: self.col_lower[j],
                upper: self.col_upper[j],
                cost: self.objective[j],
            });
            b.col_lookup.insert(self.col_names[j].clone(), j);
        }
        for i in 0..self.num_rows() {
            b.rows.push(RowSpec {
                name: self.row_names[i].clone(),
                sense: self.row_sense[i],
                rhs: self.rhs[i],
            });
            b.row_lookup.insert(self.row_names[i].clone(), i);
        }
        b.entries = self.matrix.triplets();
        b.objective_offset = self.objective_offset;
        b
    }

    pub(crate) fn from_parts(
        name: String,
        cols: Vec<ColSpec>,
        rows: Vec<RowSpec>,
        entries: Vec<(usize, usize, f64)>,
        objective_offset: f64,
    ) -> Self {
        let matrix = CscMatrix::from_triplets(rows.len(), cols.len(), entries);
        let (col_names, col_lower, col_upper, objective) = cols.into_iter().fold(
            (Vec::new(), Vec::new(), Vec::new(), Vec::new()),
            |mut acc, c| {
                acc.0.push(c.name);
                acc.1.push(c.lower);
                acc.2.push(c.upper);
                acc.3.push(c.cost);
                acc
            },
        );
        let (row_names, row_sense, rhs) =
            rows.into_iter()
                .fold((Vec::new(), Vec::new(), Vec::new()), |mut acc, r| {
                    acc.0.push(r.name);
                    acc.1.push(r.sense);
                    acc.2.push(r.rhs);
                    acc
                });
        LinearProgram {
            name,
            col_names,
            col_lower,
            col_upper,
            objective,
            objective_offset,
            row_names,
            row_sense,
            rhs,
            matrix,
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) struct ColSpec {
    pub name: String,
    pub lower: f64,
    pub upper: f64,
    pub cost: f64,
}

#[derive(Clone, Debug)]
pub(crate) struct RowSpec {
    pub name: String,
    pub sense: RowSense,
    pub rhs: f64,
}

fn check_bounds(name: &str, lower: f64, upper: f64) -> Result<(), LpError> {
    if lower.is_nan() || upper.is_nan() || lower > upper || lower == f64::INFINITY || upper == f64::NEG_INFINITY
    {
        return Err(LpError::InvalidBounds {
            name: name.to_string(),
            lower,
            upper,
        });
    }
    Ok(())
}

/// Incremental LP assembly with unique names.
#[derive(Clone, Debug, Default)]
pub struct LpBuilder {
    name: String,
    cols: Vec<ColSpec>,
    rows: Vec<RowSpec>,
    entries: Vec<(usize, usize, f64)>,
    col_lookup: HashMap<String, usize>,
    row_lookup: HashMap<String, usize>,
    objective_offset: f64,
}

impl LpBuilder {
    pub fn new(name: impl Into<String>) -> Self {
        LpBuilder {
            name: name.into(),
            ..Default::default()
        }
    }

    pub fn num_cols(&self) -> usize {
        self.cols.len()
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn add_col(
        &mut self,
        name: impl Into<String>,
        lower: f64,
        upper: f64,
        cost: f64,
    ) -> Result<ColId, LpError> {
        let name = name.into();
        check_bounds(&name, lower, upper)?;
        if !cost.is_finite() {
            return Err(LpError::NonFinite { what: format!("cost of {name}") });
        }
        if self.col_lookup.contains_key(&name) {
            return Err(LpError::DuplicateName(name));
        }
        let id = self.cols.len();
        self.col_lookup.insert(name.clone(), id);
        self.cols.push(ColSpec {
            name,
            lower,
            upper,
            cost,
        });
        Ok(ColId(id))
    }

    pub fn add_row(
        &mut self,
        name: impl Into<String>,
        sense: RowSense,
        rhs: f64,
        coeffs: &[(ColId, f64)],
    ) -> Result<RowId, LpError> {
        let name = name.into();
        if !rhs.is_finite() {
            return Err(LpError::NonFinite { what: format!("rhs of {name}") });
        }
        if self.row_lookup.contains_key(&name) {
            return Err(LpError::DuplicateName(name));
        }
        let id = self.rows.len();
        for &(c, v) in coeffs {
            if c.0 >= self.cols.len() {
                return Err(LpError::UnknownColumn(c.0));
            }
            if !v.is_finite() {
                return Err(LpError::NonFinite { what: format!("coefficient in {name}") });
            }
            self.entries.push((id, c.0, v));
        }
        self.row_lookup.insert(name.clone(), id);
        self.rows.push(RowSpec { name, sense, rhs });
        Ok(RowId(id))
    }

    pub fn set_cost(&mut self, col: ColId, cost: f64) {
        self.cols[col.0].cost = cost;
    }

    pub fn set_col_bounds(&mut self, col: ColId, lower: f64, upper: f64) -> Result<(), LpError> {
        check_bounds(&self.cols[col.0].name, lower, upper)?;
        self.cols[col.0].lower = lower;
        self.cols[col.0].upper = upper;
        Ok(())
    }

    pub fn add_objective_offset(&mut self, delta: f64) {
        self.objective_offset += delta;
    }

    pub fn col(&self, name: &str) -> Option<ColId> {
        self.col_lookup.get(name).copied().map(ColId)
    }

    pub fn build(self) -> LinearProgram {
        LinearProgram::from_parts(
            self.name,
            self.cols,
            self.rows,
            self.entries,
            self.objective_offset,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn duplicate_entries_are_merged() {
        let mut b = LpBuilder::new("t");
        let x = b.add_col("x", 0.0, 1.0, 1.0).unwrap();
        let y = b.add_col("y", 0.0, 1.0, 1.0).unwrap();
        b.add_row("r", RowSense::Le, 3.0, &[(x, 1.0), (y, 2.0), (x, 0.5)])
            .unwrap();
        let lp = b.build();
        assert_eq!(lp.matrix().triplets(), vec![(0, 0, 1.5), (0, 1, 2.0)]);
    }

    #[test]
    fn cancelling_entries_are_dropped() {
        let mut b = LpBuilder::new("t");
        let x = b.add_col("x", 0.0, 1.0, 0.0).unwrap();
        b.add_row("r", RowSense::Eq, 0.0, &[(x, 1.0), (x, -1.0)]).unwrap();
        assert_eq!(b.build().matrix().nnz(), 0);
    }

    #[test]
    fn rejects_bad_input() {
        let mut b = LpBuilder::new("t");
        assert!(b.add_col("x", 1.0, 0.0, 0.0).is_err());
        b.add_col("x", 0.0, 1.0, 0.0).unwrap();
        assert!(matches!(
            b.add_col("x", 0.0, 1.0, 0.0),
            Err(LpError::DuplicateName(_))
        ));
        assert!(b.add_row("r", RowSense::Le, 1.0, &[(ColId(7), 1.0)]).is_err());
        assert!(b.add_row("r", RowSense::Le, f64::NAN, &[]).is_err());
    }

    #[test]
    fn products() {
        let mut b = LpBuilder::new("t");
        let x = b.add_col("x", 0.0, 1.0, 0.0).unwrap();
        let y = b.add_col("y", 0.0, 1.0, 0.0).unwrap();
        b.add_row("a", RowSense::Le, 0.0, &[(x, 1.0), (y, 2.0)]).unwrap();
        b.add_row("b", RowSense::Le, 0.0, &[(y, -1.0)]).unwrap();
        let lp = b.build();
        assert_eq!(lp.row_activity(&[1.0, 1.0]), vec![3.0, -1.0]);
        assert_eq!(lp.matrix().tr_mul_vec(&[1.0, 1.0]), vec![1.0, 1.0]);
    }
}
