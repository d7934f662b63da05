//! Geometric-mean equilibration with power-of-two factors.
//!
//! Scaled program: `A' = R A C`, `x = C x'`, `y = R y'`. Factors are powers
//! of two, so scaling and unscaling introduce no rounding.

use crate::program::{CscMatrix, LinearProgram};

const PASSES: usize = 6;

#[derive(Clone, Debug)]
pub struct Scaling {
    pub row: Vec<f64>,
    pub col: Vec<f64>,
}

fn pow2(v: f64) -> f64 {
    if !v.is_finite() || v <= 0.0 {
        return 1.0;
    }
    2f64.powi(v.log2().round() as i32)
}

impl Scaling {
    pub fn identity(lp: &LinearProgram) -> Self {
        Scaling {
            row: vec![1.0; lp.num_rows()],
            col: vec![1.0; lp.num_cols()],
        }
    }

    pub fn equilibrate(lp: &LinearProgram) -> Self {
        let a = lp.matrix();
        let (m, n) = (lp.num_rows(), lp.num_cols());
        let mut row = vec![1.0; m];
        let mut col = vec![1.0; n];
        for _ in 0..PASSES {
            let mut rmin = vec![f64::INFINITY; m];
            let mut rmax = vec![0.0f64; m];
            for j in 0..n {
                for (i, v) in a.column(j) {
                    let s = (v * col[j]).abs();
                    rmin[i] = rmin[i].min(s);
                    rmax[i] = rmax[i].max(s);
                }
            }
            for i in 0..m {
                if rmax[i] > 0.0 {
                    row[i] = 1.0 / (rmin[i] * rmax[i]).sqrt();
                }
            }
            for j in 0..n {
                let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
                for (i, v) in a.column(j) {
                    let s = (v * row[i]).abs();
                    lo = lo.min(s);
                    hi = hi.max(s);
                }
                if hi > 0.0 {
                    col[j] = 1.0 / (lo * hi).sqrt();
                }
            }
        }
        Scaling {
            row: row.into_iter().map(pow2).collect(),
            col: col.into_iter().map(pow2).collect(),
        }
    }

    pub fn apply(&self, lp: &LinearProgram) -> LinearProgram {
        let mut out = lp.clone();
        let a: &CscMatrix = lp.matrix();
        let mut values = a.values.clone();
        for j in 0..a.ncols() {
            for k in a.col_start[j]..a.col_start[j + 1] {
                values[k] *= self.row[a.row_idx[k]] * self.col[j];
            }
        }
        out.matrix.values = values;
        for j in 0..lp.num_cols() {
            out.col_lower[j] = lp.col_lower[j] / self.col[j];
            out.col_upper[j] = lp.col_upper[j] / self.col[j];
            out.objective[j] = lp.objective[j] * self.col[j];
        }
        for i in 0..lp.num_rows() {
            out.rhs[i] = lp.rhs[i] * self.row[i];
        }
        out
    }

    pub fn unscale_primal(&self, x: &[f64]) -> Vec<f64> {
        x.iter().zip(&self.col).map(|(v, c)| v * c).collect()
    }

    pub fn unscale_duals(&self, y: &[f64]) -> Vec<f64> {
        y.iter().zip(&self.row).map(|(v, r)| v * r).collect()
    }
}
