//! Floating-point cross-checks: Floquet matrices at a point, eigenvalues,
//! monodromy of the eigenvalue sheets, band structures and Fermi slices.

mod bands;
mod linalg;
mod monodromy;
mod roots;
mod union_find;

use num_complex::Complex64;

use crate::cyclo::unit_root;
use crate::error::{Error, Result};
use crate::floquet::{build_b_numeric, build_cell};
use crate::laurent::LaurentPoly;
use crate::model::OperatorModel;

pub use bands::{band_path, fermi_slice, BandTable, FermiPoint, FermiSlice, DEFAULT_FERMI_TOL};
pub use linalg::{eigenvalues, hessenberg, sort_spectrum, CMatrix};
pub use monodromy::{
    monodromy_run, monodromy_run_with, retrack_loop, Diagnostics, LoopRecord, MonodromyConfig,
    MonodromyReport, MonodromyVerdict,
};
pub use roots::{match_points, min_cost_assignment, polynomial_roots};
pub use union_find::UnionFind;

/// Numeric `D^z + B` for one model, with the symbol and `B` precomputed.
#[derive(Clone, Debug)]
pub struct NumericFloquet {
    q: Vec<u32>,
    symbol: LaurentPoly<Complex64>,
    mu: Vec<Vec<Complex64>>,
    b: CMatrix,
}

impl NumericFloquet {
    pub fn new(model: &OperatorModel) -> Result<Self> {
        let symbol = model.symbol_complex()?;
        let order = model.working_order();
        let (_, mu_exp) = build_cell(model.q());
        let mu = mu_exp
            .iter()
            .map(|row| row.iter().map(|&e| unit_root(e, order)).collect())
            .collect();
        Ok(NumericFloquet {
            q: model.q().to_vec(),
            symbol,
            mu,
            b: CMatrix::from_rows(&build_b_numeric(model)),
        })
    }

    pub fn q(&self) -> &[u32] {
        &self.q
    }

    pub fn cells(&self) -> usize {
        self.mu.len()
    }

    pub fn b(&self) -> &CMatrix {
        &self.b
    }

    pub fn diagonal_at(&self, z: &[Complex64]) -> Result<Vec<Complex64>> {
        if z.len() != self.q.len() {
            return Err(Error::PointDimension {
                expected: self.q.len(),
                got: z.len(),
            });
        }
        if let Some(var) = z.iter().position(|v| v.norm() == 0.0) {
            return Err(Error::PoleAtZero { var });
        }
        self.mu
            .iter()
            .map(|mu| {
                let point: Vec<Complex64> = mu.iter().zip(z).map(|(m, v)| m * v).collect();
                self.symbol.eval(&point)
            })
            .collect()
    }

    pub fn matrix_at(&self, z: &[Complex64]) -> Result<CMatrix> {
        let diag = self.diagonal_at(z)?;
        let mut m = self.b.clone();
        for (i, d) in diag.into_iter().enumerate() {
            m[(i, i)] += d;
        }
        Ok(m)
    }

    pub fn spectrum_at(&self, z: &[Complex64]) -> Result<Vec<Complex64>> {
        let mut e = eigenvalues(&self.matrix_at(z)?)?;
        sort_spectrum(&mut e);
        Ok(e)
    }
}

/// `D^z + B` at `z`.
pub fn floquet_matrix_at(model: &OperatorModel, z: &[Complex64]) -> Result<CMatrix> {
    NumericFloquet::new(model)?.matrix_at(z)
}
