//! Floquet reduction: the cell `W`, the character table `mu`, the diagonal
//! `D(z)`, the potential matrix `B`, the characteristic polynomial
//! `det(D(z) + B - lambda I)` and its lift to `w_j = z_j^q_j`.

use num_complex::Complex64;
use num_rational::BigRational;

use crate::cyclo::{unit_root, CycloNumber};
use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::model::{fundamental_cell, working_order, OperatorModel};

pub type ExactPoly = LaurentPoly<CycloNumber>;

/// Default ceiling on `Q` for the symbolic determinant.
pub const DEFAULT_BUDGET: usize = 12;

/// `W` in row-major order and, for each `n` in `W`, the exponents `e_j` with
/// `mu_n^j = zeta_L^(e_j)`, `L = lcm(4, q)`.
pub fn build_cell(q: &[u32]) -> (Vec<Vec<i64>>, Vec<Vec<i64>>) {
    let order = working_order(q);
    let cell = fundamental_cell(q);
    let mu = cell
        .iter()
        .map(|n| {
            n.iter()
                .zip(q)
                .map(|(&nj, &qj)| (nj * (order / qj as i64)).rem_euclid(order))
                .collect()
        })
        .collect();
    (cell, mu)
}

/// Row-major index of `n mod q` in `W`.
pub fn cell_index(n: &[i64], q: &[u32]) -> usize {
    n.iter().zip(q).fold(0usize, |acc, (&nj, &qj)| {
        acc * qj as usize + nj.rem_euclid(qj as i64) as usize
    })
}

/// Normalised transform `Vhat(m) = (1/Q) sum_l V_l zeta^(-sum_j l_j m_j L/q_j)`
/// for every `m` in `W` (exact).
fn potential_transform(model: &OperatorModel, order: i64) -> Result<Vec<CycloNumber>> {
    let q = model.q();
    let cell = fundamental_cell(q);
    let inv_q = BigRational::new(1.into(), (model.cells() as i64).into());
    let values = model
        .potential()
        .iter()
        .map(|v| v.to_cyclo(order))
        .collect::<Result<Vec<_>>>()?;
    cell.iter()
        .map(|m| {
            let mut acc = CycloNumber::zero(order)?;
            for (l, v) in cell.iter().zip(&values) {
                if v.is_zero() {
                    continue;
                }
                let e: i64 = (0..q.len()).map(|j| l[j] * m[j] * (order / q[j] as i64)).sum();
                acc = acc.checked_add(&v.checked_mul(&CycloNumber::root(-e, order)?)?)?;
            }
            Ok(acc.scale(&inv_q))
        })
        .collect()
}

/// `B(n, n') = Vhat(n - n')`, exact.
pub fn build_b(model: &OperatorModel) -> Result<Vec<Vec<CycloNumber>>> {
    let order = model.working_order();
    let vhat = potential_transform(model, order)?;
    let q = model.q();
    let cell = fundamental_cell(q);
    Ok(cell
        .iter()
        .map(|n| {
            cell.iter()
                .map(|np| {
                    let diff: Vec<i64> = n.iter().zip(np).map(|(a, b)| a - b).collect();
                    vhat[cell_index(&diff, q)].clone()
                })
                .collect()
        })
        .collect())
}

/// Floating-point `B`, built the same way without exact arithmetic.
pub fn build_b_numeric(model: &OperatorModel) -> Vec<Vec<Complex64>> {
    let q = model.q();
    let cell = fundamental_cell(q);
    let big_q = model.cells() as f64;
    let values: Vec<Complex64> = model.potential().iter().map(|v| v.to_complex()).collect();
    let order = working_order(q);
    let vhat: Vec<Complex64> = cell
        .iter()
        .map(|m| {
            cell.iter()
                .zip(&values)
                .map(|(l, v)| {
                    let e: i64 = (0..q.len()).map(|j| l[j] * m[j] * (order / q[j] as i64)).sum();
                    v * unit_root(-e, order)
                })
                .sum::<Complex64>()
                / big_q
        })
        .collect();
    cell.iter()
        .map(|n| {
            cell.iter()
                .map(|np| {
                    let diff: Vec<i64> = n.iter().zip(np).map(|(a, b)| a - b).collect();
                    vhat[cell_index(&diff, q)]
                })
                .collect()
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct FloquetSystem {
    q: Vec<u32>,
    order: i64,
    cell: Vec<Vec<i64>>,
    mu: Vec<Vec<i64>>,
    symbol: ExactPoly,
    diagonal: Vec<ExactPoly>,
    b: Vec<Vec<CycloNumber>>,
    budget: usize,
    ptilde: Option<ExactPoly>,
    lifted: Option<ExactPoly>,
}

impl FloquetSystem {
    pub fn new(model: &OperatorModel) -> Result<Self> {
        let q = model.q().to_vec();
        let (cell, mu) = build_cell(&q);
        let symbol = model.symbol()?;
        let diagonal = cell
            .iter()
            .map(|n| symbol.twist(n, &q))
            .collect::<Result<Vec<_>>>()?;
        Ok(FloquetSystem {
            order: model.working_order(),
            b: build_b(model)?,
            q,
            cell,
            mu,
            symbol,
            diagonal,
            budget: DEFAULT_BUDGET,
            ptilde: None,
            lifted: None,
        })
    }

    pub fn with_budget(mut self, budget: usize) -> Self {
        self.budget = budget;
        self
    }

    pub fn q(&self) -> &[u32] {
        &self.q
    }

    pub fn cells(&self) -> usize {
        self.cell.len()
    }

    pub fn order(&self) -> i64 {
        self.order
    }

    pub fn cell(&self) -> &[Vec<i64>] {
        &self.cell
    }

    /// `mu[n][j]`: exponent of `zeta_L` giving `mu_n^j`.
    pub fn mu(&self) -> &[Vec<i64>] {
        &self.mu
    }

    pub fn symbol(&self) -> &ExactPoly {
        &self.symbol
    }

    /// `D[n] = p(mu_n . z)`.
    pub fn diagonal(&self) -> &[ExactPoly] {
        &self.diagonal
    }

    pub fn b(&self) -> &[Vec<CycloNumber>] {
        &self.b
    }

    pub fn ptilde(&self) -> Option<&ExactPoly> {
        self.ptilde.as_ref()
    }

    pub fn lifted(&self) -> Option<&ExactPoly> {
        self.lifted.as_ref()
    }

    /// Exact `det(D(z) + B - lambda I)` as a Laurent polynomial in `(z, lambda)`.
    ///
    /// Column-by-column Laplace expansion memoised over the set of rows
    /// already used (`Q 2^Q` steps instead of `Q!`).
    pub fn char_poly(&mut self) -> Result<&ExactPoly> {
        if self.ptilde.is_none() {
            let p = self.expand_determinant()?;
            self.verify_char_poly(&p)?;
            self.ptilde = Some(p);
        }
        Ok(self.ptilde.as_ref().unwrap())
    }

    fn expand_determinant(&self) -> Result<ExactPoly> {
        let n = self.cells();
        if n > self.budget {
            return Err(Error::BudgetExceeded {
                cells: n,
                budget: self.budget,
            });
        }
        let nvars = self.q.len() + 1;
        let one = CycloNumber::one(self.order)?;
        let mut lambda_exp = vec![0i64; nvars];
        lambda_exp[nvars - 1] = 1;
        let lambda = ExactPoly::from_terms(nvars, true, [(lambda_exp, one.clone())])?;

        // entry(row, col) of D + B - lambda I
        let diag: Vec<ExactPoly> = (0..n)
            .map(|r| {
                self.diagonal[r]
                    .with_lambda()
                    .add(&ExactPoly::constant(nvars, true, self.b[r][r].clone()))?
                    .sub(&lambda)
            })
            .collect::<Result<_>>()?;

        let mut dp: Vec<Option<ExactPoly>> = vec![None; 1 << n];
        dp[0] = Some(ExactPoly::constant(nvars, true, one));
        for mask in 0..(1usize << n) {
            let Some(partial) = dp[mask].take() else {
                continue;
            };
            if mask == (1 << n) - 1 {
                return Ok(partial);
            }
            let col = mask.count_ones() as usize;
            for row in 0..n {
                if mask & (1 << row) != 0 {
                    continue;
                }
                let term = if row == col {
                    partial.mul(&diag[row])?
                } else if self.b[row][col].is_zero() {
                    continue;
                } else {
                    partial.scale(&self.b[row][col])?
                };
                let above = (mask >> (row + 1)).count_ones();
                let term = if above % 2 == 1 { term.neg() } else { term };
                let next = mask | (1 << row);
                dp[next] = Some(match dp[next].take() {
                    Some(acc) => acc.add(&term)?,
                    None => term,
                });
            }
        }
        Ok(dp[(1 << n) - 1]
            .take()
            .unwrap_or_else(|| ExactPoly::zero(nvars, true)))
    }

    fn verify_char_poly(&self, p: &ExactPoly) -> Result<()> {
        let n = self.cells() as i64;
        if !p.is_signed_monic_in_lambda(n) {
            return Err(Error::Internal(format!(
                "characteristic polynomial is not (-1)^{n} lambda^{n} + lower terms"
            )));
        }
        if let Some((exponent, index)) = p.lattice_violation(&self.q) {
            return Err(Error::Internal(format!(
                "characteristic polynomial exponent {exponent:?} violates q_{}",
                index + 1
            )));
        }
        Ok(())
    }

    /// `P(w, lambda)` with `P(z_1^q_1, ..., z_d^q_d, lambda) = Ptilde(z, lambda)`.
    pub fn lift_char(&mut self) -> Result<&ExactPoly> {
        if self.lifted.is_none() {
            let q = self.q.clone();
            let lifted = self.char_poly()?.lift(&q).map_err(|e| match e {
                Error::SupportNotInLattice { exponent, index } => Error::Internal(format!(
                    "characteristic polynomial exponent {exponent:?} violates q_{}",
                    index + 1
                )),
                other => other,
            })?;
            self.lifted = Some(lifted);
        }
        Ok(self.lifted.as_ref().unwrap())
    }

    /// `b_k(z)`: the coefficient of `lambda^k` in the characteristic polynomial.
    pub fn lambda_coefficients(&mut self) -> Result<Vec<ExactPoly>> {
        let n = self.cells() as i64;
        let p = self.char_poly()?;
        Ok((0..=n).map(|k| p.lambda_coefficient(k)).collect())
    }
}
