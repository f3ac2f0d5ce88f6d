//! Band structures along piecewise-linear k-paths and Fermi slices on a grid.

use std::collections::BTreeSet;
use std::f64::consts::TAU;
use std::fmt::Write as _;

use num_complex::Complex64;

use super::{sort_spectrum, NumericFloquet};
use crate::error::{Error, Result};
use crate::model::OperatorModel;

pub const DEFAULT_FERMI_TOL: f64 = 1e-6;

/// `z_j = e^{2 pi i k_j / q_j}`, so that `w = z^q = e^{2 pi i k}`.
fn z_of_k(k: &[f64], q: &[u32]) -> Vec<Complex64> {
    k.iter()
        .zip(q)
        .map(|(kj, &qj)| Complex64::from_polar(1.0, TAU * kj / qj as f64))
        .collect()
}

fn spectrum_at_k(nf: &NumericFloquet, k: &[f64], hermitian: bool) -> Result<Vec<Complex64>> {
    let mut e = nf.spectrum_at(&z_of_k(k, nf.q()))?;
    if hermitian {
        for v in &mut e {
            v.im = 0.0;
        }
        sort_spectrum(&mut e);
    }
    Ok(e)
}

#[derive(Clone, Debug, PartialEq)]
pub struct BandRow {
    pub t: f64,
    pub k: Vec<f64>,
    pub eigenvalues: Vec<Complex64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BandTable {
    pub d: usize,
    /// True when the model is self-adjoint and values are reported as real.
    pub real: bool,
    pub rows: Vec<BandRow>,
}

/// Shortest round-trip form; `-0` is written as `0`.
fn fmt_f64(x: f64) -> String {
    if x == 0.0 {
        "0".to_string()
    } else {
        format!("{x:?}")
    }
}

impl BandTable {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t");
        for j in 1..=self.d {
            write!(out, ",k{j}").unwrap();
        }
        let bands = self.rows.first().map_or(0, |r| r.eigenvalues.len());
        for i in 1..=bands {
            write!(out, ",re_lam_{i},im_lam_{i}").unwrap();
        }
        out.push('\n');
        for row in &self.rows {
            out.push_str(&fmt_f64(row.t));
            for k in &row.k {
                write!(out, ",{}", fmt_f64(*k)).unwrap();
            }
            for v in &row.eigenvalues {
                write!(out, ",{},{}", fmt_f64(v.re), fmt_f64(v.im)).unwrap();
            }
            out.push('\n');
        }
        out
    }
}

/// Samples the piecewise-linear path through `nodes` at `samples` points
/// (including both ends) spaced uniformly in arc length.
pub fn band_path(model: &OperatorModel, nodes: &[Vec<f64>], samples: usize) -> Result<BandTable> {
    let d = model.d();
    if nodes.len() < 2 {
        return Err(Error::InvalidModel("a k-path needs at least two nodes".into()));
    }
    if samples < 2 {
        return Err(Error::InvalidModel("a k-path needs at least two samples".into()));
    }
    if let Some(bad) = nodes.iter().find(|n| n.len() != d) {
        return Err(Error::PointDimension {
            expected: d,
            got: bad.len(),
        });
    }
    let nf = NumericFloquet::new(model)?;
    let hermitian = model.is_self_adjoint();
    let lengths: Vec<f64> = nodes
        .windows(2)
        .map(|w| {
            w[0].iter()
                .zip(&w[1])
                .map(|(a, b)| (b - a) * (b - a))
                .sum::<f64>()
                .sqrt()
        })
        .collect();
    let total: f64 = lengths.iter().sum();
    let mut rows = Vec::with_capacity(samples);
    for s in 0..samples {
        let t = s as f64 / (samples - 1) as f64;
        let k = point_on_path(nodes, &lengths, total, t);
        let eigenvalues = spectrum_at_k(&nf, &k, hermitian)?;
        rows.push(BandRow { t, k, eigenvalues });
    }
    Ok(BandTable {
        d,
        real: hermitian,
        rows,
    })
}

fn point_on_path(nodes: &[Vec<f64>], lengths: &[f64], total: f64, t: f64) -> Vec<f64> {
    if t >= 1.0 {
        return nodes.last().unwrap().clone();
    }
    if total == 0.0 {
        return nodes[0].clone();
    }
    let mut remaining = t * total;
    for (i, &len) in lengths.iter().enumerate() {
        if remaining <= len && len > 0.0 {
            let s = remaining / len;
            return nodes[i]
                .iter()
                .zip(&nodes[i + 1])
                .map(|(a, b)| a + s * (b - a))
                .collect();
        }
        remaining -= len;
    }
    nodes.last().unwrap().clone()
}

#[derive(Clone, Debug, PartialEq)]
pub struct FermiPoint {
    pub k: Vec<f64>,
    /// Eigenvalue closest to the target level at `k`.
    pub eigenvalue: Complex64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FermiSlice {
    pub d: usize,
    pub lambda: Complex64,
    pub points: Vec<FermiPoint>,
}

impl FermiSlice {
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for j in 1..=self.d {
            write!(out, "k{j},").unwrap();
        }
        out.push_str("re_lam_1,im_lam_1\n");
        for p in &self.points {
            for k in &p.k {
                write!(out, "{},", fmt_f64(*k)).unwrap();
            }
            writeln!(out, "{},{}", fmt_f64(p.eigenvalue.re), fmt_f64(p.eigenvalue.im)).unwrap();
        }
        out
    }
}

fn closest(values: &[Complex64], lambda: Complex64) -> (Complex64, f64) {
    values
        .iter()
        .map(|v| (*v, (v - lambda).norm()))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("nonempty spectrum")
}

/// Real `k` in `[0,1)^d` where some eigenvalue is within `tol` of `lambda`:
/// grid points that already qualify, plus roots of `Re(lambda_i - lambda)`
/// located by bisection along grid edges (bands ranked by real part).
pub fn fermi_slice(model: &OperatorModel, lambda: Complex64, grid: usize, tol: f64) -> Result<FermiSlice> {
    if grid < 2 {
        return Err(Error::InvalidModel("grid must be at least 2".into()));
    }
    let d = model.d();
    let nf = NumericFloquet::new(model)?;
    let hermitian = model.is_self_adjoint();
    let total = grid.pow(d as u32);
    let index_to_k = |mut idx: usize| -> Vec<f64> {
        let mut k = vec![0.0; d];
        for j in (0..d).rev() {
            k[j] = (idx % grid) as f64 / grid as f64;
            idx /= grid;
        }
        k
    };
    let spectra: Vec<Vec<Complex64>> = (0..total)
        .map(|i| {
            let mut e = spectrum_at_k(&nf, &index_to_k(i), hermitian)?;
            sort_spectrum(&mut e);
            Ok(e)
        })
        .collect::<Result<_>>()?;

    let mut found: BTreeSet<Vec<i64>> = BTreeSet::new();
    let mut points = Vec::new();
    let mut push = |k: Vec<f64>, eig: Complex64, points: &mut Vec<FermiPoint>| {
        let k: Vec<f64> = k.into_iter().map(|x| x.rem_euclid(1.0)).collect();
        let key: Vec<i64> = k.iter().map(|x| (x * 1e9).round() as i64).collect();
        if found.insert(key) {
            points.push(FermiPoint { k, eigenvalue: eig });
        }
    };
    let rank_value = |k: &[f64], band: usize| -> Result<f64> {
        let mut e = spectrum_at_k(&nf, k, hermitian)?;
        sort_spectrum(&mut e);
        Ok(e[band].re - lambda.re)
    };

    for i in 0..total {
        let ka = index_to_k(i);
        let (eig, dist) = closest(&spectra[i], lambda);
        if dist < tol {
            push(ka.clone(), eig, &mut points);
        }
        for j in 0..d {
            let stride = grid.pow((d - 1 - j) as u32);
            let coord = (i / stride) % grid;
            let neighbour = if coord + 1 == grid {
                i - coord * stride
            } else {
                i + stride
            };
            let mut kb = ka.clone();
            kb[j] += 1.0 / grid as f64;
            for band in 0..spectra[i].len() {
                let fa = spectra[i][band].re - lambda.re;
                let fb = spectra[neighbour][band].re - lambda.re;
                if !(fa * fb < 0.0) {
                    continue;
                }
                let (mut lo, mut hi, mut flo) = (0.0f64, 1.0f64, fa);
                for _ in 0..60 {
                    let mid = 0.5 * (lo + hi);
                    let km: Vec<f64> = ka.iter().zip(&kb).map(|(a, b)| a + mid * (b - a)).collect();
                    let fm = rank_value(&km, band)?;
                    if fm == 0.0 {
                        lo = mid;
                        hi = mid;
                        break;
                    }
                    if (fm < 0.0) == (flo < 0.0) {
                        lo = mid;
                        flo = fm;
                    } else {
                        hi = mid;
                    }
                }
                let s = 0.5 * (lo + hi);
                let ks: Vec<f64> = ka.iter().zip(&kb).map(|(a, b)| a + s * (b - a)).collect();
                let e = spectrum_at_k(&nf, &ks, hermitian)?;
                let (eig, dist) = closest(&e, lambda);
                if dist < tol {
                    push(ks, eig, &mut points);
                }
            }
        }
    }
    points.sort_by(|a, b| {
        a.k.iter()
            .zip(&b.k)
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    Ok(FermiSlice { d, lambda, points })
}
