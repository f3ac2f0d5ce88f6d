//! Sparse multivariate Laurent polynomials.
//!
//! One type serves the symbol `p(z)`, its lowest-degree component, the
//! characteristic polynomial in `(z, lambda)` and its lift in `(w, lambda)`:
//! `lambda`, when present, is the last variable and is flagged so that the
//! lattice operations leave its exponent alone.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use num_traits::Signed;
use serde_json::{json, Value};

use crate::cyclo::{format_rational, CycloNumber};
use crate::error::{Error, Result};

/// Coefficient domain of a [`LaurentPoly`].
pub trait Coefficient: Clone + PartialEq + fmt::Debug + fmt::Display {
    fn is_zero(&self) -> bool;
    fn is_one(&self) -> bool;
    fn try_add(&self, other: &Self) -> Result<Self>;
    fn try_mul(&self, other: &Self) -> Result<Self>;
    fn neg(&self) -> Self;
    fn to_complex(&self) -> Complex64;
    /// `Some(-self)` when `self` is a negative real number, for pretty printing.
    fn negated_if_negative(&self) -> Option<Self>;
    /// Whether `Display` output can be written without parentheses.
    fn is_atomic(&self) -> bool;
    fn to_json(&self) -> Value;
}

impl Coefficient for CycloNumber {
    fn is_zero(&self) -> bool {
        CycloNumber::is_zero(self)
    }
    fn is_one(&self) -> bool {
        CycloNumber::is_one(self)
    }
    fn try_add(&self, other: &Self) -> Result<Self> {
        self.checked_add(other)
    }
    fn try_mul(&self, other: &Self) -> Result<Self> {
        self.checked_mul(other)
    }
    fn neg(&self) -> Self {
        CycloNumber::neg(self)
    }
    fn to_complex(&self) -> Complex64 {
        CycloNumber::to_complex(self)
    }
    fn negated_if_negative(&self) -> Option<Self> {
        match self.as_rational() {
            Some(r) if r.is_negative() => Some(CycloNumber::neg(self)),
            _ => None,
        }
    }
    fn is_atomic(&self) -> bool {
        self.as_rational().is_some()
    }
    fn to_json(&self) -> Value {
        let basis: Vec<Value> = self
            .terms()
            .map(|(k, c)| json!([k, format_rational(c)]))
            .collect();
        json!({ "order": self.order(), "basis": basis })
    }
}

impl Coefficient for Complex64 {
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn is_one(&self) -> bool {
        self.re == 1.0 && self.im == 0.0
    }
    fn try_add(&self, other: &Self) -> Result<Self> {
        Ok(self + other)
    }
    fn try_mul(&self, other: &Self) -> Result<Self> {
        Ok(self * other)
    }
    fn neg(&self) -> Self {
        -self
    }
    fn to_complex(&self) -> Complex64 {
        *self
    }
    fn negated_if_negative(&self) -> Option<Self> {
        (self.im == 0.0 && self.re < 0.0).then(|| -self)
    }
    fn is_atomic(&self) -> bool {
        self.im == 0.0
    }
    fn to_json(&self) -> Value {
        json!({ "re": self.re, "im": self.im })
    }
}

/// Exponent multi-index, packed as signed 16-bit entries.
///
/// Ordered graded-lexicographically: higher total degree first, ties broken
/// by ascending lexicographic order of the exponent vector.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(Vec<i16>);

impl Monomial {
    pub fn new(exps: &[i64]) -> Result<Self> {
        exps.iter()
            .enumerate()
            .map(|(var, &e)| i16::try_from(e).map_err(|_| Error::ExponentOverflow { var }))
            .collect::<Result<Vec<_>>>()
            .map(Monomial)
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn exponents(&self) -> &[i16] {
        &self.0
    }

    pub fn to_vec(&self) -> Vec<i64> {
        self.0.iter().map(|&e| e as i64).collect()
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().map(|&e| e as i64).sum()
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.0
            .iter()
            .zip(&other.0)
            .enumerate()
            .map(|(var, (a, b))| a.checked_add(*b).ok_or(Error::ExponentOverflow { var }))
            .collect::<Result<Vec<_>>>()
            .map(Monomial)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .degree()
            .cmp(&self.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Display names `z` / `z1..zd`, optionally followed by `lam`.
pub fn variable_names(spatial: usize, prefix: &str, lambda: bool) -> Vec<String> {
    let mut names: Vec<String> = if spatial == 1 {
        vec![prefix.to_string()]
    } else {
        (1..=spatial).map(|j| format!("{prefix}{j}")).collect()
    };
    if lambda {
        names.push("lam".to_string());
    }
    names
}

#[derive(Clone, PartialEq)]
pub struct LaurentPoly<C> {
    nvars: usize,
    lambda: bool,
    terms: BTreeMap<Monomial, C>,
}

impl<C: Coefficient> LaurentPoly<C> {
    pub fn zero(nvars: usize, lambda: bool) -> Self {
        debug_assert!(!lambda || nvars >= 1);
        LaurentPoly {
            nvars,
            lambda,
            terms: BTreeMap::new(),
        }
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs; repeated
    /// exponents are summed and zero results dropped.
    pub fn from_terms<I>(nvars: usize, lambda: bool, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<i64>, C)>,
    {
        let mut out = Self::zero(nvars, lambda);
        for (exps, c) in terms {
            if exps.len() != nvars {
                return Err(Error::ArityMismatch {
                    left: nvars,
                    right: exps.len(),
                });
            }
            out.add_term(Monomial::new(&exps)?, c)?;
        }
        Ok(out)
    }

    pub fn constant(nvars: usize, lambda: bool, c: C) -> Self {
        let mut out = Self::zero(nvars, lambda);
        if !c.is_zero() {
            out.terms.insert(Monomial::one(nvars), c);
        }
        out
    }

    fn add_term(&mut self, m: Monomial, c: C) -> Result<()> {
        if c.is_zero() {
            return Ok(());
        }
        match self.terms.remove(&m) {
            Some(prev) => {
                let sum = prev.try_add(&c)?;
                if !sum.is_zero() {
                    self.terms.insert(m, sum);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
        Ok(())
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn has_lambda(&self) -> bool {
        self.lambda
    }

    /// Number of non-lambda variables.
    pub fn spatial_vars(&self) -> usize {
        self.nvars - self.lambda as usize
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in canonical (graded-lex) order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, exps: &[i64]) -> Option<&C> {
        Monomial::new(exps).ok().and_then(|m| self.terms.get(&m))
    }

    pub fn support(&self) -> Vec<Vec<i64>> {
        self.terms.keys().map(Monomial::to_vec).collect()
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.nvars != other.nvars || self.lambda != other.lambda {
            return Err(Error::ArityMismatch {
                left: self.nvars,
                right: other.nvars,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone())?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        LaurentPoly {
            nvars: self.nvars,
            lambda: self.lambda,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = Self::zero(self.nvars, self.lambda);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.checked_mul(mb)?, ca.try_mul(cb)?)?;
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &C) -> Result<Self> {
        let mut out = Self::zero(self.nvars, self.lambda);
        for (m, a) in &self.terms {
            let v = a.try_mul(c)?;
            if !v.is_zero() {
                out.terms.insert(m.clone(), v);
            }
        }
        Ok(out)
    }

    /// Multiplies by a single monomial `z^exps`.
    pub fn shift(&self, exps: &[i64]) -> Result<Self> {
        let s = Monomial::new(exps)?;
        let mut out = Self::zero(self.nvars, self.lambda);
        for (m, c) in &self.terms {
            out.terms.insert(m.checked_mul(&s)?, c.clone());
        }
        Ok(out)
    }

    /// Smallest total degree over the support.
    pub fn min_degree(&self) -> Option<i64> {
        self.terms.keys().map(Monomial::degree).min()
    }

    pub fn max_degree(&self) -> Option<i64> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// Sum of the terms of minimal total degree.
    pub fn lowest_component(&self) -> Result<Self> {
        let low = self.min_degree().ok_or(Error::ZeroPolynomial)?;
        Ok(LaurentPoly {
            nvars: self.nvars,
            lambda: self.lambda,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == low)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        })
    }

    /// `gamma_j = max(0, -min exponent of variable j)` for each non-lambda variable.
    pub fn gamma_profile(&self) -> Result<Vec<u32>> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        Ok((0..self.spatial_vars())
            .map(|j| {
                let min = self.terms.keys().map(|m| m.0[j]).min().unwrap_or(0);
                (-(min as i32)).max(0) as u32
            })
            .collect())
    }

    /// First exponent (canonical order) with `q_j` not dividing its j-th
    /// coordinate, together with that index `j` (0-based).
    pub fn lattice_violation(&self, q: &[u32]) -> Option<(Vec<i64>, usize)> {
        for m in self.terms.keys() {
            for (j, &qj) in q.iter().enumerate().take(self.spatial_vars()) {
                if (m.0[j] as i64).rem_euclid(qj as i64) != 0 {
                    return Some((m.to_vec(), j));
                }
            }
        }
        None
    }

    /// True iff every non-lambda exponent lies in the lattice `q_1 Z x ... x q_d Z`.
    pub fn support_in_lattice(&self, q: &[u32]) -> bool {
        self.lattice_violation(q).is_none()
    }

    /// The unique `g` with `g(z_1^q_1, ..., z_d^q_d, lambda) = self`.
    pub fn lift(&self, q: &[u32]) -> Result<Self> {
        self.check_period(q)?;
        if let Some((exponent, index)) = self.lattice_violation(q) {
            return Err(Error::SupportNotInLattice { exponent, index });
        }
        let mut out = Self::zero(self.nvars, self.lambda);
        for (m, c) in &self.terms {
            let mut e = m.0.clone();
            for (ej, &qj) in e.iter_mut().zip(q) {
                *ej /= qj as i16;
            }
            out.terms.insert(Monomial(e), c.clone());
        }
        Ok(out)
    }

    /// Substitutes `z_j -> z_j^q_j` (the inverse of [`LaurentPoly::lift`]).
    pub fn inflate(&self, q: &[u32]) -> Result<Self> {
        self.check_period(q)?;
        let mut out = Self::zero(self.nvars, self.lambda);
        for (m, c) in &self.terms {
            let e: Vec<i64> =
                m.0.iter()
                    .enumerate()
                    .map(|(j, &ej)| ej as i64 * q.get(j).copied().unwrap_or(1) as i64)
                    .collect();
            out.terms.insert(Monomial::new(&e)?, c.clone());
        }
        Ok(out)
    }

    fn check_period(&self, q: &[u32]) -> Result<()> {
        if q.len() != self.spatial_vars() {
            return Err(Error::ArityMismatch {
                left: self.spatial_vars(),
                right: q.len(),
            });
        }
        Ok(())
    }

    /// Direct sparse evaluation.
    pub fn eval(&self, point: &[Complex64]) -> Result<Complex64> {
        if point.len() != self.nvars {
            return Err(Error::PointDimension {
                expected: self.nvars,
                got: point.len(),
            });
        }
        for (var, z) in point.iter().enumerate() {
            if *z == Complex64::new(0.0, 0.0) && self.terms.keys().any(|m| m.0[var] < 0) {
                return Err(Error::PoleAtZero { var });
            }
        }
        Ok(self
            .terms
            .iter()
            .map(|(m, c)| {
                m.0.iter()
                    .zip(point)
                    .fold(c.to_complex(), |acc, (&e, z)| acc * z.powi(e as i32))
            })
            .sum())
    }

    pub fn map_coeffs<D: Coefficient>(&self, f: impl Fn(&C) -> D) -> LaurentPoly<D> {
        let mut out = LaurentPoly::zero(self.nvars, self.lambda);
        for (m, c) in &self.terms {
            let v = f(c);
            if !v.is_zero() {
                out.terms.insert(m.clone(), v);
            }
        }
        out
    }

    /// Same polynomial viewed in one more variable, `lambda`, at exponent 0.
    pub fn with_lambda(&self) -> Self {
        assert!(!self.lambda, "polynomial already carries lambda");
        LaurentPoly {
            nvars: self.nvars + 1,
            lambda: true,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let mut e = m.0.clone();
                    e.push(0);
                    (Monomial(e), c.clone())
                })
                .collect(),
        }
    }

    /// Highest lambda power present (0 for lambda-free polynomials).
    pub fn lambda_degree(&self) -> Option<i64> {
        if !self.lambda {
            return self.terms.keys().next().map(|_| 0);
        }
        let last = self.nvars - 1;
        self.terms.keys().map(|m| m.0[last] as i64).max()
    }

    /// Coefficient of `lambda^k` as a polynomial in the remaining variables.
    pub fn lambda_coefficient(&self, k: i64) -> Self {
        assert!(self.lambda, "polynomial has no lambda variable");
        let last = self.nvars - 1;
        LaurentPoly {
            nvars: last,
            lambda: false,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.0[last] as i64 == k)
                .map(|(m, c)| (Monomial(m.0[..last].to_vec()), c.clone()))
                .collect(),
        }
    }

    /// One term per line: `coeff * v1^e1 * ... * vn^en` in canonical order.
    pub fn to_canonical_text(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0\n".to_string();
        }
        let mut out = String::new();
        for (m, c) in &self.terms {
            out.push_str(&c.to_string());
            for (name, e) in names.iter().zip(&m.0) {
                out.push_str(&format!(" * {name}^{e}"));
            }
            out.push('\n');
        }
        out
    }

    /// Single-line form, e.g. `lam^2 - w^1 - 2 - w^-1`.
    pub fn to_compact(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let (negative, mag) = match c.negated_if_negative() {
                Some(pos) => (true, pos),
                None => (false, c.clone()),
            };
            match (i, negative) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            let vars: Vec<String> = names
                .iter()
                .zip(&m.0)
                .filter(|(_, &e)| e != 0)
                .map(|(name, e)| format!("{name}^{e}"))
                .collect();
            let coeff = if mag.is_atomic() {
                mag.to_string()
            } else {
                format!("({mag})")
            };
            if vars.is_empty() {
                out.push_str(&coeff);
            } else if mag.is_one() {
                out.push_str(&vars.join("*"));
            } else {
                out.push_str(&format!("{coeff}*{}", vars.join("*")));
            }
        }
        out
    }

    pub fn to_json(&self, names: &[String]) -> Value {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|(m, c)| json!({ "exponents": m.to_vec(), "coeff": c.to_json() }))
            .collect();
        json!({ "variables": names, "terms": terms })
    }
}

impl LaurentPoly<CycloNumber> {
    /// `f(mu_n . z)`: each `c z^a` picks up `zeta_L^(sum_j a_j n_j L / q_j)`.
    pub fn twist(&self, n: &[i64], q: &[u32]) -> Result<Self> {
        self.check_period(q)?;
        if n.len() != q.len() {
            return Err(Error::ArityMismatch {
                left: q.len(),
                right: n.len(),
            });
        }
        let mut out = Self::zero(self.nvars, self.lambda);
        for (m, c) in &self.terms {
            let order = c.order() as i64;
            let mut e = 0i64;
            for j in 0..q.len() {
                let qj = q[j] as i64;
                if order % qj != 0 {
                    return Err(Error::OrderMismatch {
                        left: c.order(),
                        right: q[j],
                    });
                }
                e += m.0[j] as i64 * n[j] * (order / qj);
            }
            let factor = CycloNumber::root(e.rem_euclid(order), order)?;
            out.terms.insert(m.clone(), c.checked_mul(&factor)?);
        }
        Ok(out)
    }

    pub fn to_complex_poly(&self) -> LaurentPoly<Complex64> {
        self.map_coeffs(|c| c.to_complex())
    }

    /// True when the top lambda power is `lambda^degree` with constant
    /// coefficient exactly `(-1)^degree`.
    pub fn is_signed_monic_in_lambda(&self, degree: i64) -> bool {
        let sign = if degree % 2 == 0 { 1 } else { -1 };
        let lead = self.lambda_coefficient(degree);
        let want = LaurentPoly::constant(
            lead.nvars,
            false,
            match lead.terms().next() {
                Some((_, c)) => match CycloNumber::from_integer(c.order() as i64, sign) {
                    Ok(v) => v,
                    Err(_) => return false,
                },
                None => return false,
            },
        );
        self.lambda_degree() == Some(degree) && lead == want
    }
}

impl<C: Coefficient> fmt::Debug for LaurentPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = variable_names(self.spatial_vars(), "z", self.lambda);
        write!(f, "LaurentPoly({})", self.to_compact(&names))
    }
}

impl<C: Coefficient> fmt::Display for LaurentPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = variable_names(self.spatial_vars(), "z", self.lambda);
        f.write_str(&self.to_compact(&names))
    }
}
