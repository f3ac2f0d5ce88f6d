//! Exact arithmetic in the cyclotomic field Q(zeta_L).
//!
//! Elements are stored in the power basis `1, zeta, ..., zeta^(phi(L)-1)`
//! with arbitrary-precision rational coordinates. Every constructor and
//! arithmetic operation reduces modulo the L-th cyclotomic polynomial, so
//! structural equality of two values is field equality.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Largest order accepted by [`field`]. The reduction table is `L x phi(L)`.
pub const MAX_ORDER: u32 = 1 << 14;

/// Reduction data for one cyclotomic field.
#[derive(Debug)]
pub struct CyclotomicField {
    order: u32,
    phi: usize,
    modulus: Vec<BigInt>,
    /// `powers[k]` holds `x^k mod Phi_L` for `0 <= k < L`.
    powers: Vec<Vec<BigInt>>,
}

impl CyclotomicField {
    fn new(order: u32) -> Self {
        let modulus = cyclotomic_polynomial(order as usize);
        let phi = modulus.len() - 1;
        let mut powers = Vec::with_capacity(order as usize);
        let mut cur = vec![BigInt::zero(); phi];
        cur[0] = BigInt::one();
        for _ in 0..order {
            powers.push(cur.clone());
            // multiply by x, then fold the x^phi coefficient back with the monic modulus
            let top = cur[phi - 1].clone();
            for i in (1..phi).rev() {
                cur[i] = cur[i - 1].clone();
            }
            cur[0] = BigInt::zero();
            if !top.is_zero() {
                for (i, m) in modulus.iter().take(phi).enumerate() {
                    cur[i] -= &top * m;
                }
            }
        }
        CyclotomicField {
            order,
            phi,
            modulus,
            powers,
        }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Degree of the field over Q, i.e. Euler's phi of the order.
    pub fn degree(&self) -> usize {
        self.phi
    }

    /// Integer coefficients of Phi_L, lowest degree first.
    pub fn modulus(&self) -> &[BigInt] {
        &self.modulus
    }

    fn power(&self, k: i64) -> &[BigInt] {
        let l = self.order as i64;
        &self.powers[k.rem_euclid(l) as usize]
    }
}

/// Phi_n by stripping every Phi_d (d | n, d < n) out of x^n - 1.
fn cyclotomic_polynomial(n: usize) -> Vec<BigInt> {
    let mut cache: HashMap<usize, Vec<BigInt>> = HashMap::new();
    cyclotomic_rec(n, &mut cache)
}

fn cyclotomic_rec(n: usize, cache: &mut HashMap<usize, Vec<BigInt>>) -> Vec<BigInt> {
    if let Some(p) = cache.get(&n) {
        return p.clone();
    }
    let mut num = vec![BigInt::zero(); n + 1];
    num[0] = -BigInt::one();
    num[n] = BigInt::one();
    for d in 1..n {
        if n % d == 0 {
            let f = cyclotomic_rec(d, cache);
            num = exact_div_monic(&num, &f);
        }
    }
    cache.insert(n, num.clone());
    num
}

fn exact_div_monic(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let dn = den.len() - 1;
    let mut rem = num.to_vec();
    let qlen = num.len() - dn;
    let mut quot = vec![BigInt::zero(); qlen];
    for i in (0..qlen).rev() {
        let c = rem[i + dn].clone();
        if c.is_zero() {
            continue;
        }
        for (j, dj) in den.iter().enumerate() {
            rem[i + j] -= &c * dj;
        }
        quot[i] = c;
    }
    debug_assert!(rem.iter().all(Zero::is_zero), "non-exact cyclotomic division");
    quot
}

static FIELDS: OnceLock<Mutex<HashMap<u32, Arc<CyclotomicField>>>> = OnceLock::new();

/// Shared reduction data for Q(zeta_order); built once per order.
pub fn field(order: i64) -> Result<Arc<CyclotomicField>> {
    if order < 1 || order > MAX_ORDER as i64 {
        return Err(Error::InvalidOrder(format!(
            "order must lie in 1..={MAX_ORDER}, got {order}"
        )));
    }
    let order = order as u32;
    let cache = FIELDS.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().unwrap_or_else(|e| e.into_inner());
    Ok(guard
        .entry(order)
        .or_insert_with(|| Arc::new(CyclotomicField::new(order)))
        .clone())
}

/// An exact element of Q(zeta_L) in canonical power-basis form.
#[derive(Clone)]
pub struct CycloNumber {
    field: Arc<CyclotomicField>,
    coeffs: Vec<BigRational>,
}

impl PartialEq for CycloNumber {
    fn eq(&self, other: &Self) -> bool {
        self.field.order == other.field.order && self.coeffs == other.coeffs
    }
}

impl Eq for CycloNumber {}

impl CycloNumber {
    pub fn zero(order: i64) -> Result<Self> {
        let field = field(order)?;
        let coeffs = vec![BigRational::zero(); field.phi];
        Ok(CycloNumber { field, coeffs })
    }

    pub fn one(order: i64) -> Result<Self> {
        Self::from_rational(order, BigRational::one())
    }

    pub fn from_rational(order: i64, r: BigRational) -> Result<Self> {
        let mut z = Self::zero(order)?;
        z.coeffs[0] = r;
        Ok(z)
    }

    pub fn from_integer(order: i64, n: i64) -> Result<Self> {
        Self::from_rational(order, BigRational::from_integer(n.into()))
    }

    /// `zeta_order^k`, with `k` reduced mod `order`.
    pub fn root(k: i64, order: i64) -> Result<Self> {
        let field = field(order)?;
        let coeffs = field
            .power(k)
            .iter()
            .map(|c| BigRational::from_integer(c.clone()))
            .collect();
        Ok(CycloNumber { field, coeffs })
    }

    /// `re + im * i` where `i = zeta^(L/4)`; requires `4 | order`.
    pub fn gaussian(order: i64, re: BigRational, im: BigRational) -> Result<Self> {
        if im.is_zero() {
            return Self::from_rational(order, re);
        }
        if order % 4 != 0 {
            return Err(Error::InvalidOrder(format!(
                "order {order} does not contain the imaginary unit"
            )));
        }
        let i = Self::root(order / 4, order)?;
        Self::from_rational(order, re)?.checked_add(&i.scale(&im))
    }

    /// Canonical form of `sum c * zeta^k` for arbitrary (possibly negative,
    /// repeated, or out-of-range) exponents `k`.
    pub fn from_powers<I>(order: i64, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (i64, BigRational)>,
    {
        let mut out = Self::zero(order)?;
        for (k, c) in terms {
            out.accumulate(k, &c);
        }
        Ok(out)
    }

    fn accumulate(&mut self, k: i64, c: &BigRational) {
        if c.is_zero() {
            return;
        }
        let field = self.field.clone();
        for (slot, p) in self.coeffs.iter_mut().zip(field.power(k)) {
            if !p.is_zero() {
                *slot += c * BigRational::from_integer(p.clone());
            }
        }
    }

    pub fn order(&self) -> u32 {
        self.field.order
    }

    pub fn field(&self) -> &Arc<CyclotomicField> {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    /// Nonzero basis coordinates `(k, c)` meaning `c * zeta^k`.
    pub fn terms(&self) -> impl Iterator<Item = (usize, &BigRational)> {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero())
    }

    /// The value as a rational, if it lies in Q.
    pub fn as_rational(&self) -> Option<&BigRational> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(&self.coeffs[0])
        } else {
            None
        }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.field.order != other.field.order {
            return Err(Error::OrderMismatch {
                left: self.field.order,
                right: other.field.order,
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Ok(CycloNumber {
            field: self.field.clone(),
            coeffs,
        })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&other.neg())
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let phi = self.field.phi;
        let mut wide = vec![BigRational::zero(); 2 * phi - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    wide[i + j] += a * b;
                }
            }
        }
        let mut out = CycloNumber {
            field: self.field.clone(),
            coeffs: wide[..phi].to_vec(),
        };
        for (k, c) in wide.iter().enumerate().skip(phi) {
            out.accumulate(k as i64, c);
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        CycloNumber {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        CycloNumber {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }

    /// Complex conjugate: `zeta^k -> zeta^(-k)`.
    pub fn conj(&self) -> Self {
        let terms: Vec<_> = self.terms().map(|(k, c)| (-(k as i64), c.clone())).collect();
        let mut out = CycloNumber {
            field: self.field.clone(),
            coeffs: vec![BigRational::zero(); self.field.phi],
        };
        for (k, c) in terms {
            out.accumulate(k, &c);
        }
        out
    }

    /// Double-precision value, evaluating each `zeta^k` directly by trig.
    pub fn to_complex(&self) -> Complex64 {
        let l = self.field.order as i64;
        self.terms()
            .map(|(k, c)| unit_root(k as i64, l) * rational_to_f64(c))
            .sum()
    }
}

/// `e^(2 pi i k / order)` in double precision, exact on the four axis points.
pub fn unit_root(k: i64, order: i64) -> Complex64 {
    let k = k.rem_euclid(order);
    if (4 * k) % order == 0 {
        return match 4 * k / order {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
    }
    Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / order as f64)
}

pub fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // ratio of huge integers: fall back to a scaled division
        let n = r.numer().to_f64().unwrap_or(f64::NAN);
        let d = r.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

pub fn format_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for CycloNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(r) = self.as_rational() {
            return f.write_str(&format_rational(r));
        }
        let mut first = true;
        for (k, c) in self.terms() {
            let (sign, mag) = if c.is_negative() {
                ("-", -c.clone())
            } else {
                ("+", c.clone())
            };
            if first {
                if sign == "-" {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            if k == 0 {
                f.write_str(&format_rational(&mag))?;
            } else if mag.is_one() {
                write!(f, "zeta{}^{}", self.field.order, k)?;
            } else {
                write!(f, "{}*zeta{}^{}", format_rational(&mag), self.field.order, k)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for CycloNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycloNumber[L={}]({})", self.field.order, self)
    }
}
