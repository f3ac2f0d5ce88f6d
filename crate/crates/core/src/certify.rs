//! Exact checks of the two sufficient conditions on the lowest-degree
//! component `h` of the symbol, and the resulting certificate.
//!
//! (A1) `deg h < 0`; (A2) the twisted components `h(mu_n . z)`, `n` in `W`,
//! are pairwise distinct. Together they imply that the lifted
//! characteristic polynomial `P(w, lambda)` is irreducible, hence that the
//! Bloch variety is irreducible modulo periodicity. A failed condition makes
//! no claim either way.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::cyclo::CycloNumber;
use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::model::{fundamental_cell, OperatorModel};

pub const THEOREM_BASIS: &str = "If the lowest-degree component h of the symbol p(z) = sum_n a_n z^(-n) \
has negative degree (A1) and the twisted components h(mu_n . z), n in W, are pairwise distinct (A2), \
then P(w, lambda) with P(z_1^q_1, ..., z_d^q_d, lambda) = det(D(z) + B - lambda I) is irreducible \
as a Laurent polynomial for every q-periodic potential V, and the Bloch variety is irreducible \
modulo periodicity. Failed assumptions imply nothing about reducibility.";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    #[serde(rename = "CERTIFIED_IRREDUCIBLE")]
    CertifiedIrreducible,
    #[serde(rename = "ASSUMPTION_A1_FAILS")]
    AssumptionA1Fails,
    #[serde(rename = "ASSUMPTION_A2_FAILS")]
    AssumptionA2Fails,
    #[serde(rename = "BOTH_FAIL")]
    BothFail,
}

impl Verdict {
    pub fn from_checks(a1: bool, a2: bool) -> Self {
        match (a1, a2) {
            (true, true) => Verdict::CertifiedIrreducible,
            (false, true) => Verdict::AssumptionA1Fails,
            (true, false) => Verdict::AssumptionA2Fails,
            (false, false) => Verdict::BothFail,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::CertifiedIrreducible => "CERTIFIED_IRREDUCIBLE",
            Verdict::AssumptionA1Fails => "ASSUMPTION_A1_FAILS",
            Verdict::AssumptionA2Fails => "ASSUMPTION_A2_FAILS",
            Verdict::BothFail => "BOTH_FAIL",
        }
    }

    pub fn is_certified(&self) -> bool {
        *self == Verdict::CertifiedIrreducible
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct A1Report {
    pub pass: bool,
    pub deg_h: i64,
    pub h_support: Vec<Vec<i64>>,
}

/// Two cells whose twisted lowest components coincide.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub n: Vec<i64>,
    pub n_prime: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct A2Report {
    pub pass: bool,
    pub witness: Option<Witness>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub model_sha256: String,
    pub d: usize,
    pub q: Vec<u32>,
    pub a1: A1Report,
    pub a2: A2Report,
    pub verdict: Verdict,
    pub theorem_basis: String,
}

impl Certificate {
    pub fn to_json_pretty(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("certificate serialization cannot fail");
        s.push('\n');
        s
    }
}

/// `(deg h < 0, deg h)` for the lowest-degree component `h` of `p`.
pub fn check_a1<C: crate::laurent::Coefficient>(p: &LaurentPoly<C>) -> Result<(bool, i64)> {
    let h = p.lowest_component()?;
    let deg = h.min_degree().ok_or(Error::ZeroPolynomial)?;
    Ok((deg < 0, deg))
}

/// Decides (A2) by integer congruences.
///
/// Twisting by `mu_n` multiplies `c_a z^a` by `exp(2 pi i sum_j n_j a_j / q_j)`
/// and leaves the support alone, so `h_0 = h_n` iff that phase is 1 on every
/// `a` in `supp h`. Since `h_{n+m}(z) = h_n(mu_m . z)`, a coincidence
/// `h_n = h_n'` is equivalent to `h_0 = h_{n'-n}`, so only `h_0` against each
/// `h_n` needs checking. Returns the first failing `n` in row-major order.
pub fn check_a2<C: crate::laurent::Coefficient>(
    p: &LaurentPoly<C>,
    q: &[u32],
) -> Result<(bool, Option<Witness>)> {
    let h = p.lowest_component()?;
    if q.len() != h.spatial_vars() {
        return Err(Error::ArityMismatch {
            left: h.spatial_vars(),
            right: q.len(),
        });
    }
    let support = h.support();
    let common = q.iter().fold(1i64, |acc, &qj| acc.lcm(&(qj as i64)));
    let cell = fundamental_cell(q);
    let origin = cell[0].clone();
    for n in cell.into_iter().skip(1) {
        let fixes_h = support.iter().all(|a| {
            let phase: i64 = (0..q.len()).map(|j| n[j] * a[j] * (common / q[j] as i64)).sum();
            phase.rem_euclid(common) == 0
        });
        if fixes_h {
            return Ok((
                false,
                Some(Witness {
                    n: origin,
                    n_prime: n,
                }),
            ));
        }
    }
    Ok((true, None))
}

pub fn certify(model: &OperatorModel) -> Result<Certificate> {
    let p = model.symbol()?;
    let h = p.lowest_component()?;
    let (a1_pass, deg_h) = check_a1(&p)?;
    let (a2_pass, witness) = check_a2(&p, model.q())?;
    Ok(Certificate {
        model_sha256: model.sha256(),
        d: model.d(),
        q: model.q().to_vec(),
        a1: A1Report {
            pass: a1_pass,
            deg_h,
            h_support: h.support(),
        },
        a2: A2Report {
            pass: a2_pass,
            witness,
        },
        verdict: Verdict::from_checks(a1_pass, a2_pass),
        theorem_basis: THEOREM_BASIS.to_string(),
    })
}

/// The family `r_n(z, t) = t z^g' h(mu_n . z) - z^g'`, `g'` the gamma profile
/// of `h`, with `t` in the lambda slot.
#[derive(Clone, Debug)]
pub struct RnFamily {
    pub gamma_prime: Vec<u32>,
    pub members: Vec<(Vec<i64>, LaurentPoly<CycloNumber>)>,
    /// Pairs `(n, n')`, `n` before `n'` in `W`, with `r_n = r_n'`.
    pub coincident: Vec<(Vec<i64>, Vec<i64>)>,
}

impl RnFamily {
    pub fn pairwise_distinct(&self) -> bool {
        self.coincident.is_empty()
    }
}

pub fn rn_family(h: &LaurentPoly<CycloNumber>, q: &[u32]) -> Result<RnFamily> {
    let gamma_prime = h.gamma_profile()?;
    let d = h.spatial_vars();
    let mut shift: Vec<i64> = gamma_prime.iter().map(|&g| g as i64).collect();
    let order = h
        .terms()
        .next()
        .map(|(_, c)| c.order() as i64)
        .ok_or(Error::ZeroPolynomial)?;
    shift.push(0);
    let z_gamma = LaurentPoly::from_terms(d + 1, true, [(shift.clone(), CycloNumber::one(order)?)])?;
    shift[d] = 1;
    let members = fundamental_cell(q)
        .into_iter()
        .map(|n| {
            let r = h.twist(&n, q)?.with_lambda().shift(&shift)?.sub(&z_gamma)?;
            Ok((n, r))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut coincident = Vec::new();
    for (i, (n, r)) in members.iter().enumerate() {
        for (np, rp) in &members[i + 1..] {
            if r == rp {
                coincident.push((n.clone(), np.clone()));
            }
        }
    }
    Ok(RnFamily {
        gamma_prime,
        members,
        coincident,
    })
}
