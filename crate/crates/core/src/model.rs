//! Operator description `H = A + V`: hoppings, period, potential on the
//! fundamental cell, the symbol `p(z)`, lattice presets, and model files.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::cyclo::{format_rational, rational_to_f64, CycloNumber};
use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;

/// Exact complex number `re + im * i` with rational parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GaussianRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussianRational { re, im }
    }

    pub fn real(re: BigRational) -> Self {
        GaussianRational {
            re,
            im: BigRational::zero(),
        }
    }

    pub fn from_integers(re: i64, im: i64) -> Self {
        GaussianRational {
            re: BigRational::from_integer(re.into()),
            im: BigRational::from_integer(im.into()),
        }
    }

    pub fn zero() -> Self {
        Self::from_integers(0, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussianRational {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(rational_to_f64(&self.re), rational_to_f64(&self.im))
    }

    /// Embeds into Q(zeta_order); needs `4 | order` unless the value is real.
    pub fn to_cyclo(&self, order: i64) -> Result<CycloNumber> {
        CycloNumber::gaussian(order, self.re.clone(), self.im.clone())
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return f.write_str(&format_rational(&self.re));
        }
        let sign = if self.im.is_negative() { '-' } else { '+' };
        write!(
            f,
            "{} {} {}*i",
            format_rational(&self.re),
            sign,
            format_rational(&self.im.abs())
        )
    }
}

/// Parses `"3"`, `"-2/5"` or a finite decimal such as `"0.125"`, exactly.
pub fn parse_rational(s: &str) -> std::result::Result<BigRational, String> {
    let t = s.trim();
    if t.is_empty() {
        return Err("empty number".into());
    }
    if let Some((n, d)) = t.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|e| format!("bad numerator `{n}`: {e}"))?;
        let d = BigInt::from_str(d.trim()).map_err(|e| format!("bad denominator `{d}`: {e}"))?;
        if d.is_zero() {
            return Err("zero denominator".into());
        }
        return Ok(BigRational::new(n, d));
    }
    if let Some((int, frac)) = t.split_once('.') {
        let negative = int.starts_with('-');
        let digits = format!("{}{}", int.trim_start_matches(['-', '+']), frac);
        if frac.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
            return Err(format!("bad decimal `{t}`"));
        }
        let n = BigInt::from_str(&digits).map_err(|e| e.to_string())?;
        let d = num_traits::pow(BigInt::from(10), frac.len());
        let r = BigRational::new(n, d);
        return Ok(if negative { -r } else { r });
    }
    BigInt::from_str(t)
        .map(BigRational::from_integer)
        .map_err(|e| format!("bad integer `{t}`: {e}"))
}

/// The three built-in lattices.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Preset {
    /// Nearest-neighbour Laplacian on `Z^d`.
    Square(usize),
    /// Triangular lattice after shearing onto `Z^2`.
    Triangular,
    /// Square lattice with both diagonals.
    ExtendedHarper,
}

impl Preset {
    pub fn from_name(name: &str, d: usize) -> Result<Self> {
        let preset = match name.trim().to_ascii_lowercase().as_str() {
            "square" | "square-d" | "laplacian" => Preset::Square(d),
            "triangular" | "tri" => Preset::Triangular,
            "extended-harper" | "extended_harper" | "ehm" => Preset::ExtendedHarper,
            _ => return Err(Error::UnknownPreset(name.to_string())),
        };
        preset.check_dimension(d)?;
        Ok(preset)
    }

    pub fn name(&self) -> &'static str {
        match self {
            Preset::Square(_) => "square",
            Preset::Triangular => "triangular",
            Preset::ExtendedHarper => "extended-harper",
        }
    }

    pub fn dimension(&self) -> usize {
        match self {
            Preset::Square(d) => *d,
            _ => 2,
        }
    }

    fn check_dimension(&self, d: usize) -> Result<()> {
        let ok = match self {
            Preset::Square(k) => *k >= 1 && *k == d,
            _ => d == 2,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::UnsupportedDimension {
                name: self.name().to_string(),
                d,
            })
        }
    }

    /// Neighbour offsets, each carrying hopping `-1`.
    pub fn offsets(&self) -> Vec<Vec<i64>> {
        let mut out = Vec::new();
        match self {
            Preset::Square(d) => {
                for j in 0..*d {
                    for s in [1, -1] {
                        let mut e = vec![0; *d];
                        e[j] = s;
                        out.push(e);
                    }
                }
            }
            Preset::Triangular => {
                out.extend([
                    vec![1, 0],
                    vec![-1, 0],
                    vec![0, 1],
                    vec![0, -1],
                    vec![1, -1],
                    vec![-1, 1],
                ]);
            }
            Preset::ExtendedHarper => {
                out.extend([
                    vec![1, 0],
                    vec![-1, 0],
                    vec![0, 1],
                    vec![0, -1],
                    vec![1, -1],
                    vec![-1, 1],
                    vec![1, 1],
                    vec![-1, -1],
                ]);
            }
        }
        out
    }

    pub fn hoppings(&self) -> BTreeMap<Vec<i64>, GaussianRational> {
        self.offsets()
            .into_iter()
            .map(|n| (n, GaussianRational::from_integers(-1, 0)))
            .collect()
    }
}

/// `W = {n : 0 <= n_j < q_j}` in row-major order (last coordinate fastest).
pub fn fundamental_cell(q: &[u32]) -> Vec<Vec<i64>> {
    let mut cells = vec![Vec::with_capacity(q.len())];
    for &qj in q {
        cells = cells
            .into_iter()
            .flat_map(|prefix| {
                (0..qj as i64).map(move |nj| {
                    let mut v = prefix.clone();
                    v.push(nj);
                    v
                })
            })
            .collect();
    }
    cells
}

/// `lcm(4, q_1, ..., q_d)`: one field holding `i` and every `mu_n^j`.
pub fn working_order(q: &[u32]) -> i64 {
    q.iter().fold(4i64, |acc, &qj| acc.lcm(&(qj as i64)))
}

#[derive(Clone, Debug, PartialEq)]
pub struct OperatorModel {
    d: usize,
    q: Vec<u32>,
    hoppings: BTreeMap<Vec<i64>, GaussianRational>,
    potential: Vec<GaussianRational>,
}

impl OperatorModel {
    pub fn new(
        q: Vec<u32>,
        hoppings: BTreeMap<Vec<i64>, GaussianRational>,
        potential: Vec<GaussianRational>,
    ) -> Result<Self> {
        let d = q.len();
        if d == 0 {
            return Err(Error::InvalidModel("dimension must be at least 1".into()));
        }
        if let Some(j) = q.iter().position(|&qj| qj == 0) {
            return Err(Error::InvalidModel(format!("q[{j}] must be positive")));
        }
        let hoppings: BTreeMap<_, _> = hoppings.into_iter().filter(|(_, a)| !a.is_zero()).collect();
        if hoppings.is_empty() {
            return Err(Error::InvalidModel("hoppings must be nonempty".into()));
        }
        if let Some(bad) = hoppings.keys().find(|n| n.len() != d) {
            return Err(Error::InvalidModel(format!(
                "hopping offset {bad:?} has {} coordinates, expected {d}",
                bad.len()
            )));
        }
        let cells: usize = q.iter().map(|&x| x as usize).product();
        if potential.len() != cells {
            return Err(Error::InvalidModel(format!(
                "potential has {} entries but |W| = {cells}",
                potential.len()
            )));
        }
        Ok(OperatorModel {
            d,
            q,
            hoppings,
            potential,
        })
    }

    pub fn from_preset(preset: Preset, q: Vec<u32>, potential: Vec<GaussianRational>) -> Result<Self> {
        preset.check_dimension(q.len())?;
        Self::new(q, preset.hoppings(), potential)
    }

    /// Preset with `V = 0`.
    pub fn preset_free(preset: Preset, q: Vec<u32>) -> Result<Self> {
        let cells = q.iter().map(|&x| x as usize).product();
        Self::from_preset(preset, q, vec![GaussianRational::zero(); cells])
    }

    pub fn with_potential(&self, potential: Vec<GaussianRational>) -> Result<Self> {
        Self::new(self.q.clone(), self.hoppings.clone(), potential)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn q(&self) -> &[u32] {
        &self.q
    }

    /// `Q = q_1 ... q_d`.
    pub fn cells(&self) -> usize {
        self.potential.len()
    }

    pub fn hoppings(&self) -> &BTreeMap<Vec<i64>, GaussianRational> {
        &self.hoppings
    }

    pub fn potential(&self) -> &[GaussianRational] {
        &self.potential
    }

    pub fn working_order(&self) -> i64 {
        working_order(&self.q)
    }

    /// `p(z) = sum_n a_n z^(-n)` over Q(zeta_L), L the working order.
    pub fn symbol(&self) -> Result<LaurentPoly<CycloNumber>> {
        self.symbol_in(self.working_order())
    }

    pub fn symbol_in(&self, order: i64) -> Result<LaurentPoly<CycloNumber>> {
        let terms = self
            .hoppings
            .iter()
            .map(|(n, a)| Ok((n.iter().map(|x| -x).collect(), a.to_cyclo(order)?)))
            .collect::<Result<Vec<_>>>()?;
        LaurentPoly::from_terms(self.d, false, terms)
    }

    pub fn symbol_complex(&self) -> Result<LaurentPoly<Complex64>> {
        let terms = self
            .hoppings
            .iter()
            .map(|(n, a)| (n.iter().map(|x| -x).collect(), a.to_complex()));
        LaurentPoly::from_terms(self.d, false, terms)
    }

    /// `a_n = conj(a_{-n})` for all n and V real: the Floquet matrix is
    /// Hermitian on the unit torus.
    pub fn is_self_adjoint(&self) -> bool {
        let symmetric = self.hoppings.iter().all(|(n, a)| {
            let m: Vec<i64> = n.iter().map(|x| -x).collect();
            self.hoppings.get(&m) == Some(&a.conj())
        });
        symmetric && self.potential.iter().all(GaussianRational::is_real)
    }

    pub fn to_file(&self) -> ModelFile {
        ModelFile {
            d: Some(self.d),
            q: self.q.clone(),
            preset: None,
            hoppings: Some(
                self.hoppings
                    .iter()
                    .map(|(n, a)| HoppingEntry {
                        offset: n.clone(),
                        re: NumberField::Text(format_rational(&a.re)),
                        im: NumberField::Text(format_rational(&a.im)),
                    })
                    .collect(),
            ),
            potential: Some(
                self.potential
                    .iter()
                    .map(|v| ComplexEntry {
                        re: NumberField::Text(format_rational(&v.re)),
                        im: NumberField::Text(format_rational(&v.im)),
                    })
                    .collect(),
            ),
        }
    }

    /// Canonical JSON form; also a valid model file.
    pub fn to_canonical_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("model serialization cannot fail")
    }

    pub fn sha256(&self) -> String {
        Sha256::digest(self.to_canonical_json().as_bytes())
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text =
            std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        let json = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"));
        if json {
            Self::from_json(&text)
        } else {
            Self::from_text(&text)
        }
    }

    /// TOML or JSON (detected by a leading `{`).
    pub fn from_text(text: &str) -> Result<Self> {
        if text.trim_start().starts_with('{') {
            Self::from_json(text)
        } else {
            Self::from_toml(text)
        }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let file: ModelFile = toml::from_str(text).map_err(|e| {
            let location = match e.span() {
                Some(span) => {
                    let line = text[..span.start].matches('\n').count() + 1;
                    format!("line {line}")
                }
                None => "model file".to_string(),
            };
            Error::Parse {
                location,
                message: e.message().to_string(),
            }
        })?;
        file.into_model()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: ModelFile = serde_json::from_str(text).map_err(|e| Error::Parse {
            location: format!("line {}, column {}", e.line(), e.column()),
            message: e.to_string(),
        })?;
        file.into_model()
    }
}

/// A rational field in a model file: a string such as `"-1/2"` or an integer.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum NumberField {
    Int(i64),
    Text(String),
}

impl Default for NumberField {
    fn default() -> Self {
        NumberField::Int(0)
    }
}

impl NumberField {
    fn parse(&self, location: impl Fn() -> String) -> Result<BigRational> {
        match self {
            NumberField::Int(n) => Ok(BigRational::from_integer((*n).into())),
            NumberField::Text(s) => parse_rational(s).map_err(|message| Error::Parse {
                location: location(),
                message,
            }),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct HoppingEntry {
    pub offset: Vec<i64>,
    #[serde(default)]
    pub re: NumberField,
    #[serde(default)]
    pub im: NumberField,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ComplexEntry {
    #[serde(default)]
    pub re: NumberField,
    #[serde(default)]
    pub im: NumberField,
}

/// On-disk model layout shared by the TOML and JSON readers.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    pub q: Vec<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hoppings: Option<Vec<HoppingEntry>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub potential: Option<Vec<ComplexEntry>>,
}

impl ModelFile {
    pub fn into_model(self) -> Result<OperatorModel> {
        let d = self.d.unwrap_or(self.q.len());
        if d != self.q.len() {
            return Err(Error::InvalidModel(format!(
                "d = {d} but q has {} entries",
                self.q.len()
            )));
        }
        let mut hoppings = BTreeMap::new();
        if let Some(name) = &self.preset {
            hoppings = Preset::from_name(name, d)?.hoppings();
        }
        for (i, h) in self.hoppings.iter().flatten().enumerate() {
            if h.offset.len() != d {
                return Err(Error::InvalidModel(format!(
                    "hoppings[{i}].offset has {} coordinates, expected {d}",
                    h.offset.len()
                )));
            }
            let re = h.re.parse(|| format!("hoppings[{i}].re"))?;
            let im = h.im.parse(|| format!("hoppings[{i}].im"))?;
            if hoppings
                .insert(h.offset.clone(), GaussianRational::new(re, im))
                .is_some()
                && self.preset.is_none()
            {
                return Err(Error::InvalidModel(format!(
                    "hoppings[{i}]: duplicate offset {:?}",
                    h.offset
                )));
            }
        }
        let cells: usize = self.q.iter().map(|&x| x as usize).product();
        let potential = match self.potential {
            None => vec![GaussianRational::zero(); cells],
            Some(entries) => entries
                .iter()
                .enumerate()
                .map(|(i, v)| {
                    Ok(GaussianRational::new(
                        v.re.parse(|| format!("potential[{i}].re"))?,
                        v.im.parse(|| format!("potential[{i}].im"))?,
                    ))
                })
                .collect::<Result<Vec<_>>>()?,
        };
        OperatorModel::new(self.q, hoppings, potential)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::variable_names;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn rationals_parse_exactly() {
        assert_eq!(parse_rational("-2/4").unwrap(), rat(-1, 2));
        assert_eq!(parse_rational(" 7 ").unwrap(), rat(7, 1));
        assert_eq!(parse_rational("0.125").unwrap(), rat(1, 8));
        assert_eq!(parse_rational("-1.5").unwrap(), rat(-3, 2));
        assert_eq!(parse_rational("0.1").unwrap(), rat(1, 10));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("1.").is_err());
    }

    #[test]
    fn symbol_examples() {
        let names = variable_names(2, "z", false);
        let sq = OperatorModel::preset_free(Preset::Square(2), vec![1, 1]).unwrap();
        assert_eq!(
            sq.symbol().unwrap().to_compact(&names),
            "-z2^1 - z1^1 - z1^-1 - z2^-1"
        );

        let tri = OperatorModel::preset_free(Preset::Triangular, vec![1, 1]).unwrap();
        let p = tri.symbol().unwrap();
        assert_eq!(p.len(), 6);
        assert!(p.coefficient(&[1, -1]).is_some() && p.coefficient(&[-1, 1]).is_some());
        assert!(p.coefficient(&[1, 1]).is_none());

        let ehm = OperatorModel::preset_free(Preset::ExtendedHarper, vec![1, 1]).unwrap();
        assert_eq!(ehm.symbol().unwrap().len(), 8);
    }

    #[test]
    fn symbol_negates_offsets() {
        let mut hop = BTreeMap::new();
        hop.insert(vec![2, -1], GaussianRational::from_integers(3, 1));
        let m = OperatorModel::new(vec![1, 1], hop, vec![GaussianRational::zero()]).unwrap();
        let p = m.symbol().unwrap();
        assert_eq!(p.support(), vec![vec![-2, 1]]);
        let want = CycloNumber::gaussian(4, rat(3, 1), rat(1, 1)).unwrap();
        assert_eq!(p.coefficient(&[-2, 1]), Some(&want));
    }

    #[test]
    fn preset_examples() {
        let sq1 = Preset::from_name("square", 1).unwrap().hoppings();
        assert_eq!(sq1.len(), 2);
        assert_eq!(sq1[&vec![1]], GaussianRational::from_integers(-1, 0));
        assert_eq!(sq1[&vec![-1]], GaussianRational::from_integers(-1, 0));
        assert_eq!(Preset::from_name("triangular", 2).unwrap().offsets().len(), 6);
        assert_eq!(
            Preset::from_name("extended-harper", 2).unwrap().offsets().len(),
            8
        );
        assert!(matches!(
            Preset::from_name("honeycomb", 2),
            Err(Error::UnknownPreset(_))
        ));
        assert!(matches!(
            Preset::from_name("triangular", 3),
            Err(Error::UnsupportedDimension { .. })
        ));
        assert!(Preset::from_name("square", 0).is_err());
    }

    #[test]
    fn self_reciprocity_of_presets() {
        let flip = |p: &LaurentPoly<CycloNumber>| {
            LaurentPoly::from_terms(
                2,
                false,
                p.terms()
                    .map(|(m, c)| (m.to_vec().iter().map(|e| -e).collect(), c.clone())),
            )
            .unwrap()
        };
        for (preset, symmetric) in [
            (Preset::Square(2), true),
            (Preset::ExtendedHarper, true),
            (Preset::Triangular, true),
        ] {
            let p = OperatorModel::preset_free(preset, vec![1, 1])
                .unwrap()
                .symbol()
                .unwrap();
            // full inversion z -> 1/z keeps all three
            assert_eq!(flip(&p) == p, symmetric);
        }
        // single-coordinate inversion z_1 -> 1/z_1 separates the triangular lattice
        let flip1 = |p: &LaurentPoly<CycloNumber>| {
            LaurentPoly::from_terms(
                2,
                false,
                p.terms().map(|(m, c)| {
                    let e = m.to_vec();
                    (vec![-e[0], e[1]], c.clone())
                }),
            )
            .unwrap()
        };
        for (preset, symmetric) in [
            (Preset::Square(2), true),
            (Preset::ExtendedHarper, true),
            (Preset::Triangular, false),
        ] {
            let p = OperatorModel::preset_free(preset, vec![1, 1])
                .unwrap()
                .symbol()
                .unwrap();
            assert_eq!(flip1(&p) == p, symmetric, "{preset:?}");
        }
    }

    #[test]
    fn load_toml_examples() {
        let text = r#"
            d = 2
            q = [2, 2]
            preset = "square"
        "#;
        let m = OperatorModel::from_text(text).unwrap();
        assert_eq!(m.d(), 2);
        assert_eq!(m.q(), &[2, 2]);
        assert!(m.potential().iter().all(GaussianRational::is_zero));

        let six = r#"
            q = [2, 3]
            [[hoppings]]
            offset = [1, 0]
            re = "-1"
            [[hoppings]]
            offset = [0, -1]
            re = "1/3"
            im = "-2"
            [[potential]]
            re = "1"
            [[potential]]
            re = "0.5"
            [[potential]]
            im = "1/7"
            [[potential]]
            re = 2
            [[potential]]
            re = "0"
            [[potential]]
            re = "-3/2"
            im = "1"
        "#;
        let m = OperatorModel::from_text(six).unwrap();
        assert_eq!(m.cells(), 6);
        assert_eq!(m.potential()[1], GaussianRational::real(rat(1, 2)));
        assert_eq!(m.potential()[2], GaussianRational::new(rat(0, 1), rat(1, 7)));
        assert_eq!(
            m.hoppings()[&vec![0, -1]],
            GaussianRational::new(rat(1, 3), rat(-2, 1))
        );

        let five = six.rsplit_once("[[potential]]").unwrap().0;
        assert!(matches!(
            OperatorModel::from_text(five),
            Err(Error::InvalidModel(msg)) if msg.contains("5 entries")
        ));
    }

    #[test]
    fn load_errors_carry_location() {
        let bad = "q = [2]\n[[hoppings]]\noffset = [1]\nre = \"x/2\"\n";
        match OperatorModel::from_text(bad) {
            Err(Error::Parse { location, .. }) => assert_eq!(location, "hoppings[0].re"),
            other => panic!("{other:?}"),
        }
        let syntax = "q = [2]\nd = = 1\n";
        match OperatorModel::from_text(syntax) {
            Err(Error::Parse { location, .. }) => assert_eq!(location, "line 2"),
            other => panic!("{other:?}"),
        }
        let mismatch = "d = 3\nq = [2, 2]\npreset = \"square\"\n";
        assert!(matches!(
            OperatorModel::from_text(mismatch),
            Err(Error::InvalidModel(_))
        ));
        let unknown = "q = [2]\npreset = \"square\"\nfoo = 1\n";
        assert!(OperatorModel::from_text(unknown).is_err());
        let empty = "q = [1]\n";
        assert!(matches!(
            OperatorModel::from_text(empty),
            Err(Error::InvalidModel(_))
        ));
    }

    #[test]
    fn json_round_trip_and_digest() {
        let m = OperatorModel::from_preset(
            Preset::Triangular,
            vec![2, 1],
            vec![
                GaussianRational::new(rat(1, 2), rat(0, 1)),
                GaussianRational::new(rat(-3, 1), rat(2, 5)),
            ],
        )
        .unwrap();
        let json = m.to_canonical_json();
        let back = OperatorModel::from_text(&json).unwrap();
        assert_eq!(back, m);
        assert_eq!(back.sha256(), m.sha256());
        assert_eq!(m.sha256().len(), 64);
        let other = m.with_potential(vec![GaussianRational::zero(); 2]).unwrap();
        assert_ne!(other.sha256(), m.sha256());
    }

    #[test]
    fn cell_order_and_working_order() {
        assert_eq!(
            fundamental_cell(&[2, 2]),
            vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]
        );
        assert_eq!(fundamental_cell(&[1, 1, 1]), vec![vec![0, 0, 0]]);
        assert_eq!(fundamental_cell(&[2, 3]).len(), 6);
        assert_eq!(working_order(&[2, 3]), 12);
        assert_eq!(working_order(&[1]), 4);
        assert_eq!(working_order(&[5, 3]), 60);
    }

    #[test]
    fn self_adjointness() {
        let free = OperatorModel::preset_free(Preset::Square(2), vec![2, 1]).unwrap();
        assert!(free.is_self_adjoint());
        let complex_v = free
            .with_potential(vec![
                GaussianRational::from_integers(0, 1),
                GaussianRational::zero(),
            ])
            .unwrap();
        assert!(!complex_v.is_self_adjoint());
        let mut hop = BTreeMap::new();
        hop.insert(vec![1], GaussianRational::from_integers(0, 1));
        hop.insert(vec![-1], GaussianRational::from_integers(0, -1));
        let m = OperatorModel::new(vec![1], hop, vec![GaussianRational::zero()]).unwrap();
        assert!(m.is_self_adjoint());
    }
}
