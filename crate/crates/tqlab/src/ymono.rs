//! Monomials in the variables `Y_{i,a}`, formal sums of them, weights,
//! dominance and the rational ℓ-weights they evaluate to.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use num_rational::Rational64;
use num_traits::One;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cartan::{CartanDatum, WeightVector};
use crate::scalars::{
    eval_qrat, fmt_q_power, parse_rational, rational_string, EvalPoint, Field, QRat, QSeries, RatFn, ScalarError, UPoly,
    Var,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MonoError {
    #[error("spectral points with different anchors ({0} and {1}) cannot be combined symbolically")]
    MixedAnchors(String, String),
    #[error("no numeric value supplied for anchor {0}")]
    MissingAnchor(String),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error("malformed monomial record: {0}")]
    Parse(String),
}

/// Opaque symbolic anchor. Distinct anchors are never compared by value.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Anchor(pub String);

impl Anchor {
    pub fn new(s: &str) -> Self {
        Anchor(s.to_string())
    }

    /// The anchor named `1`, used when spectral points are plain powers of `q`.
    pub fn unit() -> Self {
        Anchor("1".into())
    }

    pub fn is_unit(&self) -> bool {
        self.0 == "1"
    }
}

/// `a = anchor * q^shift`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SpectralPoint {
    pub anchor: Anchor,
    pub shift: Rational64,
}

impl SpectralPoint {
    pub fn new(anchor: &str, shift: Rational64) -> Self {
        SpectralPoint { anchor: Anchor::new(anchor), shift }
    }

    pub fn q_pow(shift: i64) -> Self {
        SpectralPoint { anchor: Anchor::unit(), shift: Rational64::from_integer(shift) }
    }

    pub fn at(anchor: &str, shift: i64) -> Self {
        Self::new(anchor, Rational64::from_integer(shift))
    }

    /// Multiply by `q^s`.
    pub fn shifted(&self, s: Rational64) -> Self {
        SpectralPoint { anchor: self.anchor.clone(), shift: self.shift + s }
    }

    pub fn shifted_int(&self, s: i64) -> Self {
        self.shifted(Rational64::from_integer(s))
    }

    /// `q^shift`, the value of the point once its anchor is set to 1.
    pub fn q_part(&self) -> QRat {
        QRat::q_pow(self.shift)
    }

    pub fn to_latex(&self) -> String {
        self.render(true)
    }

    fn render(&self, latex: bool) -> String {
        let qp = if *self.shift.numer() == 0 { String::new() } else { fmt_q_power(self.shift, latex) };
        match (self.anchor.is_unit(), qp.is_empty()) {
            (true, true) => "1".into(),
            (true, false) => qp,
            (false, true) => self.anchor.0.clone(),
            (false, false) if latex => format!("{}{}", self.anchor.0, qp),
            (false, false) => format!("{}*{}", self.anchor.0, qp),
        }
    }

    pub fn value_at(&self, point: &EvalPoint, anchors: &BTreeMap<Anchor, Complex64>) -> Result<Complex64, MonoError> {
        let a = if self.anchor.is_unit() {
            Complex64::new(1.0, 0.0)
        } else {
            *anchors.get(&self.anchor).ok_or_else(|| MonoError::MissingAnchor(self.anchor.0.clone()))?
        };
        Ok(a * point.q_pow(*self.shift.numer() as f64 / *self.shift.denom() as f64))
    }
}

impl fmt::Display for SpectralPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(false))
    }
}

/// A Laurent monomial `prod Y_{i,a}^{u_{i,a}}`; keys are `(node, point)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(BTreeMap<(usize, SpectralPoint), i64>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(BTreeMap::new())
    }

    pub fn y(i: usize, a: SpectralPoint) -> Self {
        Self::y_pow(i, a, 1)
    }

    pub fn y_pow(i: usize, a: SpectralPoint, e: i64) -> Self {
        let mut m = Self::one();
        m.mul_factor(i, a, e);
        m
    }

    pub fn from_factors<I: IntoIterator<Item = (usize, SpectralPoint, i64)>>(it: I) -> Self {
        let mut m = Self::one();
        for (i, a, e) in it {
            m.mul_factor(i, a, e);
        }
        m
    }

    fn mul_factor(&mut self, i: usize, a: SpectralPoint, e: i64) {
        if e == 0 {
            return;
        }
        let key = (i, a);
        let v = self.0.get(&key).copied().unwrap_or(0) + e;
        if v == 0 {
            self.0.remove(&key);
        } else {
            self.0.insert(key, v);
        }
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for ((i, a), e) in &o.0 {
            out.mul_factor(*i, a.clone(), *e);
        }
        out
    }

    pub fn inv(&self) -> Self {
        self.pow(-1)
    }

    pub fn pow(&self, k: i64) -> Self {
        if k == 0 {
            return Self::one();
        }
        Monomial(self.0.iter().map(|(key, e)| (key.clone(), e * k)).collect())
    }

    pub fn div(&self, o: &Self) -> Self {
        self.mul(&o.inv())
    }

    /// Factors `(i, a, u_{i,a})` in key order.
    pub fn factors(&self) -> impl Iterator<Item = (usize, &SpectralPoint, i64)> {
        self.0.iter().map(|((i, a), e)| (*i, a, *e))
    }

    pub fn exponent(&self, i: usize, a: &SpectralPoint) -> i64 {
        self.0.get(&(i, a.clone())).copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Multiply every spectral point by `q^s`.
    pub fn shift_points(&self, s: Rational64) -> Self {
        Monomial(self.0.iter().map(|((i, a), e)| ((*i, a.shifted(s)), *e)).collect())
    }

    pub fn is_dominant(&self) -> bool {
        self.0.values().all(|&e| e >= 0)
    }

    /// Dominant with respect to the single node `j`.
    pub fn is_dominant_at(&self, j: usize) -> bool {
        self.factors().all(|(i, _, e)| i != j || e >= 0)
    }

    /// The monomial restricted to node `j`.
    pub fn restrict(&self, j: usize) -> Self {
        Monomial(self.0.iter().filter(|((i, _), _)| *i == j).map(|(k, e)| (k.clone(), *e)).collect())
    }

    /// The unique anchor of all points, if there is exactly one.
    pub fn anchor(&self) -> Result<Option<Anchor>, MonoError> {
        let mut out: Option<Anchor> = None;
        for (_, a, _) in self.factors() {
            match &out {
                None => out = Some(a.anchor.clone()),
                Some(b) if *b != a.anchor => return Err(MonoError::MixedAnchors(b.0.clone(), a.anchor.0.clone())),
                _ => {}
            }
        }
        Ok(out)
    }

    pub fn to_latex(&self) -> String {
        if self.is_one() {
            return "1".into();
        }
        self.factors()
            .map(|(i, a, e)| {
                let base = format!("Y_{{{},{}}}", i, a.to_latex());
                match e {
                    1 => base,
                    _ => format!("{}^{{{}}}", base, e),
                }
            })
            .collect()
    }

    pub fn to_records(&self) -> Vec<MonomialFactor> {
        self.factors()
            .map(|(i, a, e)| MonomialFactor { i, anchor: a.anchor.0.clone(), shift: rational_string(a.shift), power: e })
            .collect()
    }

    pub fn from_records(recs: &[MonomialFactor]) -> Result<Self, MonoError> {
        let mut m = Self::one();
        for r in recs {
            let s = parse_rational(&r.shift)?;
            if r.power == 0 {
                return Err(MonoError::Parse("zero exponent".into()));
            }
            m.mul_factor(r.i, SpectralPoint::new(&r.anchor, s), r.power);
        }
        Ok(m)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self
            .factors()
            .map(|(i, a, e)| if e == 1 { format!("Y[{},{}]", i, a) } else { format!("Y[{},{}]^{}", i, a, e) })
            .collect();
        f.write_str(&parts.join(" "))
    }
}

/// One entry of the JSON encoding of a monomial.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonomialFactor {
    pub i: usize,
    pub anchor: String,
    pub shift: String,
    pub power: i64,
}

impl Serialize for Monomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_records().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Monomial {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let recs = Vec::<MonomialFactor>::deserialize(d)?;
        Monomial::from_records(&recs).map_err(serde::de::Error::custom)
    }
}

/// `A_{i,a} = Y_{i,aq_i^{-1}} Y_{i,aq_i} * prod_{j: C_ji = -1} Y_{j,a}^{-1}
///  * prod_{j: C_ji = -2} (Y_{j,aq^{-1}} Y_{j,aq})^{-1}
///  * prod_{j: C_ji = -3} (Y_{j,aq^{-2}} Y_{j,a} Y_{j,aq^2})^{-1}`.
pub fn a_monomial(cd: &CartanDatum, i: usize, a: &SpectralPoint) -> Monomial {
    let di = cd.d(i);
    let mut m = Monomial::y(i, a.shifted_int(-di)).mul(&Monomial::y(i, a.shifted_int(di)));
    for j in cd.nodes() {
        if j == i {
            continue;
        }
        let shifts: &[i64] = match cd.c(j, i) {
            0 => &[],
            -1 => &[0],
            -2 => &[-1, 1],
            -3 => &[-2, 0, 2],
            c => unreachable!("Cartan entry {} outside finite type", c),
        };
        for &s in shifts {
            m.mul_factor(j, a.shifted_int(s), -1);
        }
    }
    m
}

/// `ϖ(m) = sum u_{i,a} ω_i`.
pub fn weight_of(rank: usize, m: &Monomial) -> WeightVector {
    let mut w = WeightVector::zero(rank);
    for (i, _, e) in m.factors() {
        w.0[i - 1] += e;
    }
    w
}

// ---------------------------------------------------------------------------

/// A formal sum of monomials with integer multiplicities.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct QCharacter {
    #[serde(with = "term_list")]
    terms: BTreeMap<Monomial, i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tag: Option<String>,
}

mod term_list {
    use super::*;
    use serde::{Deserializer, Serializer};

    #[derive(Serialize, Deserialize)]
    #[serde(deny_unknown_fields)]
    struct Term {
        monomial: Monomial,
        mult: i64,
    }

    pub fn serialize<S: Serializer>(m: &BTreeMap<Monomial, i64>, s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<Term> = m.iter().map(|(k, c)| Term { monomial: k.clone(), mult: *c }).collect();
        v.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<Monomial, i64>, D::Error> {
        let v = Vec::<Term>::deserialize(d)?;
        let mut out = BTreeMap::new();
        for t in v {
            *out.entry(t.monomial).or_insert(0) += t.mult;
        }
        out.retain(|_, c| *c != 0);
        Ok(out)
    }
}

impl QCharacter {
    pub fn zero() -> Self {
        QCharacter::default()
    }

    pub fn unit() -> Self {
        Self::from_monomial(Monomial::one())
    }

    pub fn from_monomial(m: Monomial) -> Self {
        let mut c = Self::zero();
        c.add_term(m, 1);
        c
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, i64)>>(it: I) -> Self {
        let mut c = Self::zero();
        for (m, k) in it {
            c.add_term(m, k);
        }
        c
    }

    pub fn with_tag(mut self, tag: impl Into<String>) -> Self {
        self.tag = Some(tag.into());
        self
    }

    pub fn add_term(&mut self, m: Monomial, k: i64) {
        if k == 0 {
            return;
        }
        let v = self.terms.get(&m).copied().unwrap_or(0) + k;
        if v == 0 {
            self.terms.remove(&m);
        } else {
            self.terms.insert(m, v);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, i64)> {
        self.terms.iter().map(|(m, k)| (m, *k))
    }

    pub fn multiplicity(&self, m: &Monomial) -> i64 {
        self.terms.get(m).copied().unwrap_or(0)
    }

    pub fn contains(&self, m: &Monomial) -> bool {
        self.terms.contains_key(m)
    }

    /// Number of distinct monomials.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Sum of multiplicities (the dimension for genuine characters).
    pub fn total_multiplicity(&self) -> i64 {
        self.terms.values().sum()
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        out.tag = None;
        for (m, k) in &o.terms {
            out.add_term(m.clone(), *k);
        }
        out
    }

    pub fn scale_monomial(&self, m: &Monomial) -> Self {
        QCharacter { terms: self.terms.iter().map(|(x, k)| (x.mul(m), *k)).collect(), tag: None }
    }

    pub fn shift_points(&self, s: Rational64) -> Self {
        QCharacter { terms: self.terms.iter().map(|(x, k)| (x.shift_points(s), *k)).collect(), tag: self.tag.clone() }
    }

    pub fn dominant_monomials(&self) -> Vec<(Monomial, i64)> {
        self.terms.iter().filter(|(m, _)| m.is_dominant()).map(|(m, k)| (m.clone(), *k)).collect()
    }

    /// Ordinary character: `ϖ`-image as weight multiplicities.
    pub fn weight_character(&self, rank: usize) -> BTreeMap<WeightVector, i64> {
        let mut out = BTreeMap::new();
        for (m, k) in &self.terms {
            *out.entry(weight_of(rank, m)).or_insert(0) += k;
        }
        out.retain(|_, k| *k != 0);
        out
    }

    pub fn to_latex(&self) -> String {
        if self.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (n, (m, k)) in self.terms.iter().enumerate() {
            let body = m.to_latex();
            let piece = match *k {
                1 => body,
                -1 => format!("-{}", body),
                _ => format!("{}{}", k, body),
            };
            if n > 0 && !piece.starts_with('-') {
                out.push_str(" + ");
            } else if n > 0 {
                out.push(' ');
            }
            out.push_str(&piece);
        }
        out
    }
}

/// Free-module convolution of two characters.
pub fn multiply(x: &QCharacter, y: &QCharacter) -> QCharacter {
    let mut out = QCharacter::zero();
    for (a, ka) in x.terms() {
        for (b, kb) in y.terms() {
            out.add_term(a.mul(b), ka * kb);
        }
    }
    out
}

// ---------------------------------------------------------------------------

/// A rational ℓ-weight: one rational function of `z` per node, each regular
/// and nonzero at `z = 0`. Spectral anchors are absorbed into `z`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EllWeight(pub Vec<RatFn<QRat>>);

impl EllWeight {
    pub fn one(rank: usize) -> Self {
        EllWeight(vec![RatFn::constant(QRat::one()); rank])
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn component(&self, i: usize) -> &RatFn<QRat> {
        &self.0[i - 1]
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.rank(), o.rank());
        EllWeight(self.0.iter().zip(&o.0).map(|(a, b)| a.mul(b)).collect())
    }

    pub fn inv(&self) -> Self {
        EllWeight(self.0.iter().map(|a| a.inv().expect("ℓ-weight components are nonzero")).collect())
    }

    pub fn pow(&self, k: i64) -> Self {
        let base = if k < 0 { self.inv() } else { self.clone() };
        let mut out = Self::one(self.rank());
        for _ in 0..k.unsigned_abs() {
            out = out.mul(&base);
        }
        out
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|c| c.is_one())
    }

    /// Constant terms at `z = 0`.
    pub fn at_zero(&self) -> Vec<QRat> {
        self.0.iter().map(|c| c.eval(&QRat::zero()).expect("regular at zero")).collect()
    }

    pub fn to_series(&self, order: usize) -> Vec<QSeries> {
        self.0.iter().map(|c| QSeries::from_ratfn(Var::Z, c, order).expect("regular at zero")).collect()
    }
}

fn linear_factor(c: QRat) -> UPoly<QRat> {
    // 1 - c z
    UPoly::linear(QRat::one(), c.neg())
}

/// The ℓ-weight of `Y_{i,a}`: component `i` is `q_i (1 - a q_i^{-1} z)/(1 - a q_i z)`.
pub fn y_ell_weight(cd: &CartanDatum, i: usize, a: &SpectralPoint) -> EllWeight {
    let mut w = EllWeight::one(cd.rank());
    let qi = cd.q_i(i);
    let aq = a.q_part();
    let num = linear_factor(&aq / &qi).scale(&qi);
    let den = linear_factor(&aq * &qi);
    w.0[i - 1] = RatFn::new(num, den).expect("nonzero denominator");
    w
}

/// The constant ℓ-weight of the one-dimensional representation `[λ]`:
/// component `j` is `q_j^{λ(α_j^vee)}`.
pub fn weight_ell_weight(cd: &CartanDatum, lambda: &WeightVector) -> EllWeight {
    EllWeight(cd.nodes().map(|j| RatFn::constant(QRat::q_pow_int(cd.d(j) * lambda.coord(j)))).collect())
}

/// `Ψ_{i,a}^{±1}`: component `i` is `(1 - z a)^{±1}`.
pub fn prefund_ellweight(rank: usize, i: usize, a: &SpectralPoint, positive: bool) -> EllWeight {
    let mut w = EllWeight::one(rank);
    let f = RatFn::from_poly(linear_factor(a.q_part()));
    w.0[i - 1] = if positive { f } else { f.inv().expect("nonzero") };
    w
}

/// Evaluate a monomial on `φ^+(z)`. All points must share one anchor, which
/// is treated as a formal unit.
pub fn eval_ell_weight(cd: &CartanDatum, m: &Monomial) -> Result<EllWeight, MonoError> {
    m.anchor()?;
    let mut w = EllWeight::one(cd.rank());
    for (i, a, e) in m.factors() {
        w = w.mul(&y_ell_weight(cd, i, a).pow(e));
    }
    Ok(w)
}

/// Numeric ℓ-weight of a monomial at `z = z0` with explicit anchor values.
pub fn eval_ell_weight_at(
    cd: &CartanDatum,
    m: &Monomial,
    point: &EvalPoint,
    anchors: &BTreeMap<Anchor, Complex64>,
    z0: Complex64,
) -> Result<Vec<Complex64>, MonoError> {
    let mut out = vec![Complex64::one(); cd.rank()];
    for (i, a, e) in m.factors() {
        let qi = eval_qrat(&cd.q_i(i), point)?;
        let av = a.value_at(point, anchors)?;
        let f = qi * (1.0 - av / qi * z0) / (1.0 - av * qi * z0);
        out[i - 1] *= f.powi(e as i32);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::{build_cartan, CartanType};

    fn pt(s: i64) -> SpectralPoint {
        SpectralPoint::at("a", s)
    }

    #[test]
    fn a_monomials_small_types() {
        let a1 = build_cartan(CartanType::A, 1).unwrap();
        assert_eq!(a_monomial(&a1, 1, &pt(0)), Monomial::y(1, pt(-1)).mul(&Monomial::y(1, pt(1))));
        let a2 = build_cartan(CartanType::A, 2).unwrap();
        let expect = Monomial::from_factors([(1, pt(-1), 1), (1, pt(1), 1), (2, pt(0), -1)]);
        assert_eq!(a_monomial(&a2, 1, &pt(0)), expect);
        let b2 = build_cartan(CartanType::B, 2).unwrap();
        let a22 = Monomial::from_factors([(2, pt(-1), 1), (2, pt(1), 1), (1, pt(0), -1)]);
        assert_eq!(a_monomial(&b2, 2, &pt(0)), a22);
        let a21 = Monomial::from_factors([(1, pt(-2), 1), (1, pt(2), 1), (2, pt(-1), -1), (2, pt(1), -1)]);
        assert_eq!(a_monomial(&b2, 1, &pt(0)), a21);
    }

    #[test]
    fn a_monomial_weight_is_simple_root() {
        for (t, n) in [(CartanType::A, 3), (CartanType::B, 3), (CartanType::C, 3), (CartanType::G, 2), (CartanType::F, 4)] {
            let cd = build_cartan(t, n).unwrap();
            for i in cd.nodes() {
                assert_eq!(weight_of(n, &a_monomial(&cd, i, &pt(3))), cd.simple_root(i));
            }
        }
    }

    #[test]
    fn ell_weight_of_y() {
        let a1 = build_cartan(CartanType::A, 1).unwrap();
        let w = eval_ell_weight(&a1, &Monomial::y(1, pt(0))).unwrap();
        let q = QRat::q();
        let expect = RatFn::new(
            UPoly::linear(q.clone(), QRat::from_int(-1)),
            UPoly::linear(QRat::one(), q.neg()),
        )
        .unwrap();
        assert_eq!(w.component(1), &expect);
        let m = Monomial::y(1, pt(2)).mul(&Monomial::y(1, pt(2)).inv());
        assert!(eval_ell_weight(&a1, &m).unwrap().is_one());
    }

    #[test]
    fn mixed_anchors_refused() {
        let a1 = build_cartan(CartanType::A, 1).unwrap();
        let m = Monomial::y(1, pt(0)).mul(&Monomial::y(1, SpectralPoint::at("b", 0)));
        assert!(matches!(eval_ell_weight(&a1, &m), Err(MonoError::MixedAnchors(..))));
    }

    #[test]
    fn dominance() {
        assert!(Monomial::one().is_dominant());
        assert!(Monomial::y(1, pt(0)).is_dominant());
        let m = Monomial::from_factors([(1, pt(2), -1), (2, pt(1), 1)]);
        assert!(!m.is_dominant());
        assert!(m.is_dominant_at(2));
    }

    #[test]
    fn prefund_identity() {
        let p = prefund_ellweight(2, 1, &pt(0), true);
        assert!(p.mul(&prefund_ellweight(2, 1, &pt(0), false)).is_one());
        assert!(p.at_zero().iter().all(|c| c.is_one()));
    }

    #[test]
    fn monomial_json_roundtrip() {
        let m = Monomial::from_factors([(1, SpectralPoint::new("a", Rational64::new(1, 2)), -2), (2, pt(1), 1)]);
        let s = serde_json::to_string(&m).unwrap();
        assert!(s.contains("\"1/2\""));
        let back: Monomial = serde_json::from_str(&s).unwrap();
        assert_eq!(back, m);
        let c = QCharacter::from_terms([(m.clone(), 2), (Monomial::one(), 1)]);
        let back: QCharacter = serde_json::from_str(&serde_json::to_string(&c).unwrap()).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn latex_forms() {
        let m = Monomial::from_factors([(2, SpectralPoint::q_pow(2), -1), (1, SpectralPoint::q_pow(1), 1)]);
        assert_eq!(m.to_latex(), "Y_{1,q}Y_{2,q^2}^{-1}");
        assert_eq!(Monomial::y(1, pt(-1)).to_latex(), "Y_{1,aq^{-1}}");
    }

    #[test]
    fn product_dominants() {
        let x = QCharacter::from_terms([(Monomial::y(1, pt(0)), 1), (Monomial::y_pow(1, pt(2), -1), 1)]);
        let y = x.shift_points(Rational64::from_integer(2));
        let p = multiply(&x, &y);
        assert_eq!(p.len(), 4);
        assert_eq!(p.dominant_monomials().len(), 2);
        assert!(multiply(&x, &QCharacter::zero()).is_empty());
        assert_eq!(multiply(&x, &QCharacter::unit()).terms().count(), 2);
    }
}
