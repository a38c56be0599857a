//! Grothendieck-ring identities between a finite-dimensional class and
//! prefundamental classes, generated from a q-character by replacing each
//! `Y_{i,a}` with `[ω_i][L^+_{i,aq_i^{-1}}]/[L^+_{i,aq_i}]` and clearing
//! denominators.
//!
//! Both sides of every relation are classes of a simple module tensored
//! with a one-dimensional one; this is recorded here and never checked.

use std::cmp::Reverse;
use std::collections::BTreeMap;
use std::fmt;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cartan::{ht_decompose, CartanDatum, WeightVector};
use crate::scalars::{parse_rational, rational_string};
use crate::ymono::{
    eval_ell_weight, prefund_ellweight, weight_ell_weight, weight_of, EllWeight, MonoError, Monomial, QCharacter,
    SpectralPoint,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GrError {
    #[error("character is empty")]
    EmptyCharacter,
    #[error("character has no unique highest dominant monomial")]
    NoHighestMonomial,
    #[error("spectral points with different anchors are not supported")]
    MixedAnchorsUnsupported,
    #[error("operation needs a relation of flavor {expected}, got {got}")]
    WrongFlavor { expected: &'static str, got: Flavor },
    #[error("multiset difference would be negative")]
    NegativeMultiplicity,
    #[error(transparent)]
    Mono(#[from] MonoError),
    #[error("malformed relation record: {0}")]
    Parse(String),
}

/// Family of a prefundamental class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PrefundKind {
    #[serde(rename = "L+")]
    LPlus,
    #[serde(rename = "L-")]
    LMinus,
    #[serde(rename = "R+")]
    RPlus,
    #[serde(rename = "R-")]
    RMinus,
}

impl PrefundKind {
    fn latex_parts(self) -> (&'static str, &'static str) {
        match self {
            PrefundKind::LPlus => ("L", "+"),
            PrefundKind::LMinus => ("L", "-"),
            PrefundKind::RPlus => ("R", "+"),
            PrefundKind::RMinus => ("R", "-"),
        }
    }
}

/// Which prefundamental family a relation is written in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Flavor {
    /// Positive prefundamentals `L^+` (category O).
    #[serde(rename = "L+")]
    LPlus,
    /// Positive prefundamentals `R^+` (the dual category).
    #[serde(rename = "R+")]
    RPlus,
    /// Negative prefundamentals `L^-`.
    #[serde(rename = "L-")]
    LMinus,
    /// Negative prefundamentals `R^-`.
    #[serde(rename = "R-")]
    RMinus,
}

impl Flavor {
    pub fn kind(self) -> PrefundKind {
        match self {
            Flavor::LPlus => PrefundKind::LPlus,
            Flavor::RPlus => PrefundKind::RPlus,
            Flavor::LMinus => PrefundKind::LMinus,
            Flavor::RMinus => PrefundKind::RMinus,
        }
    }
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, b) = self.kind().latex_parts();
        write!(f, "{}{}", a, b)
    }
}

/// Multiset of prefundamental classes `[X^±_{i,a}]`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrefundMultiset(BTreeMap<(PrefundKind, usize, SpectralPoint), u32>);

impl PrefundMultiset {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, kind: PrefundKind, i: usize, a: SpectralPoint, k: u32) {
        if k > 0 {
            *self.0.entry((kind, i, a)).or_insert(0) += k;
        }
    }

    pub fn single(kind: PrefundKind, i: usize, a: SpectralPoint) -> Self {
        let mut s = Self::new();
        s.insert(kind, i, a, 1);
        s
    }

    pub fn entries(&self) -> impl Iterator<Item = (PrefundKind, usize, &SpectralPoint, u32)> {
        self.0.iter().map(|((k, i, a), m)| (*k, *i, a, *m))
    }

    pub fn multiplicity(&self, kind: PrefundKind, i: usize, a: &SpectralPoint) -> u32 {
        self.0.get(&(kind, i, a.clone())).copied().unwrap_or(0)
    }

    pub fn cardinality(&self) -> u32 {
        self.0.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn union(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (k, m) in &o.0 {
            *out.0.entry(k.clone()).or_insert(0) += m;
        }
        out
    }

    pub fn difference(&self, o: &Self) -> Result<Self, GrError> {
        let mut out = self.clone();
        for (k, m) in &o.0 {
            let cur = out.0.get(k).copied().unwrap_or(0);
            if cur < *m {
                return Err(GrError::NegativeMultiplicity);
            }
            if cur == *m {
                out.0.remove(k);
            } else {
                out.0.insert(k.clone(), cur - m);
            }
        }
        Ok(out)
    }

    /// Per-node count, used for the `X_i` bookkeeping in verification.
    pub fn node_counts(&self, rank: usize) -> Vec<u32> {
        let mut c = vec![0; rank];
        for ((_, i, _), m) in &self.0 {
            c[i - 1] += m;
        }
        c
    }

    fn map_kind(&self, f: impl Fn(PrefundKind) -> PrefundKind) -> Self {
        PrefundMultiset(self.0.iter().map(|((k, i, a), m)| ((f(*k), *i, a.clone()), *m)).collect())
    }

    pub fn to_latex(&self) -> String {
        self.entries()
            .map(|(k, i, a, m)| {
                let (l, s) = k.latex_parts();
                let base = format!("[{}_{{{},{}}}^{}]", l, i, a.to_latex(), s);
                if m == 1 {
                    base
                } else {
                    format!("{}^{{{}}}", base, m)
                }
            })
            .collect()
    }

    pub fn to_records(&self) -> Vec<PrefundRecord> {
        self.entries()
            .map(|(kind, i, a, mult)| PrefundRecord { kind, i, anchor: a.anchor.0.clone(), shift: rational_string(a.shift), mult })
            .collect()
    }

    pub fn from_records(r: &[PrefundRecord]) -> Result<Self, GrError> {
        let mut s = Self::new();
        for x in r {
            let sh = parse_rational(&x.shift).map_err(|e| GrError::Parse(e.to_string()))?;
            if x.mult == 0 {
                return Err(GrError::Parse("zero multiplicity".into()));
            }
            s.insert(x.kind, x.i, SpectralPoint::new(&x.anchor, sh), x.mult);
        }
        Ok(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PrefundRecord {
    pub kind: PrefundKind,
    pub i: usize,
    pub anchor: String,
    pub shift: String,
    pub mult: u32,
}

/// `coeff * [weight] * prefund`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TQTerm {
    pub weight: WeightVector,
    pub prefund: PrefundMultiset,
    pub coeff: i64,
}

/// `[V] * lhs_prefund = sum of rhs terms`, where `V` has highest monomial `lhs_label`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TQRelation {
    pub lhs_label: Monomial,
    pub lhs_prefund: PrefundMultiset,
    pub rhs: Vec<TQTerm>,
    pub flavor: Flavor,
}

/// `e(m)`: signed exponents of `[L^+_{i,b}]` produced by the substitution.
fn prefund_exponents(cd: &CartanDatum, m: &Monomial) -> BTreeMap<(usize, SpectralPoint), i64> {
    let mut e: BTreeMap<(usize, SpectralPoint), i64> = BTreeMap::new();
    for (i, a, u) in m.factors() {
        let di = cd.d(i);
        *e.entry((i, a.shifted_int(-di))).or_insert(0) += u;
        *e.entry((i, a.shifted_int(di))).or_insert(0) -= u;
    }
    e.retain(|_, v| *v != 0);
    e
}

/// The dominant monomial whose weight lies above every other weight.
fn highest_monomial(cd: &CartanDatum, chi: &QCharacter) -> Result<Monomial, GrError> {
    let above_all = |m: &Monomial| {
        let top = weight_of(cd.rank(), m);
        chi.terms().all(|(x, _)| ht_decompose(cd, &top, &weight_of(cd.rank(), x)).is_ok())
    };
    let found: Vec<(Monomial, i64)> = chi.dominant_monomials().into_iter().filter(|(m, _)| above_all(m)).collect();
    match found.as_slice() {
        [(m, 1)] => Ok(m.clone()),
        _ => Err(GrError::NoHighestMonomial),
    }
}

/// Build the relation from a finite q-character with one highest dominant monomial.
pub fn tq_relation(cd: &CartanDatum, chi: &QCharacter, flavor: Flavor) -> Result<TQRelation, GrError> {
    if chi.is_empty() {
        return Err(GrError::EmptyCharacter);
    }
    if !matches!(flavor, Flavor::LPlus | Flavor::RPlus) {
        return Err(GrError::WrongFlavor { expected: "L+ or R+", got: flavor });
    }
    let highest = highest_monomial(cd, chi)?;
    let mut anchor = None;
    for (m, _) in chi.terms() {
        if let Some(a) = m.anchor().map_err(|_| GrError::MixedAnchorsUnsupported)? {
            if anchor.get_or_insert(a.clone()) != &a {
                return Err(GrError::MixedAnchorsUnsupported);
            }
        }
    }
    let exps: Vec<(&Monomial, i64, BTreeMap<(usize, SpectralPoint), i64>)> =
        chi.terms().map(|(m, k)| (m, k, prefund_exponents(cd, m))).collect();
    let mut denom: BTreeMap<(usize, SpectralPoint), i64> = BTreeMap::new();
    for (_, _, e) in &exps {
        for (key, v) in e {
            if *v < 0 {
                let d = denom.entry(key.clone()).or_insert(0);
                *d = (*d).max(-v);
            }
        }
    }
    let kind = flavor.kind();
    let mut lhs = PrefundMultiset::new();
    for ((i, a), v) in &denom {
        lhs.insert(kind, *i, a.clone(), *v as u32);
    }
    let top = weight_of(cd.rank(), &highest);
    let mut rhs: Vec<(i64, TQTerm)> = Vec::new();
    for (m, k, e) in &exps {
        let mut total = denom.clone();
        for (key, v) in e {
            *total.entry(key.clone()).or_insert(0) += v;
        }
        let mut ps = PrefundMultiset::new();
        for ((i, a), v) in total {
            debug_assert!(v >= 0);
            ps.insert(kind, i, a, v as u32);
        }
        let weight = weight_of(cd.rank(), m);
        let height = ht_decompose(cd, &top, &weight).map(|h| h.iter().sum()).unwrap_or(i64::MAX);
        rhs.push((height, TQTerm { weight, prefund: ps, coeff: *k }));
    }
    rhs.sort_by(|(h1, t1), (h2, t2)| {
        (h1, Reverse(&t1.weight), &t1.prefund).cmp(&(h2, Reverse(&t2.weight), &t2.prefund))
    });
    let mut merged: Vec<TQTerm> = Vec::new();
    for (_, t) in rhs {
        match merged.last_mut() {
            Some(last) if last.weight == t.weight && last.prefund == t.prefund => last.coeff += t.coeff,
            _ => merged.push(t),
        }
    }
    merged.retain(|t| t.coeff != 0);
    Ok(TQRelation { lhs_label: highest, lhs_prefund: lhs, rhs: merged, flavor })
}

/// Formal sum of `(ℓ-weight, X-exponents)` with integer coefficients.
#[derive(Default)]
struct FormalSum(Vec<(EllWeight, Vec<u32>, i64)>);

impl FormalSum {
    fn add(&mut self, w: EllWeight, x: Vec<u32>, k: i64) {
        if let Some(e) = self.0.iter_mut().find(|(w2, x2, _)| *w2 == w && *x2 == x) {
            e.2 += k;
        } else {
            self.0.push((w, x, k));
        }
    }

    fn is_zero(&self) -> bool {
        self.0.iter().all(|(_, _, k)| *k == 0)
    }
}

fn prefund_image(cd: &CartanDatum, p: &PrefundMultiset) -> EllWeight {
    let mut w = EllWeight::one(cd.rank());
    for (_, i, a, m) in p.entries() {
        w = w.mul(&prefund_ellweight(cd.rank(), i, a, true).pow(m as i64));
    }
    w
}

/// Check the relation in the ring where `[L^+_{i,a}] = Ψ_{i,a} X_i`,
/// `[λ]` is its constant ℓ-weight and `[V]` is `chi`.
pub fn verify_tq(cd: &CartanDatum, rel: &TQRelation, chi: &QCharacter) -> Result<bool, GrError> {
    if !matches!(rel.flavor, Flavor::LPlus | Flavor::RPlus) {
        return Err(GrError::WrongFlavor { expected: "L+ or R+", got: rel.flavor });
    }
    let mut sum = FormalSum::default();
    let lhs_w = prefund_image(cd, &rel.lhs_prefund);
    let lhs_x = rel.lhs_prefund.node_counts(cd.rank());
    for (m, k) in chi.terms() {
        sum.add(eval_ell_weight(cd, m)?.mul(&lhs_w), lhs_x.clone(), k);
    }
    for t in &rel.rhs {
        let w = weight_ell_weight(cd, &t.weight).mul(&prefund_image(cd, &t.prefund));
        sum.add(w, t.prefund.node_counts(cd.rank()), -t.coeff);
    }
    Ok(sum.is_zero())
}

/// Swap `L^+` and `R^+`; the multisets are unchanged.
pub fn dualize(rel: &TQRelation) -> Result<TQRelation, GrError> {
    let (flavor, from, to) = match rel.flavor {
        Flavor::LPlus => (Flavor::RPlus, PrefundKind::LPlus, PrefundKind::RPlus),
        Flavor::RPlus => (Flavor::LPlus, PrefundKind::RPlus, PrefundKind::LPlus),
        f => return Err(GrError::WrongFlavor { expected: "L+ or R+", got: f }),
    };
    let swap = |k: PrefundKind| if k == from { to } else { k };
    Ok(TQRelation {
        lhs_label: rel.lhs_label.clone(),
        lhs_prefund: rel.lhs_prefund.map_kind(swap),
        rhs: rel.rhs.iter().map(|t| TQTerm { weight: t.weight.clone(), prefund: t.prefund.map_kind(swap), coeff: t.coeff }).collect(),
        flavor,
    })
}

/// Rewrite in negative prefundamentals: `L^+` becomes `R^-` and `R^+`
/// becomes `L^-`, weights are negated, and the finite-dimensional class
/// `L(Y_{i,a})` becomes `L(Y_{ī, a q^{∓ r h}})` with `r` the lacing number
/// and `h` the dual Coxeter number.
pub fn negative_form(cd: &CartanDatum, rel: &TQRelation) -> Result<TQRelation, GrError> {
    let (flavor, to, sign) = match rel.flavor {
        Flavor::LPlus => (Flavor::RMinus, PrefundKind::RMinus, -1),
        Flavor::RPlus => (Flavor::LMinus, PrefundKind::LMinus, 1),
        f => return Err(GrError::WrongFlavor { expected: "L+ or R+", got: f }),
    };
    let s = Rational64::from_integer(sign * cd.lacing() * cd.dual_coxeter());
    let label = Monomial::from_factors(rel.lhs_label.factors().map(|(i, a, e)| (cd.dual_node(i), a.shifted(s), e)));
    Ok(TQRelation {
        lhs_label: label,
        lhs_prefund: rel.lhs_prefund.map_kind(|_| to),
        rhs: rel.rhs.iter().map(|t| TQTerm { weight: t.weight.neg(), prefund: t.prefund.map_kind(|_| to), coeff: t.coeff }).collect(),
        flavor,
    })
}

impl TQRelation {
    pub fn rhs_total(&self) -> i64 {
        self.rhs.iter().map(|t| t.coeff).sum()
    }

    pub fn to_latex(&self) -> String {
        let lhs = format!("[L({})]{}", self.lhs_label.to_latex(), self.lhs_prefund.to_latex());
        let terms: Vec<String> = self
            .rhs
            .iter()
            .map(|t| {
                let c = if t.coeff == 1 { String::new() } else { t.coeff.to_string() };
                let w = if t.weight.is_zero() { String::new() } else { format!("[{}]", t.weight.to_latex()) };
                let p = t.prefund.to_latex();
                if p.is_empty() && w.is_empty() {
                    format!("{}[0]", c)
                } else {
                    format!("{}{}{}", c, p, w)
                }
            })
            .collect();
        format!("{} = {}", lhs, terms.join(" + "))
    }

    pub fn to_json(&self) -> TQRelationJson {
        TQRelationJson {
            flavor: self.flavor,
            lhs: LhsJson { rep: self.lhs_label.clone(), prefund: self.lhs_prefund.to_records() },
            rhs: self
                .rhs
                .iter()
                .map(|t| TermJson { coeff: t.coeff, weight: t.weight.0.clone(), prefund: t.prefund.to_records() })
                .collect(),
        }
    }

    pub fn from_json(j: &TQRelationJson) -> Result<Self, GrError> {
        Ok(TQRelation {
            lhs_label: j.lhs.rep.clone(),
            lhs_prefund: PrefundMultiset::from_records(&j.lhs.prefund)?,
            rhs: j
                .rhs
                .iter()
                .map(|t| {
                    Ok(TQTerm { weight: WeightVector(t.weight.clone()), prefund: PrefundMultiset::from_records(&t.prefund)?, coeff: t.coeff })
                })
                .collect::<Result<_, GrError>>()?,
            flavor: j.flavor,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LhsJson {
    pub rep: Monomial,
    pub prefund: Vec<PrefundRecord>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermJson {
    pub coeff: i64,
    pub weight: Vec<i64>,
    pub prefund: Vec<PrefundRecord>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TQRelationJson {
    pub flavor: Flavor,
    pub lhs: LhsJson,
    pub rhs: Vec<TermJson>,
}

/// Canonical token form of a relation written in bracket notation:
/// whitespace removed, each product's bracket factors sorted, the
/// right-hand terms sorted. Two relations that differ only in the order
/// of factors or terms normalize to the same string.
pub fn normalize_relation_latex(s: &str) -> String {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let (lhs, rhs) = compact.split_once('=').unwrap_or((&compact, ""));
    let norm_product = |p: &str| -> String {
        let mut toks = bracket_tokens(p);
        toks.sort();
        toks.concat()
    };
    let mut terms: Vec<String> = split_top_level(rhs, '+').iter().map(|t| norm_product(t)).collect();
    terms.sort();
    format!("{}={}", norm_product(lhs), terms.join("+"))
}

/// Split at `sep` outside of any brackets or braces.
fn split_top_level(s: &str, sep: char) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for c in s.chars() {
        match c {
            '[' | '{' | '(' => depth += 1,
            ']' | '}' | ')' => depth -= 1,
            _ => {}
        }
        if c == sep && depth == 0 {
            out.push(std::mem::take(&mut cur));
        } else {
            cur.push(c);
        }
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    out
}

/// Tokens of a product: each `[...]` group with any trailing `^{..}`,
/// plus a leading integer coefficient if present.
fn bracket_tokens(p: &str) -> Vec<String> {
    let mut toks = Vec::new();
    let chars: Vec<char> = p.chars().collect();
    let mut i = 0;
    let mut lead = String::new();
    while i < chars.len() && chars[i] != '[' {
        lead.push(chars[i]);
        i += 1;
    }
    if !lead.is_empty() {
        toks.push(format!("#{}", lead));
    }
    while i < chars.len() {
        let start = i;
        let mut depth = 0;
        loop {
            match chars[i] {
                '[' | '{' | '(' => depth += 1,
                ']' | '}' | ')' => depth -= 1,
                _ => {}
            }
            i += 1;
            if depth == 0 || i >= chars.len() {
                break;
            }
        }
        if i + 1 < chars.len() && chars[i] == '^' && chars[i + 1] == '{' {
            while i < chars.len() && chars[i] != '}' {
                i += 1;
            }
            i += 1;
        }
        toks.push(chars[start..i.min(chars.len())].iter().collect());
    }
    toks
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::{build_cartan, CartanType};
    use crate::qchar::{fm_fundamental, FMConfig};

    #[test]
    fn sl2_relation() {
        let a1 = build_cartan(CartanType::A, 1).unwrap();
        let a = SpectralPoint::at("a", 0);
        let chi = fm_fundamental(&a1, 1, &a, FMConfig::default()).unwrap().chi;
        let rel = tq_relation(&a1, &chi, Flavor::LPlus).unwrap();
        let expect = "[L(Y_{1,a})][L_{1,aq}^+] = [L_{1,aq^{-1}}^+][\\omega_1] + [L_{1,aq^3}^+][-\\omega_1]";
        assert_eq!(normalize_relation_latex(&rel.to_latex()), normalize_relation_latex(expect));
        assert!(verify_tq(&a1, &rel, &chi).unwrap());
        assert_eq!(rel.rhs_total(), 2);
    }

    #[test]
    fn corrupted_relation_fails() {
        let a1 = build_cartan(CartanType::A, 1).unwrap();
        let a = SpectralPoint::at("a", 0);
        let chi = fm_fundamental(&a1, 1, &a, FMConfig::default()).unwrap().chi;
        let mut rel = tq_relation(&a1, &chi, Flavor::LPlus).unwrap();
        let t = &mut rel.rhs[1];
        let (k, i, p, m) = t.prefund.entries().next().map(|(k, i, p, m)| (k, i, p.clone(), m)).unwrap();
        t.prefund = PrefundMultiset::new();
        t.prefund.insert(k, i, p.shifted_int(1), m);
        assert!(!verify_tq(&a1, &rel, &chi).unwrap());
    }

    #[test]
    fn trivial_character() {
        let a1 = build_cartan(CartanType::A, 1).unwrap();
        let rel = tq_relation(&a1, &QCharacter::unit(), Flavor::LPlus).unwrap();
        assert!(rel.lhs_prefund.is_empty());
        assert_eq!(rel.rhs.len(), 1);
        assert!(verify_tq(&a1, &rel, &QCharacter::unit()).unwrap());
    }

    #[test]
    fn duals_of_sl2() {
        let a1 = build_cartan(CartanType::A, 1).unwrap();
        let a = SpectralPoint::at("a", 0);
        let chi = fm_fundamental(&a1, 1, &a, FMConfig::default()).unwrap().chi;
        let rel = tq_relation(&a1, &chi, Flavor::LPlus).unwrap();
        let r = dualize(&rel).unwrap();
        assert_eq!(
            normalize_relation_latex(&r.to_latex()),
            normalize_relation_latex("[L(Y_{1,a})][R_{1,aq}^+] = [R_{1,aq^{-1}}^+][\\omega_1] + [R_{1,aq^3}^+][-\\omega_1]")
        );
        assert_eq!(dualize(&r).unwrap(), rel);
        let neg = negative_form(&a1, &r).unwrap();
        assert_eq!(
            normalize_relation_latex(&neg.to_latex()),
            normalize_relation_latex("[L(Y_{1,aq^2})][L_{1,aq}^-] = [L_{1,aq^{-1}}^-][-\\omega_1] + [L_{1,aq^3}^-][\\omega_1]")
        );
    }

    #[test]
    fn json_roundtrip() {
        let b2 = build_cartan(CartanType::B, 2).unwrap();
        let chi = fm_fundamental(&b2, 2, &SpectralPoint::q_pow(0), FMConfig::default()).unwrap().chi;
        let rel = tq_relation(&b2, &chi, Flavor::LPlus).unwrap();
        let j = serde_json::to_string(&rel.to_json()).unwrap();
        let back: TQRelationJson = serde_json::from_str(&j).unwrap();
        assert_eq!(TQRelation::from_json(&back).unwrap(), rel);
    }

    #[test]
    fn normalizer_ignores_order() {
        let a = "[A][B]^{2} = [C][x] + 2[D]";
        let b = "[B]^{2}[A]=2[D]+[x][C]";
        assert_eq!(normalize_relation_latex(a), normalize_relation_latex(b));
        assert_ne!(normalize_relation_latex(a), normalize_relation_latex("[A][B] = [C][x] + 2[D]"));
    }
}
