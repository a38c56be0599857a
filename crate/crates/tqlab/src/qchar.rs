//! q-characters: the iterative node-by-node completion for fundamental
//! representations, closed-form sl2 Kirillov-Reshetikhin characters, and
//! truncated characters of negative prefundamental sl2 modules.

use std::collections::BTreeMap;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cartan::{CartanDatum, CartanType};
use crate::ymono::{a_monomial, prefund_ellweight, EllWeight, Monomial, QCharacter, SpectralPoint};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QCharError {
    #[error("expansion did not close within budget ({monomials} monomials, height {height})")]
    BudgetExceeded { monomials: usize, height: usize },
    #[error("type {0} is not on the supported list for the expansion algorithm")]
    UnsupportedType(String),
    #[error("expansion met an inconsistency at {0}")]
    Inconsistent(String),
    #[error("node {node} out of range 1..={rank}")]
    BadNode { node: usize, rank: usize },
    #[error("truncation depths differ ({0} vs {1})")]
    DepthMismatch(usize, usize),
}

/// Termination budget for [`fm_fundamental`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FMConfig {
    pub max_monomials: usize,
    pub max_height: usize,
}

impl Default for FMConfig {
    fn default() -> Self {
        FMConfig { max_monomials: 4096, max_height: 64 }
    }
}

/// A step `A_{i,a}^{-1}` in a witness path.
pub type Witness = Vec<(usize, SpectralPoint)>;

/// A character together with, for every monomial, a list of `A^{-1}`
/// factors that turns the highest monomial into it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessedCharacter {
    pub highest: Monomial,
    pub chi: QCharacter,
    pub witnesses: BTreeMap<Monomial, Witness>,
}

impl WitnessedCharacter {
    pub fn witness(&self, m: &Monomial) -> Option<&Witness> {
        self.witnesses.get(m)
    }

    /// Re-multiply every witness path and compare with its monomial.
    pub fn check_witnesses(&self, cd: &CartanDatum) -> bool {
        self.chi.terms().all(|(m, _)| {
            self.witnesses.get(m).is_some_and(|w| apply_witness(cd, &self.highest, w) == *m)
        })
    }
}

pub fn apply_witness(cd: &CartanDatum, start: &Monomial, w: &[(usize, SpectralPoint)]) -> Monomial {
    w.iter().fold(start.clone(), |m, (i, a)| m.div(&a_monomial(cd, *i, a)))
}

pub fn is_supported(cd: &CartanDatum) -> bool {
    matches!((cd.kind(), cd.rank()), (CartanType::A, 1..=4) | (CartanType::B, 2))
}

/// Strings `b, b q_j^2, ..., b q_j^{2(k-1)}` (as lists of points, bottom
/// first) covering the points of a dominant one-node monomial, picked
/// greedily from the lowest remaining point.
fn string_decomposition(restricted: &Monomial, dj: i64) -> Vec<Vec<SpectralPoint>> {
    let mut pool: BTreeMap<SpectralPoint, i64> = BTreeMap::new();
    for (_, a, e) in restricted.factors() {
        *pool.entry(a.clone()).or_insert(0) += e;
    }
    let mut out = Vec::new();
    while let Some(start) = pool.keys().next().cloned() {
        let mut s = vec![];
        let mut p = start;
        while let Some(c) = pool.get_mut(&p) {
            *c -= 1;
            if *c == 0 {
                pool.remove(&p);
            }
            s.push(p.clone());
            p = p.shifted_int(2 * dj);
        }
        out.push(s);
    }
    out
}

/// Terms of the sl2 q-character of the simple module with the given
/// dominant one-node highest monomial, each as its list of `A_j^{-1}` points.
pub fn sl2_string_terms(restricted: &Monomial, dj: i64) -> Vec<(Vec<SpectralPoint>, i64)> {
    let mut acc: Vec<(Vec<SpectralPoint>, i64)> = vec![(vec![], 1)];
    for s in string_decomposition(restricted, dj) {
        let top = s.last().expect("nonempty string").clone();
        let k = s.len() as i64;
        let mut next = Vec::new();
        for (pts, mult) in &acc {
            for t in 0..=k {
                let mut p = pts.clone();
                p.extend((0..t).map(|r| top.shifted_int(dj * (1 - 2 * r))));
                next.push((p, *mult));
            }
        }
        acc = next;
    }
    acc
}

/// q-character of `L(Y_{i,a})` by iterative completion along each node.
pub fn fm_fundamental(cd: &CartanDatum, i: usize, a: &SpectralPoint, cfg: FMConfig) -> Result<WitnessedCharacter, QCharError> {
    if i == 0 || i > cd.rank() {
        return Err(QCharError::BadNode { node: i, rank: cd.rank() });
    }
    if !is_supported(cd) {
        return Err(QCharError::UnsupportedType(cd.label()));
    }
    fm_expand(cd, Monomial::y(i, a.clone()), cfg)
}

/// Run the completion from any dominant highest monomial. The result is
/// only guaranteed to be a q-character when the module has a unique
/// dominant monomial.
pub fn fm_expand(cd: &CartanDatum, highest: Monomial, cfg: FMConfig) -> Result<WitnessedCharacter, QCharError> {
    let mut mu: BTreeMap<Monomial, i64> = BTreeMap::new();
    let mut covered: BTreeMap<(Monomial, usize), i64> = BTreeMap::new();
    let mut witnesses: BTreeMap<Monomial, Witness> = BTreeMap::new();
    let mut by_height: BTreeMap<usize, Vec<Monomial>> = BTreeMap::new();
    witnesses.insert(highest.clone(), vec![]);
    mu.insert(highest.clone(), 1);
    by_height.entry(0).or_default().push(highest.clone());

    let mut h = 0;
    while let Some(level) = by_height.remove(&h) {
        if h > cfg.max_height {
            return Err(QCharError::BudgetExceeded { monomials: mu.len(), height: h });
        }
        for m in level {
            if h > 0 {
                if m.is_dominant() {
                    return Err(QCharError::Inconsistent(format!("second dominant monomial {}", m)));
                }
                let val = cd.nodes().map(|j| covered.get(&(m.clone(), j)).copied().unwrap_or(0)).max().unwrap_or(0);
                mu.insert(m.clone(), val);
            }
            let mult = mu[&m];
            for j in cd.nodes() {
                let s = covered.get(&(m.clone(), j)).copied().unwrap_or(0);
                if !m.is_dominant_at(j) {
                    if s < mult {
                        return Err(QCharError::Inconsistent(format!("{} is not covered along node {}", m, j)));
                    }
                    continue;
                }
                let k = mult - s;
                if k <= 0 {
                    continue;
                }
                for (pts, tm) in sl2_string_terms(&m.restrict(j), cd.d(j)) {
                    let steps: Witness = pts.iter().map(|p| (j, p.clone())).collect();
                    let m2 = apply_witness(cd, &m, &steps);
                    *covered.entry((m2.clone(), j)).or_insert(0) += k * tm;
                    if !witnesses.contains_key(&m2) {
                        let mut w = witnesses[&m].clone();
                        w.extend(steps.iter().cloned());
                        let h2 = h + steps.len();
                        witnesses.insert(m2.clone(), w);
                        by_height.entry(h2).or_default().push(m2);
                        if witnesses.len() > cfg.max_monomials {
                            return Err(QCharError::BudgetExceeded { monomials: witnesses.len(), height: h2 });
                        }
                    }
                }
            }
        }
        h += 1;
        if by_height.is_empty() {
            break;
        }
    }
    let chi = QCharacter::from_terms(mu.iter().map(|(m, k)| (m.clone(), *k)));
    Ok(WitnessedCharacter { highest, chi, witnesses })
}

/// χ_q of the sl2 KR module `W_{k, a q^{1-2k}}`: highest monomial
/// `Y_{aq^{-1}} Y_{aq^{-3}} ... Y_{aq^{1-2k}}` times the partial products
/// `A_{a}^{-1} A_{aq^{-2}}^{-1} ...`.
pub fn kr_sl2(k: usize, a: &SpectralPoint) -> QCharacter {
    let a1 = crate::cartan::build_cartan(CartanType::A, 1).expect("A1");
    let highest = Monomial::from_factors((0..k as i64).map(|s| (1, a.shifted_int(-1 - 2 * s), 1)));
    let mut chi = QCharacter::zero();
    let mut m = highest;
    chi.add_term(m.clone(), 1);
    for s in 0..k as i64 {
        m = m.div(&a_monomial(&a1, 1, &a.shifted_int(-2 * s)));
        chi.add_term(m.clone(), 1);
    }
    chi.with_tag(format!("W_{{{},{}}}", k, a.shifted_int(1 - 2 * k as i64).to_latex()))
}

/// A truncated infinite character: an ℓ-weight prefactor times the first
/// `depth + 1` terms of a formal sum. Products are only defined between
/// truncated characters and keep the smaller depth.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedCharacter {
    pub prefactor: EllWeight,
    pub depth: usize,
    pub chi: QCharacter,
}

/// `χ_q(L^-_{1,a}) = [(1 - za)^{-1}] Σ_r (A_{1,a} A_{1,aq^{-2}} ... A_{1,aq^{-2(r-1)}})^{-1}`,
/// truncated after the term with `r = depth`.
pub fn neg_prefund_sl2(a: &SpectralPoint, depth: usize) -> TruncatedCharacter {
    let a1 = crate::cartan::build_cartan(CartanType::A, 1).expect("A1");
    let mut chi = QCharacter::zero();
    let mut m = Monomial::one();
    chi.add_term(m.clone(), 1);
    for s in 0..depth as i64 {
        m = m.div(&a_monomial(&a1, 1, &a.shifted_int(-2 * s)));
        chi.add_term(m.clone(), 1);
    }
    TruncatedCharacter { prefactor: prefund_ellweight(1, 1, a, false), depth, chi }
}

impl TruncatedCharacter {
    /// Height of a term: the number of `A^{-1}` factors, read off its weight.
    fn height(m: &Monomial) -> i64 {
        -crate::ymono::weight_of(1, m).0[0] / 2
    }

    pub fn multiply(&self, o: &Self) -> Self {
        let depth = self.depth.min(o.depth);
        let prod = crate::ymono::multiply(&self.chi, &o.chi);
        let chi = QCharacter::from_terms(prod.terms().filter(|(m, _)| Self::height(m) <= depth as i64).map(|(m, k)| (m.clone(), k)));
        TruncatedCharacter { prefactor: self.prefactor.mul(&o.prefactor), depth, chi }
    }
}

/// Shift the spectral parameter of a whole character.
pub fn shift_character(chi: &QCharacter, s: i64) -> QCharacter {
    chi.shift_points(Rational64::from_integer(s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::build_cartan;
    use crate::ymono::weight_of;

    fn q(s: i64) -> SpectralPoint {
        SpectralPoint::q_pow(s)
    }

    #[test]
    fn sl2_fundamental() {
        let a1 = build_cartan(CartanType::A, 1).unwrap();
        let a = SpectralPoint::at("a", 0);
        let w = fm_fundamental(&a1, 1, &a, FMConfig::default()).unwrap();
        let expect = QCharacter::from_terms([(Monomial::y(1, a.clone()), 1), (Monomial::y_pow(1, a.shifted_int(2), -1), 1)]);
        assert_eq!(w.chi, expect);
        assert!(w.check_witnesses(&a1));
    }

    #[test]
    fn a2_fundamental() {
        let a2 = build_cartan(CartanType::A, 2).unwrap();
        let w = fm_fundamental(&a2, 1, &q(0), FMConfig::default()).unwrap();
        let expect = QCharacter::from_terms([
            (Monomial::y(1, q(0)), 1),
            (Monomial::from_factors([(1, q(2), -1), (2, q(1), 1)]), 1),
            (Monomial::y_pow(2, q(3), -1), 1),
        ]);
        assert_eq!(w.chi, expect);
    }

    #[test]
    fn b2_fundamental_short_node() {
        let b2 = build_cartan(CartanType::B, 2).unwrap();
        let w = fm_fundamental(&b2, 2, &q(0), FMConfig::default()).unwrap();
        let expect = QCharacter::from_terms([
            (Monomial::y(2, q(0)), 1),
            (Monomial::from_factors([(2, q(2), -1), (1, q(1), 1)]), 1),
            (Monomial::from_factors([(1, q(5), -1), (2, q(4), 1)]), 1),
            (Monomial::y_pow(2, q(6), -1), 1),
        ]);
        assert_eq!(w.chi, expect);
        assert!(w.check_witnesses(&b2));
    }

    #[test]
    fn dimensions_on_whitelist() {
        for (t, n, dims) in [
            (CartanType::A, 3, vec![4, 6, 4]),
            (CartanType::A, 4, vec![5, 10, 10, 5]),
            (CartanType::B, 2, vec![5, 4]),
        ] {
            let cd = build_cartan(t, n).unwrap();
            for i in cd.nodes() {
                let w = fm_fundamental(&cd, i, &q(0), FMConfig::default()).unwrap();
                assert_eq!(w.chi.total_multiplicity(), dims[i - 1], "{}{} node {}", t, n, i);
                assert_eq!(w.chi.dominant_monomials().len(), 1);
                assert!(w.check_witnesses(&cd));
            }
        }
    }

    #[test]
    fn unsupported_and_budget() {
        let g2 = build_cartan(CartanType::G, 2).unwrap();
        assert!(matches!(fm_fundamental(&g2, 1, &q(0), FMConfig::default()), Err(QCharError::UnsupportedType(_))));
        let a4 = build_cartan(CartanType::A, 4).unwrap();
        let tiny = FMConfig { max_monomials: 3, max_height: 64 };
        assert!(matches!(fm_fundamental(&a4, 2, &q(0), tiny), Err(QCharError::BudgetExceeded { .. })));
    }

    #[test]
    fn kr_small() {
        let a = SpectralPoint::at("a", 0);
        assert_eq!(kr_sl2(0, &a).len(), 1);
        let k1 = kr_sl2(1, &a);
        let a1 = build_cartan(CartanType::A, 1).unwrap();
        let fm = fm_fundamental(&a1, 1, &a.shifted_int(-1), FMConfig::default()).unwrap();
        assert_eq!(k1.terms().collect::<Vec<_>>(), fm.chi.terms().collect::<Vec<_>>());
        for k in 0..=6 {
            let c = kr_sl2(k, &a);
            assert_eq!(c.len(), k + 1);
            assert!(c.terms().all(|(_, m)| m == 1));
        }
    }

    #[test]
    fn kr_matches_string_expansion() {
        let a1 = build_cartan(CartanType::A, 1).unwrap();
        let a = SpectralPoint::at("a", 0);
        for k in 1..=4 {
            let c = kr_sl2(k, &a);
            let hi = Monomial::from_factors((0..k as i64).map(|s| (1, a.shifted_int(-1 - 2 * s), 1)));
            let fm = fm_expand(&a1, hi, FMConfig::default()).unwrap();
            assert_eq!(fm.chi.terms().collect::<Vec<_>>(), c.terms().collect::<Vec<_>>());
        }
    }

    #[test]
    fn negative_prefundamental_terms() {
        let a = SpectralPoint::at("a", 0);
        let t = neg_prefund_sl2(&a, 2);
        assert_eq!(t.chi.len(), 3);
        for (m, _) in t.chi.terms() {
            let w = weight_of(1, m).0[0];
            assert!(w == 0 || w == -2 || w == -4);
        }
        let sq = t.multiply(&neg_prefund_sl2(&a.shifted_int(4), 1));
        assert_eq!(sq.depth, 1);
    }
}
