//! Eigenvalue side of the transfer-matrix story: the universal factors
//! `f_i(z)`, the constants `a_i`, per-monomial eigenvalue templates with
//! formal `Q_i`, the rational `F`-ratios between template terms, and a
//! numeric residue test for pole cancellation.

use std::collections::BTreeMap;

use num_complex::Complex64;
use num_rational::Rational64;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::cartan::{ht_decompose, quantum_cartan, CartanDatum, CartanError, QuantumCartan, WeightVector};
use crate::qchar::{Witness, WitnessedCharacter};
use crate::scalars::{
    cpoly_eval, cseries_inv, cseries_mul, cseries_scale_var, eval_qrat, eval_series, fmt_q_power, EvalPoint, Field,
    QRat, QSeries, RatFn, ScalarError, UPoly, Var,
};
use crate::ymono::{weight_of, Monomial, SpectralPoint};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectraError {
    #[error("highest monomial of the target module must be dominant")]
    NotDominant,
    #[error("symbolic computation needs all spectral points on the unit anchor")]
    MixedAnchors,
    #[error("monomial has no witness path")]
    NoWitness,
    #[error("pole of another factor at the evaluation point")]
    PoleAtEvaluationPoint,
    #[error("expected {expected} Q polynomials, got {got}")]
    QDataMismatch { expected: usize, got: usize },
    #[error(transparent)]
    Cartan(#[from] CartanError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// The module `W` whose transfer-matrix eigenvalues are described: its
/// dominant highest monomial `m`. Drinfeld polynomials are
/// `P_i(z) = prod_b (1 - b z)^{u_{i,b}}` over the points `b` of `m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TargetModuleData {
    highest: Monomial,
}

impl TargetModuleData {
    pub fn new(highest: Monomial) -> Result<Self, SpectraError> {
        if !highest.is_dominant() {
            return Err(SpectraError::NotDominant);
        }
        if highest.factors().any(|(_, a, _)| !a.anchor.is_unit()) {
            return Err(SpectraError::MixedAnchors);
        }
        Ok(TargetModuleData { highest })
    }

    /// sl2 KR module `W_{N, q^{1-2N}}`: `m = Y_{q^{-1}} Y_{q^{-3}} ... Y_{q^{1-2N}}`.
    pub fn kr_sl2(n: usize) -> Self {
        let m = Monomial::from_factors((0..n as i64).map(|s| (1, SpectralPoint::q_pow(-1 - 2 * s), 1)));
        TargetModuleData { highest: m }
    }

    pub fn highest(&self) -> &Monomial {
        &self.highest
    }

    pub fn weight(&self, rank: usize) -> WeightVector {
        weight_of(rank, &self.highest)
    }

    /// Points `b` of `P_i` with multiplicity.
    pub fn drinfeld_points(&self, i: usize) -> Vec<(SpectralPoint, i64)> {
        self.highest.factors().filter(|(j, _, _)| *j == i).map(|(_, a, e)| (a.clone(), e)).collect()
    }

    pub fn deg_p(&self, i: usize) -> i64 {
        self.drinfeld_points(i).iter().map(|(_, e)| e).sum()
    }

    /// `P_i` as a polynomial in `z`.
    pub fn drinfeld_poly(&self, i: usize) -> UPoly<QRat> {
        let mut p = UPoly::one();
        for (b, e) in self.drinfeld_points(i) {
            for _ in 0..e {
                p = p.mul(&UPoly::linear(QRat::one(), b.q_part().neg()));
            }
        }
        p
    }
}

fn require_unit(a: &SpectralPoint) -> Result<(), SpectraError> {
    if a.anchor.is_unit() {
        Ok(())
    } else {
        Err(SpectraError::MixedAnchors)
    }
}

/// `log f_i(z)` to order `k`: coefficient of `z^r` is
/// `sum_{j,b} u_{j,b} b^{-r} tilde C_{ij}(q^r) / r`.
pub fn f_log_series(qc: &QuantumCartan, data: &TargetModuleData, i: usize, k: usize) -> QSeries {
    let mut c = vec![QRat::zero(); k + 1];
    for (r, slot) in c.iter_mut().enumerate().skip(1) {
        let r64 = r as i64;
        let mut acc = QRat::zero();
        for (j, b, u) in data.highest.factors() {
            let ct = qc.c_tilde_at_power(i, j, r64);
            let binv = QRat::q_pow(-b.shift * r64);
            acc = &acc + &(&(&ct * &binv) * &QRat::from_int(u));
        }
        *slot = &acc / &QRat::from_int(r64);
    }
    QSeries::new(Var::Z, c, k)
}

/// `f_i(z)` to order `k`.
pub fn f_series(qc: &QuantumCartan, data: &TargetModuleData, i: usize, k: usize) -> QSeries {
    f_log_series(qc, data, i, k).exp().expect("zero constant term")
}

/// Exponents `e_i` with `a_i = q^{e_i}`:
/// `a_i = prod_j q_j^{-(C^{-1})_{j,i} ω(α_j^vee)}`.
pub fn a_constants(cd: &CartanDatum, omega: &WeightVector) -> Vec<Rational64> {
    cd.nodes()
        .map(|i| {
            cd.nodes().fold(Rational64::from_integer(0), |acc, j| {
                acc - cd.c_inv(j, i) * Rational64::from_integer(cd.d(j) * omega.coord(j))
            })
        })
        .collect()
}

/// One term of an eigenvalue template: the image of one monomial of
/// `χ_q(V)` under `Y_{i,a} -> q_i^{ht_i} a_i u_i f_i(azq_i^{-1}) Q_i(azq_i^{-1}) / (f_i(azq_i) Q_i(azq_i))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TemplateSummand {
    pub monomial: Monomial,
    pub coeff: i64,
    pub witness: Witness,
    /// Exponent of `q` contributed by the `q_i^{ht_i}` factors.
    pub ht_exp: Rational64,
    /// Exponent of `q` contributed by the `a_i` factors.
    pub a_exp: Rational64,
    pub u_exp: Vec<i64>,
    /// `f_i(c z)^p` as `(i, c, p)`.
    pub f_factors: Vec<(usize, SpectralPoint, i64)>,
    /// `Q_i(c z)^p` as `(i, c, p)`.
    pub q_factors: Vec<(usize, SpectralPoint, i64)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EigenvalueTemplate {
    pub lambda: WeightVector,
    pub ht: Vec<i64>,
    pub a_exps: Vec<Rational64>,
    pub summands: Vec<TemplateSummand>,
}

fn push_factor(map: &mut BTreeMap<(usize, SpectralPoint), i64>, i: usize, c: SpectralPoint, p: i64) {
    let e = map.entry((i, c.clone())).or_insert(0);
    *e += p;
    if *e == 0 {
        map.remove(&(i, c));
    }
}

/// Substitute into every monomial of `χ_q(V)` for the weight space `λ` of `W`.
pub fn eigenvalue_template(
    cd: &CartanDatum,
    chi: &WitnessedCharacter,
    data: &TargetModuleData,
    lambda: &WeightVector,
) -> Result<EigenvalueTemplate, SpectraError> {
    let omega = data.weight(cd.rank());
    let ht = ht_decompose(cd, &omega, lambda)?;
    let a_exps = a_constants(cd, &omega);
    let mut summands = Vec::new();
    let mut terms: Vec<(&Monomial, i64)> = chi.chi.terms().collect();
    terms.sort_by_key(|(m, _)| chi.witness(m).map(|w| w.len()).unwrap_or(usize::MAX));
    for (m, coeff) in terms {
        let witness = chi.witness(m).ok_or(SpectraError::NoWitness)?.clone();
        let mut ht_exp = Rational64::from_integer(0);
        let mut a_exp = Rational64::from_integer(0);
        let mut u_exp = vec![0i64; cd.rank()];
        let mut ff = BTreeMap::new();
        for (i, a, e) in m.factors() {
            let di = cd.d(i);
            ht_exp += Rational64::from_integer(di * ht[i - 1] * e);
            a_exp += a_exps[i - 1] * Rational64::from_integer(e);
            u_exp[i - 1] += e;
            push_factor(&mut ff, i, a.shifted_int(-di), e);
            push_factor(&mut ff, i, a.shifted_int(di), -e);
        }
        let factors: Vec<(usize, SpectralPoint, i64)> = ff.into_iter().map(|((i, c), p)| (i, c, p)).collect();
        summands.push(TemplateSummand {
            monomial: m.clone(),
            coeff,
            witness,
            ht_exp,
            a_exp,
            u_exp,
            f_factors: factors.clone(),
            q_factors: factors,
        });
    }
    Ok(EigenvalueTemplate { lambda: lambda.clone(), ht, a_exps, summands })
}

fn point_latex(c: &SpectralPoint) -> String {
    let s = c.to_latex();
    if s == "1" {
        "z".into()
    } else {
        format!("z{}", s)
    }
}

impl TemplateSummand {
    /// Product of the `f_i(cz)^p` as a series in `z`.
    pub fn f_part(&self, qc: &QuantumCartan, data: &TargetModuleData, k: usize) -> Result<QSeries, SpectraError> {
        let mut s = QSeries::one(Var::Z, k);
        for (i, c, p) in &self.f_factors {
            require_unit(c)?;
            let mut f = f_log_series(qc, data, *i, k).scale_var(&c.q_part());
            f = f.scale(&QRat::from_int(*p));
            s = s.mul(&f.exp()?);
        }
        Ok(s)
    }

    pub fn q_power(&self) -> Rational64 {
        self.ht_exp + self.a_exp
    }

    pub fn to_latex(&self) -> String {
        let mut out = String::new();
        if self.coeff != 1 {
            out.push_str(&self.coeff.to_string());
        }
        let e = self.q_power();
        if *e.numer() != 0 {
            out.push_str(&fmt_q_power(e, true));
        }
        for (i, u) in self.u_exp.iter().enumerate() {
            match u {
                0 => {}
                1 => out.push_str(&format!("u_{}", i + 1)),
                _ => out.push_str(&format!("u_{}^{{{}}}", i + 1, u)),
            }
        }
        let render = |sym: &str, fs: &[(usize, SpectralPoint, i64)], positive: bool| -> String {
            fs.iter()
                .filter(|(_, _, p)| (*p > 0) == positive)
                .map(|(i, c, p)| {
                    let base = format!("{}_{}({})", sym, i, point_latex(c));
                    if p.abs() == 1 {
                        base
                    } else {
                        format!("{}^{{{}}}", base, p.abs())
                    }
                })
                .collect()
        };
        let num = format!("{}{}", render("f", &self.f_factors, true), render("Q", &self.q_factors, true));
        let den = format!("{}{}", render("f", &self.f_factors, false), render("Q", &self.q_factors, false));
        if !num.is_empty() || !den.is_empty() {
            out.push_str(&format!("\\frac{{{}}}{{{}}}", if num.is_empty() { "1".into() } else { num }, if den.is_empty() { "1".into() } else { den }));
        }
        if out.is_empty() {
            "1".into()
        } else {
            out
        }
    }
}

impl EigenvalueTemplate {
    pub fn to_latex(&self) -> String {
        self.summands.iter().map(|s| s.to_latex()).collect::<Vec<_>>().join(" + ")
    }
}

/// The rational function
/// `prod_k v_{i_k}^{-1} q_{i_k}^{-deg P_{i_k}} P_{i_k}(z^{-1}a_k^{-1}q_{i_k}) / P_{i_k}(z^{-1}a_k^{-1}q_{i_k}^{-1})`
/// for a witness `[(i_k, a_k)]`, returned as the exponents `n_k` of
/// `v_k^{-1}` together with the part in `z`.
pub fn f_ratio_rational(
    cd: &CartanDatum,
    data: &TargetModuleData,
    witness: &[(usize, SpectralPoint)],
) -> Result<(Vec<i64>, RatFn<QRat>), SpectraError> {
    let mut vexp = vec![0i64; cd.rank()];
    let mut r = RatFn::constant(QRat::one());
    for (i, a) in witness {
        require_unit(a)?;
        vexp[i - 1] += 1;
        let qi = cd.q_i(*i);
        let scalar = qi.pow(-data.deg_p(*i))?;
        r = r.mul(&RatFn::constant(scalar));
        // P(z^{-1} x) = prod (1 - b x / z); ratio of (z - b x) factors
        for (b, e) in data.drinfeld_points(*i) {
            require_unit(&b)?;
            let ba = &b.q_part() / &a.q_part();
            let num = UPoly::linear((&ba * &qi).neg(), QRat::one());
            let den = UPoly::linear((&ba / &qi).neg(), QRat::one());
            for _ in 0..e {
                r = r.mul(&RatFn::new(num.clone(), den.clone())?);
            }
        }
    }
    Ok((vexp, r))
}

/// Result of comparing a rational `F`-ratio with the quotient of
/// exponential series.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TelescopeReport {
    pub order: usize,
    pub v_exponents_match: bool,
    pub mismatched_orders: Vec<usize>,
}

impl TelescopeReport {
    pub fn passed(&self) -> bool {
        self.v_exponents_match && self.mismatched_orders.is_empty()
    }
}

/// Expand `F_M / F_m` from the definition (product over the factors of
/// `M/m` of `a_i u_i f_i(zaq_i^{-1}) / f_i(zaq_i)`) and compare with
/// [`f_ratio_rational`] coefficient by coefficient.
pub fn telescoping_check(
    cd: &CartanDatum,
    data: &TargetModuleData,
    m_v: &Monomial,
    witness: &[(usize, SpectralPoint)],
    k: usize,
) -> Result<TelescopeReport, SpectraError> {
    let qc = quantum_cartan(cd);
    let big_m = crate::qchar::apply_witness(cd, m_v, witness);
    let ratio = big_m.div(m_v);
    let a_exps = a_constants(cd, &data.weight(cd.rank()));
    let mut qexp = Rational64::from_integer(0);
    let mut u_exp = vec![0i64; cd.rank()];
    let mut log = QSeries::zero(Var::Z, k);
    for (i, a, e) in ratio.factors() {
        require_unit(a)?;
        let di = cd.d(i);
        qexp += a_exps[i - 1] * Rational64::from_integer(e);
        u_exp[i - 1] += e;
        let base = f_log_series(&qc, data, i, k);
        let lo = base.scale_var(&a.shifted_int(-di).q_part());
        let hi = base.scale_var(&a.shifted_int(di).q_part());
        log = log.add(&lo.sub(&hi).scale(&QRat::from_int(e)));
    }
    let lhs = log.exp()?.scale(&QRat::q_pow(qexp));
    let (vexp, r) = f_ratio_rational(cd, data, witness)?;
    // u-exponents of prod v_k^{-n_k} are -C n
    let u_from_v: Vec<i64> = cd.nodes().map(|j| -cd.nodes().map(|kk| cd.c(j, kk) * vexp[kk - 1]).sum::<i64>()).collect();
    let rhs = QSeries::from_ratfn(Var::Z, &r, k)?;
    let mismatched_orders = (0..=k).filter(|&n| lhs.coeff(n) != rhs.coeff(n)).collect();
    Ok(TelescopeReport { order: k, v_exponents_match: u_from_v == u_exp, mismatched_orders })
}

/// `f_i(z) prod_{k: i_k = i} (1 - z a_k^{-1})`, obtained by adding to
/// `log f_i` the contributions
/// `-sum_m (z a_k^{-1})^m sum_j tilde B_{ij}(q^m) B_{j i_k}(q^m) / m`.
pub fn firstpol_eigenvalue(
    cd: &CartanDatum,
    data: &TargetModuleData,
    witness: &[(usize, SpectralPoint)],
    i: usize,
    k: usize,
) -> Result<QSeries, SpectraError> {
    let qc = quantum_cartan(cd);
    let mut log = f_log_series(&qc, data, i, k);
    for (ik, a) in witness {
        require_unit(a)?;
        let mut c = vec![QRat::zero(); k + 1];
        for (m, slot) in c.iter_mut().enumerate().skip(1) {
            let r = Rational64::from_integer(m as i64);
            let mut s = QRat::zero();
            for j in cd.nodes() {
                let bt = qc.bq_inv.get(i - 1, j - 1).subs_q_pow(r);
                let b = qc.bq.get(j - 1, ik - 1).subs_q_pow(r);
                s = &s + &(&bt * &b);
            }
            let am = QRat::q_pow(-a.shift * r);
            *slot = (&(&s * &am) / &QRat::from_int(m as i64)).neg();
        }
        log = log.add(&QSeries::new(Var::Z, c, k));
    }
    Ok(log.exp()?)
}

// ---------------------------------------------------------------------------
// numeric evaluation

/// Numeric `Q_i(z) = sum_k c_k z^k` for every node.
#[derive(Clone, Debug, PartialEq)]
pub struct NumericQ(pub Vec<Vec<Complex64>>);

impl NumericQ {
    /// `Q_i(z) = prod_k (w_k - z)`.
    pub fn from_roots(roots: &[Vec<Complex64>]) -> Self {
        NumericQ(
            roots
                .iter()
                .map(|rs| {
                    rs.iter().fold(vec![Complex64::one()], |acc, w| {
                        let mut out = vec![Complex64::zero(); acc.len() + 1];
                        for (n, c) in acc.iter().enumerate() {
                            out[n] += c * w;
                            out[n + 1] -= c;
                        }
                        out
                    })
                })
                .collect(),
        )
    }

    fn series(&self, i: usize, c: Complex64, k: usize) -> Vec<Complex64> {
        let mut s = vec![Complex64::zero(); k + 1];
        for (n, x) in self.0[i - 1].iter().enumerate().take(k + 1) {
            s[n] = *x;
        }
        cseries_scale_var(&s, c)
    }

    fn eval(&self, i: usize, x: Complex64) -> Complex64 {
        cpoly_eval(&self.0[i - 1], x)
    }

    fn deriv(&self, i: usize, x: Complex64) -> Complex64 {
        let d: Vec<Complex64> = self.0[i - 1].iter().enumerate().skip(1).map(|(n, c)| c * n as f64).collect();
        cpoly_eval(&d, x)
    }
}

fn point_value(c: &SpectralPoint, point: &EvalPoint) -> Complex64 {
    point.q_pow(*c.shift.numer() as f64 / *c.shift.denom() as f64)
}

/// The whole template as a `z`-series at numeric `q`, `u_i` and `Q_i`.
pub fn eval_template_series(
    cd: &CartanDatum,
    template: &EigenvalueTemplate,
    data: &TargetModuleData,
    point: &EvalPoint,
    u: &[Complex64],
    qs: &NumericQ,
    k: usize,
) -> Result<Vec<Complex64>, SpectraError> {
    if qs.0.len() != cd.rank() {
        return Err(SpectraError::QDataMismatch { expected: cd.rank(), got: qs.0.len() });
    }
    let qc = quantum_cartan(cd);
    let mut total = vec![Complex64::zero(); k + 1];
    for s in &template.summands {
        let mut acc = eval_series(&s.f_part(&qc, data, k)?, point)?;
        let mut scalar = Complex64::new(s.coeff as f64, 0.0) * point.q_pow(to_f64(s.q_power()));
        for (i, e) in s.u_exp.iter().enumerate() {
            scalar *= u[i].powi(*e as i32);
        }
        for (i, c, p) in &s.q_factors {
            let base = qs.series(*i, point_value(c, point), k);
            let base = if *p < 0 { cseries_inv(&base)? } else { base };
            for _ in 0..p.abs() {
                acc = cseries_mul(&acc, &base);
            }
        }
        for (t, a) in total.iter_mut().zip(&acc) {
            *t += scalar * a;
        }
    }
    Ok(total)
}

fn to_f64(r: Rational64) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Residue balance at a root of `Q_i`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResidueReport {
    pub pole: Complex64,
    pub contributing: usize,
    pub abs_sum: f64,
    /// `|sum| / max |residue|`.
    pub relative: f64,
}

/// Sum the residues, at the pole coming from the root `w` of `Q_i(cz)`,
/// of all template summands divided by the summand of the highest
/// monomial. Each quotient is rational in `z`: a rational `F`-ratio times
/// `q^{ht}` factors times `Q`-ratios.
pub fn residue_cancellation_check(
    cd: &CartanDatum,
    template: &EigenvalueTemplate,
    data: &TargetModuleData,
    qs: &NumericQ,
    i: usize,
    w: Complex64,
    point: &EvalPoint,
    v: &[Complex64],
) -> Result<ResidueReport, SpectraError> {
    let top = template.summands.first().ok_or(SpectraError::NoWitness)?;
    let mut residues = Vec::new();
    let mut pole: Option<Complex64> = None;
    for s in &template.summands {
        // the Q-factor producing the pole
        let Some((_, c, _)) = s.q_factors.iter().find(|(j, _, p)| *j == i && *p == -1) else { continue };
        let cv = point_value(c, point);
        let z0 = w / cv;
        if let Some(p0) = pole {
            if (z0 - p0).norm() > 1e-12 * z0.norm().max(1.0) {
                continue;
            }
        }
        pole = Some(z0);
        let (vexp, r) = f_ratio_rational(cd, data, &s.witness)?;
        let mut val = crate::scalars::eval_ratfn(&r, point, z0)?;
        for (kk, n) in vexp.iter().enumerate() {
            val /= v[kk].powi(*n as i32);
        }
        val *= point.q_pow(to_f64(s.ht_exp - top.ht_exp));
        val *= s.coeff as f64 / top.coeff as f64;
        let mut skipped = false;
        for (j, c2, p) in &s.q_factors {
            let x = point_value(c2, point) * z0;
            if *j == i && c2 == c && *p == -1 && !skipped {
                skipped = true;
                val /= cv * qs.deriv(i, w);
                continue;
            }
            let qv = qs.eval(*j, x);
            if *p < 0 && qv.norm() < 1e-12 {
                return Err(SpectraError::PoleAtEvaluationPoint);
            }
            val *= qv.powi(*p as i32);
        }
        residues.push(val);
    }
    let sum: Complex64 = residues.iter().sum();
    let scale = residues.iter().map(|r| r.norm()).fold(0.0, f64::max);
    Ok(ResidueReport {
        pole: pole.unwrap_or_default(),
        contributing: residues.len(),
        abs_sum: sum.norm(),
        relative: if scale > 0.0 { sum.norm() / scale } else { 0.0 },
    })
}

/// Evaluate an exact `q`-scalar at a point (helper for reports).
pub fn q_value(x: &QRat, point: &EvalPoint) -> Result<Complex64, SpectraError> {
    Ok(eval_qrat(x, point)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::{build_cartan, CartanType};
    use crate::qchar::{fm_fundamental, FMConfig};

    fn a1() -> CartanDatum {
        build_cartan(CartanType::A, 1).unwrap()
    }

    #[test]
    fn trivial_target_gives_one() {
        let cd = a1();
        let qc = quantum_cartan(&cd);
        let data = TargetModuleData::new(Monomial::one()).unwrap();
        assert_eq!(f_series(&qc, &data, 1, 6), QSeries::one(Var::Z, 6));
    }

    #[test]
    fn kr_log_coefficients() {
        let cd = a1();
        let qc = quantum_cartan(&cd);
        for n in 1..=3i64 {
            let data = TargetModuleData::kr_sl2(n as usize);
            let log = f_log_series(&qc, &data, 1, 6);
            for m in 1..=6i64 {
                let expect = &(&QRat::q_pow_int(n * m) * &QRat::qint(n * m))
                    / &(&(&QRat::qint(m) * &QRat::from_int(m)) * &(&QRat::q_pow_int(m) + &QRat::q_pow_int(-m)));
                assert_eq!(log.coeff(m as usize), &expect);
            }
        }
    }

    #[test]
    fn a_constant_examples() {
        let cd = a1();
        assert_eq!(a_constants(&cd, &WeightVector(vec![1])), vec![Rational64::new(-1, 2)]);
        assert_eq!(a_constants(&cd, &WeightVector(vec![0])), vec![Rational64::from_integer(0)]);
        let a2 = build_cartan(CartanType::A, 2).unwrap();
        assert_eq!(a_constants(&a2, &WeightVector(vec![1, 0])), vec![Rational64::new(-2, 3), Rational64::new(-1, 3)]);
    }

    #[test]
    fn sl2_template_and_telescoping() {
        let cd = a1();
        let v = fm_fundamental(&cd, 1, &SpectralPoint::q_pow(-1), FMConfig::default()).unwrap();
        let data = TargetModuleData::kr_sl2(2);
        let t = eigenvalue_template(&cd, &v, &data, &WeightVector(vec![0])).unwrap();
        assert_eq!(t.summands.len(), 2);
        assert_eq!(t.ht, vec![1]);
        for s in &t.summands {
            let rep = telescoping_check(&cd, &data, &v.highest, &s.witness, 12).unwrap();
            assert!(rep.passed(), "{:?}", rep);
        }
    }

    #[test]
    fn firstpol_matches_product() {
        let cd = a1();
        let data = TargetModuleData::kr_sl2(2);
        let qc = quantum_cartan(&cd);
        let w = vec![(1, SpectralPoint::q_pow(-2))];
        let got = firstpol_eigenvalue(&cd, &data, &w, 1, 12).unwrap();
        let lin = QSeries::from_poly(Var::Z, &UPoly::linear(QRat::one(), QRat::q_pow_int(2).neg()), 12);
        assert_eq!(got, f_series(&qc, &data, 1, 12).mul(&lin));
    }
}
