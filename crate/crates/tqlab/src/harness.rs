//! Batch verification: every named check produces one [`CheckReport`];
//! a suite is a list of checks run in a fixed order.

use std::time::Instant;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bethe::BetheSystem;
use crate::cartan::{quantum_cartan, CartanDatum, WeightVector};
use crate::grring::{normalize_relation_latex, tq_relation, verify_tq, Flavor, TQRelationJson};
use crate::qchar::{fm_fundamental, kr_sl2, FMConfig, WitnessedCharacter};
use crate::scalars::{eval_ratfn, EvalPoint, Field, QRat, QSeries, RatFn, UPoly, Var};
use crate::sl2lab::{
    commutativity_check, h_negative_modes, kr_model, prefund_model, tensor_square_modes, ti_polynomial_check,
    transfer_fundamental_sl2, transfer_sl2, u_zero_limit, ModelKind, q_closed_form,
};
use crate::spectra::{
    eigenvalue_template, eval_template_series, f_series, residue_cancellation_check, telescoping_check, NumericQ,
    TargetModuleData,
};
use crate::ymono::{a_monomial, eval_ell_weight_at, weight_of, Anchor, Monomial, QCharacter, SpectralPoint};

/// Tolerance attached to a check: exact equality or a numeric bound.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Tolerance {
    Exact(ExactTag),
    Bound(f64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExactTag {
    Exact,
}

pub const EXACT: Tolerance = Tolerance::Exact(ExactTag::Exact);

/// Relative tolerance for numeric identities.
pub const NUMERIC_TOL: f64 = 1e-9;
/// Lower bound the residue sum must exceed after perturbing a root.
pub const PERTURBED_MIN: f64 = 1e-3;
/// Relative size of the root perturbation.
pub const PERTURBATION: f64 = 0.01;
/// Relative tolerance for the evaluation homomorphism.
pub const HOMOMORPHISM_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check_id: String,
    /// Short tag naming the identity or property being checked.
    pub anchor: String,
    pub status: Status,
    pub tolerance: Tolerance,
    pub residual: Option<f64>,
    pub runtime_ms: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub detail: Option<String>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// Parameters shared by all checks.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HarnessConfig {
    pub seed: u64,
    /// Truncation order in `z`.
    pub k: usize,
    /// Truncation order in `v`.
    pub kv: usize,
    /// Truncation level for prefundamental models.
    pub m: usize,
    /// Record wall-clock time per check. Off by default so reports are
    /// byte-identical across runs.
    pub timings: bool,
}

impl Default for HarnessConfig {
    fn default() -> Self {
        HarnessConfig { seed: 2024, k: 12, kv: 8, m: 16, timings: false }
    }
}

/// Outcome of a single check body.
struct Outcome {
    ok: bool,
    residual: Option<f64>,
    detail: Option<String>,
}

impl Outcome {
    fn exact(ok: bool) -> Self {
        Outcome { ok, residual: None, detail: None }
    }

    fn numeric(residual: f64, tol: f64) -> Self {
        Outcome { ok: residual.is_finite() && residual < tol, residual: Some(residual), detail: None }
    }

    fn with_detail(mut self, d: impl Into<String>) -> Self {
        self.detail = Some(d.into());
        self
    }
}

type Body = Box<dyn Fn(&HarnessConfig) -> Result<Outcome, String>>;

struct Check {
    id: String,
    anchor: &'static str,
    tolerance: Tolerance,
    body: Body,
}

fn check(id: impl Into<String>, anchor: &'static str, tolerance: Tolerance, body: impl Fn(&HarnessConfig) -> Result<Outcome, String> + 'static) -> Check {
    Check { id: id.into(), anchor, tolerance, body: Box::new(body) }
}

fn run_check(c: &Check, cfg: &HarnessConfig) -> CheckReport {
    let start = Instant::now();
    let out = (c.body)(cfg);
    let elapsed = start.elapsed().as_millis() as u64;
    let (status, residual, detail) = match out {
        Ok(o) => (if o.ok { Status::Pass } else { Status::Fail }, o.residual, o.detail),
        Err(e) => (Status::Fail, None, Some(e)),
    };
    CheckReport {
        check_id: c.id.clone(),
        anchor: c.anchor.to_string(),
        status,
        tolerance: c.tolerance,
        residual,
        runtime_ms: cfg.timings.then_some(elapsed),
        detail,
    }
}

fn e<T: std::fmt::Display>(x: T) -> String {
    x.to_string()
}

// ---------------------------------------------------------------------------
// golden data

const GOLDEN: &[(&str, &str, &str)] = &[
    ("a1", include_str!("../golden/tq_a1.json"), include_str!("../golden/tq_a1.tex")),
    ("a2", include_str!("../golden/tq_a2.json"), include_str!("../golden/tq_a2.tex")),
    ("b2", include_str!("../golden/tq_b2.json"), include_str!("../golden/tq_b2.tex")),
];

const GOLDEN_QCHAR: &[(&str, &str, &str)] = &[
    ("a1", include_str!("../golden/qchar_a1.json"), include_str!("../golden/qchar_a1.tex")),
    ("a2", include_str!("../golden/qchar_a2.json"), include_str!("../golden/qchar_a2.tex")),
    ("b2", include_str!("../golden/qchar_b2.json"), include_str!("../golden/qchar_b2.tex")),
];

/// The pinned fundamental modules: label, node, and highest spectral point.
pub fn pinned_fundamental(name: &str) -> Option<(CartanDatum, usize, SpectralPoint)> {
    let (label, node, pt) = match name {
        "a1" => ("A1", 1, SpectralPoint::at("a", 0)),
        "a2" => ("A2", 1, SpectralPoint::q_pow(0)),
        "b2" => ("B2", 2, SpectralPoint::q_pow(0)),
        _ => return None,
    };
    Some((CartanDatum::from_label(label).ok()?, node, pt))
}

fn pinned_character(name: &str) -> Result<(CartanDatum, WitnessedCharacter), String> {
    let (cd, node, pt) = pinned_fundamental(name).ok_or("unknown pinned module")?;
    let w = fm_fundamental(&cd, node, &pt, FMConfig::default()).map_err(e)?;
    Ok((cd, w))
}

/// Sort the `Y` factors inside each term and the terms themselves.
pub fn normalize_character_latex(s: &str) -> String {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let mut terms: Vec<String> = compact
        .split('+')
        .map(|t| {
            let mut toks: Vec<String> = t.split("Y_").filter(|x| !x.is_empty()).map(|x| format!("Y_{}", x)).collect();
            toks.sort();
            toks.concat()
        })
        .collect();
    terms.sort();
    terms.join("+")
}

fn tq_checks() -> Vec<Check> {
    GOLDEN
        .iter()
        .map(|&(name, json, tex)| {
            check(format!("tq-relation-{}", name), "tq-relation", EXACT, move |_| {
                let (cd, w) = pinned_character(name)?;
                let rel = tq_relation(&cd, &w.chi, Flavor::LPlus).map_err(e)?;
                let golden: TQRelationJson = serde_json::from_str(json).map_err(e)?;
                let json_ok = rel.to_json() == golden;
                let tex_ok = normalize_relation_latex(&rel.to_latex()) == normalize_relation_latex(tex.trim());
                let verified = verify_tq(&cd, &rel, &w.chi).map_err(e)?;
                Ok(Outcome::exact(json_ok && tex_ok && verified)
                    .with_detail(format!("json={} latex={} identity={}", json_ok, tex_ok, verified)))
            })
        })
        .collect()
}

fn qchar_checks() -> Vec<Check> {
    let mut out: Vec<Check> = GOLDEN_QCHAR
        .iter()
        .map(|&(name, json, tex)| {
            check(format!("qchar-{}", name), "q-character", EXACT, move |_| {
                let (cd, w) = pinned_character(name)?;
                let golden: QCharacter = serde_json::from_str(json).map_err(e)?;
                let tex_ok = normalize_character_latex(&w.chi.to_latex()) == normalize_character_latex(tex.trim());
                Ok(Outcome::exact(w.chi == golden && tex_ok && w.check_witnesses(&cd)))
            })
        })
        .collect();
    out.push(check("kr-sl2-string", "kr-q-character", EXACT, |_| {
        let a = SpectralPoint::at("a", 0);
        for k in 0..=6usize {
            let chi = kr_sl2(k, &a);
            // term r inverts the first r string points (shifted by q^2) and keeps the rest
            let expect: Vec<Monomial> = (0..=k as i64)
                .map(|r| {
                    let keep = (r..k as i64).map(|s| (1, a.shifted_int(-1 - 2 * s), 1));
                    let flip = (0..r).map(|s| (1, a.shifted_int(1 - 2 * s), -1));
                    Monomial::from_factors(keep.chain(flip))
                })
                .collect();
            let ok = chi.len() == k + 1 && expect.iter().all(|m| chi.terms().any(|(t, c)| t == m && c == 1));
            if !ok {
                return Ok(Outcome::exact(false).with_detail(format!("k={}", k)));
            }
        }
        Ok(Outcome::exact(true))
    }));
    out
}

fn bethe_checks() -> Vec<Check> {
    vec![check("bethe-closed-form", "bethe-single-root", EXACT, |_| {
        let sys = BetheSystem::sl2_kr(&[(1, None)], 1).map_err(e)?;
        let w = sys.solve_closed_single().map_err(e)?;
        let q = QRat::q();
        let expect = RatFn::new(UPoly::linear(QRat::one(), q.inv().map_err(e)?.neg()), UPoly::linear(QRat::one(), q.neg()))
            .map_err(e)?;
        let special = w.eval(&(&q * &q)).map_err(e)?;
        let target = (&(&QRat::one() + &q) + &(&q * &q)).inv().map_err(e)?;
        Ok(Outcome::exact(w == expect && special == target))
    }),
    check("bethe-root-of-q-operator", "bethe-pole-linkage", EXACT, |_| {
        let sys = BetheSystem::sl2_kr(&[(1, None)], 1).map_err(e)?;
        let w = sys.solve_closed_single().map_err(e)?;
        let (c0, c1) = baxter_expected()?;
        let root = c0.div(&c1).map_err(e)?.neg();
        Ok(Outcome::exact(root == w))
    })]
}

fn baxter_expected() -> Result<(RatFn<QRat>, RatFn<QRat>), String> {
    let q = QRat::q();
    let qi = q.inv().map_err(e)?;
    let c0 = RatFn::new(UPoly::one(), UPoly::linear(QRat::one(), q.neg())).map_err(e)?;
    let c1 = RatFn::new(UPoly::constant(QRat::from_int(-1)), UPoly::linear(QRat::one(), qi.neg())).map_err(e)?;
    Ok((c0, c1))
}

fn transfer_checks() -> Vec<Check> {
    let mut out = vec![check("baxter-polynomial", "sl2-baxter-polynomial", EXACT, |cfg| {
        // reconstruction at bound 2N needs 4N + 2 coefficients
        let t = transfer_sl2(1, cfg.kv.max(5)).map_err(e)?;
        let rec = t.reconstruct(2).map_err(e)?;
        let (c0, c1) = baxter_expected()?;
        let ok = rec[1].len() == 2 && rec[1][0].as_ref() == Some(&c0) && rec[1][1].as_ref() == Some(&c1);
        Ok(Outcome::exact(ok && t.is_diagonal()))
    })];
    for n in 0..=4usize {
        out.push(check(format!("degree-law-n{}", n), "q-polynomial-degree", EXACT, move |cfg| {
            let t = transfer_sl2(n, cfg.kv.max(n)).map_err(e)?;
            for j in 0..=n {
                let qj = t.q_poly(j);
                if qj.z_degree() != Some(j) || qj.at_v_zero() != u_zero_limit(j) {
                    return Ok(Outcome::exact(false).with_detail(format!("j={}", j)));
                }
                if qj != &q_closed_form(n, j, t.kv).map_err(e)? {
                    return Ok(Outcome::exact(false).with_detail(format!("closed form differs at j={}", j)));
                }
            }
            Ok(Outcome::exact(t.is_diagonal()))
        }));
    }
    for n in 1..=3usize {
        out.push(check(format!("rational-reconstruction-n{}", n), "q-coefficients-rational", EXACT, move |_| {
            let t = transfer_sl2(n, 4 * n + 3).map_err(e)?;
            let rec = t.reconstruct(2 * n).map_err(e)?;
            let ok = rec.iter().all(|row| row.iter().all(|r| r.is_some()));
            Ok(Outcome::exact(ok).with_detail(format!("reconstructed at bound {}", 2 * n)))
        }));
    }
    out.push(check("ti-polynomial", "cartan-current-polynomiality", EXACT, |_| {
        let (h, g) = tensor_square_modes(10);
        let p = ti_polynomial_check(&h, &g, 1).map_err(e)?;
        let q = QRat::q();
        let one_minus = UPoly::linear(QRat::one(), q.inv().map_err(e)?.neg());
        let off = (&q - &QRat::q_pow_int(-4)).checked_div(&(&q + &QRat::q_pow_int(-1))).map_err(e)?;
        let ok = p.0[0][0] == one_minus && p.0[1][1] == one_minus && p.0[1][0].is_zero() && p.0[0][1] == UPoly::linear(QRat::zero(), off);
        Ok(Outcome::exact(ok))
    }));
    out.push(check("ti-polynomial-kr", "cartan-current-polynomiality", EXACT, |_| {
        let model = kr_model(1, QRat::one());
        let h = h_negative_modes(&model, 10).map_err(e)?;
        let g: Vec<QRat> = h.iter().map(|m| m.get(0, 0).clone()).collect();
        let p = ti_polynomial_check(&h, &g, 1).map_err(e)?;
        Ok(Outcome::exact(p.0[0][0] == UPoly::one() && p.0[1][1].degree() == Some(1)))
    }));
    out
}

fn telescoping_checks() -> Vec<Check> {
    let cases: [(&str, &str, usize, i64); 2] = [("sl2", "A1", 1, -1), ("a2", "A2", 1, -1)];
    cases
        .iter()
        .map(|&(name, label, node, shift)| {
            check(format!("telescoping-{}", name), "f-ratio-telescoping", EXACT, move |cfg| {
                let cd = CartanDatum::from_label(label).map_err(e)?;
                let v = fm_fundamental(&cd, node, &SpectralPoint::q_pow(shift), FMConfig::default()).map_err(e)?;
                let data = if cd.rank() == 1 {
                    TargetModuleData::kr_sl2(2)
                } else {
                    TargetModuleData::new(Monomial::from_factors([(1, SpectralPoint::q_pow(-1), 1), (2, SpectralPoint::q_pow(0), 1)]))
                        .map_err(e)?
                };
                for (m, _) in v.chi.terms() {
                    let w = v.witness(m).ok_or("missing witness")?;
                    let rep = telescoping_check(&cd, &data, &v.highest, w, cfg.k).map_err(e)?;
                    if !rep.passed() {
                        return Ok(Outcome::exact(false).with_detail(format!("{:?}", rep)));
                    }
                }
                Ok(Outcome::exact(true))
            })
        })
        .collect()
}

fn sl2_numeric_q(n: usize, j: usize, point: &EvalPoint, v: Complex64) -> Result<Vec<Complex64>, String> {
    let t = transfer_sl2(n, 4 * n + 3).map_err(e)?;
    let rec = t.q_poly(j).reconstruct(2 * n).map_err(e)?;
    rec.iter()
        .map(|r| {
            let r = r.as_ref().ok_or("coefficient not reconstructed")?;
            eval_ratfn(r, point, v).map_err(e)
        })
        .collect()
}

fn random_u(seed: u64) -> Complex64 {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed.wrapping_add(17));
    Complex64::from_polar(rng.gen_range(0.15..0.3), rng.gen_range(0.0..std::f64::consts::TAU))
}

fn spectra_checks() -> Vec<Check> {
    let mut out = Vec::new();
    for n in 1..=3usize {
        out.push(check(format!("template-vs-transfer-n{}", n), "eigenvalue-template", Tolerance::Bound(NUMERIC_TOL), move |cfg| {
            let cd = CartanDatum::from_label("A1").map_err(e)?;
            let point = EvalPoint::random(cfg.seed);
            let u = random_u(cfg.seed);
            let v = u * u;
            let kz = cfg.k.min(8);
            let vmod = fm_fundamental(&cd, 1, &SpectralPoint::q_pow(-1), FMConfig::default()).map_err(e)?;
            let data = TargetModuleData::kr_sl2(n);
            let tv = transfer_fundamental_sl2(n, &point, u, kz).map_err(e)?;
            let mut worst: f64 = 0.0;
            for j in 0..=n {
                let lambda = WeightVector(vec![n as i64 - 2 * j as i64]);
                let tmpl = eigenvalue_template(&cd, &vmod, &data, &lambda).map_err(e)?;
                let qc = sl2_numeric_q(n, j, &point, v)?;
                let got = eval_template_series(&cd, &tmpl, &data, &point, &[u], &NumericQ(vec![qc]), kz).map_err(e)?;
                let scale = tv[j].iter().map(|x| x.norm()).fold(1e-300, f64::max);
                for (a, b) in got.iter().zip(&tv[j]) {
                    worst = worst.max((a - b).norm() / scale);
                }
            }
            Ok(Outcome::numeric(worst, NUMERIC_TOL))
        }));
    }
    out.push(check("residue-at-bethe-root", "pole-cancellation", Tolerance::Bound(NUMERIC_TOL), |cfg| {
        let (exact, perturbed) = residue_pair(cfg)?;
        Ok(Outcome::numeric(exact, NUMERIC_TOL).with_detail(format!("perturbed={:.3e}", perturbed)))
    }));
    out.push(check("residue-perturbed-root", "pole-cancellation", Tolerance::Bound(PERTURBED_MIN), |cfg| {
        let (_, perturbed) = residue_pair(cfg)?;
        Ok(Outcome { ok: perturbed > PERTURBED_MIN, residual: Some(perturbed), detail: Some("must exceed the bound".into()) })
    }));
    out
}

/// Relative residue sums at the Bethe root of the `N = 1` Baxter
/// polynomial and at a perturbed root.
fn residue_pair(cfg: &HarnessConfig) -> Result<(f64, f64), String> {
    let cd = CartanDatum::from_label("A1").map_err(e)?;
    let point = EvalPoint::random(cfg.seed);
    let u = random_u(cfg.seed);
    let v = u * u;
    let vmod = fm_fundamental(&cd, 1, &SpectralPoint::q_pow(-1), FMConfig::default()).map_err(e)?;
    let data = TargetModuleData::kr_sl2(1);
    let tmpl = eigenvalue_template(&cd, &vmod, &data, &WeightVector(vec![-1])).map_err(e)?;
    let sys = BetheSystem::sl2_kr(&[(1, None)], 1).map_err(e)?;
    let w = eval_ratfn(&sys.solve_closed_single().map_err(e)?, &point, v).map_err(e)?;
    let at = |root: Complex64| -> Result<f64, String> {
        let qs = NumericQ::from_roots(&[vec![root]]);
        Ok(residue_cancellation_check(&cd, &tmpl, &data, &qs, 1, root, &point, &[v]).map_err(e)?.relative)
    };
    Ok((at(w)?, at(w * (1.0 + PERTURBATION))?))
}

const INVARIANT_TYPES: &[&str] = &["A1", "A2", "A3", "A4", "B2", "B3", "C3", "D4", "G2", "F4"];

fn invariant_checks() -> Vec<Check> {
    vec![
        check("quantum-cartan-inverse", "quantum-cartan", EXACT, |_| {
            for label in INVARIANT_TYPES {
                let cd = CartanDatum::from_label(label).map_err(e)?;
                let qc = quantum_cartan(&cd);
                if !qc.cq.mul(&qc.cq_inv).is_identity() || !qc.bq.mul(&qc.bq_inv).is_identity() {
                    return Ok(Outcome::exact(false).with_detail(label.to_string()));
                }
            }
            Ok(Outcome::exact(true))
        }),
        check("a-monomial-weight", "a-monomial-weight", EXACT, |_| {
            for label in INVARIANT_TYPES {
                let cd = CartanDatum::from_label(label).map_err(e)?;
                for i in cd.nodes() {
                    if weight_of(cd.rank(), &a_monomial(&cd, i, &SpectralPoint::q_pow(3))) != cd.simple_root(i) {
                        return Ok(Outcome::exact(false).with_detail(format!("{} node {}", label, i)));
                    }
                }
            }
            Ok(Outcome::exact(true))
        }),
        check("ell-weight-homomorphism", "ell-weight-evaluation", Tolerance::Bound(HOMOMORPHISM_TOL), |cfg| {
            let cd = CartanDatum::from_label("B2").map_err(e)?;
            let point = EvalPoint::random(cfg.seed);
            let mut anchors = std::collections::BTreeMap::new();
            anchors.insert(Anchor::unit(), Complex64::new(1.0, 0.0));
            let m1 = Monomial::from_factors([(1, SpectralPoint::q_pow(1), 2), (2, SpectralPoint::q_pow(-2), -1)]);
            let m2 = Monomial::from_factors([(2, SpectralPoint::q_pow(3), 1), (1, SpectralPoint::q_pow(1), -1)]);
            let mut worst: f64 = 0.0;
            for z0 in [Complex64::new(0.13, 0.02), Complex64::new(-0.07, 0.11)] {
                let a = eval_ell_weight_at(&cd, &m1, &point, &anchors, z0).map_err(e)?;
                let b = eval_ell_weight_at(&cd, &m2, &point, &anchors, z0).map_err(e)?;
                let ab = eval_ell_weight_at(&cd, &m1.mul(&m2), &point, &anchors, z0).map_err(e)?;
                for i in 0..cd.rank() {
                    worst = worst.max((ab[i] - a[i] * b[i]).norm() / ab[i].norm().max(1e-300));
                }
            }
            Ok(Outcome::numeric(worst, HOMOMORPHISM_TOL))
        }),
        check("f-series-multiplicative", "f-series", EXACT, |cfg| {
            let cd = CartanDatum::from_label("A2").map_err(e)?;
            let qc = quantum_cartan(&cd);
            let m1 = Monomial::y(1, SpectralPoint::q_pow(-1));
            let m2 = Monomial::from_factors([(2, SpectralPoint::q_pow(0), 1), (1, SpectralPoint::q_pow(2), 1)]);
            let d = |m: &Monomial| TargetModuleData::new(m.clone()).map_err(e);
            let (d1, d2, d12) = (d(&m1)?, d(&m2)?, d(&m1.mul(&m2))?);
            for i in cd.nodes() {
                let lhs = f_series(&qc, &d12, i, cfg.k);
                let rhs = f_series(&qc, &d1, i, cfg.k).mul(&f_series(&qc, &d2, i, cfg.k));
                if lhs != rhs {
                    return Ok(Outcome::exact(false).with_detail(format!("node {}", i)));
                }
            }
            Ok(Outcome::exact(true))
        }),
        check("f1-matches-f-series", "f-series", EXACT, |cfg| {
            let cd = CartanDatum::from_label("A1").map_err(e)?;
            let qc = quantum_cartan(&cd);
            for n in 1..=3 {
                let a = crate::sl2lab::f1_series(n, cfg.k).map_err(e)?;
                if a != f_series(&qc, &TargetModuleData::kr_sl2(n), 1, cfg.k) {
                    return Ok(Outcome::exact(false).with_detail(format!("N={}", n)));
                }
            }
            Ok(Outcome::exact(true))
        }),
        check("kr-containment", "kr-containment", EXACT, |_| {
            let a = SpectralPoint::at("a", 0);
            let normalized = |k: usize| -> Vec<Monomial> {
                let chi = kr_sl2(k, &a);
                let top = Monomial::from_factors((0..k as i64).map(|s| (1, a.shifted_int(-1 - 2 * s), 1)));
                chi.terms().map(|(m, _)| m.div(&top)).collect()
            };
            for big in 0..=6 {
                let target = normalized(big);
                for small in 0..=big {
                    if !normalized(small).iter().all(|m| target.contains(m)) {
                        return Ok(Outcome::exact(false).with_detail(format!("k={} K={}", small, big)));
                    }
                }
            }
            Ok(Outcome::exact(true))
        }),
        check("transfer-commutativity", "transfer-commutativity", EXACT, |cfg| {
            let (h, g) = tensor_square_modes(10);
            let p = ti_polynomial_check(&h, &g, 1).map_err(e)?;
            let z1 = QRat::q();
            let z2 = QRat::from_ratio(3, 7);
            if !commutativity_check(&p.eval(&z1), &p.eval(&z2)) || !commutativity_check(&p.eval(&z1), &p.eval(&z1)) {
                return Ok(Outcome::exact(false).with_detail("tensor square"));
            }
            for n in 1..=3 {
                let t = transfer_sl2(n, cfg.kv.max(n)).map_err(e)?;
                let a = t.at_z(&z1);
                let b = t.at_z(&z2);
                if !series_commute(&a, &b) {
                    return Ok(Outcome::exact(false).with_detail(format!("N={}", n)));
                }
            }
            Ok(Outcome::exact(true))
        }),
        check("model-relations", "sl2-models", EXACT, |cfg| {
            let kinds = [
                ModelKind::Kr { k: 3, a: QRat::q() },
                ModelKind::LPlus { a: QRat::q(), trunc: cfg.m },
                ModelKind::RPlus { a: QRat::q_pow_int(-1), trunc: cfg.m },
                ModelKind::LbarPlus { a: QRat::q_pow_int(2), trunc: cfg.m },
                ModelKind::Trivial,
            ];
            for kind in kinds {
                let m = prefund_model(kind);
                if let Some(bad) = m.relation_checks().into_iter().find(|c| !c.passed) {
                    return Ok(Outcome::exact(false).with_detail(bad.name));
                }
            }
            Ok(Outcome::exact(true))
        }),
        check("bethe-symmetry", "bethe-relabeling", EXACT, |_| {
            let sys = BetheSystem::sl2_kr(&[(2, None), (1, Some(1))], 3).map_err(e)?;
            let base = sys.permuted_equations(1, &[0, 1, 2]);
            let ok = [[1, 0, 2], [2, 1, 0], [1, 2, 0]].iter().all(|p| sys.permuted_equations(1, p) == base);
            Ok(Outcome::exact(ok))
        }),
    ]
}

fn series_commute(a: &[Vec<QSeries>], b: &[Vec<QSeries>]) -> bool {
    let n = a.len();
    let prod = |x: &[Vec<QSeries>], y: &[Vec<QSeries>], i: usize, j: usize| {
        (0..n).fold(QSeries::zero(Var::V(1), x[0][0].order()), |acc, k| acc.add(&x[i][k].mul(&y[k][j])))
    };
    (0..n).all(|i| (0..n).all(|j| prod(a, b, i, j) == prod(b, a, i, j)))
}

/// Numbered groups of check ids, one group per acceptance criterion.
pub fn criteria() -> Vec<(u32, &'static str, Vec<&'static str>)> {
    vec![
        (1, "TQ relations", vec!["tq-relation-"]),
        (2, "q-characters", vec!["qchar-", "kr-sl2-string"]),
        (3, "Bethe closed form", vec!["bethe-"]),
        (4, "Baxter polynomial", vec!["baxter-polynomial"]),
        (5, "degree law", vec!["degree-law-"]),
        (6, "polynomiality of T_1", vec!["ti-polynomial"]),
        (7, "telescoping", vec!["telescoping-"]),
        (8, "eigenvalue template consistency", vec!["template-vs-transfer-", "residue-"]),
        (
            9,
            "structural invariants",
            vec![
                "quantum-cartan-inverse",
                "a-monomial-weight",
                "ell-weight-homomorphism",
                "f-series-multiplicative",
                "f1-matches-f-series",
                "kr-containment",
                "transfer-commutativity",
                "model-relations",
                "bethe-symmetry",
                "rational-reconstruction-",
            ],
        ),
    ]
}

fn all_checks() -> Vec<Check> {
    let mut v = Vec::new();
    v.extend(tq_checks());
    v.extend(qchar_checks());
    v.extend(bethe_checks());
    v.extend(transfer_checks());
    v.extend(telescoping_checks());
    v.extend(spectra_checks());
    v.extend(invariant_checks());
    v
}

/// Ids of every check in suite order.
pub fn check_ids() -> Vec<String> {
    all_checks().into_iter().map(|c| c.id).collect()
}

/// Run the checks whose id starts with one of `prefixes` (all when empty).
pub fn run_suite(cfg: &HarnessConfig, prefixes: &[&str]) -> Vec<CheckReport> {
    all_checks()
        .iter()
        .filter(|c| prefixes.is_empty() || prefixes.iter().any(|p| c.id.starts_with(p)))
        .map(|c| run_check(c, cfg))
        .collect()
}

/// Which family of `sl_2` checks [`verify_sl2`] runs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sl2Check {
    Transfer,
    Ti,
    Baxter,
    Degree,
}

impl std::str::FromStr for Sl2Check {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "transfer" => Ok(Sl2Check::Transfer),
            "ti" => Ok(Sl2Check::Ti),
            "baxter" => Ok(Sl2Check::Baxter),
            "degree" => Ok(Sl2Check::Degree),
            other => Err(format!("unknown sl2 check `{}` (expected transfer, ti, baxter or degree)", other)),
        }
    }
}

/// Parameters for [`verify_sl2`]. `point` fixes `q`; `u` is the twist.
#[derive(Clone, Debug, PartialEq)]
pub struct Sl2Params {
    pub n: usize,
    pub kv: usize,
    pub k: usize,
    pub point: EvalPoint,
    pub u: Complex64,
    pub timings: bool,
}

impl Sl2Params {
    pub fn from_seed(n: usize, kv: usize, k: usize, seed: u64) -> Self {
        Sl2Params { n, kv, k, point: EvalPoint::random(seed), u: random_u(seed), timings: false }
    }
}

/// Checks on the `sl_2` transfer matrices for spin chains of length `N`.
pub fn verify_sl2(what: Sl2Check, p: &Sl2Params) -> Vec<CheckReport> {
    let cfg = HarnessConfig { seed: p.point.seed.unwrap_or(0), k: p.k, kv: p.kv, m: 0, timings: p.timings };
    let n = p.n;
    let checks: Vec<Check> = match what {
        Sl2Check::Transfer => vec![
            check(format!("transfer-diagonal-n{}", n), "q-operator-diagonal", EXACT, move |c| {
                Ok(Outcome::exact(transfer_sl2(n, c.kv.max(n)).map_err(e)?.is_diagonal()))
            }),
            check(format!("transfer-commute-n{}", n), "transfer-commutativity", EXACT, move |c| {
                let t = transfer_sl2(n, c.kv.max(n)).map_err(e)?;
                Ok(Outcome::exact(series_commute(&t.at_z(&QRat::q()), &t.at_z(&QRat::from_ratio(3, 7)))))
            }),
        ],
        Sl2Check::Ti => vec![check("ti-tensor-square", "cartan-current-polynomiality", EXACT, |c| {
            let (h, g) = tensor_square_modes(c.k.max(4));
            let poly = ti_polynomial_check(&h, &g, 1).map_err(e)?;
            Ok(Outcome::exact(poly.degree() == 1).with_detail(poly.to_latex()))
        })],
        Sl2Check::Degree => vec![check(format!("degree-law-n{}", n), "q-polynomial-degree", EXACT, move |c| {
            let t = transfer_sl2(n, c.kv.max(n)).map_err(e)?;
            let ok = (0..=n).all(|j| t.q_poly(j).z_degree() == Some(j) && t.q_poly(j).at_v_zero() == u_zero_limit(j));
            Ok(Outcome::exact(ok))
        })],
        Sl2Check::Baxter => {
            let (point, u) = (p.point, p.u);
            (0..=n)
                .map(|j| {
                    check(format!("baxter-n{}-j{}", n, j), "baxter-tq", Tolerance::Bound(NUMERIC_TOL), move |c| {
                        let t = transfer_fundamental_sl2(n, &point, u, c.k).map_err(e)?;
                        let qc = sl2_numeric_q(n, j, &point, u * u)?;
                        let r = crate::sl2lab::baxter_residual(n, j, &t[j], &qc, &point, u).map_err(e)?;
                        Ok(Outcome::numeric(r, NUMERIC_TOL))
                    })
                })
                .collect()
        }
    };
    checks.iter().map(|c| run_check(c, &cfg)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_suite_passes() {
        let reports = run_suite(&HarnessConfig::default(), &[]);
        let failed: Vec<&CheckReport> = reports.iter().filter(|r| !r.passed()).collect();
        assert!(failed.is_empty(), "{:#?}", failed);
    }

    #[test]
    fn sl2_verification_families() {
        let p = Sl2Params::from_seed(2, 8, 10, 42);
        for what in [Sl2Check::Transfer, Sl2Check::Ti, Sl2Check::Baxter, Sl2Check::Degree] {
            let r = verify_sl2(what, &p);
            assert!(!r.is_empty() && r.iter().all(|c| c.passed()), "{:#?}", r);
        }
    }

    #[test]
    fn character_normalizer() {
        assert_eq!(normalize_character_latex("Y_{2,q}Y_{1,a} + Y_{3}"), normalize_character_latex("Y_{3}+Y_{1,a}Y_{2,q}"));
    }
}
