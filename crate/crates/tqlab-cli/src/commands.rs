use std::path::Path;

use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;
use tqlab::bethe::{BetheSystem, NewtonConfig};
use tqlab::cartan::{quantum_cartan, CartanDatum, WeightVector};
use tqlab::grring::{normalize_relation_latex, tq_relation, verify_tq, Flavor, TQRelation, TQRelationJson};
use tqlab::harness::{self, normalize_character_latex, CheckReport, HarnessConfig, Sl2Check, Sl2Params};
use tqlab::qchar::{fm_fundamental, FMConfig, WitnessedCharacter};
use tqlab::scalars::{EvalPoint, QRat};
use tqlab::spectra::{eigenvalue_template, f_ratio_rational, f_series, telescoping_check, TargetModuleData};
use tqlab::ymono::{Monomial, SpectralPoint};

use crate::emit::{matrix_latex, pretty, qmatrix_json, series_json, series_latex};
use crate::scenario::Format;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Failed(_) => 1,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub fn usage<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Usage(e.to_string())
}

/// What a command produced: text for stdout and whether its checks passed.
pub struct Output {
    pub text: String,
    pub passed: bool,
}

impl Output {
    fn ok(text: String) -> Self {
        Output { text, passed: true }
    }
}

pub fn cartan_datum(label: &str) -> CliResult<CartanDatum> {
    CartanDatum::from_label(label).map_err(usage)
}

pub fn spectral_point(anchor: &str, shift: i64) -> SpectralPoint {
    SpectralPoint::at(anchor, shift)
}

/// Parse a monomial written as `i@s` factors separated by commas, meaning
/// `Y_{i,q^s}`; `i@s^p` raises the factor to the power `p`.
pub fn parse_monomial(spec: &str) -> CliResult<Monomial> {
    let mut factors = Vec::new();
    for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let bad = || CliError::Usage(format!("bad monomial factor `{}` (expected node@shift or node@shift^power)", part));
        let (node, rest) = part.split_once('@').ok_or_else(bad)?;
        let (shift, power) = match rest.split_once('^') {
            Some((s, p)) => (s, p.trim().parse::<i64>().map_err(|_| bad())?),
            None => (rest, 1),
        };
        let node: usize = node.trim().parse().map_err(|_| bad())?;
        let shift: i64 = shift.trim().parse().map_err(|_| bad())?;
        factors.push((node, SpectralPoint::q_pow(shift), power));
    }
    if factors.is_empty() {
        return Err(CliError::Usage("empty monomial".into()));
    }
    Ok(Monomial::from_factors(factors))
}

fn check_monomial_nodes(cd: &CartanDatum, m: &Monomial) -> CliResult<()> {
    for (i, _, _) in m.factors() {
        cd.check_node(i).map_err(usage)?;
    }
    Ok(())
}

pub fn parse_weight(spec: &str, rank: usize) -> CliResult<WeightVector> {
    let coords: Result<Vec<i64>, _> = spec.split(',').map(|c| c.trim().parse::<i64>()).collect();
    let coords = coords.map_err(|_| CliError::Usage(format!("bad weight `{}`", spec)))?;
    if coords.len() != rank {
        return Err(CliError::Usage(format!("weight `{}` needs {} coordinates", spec, rank)));
    }
    Ok(WeightVector(coords))
}

pub fn parse_flavor(s: &str) -> CliResult<Flavor> {
    match s {
        "L+" | "lplus" => Ok(Flavor::LPlus),
        "R+" | "rplus" => Ok(Flavor::RPlus),
        "L-" | "lminus" => Ok(Flavor::LMinus),
        "R-" | "rminus" => Ok(Flavor::RMinus),
        other => Err(CliError::Usage(format!("unknown flavor `{}` (expected L+, R+, L- or R-)", other))),
    }
}

fn to_json_text<T: Serialize>(x: &T) -> String {
    serde_json::to_string_pretty(x).expect("report types always serialize")
}

// ---------------------------------------------------------------- cartan

pub fn cartan_show(label: &str, format: Format) -> CliResult<Output> {
    let cd = cartan_datum(label)?;
    let qc = quantum_cartan(&cd);
    let c = cd.matrix();
    let text = match format {
        Format::Json => pretty(&json!({
            "type": cd.label(),
            "C": c,
            "d": cd.symmetrizers(),
            "Cq": qmatrix_json(&qc.cq),
            "Cq_inverse": qmatrix_json(&qc.cq_inv),
        })),
        Format::Latex | Format::Text => {
            let rows: Vec<String> =
                c.iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" & ")).collect();
            let d: Vec<String> = cd.symmetrizers().iter().map(|x| x.to_string()).collect();
            format!(
                "C = \\begin{{pmatrix}} {} \\end{{pmatrix}}\nd = ({})\nC(q) = {}\n\\tilde C(q) = {}\n",
                rows.join(" \\\\ "),
                d.join(", "),
                matrix_latex(&qc.cq, QRat::to_latex),
                matrix_latex(&qc.cq_inv, QRat::to_latex),
            )
        }
    };
    Ok(Output::ok(text))
}

// ---------------------------------------------------------------- qchar / tq

fn fundamental(cd: &CartanDatum, node: usize, anchor: &str, shift: i64) -> CliResult<WitnessedCharacter> {
    cd.check_node(node).map_err(usage)?;
    fm_fundamental(cd, node, &spectral_point(anchor, shift), FMConfig::default()).map_err(usage)
}

/// Compare `got` against a golden file; JSON files compare as values,
/// LaTeX files through `normalize`.
fn compare_golden(path: &Path, got_json: &Value, got_latex: &str, normalize: fn(&str) -> String) -> CliResult<()> {
    let expected = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {}", path.display(), e)))?;
    let is_json = path.extension().is_some_and(|x| x == "json");
    let (exp, got) = if is_json {
        let exp: Value = serde_json::from_str(&expected).map_err(|e| CliError::Usage(format!("{}: {}", path.display(), e)))?;
        (pretty(&exp), pretty(got_json))
    } else {
        (normalize(expected.trim()), normalize(got_latex))
    };
    if exp == got {
        Ok(())
    } else {
        Err(CliError::Failed(format!("mismatch against {}\n--- expected\n{}\n+++ found\n{}", path.display(), exp, got)))
    }
}

pub struct ModuleArgs<'a> {
    pub label: &'a str,
    pub node: usize,
    pub anchor: &'a str,
    pub shift: i64,
}

pub fn qchar(m: &ModuleArgs, format: Format, expect: Option<&Path>) -> CliResult<Output> {
    let cd = cartan_datum(m.label)?;
    let w = fundamental(&cd, m.node, m.anchor, m.shift)?;
    let as_json = serde_json::to_value(&w.chi).expect("characters serialize");
    let latex = w.chi.to_latex();
    if let Some(p) = expect {
        compare_golden(p, &as_json, &latex, normalize_character_latex)?;
    }
    let text = match format {
        Format::Json => pretty(&as_json),
        Format::Latex => latex,
        Format::Text => format!("{} terms\n{}", w.chi.len(), latex),
    };
    Ok(Output::ok(text))
}

pub fn tq(m: &ModuleArgs, flavor: Flavor, format: Format, expect: Option<&Path>) -> CliResult<Output> {
    let cd = cartan_datum(m.label)?;
    let w = fundamental(&cd, m.node, m.anchor, m.shift)?;
    let rel = tq_relation(&cd, &w.chi, flavor).map_err(usage)?;
    let verified = verify_tq(&cd, &rel, &w.chi).map_err(usage)?;
    let as_json = serde_json::to_value(rel.to_json()).expect("relations serialize");
    let latex = rel.to_latex();
    if let Some(p) = expect {
        compare_golden(p, &as_json, &latex, normalize_relation_latex)?;
    }
    let text = match format {
        Format::Json => pretty(&as_json),
        Format::Latex => latex,
        Format::Text => format!("{}\nidentity holds: {}", latex, verified),
    };
    Ok(Output { text, passed: verified })
}

/// Render a relation stored in the JSON schema as LaTeX.
pub fn tq_render(path: &Path) -> CliResult<Output> {
    let src = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {}", path.display(), e)))?;
    let j: TQRelationJson = serde_json::from_str(&src).map_err(|e| CliError::Usage(format!("{}: {}", path.display(), e)))?;
    let rel = TQRelation::from_json(&j).map_err(usage)?;
    Ok(Output::ok(rel.to_latex()))
}

// ---------------------------------------------------------------- spectra

pub fn spectra_template(m: &ModuleArgs, target: &str, lambda: &str, format: Format) -> CliResult<Output> {
    let cd = cartan_datum(m.label)?;
    let v = fundamental(&cd, m.node, "1", m.shift)?;
    let target = parse_monomial(target)?;
    check_monomial_nodes(&cd, &target)?;
    let data = TargetModuleData::new(target).map_err(usage)?;
    let lambda = parse_weight(lambda, cd.rank())?;
    let t = eigenvalue_template(&cd, &v, &data, &lambda).map_err(usage)?;
    let text = match format {
        Format::Json => pretty(&json!({
            "lambda": t.lambda.0,
            "ht": t.ht,
            "summands": t.summands.iter().map(|s| json!({
                "monomial": s.monomial,
                "coeff": s.coeff,
                "q_power": s.q_power().to_string(),
                "u": s.u_exp,
                "f": s.f_factors.iter().map(|(i, c, p)| json!({"i": i, "point": c.to_latex(), "power": p})).collect::<Vec<_>>(),
                "Q": s.q_factors.iter().map(|(i, c, p)| json!({"i": i, "point": c.to_latex(), "power": p})).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        })),
        Format::Latex | Format::Text => t.to_latex(),
    };
    Ok(Output::ok(text))
}

pub fn spectra_fratio(m: &ModuleArgs, target: &str, k: usize, format: Format) -> CliResult<Output> {
    let cd = cartan_datum(m.label)?;
    let v = fundamental(&cd, m.node, "1", m.shift)?;
    let target = parse_monomial(target)?;
    check_monomial_nodes(&cd, &target)?;
    let data = TargetModuleData::new(target).map_err(usage)?;
    let mut rows = Vec::new();
    let mut all_pass = true;
    for (mono, _) in v.chi.terms() {
        let w = v.witness(mono).ok_or_else(|| CliError::Usage("monomial without witness".into()))?;
        let (vexp, r) = f_ratio_rational(&cd, &data, w).map_err(usage)?;
        let tele = telescoping_check(&cd, &data, &v.highest, w, k).map_err(usage)?;
        all_pass &= tele.passed();
        rows.push((mono.clone(), vexp, r, tele.passed()));
    }
    let text = match format {
        Format::Json => pretty(&Value::Array(
            rows.iter()
                .map(|(m, vexp, r, ok)| json!({"monomial": m, "v_inverse_powers": vexp, "ratio": r.to_latex("z"), "telescopes": ok}))
                .collect(),
        )),
        Format::Latex | Format::Text => rows
            .iter()
            .map(|(m, vexp, r, ok)| {
                let vs: String = vexp
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e != 0)
                    .map(|(i, e)| format!("v_{{{}}}^{{{}}}", i + 1, -e))
                    .collect();
                let check = if format == Format::Text { format!("  [telescopes: {}]", ok) } else { String::new() };
                format!("{} \\mapsto {} {}{}", m.to_latex(), vs, r.to_latex("z"), check)
            })
            .collect::<Vec<_>>()
            .join("\n"),
    };
    Ok(Output { text, passed: all_pass })
}

pub fn spectra_fseries(label: &str, target: &str, node: usize, k: usize, format: Format) -> CliResult<Output> {
    let cd = cartan_datum(label)?;
    cd.check_node(node).map_err(usage)?;
    let target = parse_monomial(target)?;
    check_monomial_nodes(&cd, &target)?;
    let data = TargetModuleData::new(target).map_err(usage)?;
    let s = f_series(&quantum_cartan(&cd), &data, node, k);
    let text = match format {
        Format::Json => pretty(&series_json(&s)),
        Format::Latex | Format::Text => format!("f_{{{}}}(z) = {}", node, series_latex(&s, "z")),
    };
    Ok(Output::ok(text))
}

// ---------------------------------------------------------------- bethe

pub enum SystemSpec<'a> {
    Sl2 { sites: usize, lengths: &'a [usize], e: Option<i64>, m: usize },
    General { label: &'a str, targets: &'a [String], counts: &'a [usize] },
}

pub fn bethe_system(spec: &SystemSpec) -> CliResult<BetheSystem> {
    match spec {
        SystemSpec::Sl2 { sites, lengths, e, m } => {
            let lens: Vec<(usize, Option<i64>)> = match lengths.len() {
                1 => vec![(lengths[0], *e); *sites],
                n if n == *sites => lengths.iter().map(|&r| (r, *e)).collect(),
                n => return Err(CliError::Usage(format!("{} lengths given for {} sites", n, sites))),
            };
            if lens.iter().any(|&(r, _)| r == 0) {
                return Err(CliError::Usage("KR lengths must be positive".into()));
            }
            BetheSystem::sl2_kr(&lens, *m).map_err(usage)
        }
        SystemSpec::General { label, targets, counts } => {
            let cd = cartan_datum(label)?;
            let factors = targets
                .iter()
                .map(|t| {
                    let m = parse_monomial(t)?;
                    check_monomial_nodes(&cd, &m)?;
                    TargetModuleData::new(m).map_err(usage)
                })
                .collect::<CliResult<Vec<_>>>()?;
            BetheSystem::new(&cd, factors, counts.to_vec()).map_err(usage)
        }
    }
}

pub fn bethe_gen(spec: &SystemSpec, format: Format) -> CliResult<Output> {
    let sys = bethe_system(spec)?;
    let eqs = sys.equations();
    let text = match format {
        Format::Json => pretty(&json!({
            "type": sys.cartan().label(),
            "counts": sys.counts(),
            "equations": eqs.iter().map(|e| json!({
                "node": e.node,
                "index": e.index,
                "latex": sys.equation_latex(e),
            })).collect::<Vec<_>>(),
        })),
        Format::Latex | Format::Text => eqs.iter().map(|e| sys.equation_latex(e)).collect::<Vec<_>>().join("\n"),
    };
    Ok(Output::ok(text))
}

pub struct NumericArgs {
    pub seed: u64,
    pub q0: Option<Complex64>,
    pub v0: Vec<Complex64>,
    pub nontwisted: bool,
}

pub fn eval_point(seed: u64, q0: Option<Complex64>) -> CliResult<EvalPoint> {
    match q0 {
        Some(q) => {
            let mut p = EvalPoint::new(q).map_err(usage)?;
            p.seed = Some(seed);
            Ok(p)
        }
        None => Ok(EvalPoint::random(seed)),
    }
}

#[derive(Serialize)]
struct SolutionRecord {
    roots: Vec<Vec<[f64; 2]>>,
    residuals: Vec<f64>,
    seed: u64,
}

pub fn bethe_solve(spec: &SystemSpec, num: &NumericArgs, starts: usize, format: Format) -> CliResult<Output> {
    let sys = bethe_system(spec)?;
    let cd = sys.cartan().clone();
    let point = eval_point(num.seed, num.q0)?;
    let v: Vec<Complex64> = if num.nontwisted {
        if !num.v0.is_empty() {
            return Err(CliError::Usage("--preset nontwisted fixes v; drop --v0".into()));
        }
        cd.nodes().map(|i| point.q.powi(2 * cd.d(i) as i32)).collect()
    } else {
        match num.v0.len() {
            0 => return Err(CliError::Usage("bethe solve needs --v0 or --preset nontwisted".into())),
            1 => vec![num.v0[0]; cd.rank()],
            n if n == cd.rank() => num.v0.clone(),
            n => return Err(CliError::Usage(format!("{} twist values for rank {}", n, cd.rank()))),
        }
    };
    let cfg = NewtonConfig { seed: num.seed, starts, ..NewtonConfig::default() };
    let sols = sys.solve_numeric(&point, &v, &cfg).map_err(usage)?;
    let numeric = sys.numeric(&point, &v).map_err(usage)?;
    let records: Vec<SolutionRecord> = sols
        .iter()
        .map(|s| {
            let flat: Vec<Complex64> = s.roots.iter().flatten().copied().collect();
            SolutionRecord {
                roots: s.roots.iter().map(|r| r.iter().map(|c| [c.re, c.im]).collect()).collect(),
                residuals: numeric.eqs.iter().map(|e| e.ratio_residual(&flat)).collect(),
                seed: num.seed,
            }
        })
        .collect();
    let passed = records.iter().all(|r| r.residuals.iter().all(|&x| x < cfg.accept));
    let text = match format {
        Format::Json => to_json_text(&json!({
            "q0": [point.q.re, point.q.im],
            "v0": v.iter().map(|c| [c.re, c.im]).collect::<Vec<_>>(),
            "seed": num.seed,
            "solutions": records,
        })),
        Format::Latex | Format::Text => {
            let mut out = format!("q0 = {}  seed = {}  solutions = {}\n", point.q, num.seed, records.len());
            for (k, r) in records.iter().enumerate() {
                let worst = r.residuals.iter().copied().fold(0.0, f64::max);
                out.push_str(&format!("#{}: {:?}  max residual {:.2e}\n", k + 1, r.roots, worst));
            }
            out
        }
    };
    Ok(Output { text, passed })
}

// ---------------------------------------------------------------- verify

#[derive(Serialize)]
pub struct VerifyReport {
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q0: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub u0: Option<[f64; 2]>,
    pub checks: Vec<CheckReport>,
    pub passed: bool,
}

impl VerifyReport {
    pub fn new(seed: u64, q0: Option<Complex64>, u0: Option<Complex64>, checks: Vec<CheckReport>) -> Self {
        let passed = checks.iter().all(CheckReport::passed);
        VerifyReport { seed, q0: q0.map(|c| [c.re, c.im]), u0: u0.map(|c| [c.re, c.im]), checks, passed }
    }

    pub fn into_output(self) -> Output {
        let passed = self.passed;
        Output { text: to_json_text(&self), passed }
    }
}

pub struct Sl2Args {
    pub what: Vec<Sl2Check>,
    pub n: usize,
    pub kv: usize,
    pub k: usize,
    pub seed: u64,
    pub q0: Option<Complex64>,
    pub u0: Option<Complex64>,
    pub timings: bool,
}

pub fn verify_sl2(a: &Sl2Args) -> CliResult<VerifyReport> {
    if a.n > 6 {
        return Err(CliError::Usage("N above 6 is not supported".into()));
    }
    let mut p = Sl2Params::from_seed(a.n, a.kv, a.k, a.seed);
    p.point = eval_point(a.seed, a.q0.or(Some(p.point.q)))?;
    if let Some(u) = a.u0 {
        p.u = u;
    }
    p.timings = a.timings;
    let checks = a.what.iter().flat_map(|w| harness::verify_sl2(*w, &p)).collect();
    Ok(VerifyReport::new(a.seed, Some(p.point.q), Some(p.u), checks))
}

pub fn verify_suite(cfg: &HarnessConfig, prefixes: &[String]) -> CliResult<VerifyReport> {
    let ids = harness::check_ids();
    if let Some(bad) = prefixes.iter().find(|p| !ids.iter().any(|id| id.starts_with(p.as_str()))) {
        return Err(CliError::Usage(format!("no check matches `{}`", bad)));
    }
    let refs: Vec<&str> = prefixes.iter().map(String::as_str).collect();
    Ok(VerifyReport::new(cfg.seed, None, None, harness::run_suite(cfg, &refs)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monomial_syntax() {
        let m = parse_monomial("1@-1, 2@0^2").unwrap();
        assert_eq!(m, Monomial::from_factors([(1, SpectralPoint::q_pow(-1), 1), (2, SpectralPoint::q_pow(0), 2)]));
        assert!(parse_monomial("1-1").is_err());
        assert!(parse_monomial("").is_err());
    }

    #[test]
    fn weight_arity() {
        assert!(parse_weight("1,0", 2).is_ok());
        assert!(parse_weight("1", 2).is_err());
    }

    #[test]
    fn single_root_equation() {
        let out = bethe_gen(&SystemSpec::Sl2 { sites: 1, lengths: &[1], e: None, m: 1 }, Format::Latex).unwrap();
        assert_eq!(out.text, "v q \\frac{w_{1} - q^{-2}}{w_{1} - 1} = 1");
    }
}
