//! Execute a scenario file and assemble its JSON report.

use std::path::Path;

use num_complex::Complex64;
use serde::Serialize;
use tqlab::harness::{CheckReport, HarnessConfig, Status, Tolerance, EXACT};

use crate::commands::{self, CliError, CliResult, ModuleArgs, NumericArgs, Output, Sl2Args, SystemSpec};
use crate::scenario::{load_scenario, CommandKind, Preset, Scenario};

#[derive(Serialize)]
struct ScenarioReport<'a> {
    scenario: &'a Scenario,
    #[serde(skip_serializing_if = "Option::is_none")]
    output: Option<String>,
    checks: Vec<CheckReport>,
    passed: bool,
}

fn exact_report(id: &str, anchor: &str, ok: bool, detail: Option<String>) -> CheckReport {
    CheckReport {
        check_id: id.to_string(),
        anchor: anchor.to_string(),
        status: if ok { Status::Pass } else { Status::Fail },
        tolerance: EXACT,
        residual: None,
        runtime_ms: None,
        detail,
    }
}

/// Turn a command result into a check: usage errors propagate, a failed
/// comparison becomes a failing check carrying the diff.
fn as_check(id: &str, anchor: &str, r: CliResult<Output>) -> CliResult<(Option<String>, CheckReport)> {
    match r {
        Ok(out) => Ok((Some(out.text), exact_report(id, anchor, out.passed, None))),
        Err(CliError::Failed(diff)) => Ok((None, exact_report(id, anchor, false, Some(diff)))),
        Err(e) => Err(e),
    }
}

fn cplx(x: Option<[f64; 2]>) -> Option<Complex64> {
    x.map(|[re, im]| Complex64::new(re, im))
}

pub fn run_scenario(s: &Scenario, base: &Path, timings: bool) -> CliResult<(Option<String>, Vec<CheckReport>)> {
    let module = ModuleArgs { label: &s.cartan_type, node: s.node, anchor: &s.anchor, shift: s.shift };
    let expect = s.expect.as_ref().map(|p| base.join(p));
    let nontwisted = s.preset == Some(Preset::Nontwisted);
    match s.command {
        CommandKind::Suite => {
            let cfg = HarnessConfig { seed: s.seed, k: s.k, kv: s.kv, m: s.m, timings };
            let report = commands::verify_suite(&cfg, &s.checks)?;
            Ok((None, report.checks))
        }
        CommandKind::VerifySl2 => {
            let q0 = cplx(s.q0);
            // the untwisted chain has v = u^2 = q^2
            let u0 = if nontwisted { Some(commands::eval_point(s.seed, q0)?.q) } else { cplx(s.u0) };
            let args = Sl2Args { what: s.what.clone(), n: s.n, kv: s.kv, k: s.k.min(10), seed: s.seed, q0, u0, timings };
            Ok((None, commands::verify_sl2(&args)?.checks))
        }
        CommandKind::Tq => {
            let flavor = tqlab::grring::Flavor::LPlus;
            let (text, check) = as_check("tq-identity", "tq-relation", commands::tq(&module, flavor, s.format, expect.as_deref()))?;
            Ok((text, vec![check]))
        }
        CommandKind::Qchar => {
            let (text, check) = as_check("qchar-golden", "q-character", commands::qchar(&module, s.format, expect.as_deref()))?;
            Ok((text, vec![check]))
        }
        CommandKind::Cartan => {
            let out = commands::cartan_show(&s.cartan_type, s.format)?;
            let cd = commands::cartan_datum(&s.cartan_type)?;
            let qc = tqlab::cartan::quantum_cartan(&cd);
            let ok = qc.cq.mul(&qc.cq_inv).is_identity();
            Ok((Some(out.text), vec![exact_report("quantum-cartan-inverse", "quantum-cartan", ok, None)]))
        }
        CommandKind::BetheSolve => {
            let lengths = [s.r];
            let spec = SystemSpec::Sl2 { sites: s.n, lengths: &lengths, e: None, m: 1 };
            let num = NumericArgs { seed: s.seed, q0: cplx(s.q0), v0: cplx(s.v0).into_iter().collect(), nontwisted };
            let out = commands::bethe_solve(&spec, &num, s.starts, s.format)?;
            let check = CheckReport {
                check_id: "bethe-residuals".into(),
                anchor: "bethe-equations".into(),
                status: if out.passed { Status::Pass } else { Status::Fail },
                tolerance: Tolerance::Bound(tqlab::bethe::NewtonConfig::default().accept),
                residual: None,
                runtime_ms: None,
                detail: None,
            };
            Ok((Some(out.text), vec![check]))
        }
    }
}

pub fn run_file(path: &Path, out: Option<&Path>, default_seed: u64, timings: bool) -> CliResult<Output> {
    let s = load_scenario(path, default_seed).map_err(commands::usage)?;
    let base = path.parent().unwrap_or(Path::new("."));
    let (output, checks) = run_scenario(&s, base, timings)?;
    let passed = checks.iter().all(CheckReport::passed);
    let report = ScenarioReport { scenario: &s, output, checks, passed };
    let text = serde_json::to_string_pretty(&report).expect("reports serialize");
    match out {
        Some(p) => {
            std::fs::write(p, format!("{}\n", text)).map_err(|e| CliError::Usage(format!("cannot write {}: {}", p.display(), e)))?;
            Ok(Output { text: format!("report written to {} ({})", p.display(), if passed { "pass" } else { "fail" }), passed })
        }
        None => Ok(Output { text, passed }),
    }
}
