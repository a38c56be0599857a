//! Scenario files: TOML documents describing one run of the tool.

use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;
use tqlab::cartan::CartanDatum;
use tqlab::harness::Sl2Check;

pub const DEFAULT_K: usize = 12;
pub const DEFAULT_KV: usize = 8;
pub const DEFAULT_M: usize = 16;

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("{path}:{line}:{column}: {message}")]
    Parse { path: String, line: usize, column: usize, message: String },
    #[error("{path}: {message}")]
    Invalid { path: String, message: String },
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CommandKind {
    Suite,
    VerifySl2,
    Tq,
    Qchar,
    Cartan,
    BetheSolve,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Latex,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Preset {
    Nontwisted,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTruncation {
    #[serde(rename = "K")]
    k: Option<usize>,
    #[serde(rename = "Kv")]
    kv: Option<usize>,
    #[serde(rename = "M")]
    m: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawNumeric {
    seed: Option<u64>,
    q0: Option<String>,
    v0: Option<String>,
    u0: Option<String>,
    preset: Option<Preset>,
    starts: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    command: CommandKind,
    #[serde(rename = "type")]
    cartan_type: Option<String>,
    node: Option<usize>,
    anchor: Option<String>,
    shift: Option<i64>,
    format: Option<Format>,
    checks: Option<Vec<String>>,
    what: Option<Vec<Sl2Check>>,
    #[serde(rename = "N")]
    n: Option<usize>,
    #[serde(rename = "R")]
    r: Option<usize>,
    expect: Option<PathBuf>,
    truncation: Option<RawTruncation>,
    numeric: Option<RawNumeric>,
}

/// A validated scenario with every default filled in.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Scenario {
    pub command: CommandKind,
    #[serde(rename = "type")]
    pub cartan_type: String,
    pub node: usize,
    pub anchor: String,
    pub shift: i64,
    pub format: Format,
    pub checks: Vec<String>,
    pub what: Vec<Sl2Check>,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "R")]
    pub r: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expect: Option<PathBuf>,
    #[serde(rename = "K")]
    pub k: usize,
    #[serde(rename = "Kv")]
    pub kv: usize,
    #[serde(rename = "M")]
    pub m: usize,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q0: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub v0: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub u0: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub preset: Option<Preset>,
    /// Substitutions applied by a preset, recorded as `(variable, value)`.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub substitutions: Vec<(String, String)>,
    pub starts: usize,
}

/// Parse `"re"` or `"re,im"`.
pub fn parse_complex(s: &str) -> Result<Complex64, String> {
    let bad = || format!("bad complex number `{}` (expected `re` or `re,im`)", s);
    let mut parts = s.split(',').map(|p| p.trim().parse::<f64>());
    let re = parts.next().ok_or_else(bad)?.map_err(|_| bad())?;
    let im = match parts.next() {
        Some(x) => x.map_err(|_| bad())?,
        None => 0.0,
    };
    if parts.next().is_some() {
        return Err(bad());
    }
    Ok(Complex64::new(re, im))
}

fn line_col(src: &str, offset: usize) -> (usize, usize) {
    let before = &src[..offset.min(src.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rfind('\n').map_or(before.len(), |p| before.len() - p - 1) + 1;
    (line, column)
}

pub fn load_scenario(path: &Path, default_seed: u64) -> Result<Scenario, ScenarioError> {
    let name = path.display().to_string();
    let src = std::fs::read_to_string(path).map_err(|source| ScenarioError::Io { path: name.clone(), source })?;
    parse_scenario(&src, &name, default_seed)
}

pub fn parse_scenario(src: &str, name: &str, default_seed: u64) -> Result<Scenario, ScenarioError> {
    let raw: RawScenario = toml::from_str(src).map_err(|err| {
        let (line, column) = err.span().map_or((1, 1), |s| line_col(src, s.start));
        ScenarioError::Parse { path: name.to_string(), line, column, message: err.message().to_string() }
    })?;
    let invalid = |message: String| ScenarioError::Invalid { path: name.to_string(), message };

    let cartan_type = raw.cartan_type.unwrap_or_else(|| "A1".to_string());
    let cd = CartanDatum::from_label(&cartan_type).map_err(|e| invalid(e.to_string()))?;
    let node = raw.node.unwrap_or(1);
    cd.check_node(node).map_err(|e| invalid(e.to_string()))?;

    let trunc = raw.truncation.unwrap_or(RawTruncation { k: None, kv: None, m: None });
    let num = raw.numeric.unwrap_or(RawNumeric { seed: None, q0: None, v0: None, u0: None, preset: None, starts: None });
    let cplx = |s: Option<String>| -> Result<Option<[f64; 2]>, ScenarioError> {
        s.map(|s| parse_complex(&s).map(|c| [c.re, c.im]).map_err(invalid)).transpose()
    };
    let q0 = cplx(num.q0)?;
    let v0 = cplx(num.v0)?;
    let u0 = cplx(num.u0)?;

    let mut substitutions = Vec::new();
    if let Some(Preset::Nontwisted) = num.preset {
        if v0.is_some() || u0.is_some() {
            return Err(invalid("preset `nontwisted` fixes the twist; drop v0 and u0".into()));
        }
        for i in cd.nodes() {
            let qi = if cd.d(i) == 1 { "q^{2}".to_string() } else { format!("q^{{{}}}", 2 * cd.d(i)) };
            substitutions.push((format!("v_{}", i), qi));
        }
    }

    let command = raw.command;
    let checks = raw.checks.unwrap_or_default();
    if command == CommandKind::Suite {
        let ids = tqlab::harness::check_ids();
        if let Some(bad) = checks.iter().find(|p| !ids.iter().any(|id| id.starts_with(p.as_str()))) {
            return Err(invalid(format!("no check matches `{}`", bad)));
        }
    }
    let what = raw.what.unwrap_or_else(|| vec![Sl2Check::Transfer, Sl2Check::Ti, Sl2Check::Baxter, Sl2Check::Degree]);
    if command == CommandKind::VerifySl2 && cartan_type != "A1" {
        return Err(invalid("verify-sl2 needs type A1".into()));
    }
    let anchor = raw.anchor.unwrap_or_else(|| "1".to_string());
    if anchor.is_empty() || anchor.contains(|c: char| c.is_whitespace()) {
        return Err(invalid(format!("bad anchor `{}`", anchor)));
    }

    Ok(Scenario {
        command,
        cartan_type: cd.label(),
        node,
        anchor,
        shift: raw.shift.unwrap_or(0),
        format: raw.format.unwrap_or_default(),
        checks,
        what,
        n: raw.n.unwrap_or(1),
        r: raw.r.unwrap_or(1),
        expect: raw.expect,
        k: trunc.k.unwrap_or(DEFAULT_K),
        kv: trunc.kv.unwrap_or(DEFAULT_KV),
        m: trunc.m.unwrap_or(DEFAULT_M),
        seed: num.seed.unwrap_or(default_seed),
        q0,
        v0,
        u0,
        preset: num.preset,
        substitutions,
        starts: num.starts.unwrap_or(200),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_filled() {
        let s = parse_scenario("command = \"tq\"\ntype = \"A2\"\nnode = 1\n", "t", 5).unwrap();
        assert_eq!((s.k, s.kv, s.m, s.seed), (12, 8, 16, 5));
        assert_eq!(s.cartan_type, "A2");
    }

    #[test]
    fn nontwisted_records_substitution() {
        let s = parse_scenario("command = \"cartan\"\ntype = \"B2\"\n[numeric]\npreset = \"nontwisted\"\n", "t", 0).unwrap();
        assert_eq!(s.substitutions, vec![("v_1".to_string(), "q^{4}".to_string()), ("v_2".to_string(), "q^{2}".to_string())]);
    }

    #[test]
    fn unknown_key_reports_position() {
        let err = parse_scenario("command = \"tq\"\ncolour = 3\n", "t", 0).unwrap_err();
        match err {
            ScenarioError::Parse { line, column, .. } => assert_eq!((line, column), (2, 1)),
            other => panic!("{other}"),
        }
    }

    #[test]
    fn complex_forms() {
        assert_eq!(parse_complex("1.5").unwrap(), Complex64::new(1.5, 0.0));
        assert_eq!(parse_complex("1, -2").unwrap(), Complex64::new(1.0, -2.0));
        assert!(parse_complex("x").is_err());
    }
}
