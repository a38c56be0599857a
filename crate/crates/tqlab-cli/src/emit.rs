//! Text renderers shared by the subcommands.

use serde_json::{json, Value};
use tqlab::linalg::Mat;
use tqlab::scalars::{QRat, QSeries};

pub fn matrix_latex<T>(m: &Mat<T>, entry: impl Fn(&T) -> String) -> String
where
    T: tqlab::scalars::Field,
{
    let rows: Vec<String> = (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| entry(m.get(i, j))).collect::<Vec<_>>().join(" & "))
        .collect();
    format!("\\begin{{pmatrix}} {} \\end{{pmatrix}}", rows.join(" \\\\ "))
}

pub fn qmatrix_json(m: &Mat<QRat>) -> Value {
    Value::Array((0..m.rows()).map(|i| json!((0..m.cols()).map(|j| m.get(i, j).to_string()).collect::<Vec<_>>())).collect())
}

pub fn series_json(s: &QSeries) -> Value {
    json!({ "order": s.order(), "coeffs": s.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>() })
}

pub fn series_latex(s: &QSeries, var: &str) -> String {
    let mut parts = Vec::new();
    for (k, c) in s.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let body = c.to_latex();
        let term = match k {
            0 => body,
            1 if c.is_one() => var.to_string(),
            1 => format!("\\left({}\\right) {}", body, var),
            _ if c.is_one() => format!("{}^{{{}}}", var, k),
            _ => format!("\\left({}\\right) {}^{{{}}}", body, var, k),
        };
        parts.push(term);
    }
    if parts.is_empty() {
        parts.push("0".into());
    }
    format!("{} + O({}^{{{}}})", parts.join(" + "), var, s.order() + 1)
}

pub fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("JSON values always serialize")
}
