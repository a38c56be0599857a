//! Exact scalar tower: integer polynomials, rational functions of `q` with
//! rational exponents, polynomials and rational functions over those,
//! truncated power series, and numeric evaluation at a complex `q`.

mod field;
mod numeric;
mod qrat;
mod serial;
mod series;
mod zpoly;

pub use field::{poly_string, Field, RatFn, UPoly};
pub use numeric::{
    cpoly_eval, cseries_inv, cseries_mul, cseries_scale_var, eval_num, eval_qrat, eval_ratfn, eval_series, eval_upoly, rel_err, EvalPoint, NumScalar,
    ROOT_OF_UNITY_ORDER,
};
pub use qrat::{fmt_q_power, QRat};
pub use serial::{parse_rational, rational_string, QRatJson};
pub use series::{rational_reconstruct, QSeries, Var};
pub use zpoly::ZPoly;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("series exponential needs a zero constant term")]
    NonzeroConstantTerm,
    #[error("series logarithm needs constant term 1")]
    ConstantTermNotOne,
    #[error("denominator vanishes at the evaluation point")]
    DenominatorVanishes,
    #[error("need at least {need} coefficients for reconstruction, have {have}")]
    InsufficientOrder { have: usize, need: usize },
    #[error("invalid evaluation point: {0}")]
    InvalidPoint(String),
    #[error("malformed scalar encoding: {0}")]
    Parse(String),
}
