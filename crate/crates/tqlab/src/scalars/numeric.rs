//! Numeric instantiation of the formal parameter `q` (and optionally the
//! twists) at a complex point, with double-precision evaluation.

use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::field::{RatFn, UPoly};
use super::qrat::QRat;
use super::series::QSeries;
use super::zpoly::ZPoly;
use super::ScalarError;

/// Largest order checked when rejecting roots of unity.
pub const ROOT_OF_UNITY_ORDER: u32 = 64;

/// A validated evaluation point `q = e^h` (principal branch) with an
/// optional twist value and the seed it was drawn from.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalPoint {
    pub q: Complex64,
    pub h: Complex64,
    pub v: Option<Complex64>,
    pub seed: Option<u64>,
}

impl EvalPoint {
    pub fn new(q: Complex64) -> Result<Self, ScalarError> {
        if q.norm() == 0.0 || !q.norm().is_finite() {
            return Err(ScalarError::InvalidPoint("q must be a finite nonzero number".into()));
        }
        let mut p = Complex64::new(1.0, 0.0);
        for k in 1..=ROOT_OF_UNITY_ORDER {
            p *= q;
            if (p - 1.0).norm() < 1e-9 {
                return Err(ScalarError::InvalidPoint(format!("q is a root of unity of order {}", k)));
            }
        }
        Ok(EvalPoint { q, h: q.ln(), v: None, seed: None })
    }

    pub fn with_v(mut self, v: Complex64) -> Self {
        self.v = Some(v);
        self
    }

    /// Draw `q` with `|q|` uniform in `[1.1, 1.4]` and a uniform argument.
    pub fn random(seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        loop {
            let r: f64 = rng.gen_range(1.1..1.4);
            let th: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
            if let Ok(mut p) = Self::new(Complex64::from_polar(r, th)) {
                p.seed = Some(seed);
                return p;
            }
        }
    }

    /// The non-twisted preset `v = q^2`.
    pub fn nontwisted(self) -> Self {
        let v = self.q * self.q;
        self.with_v(v)
    }

    /// `q^e` on the principal branch.
    pub fn q_pow(&self, e: f64) -> Complex64 {
        (self.h * e).exp()
    }
}

/// A numeric value tagged with the point it was computed at.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NumScalar {
    pub value: Complex64,
    pub at: EvalPoint,
}

fn horner(p: &ZPoly, t: Complex64) -> (Complex64, f64) {
    let mut acc = Complex64::zero();
    let mut scale = 0.0;
    let tn = t.norm();
    for c in p.coeffs().iter().rev() {
        let cf = c.to_f64().unwrap_or(f64::INFINITY);
        acc = acc * t + cf;
        scale = scale * tn + cf.abs();
    }
    (acc, scale)
}

/// Evaluate at `q = point.q`.
pub fn eval_qrat(x: &QRat, point: &EvalPoint) -> Result<Complex64, ScalarError> {
    let (num, den, shift, lat) = x.parts();
    if num.is_zero() {
        return Ok(Complex64::zero());
    }
    let t = (point.h / lat as f64).exp();
    let (n, _) = horner(num, t);
    let (d, dscale) = horner(den, t);
    if d.norm() <= 1e-13 * dscale {
        return Err(ScalarError::DenominatorVanishes);
    }
    Ok(n / d * (point.h * (shift as f64 / lat as f64)).exp())
}

pub fn eval_num(x: &QRat, point: &EvalPoint) -> Result<NumScalar, ScalarError> {
    Ok(NumScalar { value: eval_qrat(x, point)?, at: *point })
}

pub fn eval_series(s: &QSeries, point: &EvalPoint) -> Result<Vec<Complex64>, ScalarError> {
    s.coeffs().iter().map(|c| eval_qrat(c, point)).collect()
}

pub fn eval_upoly(p: &UPoly<QRat>, point: &EvalPoint) -> Result<Vec<Complex64>, ScalarError> {
    p.coeffs().iter().map(|c| eval_qrat(c, point)).collect()
}

/// Evaluate a rational function over `QRat` at `q = point.q`, `x = x0`.
pub fn eval_ratfn(r: &RatFn<QRat>, point: &EvalPoint, x0: Complex64) -> Result<Complex64, ScalarError> {
    let n = cpoly_eval(&eval_upoly(r.num(), point)?, x0);
    let dc = eval_upoly(r.den(), point)?;
    let d = cpoly_eval(&dc, x0);
    let scale: f64 = dc.iter().enumerate().map(|(k, c)| c.norm() * x0.norm().powi(k as i32)).sum();
    if d.norm() <= 1e-13 * scale {
        return Err(ScalarError::DenominatorVanishes);
    }
    Ok(n / d)
}

pub fn cpoly_eval(c: &[Complex64], x: Complex64) -> Complex64 {
    c.iter().rev().fold(Complex64::zero(), |acc, a| acc * x + a)
}

/// Relative distance `|a - b| / max(|a|, |b|, floor)`.
pub fn rel_err(a: Complex64, b: Complex64, floor: f64) -> f64 {
    (a - b).norm() / a.norm().max(b.norm()).max(floor)
}

/// Truncated product of two complex power series of the same length.
pub fn cseries_mul(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let n = a.len().min(b.len());
    let mut c = vec![Complex64::zero(); n];
    for (i, x) in a.iter().take(n).enumerate() {
        for (j, y) in b.iter().take(n - i).enumerate() {
            c[i + j] += x * y;
        }
    }
    c
}

/// Inverse of a complex power series with nonzero constant term.
pub fn cseries_inv(a: &[Complex64]) -> Result<Vec<Complex64>, ScalarError> {
    if a.is_empty() || a[0].norm() == 0.0 {
        return Err(ScalarError::DivisionByZero);
    }
    let mut b = vec![Complex64::zero(); a.len()];
    b[0] = 1.0 / a[0];
    for n in 1..a.len() {
        let s: Complex64 = (1..=n).map(|k| a[k] * b[n - k]).sum();
        b[n] = -s / a[0];
    }
    Ok(b)
}

/// `s(c z)`.
pub fn cseries_scale_var(a: &[Complex64], c: Complex64) -> Vec<Complex64> {
    let mut p = Complex64::new(1.0, 0.0);
    a.iter()
        .map(|x| {
            let y = x * p;
            p *= c;
            y
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_is_one() {
        let p = EvalPoint::random(7);
        assert!((eval_qrat(&QRat::one(), &p).unwrap() - 1.0).norm() < 1e-15);
    }

    #[test]
    fn q_plus_inverse_at_two() {
        let p = EvalPoint::new(Complex64::new(2.0, 0.0)).unwrap();
        let v = eval_qrat(&QRat::qint(2), &p).unwrap();
        assert!((v - 2.5).norm() < 1e-14);
    }

    #[test]
    fn roots_of_unity_rejected() {
        let w = Complex64::from_polar(1.0, std::f64::consts::TAU / 5.0);
        assert!(EvalPoint::new(w).is_err());
        assert!(EvalPoint::new(Complex64::zero()).is_err());
    }

    #[test]
    fn random_point_in_annulus() {
        for s in 0..20 {
            let p = EvalPoint::random(s);
            assert!((1.1..=1.4).contains(&p.q.norm()));
        }
    }
}
