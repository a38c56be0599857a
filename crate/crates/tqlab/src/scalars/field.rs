//! A minimal field interface shared by the exact scalar types, with dense
//! univariate polynomials and rational functions over any such field.

use std::fmt;

use num_rational::Rational64;
use num_traits::{One, Zero};

use super::qrat::QRat;
use super::ScalarError;

pub trait Field: Clone + PartialEq + fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn inv(&self) -> Result<Self, ScalarError>;

    fn div(&self, o: &Self) -> Result<Self, ScalarError> {
        Ok(self.mul(&o.inv()?))
    }

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    fn from_i64(n: i64) -> Self {
        let mut acc = Self::zero();
        let one = Self::one();
        let step = if n < 0 { one.neg() } else { one };
        for _ in 0..n.unsigned_abs() {
            acc = acc.add(&step);
        }
        acc
    }
}

impl Field for QRat {
    fn zero() -> Self {
        QRat::zero()
    }
    fn one() -> Self {
        QRat::one()
    }
    fn is_zero(&self) -> bool {
        QRat::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        QRat::neg(self)
    }
    fn inv(&self) -> Result<Self, ScalarError> {
        QRat::inv(self)
    }
    fn is_one(&self) -> bool {
        QRat::is_one(self)
    }
    fn from_i64(n: i64) -> Self {
        QRat::from_int(n)
    }
}

impl Field for Rational64 {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Result<Self, ScalarError> {
        if Zero::is_zero(self) {
            Err(ScalarError::DivisionByZero)
        } else {
            Ok(self.recip())
        }
    }
    fn from_i64(n: i64) -> Self {
        Rational64::from_integer(n)
    }
}

// ---------------------------------------------------------------------------

/// Dense polynomial `c[0] + c[1] x + ...` over a field, trimmed.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct UPoly<F: Field> {
    c: Vec<F>,
}

impl<F: Field> UPoly<F> {
    pub fn zero() -> Self {
        UPoly { c: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(F::one())
    }

    pub fn constant(x: F) -> Self {
        Self::from_coeffs(vec![x])
    }

    /// The variable `x`.
    pub fn x() -> Self {
        Self::from_coeffs(vec![F::zero(), F::one()])
    }

    /// `a + b x`.
    pub fn linear(a: F, b: F) -> Self {
        Self::from_coeffs(vec![a, b])
    }

    pub fn from_coeffs(mut c: Vec<F>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        UPoly { c }
    }

    pub fn coeffs(&self) -> &[F] {
        &self.c
    }

    /// Coefficient of `x^k` (zero beyond the degree).
    pub fn coeff(&self, k: usize) -> F {
        self.c.get(k).cloned().unwrap_or_else(F::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        if self.c.is_empty() {
            None
        } else {
            Some(self.c.len() - 1)
        }
    }

    pub fn lc(&self) -> Option<&F> {
        self.c.last()
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        Self::from_coeffs((0..n).map(|k| self.coeff(k).add(&o.coeff(k))).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        Self::from_coeffs((0..n).map(|k| self.coeff(k).sub(&o.coeff(k))).collect())
    }

    pub fn neg(&self) -> Self {
        UPoly { c: self.c.iter().map(|x| x.neg()).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut c = vec![F::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                if !b.is_zero() {
                    c[i + j] = c[i + j].add(&a.mul(b));
                }
            }
        }
        Self::from_coeffs(c)
    }

    pub fn scale(&self, s: &F) -> Self {
        Self::from_coeffs(self.c.iter().map(|x| x.mul(s)).collect())
    }

    pub fn eval(&self, x: &F) -> F {
        self.c.iter().rev().fold(F::zero(), |acc, c| acc.mul(x).add(c))
    }

    /// Substitute `x -> s x`.
    pub fn scale_var(&self, s: &F) -> Self {
        let mut p = F::one();
        let mut out = Vec::with_capacity(self.c.len());
        for c in &self.c {
            out.push(c.mul(&p));
            p = p.mul(s);
        }
        Self::from_coeffs(out)
    }

    pub fn derivative(&self) -> Self {
        Self::from_coeffs(self.c.iter().enumerate().skip(1).map(|(k, c)| c.mul(&F::from_i64(k as i64))).collect())
    }

    /// Euclidean division `(quotient, remainder)`.
    pub fn div_rem(&self, d: &Self) -> Result<(Self, Self), ScalarError> {
        let dl = d.lc().ok_or(ScalarError::DivisionByZero)?;
        let inv = dl.inv()?;
        let mut r = self.c.clone();
        if r.len() < d.c.len() {
            return Ok((Self::zero(), self.clone()));
        }
        let mut q = vec![F::zero(); r.len() - d.c.len() + 1];
        for k in (0..q.len()).rev() {
            let top = r[k + d.c.len() - 1].clone();
            if top.is_zero() {
                continue;
            }
            let qk = top.mul(&inv);
            for (i, dc) in d.c.iter().enumerate() {
                r[k + i] = r[k + i].sub(&qk.mul(dc));
            }
            q[k] = qk;
        }
        Ok((Self::from_coeffs(q), Self::from_coeffs(r)))
    }

    /// Monic greatest common divisor (zero when both inputs vanish).
    pub fn gcd(a: &Self, b: &Self) -> Self {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        match a.lc() {
            Some(l) => {
                let inv = l.inv().expect("nonzero leading coefficient");
                a.scale(&inv)
            }
            None => a,
        }
    }

    /// Lowest index carrying a nonzero coefficient.
    pub fn low_order(&self) -> usize {
        self.c.iter().position(|x| !x.is_zero()).unwrap_or(0)
    }
}

impl<F: Field> fmt::Debug for UPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UPoly{:?}", self.c)
    }
}

// ---------------------------------------------------------------------------

/// Reduced quotient of two polynomials over `F`. The denominator is
/// normalized so that its lowest nonzero coefficient is 1.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFn<F: Field> {
    num: UPoly<F>,
    den: UPoly<F>,
}

impl<F: Field> RatFn<F> {
    pub fn new(num: UPoly<F>, den: UPoly<F>) -> Result<Self, ScalarError> {
        if den.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Self::from_poly(UPoly::zero()));
        }
        let g = UPoly::gcd(&num, &den);
        let (num, den) = if g.degree() == Some(0) {
            (num, den)
        } else {
            (num.div_rem(&g)?.0, den.div_rem(&g)?.0)
        };
        let low = den.coeff(den.low_order()).inv()?;
        Ok(RatFn { num: num.scale(&low), den: den.scale(&low) })
    }

    pub fn from_poly(p: UPoly<F>) -> Self {
        RatFn { num: p, den: UPoly::one() }
    }

    pub fn constant(c: F) -> Self {
        Self::from_poly(UPoly::constant(c))
    }

    pub fn num(&self) -> &UPoly<F> {
        &self.num
    }

    pub fn den(&self) -> &UPoly<F> {
        &self.den
    }

    pub fn eval(&self, x: &F) -> Result<F, ScalarError> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return Err(ScalarError::DenominatorVanishes);
        }
        self.num.eval(x).div(&d)
    }

    /// Substitute `x -> s x`.
    pub fn scale_var(&self, s: &F) -> Result<Self, ScalarError> {
        Self::new(self.num.scale_var(s), self.den.scale_var(s))
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.degree() == Some(0)
    }
}

impl<F: Field> Field for RatFn<F> {
    fn zero() -> Self {
        Self::from_poly(UPoly::zero())
    }
    fn one() -> Self {
        Self::from_poly(UPoly::one())
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn add(&self, o: &Self) -> Self {
        if self.den == o.den {
            return Self::new(self.num.add(&o.num), self.den.clone()).unwrap();
        }
        Self::new(self.num.mul(&o.den).add(&o.num.mul(&self.den)), self.den.mul(&o.den)).unwrap()
    }
    fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }
    fn mul(&self, o: &Self) -> Self {
        Self::new(self.num.mul(&o.num), self.den.mul(&o.den)).unwrap()
    }
    fn neg(&self) -> Self {
        RatFn { num: self.num.neg(), den: self.den.clone() }
    }
    fn inv(&self) -> Result<Self, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Self::new(self.den.clone(), self.num.clone())
    }
    fn from_i64(n: i64) -> Self {
        Self::constant(F::from_i64(n))
    }
}

impl<F: Field> fmt::Debug for RatFn<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?})/({:?})", self.num, self.den)
    }
}

impl RatFn<QRat> {
    /// Human-readable form in the variable `var`.
    pub fn display(&self, var: &str) -> String {
        let p = |u: &UPoly<QRat>| poly_string(u, var, false);
        if self.is_polynomial() && self.den.coeff(0).is_one() {
            p(&self.num)
        } else {
            format!("({})/({})", p(&self.num), p(&self.den))
        }
    }

    pub fn to_latex(&self, var: &str) -> String {
        let p = |u: &UPoly<QRat>| poly_string(u, var, true);
        if self.is_polynomial() && self.den.coeff(0).is_one() {
            p(&self.num)
        } else {
            format!("\\frac{{{}}}{{{}}}", p(&self.num), p(&self.den))
        }
    }
}

/// Render a polynomial over `QRat`, wrapping non-monomial coefficients.
pub fn poly_string(u: &UPoly<QRat>, var: &str, latex: bool) -> String {
    if u.is_zero() {
        return "0".into();
    }
    let mut parts: Vec<String> = Vec::new();
    for (k, c) in u.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let cs = if latex { c.to_latex() } else { c.to_string() };
        let simple = c.is_monomial();
        let pow = match k {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{}^{}", var, if latex { format!("{{{}}}", k) } else { k.to_string() }),
        };
        let term = if k == 0 {
            cs
        } else if c.is_one() {
            pow
        } else if (-c.clone()).is_one() {
            format!("-{}", pow)
        } else if simple {
            format!("{}{}{}", cs, if latex { "" } else { "*" }, pow)
        } else {
            format!("({}){}{}", cs, if latex { "" } else { "*" }, pow)
        };
        parts.push(term);
    }
    let mut out = String::new();
    for (i, t) in parts.iter().enumerate() {
        if i == 0 {
            out.push_str(t);
        } else if let Some(rest) = t.strip_prefix('-') {
            out.push_str(" - ");
            out.push_str(rest);
        } else {
            out.push_str(" + ");
            out.push_str(t);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratfn_reduces() {
        let q = QRat::q();
        // (x - q)(x + 1) / (x - q)
        let a = UPoly::linear(q.neg(), QRat::one());
        let b = UPoly::linear(QRat::one(), QRat::one());
        let r = RatFn::new(a.mul(&b), a.clone()).unwrap();
        assert!(r.is_polynomial());
        assert_eq!(r, RatFn::from_poly(b));
    }

    #[test]
    fn ratfn_field_ops() {
        let x = RatFn::<QRat>::from_poly(UPoly::x());
        let one = RatFn::<QRat>::one();
        let inv = one.sub(&x).inv().unwrap();
        let back = inv.mul(&one.sub(&x));
        assert!(back.is_one());
    }
}
